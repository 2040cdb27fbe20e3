//! Stanley-Thomas words of rectangle labelings, their rotation under
//! rowmotion, and fiber homomesy.

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poset::{product_of_chains, FinitePoset, Grid};
use crate::realm::{Realm, TropicalRealm};
use crate::rng::{derive_seed, rng_from_seed};
use crate::transfer::{antichain_rowmotion, polytope_membership, Labeling, Mode, Polytope};

/// An `(a+b)`-tuple extended cyclically: `ST(j) = ST(j mod a+b)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StWord<V>(Vec<V>);

impl<V> StWord<V> {
    pub fn new(entries: Vec<V>) -> Self {
        assert!(!entries.is_empty(), "a Stanley-Thomas word is never empty");
        Self(entries)
    }

    pub fn entries(&self) -> &[V] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Entry `i` (1-based), for any integer `i`.
    pub fn at(&self, i: i64) -> &V {
        let n = self.0.len() as i64;
        &self.0[(i - 1).rem_euclid(n) as usize]
    }

    /// The rightward cyclic shift: entry `i` of the result is entry `i - 1` of `self`.
    pub fn shifted(&self) -> Self
    where
        V: Clone,
    {
        let n = self.0.len() as i64;
        Self((1..=n).map(|i| self.at(i - 1).clone()).collect())
    }

    pub fn into_vec(self) -> Vec<V> {
        self.0
    }
}

/// `ST_g(i) = g(i,b)⋯g(i,1)` for `i <= a` and
/// `ST_g(a+ℓ) = C·inv g(1,ℓ)⋯inv g(a,ℓ)`.
pub fn st_word<R: Realm>(realm: &R, grid: Grid, g: &Labeling<R::Value>) -> Result<StWord<R::Value>> {
    if g.len() != grid.len() {
        return Err(Error::LabelingLength { expected: grid.len(), got: g.len() });
    }
    let mut entries = Vec::with_capacity(grid.word_len());
    for i in 1..=grid.a {
        entries.push(realm.product(grid.positive_fiber(i).iter().rev().map(|&x| &g[x])));
    }
    for l in 1..=grid.b {
        let mut acc = realm.constant();
        for x in grid.negative_fiber(l) {
            let inv = realm.inv(&g[x]).map_err(|_| Error::Singular { element: x, during: "st word" })?;
            acc = realm.mul(&acc, &inv);
        }
        entries.push(acc);
    }
    Ok(StWord(entries))
}

/// Index-by-index comparison of `ST_{image}` with the shift of `ST_g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RotationReport {
    /// `matches[i - 1]` is whether `ST_image(i) = ST_g(i - 1)`.
    pub matches: Vec<bool>,
}

impl RotationReport {
    pub fn holds(&self) -> bool {
        self.matches.iter().all(|&m| m)
    }
}

pub fn check_rotation<R: Realm>(
    realm: &R,
    grid: Grid,
    g: &Labeling<R::Value>,
    image: &Labeling<R::Value>,
) -> Result<RotationReport> {
    let before = st_word(realm, grid, g)?.shifted();
    let after = st_word(realm, grid, image)?;
    Ok(RotationReport { matches: before.0.iter().zip(&after.0).map(|(x, y)| realm.equal(x, y)).collect() })
}

/// A positive fiber `k` (row) or a negative fiber `ℓ` (column).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Fiber {
    Positive(usize),
    Negative(usize),
}

impl Fiber {
    pub fn elements(self, grid: Grid) -> Vec<usize> {
        match self {
            Self::Positive(k) => grid.positive_fiber(k),
            Self::Negative(l) => grid.negative_fiber(l),
        }
    }

    pub fn all(grid: Grid) -> Vec<Fiber> {
        (1..=grid.a).map(Self::Positive).chain((1..=grid.b).map(Self::Negative)).collect()
    }

    pub fn label(self) -> String {
        match self {
            Self::Positive(k) => format!("p{k}"),
            Self::Negative(l) => format!("n{l}"),
        }
    }
}

/// `∏_{m=0}^{a+b-1}` of the fiber product of `BAR^m g`, in a commutative realm.
pub fn fiber_orbit_product<R: Realm>(realm: &R, grid: Grid, g: &Labeling<R::Value>, fiber: Fiber) -> Result<R::Value> {
    if !realm.is_commutative() {
        return Err(Error::NotCommutative);
    }
    fiber_orbit_product_ordered(realm, grid, g, fiber)
}

/// The same product computed without any commutativity assumption, taking
/// fiber factors in decreasing coordinate order and orbit terms left to right.
pub fn fiber_orbit_product_ordered<R: Realm>(
    realm: &R,
    grid: Grid,
    g: &Labeling<R::Value>,
    fiber: Fiber,
) -> Result<R::Value> {
    let rect = product_of_chains(grid.a, grid.b)?;
    let elements = fiber.elements(grid);
    let mut acc = realm.one();
    let mut current = g.clone();
    for m in 0..grid.word_len() {
        let term = realm.product(elements.iter().rev().map(|&x| &current[x]));
        acc = realm.mul(&acc, &term);
        if m + 1 < grid.word_len() {
            current = antichain_rowmotion(realm, rect.poset(), &current, Mode::Transfer)
                .map_err(|e| Error::SingularStep { step: m + 1, source: Box::new(e) })?;
        }
    }
    Ok(acc)
}

/// `C^b` for positive fibers, `C^a` for negative ones.
pub fn expected_fiber_product<R: Realm>(realm: &R, grid: Grid, fiber: Fiber) -> R::Value {
    let e = match fiber {
        Fiber::Positive(_) => grid.b,
        Fiber::Negative(_) => grid.a,
    };
    realm.pow(&realm.constant(), e)
}

/// Orbit means of one statistic across all samples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MeanCheck {
    pub statistic: String,
    /// Exact expected mean as `"p/q"`.
    pub expected: String,
    pub passed: bool,
    /// Seed of the first sample whose orbit mean differed.
    pub failing_seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlHomomesyReport {
    pub a: usize,
    pub b: usize,
    pub samples: usize,
    pub seed: u64,
    pub means: Vec<MeanCheck>,
    /// Samples where some step failed to shift the ST word.
    pub rotation_failures: Vec<u64>,
    /// Samples where an iterate left the chain polytope.
    pub chain_polytope_failures: Vec<u64>,
    /// Samples whose labeling did not return after `a + b` steps.
    pub period_failures: Vec<u64>,
}

impl PlHomomesyReport {
    pub fn passed(&self) -> bool {
        self.means.iter().all(|m| m.passed)
            && self.rotation_failures.is_empty()
            && self.chain_polytope_failures.is_empty()
            && self.period_failures.is_empty()
    }
}

pub fn ratio_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Per-statistic orbit means of one tropical labeling over `a + b` steps of
/// PL rowmotion: positive fibers, negative fibers, then the label sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlOrbitStats {
    pub means: Vec<BigRational>,
    pub rotation_ok: bool,
    pub in_chain_polytope: bool,
    pub returns: bool,
}

pub fn pl_orbit_stats(grid: Grid, poset: &FinitePoset, g: &Labeling<BigRational>) -> Result<PlOrbitStats> {
    let realm = TropicalRealm::default();
    let fibers = Fiber::all(grid);
    let mut totals = vec![BigRational::zero(); fibers.len() + 1];
    let mut rotation_ok = true;
    let mut in_chain_polytope = true;
    let mut current = g.clone();
    for _ in 0..grid.word_len() {
        in_chain_polytope &= polytope_membership(Polytope::Chain, poset, &current);
        for (t, f) in totals.iter_mut().zip(&fibers) {
            *t += f.elements(grid).iter().map(|&x| current[x].clone()).sum::<BigRational>();
        }
        *totals.last_mut().expect("label sum slot") += current.iter().cloned().sum::<BigRational>();
        let next = antichain_rowmotion(&realm, poset, &current, Mode::Transfer)?;
        rotation_ok &= check_rotation(&realm, grid, &current, &next)?.holds();
        current = next;
    }
    let n = BigRational::from_integer(grid.word_len().into());
    Ok(PlOrbitStats {
        means: totals.into_iter().map(|t| t / &n).collect(),
        rotation_ok,
        in_chain_polytope,
        returns: current == *g,
    })
}

/// Samples chain-polytope points of `[a]x[b]` and checks the exact orbit
/// means `b/(a+b)`, `a/(a+b)` and `ab/(a+b)`, ST rotation at every step and
/// that every iterate stays in the chain polytope.
pub fn pl_homomesy_report(a: usize, b: usize, samples: usize, seed: u64) -> Result<PlHomomesyReport> {
    let rect = product_of_chains(a, b)?;
    let grid = rect.grid();
    let realm = TropicalRealm::default();
    let fibers = Fiber::all(grid);
    let n = BigRational::from_integer((a + b).into());
    let expected: Vec<BigRational> = fibers
        .iter()
        .map(|f| match f {
            Fiber::Positive(_) => BigRational::from_integer(b.into()) / &n,
            Fiber::Negative(_) => BigRational::from_integer(a.into()) / &n,
        })
        .chain(std::iter::once(BigRational::from_integer((a * b).into()) / &n))
        .collect();

    let results: Vec<(u64, PlOrbitStats)> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let s = derive_seed(seed, i);
            let g = realm.sample_chain_polytope_point(rect.poset(), &mut rng_from_seed(s));
            pl_orbit_stats(grid, rect.poset(), &g).map(|stats| (s, stats))
        })
        .collect::<Result<_>>()?;

    let names: Vec<String> = fibers.iter().map(|f| f.label()).chain(std::iter::once("sum".to_string())).collect();
    let means = names
        .into_iter()
        .zip(&expected)
        .enumerate()
        .map(|(idx, (statistic, want))| {
            let failing_seed = results.iter().find(|(_, st)| st.means[idx] != *want).map(|(s, _)| *s);
            MeanCheck { statistic, expected: ratio_string(want), passed: failing_seed.is_none(), failing_seed }
        })
        .collect();
    let pick = |bad: fn(&PlOrbitStats) -> bool| results.iter().filter(|(_, st)| bad(st)).map(|(s, _)| *s).collect();
    Ok(PlHomomesyReport {
        a,
        b,
        samples,
        seed,
        means,
        rotation_failures: pick(|st| !st.rotation_ok),
        chain_polytope_failures: pick(|st| !st.in_chain_polytope),
        period_failures: pick(|st| !st.returns),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realm::{MatP, MatrixRealm, PrimeField, RatFunRealm};
    use crate::transfer::sample_generic_labeling;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn cyclic_indexing() {
        let w = StWord::new(vec![1, 2, 3, 4, 5]);
        assert_eq!(*w.at(1), 1);
        assert_eq!(*w.at(0), 5);
        assert_eq!(*w.at(7), 2);
        assert_eq!(*w.at(-5), 5);
        assert_eq!(w.shifted().entries(), [5, 1, 2, 3, 4]);
    }

    #[test]
    fn shifting_closes_after_word_length() {
        let w = StWord::new((0..7).collect::<Vec<_>>());
        let mut s = w.clone();
        for _ in 0..7 {
            s = s.shifted();
        }
        assert_eq!(s, w);
    }

    #[test]
    fn symbolic_2x3_word() {
        let rect = product_of_chains(2, 3).unwrap();
        let realm = RatFunRealm::for_poset(rect.poset());
        let g = realm.generic_labeling(rect.poset());
        let w = st_word(&realm, rect.grid(), &g).unwrap();
        let expect = ["u*w*y", "v*x*z", "C/(u*v)", "C/(w*x)", "C/(y*z)"];
        for (got, want) in w.entries().iter().zip(expect) {
            assert!(realm.equal(got, &realm.parse(want).unwrap()), "{}", realm.format(got));
        }
    }

    #[test]
    fn one_by_one_fiber_product() {
        let grid = Grid::new(1, 1).unwrap();
        let realm = RatFunRealm::with_vars(1);
        let rect = product_of_chains(1, 1).unwrap();
        let g = realm.generic_labeling(rect.poset());
        let c = realm.constant();
        assert_eq!(fiber_orbit_product(&realm, grid, &g, Fiber::Positive(1)).unwrap(), c);
        assert_eq!(fiber_orbit_product(&realm, grid, &g, Fiber::Negative(1)).unwrap(), c);
    }

    #[test]
    fn fiber_product_rejects_noncommutative_realms() {
        let rect = product_of_chains(2, 2).unwrap();
        let realm = MatrixRealm::new(PrimeField::default(), 2, 1);
        let g = sample_generic_labeling(rect.poset(), &realm, 1).unwrap();
        assert_eq!(fiber_orbit_product(&realm, rect.grid(), &g, Fiber::Positive(1)), Err(Error::NotCommutative));
        assert!(fiber_orbit_product_ordered(&realm, rect.grid(), &g, Fiber::Positive(1)).is_ok());
    }

    /// The same word with the factor orders reversed.
    fn st_word_reversed<R: Realm>(realm: &R, grid: Grid, g: &Labeling<R::Value>) -> StWord<R::Value> {
        let mut entries = Vec::new();
        for i in 1..=grid.a {
            entries.push(realm.product(grid.positive_fiber(i).iter().map(|&x| &g[x])));
        }
        for l in 1..=grid.b {
            let mut acc = realm.constant();
            for x in grid.negative_fiber(l).into_iter().rev() {
                acc = realm.mul(&acc, &realm.inv(&g[x]).unwrap());
            }
            entries.push(acc);
        }
        StWord::new(entries)
    }

    #[test]
    fn factor_order_matters_for_matrices() {
        let rect = product_of_chains(2, 3).unwrap();
        let grid = rect.grid();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut broken = 0;
        for s in 0..20 {
            let realm: MatP = MatrixRealm::with_random_constant(PrimeField::default(), 2, &mut rng);
            let g = sample_generic_labeling(rect.poset(), &realm, s).unwrap();
            let image = antichain_rowmotion(&realm, rect.poset(), &g, Mode::Toggles).unwrap();
            assert!(check_rotation(&realm, grid, &g, &image).unwrap().holds());
            let before = st_word_reversed(&realm, grid, &g).shifted();
            let after = st_word_reversed(&realm, grid, &image);
            if before.entries().iter().zip(after.entries()).any(|(x, y)| !realm.equal(x, y)) {
                broken += 1;
            }
        }
        assert_eq!(broken, 20);
    }

    #[test]
    fn scalar_matrices_match_commutative_word() {
        let rect = product_of_chains(2, 3).unwrap();
        let grid = rect.grid();
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let matrix = MatrixRealm::with_random_constant(f, 1, &mut rng);
        let g = sample_generic_labeling(rect.poset(), &matrix, 5).unwrap();
        let nc = st_word(&matrix, grid, &g).unwrap();

        let symbolic = RatFunRealm::for_poset(rect.poset());
        let sym = st_word(&symbolic, grid, &symbolic.generic_labeling(rect.poset())).unwrap();
        let mut values = vec![*matrix.c()];
        values.extend(rect.poset().linear_extension().iter().map(|&x| *g[x].get(0, 0)));
        for (m, s) in nc.entries().iter().zip(sym.entries()) {
            assert_eq!(Some(*m.get(0, 0)), s.eval_mod(&values, f.modulus()));
        }
    }

    #[test]
    fn small_pl_report() {
        let report = pl_homomesy_report(2, 2, 50, 3).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.means.len(), 5);
        assert_eq!(report.means[0].expected, "1/2");
        assert_eq!(report.means[4].expected, "1/1");
    }

    #[test]
    fn zero_labeling_orbit_mean() {
        for (a, b) in [(1, 2), (2, 3), (3, 3)] {
            let rect = product_of_chains(a, b).unwrap();
            let g = Labeling::new(vec![q(0, 1); a * b]);
            let stats = pl_orbit_stats(rect.grid(), rect.poset(), &g).unwrap();
            assert_eq!(*stats.means.last().unwrap(), q((a * b) as i64, (a + b) as i64));
        }
    }
}
