//! Transfer maps, antichain toggles and rowmotion, written once in
//! noncommutative factor order for every [`Realm`].
//!
//! Boundary sums over the adjoined `0̂` / `1̂` are `one()`; those elements are
//! never materialized in the poset.

use std::ops::Index;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::poset::{FinitePoset, Grid};
use crate::realm::{GenericSample, Realm};
use crate::rng::rng_from_seed;
use crate::stword::{st_word, StWord};

/// Retry bound for generic sampling.
pub const MAX_SAMPLE_ATTEMPTS: usize = 32;

/// One value per poset element, indexed by element id.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Labeling<V>(Vec<V>);

impl<V> Labeling<V> {
    pub fn new(values: Vec<V>) -> Self {
        Self(values)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, V> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[V] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<V> {
        self.0
    }

    pub fn map<W>(&self, f: impl FnMut(&V) -> W) -> Labeling<W> {
        Labeling(self.0.iter().map(f).collect())
    }

    /// Copy of `self` with the value at `x` replaced.
    pub fn with(&self, x: usize, v: V) -> Self
    where
        V: Clone,
    {
        let mut out = self.0.clone();
        out[x] = v;
        Self(out)
    }
}

impl<V> Index<usize> for Labeling<V> {
    type Output = V;

    fn index(&self, x: usize) -> &V {
        &self.0[x]
    }
}

impl<V> FromIterator<V> for Labeling<V> {
    fn from_iter<I: IntoIterator<Item = V>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransferKind {
    Theta,
    Nabla,
    Delta,
    NablaInv,
    DeltaInv,
}

impl TransferKind {
    fn label(self) -> &'static str {
        match self {
            Self::Theta => "theta",
            Self::Nabla => "nabla",
            Self::Delta => "delta",
            Self::NablaInv => "nabla-inverse",
            Self::DeltaInv => "delta-inverse",
        }
    }
}

/// How antichain rowmotion is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `∇ ∘ Θ ∘ Δ⁻¹`.
    Transfer,
    /// Toggles bottom to top along the default linear extension.
    Toggles,
}

/// A map iterated by [`iterate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dynamics {
    Antichain(Mode),
    /// Order rowmotion `Θ ∘ Δ⁻¹ ∘ ∇`.
    Order,
}

fn check_len<V>(poset: &FinitePoset, g: &Labeling<V>) -> Result<()> {
    if g.len() != poset.len() {
        return Err(Error::LabelingLength { expected: poset.len(), got: g.len() });
    }
    Ok(())
}

fn inv_at<R: Realm>(realm: &R, v: &R::Value, element: usize, during: &'static str) -> Result<R::Value> {
    realm.inv(v).map_err(|_| Error::Singular { element, during })
}

/// Applies one transfer map.
pub fn transfer<R: Realm>(
    kind: TransferKind,
    realm: &R,
    poset: &FinitePoset,
    g: &Labeling<R::Value>,
) -> Result<Labeling<R::Value>> {
    check_len(poset, g)?;
    let during = kind.label();
    let n = poset.len();
    match kind {
        TransferKind::Theta => {
            let c = realm.constant();
            (0..n).map(|x| Ok(realm.mul(&c, &inv_at(realm, &g[x], x, during)?))).collect()
        }
        TransferKind::Nabla => (0..n)
            .map(|x| {
                let lower = poset.lower_covers(x);
                if lower.is_empty() {
                    return Ok(g[x].clone());
                }
                let s = realm.sum_or_one(lower.iter().map(|&y| &g[y]));
                Ok(realm.mul(&g[x], &inv_at(realm, &s, x, during)?))
            })
            .collect(),
        TransferKind::Delta => (0..n)
            .map(|x| {
                let upper = poset.upper_covers(x);
                if upper.is_empty() {
                    return Ok(g[x].clone());
                }
                let s = realm.sum_or_one(upper.iter().map(|&y| &g[y]));
                Ok(realm.mul(&inv_at(realm, &s, x, during)?, &g[x]))
            })
            .collect(),
        TransferKind::NablaInv => Ok(nabla_inv(realm, poset, g)),
        TransferKind::DeltaInv => Ok(delta_inv(realm, poset, g)),
    }
}

fn nabla_inv<R: Realm>(realm: &R, poset: &FinitePoset, g: &Labeling<R::Value>) -> Labeling<R::Value> {
    let mut h: Vec<Option<R::Value>> = vec![None; poset.len()];
    for &x in poset.linear_extension() {
        h[x] = Some(nabla_inv_step(realm, poset, g, &h, x));
    }
    h.into_iter().map(|v| v.expect("every element visited")).collect()
}

fn nabla_inv_step<R: Realm>(
    realm: &R,
    poset: &FinitePoset,
    g: &Labeling<R::Value>,
    h: &[Option<R::Value>],
    x: usize,
) -> R::Value {
    let lower = poset.lower_covers(x);
    if lower.is_empty() {
        return g[x].clone();
    }
    let s = realm.sum_or_one(lower.iter().map(|&y| h[y].as_ref().expect("lower covers come first")));
    realm.mul(&g[x], &s)
}

fn delta_inv<R: Realm>(realm: &R, poset: &FinitePoset, g: &Labeling<R::Value>) -> Labeling<R::Value> {
    let mut h: Vec<Option<R::Value>> = vec![None; poset.len()];
    for &x in poset.linear_extension().iter().rev() {
        h[x] = Some(delta_inv_step(realm, poset, g, &h, x));
    }
    h.into_iter().map(|v| v.expect("every element visited")).collect()
}

fn delta_inv_step<R: Realm>(
    realm: &R,
    poset: &FinitePoset,
    g: &Labeling<R::Value>,
    h: &[Option<R::Value>],
    x: usize,
) -> R::Value {
    let upper = poset.upper_covers(x);
    if upper.is_empty() {
        return g[x].clone();
    }
    let s = realm.sum_or_one(upper.iter().map(|&y| h[y].as_ref().expect("upper covers come first")));
    realm.mul(&s, &g[x])
}

/// `(Δ⁻¹ g)(v)`, evaluated over the principal filter of `v` only.
pub fn delta_inv_at<R: Realm>(realm: &R, poset: &FinitePoset, g: &Labeling<R::Value>, v: usize) -> R::Value {
    let mut h: Vec<Option<R::Value>> = vec![None; poset.len()];
    for &x in poset.linear_extension().iter().rev() {
        if poset.leq(v, x) {
            h[x] = Some(delta_inv_step(realm, poset, g, &h, x));
        }
    }
    h[v].take().expect("v lies in its own filter")
}

/// `(∇⁻¹ g)(v)`, evaluated over the principal ideal of `v` only.
pub fn nabla_inv_at<R: Realm>(realm: &R, poset: &FinitePoset, g: &Labeling<R::Value>, v: usize) -> R::Value {
    let mut h: Vec<Option<R::Value>> = vec![None; poset.len()];
    for &x in poset.linear_extension() {
        if poset.leq(x, v) {
            h[x] = Some(nabla_inv_step(realm, poset, g, &h, x));
        }
    }
    h[v].take().expect("v lies in its own ideal")
}

/// Product of `g` over `chain` from its last element down to its first.
fn descending_product<R: Realm>(realm: &R, g: &Labeling<R::Value>, chain: &[usize]) -> R::Value {
    realm.product(chain.iter().rev().map(|&y| &g[y]))
}

/// Recomputes `∇⁻¹` or `Δ⁻¹` by summing over saturated chains and compares
/// with the recurrence. Other kinds have no chain form and return `false`.
pub fn chain_expansion_check<R: Realm>(
    kind: TransferKind,
    realm: &R,
    poset: &FinitePoset,
    g: &Labeling<R::Value>,
) -> Result<bool> {
    let chains_at: fn(&FinitePoset, usize) -> Vec<Vec<usize>> = match kind {
        TransferKind::NablaInv => FinitePoset::chains_down_to,
        TransferKind::DeltaInv => FinitePoset::chains_up_from,
        _ => return Ok(false),
    };
    let fast = transfer(kind, realm, poset, g)?;
    Ok((0..poset.len()).all(|x| {
        let chains = chains_at(poset, x);
        let products: Vec<R::Value> = chains.iter().map(|c| descending_product(realm, g, c)).collect();
        realm.equal(&realm.sum_or_one(products.iter()), &fast[x])
    }))
}

/// The antichain toggle at `v`:
/// `(τ_v g)(v) = C · inv((Δ⁻¹g)(v)) · inv((∇⁻¹g)(v)) · g(v)`.
pub fn toggle<R: Realm>(
    realm: &R,
    poset: &FinitePoset,
    g: &Labeling<R::Value>,
    v: usize,
) -> Result<Labeling<R::Value>> {
    check_len(poset, g)?;
    let up = delta_inv_at(realm, poset, g, v);
    let down = nabla_inv_at(realm, poset, g, v);
    let value = realm.product([
        &realm.constant(),
        &inv_at(realm, &up, v, "toggle")?,
        &inv_at(realm, &down, v, "toggle")?,
        &g[v],
    ]);
    Ok(g.with(v, value))
}

/// The toggle at `v` from its saturated-chain form: `C` times the inverse of
/// the sum, over maximal chains through `v = y_c`, of
/// `g(y_{c-1})...g(y_1) · g(y_k)...g(y_c)`.
pub fn toggle_via_chains<R: Realm>(
    realm: &R,
    poset: &FinitePoset,
    g: &Labeling<R::Value>,
    v: usize,
) -> Result<Labeling<R::Value>> {
    check_len(poset, g)?;
    let below: Vec<Vec<usize>> = poset.chains_down_to(v);
    let above: Vec<Vec<usize>> = poset.chains_up_from(v);
    let mut terms = Vec::with_capacity(below.len() * above.len());
    for lo in &below {
        let lower = descending_product(realm, g, &lo[..lo.len() - 1]);
        for hi in &above {
            terms.push(realm.mul(&lower, &descending_product(realm, g, hi)));
        }
    }
    let s = realm.sum_or_one(terms.iter());
    let value = realm.mul(&realm.constant(), &inv_at(realm, &s, v, "toggle")?);
    Ok(g.with(v, value))
}

/// NAR as the toggle product `τ_{x_n} ⋯ τ_{x_1}` along `order`.
pub fn rowmotion_along<R: Realm>(
    realm: &R,
    poset: &FinitePoset,
    g: &Labeling<R::Value>,
    order: &[usize],
) -> Result<Labeling<R::Value>> {
    check_len(poset, g)?;
    debug_assert!(poset.is_linear_extension(order));
    let mut h = g.clone();
    for &v in order {
        h = toggle(realm, poset, &h, v)?;
    }
    Ok(h)
}

/// Antichain rowmotion (PL, BAR or NAR depending on the realm).
pub fn antichain_rowmotion<R: Realm>(
    realm: &R,
    poset: &FinitePoset,
    g: &Labeling<R::Value>,
    mode: Mode,
) -> Result<Labeling<R::Value>> {
    match mode {
        Mode::Transfer => {
            let d = transfer(TransferKind::DeltaInv, realm, poset, g)?;
            let t = transfer(TransferKind::Theta, realm, poset, &d)?;
            transfer(TransferKind::Nabla, realm, poset, &t)
        }
        Mode::Toggles => rowmotion_along(realm, poset, g, poset.linear_extension()),
    }
}

/// Order rowmotion `Θ ∘ Δ⁻¹ ∘ ∇`.
pub fn order_rowmotion<R: Realm>(realm: &R, poset: &FinitePoset, g: &Labeling<R::Value>) -> Result<Labeling<R::Value>> {
    let n = transfer(TransferKind::Nabla, realm, poset, g)?;
    let d = transfer(TransferKind::DeltaInv, realm, poset, &n)?;
    transfer(TransferKind::Theta, realm, poset, &d)
}

/// One step of `dynamics`.
pub fn step<R: Realm>(
    realm: &R,
    poset: &FinitePoset,
    g: &Labeling<R::Value>,
    dynamics: Dynamics,
) -> Result<Labeling<R::Value>> {
    match dynamics {
        Dynamics::Antichain(mode) => antichain_rowmotion(realm, poset, g, mode),
        Dynamics::Order => order_rowmotion(realm, poset, g),
    }
}

/// Antichain rowmotion on `[a]x[b]` from the label-by-label closed forms.
///
/// Interior labels are computed by both factorizations, which must agree.
pub fn closed_form_first_pass<R: Realm>(realm: &R, grid: Grid, g: &Labeling<R::Value>) -> Result<Labeling<R::Value>> {
    closed_form(realm, grid, g, true)
}

/// The commutative closed forms,
/// `(BAR g)(i,j) = D(i-1,j) D(i,j-1) g(i-1,j-1) / (D(i-1,j-1) D(i,j))`.
pub fn closed_form_first_pass_commutative<R: Realm>(
    realm: &R,
    grid: Grid,
    g: &Labeling<R::Value>,
) -> Result<Labeling<R::Value>> {
    if !realm.is_commutative() {
        return Err(Error::NotCommutative);
    }
    closed_form(realm, grid, g, false)
}

fn closed_form<R: Realm>(
    realm: &R,
    grid: Grid,
    g: &Labeling<R::Value>,
    noncommutative: bool,
) -> Result<Labeling<R::Value>> {
    let rect = crate::poset::product_of_chains(grid.a, grid.b)?;
    let poset = rect.poset();
    check_len(poset, g)?;
    let d = delta_inv(realm, poset, g);
    let at = |i: usize, j: usize| &d[grid.id(i, j)];
    let inv = |i: usize, j: usize| inv_at(realm, at(i, j), grid.id(i, j), "closed form");
    let mut out = Vec::with_capacity(grid.len());
    for id in 0..grid.len() {
        let (i, j) = grid.coords(id);
        let value = match (i, j) {
            (1, 1) => realm.mul(&realm.constant(), &inv(1, 1)?),
            (1, _) => realm.mul(&inv(1, j)?, at(1, j - 1)),
            (_, 1) => realm.mul(&inv(i, 1)?, at(i - 1, 1)),
            _ if noncommutative => {
                let corner = g[grid.id(i - 1, j - 1)].clone();
                let first = realm.product([&inv(i, j)?, at(i - 1, j), &corner, &inv(i - 1, j - 1)?, at(i, j - 1)]);
                let second = realm.product([&inv(i, j)?, at(i, j - 1), &corner, &inv(i - 1, j - 1)?, at(i - 1, j)]);
                if !realm.equal(&first, &second) {
                    return Err(Error::FactorizationMismatch { i, j });
                }
                first
            }
            _ => {
                let num = realm.product([at(i - 1, j), at(i, j - 1), &g[grid.id(i - 1, j - 1)]]);
                let den = realm.mul(at(i - 1, j - 1), at(i, j));
                realm.mul(&num, &inv_at(realm, &den, id, "closed form")?)
            }
        };
        out.push(value);
    }
    Ok(Labeling::new(out))
}

/// Polytopes of real labelings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polytope {
    /// Order-preserving labelings into `[0, 1]`.
    Order,
    /// Order-reversing labelings into `[0, 1]`.
    OrderReversing,
    /// Labelings into `[0, 1]` with every chain sum at most 1.
    Chain,
}

pub fn polytope_membership(kind: Polytope, poset: &FinitePoset, g: &Labeling<BigRational>) -> bool {
    if g.len() != poset.len() {
        return false;
    }
    let (zero, one) = (BigRational::zero(), BigRational::one());
    if !g.iter().all(|v| *v >= zero && *v <= one) {
        return false;
    }
    match kind {
        Polytope::Order => poset.covers().iter().all(|&(x, y)| g[x] <= g[y]),
        Polytope::OrderReversing => poset.covers().iter().all(|&(x, y)| g[x] >= g[y]),
        Polytope::Chain => {
            // heaviest chain ending at each element
            let mut best = vec![BigRational::zero(); poset.len()];
            for &x in poset.linear_extension() {
                let below = poset.lower_covers(x).iter().map(|&y| &best[y]).max().cloned();
                best[x] = &g[x] + below.unwrap_or_else(BigRational::zero);
            }
            best.iter().all(|s| *s <= one)
        }
    }
}

/// Iterates of a labeling with their Stanley-Thomas words.
#[derive(Debug, Clone)]
pub struct Orbit<V> {
    /// `g, f(g), f²(g), ...` up to (excluding) the first return, or through
    /// the step bound when there is none.
    pub labelings: Vec<Labeling<V>>,
    /// One word per labeling, present on rectangle posets.
    pub st_words: Option<Vec<StWord<V>>>,
    /// Smallest `k >= 1` with `f^k(g) = g`, if found within the bound.
    pub period: Option<usize>,
}

/// Default step bound `4(a+b)` on a rectangle, `4n` otherwise.
pub fn default_step_bound(poset: &FinitePoset) -> usize {
    match poset.grid() {
        Some(grid) => 4 * grid.word_len(),
        None => 4 * poset.len().max(1),
    }
}

/// Applies `dynamics` up to `steps` times, stopping at the first return to `g`.
pub fn iterate<R: Realm>(
    realm: &R,
    poset: &FinitePoset,
    g: &Labeling<R::Value>,
    steps: usize,
    dynamics: Dynamics,
) -> Result<Orbit<R::Value>> {
    check_len(poset, g)?;
    let mut labelings = vec![g.clone()];
    let mut period = None;
    let mut current = g.clone();
    for k in 1..=steps {
        current =
            step(realm, poset, &current, dynamics).map_err(|e| Error::SingularStep { step: k, source: Box::new(e) })?;
        if realm.labelings_eq(&current, g) {
            period = Some(k);
            break;
        }
        labelings.push(current.clone());
    }
    let st_words = match poset.grid() {
        Some(grid) => Some(
            labelings
                .iter()
                .enumerate()
                .map(|(k, h)| st_word(realm, grid, h).map_err(|e| Error::SingularStep { step: k, source: Box::new(e) }))
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    Ok(Orbit { labelings, st_words, period })
}

/// Draws labelings until both rowmotion modes evaluate without a singular
/// intermediate. Returns the labeling and the number of rejected draws.
pub fn sample_generic_labeling_counted<R: GenericSample>(
    poset: &FinitePoset,
    realm: &R,
    seed: u64,
) -> Result<(Labeling<R::Value>, usize)> {
    let mut rng = rng_from_seed(seed);
    sample_with(poset, realm, &mut rng, seed)
}

pub fn sample_generic_labeling<R: GenericSample>(
    poset: &FinitePoset,
    realm: &R,
    seed: u64,
) -> Result<Labeling<R::Value>> {
    sample_generic_labeling_counted(poset, realm, seed).map(|(g, _)| g)
}

fn sample_with<R: GenericSample, G: Rng>(
    poset: &FinitePoset,
    realm: &R,
    rng: &mut G,
    seed: u64,
) -> Result<(Labeling<R::Value>, usize)> {
    for attempt in 0..MAX_SAMPLE_ATTEMPTS {
        let g = realm.sample_labeling(poset, rng);
        let ok = antichain_rowmotion(realm, poset, &g, Mode::Transfer).is_ok()
            && antichain_rowmotion(realm, poset, &g, Mode::Toggles).is_ok();
        if ok {
            return Ok((g, attempt));
        }
    }
    Err(Error::SamplingExhausted { seed, attempts: MAX_SAMPLE_ATTEMPTS })
}
