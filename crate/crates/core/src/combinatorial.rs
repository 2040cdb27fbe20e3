//! Antichain rowmotion on sets: `∇ ∘ Θ ∘ Δ⁻¹`, Stanley-Thomas words and
//! orbit statistics on `[a]x[b]`.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::Result;
use crate::poset::{product_of_chains, Antichain, FinitePoset, Grid, OrderFilter, OrderIdeal};

/// `Δ⁻¹(A)`: everything below some member of `A`.
pub fn downward_saturation(poset: &FinitePoset, a: &Antichain) -> OrderIdeal {
    let members = (0..poset.len()).filter(|&x| a.members().iter().any(|&y| poset.leq(x, y))).collect();
    OrderIdeal::from_sorted(members)
}

/// `Θ(I) = P \ I`.
pub fn complement(poset: &FinitePoset, ideal: &OrderIdeal) -> OrderFilter {
    OrderFilter::from_sorted((0..poset.len()).filter(|&x| !ideal.contains(x)).collect())
}

/// `∇(F)`: the minimal members of `F`.
pub fn minimal_elements(poset: &FinitePoset, filter: &OrderFilter) -> Antichain {
    let members = filter
        .members()
        .iter()
        .copied()
        .filter(|&x| poset.lower_covers(x).iter().all(|&y| !filter.contains(y)))
        .collect();
    Antichain::from_sorted(members)
}

pub fn rowmotion_antichain(poset: &FinitePoset, a: &Antichain) -> Antichain {
    minimal_elements(poset, &complement(poset, &downward_saturation(poset, a)))
}

/// `w(A)`: entry `i <= a` is 1 when `A` meets positive fiber `i`; entry
/// `a + ℓ` is 1 when `A` misses negative fiber `ℓ`.
pub fn st_word_combinatorial(grid: Grid, a: &Antichain) -> Vec<u8> {
    let meets = |fiber: Vec<usize>| fiber.iter().any(|&x| a.contains(x));
    (1..=grid.a)
        .map(|i| u8::from(meets(grid.positive_fiber(i))))
        .chain((1..=grid.b).map(|l| u8::from(!meets(grid.negative_fiber(l)))))
        .collect()
}

/// `w(A)` from indicator sums: `Σ_j A(i,j)` and `1 - Σ_j A(j,ℓ)`.
pub fn st_word_from_sums(grid: Grid, a: &Antichain) -> Vec<i64> {
    let count = |fiber: Vec<usize>| fiber.iter().filter(|&&x| a.contains(x)).count() as i64;
    (1..=grid.a)
        .map(|i| count(grid.positive_fiber(i)))
        .chain((1..=grid.b).map(|l| 1 - count(grid.negative_fiber(l))))
        .collect()
}

/// One rowmotion orbit, starting at its lexicographically least antichain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinatorialOrbit {
    pub antichains: Vec<Antichain>,
    pub st_words: Vec<Vec<u8>>,
    pub cardinality_avg: BigRational,
    /// `p1..pa` then `n1..nb`.
    pub fiber_avgs: Vec<(String, BigRational)>,
}

impl CombinatorialOrbit {
    pub fn size(&self) -> usize {
        self.antichains.len()
    }
}

/// Partitions the antichains of `[a]x[b]` into rowmotion orbits, listed by
/// representative.
pub fn combinatorial_orbits(a: usize, b: usize) -> Result<Vec<CombinatorialOrbit>> {
    let rect = product_of_chains(a, b)?;
    let poset = rect.poset();
    let grid = rect.grid();
    let all = poset.antichains();
    let index: HashMap<&Antichain, usize> = all.iter().enumerate().map(|(k, x)| (x, k)).collect();
    let mut seen = vec![false; all.len()];
    let mut orbits = Vec::new();

    let mut sorted: Vec<usize> = (0..all.len()).collect();
    sorted.sort_by(|&x, &y| all[x].cmp(&all[y]));
    for start in sorted {
        if seen[start] {
            continue;
        }
        let mut members = Vec::new();
        let mut current = all[start].clone();
        loop {
            let k = index[&current];
            if seen[k] {
                break;
            }
            seen[k] = true;
            members.push(current.clone());
            current = rowmotion_antichain(poset, &current);
        }
        orbits.push(orbit_stats(grid, members));
    }
    Ok(orbits)
}

fn orbit_stats(grid: Grid, antichains: Vec<Antichain>) -> CombinatorialOrbit {
    let n = BigRational::from_integer(antichains.len().into());
    let st_words: Vec<Vec<u8>> = antichains.iter().map(|x| st_word_combinatorial(grid, x)).collect();
    let cardinality: usize = antichains.iter().map(Antichain::len).sum();
    let mut fiber_avgs = Vec::with_capacity(grid.word_len());
    for i in 1..=grid.a {
        let hits = antichains.iter().filter(|x| grid.positive_fiber(i).iter().any(|&e| x.contains(e))).count();
        fiber_avgs.push((format!("p{i}"), BigRational::from_integer(hits.into()) / &n));
    }
    for l in 1..=grid.b {
        let hits = antichains.iter().filter(|x| grid.negative_fiber(l).iter().any(|&e| x.contains(e))).count();
        fiber_avgs.push((format!("n{l}"), BigRational::from_integer(hits.into()) / &n));
    }
    CombinatorialOrbit {
        antichains,
        st_words,
        cardinality_avg: BigRational::from_integer(cardinality.into()) / &n,
        fiber_avgs,
    }
}

/// Whether `rowmotion^k` fixes every antichain of `poset`.
pub fn rowmotion_power_is_identity(poset: &FinitePoset, k: usize) -> bool {
    poset.antichains().iter().all(|a| {
        let mut x = a.clone();
        for _ in 0..k {
            x = rowmotion_antichain(poset, &x);
        }
        x == *a
    })
}

/// Mean of a rational statistic over a slice.
pub fn mean(values: &[BigRational]) -> BigRational {
    if values.is_empty() {
        return BigRational::zero();
    }
    values.iter().sum::<BigRational>() / BigRational::from_integer(values.len().into())
}
