//! The max-plus realm on exact rationals.
//!
//! `add = max`, `mul = +`, `inv = negation`, `one = 0` and `C = c`. With the
//! default `c = 1`, the generic transfer maps specialize to the piecewise-linear
//! maps on labelings `P -> [0, 1]`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use super::{GenericSample, Realm, Singular};
use crate::poset::FinitePoset;
use crate::transfer::Labeling;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalRealm {
    c: BigRational,
    max_denominator: u32,
}

impl Default for TropicalRealm {
    fn default() -> Self {
        Self::new(BigRational::one())
    }
}

impl TropicalRealm {
    pub fn new(c: BigRational) -> Self {
        Self { c, max_denominator: 10 }
    }

    /// Bound on denominators of sampled labels.
    pub fn with_max_denominator(mut self, d: u32) -> Self {
        self.max_denominator = d.max(1);
        self
    }

    pub fn c(&self) -> &BigRational {
        &self.c
    }

    /// A uniformly drawn rational `k / den` in `[0, 1]`, `den <= max_denominator`.
    pub fn sample_unit<G: Rng + ?Sized>(&self, rng: &mut G) -> BigRational {
        let den = rng.gen_range(1..=self.max_denominator);
        let num = rng.gen_range(0..=den);
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    /// A random point of the chain polytope: labels in `[0, 1]`, scaled down
    /// so the heaviest maximal chain sums to at most 1.
    pub fn sample_chain_polytope_point<G: Rng + ?Sized>(
        &self,
        poset: &FinitePoset,
        rng: &mut G,
    ) -> Labeling<BigRational> {
        let labels: Vec<BigRational> = (0..poset.len()).map(|_| self.sample_unit(rng)).collect();
        // heaviest chain ending at each element
        let mut best = vec![BigRational::zero(); poset.len()];
        for &x in poset.linear_extension() {
            let below = poset.lower_covers(x).iter().map(|&y| &best[y]).max().cloned();
            best[x] = &labels[x] + below.unwrap_or_else(BigRational::zero);
        }
        let heaviest = best.into_iter().max().unwrap_or_else(BigRational::zero);
        if heaviest > BigRational::one() {
            Labeling::new(labels.into_iter().map(|v| v / &heaviest).collect())
        } else {
            Labeling::new(labels)
        }
    }
}

impl Realm for TropicalRealm {
    type Value = BigRational;

    fn name(&self) -> &'static str {
        "tropical"
    }

    fn is_commutative(&self) -> bool {
        true
    }

    fn is_tropical(&self) -> bool {
        true
    }

    fn add(&self, x: &BigRational, y: &BigRational) -> BigRational {
        if x >= y {
            x.clone()
        } else {
            y.clone()
        }
    }

    fn mul(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x + y
    }

    fn inv(&self, x: &BigRational) -> Result<BigRational, Singular> {
        Ok(-x)
    }

    fn one(&self) -> BigRational {
        BigRational::zero()
    }

    fn constant(&self) -> BigRational {
        self.c.clone()
    }

    fn equal(&self, x: &BigRational, y: &BigRational) -> bool {
        x == y
    }
}

impl GenericSample for TropicalRealm {
    fn sample_labeling<G: Rng + ?Sized>(&self, poset: &FinitePoset, rng: &mut G) -> Labeling<BigRational> {
        Labeling::new((0..poset.len()).map(|_| self.sample_unit(rng)).collect())
    }
}
