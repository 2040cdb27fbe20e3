//! Scalar fields used as matrix coefficient domains.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

/// The Mersenne prime `2^61 - 1`.
pub const MERSENNE_61: u64 = (1 << 61) - 1;

pub trait ScalarField: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn of_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn inv(&self, x: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, x: &Self::Elem) -> bool;
    /// A uniformly random element (from a bounded range for infinite fields).
    fn random<G: Rng + ?Sized>(&self, rng: &mut G) -> Self::Elem;

    fn random_nonzero<G: Rng + ?Sized>(&self, rng: &mut G) -> Self::Elem {
        loop {
            let v = self.random(rng);
            if !self.is_zero(&v) {
                return v;
            }
        }
    }
}

/// `Z / pZ` for a prime `p < 2^63`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl Default for PrimeField {
    fn default() -> Self {
        Self { p: MERSENNE_61 }
    }
}

impl PrimeField {
    /// Panics unless `2 <= p < 2^63`. Primality is the caller's responsibility.
    pub fn new(p: u64) -> Self {
        assert!((2..1 << 63).contains(&p), "modulus {p} out of range");
        Self { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    fn reduce(&self, v: u128) -> u64 {
        if self.p == MERSENNE_61 {
            let p = MERSENNE_61 as u128;
            let folded = (v & p) + (v >> 61);
            let folded = (folded & p) + (folded >> 61);
            let r = folded as u64;
            if r >= MERSENNE_61 {
                r - MERSENNE_61
            } else {
                r
            }
        } else {
            (v % self.p as u128) as u64
        }
    }

    pub fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.reduce(acc as u128 * base as u128);
            }
            base = self.reduce(base as u128 * base as u128);
            e >>= 1;
        }
        acc
    }

    /// Reduces an arbitrary integer into `[0, p)`.
    pub fn from_bigint(&self, v: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        let r = ((v % &m) + &m) % &m;
        r.try_into().expect("residue fits in u64")
    }
}

impl ScalarField for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn of_i64(&self, v: i64) -> u64 {
        (v as i128).rem_euclid(self.p as i128) as u64
    }

    #[inline]
    fn add(&self, x: &u64, y: &u64) -> u64 {
        let s = x + y;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    fn sub(&self, x: &u64, y: &u64) -> u64 {
        if x >= y {
            x - y
        } else {
            x + self.p - y
        }
    }

    #[inline]
    fn mul(&self, x: &u64, y: &u64) -> u64 {
        self.reduce(*x as u128 * *y as u128)
    }

    fn inv(&self, x: &u64) -> Option<u64> {
        if *x == 0 {
            None
        } else {
            Some(self.pow(*x, self.p - 2))
        }
    }

    fn is_zero(&self, x: &u64) -> bool {
        *x == 0
    }

    fn random<G: Rng + ?Sized>(&self, rng: &mut G) -> u64 {
        rng.gen_range(0..self.p)
    }
}

/// The rationals, sampling small integers in `[-bound, bound]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RationalField {
    bound: i64,
}

impl Default for RationalField {
    fn default() -> Self {
        Self { bound: 9 }
    }
}

impl RationalField {
    pub fn with_bound(bound: i64) -> Self {
        Self { bound: bound.max(1) }
    }
}

impl ScalarField for RationalField {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn of_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    fn add(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x + y
    }

    fn sub(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x - y
    }

    fn mul(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x * y
    }

    fn inv(&self, x: &BigRational) -> Option<BigRational> {
        if x.is_zero() {
            None
        } else {
            Some(x.recip())
        }
    }

    fn is_zero(&self, x: &BigRational) -> bool {
        x.is_zero()
    }

    fn random<G: Rng + ?Sized>(&self, rng: &mut G) -> BigRational {
        BigRational::from_integer(rng.gen_range(-self.bound..=self.bound).into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn mersenne_reduction_matches_modulo() {
        let f = PrimeField::default();
        let g = PrimeField::new(MERSENNE_61);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10_000 {
            let x = f.random(&mut rng);
            let y = f.random(&mut rng);
            let expect = ((x as u128 * y as u128) % MERSENNE_61 as u128) as u64;
            assert_eq!(g.mul(&x, &y), expect);
        }
        assert_eq!(f.mul(&(MERSENNE_61 - 1), &(MERSENNE_61 - 1)), 1);
    }

    #[test]
    fn inverses() {
        for f in [PrimeField::default(), PrimeField::new(101)] {
            let mut rng = ChaCha8Rng::seed_from_u64(2);
            for _ in 0..100 {
                let x = f.random_nonzero(&mut rng);
                assert_eq!(f.mul(&x, &f.inv(&x).unwrap()), 1);
            }
            assert!(f.inv(&0).is_none());
            assert_eq!(f.of_i64(-1), f.modulus() - 1);
            assert_eq!(f.sub(&0, &1), f.modulus() - 1);
        }
    }
}
