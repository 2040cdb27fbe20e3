//! Value domains for poset labelings.
//!
//! Every rowmotion map in this crate is written once against [`Realm`], in
//! noncommutative factor order. The concrete realms are
//!
//! * [`TropicalRealm`]: exact rationals under `(max, +, negation, 0)`;
//! * [`RatFunRealm`]: rational functions over `Z[C, x1, x2, ...]`;
//! * [`MatrixRealm`]: `d x d` matrices over a prime field or the rationals,
//!   the evaluation model for skew-field identities.
//!
//! The distinguished constant `C` must commute with every value.

pub mod field;
pub mod matrix;
pub mod poly;
pub mod ratfun;
pub mod tropical;

use rand::Rng;

use crate::poset::FinitePoset;
use crate::transfer::Labeling;

pub use field::{PrimeField, RationalField, ScalarField, MERSENNE_61};
pub use matrix::{MatP, MatQ, Matrix, MatrixRealm};
pub use poly::{Monomial, Poly};
pub use ratfun::{RatFun, RatFunRealm};
pub use tropical::TropicalRealm;

/// Raised by [`Realm::inv`] on a non-invertible value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Singular;

/// The algebra contract shared by every realm.
pub trait Realm: Send + Sync {
    type Value: Clone + std::fmt::Debug + Send + Sync;

    fn name(&self) -> &'static str;

    /// True when `mul` is commutative on every pair of values.
    fn is_commutative(&self) -> bool;

    fn is_tropical(&self) -> bool {
        false
    }

    fn add(&self, x: &Self::Value, y: &Self::Value) -> Self::Value;
    fn mul(&self, x: &Self::Value, y: &Self::Value) -> Self::Value;
    fn inv(&self, x: &Self::Value) -> Result<Self::Value, Singular>;
    fn one(&self) -> Self::Value;
    /// The central constant `C`.
    fn constant(&self) -> Self::Value;
    /// Realm equality (exact).
    fn equal(&self, x: &Self::Value, y: &Self::Value) -> bool;

    /// Sum of a nonempty sequence; `one()` for an empty one.
    fn sum_or_one<'a, I>(&self, values: I) -> Self::Value
    where
        I: IntoIterator<Item = &'a Self::Value>,
        Self::Value: 'a,
    {
        let mut it = values.into_iter();
        match it.next() {
            None => self.one(),
            Some(first) => it.fold(first.clone(), |acc, v| self.add(&acc, v)),
        }
    }

    /// Left-to-right product; `one()` for an empty sequence.
    fn product<'a, I>(&self, values: I) -> Self::Value
    where
        I: IntoIterator<Item = &'a Self::Value>,
        Self::Value: 'a,
    {
        let mut it = values.into_iter();
        match it.next() {
            None => self.one(),
            Some(first) => it.fold(first.clone(), |acc, v| self.mul(&acc, v)),
        }
    }

    /// `x` raised to a nonnegative integer power.
    fn pow(&self, x: &Self::Value, e: usize) -> Self::Value {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, x))
    }

    fn labelings_eq(&self, f: &Labeling<Self::Value>, g: &Labeling<Self::Value>) -> bool {
        f.len() == g.len() && f.iter().zip(g.iter()).all(|(x, y)| self.equal(x, y))
    }
}

/// Realms that can produce generic labelings.
pub trait GenericSample: Realm {
    fn sample_labeling<G: Rng + ?Sized>(&self, poset: &FinitePoset, rng: &mut G) -> Labeling<Self::Value>;
}
