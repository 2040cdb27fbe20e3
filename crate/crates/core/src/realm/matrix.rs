//! Square matrices over a scalar field, the evaluation model for the
//! noncommutative realm.
//!
//! A rational identity in a skew field is accepted when it holds exactly on
//! independent random samples at several matrix sizes. `d = 1` alone would also
//! accept identities that only hold commutatively. `C` is `c * I` for a scalar
//! `c`, which is central by construction.

use rand::Rng;

use super::field::{PrimeField, RationalField, ScalarField};
use super::{GenericSample, Realm, Singular};
use crate::poset::FinitePoset;
use crate::transfer::Labeling;

/// A dense `d x d` matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix<E> {
    d: usize,
    entries: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_rows(rows: Vec<Vec<E>>) -> Option<Self> {
        let d = rows.len();
        if d == 0 || rows.iter().any(|r| r.len() != d) {
            return None;
        }
        Some(Self { d, entries: rows.into_iter().flatten().collect() })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.entries[i * self.d + j]
    }

    pub fn rows(&self) -> Vec<Vec<E>> {
        self.entries.chunks(self.d).map(<[E]>::to_vec).collect()
    }

    pub fn entries(&self) -> &[E] {
        &self.entries
    }
}

/// The matrix realm: `d x d` matrices over `F` with `C = c * I`.
#[derive(Debug, Clone)]
pub struct MatrixRealm<F: ScalarField> {
    field: F,
    d: usize,
    c: F::Elem,
}

pub type MatP = MatrixRealm<PrimeField>;
pub type MatQ = MatrixRealm<RationalField>;

impl<F: ScalarField> MatrixRealm<F> {
    /// Panics if `d == 0` or `c == 0`.
    pub fn new(field: F, d: usize, c: F::Elem) -> Self {
        assert!(d >= 1, "matrix dimension must be positive");
        assert!(!field.is_zero(&c), "the constant C must be invertible");
        Self { field, d, c }
    }

    /// A realm whose constant scalar is drawn uniformly from the nonzero elements.
    pub fn with_random_constant<G: Rng + ?Sized>(field: F, d: usize, rng: &mut G) -> Self {
        let c = field.random_nonzero(rng);
        Self::new(field, d, c)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn c(&self) -> &F::Elem {
        &self.c
    }

    pub fn scalar(&self, s: F::Elem) -> Matrix<F::Elem> {
        let mut entries = vec![self.field.zero(); self.d * self.d];
        for i in 0..self.d {
            entries[i * self.d + i] = s.clone();
        }
        Matrix { d: self.d, entries }
    }

    /// Wraps entries given row-major; `None` on a size mismatch.
    pub fn matrix(&self, entries: Vec<F::Elem>) -> Option<Matrix<F::Elem>> {
        (entries.len() == self.d * self.d).then_some(Matrix { d: self.d, entries })
    }

    pub fn random_matrix<G: Rng + ?Sized>(&self, rng: &mut G) -> Matrix<F::Elem> {
        Matrix { d: self.d, entries: (0..self.d * self.d).map(|_| self.field.random(rng)).collect() }
    }

    pub fn sub(&self, x: &Matrix<F::Elem>, y: &Matrix<F::Elem>) -> Matrix<F::Elem> {
        Matrix { d: self.d, entries: x.entries.iter().zip(&y.entries).map(|(a, b)| self.field.sub(a, b)).collect() }
    }

    /// Gauss-Jordan inversion.
    fn invert(&self, m: &Matrix<F::Elem>) -> Option<Matrix<F::Elem>> {
        let d = self.d;
        let f = &self.field;
        if d == 1 {
            return f.inv(&m.entries[0]).map(|v| Matrix { d, entries: vec![v] });
        }
        let w = 2 * d;
        let mut aug = vec![f.zero(); d * w];
        for i in 0..d {
            for j in 0..d {
                aug[i * w + j] = m.entries[i * d + j].clone();
            }
            aug[i * w + d + i] = f.one();
        }
        for col in 0..d {
            let pivot = (col..d).find(|&r| !f.is_zero(&aug[r * w + col]))?;
            if pivot != col {
                for k in 0..w {
                    aug.swap(pivot * w + k, col * w + k);
                }
            }
            let inv = f.inv(&aug[col * w + col])?;
            for k in col..w {
                aug[col * w + k] = f.mul(&aug[col * w + k], &inv);
            }
            for r in 0..d {
                if r == col || f.is_zero(&aug[r * w + col]) {
                    continue;
                }
                let factor = aug[r * w + col].clone();
                for k in col..w {
                    let t = f.mul(&factor, &aug[col * w + k]);
                    aug[r * w + k] = f.sub(&aug[r * w + k], &t);
                }
            }
        }
        let entries = (0..d).flat_map(|i| aug[i * w + d..i * w + w].to_vec()).collect();
        Some(Matrix { d, entries })
    }
}

impl<F: ScalarField> Realm for MatrixRealm<F> {
    type Value = Matrix<F::Elem>;

    fn name(&self) -> &'static str {
        "matrix"
    }

    fn is_commutative(&self) -> bool {
        self.d == 1
    }

    fn add(&self, x: &Self::Value, y: &Self::Value) -> Self::Value {
        debug_assert_eq!(x.d, y.d);
        Matrix { d: self.d, entries: x.entries.iter().zip(&y.entries).map(|(a, b)| self.field.add(a, b)).collect() }
    }

    fn mul(&self, x: &Self::Value, y: &Self::Value) -> Self::Value {
        debug_assert_eq!(x.d, y.d);
        let d = self.d;
        let f = &self.field;
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = f.mul(&x.entries[i * d], &y.entries[j]);
                for k in 1..d {
                    acc = f.add(&acc, &f.mul(&x.entries[i * d + k], &y.entries[k * d + j]));
                }
                entries.push(acc);
            }
        }
        Matrix { d, entries }
    }

    fn inv(&self, x: &Self::Value) -> Result<Self::Value, Singular> {
        self.invert(x).ok_or(Singular)
    }

    fn one(&self) -> Self::Value {
        self.scalar(self.field.one())
    }

    fn constant(&self) -> Self::Value {
        self.scalar(self.c.clone())
    }

    fn equal(&self, x: &Self::Value, y: &Self::Value) -> bool {
        x == y
    }
}

impl<F: ScalarField> GenericSample for MatrixRealm<F> {
    fn sample_labeling<G: Rng + ?Sized>(&self, poset: &FinitePoset, rng: &mut G) -> Labeling<Self::Value> {
        Labeling::new((0..poset.len()).map(|_| self.random_matrix(rng)).collect())
    }
}
