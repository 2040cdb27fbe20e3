//! Sparse multivariate polynomials over `Z`.
//!
//! Terms are kept sorted in descending graded-lexicographic order with
//! variable 0 largest. Exponent vectors are trimmed of trailing zeros so
//! that structural equality is polynomial equality.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Exponent vector `x0^e0 * x1^e1 * ...` without trailing zeros.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u16>);

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn var(v: usize) -> Self {
        let mut e = vec![0; v + 1];
        e[v] = 1;
        Self(e)
    }

    pub fn from_exponents(mut e: Vec<u16>) -> Self {
        while e.last() == Some(&0) {
            e.pop();
        }
        Self(e)
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn exp(&self, v: usize) -> u16 {
        self.0.get(v).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| u32::from(e)).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (long, short) = if self.0.len() >= other.0.len() { (self, other) } else { (other, self) };
        let mut e = long.0.clone();
        for (x, &y) in e.iter_mut().zip(&short.0) {
            *x = x.checked_add(y).expect("exponent overflow");
        }
        Self(e)
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.0.len() <= other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Self) -> Option<Self> {
        if !other.divides(self) {
            return None;
        }
        let mut e = self.0.clone();
        for (x, &y) in e.iter_mut().zip(&other.0) {
            *x -= y;
        }
        Some(Self::from_exponents(e))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        Self::from_exponents(self.0.iter().zip(&other.0).map(|(&a, &b)| a.min(b)).collect())
    }

    fn with_exp(&self, v: usize, e: u16) -> Self {
        let mut x = self.0.clone();
        if x.len() <= v {
            x.resize(v + 1, 0);
        }
        x[v] = e;
        Self::from_exponents(x)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        // trimmed vectors compare like zero-padded ones
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial with integer coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    // descending grlex, no zero coefficients
    terms: Vec<(Monomial, BigInt)>,
}

impl Poly {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::monomial(Monomial::one(), c)
    }

    pub fn var(v: usize) -> Self {
        Self::monomial(Monomial::var(v), BigInt::one())
    }

    pub fn monomial(m: Monomial, c: BigInt) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Self { terms: vec![(m, c)] }
        }
    }

    /// Collects arbitrary terms, combining like monomials.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigInt)>>(terms: I) -> Self {
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_insert_with(BigInt::zero) += c;
        }
        Self { terms: acc.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn terms(&self) -> &[(Monomial, BigInt)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading(&self) -> Option<&(Monomial, BigInt)> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map_or(0, |(m, _)| m.degree())
    }

    /// Number of variable slots used (one past the largest variable index).
    pub fn num_vars(&self) -> usize {
        self.terms.iter().map(|(m, _)| m.0.len()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: usize) -> u16 {
        self.terms.iter().map(|(m, _)| m.exp(v)).max().unwrap_or(0)
    }

    pub fn contains_var(&self, v: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exp(v) > 0)
    }

    /// Positive gcd of the coefficients (0 for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.terms.iter().fold(BigInt::zero(), |g, (_, c)| g.gcd(c))
    }

    /// Gcd of all monomials.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        match it.next() {
            None => Monomial::one(),
            Some((m, _)) => it.fold(m.clone(), |g, (m, _)| g.gcd(m)),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn mul_term(&self, m: &Monomial, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(n, x)| (n.mul(m), x * c)).collect() }
    }

    /// Divides every coefficient exactly by `c`.
    pub fn div_integer(&self, c: &BigInt) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, x)| {
                    debug_assert!((x % c).is_zero());
                    (m.clone(), x / c)
                })
                .collect(),
        }
    }

    pub fn div_monomial(&self, m: &Monomial) -> Option<Self> {
        let terms = self.terms.iter().map(|(n, c)| n.div(m).map(|q| (q, c.clone()))).collect::<Option<Vec<_>>>()?;
        Some(Self { terms })
    }

    /// Flips the sign so the leading coefficient is positive; reports whether it flipped.
    pub fn normalize_sign(self) -> (Self, bool) {
        match self.terms.first() {
            Some((_, c)) if c.is_negative() => (-self, true),
            _ => (self, false),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (dm, dc) = d.leading()?;
        if d.is_monomial() {
            let terms = self
                .terms
                .iter()
                .map(|(m, c)| {
                    let q = m.div(dm)?;
                    let (quot, rem) = c.div_rem(dc);
                    rem.is_zero().then_some((q, quot))
                })
                .collect::<Option<Vec<_>>>()?;
            return Some(Self { terms });
        }
        let mut rem = self.clone();
        let mut quotient = Vec::new();
        while let Some((rm, rc)) = rem.leading().cloned() {
            let qm = rm.div(dm)?;
            let (qc, r) = rc.div_rem(dc);
            if !r.is_zero() {
                return None;
            }
            rem = &rem - &d.mul_term(&qm, &qc);
            quotient.push((qm, qc));
        }
        // quotient terms were produced in strictly descending order
        Some(Self { terms: quotient })
    }

    /// Coefficients of `self` as a polynomial in `x_v`; index `k` holds the
    /// coefficient of `x_v^k` (free of `x_v`).
    pub fn to_univariate(&self, v: usize) -> Vec<Poly> {
        let deg = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Monomial, BigInt)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            buckets[e].push((m.with_exp(v, 0), c.clone()));
        }
        buckets.into_iter().map(Poly::from_terms).collect()
    }

    pub fn from_univariate(v: usize, coeffs: &[Poly]) -> Self {
        Self::from_terms(coeffs.iter().enumerate().flat_map(|(k, p)| {
            let shift = Monomial::var(v);
            let shift = Monomial::from_exponents(shift.0.iter().map(|&e| e * k as u16).collect());
            p.terms.iter().map(move |(m, c)| (m.mul(&shift), c.clone()))
        }))
    }

    /// Evaluates modulo `p` with `values[v]` substituted for `x_v`.
    pub fn eval_mod(&self, values: &[u64], p: u64) -> u64 {
        let big_p = BigInt::from(p);
        let mulmod = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let r = ((c % &big_p) + &big_p) % &big_p;
            let mut t: u64 = r.try_into().expect("residue fits");
            for (v, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = mulmod(t, values[v]);
                }
            }
            acc = ((acc as u128 + t as u128) % p as u128) as u64;
        }
        acc
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }

    fn merge(&self, other: &Self, negate_other: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let take_other = |c: &BigInt| if negate_other { -c } else { c.clone() };
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match ma.cmp(mb) {
                Ordering::Greater => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((mb.clone(), take_other(cb)));
                    j += 1;
                }
                Ordering::Equal => {
                    let s = if negate_other { ca - cb } else { ca + cb };
                    if !s.is_zero() {
                        out.push((ma.clone(), s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().map(|(m, c)| (m.clone(), take_other(c))));
        Self { terms: out }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.merge(rhs, false)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.merge(rhs, true)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if rhs.is_monomial() {
            let (m, c) = &rhs.terms[0];
            return self.mul_term(m, c);
        }
        if self.is_monomial() {
            let (m, c) = &self.terms[0];
            return rhs.mul_term(m, c);
        }
        Poly::from_terms(
            self.terms.iter().flat_map(|(ma, ca)| rhs.terms.iter().map(move |(mb, cb)| (ma.mul(mb), ca * cb))),
        )
    }
}

/// Greatest common divisor with positive leading coefficient.
///
/// Recursive on the smallest variable present: contents are taken in the
/// remaining variables, primitive parts are combined by a primitive
/// pseudo-remainder sequence.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.clone().normalize_sign().0;
    }
    if b.is_zero() {
        return a.clone().normalize_sign().0;
    }
    if a.is_monomial() || b.is_monomial() || a.is_constant() || b.is_constant() {
        return monomial_gcd(a, b);
    }
    if b.exact_div(a).is_some() {
        return a.clone().normalize_sign().0;
    }
    if a.exact_div(b).is_some() {
        return b.clone().normalize_sign().0;
    }

    let nvars = a.num_vars().max(b.num_vars());
    let v = (0..nvars)
        .find(|&v| a.contains_var(v) || b.contains_var(v))
        .expect("nonconstant polynomials mention a variable");

    let (ca, pa) = split_content(a, v);
    let (cb, pb) = split_content(b, v);
    let content = gcd(&ca, &cb);

    let prim = if pa.contains_var(v) && pb.contains_var(v) { primitive_prs(pa, pb, v) } else { Poly::one() };
    (&content * &prim).normalize_sign().0
}

/// `gcd` when one side is a monomial or constant: only the shared monomial
/// and integer content can divide both.
fn monomial_gcd(a: &Poly, b: &Poly) -> Poly {
    let c = a.content().gcd(&b.content());
    let m = a.monomial_content().gcd(&b.monomial_content());
    Poly::monomial(m, c)
}

/// Content with respect to `x_v` (a polynomial free of `x_v`) and primitive part.
fn split_content(p: &Poly, v: usize) -> (Poly, Poly) {
    if !p.contains_var(v) {
        return (p.clone(), Poly::one());
    }
    let coeffs = p.to_univariate(v);
    let mut content = Poly::zero();
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        content = gcd(&content, c);
        if content.is_one() {
            break;
        }
    }
    let (content, _) = content.normalize_sign();
    let prim = p.exact_div(&content).expect("content divides");
    (content, prim)
}

fn primitive_prs(a: Poly, b: Poly, v: usize) -> Poly {
    let (mut f, mut g) = if a.degree_in(v) >= b.degree_in(v) { (a, b) } else { (b, a) };
    loop {
        if g.is_zero() {
            return split_content(&f, v).1;
        }
        if !g.contains_var(v) {
            // nonzero and free of x_v: primitive parts are coprime in x_v
            return Poly::one();
        }
        let r = pseudo_remainder(&f, &g, v);
        f = g;
        g = if r.is_zero() { r } else { split_content(&r, v).1 };
    }
}

/// `lc(g)^k * f mod g` in `x_v`, computed one leading term at a time.
fn pseudo_remainder(f: &Poly, g: &Poly, v: usize) -> Poly {
    let dg = g.degree_in(v);
    let gu = g.to_univariate(v);
    let lc = gu.last().expect("g mentions x_v").clone();
    let mut r = f.clone();
    while !r.is_zero() && r.degree_in(v) >= dg {
        let dr = r.degree_in(v);
        let lr = r.to_univariate(v).pop().expect("nonzero");
        let shift = Monomial::from_exponents({
            let mut e = vec![0u16; v + 1];
            e[v] = dr - dg;
            e
        });
        let t = &lr * g;
        r = &(&lc * &r) - &t.mul_term(&shift, &BigInt::one());
    }
    r
}

pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.poly.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for (v, &e) in m.0.iter().enumerate() {
                let name = self.names.get(v).cloned().unwrap_or_else(|| format!("x{v}"));
                match e {
                    0 => {}
                    1 => factors.push(name),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x(v: usize) -> Poly {
        Poly::var(v)
    }

    fn c(n: i64) -> Poly {
        Poly::constant(n.into())
    }

    #[test]
    fn grlex_order() {
        let a = Monomial::from_exponents(vec![2]);
        let b = Monomial::from_exponents(vec![1, 1]);
        let z = Monomial::from_exponents(vec![0, 0, 3]);
        assert!(a > b);
        assert!(z > a);
        assert!(Monomial::var(0) > Monomial::var(1));
        assert!(Monomial::var(1) > Monomial::one());
    }

    #[test]
    fn arithmetic_basics() {
        let p = &x(1) + &x(2);
        let q = &p * &p;
        assert_eq!(q.terms().len(), 3);
        assert_eq!(&q - &q, Poly::zero());
        assert_eq!(q.exact_div(&p).unwrap(), p);
        assert!(q.exact_div(&(&x(1) + &c(1))).is_none());
        assert_eq!((&p * &c(6)).content(), 6.into());
    }

    #[test]
    fn gcd_examples() {
        let xy = &x(1) + &x(2);
        let a = &(&xy * &x(3)) * &c(4);
        let b = &(&xy * &(&x(3) + &c(1))) * &c(6);
        assert_eq!(gcd(&a, &b), &xy * &c(2));

        // vx + wx + wy against (x + y): coprime
        let t = &(&(&x(2) * &x(4)) + &(&x(3) * &x(4))) + &(&x(3) * &x(5));
        let s = &x(4) + &x(5);
        assert!(gcd(&t, &s).is_one());

        assert_eq!(gcd(&Poly::zero(), &(-xy.clone())), xy);
        assert_eq!(gcd(&(&x(1) * &x(2)), &(&x(1) * &x(3))), x(1));
    }

    #[test]
    fn univariate_round_trip() {
        let p = &(&(&x(0) * &x(1)) + &(&x(1) * &x(1))) + &c(3);
        for v in 0..3 {
            assert_eq!(Poly::from_univariate(v, &p.to_univariate(v)), p);
        }
    }

    #[test]
    fn display() {
        let names: Vec<String> = ["C", "x", "y"].iter().map(|s| s.to_string()).collect();
        let p = &(&(&x(1) * &x(1)) - &(&x(2) * &c(2))) + &c(1);
        assert_eq!(p.display_with(&names).to_string(), "x^2 - 2*y + 1");
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec((prop::collection::vec(0u16..3, 0..4), -4i64..5), 0..5).prop_map(|terms| {
            Poly::from_terms(terms.into_iter().map(|(e, c)| (Monomial::from_exponents(e), BigInt::from(c))))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn gcd_divides_both_and_is_maximal(a in arb_poly(), b in arb_poly(), h in arb_poly()) {
            prop_assume!(!h.is_zero());
            let ah = &a * &h;
            let bh = &b * &h;
            let g = gcd(&ah, &bh);
            if ah.is_zero() && bh.is_zero() {
                prop_assert!(g.is_zero());
            } else {
                prop_assert!(ah.exact_div(&g).is_some());
                prop_assert!(bh.exact_div(&g).is_some());
                // h divides both, so it must divide the gcd
                prop_assert!(g.exact_div(&h).is_some());
            }
        }

        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), d in arb_poly()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) * &d, &(&a * &d) + &(&b * &d));
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
            if !b.is_zero() {
                prop_assert_eq!((&a * &b).exact_div(&b), Some(a.clone()));
            }
        }

        #[test]
        fn eval_is_a_ring_map(a in arb_poly(), b in arb_poly(), vals in prop::collection::vec(0u64..1000, 4)) {
            let p = 1_000_003u64;
            let ea = a.eval_mod(&vals, p);
            let eb = b.eval_mod(&vals, p);
            prop_assert_eq!((&a * &b).eval_mod(&vals, p), ((ea as u128 * eb as u128) % p as u128) as u64);
            prop_assert_eq!((&a + &b).eval_mod(&vals, p), (ea + eb) % p);
        }
    }
}
