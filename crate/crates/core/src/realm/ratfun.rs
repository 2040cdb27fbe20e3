//! Rational functions over `Z[C, x1, ..., xn]`, kept in lowest terms.
//!
//! Variable 0 is the constant `C`. Values are reduced by a full multivariate
//! gcd after every operation and carry a denominator with positive leading
//! coefficient, so printed forms are canonical.

use std::fmt;

use num_bigint::BigInt;
use rand::Rng;

use super::poly::{gcd, Poly};
use super::{GenericSample, Realm, Singular};
use crate::error::{Error, Result};
use crate::poset::FinitePoset;
use crate::transfer::Labeling;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn from_poly(p: Poly) -> Self {
        Self { num: p, den: Poly::one() }
    }

    /// `num / den` in lowest terms; `None` when `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        Some(Self::reduce(num, den))
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn integer(n: i64) -> Self {
        Self::from_poly(Poly::constant(n.into()))
    }

    pub fn var(v: usize) -> Self {
        Self::from_poly(Poly::var(v))
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).expect("gcd divides"), den.exact_div(&g).expect("gcd divides"))
        };
        let (den, flipped) = den.normalize_sign();
        let num = if flipped { -num } else { num };
        Self { num, den }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self::reduce(&self.num + &other.num, self.den.clone());
        }
        let g = gcd(&self.den, &other.den);
        let bd = self.den.exact_div(&g).expect("gcd divides");
        let dd = other.den.exact_div(&g).expect("gcd divides");
        let num = &(&self.num * &dd) + &(&other.num * &bd);
        Self::reduce(num, &self.den * &dd)
    }

    pub fn neg(&self) -> Self {
        Self { num: -self.num.clone(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        // cross-cancel so the result is already in lowest terms
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let a = self.num.exact_div(&g1).expect("gcd divides");
        let d = other.den.exact_div(&g1).expect("gcd divides");
        let c = other.num.exact_div(&g2).expect("gcd divides");
        let b = self.den.exact_div(&g2).expect("gcd divides");
        let (den, flipped) = (&b * &d).normalize_sign();
        let num = &a * &c;
        Self { num: if flipped { -num } else { num }, den }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let (den, flipped) = self.num.clone().normalize_sign();
        let num = if flipped { -self.den.clone() } else { self.den.clone() };
        Some(Self { num, den })
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        Some(self.mul(&other.inv()?))
    }

    /// Equality by cross-multiplication.
    pub fn same_as(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }

    /// Value at `values[v]` for variable `v`, modulo `p`; `None` when the
    /// denominator vanishes there.
    pub fn eval_mod(&self, values: &[u64], p: u64) -> Option<u64> {
        let n = self.num.eval_mod(values, p);
        let d = self.den.eval_mod(values, p);
        if d == 0 {
            return None;
        }
        let f = super::PrimeField::new(p);
        Some(super::ScalarField::mul(&f, &n, &f.pow(d, p - 2)))
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> RatFunDisplay<'a> {
        RatFunDisplay { value: self, names }
    }
}

pub struct RatFunDisplay<'a> {
    value: &'a RatFun,
    names: &'a [String],
}

impl fmt::Display for RatFunDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.value.num.display_with(self.names).to_string();
        if self.value.den.is_one() {
            return write!(f, "{num}");
        }
        let wrap = |p: &Poly, s: String| if p.terms().len() > 1 { format!("({s})") } else { s };
        let num = wrap(&self.value.num, num);
        let den = self.value.den.display_with(self.names).to_string();
        let den = if self.value.den.terms().len() > 1 || self.value.den.total_degree() > 0 && den.contains('*') {
            format!("({den})")
        } else {
            den
        };
        write!(f, "{num}/{den}")
    }
}

/// Symbolic realm over named variables; `names[0]` is `"C"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFunRealm {
    names: Vec<String>,
}

impl RatFunRealm {
    /// A realm with `C` and `n` element variables. Up to 26 variables use the
    /// last `n` letters of the alphabet, more use `x1, ..., xn`.
    pub fn with_vars(n: usize) -> Self {
        let mut names = vec!["C".to_string()];
        if n <= 26 {
            names.extend((26 - n..26).map(|k| char::from(b'a' + k as u8).to_string()));
        } else {
            names.extend((1..=n).map(|k| format!("x{k}")));
        }
        Self { names }
    }

    /// A realm with one variable per element of `poset`.
    pub fn for_poset(poset: &FinitePoset) -> Self {
        Self::with_vars(poset.len())
    }

    pub fn from_names(names: Vec<String>) -> Self {
        Self { names }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn var(&self, v: usize) -> RatFun {
        RatFun::var(v)
    }

    pub fn var_named(&self, name: &str) -> Option<RatFun> {
        self.names.iter().position(|n| n == name).map(RatFun::var)
    }

    /// The generic labeling: the `k`-th element of the linear extension
    /// carries variable `k + 1`.
    pub fn generic_labeling(&self, poset: &FinitePoset) -> Labeling<RatFun> {
        let mut labels = vec![RatFun::zero(); poset.len()];
        for (k, &x) in poset.linear_extension().iter().enumerate() {
            labels[x] = RatFun::var(k + 1);
        }
        Labeling::new(labels)
    }

    pub fn format(&self, v: &RatFun) -> String {
        v.display_with(&self.names).to_string()
    }

    /// Parses an expression in `+ - * / ^`, parentheses, integers and this
    /// realm's variable names. Multiplication must be written explicitly.
    pub fn parse(&self, src: &str) -> Result<RatFun> {
        let tokens = tokenize(src)?;
        let mut p = Parser { realm: self, tokens, pos: 0 };
        let v = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Parse(format!("trailing input in {src:?}")));
        }
        Ok(v)
    }
}

impl Realm for RatFunRealm {
    type Value = RatFun;

    fn name(&self) -> &'static str {
        "ratfun"
    }

    fn is_commutative(&self) -> bool {
        true
    }

    fn add(&self, x: &RatFun, y: &RatFun) -> RatFun {
        x.add(y)
    }

    fn mul(&self, x: &RatFun, y: &RatFun) -> RatFun {
        x.mul(y)
    }

    fn inv(&self, x: &RatFun) -> Result<RatFun, Singular> {
        x.inv().ok_or(Singular)
    }

    fn one(&self) -> RatFun {
        RatFun::one()
    }

    fn constant(&self) -> RatFun {
        RatFun::var(0)
    }

    fn equal(&self, x: &RatFun, y: &RatFun) -> bool {
        x.same_as(y)
    }
}

impl GenericSample for RatFunRealm {
    fn sample_labeling<G: Rng + ?Sized>(&self, poset: &FinitePoset, _rng: &mut G) -> Labeling<RatFun> {
        self.generic_labeling(poset)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token::Num(s.parse().expect("digits")));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    realm: &'a RatFunRealm,
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser<'_> {
    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some(Token::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<RatFun> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFun> {
        let mut acc = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if op == '*' {
                acc.mul(&rhs)
            } else {
                acc.div(&rhs).ok_or_else(|| Error::Parse("division by zero".into()))?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatFun> {
        if self.peek_op() == Some('-') {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFun> {
        let base = self.atom()?;
        if self.peek_op() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let negative = self.peek_op() == Some('-');
        if negative {
            self.pos += 1;
        }
        let e: u32 = match self.tokens.get(self.pos) {
            Some(Token::Num(n)) => n.try_into().map_err(|_| Error::Parse("exponent too large".into()))?,
            _ => return Err(Error::Parse("expected integer exponent".into())),
        };
        self.pos += 1;
        let v = (0..e).fold(RatFun::one(), |acc, _| acc.mul(&base));
        if negative {
            v.inv().ok_or_else(|| Error::Parse("division by zero".into()))
        } else {
            Ok(v)
        }
    }

    fn atom(&mut self) -> Result<RatFun> {
        let tok = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        match tok {
            Some(Token::Num(n)) => Ok(RatFun::from_poly(Poly::constant(n))),
            Some(Token::Ident(name)) => {
                self.realm.var_named(&name).ok_or_else(|| Error::Parse(format!("unknown variable {name:?}")))
            }
            Some(Token::Op('(')) => {
                let v = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(Error::Parse("expected ')'".into()));
                }
                self.pos += 1;
                Ok(v)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}
