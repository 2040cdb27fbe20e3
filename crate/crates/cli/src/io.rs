//! JSON formats for posets, labelings and realm values.

use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use rowmotion_core::realm::{MatP, MatQ, Matrix, RatFun, RatFunRealm, TropicalRealm};
use rowmotion_core::{build_named_poset, product_of_chains, FinitePoset, Labeling, Realm};

/// Parses `"p/q"`, an integer, or a decimal such as `"0.25"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            bail!("malformed decimal {s:?}");
        }
        let negative = int.starts_with('-');
        let whole: BigInt = if int.is_empty() || int == "-" { BigInt::from(0) } else { int.parse()? };
        let scale = BigInt::from(10).pow(frac.len() as u32);
        let mut num = BigInt::from(whole.magnitude().clone()) * &scale + frac.parse::<BigInt>()?;
        if negative {
            num = -num;
        }
        return Ok(BigRational::new(num, scale));
    }
    let q = BigRational::from_str(s).map_err(|e| anyhow!("malformed rational {s:?}: {e}"))?;
    Ok(q)
}

pub fn format_rational(q: &BigRational) -> String {
    q.to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum ElementName {
    Int(u64),
    Text(String),
}

impl ElementName {
    fn into_string(self) -> String {
        match self {
            Self::Int(v) => v.to_string(),
            Self::Text(s) => s,
        }
    }
}

/// `{"chains": [a, b]}` or `{"elements": [...], "covers": [[lo, hi], ...]}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum PosetFile {
    Chains { chains: [usize; 2] },
    Explicit { elements: Vec<ElementName>, covers: Vec<[ElementName; 2]> },
}

impl PosetFile {
    pub fn chains(a: usize, b: usize) -> Self {
        Self::Chains { chains: [a, b] }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .context("poset file must be {\"chains\":[a,b]} or {\"elements\":[...],\"covers\":[...]}")
    }

    pub fn build(&self) -> Result<FinitePoset> {
        Ok(match self {
            Self::Chains { chains: [a, b] } => product_of_chains(*a, *b)?.into_poset(),
            Self::Explicit { elements, covers } => {
                let names: Vec<String> = elements.iter().cloned().map(ElementName::into_string).collect();
                let pairs: Vec<(String, String)> =
                    covers.iter().map(|[lo, hi]| (lo.clone().into_string(), hi.clone().into_string())).collect();
                build_named_poset(&names, &pairs)?
            }
        })
    }
}

/// The canonical echo of a validated poset.
#[derive(Debug, Clone, Serialize)]
pub struct PosetSummary {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chains: Option<[usize; 2]>,
    pub elements: Vec<String>,
    /// Irredundant cover relations, sorted.
    pub covers: Vec<[String; 2]>,
    pub linear_extension: Vec<String>,
    pub minimal: Vec<String>,
    pub maximal: Vec<String>,
    pub antichains: usize,
}

impl PosetSummary {
    pub fn of(poset: &FinitePoset) -> Self {
        let names = |ids: &[usize]| ids.iter().map(|&x| poset.name(x).to_string()).collect::<Vec<_>>();
        Self {
            chains: poset.grid().map(|g| [g.a, g.b]),
            elements: poset.names().to_vec(),
            covers: poset.covers().into_iter().map(|(x, y)| [poset.name(x).into(), poset.name(y).into()]).collect(),
            linear_extension: names(poset.linear_extension()),
            minimal: names(&poset.minimal_elements()),
            maximal: names(&poset.maximal_elements()),
            antichains: poset.antichains().len(),
        }
    }
}

/// JSON encoding of realm values.
pub trait ValueCodec: Realm {
    fn encode(&self, v: &Self::Value) -> Value;
    fn decode(&self, v: &Value) -> Result<Self::Value>;
}

fn as_text(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => bail!("expected a string or number, got {other}"),
    }
}

impl ValueCodec for TropicalRealm {
    fn encode(&self, v: &BigRational) -> Value {
        Value::String(format_rational(v))
    }

    fn decode(&self, v: &Value) -> Result<BigRational> {
        parse_rational(&as_text(v)?)
    }
}

impl ValueCodec for RatFunRealm {
    fn encode(&self, v: &RatFun) -> Value {
        Value::String(self.format(v))
    }

    fn decode(&self, v: &Value) -> Result<RatFun> {
        Ok(self.parse(&as_text(v)?)?)
    }
}

fn matrix_rows<E: Clone>(m: &Matrix<E>, f: impl Fn(&E) -> Value) -> Value {
    Value::Array(m.rows().iter().map(|row| Value::Array(row.iter().map(&f).collect())).collect())
}

/// Accepts a row-major nested array, or a bare scalar when `d = 1`.
fn matrix_entries(d: usize, v: &Value) -> Result<Vec<Value>> {
    match v {
        Value::Array(rows) if rows.len() == d && rows.iter().all(Value::is_array) => {
            let mut out = Vec::with_capacity(d * d);
            for row in rows {
                let row = row.as_array().expect("checked");
                if row.len() != d {
                    bail!("matrix rows must have length {d}");
                }
                out.extend(row.iter().cloned());
            }
            Ok(out)
        }
        Value::String(_) | Value::Number(_) if d == 1 => Ok(vec![v.clone()]),
        _ => bail!("expected a {d}x{d} array of rows"),
    }
}

impl ValueCodec for MatP {
    fn encode(&self, v: &Matrix<u64>) -> Value {
        matrix_rows(v, |&e| Value::from(e))
    }

    fn decode(&self, v: &Value) -> Result<Matrix<u64>> {
        let entries = matrix_entries(self.dim(), v)?
            .iter()
            .map(|e| {
                let n: BigInt = as_text(e)?.trim().parse().context("matp entries are integers")?;
                Ok(self.field().from_bigint(&n))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.matrix(entries).expect("size checked"))
    }
}

impl ValueCodec for MatQ {
    fn encode(&self, v: &Matrix<BigRational>) -> Value {
        matrix_rows(v, |e| Value::String(format_rational(e)))
    }

    fn decode(&self, v: &Value) -> Result<Matrix<BigRational>> {
        let entries =
            matrix_entries(self.dim(), v)?.iter().map(|e| parse_rational(&as_text(e)?)).collect::<Result<Vec<_>>>()?;
        Ok(self.matrix(entries).expect("size checked"))
    }
}

/// `{"name": value, ...}`, keyed and ordered by element.
pub fn labeling_to_json<R: ValueCodec>(realm: &R, poset: &FinitePoset, g: &Labeling<R::Value>) -> Value {
    let mut map = Map::new();
    for (x, v) in g.iter().enumerate() {
        map.insert(poset.name(x).to_string(), realm.encode(v));
    }
    Value::Object(map)
}

/// Reads a name-to-value object, optionally wrapped as `{"labels": {...}}`.
/// Every element must be labeled exactly once.
pub fn labeling_from_json<R: ValueCodec>(realm: &R, poset: &FinitePoset, v: &Value) -> Result<Labeling<R::Value>> {
    let map = match v {
        Value::Object(m) if m.len() == 1 && m.contains_key("labels") && poset.index_of("labels").is_none() => {
            m["labels"].as_object().ok_or_else(|| anyhow!("\"labels\" must be an object"))?
        }
        Value::Object(m) => m,
        _ => bail!("a labeling is a JSON object from element names to values"),
    };
    let mut slots: Vec<Option<R::Value>> = vec![None; poset.len()];
    for (name, value) in map {
        let x = poset.index_of(name).ok_or_else(|| anyhow!("unknown element {name:?}"))?;
        slots[x] = Some(realm.decode(value).with_context(|| format!("label of {name}"))?);
    }
    slots
        .into_iter()
        .enumerate()
        .map(|(x, v)| v.ok_or_else(|| anyhow!("element {} is unlabeled", poset.name(x))))
        .collect::<Result<Vec<_>>>()
        .map(Labeling::new)
}

pub fn word_to_json<R: ValueCodec>(realm: &R, word: &[R::Value]) -> Value {
    Value::Array(word.iter().map(|v| realm.encode(v)).collect())
}
