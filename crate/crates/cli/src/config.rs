//! Realm configuration blocks: `{"realm": ..., "p": ..., "d": ..., "c": ...}`.

use anyhow::{bail, Context, Result};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use rowmotion_core::realm::{
    MatP, MatQ, MatrixRealm, PrimeField, RatFunRealm, RationalField, ScalarField, TropicalRealm, MERSENNE_61,
};
use rowmotion_core::rng::rng_from_seed;
use rowmotion_core::FinitePoset;

use crate::io::parse_rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RealmKind {
    Tropical,
    Ratfun,
    Matp,
    Matq,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealmConfig {
    pub realm: RealmKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    /// The constant as `"p/q"` (tropical, matq) or an integer mod p (matp).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
}

/// A realm built from a config.
#[derive(Debug, Clone)]
pub enum AnyRealm {
    Tropical(TropicalRealm),
    RatFun(RatFunRealm),
    MatP(MatP),
    MatQ(MatQ),
}

impl RealmConfig {
    pub fn new(realm: RealmKind) -> Self {
        Self { realm, p: None, d: None, c: None }
    }

    pub fn validate(&self) -> Result<()> {
        match self.realm {
            RealmKind::Tropical => {
                if self.p.is_some() || self.d.is_some() {
                    bail!("tropical realm takes no \"p\" or \"d\"");
                }
            }
            RealmKind::Ratfun => {
                if self.p.is_some() || self.d.is_some() || self.c.is_some() {
                    bail!("ratfun realm is symbolic; C stays a variable and \"p\", \"d\", \"c\" are not accepted");
                }
            }
            RealmKind::Matp => {
                if let Some(p) = self.p {
                    if !(2..1 << 63).contains(&p) {
                        bail!("p = {p} out of range");
                    }
                }
            }
            RealmKind::Matq => {
                if self.p.is_some() {
                    bail!("matq realm takes no \"p\"");
                }
            }
        }
        if self.d == Some(0) {
            bail!("d must be at least 1");
        }
        Ok(())
    }

    /// Fills every unset field. A missing matrix constant is drawn from `seed`.
    pub fn resolve(&self, seed: u64) -> Result<Self> {
        self.validate()?;
        let mut out = self.clone();
        match self.realm {
            RealmKind::Tropical => {
                out.c.get_or_insert_with(|| "1".to_string());
            }
            RealmKind::Ratfun => {}
            RealmKind::Matp => {
                let field = PrimeField::new(*out.p.get_or_insert(MERSENNE_61));
                out.d.get_or_insert(2);
                if out.c.is_none() {
                    out.c = Some(field.random_nonzero(&mut rng_from_seed(seed)).to_string());
                }
            }
            RealmKind::Matq => {
                out.d.get_or_insert(2);
                if out.c.is_none() {
                    let mut rng = rng_from_seed(seed);
                    let c = loop {
                        let v: i64 = rng.gen_range(-9..=9);
                        if v != 0 {
                            break v;
                        }
                    };
                    out.c = Some(c.to_string());
                }
            }
        }
        Ok(out)
    }

    /// Builds the realm; call on a resolved config. `poset` names the
    /// variables of the symbolic realm.
    pub fn build(&self, poset: &FinitePoset) -> Result<AnyRealm> {
        let resolved = self.resolve(0)?;
        let d = resolved.d.unwrap_or(1);
        Ok(match self.realm {
            RealmKind::Tropical => {
                let c = parse_rational(resolved.c.as_deref().unwrap_or("1"))?;
                AnyRealm::Tropical(TropicalRealm::new(c))
            }
            RealmKind::Ratfun => AnyRealm::RatFun(RatFunRealm::for_poset(poset)),
            RealmKind::Matp => {
                let field = PrimeField::new(resolved.p.unwrap_or(MERSENNE_61));
                let raw = resolved.c.as_deref().unwrap_or("1");
                let c: BigInt =
                    raw.trim().parse().with_context(|| format!("matp constant {raw:?} is not an integer"))?;
                let c = field.from_bigint(&c);
                if c == 0 {
                    bail!("the constant C must be nonzero mod p");
                }
                AnyRealm::MatP(MatrixRealm::new(field, d, c))
            }
            RealmKind::Matq => {
                let c = parse_rational(resolved.c.as_deref().unwrap_or("1"))?;
                if c.is_zero() {
                    bail!("the constant C must be nonzero");
                }
                AnyRealm::MatQ(MatrixRealm::new(RationalField::default(), d, c))
            }
        })
    }
}
