//! One function per subcommand. Each returns a JSON report and whether
//! every check it ran passed.

use anyhow::{bail, Result};
use serde::Serialize;
use serde_json::{json, Value};

use rowmotion_core::combinatorial::combinatorial_orbits;
use rowmotion_core::rng::derive_seed;
use rowmotion_core::stword::{
    check_rotation, expected_fiber_product, fiber_orbit_product_ordered, pl_homomesy_report, ratio_string, Fiber,
};
use rowmotion_core::transfer::{
    default_step_bound, sample_generic_labeling, sample_generic_labeling_counted, MAX_SAMPLE_ATTEMPTS,
};
use rowmotion_core::{
    antichain_rowmotion, iterate, product_of_chains, st_word, Dynamics, FinitePoset, GenericSample, Labeling, Mode,
    Realm,
};

use crate::config::{AnyRealm, RealmConfig, RealmKind};
use crate::fixtures::run_fixtures;
use crate::fuzz::{fuzz_grid, FuzzConfig};
use crate::io::{labeling_from_json, labeling_to_json, word_to_json, PosetFile, PosetSummary, ValueCodec};

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub passed: bool,
}

macro_rules! dispatch {
    ($realm:expr, $r:ident => $body:expr) => {
        match $realm {
            AnyRealm::Tropical($r) => $body,
            AnyRealm::RatFun($r) => $body,
            AnyRealm::MatP($r) => $body,
            AnyRealm::MatQ($r) => $body,
        }
    };
}

pub fn poset(spec: &PosetFile) -> Result<Outcome> {
    let p = spec.build()?;
    Ok(Outcome { report: json!({ "poset": PosetSummary::of(&p) }), passed: true })
}

#[derive(Serialize)]
struct OrbitEntry {
    size: usize,
    antichains: Vec<Vec<String>>,
    st_words: Vec<Vec<u8>>,
    cardinality_avg: String,
    fiber_avgs: serde_json::Map<String, Value>,
}

/// Combinatorial orbits of `[a]x[b]`, checking that every orbit size divides
/// `a + b` and that the cardinality and fiber averages do not depend on the orbit.
pub fn orbits(a: usize, b: usize) -> Result<Outcome> {
    let rect = product_of_chains(a, b)?;
    let p = rect.poset();
    let all = combinatorial_orbits(a, b)?;
    let mut passed = all.iter().all(|o| (a + b).is_multiple_of(o.size()));
    if let Some(first) = all.first() {
        passed &= all.iter().all(|o| o.cardinality_avg == first.cardinality_avg && o.fiber_avgs == first.fiber_avgs);
    }
    let entries: Vec<OrbitEntry> = all
        .iter()
        .map(|o| OrbitEntry {
            size: o.size(),
            antichains: o
                .antichains
                .iter()
                .map(|x| x.members().iter().map(|&e| p.name(e).to_string()).collect())
                .collect(),
            st_words: o.st_words.clone(),
            cardinality_avg: ratio_string(&o.cardinality_avg),
            fiber_avgs: o.fiber_avgs.iter().map(|(k, v)| (k.clone(), Value::String(ratio_string(v)))).collect(),
        })
        .collect();
    let order = all.iter().map(|o| o.size()).fold(1, num_integer::lcm);
    Ok(Outcome {
        report: json!({
            "chains": [a, b],
            "realm": "comb",
            "antichains": p.antichains().len(),
            "order": order,
            "orbits": entries,
        }),
        passed,
    })
}

fn labeling_for<R: ValueCodec + GenericSample>(
    realm: &R,
    poset: &FinitePoset,
    input: Option<&Value>,
    seed: u64,
) -> Result<Labeling<R::Value>> {
    match input {
        Some(v) => labeling_from_json(realm, poset, v),
        None => Ok(sample_generic_labeling(poset, realm, seed)?),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Transfer,
    Toggles,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Transfer => Mode::Transfer,
            ModeArg::Toggles => Mode::Toggles,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum DynamicsArg {
    Antichain,
    Order,
}

#[derive(Debug, Clone)]
pub struct RowmotionRequest {
    pub poset: PosetFile,
    pub realm: RealmConfig,
    pub mode: ModeArg,
    pub dynamics: DynamicsArg,
    pub steps: Option<usize>,
    pub input: Option<Value>,
    pub seed: u64,
}

/// Iterates rowmotion from a given or sampled labeling until it returns or
/// the step bound is reached.
pub fn rowmotion(req: &RowmotionRequest) -> Result<Outcome> {
    let p = req.poset.build()?;
    let config = req.realm.resolve(req.seed)?;
    let realm = config.build(&p)?;
    let dynamics = match req.dynamics {
        DynamicsArg::Antichain => Dynamics::Antichain(req.mode.into()),
        DynamicsArg::Order => Dynamics::Order,
    };
    let steps = req.steps.unwrap_or_else(|| default_step_bound(&p));
    let body = dispatch!(&realm, r => orbit_json(r, &p, req.input.as_ref(), req.seed, steps, dynamics)?);
    Ok(Outcome {
        report: json!({
            "seed": req.seed,
            "realm": config,
            "mode": req.mode,
            "dynamics": req.dynamics,
            "max_steps": steps,
            "period": body.0,
            "steps": body.1,
        }),
        passed: true,
    })
}

fn orbit_json<R: ValueCodec + GenericSample>(
    realm: &R,
    poset: &FinitePoset,
    input: Option<&Value>,
    seed: u64,
    steps: usize,
    dynamics: Dynamics,
) -> Result<(Option<usize>, Vec<Value>)> {
    let g = labeling_for(realm, poset, input, seed)?;
    let orbit = iterate(realm, poset, &g, steps, dynamics)?;
    let entries = orbit
        .labelings
        .iter()
        .enumerate()
        .map(|(k, h)| {
            let word = orbit.st_words.as_ref().map(|w| word_to_json(realm, w[k].entries()));
            json!({ "labels": labeling_to_json(realm, poset, h), "st_word": word })
        })
        .collect();
    Ok((orbit.period, entries))
}

/// The word of a labeling and of its rowmotion image, with the rotation check.
pub fn stword(a: usize, b: usize, realm: &RealmConfig, input: Option<&Value>, seed: u64) -> Result<Outcome> {
    let rect = product_of_chains(a, b)?;
    let config = realm.resolve(seed)?;
    let built = config.build(rect.poset())?;
    let (words, matches) = dispatch!(&built, r => {
        let g = labeling_for(r, rect.poset(), input, seed)?;
        let image = antichain_rowmotion(r, rect.poset(), &g, Mode::Transfer)?;
        let before = st_word(r, rect.grid(), &g)?;
        let after = st_word(r, rect.grid(), &image)?;
        let report = check_rotation(r, rect.grid(), &g, &image)?;
        (
            json!({
                "labels": labeling_to_json(r, rect.poset(), &g),
                "st_word": word_to_json(r, before.entries()),
                "image_labels": labeling_to_json(r, rect.poset(), &image),
                "image_st_word": word_to_json(r, after.entries()),
            }),
            report.matches,
        )
    });
    let passed = matches.iter().all(|&m| m);
    let mut report = json!({ "chains": [a, b], "seed": seed, "realm": config });
    merge(&mut report, words);
    report["rotation"] = json!({ "matches": matches, "holds": passed });
    Ok(Outcome { report, passed })
}

fn merge(into: &mut Value, from: Value) {
    if let (Value::Object(dst), Value::Object(src)) = (into, from) {
        dst.extend(src);
    }
}

#[derive(Serialize)]
struct FiberCheck {
    fiber: String,
    expected: String,
    /// `false` when the realm is noncommutative; the products are reported only.
    asserted: bool,
    samples_equal: usize,
    samples: usize,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    failing_seed: Option<u64>,
}

/// Orbit homomesy of fiber statistics on `[a]x[b]`: additive means in the
/// tropical realm, orbit products `C^b` / `C^a` otherwise.
pub fn homomesy(realm: &RealmConfig, a: usize, b: usize, samples: usize, seed: u64) -> Result<Outcome> {
    if samples == 0 {
        bail!("need at least one sample");
    }
    let rect = product_of_chains(a, b)?;
    let grid = rect.grid();
    match realm.realm {
        RealmKind::Tropical => {
            if realm.c.as_deref().is_some_and(|c| c != "1") {
                bail!("tropical homomesy is stated for C = 1");
            }
            let report = pl_homomesy_report(a, b, samples, seed)?;
            let passed = report.passed();
            let mut value = serde_json::to_value(&report)?;
            value["realm"] = json!(realm.resolve(seed)?);
            Ok(Outcome { report: value, passed })
        }
        RealmKind::Ratfun => {
            let r = match realm.build(rect.poset())? {
                AnyRealm::RatFun(r) => r,
                _ => unreachable!(),
            };
            let g = r.generic_labeling(rect.poset());
            let mut checks = Vec::new();
            for fiber in Fiber::all(grid) {
                let got = fiber_orbit_product_ordered(&r, grid, &g, fiber)?;
                let want = expected_fiber_product(&r, grid, fiber);
                let ok = r.equal(&got, &want);
                checks.push(json!({
                    "fiber": fiber.label(),
                    "product": r.format(&got),
                    "expected": r.format(&want),
                    "passed": ok,
                }));
            }
            let passed = checks.iter().all(|c| c["passed"] == true);
            Ok(Outcome { report: json!({ "a": a, "b": b, "seed": seed, "realm": realm, "fibers": checks }), passed })
        }
        RealmKind::Matp | RealmKind::Matq => {
            let fibers = Fiber::all(grid);
            let mut equal = vec![0usize; fibers.len()];
            let mut failing: Vec<Option<u64>> = vec![None; fibers.len()];
            let mut commutative = true;
            let mut resamples = 0;
            for i in 0..samples as u64 {
                let s = derive_seed(seed, i);
                let built = realm.resolve(s)?.build(rect.poset())?;
                let row = match &built {
                    AnyRealm::MatP(r) => fiber_row(r, &rect, &fibers, s)?,
                    AnyRealm::MatQ(r) => fiber_row(r, &rect, &fibers, s)?,
                    _ => unreachable!(),
                };
                commutative = row.0;
                resamples += row.2;
                for (k, ok) in row.1.into_iter().enumerate() {
                    if ok {
                        equal[k] += 1;
                    } else if failing[k].is_none() {
                        failing[k] = Some(s);
                    }
                }
            }
            let checks: Vec<FiberCheck> = fibers
                .iter()
                .enumerate()
                .map(|(k, f)| FiberCheck {
                    fiber: f.label(),
                    expected: match f {
                        Fiber::Positive(_) => format!("C^{b}"),
                        Fiber::Negative(_) => format!("C^{a}"),
                    },
                    asserted: commutative,
                    samples_equal: equal[k],
                    samples,
                    passed: !commutative || failing[k].is_none(),
                    failing_seed: if commutative { failing[k] } else { None },
                })
                .collect();
            let passed = checks.iter().all(|c| c.passed);
            let mut report = json!({
                "a": a,
                "b": b,
                "seed": seed,
                "samples": samples,
                "singular_resamples": resamples,
                "realm": realm,
                "fibers": checks,
            });
            if !commutative {
                report["note"] = json!("d > 1: ordered fiber products are reported; no homomesy is asserted");
            }
            Ok(Outcome { report, passed })
        }
    }
}

/// Commutativity, per-fiber agreement, and resamples spent on orbits that hit
/// a singular sum.
fn fiber_row<R: Realm + GenericSample>(
    r: &R,
    rect: &rowmotion_core::RectanglePoset,
    fibers: &[Fiber],
    seed: u64,
) -> Result<(bool, Vec<bool>, usize)> {
    let mut resamples = 0;
    for attempt in 0..MAX_SAMPLE_ATTEMPTS as u64 {
        let (g, rejected) = sample_generic_labeling_counted(rect.poset(), r, derive_seed(seed, attempt))?;
        resamples += rejected;
        let row = fibers
            .iter()
            .map(|&f| {
                let got = fiber_orbit_product_ordered(r, rect.grid(), &g, f)?;
                Ok(r.equal(&got, &expected_fiber_product(r, rect.grid(), f)))
            })
            .collect::<rowmotion_core::Result<Vec<_>>>();
        match row {
            Ok(row) => return Ok((r.is_commutative(), row, resamples)),
            Err(_) => resamples += 1,
        }
    }
    bail!("no labeling with a nonsingular orbit after {MAX_SAMPLE_ATTEMPTS} attempts (seed {seed})")
}

pub fn fuzz_nar(config: FuzzConfig) -> Result<Outcome> {
    let report = fuzz_grid(config)?;
    Ok(Outcome { passed: report.passed, report: serde_json::to_value(&report)? })
}

pub fn fixtures() -> Result<Outcome> {
    let results = run_fixtures();
    let passed = results.iter().all(|r| r.passed);
    Ok(Outcome { report: json!({ "fixtures": results, "passed": passed }), passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbits_report_on_2x2() {
        let out = orbits(2, 2).unwrap();
        assert!(out.passed);
        assert_eq!(out.report["antichains"], 6);
        assert_eq!(out.report["order"], 4);
        let sizes: Vec<u64> =
            out.report["orbits"].as_array().unwrap().iter().map(|o| o["size"].as_u64().unwrap()).collect();
        assert_eq!(sizes.iter().sum::<u64>(), 6);
        assert_eq!(out.report["orbits"][0]["cardinality_avg"], "1/1");
    }

    #[test]
    fn rowmotion_orbit_json() {
        let req = RowmotionRequest {
            poset: PosetFile::chains(2, 2),
            realm: RealmConfig::new(RealmKind::Tropical),
            mode: ModeArg::Toggles,
            dynamics: DynamicsArg::Antichain,
            steps: None,
            input: Some(json!({"(1,1)": "0.2", "(2,1)": "0.1", "(1,2)": "0.4", "(2,2)": "0.3"})),
            seed: 0,
        };
        let out = rowmotion(&req).unwrap();
        assert_eq!(out.report["period"], 4);
        let steps = out.report["steps"].as_array().unwrap();
        assert_eq!(steps.len(), 4);
        assert_eq!(steps[1]["labels"]["(2,1)"], "1/2");
        assert_eq!(steps[0]["st_word"], json!(["3/5", "2/5", "7/10", "3/10"]));
    }

    #[test]
    fn rowmotion_on_a_named_poset_has_no_words() {
        let poset = PosetFile::from_json(r#"{"elements":["a","b","c"],"covers":[["a","b"],["a","c"]]}"#).unwrap();
        let req = RowmotionRequest {
            poset,
            realm: RealmConfig::new(RealmKind::Ratfun),
            mode: ModeArg::Transfer,
            dynamics: DynamicsArg::Order,
            steps: Some(10),
            input: None,
            seed: 0,
        };
        let out = rowmotion(&req).unwrap();
        assert!(out.report["period"].is_u64());
        assert!(out.report["steps"][0]["st_word"].is_null());
    }

    #[test]
    fn stword_report() {
        let out = stword(2, 3, &RealmConfig::new(RealmKind::Matp), None, 4).unwrap();
        assert!(out.passed);
        assert_eq!(out.report["st_word"].as_array().unwrap().len(), 5);
        let out = stword(2, 2, &RealmConfig::new(RealmKind::Ratfun), None, 0).unwrap();
        assert_eq!(out.report["st_word"], json!(["w*y", "x*z", "C/(w*x)", "C/(y*z)"]));
    }

    #[test]
    fn homomesy_per_realm() {
        let out = homomesy(&RealmConfig::new(RealmKind::Tropical), 2, 3, 20, 1).unwrap();
        assert!(out.passed);
        let out = homomesy(&RealmConfig::new(RealmKind::Ratfun), 2, 3, 1, 0).unwrap();
        assert!(out.passed);
        assert_eq!(out.report["fibers"][0]["product"], "C^3");

        let mut d1 = RealmConfig::new(RealmKind::Matp);
        d1.d = Some(1);
        let out = homomesy(&d1, 2, 2, 10, 2).unwrap();
        assert!(out.passed);
        assert_eq!(out.report["fibers"][0]["asserted"], true);
        assert_eq!(out.report["fibers"][0]["samples_equal"], 10);

        let out = homomesy(&RealmConfig::new(RealmKind::Matp), 2, 2, 5, 2).unwrap();
        assert!(out.passed);
        assert_eq!(out.report["fibers"][0]["asserted"], false);
        assert!(out.report["note"].is_string());

        let mut q = RealmConfig::new(RealmKind::Matq);
        q.d = Some(1);
        let out = homomesy(&q, 3, 3, 30, 0).unwrap();
        assert!(out.passed);
        assert_eq!(out.report["fibers"][5]["samples_equal"], 30);
    }
}
