//! Randomized search for counterexamples to `NAR^(a+b) = id` on `[a]x[b]`.

use std::collections::BTreeMap;

use anyhow::Result;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use rowmotion_core::realm::{MatP, MatrixRealm, PrimeField, MERSENNE_61};
use rowmotion_core::rng::{derive_seed, rng_from_seed};
use rowmotion_core::transfer::{sample_generic_labeling_counted, MAX_SAMPLE_ATTEMPTS};
use rowmotion_core::{antichain_rowmotion, product_of_chains, Error, FinitePoset, Labeling, Mode, Realm};

pub const CONJECTURE_NOTE: &str = "NAR^(a+b) = id on [a]x[b] is an open conjecture for general a and b. \
Only [2]x[2] has a worked noncommutative orbit (of order 4) in the literature; on d = 1 the statement \
reduces to the known periodicity of birational rowmotion. Passing cells are evidence, not proof.";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FuzzConfig {
    pub max_a: usize,
    pub max_b: usize,
    pub max_d: usize,
    pub trials: usize,
    pub p: u64,
    pub seed: u64,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        Self { max_a: 3, max_b: 3, max_d: 3, trials: 100, p: MERSENNE_61, seed: 0 }
    }
}

/// A trial whose labeling did not return after `a + b` steps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub seed: u64,
    /// The same labeling also fails when NAR is computed by transfer maps.
    pub confirmed: bool,
    pub fresh_seed: u64,
    /// A fresh sample in the same cell fails too.
    pub fresh_sample_fails: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FuzzCell {
    pub a: usize,
    pub b: usize,
    pub d: usize,
    pub p: u64,
    pub trials: usize,
    pub passes: usize,
    pub failures: usize,
    pub exhausted: usize,
    pub singular_resamples: usize,
    /// Passing trials whose labeling returned before step `a + b`.
    pub early_returns: usize,
    /// First-return step to number of trials.
    pub periods: BTreeMap<usize, usize>,
    pub counterexample_seeds: Vec<u64>,
    pub counterexamples: Vec<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FuzzReport {
    pub note: &'static str,
    pub config: FuzzConfig,
    pub cells: Vec<FuzzCell>,
    pub total_trials: usize,
    pub total_failures: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Returned { first: usize },
    Failed,
    Exhausted,
}

struct Trial {
    outcome: Outcome,
    resamples: usize,
}

/// `NAR^n g = g`, and the first `k <= n` with `NAR^k g = g`.
fn power_returns(
    realm: &MatP,
    poset: &FinitePoset,
    g: &Labeling<<MatP as Realm>::Value>,
    n: usize,
    mode: Mode,
) -> rowmotion_core::Result<(bool, Option<usize>)> {
    let mut h = g.clone();
    let mut first = None;
    for k in 1..=n {
        h = antichain_rowmotion(realm, poset, &h, mode)?;
        if first.is_none() && realm.labelings_eq(&h, g) {
            first = Some(k);
        }
    }
    Ok((realm.labelings_eq(&h, g), first))
}

fn sample(
    poset: &FinitePoset,
    field: PrimeField,
    d: usize,
    seed: u64,
) -> Result<(MatP, Labeling<<MatP as Realm>::Value>, usize), Error> {
    let mut rng = rng_from_seed(seed);
    let realm = MatrixRealm::with_random_constant(field, d, &mut rng);
    let (g, rejected) = sample_generic_labeling_counted(poset, &realm, rng.gen())?;
    Ok((realm, g, rejected))
}

fn run_trial(poset: &FinitePoset, n: usize, field: PrimeField, d: usize, seed: u64, mode: Mode) -> Trial {
    let mut resamples = 0;
    for attempt in 0..MAX_SAMPLE_ATTEMPTS as u64 {
        let (realm, g, rejected) = match sample(poset, field, d, derive_seed(seed, attempt)) {
            Ok(s) => s,
            Err(_) => return Trial { outcome: Outcome::Exhausted, resamples: resamples + MAX_SAMPLE_ATTEMPTS },
        };
        resamples += rejected;
        match power_returns(&realm, poset, &g, n, mode) {
            Ok((true, first)) => {
                return Trial { outcome: Outcome::Returned { first: first.unwrap_or(n) }, resamples };
            }
            Ok((false, _)) => return Trial { outcome: Outcome::Failed, resamples },
            // a later iterate hit a singular sum
            Err(_) => resamples += 1,
        }
    }
    Trial { outcome: Outcome::Exhausted, resamples }
}

pub fn trial_seed(master: u64, a: usize, b: usize, d: usize, t: usize) -> u64 {
    let cell = derive_seed(derive_seed(derive_seed(master, a as u64), b as u64), d as u64);
    derive_seed(cell, t as u64)
}

/// One cell of the grid: `trials` independent labelings of `[a]x[b]` by
/// `d x d` matrices over `F_p`.
pub fn fuzz_nar_periodicity(a: usize, b: usize, d: usize, trials: usize, p: u64, seed: u64) -> Result<FuzzCell> {
    anyhow::ensure!(d >= 1 && trials >= 1, "need d >= 1 and trials >= 1");
    let rect = product_of_chains(a, b)?;
    let poset = rect.poset();
    let field = PrimeField::new(p);
    let n = a + b;
    let results: Vec<(u64, Trial)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let s = trial_seed(seed, a, b, d, t);
            (s, run_trial(poset, n, field, d, s, Mode::Toggles))
        })
        .collect();

    let mut cell = FuzzCell {
        a,
        b,
        d,
        p,
        trials,
        passes: 0,
        failures: 0,
        exhausted: 0,
        singular_resamples: 0,
        early_returns: 0,
        periods: BTreeMap::new(),
        counterexample_seeds: Vec::new(),
        counterexamples: Vec::new(),
    };
    for (s, trial) in results {
        cell.singular_resamples += trial.resamples;
        match trial.outcome {
            Outcome::Returned { first } => {
                cell.passes += 1;
                *cell.periods.entry(first).or_default() += 1;
                if first < n {
                    cell.early_returns += 1;
                }
            }
            Outcome::Exhausted => cell.exhausted += 1,
            Outcome::Failed => {
                cell.failures += 1;
                let confirmed = run_trial(poset, n, field, d, s, Mode::Transfer).outcome == Outcome::Failed;
                let fresh_seed = derive_seed(s, u64::MAX);
                let fresh_sample_fails =
                    run_trial(poset, n, field, d, fresh_seed, Mode::Toggles).outcome == Outcome::Failed;
                if confirmed {
                    cell.counterexample_seeds.push(s);
                }
                cell.counterexamples.push(Counterexample { seed: s, confirmed, fresh_seed, fresh_sample_fails });
            }
        }
    }
    Ok(cell)
}

/// Every cell with `a <= max_a`, `b <= max_b`, `d <= max_d`, in
/// lexicographic `(a, b, d)` order.
pub fn fuzz_grid(config: FuzzConfig) -> Result<FuzzReport> {
    let keys: Vec<(usize, usize, usize)> = (1..=config.max_a)
        .flat_map(|a| (1..=config.max_b).flat_map(move |b| (1..=config.max_d).map(move |d| (a, b, d))))
        .collect();
    let cells = keys
        .into_par_iter()
        .map(|(a, b, d)| fuzz_nar_periodicity(a, b, d, config.trials, config.p, config.seed))
        .collect::<Result<Vec<_>>>()?;
    let total_trials = cells.iter().map(|c| c.trials).sum();
    let total_failures = cells.iter().map(|c| c.failures).sum();
    let exhausted: usize = cells.iter().map(|c| c.exhausted).sum();
    Ok(FuzzReport {
        note: CONJECTURE_NOTE,
        config,
        cells,
        total_trials,
        total_failures,
        passed: total_failures == 0 && exhausted == 0,
    })
}

/// Runs `steps` toggle-mode NAR steps from one sample and returns how many
/// completed.
pub fn nar_steps(a: usize, b: usize, d: usize, steps: usize, seed: u64) -> Result<usize> {
    let rect = product_of_chains(a, b)?;
    let (realm, mut h, _) = sample(rect.poset(), PrimeField::default(), d, seed)?;
    for _ in 0..steps {
        h = antichain_rowmotion(&realm, rect.poset(), &h, Mode::Toggles)?;
    }
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_element_always_returns_in_two() {
        for d in 1..=3 {
            let cell = fuzz_nar_periodicity(1, 1, d, 20, MERSENNE_61, 5).unwrap();
            assert_eq!(cell.passes, 20);
            assert_eq!(cell.periods, BTreeMap::from([(2, 20)]));
            assert_eq!(cell.early_returns, 0);
        }
    }

    #[test]
    fn small_cells_pass_and_account_for_every_trial() {
        let cell = fuzz_nar_periodicity(2, 2, 2, 25, MERSENNE_61, 1).unwrap();
        assert_eq!(cell.trials, cell.passes + cell.failures + cell.exhausted);
        assert_eq!(cell.passes, 25);
        assert!(cell.counterexample_seeds.is_empty());
    }

    #[test]
    fn tiny_fields_exhaust_instead_of_aborting() {
        let cell = fuzz_nar_periodicity(2, 2, 1, 10, 2, 0).unwrap();
        assert_eq!(cell.trials, cell.passes + cell.failures + cell.exhausted);
        assert!(cell.exhausted > 0);
        assert!(cell.singular_resamples > 0);
    }

    #[test]
    fn grid_is_deterministic() {
        let config = FuzzConfig { max_a: 2, max_b: 2, max_d: 2, trials: 5, seed: 11, ..FuzzConfig::default() };
        let one = fuzz_grid(config).unwrap();
        let two = fuzz_grid(config).unwrap();
        assert_eq!(one, two);
        assert_eq!(one.cells.len(), 8);
        assert_eq!(serde_json::to_string(&one).unwrap(), serde_json::to_string(&two).unwrap());
        assert!(one.passed);
        assert!(one.note.contains("open conjecture"));
    }

    #[test]
    fn steps_counter() {
        assert_eq!(nar_steps(2, 2, 2, 8, 3).unwrap(), 8);
    }
}
