//! Seeded fuzzing: generate instances, run every analysis, and aggregate
//! the results in trial order.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use rand::Rng;
use rayon::prelude::*;

use super::commands::full_suite;
use super::document::SystemDocument;
use super::generate::{
    cumulative_products, random_candidate, split_seed, trial_rng, GenStrategy, RunConfig, MAX_ATTEMPTS,
};
use super::reportdoc::{ParameterArrayDoc, ReportDocument, TrialDoc};
use crate::error::{Error, Result};
use crate::report::{Check, Report, Status};
use crate::scalars::{Field, FieldDescriptor, PrimeField, Rationals};
use crate::splitparam::parameter_array;
use crate::tdcore::{validate, ValidateOptions};

#[derive(Clone, Debug)]
pub struct TrialOutcome {
    pub summary: TrialDoc,
    pub report: Report,
    /// The accepted instance, if any.
    pub system: Option<SystemDocument>,
}

#[derive(Clone, Debug)]
pub struct Counterexample {
    pub index: usize,
    pub system: SystemDocument,
    pub report: ReportDocument,
}

#[derive(Clone, Debug)]
pub struct FuzzOutcome {
    pub report: ReportDocument,
    pub trials: Vec<TrialOutcome>,
    pub counterexamples: Vec<Counterexample>,
}

impl FuzzOutcome {
    pub fn accepted(&self) -> usize {
        self.trials.iter().filter(|t| t.system.is_some()).count()
    }
}

pub fn run_trial<F: Field>(field: &F, config: &RunConfig, index: usize) -> TrialOutcome {
    let mut rng = trial_rng(config.seed, index as u64);
    let d = rng.gen_range(1..=config.d_max);
    let options = ValidateOptions { strategy: config.strategy };
    let mut summary = TrialDoc {
        index,
        seed: split_seed(config.seed, index as u64),
        d,
        strategy: GenStrategy::for_diameter(d).name().into(),
        attempts: 0,
        status: Status::Inconclusive,
        parameter_array: None,
        failed: Vec::new(),
    };
    for attempt in 1..=MAX_ATTEMPTS {
        summary.attempts = attempt;
        let Some(candidate) = random_candidate(field, d, &mut rng) else {
            continue;
        };
        let validation = validate(&candidate.system, options);
        let Some(v) = validation.sharp().filter(|_| !validation.report.has_fail()) else {
            continue;
        };
        let mut report = validation.report.clone();
        match parameter_array(v) {
            Ok(pa) => {
                report.check(
                    "generator_split_sequence",
                    pa.zetas == cumulative_products(field, &candidate.phis),
                    || "split sequence differs from the products of phi".into(),
                );
                summary.parameter_array = Some(ParameterArrayDoc::new(field, &pa));
            }
            Err(e) => report.fail("generator_split_sequence", e.to_string()),
        }
        report.extend(full_suite(v, options, config.chain_depth, &mut rng));
        summary.status = report.overall();
        summary.failed = report.failures();
        return TrialOutcome { summary, report, system: Some(SystemDocument::from_system(&candidate.system)) };
    }
    let mut report = Report::new();
    report.inconclusive("generation", format!("no candidate accepted in {MAX_ATTEMPTS} attempts"));
    TrialOutcome { summary, report, system: None }
}

#[derive(Default)]
struct Tally {
    counts: [usize; 4],
    failing: Vec<usize>,
    first_witness: Option<String>,
}

fn status_index(s: Status) -> usize {
    match s {
        Status::Pass => 0,
        Status::Fail => 1,
        Status::Skip => 2,
        Status::Inconclusive => 3,
    }
}

/// One entry per check id, in order of first appearance.
fn aggregate(trials: &[TrialOutcome]) -> Vec<Check> {
    let mut order: Vec<String> = Vec::new();
    let mut tallies: HashMap<String, Tally> = HashMap::new();
    for t in trials {
        for c in &t.report.checks {
            let tally = tallies.entry(c.id.clone()).or_insert_with(|| {
                order.push(c.id.clone());
                Tally::default()
            });
            tally.counts[status_index(c.status)] += 1;
            if c.status == Status::Fail {
                tally.failing.push(t.summary.index);
                if tally.first_witness.is_none() {
                    tally.first_witness = c.witness.clone();
                }
            }
        }
    }
    order
        .into_iter()
        .map(|id| {
            let t = &tallies[&id];
            let [pass, fail, _, inconclusive] = t.counts;
            let status = if fail > 0 {
                Status::Fail
            } else if inconclusive > 0 {
                Status::Inconclusive
            } else if pass > 0 {
                Status::Pass
            } else {
                Status::Skip
            };
            let names = ["pass", "fail", "skip", "inconclusive"];
            let mut witness = names
                .iter()
                .zip(t.counts)
                .filter(|(_, k)| *k > 0)
                .map(|(name, k)| format!("{name} {k}"))
                .collect::<Vec<_>>()
                .join(", ");
            if !t.failing.is_empty() {
                witness.push_str(&format!("; failed in trials {:?}", t.failing));
                if let Some(w) = &t.first_witness {
                    witness.push_str(&format!("; first: {w}"));
                }
            }
            Check { id, status, witness: Some(witness) }
        })
        .collect()
}

fn run_in<F: Field>(field: &F, config: &RunConfig) -> Result<FuzzOutcome> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    let trials: Vec<TrialOutcome> =
        pool.install(|| (0..config.trials).into_par_iter().map(|k| run_trial(field, config, k)).collect());

    let mut checks = aggregate(&trials);
    let accepted = trials.iter().filter(|t| t.system.is_some()).count();
    checks.insert(
        0,
        Check {
            id: "accepted_instances".into(),
            status: if accepted == trials.len() { Status::Pass } else { Status::Inconclusive },
            witness: Some(format!("{accepted} of {} trials", trials.len())),
        },
    );
    let counterexamples = trials
        .iter()
        .filter(|t| t.report.has_fail())
        .filter_map(|t| {
            let system = t.system.clone()?;
            let mut report = ReportDocument::new(t.report.clone());
            report.seed = Some(t.summary.seed);
            Some(Counterexample { index: t.summary.index, system, report })
        })
        .collect();
    let mut report = ReportDocument::new(Report { checks });
    report.seed = Some(config.seed);
    report.config = Some(config.to_json());
    report.trials = Some(trials.iter().map(|t| t.summary.clone()).collect());
    Ok(FuzzOutcome { report, trials, counterexamples })
}

pub fn run_fuzz(config: &RunConfig) -> Result<FuzzOutcome> {
    config.check()?;
    match config.field {
        FieldDescriptor::Rational => run_in(&Rationals, config),
        FieldDescriptor::Prime { modulus } => run_in(&PrimeField::new(modulus)?, config),
    }
}

/// `report.json` plus a document and report for every failing trial.
pub fn write_artifacts(outcome: &FuzzOutcome, dir: &Path) -> Result<()> {
    let io = |e: std::io::Error| Error::Document(format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    fs::write(dir.join("report.json"), outcome.report.to_json()).map_err(io)?;
    for c in &outcome.counterexamples {
        c.system.save(&dir.join(format!("counterexample-{:04}.json", c.index)))?;
        fs::write(dir.join(format!("counterexample-{:04}-report.json", c.index)), c.report.to_json()).map_err(io)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes_and_is_deterministic() {
        let mut config = RunConfig::new(7, 6, 3, FieldDescriptor::Prime { modulus: 13 });
        let a = run_fuzz(&config).unwrap();
        assert_eq!(a.report.exit_code(), 0, "{}", a.report.to_text());
        config.jobs = 3;
        let b = run_fuzz(&config).unwrap();
        assert_eq!(a.report.to_json(), b.report.to_json());
    }

    #[test]
    fn rejects_bad_config() {
        let config = RunConfig::new(1, 1, 0, FieldDescriptor::Rational);
        assert!(run_fuzz(&config).is_err());
        let config = RunConfig::new(1, 1, 2, FieldDescriptor::Prime { modulus: 2 });
        assert!(run_fuzz(&config).is_err());
    }
}
