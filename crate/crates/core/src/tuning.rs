//! Simulation harness: onset-threshold estimation, margin tuning and
//! decoding-failure-rate measurement.
//!
//! Every random stream is derived from a master seed and an index, so
//! results do not depend on how trials are scheduled across threads.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cwe;
use crate::decoder::{self, ColumnOrientation};
use crate::kem::{self, KemError};
use crate::params::{CodeFamily, ParameterSet};
use crate::ring::SparseSupport;

const STREAM_CODE: u64 = 1;
const STREAM_ERROR: u64 = 2;
const STREAM_KEY: u64 = 3;
const STREAM_TRIAL: u64 = 4;

/// SplitMix64 finalizer over `(master, stream, index)`.
pub fn derive_seed(master: u64, stream: u64, index: u64) -> u64 {
    let mut z = master
        .wrapping_add(stream.wrapping_mul(0x9e37_79b9_7f4a_7c15))
        .wrapping_add(index.wrapping_mul(0xbf58_476d_1ce4_e5b9))
        .wrapping_add(0x94d0_49bb_1331_11eb);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn rng_for(master: u64, stream: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, stream, index))
}

fn sample_private_blocks(params: &ParameterSet, rng: &mut ChaCha8Rng) -> Vec<SparseSupport> {
    (0..params.n0)
        .map(|_| match params.family {
            CodeFamily::Cyclosymmetric => {
                crate::cyclosym::sample_sparse_cyclosymmetric(&params.shape, params.d_v, rng).expect("valid weight")
            }
            CodeFamily::QuasiCyclic => SparseSupport::new(
                params.r(),
                rand::seq::index::sample(rng, params.r(), params.d_v)
                    .into_iter()
                    .map(|c| c as u32)
                    .collect(),
            )
            .expect("distinct coordinates"),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theta0Estimate {
    pub samples: usize,
    /// Mean of the per-sample maximum unsatisfied-check counts.
    pub mean: f64,
    pub stddev: f64,
    /// Smallest and largest per-sample maxima.
    pub min: usize,
    pub max: usize,
}

impl Theta0Estimate {
    /// The mean rounded to the nearest integer, for use as `theta0`.
    pub fn rounded(&self) -> usize {
        self.mean.round() as usize
    }
}

/// Samples `num_codes` private codes and `errors_per_code` weight-`t` errors
/// for each, and summarizes the largest initial unsatisfied-check count over
/// all variables.
pub fn estimate_theta0(params: &ParameterSet, num_codes: usize, errors_per_code: usize, seed: u64) -> Theta0Estimate {
    assert!(num_codes >= 1 && errors_per_code >= 1, "counts must be positive");
    let orientation = ColumnOrientation::from(params.family);
    let maxima: Vec<usize> = (0..num_codes as u64)
        .into_par_iter()
        .flat_map_iter(|code| {
            let mut rng = rng_for(seed, STREAM_CODE, code);
            let blocks = sample_private_blocks(params, &mut rng);
            let mut err_rng = rng_for(seed, STREAM_ERROR, code);
            (0..errors_per_code)
                .map(|_| {
                    let e = cwe::sample_error(params.n(), params.t, &mut err_rng).expect("t <= n");
                    let s = decoder::syndrome(&blocks, e.coords().iter().map(|&j| j as usize), orientation);
                    decoder::max_unsatisfied(&blocks, &s, orientation)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let n = maxima.len() as f64;
    let mean = maxima.iter().sum::<usize>() as f64 / n;
    let var = maxima.iter().map(|&m| (m as f64 - mean).powi(2)).sum::<f64>() / n;
    Theta0Estimate {
        samples: maxima.len(),
        mean,
        stddev: var.sqrt(),
        min: maxima.iter().copied().min().unwrap_or(0),
        max: maxima.iter().copied().max().unwrap_or(0),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialOutcome {
    Success,
    DecodingFailure,
    WeightMismatch,
    VerificationFailure,
    KeygenFailure,
}

impl TrialOutcome {
    pub fn is_success(self) -> bool {
        self == TrialOutcome::Success
    }
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub params_id: String,
    pub seed: u64,
    pub trial: usize,
    pub outcome: TrialOutcome,
    pub iterations: usize,
    pub restarts: usize,
    pub peak_weight: usize,
    pub micros: u64,
    /// Largest initial unsatisfied-check count of the private syndrome.
    #[serde(skip)]
    pub initial_max_unsat: usize,
    /// Whether the decoded pattern equals the encrypted one.
    #[serde(skip)]
    pub exact: bool,
}

#[derive(Debug, Clone)]
pub struct SimulationOptions {
    /// Fresh keys every this many trials.
    pub key_refresh: usize,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    /// Record wall-clock time per trial. Disable for bit-identical reports.
    pub timing: bool,
    /// Restrict error patterns to orbit-closed blocks.
    pub cyclosymmetric_errors: bool,
}

impl Default for SimulationOptions {
    fn default() -> Self {
        Self {
            key_refresh: 100,
            jobs: None,
            timing: true,
            cyclosymmetric_errors: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialReport {
    pub params: ParameterSet,
    pub seed: u64,
    pub trials: usize,
    pub successes: usize,
    pub failures: usize,
    pub dfr: f64,
    pub outcome_counts: BTreeMap<TrialOutcome, usize>,
    /// Mean and standard deviation of the per-trial initial maximum
    /// unsatisfied-check counts.
    pub theta0_mean: f64,
    pub theta0_stddev: f64,
    /// Total decoder iterations -> number of trials.
    pub iteration_histogram: BTreeMap<usize, usize>,
    pub mean_micros: f64,
    pub max_micros: u64,
    pub records: Vec<TrialRecord>,
}

impl TrialReport {
    fn from_records(params: &ParameterSet, seed: u64, records: Vec<TrialRecord>) -> Self {
        let trials = records.len();
        let successes = records.iter().filter(|r| r.outcome.is_success()).count();
        let mut outcome_counts = BTreeMap::new();
        let mut iteration_histogram = BTreeMap::new();
        for r in &records {
            *outcome_counts.entry(r.outcome).or_insert(0) += 1;
            *iteration_histogram.entry(r.iterations).or_insert(0) += 1;
        }
        let n = trials.max(1) as f64;
        let theta0_mean = records.iter().map(|r| r.initial_max_unsat as f64).sum::<f64>() / n;
        let theta0_var = records
            .iter()
            .map(|r| (r.initial_max_unsat as f64 - theta0_mean).powi(2))
            .sum::<f64>()
            / n;
        Self {
            params: params.clone(),
            seed,
            trials,
            successes,
            failures: trials - successes,
            dfr: (trials - successes) as f64 / n,
            outcome_counts,
            theta0_mean,
            theta0_stddev: theta0_var.sqrt(),
            iteration_histogram,
            mean_micros: records.iter().map(|r| r.micros as f64).sum::<f64>() / n,
            max_micros: records.iter().map(|r| r.micros).max().unwrap_or(0),
            records,
        }
    }

    pub fn mean_iterations(&self) -> f64 {
        self.records.iter().map(|r| r.iterations as f64).sum::<f64>() / self.trials.max(1) as f64
    }

    /// Writes one CSV row per trial.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.records {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn summary(&self) -> String {
        let mut s = format!(
            "{}\ntrials {}  successes {}  failures {}  DFR {:.6}\n",
            self.params, self.trials, self.successes, self.failures, self.dfr
        );
        for (outcome, count) in &self.outcome_counts {
            s.push_str(&format!("  {outcome:?}: {count}\n"));
        }
        s.push_str(&format!(
            "initial max unsatisfied checks: mean {:.2} stddev {:.2}\nmean iterations {:.2}  mean time {:.0} us  max time {} us\n",
            self.theta0_mean,
            self.theta0_stddev,
            self.mean_iterations(),
            self.mean_micros,
            self.max_micros
        ));
        s
    }
}

fn run_with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}

/// Full keygen/encrypt/decrypt round-trips with fresh keys every
/// `opts.key_refresh` trials.
pub fn measure_dfr(params: &ParameterSet, trials: usize, seed: u64, opts: &SimulationOptions) -> TrialReport {
    assert!(trials >= 1, "need at least one trial");
    let refresh = opts.key_refresh.max(1);
    let keys = trials.div_ceil(refresh);
    let label = params.label();
    let records: Vec<TrialRecord> = run_with_jobs(opts.jobs, || {
        (0..keys)
            .into_par_iter()
            .flat_map_iter(|key| {
                let first = key * refresh;
                let last = (first + refresh).min(trials);
                let mut key_rng = rng_for(seed, STREAM_KEY, key as u64);
                let keypair = kem::keygen(params, &mut key_rng);
                (first..last)
                    .map(|trial| run_trial(params, &label, seed, trial, keypair.as_ref().ok(), opts))
                    .collect::<Vec<_>>()
            })
            .collect()
    });
    TrialReport::from_records(params, seed, records)
}

fn run_trial(
    params: &ParameterSet,
    label: &str,
    seed: u64,
    trial: usize,
    keypair: Option<&(kem::PublicKey, kem::PrivateKey)>,
    opts: &SimulationOptions,
) -> TrialRecord {
    let mut record = TrialRecord {
        params_id: label.to_string(),
        seed,
        trial,
        outcome: TrialOutcome::KeygenFailure,
        iterations: 0,
        restarts: 0,
        peak_weight: 0,
        micros: 0,
        initial_max_unsat: 0,
        exact: false,
    };
    let Some((pk, sk)) = keypair else {
        return record;
    };
    let mut rng = rng_for(seed, STREAM_TRIAL, trial as u64);
    let e = kem::sample_error_pattern(params, opts.cyclosymmetric_errors, &mut rng).expect("valid error weight");
    let ct = kem::encrypt(pk, &e).expect("weight-t error");
    if let Ok(s) = kem::private_syndrome(sk, &ct) {
        record.initial_max_unsat = decoder::max_unsatisfied(sk.blocks(), &s, ColumnOrientation::from(params.family));
    }
    let start = opts.timing.then(Instant::now);
    let (result, stats) = kem::decrypt_with_stats(sk, &ct);
    if let Some(start) = start {
        record.micros = start.elapsed().as_micros() as u64;
    }
    record.iterations = stats.iterations;
    record.restarts = stats.restarts;
    record.peak_weight = stats.peak_weight;
    record.outcome = match result {
        Ok(d) => {
            record.exact = d == e;
            TrialOutcome::Success
        }
        Err(KemError::DecodingFailure) => TrialOutcome::DecodingFailure,
        Err(KemError::WeightMismatch { .. }) => TrialOutcome::WeightMismatch,
        Err(KemError::VerificationFailure) => TrialOutcome::VerificationFailure,
        Err(other) => panic!("unexpected decryption error in trial {trial}: {other}"),
    };
    record
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaRow {
    pub params_id: String,
    pub seed: u64,
    pub delta: usize,
    pub trials: usize,
    pub failures: usize,
    pub dfr: f64,
    pub mean_iterations: f64,
    pub mean_micros: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaTable {
    pub rows: Vec<DeltaRow>,
}

impl DeltaTable {
    /// The row with the lowest mean decoding time among those with
    /// `dfr <= bound`; ties broken by fewer iterations, then smaller delta.
    pub fn fastest_below(&self, bound: f64) -> Option<&DeltaRow> {
        self.rows.iter().filter(|r| r.dfr <= bound).min_by(|a, b| {
            a.mean_micros
                .total_cmp(&b.mean_micros)
                .then(a.mean_iterations.total_cmp(&b.mean_iterations))
                .then(a.delta.cmp(&b.delta))
        })
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.rows {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Evaluates each candidate margin on the same keys and errors. Candidates
/// not below `theta0` are skipped.
pub fn tune_delta(
    params: &ParameterSet,
    candidate_deltas: &[usize],
    trials_per_delta: usize,
    seed: u64,
    opts: &SimulationOptions,
) -> DeltaTable {
    let rows = candidate_deltas
        .iter()
        .filter(|&&d| d < params.theta0)
        .map(|&delta| {
            let mut p = params.clone();
            p.delta = delta;
            let report = measure_dfr(&p, trials_per_delta, seed, opts);
            DeltaRow {
                params_id: params.label(),
                seed,
                delta,
                trials: report.trials,
                failures: report.failures,
                dfr: report.dfr,
                mean_iterations: report.mean_iterations(),
                mean_micros: report.mean_micros,
            }
        })
        .collect();
    DeltaTable { rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclosym::LayerShape;

    fn tiny() -> ParameterSet {
        ParameterSet::custom(
            CodeFamily::Cyclosymmetric,
            2,
            LayerShape::single(101).unwrap(),
            9,
            4,
            8,
            1,
        )
        .unwrap()
    }

    #[test]
    fn seeds_differ_by_stream_and_index() {
        let a = derive_seed(1, 1, 0);
        assert_ne!(a, derive_seed(1, 1, 1));
        assert_ne!(a, derive_seed(1, 2, 0));
        assert_ne!(a, derive_seed(2, 1, 0));
        assert_eq!(a, derive_seed(1, 1, 0));
    }

    #[test]
    fn theta0_bounds() {
        let est = estimate_theta0(&tiny(), 10, 10, 1);
        assert_eq!(est.samples, 100);
        assert!(est.max <= 9);
        assert!(est.mean > 0.0);
        let mut zero_t = tiny();
        zero_t.t = 0;
        let est = estimate_theta0(&zero_t, 3, 3, 1);
        assert_eq!((est.mean, est.max, est.rounded()), (0.0, 0, 0));
    }

    #[test]
    fn measure_is_deterministic() {
        let opts = SimulationOptions {
            key_refresh: 3,
            timing: false,
            ..SimulationOptions::default()
        };
        let a = measure_dfr(&tiny(), 10, 42, &opts);
        let b = measure_dfr(
            &tiny(),
            10,
            42,
            &SimulationOptions {
                jobs: Some(2),
                ..opts.clone()
            },
        );
        assert_eq!(a, b);
        assert_eq!(a.successes + a.failures, a.trials);
        let mut csv = Vec::new();
        a.write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("params_id,seed,trial,outcome,iterations,restarts,peak_weight,micros\n"));
        assert_eq!(text.lines().count(), 11);
    }

    #[test]
    fn absurd_error_weight_fails() {
        let p = ParameterSet::custom(
            CodeFamily::Cyclosymmetric,
            2,
            LayerShape::single(101).unwrap(),
            9,
            90,
            7,
            1,
        )
        .unwrap();
        let report = measure_dfr(&p, 20, 3, &SimulationOptions::default());
        assert!(report.dfr >= 0.95, "dfr {}", report.dfr);
        assert!(report.records.iter().all(|r| !r.outcome.is_success() || !r.exact));
    }

    #[test]
    fn single_trial_delta_table() {
        let table = tune_delta(&tiny(), &[0, 1, 2, 8], 1, 5, &SimulationOptions::default());
        assert_eq!(table.rows.len(), 3);
        for row in &table.rows {
            assert!(row.dfr == 0.0 || row.dfr == 1.0);
        }
        assert!(table.fastest_below(1.0).is_some());
    }
}
