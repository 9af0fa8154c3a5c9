//! Monte Carlo estimation of logical error rates under depolarizing noise.
//!
//! Trial `t` of a point draws its error from a ChaCha8 generator seeded with
//! the point seed and switched to stream `t`, so every trial is reproducible
//! on its own. Trials run in fixed-size blocks; within a block they may run
//! on any number of threads, and results are folded in trial order, stopping
//! at exactly the same trial as a sequential run would.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::bits::Bits;
use crate::bp2::StabilizerBp2Decoder;
use crate::bp4::{Bp4Decoder, QuaternaryPrior};
use crate::code::{Outcome, StabilizerCode};
use crate::config::{DecoderConfig, Schedule};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};

const BLOCK: u64 = 256;

/// Independent depolarizing noise: each qubit suffers X, Y or Z with
/// probability `ε/3` each.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DepolarizingChannel {
    epsilon: f64,
}

impl DepolarizingChannel {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(0.0..0.75).contains(&epsilon) {
            return Err(Error::InvalidProbability(format!("depolarizing rate {epsilon} outside [0, 3/4)")));
        }
        Ok(DepolarizingChannel { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `(1 − ε, ε/3, ε/3, ε/3)` over `I, X, Y, Z`.
    pub fn distribution(&self) -> [f64; 4] {
        let e = self.epsilon / 3.0;
        [1.0 - self.epsilon, e, e, e]
    }

    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> PauliString {
        let third = self.epsilon / 3.0;
        let mut e = PauliString::identity(n);
        for q in 0..n {
            let u: f64 = rng.gen();
            if u < self.epsilon {
                let p = if u < third {
                    Pauli::X
                } else if u < 2.0 * third {
                    Pauli::Y
                } else {
                    Pauli::Z
                };
                e.set(q, p);
            }
        }
        e
    }
}

/// Draw an `n`-qubit depolarizing error.
pub fn sample_depolarizing<R: Rng + ?Sized>(n: usize, epsilon: f64, rng: &mut R) -> Result<PauliString> {
    Ok(DepolarizingChannel::new(epsilon)?.sample(n, rng))
}

/// Draw `n` independent bits, each set with probability `p`.
pub fn sample_bsc<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Bits> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(format!("bit flip probability {p}")));
    }
    Ok(Bits::from_bools((0..n).map(|_| rng.gen::<f64>() < p)))
}

/// Wilson score interval for `errors` successes out of `trials`.
pub fn wilson_interval(errors: u64, trials: u64, confidence: f64) -> Result<(f64, f64)> {
    if trials == 0 || errors > trials {
        return Err(Error::InvalidProbability(format!("{errors} errors in {trials} trials")));
    }
    if !(0.0 < confidence && confidence < 1.0) {
        return Err(Error::InvalidProbability(format!("confidence level {confidence}")));
    }
    let z = Normal::standard().inverse_cdf(1.0 - (1.0 - confidence) / 2.0);
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let low = if errors == 0 { 0.0 } else { (center - half).max(0.0) };
    let high = if errors == trials { 1.0 } else { (center + half).min(1.0) };
    Ok((low, high))
}

/// When to stop collecting trials for one point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopRule {
    pub min_logical_errors: u64,
    pub max_trials: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule { min_logical_errors: 100, max_trials: 10_000_000 }
    }
}

impl StopRule {
    pub fn validate(&self) -> Result<()> {
        if self.min_logical_errors == 0 || self.max_trials == 0 {
            return Err(Error::InvalidConfig("stop rule needs at least one logical error and one trial".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecoderKind {
    Bp4,
    Bp2,
}

impl DecoderKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DecoderKind::Bp4 => "bp4",
            DecoderKind::Bp2 => "bp2",
        }
    }
}

/// A decoder and its configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecoderSpec {
    pub kind: DecoderKind,
    pub config: DecoderConfig,
}

impl DecoderSpec {
    pub fn bp4(config: DecoderConfig) -> Self {
        DecoderSpec { kind: DecoderKind::Bp4, config }
    }

    pub fn bp2(config: DecoderConfig) -> Self {
        DecoderSpec { kind: DecoderKind::Bp2, config }
    }

    /// e.g. `bp4 serial alpha_c=1.5`.
    pub fn label(&self) -> String {
        format!("{} {}", self.kind.as_str(), self.config.label())
    }
}

/// How the trials of a point are executed. Results do not depend on it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    #[default]
    Sequential,
    /// Rayon worker pool; `threads == 0` uses the global pool.
    #[cfg(feature = "parallel")]
    Parallel { threads: usize },
}

/// Accumulated statistics for one (ε, decoder) pair.
#[derive(Clone, Debug, PartialEq)]
pub struct SimPoint {
    pub code_id: String,
    pub epsilon: f64,
    pub decoder: DecoderSpec,
    pub trials: u64,
    pub exact_successes: u64,
    pub degenerate_successes: u64,
    pub detected_errors: u64,
    pub undetected_errors: u64,
    /// Iterations summed over all trials; failures count `max_iter`.
    pub iteration_sum: u64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
    /// The trial cap was hit before the requested number of logical errors.
    pub partial: bool,
}

impl SimPoint {
    pub fn logical_errors(&self) -> u64 {
        self.detected_errors + self.undetected_errors
    }

    pub fn logical_error_rate(&self) -> f64 {
        self.logical_errors() as f64 / self.trials as f64
    }

    pub fn average_iterations(&self) -> f64 {
        self.iteration_sum as f64 / self.trials as f64
    }

    pub fn row(&self) -> ResultRow {
        let m = self.decoder.config.modifier;
        ResultRow {
            code_id: self.code_id.clone(),
            epsilon: self.epsilon,
            decoder: self.decoder.kind.as_str().to_string(),
            schedule: self.decoder.config.schedule,
            alpha_c: m.alpha_c(),
            alpha_v: m.alpha_v(),
            beta: m.beta(),
            trials: self.trials,
            exact_success: self.exact_successes,
            degenerate_success: self.degenerate_successes,
            detected: self.detected_errors,
            undetected: self.undetected_errors,
            avg_iter: self.average_iterations(),
            ci_low: self.ci_low,
            ci_high: self.ci_high,
            seed: self.seed,
        }
    }
}

/// Flat record written to CSV and JSON. Absent modifiers are empty / null.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub code_id: String,
    pub epsilon: f64,
    pub decoder: String,
    pub schedule: Schedule,
    pub alpha_c: Option<f64>,
    pub alpha_v: Option<f64>,
    pub beta: Option<f64>,
    pub trials: u64,
    pub exact_success: u64,
    pub degenerate_success: u64,
    pub detected: u64,
    pub undetected: u64,
    pub avg_iter: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

pub const CSV_COLUMNS: [&str; 16] = [
    "code_id",
    "epsilon",
    "decoder",
    "schedule",
    "alpha_c",
    "alpha_v",
    "beta",
    "trials",
    "exact_success",
    "degenerate_success",
    "detected",
    "undetected",
    "avg_iter",
    "ci_low",
    "ci_high",
    "seed",
];

pub fn write_csv<W: Write>(points: &[SimPoint], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if points.is_empty() {
        w.write_record(CSV_COLUMNS)?;
    }
    for p in points {
        w.serialize(p.row())?;
    }
    w.flush()?;
    Ok(())
}

/// JSON array of rows with the same fields as the CSV.
pub fn write_json<W: Write>(points: &[SimPoint], out: W) -> Result<()> {
    let rows: Vec<ResultRow> = points.iter().map(SimPoint::row).collect();
    serde_json::to_writer_pretty(out, &rows)?;
    Ok(())
}

#[derive(Clone, Debug)]
enum Worker {
    Bp4(Bp4Decoder, Vec<QuaternaryPrior>),
    Bp2(StabilizerBp2Decoder),
}

impl Worker {
    fn new(code: &StabilizerCode, epsilon: f64, decoder: &DecoderSpec) -> Result<Self> {
        Ok(match decoder.kind {
            DecoderKind::Bp4 => Worker::Bp4(
                Bp4Decoder::new(code, decoder.config.clone())?,
                vec![QuaternaryPrior::depolarizing(epsilon)?; code.n()],
            ),
            DecoderKind::Bp2 => Worker::Bp2(StabilizerBp2Decoder::new(code, decoder.config.clone())?),
        })
    }

    fn trial(&mut self, code: &StabilizerCode, channel: DepolarizingChannel, seed: u64, index: u64) -> (Outcome, usize) {
        let mut rng = trial_rng(seed, index);
        let error = channel.sample(code.n(), &mut rng);
        let z = code.syndrome(&error).expect("sampled error has code length");
        let (converged, estimate, iterations) = match self {
            Worker::Bp4(dec, priors) => {
                let r = dec.decode(&z, priors).expect("dimensions fixed at construction");
                (r.is_success(), r.estimate, r.iterations)
            }
            Worker::Bp2(dec) => {
                let r = dec.decode(&z, channel.epsilon()).expect("dimensions fixed at construction");
                (r.is_success(), r.estimate, r.iterations)
            }
        };
        let outcome = code.classify(&error, &estimate, converged).expect("estimate has code length");
        (outcome, iterations)
    }
}

/// Generator for trial `index` of a point with seed `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn run_block(
    worker: &Worker,
    code: &StabilizerCode,
    channel: DepolarizingChannel,
    seed: u64,
    range: std::ops::Range<u64>,
    exec: Execution,
) -> Vec<(Outcome, usize)> {
    match exec {
        Execution::Sequential => {
            let mut w = worker.clone();
            range.map(|t| w.trial(code, channel, seed, t)).collect()
        }
        #[cfg(feature = "parallel")]
        Execution::Parallel { .. } => {
            use rayon::prelude::*;
            range
                .into_par_iter()
                .map_init(|| worker.clone(), |w, t| w.trial(code, channel, seed, t))
                .collect()
        }
    }
}

#[cfg(feature = "parallel")]
fn with_pool<T: Send>(exec: Execution, f: impl FnOnce() -> T + Send) -> Result<T> {
    match exec {
        Execution::Parallel { threads } if threads > 0 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::InvalidConfig(e.to_string()))?;
            Ok(pool.install(f))
        }
        _ => Ok(f()),
    }
}

#[cfg(not(feature = "parallel"))]
fn with_pool<T: Send>(_exec: Execution, f: impl FnOnce() -> T + Send) -> Result<T> {
    Ok(f())
}

/// Estimate the logical error rate of `decoder` on `code` at rate `epsilon`.
///
/// Trials are taken in index order until `stop.min_logical_errors` logical
/// errors have been seen or `stop.max_trials` trials have run; the second
/// case sets [`SimPoint::partial`]. The result depends only on the inputs,
/// never on `exec`.
pub fn run_point(
    code: &StabilizerCode,
    code_id: &str,
    epsilon: f64,
    decoder: &DecoderSpec,
    stop: StopRule,
    seed: u64,
    exec: Execution,
) -> Result<SimPoint> {
    stop.validate()?;
    let channel = DepolarizingChannel::new(epsilon)?;
    let worker = Worker::new(code, epsilon, decoder)?;
    let mut counts = [0u64; 4];
    let mut trials = 0u64;
    let mut iteration_sum = 0u64;
    with_pool(exec, || {
        'blocks: while trials < stop.max_trials {
            let end = (trials + BLOCK).min(stop.max_trials);
            for (outcome, iters) in run_block(&worker, code, channel, seed, trials..end, exec) {
                trials += 1;
                iteration_sum += iters as u64;
                counts[outcome_index(outcome)] += 1;
                if counts[2] + counts[3] >= stop.min_logical_errors {
                    break 'blocks;
                }
            }
        }
    })?;
    let logical = counts[2] + counts[3];
    let (ci_low, ci_high) = wilson_interval(logical, trials, 0.95)?;
    Ok(SimPoint {
        code_id: code_id.to_string(),
        epsilon,
        decoder: decoder.clone(),
        trials,
        exact_successes: counts[0],
        degenerate_successes: counts[1],
        detected_errors: counts[2],
        undetected_errors: counts[3],
        iteration_sum,
        ci_low,
        ci_high,
        seed,
        partial: logical < stop.min_logical_errors,
    })
}

fn outcome_index(o: Outcome) -> usize {
    match o {
        Outcome::ExactSuccess => 0,
        Outcome::DegenerateSuccess => 1,
        Outcome::DetectedError => 2,
        Outcome::UndetectedError => 3,
    }
}

/// A grid of points: every ε with every decoder.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepPlan {
    pub code_id: String,
    pub epsilons: Vec<f64>,
    pub decoders: Vec<DecoderSpec>,
    pub stop: StopRule,
    pub master_seed: u64,
}

impl SweepPlan {
    pub fn validate(&self) -> Result<()> {
        if self.epsilons.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig("epsilon grid must be strictly increasing".into()));
        }
        for &e in &self.epsilons {
            DepolarizingChannel::new(e)?;
        }
        for d in &self.decoders {
            d.config.validate()?;
        }
        self.stop.validate()
    }
}

/// Run every point of `plan` in (ε, decoder) order, handing each to
/// `on_point` as it completes.
///
/// All points share `master_seed`, so decoders at the same ε (and the
/// nested low-ε errors across ε) see the same sampled noise.
pub fn run_sweep<F>(code: &StabilizerCode, plan: &SweepPlan, exec: Execution, mut on_point: F) -> Result<Vec<SimPoint>>
where
    F: FnMut(&SimPoint) -> Result<()>,
{
    plan.validate()?;
    let mut points = Vec::with_capacity(plan.epsilons.len() * plan.decoders.len());
    for &eps in &plan.epsilons {
        for dec in &plan.decoders {
            let p = run_point(code, &plan.code_id, eps, dec, plan.stop, plan.master_seed, exec)?;
            on_point(&p)?;
            points.push(p);
        }
    }
    Ok(points)
}
