use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use qbp_core::alist::save_alist;
use qbp_core::result::write_trace_csv;
use qbp_core::sim::{run_sweep, trial_rng, write_json, DecoderSpec, DepolarizingChannel, Execution, SimPoint, StopRule, SweepPlan};
use qbp_core::{
    bp2_on_stabilizer, Bp4Decoder, PauliString, QuaternaryPrior, StabilizerCode, Syndrome, TraceSelection,
};

use crate::args::{parse_epsilon, CodeSource, DecoderArgs, LoadedCode, SweepDecoderArgs};

const EXIT_PARTIAL: u8 = 3;

/// The error or syndrome to decode. Exactly one is required.
#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct DecodeInput {
    /// Actual error as an I/X/Y/Z string, or `random` to sample one from the
    /// channel (needs --seed). Its syndrome is decoded.
    #[arg(long)]
    error: Option<String>,

    /// Syndrome as a 0/1 string, one bit per check.
    #[arg(long)]
    syndrome: Option<String>,
}

fn histogram(weights: &[usize]) -> String {
    let mut h = BTreeMap::new();
    for &w in weights {
        *h.entry(w).or_insert(0usize) += 1;
    }
    h.iter().map(|(w, c)| format!("{w}:{c}")).collect::<Vec<_>>().join(" ")
}

pub fn construct(source: &CodeSource, seed: Option<u64>, out: Option<&Path>, alist_out: Option<&Path>) -> Result<ExitCode> {
    let LoadedCode { code, .. } = source.load(seed)?;
    println!("[[{},{}]]", code.n(), code.k());
    println!("N={} M={} K={}", code.n(), code.m(), code.k());
    println!("row weights (weight:count): {}", histogram(&code.row_weights()));
    println!("column weights (weight:count): {}", histogram(&code.col_weights()));
    if let Some(path) = out {
        std::fs::write(path, code.to_text()).with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = alist_out {
        std::fs::write(path, save_alist(&code.to_binary_check())).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}

/// Resolve the syndrome to decode, and the actual error when one was given.
fn resolve_input(
    code: &StabilizerCode,
    input: &DecodeInput,
    epsilon: f64,
    seed: Option<u64>,
) -> Result<(Syndrome, Option<PauliString>)> {
    if let Some(bits) = &input.syndrome {
        let z = Syndrome::parse(bits)?;
        if z.len() != code.m() {
            bail!("syndrome has {} bits but the code has {} checks", z.len(), code.m());
        }
        return Ok((z, None));
    }
    let text = input.error.as_deref().expect("clap requires an input");
    let e = if text == "random" {
        let Some(seed) = seed else {
            bail!("--error random needs --seed");
        };
        DepolarizingChannel::new(epsilon)?.sample(code.n(), &mut trial_rng(seed, 0))
    } else {
        text.parse::<PauliString>()?
    };
    if e.len() != code.n() {
        bail!("error has {} qubits but the code has {}", e.len(), code.n());
    }
    Ok((code.syndrome(&e)?, Some(e)))
}

pub fn decode(
    source: &CodeSource,
    code_seed: Option<u64>,
    input: &DecodeInput,
    sample_seed: Option<u64>,
    epsilon: f64,
    decoder: &DecoderArgs,
) -> Result<ExitCode> {
    let LoadedCode { code, .. } = source.load(code_seed)?;
    let (z, actual) = resolve_input(&code, input, epsilon, sample_seed)?;
    let cfg = decoder.config()?;
    let (converged, status, estimate, iterations) = if decoder.bp2 {
        let r = bp2_on_stabilizer(&code, &z, epsilon, &cfg)?;
        (r.is_success(), r.status, r.estimate, r.iterations)
    } else {
        let priors = vec![QuaternaryPrior::depolarizing(epsilon)?; code.n()];
        let r = Bp4Decoder::new(&code, cfg)?.decode(&z, &priors)?;
        (r.is_success(), r.status, r.estimate, r.iterations)
    };
    let mut out = io::stdout().lock();
    if let Some(e) = &actual {
        writeln!(out, "error {e}")?;
    }
    writeln!(out, "syndrome {z}")?;
    writeln!(out, "{} {estimate}", status.as_str())?;
    writeln!(out, "iterations {iterations}")?;
    if let Some(e) = &actual {
        let outcome = code.classify(e, &estimate, converged)?;
        writeln!(out, "outcome {}", outcome_name(outcome))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn outcome_name(o: qbp_core::Outcome) -> &'static str {
    match o {
        qbp_core::Outcome::ExactSuccess => "exact-success",
        qbp_core::Outcome::DegenerateSuccess => "degenerate-success",
        qbp_core::Outcome::DetectedError => "detected-error",
        qbp_core::Outcome::UndetectedError => "undetected-error",
    }
}

#[allow(clippy::too_many_arguments)]
pub fn trace(
    source: &CodeSource,
    code_seed: Option<u64>,
    input: &DecodeInput,
    sample_seed: Option<u64>,
    epsilon: f64,
    decoder: &DecoderArgs,
    qubits: &[usize],
    out: Option<&Path>,
) -> Result<ExitCode> {
    if decoder.bp2 {
        bail!("trace records quaternary marginals; --bp2 is not supported");
    }
    let LoadedCode { code, .. } = source.load(code_seed)?;
    let (z, _) = resolve_input(&code, input, epsilon, sample_seed)?;
    let selection = if qubits.is_empty() {
        TraceSelection::All
    } else {
        if let Some(&q) = qubits.iter().find(|&&q| q == 0 || q > code.n()) {
            bail!("qubit {q} outside 1..={}", code.n());
        }
        TraceSelection::Only(qubits.iter().map(|q| q - 1).collect())
    };
    let cfg = decoder.config()?.with_trace(selection);
    let priors = vec![QuaternaryPrior::depolarizing(epsilon)?; code.n()];
    let r = Bp4Decoder::new(&code, cfg)?.decode(&z, &priors)?;
    let trace = r.trace.unwrap_or_default();
    match out {
        Some(path) => {
            let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_trace_csv(&trace, BufWriter::new(f))?;
        }
        None => write_trace_csv(&trace, io::stdout().lock())?,
    }
    eprintln!("{} {} after {} iterations", r.status.as_str(), r.estimate, r.iterations);
    Ok(ExitCode::SUCCESS)
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    source: CodeSource,

    #[arg(long)]
    code_seed: Option<u64>,

    /// Single channel rate.
    #[arg(long, value_parser = parse_epsilon, conflicts_with = "epsilon_grid", required_unless_present = "epsilon_grid")]
    epsilon: Option<f64>,

    /// Comma-separated, strictly increasing channel rates.
    #[arg(long, value_delimiter = ',', num_args = 1.., value_parser = parse_epsilon)]
    epsilon_grid: Vec<f64>,

    #[command(flatten)]
    decoders: SweepDecoderArgs,

    /// Master seed; identical flags and seed give identical output.
    #[arg(long)]
    seed: u64,

    #[arg(long, default_value_t = 100)]
    min_logical_errors: u64,

    #[arg(long, default_value_t = 10_000_000)]
    max_trials: u64,

    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "csv")]
    format: Format,

    /// Worker threads; 0 uses every core. Results do not depend on it.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

pub fn simulate(args: &SimulateArgs) -> Result<ExitCode> {
    let LoadedCode { code, id } = args.source.load(args.code_seed)?;
    let epsilons = match args.epsilon {
        Some(e) => vec![e],
        None => args.epsilon_grid.clone(),
    };
    let decoders = args
        .decoders
        .configs()
        .into_iter()
        .map(|c| if args.decoders.bp2 { DecoderSpec::bp2(c) } else { DecoderSpec::bp4(c) })
        .collect();
    let plan = SweepPlan {
        code_id: id,
        epsilons,
        decoders,
        stop: StopRule { min_logical_errors: args.min_logical_errors, max_trials: args.max_trials },
        master_seed: args.seed,
    };
    #[cfg(feature = "parallel")]
    let exec = Execution::Parallel { threads: args.threads };
    #[cfg(not(feature = "parallel"))]
    let exec = {
        if args.threads > 1 {
            eprintln!("built without the `parallel` feature; running on one thread");
        }
        Execution::Sequential
    };

    let sink: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    };
    let mut partial = 0usize;
    let mut report = |p: &SimPoint| {
        eprintln!(
            "eps={} {}: {} logical errors in {} trials{}",
            p.epsilon,
            p.decoder.label(),
            p.logical_errors(),
            p.trials,
            if p.partial { " (trial cap reached)" } else { "" }
        );
        partial += p.partial as usize;
    };
    match args.format {
        Format::Csv => {
            // Rows are flushed as points finish.
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(sink);
            w.write_record(qbp_core::sim::CSV_COLUMNS)?;
            w.flush()?;
            run_sweep(&code, &plan, exec, |p| {
                report(p);
                w.serialize(p.row())?;
                w.flush()?;
                Ok(())
            })?;
        }
        Format::Json => {
            let points = run_sweep(&code, &plan, exec, |p| {
                report(p);
                Ok(())
            })?;
            let mut sink = sink;
            write_json(&points, &mut sink)?;
            writeln!(sink)?;
            sink.flush()?;
        }
    }
    if partial > 0 {
        eprintln!("{partial} point(s) stopped at the trial cap before reaching the logical error target");
        return Ok(ExitCode::from(EXIT_PARTIAL));
    }
    Ok(ExitCode::SUCCESS)
}
