//! `qbp`: construct stabilizer codes, decode syndromes with scalar-message
//! belief propagation, and run Monte Carlo sweeps.

mod args;
mod commands;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use args::{CodeSource, DecoderArgs};

#[derive(Parser, Debug)]
#[command(name = "qbp", version, about = "Belief propagation decoding of quantum stabilizer codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a code, print [[N,K]] and weight histograms, optionally save it.
    Construct {
        #[command(flatten)]
        source: CodeSource,

        /// Seed for the bicycle circulant.
        #[arg(long, alias = "code-seed")]
        seed: Option<u64>,

        /// Write the code in stabilizer text form.
        #[arg(long, value_name = "FILE")]
        out: Option<std::path::PathBuf>,

        /// Write the M × 2N binary check matrix in alist form.
        #[arg(long, value_name = "FILE")]
        alist_out: Option<std::path::PathBuf>,
    },

    /// Decode one syndrome and report status, estimate and iterations.
    Decode {
        #[command(flatten)]
        source: CodeSource,

        #[arg(long)]
        code_seed: Option<u64>,

        #[command(flatten)]
        input: commands::DecodeInput,

        /// Seed for `--error random`.
        #[arg(long)]
        seed: Option<u64>,

        #[arg(long, value_parser = args::parse_epsilon)]
        epsilon: f64,

        #[command(flatten)]
        decoder: DecoderArgs,
    },

    /// Estimate logical error rates over a grid of channel rates and decoders.
    Simulate(commands::SimulateArgs),

    /// Decode one syndrome and write per-iteration marginals as CSV.
    Trace {
        #[command(flatten)]
        source: CodeSource,

        #[arg(long)]
        code_seed: Option<u64>,

        #[command(flatten)]
        input: commands::DecodeInput,

        /// Seed for `--error random`.
        #[arg(long)]
        seed: Option<u64>,

        #[arg(long, value_parser = args::parse_epsilon)]
        epsilon: f64,

        #[command(flatten)]
        decoder: DecoderArgs,

        /// Qubits to trace, numbered from 1. Defaults to all.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        qubits: Vec<usize>,

        #[arg(long, value_name = "FILE")]
        out: Option<std::path::PathBuf>,
    },
}

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    let result = match cli.command {
        Command::Construct { source, seed, out, alist_out } => {
            commands::construct(&source, seed, out.as_deref(), alist_out.as_deref())
        }
        Command::Decode { source, code_seed, input, seed, epsilon, decoder } => {
            commands::decode(&source, code_seed, &input, seed, epsilon, &decoder)
        }
        Command::Simulate(args) => commands::simulate(&args),
        Command::Trace { source, code_seed, input, seed, epsilon, decoder, qubits, out } => {
            commands::trace(&source, code_seed, &input, seed, epsilon, &decoder, &qubits, out.as_deref())
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_DATA)
        }
    }
}
