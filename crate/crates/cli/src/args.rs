use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use qbp_core::alist::{load_alist, AlistOptions};
use qbp_core::construct::{bch_parity, bicycle_code, five_qubit_code, hypergraph_product, BchVariant, BicycleSpec};
use qbp_core::{BinaryMatrix, DecoderConfig, Modifier, Schedule, StabilizerCode};

/// Where the stabilizer code comes from. Exactly one source is required.
#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct CodeSource {
    /// The [[5,1]] code.
    #[arg(long)]
    pub five_qubit: bool,

    /// Hypergraph product of two classical codes: `bch7`, `bch15` or an alist file.
    #[arg(long, num_args = 2, value_names = ["H1", "H2"])]
    pub hgp: Option<Vec<String>>,

    /// Bicycle code of length N with M retained checks and circulant row weight W.
    #[arg(long, num_args = 3, value_names = ["N", "M", "W"])]
    pub bicycle: Option<Vec<usize>>,

    /// Stabilizer text file: header `N M`, then one I/X/Y/Z row per check.
    #[arg(long, value_name = "FILE")]
    pub stabilizer: Option<PathBuf>,

    /// CSS code from alist files; one file H gives X and Z checks both equal to H.
    #[arg(long, num_args = 1..=2, value_names = ["HX", "HZ"])]
    pub alist: Option<Vec<PathBuf>>,
}

/// A loaded code and a short identifier for result files.
pub struct LoadedCode {
    pub code: StabilizerCode,
    pub id: String,
}

impl CodeSource {
    pub fn load(&self, code_seed: Option<u64>) -> Result<LoadedCode> {
        if self.five_qubit {
            return Ok(LoadedCode { code: five_qubit_code(), id: "five-qubit".into() });
        }
        if let Some(names) = &self.hgp {
            let h1 = classical_matrix(&names[0])?;
            let h2 = classical_matrix(&names[1])?;
            let code = hypergraph_product(&h1, &h2)?;
            let id = format!("hgp-{}-{}", short_name(&names[0]), short_name(&names[1]));
            return Ok(LoadedCode { code, id });
        }
        if let Some(v) = &self.bicycle {
            let Some(seed) = code_seed else {
                bail!("--bicycle needs a seed for the circulant");
            };
            let spec = BicycleSpec { n: v[0], m: v[1], circulant_row_weight: v[2], seed };
            let code = bicycle_code(&spec)?;
            let id = format!("bicycle-{}-{}-{}-s{}", v[0], v[1], v[2], seed);
            return Ok(LoadedCode { code, id });
        }
        if let Some(path) = &self.stabilizer {
            let text = read(path)?;
            let code = StabilizerCode::from_text(&text).with_context(|| format!("parsing {}", path.display()))?;
            return Ok(LoadedCode { code, id: short_name(&path.to_string_lossy()) });
        }
        if let Some(paths) = &self.alist {
            let hx = read_alist(&paths[0])?;
            let hz = match paths.get(1) {
                Some(p) => read_alist(p)?,
                None => hx.clone(),
            };
            let code = StabilizerCode::css(&hx, &hz)?;
            let id = paths.iter().map(|p| short_name(&p.to_string_lossy())).collect::<Vec<_>>().join("-");
            return Ok(LoadedCode { code, id });
        }
        unreachable!("clap requires one code source")
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_alist(path: &Path) -> Result<BinaryMatrix> {
    let text = read(path)?;
    load_alist(&text, AlistOptions::default()).with_context(|| format!("parsing {}", path.display()))
}

fn classical_matrix(name: &str) -> Result<BinaryMatrix> {
    match name {
        "bch7" | "hamming7" => Ok(bch_parity(BchVariant::Hamming7)),
        "bch15" => Ok(bch_parity(BchVariant::Bch15_7)),
        path => read_alist(Path::new(path)),
    }
}

fn short_name(s: &str) -> String {
    Path::new(s)
        .file_stem()
        .map(|x| x.to_string_lossy().into_owned())
        .unwrap_or_else(|| s.to_string())
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScheduleArg {
    Parallel,
    Serial,
}

impl From<ScheduleArg> for Schedule {
    fn from(s: ScheduleArg) -> Schedule {
        match s {
            ScheduleArg::Parallel => Schedule::Parallel,
            ScheduleArg::Serial => Schedule::Serial,
        }
    }
}

pub fn parse_epsilon(s: &str) -> std::result::Result<f64, String> {
    let e: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if (0.0..0.75).contains(&e) {
        Ok(e)
    } else {
        Err(format!("depolarizing rate {e} outside [0, 0.75)"))
    }
}

fn parse_positive(s: &str) -> std::result::Result<f64, String> {
    let a: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if a > 0.0 && a.is_finite() {
        Ok(a)
    } else {
        Err(format!("{a} must be positive"))
    }
}

fn parse_non_negative(s: &str) -> std::result::Result<f64, String> {
    let b: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if b >= 0.0 && b.is_finite() {
        Ok(b)
    } else {
        Err(format!("{b} must be non-negative"))
    }
}

fn parse_max_iter(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("{s:?} is not a positive integer")),
    }
}

/// Single decoder configuration.
#[derive(Args, Debug, Clone)]
pub struct DecoderArgs {
    #[arg(long, value_enum, default_value = "serial")]
    pub schedule: ScheduleArg,

    #[arg(long, default_value_t = 90, value_parser = parse_max_iter)]
    pub max_iter: usize,

    /// Check-message normalization: r ← r^(1/alpha_c).
    #[arg(long, value_parser = parse_positive, conflicts_with_all = ["alpha_v", "beta"])]
    pub alpha_c: Option<f64>,

    /// Variable-message normalization: q ← q^(1/alpha_v).
    #[arg(long, value_parser = parse_positive, conflicts_with = "beta")]
    pub alpha_v: Option<f64>,

    /// Check-message offset by e^beta.
    #[arg(long, value_parser = parse_non_negative)]
    pub beta: Option<f64>,

    /// Decode with binary BP on the symplectic check matrix.
    #[arg(long)]
    pub bp2: bool,
}

impl DecoderArgs {
    pub fn config(&self) -> Result<DecoderConfig> {
        let modifier = Modifier::from_options(self.alpha_c, self.alpha_v, self.beta)?;
        Ok(DecoderConfig::new(self.schedule.into())
            .with_max_iter(self.max_iter)
            .with_modifier(modifier))
    }
}

/// Decoder grid for sweeps: every schedule, unmodified and with each
/// modifier value.
#[derive(Args, Debug, Clone)]
pub struct SweepDecoderArgs {
    #[arg(long, value_enum, value_delimiter = ',', num_args = 1.., default_value = "serial")]
    pub schedule: Vec<ScheduleArg>,

    #[arg(long, default_value_t = 90, value_parser = parse_max_iter)]
    pub max_iter: usize,

    #[arg(long, value_delimiter = ',', num_args = 1.., value_parser = parse_positive)]
    pub alpha_c: Vec<f64>,

    #[arg(long, value_delimiter = ',', num_args = 1.., value_parser = parse_positive)]
    pub alpha_v: Vec<f64>,

    #[arg(long, value_delimiter = ',', num_args = 1.., value_parser = parse_non_negative)]
    pub beta: Vec<f64>,

    /// Skip the unmodified decoder when modifier values are given.
    #[arg(long)]
    pub modified_only: bool,

    #[arg(long)]
    pub bp2: bool,
}

impl SweepDecoderArgs {
    pub fn configs(&self) -> Vec<DecoderConfig> {
        let mut modifiers = Vec::new();
        let any = !(self.alpha_c.is_empty() && self.alpha_v.is_empty() && self.beta.is_empty());
        if !(any && self.modified_only) {
            modifiers.push(Modifier::None);
        }
        modifiers.extend(self.alpha_c.iter().map(|&a| Modifier::CheckNormalization(a)));
        modifiers.extend(self.alpha_v.iter().map(|&a| Modifier::VariableNormalization(a)));
        modifiers.extend(self.beta.iter().map(|&b| Modifier::Offset(b)));
        let mut out = Vec::new();
        for &s in &self.schedule {
            for &m in &modifiers {
                out.push(DecoderConfig::new(s.into()).with_max_iter(self.max_iter).with_modifier(m));
            }
        }
        out
    }
}
