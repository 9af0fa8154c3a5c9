//! Quaternary belief propagation for stabilizer codes with scalar messages.
//!
//! A check only learns whether the error on each of its qubits commutes with
//! the check's Pauli there, so every message reduces to a single likelihood
//! difference. Variables still keep a full distribution over `I, X, Y, Z`:
//! a value `W` picks up `r⁽⁰⁾` from check `m` when `⟨W, S_mn⟩ = 0` and `r⁽¹⁾`
//! otherwise. Before sending back to check `m`, the four leave-one-out
//! beliefs are regrouped into the commuting pair `{I, S_mn}` and the
//! anticommuting pair.

use crate::code::{StabilizerCode, Syndrome};
use crate::config::DecoderConfig;
use crate::engine::{Engine, Graph, MessageView};
use crate::error::{check_len, Error, Result};
use crate::pauli::{Pauli, PauliString};
use crate::result::{DecodeResult, Status};

pub type Bp4Result = DecodeResult<PauliString, 4>;

/// Channel probabilities over `I, X, Y, Z` for one qubit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuaternaryPrior {
    pub p: [f64; 4],
}

impl QuaternaryPrior {
    pub fn new(p: [f64; 4]) -> Result<Self> {
        let sum: f64 = p.iter().sum();
        if p.iter().any(|x| !(0.0..=1.0).contains(x)) || (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidProbability(format!("{p:?} is not a distribution")));
        }
        Ok(QuaternaryPrior { p })
    }

    /// `(1 − ε, ε/3, ε/3, ε/3)`.
    pub fn depolarizing(epsilon: f64) -> Result<Self> {
        if !(0.0..0.75).contains(&epsilon) {
            return Err(Error::InvalidProbability(format!("depolarizing rate {epsilon} outside [0, 3/4)")));
        }
        let e = epsilon / 3.0;
        Ok(QuaternaryPrior { p: [1.0 - epsilon, e, e, e] })
    }

    pub fn get(&self, w: Pauli) -> f64 {
        self.p[w.index()]
    }
}

/// Bitmask over `[I, X, Y, Z]` of the Paulis anticommuting with `s`.
pub(crate) fn anticommuting_mask(s: Pauli) -> u8 {
    Pauli::ALL
        .iter()
        .filter(|w| w.inner(s))
        .fold(0, |mask, w| mask | 1 << w.index())
}

/// Reusable decoder bound to one stabilizer code.
#[derive(Clone, Debug)]
pub struct Bp4Decoder {
    engine: Engine<4>,
    cfg: DecoderConfig,
}

impl Bp4Decoder {
    pub fn new(code: &StabilizerCode, cfg: DecoderConfig) -> Result<Self> {
        cfg.validate()?;
        let checks: Vec<Vec<(usize, u8)>> = (0..code.m())
            .map(|m| {
                code.check_neighbors(m)
                    .iter()
                    .map(|&(q, s)| (q, anticommuting_mask(s)))
                    .collect()
            })
            .collect();
        // Ties resolve to the earliest of I, X, Y, Z.
        let engine = Engine::new(Graph::new(code.n(), &checks), false);
        Ok(Bp4Decoder { engine, cfg })
    }

    pub fn config(&self) -> &DecoderConfig {
        &self.cfg
    }

    pub fn num_edges(&self) -> usize {
        self.engine.graph().num_edges()
    }

    pub fn decode(&mut self, syndrome: &Syndrome, priors: &[QuaternaryPrior]) -> Result<Bp4Result> {
        self.decode_observed(syndrome, priors, |_| {})
    }

    /// Decode, calling `observer` with the edge messages after every iteration.
    pub fn decode_observed<F>(
        &mut self,
        syndrome: &Syndrome,
        priors: &[QuaternaryPrior],
        mut observer: F,
    ) -> Result<Bp4Result>
    where
        F: FnMut(&MessageView<'_>),
    {
        let graph = self.engine.graph();
        check_len(graph.num_checks(), syndrome.len())?;
        check_len(graph.num_vars(), priors.len())?;
        let priors: Vec<[f64; 4]> = priors.iter().map(|p| p.p).collect();
        let raw = self.engine.run(syndrome.bits(), &priors, &self.cfg, &mut observer);
        let paulis: Vec<Pauli> = raw.values.iter().map(|&v| Pauli::ALL[v as usize]).collect();
        Ok(DecodeResult {
            status: if raw.converged { Status::Success } else { Status::Fail },
            estimate: PauliString::from_paulis(&paulis),
            iterations: raw.iterations,
            trace: raw.trace,
            updates: raw.updates,
        })
    }
}

/// One-shot quaternary decode.
pub fn bp4_decode(
    code: &StabilizerCode,
    z: &Syndrome,
    priors: &[QuaternaryPrior],
    cfg: &DecoderConfig,
) -> Result<Bp4Result> {
    Bp4Decoder::new(code, cfg.clone())?.decode(z, priors)
}
