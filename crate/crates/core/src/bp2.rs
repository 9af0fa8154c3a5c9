//! Binary belief propagation syndrome decoding with scalar messages.
//!
//! Works on any binary parity-check matrix and, through the symplectic
//! mapping, on stabilizer codes (see [`StabilizerBp2Decoder`]).

use crate::bits::Bits;
use crate::code::{StabilizerCode, Syndrome};
use crate::config::DecoderConfig;
use crate::engine::{Engine, Graph, MessageView};
use crate::error::{check_len, Error, Result};
use crate::gf2::BinaryMatrix;
use crate::pauli::{PauliString, SymplecticVector};
use crate::result::{DecodeResult, Status};

pub type Bp2Result = DecodeResult<Bits, 2>;

/// Channel probabilities `(P(E_n = 0), P(E_n = 1))` for one bit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BinaryPrior {
    pub p0: f64,
    pub p1: f64,
}

impl BinaryPrior {
    /// Prior with `P(E_n = 1) = p1`.
    pub fn new(p1: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p1) {
            return Err(Error::InvalidProbability(format!("bit flip probability {p1}")));
        }
        Ok(BinaryPrior { p0: 1.0 - p1, p1 })
    }

    fn as_array(self) -> [f64; 2] {
        [self.p0, self.p1]
    }
}

/// Reusable binary decoder bound to one parity-check matrix.
#[derive(Clone, Debug)]
pub struct Bp2Decoder {
    engine: Engine<2>,
    cfg: DecoderConfig,
}

impl Bp2Decoder {
    pub fn new(h: &BinaryMatrix, cfg: DecoderConfig) -> Result<Self> {
        cfg.validate()?;
        let checks: Vec<Vec<(usize, u8)>> = h
            .rows()
            .map(|row| row.iter().map(|&c| (c, 0b10)).collect())
            .collect();
        // Binary hard decision picks 0 only when q⁽⁰⁾ > q⁽¹⁾ strictly.
        let engine = Engine::new(Graph::new(h.num_cols(), &checks), true);
        Ok(Bp2Decoder { engine, cfg })
    }

    pub fn config(&self) -> &DecoderConfig {
        &self.cfg
    }

    pub fn num_edges(&self) -> usize {
        self.engine.graph().num_edges()
    }

    pub fn decode(&mut self, syndrome: &Syndrome, priors: &[BinaryPrior]) -> Result<Bp2Result> {
        self.decode_observed(syndrome, priors, |_| {})
    }

    /// Decode, calling `observer` with the edge messages after every iteration.
    pub fn decode_observed<F>(&mut self, syndrome: &Syndrome, priors: &[BinaryPrior], mut observer: F) -> Result<Bp2Result>
    where
        F: FnMut(&MessageView<'_>),
    {
        let graph = self.engine.graph();
        check_len(graph.num_checks(), syndrome.len())?;
        check_len(graph.num_vars(), priors.len())?;
        let priors: Vec<[f64; 2]> = priors.iter().map(|p| p.as_array()).collect();
        let raw = self.engine.run(syndrome.bits(), &priors, &self.cfg, &mut observer);
        Ok(DecodeResult {
            status: if raw.converged { Status::Success } else { Status::Fail },
            estimate: Bits::from_bools(raw.values.iter().map(|&v| v == 1)),
            iterations: raw.iterations,
            trace: raw.trace,
            updates: raw.updates,
        })
    }
}

/// One-shot binary decode.
pub fn bp2_decode(h: &BinaryMatrix, z: &Syndrome, priors: &[BinaryPrior], cfg: &DecoderConfig) -> Result<Bp2Result> {
    Bp2Decoder::new(h, cfg.clone())?.decode(z, priors)
}

/// Binary BP on a stabilizer code through its `M × 2N` binary check matrix.
///
/// Every one of the `2N` error bits gets the prior `P(1) = 2ε/3`, the
/// marginal probability that a depolarizing error has an X (or Z) component.
#[derive(Clone, Debug)]
pub struct StabilizerBp2Decoder {
    inner: Bp2Decoder,
    n: usize,
}

impl StabilizerBp2Decoder {
    pub fn new(code: &StabilizerCode, cfg: DecoderConfig) -> Result<Self> {
        Ok(StabilizerBp2Decoder {
            inner: Bp2Decoder::new(&code.to_binary_check(), cfg)?,
            n: code.n(),
        })
    }

    pub fn config(&self) -> &DecoderConfig {
        self.inner.config()
    }

    pub fn decode(&mut self, syndrome: &Syndrome, epsilon: f64) -> Result<DecodeResult<PauliString, 2>> {
        let priors = vec![BinaryPrior::new(2.0 * epsilon / 3.0)?; 2 * self.n];
        let r = self.inner.decode(syndrome, &priors)?;
        let estimate = PauliString::from_symplectic(&SymplecticVector::new(r.estimate)?);
        Ok(DecodeResult {
            status: r.status,
            estimate,
            iterations: r.iterations,
            trace: r.trace,
            updates: r.updates,
        })
    }
}

pub fn bp2_on_stabilizer(
    code: &StabilizerCode,
    z: &Syndrome,
    epsilon: f64,
    cfg: &DecoderConfig,
) -> Result<DecodeResult<PauliString, 2>> {
    StabilizerBp2Decoder::new(code, cfg.clone())?.decode(z, epsilon)
}
