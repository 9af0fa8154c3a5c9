use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::engine::{IterationMarginals, UpdateCount};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    /// The hard decision reproduces the syndrome.
    Success,
    /// The iteration budget ran out first.
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Success => "SUCCESS",
            Status::Fail => "FAIL",
        }
    }
}

/// Output of one decoding run.
///
/// `trace` holds per-iteration normalized beliefs over `Q` values when the
/// configuration asked for it.
#[derive(Clone, Debug, PartialEq)]
pub struct DecodeResult<E, const Q: usize> {
    pub status: Status,
    pub estimate: E,
    pub iterations: usize,
    pub trace: Option<Vec<IterationMarginals<Q>>>,
    pub updates: UpdateCount,
}

impl<E, const Q: usize> DecodeResult<E, Q> {
    pub fn is_success(&self) -> bool {
        self.status == Status::Success
    }
}

/// Write a quaternary trace as CSV with columns
/// `iteration,qubit,pI,pX,pY,pZ`. Qubits are numbered from 1.
pub fn write_trace_csv<W: Write>(trace: &[IterationMarginals<4>], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["iteration", "qubit", "pI", "pX", "pY", "pZ"])?;
    for it in trace {
        for (q, p) in &it.marginals {
            w.serialize((it.iteration, q + 1, p[0], p[1], p[2], p[3]))?;
        }
    }
    w.flush()?;
    Ok(())
}
