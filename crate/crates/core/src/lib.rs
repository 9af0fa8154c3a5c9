//! Belief propagation decoders for quantum stabilizer codes.
//!
//! Errors are Pauli strings, codes are sets of commuting Pauli checks, and
//! decoding works from the syndrome alone. The quaternary decoder
//! ([`bp4`]) exchanges one scalar per edge and per direction, the same
//! message cost as binary BP ([`bp2`]), while keeping X/Z correlations at
//! the variable nodes.

pub mod alist;
pub mod bits;
pub mod bp2;
pub mod bp4;
pub mod code;
pub mod config;
pub mod construct;
pub mod conventional;
pub mod engine;
pub mod error;
pub mod gf2;
pub mod pauli;
pub mod result;
pub mod sim;

pub use bits::Bits;
pub use bp2::{bp2_decode, bp2_on_stabilizer, BinaryPrior, Bp2Decoder, StabilizerBp2Decoder};
pub use bp4::{bp4_decode, Bp4Decoder, QuaternaryPrior};
pub use code::{Outcome, StabilizerCode, Syndrome};
pub use config::{DecoderConfig, Modifier, Schedule, TraceSelection};
pub use error::{Error, Result};
pub use gf2::BinaryMatrix;
pub use pauli::{Pauli, PauliString, SymplecticVector};
pub use result::{DecodeResult, Status};
pub use sim::{run_point, run_sweep, DecoderKind, DecoderSpec, Execution, SimPoint, StopRule, SweepPlan};
