//! Syndrome decoders: complete cycle-code decoding by minimum-weight
//! T-joins, the two product-code pipelines (X-errors and Z-errors), the
//! local coboundary decoders, and a reproducible Monte Carlo harness.

mod local;
mod sim;
mod tjoin;
mod xz;

pub use local::{local_coboundary_decode, single_edge_decode, CutChecker, LocalDecoder};
pub use sim::{
    simulate_local, simulate_local_with, simulate_product, simulate_product_with,
    sweep_weight1_local, sweep_weight1_local_with, ErrorType, SimulationReport,
};
pub use tjoin::tjoin_decode;
pub use xz::{x_decode, z_decode, z_reduce, CycleBasis, XDecoder, ZDecoder};

use crate::gf2::BitVector;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DecodeError {
    #[error("syndrome length {got}, expected {want}")]
    SyndromeLength { got: usize, want: usize },
    #[error("syndrome is not consistent: {0}")]
    Inconsistent(String),
    #[error("odd-set parity violation in component {0}")]
    OddParity(usize),
    #[error("instance too large for this decoder: {0}")]
    TooLarge(String),
    #[error("input is not a coboundary")]
    NotACoboundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecodeStatus {
    Success,
    Stalled,
    BudgetExceeded,
}

/// What a decoder produced. On success the correction reproduces the input
/// syndrome bit-exactly under the relevant syndrome map; on a stall the
/// correction field is all-zero, never a fabricated answer.
#[derive(Debug, Clone)]
pub struct DecodeOutcome {
    pub correction: BitVector,
    pub status: DecodeStatus,
    pub iterations: usize,
    /// Per-step syndrome weights, starting with the input weight.
    pub syndrome_weights: Vec<usize>,
}

impl DecodeOutcome {
    pub fn stalled(n: usize, iterations: usize, weights: Vec<usize>) -> Self {
        DecodeOutcome {
            correction: BitVector::zeros(n),
            status: DecodeStatus::Stalled,
            iterations,
            syndrome_weights: weights,
        }
    }

    pub fn is_success(&self) -> bool {
        self.status == DecodeStatus::Success
    }
}

/// Which component coboundary decoder drives `z_decode`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComponentDecoder {
    /// Vertex-neighbourhood subset search.
    LocalCoboundary,
    /// Single-edge moves only.
    SingleEdge,
}
