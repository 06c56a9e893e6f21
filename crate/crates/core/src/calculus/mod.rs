//! Approximate subdifferentials, normal sets and coderivatives, together with
//! the scalar, sum and intersection rules.

pub mod coderiv;
pub mod esub;
pub mod normal;
pub mod oracle;
pub mod sum_rule;

use crate::error::{Error, Result};

pub use coderiv::{coderiv_intersection_check, coderiv_sum_decompose, graph_sum, CoderivSplit, IntersectionCheck, IntersectionWitness};
pub use esub::{esub_gap, esub_interval, esub_limit, esub_membership, scalar_rule, LadderLimit};
pub use normal::{ecoderiv_membership, enormal2_membership, enormal_interval, epi_membership_check};
pub use oracle::{oracle_esub_interval, oracle_membership, OracleInterval};
pub use sum_rule::{infimal_convolution, sum_rule_decompose, SplitCertificate};

/// A strictly decreasing sequence of positive tolerances standing in for
/// "all η > 0".
#[derive(Debug, Clone, PartialEq)]
pub struct EtaLadder {
    values: Vec<f64>,
}

impl EtaLadder {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|v| v.is_nan() || *v <= 0.0 || !v.is_finite()) {
            return Err(Error::InvalidArgument("ladder values must be positive".into()));
        }
        if values.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::InvalidArgument("ladder must be strictly decreasing".into()));
        }
        Ok(EtaLadder { values })
    }

    /// `{2^-k : k = 0..=depth}`.
    pub fn powers_of_two(depth: u32) -> Self {
        EtaLadder { values: (0..=depth).map(|k| 2f64.powi(-(k as i32))).collect() }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn smallest(&self) -> f64 {
        *self.values.last().expect("ladder is nonempty")
    }
}

impl Default for EtaLadder {
    fn default() -> Self {
        EtaLadder::powers_of_two(20)
    }
}
