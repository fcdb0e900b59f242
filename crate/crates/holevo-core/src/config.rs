//! Numerical tolerances used across the crate.
//!
//! Every check that separates "numerically fine" from "property violated"
//! reads its threshold from [`Tolerances`], so a single table governs the
//! whole pipeline and the CLI can override any entry with `--tol KEY=VAL`.

use crate::error::{Error, Result};
use serde::Serialize;

/// Central tolerance table. All values are dimensionless; norms are
/// Frobenius unless stated otherwise.
#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    /// Relative bound on `‖H − H†‖_F / ‖H‖_F` for Hermiticity acceptance.
    pub hermiticity: f64,
    /// Most negative eigenvalue a PSD candidate may show before rejection.
    pub psd: f64,
    /// Relative reconstruction error the eigensolver must achieve.
    pub eig: f64,
    /// Relative eigenvalue cutoff separating numerical rank from noise.
    pub rank: f64,
    /// Bound on `‖Σ Mᵀμ M_μ − 1‖_F` for Kraus completeness.
    pub kraus: f64,
    /// Slack granted to theorem margins before a trial counts as a violation.
    pub theorem: f64,
    /// Residual under which the polar side condition `V = U·W` is accepted.
    pub condition: f64,
    /// Measurement outcomes with probability at or below this floor are dropped.
    pub prob_floor: f64,
    /// Bound on `‖U†U − 1‖_F` for unitarity acceptance.
    pub unitary: f64,
    /// Logarithm base for all entropies; 2.0 measures in bits.
    pub log_base: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            hermiticity: 1e-10,
            psd: 1e-9,
            eig: 1e-11,
            rank: 1e-10,
            kraus: 1e-9,
            theorem: 1e-7,
            condition: 1e-8,
            prob_floor: 1e-12,
            unitary: 1e-9,
            log_base: 2.0,
        }
    }
}

impl Tolerances {
    /// Set one entry by key name. Keys match the field names.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(Error::Config(format!("tolerance {key} must be finite")));
        }
        let slot = match key {
            "hermiticity" => &mut self.hermiticity,
            "psd" => &mut self.psd,
            "eig" => &mut self.eig,
            "rank" => &mut self.rank,
            "kraus" => &mut self.kraus,
            "theorem" => &mut self.theorem,
            "condition" => &mut self.condition,
            "prob_floor" => &mut self.prob_floor,
            "unitary" => &mut self.unitary,
            "log_base" => &mut self.log_base,
            other => return Err(Error::Config(format!("unknown tolerance key `{other}`"))),
        };
        if key == "log_base" {
            if value <= 1.0 {
                return Err(Error::Config("log_base must exceed 1".into()));
            }
        } else if value < 0.0 {
            return Err(Error::Config(format!("tolerance {key} must be non-negative")));
        }
        *slot = value;
        Ok(())
    }

    /// Apply one `KEY=VAL` override as passed on the command line.
    pub fn apply_override(&mut self, spec: &str) -> Result<()> {
        let (key, val) = spec
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("tolerance override `{spec}` is not KEY=VAL")))?;
        let value: f64 = val
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("tolerance value `{val}` is not a number")))?;
        self.set(key.trim(), value)
    }
}
