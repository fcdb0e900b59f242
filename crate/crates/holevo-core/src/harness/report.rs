//! Report rows and campaign summaries. Rows serialize deterministically:
//! no timestamps, sorted residual keys, and shortest-round-trip floats, so
//! identical configurations produce byte-identical report files.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// What a campaign or single-instance check is verifying.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    /// Induced-ensemble entropy bound on random bipartite states.
    Theorem1,
    /// Conditioned three-state correlation-entropy bound.
    Theorem2,
    /// Search for a correlation matrix with a negative eigenvalue.
    Counterexample,
    /// Dilation of measurements to projective ones.
    Naimark,
    /// Unitary 3×3 block positivity biconditional.
    Lemma2,
    /// K×K chain/stack forms and their projector structure.
    Kchain,
    /// Single 3×3 block operator: PSD verdict and contraction witnesses
    /// (instance checks only).
    Block,
}

impl Scenario {
    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::Theorem1 => "theorem1",
            Scenario::Theorem2 => "theorem2",
            Scenario::Counterexample => "counterexample",
            Scenario::Naimark => "naimark",
            Scenario::Lemma2 => "lemma2",
            Scenario::Kchain => "kchain",
            Scenario::Block => "block",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The hypothesis gating the inequality did not hold; nothing asserted.
    ConditionNotMet,
    /// A search trial that produced no violation.
    NoneFound,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::ConditionNotMet => "condition_not_met",
            Verdict::NoneFound => "none_found",
        })
    }
}

/// One trial's inputs digest, measured quantities, and verdict. Every fail
/// row carries the scenario, seed digest, and trial index needed to
/// regenerate its inputs exactly.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialReport {
    pub trial: u64,
    pub scenario: Scenario,
    pub input_digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_a: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_b: Option<usize>,
    /// Ensemble size N, or the block count K for chain scenarios.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kraus: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_corr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual_uvw: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_eig: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rayleigh: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub is_psd: Option<bool>,
    /// Scenario-specific named residuals, in sorted key order.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residuals: Option<BTreeMap<String, f64>>,
    /// Full violation witness data (search scenarios only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
    pub verdict: Verdict,
}

impl TrialReport {
    pub fn new(trial: u64, scenario: Scenario, input_digest: String) -> Self {
        TrialReport {
            trial,
            scenario,
            input_digest,
            d_a: None,
            d_b: None,
            n: None,
            kraus: None,
            rank: None,
            chi: None,
            s_a: None,
            s_b: None,
            s_corr: None,
            margin: None,
            residual_uvw: None,
            min_eig: None,
            rayleigh: None,
            is_psd: None,
            residuals: None,
            witness: None,
            verdict: Verdict::Pass,
        }
    }

    pub fn add_residual(&mut self, key: &str, value: f64) {
        self.residuals
            .get_or_insert_with(BTreeMap::new)
            .insert(key.to_owned(), value);
    }

    /// Largest named residual, if any were recorded.
    pub fn worst_residual(&self) -> Option<f64> {
        self.residuals
            .as_ref()
            .and_then(|m| m.values().copied().max_by(f64::total_cmp))
    }

    pub const CSV_HEADER: &'static str = "trial,dA,dB,K,chi,S_A,S_B,margin,verdict";

    /// Fixed-column CSV row; absent quantities are left empty.
    pub fn to_csv_row(&self) -> String {
        fn num<T: fmt::Display>(v: &Option<T>) -> String {
            v.as_ref().map(|x| x.to_string()).unwrap_or_default()
        }
        // The K column carries the Kraus count for channel scenarios and
        // the ensemble/block count for the others.
        let k = self.kraus.or(self.n);
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.trial,
            num(&self.d_a),
            num(&self.d_b),
            num(&k),
            num(&self.chi),
            num(&self.s_a),
            num(&self.s_b),
            num(&self.margin),
            self.verdict
        )
    }
}

/// Aggregate outcome of a campaign.
#[derive(Debug, Clone, Serialize)]
pub struct CampaignSummary {
    pub scenario: Scenario,
    pub trials: u64,
    pub passes: u64,
    pub fails: u64,
    pub condition_not_met: u64,
    pub none_found: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_residual: Option<f64>,
    /// Search scenarios: whether a violation witness was found.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation_found: Option<bool>,
    pub elapsed_ms: u64,
}

impl CampaignSummary {
    /// Exit convention: searches succeed by finding a violator; every other
    /// scenario succeeds with zero fails.
    pub fn is_success(&self) -> bool {
        match self.violation_found {
            Some(found) => found,
            None => self.fails == 0,
        }
    }

    pub fn one_line(&self) -> String {
        let mut line = format!(
            "{}: {} trials, {} pass, {} fail",
            self.scenario, self.trials, self.passes, self.fails
        );
        if self.condition_not_met > 0 {
            line.push_str(&format!(", {} condition_not_met", self.condition_not_met));
        }
        if self.none_found > 0 {
            line.push_str(&format!(", {} none_found", self.none_found));
        }
        if let Some(m) = self.worst_margin {
            line.push_str(&format!(", worst margin {m:.3e}"));
        }
        if let Some(r) = self.worst_residual {
            line.push_str(&format!(", worst residual {r:.3e}"));
        }
        if let Some(found) = self.violation_found {
            line.push_str(if found {
                ", violation found"
            } else {
                ", no violation found"
            });
        }
        line.push_str(&format!(", {} ms", self.elapsed_ms));
        line
    }
}
