//! Line-delimited trial records shared by the conjecture explorers.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Outcome of one explorer trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrialStatus {
    /// Criterion and exact ground truth coincide.
    Agree,
    /// Criterion holds and no exact refutation was found, but ground truth is
    /// only evidence (the falsifier cannot prove regularity).
    Unrefuted,
    /// Exactly verified disagreement: a counterexample to the conjecture.
    Counterexample,
    /// Ground truth could not be established within budget.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    /// `(seed, trial)` replays the instance.
    pub seed: u64,
    pub n: usize,
    pub instance_hash: String,
    pub criterion: bool,
    /// `None` when ground truth is unknown.
    pub ground_truth: Option<bool>,
    pub status: TrialStatus,
    /// Verdict under the alternative reading of the criterion, where defined.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alt_criterion: Option<bool>,
    /// Matrix file text of the instance.
    pub instance: String,
    /// Exact certificate for the ground truth, when one exists.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplorationSummary {
    pub trials: usize,
    pub agree: usize,
    pub unrefuted: usize,
    pub counterexamples: usize,
    pub inconclusive: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExplorationReport {
    pub conjecture: u8,
    pub seed: u64,
    pub summary: ExplorationSummary,
    pub records: Vec<TrialRecord>,
}

impl ExplorationReport {
    pub fn new(conjecture: u8, seed: u64, records: Vec<TrialRecord>) -> Self {
        let mut summary = ExplorationSummary { trials: records.len(), ..Default::default() };
        for r in &records {
            match r.status {
                TrialStatus::Agree => summary.agree += 1,
                TrialStatus::Unrefuted => summary.unrefuted += 1,
                TrialStatus::Counterexample => summary.counterexamples += 1,
                TrialStatus::Inconclusive => summary.inconclusive += 1,
            }
        }
        Self { conjecture, seed, summary, records }
    }

    pub fn counterexamples(&self) -> impl Iterator<Item = &TrialRecord> {
        self.records.iter().filter(|r| r.status == TrialStatus::Counterexample)
    }
}

/// First 16 hex digits of the SHA-256 of `text`.
pub fn instance_hash(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().take(8).map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExplorerConfig {
    pub trials: u64,
    pub max_n: usize,
    pub seed: u64,
    pub budget_bits: u32,
}

impl Default for ExplorerConfig {
    fn default() -> Self {
        Self { trials: 1000, max_n: 4, seed: 0, budget_bits: crate::singular::DEFAULT_BUDGET_BITS }
    }
}
