//! Verification harness: report rows, wire formats, and campaign drivers.

pub mod campaign;
pub mod jsonio;
pub mod report;

pub use campaign::{
    check_instance, run_campaign, run_trials, summarize, write_rows, CampaignConfig,
    InstanceInputs, ReportFormat,
};
pub use report::{CampaignSummary, Scenario, TrialReport, Verdict};
