//! The run report: every number the pipeline produced, in one JSON document.
//!
//! Serialization is fully deterministic — struct fields serialize in
//! declaration order and the only map uses sorted keys — except for the
//! trailing `timestamp` object, which holds wall-clock data (epoch seconds
//! and per-phase timings). Comparisons across runs drop that one key.

use crate::config::RunConfig;
use gaptile::tiling::{CertificateReport, TilingReport};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::time::{SystemTime, UNIX_EPOCH};

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    /// Bumped on breaking schema changes.
    pub format_version: String,
    /// Echo of the resolved configuration that produced this report.
    pub config: RunConfig,
    pub solve: SolveSection,
    pub alpha: AlphaSection,
    pub gap: GapSection,
    pub tiling: TilingSection,
    pub delta_gap: TilingSection,
    pub certificate: CertificateReport,
    pub flc: FlcSection,
    pub artifacts: ArtifactsSection,
    /// Appended by `verify`; absent right after a solve.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifySection>,
    /// Wall-clock data, excluded from byte-level run comparisons.
    pub timestamp: TimestampSection,
}

/// Fixed-point iteration outcome.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveSection {
    pub iterations: usize,
    /// Successive-distance threshold that ended the iteration.
    pub threshold: f64,
    /// Final grid residual `sup |f + Rf - g|`.
    pub residual: f64,
    /// Coefficient mass beyond the retained block, as seen by the final
    /// analysis pass.
    pub truncation_tail: f64,
    pub distance_trace: Vec<f64>,
    pub ratio_trace: Vec<f64>,
}

/// Shape of the extracted perturbation sequence.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlphaSection {
    pub n_coeff: usize,
    pub max_abs: f64,
    /// Index attaining `max_abs` (smallest such index on ties).
    pub argmax: i64,
    pub l2_mass: f64,
    /// Sup norm of the solved function; dominates `l2_mass` by Parseval.
    pub sup_f: f64,
    /// Largest `|alpha(-n) - alpha(n)|`; small but nonzero, because the
    /// correction operator is not exactly even in the coefficient index.
    pub mirror_asymmetry: f64,
    pub nonzero_count: usize,
    /// Whether the outer half of the indices carries no more mass than the
    /// inner half (a soft sanity signal, not a gate).
    pub decay_ok: bool,
}

/// Transform magnitude scan across the intended spectral gap.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GapSection {
    /// Scan reaches `|t| <= scan_reach` (a 5% margin inside the gap).
    pub scan_reach: f64,
    pub grid_points: usize,
    pub residual: f64,
    /// Same scan after re-solving with twice the coefficient count; the
    /// residual must strictly decrease, showing the gap deepens with
    /// resolution instead of stagnating.
    pub doubled_n_coeff: usize,
    pub doubled_residual: f64,
    pub strictly_decreasing: bool,
    pub tolerance: f64,
    pub pass: bool,
}

/// A kernel-sum residual scan plus its pass verdict.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TilingSection {
    pub report: TilingReport,
    pub tolerance: f64,
    pub pass: bool,
}

/// Distinct successive-gap counts over growing index windows.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlcSection {
    pub windows: Vec<usize>,
    pub alphabet_sizes: Vec<usize>,
    /// Strict growth certifies the set keeps generating new gap lengths,
    /// which is what rules out any period within the scanned range.
    pub strictly_increasing: bool,
}

/// File names of the artifacts, relative to the report's own directory.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArtifactsSection {
    pub alpha_csv: String,
    pub lambda_csv: String,
    pub report_json: String,
}

/// Result of an independent re-verification from persisted artifacts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifySection {
    pub which: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recomputed_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reported_residual: Option<f64>,
    /// `recomputed - reported`; zero when the artifacts are untouched,
    /// since the CSV round-trips doubles exactly.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub difference: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alphabet_sizes: Option<Vec<usize>>,
    pub statement: String,
}

/// Wall-clock block; the single nondeterministic part of the report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TimestampSection {
    pub unix_seconds: u64,
    pub timings_ms: BTreeMap<String, u64>,
}

impl TimestampSection {
    pub fn now(timings_ms: BTreeMap<String, u64>) -> Self {
        let unix_seconds = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        TimestampSection {
            unix_seconds,
            timings_ms,
        }
    }
}

impl RunReport {
    /// Pretty JSON with a trailing newline; the canonical on-disk form.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    /// Overall verdict: no gate may fail.
    pub fn all_pass(&self) -> bool {
        self.gap.pass
            && self.tiling.pass
            && self.delta_gap.pass
            && self.certificate.pass
            && self.flc.strictly_increasing
    }

    /// Names of the failed gates, for error messages.
    pub fn failed_gates(&self) -> Vec<&'static str> {
        let mut failed = Vec::new();
        if !self.gap.pass {
            failed.push("gap");
        }
        if !self.tiling.pass {
            failed.push("tiling");
        }
        if !self.delta_gap.pass {
            failed.push("delta_gap");
        }
        if !self.certificate.pass {
            failed.push("certificate");
        }
        if !self.flc.strictly_increasing {
            failed.push("flc");
        }
        failed
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn timings_map_serializes_in_key_order() {
        let mut timings = BTreeMap::new();
        timings.insert("solve".to_string(), 12);
        timings.insert("gap".to_string(), 3);
        let section = TimestampSection::now(timings);
        let text = serde_json::to_string(&section).unwrap();
        let gap_pos = text.find("\"gap\"").unwrap();
        let solve_pos = text.find("\"solve\"").unwrap();
        assert!(gap_pos < solve_pos, "{text}");
    }
}
