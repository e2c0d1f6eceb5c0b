//! Run configuration: a flat, schema-versioned JSON document.
//!
//! Unknown keys are rejected and every mathematical precondition is
//! re-checked at load time, so a config that loads cleanly is one the solver
//! and the verification passes will actually accept. Missing keys fall back
//! to the reference defaults, which reproduce the pinned end-to-end run.

use gaptile::kernels::kernel_by_name;
use gaptile::solver::SolverParams;
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const SCHEMA_VERSION: u64 = 1;

/// Problems surfaced while loading a config file. `Schema` covers document
/// shape (exit code 4 territory); `Invariant` covers violated mathematical
/// constraints (exit code 2).
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("config schema problem: {0}")]
    Schema(String),
    #[error("config invariant violated: {0}")]
    Invariant(String),
}

/// Raw on-disk shape: everything optional except the schema version, every
/// key spelled exactly as documented. `deny_unknown_fields` turns typos into
/// load failures instead of silently ignored settings.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    schema_version: Option<u64>,
    a: Option<f64>,
    eps: Option<f64>,
    contraction_c: Option<f64>,
    amplitude: Option<f64>,
    n_coeff: Option<usize>,
    grid_m: Option<usize>,
    fp_tol: Option<f64>,
    max_iter: Option<usize>,
    tiling_kernel: Option<String>,
    tiling_bandwidth: Option<f64>,
    tiling_radius: Option<f64>,
    gap_kernel: Option<String>,
    gap_bandwidth: Option<f64>,
    gap_radius: Option<f64>,
    x_span: Option<f64>,
    x_count: Option<usize>,
    gap_grid_count: Option<usize>,
    gap_tolerance: Option<f64>,
    tiling_tolerance: Option<f64>,
    gap_test_tolerance: Option<f64>,
    alphabet_round_tol: Option<f64>,
    lambda_window: Option<usize>,
    ztile_instance: Option<String>,
    output_dir: Option<String>,
    seed: Option<u64>,
}

/// Fully resolved configuration, echoed verbatim into every run report.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u64,
    /// Spectral gap half-width: the transform vanishes on `(-a, a)`.
    pub a: f64,
    /// Radius of the ball around the target in which the iteration runs.
    pub eps: f64,
    /// Sup-norm cap defining the contraction factor `2 pi c`.
    pub contraction_c: f64,
    /// Peak of the smooth target profile outside the gap.
    pub amplitude: f64,
    /// Number of Fourier coefficients kept on each side of zero.
    pub n_coeff: usize,
    /// Sample count of the uniform circle grid.
    pub grid_m: usize,
    /// Successive-distance threshold scale for declaring convergence.
    pub fp_tol: f64,
    pub max_iter: usize,
    /// Kernel used for the main real-line tiling residual.
    pub tiling_kernel: String,
    pub tiling_bandwidth: f64,
    pub tiling_radius: f64,
    /// Independent kernel family for the bandwidth-inside-the-gap cross
    /// check; must differ from `tiling_kernel` so the two tests share
    /// nothing beyond the translation set.
    pub gap_kernel: String,
    pub gap_bandwidth: f64,
    pub gap_radius: f64,
    /// Half-width of the x interval scanned by the tiling residual.
    pub x_span: f64,
    pub x_count: usize,
    /// Number of frequency samples across the gap scan.
    pub gap_grid_count: usize,
    pub gap_tolerance: f64,
    pub tiling_tolerance: f64,
    pub gap_test_tolerance: f64,
    /// Rounding quantum when collecting distinct successive gaps.
    pub alphabet_round_tol: f64,
    /// Index range of translation points written to `lambda.csv`.
    pub lambda_window: usize,
    /// Optional companion integer-tiling instance, echoed for provenance;
    /// the `ztile` subcommands take the instance path directly.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ztile_instance: Option<String>,
    /// Where artifacts land unless `GAPTILE_OUTPUT_DIR` overrides it. The
    /// report echoes the configured value either way, so an override does
    /// not break byte-level report comparisons.
    pub output_dir: String,
    /// Seed echoed for downstream randomized suites; the solve itself is
    /// deterministic.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            schema_version: SCHEMA_VERSION,
            a: 0.1,
            eps: 0.01,
            contraction_c: 0.1,
            amplitude: 0.004,
            n_coeff: 512,
            grid_m: 8192,
            fp_tol: 1e-12,
            max_iter: 200,
            tiling_kernel: "fejer".to_string(),
            tiling_bandwidth: 0.08,
            tiling_radius: 1e4,
            gap_kernel: "jackson".to_string(),
            gap_bandwidth: 0.05,
            gap_radius: 1e3,
            x_span: 100.0,
            x_count: 4001,
            gap_grid_count: 2001,
            gap_tolerance: 1e-6,
            tiling_tolerance: 1e-3,
            gap_test_tolerance: 1e-5,
            alphabet_round_tol: 1e-9,
            lambda_window: 2048,
            ztile_instance: None,
            output_dir: "out".to_string(),
            seed: 7,
        }
    }
}

impl RunConfig {
    /// Solver parameter block corresponding to this config.
    pub fn solver_params(&self) -> SolverParams {
        SolverParams {
            a: self.a,
            eps: self.eps,
            c: self.contraction_c,
            n_coeff: self.n_coeff,
            grid_m: self.grid_m,
            fp_tol: self.fp_tol,
            max_iter: self.max_iter,
        }
    }

    /// Re-checks every precondition the pipeline relies on. Error messages
    /// name the violated constraint.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |c: &str| Err(ConfigError::Invariant(c.to_string()));
        if self.schema_version != SCHEMA_VERSION {
            return Err(ConfigError::Schema(format!(
                "schema_version {} unsupported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        self.solver_params()
            .validate()
            .map_err(|e| ConfigError::Invariant(e.to_string()))?;
        if !(self.amplitude > 0.0) {
            return fail("amplitude > 0");
        }
        if self.amplitude >= self.eps / 2.0 {
            return fail("amplitude < eps/2");
        }
        // Room for the doubled-resolution gap check run by `solve`.
        if 4 * self.n_coeff >= self.grid_m {
            return fail("4*n_coeff < grid_m (doubled-resolution gap check)");
        }
        for (role, name, bandwidth, radius) in [
            (
                "tiling",
                &self.tiling_kernel,
                self.tiling_bandwidth,
                self.tiling_radius,
            ),
            ("gap", &self.gap_kernel, self.gap_bandwidth, self.gap_radius),
        ] {
            let kernel = kernel_by_name(name, bandwidth)
                .map_err(|e| ConfigError::Invariant(format!("{role} kernel: {e}")))?;
            if !(bandwidth < self.a) {
                return Err(ConfigError::Invariant(format!(
                    "{role}_bandwidth < a (kernel support must sit inside the gap)"
                )));
            }
            if !(radius >= 2.0 && radius > kernel.min_tail_radius()) {
                return Err(ConfigError::Invariant(format!(
                    "{role}_radius >= 2 and > {:.3} (tail-bound domain of `{name}`)",
                    kernel.min_tail_radius()
                )));
            }
        }
        if self.tiling_kernel == self.gap_kernel {
            return fail("tiling_kernel != gap_kernel (cross check needs an independent family)");
        }
        if !(self.x_span > 0.0) {
            return fail("x_span > 0");
        }
        if self.x_count < 2 {
            return fail("x_count >= 2");
        }
        if self.gap_grid_count < 2 {
            return fail("gap_grid_count >= 2");
        }
        if !(self.gap_tolerance > 0.0) {
            return fail("gap_tolerance > 0");
        }
        if !(self.tiling_tolerance > 0.0) {
            return fail("tiling_tolerance > 0");
        }
        if !(self.gap_test_tolerance > 0.0) {
            return fail("gap_test_tolerance > 0");
        }
        if !(self.alphabet_round_tol > 0.0) {
            return fail("alphabet_round_tol > 0");
        }
        if self.lambda_window < self.n_coeff {
            return fail("lambda_window >= n_coeff");
        }
        Ok(())
    }
}

/// Parses a config document; schema problems (bad JSON, unknown keys,
/// missing or wrong schema version) are reported as [`ConfigError::Schema`].
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let raw: RawConfig =
        serde_json::from_str(text).map_err(|e| ConfigError::Schema(e.to_string()))?;
    let defaults = RunConfig::default();
    let version = raw
        .schema_version
        .ok_or_else(|| ConfigError::Schema("missing required key schema_version".to_string()))?;
    let config = RunConfig {
        schema_version: version,
        a: raw.a.unwrap_or(defaults.a),
        eps: raw.eps.unwrap_or(defaults.eps),
        contraction_c: raw.contraction_c.unwrap_or(defaults.contraction_c),
        amplitude: raw.amplitude.unwrap_or(defaults.amplitude),
        n_coeff: raw.n_coeff.unwrap_or(defaults.n_coeff),
        grid_m: raw.grid_m.unwrap_or(defaults.grid_m),
        fp_tol: raw.fp_tol.unwrap_or(defaults.fp_tol),
        max_iter: raw.max_iter.unwrap_or(defaults.max_iter),
        tiling_kernel: raw.tiling_kernel.unwrap_or(defaults.tiling_kernel),
        tiling_bandwidth: raw.tiling_bandwidth.unwrap_or(defaults.tiling_bandwidth),
        tiling_radius: raw.tiling_radius.unwrap_or(defaults.tiling_radius),
        gap_kernel: raw.gap_kernel.unwrap_or(defaults.gap_kernel),
        gap_bandwidth: raw.gap_bandwidth.unwrap_or(defaults.gap_bandwidth),
        gap_radius: raw.gap_radius.unwrap_or(defaults.gap_radius),
        x_span: raw.x_span.unwrap_or(defaults.x_span),
        x_count: raw.x_count.unwrap_or(defaults.x_count),
        gap_grid_count: raw.gap_grid_count.unwrap_or(defaults.gap_grid_count),
        gap_tolerance: raw.gap_tolerance.unwrap_or(defaults.gap_tolerance),
        tiling_tolerance: raw.tiling_tolerance.unwrap_or(defaults.tiling_tolerance),
        gap_test_tolerance: raw.gap_test_tolerance.unwrap_or(defaults.gap_test_tolerance),
        alphabet_round_tol: raw.alphabet_round_tol.unwrap_or(defaults.alphabet_round_tol),
        lambda_window: raw.lambda_window.unwrap_or(defaults.lambda_window),
        ztile_instance: raw.ztile_instance,
        output_dir: raw.output_dir.unwrap_or(defaults.output_dir),
        seed: raw.seed.unwrap_or(defaults.seed),
    };
    Ok(config)
}

/// Effective artifact directory: the `GAPTILE_OUTPUT_DIR` environment
/// variable wins over the configured value.
pub fn effective_output_dir(config: &RunConfig) -> std::path::PathBuf {
    match std::env::var_os("GAPTILE_OUTPUT_DIR") {
        Some(dir) if !dir.is_empty() => std::path::PathBuf::from(dir),
        _ => Path::new(&config.output_dir).to_path_buf(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn minimal_document_resolves_to_defaults() {
        let config = parse_config("{\"schema_version\": 1}").unwrap();
        assert_eq!(config, RunConfig::default());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = parse_config("{\"schema_version\": 1, \"epz\": 0.01}").unwrap_err();
        assert!(matches!(err, ConfigError::Schema(_)), "{err}");
        assert!(err.to_string().contains("epz"), "{err}");
    }

    #[test]
    fn missing_schema_version_is_rejected() {
        let err = parse_config("{\"a\": 0.1}").unwrap_err();
        assert!(err.to_string().contains("schema_version"), "{err}");
    }

    #[test]
    fn wrong_schema_version_is_rejected() {
        let config = parse_config("{\"schema_version\": 2}").unwrap();
        assert!(matches!(config.validate(), Err(ConfigError::Schema(_))));
    }

    #[test]
    fn eps_constraint_message_names_the_constraint() {
        let config = parse_config("{\"schema_version\": 1, \"eps\": 0.2}").unwrap();
        let err = config.validate().unwrap_err();
        assert!(err.to_string().contains("2*pi*eps < 1"), "{err}");
    }

    #[test]
    fn same_kernel_family_twice_is_rejected() {
        let config =
            parse_config("{\"schema_version\": 1, \"gap_kernel\": \"fejer\"}").unwrap();
        let err = config.validate().unwrap_err();
        assert!(err.to_string().contains("independent family"), "{err}");
    }

    #[test]
    fn wide_kernel_is_rejected() {
        let config =
            parse_config("{\"schema_version\": 1, \"tiling_bandwidth\": 0.11}").unwrap();
        let err = config.validate().unwrap_err();
        assert!(err.to_string().contains("inside the gap"), "{err}");
    }

    #[test]
    fn config_round_trips_through_json() {
        let config = RunConfig::default();
        let text = serde_json::to_string(&config).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(config, back);
    }
}
