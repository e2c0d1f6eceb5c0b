//! Command implementations and the process exit-code contract.
//!
//! | code | meaning                                             |
//! |------|-----------------------------------------------------|
//! | 0    | success, all gates passed                           |
//! | 1    | a certificate or residual threshold failed          |
//! | 2    | config invariant violated                           |
//! | 3    | iteration failed to converge (or numerics stalled)  |
//! | 4    | parse failure, missing artifacts, or I/O error      |
//! | 5    | search space exceeds the hard cap                   |

use crate::config::{effective_output_dir, parse_config, ConfigError};
use crate::csvio;
use crate::report::{
    AlphaSection, ArtifactsSection, FlcSection, GapSection, RunReport, SolveSection,
    TilingSection, TimestampSection, VerifySection, FORMAT_VERSION,
};
use clap::ValueEnum;
use gaptile::circle::CoeffSeq;
use gaptile::kernels::kernel_by_name;
use gaptile::solver::{
    alpha_decay_ok, alpha_sequence, gap_residual, make_target, solve_fixed_point, SolverError,
};
use gaptile::tiling::{
    delta_gap_test, gap_alphabet, nonperiodicity_certificate, tiling_residual, tiling_sum,
    TilingError, TranslationSet,
};
use gaptile::ztile::{
    complement_search, minimal_period, parse_instance, smoothed_spectrum, z_tiling_check,
    SearchCaps, ZSet, ZtileError,
};
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Index-set windows over which the gap alphabet is counted.
pub const FLC_WINDOWS: [usize; 3] = [64, 128, 256];

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("verification failed: {0}")]
    Gate(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("no convergence: {0}")]
    Convergence(String),
    #[error("artifact problem: {0}")]
    Artifact(String),
    #[error("search space too large: {0}")]
    TooLarge(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Gate(_) => 1,
            CliError::Config(_) => 2,
            CliError::Convergence(_) => 3,
            CliError::Artifact(_) => 4,
            CliError::TooLarge(_) => 5,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Schema(msg) => CliError::Artifact(msg),
            ConfigError::Invariant(msg) => CliError::Config(msg),
        }
    }
}

impl From<ZtileError> for CliError {
    fn from(e: ZtileError) -> Self {
        match e {
            ZtileError::SearchSpaceTooLarge { .. } => CliError::TooLarge(e.to_string()),
            _ => CliError::Artifact(e.to_string()),
        }
    }
}

/// Solver failures sorted into the exit-code buckets: bad inputs are config
/// errors, a stalled or escaping iteration is a convergence error, and a
/// result that exists but violates its own guarantees fails the gate.
fn solver_error(e: SolverError) -> CliError {
    match e {
        SolverError::ParamsInvalid { .. }
        | SolverError::AmplitudeNotPositive { .. }
        | SolverError::AmplitudeTooLarge { .. } => CliError::Config(e.to_string()),
        SolverError::NoConvergence { .. }
        | SolverError::BallEscape { .. }
        | SolverError::SeriesStalled { .. }
        | SolverError::Circle(_) => CliError::Convergence(e.to_string()),
        SolverError::AllZeroAlpha | SolverError::AlphaOutOfRange { .. } => {
            CliError::Gate(e.to_string())
        }
    }
}

fn tiling_error(e: TilingError) -> CliError {
    CliError::Gate(e.to_string())
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Artifact(format!("{}: {e}", path.display())))
}

fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

/// Largest `|alpha(-n) - alpha(n)|` over the positive indices.
fn mirror_asymmetry(alpha: &CoeffSeq) -> f64 {
    (1..=alpha.n_max() as i64)
        .map(|n| (alpha.get(-n) - alpha.get(n)).abs())
        .fold(0.0, f64::max)
}

fn strictly_increasing(sizes: &[usize]) -> bool {
    sizes.windows(2).all(|w| w[0] < w[1])
}

/// Runs the full pipeline from a config file and writes `alpha.csv`,
/// `lambda.csv`, and `report.json` into the output directory.
pub fn cmd_solve(config_path: &Path) -> Result<(), CliError> {
    let config = parse_config(&read_file(config_path)?)?;
    config.validate()?;
    let params = config.solver_params();
    let mut timings: BTreeMap<String, u64> = BTreeMap::new();
    let total_start = Instant::now();

    // Fixed point and perturbation sequence.
    let start = Instant::now();
    let g = make_target(&params, config.amplitude).map_err(solver_error)?;
    let sol = solve_fixed_point(&g, &params).map_err(solver_error)?;
    let alpha = alpha_sequence(&sol, params.eps).map_err(solver_error)?;
    timings.insert("solve".to_string(), elapsed_ms(start));

    // Gap scan at the configured resolution and at double resolution.
    let start = Instant::now();
    let gap_res = gap_residual(&alpha, params.a, config.gap_grid_count);
    let mut doubled = params.clone();
    doubled.n_coeff *= 2;
    let g2 = make_target(&doubled, config.amplitude).map_err(solver_error)?;
    let sol2 = solve_fixed_point(&g2, &doubled).map_err(solver_error)?;
    let alpha2 = alpha_sequence(&sol2, doubled.eps).map_err(solver_error)?;
    let gap_res2 = gap_residual(&alpha2, doubled.a, config.gap_grid_count);
    timings.insert("gap".to_string(), elapsed_ms(start));

    // Kernel sums over the perturbed integers.
    let set = TranslationSet::new(alpha.clone(), config.lambda_window).map_err(tiling_error)?;
    let start = Instant::now();
    let tiling_kernel =
        kernel_by_name(&config.tiling_kernel, config.tiling_bandwidth).map_err(|e| {
            CliError::Config(e.to_string())
        })?;
    let tiling_report = tiling_residual(
        tiling_kernel.as_ref(),
        &set,
        config.x_count,
        config.x_span,
        config.tiling_radius,
    );
    timings.insert("tiling".to_string(), elapsed_ms(start));

    let start = Instant::now();
    let gap_kernel = kernel_by_name(&config.gap_kernel, config.gap_bandwidth)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let delta_report = delta_gap_test(
        gap_kernel.as_ref(),
        &set,
        params.a,
        config.x_count,
        config.x_span,
        config.gap_radius,
    )
    .map_err(|e| CliError::Config(e.to_string()))?;
    timings.insert("delta_gap".to_string(), elapsed_ms(start));

    // Structure certificates.
    let start = Instant::now();
    let certificate = nonperiodicity_certificate(&set);
    let alphabet_sizes: Vec<usize> = FLC_WINDOWS
        .iter()
        .map(|&w| gap_alphabet(&set, w, config.alphabet_round_tol).len())
        .collect();
    timings.insert("flc".to_string(), elapsed_ms(start));

    let (argmax, max_abs) = alpha.max_abs();
    let nonzero_count = alpha.values().iter().filter(|v| **v != 0.0).count();
    let report = RunReport {
        format_version: FORMAT_VERSION.to_string(),
        config: config.clone(),
        solve: SolveSection {
            iterations: sol.iterations,
            threshold: params.fp_tol * (1.0 - params.ball_rho()),
            residual: sol.residual,
            truncation_tail: sol.truncation_tail,
            distance_trace: sol.distance_trace.clone(),
            ratio_trace: sol.ratio_trace.clone(),
        },
        alpha: AlphaSection {
            n_coeff: params.n_coeff,
            max_abs,
            argmax,
            l2_mass: alpha.l2_mass(),
            sup_f: sol.f.sup_norm(),
            mirror_asymmetry: mirror_asymmetry(&alpha),
            nonzero_count,
            decay_ok: alpha_decay_ok(&alpha),
        },
        gap: GapSection {
            scan_reach: (1.0 - gaptile::solver::GAP_MARGIN_REL) * params.a,
            grid_points: config.gap_grid_count,
            residual: gap_res,
            doubled_n_coeff: doubled.n_coeff,
            doubled_residual: gap_res2,
            strictly_decreasing: gap_res2 < gap_res,
            tolerance: config.gap_tolerance,
            pass: gap_res <= config.gap_tolerance && gap_res2 < gap_res,
        },
        tiling: TilingSection {
            pass: tiling_report.sup_residual <= config.tiling_tolerance,
            tolerance: config.tiling_tolerance,
            report: tiling_report,
        },
        delta_gap: TilingSection {
            pass: delta_report.sup_residual <= config.gap_test_tolerance,
            tolerance: config.gap_test_tolerance,
            report: delta_report,
        },
        certificate,
        flc: FlcSection {
            windows: FLC_WINDOWS.to_vec(),
            strictly_increasing: strictly_increasing(&alphabet_sizes),
            alphabet_sizes,
        },
        artifacts: ArtifactsSection {
            alpha_csv: "alpha.csv".to_string(),
            lambda_csv: "lambda.csv".to_string(),
            report_json: "report.json".to_string(),
        },
        verify: None,
        timestamp: TimestampSection::now({
            let mut t = timings;
            t.insert("total".to_string(), elapsed_ms(total_start));
            t
        }),
    };

    let out_dir = effective_output_dir(&config);
    fs::create_dir_all(&out_dir)
        .map_err(|e| CliError::Artifact(format!("{}: {e}", out_dir.display())))?;
    let write = |name: &str, bytes: &[u8]| -> Result<PathBuf, CliError> {
        let path = out_dir.join(name);
        csvio::write_atomic(&path, bytes)
            .map_err(|e| CliError::Artifact(format!("{}: {e}", path.display())))?;
        Ok(path)
    };
    write("alpha.csv", csvio::alpha_csv(&alpha).as_bytes())?;
    write("lambda.csv", csvio::lambda_csv(&set, config.lambda_window).as_bytes())?;
    let report_path = write("report.json", report.to_json().as_bytes())?;

    println!(
        "solve: {} iterations, residual {:e}",
        report.solve.iterations, report.solve.residual
    );
    println!(
        "alpha: max |alpha| = {:e} at n = {}, l2 mass {:e}",
        report.alpha.max_abs, report.alpha.argmax, report.alpha.l2_mass
    );
    println!(
        "gap: residual {:e} -> {:e} at doubled resolution (tolerance {:e}): {}",
        report.gap.residual,
        report.gap.doubled_residual,
        report.gap.tolerance,
        verdict(report.gap.pass)
    );
    println!(
        "tiling[{}]: sup residual {:e} (tolerance {:e}): {}",
        report.tiling.report.kernel,
        report.tiling.report.sup_residual,
        report.tiling.tolerance,
        verdict(report.tiling.pass)
    );
    println!(
        "delta_gap[{}]: sup residual {:e} (tolerance {:e}): {}",
        report.delta_gap.report.kernel,
        report.delta_gap.report.sup_residual,
        report.delta_gap.tolerance,
        verdict(report.delta_gap.pass)
    );
    println!(
        "certificate: {} — {}",
        verdict(report.certificate.pass),
        report.certificate.statement
    );
    println!(
        "flc: alphabet sizes {:?} over windows {:?}: {}",
        report.flc.alphabet_sizes,
        report.flc.windows,
        verdict(report.flc.strictly_increasing)
    );
    println!("artifacts: {}", report_path.display());

    if report.all_pass() {
        Ok(())
    } else {
        Err(CliError::Gate(format!(
            "gates failed: {}",
            report.failed_gates().join(", ")
        )))
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyKind {
    Gap,
    Tiling,
    Certificate,
    Flc,
}

/// Loaded artifacts shared by the verify paths.
struct Artifacts {
    report: RunReport,
    alpha: CoeffSeq,
    report_path: PathBuf,
}

fn load_artifacts(dir: &Path) -> Result<Artifacts, CliError> {
    let report_path = dir.join("report.json");
    let report: RunReport = serde_json::from_str(&read_file(&report_path)?)
        .map_err(|e| CliError::Artifact(format!("{}: {e}", report_path.display())))?;
    let alpha_path = dir.join(&report.artifacts.alpha_csv);
    let alpha = csvio::parse_alpha_csv(&read_file(&alpha_path)?)
        .map_err(|e| CliError::Artifact(format!("{}: {e}", alpha_path.display())))?;
    report
        .config
        .validate()
        .map_err(|e| CliError::Artifact(format!("report config: {e}")))?;
    Ok(Artifacts {
        report,
        alpha,
        report_path,
    })
}

/// Recomputes one certificate from persisted artifacts, appends the result
/// to the report, and fails the gate if the certificate does.
pub fn cmd_verify(which: VerifyKind, artifacts_dir: &Path) -> Result<(), CliError> {
    let Artifacts {
        mut report,
        alpha,
        report_path,
    } = load_artifacts(artifacts_dir)?;
    let config = report.config.clone();

    let section = match which {
        VerifyKind::Gap => {
            let recomputed = gap_residual(&alpha, config.a, config.gap_grid_count);
            let reported = report.gap.residual;
            let pass = recomputed <= config.gap_tolerance;
            println!(
                "gap residual {recomputed:e} (reported {reported:e}, tolerance {:e}): {}",
                config.gap_tolerance,
                verdict(pass)
            );
            VerifySection {
                which: "gap".to_string(),
                pass,
                recomputed_residual: Some(recomputed),
                reported_residual: Some(reported),
                difference: Some(recomputed - reported),
                tolerance: Some(config.gap_tolerance),
                alphabet_sizes: None,
                statement: format!(
                    "transform magnitude over |t| <= {:e} recomputed from alpha.csv",
                    report.gap.scan_reach
                ),
            }
        }
        VerifyKind::Tiling => {
            let set =
                TranslationSet::new(alpha, config.lambda_window).map_err(tiling_error)?;
            let kernel = kernel_by_name(&config.tiling_kernel, config.tiling_bandwidth)
                .map_err(|e| CliError::Artifact(format!("report config: {e}")))?;
            let rerun = tiling_residual(
                kernel.as_ref(),
                &set,
                config.x_count,
                config.x_span,
                config.tiling_radius,
            );
            let recomputed = rerun.sup_residual;
            let reported = report.tiling.report.sup_residual;
            let pass = recomputed <= config.tiling_tolerance;
            println!(
                "tiling residual {recomputed:e} (reported {reported:e}, tolerance {:e}): {}",
                config.tiling_tolerance,
                verdict(pass)
            );
            VerifySection {
                which: "tiling".to_string(),
                pass,
                recomputed_residual: Some(recomputed),
                reported_residual: Some(reported),
                difference: Some(recomputed - reported),
                tolerance: Some(config.tiling_tolerance),
                alphabet_sizes: None,
                statement: format!(
                    "sup |sum K(x - lambda) - {}| over [{}, {}] recomputed from alpha.csv",
                    rerun.level, -config.x_span, config.x_span
                ),
            }
        }
        VerifyKind::Certificate => {
            let set =
                TranslationSet::new(alpha, config.lambda_window).map_err(tiling_error)?;
            let cert = nonperiodicity_certificate(&set);
            println!("certificate: {} — {}", verdict(cert.pass), cert.statement);
            VerifySection {
                which: "certificate".to_string(),
                pass: cert.pass,
                recomputed_residual: Some(cert.max_abs_alpha),
                reported_residual: Some(report.certificate.max_abs_alpha),
                difference: Some(cert.max_abs_alpha - report.certificate.max_abs_alpha),
                tolerance: None,
                alphabet_sizes: None,
                statement: cert.statement,
            }
        }
        VerifyKind::Flc => {
            let set =
                TranslationSet::new(alpha, config.lambda_window).map_err(tiling_error)?;
            let sizes: Vec<usize> = FLC_WINDOWS
                .iter()
                .map(|&w| gap_alphabet(&set, w, config.alphabet_round_tol).len())
                .collect();
            for (w, s) in FLC_WINDOWS.iter().zip(&sizes) {
                println!("window {w}: {s} distinct gaps");
            }
            let pass = strictly_increasing(&sizes);
            println!("alphabet growth: {}", verdict(pass));
            VerifySection {
                which: "flc".to_string(),
                pass,
                recomputed_residual: None,
                reported_residual: None,
                difference: None,
                tolerance: None,
                alphabet_sizes: Some(sizes),
                statement: format!(
                    "distinct successive gaps over windows {FLC_WINDOWS:?} from alpha.csv"
                ),
            }
        }
    };

    let pass = section.pass;
    report.verify = Some(section);
    csvio::write_atomic(&report_path, report.to_json().as_bytes())
        .map_err(|e| CliError::Artifact(format!("{}: {e}", report_path.display())))?;
    if pass {
        Ok(())
    } else {
        Err(CliError::Gate(format!(
            "{:?} verification failed",
            which
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ZtileAction {
    Check,
    Search,
    Period,
}

fn parse_residue_list(text: &str, modulus: usize) -> Result<ZSet, CliError> {
    let mut residues = Vec::new();
    for tok in text.split(',') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        let r: usize = tok
            .parse()
            .map_err(|e| CliError::Artifact(format!("residue `{tok}`: {e}")))?;
        residues.push(r);
    }
    Ok(ZSet::new(modulus, residues)?)
}

fn format_residues(residues: &std::collections::BTreeSet<usize>) -> String {
    residues
        .iter()
        .map(|r| r.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Integer-tiling utilities: membership check, complement search, and
/// minimal periods, all driven by a two-line instance file.
pub fn cmd_ztile(
    action: ZtileAction,
    instance_path: &Path,
    set: Option<&str>,
) -> Result<(), CliError> {
    let instance = parse_instance(&read_file(instance_path)?)?;
    let cyclic = instance.cyclic();
    match action {
        ZtileAction::Check => {
            let set_text = set.expect("clap enforces --set for check");
            let zset = parse_residue_list(set_text, instance.modulus)?;
            let ok = z_tiling_check(
                &instance.tile,
                &zset,
                instance.level,
                2 * instance.modulus,
            );
            println!("{ok}");
            if ok {
                Ok(())
            } else {
                Err(CliError::Gate(format!(
                    "{{{}}} does not tile at level {}",
                    format_residues(zset.residues()),
                    instance.level
                )))
            }
        }
        ZtileAction::Search => {
            let results = complement_search(&cyclic, &SearchCaps::default())?;
            for residues in &results {
                println!("{}", format_residues(residues));
            }
            Ok(())
        }
        ZtileAction::Period => {
            if let Some(set_text) = set {
                let zset = parse_residue_list(set_text, instance.modulus)?;
                println!("{}", minimal_period(&zset.indicator()));
            } else {
                for residues in complement_search(&cyclic, &SearchCaps::default())? {
                    let zset = ZSet::new(instance.modulus, residues.iter().copied())?;
                    println!(
                        "{}: {}",
                        format_residues(&residues),
                        minimal_period(&zset.indicator())
                    );
                }
            }
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportWhat {
    ResidualCurve,
    Spectrum,
    Alpha,
}

/// Extra knobs used only by `export spectrum`.
pub struct SpectrumArgs {
    pub modulus: Option<usize>,
    pub residues: Option<String>,
    pub taper: usize,
    pub nfreq: usize,
}

/// Emits plot-ready CSV derived from a run report. Output lands next to the
/// report unless `GAPTILE_OUTPUT_DIR` redirects it.
pub fn cmd_export(
    what: ExportWhat,
    report_path: &Path,
    spectrum: &SpectrumArgs,
) -> Result<(), CliError> {
    let report: RunReport = serde_json::from_str(&read_file(report_path)?)
        .map_err(|e| CliError::Artifact(format!("{}: {e}", report_path.display())))?;
    let report_dir = report_path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or_else(|| Path::new("."))
        .to_path_buf();
    let out_dir = match std::env::var_os("GAPTILE_OUTPUT_DIR") {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir),
        _ => report_dir.clone(),
    };
    fs::create_dir_all(&out_dir)
        .map_err(|e| CliError::Artifact(format!("{}: {e}", out_dir.display())))?;

    let (name, content) = match what {
        ExportWhat::Alpha => {
            // Idempotent re-emission: identical bytes to the solve-time CSV.
            let source = report_dir.join(&report.artifacts.alpha_csv);
            (report.artifacts.alpha_csv.clone(), read_file(&source)?)
        }
        ExportWhat::ResidualCurve => {
            let config = &report.config;
            config
                .validate()
                .map_err(|e| CliError::Artifact(format!("report config: {e}")))?;
            let alpha_path = report_dir.join(&report.artifacts.alpha_csv);
            let alpha = csvio::parse_alpha_csv(&read_file(&alpha_path)?)
                .map_err(|e| CliError::Artifact(format!("{}: {e}", alpha_path.display())))?;
            let set = TranslationSet::new(alpha, config.lambda_window)
                .map_err(|e| CliError::Artifact(e.to_string()))?;
            let kernel = kernel_by_name(&config.tiling_kernel, config.tiling_bandwidth)
                .map_err(|e| CliError::Artifact(format!("report config: {e}")))?;
            let level = kernel.transform(0.0).re;
            let step = 2.0 * config.x_span / (config.x_count - 1) as f64;
            let rows: Vec<(f64, f64)> = (0..config.x_count)
                .map(|j| {
                    let x = -config.x_span + j as f64 * step;
                    let (sum, _) = tiling_sum(kernel.as_ref(), &set, x, config.tiling_radius);
                    (x, sum - level)
                })
                .collect();
            (
                "residual_curve.csv".to_string(),
                csvio::two_column_csv("x,residual", &rows),
            )
        }
        ExportWhat::Spectrum => {
            let modulus = spectrum
                .modulus
                .expect("clap enforces --modulus for spectrum");
            let residues = spectrum
                .residues
                .as_deref()
                .expect("clap enforces --residues for spectrum");
            if spectrum.taper == 0 || spectrum.nfreq == 0 {
                return Err(CliError::Artifact(
                    "taper and nfreq must be positive".to_string(),
                ));
            }
            let zset = parse_residue_list(residues, modulus)?;
            let rows = smoothed_spectrum(|n| zset.contains(n), spectrum.taper, spectrum.nfreq);
            (
                "spectrum.csv".to_string(),
                csvio::two_column_csv("t,magnitude", &rows),
            )
        }
    };

    let out_path = out_dir.join(&name);
    csvio::write_atomic(&out_path, content.as_bytes())
        .map_err(|e| CliError::Artifact(format!("{}: {e}", out_path.display())))?;
    println!("{}", out_path.display());
    Ok(())
}
