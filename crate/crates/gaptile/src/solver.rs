//! Fixed-point solver for the equation `f + Rf = g`, where `R` is the
//! nonlinear correction operator
//!
//! ```text
//! (Rf)(t) = sum_n e^{2 pi i n t} * (e^{2 pi i c(n) t} - 1 - 2 pi i c(n) t) / (2 pi i t),
//! ```
//!
//! with `c(n)` the Fourier coefficients of `f` and the value `0` at the
//! removable singularity `t = 0`. A solution `f` close to a target `g` that
//! vanishes on `(-a, a)` yields a perturbation sequence `alpha(n) = c(n)`
//! whose exponential-sum transform also vanishes on the gap; this is the
//! source of the perturbed-integer translation sets built in
//! [`crate::tiling`].
//!
//! Picard iteration `f_{k+1} = g - R f_k` starting from `f_0 = g` converges
//! geometrically while the iterates stay in the ball `||f - g|| <= eps`,
//! where the correction is Lipschitz with constant at most `4 pi eps`.

use crate::circle::{analyze_with_tail, synthesize, CircleError, CircleFunction, CoeffSeq};
use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

/// Relative safety margin kept away from the gap endpoints when measuring
/// the residual: the scan covers `|t| <= (1 - margin) * a`.
pub const GAP_MARGIN_REL: f64 = 0.05;

/// Absolute bound below which a correction-series term (and everything after
/// it) is discarded.
const SERIES_TOL: f64 = 1e-20;

/// Hard cap on correction-series terms. The factorial makes the term bound
/// collapse long before this for any perturbation of size below 1, and the
/// solver only ever feeds the operator functions with coefficients well
/// inside that range.
const SERIES_KMAX: usize = 64;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("parameter constraint violated: {constraint}")]
    ParamsInvalid { constraint: &'static str },
    #[error("target amplitude must be positive, got {amplitude}")]
    AmplitudeNotPositive { amplitude: f64 },
    #[error("target amplitude {amplitude} too large: need amplitude < eps/2 = {limit}")]
    AmplitudeTooLarge { amplitude: f64, limit: f64 },
    #[error(
        "no convergence after {iterations} iterations: last step {last_step:.3e} \
         above stop threshold {threshold:.3e}"
    )]
    NoConvergence {
        iterations: usize,
        last_step: f64,
        threshold: f64,
    },
    #[error(
        "iterate escaped the contraction ball: distance {drift:.3e} from the target \
         exceeds eps = {eps:.3e}"
    )]
    BallEscape { drift: f64, eps: f64 },
    #[error(
        "correction series still above tolerance after {kmax} terms \
         (remaining term bound {bound:.3e}); coefficients are far outside the \
         contraction regime"
    )]
    SeriesStalled { kmax: usize, bound: f64 },
    #[error("perturbation sequence is identically zero")]
    AllZeroAlpha,
    #[error("perturbation out of range: max |alpha| = {max_abs:.3e} exceeds {limit:.3e}")]
    AlphaOutOfRange { max_abs: f64, limit: f64 },
    #[error(transparent)]
    Circle(#[from] CircleError),
}

/// Parameters of one fixed-point run.
///
/// `a` is the half-width of the gap on which the target vanishes, `eps` the
/// radius of the contraction ball, and `c` the coefficient-mass budget that
/// fixes the design contraction factor `2 pi c`. The chain
/// `2 eps < c` and `2 pi c < 1` keeps the iteration inside the regime where
/// the correction is a contraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverParams {
    /// Gap half-width, `0 < a < 1/2`.
    pub a: f64,
    /// Contraction-ball radius, `2 pi eps < 1`.
    pub eps: f64,
    /// Coefficient-mass budget, `2 eps < c` and `2 pi c < 1`.
    pub c: f64,
    /// Coefficient cutoff: the correction keeps `|n| <= n_coeff`.
    pub n_coeff: usize,
    /// Sample count of the working grid (even, `> 2 * n_coeff`).
    pub grid_m: usize,
    /// Fixed-point tolerance: iteration stops once the distance to the fixed
    /// point is certified below this.
    pub fp_tol: f64,
    /// Iteration cap before reporting failure.
    pub max_iter: usize,
}

impl SolverParams {
    pub fn validate(&self) -> Result<(), SolverError> {
        let fail = |constraint| Err(SolverError::ParamsInvalid { constraint });
        if !(self.a > 0.0 && self.a < 0.5) {
            return fail("0 < a < 1/2");
        }
        if !(self.eps > 0.0) {
            return fail("eps > 0");
        }
        if !(2.0 * PI * self.eps < 1.0) {
            return fail("2*pi*eps < 1");
        }
        if !(2.0 * self.eps < self.c) {
            return fail("2*eps < c");
        }
        if !(2.0 * PI * self.c < 1.0) {
            return fail("2*pi*c < 1");
        }
        if self.n_coeff == 0 {
            return fail("n_coeff >= 1");
        }
        if self.grid_m % 2 != 0 || self.grid_m < 4 {
            return fail("grid_m even and >= 4");
        }
        if 2 * self.n_coeff >= self.grid_m {
            return fail("2*n_coeff < grid_m");
        }
        if !(self.fp_tol > 0.0) {
            return fail("fp_tol > 0");
        }
        if self.max_iter == 0 {
            return fail("max_iter >= 1");
        }
        Ok(())
    }

    /// Design contraction factor `2 pi c` tied to the coefficient budget.
    pub fn contraction_rho(&self) -> f64 {
        2.0 * PI * self.c
    }

    /// Lipschitz bound `4 pi eps` for the correction on the ball
    /// `||f - g|| <= eps`; it drives the stopping rule.
    pub fn ball_rho(&self) -> f64 {
        4.0 * PI * self.eps
    }
}

/// Result of a converged fixed-point run.
#[derive(Debug, Clone)]
pub struct GapSolution {
    /// The fixed point (on the working grid).
    pub f: CircleFunction,
    /// Fourier coefficients `alpha(n) = f_hat(n)` for `|n| <= n_coeff`.
    pub alpha: CoeffSeq,
    /// Directly measured `sup |f + Rf - g|` over the grid.
    pub residual: f64,
    /// Picard steps taken.
    pub iterations: usize,
    /// Sup distances between successive iterates.
    pub distance_trace: Vec<f64>,
    /// Ratios of successive distances (empirical contraction factors).
    pub ratio_trace: Vec<f64>,
    /// Largest over all iterations of `(pi/2) * sum |c(n)|^2` over the
    /// measurable band `n_coeff < |n| <= min(2 n_coeff, M/2 - 1)`: a sup-norm
    /// bound on what the coefficient cutoff discarded from the correction.
    pub truncation_tail: f64,
}

/// `e^{i theta} - 1` without cancellation near `theta = 0`:
/// `-2 sin^2(theta/2) + i sin(theta)`.
pub fn phase_minus_one(theta: f64) -> Complex64 {
    let s = (0.5 * theta).sin();
    Complex64::new(-2.0 * s * s, theta.sin())
}

/// `e^{i theta} - 1 - i theta` without cancellation in the real part:
/// `-2 sin^2(theta/2) + i (sin(theta) - theta)`.
pub fn phase_minus_one_minus_itheta(theta: f64) -> Complex64 {
    let s = (0.5 * theta).sin();
    Complex64::new(-2.0 * s * s, theta.sin() - theta)
}

/// Builds the target `g`: zero on the gap `(-a, a)` and a squared-sine bump
/// `amplitude * sin^2(pi (|t| - a) / (1/2 - a))` on `a <= |t| <= 1/2`, so it
/// is continuous on the circle and exactly even on the grid.
///
/// The amplitude must stay below `eps / 2` to leave the full contraction
/// ball available to the iteration.
pub fn make_target(params: &SolverParams, amplitude: f64) -> Result<CircleFunction, SolverError> {
    params.validate()?;
    if !(amplitude > 0.0) {
        return Err(SolverError::AmplitudeNotPositive { amplitude });
    }
    let limit = params.eps / 2.0;
    if amplitude >= limit {
        return Err(SolverError::AmplitudeTooLarge { amplitude, limit });
    }
    let grid = crate::circle::CircleGrid::new(params.grid_m)
        .map_err(SolverError::from)?;
    let a = params.a;
    let width = 0.5 - a;
    Ok(CircleFunction::from_even_real(grid, move |abs_t| {
        if abs_t <= a {
            0.0
        } else {
            let s = (PI * (abs_t - a) / width).sin();
            amplitude * s * s
        }
    }))
}

/// Applies the correction operator with coefficient cutoff `n_cutoff`.
pub fn apply_correction(
    f: &CircleFunction,
    n_cutoff: usize,
) -> Result<CircleFunction, SolverError> {
    apply_correction_with_tail(f, n_cutoff).map(|(rf, _)| rf)
}

/// Applies the correction operator and also reports the sup-norm bound
/// `(pi/2) * sum |c(n)|^2` over the measurable band beyond the cutoff, which
/// bounds the contribution the cutoff discarded.
///
/// The computation expands each numerator into its power series and swaps
/// the sums:
///
/// ```text
/// (Rf)(t) = sum_{k >= 2} (2 pi i t)^{k-1} / k! * S_k(t),
/// S_k(t)  = sum_{|n| <= N} c(n)^k e^{2 pi i n t},
/// ```
///
/// so each term costs one synthesis FFT. The term bound
/// `pi^{k-1}/k! * sum_n |c(n)|^k` decides both when to stop and that the
/// discarded remainder is below [`SERIES_TOL`]: once a term bound drops
/// under the tolerance, successive bounds shrink at least geometrically for
/// the coefficient sizes reachable here. Every term carries the factor
/// `t^{k-1}` with `k >= 2`, so the value at `t = 0` is exactly zero.
pub fn apply_correction_with_tail(
    f: &CircleFunction,
    n_cutoff: usize,
) -> Result<(CircleFunction, f64), SolverError> {
    let (alpha, tail_mass) = analyze_with_tail(f, n_cutoff)?;
    let tail_bound = 0.5 * PI * tail_mass;

    let grid = f.grid();
    let m = grid.len();
    let two_pi_i_t: Vec<Complex64> = (0..m)
        .map(|j| Complex64::new(0.0, 2.0 * PI * grid.point(j)))
        .collect();

    let mut pow: Vec<f64> = alpha.values().to_vec();
    let mut tpow = two_pi_i_t.clone();
    let mut inv_fact = 1.0f64;
    let mut acc = vec![Complex64::new(0.0, 0.0); m];
    let mut last_bound = f64::INFINITY;
    let mut converged = false;

    for k in 2..=SERIES_KMAX {
        for (p, base) in pow.iter_mut().zip(alpha.values()) {
            *p *= base;
        }
        inv_fact /= k as f64;
        let power_sum: f64 = pow.iter().map(|p| p.abs()).sum();
        let bound = PI.powi(k as i32 - 1) * inv_fact * power_sum;
        last_bound = bound;
        if bound < SERIES_TOL {
            converged = true;
            break;
        }
        let s_k = synthesize(&CoeffSeq::new(n_cutoff, pow.clone()), grid)?;
        for (a_j, (&t_j, &s_j)) in acc.iter_mut().zip(tpow.iter().zip(s_k.samples())) {
            *a_j += t_j * inv_fact * s_j;
        }
        for (t_j, &base) in tpow.iter_mut().zip(&two_pi_i_t) {
            *t_j *= base;
        }
    }
    if !converged {
        return Err(SolverError::SeriesStalled {
            kmax: SERIES_KMAX,
            bound: last_bound,
        });
    }
    // Interval symmetrization: the correction is not periodic, so its value
    // at the endpoint -1/2 is genuinely complex (the implied value at +1/2
    // is the conjugate) and must not be forced real.
    Ok((CircleFunction::from_symmetrized_interval(grid, acc), tail_bound))
}

/// Runs the Picard iteration `f_{k+1} = g - R f_k` from `f_0 = g` until the
/// distance to the fixed point is certified below `fp_tol`.
///
/// The stopping rule uses the ball Lipschitz constant `rho = 4 pi eps`: once
/// a successive step has size `d <= fp_tol * (1 - rho)`, the fixed point is
/// within `d / (1 - rho) <= fp_tol`. Iterates must stay inside the ball
/// `||f - g|| <= eps`; leaving it voids the contraction bound and aborts the
/// run. The reported residual is a direct measurement of `sup |f + Rf - g|`
/// with one extra application of the correction.
pub fn solve_fixed_point(
    g: &CircleFunction,
    params: &SolverParams,
) -> Result<GapSolution, SolverError> {
    params.validate()?;
    if g.grid().len() != params.grid_m {
        return Err(SolverError::ParamsInvalid {
            constraint: "target grid matches grid_m",
        });
    }
    if g.sup_norm() > params.eps {
        return Err(SolverError::ParamsInvalid {
            constraint: "sup|g| <= eps",
        });
    }

    let rho = params.ball_rho();
    let threshold = params.fp_tol * (1.0 - rho);
    let mut f = g.clone();
    let mut distance_trace = Vec::new();
    let mut ratio_trace = Vec::new();
    let mut truncation_tail = 0.0f64;

    for iteration in 1..=params.max_iter {
        let (rf, tail) = apply_correction_with_tail(&f, params.n_coeff)?;
        truncation_tail = truncation_tail.max(tail);
        let f_next = g.sub(&rf);
        let dist = f_next.sup_distance(&f);
        if let Some(&prev) = distance_trace.last() {
            if prev > 0.0 {
                ratio_trace.push(dist / prev);
            }
        }
        distance_trace.push(dist);
        let drift = f_next.sup_distance(g);
        if drift > params.eps {
            return Err(SolverError::BallEscape {
                drift,
                eps: params.eps,
            });
        }
        f = f_next;
        if dist <= threshold {
            let (rf_final, tail_final) = apply_correction_with_tail(&f, params.n_coeff)?;
            truncation_tail = truncation_tail.max(tail_final);
            let residual = f
                .samples()
                .iter()
                .zip(rf_final.samples())
                .zip(g.samples())
                .map(|((f_j, r_j), g_j)| (f_j + r_j - g_j).norm())
                .fold(0.0, f64::max);
            let alpha = crate::circle::fourier_coeffs(&f, params.n_coeff)?;
            return Ok(GapSolution {
                f,
                alpha,
                residual,
                iterations: iteration,
                distance_trace,
                ratio_trace,
                truncation_tail,
            });
        }
    }
    Err(SolverError::NoConvergence {
        iterations: params.max_iter,
        last_step: *distance_trace.last().unwrap(),
        threshold,
    })
}

/// Extracts the perturbation sequence from a solution, rejecting the
/// degenerate all-zero case and any coefficient outside `[-eps, eps]`
/// (nothing a converged in-ball run can produce, but checked anyway).
pub fn alpha_sequence(sol: &GapSolution, eps: f64) -> Result<CoeffSeq, SolverError> {
    let (_, max_abs) = sol.alpha.max_abs();
    if max_abs == 0.0 {
        return Err(SolverError::AllZeroAlpha);
    }
    if max_abs > eps {
        return Err(SolverError::AlphaOutOfRange {
            max_abs,
            limit: eps,
        });
    }
    Ok(sol.alpha.clone())
}

/// Soft decay diagnostic: the largest coefficient in the outer half-band
/// `|n| > n_max/2` should not exceed the largest in the inner half-band.
pub fn alpha_decay_ok(alpha: &CoeffSeq) -> bool {
    let half = (alpha.n_max() / 2) as i64;
    let mut inner = 0.0f64;
    let mut outer = 0.0f64;
    for (n, v) in alpha.iter() {
        if n.abs() <= half {
            inner = inner.max(v.abs());
        } else {
            outer = outer.max(v.abs());
        }
    }
    outer <= inner
}

/// Partial exponential-sum transform of a perturbation sequence:
///
/// ```text
/// F(t) = sum_{|n| <= n_cutoff} e^{2 pi i n t} (e^{2 pi i alpha(n) t} - 1) / (2 pi i t),
/// ```
///
/// with the limit value `sum alpha(n)` at `t = 0`. Terms with
/// `alpha(n) = 0` vanish identically and are skipped.
pub fn perturbation_transform(alpha: &CoeffSeq, t: f64, n_cutoff: usize) -> Complex64 {
    let n_cut = n_cutoff.min(alpha.n_max()) as i64;
    if t == 0.0 {
        let sum: f64 = (-n_cut..=n_cut).map(|n| alpha.get(n)).sum();
        return Complex64::new(sum, 0.0);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for n in -n_cut..=n_cut {
        let a_n = alpha.get(n);
        if a_n == 0.0 {
            continue;
        }
        let phase = Complex64::from_polar(1.0, 2.0 * PI * n as f64 * t);
        acc += phase * phase_minus_one(2.0 * PI * a_n * t);
    }
    // 1 / (2 pi i t) = -i / (2 pi t)
    acc * Complex64::new(0.0, -1.0 / (2.0 * PI * t))
}

/// Sup of `|F(-t)|` over a uniform scan of the gap interior
/// `|t| <= (1 - GAP_MARGIN_REL) * a`, where `F` is
/// [`perturbation_transform`] at the sequence's full cutoff. A small value
/// certifies that the perturbation keeps the spectral gap open.
pub fn gap_residual(alpha: &CoeffSeq, a: f64, grid_pts: usize) -> f64 {
    assert!(grid_pts >= 2, "need at least two scan points");
    assert!(a > 0.0 && a < 0.5, "gap half-width out of range");
    let reach = (1.0 - GAP_MARGIN_REL) * a;
    let step = 2.0 * reach / (grid_pts - 1) as f64;
    let mut worst = 0.0f64;
    for j in 0..grid_pts {
        let t = -reach + j as f64 * step;
        worst = worst.max(perturbation_transform(alpha, -t, alpha.n_max()).norm());
    }
    worst
}
