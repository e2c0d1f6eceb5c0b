//! Functions on the interval `I = [-1/2, 1/2]` sampled on the uniform grid
//! `t_j = -1/2 + j/M`, and their Fourier coefficients.
//!
//! The working space consists of continuous functions with the reflection
//! symmetry `f(-t) = conj(f(t))`; equivalently, all Fourier coefficients
//! `c(n) = integral of f(t) e^{-2 pi i n t}` are real. The grid stores the
//! left endpoint `-1/2` but not `+1/2`; the symmetry makes the missing value
//! `f(1/2) = conj(f(-1/2))`, so nothing is lost, and the coefficient
//! quadrature treats index 0 as the endpoint average (the trapezoid rule on
//! the closed interval). Interval functions need not match at `-1/2` and
//! `+1/2`: periodic data (trigonometric polynomials) is real there, but the
//! fixed-point correction, for example, is not.
//!
//! The quadrature recovers the coefficients of trigonometric polynomials of
//! degree `< M/2` exactly, so [`fourier_coeffs`] and [`synthesize`] are
//! exact inverses for bandlimited data up to rounding.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

/// Tolerance for the reflection-symmetry residual of sampled functions and
/// for the imaginary residue of measured coefficients.
pub const SYM_TOL: f64 = 1e-10;

#[derive(Debug, Error, PartialEq)]
pub enum CircleError {
    #[error("grid size {m} invalid: need an even sample count of at least 4")]
    InvalidGrid { m: usize },
    #[error("sample count {got} does not match grid size {expected}")]
    SampleCountMismatch { expected: usize, got: usize },
    #[error("cutoff {n_max} violates the Nyquist limit of grid size {m} (need 2*n_max < m)")]
    NyquistViolation { n_max: usize, m: usize },
    #[error("reflection symmetry violated: residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    SymmetryViolation { residual: f64, tol: f64 },
}

/// Uniform grid `t_j = -1/2 + j/M` with `M` even, so that `t = 0` is the
/// sample at index `M/2` and `j <-> M-j` realizes `t <-> -t` for
/// `1 <= j <= M-1`. Index 0 is the left endpoint `-1/2`, whose reflection
/// `+1/2` is not a grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CircleGrid {
    m: usize,
}

impl CircleGrid {
    pub fn new(m: usize) -> Result<Self, CircleError> {
        if m < 4 || m % 2 != 0 {
            return Err(CircleError::InvalidGrid { m });
        }
        Ok(CircleGrid { m })
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, j: usize) -> f64 {
        -0.5 + j as f64 / self.m as f64
    }

    /// Index of the sample at `t = 0`.
    pub fn zero_index(&self) -> usize {
        self.m / 2
    }
}

/// A sampled interval function with the symmetry `f(-t) = conj(f(t))`.
///
/// The sample at index 0 (the endpoint `-1/2`) has its reflection partner
/// `f(1/2) = conj(f(-1/2))` implied rather than stored, so it may be any
/// complex value; all interior samples must pair up under conjugation, which
/// in particular makes the value at `t = 0` real.
#[derive(Debug, Clone)]
pub struct CircleFunction {
    grid: CircleGrid,
    samples: Vec<Complex64>,
}

impl CircleFunction {
    /// Wraps samples after checking the reflection symmetry
    /// `samples[M-j] = conj(samples[j])` for `1 <= j <= M/2` within
    /// [`SYM_TOL`].
    pub fn new(grid: CircleGrid, samples: Vec<Complex64>) -> Result<Self, CircleError> {
        let m = grid.len();
        if samples.len() != m {
            return Err(CircleError::SampleCountMismatch {
                expected: m,
                got: samples.len(),
            });
        }
        let mut residual = 0.0f64;
        for j in 1..=m / 2 {
            let k = m - j;
            residual = residual.max((samples[k] - samples[j].conj()).norm());
        }
        if residual > SYM_TOL {
            return Err(CircleError::SymmetryViolation {
                residual,
                tol: SYM_TOL,
            });
        }
        Ok(CircleFunction { grid, samples })
    }

    /// Builds a real even function from its values on `|t| <= 1/2`. Mirrored
    /// indices are evaluated once and shared, so the symmetry is exact.
    pub fn from_even_real(grid: CircleGrid, value_at_abs_t: impl Fn(f64) -> f64) -> Self {
        let m = grid.len();
        let samples = (0..m)
            .map(|j| {
                let abs_t = -grid.point(j.min(m - j));
                Complex64::new(value_at_abs_t(abs_t), 0.0)
            })
            .collect();
        CircleFunction { grid, samples }
    }

    /// Wraps periodic samples (a trigonometric polynomial with real
    /// coefficients) and enforces the reflection symmetry exactly by
    /// averaging conjugate pairs. Such data is additionally real at the
    /// endpoint, where the polynomial takes the value `sum c(n) (-1)^n`.
    pub(crate) fn from_symmetrized(grid: CircleGrid, mut samples: Vec<Complex64>) -> Self {
        let m = grid.len();
        debug_assert_eq!(samples.len(), m);
        for j in 1..m / 2 {
            let avg = 0.5 * (samples[j] + samples[m - j].conj());
            samples[j] = avg;
            samples[m - j] = avg.conj();
        }
        samples[0].im = 0.0;
        samples[m / 2].im = 0.0;
        CircleFunction { grid, samples }
    }

    /// As [`CircleFunction::from_symmetrized`], but for interval data that
    /// is not periodic: the endpoint sample stays as computed, since its
    /// reflection partner lives at the unstored point `+1/2`.
    pub(crate) fn from_symmetrized_interval(grid: CircleGrid, mut samples: Vec<Complex64>) -> Self {
        let m = grid.len();
        debug_assert_eq!(samples.len(), m);
        for j in 1..m / 2 {
            let avg = 0.5 * (samples[j] + samples[m - j].conj());
            samples[j] = avg;
            samples[m - j] = avg.conj();
        }
        samples[m / 2].im = 0.0;
        CircleFunction { grid, samples }
    }

    pub fn grid(&self) -> CircleGrid {
        self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// Maximum modulus over the grid.
    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Maximum modulus of the pointwise difference. Panics on grid mismatch.
    pub fn sup_distance(&self, other: &CircleFunction) -> f64 {
        assert_eq!(self.grid, other.grid, "grid mismatch");
        self.samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Pointwise difference `self - other`. Panics on grid mismatch.
    pub fn sub(&self, other: &CircleFunction) -> CircleFunction {
        assert_eq!(self.grid, other.grid, "grid mismatch");
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a - b)
            .collect();
        // Exact: conj(a) - conj(b) = conj(a - b) in floating point.
        CircleFunction {
            grid: self.grid,
            samples,
        }
    }
}

/// Real coefficients `c(n)` for `|n| <= n_max`, stored at index `n + n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffSeq {
    n_max: usize,
    values: Vec<f64>,
}

impl CoeffSeq {
    pub fn new(n_max: usize, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), 2 * n_max + 1, "need 2*n_max+1 values");
        CoeffSeq { n_max, values }
    }

    pub fn zeros(n_max: usize) -> Self {
        CoeffSeq {
            n_max,
            values: vec![0.0; 2 * n_max + 1],
        }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// `c(n)`, zero outside the stored window.
    pub fn get(&self, n: i64) -> f64 {
        let shifted = n + self.n_max as i64;
        if shifted < 0 || shifted >= self.values.len() as i64 {
            0.0
        } else {
            self.values[shifted as usize]
        }
    }

    pub fn set(&mut self, n: i64, value: f64) {
        let shifted = n + self.n_max as i64;
        assert!(
            shifted >= 0 && shifted < self.values.len() as i64,
            "index {n} outside |n| <= {}",
            self.n_max
        );
        self.values[shifted as usize] = value;
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let n_max = self.n_max as i64;
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (i as i64 - n_max, v))
    }

    /// Sum of squared coefficients.
    pub fn l2_mass(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    /// `(argmax, max |c(n)|)`; the smallest index wins ties, so the result is
    /// deterministic.
    pub fn max_abs(&self) -> (i64, f64) {
        let mut arg = -(self.n_max as i64);
        let mut best = f64::NEG_INFINITY;
        for (n, v) in self.iter() {
            if v.abs() > best {
                best = v.abs();
                arg = n;
            }
        }
        (arg, best)
    }

    /// Direct evaluation of `sum_n c(n) e^{2 pi i n t}` at an arbitrary point
    /// (slow path for oracles and refinement checks).
    pub fn eval(&self, t: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, v) in self.iter() {
            if v != 0.0 {
                acc += v * Complex64::from_polar(1.0, 2.0 * PI * n as f64 * t);
            }
        }
        acc
    }
}

fn planner() -> &'static Mutex<FftPlanner<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()))
}

fn plan_forward(m: usize) -> Arc<dyn Fft<f64>> {
    planner().lock().unwrap().plan_fft_forward(m)
}

fn plan_inverse(m: usize) -> Arc<dyn Fft<f64>> {
    planner().lock().unwrap().plan_fft_inverse(m)
}

/// Quadrature coefficients `c(n) = integral f(t) e^{-2 pi i n t} dt` for
/// `|n| <= n_max`, via the trapezoid rule on one forward FFT. With
/// `t_j = -1/2 + j/M` this is `(-1)^n / M` times the plain DFT bin
/// `n mod M`, after replacing the endpoint sample by the average of the
/// implied pair `f(+-1/2)`, which is its real part.
///
/// The reflection symmetry makes every such quadrature sum real, so the
/// imaginary residue of the extracted coefficients must stay within
/// [`SYM_TOL`]; a larger residue means the input lost its symmetry.
pub fn fourier_coeffs(f: &CircleFunction, n_max: usize) -> Result<CoeffSeq, CircleError> {
    let (seq, _) = analyze_with_tail(f, n_max)?;
    Ok(seq)
}

/// As [`fourier_coeffs`], but also reports the squared coefficient mass in the
/// measurable band beyond the cutoff, `sum_{n_max < |n| <= min(2 n_max, M/2 - 1)}
/// |c(n)|^2`, used by the solver to bound what truncation discards.
pub fn analyze_with_tail(f: &CircleFunction, n_max: usize) -> Result<(CoeffSeq, f64), CircleError> {
    let m = f.grid.len();
    if 2 * n_max >= m {
        return Err(CircleError::NyquistViolation { n_max, m });
    }
    let mut buf = f.samples.clone();
    // trapezoid endpoint average: (f(-1/2) + f(1/2)) / 2 = Re f(-1/2)
    buf[0].im = 0.0;
    plan_forward(m).process(&mut buf);

    let scale = 1.0 / m as f64;
    let mut values = Vec::with_capacity(2 * n_max + 1);
    let mut imag_residual = 0.0f64;
    for n in -(n_max as i64)..=(n_max as i64) {
        let bin = n.rem_euclid(m as i64) as usize;
        let sign = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let c = buf[bin] * (sign * scale);
        imag_residual = imag_residual.max(c.im.abs());
        values.push(c.re);
    }
    if imag_residual > SYM_TOL {
        return Err(CircleError::SymmetryViolation {
            residual: imag_residual,
            tol: SYM_TOL,
        });
    }

    let outer = (2 * n_max).min(m / 2 - 1);
    let mut tail = 0.0;
    for n in (n_max as i64 + 1)..=(outer as i64) {
        for s in [n, -n] {
            let bin = s.rem_euclid(m as i64) as usize;
            tail += (buf[bin] * scale).norm_sqr();
        }
    }
    Ok((CoeffSeq::new(n_max, values), tail))
}

/// Trigonometric synthesis `f(t_j) = sum_{|n| <= n_max} c(n) e^{2 pi i n t_j}`
/// via one inverse FFT. The output symmetry is enforced exactly.
pub fn synthesize(c: &CoeffSeq, grid: CircleGrid) -> Result<CircleFunction, CircleError> {
    let m = grid.len();
    if 2 * c.n_max() >= m {
        return Err(CircleError::NyquistViolation {
            n_max: c.n_max(),
            m,
        });
    }
    let mut spec = vec![Complex64::new(0.0, 0.0); m];
    for (n, v) in c.iter() {
        let bin = n.rem_euclid(m as i64) as usize;
        let sign = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        spec[bin] = Complex64::new(sign * v, 0.0);
    }
    plan_inverse(m).process(&mut spec);
    Ok(CircleFunction::from_symmetrized(grid, spec))
}

/// Sup norm of the trigonometric polynomial measured on a refined grid.
/// The grid-M sup underestimates the true sup by at most
/// `pi * n_max * ||f|| / M` (mean-value plus the derivative bound for
/// degree-`n_max` trigonometric polynomials), so doubling the grid brackets it.
pub fn sup_norm_on_grid(c: &CoeffSeq, m: usize) -> Result<f64, CircleError> {
    let grid = CircleGrid::new(m)?;
    Ok(synthesize(c, grid)?.sup_norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_rejects_odd_or_tiny_sizes() {
        assert!(CircleGrid::new(0).is_err());
        assert!(CircleGrid::new(2).is_err());
        assert!(CircleGrid::new(7).is_err());
        assert!(CircleGrid::new(8).is_ok());
    }

    #[test]
    fn grid_points_cover_half_open_interval() {
        let g = CircleGrid::new(8).unwrap();
        assert_eq!(g.point(0), -0.5);
        assert_eq!(g.point(4), 0.0);
        assert_eq!(g.zero_index(), 4);
        assert_eq!(g.point(7), -0.5 + 7.0 / 8.0);
    }

    #[test]
    fn constructor_rejects_broken_symmetry() {
        let g = CircleGrid::new(8).unwrap();
        let mut s = vec![Complex64::new(0.0, 0.0); 8];
        s[1] = Complex64::new(1.0, 0.0);
        // missing the mirrored conjugate at index 7
        let err = CircleFunction::new(g, s).unwrap_err();
        assert!(matches!(err, CircleError::SymmetryViolation { .. }));
    }

    #[test]
    fn constructor_rejects_imaginary_value_at_zero() {
        let g = CircleGrid::new(8).unwrap();
        let mut s = vec![Complex64::new(0.0, 0.0); 8];
        s[4] = Complex64::new(0.0, 1.0); // f(0) must be real
        assert!(CircleFunction::new(g, s).is_err());
    }

    #[test]
    fn endpoint_sample_may_be_complex() {
        // f(-1/2) pairs with the unstored f(+1/2) = conj(f(-1/2)), so a
        // complex endpoint value is legitimate interval data.
        let g = CircleGrid::new(8).unwrap();
        let mut s = vec![Complex64::new(0.0, 0.0); 8];
        s[0] = Complex64::new(0.3, 0.7);
        let f = CircleFunction::new(g, s).unwrap();
        // the endpoint average is real, so no imaginary residue leaks into
        // the measured coefficients: c(n) = 0.3 * (-1)^n / 8
        let c = fourier_coeffs(&f, 3).unwrap();
        for n in -3i64..=3 {
            let expected = 0.3 * if n % 2 == 0 { 1.0 } else { -1.0 } / 8.0;
            assert!((c.get(n) - expected).abs() < 1e-16, "c({n}) = {}", c.get(n));
        }
    }

    #[test]
    fn pure_mode_has_unit_coefficient() {
        // f(t) = e^{2 pi i t}: c(1) = 1, everything else 0.
        let g = CircleGrid::new(16).unwrap();
        let s: Vec<_> = (0..16)
            .map(|j| Complex64::from_polar(1.0, 2.0 * PI * g.point(j)))
            .collect();
        let f = CircleFunction::new(g, s).unwrap();
        let c = fourier_coeffs(&f, 3).unwrap();
        assert!((c.get(1) - 1.0).abs() < 1e-14);
        for n in [-3i64, -2, -1, 0, 2, 3] {
            assert!(c.get(n).abs() < 1e-14, "c({n}) = {}", c.get(n));
        }
    }

    #[test]
    fn cosine_splits_into_two_real_coefficients() {
        // f(t) = 2 cos(2 pi t) has c(1) = c(-1) = 1.
        let g = CircleGrid::new(32).unwrap();
        let f = CircleFunction::from_even_real(g, |t| 2.0 * (2.0 * PI * t).cos());
        let c = fourier_coeffs(&f, 1).unwrap();
        assert!((c.get(1) - 1.0).abs() < 1e-14);
        assert!((c.get(-1) - 1.0).abs() < 1e-14);
        assert!(c.get(0).abs() < 1e-14);
    }

    #[test]
    fn synthesize_single_pair_evaluates_to_two_at_zero() {
        let mut c = CoeffSeq::zeros(1);
        c.set(1, 1.0);
        c.set(-1, 1.0);
        let g = CircleGrid::new(16).unwrap();
        let f = synthesize(&c, g).unwrap();
        let at_zero = f.samples()[g.zero_index()];
        assert!((at_zero - Complex64::new(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn nyquist_cutoff_is_enforced() {
        let g = CircleGrid::new(16).unwrap();
        let f = CircleFunction::from_even_real(g, |_| 1.0);
        assert!(matches!(
            fourier_coeffs(&f, 8),
            Err(CircleError::NyquistViolation { .. })
        ));
        assert!(fourier_coeffs(&f, 7).is_ok());
        let c = CoeffSeq::zeros(8);
        assert!(matches!(
            synthesize(&c, g),
            Err(CircleError::NyquistViolation { .. })
        ));
    }

    #[test]
    fn synthesis_output_is_exactly_symmetric() {
        let mut c = CoeffSeq::zeros(5);
        for n in -5i64..=5 {
            c.set(n, 0.1 * n as f64 + 0.3);
        }
        let g = CircleGrid::new(32).unwrap();
        let f = synthesize(&c, g).unwrap();
        let s = f.samples();
        for j in 0..32 {
            let k = (32 - j) % 32;
            assert_eq!(s[k], s[j].conj(), "exact symmetry at {j}");
        }
    }

    #[test]
    fn coeff_seq_indexing_and_bounds() {
        let mut c = CoeffSeq::zeros(2);
        c.set(-2, 5.0);
        c.set(2, -7.0);
        assert_eq!(c.get(-2), 5.0);
        assert_eq!(c.get(2), -7.0);
        assert_eq!(c.get(3), 0.0);
        assert_eq!(c.get(-3), 0.0);
        assert_eq!(c.max_abs(), (2, 7.0));
        assert_eq!(c.l2_mass(), 74.0);
    }

    #[test]
    fn analyze_tail_sees_mass_beyond_cutoff() {
        // f = e^{2 pi i 5 t}: analysis at cutoff 3 puts all tail mass at |n|=5.
        let g = CircleGrid::new(32).unwrap();
        let s: Vec<_> = (0..32)
            .map(|j| Complex64::from_polar(1.0, 2.0 * PI * 5.0 * g.point(j)))
            .collect();
        let f = CircleFunction::new(g, s).unwrap();
        let (c, tail) = analyze_with_tail(&f, 3).unwrap();
        assert!(c.values().iter().all(|v| v.abs() < 1e-13));
        assert!((tail - 1.0).abs() < 1e-12, "tail = {tail}");
    }
}
