//! Perturbed-integer translation sets and the certificates computed from
//! them: truncated tiling sums against bandlimited kernels, the in-gap
//! cross-check with a second kernel family, a non-periodicity certificate,
//! and the alphabet of successive gaps.
//!
//! A translation set has the form `lambda(n) = n + alpha(n)` with
//! `|alpha(n)| < 1/2`, so it keeps one point near every integer and inherits
//! unit density. When the perturbation sequence comes from a solved
//! fixed-point run its exponential-sum transform vanishes on a symmetric
//! interval around zero, and sums of kernel translates over the set are
//! constant up to truncation error; the functions here measure exactly that.

use crate::circle::CoeffSeq;
use crate::kernels::TilingKernel;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TilingError {
    #[error(
        "perturbation too large: max |alpha| = {max_abs} must stay below 1/2 \
         to keep one point per integer"
    )]
    PerturbationTooLarge { max_abs: f64 },
    #[error("window {window} smaller than the coefficient support {n_max}")]
    WindowTooSmall { window: usize, n_max: usize },
    #[error(
        "kernel bandwidth {bandwidth} does not fit inside the spectral gap \
         of half-width {gap}"
    )]
    BandwidthExceedsGap { bandwidth: f64, gap: f64 },
}

/// The set `{ n + alpha(n) : n integer }`, with `alpha` zero outside its
/// stored support. `window` bounds the index range that enumeration
/// methods cover; the set itself extends over all integers.
#[derive(Debug, Clone)]
pub struct TranslationSet {
    alpha: CoeffSeq,
    window: usize,
}

impl TranslationSet {
    pub fn new(alpha: CoeffSeq, window: usize) -> Result<Self, TilingError> {
        let (_, max_abs) = alpha.max_abs();
        if max_abs >= 0.5 {
            return Err(TilingError::PerturbationTooLarge { max_abs });
        }
        if window < alpha.n_max() {
            return Err(TilingError::WindowTooSmall {
                window,
                n_max: alpha.n_max(),
            });
        }
        Ok(TranslationSet { alpha, window })
    }

    /// The unperturbed integers.
    pub fn integers(window: usize) -> Self {
        TranslationSet {
            alpha: CoeffSeq::zeros(0),
            window,
        }
    }

    pub fn alpha(&self) -> &CoeffSeq {
        &self.alpha
    }

    pub fn window(&self) -> usize {
        self.window
    }

    /// The point assigned to index `n`; plain `n` beyond the stored support.
    pub fn lambda(&self, n: i64) -> f64 {
        n as f64 + self.alpha.get(n)
    }

    /// Points for `|n| <= window`, in increasing index order (which is
    /// increasing value order, since perturbations stay below 1/2).
    pub fn points(&self) -> Vec<f64> {
        let w = self.window as i64;
        (-w..=w).map(|n| self.lambda(n)).collect()
    }
}

/// Result of scanning a truncated tiling sum over a grid of sample points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TilingReport {
    /// Kernel family used for the scan.
    pub kernel: String,
    pub bandwidth: f64,
    /// Constant the sum is compared against (`K_hat(0)`).
    pub level: f64,
    /// `sup_x | sum_{|lambda - x| <= radius} K(x - lambda) - level |`.
    pub sup_residual: f64,
    /// A priori bound on what the truncation at `radius` can contribute.
    pub tail_bound: f64,
    pub x_count: usize,
    pub span: f64,
    pub radius: f64,
}

/// Non-periodicity certificate for a perturbed-integer set.
///
/// Because `|alpha| < 1/2`, the set has exactly one point within 1/2 of each
/// integer, so any translation mapping it to itself must be an integer `m`,
/// forcing `alpha(n + m) = alpha(n)` for all `n`. A nonzero `alpha` with
/// finite support admits no such nonzero `m`: repeating the witness value
/// `alpha(witness)` with period `m` would place nonzero values beyond the
/// support. PASS therefore means "not a single nonzero coefficient short of
/// periodic": some `alpha(n)` is nonzero and all stay below 1/2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub pass: bool,
    /// Index of the largest perturbation, the witness coefficient.
    pub witness: i64,
    pub max_abs_alpha: f64,
    pub nonzero_count: usize,
    pub window: usize,
    pub statement: String,
}

/// Truncated tiling sum at `x`: kernel translates over all set points with
/// `|lambda - x| <= radius`, summed in increasing index order. Returns the
/// sum and the kernel's a priori bound for the discarded tail.
pub fn tiling_sum(
    kernel: &dyn TilingKernel,
    set: &TranslationSet,
    x: f64,
    radius: f64,
) -> (f64, f64) {
    assert!(radius >= 2.0, "truncation radius below 2 is meaningless");
    let lo = (x - radius).floor() as i64 - 1;
    let hi = (x + radius).ceil() as i64 + 1;
    let mut sum = 0.0;
    for n in lo..=hi {
        let lambda = set.lambda(n);
        if (lambda - x).abs() <= radius {
            sum += kernel.eval(x - lambda);
        }
    }
    (sum, kernel.point_sum_tail_bound(radius))
}

/// Scans `x_count` uniform sample points on `[-span, span]` and reports the
/// worst deviation of the truncated tiling sum from the kernel's unit level.
pub fn tiling_residual(
    kernel: &dyn TilingKernel,
    set: &TranslationSet,
    x_count: usize,
    span: f64,
    radius: f64,
) -> TilingReport {
    assert!(x_count >= 2, "need at least two sample points");
    assert!(span > 0.0, "need a positive scan span");
    let level = kernel.transform(0.0).re;
    let step = 2.0 * span / (x_count - 1) as f64;
    let mut sup_residual = 0.0f64;
    let mut tail_bound = 0.0f64;
    for j in 0..x_count {
        let x = -span + j as f64 * step;
        let (sum, tail) = tiling_sum(kernel, set, x, radius);
        sup_residual = sup_residual.max((sum - level).abs());
        tail_bound = tail;
    }
    TilingReport {
        kernel: kernel.family().to_string(),
        bandwidth: kernel.bandwidth(),
        level,
        sup_residual,
        tail_bound,
        x_count,
        span,
        radius,
    }
}

/// Cross-check of the spectral gap with an independent kernel: any kernel
/// whose Fourier support fits strictly inside the gap must see a flat sum,
/// whatever family it comes from. Rejects kernels too wide for the gap.
pub fn delta_gap_test(
    kernel: &dyn TilingKernel,
    set: &TranslationSet,
    gap_half_width: f64,
    x_count: usize,
    span: f64,
    radius: f64,
) -> Result<TilingReport, TilingError> {
    if kernel.bandwidth() >= gap_half_width {
        return Err(TilingError::BandwidthExceedsGap {
            bandwidth: kernel.bandwidth(),
            gap: gap_half_width,
        });
    }
    Ok(tiling_residual(kernel, set, x_count, span, radius))
}

/// Certifies that the set is not fixed by any nonzero translation.
pub fn nonperiodicity_certificate(set: &TranslationSet) -> CertificateReport {
    let alpha = set.alpha();
    let (witness, max_abs) = alpha.max_abs();
    let nonzero_count = alpha.values().iter().filter(|v| **v != 0.0).count();
    let pass = max_abs > 0.0 && max_abs < 0.5;
    let statement = if pass {
        format!(
            "finitely supported perturbation with alpha({witness}) = {:.6e} != 0 and \
             max |alpha| = {:.6e} < 1/2: the set keeps one point per integer, any \
             self-translation would be an integer period of alpha, and a nonzero \
             finitely supported sequence has none",
            alpha.get(witness),
            max_abs
        )
    } else if max_abs == 0.0 {
        "perturbation is identically zero: the set is the integers, which are periodic"
            .to_string()
    } else {
        format!(
            "max |alpha| = {max_abs:.6e} reaches 1/2: points may collide or reorder, \
             so the one-point-per-integer argument does not apply"
        )
    };
    CertificateReport {
        pass,
        witness,
        max_abs_alpha: max_abs,
        nonzero_count,
        window: set.window(),
        statement,
    }
}

/// Distinct successive gaps `lambda(n+1) - lambda(n)` over `|n| <= window`,
/// deduplicated by rounding to multiples of `round_tol` and reported in
/// increasing order. Each class is represented by the first gap that hit it.
pub fn gap_alphabet(set: &TranslationSet, window: usize, round_tol: f64) -> Vec<f64> {
    assert!(round_tol > 0.0, "need a positive rounding tolerance");
    let w = window as i64;
    let mut classes: BTreeMap<i64, f64> = BTreeMap::new();
    for n in -w..w {
        let gap = set.lambda(n + 1) - set.lambda(n);
        let key = (gap / round_tol).round() as i64;
        classes.entry(key).or_insert(gap);
    }
    classes.into_values().collect()
}
