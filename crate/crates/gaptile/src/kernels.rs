//! Bandlimited summation kernels and a name-based registry.
//!
//! Each kernel is a nonnegative integrable function `K` whose Fourier
//! transform vanishes outside `[-b, b]` with `b < 1`. Summing translates of
//! `K` over a perturbed-integer set probes the tiling identity
//! `sum_lambda K(x - lambda) = const`: the sum only sees the spectrum of the
//! translation set inside the band, so a spectral gap turns into a flat sum.
//! Different families decay at different rates, which sets how fast the
//! truncated sums converge; cross-checks are expected to run two distinct
//! families, so kernels are selected at runtime by name through
//! [`kernel_by_name`].

use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum KernelError {
    #[error("unknown kernel family '{name}' (known: {known})")]
    UnknownFamily { name: String, known: String },
    #[error("bandwidth must be positive and finite, got {bandwidth}")]
    InvalidBandwidth { bandwidth: f64 },
}

/// `sin(pi u) / (pi u)` with the limit value `1` at `u = 0`.
pub fn sinc(u: f64) -> f64 {
    if u == 0.0 {
        1.0
    } else {
        (PI * u).sin() / (PI * u)
    }
}

/// A summation kernel with unit mass and Fourier support in `[-b, b]`.
///
/// Tail-bound methods assume at most two summation points per unit interval,
/// which holds for every perturbed-integer set with perturbations below 1/2.
pub trait TilingKernel: Send + Sync {
    /// Registry name of the kernel family.
    fn family(&self) -> &'static str;

    /// Half-width `b` of the Fourier support.
    fn bandwidth(&self) -> f64;

    /// Kernel value `K(x)`.
    fn eval(&self, x: f64) -> f64;

    /// Value at the origin.
    fn peak(&self) -> f64 {
        self.eval(0.0)
    }

    /// Fourier transform `K_hat(t) = integral K(x) e^{-2 pi i x t} dx`.
    /// Complex-valued because shifted mixtures are not even functions.
    fn transform(&self, t: f64) -> Complex64;

    /// Upper bound on `sum K(x - lambda)` over the points with
    /// `|x - lambda| > radius`, for any set with at most two points per unit
    /// interval. Requires `radius > min_tail_radius()`.
    fn point_sum_tail_bound(&self, radius: f64) -> f64;

    /// Smallest truncation radius for which [`point_sum_tail_bound`] is
    /// defined; shifted mixtures push it out by their offset.
    ///
    /// [`point_sum_tail_bound`]: TilingKernel::point_sum_tail_bound
    fn min_tail_radius(&self) -> f64 {
        1.0
    }

    /// Upper bound on `integral of K over |x| > half_range`.
    /// Requires `half_range > 0`.
    fn integral_tail_bound(&self, half_range: f64) -> f64;
}

/// `K(x) = b sinc^2(b x)`, with triangular transform
/// `K_hat(t) = max(0, 1 - |t|/b)` and quadratic decay `K(x) <= 1/(pi^2 b x^2)`.
#[derive(Debug, Clone, Copy)]
pub struct FejerKernel {
    bandwidth: f64,
}

impl FejerKernel {
    pub fn new(bandwidth: f64) -> Result<Self, KernelError> {
        if !(bandwidth > 0.0 && bandwidth.is_finite()) {
            return Err(KernelError::InvalidBandwidth { bandwidth });
        }
        Ok(FejerKernel { bandwidth })
    }
}

impl TilingKernel for FejerKernel {
    fn family(&self) -> &'static str {
        "fejer"
    }

    fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    fn eval(&self, x: f64) -> f64 {
        let s = sinc(self.bandwidth * x);
        self.bandwidth * s * s
    }

    fn transform(&self, t: f64) -> Complex64 {
        Complex64::new((1.0 - t.abs() / self.bandwidth).max(0.0), 0.0)
    }

    fn point_sum_tail_bound(&self, radius: f64) -> f64 {
        // K(x) <= 1/(pi^2 b x^2); two points per unit interval, both sides:
        // 2 * 2 * integral_{radius-1}^inf dx / (pi^2 b x^2).
        assert!(radius > 1.0, "tail bound needs radius > 1");
        4.0 / (PI * PI * self.bandwidth * (radius - 1.0))
    }

    fn integral_tail_bound(&self, half_range: f64) -> f64 {
        assert!(half_range > 0.0, "tail bound needs a positive range");
        2.0 / (PI * PI * self.bandwidth * half_range)
    }
}

/// `K(x) = (3b/4) sinc^4(b x / 2)`, with transform
/// `K_hat(t) = (3/2) B4(2t/b)` for the cubic B-spline `B4` supported on
/// `[-2, 2]`, and quartic decay `K(x) <= 12/(pi^4 b^3 x^4)`.
#[derive(Debug, Clone, Copy)]
pub struct JacksonKernel {
    bandwidth: f64,
}

impl JacksonKernel {
    pub fn new(bandwidth: f64) -> Result<Self, KernelError> {
        if !(bandwidth > 0.0 && bandwidth.is_finite()) {
            return Err(KernelError::InvalidBandwidth { bandwidth });
        }
        Ok(JacksonKernel { bandwidth })
    }
}

/// Centered cubic B-spline (triangle convolved with itself), support `[-2, 2]`.
fn cubic_bspline(s: f64) -> f64 {
    let s = s.abs();
    if s >= 2.0 {
        0.0
    } else if s <= 1.0 {
        (4.0 - 6.0 * s * s + 3.0 * s * s * s) / 6.0
    } else {
        let r = 2.0 - s;
        r * r * r / 6.0
    }
}

impl TilingKernel for JacksonKernel {
    fn family(&self) -> &'static str {
        "jackson"
    }

    fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    fn eval(&self, x: f64) -> f64 {
        let s = sinc(0.5 * self.bandwidth * x);
        0.75 * self.bandwidth * s * s * s * s
    }

    fn transform(&self, t: f64) -> Complex64 {
        Complex64::new(1.5 * cubic_bspline(2.0 * t / self.bandwidth), 0.0)
    }

    fn point_sum_tail_bound(&self, radius: f64) -> f64 {
        assert!(radius > 1.0, "tail bound needs radius > 1");
        let b = self.bandwidth;
        let r = radius - 1.0;
        16.0 / (PI.powi(4) * b * b * b * r * r * r)
    }

    fn integral_tail_bound(&self, half_range: f64) -> f64 {
        assert!(half_range > 0.0, "tail bound needs a positive range");
        let b = self.bandwidth;
        let l = half_range;
        8.0 / (PI.powi(4) * b * b * b * l * l * l)
    }
}

/// Average of a base kernel with its own translate by half a zero spacing:
/// `M(x) = (K(x) + K(x - theta)) / 2`. The zeros of the two copies
/// interlace, so `M` is strictly positive everywhere; the transform picks up
/// the phase factor `(1 + e^{-2 pi i theta t}) / 2`.
pub struct MixedKernel {
    inner: Box<dyn TilingKernel>,
    theta: f64,
    family: &'static str,
}

impl MixedKernel {
    /// Fejer base: zeros at multiples of `1/b`, so `theta = 1/(2b)`.
    pub fn fejer(bandwidth: f64) -> Result<Self, KernelError> {
        let inner = FejerKernel::new(bandwidth)?;
        Ok(MixedKernel {
            theta: 0.5 / bandwidth,
            inner: Box::new(inner),
            family: "fejer-mixed",
        })
    }

    /// Jackson base: zeros at multiples of `2/b`, so `theta = 1/b`.
    pub fn jackson(bandwidth: f64) -> Result<Self, KernelError> {
        let inner = JacksonKernel::new(bandwidth)?;
        Ok(MixedKernel {
            theta: 1.0 / bandwidth,
            inner: Box::new(inner),
            family: "jackson-mixed",
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

impl TilingKernel for MixedKernel {
    fn family(&self) -> &'static str {
        self.family
    }

    fn bandwidth(&self) -> f64 {
        self.inner.bandwidth()
    }

    fn eval(&self, x: f64) -> f64 {
        0.5 * (self.inner.eval(x) + self.inner.eval(x - self.theta))
    }

    fn transform(&self, t: f64) -> Complex64 {
        let phase = Complex64::from_polar(1.0, -2.0 * PI * self.theta * t);
        self.inner.transform(t) * 0.5 * (Complex64::new(1.0, 0.0) + phase)
    }

    fn point_sum_tail_bound(&self, radius: f64) -> f64 {
        // The shifted copy seen from x is the base kernel seen from x + theta,
        // whose tail beyond the reduced radius dominates both halves.
        assert!(
            radius > self.theta + 1.0,
            "tail bound needs radius > theta + 1"
        );
        self.inner.point_sum_tail_bound(radius - self.theta)
    }

    fn min_tail_radius(&self) -> f64 {
        self.theta + 1.0
    }

    fn integral_tail_bound(&self, half_range: f64) -> f64 {
        assert!(
            half_range > self.theta,
            "tail bound needs half_range > theta"
        );
        self.inner.integral_tail_bound(half_range - self.theta)
    }
}

type KernelCtor = fn(f64) -> Box<dyn TilingKernel>;

fn make_fejer(b: f64) -> Box<dyn TilingKernel> {
    Box::new(FejerKernel::new(b).expect("bandwidth validated by kernel_by_name"))
}

fn make_jackson(b: f64) -> Box<dyn TilingKernel> {
    Box::new(JacksonKernel::new(b).expect("bandwidth validated by kernel_by_name"))
}

fn make_fejer_mixed(b: f64) -> Box<dyn TilingKernel> {
    Box::new(MixedKernel::fejer(b).expect("bandwidth validated by kernel_by_name"))
}

fn make_jackson_mixed(b: f64) -> Box<dyn TilingKernel> {
    Box::new(MixedKernel::jackson(b).expect("bandwidth validated by kernel_by_name"))
}

/// Registered kernel families in presentation order.
pub const REGISTRY: &[(&str, KernelCtor)] = &[
    ("fejer", make_fejer),
    ("jackson", make_jackson),
    ("fejer-mixed", make_fejer_mixed),
    ("jackson-mixed", make_jackson_mixed),
];

/// Names of all registered kernel families.
pub fn kernel_names() -> Vec<&'static str> {
    REGISTRY.iter().map(|(name, _)| *name).collect()
}

/// Constructs a kernel by registry name.
pub fn kernel_by_name(name: &str, bandwidth: f64) -> Result<Box<dyn TilingKernel>, KernelError> {
    if !(bandwidth > 0.0 && bandwidth.is_finite()) {
        return Err(KernelError::InvalidBandwidth { bandwidth });
    }
    for (key, ctor) in REGISTRY {
        if *key == name {
            return Ok(ctor(bandwidth));
        }
    }
    Err(KernelError::UnknownFamily {
        name: name.to_string(),
        known: kernel_names().join(", "),
    })
}
