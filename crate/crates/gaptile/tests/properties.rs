//! Property tests for the analysis/synthesis pair, the perturbation
//! transform, and the kernel family, plus quadrature oracles that pin the
//! closed-form kernel transforms to numerical integration.

use gaptile::circle::{fourier_coeffs, sup_norm_on_grid, synthesize, CircleGrid, CoeffSeq};
use gaptile::kernels::{kernel_by_name, kernel_names, TilingKernel};
use gaptile::solver::perturbation_transform;
use gaptile::tiling::TranslationSet;
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn coeff_seq(n_max: usize) -> impl Strategy<Value = CoeffSeq> {
    proptest::collection::vec(-1.0f64..1.0, 2 * n_max + 1)
        .prop_map(move |v| CoeffSeq::new(n_max, v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn analysis_inverts_synthesis(c in coeff_seq(12)) {
        let grid = CircleGrid::new(128).unwrap();
        let f = synthesize(&c, grid).unwrap();
        let back = fourier_coeffs(&f, 12).unwrap();
        for (n, v) in c.iter() {
            prop_assert!((back.get(n) - v).abs() <= 1e-12,
                "coefficient {n}: {v} came back as {}", back.get(n));
        }
    }

    #[test]
    fn synthesis_output_pairs_exactly(c in coeff_seq(9)) {
        let grid = CircleGrid::new(64).unwrap();
        let f = synthesize(&c, grid).unwrap();
        let s = f.samples();
        for j in 1..=32 {
            prop_assert_eq!(s[64 - j % 64], s[j % 64].conj());
        }
    }

    #[test]
    fn grid_sup_norm_is_stable_under_refinement(c in coeff_seq(10)) {
        // Bernstein: a degree-n trigonometric polynomial changes by at most
        // pi * n * sup / m between adjacent samples of an m-point grid, so
        // the refined sup is within 1/(1 - pi n / m) of the coarse one.
        let coarse = sup_norm_on_grid(&c, 128).unwrap();
        let fine = sup_norm_on_grid(&c, 256).unwrap();
        prop_assert!(fine + 1e-12 >= coarse);
        let inflate = 1.0 / (1.0 - PI * 10.0 / 128.0);
        prop_assert!(fine <= coarse * inflate + 1e-12,
            "coarse {coarse}, fine {fine}");
    }

    #[test]
    fn transform_reflection_symmetry(
        values in proptest::collection::vec(-0.4f64..0.4, 17),
        t in 1e-3f64..0.5,
    ) {
        let alpha = CoeffSeq::new(8, values);
        let plus = perturbation_transform(&alpha, t, 8);
        let minus = perturbation_transform(&alpha, -t, 8);
        prop_assert!((minus - plus.conj()).norm() <= 1e-12);
    }

    #[test]
    fn transform_is_continuous_at_the_origin(
        values in proptest::collection::vec(-0.4f64..0.4, 17),
    ) {
        let alpha = CoeffSeq::new(8, values);
        let at_zero = perturbation_transform(&alpha, 0.0, 8);
        let nearby = perturbation_transform(&alpha, 1e-8, 8);
        prop_assert!((nearby - at_zero).norm() <= 1e-4,
            "jump {} at the removable singularity", (nearby - at_zero).norm());
    }

    #[test]
    fn point_sum_tail_bounds_dominate_partial_tails(
        values in proptest::collection::vec(-0.49f64..0.49, 9),
        // stay above every family's tail-bound domain (theta + 1 = 13.5 for
        // the shifted jackson variant at this bandwidth)
        radius in 15.0f64..50.0,
        x in -3.0f64..3.0,
    ) {
        // sum the first 2000 integers' worth of excluded translates and
        // compare against the a priori bound for the whole tail
        let alpha = CoeffSeq::new(4, values);
        let set = TranslationSet::new(alpha, 4).unwrap();
        for name in kernel_names() {
            let k = kernel_by_name(name, 0.08).unwrap();
            let mut tail = 0.0;
            let lo = (x - radius - 2000.0).floor() as i64;
            let hi = (x + radius + 2000.0).ceil() as i64;
            for n in lo..=hi {
                let d = x - set.lambda(n);
                if d.abs() > radius {
                    tail += k.eval(d);
                }
            }
            prop_assert!(tail <= k.point_sum_tail_bound(radius),
                "family {name}: partial tail {tail} above bound {}",
                k.point_sum_tail_bound(radius));
        }
    }
}

/// Trapezoid quadrature of `K(x) e^{-2 pi i x t}` over `[-range, range]`,
/// Kahan-compensated so millions of terms do not drown the range tail.
fn transform_quadrature(k: &dyn TilingKernel, t: f64, range: f64, step: f64) -> Complex64 {
    let n = (2.0 * range / step).round() as usize;
    let (mut re, mut im) = (0.0f64, 0.0f64);
    let (mut cre, mut cim) = (0.0f64, 0.0f64);
    for j in 0..=n {
        let x = -range + j as f64 * step;
        let weight = if j == 0 || j == n { 0.5 } else { 1.0 };
        let term = weight * k.eval(x) * Complex64::from_polar(1.0, -2.0 * PI * x * t);
        let y = term.re - cre;
        let s = re + y;
        cre = (s - re) - y;
        re = s;
        let y = term.im - cim;
        let s = im + y;
        cim = (s - im) - y;
        im = s;
    }
    Complex64::new(re, im) * step
}

#[test]
fn kernel_transforms_match_quadrature_within_range_truncation() {
    // The integrand is bandlimited, so the trapezoid rule is exact up to the
    // mass outside the integration range; only that tail separates the
    // quadrature from the closed-form transform.
    let cases: &[(&str, f64, &[f64])] = &[
        ("fejer", 0.08, &[0.0, 0.03, 0.07, 0.12]),
        ("jackson", 0.05, &[0.0, 0.025, 0.045, 0.08]),
        ("fejer-mixed", 0.08, &[0.0, 0.02]),
        ("jackson-mixed", 0.05, &[0.0, 0.02]),
    ];
    for &(name, b, ts) in cases {
        let k = kernel_by_name(name, b).unwrap();
        let range = 1e4 / b;
        let step = 0.01 / b;
        let budget = k.integral_tail_bound(range) + 1e-12;
        for &t in ts {
            let q = transform_quadrature(k.as_ref(), t, range, step);
            let err = (q - k.transform(t)).norm();
            assert!(
                err <= budget,
                "{name} at t = {t}: quadrature off by {err:.3e}, budget {budget:.3e}"
            );
        }
    }
}

#[test]
fn jackson_quadrature_is_sharp_near_machine_precision() {
    // The quartic decay makes the same range truncation four orders tighter
    // than the quadratic one; pin the observed headroom.
    let k = kernel_by_name("jackson", 0.05).unwrap();
    let q = transform_quadrature(k.as_ref(), 0.0, 1e4 / 0.05, 0.01 / 0.05);
    let err = (q - Complex64::new(1.0, 0.0)).norm();
    assert!(err <= 1e-12, "unit-mass quadrature off by {err:.3e}");
}

#[test]
fn fejer_quadrature_error_is_the_range_tail() {
    // With quadratic decay the error is dominated by the omitted tail mass
    // near 2/(pi^2 * 1e4), about 2e-5; both sides of that estimate hold.
    let k = kernel_by_name("fejer", 0.08).unwrap();
    let q = transform_quadrature(k.as_ref(), 0.0, 1e4 / 0.08, 0.01 / 0.08);
    let err = (q - Complex64::new(1.0, 0.0)).norm();
    assert!(
        (1e-6..2.03e-5).contains(&err),
        "expected a visible range tail, got {err:.3e}"
    );
}
