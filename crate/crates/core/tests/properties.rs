//! Randomized invariants of the reduced problem.
//!
//! These hold for every admissible parameter combination, not just the
//! tabulated cases, so they are checked over random draws.

use frontflux::series::build_series;
use frontflux::similarity::{flux_exponent, growth_exponent, map_parameters};
use frontflux::PhysicalParams;
use proptest::prelude::*;

proptest! {
    /// Rescaling the front position by `lambda` rescales the coefficient of
    /// `(alpha - theta)^i` by `lambda^(2 - i)`, at every order the
    /// recurrence produces. This is the scale symmetry that makes the
    /// boundary-condition residual a monomial in alpha with a single root.
    #[test]
    fn coefficients_scale_covariantly_in_the_front_position(
        n in 0.5f64..4.0,
        m in 0.3f64..3.0,
        alpha in 0.3f64..3.0,
        lambda in 0.5f64..2.0,
    ) {
        let order = 10;
        let base = build_series(n, m, alpha, order).unwrap();
        let scaled = build_series(n, m, lambda * alpha, order).unwrap();
        for i in 0..=order {
            let expected = base.coeffs()[i] * lambda.powi(2 - i as i32);
            let got = scaled.coeffs()[i];
            let span = expected.abs().max(got.abs()).max(1e-30);
            prop_assert!(
                (expected - got).abs() <= 1e-9 * span,
                "order {i}: {expected:e} vs {got:e} at lambda {lambda}"
            );
        }
    }

    /// The growth and flux exponents invert each other, and the similarity
    /// scales always satisfy the constraint that fixes the diffusivity to
    /// one in reduced variables.
    #[test]
    fn exponent_maps_invert_and_scales_obey_the_constraint(
        n in 0.5f64..5.0,
        k in 0.0f64..4.0,
        kappa in 0.2f64..5.0,
        q0 in 0.2f64..5.0,
    ) {
        let m = growth_exponent(n, k);
        let k_back = flux_exponent(n, m);
        prop_assert!(
            (k_back - k).abs() <= 1e-12 * k.abs().max(1.0),
            "k {k} -> m {m} -> k {k_back}"
        );

        let phys = PhysicalParams::new(n, k, kappa, q0).unwrap();
        let scales = map_parameters(&phys).unwrap();
        prop_assert!((scales.m - m).abs() <= 1e-14 * m.abs().max(1.0));
        prop_assert!((scales.p - 0.5 * (m + 1.0)).abs() <= 1e-14);
        let constraint = kappa * scales.amplitude * scales.inv_length.powi(2);
        prop_assert!(
            (constraint - 1.0).abs() <= 1e-12,
            "kappa A B^2 = {constraint} for n {n}, k {k}, kappa {kappa}, q0 {q0}"
        );
    }
}
