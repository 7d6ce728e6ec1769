//! Similarity reduction of the boundary-flux problem.
//!
//! The physical problem is the degenerate heat equation
//! `u_t = kappa (u^n u_r)_r` on `r > 0` with zero initial data and the
//! inflow condition `u^n u_r = -q0 t^k` at `r = 0`. Writing
//! `u^n = A t^m f(theta)` with `theta = B r / t^p` collapses it to a
//! boundary value problem for the reduced profile `f` on `[0, alpha]`,
//! where `theta = alpha` is the front. This module holds the parameter
//! maps, the two flux normalizations, and the closed-form profiles.

use crate::error::{Error, Result};
use crate::profile::{Profile, ProfileSource};
use serde::Serialize;

/// Inputs of the physical problem. All fields are dimensional.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalParams {
    /// Nonlinearity exponent of the conductivity, `n > 0`.
    pub n: f64,
    /// Time exponent of the boundary flux `q0 t^k`.
    pub k: f64,
    /// Diffusivity, `kappa > 0`.
    pub kappa: f64,
    /// Flux amplitude, `q0 > 0`.
    pub q0: f64,
}

impl PhysicalParams {
    /// Validates ranges and the existence of an advancing front.
    pub fn new(n: f64, k: f64, kappa: f64, q0: f64) -> Result<Self> {
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::InvalidParams(format!(
                "n must be positive and finite, got {n}"
            )));
        }
        if !k.is_finite() {
            return Err(Error::InvalidParams(format!("k must be finite, got {k}")));
        }
        if !(kappa > 0.0) || !kappa.is_finite() {
            return Err(Error::InvalidParams(format!(
                "kappa must be positive and finite, got {kappa}"
            )));
        }
        if !(q0 > 0.0) || !q0.is_finite() {
            return Err(Error::InvalidParams(format!(
                "q0 must be positive and finite, got {q0}"
            )));
        }
        let params = Self { n, k, kappa, q0 };
        let m = params.growth_exponent();
        if m + 1.0 <= 0.0 {
            return Err(Error::NoAdvancingFront {
                n,
                k,
                m_plus_one: m + 1.0,
            });
        }
        Ok(params)
    }

    /// Growth exponent `m = n(2k + 1)/(n + 2)` of the transformed field.
    pub fn growth_exponent(&self) -> f64 {
        growth_exponent(self.n, self.k)
    }
}

/// `m = n(2k + 1)/(n + 2)`.
pub fn growth_exponent(n: f64, k: f64) -> f64 {
    n * (2.0 * k + 1.0) / (n + 2.0)
}

/// Inverse of [`growth_exponent`]: the flux exponent that produces a given `m`.
///
/// Identity: `k = m(n + 1)/n - (m + 1)/2`.
pub fn flux_exponent(n: f64, m: f64) -> f64 {
    m * (n + 1.0) / n - (m + 1.0) / 2.0
}

/// Scales of the similarity substitution `u^n = A t^m f(B r / t^p)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SimilarityScales {
    /// Growth exponent of `u^n`.
    pub m: f64,
    /// Front exponent, `p = (m + 1)/2`. The front sits at `r = alpha t^p / B`.
    pub p: f64,
    /// Amplitude scale `A`.
    pub amplitude: f64,
    /// Inverse length scale `B`. Satisfies `kappa A B^2 = 1`.
    pub inv_length: f64,
}

/// Computes the similarity scales for a physical parameter set.
///
/// `A = (kappa q0^2 n^2)^{n/(n+2)}` and
/// `B = kappa^{-(n+1)/(n+2)} (q0 n)^{-n/(n+2)}`, evaluated in log form so
/// that extreme parameter magnitudes do not overflow intermediates.
pub fn map_parameters(phys: &PhysicalParams) -> Result<SimilarityScales> {
    let checked = PhysicalParams::new(phys.n, phys.k, phys.kappa, phys.q0)?;
    let (n, kappa, q0) = (checked.n, checked.kappa, checked.q0);
    let m = checked.growth_exponent();
    let p = (m + 1.0) / 2.0;
    let lk = kappa.ln();
    let lq = q0.ln();
    let ln_ = n.ln();
    let denom = n + 2.0;
    let amplitude = ((n * lk + 2.0 * n * lq + 2.0 * n * ln_) / denom).exp();
    let inv_length = ((-(n + 1.0) * lk - n * lq - n * ln_) / denom).exp();
    Ok(SimilarityScales {
        m,
        p,
        amplitude,
        inv_length,
    })
}

/// Normalization of the reduced flux condition at `theta = 0`.
///
/// Both conventions express `u^n u_r = -q0 t^k` in similarity variables;
/// they differ in which quantity is set to minus one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FluxConvention {
    /// The flux product itself is normalized: `f(0)^{1/n} f'(0) = -1`.
    Pointwise,
    /// The gradient of the profile power `f^{(n+1)/n}` is normalized to -1,
    /// which is equivalent to `f(0)^{1/n} f'(0) = -n/(n + 1)`.
    PowerGradient,
}

impl FluxConvention {
    /// Additive shift of the flux residual `f(0)^{1/n} f'(0) + shift`.
    pub fn residual_shift(&self, n: f64) -> f64 {
        match self {
            FluxConvention::Pointwise => 1.0,
            FluxConvention::PowerGradient => n / (n + 1.0),
        }
    }

    /// Stable lowercase name used in CSV and JSON output.
    pub fn name(&self) -> &'static str {
        match self {
            FluxConvention::Pointwise => "pointwise",
            FluxConvention::PowerGradient => "power-gradient",
        }
    }
}

impl std::fmt::Display for FluxConvention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for FluxConvention {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "pointwise" => Ok(FluxConvention::Pointwise),
            "power-gradient" => Ok(FluxConvention::PowerGradient),
            other => Err(format!(
                "unknown convention {other:?}; expected \"pointwise\" or \"power-gradient\""
            )),
        }
    }
}

/// Exact front coefficient of the linear profile (m = 1) under a convention.
///
/// Pointwise gives `alpha = n^{-(n+1)/(n+2)}`; power-gradient gives
/// `alpha = (n^{1/n} (n + 1))^{-n/(n+2)}`.
pub fn exact_alpha_m1(n: f64, convention: FluxConvention) -> f64 {
    match convention {
        FluxConvention::Pointwise => (-(n + 1.0) / (n + 2.0) * n.ln()).exp(),
        FluxConvention::PowerGradient => {
            (-(n / (n + 2.0)) * (n.ln() / n + (n + 1.0).ln())).exp()
        }
    }
}

/// Closed form behind the m = 1 reference table: the reciprocal of the
/// power-gradient root, `(n^{1/n} (n + 1))^{n/(n+2)}`.
pub fn tabulated_alpha_m1(n: f64) -> f64 {
    ((n / (n + 2.0)) * (n.ln() / n + (n + 1.0).ln())).exp()
}

/// Ratio of the two m = 1 roots, `alpha_PG / alpha_PW = (n/(n+1))^{n/(n+2)}`.
pub fn convention_alpha_ratio_m1(n: f64) -> f64 {
    ((n / (n + 2.0)) * (n.ln() - (n + 1.0).ln())).exp()
}

/// Reduced profile with a terminating expansion,
/// `f(theta) = c1 (alpha - theta) + c2 (alpha - theta)^2`.
///
/// Instances come from [`exact_profile_linear`] (m = 1, `c2 = 0`) and
/// [`exact_profile_quadratic`] (nm + n + 2m = 0). Both satisfy the reduced
/// equation identically on `(0, alpha)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ClosedFormProfile {
    pub n: f64,
    pub m: f64,
    pub alpha: f64,
    pub c1: f64,
    pub c2: f64,
}

impl ClosedFormProfile {
    /// Profile value. Zero beyond the front.
    pub fn eval_f(&self, theta: f64) -> f64 {
        let s = self.alpha - theta;
        if s <= 0.0 {
            return 0.0;
        }
        s * (self.c1 + self.c2 * s)
    }

    /// Profile slope with respect to theta. Zero beyond the front; the
    /// one-sided slope at the front is `-c1`.
    pub fn eval_df(&self, theta: f64) -> f64 {
        let s = self.alpha - theta;
        if s < 0.0 {
            return 0.0;
        }
        -(self.c1 + 2.0 * self.c2 * s)
    }

    /// Residual of the reduced equation
    /// `f f'' + f'^2/n + ((m+1)/2) theta f' - m f` at one point.
    pub fn ode_residual(&self, theta: f64) -> f64 {
        let f = self.eval_f(theta);
        let df = self.eval_df(theta);
        let d2f = 2.0 * self.c2;
        f * d2f + df * df / self.n + 0.5 * (self.m + 1.0) * theta * df - self.m * f
    }

    /// Residual of the flux condition at the origin under a convention.
    pub fn flux_residual(&self, convention: FluxConvention) -> f64 {
        let f0 = self.eval_f(0.0);
        let df0 = self.eval_df(0.0);
        f0.powf(1.0 / self.n) * df0 + convention.residual_shift(self.n)
    }

    /// Uniform sampling on `[0, alpha]`, endpoints included.
    pub fn sample(&self, samples: usize) -> Result<Profile> {
        if samples < 2 {
            return Err(Error::InvalidParams(format!(
                "samples must be at least 2, got {samples}"
            )));
        }
        let mut thetas = Vec::with_capacity(samples);
        let mut f = Vec::with_capacity(samples);
        let mut df = Vec::with_capacity(samples);
        for i in 0..samples {
            let theta = self.alpha * i as f64 / (samples - 1) as f64;
            thetas.push(theta);
            f.push(self.eval_f(theta));
            df.push(self.eval_df(theta));
        }
        Profile::new(ProfileSource::Exact, self.alpha, thetas, f, df)
    }
}

/// Linear profile `f = alpha n (alpha - theta)`, exact for m = 1.
pub fn exact_profile_linear(n: f64, alpha: f64) -> Result<ClosedFormProfile> {
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::InvalidParams(format!(
            "n must be positive and finite, got {n}"
        )));
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidParams(format!(
            "alpha must be positive and finite, got {alpha}"
        )));
    }
    Ok(ClosedFormProfile {
        n,
        m: 1.0,
        alpha,
        c1: alpha * n,
        c2: 0.0,
    })
}

/// Quadratic profile on the branch nm + n + 2m = 0, i.e. m = -n/(n + 2).
///
/// The expansion terminates at second order with
/// `c1 = n alpha (m+1)/2` and `c2 = n (m-1)/(4(n+1))`. This branch solves
/// the reduced equation but carries no flux normalization of its own, so
/// alpha is a free scale chosen by the caller.
pub fn exact_profile_quadratic(n: f64, m: f64, alpha: f64) -> Result<ClosedFormProfile> {
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::InvalidParams(format!(
            "n must be positive and finite, got {n}"
        )));
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidParams(format!(
            "alpha must be positive and finite, got {alpha}"
        )));
    }
    if (n * m + n + 2.0 * m).abs() > 1e-9 {
        return Err(Error::NoExactForm { n, m });
    }
    Ok(ClosedFormProfile {
        n,
        m,
        alpha,
        c1: 0.5 * n * alpha * (m + 1.0),
        c2: 0.25 * n * (m - 1.0) / (n + 1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn growth_exponent_matches_flux_exponent_inverse() {
        for &(n, k) in &[(1.0, 0.0), (1.0, 1.0), (4.0 / 3.0, 2.0), (2.0, 0.5), (7.0, 0.0)] {
            let m = growth_exponent(n, k);
            assert!(
                close(flux_exponent(n, m), k, 1e-14),
                "round trip failed at n={n}, k={k}"
            );
        }
    }

    #[test]
    fn scales_satisfy_kappa_a_b_squared_identity() {
        let phys = PhysicalParams::new(2.0, 0.5, 3.0, 0.7).unwrap();
        let s = map_parameters(&phys).unwrap();
        assert!(
            close(phys.kappa * s.amplitude * s.inv_length * s.inv_length, 1.0, 1e-12),
            "kappa A B^2 = {}",
            phys.kappa * s.amplitude * s.inv_length * s.inv_length
        );
        assert!(close(s.p, (s.m + 1.0) / 2.0, 1e-15));
    }

    #[test]
    fn unit_parameters_give_unit_scales() {
        let phys = PhysicalParams::new(1.0, 0.0, 1.0, 1.0).unwrap();
        let s = map_parameters(&phys).unwrap();
        assert!(close(s.amplitude, 1.0, 1e-15));
        assert!(close(s.inv_length, 1.0, 1e-15));
        assert!(close(s.m, 1.0 / 3.0, 1e-15));
        assert!(close(s.p, 2.0 / 3.0, 1e-15));
    }

    #[test]
    fn receding_flux_is_rejected() {
        let err = PhysicalParams::new(1.0, -2.5, 1.0, 1.0).unwrap_err();
        assert!(matches!(err, Error::NoAdvancingFront { .. }), "got {err}");
    }

    #[test]
    fn invalid_ranges_are_rejected() {
        assert!(PhysicalParams::new(0.0, 0.0, 1.0, 1.0).is_err());
        assert!(PhysicalParams::new(1.0, 0.0, -1.0, 1.0).is_err());
        assert!(PhysicalParams::new(1.0, 0.0, 1.0, 0.0).is_err());
        assert!(PhysicalParams::new(f64::NAN, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn exact_alpha_values_at_n_equals_one() {
        assert!(close(exact_alpha_m1(1.0, FluxConvention::Pointwise), 1.0, 1e-15));
        assert!(close(
            exact_alpha_m1(1.0, FluxConvention::PowerGradient),
            2f64.powf(-1.0 / 3.0),
            1e-15
        ));
        assert!(close(tabulated_alpha_m1(1.0), 2f64.powf(1.0 / 3.0), 1e-15));
    }

    #[test]
    fn tabulated_value_is_reciprocal_of_power_gradient_root() {
        for &n in &[1.0, 4.0 / 3.0, 2.0, 3.0, 7.0] {
            let prod = tabulated_alpha_m1(n) * exact_alpha_m1(n, FluxConvention::PowerGradient);
            assert!(close(prod, 1.0, 1e-14), "product {prod} at n={n}");
        }
    }

    #[test]
    fn convention_ratio_matches_closed_forms() {
        for &n in &[1.0, 2.0, 5.0, 6.5] {
            let direct = exact_alpha_m1(n, FluxConvention::PowerGradient)
                / exact_alpha_m1(n, FluxConvention::Pointwise);
            assert!(
                close(direct, convention_alpha_ratio_m1(n), 1e-14),
                "ratio mismatch at n={n}"
            );
        }
    }

    #[test]
    fn linear_profile_solves_reduced_equation() {
        let p = exact_profile_linear(2.0, 0.7).unwrap();
        for i in 0..50 {
            let theta = 0.7 * i as f64 / 49.0;
            assert!(
                p.ode_residual(theta).abs() < 1e-14,
                "residual {} at theta {theta}",
                p.ode_residual(theta)
            );
        }
    }

    #[test]
    fn linear_profile_flux_residual_vanishes_at_exact_alpha() {
        for &n in &[1.0, 2.0, 3.0] {
            for conv in [FluxConvention::Pointwise, FluxConvention::PowerGradient] {
                let alpha = exact_alpha_m1(n, conv);
                let p = exact_profile_linear(n, alpha).unwrap();
                assert!(
                    p.flux_residual(conv).abs() < 1e-13,
                    "residual {} at n={n} conv={conv}",
                    p.flux_residual(conv)
                );
            }
        }
    }

    #[test]
    fn quadratic_profile_solves_reduced_equation() {
        let n = 2.0;
        let m = -n / (n + 2.0);
        let p = exact_profile_quadratic(n, m, 1.3).unwrap();
        for i in 0..50 {
            let theta = 1.3 * i as f64 / 49.0;
            assert!(
                p.ode_residual(theta).abs() < 1e-13,
                "residual {} at theta {theta}",
                p.ode_residual(theta)
            );
        }
    }

    #[test]
    fn quadratic_profile_rejects_off_branch_parameters() {
        let err = exact_profile_quadratic(2.0, 0.3, 1.0).unwrap_err();
        assert!(matches!(err, Error::NoExactForm { .. }));
    }

    #[test]
    fn front_slope_equals_minus_c1() {
        let p = exact_profile_linear(1.5, 0.9).unwrap();
        assert!(close(p.eval_df(p.alpha), -p.c1, 1e-15));
        assert_eq!(p.eval_f(p.alpha), 0.0);
        assert_eq!(p.eval_f(p.alpha + 0.5), 0.0);
    }

    #[test]
    fn convention_parsing_round_trips() {
        for conv in [FluxConvention::Pointwise, FluxConvention::PowerGradient] {
            let parsed: FluxConvention = conv.name().parse().unwrap();
            assert_eq!(parsed, conv);
        }
        assert!("midpoint".parse::<FluxConvention>().is_err());
    }
}
