//! Inward shooting on the reduced boundary value problem.
//!
//! The reduced equation is singular at the front, where f vanishes, so
//! integration starts a small offset inside the front with values seeded
//! from the front expansion and marches to the origin. The outer iteration
//! adjusts the front position until the flux condition holds at theta = 0.
//! This path trusts the expansion only in an O(offset) neighborhood of the
//! front and is therefore the reference the truncated expansion is judged
//! against.

use crate::alpha::{solve_alpha, RESIDUAL_TOLERANCE, SCAN_HI, SCAN_LO, SCAN_POINTS};
use crate::error::{Error, Result};
use crate::ode::{integrate, OdeOptions, OdeSolution, State};
use crate::profile::{Profile, ProfileSource};
use crate::rootfind::{geometric_scan, refine_root};
use crate::series::{build_series, FrontSeries};
use crate::similarity::FluxConvention;
use serde::Serialize;

/// Controls for the shooting path.
#[derive(Debug, Clone, Copy)]
pub struct ShootConfig {
    /// Seed offset as a fraction of alpha; integration starts at
    /// `theta = alpha (1 - seed_offset)`.
    pub seed_offset: f64,
    /// Expansion order used for seeding.
    pub seed_order: usize,
    /// Relative tolerance of the inner integrator.
    pub rtol: f64,
    /// Absolute tolerance of the inner integrator.
    pub atol: f64,
    /// Front-position tolerance of the outer iteration.
    pub alpha_tol: f64,
    /// Sample count of exported profiles.
    pub samples: usize,
    pub max_steps: usize,
}

impl Default for ShootConfig {
    fn default() -> Self {
        Self {
            seed_offset: 0.01,
            seed_order: 5,
            rtol: 1e-10,
            atol: 1e-12,
            alpha_tol: 1e-9,
            samples: 401,
            max_steps: 100_000,
        }
    }
}

impl ShootConfig {
    fn validate(&self) -> Result<()> {
        if !(self.seed_offset > 0.0 && self.seed_offset < 0.5) {
            return Err(Error::InvalidParams(format!(
                "seed offset must lie in (0, 0.5), got {}",
                self.seed_offset
            )));
        }
        if !(self.rtol > 0.0 && self.atol > 0.0 && self.alpha_tol > 0.0) {
            return Err(Error::InvalidParams(
                "integrator and alpha tolerances must be positive".into(),
            ));
        }
        if self.samples < 2 {
            return Err(Error::InvalidParams(format!(
                "samples must be at least 2, got {}",
                self.samples
            )));
        }
        Ok(())
    }
}

/// Raw outcome of one inward integration at a fixed front position.
#[derive(Debug)]
pub struct ShootOutcome {
    /// Profile value at the origin.
    pub f0: f64,
    /// Profile slope at the origin.
    pub df0: f64,
    /// Dense trajectory on `[0, theta_seed]`.
    pub solution: OdeSolution,
    /// Seed point where the expansion hands over to the integrator.
    pub theta_seed: f64,
    /// Expansion used on `[theta_seed, alpha]`.
    pub series: FrontSeries,
}

/// Integrates the reduced equation from the front to the origin.
pub fn integrate_from_front(n: f64, m: f64, alpha: f64, cfg: &ShootConfig) -> Result<ShootOutcome> {
    cfg.validate()?;
    let series = build_series(n, m, alpha, cfg.seed_order)?;
    let theta_seed = alpha * (1.0 - cfg.seed_offset);
    let y0: State = [series.eval_f(theta_seed), series.eval_df(theta_seed)];
    if y0[0] <= 0.0 {
        return Err(Error::NonPhysicalProfile {
            alpha,
            f0: y0[0],
        });
    }
    let rhs = move |theta: f64, y: &State| -> Option<State> {
        let (f, df) = (y[0], y[1]);
        if !(f > 0.0) || !f.is_finite() || !df.is_finite() {
            return None;
        }
        Some([
            df,
            (m * f - df * df / n - 0.5 * (m + 1.0) * theta * df) / f,
        ])
    };
    let opts = OdeOptions {
        rtol: cfg.rtol,
        atol: cfg.atol,
        h0: None,
        max_steps: cfg.max_steps,
    };
    let solution = integrate(rhs, theta_seed, 0.0, y0, &opts)?;
    let [f0, df0] = solution.y_end;
    Ok(ShootOutcome {
        f0,
        df0,
        solution,
        theta_seed,
        series,
    })
}

/// Flux-condition residual of the shot profile at a fixed front position.
pub fn shoot_residual(
    n: f64,
    m: f64,
    alpha: f64,
    convention: FluxConvention,
    cfg: &ShootConfig,
) -> Result<f64> {
    let out = integrate_from_front(n, m, alpha, cfg)?;
    if out.f0 <= 0.0 {
        return Err(Error::NonPhysicalProfile {
            alpha,
            f0: out.f0,
        });
    }
    Ok(out.f0.powf(1.0 / n) * out.df0 + convention.residual_shift(n))
}

/// Samples the shot profile on a uniform grid over `[0, alpha]`: expansion
/// values outside the seed point, dense integrator values inside.
pub fn shooting_profile(n: f64, m: f64, alpha: f64, cfg: &ShootConfig) -> Result<Profile> {
    let out = integrate_from_front(n, m, alpha, cfg)?;
    let mut thetas = Vec::with_capacity(cfg.samples);
    let mut f = Vec::with_capacity(cfg.samples);
    let mut df = Vec::with_capacity(cfg.samples);
    for i in 0..cfg.samples {
        let theta = alpha * i as f64 / (cfg.samples - 1) as f64;
        let (fv, dfv) = if theta >= out.theta_seed {
            (out.series.eval_f(theta), out.series.eval_df(theta))
        } else {
            let y = out.solution.eval(theta);
            (y[0], y[1])
        };
        thetas.push(theta);
        f.push(fv.max(0.0));
        df.push(dfv);
    }
    Profile::new(ProfileSource::Shooting, alpha, thetas, f, df)
}

/// Outcome of the outer front-position iteration.
#[derive(Debug, Clone, Serialize)]
pub struct ShootReport {
    pub n: f64,
    pub m: f64,
    pub convention: FluxConvention,
    /// Converged front position.
    pub alpha: f64,
    pub residual_at_root: f64,
    /// Expansion root used to center the scan window, when one exists.
    pub seed_alpha: Option<f64>,
    pub bracket: [f64; 2],
    pub iterations: u32,
}

/// Solves the boundary value problem by shooting: finds the front position
/// at which the integrated profile meets the flux condition.
///
/// The scan window is centered on the expansion root when the expansion
/// solver converges, and falls back to the full default range otherwise.
pub fn shoot_alpha(
    n: f64,
    m: f64,
    convention: FluxConvention,
    cfg: &ShootConfig,
) -> Result<ShootReport> {
    cfg.validate()?;
    let residual = |alpha: f64| shoot_residual(n, m, alpha, convention, cfg).ok();
    let seed_alpha = solve_alpha(n, m, cfg.seed_order, convention, 1e-10)
        .ok()
        .map(|r| r.alpha);
    let mut scan = None;
    if let Some(a0) = seed_alpha {
        let windowed = geometric_scan(a0 / 3.0, 3.0 * a0, 48, residual);
        if !windowed.brackets.is_empty() {
            scan = Some(windowed);
        }
    }
    let scan = match scan {
        Some(s) => s,
        None => {
            let full = geometric_scan(SCAN_LO, SCAN_HI, SCAN_POINTS, residual);
            if full.brackets.is_empty() {
                return Err(Error::NoSignChange {
                    lo: SCAN_LO,
                    hi: SCAN_HI,
                    signs: full.signs,
                });
            }
            full
        }
    };
    let bracket = scan.brackets[0];
    let root = refine_root(bracket, cfg.alpha_tol, residual).ok_or(Error::NoSignChange {
        lo: bracket.lo,
        hi: bracket.hi,
        signs: scan.signs.clone(),
    })?;
    if root.fx.abs() > RESIDUAL_TOLERANCE.max(10.0 * cfg.rtol) {
        return Err(Error::RootNotConverged {
            alpha: root.x,
            residual: root.fx,
        });
    }
    Ok(ShootReport {
        n,
        m,
        convention,
        alpha: root.x,
        residual_at_root: root.fx,
        seed_alpha,
        bracket: [bracket.lo, bracket.hi],
        iterations: root.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::similarity::{exact_alpha_m1, exact_profile_quadratic, FluxConvention::*};

    #[test]
    fn linear_case_root_is_recovered() {
        let cfg = ShootConfig::default();
        let report = shoot_alpha(1.0, 1.0, Pointwise, &cfg).unwrap();
        assert!(
            (report.alpha - 1.0).abs() < 1e-7,
            "alpha = {:.10}",
            report.alpha
        );
        let pg = shoot_alpha(1.0, 1.0, PowerGradient, &cfg).unwrap();
        assert!(
            (pg.alpha - 2f64.powf(-1.0 / 3.0)).abs() < 1e-7,
            "alpha = {:.10}",
            pg.alpha
        );
    }

    #[test]
    fn linear_case_profile_matches_closed_form() {
        let cfg = ShootConfig::default();
        let n = 2.0;
        let alpha = exact_alpha_m1(n, Pointwise);
        let profile = shooting_profile(n, 1.0, alpha, &cfg).unwrap();
        let mut worst: f64 = 0.0;
        for (&theta, &fv) in profile.thetas().iter().zip(profile.f()) {
            let exact = alpha * n * (alpha - theta);
            worst = worst.max((fv - exact).abs());
        }
        assert!(worst < 1e-8, "worst deviation {worst:.3e}");
    }

    #[test]
    fn quadratic_branch_is_reproduced_through_the_seed() {
        let cfg = ShootConfig::default();
        let (n, m, alpha) = (2.0, -0.5, 1.0);
        let closed = exact_profile_quadratic(n, m, alpha).unwrap();
        let profile = shooting_profile(n, m, alpha, &cfg).unwrap();
        let mut worst: f64 = 0.0;
        for (&theta, &fv) in profile.thetas().iter().zip(profile.f()) {
            worst = worst.max((fv - closed.eval_f(theta)).abs());
        }
        assert!(worst < 1e-8, "worst deviation {worst:.3e}");
    }

    #[test]
    fn reference_case_roots_under_both_conventions() {
        let cfg = ShootConfig::default();
        let pw = shoot_alpha(1.0, 1.0 / 3.0, Pointwise, &cfg).unwrap();
        assert!(
            (pw.alpha - 1.4819032291).abs() < 1e-6,
            "pointwise alpha = {:.10}",
            pw.alpha
        );
        let pg = shoot_alpha(1.0, 1.0 / 3.0, PowerGradient, &cfg).unwrap();
        assert!(
            (pg.alpha - 1.1761874).abs() < 1e-5,
            "power-gradient alpha = {:.10}",
            pg.alpha
        );
        assert!(pw.seed_alpha.is_some());
    }

    #[test]
    fn seed_offset_choice_barely_moves_the_root() {
        let mut cfg = ShootConfig::default();
        let a1 = shoot_alpha(1.0, 1.0 / 3.0, Pointwise, &cfg).unwrap().alpha;
        cfg.seed_offset = 0.005;
        let a2 = shoot_alpha(1.0, 1.0 / 3.0, Pointwise, &cfg).unwrap().alpha;
        assert!(
            (a1 - a2).abs() < 1e-6,
            "offset sensitivity {:.3e}",
            (a1 - a2).abs()
        );
    }

    #[test]
    fn tightening_integrator_tolerance_barely_moves_boundary_values() {
        let alpha = 1.4819032291;
        let mut cfg = ShootConfig::default();
        cfg.rtol = 1e-8;
        cfg.atol = 1e-10;
        let loose = integrate_from_front(1.0, 1.0 / 3.0, alpha, &cfg).unwrap();
        cfg.rtol = 1e-11;
        cfg.atol = 1e-13;
        let tight = integrate_from_front(1.0, 1.0 / 3.0, alpha, &cfg).unwrap();
        assert!(
            (loose.f0 - tight.f0).abs() < 1e-7,
            "f0 moved by {:.3e}",
            (loose.f0 - tight.f0).abs()
        );
    }

    #[test]
    fn residual_is_monotone_in_alpha() {
        // Rescaling maps any front solution onto any other, so the flux
        // residual is 1 - c alpha^{(n+2)/n}: strictly decreasing, one root.
        let cfg = ShootConfig::default();
        let mut prev = f64::INFINITY;
        for alpha in [0.3, 0.8, 1.4819, 2.2, 3.5] {
            let r = shoot_residual(1.0, 1.0 / 3.0, alpha, Pointwise, &cfg).unwrap();
            assert!(r < prev, "residual {r} at alpha {alpha} did not decrease");
            prev = r;
        }
        assert!(prev < 0.0, "residual never crossed zero");
    }

    #[test]
    fn quadratic_branch_has_no_pointwise_root() {
        let cfg = ShootConfig::default();
        let err = shoot_alpha(2.0, -0.5, Pointwise, &cfg).unwrap_err();
        assert!(matches!(err, Error::NoSignChange { .. }), "got {err}");
    }

    #[test]
    fn shot_profile_decreases_monotonically() {
        let cfg = ShootConfig::default();
        let report = shoot_alpha(1.0, 1.0 / 3.0, Pointwise, &cfg).unwrap();
        let profile = shooting_profile(1.0, 1.0 / 3.0, report.alpha, &cfg).unwrap();
        for w in profile.f().windows(2) {
            assert!(w[1] <= w[0] + 1e-12, "profile not monotone: {} -> {}", w[0], w[1]);
        }
    }

    #[test]
    fn invalid_config_is_rejected() {
        let mut cfg = ShootConfig::default();
        cfg.seed_offset = 0.9;
        assert!(shoot_alpha(1.0, 1.0, Pointwise, &cfg).is_err());
    }
}
