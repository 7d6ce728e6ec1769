//! Finite-difference solver for the physical problem.
//!
//! Solves `u_t = kappa (u^n u_r)_r` on a uniform vertex grid with the
//! boundary inflow `-kappa u^n u_r = kappa q0 t^k` imposed exactly on the
//! left face, a homogeneous Dirichlet condition on the right, and zero
//! initial data. The nonlinear flux is written through the conserved
//! variable `w = u^{n+1}/(n+1)`, so face fluxes are plain differences of w
//! and the scheme telescopes: the discrete mass equals the time-integrated
//! boundary inflow up to Newton tolerance. Time stepping is a theta-scheme
//! (fully implicit by default) with Newton iteration and a tridiagonal
//! solve per iteration.

use crate::error::{Error, Result};
use crate::profile::{Profile, ProfileSource};
use crate::similarity::{PhysicalParams, SimilarityScales};
use serde::Serialize;
use std::io::{self, Write};

/// Grid, stepping, and iteration controls.
#[derive(Debug, Clone, Serialize)]
pub struct PdeConfig {
    pub phys: PhysicalParams,
    /// Right edge of the grid. The front must stay inside it.
    pub domain_length: f64,
    /// Cell count; the grid has `nr + 1` nodes.
    pub nr: usize,
    pub t_end: f64,
    /// First time step; the controller ramps it up from here.
    pub dt_initial: f64,
    /// Time weighting: 1 is backward Euler, 0.5 is trapezoidal.
    pub time_weight: f64,
    /// Times at which the field is recorded. Strictly increasing, within
    /// `(0, t_end]`; `t_end` is recorded whether listed or not.
    pub snapshot_times: Vec<f64>,
    /// Target relative change of the field per step.
    pub eta_target: f64,
    pub newton_tol: f64,
    pub max_newton: usize,
    /// Floor under u in the Jacobian conductivity, keeping Newton directions
    /// finite where the field degenerates. The residual never uses it.
    pub jacobian_floor: f64,
}

impl PdeConfig {
    /// Defaults tuned for the validation runs. The step-size ceiling is
    /// coupled to the grid: dt never exceeds `t_end / (4 nr)`, so refining
    /// the grid also refines the boundary-flux quadrature in time.
    pub fn new(phys: PhysicalParams, domain_length: f64, nr: usize, t_end: f64) -> Self {
        Self {
            phys,
            domain_length,
            nr,
            t_end,
            dt_initial: 1e-6,
            time_weight: 1.0,
            snapshot_times: Vec::new(),
            eta_target: 0.02,
            newton_tol: 1e-12,
            max_newton: 30,
            jacobian_floor: 1e-10,
        }
    }

    /// Step-size ceiling implied by the grid.
    pub fn dt_max(&self) -> f64 {
        self.t_end / (4.0 * self.nr as f64)
    }

    fn validate(&self) -> Result<()> {
        PhysicalParams::new(self.phys.n, self.phys.k, self.phys.kappa, self.phys.q0)?;
        if self.phys.k < 0.0 {
            return Err(Error::InvalidParams(format!(
                "grid solver requires k >= 0, got {}",
                self.phys.k
            )));
        }
        if !(self.domain_length > 0.0) || !self.domain_length.is_finite() {
            return Err(Error::InvalidParams(format!(
                "domain length must be positive and finite, got {}",
                self.domain_length
            )));
        }
        if self.nr < 8 {
            return Err(Error::InvalidParams(format!(
                "grid needs at least 8 cells, got {}",
                self.nr
            )));
        }
        if !(self.t_end > 0.0) || !self.t_end.is_finite() {
            return Err(Error::InvalidParams(format!(
                "t_end must be positive and finite, got {}",
                self.t_end
            )));
        }
        if !(self.dt_initial > 0.0) || self.dt_initial >= self.t_end {
            return Err(Error::InvalidParams(format!(
                "dt_initial must lie in (0, t_end), got {}",
                self.dt_initial
            )));
        }
        if !(0.0..=1.0).contains(&self.time_weight) {
            return Err(Error::InvalidParams(format!(
                "time weight must lie in [0, 1], got {}",
                self.time_weight
            )));
        }
        if !(self.eta_target > 0.0) || !(self.newton_tol > 0.0) {
            return Err(Error::InvalidParams(
                "eta target and Newton tolerance must be positive".into(),
            ));
        }
        for w in self.snapshot_times.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidParams(
                    "snapshot times must increase strictly".into(),
                ));
            }
        }
        if let (Some(&first), Some(&last)) =
            (self.snapshot_times.first(), self.snapshot_times.last())
        {
            if !(first > 0.0) || last > self.t_end * (1.0 + 1e-12) {
                return Err(Error::InvalidParams(
                    "snapshot times must lie in (0, t_end]".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Counters of one run.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct RunStats {
    pub steps: usize,
    pub newton_iterations: usize,
    pub rejected_steps: usize,
    pub dt_smallest: f64,
    pub dt_largest: f64,
    /// Largest negative value clipped to zero after a Newton solve.
    pub max_clamp: f64,
}

/// Recorded snapshots of one run.
#[derive(Debug, Clone, Serialize)]
pub struct GridSolution {
    pub config: PdeConfig,
    /// Node positions.
    pub r: Vec<f64>,
    /// Recorded times, ascending; the last one is `t_end`.
    pub times: Vec<f64>,
    /// Field at each recorded time.
    pub snapshots: Vec<Vec<f64>>,
    /// Cumulative boundary inflow at each recorded time, using the same
    /// quadrature the scheme itself applied.
    pub injected: Vec<f64>,
    pub stats: RunStats,
}

impl GridSolution {
    /// Index of the recorded time closest to t; errors when no recorded
    /// time is within a relative 1e-9.
    pub fn snapshot_index(&self, t: f64) -> Result<usize> {
        let mut best = 0;
        let mut best_dev = f64::INFINITY;
        for (i, &ti) in self.times.iter().enumerate() {
            let dev = (ti - t).abs();
            if dev < best_dev {
                best_dev = dev;
                best = i;
            }
        }
        if best_dev > 1e-9 * self.config.t_end.max(t.abs()) {
            return Err(Error::InvalidParams(format!(
                "no snapshot recorded at t = {t}; recorded times: {:?}",
                self.times
            )));
        }
        Ok(best)
    }

    /// Trapezoid mass of one snapshot. Equals the sum of cell volumes times
    /// node values on this vertex grid.
    pub fn discrete_mass(&self, idx: usize) -> f64 {
        let u = &self.snapshots[idx];
        let dr = self.r[1] - self.r[0];
        let interior: f64 = u[1..u.len() - 1].iter().sum();
        dr * (0.5 * u[0] + interior + 0.5 * u[u.len() - 1])
    }

    /// Front position of one snapshot: the threshold crossing of the last
    /// node above threshold, linearly interpolated.
    pub fn front_position(&self, idx: usize, threshold: f64) -> Option<f64> {
        front_position_numeric(&self.r, &self.snapshots[idx], threshold)
    }

    /// Snapshot rescaled into similarity variables,
    /// `f(theta) = u^n / (A t^m)` on `theta = B r / t^p`. Slopes come from
    /// centered differences. The support estimate uses a threshold of
    /// 1e-4 of the peak.
    pub fn rescaled_profile(&self, idx: usize, scales: &SimilarityScales) -> Result<Profile> {
        let t = self.times[idx];
        let u = &self.snapshots[idx];
        let n = self.config.phys.n;
        let peak = u.iter().copied().fold(0.0, f64::max);
        if peak <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "snapshot at t = {t} is identically zero"
            )));
        }
        let r_front = self
            .front_position(idx, 1e-4 * peak)
            .unwrap_or(self.r[self.r.len() - 1]);
        let t_pow_p = t.powf(scales.p);
        let t_pow_m = t.powf(scales.m);
        let alpha = scales.inv_length * r_front / t_pow_p;
        // Keep one zero node past the front so the support edge is sampled.
        let last_pos = u.iter().rposition(|&v| v > 0.0).unwrap_or(0);
        let hi = (last_pos + 2).min(u.len());
        let mut thetas = Vec::with_capacity(hi);
        let mut f = Vec::with_capacity(hi);
        for j in 0..hi {
            thetas.push(scales.inv_length * self.r[j] / t_pow_p);
            f.push(u[j].powf(n) / (scales.amplitude * t_pow_m));
        }
        let mut df = vec![0.0; f.len()];
        for j in 0..f.len() {
            let (a, b) = (j.saturating_sub(1), (j + 1).min(f.len() - 1));
            df[j] = (f[b] - f[a]) / (thetas[b] - thetas[a]);
        }
        Profile::new(ProfileSource::PdeRescaled, alpha, thetas, f, df)
    }

    /// Writes `t,r,u` rows for every recorded snapshot.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "t,r,u")?;
        for (ti, u) in self.times.iter().zip(&self.snapshots) {
            for (rj, uj) in self.r.iter().zip(u) {
                writeln!(out, "{ti:.12e},{rj:.12e},{uj:.12e}")?;
            }
        }
        Ok(())
    }
}

/// Threshold crossing of a sampled field: position where the field falls
/// through `threshold`, linearly interpolated after the last node above it.
/// None when the field never exceeds the threshold.
pub fn front_position_numeric(r: &[f64], u: &[f64], threshold: f64) -> Option<f64> {
    let j = u.iter().rposition(|&v| v > threshold)?;
    if j + 1 >= u.len() {
        return Some(r[j]);
    }
    let denom = u[j] - u[j + 1];
    if denom <= 0.0 {
        return Some(r[j]);
    }
    Some(r[j] + (u[j] - threshold) / denom * (r[j + 1] - r[j]))
}

/// Largest relative mismatch between the trapezoid mass and the analytic
/// inflow integral `kappa q0 t^{k+1}/(k+1)` over recorded snapshots.
/// Snapshots in the startup window `t <= 10 dt_initial` are skipped.
pub fn mass_balance_error(sol: &GridSolution) -> Result<f64> {
    let phys = &sol.config.phys;
    let mut worst: Option<f64> = None;
    for (idx, &t) in sol.times.iter().enumerate() {
        if t <= 10.0 * sol.config.dt_initial {
            continue;
        }
        let exact = phys.kappa * phys.q0 * t.powf(phys.k + 1.0) / (phys.k + 1.0);
        let got = sol.discrete_mass(idx);
        let err = (got - exact).abs() / exact;
        worst = Some(worst.map_or(err, |w: f64| w.max(err)));
    }
    worst.ok_or_else(|| {
        Error::InvalidParams("no snapshot outside the startup window".into())
    })
}

/// Runs the grid solver.
pub fn pde_solve(config: &PdeConfig) -> Result<GridSolution> {
    config.validate()?;
    let phys = &config.phys;
    let (n, k, kappa, q0) = (phys.n, phys.k, phys.kappa, phys.q0);
    let nr = config.nr;
    let dr = config.domain_length / nr as f64;
    let theta_w = config.time_weight;
    let dt_cap = config.dt_max();
    let boundary_flux = |t: f64| -kappa * q0 * t.powf(k);

    // Targets the stepper must land on exactly.
    let mut targets = config.snapshot_times.clone();
    if targets
        .last()
        .map_or(true, |&last| last < config.t_end * (1.0 - 1e-12))
    {
        targets.push(config.t_end);
    }

    let r: Vec<f64> = (0..=nr).map(|j| j as f64 * dr).collect();
    let mut u = vec![0.0; nr + 1];
    let mut t = 0.0;
    let mut dt = config.dt_initial.min(dt_cap);
    let mut injected_total = 0.0;

    let mut times = Vec::with_capacity(targets.len());
    let mut snapshots = Vec::with_capacity(targets.len());
    let mut injected = Vec::with_capacity(targets.len());
    let mut stats = RunStats {
        dt_smallest: f64::INFINITY,
        ..Default::default()
    };

    // Work arrays reused across steps.
    let mut w_old = vec![0.0; nr + 1];
    let mut w_new = vec![0.0; nr + 1];
    let mut wp = vec![0.0; nr + 1];
    let mut resid = vec![0.0; nr + 1];
    let mut cp = vec![0.0; nr + 1];
    let mut dp = vec![0.0; nr + 1];
    let w_of = |v: f64| v.max(0.0).powf(n + 1.0) / (n + 1.0);

    let mut target_idx = 0;
    while target_idx < targets.len() {
        let target = targets[target_idx];
        if t >= target {
            // Degenerate spacing; record and move on.
            times.push(target);
            snapshots.push(u.clone());
            injected.push(injected_total);
            target_idx += 1;
            continue;
        }
        let tn = (t + dt).min(target);
        let dt_eff = tn - t;
        let uo = u.clone();
        for j in 0..=nr {
            w_old[j] = w_of(uo[j]);
        }
        let flux_old = boundary_flux(t);
        let flux_new = boundary_flux(tn);

        let mut un = uo.clone();
        let mut converged = false;
        for _ in 0..config.max_newton {
            stats.newton_iterations += 1;
            for j in 0..=nr {
                w_new[j] = w_of(un[j]);
            }
            // Residual. Face flux at j+1/2 is kappa (w_{j+1} - w_j)/dr; the
            // left boundary face carries the imposed inflow exactly.
            let g_new = |j: usize| -> f64 {
                if j == 0 {
                    flux_new
                } else {
                    kappa * (w_new[j] - w_new[j - 1]) / dr
                }
            };
            let g_old = |j: usize| -> f64 {
                if j == 0 {
                    flux_old
                } else {
                    kappa * (w_old[j] - w_old[j - 1]) / dr
                }
            };
            let blend = |j: usize| theta_w * (g_new(j + 1) - g_new(j))
                + (1.0 - theta_w) * (g_old(j + 1) - g_old(j));
            resid[0] = un[0] - uo[0] - (2.0 * dt_eff / dr) * blend(0);
            for j in 1..nr {
                resid[j] = un[j] - uo[j] - (dt_eff / dr) * blend(j);
            }
            resid[nr] = un[nr];

            for j in 0..=nr {
                wp[j] = un[j].max(config.jacobian_floor).powf(n);
            }
            let c = dt_eff * theta_w * kappa / (dr * dr);
            // Tridiagonal Newton system, solved by the Thomas sweep.
            let diag0 = 1.0 + 2.0 * c * wp[0];
            let upper0 = -2.0 * c * wp[1];
            cp[0] = upper0 / diag0;
            dp[0] = resid[0] / diag0;
            for j in 1..nr {
                let lower = -c * wp[j - 1];
                let diag = 1.0 + 2.0 * c * wp[j];
                let upper = -c * wp[j + 1];
                let denom = diag - lower * cp[j - 1];
                cp[j] = upper / denom;
                dp[j] = (resid[j] - lower * dp[j - 1]) / denom;
            }
            let denom_last = 1.0;
            dp[nr] = resid[nr] / denom_last;
            let mut dx_last = dp[nr];
            un[nr] -= dx_last;
            let mut dx_max = dx_last.abs();
            for j in (0..nr).rev() {
                dx_last = dp[j] - cp[j] * dx_last;
                un[j] -= dx_last;
                dx_max = dx_max.max(dx_last.abs());
            }
            let scale = un.iter().fold(1.0f64, |a, &v| a.max(v.abs()));
            if dx_max <= config.newton_tol * scale {
                converged = true;
                break;
            }
        }
        if !converged {
            stats.rejected_steps += 1;
            dt *= 0.5;
            if dt < 1e-15 * config.t_end {
                return Err(Error::NewtonDivergence { t, dt });
            }
            continue;
        }

        let peak = un.iter().copied().fold(0.0, f64::max);
        let min_u = un.iter().copied().fold(f64::INFINITY, f64::min);
        if min_u < -1e-8 * peak.max(1e-300) {
            return Err(Error::PositivityViolation { t: tn, min_u });
        }
        for v in un.iter_mut() {
            if *v < 0.0 {
                stats.max_clamp = stats.max_clamp.max(-*v);
                *v = 0.0;
            }
        }
        if peak > 0.0 && un[nr - 1] > 1e-8 * peak {
            return Err(Error::FrontEscape { t: tn });
        }

        let eta = un
            .iter()
            .zip(&uo)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max)
            / peak.max(1e-300);
        injected_total += dt_eff
            * (theta_w * (-flux_new) + (1.0 - theta_w) * (-flux_old));
        t = tn;
        u = un;
        stats.steps += 1;
        stats.dt_smallest = stats.dt_smallest.min(dt_eff);
        stats.dt_largest = stats.dt_largest.max(dt_eff);
        if tn == target {
            times.push(target);
            snapshots.push(u.clone());
            injected.push(injected_total);
            target_idx += 1;
        }
        let fac = if eta < config.eta_target {
            1.2
        } else {
            (config.eta_target / eta).max(0.5)
        };
        dt = (dt * fac).min(dt_cap);
    }

    Ok(GridSolution {
        config: config.clone(),
        r,
        times,
        snapshots,
        injected,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::similarity::PhysicalParams;

    fn base_config(n: f64, k: f64, domain: f64, nr: usize, t_end: f64) -> PdeConfig {
        let phys = PhysicalParams::new(n, k, 1.0, 1.0).unwrap();
        PdeConfig::new(phys, domain, nr, t_end)
    }

    #[test]
    fn constant_flux_mass_is_exact_to_newton_tolerance() {
        let mut config = base_config(1.0, 0.0, 1.8, 100, 0.5);
        config.snapshot_times = vec![0.25, 0.5];
        let sol = pde_solve(&config).unwrap();
        let err = mass_balance_error(&sol).unwrap();
        assert!(err < 1e-8, "mass balance error {err:.3e}");
    }

    #[test]
    fn discrete_mass_equals_injected_inflow() {
        let mut config = base_config(2.0, 0.5, 1.4, 120, 1.0);
        config.snapshot_times = vec![0.5, 1.0];
        let sol = pde_solve(&config).unwrap();
        for idx in 0..sol.times.len() {
            let mass = sol.discrete_mass(idx);
            let inflow = sol.injected[idx];
            assert!(
                (mass - inflow).abs() <= 1e-9 * inflow.max(1e-12),
                "telescoping broken at t = {}: mass {mass:.12e} vs inflow {inflow:.12e}",
                sol.times[idx]
            );
        }
    }

    #[test]
    fn solution_stays_nonnegative_with_compact_support() {
        let config = base_config(1.0, 0.0, 2.2, 80, 0.6);
        let sol = pde_solve(&config).unwrap();
        let u = sol.snapshots.last().unwrap();
        assert!(u.iter().all(|&v| v >= 0.0));
        // The tail beyond the front stays exactly zero.
        assert_eq!(u[sol.r.len() - 1], 0.0);
        assert_eq!(u[sol.r.len() - 2], 0.0);
        let front = sol.front_position(sol.times.len() - 1, 1e-6).unwrap();
        assert!(front < 0.8 * config.domain_length);
    }

    #[test]
    fn snapshot_times_are_recorded_exactly() {
        let mut config = base_config(1.0, 0.0, 2.0, 64, 0.5);
        config.snapshot_times = vec![0.1, 0.3, 0.5];
        let sol = pde_solve(&config).unwrap();
        assert_eq!(sol.times, vec![0.1, 0.3, 0.5]);
        assert_eq!(sol.snapshots.len(), 3);
        assert!(sol.snapshot_index(0.3).unwrap() == 1);
        assert!(sol.snapshot_index(0.2).is_err());
    }

    #[test]
    fn t_end_is_always_recorded() {
        let config = base_config(1.0, 0.0, 2.0, 64, 0.4);
        let sol = pde_solve(&config).unwrap();
        assert_eq!(sol.times, vec![0.4]);
    }

    #[test]
    fn front_advances_monotonically() {
        let mut config = base_config(2.0, 0.5, 1.5, 100, 1.0);
        config.snapshot_times = vec![0.25, 0.5, 0.75, 1.0];
        let sol = pde_solve(&config).unwrap();
        let mut prev = 0.0;
        for idx in 0..sol.times.len() {
            let peak = sol.snapshots[idx].iter().copied().fold(0.0, f64::max);
            let front = sol.front_position(idx, 1e-4 * peak).unwrap();
            assert!(front > prev, "front did not advance at t = {}", sol.times[idx]);
            prev = front;
        }
    }

    #[test]
    fn short_domain_raises_front_escape() {
        let config = base_config(1.0, 0.0, 0.4, 64, 1.0);
        let err = pde_solve(&config).unwrap_err();
        assert!(matches!(err, Error::FrontEscape { .. }), "got {err}");
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let good = base_config(1.0, 0.0, 1.0, 64, 0.5);
        let mut c = good.clone();
        c.nr = 4;
        assert!(pde_solve(&c).is_err());
        let mut c = good.clone();
        c.time_weight = 1.5;
        assert!(pde_solve(&c).is_err());
        let mut c = good.clone();
        c.snapshot_times = vec![0.3, 0.2];
        assert!(pde_solve(&c).is_err());
        let mut c = good.clone();
        c.snapshot_times = vec![0.9];
        assert!(pde_solve(&c).is_err());
        let mut c = good;
        c.phys.k = -0.5;
        assert!(pde_solve(&c).is_err());
    }

    #[test]
    fn front_position_interpolates_linearly() {
        let r = vec![0.0, 1.0, 2.0, 3.0];
        let u = vec![1.0, 0.5, 0.1, 0.0];
        let fp = front_position_numeric(&r, &u, 0.3).unwrap();
        // Crossing between nodes 1 and 2: 1 + (0.5-0.3)/(0.5-0.1).
        assert!((fp - 1.5).abs() < 1e-12, "front {fp}");
        assert!(front_position_numeric(&r, &u, 2.0).is_none());
    }

    #[test]
    fn rescaled_snapshot_is_a_valid_profile() {
        let phys = PhysicalParams::new(1.0, 0.0, 1.0, 1.0).unwrap();
        let scales = crate::similarity::map_parameters(&phys).unwrap();
        let mut config = PdeConfig::new(phys, 2.0, 100, 0.5);
        config.snapshot_times = vec![0.5];
        let sol = pde_solve(&config).unwrap();
        let profile = sol.rescaled_profile(0, &scales).unwrap();
        assert!(profile.alpha > 1.0 && profile.alpha < 2.0, "alpha {}", profile.alpha);
        assert!(profile.f()[0] > 0.0);
        assert_eq!(*profile.f().last().unwrap(), 0.0);
    }
}
