//! Physical-space reconstruction and profile comparison.
//!
//! Maps reduced profiles back to `u(r, t)`, tracks the front trajectory,
//! and measures the distance between two profiles from any pair of sources
//! on a shared grid.

use crate::error::{Error, Result};
use crate::interp::MonotoneCubic;
use crate::profile::{Profile, ProfileSource};
use crate::similarity::SimilarityScales;
use serde::Serialize;

/// Physical field value `u(r, t) = (A t^m f(B r / t^p))^{1/n}`.
///
/// Negative profile values (interpolation noise near the front) are clamped
/// to zero before the root is taken. Requires `t > 0`.
pub fn reconstruct_u<F>(n: f64, scales: &SimilarityScales, f_eval: F, r: f64, t: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    debug_assert!(t > 0.0, "reconstruction needs t > 0");
    let theta = scales.inv_length * r / t.powf(scales.p);
    let fv = f_eval(theta).max(0.0);
    if fv == 0.0 {
        return 0.0;
    }
    (scales.amplitude * t.powf(scales.m) * fv).powf(1.0 / n)
}

/// Front trajectory `r_f(t) = alpha t^p / B`.
pub fn front_position(alpha: f64, scales: &SimilarityScales, t: f64) -> f64 {
    debug_assert!(t >= 0.0, "front position needs t >= 0");
    alpha * t.powf(scales.p) / scales.inv_length
}

/// Norm the pass verdict of a comparison is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ErrorNorm {
    /// Largest pointwise difference.
    MaxAbs,
    /// Largest pointwise difference over the peak of the reference profile.
    MaxRel,
    /// Euclidean norm of the difference over that of the reference profile.
    L2Rel,
}

/// Distance between two profiles resampled on a shared uniform grid.
///
/// Profile `a` is the reference: relative norms are normalized by it.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub source_a: ProfileSource,
    pub source_b: ProfileSource,
    /// Shared support the grid covers.
    pub overlap: [f64; 2],
    pub grid_points: usize,
    pub max_abs_error: f64,
    pub max_rel_error: f64,
    pub l2_error: f64,
    pub gate: ErrorNorm,
    pub tolerance: f64,
    pub pass: bool,
    /// Shared grid, for paired-curve export.
    pub grid: Vec<f64>,
    pub f_a: Vec<f64>,
    pub f_b: Vec<f64>,
}

impl ComparisonReport {
    /// Value of the gated norm.
    pub fn gated_error(&self) -> f64 {
        match self.gate {
            ErrorNorm::MaxAbs => self.max_abs_error,
            ErrorNorm::MaxRel => self.max_rel_error,
            ErrorNorm::L2Rel => self.l2_error,
        }
    }

    /// Writes `theta,f_a,f_b` rows for external plotting.
    pub fn write_paired_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "theta,f_a,f_b")?;
        for i in 0..self.grid.len() {
            writeln!(
                out,
                "{:.12e},{:.12e},{:.12e}",
                self.grid[i], self.f_a[i], self.f_b[i]
            )?;
        }
        Ok(())
    }
}

/// Resamples both profiles onto a uniform grid over their shared support
/// and measures the three norms. The verdict gates the requested norm
/// against `tolerance`.
pub fn compare_profiles(
    a: &Profile,
    b: &Profile,
    n_grid: usize,
    tolerance: f64,
    gate: ErrorNorm,
) -> Result<ComparisonReport> {
    if n_grid < 2 || n_grid > 1_000_000 {
        return Err(Error::InvalidParams(format!(
            "comparison grid must have 2..=1000000 points, got {n_grid}"
        )));
    }
    if !(tolerance > 0.0) || !tolerance.is_finite() {
        return Err(Error::InvalidParams(format!(
            "comparison tolerance must be positive and finite, got {tolerance}"
        )));
    }
    let lo = a.thetas()[0].max(b.thetas()[0]);
    let hi = a.thetas().last().unwrap().min(*b.thetas().last().unwrap());
    if !(hi > lo) {
        return Err(Error::DomainMismatch {
            alpha_a: a.alpha,
            alpha_b: b.alpha,
        });
    }
    let ia = MonotoneCubic::new(a.thetas().to_vec(), a.f().to_vec())?;
    let ib = MonotoneCubic::new(b.thetas().to_vec(), b.f().to_vec())?;
    let mut grid = Vec::with_capacity(n_grid);
    let mut f_a = Vec::with_capacity(n_grid);
    let mut f_b = Vec::with_capacity(n_grid);
    let mut max_abs: f64 = 0.0;
    let mut peak_a: f64 = 0.0;
    let mut diff_sq = 0.0;
    let mut ref_sq = 0.0;
    for i in 0..n_grid {
        let x = lo + (hi - lo) * i as f64 / (n_grid - 1) as f64;
        let va = ia.eval(x);
        let vb = ib.eval(x);
        grid.push(x);
        f_a.push(va);
        f_b.push(vb);
        max_abs = max_abs.max((va - vb).abs());
        peak_a = peak_a.max(va.abs());
        diff_sq += (va - vb) * (va - vb);
        ref_sq += va * va;
    }
    if ref_sq == 0.0 {
        return Err(Error::InvalidParams(
            "reference profile is identically zero on the shared support".into(),
        ));
    }
    let max_rel = max_abs / peak_a.max(f64::MIN_POSITIVE);
    let l2 = (diff_sq / ref_sq).sqrt();
    let mut report = ComparisonReport {
        source_a: a.source,
        source_b: b.source,
        overlap: [lo, hi],
        grid_points: n_grid,
        max_abs_error: max_abs,
        max_rel_error: max_rel,
        l2_error: l2,
        gate,
        tolerance,
        pass: false,
        grid,
        f_a,
        f_b,
    };
    report.pass = report.gated_error() <= tolerance;
    Ok(report)
}

/// Least-squares power-law fit `x = c t^e` through positive samples.
/// Returns `(exponent, prefactor)`.
pub fn fit_power_law(ts: &[f64], xs: &[f64]) -> Result<(f64, f64)> {
    if ts.len() != xs.len() || ts.len() < 2 {
        return Err(Error::InvalidParams(format!(
            "power-law fit needs matching samples of length >= 2, got {} and {}",
            ts.len(),
            xs.len()
        )));
    }
    if ts.iter().chain(xs.iter()).any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidParams(
            "power-law fit needs strictly positive finite samples".into(),
        ));
    }
    let n = ts.len() as f64;
    let lt: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let mt = lt.iter().sum::<f64>() / n;
    let mx = lx.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var = 0.0;
    for i in 0..ts.len() {
        cov += (lt[i] - mt) * (lx[i] - mx);
        var += (lt[i] - mt) * (lt[i] - mt);
    }
    if var == 0.0 {
        return Err(Error::InvalidParams(
            "power-law fit needs at least two distinct times".into(),
        ));
    }
    let exponent = cov / var;
    let prefactor = (mx - exponent * mt).exp();
    Ok((exponent, prefactor))
}
