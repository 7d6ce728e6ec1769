//! Front-position solver on the truncated expansion.
//!
//! For fixed (n, m) and order N, the boundary residual
//! `R(alpha) = f(0)^{1/n} f'(0) + shift` is a smooth function of the
//! candidate front position alpha. Its root is the front position at which
//! the truncated profile meets the flux condition. The solver scans a wide
//! geometric range, refines every sign change, reports the smallest root,
//! and lists the rest instead of discarding them.

use crate::error::{Error, Result};
use crate::rootfind::{geometric_scan, refine_root};
use crate::series::build_series;
use crate::similarity::FluxConvention;
use serde::Serialize;

/// Residual magnitude accepted at a refined root.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;
/// Lower end of the default scan range.
pub const SCAN_LO: f64 = 1e-3;
/// Upper end of the default scan range.
pub const SCAN_HI: f64 = 1e3;
/// Sample count of the default scan.
pub const SCAN_POINTS: usize = 400;

/// Flux-condition residual of the order-N expansion at one candidate alpha.
///
/// Fails with [`Error::NonPhysicalProfile`] when the truncated profile is
/// not positive at the origin.
pub fn bc_residual(
    n: f64,
    m: f64,
    alpha: f64,
    order: usize,
    convention: FluxConvention,
) -> Result<f64> {
    let series = build_series(n, m, alpha, order)?;
    let (f0, df0) = series.boundary_values();
    if f0 <= 0.0 {
        return Err(Error::NonPhysicalProfile { alpha, f0 });
    }
    Ok(f0.powf(1.0 / n) * df0 + convention.residual_shift(n))
}

/// Outcome of a front-position solve.
#[derive(Debug, Clone, Serialize)]
pub struct AlphaSolveReport {
    pub n: f64,
    pub m: f64,
    pub convention: FluxConvention,
    /// Expansion order the residual was built from.
    pub order: usize,
    /// Smallest root found.
    pub alpha: f64,
    pub residual_at_root: f64,
    /// Bracket the reported root was refined inside.
    pub bracket: [f64; 2],
    pub iterations: u32,
    /// Further roots in ascending order, when the residual has several.
    pub extra_roots: Vec<f64>,
}

/// Finds front positions where the order-N expansion meets the flux
/// condition, scanning `[SCAN_LO, SCAN_HI]`.
pub fn solve_alpha(
    n: f64,
    m: f64,
    order: usize,
    convention: FluxConvention,
    alpha_tol: f64,
) -> Result<AlphaSolveReport> {
    if !(alpha_tol > 0.0) || !alpha_tol.is_finite() {
        return Err(Error::InvalidParams(format!(
            "alpha tolerance must be positive and finite, got {alpha_tol}"
        )));
    }
    build_series(n, m, 1.0, order)?;
    let residual = |alpha: f64| bc_residual(n, m, alpha, order, convention).ok();
    let scan = geometric_scan(SCAN_LO, SCAN_HI, SCAN_POINTS, residual);
    if scan.brackets.is_empty() {
        return Err(Error::NoSignChange {
            lo: SCAN_LO,
            hi: SCAN_HI,
            signs: compress_signs(&scan.signs),
        });
    }
    let mut roots = Vec::new();
    let mut iterations = 0;
    let mut first_bracket = [0.0, 0.0];
    for bracket in &scan.brackets {
        if let Some(r) = refine_root(*bracket, alpha_tol, residual) {
            if roots.is_empty() {
                first_bracket = [bracket.lo, bracket.hi];
            }
            iterations += r.iterations;
            roots.push(r);
        }
    }
    roots.sort_by(|a, b| a.x.total_cmp(&b.x));
    let Some(primary) = roots.first().copied() else {
        return Err(Error::NoSignChange {
            lo: SCAN_LO,
            hi: SCAN_HI,
            signs: compress_signs(&scan.signs),
        });
    };
    if primary.fx.abs() > RESIDUAL_TOLERANCE {
        return Err(Error::RootNotConverged {
            alpha: primary.x,
            residual: primary.fx,
        });
    }
    Ok(AlphaSolveReport {
        n,
        m,
        convention,
        order,
        alpha: primary.x,
        residual_at_root: primary.fx,
        bracket: first_bracket,
        iterations,
        extra_roots: roots.iter().skip(1).map(|r| r.x).collect(),
    })
}

/// Run-length compression of a scan sign pattern, for error messages.
fn compress_signs(signs: &str) -> String {
    let mut out = String::new();
    let mut chars = signs.chars().peekable();
    while let Some(c) = chars.next() {
        let mut count = 1;
        while chars.peek() == Some(&c) {
            chars.next();
            count += 1;
        }
        if count > 3 {
            out.push(c);
            out.push_str(&format!("x{count}"));
        } else {
            for _ in 0..count {
                out.push(c);
            }
        }
    }
    out
}

/// Condensed closed form of the order-5 boundary residual at n = 1, as a
/// function of m: the flux condition collapses to
/// `alpha^3 Pa(m) Pb(m) / (2985984000 (m+1)^6) = 1` with two printed
/// quartics. Equivalent to the power-gradient residual of the order-5
/// expansion; the suite verifies this equivalence numerically.
pub fn condensed_residual_n1(m: f64, alpha: f64) -> f64 {
    let pa = quartic_a(m);
    let pb = quartic_b(m);
    alpha.powi(3) * pa * pb / (2_985_984_000.0 * (m + 1.0).powi(6)) - 1.0
}

/// Root of [`condensed_residual_n1`] in closed form.
pub fn condensed_alpha_n1(m: f64) -> Result<f64> {
    if !m.is_finite() || m + 1.0 <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "m + 1 must be positive, got m = {m}"
        )));
    }
    let pa = quartic_a(m);
    let pb = quartic_b(m);
    if pa <= 0.0 || pb <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "condensed quartics not positive at m = {m}"
        )));
    }
    Ok((2_985_984_000.0 * (m + 1.0).powi(6) / (pa * pb)).cbrt())
}

fn quartic_a(m: f64) -> f64 {
    (((105147.0 * m + 384822.0) * m + 519188.0) * m + 307082.0) * m + 66161.0
}

fn quartic_b(m: f64) -> f64 {
    (((24237.0 * m + 84342.0) * m + 103808.0) * m + 54602.0) * m + 9491.0
}

/// Front positions of one (n, m, convention) case across several expansion
/// orders, with successive differences.
#[derive(Debug, Clone, Serialize)]
pub struct OrderStabilityReport {
    pub n: f64,
    pub m: f64,
    pub convention: FluxConvention,
    pub orders: Vec<usize>,
    pub alphas: Vec<f64>,
    /// `|alpha_{i+1} - alpha_i|` for consecutive orders.
    pub deltas: Vec<f64>,
    /// True when the last delta is within 100x the alpha tolerance. A false
    /// value is reported as-is; the sequence did not settle.
    pub stabilized: bool,
}

/// Solves the same case at each order and reports how the root moves.
pub fn order_stability(
    n: f64,
    m: f64,
    convention: FluxConvention,
    orders: &[usize],
    alpha_tol: f64,
) -> Result<OrderStabilityReport> {
    if orders.len() < 2 {
        return Err(Error::InvalidParams(
            "order stability needs at least 2 orders".into(),
        ));
    }
    if orders.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParams(
            "orders must increase strictly".into(),
        ));
    }
    let mut alphas = Vec::with_capacity(orders.len());
    for &order in orders {
        alphas.push(solve_alpha(n, m, order, convention, alpha_tol)?.alpha);
    }
    let deltas: Vec<f64> = alphas.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let last_alpha: f64 = *alphas.last().unwrap();
    let stabilized = *deltas.last().unwrap() <= 100.0 * alpha_tol * last_alpha.abs().max(1.0);
    Ok(OrderStabilityReport {
        n,
        m,
        convention,
        orders: orders.to_vec(),
        alphas,
        deltas,
        stabilized,
    })
}
