//! Bracketing scans and one-dimensional root refinement.
//!
//! Residual functions here are partial: they return None where the
//! underlying solve is infeasible (for example when a candidate front
//! position makes the profile cross zero). Scans treat such points as
//! non-bracketing samples.

/// A sign change between two sampled points.
#[derive(Debug, Clone, Copy)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

/// Result of a geometric sweep over an interval.
#[derive(Debug, Clone)]
pub struct ScanOutcome {
    /// Sign changes in sample order.
    pub brackets: Vec<Bracket>,
    /// Number of successful evaluations.
    pub evaluated: usize,
    /// Sign pattern of the sweep: '+', '-', '0', or '?' for failed points.
    pub signs: String,
}

/// Samples `f` at `points` geometrically spaced abscissae in `[lo, hi]` and
/// collects every sign change between consecutive successful samples.
pub fn geometric_scan<F>(lo: f64, hi: f64, points: usize, mut f: F) -> ScanOutcome
where
    F: FnMut(f64) -> Option<f64>,
{
    assert!(lo > 0.0 && hi > lo, "scan needs 0 < lo < hi");
    assert!(points >= 2, "scan needs at least 2 points");
    let ratio = (hi / lo).ln() / (points - 1) as f64;
    let mut brackets = Vec::new();
    let mut signs = String::with_capacity(points);
    let mut evaluated = 0;
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..points {
        let x = lo * (ratio * i as f64).exp();
        match f(x) {
            Some(v) if v.is_finite() => {
                evaluated += 1;
                signs.push(if v > 0.0 {
                    '+'
                } else if v < 0.0 {
                    '-'
                } else {
                    '0'
                });
                if let Some((px, pv)) = prev {
                    if pv != 0.0 && v != 0.0 && (pv < 0.0) != (v < 0.0) {
                        brackets.push(Bracket {
                            lo: px,
                            hi: x,
                            f_lo: pv,
                            f_hi: v,
                        });
                    }
                }
                prev = Some((x, v));
            }
            _ => {
                signs.push('?');
                prev = None;
            }
        }
    }
    ScanOutcome {
        brackets,
        evaluated,
        signs,
    }
}

/// A refined root.
#[derive(Debug, Clone, Copy)]
pub struct RootResult {
    pub x: f64,
    pub fx: f64,
    pub iterations: u32,
}

/// Bisection followed by secant polish inside a bracket.
///
/// Bisection narrows the interval to `1e3 * xtol`, then secant steps run
/// until the update is below `xtol * max(1, |x|)`. Returns None only if the
/// function fails persistently inside the bracket.
pub fn refine_root<F>(bracket: Bracket, xtol: f64, mut f: F) -> Option<RootResult>
where
    F: FnMut(f64) -> Option<f64>,
{
    let Bracket {
        mut lo,
        mut hi,
        f_lo: mut flo,
        f_hi: mut fhi,
    } = bracket;
    let mut iterations = 0u32;
    while hi - lo > 1e3 * xtol * lo.abs().max(1.0) {
        iterations += 1;
        if iterations > 200 {
            break;
        }
        // Probe near the midpoint; shift the probe if the evaluation fails.
        let mut fm = None;
        let mut mid = 0.5 * (lo + hi);
        for frac in [0.5, 0.375, 0.625] {
            mid = lo + frac * (hi - lo);
            fm = f(mid).filter(|v| v.is_finite());
            if fm.is_some() {
                break;
            }
        }
        let fm = fm?;
        if fm == 0.0 {
            return Some(RootResult {
                x: mid,
                fx: 0.0,
                iterations,
            });
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    // Secant polish from the bracket endpoints, kept inside the bracket.
    let (mut x0, mut f0, mut x1, mut f1) = (lo, flo, hi, fhi);
    for _ in 0..40 {
        iterations += 1;
        if (f1 - f0).abs() < 1e-300 {
            break;
        }
        let mut x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if !(x2 > lo && x2 < hi) {
            x2 = 0.5 * (lo + hi);
        }
        let Some(f2) = f(x2).filter(|v| v.is_finite()) else {
            break;
        };
        if f2 == 0.0 {
            return Some(RootResult {
                x: x2,
                fx: 0.0,
                iterations,
            });
        }
        if (f2 < 0.0) == (flo < 0.0) {
            lo = x2;
            flo = f2;
        } else {
            hi = x2;
        }
        let step = (x2 - x1).abs();
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
        if step <= xtol * x1.abs().max(1.0) {
            return Some(RootResult {
                x: x1,
                fx: f1,
                iterations,
            });
        }
    }
    let (x, fx) = if f1.abs() <= f0.abs() { (x1, f1) } else { (x0, f0) };
    Some(RootResult { x, fx, iterations })
}
