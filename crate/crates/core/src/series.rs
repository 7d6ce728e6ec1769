//! Front expansion of the reduced profile.
//!
//! Near the front the profile admits the power series
//! `f(theta) = sum_i beta_i (alpha - theta)^i` with `beta_0 = 0`. Matching
//! powers of `s = alpha - theta` in the reduced equation
//! `f f'' + f'^2/n + ((m+1)/2) theta f' - m f = 0` fixes
//! `beta_1 = n alpha (m+1)/2` and a linear recurrence for every later
//! coefficient. The recurrence is regular for all orders whenever `n > 0`,
//! `alpha > 0`, and `m > -1`.

use crate::error::{Error, Result};
use crate::profile::{Profile, ProfileSource};

/// Largest supported expansion order.
pub const MAX_ORDER: usize = 64;

/// Truncated front expansion at a fixed candidate front position.
#[derive(Debug, Clone)]
pub struct FrontSeries {
    n: f64,
    m: f64,
    alpha: f64,
    /// `coeffs[i]` multiplies `(alpha - theta)^i`; `coeffs[0] = 0`.
    coeffs: Vec<f64>,
}

/// Builds the expansion up to `order` by the power-matching recurrence.
///
/// At order `j` the new coefficient solves
/// `L_j beta_{j+1} = -(quadratic couplings + ((m+1)/2 j - m) beta_j)` with
/// `L_j = (j+1) alpha (m+1)(jn + 1)/2`, which is positive on the valid
/// parameter range.
pub fn build_series(n: f64, m: f64, alpha: f64, order: usize) -> Result<FrontSeries> {
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::InvalidParams(format!(
            "n must be positive and finite, got {n}"
        )));
    }
    if !m.is_finite() || m + 1.0 <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "m + 1 must be positive for an advancing front, got m = {m}"
        )));
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidParams(format!(
            "alpha must be positive and finite, got {alpha}"
        )));
    }
    if order < 1 || order > MAX_ORDER {
        return Err(Error::OrderTooLarge {
            order,
            max: MAX_ORDER,
        });
    }
    let mut c = vec![0.0; order + 1];
    c[1] = 0.5 * n * alpha * (m + 1.0);
    let cap = 1e12 * (c[1].abs() * alpha).max(1.0);
    let mut alpha_pow = alpha;
    for j in 1..order {
        let lin = (j + 1) as f64 * alpha * (m + 1.0) * (j as f64 * n + 1.0) / 2.0;
        if !lin.is_finite() || lin.abs() < 1e-300 {
            return Err(Error::DegenerateRecurrence {
                order: j + 1,
                coeff: lin,
            });
        }
        let mut acc = 0.0;
        for b in 2..=j {
            let a = j + 2 - b;
            acc += c[a] * (b * (b - 1)) as f64 * c[b];
        }
        for a in 1..=j {
            let b = j + 2 - a;
            if b <= j {
                acc += (a * b) as f64 * c[a] * c[b] / n;
            }
        }
        acc += (0.5 * (m + 1.0) * j as f64 - m) * c[j];
        c[j + 1] = -acc / lin;
        alpha_pow *= alpha;
        let magnitude = c[j + 1].abs() * alpha_pow;
        if !magnitude.is_finite() || magnitude > cap {
            return Err(Error::CoefficientOverflow {
                order: j + 1,
                magnitude,
            });
        }
    }
    Ok(FrontSeries {
        n,
        m,
        alpha,
        coeffs: c,
    })
}

/// Closed forms of the first five coefficients.
///
/// Only orders 1 through 5 have closed forms; any other `i` is a caller bug.
pub fn beta_closed(i: usize, n: f64, m: f64, alpha: f64) -> f64 {
    assert!((1..=5).contains(&i), "beta_closed defined for i in 1..=5, got {i}");
    let branch = n * m + n + 2.0 * m;
    match i {
        1 => 0.5 * alpha * n * (m + 1.0),
        2 => 0.25 * (m - 1.0) * n / (n + 1.0),
        3 => {
            -(1.0 / 12.0) * n * (m - 1.0) * branch
                / ((n + 1.0).powi(2) * alpha * (1.0 + 2.0 * n) * (m + 1.0))
        }
        4 => {
            let p4 = 5.0 * n * m - n + 7.0 * m - 3.0;
            (1.0 / 48.0) * n * (m - 1.0) * branch * p4
                / (alpha.powi(2)
                    * (n + 1.0).powi(3)
                    * (1.0 + 2.0 * n)
                    * (m + 1.0).powi(2)
                    * (3.0 * n + 1.0))
        }
        _ => {
            let p5 = 303.0 * n * m * m + 82.0 * m * m + 102.0 * n.powi(3) * m * m
                + 317.0 * n * n * m * m
                - 204.0 * n * n * m
                - 238.0 * n * m
                - 70.0 * m
                - 48.0 * n.powi(3) * m
                + 12.0
                + 7.0 * n * n
                - 6.0 * n.powi(3)
                + 31.0 * n;
            -(1.0 / 240.0) * n * (m - 1.0) * branch * p5
                / (alpha.powi(3)
                    * (3.0 * n + 1.0)
                    * (m + 1.0).powi(3)
                    * (1.0 + 2.0 * n).powi(2)
                    * (n + 1.0).powi(4)
                    * (1.0 + 4.0 * n))
        }
    }
}

impl FrontSeries {
    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Truncation order.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients indexed by power of `(alpha - theta)`; entry 0 is zero.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Profile value. Zero beyond the front.
    pub fn eval_f(&self, theta: f64) -> f64 {
        let s = self.alpha - theta;
        if s <= 0.0 {
            return 0.0;
        }
        let mut acc = 0.0;
        for &ci in self.coeffs.iter().rev() {
            acc = acc * s + ci;
        }
        acc
    }

    /// Slope with respect to theta. At the front this is the one-sided
    /// slope `-beta_1`; beyond the front it is zero.
    pub fn eval_df(&self, theta: f64) -> f64 {
        let s = self.alpha - theta;
        if s < 0.0 {
            return 0.0;
        }
        let mut acc = 0.0;
        for i in (1..self.coeffs.len()).rev() {
            acc = acc * s + i as f64 * self.coeffs[i];
        }
        -acc
    }

    /// Second derivative with respect to theta. Zero beyond the front.
    pub fn eval_d2f(&self, theta: f64) -> f64 {
        let s = self.alpha - theta;
        if s < 0.0 {
            return 0.0;
        }
        let mut acc = 0.0;
        for i in (2..self.coeffs.len()).rev() {
            acc = acc * s + (i * (i - 1)) as f64 * self.coeffs[i];
        }
        acc
    }

    /// Value and slope at the origin.
    pub fn boundary_values(&self) -> (f64, f64) {
        (self.eval_f(0.0), self.eval_df(0.0))
    }

    /// Residual of the reduced equation at one point.
    pub fn ode_residual(&self, theta: f64) -> f64 {
        let f = self.eval_f(theta);
        let df = self.eval_df(theta);
        let d2f = self.eval_d2f(theta);
        f * d2f + df * df / self.n + 0.5 * (self.m + 1.0) * theta * df - self.m * f
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
            f.push(self.eval_f(theta).max(0.0));
            df.push(self.eval_df(theta));
        }
        Profile::new(ProfileSource::Series, self.alpha, thetas, f, df)
    }

    /// Geometric growth rate of successive terms evaluated at the origin,
    /// averaged over the last few coefficient pairs. Values above 1 mean the
    /// truncation is already outside its useful range at `theta = 0`.
    /// Returns None when the expansion terminates (trailing zeros).
    pub fn tail_ratio(&self) -> Option<f64> {
        let n = self.coeffs.len() - 1;
        if n < 2 {
            return None;
        }
        let lo = n.saturating_sub(5).max(1);
        let mut log_sum = 0.0;
        let mut count = 0;
        for i in lo..n {
            let a = self.coeffs[i].abs();
            let b = self.coeffs[i + 1].abs();
            if a == 0.0 || b == 0.0 {
                continue;
            }
            log_sum += (self.alpha * b / a).ln();
            count += 1;
        }
        if count == 0 {
            None
        } else {
            Some((log_sum / count as f64).exp())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn recurrence_matches_closed_forms_on_random_draws() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut worst: f64 = 0.0;
        for _ in 0..200 {
            let n = rng.gen_range(0.2..8.0);
            let m = rng.gen_range(-0.4..4.0);
            let alpha = rng.gen_range(0.1..5.0);
            let s = build_series(n, m, alpha, 5).unwrap();
            for i in 1..=5 {
                let closed = beta_closed(i, n, m, alpha);
                let denom = closed.abs().max(1e-15);
                worst = worst.max((s.coeffs()[i] - closed).abs() / denom);
            }
        }
        assert!(worst <= 1e-12, "worst relative deviation {worst:.3e}");
    }

    #[test]
    fn linear_case_truncates_after_first_coefficient() {
        let s = build_series(2.0, 1.0, 0.8, 12).unwrap();
        assert!((s.coeffs()[1] - 0.8 * 2.0).abs() < 1e-15);
        for i in 2..=12 {
            assert!(
                s.coeffs()[i].abs() < 1e-15,
                "coefficient {i} = {}",
                s.coeffs()[i]
            );
        }
        assert!(s.tail_ratio().is_none());
    }

    #[test]
    fn quadratic_branch_truncates_after_second_coefficient() {
        let n = 2.0;
        let m = -n / (n + 2.0);
        let s = build_series(n, m, 1.7, 10).unwrap();
        for i in 3..=10 {
            assert!(
                s.coeffs()[i].abs() < 1e-15,
                "coefficient {i} = {}",
                s.coeffs()[i]
            );
        }
    }

    #[test]
    fn front_values_and_slopes() {
        let s = build_series(1.0, 1.0 / 3.0, 1.4, 8).unwrap();
        assert_eq!(s.eval_f(1.4), 0.0);
        assert_eq!(s.eval_f(2.0), 0.0);
        assert!((s.eval_df(1.4) + s.coeffs()[1]).abs() < 1e-15);
        assert_eq!(s.eval_df(2.0), 0.0);
        assert!(s.eval_f(0.0) > 0.0);
    }

    #[test]
    fn residual_decays_at_fifth_order_for_order_five_truncation() {
        // Doubling the distance from the front multiplies the truncation
        // residual by about 2^5.
        let alpha = 1.4819;
        let s = build_series(1.0, 1.0 / 3.0, alpha, 5).unwrap();
        let r1 = s.ode_residual(alpha * (1.0 - 0.05)).abs();
        let r2 = s.ode_residual(alpha * (1.0 - 0.10)).abs();
        let ratio = r2 / r1;
        assert!(
            (24.0..40.0).contains(&ratio),
            "residual ratio {ratio} outside the expected window around 2^5"
        );
    }

    #[test]
    fn residual_shrinks_with_order_near_the_front() {
        let alpha = 1.4819;
        let theta = alpha * 0.9;
        let mut prev = f64::INFINITY;
        for order in [3, 5, 8, 12] {
            let s = build_series(1.0, 1.0 / 3.0, alpha, order).unwrap();
            let r = s.ode_residual(theta).abs();
            assert!(r < prev, "order {order} residual {r} did not shrink");
            prev = r;
        }
    }

    #[test]
    fn order_bounds_are_enforced() {
        assert!(matches!(
            build_series(1.0, 0.5, 1.0, 0),
            Err(Error::OrderTooLarge { .. })
        ));
        assert!(matches!(
            build_series(1.0, 0.5, 1.0, MAX_ORDER + 1),
            Err(Error::OrderTooLarge { .. })
        ));
        assert!(build_series(1.0, 0.5, 1.0, MAX_ORDER).is_ok());
    }

    #[test]
    fn stalled_front_is_rejected() {
        assert!(build_series(1.0, -1.0, 1.0, 5).is_err());
        assert!(build_series(1.0, -1.5, 1.0, 5).is_err());
    }

    #[test]
    #[should_panic(expected = "beta_closed defined for i in 1..=5")]
    fn beta_closed_rejects_out_of_range_order() {
        beta_closed(6, 1.0, 0.5, 1.0);
    }

    #[test]
    fn coefficients_scale_as_alpha_power_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let n = rng.gen_range(0.3..6.0);
            let m = rng.gen_range(-0.5..3.0);
            let alpha = rng.gen_range(0.2..3.0);
            let lambda = rng.gen_range(0.5..2.5);
            let base = build_series(n, m, alpha, 8).unwrap();
            let scaled = build_series(n, m, lambda * alpha, 8).unwrap();
            for i in 1..=8 {
                let expect = lambda.powi(2 - i as i32) * base.coeffs()[i];
                let denom = expect.abs().max(1e-14);
                assert!(
                    (scaled.coeffs()[i] - expect).abs() / denom < 1e-10,
                    "scaling law broken at i={i}"
                );
            }
        }
    }

    #[test]
    fn sample_covers_full_support_inclusively() {
        let s = build_series(1.0, 1.0 / 3.0, 1.4819, 5).unwrap();
        let p = s.sample(101).unwrap();
        assert_eq!(p.len(), 101);
        assert_eq!(p.thetas()[0], 0.0);
        assert_eq!(*p.thetas().last().unwrap(), 1.4819);
        assert_eq!(*p.f().last().unwrap(), 0.0);
    }
}
