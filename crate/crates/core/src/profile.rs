//! Sampled profile container shared by every solution path.

use crate::error::{Error, Result};
use serde::Serialize;
use std::io::{self, Write};

/// Which solver produced a profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ProfileSource {
    /// Front expansion evaluated on a grid.
    Series,
    /// Inward integration seeded at the front.
    Shooting,
    /// Terminating closed form.
    Exact,
    /// Grid solution rescaled into similarity variables.
    PdeRescaled,
}

impl ProfileSource {
    /// Stable lowercase name used in CSV output.
    pub fn name(&self) -> &'static str {
        match self {
            ProfileSource::Series => "series",
            ProfileSource::Shooting => "shooting",
            ProfileSource::Exact => "exact",
            ProfileSource::PdeRescaled => "pde",
        }
    }
}

impl std::fmt::Display for ProfileSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A nonnegative profile sampled on strictly increasing abscissae.
///
/// `alpha` records the support endpoint; samples may extend past it, where
/// the values are zero. Slopes are optional (empty) for sources that do not
/// provide them.
#[derive(Debug, Clone, Serialize)]
pub struct Profile {
    pub source: ProfileSource,
    pub alpha: f64,
    thetas: Vec<f64>,
    f: Vec<f64>,
    df: Vec<f64>,
}

impl Profile {
    /// Validates lengths, ordering, finiteness, and nonnegativity.
    pub fn new(
        source: ProfileSource,
        alpha: f64,
        thetas: Vec<f64>,
        f: Vec<f64>,
        df: Vec<f64>,
    ) -> Result<Self> {
        if thetas.len() < 2 {
            return Err(Error::InvalidParams(format!(
                "profile needs at least 2 samples, got {}",
                thetas.len()
            )));
        }
        if f.len() != thetas.len() {
            return Err(Error::InvalidParams(format!(
                "profile has {} abscissae but {} values",
                thetas.len(),
                f.len()
            )));
        }
        if !df.is_empty() && df.len() != thetas.len() {
            return Err(Error::InvalidParams(format!(
                "profile has {} abscissae but {} slopes",
                thetas.len(),
                df.len()
            )));
        }
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParams(format!(
                "support endpoint must be positive and finite, got {alpha}"
            )));
        }
        for w in thetas.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidParams(format!(
                    "abscissae must increase strictly, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        for (&theta, &fv) in thetas.iter().zip(&f) {
            if !theta.is_finite() || !fv.is_finite() {
                return Err(Error::InvalidParams(format!(
                    "non-finite sample ({theta}, {fv})"
                )));
            }
            if fv < 0.0 {
                return Err(Error::InvalidParams(format!(
                    "negative profile value {fv} at theta = {theta}"
                )));
            }
        }
        if df.iter().any(|d| !d.is_finite()) {
            return Err(Error::InvalidParams("non-finite slope sample".into()));
        }
        Ok(Self {
            source,
            alpha,
            thetas,
            f,
            df,
        })
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn f(&self) -> &[f64] {
        &self.f
    }

    /// Slopes, empty when the source does not supply them.
    pub fn df(&self) -> &[f64] {
        &self.df
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    /// Largest sampled value.
    pub fn max_f(&self) -> f64 {
        self.f.iter().copied().fold(0.0, f64::max)
    }

    /// Writes `theta,f,df,source` rows. The slope column is blank when the
    /// profile carries no slopes.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "theta,f,df,source")?;
        for i in 0..self.thetas.len() {
            if self.df.is_empty() {
                writeln!(out, "{:.12e},{:.12e},,{}", self.thetas[i], self.f[i], self.source)?;
            } else {
                writeln!(
                    out,
                    "{:.12e},{:.12e},{:.12e},{}",
                    self.thetas[i], self.f[i], self.df[i], self.source
                )?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_mismatched_lengths() {
        let err = Profile::new(
            ProfileSource::Series,
            1.0,
            vec![0.0, 0.5, 1.0],
            vec![1.0, 0.5],
            vec![],
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidParams(_)));
    }

    #[test]
    fn rejects_decreasing_abscissae() {
        assert!(Profile::new(
            ProfileSource::Series,
            1.0,
            vec![0.0, 0.6, 0.5],
            vec![1.0, 0.5, 0.2],
            vec![],
        )
        .is_err());
    }

    #[test]
    fn rejects_negative_values() {
        assert!(Profile::new(
            ProfileSource::Series,
            1.0,
            vec![0.0, 1.0],
            vec![1.0, -0.1],
            vec![],
        )
        .is_err());
    }

    #[test]
    fn csv_has_header_and_one_row_per_sample() {
        let p = Profile::new(
            ProfileSource::Exact,
            1.0,
            vec![0.0, 0.5, 1.0],
            vec![1.0, 0.5, 0.0],
            vec![-1.0, -1.0, -1.0],
        )
        .unwrap();
        let mut buf = Vec::new();
        p.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "theta,f,df,source");
        assert!(lines[1].ends_with(",exact"));
    }

    #[test]
    fn max_f_scans_all_samples() {
        let p = Profile::new(
            ProfileSource::Exact,
            1.0,
            vec![0.0, 0.5, 1.0],
            vec![0.2, 0.9, 0.0],
            vec![],
        )
        .unwrap();
        assert_eq!(p.max_f(), 0.9);
    }
}
