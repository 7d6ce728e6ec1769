//! Reduced-profile export.

use crate::manifest::RunManifest;
use crate::{resolve_exponents, CliError, CmdResult};
use clap::{Args, ValueEnum};
use frontflux::alpha::solve_alpha;
use frontflux::series::build_series;
use frontflux::shooting::{shoot_alpha, shooting_profile, ShootConfig};
use frontflux::similarity::{exact_alpha_m1, exact_profile_linear, exact_profile_quadratic};
use frontflux::{FluxConvention, Profile};
use serde::Serialize;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Args)]
pub struct ProfileArgs {
    /// Nonlinearity exponent of the conductivity.
    #[arg(long)]
    pub n: f64,
    /// Flux growth exponent; converted to m internally.
    #[arg(long, conflicts_with = "m", allow_negative_numbers = true)]
    pub k: Option<f64>,
    /// Similarity exponent; alternative to --k.
    #[arg(long, allow_negative_numbers = true)]
    pub m: Option<f64>,
    /// Expansion order (series source only).
    #[arg(long, default_value_t = 5)]
    pub order: usize,
    /// Which solver produces the profile.
    #[arg(long, value_enum)]
    pub source: SourceKind,
    /// Row count of the exported profile, front included.
    #[arg(long, default_value_t = 401)]
    pub samples: usize,
    /// Front position override; skips the root solve.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Boundary-flux normalization used when solving for the front.
    #[arg(long, default_value = "pointwise")]
    pub convention: FluxConvention,
    /// Directory for profile.csv and the run manifest.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceKind {
    Series,
    Shooting,
    Exact,
}

/// Plain expansion record exported alongside series profiles.
#[derive(Serialize)]
struct SeriesRecord {
    n: f64,
    m: f64,
    alpha: f64,
    order: usize,
    coefficients: Vec<f64>,
}

const QUADRATIC_BRANCH_TOLERANCE: f64 = 1e-9;

pub fn run(args: &ProfileArgs) -> CmdResult {
    let started = Instant::now();
    let (m, k) = resolve_exponents(args.n, args.k, args.m)?;
    let n = args.n;
    let mut series_record = None;

    let profile: Profile = match args.source {
        SourceKind::Series => {
            let alpha = match args.alpha {
                Some(a) => a,
                None => solve_alpha(n, m, args.order, args.convention, 1e-10)?.alpha,
            };
            let series = build_series(n, m, alpha, args.order)?;
            series_record = Some(SeriesRecord {
                n,
                m,
                alpha,
                order: series.order(),
                coefficients: series.coeffs().to_vec(),
            });
            series.sample(args.samples)?
        }
        SourceKind::Shooting => {
            let mut cfg = ShootConfig::default();
            cfg.samples = args.samples;
            let alpha = match args.alpha {
                Some(a) => a,
                None => shoot_alpha(n, m, args.convention, &cfg)?.alpha,
            };
            shooting_profile(n, m, alpha, &cfg)?
        }
        SourceKind::Exact => {
            if (m - 1.0).abs() <= QUADRATIC_BRANCH_TOLERANCE {
                let alpha = args.alpha.unwrap_or_else(|| exact_alpha_m1(n, args.convention));
                exact_profile_linear(n, alpha)?.sample(args.samples)?
            } else if (n * m + n + 2.0 * m).abs() <= QUADRATIC_BRANCH_TOLERANCE {
                let alpha = args.alpha.ok_or_else(|| {
                    CliError::Usage(
                        "the quadratic closed form leaves the front position free; \
                         pass --alpha"
                            .into(),
                    )
                })?;
                exact_profile_quadratic(n, m, alpha)?.sample(args.samples)?
            } else {
                return Err(CliError::Usage(format!(
                    "no closed form at n = {n}, m = {m}; --source exact requires \
                     m = 1 or nm + n + 2m = 0"
                )));
            }
        }
    };

    let mut csv = Vec::new();
    profile.write_csv(&mut csv)?;
    let csv = String::from_utf8(csv).expect("csv output is ascii");
    print!("{csv}");

    if let Some(dir) = &args.out {
        let mut manifest = RunManifest::new("profile");
        manifest
            .param("n", n)
            .param("m", m)
            .param("k", k)
            .param("order", args.order)
            .param("samples", args.samples)
            .param("alpha", profile.alpha)
            .param("source", profile.source.name());
        manifest.convention = Some(args.convention.name().to_string());
        manifest.emit(dir, "profile.csv", &csv)?;
        if let Some(record) = &series_record {
            let body = serde_json::to_string_pretty(record)
                .map_err(|e| CliError::Usage(format!("serialization failed: {e}")))?;
            manifest.emit(dir, "series.json", &body)?;
        }
        manifest.finish(dir, started)?;
    }
    Ok(0)
}
