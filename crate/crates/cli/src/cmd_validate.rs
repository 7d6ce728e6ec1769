//! Cross-checks between the independent solver routes.
//!
//! Level `ode` compares reduced profiles (expansion vs shooting, plus the
//! closed form when one exists); level `pde` compares the grid solution of
//! the full problem against the similarity reconstruction and checks the
//! conservation and front-growth laws. Every check prints one line; the
//! process exits 1 when any check fails its threshold, with all reports
//! still emitted.

use crate::manifest::RunManifest;
use crate::{resolve_exponents, CliError, CmdResult};
use clap::{Args, ValueEnum};
use frontflux::alpha::solve_alpha;
use frontflux::interp::MonotoneCubic;
use frontflux::pde::{mass_balance_error, pde_solve, PdeConfig};
use frontflux::reconstruct::{
    compare_profiles, front_position, reconstruct_u, ComparisonReport, ErrorNorm,
};
use frontflux::series::build_series;
use frontflux::shooting::{shoot_alpha, shooting_profile, ShootConfig};
use frontflux::similarity::{exact_alpha_m1, exact_profile_linear, map_parameters};
use frontflux::{FluxConvention, PhysicalParams, Profile, ProfileSource};
use serde::Serialize;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Args)]
pub struct ValidateArgs {
    /// Nonlinearity exponent of the conductivity.
    #[arg(long)]
    pub n: f64,
    /// Flux growth exponent; converted to m internally.
    #[arg(long, conflicts_with = "m", allow_negative_numbers = true)]
    pub k: Option<f64>,
    /// Similarity exponent; alternative to --k.
    #[arg(long, allow_negative_numbers = true)]
    pub m: Option<f64>,
    /// Which solver routes to cross-check.
    #[arg(long, value_enum, default_value_t = Level::All)]
    pub level: Level,
    /// Expansion order used on the ode level.
    #[arg(long, default_value_t = 5)]
    pub order: usize,
    /// Grid cells of the pde level.
    #[arg(long, default_value_t = 800)]
    pub nr: usize,
    /// End time of the pde level.
    #[arg(long, default_value_t = 1.0)]
    pub t_end: f64,
    /// Directory for reports and the run manifest.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Ode,
    Pde,
    All,
}

impl Level {
    fn name(&self) -> &'static str {
        match self {
            Level::Ode => "ode",
            Level::Pde => "pde",
            Level::All => "all",
        }
    }
}

/// Thresholds of the individual checks.
const GATE_SERIES_VS_SHOOTING: f64 = 1e-2;
const GATE_EXACT: f64 = 1e-6;
const GATE_FIELD_L2: f64 = 2e-2;
const GATE_MASS: f64 = 5e-3;
const GATE_FRONT_EXPONENT: f64 = 2e-2;
/// Support threshold for front detection, relative to the field peak.
const FRONT_LEVEL: f64 = 1e-4;
const EXACT_CASE_TOLERANCE: f64 = 1e-9;

#[derive(Serialize)]
struct CheckResult {
    name: String,
    value: f64,
    tolerance: f64,
    pass: bool,
    detail: String,
}

#[derive(Serialize)]
struct ValidateOutput {
    n: f64,
    m: f64,
    k: f64,
    level: String,
    checks: Vec<CheckResult>,
    comparisons: Vec<ComparisonReport>,
    pass: bool,
}

pub fn run(args: &ValidateArgs) -> CmdResult {
    let started = Instant::now();
    let (m, k) = resolve_exponents(args.n, args.k, args.m)?;
    let n = args.n;
    let convention = FluxConvention::Pointwise;
    println!(
        "validate: n = {n}, m = {m} (k = {k}), level = {}, convention {convention}",
        args.level.name()
    );

    let mut checks: Vec<CheckResult> = Vec::new();
    let mut comparisons: Vec<ComparisonReport> = Vec::new();

    if matches!(args.level, Level::Ode | Level::All) {
        run_ode_level(n, m, args.order, convention, &mut checks, &mut comparisons)?;
    }
    let mut pde_artifacts = None;
    if matches!(args.level, Level::Pde | Level::All) {
        if k < 0.0 {
            return Err(CliError::Usage(format!(
                "the pde level requires k >= 0, got k = {k}"
            )));
        }
        pde_artifacts = Some(run_pde_level(
            n,
            k,
            args.nr,
            args.t_end,
            convention,
            &mut checks,
            &mut comparisons,
        )?);
    }

    let pass = checks.iter().all(|c| c.pass);
    println!(
        "result: {} ({}/{} checks passed)",
        if pass { "PASS" } else { "FAIL" },
        checks.iter().filter(|c| c.pass).count(),
        checks.len()
    );

    if let Some(dir) = &args.out {
        let output = ValidateOutput {
            n,
            m,
            k,
            level: args.level.name().to_string(),
            checks,
            comparisons,
            pass,
        };
        let mut manifest = RunManifest::new("validate");
        manifest
            .param("n", n)
            .param("m", m)
            .param("k", k)
            .param("level", args.level.name())
            .param("order", args.order)
            .param("nr", args.nr)
            .param("t_end", args.t_end)
            .tolerance("series_vs_shooting_max_rel", GATE_SERIES_VS_SHOOTING)
            .tolerance("exact_max_rel", GATE_EXACT)
            .tolerance("field_l2_rel", GATE_FIELD_L2)
            .tolerance("mass_balance_rel", GATE_MASS)
            .tolerance("front_exponent_rel", GATE_FRONT_EXPONENT);
        manifest.convention = Some(convention.name().to_string());
        let body = serde_json::to_string_pretty(&output)
            .map_err(|e| CliError::Usage(format!("serialization failed: {e}")))?;
        manifest.emit(dir, "validate.json", &body)?;
        for report in &output.comparisons {
            let mut csv = Vec::new();
            report.write_paired_csv(&mut csv)?;
            let name = format!(
                "comparison_{}_vs_{}.csv",
                report.source_a.name(),
                report.source_b.name()
            );
            manifest.emit(dir, &name, &String::from_utf8(csv).expect("ascii"))?;
        }
        if let Some(snapshot_csv) = pde_artifacts {
            manifest.emit(dir, "snapshots.csv", &snapshot_csv)?;
        }
        manifest.finish(dir, started)?;
        if !output.pass {
            return Ok(1);
        }
        return Ok(0);
    }
    Ok(if pass { 0 } else { 1 })
}

fn push_check(
    checks: &mut Vec<CheckResult>,
    name: &str,
    value: f64,
    tolerance: f64,
    detail: String,
) {
    let pass = value <= tolerance;
    println!(
        "check {name}: {value:.3e} <= {tolerance:.1e} {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    checks.push(CheckResult {
        name: name.to_string(),
        value,
        tolerance,
        pass,
        detail,
    });
}

fn run_ode_level(
    n: f64,
    m: f64,
    order: usize,
    convention: FluxConvention,
    checks: &mut Vec<CheckResult>,
    comparisons: &mut Vec<ComparisonReport>,
) -> Result<(), CliError> {
    let cfg = ShootConfig::default();
    let shoot = shoot_alpha(n, m, convention, &cfg)?;
    let shot_profile = shooting_profile(n, m, shoot.alpha, &cfg)?;

    let series_root = solve_alpha(n, m, order, convention, 1e-10)?;
    let series = build_series(n, m, series_root.alpha, order)?;
    let series_profile = series.sample(cfg.samples)?;
    let report = compare_profiles(
        &shot_profile,
        &series_profile,
        512,
        GATE_SERIES_VS_SHOOTING,
        ErrorNorm::MaxRel,
    )?;
    push_check(
        checks,
        "series-vs-shooting",
        report.gated_error(),
        GATE_SERIES_VS_SHOOTING,
        format!(
            "order {order} root {:.6} vs shooting root {:.6}",
            series_root.alpha, shoot.alpha
        ),
    );
    comparisons.push(report);

    if (m - 1.0).abs() <= EXACT_CASE_TOLERANCE {
        let alpha = exact_alpha_m1(n, convention);
        let exact = exact_profile_linear(n, alpha)?.sample(cfg.samples)?;
        let vs_shooting = compare_profiles(
            &exact,
            &shot_profile,
            512,
            GATE_EXACT,
            ErrorNorm::MaxRel,
        )?;
        push_check(
            checks,
            "exact-vs-shooting",
            vs_shooting.gated_error(),
            GATE_EXACT,
            format!("linear profile at alpha = {alpha:.6}"),
        );
        comparisons.push(vs_shooting);
        let vs_series = compare_profiles(
            &exact,
            &series_profile,
            512,
            GATE_EXACT,
            ErrorNorm::MaxRel,
        )?;
        push_check(
            checks,
            "exact-vs-series",
            vs_series.gated_error(),
            GATE_EXACT,
            "the expansion terminates at the linear profile".to_string(),
        );
        comparisons.push(vs_series);
    }
    Ok(())
}

fn run_pde_level(
    n: f64,
    k: f64,
    nr: usize,
    t_end: f64,
    convention: FluxConvention,
    checks: &mut Vec<CheckResult>,
    comparisons: &mut Vec<ComparisonReport>,
) -> Result<String, CliError> {
    let phys = PhysicalParams::new(n, k, 1.0, 1.0)?;
    let scales = map_parameters(&phys)?;
    let cfg = ShootConfig::default();
    let shoot = shoot_alpha(n, scales.m, convention, &cfg)?;
    let profile = shooting_profile(n, scales.m, shoot.alpha, &cfg)?;
    let interp = MonotoneCubic::new(profile.thetas().to_vec(), profile.f().to_vec())?;

    let r_front_end = front_position(shoot.alpha, &scales, t_end);
    let mut config = PdeConfig::new(phys, 1.35 * r_front_end, nr, t_end);
    config.snapshot_times = (0..8)
        .map(|i| t_end * 10f64.powf(-1.0 + i as f64 / 7.0))
        .collect();
    let sol = pde_solve(&config)?;
    let snapshot_csv = {
        let mut buf = Vec::new();
        sol.write_csv(&mut buf)?;
        String::from_utf8(buf).expect("ascii")
    };

    // Field comparison at the end time, in physical coordinates.
    let last = sol.times.len() - 1;
    let u_num = &sol.snapshots[last];
    let u_sim: Vec<f64> = sol
        .r
        .iter()
        .map(|&rj| reconstruct_u(n, &scales, |th| interp.eval(th), rj, t_end))
        .collect();
    let peak = u_num.iter().copied().fold(0.0, f64::max);
    let reconstruction = Profile::new(
        ProfileSource::Shooting,
        r_front_end,
        sol.r.clone(),
        u_sim,
        Vec::new(),
    )?;
    let numeric = Profile::new(
        ProfileSource::PdeRescaled,
        sol.front_position(last, FRONT_LEVEL * peak)
            .unwrap_or(r_front_end),
        sol.r.clone(),
        u_num.clone(),
        Vec::new(),
    )?;
    let report = compare_profiles(
        &reconstruction,
        &numeric,
        512,
        GATE_FIELD_L2,
        ErrorNorm::L2Rel,
    )?;
    push_check(
        checks,
        "field-vs-reconstruction",
        report.gated_error(),
        GATE_FIELD_L2,
        format!("t = {t_end}, {nr} cells, front near {r_front_end:.4}"),
    );
    comparisons.push(report);

    let mass = mass_balance_error(&sol)?;
    push_check(
        checks,
        "mass-balance",
        mass,
        GATE_MASS,
        format!("{} snapshots against the analytic inflow", sol.times.len()),
    );

    let mut ts = Vec::new();
    let mut fronts = Vec::new();
    for idx in 0..sol.times.len() {
        let peak_i = sol.snapshots[idx].iter().copied().fold(0.0, f64::max);
        if let Some(fp) = sol.front_position(idx, FRONT_LEVEL * peak_i) {
            ts.push(sol.times[idx]);
            fronts.push(fp);
        }
    }
    let (exponent, _prefactor) = frontflux::reconstruct::fit_power_law(&ts, &fronts)?;
    let rel_dev = (exponent - scales.p).abs() / scales.p;
    push_check(
        checks,
        "front-exponent",
        rel_dev,
        GATE_FRONT_EXPONENT,
        format!("fitted {exponent:.5} vs similarity exponent {:.5}", scales.p),
    );
    Ok(snapshot_csv)
}
