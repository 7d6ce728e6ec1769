//! Single-case front-position solve.

use crate::manifest::RunManifest;
use crate::{resolve_exponents, CliError, CmdResult};
use clap::Args;
use frontflux::alpha::{solve_alpha, AlphaSolveReport};
use frontflux::shooting::{shoot_alpha, ShootConfig, ShootReport};
use frontflux::FluxConvention;
use serde::Serialize;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Args)]
pub struct AlphaArgs {
    /// Nonlinearity exponent of the conductivity.
    #[arg(long)]
    pub n: f64,
    /// Flux growth exponent; converted to m internally.
    #[arg(long, conflicts_with = "m", allow_negative_numbers = true)]
    pub k: Option<f64>,
    /// Similarity exponent; alternative to --k.
    #[arg(long, allow_negative_numbers = true)]
    pub m: Option<f64>,
    /// Expansion order of the boundary residual.
    #[arg(long, default_value_t = 5)]
    pub order: usize,
    /// Boundary-flux normalization: pointwise or power-gradient.
    #[arg(long, default_value = "pointwise")]
    pub convention: FluxConvention,
    /// Front-position tolerance of the root refinement.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Also solve by shooting and report the difference.
    #[arg(long)]
    pub oracle: bool,
    /// Directory for alpha.json and the run manifest.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct AlphaOutput {
    solve: AlphaSolveReport,
    oracle: Option<ShootReport>,
}

pub fn run(args: &AlphaArgs) -> CmdResult {
    let started = Instant::now();
    let (m, k) = resolve_exponents(args.n, args.k, args.m)?;
    let solve = solve_alpha(args.n, m, args.order, args.convention, args.tol)?;
    let oracle = if args.oracle {
        Some(shoot_alpha(args.n, m, args.convention, &ShootConfig::default())?)
    } else {
        None
    };

    println!(
        "alpha solve: n = {}, m = {m} (k = {k}), order {}, convention {}",
        args.n, args.order, args.convention
    );
    println!("alpha = {:.12e}", solve.alpha);
    println!("residual at root = {:.3e}", solve.residual_at_root);
    println!(
        "bracket = [{:.6e}, {:.6e}], iterations = {}",
        solve.bracket[0], solve.bracket[1], solve.iterations
    );
    if solve.extra_roots.is_empty() {
        println!("extra roots: none");
    } else {
        let list: Vec<String> = solve.extra_roots.iter().map(|r| format!("{r:.12e}")).collect();
        println!("extra roots: {}", list.join(", "));
    }
    if let Some(oracle) = &oracle {
        println!(
            "oracle (shooting): alpha = {:.12e}, difference = {:.3e}",
            oracle.alpha,
            (oracle.alpha - solve.alpha).abs()
        );
    }

    if let Some(dir) = &args.out {
        let output = AlphaOutput { solve, oracle };
        let body = serde_json::to_string_pretty(&output)
            .map_err(|e| CliError::Usage(format!("serialization failed: {e}")))?;
        let mut manifest = RunManifest::new("alpha");
        manifest
            .param("n", args.n)
            .param("m", m)
            .param("k", k)
            .param("order", args.order)
            .param("oracle", args.oracle)
            .tolerance("alpha_tol", args.tol);
        manifest.convention = Some(args.convention.name().to_string());
        manifest.emit(dir, "alpha.json", &body)?;
        manifest.finish(dir, started)?;
    }
    Ok(0)
}
