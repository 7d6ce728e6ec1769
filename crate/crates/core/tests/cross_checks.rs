//! Cross-checks between the independent solver routes.
//!
//! The truncated front expansion and the inward shooting integrator share
//! no numerics beyond the seed values at the front, so agreement between
//! them is evidence that both solve the reduced problem correctly.

use frontflux::alpha::{order_stability, solve_alpha};
use frontflux::reconstruct::{compare_profiles, ErrorNorm};
use frontflux::shooting::{shoot_alpha, shooting_profile, ShootConfig};
use frontflux::tables::{discrepancy_report, reproduce_table, TableId};
use frontflux::FluxConvention;

const SERIES_ORDER: usize = 5;
const ALPHA_TOL: f64 = 1e-10;

#[test]
fn series_profile_matches_shooting_across_a_parameter_grid() {
    let cfg = ShootConfig::default();
    for &n in &[1.0, 2.0, 3.0] {
        for &m in &[0.5, 1.0, 2.0] {
            let series_root =
                solve_alpha(n, m, SERIES_ORDER, FluxConvention::Pointwise, ALPHA_TOL)
                    .unwrap_or_else(|e| panic!("series root failed at n={n}, m={m}: {e}"));
            let series = frontflux::series::build_series(n, m, series_root.alpha, SERIES_ORDER)
                .unwrap()
                .sample(401)
                .unwrap();

            let shot = shoot_alpha(n, m, FluxConvention::Pointwise, &cfg)
                .unwrap_or_else(|e| panic!("shooting root failed at n={n}, m={m}: {e}"));
            let reference = shooting_profile(n, m, shot.alpha, &cfg).unwrap();

            let report =
                compare_profiles(&reference, &series, 512, 1e-2, ErrorNorm::MaxRel).unwrap();
            assert!(
                report.pass,
                "n={n}, m={m}: max relative deviation {:.3e} exceeds 1e-2",
                report.max_rel_error
            );
            let root_gap = (series_root.alpha - shot.alpha).abs() / shot.alpha;
            assert!(
                root_gap < 1e-2,
                "n={n}, m={m}: front positions disagree by {root_gap:.3e}"
            );
        }
    }
}

#[test]
fn front_position_settles_as_the_expansion_order_grows() {
    let report = order_stability(
        1.0,
        1.0 / 3.0,
        FluxConvention::Pointwise,
        &[3, 5, 8, 12, 16],
        ALPHA_TOL,
    )
    .unwrap();
    assert!(report.stabilized, "deltas: {:?}", report.deltas);
    for pair in report.deltas.windows(2) {
        assert!(
            pair[1] < pair[0],
            "order-to-order movement must shrink: {:?}",
            report.deltas
        );
    }
    let settled = *report.alphas.last().unwrap();
    assert!(
        (settled - 1.481_903_229_1).abs() < 1e-8,
        "settled front position {settled:.10} moved"
    );
    // The shooting route lands on the same point without any expansion
    // beyond its seed.
    let shot = shoot_alpha(
        1.0,
        1.0 / 3.0,
        FluxConvention::Pointwise,
        &ShootConfig::default(),
    )
    .unwrap();
    assert!(
        (settled - shot.alpha).abs() < 1e-5,
        "order-16 root {settled:.8} vs shooting root {:.8}",
        shot.alpha
    );
}

#[test]
fn the_double_quoted_case_is_explained_by_the_normalization_split() {
    let report = discrepancy_report().unwrap();
    assert!(!report.flagged, "oracle failed to confirm the quoted value");
    assert!(
        (report.oracle_power_gradient - report.reference_power_gradient).abs() < 1e-3,
        "power-gradient oracle {:.6} vs quoted {:.4}",
        report.oracle_power_gradient,
        report.reference_power_gradient
    );
    assert!(
        (report.oracle_pointwise - report.reference_pointwise).abs() < 1e-3,
        "pointwise oracle {:.6} vs quoted {:.4}",
        report.oracle_pointwise,
        report.reference_pointwise
    );
    // Same reduced equation, so the two roots must differ by the
    // normalization alone, never by solver artifacts.
    assert!((report.shift_ratio - 2.0).abs() < 1e-12);
    assert!((report.series_power_gradient - report.oracle_power_gradient).abs() < 1e-4);
    assert!((report.series_pointwise - report.oracle_pointwise).abs() < 1e-4);
    assert!(report.reference_pointwise > report.reference_power_gradient);
}

#[test]
fn every_reference_table_is_reproduced_with_its_own_normalization() {
    let gates = [
        (TableId::One, 5e-5),
        (TableId::Two, 5e-5),
        (TableId::Three, 1e-4),
        (TableId::Four, 1e-4),
    ];
    for (table, gate) in gates {
        let report = reproduce_table(table, false).unwrap();
        assert!(
            report.max_deviation <= gate,
            "table {}: max deviation {:.3e} exceeds {gate:.0e}",
            report.table,
            report.max_deviation
        );
    }
}
