//! Reference-table reproduction with deviation and discrepancy reporting.

use crate::manifest::RunManifest;
use crate::sweep::{max_threads, parallel_map};
use crate::{CliError, CmdResult};
use clap::{Args, ValueEnum};
use frontflux::tables::{
    compute_row, discrepancy_report, rows, TableId, TableReport, TableRow,
};
use std::path::PathBuf;
use std::time::Instant;

#[derive(Args)]
pub struct TablesArgs {
    /// Reference table to reproduce (1 through 4).
    #[arg(long)]
    pub table: usize,
    /// Output format written to stdout.
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    /// Directory for the table file, discrepancy report, and manifest.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

pub fn run(args: &TablesArgs) -> CmdResult {
    let started = Instant::now();
    let threads = max_threads()?;
    let table = TableId::from_index(args.table).map_err(CliError::Solver)?;
    let specs = rows(table);
    let computed = parallel_map(&specs, threads, |row| compute_row(table, row, true));

    let mut ok_rows: Vec<TableRow> = Vec::with_capacity(specs.len());
    let mut first_err: Option<frontflux::Error> = None;
    for (spec, result) in specs.iter().zip(computed) {
        match result {
            Ok(row) => ok_rows.push(row),
            Err(e) => {
                eprintln!("row {} (n = {}, m = {}) failed: {e}", spec.index, spec.n, spec.m);
                first_err.get_or_insert(e);
            }
        }
    }
    let discrepancy = match table {
        TableId::Two | TableId::Four => match discrepancy_report() {
            Ok(d) => Some(d),
            Err(e) => {
                eprintln!("discrepancy analysis failed: {e}");
                first_err.get_or_insert(e);
                None
            }
        },
        _ => None,
    };
    let max_deviation = ok_rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
    let report = TableReport {
        table: table.index(),
        rows: ok_rows,
        max_deviation,
        discrepancy,
    };

    let body = match args.format {
        OutputFormat::Csv => render_csv(&report),
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&report)
                .map_err(|e| CliError::Usage(format!("serialization failed: {e}")))?;
            s.push('\n');
            s
        }
    };
    print!("{body}");
    if args.format == OutputFormat::Csv {
        if let Some(d) = &report.discrepancy {
            eprintln!(
                "discrepancy: n = {}, m = {:.6}: quoted {} (power-gradient) vs {} (pointwise); \
                 shooting gives {:.6} and {:.6}; flagged = {}",
                d.n,
                d.m,
                d.reference_power_gradient,
                d.reference_pointwise,
                d.oracle_power_gradient,
                d.oracle_pointwise,
                d.flagged
            );
        }
    }

    if let Some(dir) = &args.out {
        let ext = match args.format {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        };
        let mut manifest = RunManifest::new("tables");
        manifest
            .param("table", args.table)
            .param("format", ext)
            .param("threads", threads);
        manifest.emit(dir, &format!("table{}.{ext}", args.table), &body)?;
        if let Some(d) = &report.discrepancy {
            let text = serde_json::to_string_pretty(d)
                .map_err(|e| CliError::Usage(format!("serialization failed: {e}")))?;
            manifest.emit(dir, "discrepancy.json", &text)?;
        }
        manifest.finish(dir, started)?;
    }

    match first_err {
        Some(e) => Err(CliError::Solver(e)),
        None => Ok(0),
    }
}

fn render_csv(report: &TableReport) -> String {
    let mut out = String::from(
        "row,n,k,m,reference_alpha,computed_alpha,deviation,convention,\
         alternate_convention,alternate_alpha,oracle_alpha,oracle_deviation\n",
    );
    for row in &report.rows {
        let convention = row.convention.map_or("closed-form", |c| c.name());
        let (alt_conv, alt_alpha) = match row.alternate {
            Some((c, a)) => (c.name().to_string(), format!("{a:.10e}")),
            None => (String::new(), String::new()),
        };
        let (oracle_alpha, oracle_dev) = match (row.oracle_alpha, row.oracle_deviation) {
            (Some(a), Some(d)) => (format!("{a:.10e}"), format!("{d:.3e}")),
            _ => (String::new(), String::new()),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{:.10e},{:.3e},{},{},{},{},{}\n",
            row.index,
            row.n,
            row.k,
            row.m,
            row.reference,
            row.computed,
            row.deviation,
            convention,
            alt_conv,
            alt_alpha,
            oracle_alpha,
            oracle_dev,
        ));
    }
    out
}
