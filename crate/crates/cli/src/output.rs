use std::fmt::Write as _;
use std::path::Path;

use spinstar_core::analysis::{format_sig, TimeSeries, VerifyReport};

use crate::args::Format;
use crate::error::Result;

pub fn render_series(series: &TimeSeries, format: Format) -> Result<String> {
    Ok(match format {
        Format::Csv => series.to_csv(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(series).expect("time series serialize");
            s.push('\n');
            s
        }
    })
}

/// Gnuplot script plotting every column of `csv` against t.
pub fn gnuplot_script(csv: &Path, series: &TimeSeries) -> String {
    let name = csv
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str("set key outside right autotitle columnhead\n");
    s.push_str("set xlabel 't (1/J)'\n");
    s.push_str("set grid\n");
    let plots: Vec<String> = (0..series.columns.len())
        .map(|k| format!("'{name}' using 1:{} with lines", k + 2))
        .collect();
    let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    s.push_str("pause mouse close\n");
    s
}

pub fn render_report(report: &VerifyReport) -> String {
    let width = report
        .checks
        .iter()
        .map(|c| c.check.len())
        .max()
        .unwrap_or(5)
        .max(5);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<width$}  {:>12}  {:>9}  {:>7}  result",
        "check", "max_dev", "tolerance", "samples"
    );
    for c in &report.checks {
        let _ = writeln!(
            s,
            "{:<width$}  {:>12}  {:>9}  {:>7}  {}",
            c.check,
            format_sig(c.max_deviation, 4),
            format_sig(c.tolerance, 3),
            c.samples,
            if c.pass { "PASS" } else { "FAIL" }
        );
    }
    for n in &report.notices {
        let _ = writeln!(s, "note: {n}");
    }
    let failed = report.failures().count();
    let _ = writeln!(s, "{} checks, {} failed", report.checks.len(), failed);
    s
}
