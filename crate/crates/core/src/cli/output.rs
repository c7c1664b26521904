//! Text, CSV and JSON renderings of every command's result.
//!
//! JSON documents share the envelope `{meta, rows}` or `{meta, report}`,
//! described by `schema/output.schema.json`.

use std::fmt::Write as _;

use serde::Serialize;

use super::args::Format;
use crate::constants::CONSTANTS_VERSION;
use crate::ion::RateBreakdown;
use crate::refcheck::{standard_grid, DeviationReport, LimitResidual};
use crate::sweep::{ScanTable, Units};

pub const SCHEMA_VERSION: &str = "crossfield-output/1";

pub const SCAN_CSV_HEADER: [&str; 9] = [
    "state",
    "zalpha",
    "epsilon",
    "f",
    "xi",
    "ln_w_reduced",
    "w_reduced",
    "w_si",
    "flags",
];

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub schema_version: &'static str,
    pub constants_version: &'static str,
    pub grid_version: String,
    pub kind: &'static str,
}

impl Meta {
    pub fn new(kind: &'static str) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            schema_version: SCHEMA_VERSION,
            constants_version: CONSTANTS_VERSION,
            grid_version: standard_grid().version.clone(),
            kind,
        }
    }
}

/// Shortest round-trip scientific notation; deterministic across runs.
fn num(v: f64) -> String {
    format!("{v:e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv write");
    for row in rows {
        w.write_record(&row).expect("in-memory csv write");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("csv is utf-8")
}

fn json_doc(meta: Meta, key: &str, body: impl Serialize) -> String {
    let mut doc = serde_json::Map::new();
    doc.insert(
        "meta".into(),
        serde_json::to_value(meta).expect("meta serializes"),
    );
    doc.insert(
        key.into(),
        serde_json::to_value(body).expect("body serializes"),
    );
    let mut s = serde_json::to_string_pretty(&serde_json::Value::Object(doc)).expect("json");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct RateReport<'a> {
    state: &'a str,
    #[serde(flatten)]
    breakdown: &'a RateBreakdown,
}

pub fn render_rate(label: &str, b: &RateBreakdown, format: Format) -> String {
    match format {
        Format::Json => json_doc(
            Meta::new("rate"),
            "report",
            RateReport {
                state: label,
                breakdown: b,
            },
        ),
        Format::Csv => csv_bytes(
            &[
                "state",
                "zalpha",
                "epsilon",
                "eta",
                "f",
                "xi",
                "tunnel_exponent",
                "exp_factor",
                "preexp",
                "coulomb",
                "c_lambda_sq",
                "ln_w_reduced",
                "w_reduced",
                "w_si",
                "flags",
            ],
            [vec![
                label.to_string(),
                num(b.zalpha),
                num(b.epsilon),
                num(b.eta),
                num(b.f),
                num(b.xi.value()),
                num(b.tunnel_exponent),
                num(b.exp_factor),
                num(b.preexp),
                num(b.coulomb),
                num(b.c_lambda_sq),
                num(b.ln_w_reduced),
                num(b.w_reduced),
                num(b.w_si),
                b.flags.to_string(),
            ]],
        ),
        Format::Text => {
            let mut s = String::new();
            let lines: [(&str, String); 14] = [
                ("state", label.to_string()),
                ("Z alpha", num(b.zalpha)),
                ("epsilon", num(b.epsilon)),
                ("eta", num(b.eta)),
                ("f = E/E_S", num(b.f)),
                ("xi", num(b.xi.value())),
                ("tunnel exponent", num(b.tunnel_exponent)),
                ("Exp", num(b.exp_factor)),
                ("P", num(b.preexp)),
                ("Q", num(b.coulomb)),
                ("C_lambda^2", num(b.c_lambda_sq)),
                ("ln w [m c^2/hbar]", num(b.ln_w_reduced)),
                ("w [m c^2/hbar]", num(b.w_reduced)),
                ("w [1/s]", num(b.w_si)),
            ];
            for (k, v) in lines {
                let _ = writeln!(s, "{k:>18}  {v}");
            }
            let flags = if b.flags.is_empty() {
                "-".to_string()
            } else {
                b.flags.to_string()
            };
            let _ = writeln!(s, "{:>18}  {flags}", "flags");
            s
        }
    }
}

pub fn render_scan(table: &ScanTable, format: Format) -> String {
    match format {
        Format::Json => json_doc(Meta::new("scan"), "rows", &table.rows),
        Format::Csv => csv_bytes(
            &SCAN_CSV_HEADER,
            table.rows.iter().map(|r| {
                vec![
                    r.state.clone(),
                    opt(r.zalpha),
                    opt(r.epsilon),
                    num(r.f),
                    opt(r.xi),
                    opt(r.ln_w_reduced),
                    num(r.w_reduced.unwrap_or(0.0)),
                    num(r.w_si.unwrap_or(0.0)),
                    r.flags.to_string(),
                ]
            }),
        ),
        Format::Text => {
            let unit = match table.units {
                Units::Reduced => "w [m c^2/hbar]",
                Units::Si => "w [1/s]",
            };
            let mut s = String::new();
            let _ = writeln!(
                s,
                "{:<12} {:>12} {:>14} {:>16} {:>16}  flags",
                "state", "f", "xi", "ln w", unit
            );
            for r in &table.rows {
                let w = match table.units {
                    Units::Reduced => r.w_reduced,
                    Units::Si => r.w_si,
                };
                let _ = writeln!(
                    s,
                    "{:<12} {:>12.4e} {:>14} {:>16} {:>16}  {}",
                    r.state,
                    r.f,
                    r.xi.map(|v| format!("{v:.6e}"))
                        .unwrap_or_else(|| "-".into()),
                    r.ln_w_reduced
                        .map(|v| format!("{v:.6e}"))
                        .unwrap_or_else(|| "-".into()),
                    w.map(|v| format!("{v:.6e}")).unwrap_or_else(|| "-".into()),
                    r.error.as_deref().unwrap_or(&r.flags.to_string())
                );
            }
            s
        }
    }
}

pub fn render_compare(report: &DeviationReport, format: Format) -> String {
    match format {
        Format::Json => json_doc(Meta::new("compare"), "report", report),
        Format::Csv => csv_bytes(
            &["zalpha", "f", "ln_w_direct", "ln_w_factored", "rel_dev"],
            report.points.iter().map(|p| {
                vec![
                    num(p.zalpha),
                    num(p.f),
                    num(p.ln_w_direct),
                    num(p.ln_w_factored),
                    num(p.rel_dev),
                ]
            }),
        ),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "precision {}  tolerance {:e}",
                report.precision,
                report.precision.equivalence_tolerance()
            );
            let _ = writeln!(
                s,
                "{:>8} {:>10} {:>22} {:>22} {:>12}",
                "zalpha", "f", "ln w (direct)", "ln w (factored)", "rel dev"
            );
            for p in &report.points {
                let _ = writeln!(
                    s,
                    "{:>8} {:>10.3e} {:>22.15e} {:>22.15e} {:>12.3e}",
                    p.zalpha, p.f, p.ln_w_direct, p.ln_w_factored, p.rel_dev
                );
            }
            for fail in &report.failures {
                let _ = writeln!(
                    s,
                    "FAILED zalpha={} f={}: {}",
                    fail.zalpha, fail.f, fail.reason
                );
            }
            let _ = writeln!(
                s,
                "max deviation {:.3e} at zalpha={} f={}: {}",
                report.max_dev,
                report.worst_point.0,
                report.worst_point.1,
                if report.passes() { "PASS" } else { "FAIL" }
            );
            s
        }
    }
}

pub fn render_limits(table: &[LimitResidual], pass: bool, format: Format) -> String {
    match format {
        Format::Json => json_doc(Meta::new("limits"), "rows", table),
        Format::Csv => csv_bytes(
            &["delta", "ratio", "residual"],
            table
                .iter()
                .map(|r| vec![num(r.delta), num(r.ratio), num(r.residual)]),
        ),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "{:>10} {:>24} {:>12}", "delta", "ratio", "residual");
            for r in table {
                let _ = writeln!(
                    s,
                    "{:>10.1e} {:>24.17} {:>12.4e}",
                    r.delta, r.ratio, r.residual
                );
            }
            let _ = writeln!(s, "{}", if pass { "PASS" } else { "FAIL" });
            s
        }
    }
}
