//! CSV traces and gap-ratio diagnostics.

use std::io::Write;

use crate::error::Result;
use crate::solvers::{IterationRecord, Trace};

pub const CSV_HEADER: &str = "k,fevals,gevals,proxevals,cpu_ns,f_val,phi_star,gap,ratio,alpha,lk,lambda_cum";

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn csv_row(r: &IterationRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{}",
        r.k,
        r.fevals,
        r.gevals,
        r.proxevals,
        r.cpu_ns,
        r.f_val,
        opt(r.phi_star),
        opt(r.gap),
        opt(r.ratio),
        opt(r.alpha),
        r.lk,
        opt(r.lambda_cum),
    )
}

/// Writes the trace as CSV; undefined values are empty fields.
pub fn write_trace_csv<W: Write>(trace: &Trace, mut out: W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in &trace.records {
        writeln!(out, "{}", csv_row(r))?;
    }
    out.flush()?;
    Ok(())
}

/// Slack allowed above the theoretical contraction factor.
pub const RATIO_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct RatioRow {
    pub k: usize,
    pub ratio: Option<f64>,
    /// `1 - alpha_k` of the step that produced row `k`; `None` for GD.
    pub bound: Option<f64>,
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioReport {
    /// `1 - mu/L`.
    pub plain_line: f64,
    /// `1 - sqrt(mu/L)`.
    pub accelerated_line: f64,
    pub rows: Vec<RatioRow>,
}

impl RatioReport {
    pub fn flagged(&self) -> Vec<usize> {
        self.rows.iter().filter(|r| r.flagged).map(|r| r.k).collect()
    }

    pub fn max_excess(&self) -> f64 {
        self.rows
            .iter()
            .filter_map(|r| Some(r.ratio? - r.bound?))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "k,ratio,bound,plain_line,accelerated_line,flag")?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                r.k,
                opt(r.ratio),
                opt(r.bound),
                self.plain_line,
                self.accelerated_line,
                if r.flagged { "EXCEEDS" } else { "" }
            )?;
        }
        Ok(())
    }
}

/// Gap ratios against the theoretical lines. A row is flagged when its
/// ratio exceeds `1 - alpha_k` by more than `1e-12`. Rows without a lower
/// bound (gradient descent) carry no bound and are never flagged.
pub fn ratio_report(trace: &Trace) -> RatioReport {
    let q = trace.mu / trace.lipschitz;
    let has_bound = trace.algorithm.has_certificate();
    let rows = trace
        .records
        .iter()
        .skip(1)
        .map(|r| {
            let bound = if has_bound { r.alpha.map(|a| 1.0 - a) } else { None };
            let flagged = matches!((r.ratio, bound), (Some(x), Some(b)) if x > b + RATIO_SLACK);
            RatioRow { k: r.k, ratio: r.ratio, bound, flagged }
        })
        .collect();
    RatioReport { plain_line: 1.0 - q, accelerated_line: 1.0 - q.sqrt(), rows }
}
