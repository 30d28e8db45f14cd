//! Report types and their csv/json/plot-data serializations.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, Smnr};
use crate::BenchError;

pub const CSV_HEADER: [&str; 10] =
    ["algorithm", "alpha", "M", "smnr_db", "srnr_db", "asce", "mf_ops", "proj_ops", "mean_seconds", "trials"];

/// Mean operation counts per successful trial.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MeanCounters {
    pub matched_filters: f64,
    pub projections: f64,
    pub lookahead_projections: f64,
    pub lookahead_matched_filters: f64,
}

/// Number of trials that raised each warning.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WarningCounts {
    pub rank_deficient: u64,
    pub early_stop: u64,
    pub lookahead_early_stop: u64,
    pub candidates_clamped: u64,
    pub gram_fallback: u64,
    pub undersampled: u64,
}

/// Aggregate over the `S·T` trials of one (algorithm, α, SMNR) combination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub algorithm: String,
    pub alpha: f64,
    #[serde(rename = "M")]
    pub m: usize,
    pub smnr_db: Smnr,
    /// `None` when every trial failed.
    #[serde(with = "extended_float")]
    pub srnr_db: Option<f64>,
    #[serde(with = "extended_float")]
    pub asce: Option<f64>,
    pub mean_counters: MeanCounters,
    #[serde(with = "extended_float")]
    pub mean_seconds: Option<f64>,
    /// Successful trials.
    pub trials: u64,
    pub failures: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
    pub warnings: WarningCounts,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub seed: u64,
    /// Ordered by α, then SMNR, then algorithm, each in config order.
    pub cells: Vec<Cell>,
}

impl ExperimentReport {
    pub fn cell(&self, algorithm: &str, alpha: f64, smnr: Smnr) -> Option<&Cell> {
        self.cells.iter().find(|c| c.algorithm == algorithm && c.alpha == alpha && c.smnr_db == smnr)
    }

    pub fn load(path: &Path) -> Result<Self, BenchError> {
        let text = std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| BenchError::parse(path, e))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(format!("unknown format `{s}` (expected csv or json)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    Srnr,
    Asce,
}

impl FromStr for Measure {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, BenchError> {
        match s.to_ascii_lowercase().as_str() {
            "srnr" | "srnr_db" => Ok(Self::Srnr),
            "asce" => Ok(Self::Asce),
            _ => Err(BenchError::InvalidArgument(format!("unknown measure `{s}` (expected srnr or asce)"))),
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Measure::Srnr => "srnr_db",
            Measure::Asce => "asce",
        })
    }
}

/// `%.17g`: 17 significant digits, trailing zeros dropped; `inf`, `-inf`, `nan`
/// for non-finite values.
pub fn format_g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = mantissa.strip_prefix('-').map_or(("", mantissa), |m| ("-", m));
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let trim = |s: String| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if !(-5..17).contains(&exp) {
        let m = trim(format!("{}.{}", &digits[..1], &digits[1..]));
        return format!("{sign}{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
    }
    let body = if exp >= 0 {
        let split = exp as usize + 1;
        format!("{}.{}", &digits[..split], &digits[split..])
    } else {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
    };
    format!("{sign}{}", trim(body))
}

fn format_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "na".into(), format_g17)
}

/// One row per cell.
pub fn write_csv<W: Write>(report: &ExperimentReport, out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for c in &report.cells {
        w.write_record([
            c.algorithm.clone(),
            format_g17(c.alpha),
            c.m.to_string(),
            match c.smnr_db {
                Smnr::Clean => "clean".into(),
                Smnr::Db(v) => format_g17(v),
            },
            format_opt(c.srnr_db),
            format_opt(c.asce),
            format_g17(c.mean_counters.matched_filters),
            format_g17(c.mean_counters.projections),
            format_opt(c.mean_seconds),
            c.trials.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_report(report: &ExperimentReport, format: ReportFormat, destination: &Path) -> Result<(), BenchError> {
    let mut buf = Vec::new();
    match format {
        ReportFormat::Csv => write_csv(report, &mut buf).map_err(|e| BenchError::io(destination, e.into()))?,
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut buf, report).map_err(|e| BenchError::io(destination, e.into()))?;
            buf.push(b'\n');
        }
    }
    std::fs::write(destination, buf).map_err(|e| BenchError::io(destination, e))
}

/// Whitespace-separated table for plotting tools: one block per SMNR level
/// (separated by two blank lines), one row per α, one column per algorithm.
pub fn write_plot_data<W: Write>(report: &ExperimentReport, measure: Measure, mut out: W) -> Result<(), BenchError> {
    if report.cells.is_empty() {
        return Err(BenchError::InvalidArgument("report has no cells".into()));
    }
    let cfg = &report.config;
    let labels: Vec<String> = cfg.algorithms.iter().map(|a| a.label()).collect();
    let io = |e| BenchError::io(Path::new("<plot data>"), e);
    for (si, &smnr) in cfg.smnr_db_list.iter().enumerate() {
        if si > 0 {
            writeln!(out, "\n").map_err(io)?;
        }
        writeln!(out, "# {measure} at smnr_db = {smnr}").map_err(io)?;
        writeln!(out, "# alpha {}", labels.join(" ")).map_err(io)?;
        for &alpha in &cfg.alpha_list {
            let mut row = vec![format_g17(alpha)];
            for label in &labels {
                let value = report.cell(label, alpha, smnr).and_then(|c| match measure {
                    Measure::Srnr => c.srnr_db,
                    Measure::Asce => c.asce,
                });
                row.push(value.map_or_else(|| "nan".into(), format_g17));
            }
            writeln!(out, "{}", row.join(" ")).map_err(io)?;
        }
    }
    Ok(())
}

pub fn emit_plot_data(report: &ExperimentReport, measure: Measure, destination: &Path) -> Result<(), BenchError> {
    let mut buf = Vec::new();
    write_plot_data(report, measure, &mut buf)?;
    std::fs::write(destination, buf).map_err(|e| BenchError::io(destination, e))
}

/// `Option<f64>` as a JSON number, the string `"inf"`/`"-inf"`/`"nan"`, or null.
mod extended_float {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            None => s.serialize_none(),
            Some(x) if x.is_finite() => s.serialize_f64(*x),
            Some(x) => s.serialize_str(&super::format_g17(*x)),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Number(f64),
        Token(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        match Option::<Repr>::deserialize(d)? {
            None => Ok(None),
            Some(Repr::Number(x)) => Ok(Some(x)),
            Some(Repr::Token(t)) => match t.as_str() {
                "inf" => Ok(Some(f64::INFINITY)),
                "-inf" => Ok(Some(f64::NEG_INFINITY)),
                "nan" => Ok(Some(f64::NAN)),
                _ => Err(de::Error::custom(format!("expected a number or inf, got `{t}`"))),
            },
        }
    }
}
