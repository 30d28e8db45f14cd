//! Wall-clock running time per recovery at `M = ⌈K log N⌉`.
//!
//! Timings are informational: they depend on the machine and are never
//! compared against thresholds. Runs are serial, and one warm-up recovery per
//! algorithm and `(N, K)` pair is excluded.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use atomsel_core::signal::{
    apply_measurement, generate_sensing_matrix, generate_sparse_signal, noise_sigma_for_smnr,
};
use atomsel_core::{Matrix, NoiseSpec, OpCounters, SeededRng, Signal};
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, Smnr};
use crate::report::format_g17;
use crate::BenchError;

const STREAM_TIMING: u64 = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingRow {
    pub algorithm: String,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub mean_seconds: f64,
    pub mf_ops: f64,
    pub proj_ops: f64,
    pub lookahead_proj_ops: f64,
    /// Timed recoveries (instances × repetitions).
    pub recoveries: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingTable {
    pub log_base: f64,
    pub repetitions: usize,
    pub smnr_db: Smnr,
    pub rows: Vec<TimingRow>,
}

/// `⌈K log_base N⌉`.
pub fn timing_measurements(n: usize, k: usize, log_base: f64) -> usize {
    (k as f64 * (n as f64).ln() / log_base.ln()).ceil() as usize
}

/// Times every configured algorithm on `S·T` instances per `(N, K)` pair,
/// `repetitions` times each. The SMNR is the first entry of `smnr_db_list`.
/// `L` is capped at `K` for pairs with small `K`.
pub fn measure_running_time(config: &ExperimentConfig, repetitions: usize) -> Result<TimingTable, BenchError> {
    if repetitions == 0 {
        return Err(BenchError::InvalidArgument("repetitions must be at least 1".into()));
    }
    config.validate()?;
    let pairs = if config.timing_pairs.is_empty() { vec![[config.n, config.k]] } else { config.timing_pairs.clone() };
    let smnr = config.smnr_db_list[0];
    let root = SeededRng::new(config.master_seed);
    let mut rows = Vec::new();

    for (pi, &[n, k]) in pairs.iter().enumerate() {
        let m = timing_measurements(n, k, config.log_base);
        if k == 0 || k >= m || m > n {
            return Err(BenchError::InvalidConfig(format!(
                "timing pair (N = {n}, K = {k}) gives M = {m}; need K < M <= N"
            )));
        }
        let mut matrices: Vec<Matrix> = Vec::with_capacity(config.t);
        let mut instances = Vec::with_capacity(config.s * config.t);
        for t in 0..config.t as u64 {
            let a: Matrix = generate_sensing_matrix(m, n, &mut root.derive(&[STREAM_TIMING, pi as u64, t]))?;
            for s in 0..config.s as u64 {
                let mut rng = root.derive(&[STREAM_TIMING, pi as u64, t, s]);
                let x: Signal = generate_sparse_signal(n, k, config.signal_kind, &mut rng)?;
                let noise = match smnr {
                    Smnr::Clean => NoiseSpec::Clean,
                    Smnr::Db(db) => NoiseSpec::Gaussian { sigma: noise_sigma_for_smnr(k, m, db, config.signal_kind) },
                };
                let y = apply_measurement(&a, &x, noise, &mut rng)?;
                instances.push((t as usize, y));
            }
            matrices.push(a);
        }

        for spec in &config.algorithms {
            let mut capped = spec.clone();
            capped.l = capped.l.min(k);
            let pc = capped.pursuit_config(k, config.use_recursive_gram);
            pc.validate()?;
            let (t0, y0) = &instances[0];
            spec.name.run(&matrices[*t0], y0, &pc)?;

            let mut counters = OpCounters::default();
            let mut seconds = 0.0;
            for rep in 0..repetitions {
                for (t, y) in &instances {
                    let start = Instant::now();
                    let r = spec.name.run(&matrices[*t], y, &pc)?;
                    seconds += start.elapsed().as_secs_f64();
                    if rep == 0 {
                        counters += r.counters;
                    }
                }
            }
            let count = instances.len() as f64;
            rows.push(TimingRow {
                algorithm: spec.label(),
                n,
                k,
                m,
                mean_seconds: seconds / (count * repetitions as f64),
                mf_ops: counters.matched_filters as f64 / count,
                proj_ops: counters.projections as f64 / count,
                lookahead_proj_ops: counters.lookahead_projections as f64 / count,
                recoveries: (instances.len() * repetitions) as u64,
            });
        }
    }
    Ok(TimingTable { log_base: config.log_base, repetitions, smnr_db: smnr, rows })
}

/// JSON when `destination` ends in `.json`, csv otherwise.
pub fn emit_timing(table: &TimingTable, destination: &Path) -> Result<(), BenchError> {
    let io = |e: std::io::Error| BenchError::io(destination, e);
    let mut buf = Vec::new();
    if destination.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        serde_json::to_writer_pretty(&mut buf, table).map_err(|e| io(e.into()))?;
        buf.push(b'\n');
    } else {
        let mut w = csv::Writer::from_writer(&mut buf);
        let header = ["algorithm", "N", "K", "M", "mean_seconds", "mf_ops", "proj_ops", "lookahead_proj_ops", "recoveries"];
        let csv_err = |e: csv::Error| io(e.into());
        w.write_record(header).map_err(csv_err)?;
        for r in &table.rows {
            w.write_record([
                r.algorithm.clone(),
                r.n.to_string(),
                r.k.to_string(),
                r.m.to_string(),
                format_g17(r.mean_seconds),
                format_g17(r.mf_ops),
                format_g17(r.proj_ops),
                format_g17(r.lookahead_proj_ops),
                r.recoveries.to_string(),
            ])
            .map_err(csv_err)?;
        }
        w.flush().map_err(io)?;
    }
    std::fs::File::create(destination).and_then(|mut f| f.write_all(&buf)).map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_log_measurements() {
        assert_eq!(timing_measurements(500, 10, std::f64::consts::E), 63);
        assert_eq!(timing_measurements(500, 20, std::f64::consts::E), 125);
        assert_eq!(timing_measurements(1000, 40, std::f64::consts::E), 277);
        assert_eq!(timing_measurements(500, 20, 10.0), 54);
    }
}
