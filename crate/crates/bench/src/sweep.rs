//! Monte-Carlo sweep over α and SMNR.
//!
//! For every α, `T` sensing matrices are drawn; for each matrix `S` sparse
//! signals; each signal is measured at every SMNR level and handed to every
//! configured algorithm. All randomness comes from sub-seeds of
//! `master_seed` keyed by `(α index, t, s, SMNR index)`, and per-trial results
//! are reduced in trial order, so the report does not depend on the number of
//! worker threads.

use std::time::Instant;

use atomsel_core::signal::{
    apply_measurement, generate_sensing_matrix, generate_sparse_signal, noise_sigma_for_energy,
    noise_sigma_for_smnr,
};
use atomsel_core::{
    Config, Matrix, MetricsAccumulator, NoiseSpec, OpCounters, PursuitError, SeededRng, Signal, Warnings,
};
use rayon::prelude::*;

use crate::config::{AlgorithmSpec, ExperimentConfig, Smnr, SmnrCalibration};
use crate::report::{Cell, ExperimentReport, MeanCounters, WarningCounts};
use crate::BenchError;

pub(crate) const STREAM_MATRIX: u64 = 1;
pub(crate) const STREAM_SIGNAL: u64 = 2;
pub(crate) const STREAM_NOISE: u64 = 3;

enum Outcome {
    Done { metrics: MetricsAccumulator, counters: OpCounters, warnings: Warnings, seconds: f64 },
    Failed(String),
}

#[derive(Default)]
struct CellTotals {
    metrics: Option<MetricsAccumulator>,
    counters: OpCounters,
    warnings: WarningCounts,
    seconds: f64,
    failures: u64,
    first_failure: Option<String>,
}

impl CellTotals {
    fn add(&mut self, outcome: &Outcome) -> Result<(), BenchError> {
        match outcome {
            Outcome::Done { metrics, counters, warnings, seconds } => {
                self.metrics = Some(match &self.metrics {
                    None => *metrics,
                    Some(m) => m.merge(metrics)?,
                });
                self.counters += *counters;
                self.seconds += seconds;
                let w = &mut self.warnings;
                w.rank_deficient += warnings.rank_deficient as u64;
                w.early_stop += warnings.early_stop as u64;
                w.lookahead_early_stop += warnings.lookahead_early_stop as u64;
                w.candidates_clamped += warnings.candidates_clamped as u64;
                w.gram_fallback += warnings.gram_fallback as u64;
                w.undersampled += warnings.undersampled as u64;
            }
            Outcome::Failed(msg) => {
                self.failures += 1;
                self.first_failure.get_or_insert_with(|| msg.clone());
            }
        }
        Ok(())
    }

    fn into_cell(self, spec: &AlgorithmSpec, alpha: f64, m: usize, smnr: Smnr, timed: bool) -> Result<Cell, BenchError> {
        let trials = self.metrics.map_or(0, |m| m.trials);
        let per = |v: u64| if trials == 0 { 0.0 } else { v as f64 / trials as f64 };
        let (srnr_db, asce) = match &self.metrics {
            Some(acc) => (Some(acc.srnr_db()?), Some(acc.asce()?)),
            None => (None, None),
        };
        Ok(Cell {
            algorithm: spec.label(),
            alpha,
            m,
            smnr_db: smnr,
            srnr_db,
            asce,
            mean_counters: MeanCounters {
                matched_filters: per(self.counters.matched_filters),
                projections: per(self.counters.projections),
                lookahead_projections: per(self.counters.lookahead_projections),
                lookahead_matched_filters: per(self.counters.lookahead_matched_filters),
            },
            mean_seconds: (timed && trials > 0).then(|| self.seconds / trials as f64),
            trials,
            failures: self.failures,
            first_failure: self.first_failure,
            warnings: self.warnings,
        })
    }
}

fn thread_pool(workers: Option<usize>) -> Result<rayon::ThreadPool, BenchError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        if n == 0 {
            return Err(BenchError::InvalidArgument("workers must be at least 1".into()));
        }
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| BenchError::Pool(e.to_string()))
}

struct TrialContext<'a> {
    config: &'a ExperimentConfig,
    specs: &'a [(AlgorithmSpec, Config)],
    root: &'a SeededRng,
    alpha_index: u64,
    m: usize,
}

impl TrialContext<'_> {
    /// Outcomes for one signal, indexed `[smnr][algorithm]` flattened.
    fn run(&self, a: &Matrix, t: u64, s: u64) -> Result<Vec<Outcome>, PursuitError> {
        let cfg = self.config;
        let mut rng = self.root.derive(&[self.alpha_index, t, s, STREAM_SIGNAL]);
        let x: Signal = generate_sparse_signal(cfg.n, cfg.k, cfg.signal_kind, &mut rng)?;
        let mut out = Vec::with_capacity(cfg.smnr_db_list.len() * self.specs.len());
        for (si, smnr) in cfg.smnr_db_list.iter().enumerate() {
            let noise = match *smnr {
                Smnr::Clean => NoiseSpec::Clean,
                Smnr::Db(db) => NoiseSpec::Gaussian {
                    sigma: match cfg.smnr_calibration {
                        SmnrCalibration::Expected => noise_sigma_for_smnr(cfg.k, self.m, db, cfg.signal_kind),
                        SmnrCalibration::Realized => noise_sigma_for_energy(x.energy(), self.m, db),
                    },
                },
            };
            let mut noise_rng = self.root.derive(&[self.alpha_index, t, s, si as u64, STREAM_NOISE]);
            let y = apply_measurement(a, &x, noise, &mut noise_rng)?;
            for (spec, pc) in self.specs {
                let start = cfg.record_timing.then(Instant::now);
                let result = spec.name.run(a, &y, pc);
                let seconds = start.map_or(0.0, |s| s.elapsed().as_secs_f64());
                out.push(match result {
                    Ok(r) => {
                        let mut metrics = MetricsAccumulator::new(cfg.k);
                        metrics.accumulate(&x, &r.estimate, &r.support)?;
                        Outcome::Done { metrics, counters: r.counters, warnings: r.warnings, seconds }
                    }
                    Err(e) => Outcome::Failed(e.to_string()),
                });
            }
        }
        Ok(out)
    }
}

/// Runs the full sweep on `workers` threads (all available cores when `None`).
pub fn run_sweep(config: &ExperimentConfig, workers: Option<usize>) -> Result<ExperimentReport, BenchError> {
    config.validate()?;
    let pool = thread_pool(workers)?;
    let specs: Vec<(AlgorithmSpec, Config)> = config
        .algorithms
        .iter()
        .map(|s| (s.clone(), s.pursuit_config(config.k, config.use_recursive_gram)))
        .collect();
    let root = SeededRng::new(config.master_seed);
    let mut cells = Vec::new();

    for (ai, &alpha) in config.alpha_list.iter().enumerate() {
        let m = config.measurements(alpha)?;
        let ctx = TrialContext { config, specs: &specs, root: &root, alpha_index: ai as u64, m };
        let per_matrix: Vec<Vec<Vec<Outcome>>> = pool.install(|| {
            (0..config.t as u64)
                .into_par_iter()
                .map(|t| {
                    let mut rng = root.derive(&[ai as u64, t, STREAM_MATRIX]);
                    let a: Matrix = generate_sensing_matrix(m, config.n, &mut rng)?;
                    (0..config.s as u64).into_par_iter().map(|s| ctx.run(&a, t, s)).collect()
                })
                .collect::<Result<_, PursuitError>>()
        })?;

        let width = specs.len();
        for (si, &smnr) in config.smnr_db_list.iter().enumerate() {
            for (gi, (spec, _)) in specs.iter().enumerate() {
                let mut totals = CellTotals::default();
                for trial in per_matrix.iter().flatten() {
                    totals.add(&trial[si * width + gi])?;
                }
                cells.push(totals.into_cell(spec, alpha, m, smnr, config.record_timing)?);
            }
        }
    }
    Ok(ExperimentReport { config: config.clone(), seed: config.master_seed, cells })
}
