//! Protocol matrix execution over a bounded worker pool.
//!
//! Every (function, dimension, run-index) job gets a seed derived from the
//! base seed, so any cell can be reproduced in isolation. Workers pull
//! jobs from a shared counter; a single writer persists finished records
//! in job order, which keeps output files byte-stable regardless of the
//! worker count. Failed runs are quarantined, not fatal.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::mpsc;
use std::thread;
use std::time::{SystemTime, UNIX_EPOCH};

use sha2::{Digest, Sha256};

use crate::benchmarks::make_function;
use crate::error::{Error, Result};
use crate::harness::config::ExperimentConfig;
use crate::harness::record::{FailureRecord, RecordWriter, RunRecord, SCHEMA_VERSION};
use crate::lio;
use crate::optimizers::RandomSource;

/// One planned run of the matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobSpec {
    pub function: String,
    pub n: usize,
    pub run_index: usize,
    pub seed: u64,
}

/// What a finished matrix hands back: successful records plus the number
/// of quarantined failures.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutcome {
    pub records: Vec<RunRecord>,
    pub failures: usize,
}

/// Deterministic per-run seed from the experiment identity.
pub fn derive_seed(base_seed: u64, function: &str, n: usize, run_index: usize) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(base_seed.to_le_bytes());
    hasher.update((function.len() as u64).to_le_bytes());
    hasher.update(function.as_bytes());
    hasher.update((n as u64).to_le_bytes());
    hasher.update((run_index as u64).to_le_bytes());
    let digest = hasher.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"))
}

/// Expands a validated configuration into its full job list.
pub fn planned_jobs(config: &ExperimentConfig) -> Result<Vec<JobSpec>> {
    config.validate()?;
    let mut jobs =
        Vec::with_capacity(config.functions.len() * config.dimensions.len() * config.runs_per_cell);
    for function in &config.functions {
        for &n in &config.dimensions {
            for run_index in 0..config.runs_per_cell {
                jobs.push(JobSpec {
                    function: function.clone(),
                    n,
                    run_index,
                    seed: derive_seed(config.base_seed, function, n, run_index),
                });
            }
        }
    }
    Ok(jobs)
}

fn execute_job(config: &ExperimentConfig, job: &JobSpec, config_hash: &str) -> Result<RunRecord> {
    let function = make_function(&job.function, job.n)?;
    let pso_config = config.pso_config(job.n);
    let lio_config = config.lio_config();
    let result = lio::optimize(
        &function,
        &pso_config,
        &lio_config,
        RandomSource::new(job.seed),
    )?;
    let timestamp_unix_s = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    Ok(RunRecord {
        schema_version: SCHEMA_VERSION,
        function: job.function.clone(),
        n: job.n,
        seed: job.seed,
        baseline_fitness: result.phase1.best_fitness,
        refined_fitness: result.refined_fitness,
        p_star: result.p_star,
        qpso_time_s: result.phase1.wall_time.as_secs_f64(),
        lio_time_s: result.lio_wall_time.as_secs_f64(),
        iterations_used: result.phase1.iterations_used,
        stopped_early: result.phase1.stopped_early,
        timestamp_unix_s,
        config_hash: config_hash.to_string(),
        q_star: result.phase1.best_position,
    })
}

/// Runs the whole matrix, persisting records incrementally to
/// `config.output_path`.
///
/// `workers = 0` picks the available parallelism. Numeric outputs depend
/// only on the configuration, never on the worker count. On an I/O error
/// the already-persisted prefix is left in place and the error returned.
pub fn run_experiment(config: &ExperimentConfig, workers: usize) -> Result<ExperimentOutcome> {
    let jobs = planned_jobs(config)?;
    let config_hash = config.config_hash();
    let worker_count = if workers == 0 {
        thread::available_parallelism()
            .map(|p| p.get())
            .unwrap_or(1)
            .min(jobs.len().max(1))
    } else {
        workers.min(jobs.len().max(1))
    };

    let mut writer = RecordWriter::create(&config.output_path)?;
    let next_job = AtomicUsize::new(0);
    let stop = AtomicBool::new(false);
    let (sender, receiver) = mpsc::channel::<(usize, Result<RunRecord>)>();

    let mut records = Vec::with_capacity(jobs.len());
    let mut failures = 0usize;
    let mut io_error: Option<Error> = None;

    thread::scope(|scope| {
        for _ in 0..worker_count {
            let sender = sender.clone();
            let jobs = &jobs;
            let next_job = &next_job;
            let stop = &stop;
            let config_hash = config_hash.as_str();
            scope.spawn(move || loop {
                if stop.load(Ordering::Relaxed) {
                    break;
                }
                let index = next_job.fetch_add(1, Ordering::Relaxed);
                if index >= jobs.len() {
                    break;
                }
                let outcome = execute_job(config, &jobs[index], config_hash);
                if sender.send((index, outcome)).is_err() {
                    break;
                }
            });
        }
        drop(sender);

        // Single writer: reorder completions so the file follows job order
        // and remains an append-only prefix at any instant.
        let mut pending: BTreeMap<usize, Result<RunRecord>> = BTreeMap::new();
        let mut next_write = 0usize;
        for (index, outcome) in receiver {
            pending.insert(index, outcome);
            while let Some(outcome) = pending.remove(&next_write) {
                match outcome {
                    Ok(record) => {
                        if io_error.is_none() {
                            if let Err(e) = writer.append(&record) {
                                io_error = Some(e);
                                stop.store(true, Ordering::Relaxed);
                            }
                        }
                        records.push(record);
                    }
                    Err(run_error) => {
                        failures += 1;
                        let job = &jobs[next_write];
                        let failure = FailureRecord {
                            function: job.function.clone(),
                            n: job.n,
                            seed: job.seed,
                            error: run_error.to_string(),
                        };
                        if io_error.is_none() {
                            if let Err(e) = writer.quarantine(&failure) {
                                io_error = Some(e);
                                stop.store(true, Ordering::Relaxed);
                            }
                        }
                    }
                }
                next_write += 1;
            }
        }
    });

    if let Some(error) = io_error {
        return Err(error);
    }
    Ok(ExperimentOutcome { records, failures })
}
