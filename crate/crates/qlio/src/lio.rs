//! Last-iteration optimization: the cheap second phase.
//!
//! The global phase searches quaternion space under the Euclidean
//! projection and yields a best solution with fitness `mu`. This module
//! freezes that solution and retunes the projection exponent itself,
//! minimizing
//!
//! ```text
//! g(p) = f(M(q*_1, p), ..., M(q*_n, p)),   1 <= p <= p_max
//! ```
//!
//! with a black-hole search. A single extra exponent evaluation costs one
//! objective call, so the whole phase is a rounding error next to the
//! global one, yet frequently improves the projected fitness.

use std::time::{Duration, Instant};

use crate::benchmarks::ObjectiveFunction;
use crate::error::{Error, Result};
use crate::hypernum::{map_vector, PExponent, Quaternion};
use crate::optimizers::pso::{self, PhaseResult, PsoConfig};
use crate::optimizers::{black_hole, RandomSource};

/// Settings of the exponent-refinement phase.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LioConfig {
    /// Upper end of the feasible exponent interval `[1, p_max]`.
    pub p_max: f64,
    pub bh_agents: usize,
    pub bh_iterations: usize,
    /// Start one black-hole star at `p = 2`, so the refined fitness can
    /// never be worse than the Euclidean one.
    pub seed_p2: bool,
}

impl Default for LioConfig {
    fn default() -> Self {
        Self {
            p_max: 5.0,
            bh_agents: 20,
            bh_iterations: 50,
            seed_p2: true,
        }
    }
}

impl LioConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.p_max.is_finite() || self.p_max <= 1.0 {
            return Err(Error::InvalidConfig(format!(
                "p_max must be finite and > 1, got {}",
                self.p_max
            )));
        }
        if self.seed_p2 && self.p_max < 2.0 {
            return Err(Error::InvalidConfig(format!(
                "seed_p2 requires p_max >= 2, got {}",
                self.p_max
            )));
        }
        if self.bh_agents < 2 {
            return Err(Error::InvalidConfig(
                "bh_agents must be at least 2".into(),
            ));
        }
        if self.bh_iterations == 0 {
            return Err(Error::InvalidConfig(
                "bh_iterations must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Complete two-phase outcome for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    /// Global phase: best hypercomplex solution and its `p = 2` fitness.
    pub phase1: PhaseResult,
    /// Fitness of the frozen solution under the refined exponent.
    pub refined_fitness: f64,
    /// The refined exponent, in `[1, p_max]`.
    pub p_star: f64,
    pub lio_wall_time: Duration,
    /// Objective evaluations spent by the refinement phase.
    pub lio_evaluations: usize,
    pub lio_config: LioConfig,
}

impl RunResult {
    /// Euclidean-projection fitness from the global phase.
    pub fn baseline_fitness(&self) -> f64 {
        self.phase1.best_fitness
    }
}

/// The frozen-solution objective `g(p)` over the projection exponent.
#[derive(Debug)]
pub struct ProjectionObjective<'a> {
    function: &'a ObjectiveFunction,
    solution: &'a [Quaternion],
    p_max: f64,
}

impl<'a> ProjectionObjective<'a> {
    pub fn new(
        function: &'a ObjectiveFunction,
        solution: &'a [Quaternion],
        p_max: f64,
    ) -> Result<Self> {
        if solution.len() != function.dimension() {
            return Err(Error::ShapeMismatch {
                expected: function.dimension(),
                actual: solution.len(),
            });
        }
        if !p_max.is_finite() || p_max <= 1.0 {
            return Err(Error::InvalidConfig(format!(
                "p_max must be finite and > 1, got {p_max}"
            )));
        }
        Ok(Self {
            function,
            solution,
            p_max,
        })
    }

    /// `g(p)`; shares the projection code path with the global phase, so
    /// `g(2)` reproduces the phase-1 fitness bit for bit.
    pub fn evaluate(&self, p: f64) -> Result<f64> {
        if !(1.0..=self.p_max).contains(&p) {
            return Err(Error::ExponentOutOfRange {
                p,
                p_max: self.p_max,
            });
        }
        let exponent = PExponent::new(p)?;
        let mapped = map_vector(self.solution, self.function.bounds(), exponent)?;
        self.function.evaluate(&mapped)
    }
}

/// Refines a finished global phase by optimizing the projection exponent
/// of its (untouched) best solution.
pub fn refine(
    f: &ObjectiveFunction,
    phase1: PhaseResult,
    config: &LioConfig,
    source: RandomSource,
) -> Result<RunResult> {
    config.validate()?;
    let objective = ProjectionObjective::new(f, &phase1.best_position, config.p_max)?;
    let seeds: &[f64] = if config.seed_p2 { &[2.0] } else { &[] };
    let started = Instant::now();
    let bh = black_hole::run(
        |p| objective.evaluate(p),
        1.0,
        config.p_max,
        config.bh_agents,
        config.bh_iterations,
        source,
        seeds,
    )?;
    let lio_wall_time = started.elapsed();
    Ok(RunResult {
        phase1,
        refined_fitness: bh.best_fitness,
        p_star: bh.best_x,
        lio_wall_time,
        lio_evaluations: bh.evaluations,
        lio_config: *config,
    })
}

/// Full pipeline: global phase then exponent refinement.
///
/// The global phase draws from the given stream; the refinement draws from
/// the next stream of the same seed, so both phases are reproducible in
/// isolation.
pub fn optimize(
    f: &ObjectiveFunction,
    pso_config: &PsoConfig,
    lio_config: &LioConfig,
    source: RandomSource,
) -> Result<RunResult> {
    lio_config.validate()?;
    let phase1 = pso::run(f, pso_config, source)?;
    refine(
        f,
        phase1,
        lio_config,
        source.stream(source.stream_id().wrapping_add(1)),
    )
}
