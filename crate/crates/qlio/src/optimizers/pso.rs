//! Particle swarm optimization over quaternion-valued positions.
//!
//! Every decision variable of every agent is a quaternion whose
//! coefficients start uniformly in `[0, 1]`. Velocities and positions are
//! manipulated purely through quaternion add/sub/scale; after each position
//! update the coefficients are clipped back to `[0, 1]`, and fitness is the
//! objective evaluated at the Euclidean (`p = 2`) projection of the
//! position.

use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::benchmarks::ObjectiveFunction;
use crate::error::{Error, Result};
use crate::hypernum::{map_vector, PExponent, Quaternion};
use crate::optimizers::RandomSource;

/// Swarm hyperparameters.
///
/// Defaults follow the common inertia-weight setup: 100 agents,
/// `w = 0.7`, `c1 = c2 = 1.7`, and stagnation-based early stopping that
/// halts once the best fitness moves by less than `1e-5` for 50
/// consecutive iterations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsoConfig {
    pub num_agents: usize,
    pub max_iterations: usize,
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    pub early_stop_delta: f64,
    pub early_stop_patience: usize,
}

impl PsoConfig {
    /// Iterations per decision variable used by [`PsoConfig::for_dimension`].
    pub const DEFAULT_ITERATION_SCALE: usize = 2000;

    /// Default configuration for an `n`-variable problem
    /// (`max_iterations = 2000 * n`).
    pub fn for_dimension(n: usize) -> Self {
        Self {
            num_agents: 100,
            max_iterations: Self::DEFAULT_ITERATION_SCALE * n,
            inertia: 0.7,
            cognitive: 1.7,
            social: 1.7,
            early_stop_delta: 1e-5,
            early_stop_patience: 50,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_agents == 0 {
            return Err(Error::InvalidConfig("num_agents must be positive".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig(
                "max_iterations must be positive".into(),
            ));
        }
        for (name, value) in [
            ("inertia", self.inertia),
            ("cognitive", self.cognitive),
            ("social", self.social),
        ] {
            if !value.is_finite() {
                return Err(Error::InvalidConfig(format!("{name} must be finite")));
            }
        }
        if !(self.early_stop_delta >= 0.0) {
            return Err(Error::InvalidConfig(
                "early_stop_delta must be >= 0".into(),
            ));
        }
        if self.early_stop_patience == 0 {
            return Err(Error::InvalidConfig(
                "early_stop_patience must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// One particle: quaternion position/velocity plus its personal best.
#[derive(Debug, Clone, PartialEq)]
pub struct Agent {
    position: Vec<Quaternion>,
    velocity: Vec<Quaternion>,
    best_position: Vec<Quaternion>,
    best_fitness: f64,
}

impl Agent {
    pub fn position(&self) -> &[Quaternion] {
        &self.position
    }

    pub fn velocity(&self) -> &[Quaternion] {
        &self.velocity
    }

    pub fn best_position(&self) -> &[Quaternion] {
        &self.best_position
    }

    pub fn best_fitness(&self) -> f64 {
        self.best_fitness
    }
}

/// Outcome of one optimization phase.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseResult {
    /// Best hypercomplex solution found (clipped coefficients).
    pub best_position: Vec<Quaternion>,
    /// Objective value of `best_position` under the `p = 2` projection.
    pub best_fitness: f64,
    pub iterations_used: usize,
    pub stopped_early: bool,
    pub wall_time: Duration,
}

/// A swarm mid-flight. Exposed so single iterations can be driven and
/// inspected directly.
#[derive(Debug)]
pub struct Swarm {
    config: PsoConfig,
    agents: Vec<Agent>,
    best_position: Vec<Quaternion>,
    best_fitness: f64,
    rng: ChaCha8Rng,
}

impl Swarm {
    /// Draws the initial population and evaluates it.
    pub fn init(f: &ObjectiveFunction, config: PsoConfig, source: RandomSource) -> Result<Self> {
        config.validate()?;
        let mut rng = source.rng();
        let n = f.dimension();
        let mut agents = Vec::with_capacity(config.num_agents);
        for _ in 0..config.num_agents {
            let position: Vec<Quaternion> = (0..n)
                .map(|_| random_unit_quaternion(&mut rng))
                .collect();
            let fitness = fitness_of(f, &position)?;
            agents.push(Agent {
                velocity: vec![Quaternion::zero(); n],
                best_position: position.clone(),
                position,
                best_fitness: fitness,
            });
        }
        let mut best_fitness = f64::INFINITY;
        let mut best_index = 0;
        for (i, agent) in agents.iter().enumerate() {
            if agent.best_fitness < best_fitness {
                best_fitness = agent.best_fitness;
                best_index = i;
            }
        }
        let best_position = agents[best_index].best_position.clone();
        Ok(Self {
            config,
            agents,
            best_position,
            best_fitness,
            rng,
        })
    }

    /// Advances the swarm by one iteration.
    ///
    /// Per decision variable, with fresh uniform `r1`, `r2` in `[0, 1]`:
    ///
    /// ```text
    /// v <- w*v + c1*r1*(pbest - x) + c2*r2*(gbest - x)
    /// x <- clip(x + v)
    /// ```
    ///
    /// All moves use the global best from the previous iteration; personal
    /// and global bests are then refreshed on strict improvement.
    pub fn step(&mut self, f: &ObjectiveFunction) -> Result<()> {
        let cfg = &self.config;
        for agent in &mut self.agents {
            for j in 0..agent.position.len() {
                let r1: f64 = self.rng.random();
                let r2: f64 = self.rng.random();
                let toward_own = agent.best_position[j]
                    .sub(&agent.position[j])?
                    .scale(cfg.cognitive * r1)?;
                let toward_best = self.best_position[j]
                    .sub(&agent.position[j])?
                    .scale(cfg.social * r2)?;
                let velocity = agent.velocity[j]
                    .scale(cfg.inertia)?
                    .add(&toward_own)?
                    .add(&toward_best)?;
                agent.velocity[j] = velocity;
                agent.position[j] = agent.position[j].add(&velocity)?.clipped();
            }
        }
        for agent in &mut self.agents {
            let fitness = fitness_of(f, &agent.position)?;
            if fitness < agent.best_fitness {
                agent.best_fitness = fitness;
                agent.best_position.clone_from(&agent.position);
            }
        }
        for agent in &self.agents {
            if agent.best_fitness < self.best_fitness {
                self.best_fitness = agent.best_fitness;
                self.best_position.clone_from(&agent.best_position);
            }
        }
        Ok(())
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn best_position(&self) -> &[Quaternion] {
        &self.best_position
    }

    pub fn best_fitness(&self) -> f64 {
        self.best_fitness
    }
}

fn random_unit_quaternion(rng: &mut ChaCha8Rng) -> Quaternion {
    let coeffs = [
        rng.random::<f64>(),
        rng.random::<f64>(),
        rng.random::<f64>(),
        rng.random::<f64>(),
    ];
    Quaternion::from_coefficients(coeffs).expect("uniform draws are finite")
}

/// Fitness of a quaternion position: the objective at its Euclidean
/// projection.
fn fitness_of(f: &ObjectiveFunction, position: &[Quaternion]) -> Result<f64> {
    let mapped = map_vector(position, f.bounds(), PExponent::EUCLIDEAN)?;
    #[cfg(debug_assertions)]
    for (x, b) in mapped.iter().zip(f.bounds()) {
        debug_assert!(b.contains(*x), "projection {x} escaped {b:?}");
    }
    f.evaluate(&mapped)
}

/// True once the last `patience` consecutive changes of the best fitness
/// are all smaller than `delta`.
///
/// `history` holds one best-fitness value per completed iteration, so the
/// check can first fire after `patience + 1` iterations.
pub fn early_stop_check(history: &[f64], delta: f64, patience: usize) -> bool {
    if history.len() < patience + 1 {
        return false;
    }
    history[history.len() - patience - 1..]
        .windows(2)
        .all(|w| (w[1] - w[0]).abs() < delta)
}

/// Runs the full global phase: initialization plus up to
/// `config.max_iterations` swarm steps with stagnation-based early
/// stopping.
pub fn run(
    f: &ObjectiveFunction,
    config: &PsoConfig,
    source: RandomSource,
) -> Result<PhaseResult> {
    let started = Instant::now();
    let mut swarm = Swarm::init(f, *config, source)?;
    let mut history = Vec::new();
    let mut iterations_used = 0;
    let mut stopped_early = false;
    for _ in 0..config.max_iterations {
        swarm.step(f)?;
        iterations_used += 1;
        history.push(swarm.best_fitness);
        if early_stop_check(&history, config.early_stop_delta, config.early_stop_patience) {
            stopped_early = true;
            break;
        }
    }
    Ok(PhaseResult {
        best_position: swarm.best_position,
        best_fitness: swarm.best_fitness,
        iterations_used,
        stopped_early,
        wall_time: started.elapsed(),
    })
}
