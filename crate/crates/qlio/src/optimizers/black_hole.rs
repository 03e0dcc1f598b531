//! Black-hole search over a real interval.
//!
//! A hyperparameter-free population method: every star drifts toward the
//! best solution found so far (the black hole), and stars that cross its
//! event horizon are swallowed and reborn uniformly at random. Specialized
//! here to one dimension, which is all the projection-exponent problem
//! needs.

use rand::Rng;

use crate::error::{Error, Result};
use crate::optimizers::RandomSource;

/// Small shift applied to fitness values inside the event-horizon radius so
/// the radius stays defined when every fitness is zero.
const FITNESS_SHIFT: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlackHoleResult {
    pub best_x: f64,
    pub best_fitness: f64,
    /// Objective evaluations spent: exactly `num_agents * (iterations + 1)`.
    pub evaluations: usize,
}

/// Minimizes `g` on `[lo, hi]`.
///
/// Stars start uniformly in the interval, except that any provided `seeds`
/// overwrite the first stars' positions (so the result can never be worse
/// than the best seed). Each iteration every star moves by
/// `x <- x + r * (x_bh - x)` with fresh uniform `r`, is re-evaluated, and
/// is reborn uniformly if it landed within the event-horizon radius
/// `R = f_bh / sum_i f_i` of the black hole.
pub fn run<G>(
    mut g: G,
    lo: f64,
    hi: f64,
    num_agents: usize,
    iterations: usize,
    source: RandomSource,
    seeds: &[f64],
) -> Result<BlackHoleResult>
where
    G: FnMut(f64) -> Result<f64>,
{
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(Error::InvalidBounds {
            lower: lo,
            upper: hi,
        });
    }
    if num_agents < 2 {
        return Err(Error::InvalidConfig(
            "black hole search needs at least 2 agents".into(),
        ));
    }
    if seeds.len() > num_agents {
        return Err(Error::InvalidConfig(format!(
            "{} seeds exceed {} agents",
            seeds.len(),
            num_agents
        )));
    }
    for (index, &seed) in seeds.iter().enumerate() {
        if !(lo..=hi).contains(&seed) {
            return Err(Error::OutOfDomain {
                index,
                value: seed,
                lower: lo,
                upper: hi,
            });
        }
    }

    let mut rng = source.rng();
    let mut positions = Vec::with_capacity(num_agents);
    let mut fitnesses = Vec::with_capacity(num_agents);
    let mut best_x = f64::NAN;
    let mut best_fitness = f64::INFINITY;
    let mut evaluations = 0;
    for i in 0..num_agents {
        let x = if i < seeds.len() {
            seeds[i]
        } else {
            rng.random_range(lo..=hi)
        };
        let fitness = g(x)?;
        evaluations += 1;
        if fitness < best_fitness {
            best_fitness = fitness;
            best_x = x;
        }
        positions.push(x);
        fitnesses.push(fitness);
    }

    for _ in 0..iterations {
        let total: f64 = fitnesses.iter().map(|f| f + FITNESS_SHIFT).sum();
        let radius = (best_fitness + FITNESS_SHIFT) / total;
        for i in 0..num_agents {
            let r: f64 = rng.random();
            positions[i] += r * (best_x - positions[i]);
            fitnesses[i] = g(positions[i])?;
            evaluations += 1;
            if fitnesses[i] < best_fitness {
                best_fitness = fitnesses[i];
                best_x = positions[i];
            }
            if (positions[i] - best_x).abs() < radius {
                // Swallowed; reborn somewhere else. Its fitness is
                // refreshed on the next pass.
                positions[i] = rng.random_range(lo..=hi);
            }
        }
    }

    Ok(BlackHoleResult {
        best_x,
        best_fitness,
        evaluations,
    })
}
