//! The eight benchmark functions behind a uniform registry.
//!
//! All functions have their global minimum value 0 at the origin and
//! identical per-variable bounds. Inputs outside the bounds are hard
//! errors: callers are expected to reach these functions through the
//! bounded hyper-to-real mapping, so an out-of-bounds input signals a
//! pipeline bug rather than something to clamp silently.

use std::f64::consts::{E, PI};

use crate::error::{Error, Result};
use crate::hypernum::Bounds;

/// Static description of one registry entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionInfo {
    pub name: &'static str,
    pub formula: &'static str,
    pub lower: f64,
    pub upper: f64,
    pub optimum_fitness: f64,
    /// Smallest dimension the formula is defined for.
    pub min_dimension: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Sphere,
    Csendes,
    Salomon,
    Ackley1,
    Alpine1,
    Rastrigin,
    Schwefel,
    Brown,
}

const REGISTRY: [(Kind, FunctionInfo); 8] = [
    (
        Kind::Sphere,
        FunctionInfo {
            name: "sphere",
            formula: "sum_i x_i^2",
            lower: -10.0,
            upper: 10.0,
            optimum_fitness: 0.0,
            min_dimension: 1,
        },
    ),
    (
        Kind::Csendes,
        FunctionInfo {
            name: "csendes",
            formula: "sum_i x_i^6 (2 + sin(1/x_i))",
            lower: -1.0,
            upper: 1.0,
            optimum_fitness: 0.0,
            min_dimension: 1,
        },
    ),
    (
        Kind::Salomon,
        FunctionInfo {
            name: "salomon",
            formula: "1 - cos(2 pi sqrt(sum_i x_i^2)) + 0.1 sqrt(sum_i x_i^2)",
            lower: -100.0,
            upper: 100.0,
            optimum_fitness: 0.0,
            min_dimension: 1,
        },
    ),
    (
        Kind::Ackley1,
        FunctionInfo {
            name: "ackley1",
            formula: "-20 exp(-0.02 sqrt(mean_i x_i^2)) - exp(mean_i cos(2 pi x_i)) + 20 + e",
            lower: -35.0,
            upper: 35.0,
            optimum_fitness: 0.0,
            min_dimension: 1,
        },
    ),
    (
        Kind::Alpine1,
        FunctionInfo {
            name: "alpine1",
            formula: "sum_i |x_i sin(x_i) + 0.1 x_i|",
            lower: -10.0,
            upper: 10.0,
            optimum_fitness: 0.0,
            min_dimension: 1,
        },
    ),
    (
        Kind::Rastrigin,
        FunctionInfo {
            name: "rastrigin",
            formula: "10 n + sum_i (x_i^2 - 10 cos(2 pi x_i))",
            lower: -5.12,
            upper: 5.12,
            optimum_fitness: 0.0,
            min_dimension: 1,
        },
    ),
    (
        Kind::Schwefel,
        FunctionInfo {
            // Power-norm variant, not the classical sine-based Schwefel.
            name: "schwefel",
            formula: "(sum_i x_i^2)^sqrt(pi)",
            lower: -100.0,
            upper: 100.0,
            optimum_fitness: 0.0,
            min_dimension: 1,
        },
    ),
    (
        Kind::Brown,
        FunctionInfo {
            name: "brown",
            formula: "sum_i (x_i^2)^(x_{i+1}^2 + 1) + (x_{i+1}^2)^(x_i^2 + 1)",
            lower: -1.0,
            upper: 4.0,
            optimum_fitness: 0.0,
            min_dimension: 2,
        },
    ),
];

/// Registry contents in canonical order, for listings.
pub fn registry() -> impl Iterator<Item = &'static FunctionInfo> {
    REGISTRY.iter().map(|(_, info)| info)
}

/// Canonical ordering index of a function name, used to sort reports.
pub fn registry_index(name: &str) -> Option<usize> {
    REGISTRY.iter().position(|(_, info)| info.name == name)
}

/// A benchmark instantiated at a concrete dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveFunction {
    kind: Kind,
    info: FunctionInfo,
    n: usize,
    bounds: Vec<Bounds>,
}

/// Looks `name` up in the registry and instantiates it with `n` variables.
pub fn make_function(name: &str, n: usize) -> Result<ObjectiveFunction> {
    let (kind, info) = REGISTRY
        .iter()
        .find(|(_, info)| info.name == name)
        .copied()
        .ok_or_else(|| Error::UnknownFunction(name.to_string()))?;
    if n < info.min_dimension {
        return Err(Error::InvalidDimension {
            name: info.name.to_string(),
            n,
            min: info.min_dimension,
        });
    }
    let per_variable = Bounds::new(info.lower, info.upper)?;
    Ok(ObjectiveFunction {
        kind,
        info,
        n,
        bounds: vec![per_variable; n],
    })
}

impl ObjectiveFunction {
    pub fn name(&self) -> &'static str {
        self.info.name
    }

    pub fn info(&self) -> &FunctionInfo {
        &self.info
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn bounds(&self) -> &[Bounds] {
        &self.bounds
    }

    pub fn optimum_fitness(&self) -> f64 {
        self.info.optimum_fitness
    }

    /// Evaluates the benchmark at `x`.
    ///
    /// `x` must have exactly `n` entries, all inside the bounds.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::ShapeMismatch {
                expected: self.n,
                actual: x.len(),
            });
        }
        for (index, (&value, bounds)) in x.iter().zip(self.bounds.iter()).enumerate() {
            if !bounds.contains(value) {
                return Err(Error::OutOfDomain {
                    index,
                    value,
                    lower: bounds.lower(),
                    upper: bounds.upper(),
                });
            }
        }
        let fitness = match self.kind {
            Kind::Sphere => sphere(x),
            Kind::Csendes => csendes(x),
            Kind::Salomon => salomon(x),
            Kind::Ackley1 => ackley1(x),
            Kind::Alpine1 => alpine1(x),
            Kind::Rastrigin => rastrigin(x),
            Kind::Schwefel => schwefel(x),
            Kind::Brown => brown(x),
        };
        debug_assert!(fitness.is_finite(), "{} produced {fitness}", self.info.name);
        Ok(fitness)
    }
}

fn sum_of_squares(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

fn sphere(x: &[f64]) -> f64 {
    sum_of_squares(x)
}

fn csendes(x: &[f64]) -> f64 {
    // The term is undefined at x_i = 0; we assign its limit value 0 so the
    // stated optimum f(0) = 0 holds literally.
    x.iter()
        .map(|&v| {
            if v == 0.0 {
                0.0
            } else {
                v.powi(6) * (2.0 + (1.0 / v).sin())
            }
        })
        .sum()
}

fn salomon(x: &[f64]) -> f64 {
    let r = sum_of_squares(x).sqrt();
    1.0 - (2.0 * PI * r).cos() + 0.1 * r
}

fn ackley1(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let rms = (sum_of_squares(x) / n).sqrt();
    let mean_cos = x.iter().map(|&v| (2.0 * PI * v).cos()).sum::<f64>() / n;
    // Algebraically -20 e^(-0.02 rms) - e^(mean_cos) + 20 + e, grouped so
    // the value is exactly zero at the origin.
    20.0 * (1.0 - (-0.02 * rms).exp()) + (E - mean_cos.exp())
}

fn alpine1(x: &[f64]) -> f64 {
    x.iter().map(|&v| (v * v.sin() + 0.1 * v).abs()).sum()
}

fn rastrigin(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    10.0 * n
        + x.iter()
            .map(|&v| v * v - 10.0 * (2.0 * PI * v).cos())
            .sum::<f64>()
}

fn schwefel(x: &[f64]) -> f64 {
    sum_of_squares(x).powf(PI.sqrt())
}

fn brown(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| brown_term(w[0], w[1]) + brown_term(w[1], w[0]))
        .sum()
}

/// `(a^2)^(b^2 + 1)` with the `a = 0` base case defined as its limit 0.
fn brown_term(a: f64, b: f64) -> f64 {
    let base = a * a;
    if base == 0.0 {
        0.0
    } else {
        base.powf(b * b + 1.0)
    }
}
