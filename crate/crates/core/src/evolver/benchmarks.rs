//! Analytic test problems used by the self-test and the optimizer checks.

use super::problem::{Evaluation, Problem};

/// Maximize `-sum x_d^2` on a box.
#[derive(Debug, Clone)]
pub struct SphereProblem {
    bounds: Vec<(f64, f64)>,
}

impl SphereProblem {
    pub fn new(dim: usize, lo: f64, hi: f64) -> Self {
        Self {
            bounds: vec![(lo, hi); dim],
        }
    }
}

impl Problem for SphereProblem {
    fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    fn num_objectives(&self) -> usize {
        1
    }

    fn evaluate(&self, x: &[f64]) -> Evaluation {
        Evaluation::feasible(vec![-x.iter().map(|v| v * v).sum::<f64>()])
    }
}

#[derive(Debug, Clone)]
pub struct ConstantProblem {
    bounds: Vec<(f64, f64)>,
    value: f64,
}

impl ConstantProblem {
    pub fn new(dim: usize, value: f64) -> Self {
        Self {
            bounds: vec![(-1.0, 1.0); dim],
            value,
        }
    }
}

impl Problem for ConstantProblem {
    fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    fn num_objectives(&self) -> usize {
        1
    }

    fn evaluate(&self, _x: &[f64]) -> Evaluation {
        Evaluation::feasible(vec![self.value])
    }
}

/// Sphere objective with the constraint `x_0 <= limit`; violation is the excess.
#[derive(Debug, Clone)]
pub struct BoxConstrained {
    bounds: Vec<(f64, f64)>,
    limit: f64,
}

impl BoxConstrained {
    pub fn new(dim: usize, lo: f64, hi: f64, limit: f64) -> Self {
        Self {
            bounds: vec![(lo, hi); dim],
            limit,
        }
    }
}

impl Problem for BoxConstrained {
    fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    fn num_objectives(&self) -> usize {
        1
    }

    fn evaluate(&self, x: &[f64]) -> Evaluation {
        Evaluation {
            objectives: vec![-x.iter().map(|v| v * v).sum::<f64>()],
            violation: (x[0] - self.limit).max(0.0),
        }
    }
}

/// ZDT1 on `[0, 1]^D`, posed as maximization of `(-f1, -f2)`.
#[derive(Debug, Clone)]
pub struct Zdt1 {
    bounds: Vec<(f64, f64)>,
}

impl Zdt1 {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 2, "ZDT1 needs at least two variables");
        Self {
            bounds: vec![(0.0, 1.0); dim],
        }
    }

    /// The minimization objectives `(f1, f2)`.
    pub fn raw(x: &[f64]) -> (f64, f64) {
        let f1 = x[0];
        let g = 1.0 + 9.0 * x[1..].iter().sum::<f64>() / (x.len() - 1) as f64;
        (f1, g * (1.0 - (f1 / g).sqrt()))
    }
}

impl Problem for Zdt1 {
    fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    fn num_objectives(&self) -> usize {
        2
    }

    fn evaluate(&self, x: &[f64]) -> Evaluation {
        let (f1, f2) = Self::raw(x);
        Evaluation::feasible(vec![-f1, -f2])
    }

    fn reference_point(&self) -> Option<Vec<f64>> {
        Some(vec![-1.1, -1.1])
    }
}

/// `samples` evenly spaced points of the ZDT1 optimal front `f2 = 1 - sqrt(f1)`.
pub fn zdt1_front(samples: usize) -> Vec<(f64, f64)> {
    (0..samples)
        .map(|i| {
            let f1 = i as f64 / (samples - 1).max(1) as f64;
            (f1, 1.0 - f1.sqrt())
        })
        .collect()
}

/// Inverted generational distance: mean distance from each reference point to the
/// closest obtained point.
pub fn igd(obtained: &[(f64, f64)], reference: &[(f64, f64)]) -> f64 {
    if obtained.is_empty() {
        return f64::INFINITY;
    }
    reference
        .iter()
        .map(|r| {
            obtained
                .iter()
                .map(|o| (o.0 - r.0).hypot(o.1 - r.1))
                .fold(f64::INFINITY, f64::min)
        })
        .sum::<f64>()
        / reference.len() as f64
}
