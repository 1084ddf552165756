use std::cmp::Ordering;

/// An optimization problem over a box-bounded real vector. All objectives are maximized.
pub trait Problem: Sync {
    /// Per-dimension `(lower, upper)` bounds; the length is the genome dimension.
    fn bounds(&self) -> &[(f64, f64)];

    fn num_objectives(&self) -> usize;

    /// Objectives and aggregate constraint violation (0 when feasible).
    fn evaluate(&self, x: &[f64]) -> Evaluation;

    /// In-place projection applied to every new genome before evaluation.
    fn repair(&self, _x: &mut [f64]) {}

    /// Reference point for hypervolume tracking of two-objective runs.
    fn reference_point(&self) -> Option<Vec<f64>> {
        None
    }

    fn dimension(&self) -> usize {
        self.bounds().len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub objectives: Vec<f64>,
    pub violation: f64,
}

impl Evaluation {
    pub fn feasible(objectives: Vec<f64>) -> Self {
        Self {
            objectives,
            violation: 0.0,
        }
    }

    /// Marker for genomes that cannot be scored; sorts below every scored genome.
    pub fn worst(num_objectives: usize) -> Self {
        Self {
            objectives: vec![f64::NEG_INFINITY; num_objectives],
            violation: f64::INFINITY,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.violation == 0.0
    }
}

/// Evaluates `x`, mapping non-finite objectives or violations to [`Evaluation::worst`].
pub fn evaluate<P: Problem + ?Sized>(problem: &P, x: &[f64]) -> Evaluation {
    debug_assert!(x
        .iter()
        .zip(problem.bounds())
        .all(|(v, (lo, hi))| *v >= *lo && *v <= *hi));
    let e = problem.evaluate(x);
    let ok = e.objectives.len() == problem.num_objectives()
        && e.objectives.iter().all(|v| v.is_finite())
        && e.violation.is_finite()
        && e.violation >= 0.0;
    if ok {
        e
    } else {
        Evaluation::worst(problem.num_objectives())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub genome: Vec<f64>,
    pub objectives: Vec<f64>,
    pub violation: f64,
    /// Front index (0 = non-dominated); set by sorting.
    pub rank: usize,
    pub crowding: f64,
}

impl Individual {
    pub fn new(genome: Vec<f64>, eval: Evaluation) -> Self {
        Self {
            genome,
            objectives: eval.objectives,
            violation: eval.violation,
            rank: 0,
            crowding: 0.0,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.violation == 0.0
    }

    /// Single-objective fitness order: feasible first, then smaller violation, then larger
    /// first objective. `Greater` means `self` is better.
    pub fn fitness_cmp(&self, other: &Individual) -> Ordering {
        match (self.is_feasible(), other.is_feasible()) {
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => other.violation.total_cmp(&self.violation),
            (true, true) => self.objectives[0].total_cmp(&other.objectives[0]),
        }
    }
}
