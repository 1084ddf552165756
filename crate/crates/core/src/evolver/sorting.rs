use std::cmp::Ordering;

use super::problem::Individual;
use crate::error::{IsacError, Result};

/// Feasibility-first dominance for maximized objectives.
pub fn dominates(a: &Individual, b: &Individual) -> bool {
    match (a.is_feasible(), b.is_feasible()) {
        (true, false) => true,
        (false, true) => false,
        (false, false) => a.violation < b.violation,
        (true, true) => pareto_dominates(&a.objectives, &b.objectives),
    }
}

fn pareto_dominates(a: &[f64], b: &[f64]) -> bool {
    let mut strictly = false;
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return false;
        }
        if x > y {
            strictly = true;
        }
    }
    strictly
}

/// Order used to rank single individuals: `Greater` when `a` is preferred.
pub fn feasibility_cmp(a: &Individual, b: &Individual) -> Ordering {
    a.fitness_cmp(b)
}

/// Fast non-dominated sorting. Returns fronts as index lists, best front first.
pub fn non_dominated_sort(pop: &[Individual]) -> Result<Vec<Vec<usize>>> {
    if pop.is_empty() {
        return Err(IsacError::EmptyPopulation);
    }
    let n = pop.len();
    let mut dominated_by_me: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut domination_count = vec![0usize; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if dominates(&pop[i], &pop[j]) {
                dominated_by_me[i].push(j);
                domination_count[j] += 1;
            } else if dominates(&pop[j], &pop[i]) {
                dominated_by_me[j].push(i);
                domination_count[i] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| domination_count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated_by_me[i] {
                domination_count[j] -= 1;
                if domination_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    Ok(fronts)
}

/// Reference sort by repeated peeling with full pairwise checks, O(n^3).
pub fn brute_force_fronts(pop: &[Individual]) -> Vec<Vec<usize>> {
    let mut remaining: Vec<usize> = (0..pop.len()).collect();
    let mut fronts = Vec::new();
    while !remaining.is_empty() {
        let front: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&i| !remaining.iter().any(|&j| dominates(&pop[j], &pop[i])))
            .collect();
        remaining.retain(|i| !front.contains(i));
        fronts.push(front);
    }
    fronts
}

/// Crowding distance of each member of `front` (indices into `pop`), in front order.
///
/// Extreme members in any objective get `+inf`; interior members accumulate the
/// range-normalized gap between their neighbours in every objective.
pub fn crowding_distance(pop: &[Individual], front: &[usize]) -> Vec<f64> {
    let len = front.len();
    let mut dist = vec![0.0; len];
    if len <= 2 {
        return vec![f64::INFINITY; len];
    }
    let num_obj = pop[front[0]].objectives.len();
    let mut order: Vec<usize> = (0..len).collect();
    for m in 0..num_obj {
        let obj = |p: usize| pop[front[p]].objectives[m];
        order.sort_by(|&a, &b| obj(a).total_cmp(&obj(b)).then(a.cmp(&b)));
        let (lo, hi) = (obj(order[0]), obj(order[len - 1]));
        dist[order[0]] = f64::INFINITY;
        dist[order[len - 1]] = f64::INFINITY;
        let range = hi - lo;
        if !range.is_finite() || range <= 0.0 {
            continue;
        }
        for w in 1..len - 1 {
            let gap = obj(order[w + 1]) - obj(order[w - 1]);
            dist[order[w]] += gap / range;
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolver::Evaluation;

    fn ind(obj: &[f64]) -> Individual {
        Individual::new(vec![], Evaluation::feasible(obj.to_vec()))
    }

    fn infeasible(obj: &[f64], v: f64) -> Individual {
        Individual::new(
            vec![],
            Evaluation {
                objectives: obj.to_vec(),
                violation: v,
            },
        )
    }

    #[test]
    fn chain_of_two() {
        let pop = vec![ind(&[1.0, 1.0]), ind(&[2.0, 2.0])];
        assert_eq!(non_dominated_sort(&pop).unwrap(), vec![vec![1], vec![0]]);
    }

    #[test]
    fn mutual_non_domination() {
        let pop = vec![ind(&[1.0, 2.0]), ind(&[2.0, 1.0])];
        assert_eq!(non_dominated_sort(&pop).unwrap(), vec![vec![0, 1]]);
    }

    #[test]
    fn empty_rejected() {
        assert_eq!(non_dominated_sort(&[]), Err(IsacError::EmptyPopulation));
    }

    #[test]
    fn feasibility_first() {
        let pop = vec![
            infeasible(&[100.0, 100.0], 0.5),
            ind(&[0.0, 0.0]),
            infeasible(&[100.0, 100.0], 0.1),
        ];
        assert_eq!(
            non_dominated_sort(&pop).unwrap(),
            vec![vec![1], vec![2], vec![0]]
        );
    }

    #[test]
    fn crowding_boundaries_and_line() {
        let pop = vec![ind(&[0.0, 2.0]), ind(&[1.0, 1.0])];
        assert!(crowding_distance(&pop, &[0, 1])
            .iter()
            .all(|d| d.is_infinite()));

        let pop = vec![ind(&[0.0, 2.0]), ind(&[2.0, 0.0]), ind(&[1.0, 1.0])];
        let d = crowding_distance(&pop, &[0, 1, 2]);
        assert!(d[0].is_infinite() && d[1].is_infinite());
        assert_eq!(d[2], 2.0);
    }

    #[test]
    fn crowding_duplicates() {
        let pop = vec![ind(&[1.0, 1.0]); 4];
        let d = crowding_distance(&pop, &[0, 1, 2, 3]);
        assert_eq!(d.iter().filter(|x| x.is_infinite()).count(), 2);
        assert_eq!(d.iter().filter(|x| **x == 0.0).count(), 2);
    }
}
