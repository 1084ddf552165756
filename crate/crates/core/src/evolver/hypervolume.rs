/// Area dominated by `points` (maximized) and bounded below by `reference`.
///
/// Points not strictly above the reference in both objectives contribute nothing.
pub fn hypervolume_2d(points: &[Vec<f64>], reference: &[f64]) -> f64 {
    let mut pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p[0] > reference[0] && p[1] > reference[1])
        .map(|p| (p[0], p[1]))
        .collect();
    pts.sort_by(|a, b| b.0.total_cmp(&a.0).then(b.1.total_cmp(&a.1)));
    let mut volume = 0.0;
    let mut covered = reference[1];
    for (x, y) in pts {
        if y > covered {
            volume += (x - reference[0]) * (y - covered);
            covered = y;
        }
    }
    volume
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point() {
        assert_eq!(hypervolume_2d(&[vec![1.0, 1.0]], &[0.0, 0.0]), 1.0);
    }

    #[test]
    fn dominated_point_adds_nothing() {
        let base = hypervolume_2d(&[vec![2.0, 2.0]], &[0.0, 0.0]);
        let with = hypervolume_2d(&[vec![2.0, 2.0], vec![1.0, 1.5]], &[0.0, 0.0]);
        assert_eq!(base, with);
    }

    #[test]
    fn two_rectangles() {
        assert_eq!(
            hypervolume_2d(&[vec![2.0, 1.0], vec![1.0, 2.0]], &[0.0, 0.0]),
            3.0
        );
    }

    #[test]
    fn empty_and_below_reference() {
        assert_eq!(hypervolume_2d(&[], &[0.0, 0.0]), 0.0);
        assert_eq!(hypervolume_2d(&[vec![-1.0, 5.0]], &[0.0, 0.0]), 0.0);
    }
}
