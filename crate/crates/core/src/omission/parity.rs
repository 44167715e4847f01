//! Odd closed walks of bounded length in spaces over `R_m`.

use std::collections::VecDeque;

use crate::monoid::MonoidKind;
use crate::space::MetricSpace;

use super::OmissionError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityReport {
    /// An odd closed walk `x_1 … x_m` (returning to `x_1`) with total at
    /// most `n`, if any; least total first, then fewest steps.
    pub cycle: Option<Vec<usize>>,
    pub perimeter: Option<usize>,
}

impl ParityReport {
    pub fn ok(&self) -> bool {
        self.cycle.is_none()
    }
}

/// Every closed walk of length at least 3 with distance total at most `n`
/// has even total. Distances are read as integers, so the monoid must be
/// some `R_m`.
pub fn verify_parity(space: &MetricSpace, n: usize) -> Result<ParityReport, OmissionError> {
    if !matches!(space.monoid().kind(), MonoidKind::Truncated(_)) {
        return Err(OmissionError::NotTruncated);
    }
    if n.is_multiple_of(2) {
        return Err(OmissionError::Invalid(format!("n must be odd, got {n}")));
    }
    let pts = space.len();
    let mut best: Option<(usize, usize, Vec<usize>)> = None;
    for start in 0..pts {
        // BFS over (point, total) in order of steps; stutters add nothing
        // to the total and never change parity, so steps move between
        // distinct points.
        let mut prev: Vec<Vec<Option<(usize, usize)>>> = vec![vec![None; n + 1]; pts];
        let mut steps: Vec<Vec<usize>> = vec![vec![usize::MAX; n + 1]; pts];
        steps[start][0] = 0;
        let mut queue = VecDeque::from([(start, 0usize)]);
        while let Some((v, t)) = queue.pop_front() {
            for w in 0..pts {
                if w == v {
                    continue;
                }
                let nt = t + space.d(v, w).index();
                if nt > n || steps[w][nt] != usize::MAX {
                    continue;
                }
                steps[w][nt] = steps[v][t] + 1;
                prev[w][nt] = Some((v, t));
                queue.push_back((w, nt));
            }
        }
        for total in (1..=n).step_by(2) {
            if steps[start][total] == usize::MAX {
                continue;
            }
            let len = steps[start][total];
            let better = best.as_ref().is_none_or(|(bt, bl, _)| (total, len) < (*bt, *bl));
            if better {
                let mut walk = Vec::new();
                let (mut v, mut t) = (start, total);
                while let Some((pv, pt)) = prev[v][t] {
                    walk.push(v);
                    v = pv;
                    t = pt;
                }
                walk.reverse();
                // walk ends at start; rotate so it begins there
                walk.rotate_right(1);
                best = Some((total, len, walk));
            }
            break;
        }
    }
    Ok(match best {
        Some((total, _, cycle)) => ParityReport {
            cycle: Some(cycle),
            perimeter: Some(total),
        },
        None => ParityReport {
            cycle: None,
            perimeter: None,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::{make_max_chain, make_truncated, Dist};
    use crate::space::{truncated_path_metric, SimpleGraph};
    use std::sync::Arc;

    fn walk_total(s: &MetricSpace, c: &[usize]) -> usize {
        (0..c.len()).map(|i| s.d(c[i], c[(i + 1) % c.len()]).index()).sum()
    }

    #[test]
    fn parity_examples() {
        let r3 = Arc::new(make_truncated(3));
        let t = MetricSpace::triangle(r3.clone(), 1, 2, 2).unwrap();
        let report = verify_parity(&t, 5).unwrap();
        let cycle = report.cycle.unwrap();
        assert_eq!(cycle.len(), 3);
        assert_eq!(walk_total(&t, &cycle), 5);
        assert_eq!(report.perimeter, Some(5));

        let pair = MetricSpace::equilateral(r3, 2, Dist::new(2)).unwrap();
        assert!(verify_parity(&pair, 5).unwrap().ok());

        let c6 = truncated_path_metric(&SimpleGraph::cycle(6), 3).unwrap();
        assert!(verify_parity(&c6, 5).unwrap().ok());
        let c5 = truncated_path_metric(&SimpleGraph::cycle(5), 3).unwrap();
        let report = verify_parity(&c5, 5).unwrap();
        assert_eq!(report.perimeter, Some(5));
        assert_eq!(walk_total(&c5, &report.cycle.unwrap()), 5);
    }

    #[test]
    fn requires_truncated_monoid() {
        let chain = Arc::new(make_max_chain(2));
        let s = MetricSpace::equilateral(chain, 2, Dist::new(1)).unwrap();
        assert_eq!(verify_parity(&s, 5).unwrap_err(), OmissionError::NotTruncated);
    }
}
