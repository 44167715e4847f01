//! Tuples `(r_0, …, r_n)` over a spectrum with `r_0 > r_1 ⊕ … ⊕ r_n`.

use std::collections::BTreeSet;

use crate::graph::LabeledGraph;
use crate::monoid::{generated_set, Dist, DistanceMonoid, DEFAULT_SUBMONOID_CAP};

use super::EppaError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaSystem {
    pub s_set: BTreeSet<Dist>,
    /// Sorted lexicographically.
    pub tuples: Vec<Vec<Dist>>,
    /// Least `k` with `max S <= k · min S`; every tuple has fewer than `k`
    /// summands.
    pub k: usize,
}

/// Every tuple over `s_set` whose head strictly exceeds the sum of the rest.
pub fn sigma_system(monoid: &DistanceMonoid, s_set: &BTreeSet<Dist>) -> Result<SigmaSystem, EppaError> {
    let (&lo, &hi) = match (s_set.first(), s_set.last()) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => return Err(EppaError::Invalid("spectrum is empty".into())),
    };
    if lo.is_zero() || s_set.iter().any(|d| !monoid.contains(*d)) {
        return Err(EppaError::Invalid("spectrum must hold nonzero monoid elements".into()));
    }
    let generated = generated_set(monoid, s_set, DEFAULT_SUBMONOID_CAP)?;
    if !monoid.is_archimedean_on(&generated) {
        return Err(EppaError::NonArchimedean);
    }
    let k = monoid.multiplier_bound(hi, lo).ok_or(EppaError::NonArchimedean)?;

    let elems: Vec<Dist> = s_set.iter().copied().collect();
    let mut tuples = Vec::new();
    for &head in &elems {
        // Summand sequences stay below `head`; sums only grow, so a prefix
        // that reaches `head` is abandoned.
        let mut stack: Vec<(Vec<Dist>, Dist)> = vec![(vec![], Dist::ZERO)];
        while let Some((seq, sum)) = stack.pop() {
            if seq.len() + 1 >= k {
                continue;
            }
            for &r in &elems {
                let next = monoid.plus(sum, r);
                if next < head {
                    let mut longer = seq.clone();
                    longer.push(r);
                    let mut t = vec![head];
                    t.extend(&longer);
                    tuples.push(t);
                    stack.push((longer, next));
                }
            }
        }
    }
    tuples.sort();
    Ok(SigmaSystem {
        s_set: s_set.clone(),
        tuples,
        k,
    })
}

/// No edge label strictly exceeds the label sum of a walk between its
/// endpoints; equivalently the shortest-path completion reproduces every
/// label.
pub fn is_geodesic_consistent(g: &LabeledGraph, sys: &SigmaSystem) -> Result<bool, EppaError> {
    if let Some((_, _, r)) = g.edges().find(|(_, _, r)| !sys.s_set.contains(r)) {
        return Err(EppaError::Invalid(format!("edge label {r} is outside the spectrum")));
    }
    let mut cache: Vec<Option<Vec<Option<Dist>>>> = vec![None; g.len()];
    for (x, y, r) in g.edges() {
        let row = cache[x].get_or_insert_with(|| g.shortest_from(x));
        if row[y] != Some(r) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::{make_max_chain, make_truncated};
    use std::sync::Arc;

    fn set(items: &[usize]) -> BTreeSet<Dist> {
        items.iter().map(|&i| Dist::new(i)).collect()
    }

    fn tuples(sys: &SigmaSystem) -> Vec<Vec<usize>> {
        sys.tuples.iter().map(|t| t.iter().map(|d| d.index()).collect()).collect()
    }

    #[test]
    fn sigma_examples() {
        let r3 = make_truncated(3);
        let sys = sigma_system(&r3, &set(&[1, 2, 3])).unwrap();
        assert_eq!(sys.k, 3);
        assert_eq!(tuples(&sys), vec![vec![2, 1], vec![3, 1], vec![3, 1, 1], vec![3, 2]]);

        let r2 = make_truncated(2);
        assert!(sigma_system(&r2, &set(&[1])).unwrap().tuples.is_empty());
        assert_eq!(tuples(&sigma_system(&r2, &set(&[1, 2])).unwrap()), vec![vec![2, 1]]);
    }

    #[test]
    fn sigma_errors() {
        let chain = make_max_chain(2);
        assert_eq!(sigma_system(&chain, &set(&[1, 2])).unwrap_err(), EppaError::NonArchimedean);
        assert!(matches!(sigma_system(&chain, &set(&[])), Err(EppaError::Invalid(_))));
        // a single class of the max chain is archimedean
        assert!(sigma_system(&chain, &set(&[2])).unwrap().tuples.is_empty());
    }

    #[test]
    fn geodesic_consistency_examples() {
        let r2 = Arc::new(make_truncated(2));
        let sys2 = sigma_system(&r2, &set(&[1, 2])).unwrap();
        let names = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let tri =
            LabeledGraph::from_edges(r2.clone(), names(&["a", "b", "c"]), &[("a", "b", 1), ("b", "c", 1), ("a", "c", 1)])
                .unwrap();
        assert!(is_geodesic_consistent(&tri, &sys2).unwrap());
        let edge = LabeledGraph::from_edges(r2, names(&["a", "b"]), &[("a", "b", 2)]).unwrap();
        assert!(is_geodesic_consistent(&edge, &sys2).unwrap());

        let r3 = Arc::new(make_truncated(3));
        let sys3 = sigma_system(&r3, &set(&[1, 2, 3])).unwrap();
        let g = LabeledGraph::from_edges(r3, names(&["x", "m", "y"]), &[("x", "y", 3), ("x", "m", 1), ("m", "y", 1)])
            .unwrap();
        assert!(!is_geodesic_consistent(&g, &sys3).unwrap());
    }
}
