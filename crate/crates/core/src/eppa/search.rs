//! Exhaustive witness search at desk scale.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::monoid::Dist;
use crate::space::{admissible_rows, enumerate_partial_isometries, extend_to_automorphism, MetricSpace, PartialIsometry};

use super::{Certificate, EppaError, EppaWitness, EAGER_CERTIFICATE_LIMIT};

/// Candidate counts per level of the search.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// `(size, candidates up to isometry over the base)` per level visited.
    pub levels: Vec<(usize, usize)>,
    pub examined: usize,
}

/// Smallest witness (by size, then canonical key) with at most `max_size`
/// points and spectrum inside `allowed`.
pub fn brute_force_witness(
    base: &MetricSpace,
    max_size: usize,
    allowed: &BTreeSet<Dist>,
) -> Result<EppaWitness, EppaError> {
    search_witness(base, max_size, allowed, &|_| true).map(|(w, _)| w)
}

/// [`brute_force_witness`] restricted to candidates passing `keep`, which
/// must be hereditary (closed under subspaces) for the search to stay
/// exhaustive.
pub fn search_witness(
    base: &MetricSpace,
    max_size: usize,
    allowed: &BTreeSet<Dist>,
    keep: &(dyn Fn(&MetricSpace) -> bool + Sync),
) -> Result<(EppaWitness, SearchStats), EppaError> {
    let m = base.monoid();
    if allowed.iter().any(|d| d.is_zero() || !m.contains(*d)) {
        return Err(EppaError::Invalid("allowed spectrum must hold nonzero monoid elements".into()));
    }
    if !base.spectrum().is_subset(allowed) {
        return Err(EppaError::Invalid("base spectrum is not inside the allowed spectrum".into()));
    }
    let n = base.len();
    let mut stats = SearchStats::default();
    if max_size < n {
        return Err(EppaError::Exhausted { max_size, examined: 0 });
    }
    let partials: Vec<PartialIsometry> = enumerate_partial_isometries(base).collect();
    let allowed: Vec<Dist> = allowed.iter().copied().collect();

    let mut level: Vec<MetricSpace> = vec![base.clone()];
    for size in n..=max_size {
        stats.levels.push((size, level.len()));
        stats.examined += level.len();
        let found = level
            .par_iter()
            .find_first(|b| partials.iter().all(|p| extend_to_automorphism(b, p.pairs()).is_some()));
        if let Some(b) = found {
            let mut w = EppaWitness {
                base: base.clone(),
                witness: b.clone(),
                embedding: (0..n).collect(),
                certificates: Vec::new(),
            };
            if n <= EAGER_CERTIFICATE_LIMIT {
                w.certificates = partials
                    .iter()
                    .map(|p| Certificate {
                        partial: p.clone(),
                        total: extend_to_automorphism(b, p.pairs()).expect("checked above"),
                    })
                    .collect();
            }
            return Ok((w, stats));
        }
        if size == max_size {
            break;
        }
        let grown: Vec<Vec<(Vec<u32>, MetricSpace)>> =
            level.par_iter().map(|b| one_point_children(b, n, &allowed, keep)).collect();
        let mut next: BTreeMap<Vec<u32>, MetricSpace> = BTreeMap::new();
        for (key, space) in grown.into_iter().flatten() {
            next.entry(key).or_insert(space);
        }
        level = next.into_values().collect();
        if level.is_empty() {
            break;
        }
    }
    Err(EppaError::Exhausted {
        max_size,
        examined: stats.examined,
    })
}

/// Every one-point extension of `b` using distances from `allowed`,
/// keyed by canonical form with the first `fixed` points pinned.
fn one_point_children(
    b: &MetricSpace,
    fixed: usize,
    allowed: &[Dist],
    keep: &(dyn Fn(&MetricSpace) -> bool + Sync),
) -> Vec<(Vec<u32>, MetricSpace)> {
    let mut out = Vec::new();
    for row in admissible_rows(b, allowed) {
        let label = point_label(b, b.len());
        let child = b.with_point(label, &row).expect("rows satisfy the triangle inequality");
        if !keep(&child) {
            continue;
        }
        let canon = child.canonical_relative(fixed);
        let rep = relabel_fresh(&child.permuted(&canon.order), fixed);
        out.push((canon.key, rep));
    }
    out
}

fn point_label(b: &MetricSpace, i: usize) -> String {
    let mut label = format!("w{i}");
    while b.index_of(&label).is_some() {
        label.push('\'');
    }
    label
}

fn relabel_fresh(space: &MetricSpace, fixed: usize) -> MetricSpace {
    let mut labels = space.labels().to_vec();
    for i in fixed..labels.len() {
        let mut l = format!("w{i}");
        while labels[..fixed].contains(&l) {
            l.push('\'');
        }
        labels[i] = l;
    }
    space.relabeled(labels).expect("labels are distinct")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eppa::verify_witness;
    use crate::monoid::make_truncated;
    use crate::space::{truncated_path_metric, SimpleGraph};
    use std::sync::Arc;

    fn path_112() -> MetricSpace {
        MetricSpace::from_matrix(
            Arc::new(make_truncated(2)),
            vec!["a".into(), "b".into(), "c".into()],
            &[vec![0, 1, 2], vec![1, 0, 1], vec![2, 1, 0]],
        )
        .unwrap()
    }

    fn all_r2() -> BTreeSet<Dist> {
        [Dist::new(1), Dist::new(2)].into()
    }

    #[test]
    fn path_space_gets_the_four_cycle() {
        let w = brute_force_witness(&path_112(), 6, &all_r2()).unwrap();
        assert_eq!(w.size(), 4);
        assert!(verify_witness(&w).ok());
        let c4 = truncated_path_metric(&SimpleGraph::cycle(4), 2).unwrap();
        assert!(crate::space::is_isometric(&w.witness, &c4).is_some());
        assert_eq!(w.certificates.len(), enumerate_partial_isometries(&w.base).count());
    }

    #[test]
    fn homogeneous_bases_are_their_own_witness() {
        let r2 = Arc::new(make_truncated(2));
        let edge = MetricSpace::equilateral(r2.clone(), 2, Dist::new(1)).unwrap();
        let w = brute_force_witness(&edge, 4, &all_r2()).unwrap();
        assert_eq!(w.witness, edge);
        assert_eq!(w.certificates.len(), 7);
        let point = MetricSpace::equilateral(r2, 1, Dist::new(1)).unwrap();
        assert_eq!(brute_force_witness(&point, 1, &all_r2()).unwrap().witness, point);
    }

    #[test]
    fn exhaustion_is_reported() {
        let err = brute_force_witness(&path_112(), 3, &all_r2()).unwrap_err();
        assert_eq!(err, EppaError::Exhausted { max_size: 3, examined: 1 });
    }

    #[test]
    fn admissible_rows_match_filter() {
        let p = path_112();
        let rows = admissible_rows(&p, &[Dist::new(1), Dist::new(2)]);
        let mut expected = 0;
        for code in 0..8 {
            let row: Vec<Dist> = (0..3).map(|i| Dist::new(1 + (code >> i & 1))).collect();
            if p.with_point("x".into(), &row).is_ok() {
                expected += 1;
            }
        }
        assert_eq!(rows.len(), expected);
    }

    #[test]
    fn spectrum_outside_allowed_is_rejected() {
        let only_one: BTreeSet<Dist> = [Dist::new(1)].into();
        assert!(matches!(brute_force_witness(&path_112(), 5, &only_one), Err(EppaError::Invalid(_))));
    }
}
