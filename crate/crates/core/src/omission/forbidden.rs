//! Forbidden classes, freeness, and witness search inside a free class.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::eppa::{search_witness, EppaError, EppaWitness};
use crate::monoid::{generated_set, make_truncated, Dist, DEFAULT_SUBMONOID_CAP};
use crate::space::MetricSpace;

use super::{enumerate_path_extensions, weak_embedding_exists, weak_homomorphism_exists, OmissionError};
use super::{PartialSemimetric, PathExtension};

/// A finite set of forbidden spaces and the spectrum `S` used for their
/// path extensions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForbiddenClass {
    pub members: Vec<MetricSpace>,
    pub spectrum_bound: BTreeSet<Dist>,
}

impl ForbiddenClass {
    /// Checks that members share a monoid and that `spectrum_bound` covers
    /// their spectra.
    pub fn new(members: Vec<MetricSpace>, spectrum_bound: BTreeSet<Dist>) -> Result<ForbiddenClass, OmissionError> {
        if let Some(first) = members.first() {
            if members.iter().any(|m| m.monoid() != first.monoid()) {
                return Err(OmissionError::Invalid("members use different monoids".into()));
            }
        }
        if members.iter().any(|m| !m.spectrum().is_subset(&spectrum_bound)) {
            return Err(OmissionError::Invalid("spectrum bound misses a member distance".into()));
        }
        Ok(ForbiddenClass {
            members,
            spectrum_bound,
        })
    }

    pub fn empty() -> ForbiddenClass {
        ForbiddenClass {
            members: Vec::new(),
            spectrum_bound: BTreeSet::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// No member is isometric to a subspace of `space`.
pub fn is_free(space: &MetricSpace, f: &ForbiddenClass) -> bool {
    f.members
        .iter()
        .all(|m| weak_embedding_exists(&PartialSemimetric::from_space(m), space).is_none())
}

/// The triangles with odd perimeter at most `n`, over `R_{(n+1)/2}`,
/// one per isometry type, listed by sorted side lengths.
pub fn odd_perimeter_triangles(n: usize) -> Result<ForbiddenClass, OmissionError> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(OmissionError::Invalid(format!("n must be odd and at least 3, got {n}")));
    }
    let top = n.div_ceil(2);
    let monoid = Arc::new(make_truncated(top));
    let mut members = Vec::new();
    for a in 1..=top {
        for b in a..=top {
            for c in b..=top {
                let perimeter = a + b + c;
                if perimeter % 2 == 1 && perimeter <= n && c <= (a + b).min(top) {
                    members.push(MetricSpace::triangle(monoid.clone(), a, b, c)?);
                }
            }
        }
    }
    ForbiddenClass::new(members, (1..=top).map(Dist::new).collect())
}

/// A path extension of a member mapping homomorphically into a host.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureCounterexample {
    pub member: usize,
    pub extension: PathExtension,
    pub host: usize,
    /// Image of each carrier point in the host.
    pub map: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureReport {
    /// Path extensions tried, over all members.
    pub extensions: usize,
    pub counterexample: Option<ClosureCounterexample>,
}

impl ClosureReport {
    pub fn closed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Look for a path extension (over `f.spectrum_bound`) of some member that
/// maps homomorphically into one of the free `hosts`. Finding none is
/// evidence of closure under path extensions, not a proof.
pub fn check_closed_under_path_extensions(
    f: &ForbiddenClass,
    hosts: &[MetricSpace],
) -> Result<ClosureReport, OmissionError> {
    if let Some(i) = hosts.iter().position(|h| !is_free(h, f)) {
        return Err(OmissionError::HostNotFree(i));
    }
    let mut extensions = 0;
    for (mi, member) in f.members.iter().enumerate() {
        for ext in enumerate_path_extensions(member, &f.spectrum_bound, None)? {
            extensions += 1;
            for (hi, host) in hosts.iter().enumerate() {
                if let Some(map) = weak_homomorphism_exists(&ext.carrier, host) {
                    return Ok(ClosureReport {
                        extensions,
                        counterexample: Some(ClosureCounterexample {
                            member: mi,
                            extension: ext,
                            host: hi,
                            map,
                        }),
                    });
                }
            }
        }
    }
    Ok(ClosureReport {
        extensions,
        counterexample: None,
    })
}

/// Smallest witness for `base` among `f`-free spaces with spectrum in
/// `f.spectrum_bound ∪ spectrum(base)`. Freeness is hereditary, so
/// pruning non-free candidates during the search loses nothing.
pub fn free_witness_search(
    base: &MetricSpace,
    f: &ForbiddenClass,
    max_size: usize,
) -> Result<EppaWitness, OmissionError> {
    if !is_free(base, f) {
        return Err(OmissionError::BaseNotFree);
    }
    if let Some(m) = f.members.iter().find(|m| !m.has_dominated_spectrum()) {
        return Err(OmissionError::NotDominated(format!("{:?}", m.labels())));
    }
    let allowed: BTreeSet<Dist> = f.spectrum_bound.union(&base.spectrum()).copied().collect();
    let g = generated_set(base.monoid(), &allowed, DEFAULT_SUBMONOID_CAP)?;
    if !base.monoid().is_archimedean_on(&g) {
        return Err(OmissionError::NonArchimedean);
    }
    let keep = |s: &MetricSpace| is_free(s, f);
    match search_witness(base, max_size, &allowed, &keep) {
        Ok((w, _)) => Ok(w),
        Err(e @ EppaError::Exhausted { .. }) => Err(OmissionError::Eppa(e)),
        Err(e) => Err(e.into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eppa::verify_witness;
    use crate::space::{truncated_path_metric, SimpleGraph};

    fn sides(f: &ForbiddenClass) -> Vec<Vec<usize>> {
        f.members
            .iter()
            .map(|t| {
                let mut s = vec![t.d(0, 1).index(), t.d(1, 2).index(), t.d(0, 2).index()];
                s.sort_unstable();
                s
            })
            .collect()
    }

    #[test]
    fn odd_perimeter_examples() {
        assert_eq!(sides(&odd_perimeter_triangles(3).unwrap()), vec![vec![1, 1, 1]]);
        assert_eq!(sides(&odd_perimeter_triangles(5).unwrap()), vec![vec![1, 1, 1], vec![1, 2, 2]]);
        for n in [3, 5, 7, 9] {
            let f = odd_perimeter_triangles(n).unwrap();
            assert!(f.members.iter().all(|m| m.has_dominated_spectrum()));
        }
        assert!(odd_perimeter_triangles(4).is_err());
        assert!(odd_perimeter_triangles(1).is_err());
    }

    #[test]
    fn freeness_examples() {
        let f3 = odd_perimeter_triangles(3).unwrap();
        let c5 = truncated_path_metric(&SimpleGraph::cycle(5), 2).unwrap();
        assert!(is_free(&c5, &f3));
        let eq = MetricSpace::equilateral(c5.monoid_arc().clone(), 3, Dist::new(1)).unwrap();
        assert!(!is_free(&eq, &f3));
        assert!(is_free(&eq, &ForbiddenClass::empty()));
    }

    #[test]
    fn free_witness_examples() {
        let f3 = odd_perimeter_triangles(3).unwrap();
        let r2 = Arc::new(make_truncated(2));
        let edge = MetricSpace::equilateral(r2.clone(), 2, Dist::new(1)).unwrap();
        assert_eq!(free_witness_search(&edge, &f3, 4).unwrap().witness, edge);

        let path = MetricSpace::triangle(r2.clone(), 1, 1, 2).unwrap();
        let w = free_witness_search(&path, &f3, 6).unwrap();
        assert!(w.size() <= 5);
        assert!(verify_witness(&w).ok() && is_free(&w.witness, &f3));

        let eq = MetricSpace::equilateral(r2, 3, Dist::new(1)).unwrap();
        assert_eq!(free_witness_search(&eq, &f3, 6).unwrap_err(), OmissionError::BaseNotFree);
    }

    #[test]
    fn closure_counterexample_for_the_path_triangle() {
        let r3 = Arc::new(make_truncated(3));
        let f = ForbiddenClass::new(vec![MetricSpace::triangle(r3.clone(), 1, 1, 2).unwrap()], [1, 2, 3].map(Dist::new).into())
            .unwrap();
        let edge = MetricSpace::equilateral(r3, 2, Dist::new(1)).unwrap();
        let report = check_closed_under_path_extensions(&f, &[edge]).unwrap();
        let cx = report.counterexample.unwrap();
        // the walk 0-1-2 with the ends left undefined folds onto the edge
        assert_eq!(cx.extension.carrier.get(0, 2), None);
        assert_eq!(cx.map[0], cx.map[2]);
    }

    #[test]
    fn empty_class_is_closed() {
        let r2 = Arc::new(make_truncated(2));
        let eq = MetricSpace::equilateral(r2, 3, Dist::new(1)).unwrap();
        assert!(check_closed_under_path_extensions(&ForbiddenClass::empty(), &[eq]).unwrap().closed());
    }
}
