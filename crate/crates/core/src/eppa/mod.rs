//! Witnesses for the extension property for partial isometries.
//!
//! A witness for a space `A` is a larger space `B` with an isometric copy
//! of `A` such that every partial isometry of `A` extends to an
//! automorphism of `B`.

mod search;
mod semi;
mod sigma;

use thiserror::Error;

use crate::monoid::MonoidError;
use crate::space::{
    enumerate_partial_isometries, extend_to_automorphism, is_isometric_embedding, is_total_isometry, MetricSpace,
    PartialIsometry, SpaceError,
};

pub use search::{brute_force_witness, search_witness, SearchStats};
pub use semi::{
    class_decomposition, class_decomposition_with_split, pad_classes, semi_archimedean_witness, BaseCase,
    BruteForce, ClassDecomposition, PaddedSpace, SaWitness, EAGER_CERTIFICATE_LIMIT,
};
pub use sigma::{is_geodesic_consistent, sigma_system, SigmaSystem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EppaError {
    #[error("no witness with at most {max_size} points ({examined} candidates examined)")]
    Exhausted { max_size: usize, examined: usize },
    #[error("the generated submonoid is not archimedean")]
    NonArchimedean,
    #[error("the generated submonoid is not semi-archimedean")]
    NotSemiArchimedean,
    #[error("claim {claim} failed: {detail}")]
    ClaimViolated { claim: &'static str, detail: String },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
}

/// A partial isometry of the base and a total isometry of the witness
/// extending it through the embedding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub partial: PartialIsometry,
    pub total: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EppaWitness {
    pub base: MetricSpace,
    pub witness: MetricSpace,
    /// `embedding[a]` is the witness point carrying base point `a`.
    pub embedding: Vec<usize>,
    /// May be empty; missing certificates are found by search.
    pub certificates: Vec<Certificate>,
}

impl EppaWitness {
    /// The base serving as its own witness, no certificates.
    pub fn trivial(base: MetricSpace) -> EppaWitness {
        EppaWitness {
            embedding: (0..base.len()).collect(),
            witness: base.clone(),
            base,
            certificates: Vec::new(),
        }
    }

    pub fn size(&self) -> usize {
        self.witness.len()
    }

    /// Fill in certificates for every partial isometry by search.
    pub fn with_searched_certificates(mut self) -> Option<EppaWitness> {
        let mut certs = Vec::new();
        for p in enumerate_partial_isometries(&self.base) {
            let total = extend_to_automorphism(&self.witness, &p.mapped(&self.embedding))?;
            certs.push(Certificate { partial: p, total });
        }
        self.certificates = certs;
        Some(self)
    }
}

/// Why a witness failed verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyFailure {
    /// The embedding is not an isometric injection.
    Embedding,
    /// A stored certificate is not a total isometry extending its map.
    BadCertificate(PartialIsometry),
    /// No automorphism of the witness extends this partial isometry.
    NoExtension(PartialIsometry),
}

impl VerifyFailure {
    pub fn partial(&self) -> Option<&PartialIsometry> {
        match self {
            VerifyFailure::Embedding => None,
            VerifyFailure::BadCertificate(p) | VerifyFailure::NoExtension(p) => Some(p),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    /// Partial isometries checked before stopping.
    pub checked: usize,
    pub failure: Option<VerifyFailure>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }
}

/// Check every partial isometry of the base, in enumeration order, against
/// its stored certificate or, failing that, a searched extension.
pub fn verify_witness(w: &EppaWitness) -> VerifyReport {
    verify_witness_with(w, |_| None)
}

/// As [`verify_witness`], consulting `provider` before searching. Whatever
/// the provider returns is checked, never trusted.
pub fn verify_witness_with<P>(w: &EppaWitness, provider: P) -> VerifyReport
where
    P: Fn(&PartialIsometry) -> Option<Vec<usize>>,
{
    let mut checked = 0;
    if !is_isometric_embedding(&w.base, &w.witness, &w.embedding) {
        return VerifyReport {
            checked,
            failure: Some(VerifyFailure::Embedding),
        };
    }
    let stored: std::collections::HashMap<&PartialIsometry, &Vec<usize>> =
        w.certificates.iter().map(|c| (&c.partial, &c.total)).collect();
    for c in &w.certificates {
        if PartialIsometry::new(&w.base, c.partial.pairs().to_vec()).as_ref() != Some(&c.partial) {
            return VerifyReport {
                checked,
                failure: Some(VerifyFailure::BadCertificate(c.partial.clone())),
            };
        }
    }
    for p in enumerate_partial_isometries(&w.base) {
        checked += 1;
        let lifted = PartialIsometry::new(&w.witness, p.mapped(&w.embedding)).expect("embedding is isometric");
        let valid = |t: &[usize]| is_total_isometry(&w.witness, &w.witness, t) && lifted.is_extended_by(t);
        if let Some(total) = stored.get(&p) {
            if !valid(total) {
                return VerifyReport {
                    checked,
                    failure: Some(VerifyFailure::BadCertificate(p)),
                };
            }
            continue;
        }
        if let Some(total) = provider(&p) {
            if !valid(&total) {
                return VerifyReport {
                    checked,
                    failure: Some(VerifyFailure::BadCertificate(p)),
                };
            }
            continue;
        }
        if extend_to_automorphism(&w.witness, lifted.pairs()).is_none() {
            return VerifyReport {
                checked,
                failure: Some(VerifyFailure::NoExtension(p)),
            };
        }
    }
    VerifyReport { checked, failure: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::{make_truncated, Dist};
    use crate::space::{truncated_path_metric, SimpleGraph};
    use std::sync::Arc;

    #[test]
    fn verify_examples() {
        let r2 = Arc::new(make_truncated(2));
        let eq = MetricSpace::equilateral(r2.clone(), 3, Dist::new(1)).unwrap();
        let report = verify_witness(&EppaWitness::trivial(eq));
        assert!(report.ok());
        assert_eq!(report.checked, 34);

        let path = MetricSpace::from_matrix(
            r2.clone(),
            vec!["a".into(), "b".into(), "c".into()],
            &[vec![0, 1, 2], vec![1, 0, 1], vec![2, 1, 0]],
        )
        .unwrap();
        let report = verify_witness(&EppaWitness::trivial(path.clone()));
        let failing = report.failure.unwrap();
        assert_eq!(failing, VerifyFailure::NoExtension(PartialIsometry::new(&path, vec![(0, 1)]).unwrap()));

        let point = MetricSpace::equilateral(r2, 1, Dist::new(1)).unwrap();
        assert!(verify_witness(&EppaWitness::trivial(point)).ok());
    }

    #[test]
    fn bad_certificates_are_caught() {
        let c4 = truncated_path_metric(&SimpleGraph::cycle(4), 2).unwrap();
        let mut w = EppaWitness::trivial(c4.clone()).with_searched_certificates().unwrap();
        assert!(verify_witness(&w).ok());
        let victim = w
            .certificates
            .iter()
            .position(|c| c.partial.len() == 1 && c.partial.pairs()[0].0 != c.partial.pairs()[0].1)
            .unwrap();
        w.certificates[victim].total = (0..4).collect();
        let target = w.certificates[victim].partial.clone();
        assert_eq!(verify_witness(&w).failure, Some(VerifyFailure::BadCertificate(target)));
    }

    #[test]
    fn bad_embedding_is_caught() {
        let c4 = truncated_path_metric(&SimpleGraph::cycle(4), 2).unwrap();
        let mut w = EppaWitness::trivial(c4);
        w.embedding = vec![0, 0, 1, 2];
        assert_eq!(verify_witness(&w).failure, Some(VerifyFailure::Embedding));
    }
}
