//! Witnesses over semi-archimedean monoids by recursion on the number of
//! archimedean classes.
//!
//! With `R_2` the top class of the submonoid generated by the spectrum,
//! points at distance below `R_2` form classes. Cross distances between
//! classes are constant, so the classes form a quotient space over `R_2`.
//! Each class is padded to a common template, the template gets a witness
//! by recursion, the quotient gets one from the base case, and the final
//! witness is one template-witness block per quotient-witness point.

use std::collections::{BTreeSet, HashMap};

use crate::monoid::{
    classes_of_subset, generated_set, is_semi_archimedean_on, Dist, DEFAULT_SUBMONOID_CAP,
};
use crate::space::{
    enumerate_partial_isometries, extend_to_automorphism, validate_space, MetricSpace, PartialIsometry,
};

use super::{brute_force_witness, verify_witness_with, Certificate, EppaError, EppaWitness, VerifyReport};

/// Bases with at most this many points get every certificate computed up
/// front.
pub const EAGER_CERTIFICATE_LIMIT: usize = 5;

/// Supplies witnesses for spaces whose generated submonoid has at most one
/// nontrivial archimedean class.
pub trait BaseCase: Sync {
    fn witness(&self, base: &MetricSpace, allowed: &BTreeSet<Dist>) -> Result<EppaWitness, EppaError>;
}

/// [`brute_force_witness`] with a fixed size bound.
#[derive(Clone, Copy, Debug)]
pub struct BruteForce {
    pub max_size: usize,
}

impl BaseCase for BruteForce {
    fn witness(&self, base: &MetricSpace, allowed: &BTreeSet<Dist>) -> Result<EppaWitness, EppaError> {
        brute_force_witness(base, self.max_size, allowed)
    }
}

impl<F> BaseCase for F
where
    F: Fn(&MetricSpace, &BTreeSet<Dist>) -> Result<EppaWitness, EppaError> + Sync,
{
    fn witness(&self, base: &MetricSpace, allowed: &BTreeSet<Dist>) -> Result<EppaWitness, EppaError> {
        self(base, allowed)
    }
}

/// Points grouped by the relation "distance below the top class".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassDecomposition {
    pub space: MetricSpace,
    /// The top class `R_2`; empty when there is no split.
    pub top: BTreeSet<Dist>,
    pub class_of: Vec<usize>,
    /// Classes ordered by their least point.
    pub classes: Vec<Vec<usize>>,
    /// Constant distance between each pair of classes (zero on the diagonal).
    pub cross: Vec<Vec<Dist>>,
    /// The classes as points `"1"…"m"` at the cross distances.
    pub quotient: MetricSpace,
}

impl ClassDecomposition {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Nonzero distances inside classes.
    pub fn lower_spectrum(&self) -> BTreeSet<Dist> {
        self.space.spectrum().into_iter().filter(|d| !self.top.contains(d)).collect()
    }
}

fn generated(space: &MetricSpace) -> Result<BTreeSet<Dist>, EppaError> {
    Ok(generated_set(space.monoid(), &space.spectrum(), DEFAULT_SUBMONOID_CAP)?)
}

/// Split at the top archimedean class of the submonoid generated by the
/// spectrum. With at most one nontrivial class there is no split: one
/// class, and the quotient is a point.
pub fn class_decomposition(space: &MetricSpace) -> Result<ClassDecomposition, EppaError> {
    let g = generated(space)?;
    if !is_semi_archimedean_on(space.monoid(), &g) {
        return Err(EppaError::NotSemiArchimedean);
    }
    let classes = classes_of_subset(space.monoid(), &g);
    let top: BTreeSet<Dist> = if classes.len() <= 1 {
        BTreeSet::new()
    } else {
        classes.top().expect("nonempty").iter().copied().collect()
    };
    decompose(space, top)
}

/// Decompose with an explicit top set `r2`. Every spectrum element at or
/// above `min(r2)` must lie in `r2`.
pub fn class_decomposition_with_split(
    space: &MetricSpace,
    r2: &BTreeSet<Dist>,
) -> Result<ClassDecomposition, EppaError> {
    let Some(&low) = r2.first() else {
        return Err(EppaError::Invalid("split set is empty".into()));
    };
    if low.is_zero() {
        return Err(EppaError::Invalid("split set contains zero".into()));
    }
    if space.spectrum().iter().any(|d| (*d >= low) != r2.contains(d)) {
        return Err(EppaError::Invalid("split set is not an upper segment of the spectrum".into()));
    }
    decompose(space, r2.clone())
}

fn decompose(space: &MetricSpace, top: BTreeSet<Dist>) -> Result<ClassDecomposition, EppaError> {
    let n = space.len();
    let near = |a: usize, b: usize| !top.contains(&space.d(a, b));
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for a in 0..n {
        if class_of[a] != usize::MAX {
            continue;
        }
        let members: Vec<usize> = (a..n).filter(|&b| near(a, b)).collect();
        for &b in &members {
            if class_of[b] != usize::MAX {
                return Err(EppaError::ClaimViolated {
                    claim: "classes form an equivalence",
                    detail: format!("{} is near two classes", space.label(b)),
                });
            }
            class_of[b] = classes.len();
        }
        classes.push(members);
    }
    for c in &classes {
        for &a in c {
            for &b in c {
                if !near(a, b) {
                    return Err(EppaError::ClaimViolated {
                        claim: "classes form an equivalence",
                        detail: format!("{} and {} are not near", space.label(a), space.label(b)),
                    });
                }
            }
        }
    }
    let m = classes.len();
    let mut cross = vec![vec![Dist::ZERO; m]; m];
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            let s = space.d(classes[i][0], classes[j][0]);
            for &a in &classes[i] {
                for &b in &classes[j] {
                    if space.d(a, b) != s {
                        return Err(EppaError::ClaimViolated {
                            claim: "constant cross distances",
                            detail: format!("{} to {} differs", space.label(a), space.label(b)),
                        });
                    }
                }
            }
            cross[i][j] = s;
        }
    }
    let labels = (1..=m).map(|i| i.to_string()).collect();
    let quotient = validate_space(space.monoid_arc().clone(), labels, cross.clone())?;
    Ok(ClassDecomposition {
        space: space.clone(),
        top,
        class_of,
        classes,
        cross,
        quotient,
    })
}

/// A space whose classes are pairwise isometric copies of one template.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PaddedSpace {
    /// Point `(i, t)` of class `i` and template point `t` sits at
    /// `i · |template| + t`.
    pub space: MetricSpace,
    pub decomposition: ClassDecomposition,
    /// `(A, d_0)`: the original points, same-class distances kept and
    /// cross-class distances set to the largest in-class distance; a single
    /// point when every class is a singleton.
    pub template: MetricSpace,
    /// Template point carrying each original point.
    pub iota: Vec<usize>,
    /// Original point `a` sits at `embedding[a]`.
    pub embedding: Vec<usize>,
}

/// Extend every class to a copy of the template, keeping cross distances.
pub fn pad_classes(dec: &ClassDecomposition) -> Result<PaddedSpace, EppaError> {
    let space = &dec.space;
    let n = space.len();
    let (template, iota) = match dec.lower_spectrum().last() {
        None => {
            let point = MetricSpace::equilateral(space.monoid_arc().clone(), 1.min(n), Dist::ZERO)?;
            (point, vec![0; n])
        }
        Some(&s) => {
            let d0 = |a: usize, b: usize| {
                if dec.class_of[a] == dec.class_of[b] {
                    space.d(a, b)
                } else {
                    s
                }
            };
            let t = MetricSpace::from_fn_labeled(space.monoid_arc().clone(), space.labels().to_vec(), d0)
                .map_err(|e| EppaError::ClaimViolated {
                    claim: "template is a metric",
                    detail: e.to_string(),
                })?;
            (t, (0..n).collect())
        }
    };
    let q = template.len();
    let m = dec.len();
    let mut original: HashMap<(usize, usize), usize> = HashMap::new();
    for a in 0..n {
        original.insert((dec.class_of[a], iota[a]), a);
    }
    let mut taken: BTreeSet<String> = space.labels().iter().cloned().collect();
    let mut labels = Vec::with_capacity(m * q);
    for i in 0..m {
        for t in 0..q {
            labels.push(match original.get(&(i, t)) {
                Some(&a) => space.label(a).to_string(),
                None => fresh(&mut taken, format!("{}@{}", template.label(t), i + 1)),
            });
        }
    }
    let padded = MetricSpace::from_fn_labeled(space.monoid_arc().clone(), labels, |x, y| {
        let (i, t) = (x / q, x % q);
        let (j, u) = (y / q, y % q);
        if i == j {
            template.d(t, u)
        } else {
            dec.cross[i][j]
        }
    })?;
    let embedding: Vec<usize> = (0..n).map(|a| dec.class_of[a] * q + iota[a]).collect();
    let decomposition = if dec.top.is_empty() {
        decompose(&padded, BTreeSet::new())?
    } else {
        class_decomposition_with_split(&padded, &dec.top)?
    };
    Ok(PaddedSpace {
        space: padded,
        decomposition,
        template,
        iota,
        embedding,
    })
}

fn fresh(taken: &mut BTreeSet<String>, mut label: String) -> String {
    while taken.contains(&label) {
        label.push('\'');
    }
    taken.insert(label.clone());
    label
}

#[derive(Clone, Debug)]
enum Kind {
    Base,
    Layered(Box<Layered>),
}

#[derive(Clone, Debug)]
struct Layered {
    class_of: Vec<usize>,
    iota: Vec<usize>,
    cross: Vec<Vec<Dist>>,
    quotient: Construction,
    inner: Construction,
}

#[derive(Clone, Debug)]
struct Construction {
    witness: EppaWitness,
    kind: Kind,
}

impl Construction {
    fn depth(&self) -> usize {
        match &self.kind {
            Kind::Base => 0,
            Kind::Layered(l) => 1 + l.inner.depth(),
        }
    }

    /// A total isometry of the witness extending `partial` (pairs of base
    /// points) through the embedding.
    fn extend(&self, partial: &[(usize, usize)]) -> Result<Vec<usize>, EppaError> {
        let w = &self.witness;
        let Kind::Layered(layer) = &self.kind else {
            let p = PartialIsometry::new(&w.base, partial.to_vec())
                .ok_or_else(|| EppaError::Invalid("not a partial isometry".into()))?;
            if let Some(c) = w.certificates.iter().find(|c| c.partial == p) {
                return Ok(c.total.clone());
            }
            return extend_to_automorphism(&w.witness, &p.mapped(&w.embedding)).ok_or_else(|| {
                EppaError::ClaimViolated {
                    claim: "base case witness extends every partial isometry",
                    detail: format!("{:?}", p.pairs()),
                }
            });
        };
        let base = &w.base;
        // f on classes meeting the domain
        let mut f: HashMap<usize, usize> = HashMap::new();
        for &(a, b) in partial {
            let (i, j) = (layer.class_of[a], layer.class_of[b]);
            if *f.entry(i).or_insert(j) != j {
                return Err(EppaError::ClaimViolated {
                    claim: "each class maps into a single class",
                    detail: format!("class of {} is split", base.label(a)),
                });
            }
        }
        let mut f_pairs: Vec<(usize, usize)> = f.iter().map(|(&i, &j)| (i, j)).collect();
        f_pairs.sort_unstable();
        let images: BTreeSet<usize> = f_pairs.iter().map(|p| p.1).collect();
        let preserves = f_pairs
            .iter()
            .all(|&(i, fi)| f_pairs.iter().all(|&(j, fj)| layer.cross[i][j] == layer.cross[fi][fj]));
        if images.len() != f_pairs.len() || !preserves {
            return Err(EppaError::ClaimViolated {
                claim: "the class map is a partial isometry of the quotient",
                detail: format!("{f_pairs:?}"),
            });
        }
        let f_star = layer.quotient.extend(&f_pairs)?;
        let block_of_class = &layer.quotient.witness.embedding;
        let q = layer.inner.witness.witness.len();
        let blocks = layer.quotient.witness.witness.len();

        let mut chi_hat: HashMap<usize, Vec<usize>> = HashMap::new();
        for &i in f.keys() {
            let chi: Vec<(usize, usize)> = partial
                .iter()
                .filter(|&&(a, _)| layer.class_of[a] == i)
                .map(|&(a, b)| (layer.iota[a], layer.iota[b]))
                .collect();
            let total = layer.inner.extend(&chi)?;
            chi_hat.insert(block_of_class[i], total);
        }
        let mut total = vec![0; blocks * q];
        for b in 0..blocks {
            let target = f_star[b];
            for x in 0..q {
                let y = chi_hat.get(&b).map_or(x, |chi| chi[x]);
                total[b * q + x] = target * q + y;
            }
        }
        Ok(total)
    }
}

/// A witness together with the construction that produced it.
#[derive(Clone, Debug)]
pub struct SaWitness {
    pub witness: EppaWitness,
    construction: Construction,
}

impl SaWitness {
    /// Number of layers above the base case.
    pub fn depth(&self) -> usize {
        self.construction.depth()
    }

    /// The certificate the construction assigns to `partial`.
    pub fn extend(&self, partial: &PartialIsometry) -> Result<Vec<usize>, EppaError> {
        self.construction.extend(partial.pairs())
    }

    /// Exhaustive verification, checking the construction's certificates.
    pub fn verify(&self) -> VerifyReport {
        verify_witness_with(&self.witness, |p| self.extend(p).ok())
    }
}

/// Build a witness by recursion on the archimedean classes of the
/// submonoid generated by the spectrum; inputs with at most one nontrivial
/// class go to `base_case` unchanged.
pub fn semi_archimedean_witness(base: &MetricSpace, base_case: &dyn BaseCase) -> Result<SaWitness, EppaError> {
    let mut construction = build(base, base_case)?;
    if base.len() <= EAGER_CERTIFICATE_LIMIT && construction.witness.certificates.is_empty() {
        let certs = enumerate_partial_isometries(base)
            .map(|p| {
                let total = construction.extend(p.pairs())?;
                Ok(Certificate { partial: p, total })
            })
            .collect::<Result<Vec<_>, EppaError>>()?;
        construction.witness.certificates = certs;
    }
    Ok(SaWitness {
        witness: construction.witness.clone(),
        construction,
    })
}

fn delegate(base: &MetricSpace, base_case: &dyn BaseCase, allowed: &BTreeSet<Dist>) -> Result<Construction, EppaError> {
    let witness = base_case.witness(base, allowed)?;
    if witness.base != *base {
        return Err(EppaError::Invalid("base case returned a witness for a different space".into()));
    }
    Ok(Construction {
        witness,
        kind: Kind::Base,
    })
}

fn build(base: &MetricSpace, base_case: &dyn BaseCase) -> Result<Construction, EppaError> {
    let dec = class_decomposition(base)?;
    let g = generated(base)?;
    if dec.top.is_empty() {
        let allowed = g.into_iter().filter(|d| !d.is_zero()).collect();
        return delegate(base, base_case, &allowed);
    }
    let padded = pad_classes(&dec)?;
    let top_allowed: BTreeSet<Dist> = g.intersection(&dec.top).copied().collect();
    let quotient = delegate(&dec.quotient, base_case, &top_allowed)?;
    let inner = build(&padded.template, base_case)?;

    let qw = &quotient.witness;
    let iw = &inner.witness;
    let q = iw.witness.len();
    let blocks = qw.witness.len();
    let embedding: Vec<usize> = (0..base.len())
        .map(|a| qw.embedding[dec.class_of[a]] * q + iw.embedding[padded.iota[a]])
        .collect();
    let mut names: Vec<Option<String>> = vec![None; blocks * q];
    for (a, &x) in embedding.iter().enumerate() {
        names[x] = Some(base.label(a).to_string());
    }
    let mut taken: BTreeSet<String> = base.labels().iter().cloned().collect();
    let labels: Vec<String> = names
        .into_iter()
        .enumerate()
        .map(|(x, name)| {
            name.unwrap_or_else(|| {
                let (b, y) = (x / q, x % q);
                fresh(&mut taken, format!("{}@{}", iw.witness.label(y), qw.witness.label(b)))
            })
        })
        .collect();
    let witness = MetricSpace::from_fn_labeled(base.monoid_arc().clone(), labels, |x, y| {
        let (b, u) = (x / q, x % q);
        let (c, v) = (y / q, y % q);
        if b == c {
            iw.witness.d(u, v)
        } else {
            qw.witness.d(b, c)
        }
    })?;
    if !crate::space::is_isometric_embedding(base, &witness, &embedding) {
        return Err(EppaError::ClaimViolated {
            claim: "the base embeds isometrically",
            detail: String::new(),
        });
    }
    Ok(Construction {
        witness: EppaWitness {
            base: base.clone(),
            witness,
            embedding,
            certificates: Vec::new(),
        },
        kind: Kind::Layered(Box::new(Layered {
            class_of: dec.class_of,
            iota: padded.iota,
            cross: dec.cross,
            quotient,
            inner,
        })),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eppa::verify_witness;
    use crate::monoid::{fixtures, make_max_chain, make_truncated};
    use std::sync::Arc;

    fn pqr() -> MetricSpace {
        MetricSpace::from_matrix(
            Arc::new(make_max_chain(2)),
            vec!["p".into(), "q".into(), "r".into()],
            &[vec![0, 1, 2], vec![1, 0, 2], vec![2, 2, 0]],
        )
        .unwrap()
    }

    fn chain4() -> MetricSpace {
        MetricSpace::from_matrix(
            Arc::new(make_max_chain(3)),
            vec!["p".into(), "q".into(), "r".into(), "t".into()],
            &[vec![0, 1, 2, 3], vec![1, 0, 2, 3], vec![2, 2, 0, 3], vec![3, 3, 3, 0]],
        )
        .unwrap()
    }

    #[test]
    fn decomposition_examples() {
        let dec = class_decomposition(&pqr()).unwrap();
        assert_eq!(dec.classes, vec![vec![0, 1], vec![2]]);
        assert_eq!(dec.cross[0][1], Dist::new(2));
        assert_eq!(dec.quotient.len(), 2);

        let r3 = Arc::new(make_truncated(3));
        let tri = MetricSpace::triangle(r3, 1, 2, 2).unwrap();
        let dec = class_decomposition(&tri).unwrap();
        assert!(dec.top.is_empty());
        assert_eq!(dec.classes.len(), 1);
        assert_eq!(dec.quotient.len(), 1);

        let chain = Arc::new(make_max_chain(2));
        let eq = MetricSpace::equilateral(chain, 3, Dist::new(2)).unwrap();
        let dec = class_decomposition_with_split(&eq, &[Dist::new(2)].into()).unwrap();
        assert_eq!(dec.classes.len(), 3);
        assert!(crate::space::is_isometric(&dec.quotient, &eq).is_some());
    }

    #[test]
    fn bad_split_is_rejected() {
        let err = class_decomposition_with_split(&pqr(), &[Dist::new(1)].into()).unwrap_err();
        assert!(matches!(err, EppaError::Invalid(_)));
    }

    #[test]
    fn non_semi_archimedean_is_rejected() {
        let m = Arc::new(fixtures::not_semi_archimedean());
        let s = MetricSpace::from_matrix(m, vec!["x".into(), "y".into(), "z".into()], &[
            vec![0, 1, 2],
            vec![1, 0, 2],
            vec![2, 2, 0],
        ])
        .unwrap();
        assert_eq!(class_decomposition(&s).unwrap_err(), EppaError::NotSemiArchimedean);
    }

    #[test]
    fn padding_example() {
        let padded = pad_classes(&class_decomposition(&pqr()).unwrap()).unwrap();
        assert_eq!(padded.space.len(), 6);
        assert_eq!(padded.decomposition.classes.len(), 2);
        assert!(padded.decomposition.classes.iter().all(|c| c.len() == 3));
        for c in &padded.decomposition.classes {
            for &a in c {
                for &b in c {
                    if a != b {
                        assert_eq!(padded.space.d(a, b), Dist::new(1));
                    }
                }
            }
        }
        assert_eq!(padded.space.d(0, 3), Dist::new(2));
        assert!(crate::space::is_isometric_embedding(&pqr(), &padded.space, &padded.embedding));
    }

    #[test]
    fn padding_singletons_is_identity() {
        let chain = Arc::new(make_max_chain(2));
        let eq = MetricSpace::equilateral(chain, 3, Dist::new(2)).unwrap();
        let padded = pad_classes(&class_decomposition_with_split(&eq, &[Dist::new(2)].into()).unwrap()).unwrap();
        assert_eq!(padded.space, eq);
        assert_eq!(padded.template.len(), 1);
    }

    #[test]
    fn pqr_witness() {
        let w = semi_archimedean_witness(&pqr(), &BruteForce { max_size: 8 }).unwrap();
        assert_eq!(w.witness.size(), 6);
        assert_eq!(w.depth(), 1);
        assert!(w.verify().ok());
        assert!(verify_witness(&w.witness).ok());
    }

    #[test]
    fn three_level_chain_witness() {
        let w = semi_archimedean_witness(&chain4(), &BruteForce { max_size: 8 }).unwrap();
        assert_eq!(w.depth(), 2);
        assert_eq!(w.witness.size(), 24);
        assert!(w.verify().ok());
    }

    #[test]
    fn archimedean_input_is_delegated() {
        let r2 = Arc::new(make_truncated(2));
        let path = MetricSpace::from_matrix(r2, vec!["a".into(), "b".into(), "c".into()], &[
            vec![0, 1, 2],
            vec![1, 0, 1],
            vec![2, 1, 0],
        ])
        .unwrap();
        let bf = BruteForce { max_size: 6 };
        let sa = semi_archimedean_witness(&path, &bf).unwrap();
        let direct = bf.witness(&path, &[Dist::new(1), Dist::new(2)].into()).unwrap();
        assert_eq!(sa.depth(), 0);
        assert_eq!(sa.witness, direct);
    }

    #[test]
    fn claim_checks_fire_on_bad_input() {
        let w = semi_archimedean_witness(&pqr(), &BruteForce { max_size: 8 }).unwrap();
        // p ↦ p, q ↦ r splits the class {p, q}; not a partial isometry, so
        // the construction must refuse rather than produce a map
        let err = w.construction.extend(&[(0, 0), (1, 2)]).unwrap_err();
        assert!(matches!(err, EppaError::ClaimViolated { .. }), "{err:?}");
    }
}
