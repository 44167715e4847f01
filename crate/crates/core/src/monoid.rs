//! Finite distance monoids.
//!
//! A distance monoid is a commutative monoid `(R, ⊕, 0)` carrying a linear
//! order with least element `0` such that `⊕` is monotone in both arguments.
//! Only finite carriers are represented. Elements are positions in the
//! carrier list: position `0` is the identity and the order is positional.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Default bound on the size of a generated submonoid.
pub const DEFAULT_SUBMONOID_CAP: usize = 4096;

/// An element of a [`DistanceMonoid`], identified by its position in the
/// carrier. The derived order is the monoid order.
///
/// There is deliberately no arithmetic on `Dist`: sums go through
/// [`DistanceMonoid::plus`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Dist(u16);

impl Dist {
    pub const ZERO: Dist = Dist(0);

    pub fn new(index: usize) -> Dist {
        Dist(u16::try_from(index).expect("monoid element index exceeds u16"))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// How a monoid was produced. Used to serialize the compact JSON forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonoidKind {
    /// `{0..n}` with addition truncated at `n`.
    Truncated(usize),
    /// `{0..n}` with `max` as the operation.
    MaxChain(usize),
    /// Arbitrary validated table.
    Table,
}

/// Names of the axioms checked by [`validate_monoid`], in checking order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Order,
    Identity,
    Commutativity,
    Associativity,
    Monotonicity,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Axiom::Order => "order",
            Axiom::Identity => "identity",
            Axiom::Commutativity => "commutativity",
            Axiom::Associativity => "associativity",
            Axiom::Monotonicity => "monotonicity",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonoidError {
    #[error("{axiom} axiom violated by {witness:?}")]
    Axiom { axiom: Axiom, witness: Vec<String> },
    #[error("malformed table: {0}")]
    Malformed(String),
    #[error("generated submonoid exceeds {cap} elements")]
    SubmonoidTooLarge { cap: usize },
    #[error("element {0} is not in the carrier")]
    UnknownElement(usize),
}

/// A validated finite distance monoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMonoid {
    kind: MonoidKind,
    labels: Vec<String>,
    plus: Vec<Dist>,
}

/// Check the distance monoid axioms for a raw carrier and addition table.
///
/// `plus[i][j]` is the index of `labels[i] ⊕ labels[j]`. Axioms are checked
/// in the order order, identity, commutativity, associativity,
/// monotonicity; the first failure is reported with its lexicographically
/// least witnessing tuple (as labels).
pub fn validate_monoid(
    labels: Vec<String>,
    plus: Vec<Vec<usize>>,
) -> Result<DistanceMonoid, MonoidError> {
    let n = labels.len();
    if plus.len() != n || plus.iter().any(|row| row.len() != n) {
        return Err(MonoidError::Malformed(format!(
            "plus table must be {n}x{n}"
        )));
    }
    if let Some(bad) = plus.iter().flatten().find(|&&v| v >= n) {
        return Err(MonoidError::Malformed(format!(
            "table entry {bad} is outside the carrier"
        )));
    }
    if n > u16::MAX as usize {
        return Err(MonoidError::Malformed("carrier too large".into()));
    }
    let name = |i: usize| labels[i].clone();
    let fail = |axiom, idx: &[usize]| MonoidError::Axiom {
        axiom,
        witness: idx.iter().map(|&i| name(i)).collect(),
    };

    if n == 0 {
        return Err(MonoidError::Axiom {
            axiom: Axiom::Order,
            witness: vec![],
        });
    }
    // Positional order is linear as long as positions name distinct elements.
    for i in 0..n {
        for j in (i + 1)..n {
            if labels[i] == labels[j] {
                return Err(fail(Axiom::Order, &[i, j]));
            }
        }
    }
    for (r, row) in plus.iter().enumerate() {
        if row[0] != r || plus[0][r] != r {
            return Err(fail(Axiom::Identity, &[r]));
        }
    }
    for r in 0..n {
        for s in 0..n {
            if plus[r][s] != plus[s][r] {
                return Err(fail(Axiom::Commutativity, &[r, s]));
            }
        }
    }
    for r in 0..n {
        for s in 0..n {
            for t in 0..n {
                if plus[plus[r][s]][t] != plus[r][plus[s][t]] {
                    return Err(fail(Axiom::Associativity, &[r, s, t]));
                }
            }
        }
    }
    // With commutativity in hand, monotonicity reduces to
    // r <= s  =>  r ⊕ t <= s ⊕ t; the witness is reported as (r, s, t, t).
    for r in 0..n {
        for s in r..n {
            for t in 0..n {
                if plus[r][t] > plus[s][t] {
                    return Err(fail(Axiom::Monotonicity, &[r, s, t, t]));
                }
            }
        }
    }
    Ok(DistanceMonoid {
        kind: MonoidKind::Table,
        labels,
        plus: plus.into_iter().flatten().map(Dist::new).collect(),
    })
}

/// `R_n`: carrier `{0, …, n}` with addition truncated at `n`.
pub fn make_truncated(n: usize) -> DistanceMonoid {
    assert!(n >= 1, "truncated monoid needs n >= 1");
    let plus = (0..=n)
        .map(|r| (0..=n).map(|s| (r + s).min(n)).collect())
        .collect();
    let mut m = validate_monoid(numeric_labels(n), plus).expect("R_n is a distance monoid");
    m.kind = MonoidKind::Truncated(n);
    m
}

/// Chain `{0, …, n}` with `max` as the operation (ultrametric monoid).
pub fn make_max_chain(n: usize) -> DistanceMonoid {
    assert!(n >= 1, "max chain needs n >= 1");
    let plus = (0..=n)
        .map(|r| (0..=n).map(|s| r.max(s)).collect())
        .collect();
    let mut m = validate_monoid(numeric_labels(n), plus).expect("max chain is a distance monoid");
    m.kind = MonoidKind::MaxChain(n);
    m
}

fn numeric_labels(n: usize) -> Vec<String> {
    (0..=n).map(|i| i.to_string()).collect()
}

impl DistanceMonoid {
    pub fn kind(&self) -> MonoidKind {
        self.kind
    }

    /// Number of carrier elements, including zero.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, d: Dist) -> &str {
        &self.labels[d.index()]
    }

    pub fn element_by_label(&self, label: &str) -> Option<Dist> {
        self.labels.iter().position(|l| l == label).map(Dist::new)
    }

    pub fn contains(&self, d: Dist) -> bool {
        d.index() < self.len()
    }

    #[inline]
    pub fn plus(&self, r: Dist, s: Dist) -> Dist {
        self.plus[r.index() * self.len() + s.index()]
    }

    /// `r ⊕ r ⊕ … ⊕ r` with `k` summands (`k = 0` gives zero).
    pub fn multiple(&self, r: Dist, k: usize) -> Dist {
        (0..k).fold(Dist::ZERO, |acc, _| self.plus(acc, r))
    }

    /// Folded sum of a sequence of elements.
    pub fn sum<I: IntoIterator<Item = Dist>>(&self, items: I) -> Dist {
        items.into_iter().fold(Dist::ZERO, |acc, d| self.plus(acc, d))
    }

    /// Largest element of the carrier.
    pub fn max_element(&self) -> Dist {
        Dist::new(self.len() - 1)
    }

    pub fn elements(&self) -> impl Iterator<Item = Dist> + '_ {
        (0..self.len()).map(Dist::new)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Dist> + '_ {
        (1..self.len()).map(Dist::new)
    }

    /// Row-major addition table as indices.
    pub fn plus_table(&self) -> Vec<Vec<usize>> {
        (0..self.len())
            .map(|r| {
                (0..self.len())
                    .map(|s| self.plus(Dist::new(r), Dist::new(s)).index())
                    .collect()
            })
            .collect()
    }

    /// The supremum of the multiples `r, 2r, 3r, …`. Multiples are
    /// nondecreasing, so over a finite carrier they stabilize.
    pub fn multiple_sup(&self, r: Dist) -> Dist {
        let mut acc = r;
        loop {
            let next = self.plus(acc, r);
            if next == acc {
                return acc;
            }
            acc = next;
        }
    }

    /// Least `k >= 1` with `target <= k·r`, if any.
    pub fn multiplier_bound(&self, target: Dist, r: Dist) -> Option<usize> {
        if r.is_zero() {
            return if target.is_zero() { Some(1) } else { None };
        }
        let mut acc = r;
        let mut k = 1;
        loop {
            if target <= acc {
                return Some(k);
            }
            let next = self.plus(acc, r);
            if next == acc {
                return None;
            }
            acc = next;
            k += 1;
        }
    }

    /// `r` and `s` lie in the same archimedean class.
    pub fn same_class(&self, r: Dist, s: Dist) -> bool {
        !r.is_zero() && !s.is_zero() && s <= self.multiple_sup(r) && r <= self.multiple_sup(s)
    }

    /// `true` if the given nonzero elements are pairwise in one archimedean
    /// class (vacuously true for fewer than two elements).
    pub fn is_archimedean_on(&self, elems: &BTreeSet<Dist>) -> bool {
        let nonzero: Vec<Dist> = elems.iter().copied().filter(|d| !d.is_zero()).collect();
        nonzero
            .first()
            .is_none_or(|&first| nonzero.iter().all(|&d| self.same_class(first, d)))
    }

    pub fn is_archimedean(&self) -> bool {
        self.is_archimedean_on(&self.elements().collect())
    }
}

/// The archimedean classes of the nonzero elements, listed in increasing
/// order. Classes are order-convex, so each is a contiguous run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArchClassPartition {
    classes: Vec<Vec<Dist>>,
}

impl ArchClassPartition {
    pub fn classes(&self) -> &[Vec<Dist>] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Index of the class containing `d`, or `None` for zero and non-members.
    pub fn class_of(&self, d: Dist) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(&d))
    }

    /// The largest class.
    pub fn top(&self) -> Option<&[Dist]> {
        self.classes.last().map(Vec::as_slice)
    }
}

pub fn archimedean_classes(m: &DistanceMonoid) -> ArchClassPartition {
    classes_of_subset(m, &m.elements().collect())
}

/// Archimedean classes restricted to a subset of the carrier. For a
/// submonoid this agrees with the classes computed inside the submonoid,
/// since multiples of its elements never leave it.
pub fn classes_of_subset(m: &DistanceMonoid, subset: &BTreeSet<Dist>) -> ArchClassPartition {
    let mut classes: Vec<Vec<Dist>> = Vec::new();
    for &d in subset.iter().filter(|d| !d.is_zero()) {
        match classes.last_mut() {
            Some(last) if m.same_class(last[0], d) => last.push(d),
            _ => classes.push(vec![d]),
        }
    }
    ArchClassPartition { classes }
}

/// For every nonzero `r`, `s`: if every multiple of `r` is below `s` then
/// `r ⊕ s = s`.
pub fn is_semi_archimedean(m: &DistanceMonoid) -> bool {
    m.nonzero_elements().all(|r| {
        let sup = m.multiple_sup(r);
        m.nonzero_elements()
            .filter(|&s| sup < s)
            .all(|s| m.plus(r, s) == s)
    })
}

/// Semi-archimedean condition checked only for `r`, `s` in `subset`.
pub fn is_semi_archimedean_on(m: &DistanceMonoid, subset: &BTreeSet<Dist>) -> bool {
    subset.iter().filter(|r| !r.is_zero()).all(|&r| {
        let sup = m.multiple_sup(r);
        subset.iter().filter(|&&s| sup < s).all(|&s| m.plus(r, s) == s)
    })
}

/// A submonoid together with the inclusion into its parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubMonoid {
    pub monoid: DistanceMonoid,
    /// `inclusion[i]` is the parent element of submonoid element `i`.
    pub inclusion: Vec<Dist>,
}

/// Closure of `seed ∪ {0}` under `⊕`, as a set of parent elements.
pub fn generated_set(
    m: &DistanceMonoid,
    seed: &BTreeSet<Dist>,
    cap: usize,
) -> Result<BTreeSet<Dist>, MonoidError> {
    if let Some(bad) = seed.iter().find(|d| !m.contains(**d)) {
        return Err(MonoidError::UnknownElement(bad.index()));
    }
    let mut set: BTreeSet<Dist> = seed.clone();
    set.insert(Dist::ZERO);
    let mut frontier: Vec<Dist> = set.iter().copied().collect();
    while let Some(r) = frontier.pop() {
        let current: Vec<Dist> = set.iter().copied().collect();
        for s in current {
            let t = m.plus(r, s);
            if set.insert(t) {
                if set.len() > cap {
                    return Err(MonoidError::SubmonoidTooLarge { cap });
                }
                frontier.push(t);
            }
        }
    }
    Ok(set)
}

/// The smallest submonoid containing `seed`, with restricted tables.
pub fn generated_submonoid(
    m: &DistanceMonoid,
    seed: &BTreeSet<Dist>,
    cap: usize,
) -> Result<SubMonoid, MonoidError> {
    let set = generated_set(m, seed, cap)?;
    let inclusion: Vec<Dist> = set.into_iter().collect();
    let position = |d: Dist| inclusion.binary_search(&d).expect("closed under plus");
    let labels = inclusion.iter().map(|&d| m.label(d).to_string()).collect();
    let plus = inclusion
        .iter()
        .map(|&r| inclusion.iter().map(|&s| position(m.plus(r, s))).collect())
        .collect();
    let monoid = validate_monoid(labels, plus)?;
    Ok(SubMonoid { monoid, inclusion })
}

/// Validated fixture monoids.
pub mod fixtures {
    use super::*;

    fn table(labels: &[&str], plus: &[&[usize]]) -> Result<DistanceMonoid, MonoidError> {
        validate_monoid(
            labels.iter().map(|s| s.to_string()).collect(),
            plus.iter().map(|row| row.to_vec()).collect(),
        )
    }

    /// Two archimedean classes `{1,2}` below `{3,4}`, each truncated
    /// addition internally, with cross sums absorbed by the larger element.
    /// Semi-archimedean but not ultrametric (`1 ⊕ 1 = 2`).
    pub fn two_class_semi_archimedean() -> DistanceMonoid {
        table(
            &["0", "1", "2", "3", "4"],
            &[
                &[0, 1, 2, 3, 4],
                &[1, 2, 2, 3, 4],
                &[2, 2, 2, 3, 4],
                &[3, 3, 3, 4, 4],
                &[4, 4, 4, 4, 4],
            ],
        )
        .expect("fixture table is a distance monoid")
    }

    /// `1` is idempotent, so every multiple of it lies below `a`, yet
    /// `1 ⊕ a = b > a`: a distance monoid that is not semi-archimedean.
    pub fn not_semi_archimedean() -> DistanceMonoid {
        table(
            &["0", "1", "a", "b", "c"],
            &[
                &[0, 1, 2, 3, 4],
                &[1, 1, 3, 3, 4],
                &[2, 3, 4, 4, 4],
                &[3, 3, 4, 4, 4],
                &[4, 4, 4, 4, 4],
            ],
        )
        .expect("fixture table is a distance monoid")
    }

    /// `R_1 … R_6`.
    pub fn truncated_family() -> Vec<DistanceMonoid> {
        (1..=6).map(make_truncated).collect()
    }

    /// Max chains on `{0..n}` for `n = 1 … 6`.
    pub fn max_chain_family() -> Vec<DistanceMonoid> {
        (1..=6).map(make_max_chain).collect()
    }
}
