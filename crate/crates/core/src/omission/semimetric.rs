//! Partially defined distance assignments and maps into metric spaces.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::monoid::{Dist, DistanceMonoid};
use crate::space::MetricSpace;

use super::OmissionError;

/// Points with a symmetric, partially defined distance; the diagonal is
/// always defined and zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialSemimetric {
    monoid: Arc<DistanceMonoid>,
    labels: Vec<String>,
    delta: Vec<Option<Dist>>,
}

impl PartialSemimetric {
    /// An assignment with only the diagonal defined.
    pub fn empty(monoid: Arc<DistanceMonoid>, labels: Vec<String>) -> Result<PartialSemimetric, OmissionError> {
        let n = labels.len();
        if labels.iter().collect::<BTreeSet<_>>().len() != n {
            return Err(OmissionError::Invalid("duplicate point label".into()));
        }
        let mut delta = vec![None; n * n];
        for i in 0..n {
            delta[i * n + i] = Some(Dist::ZERO);
        }
        Ok(PartialSemimetric { monoid, labels, delta })
    }

    /// Build from `(x, y, value)` triples over labels.
    pub fn from_pairs(
        monoid: Arc<DistanceMonoid>,
        labels: Vec<String>,
        pairs: &[(usize, usize, Dist)],
    ) -> Result<PartialSemimetric, OmissionError> {
        let mut s = PartialSemimetric::empty(monoid, labels)?;
        for &(x, y, r) in pairs {
            s.set(x, y, r)?;
        }
        Ok(s)
    }

    /// All distances of `space` defined.
    pub fn from_space(space: &MetricSpace) -> PartialSemimetric {
        let n = space.len();
        PartialSemimetric {
            monoid: space.monoid_arc().clone(),
            labels: space.labels().to_vec(),
            delta: (0..n * n).map(|k| Some(space.d(k / n, k % n))).collect(),
        }
    }

    /// Define `δ(x, y) = δ(y, x) = r`. Redefining with another value or
    /// touching the diagonal is an error.
    pub fn set(&mut self, x: usize, y: usize, r: Dist) -> Result<(), OmissionError> {
        let n = self.len();
        if x >= n || y >= n {
            return Err(OmissionError::Invalid(format!("point index {} out of range", x.max(y))));
        }
        if !self.monoid.contains(r) {
            return Err(OmissionError::Invalid(format!("{r} is not a monoid element")));
        }
        if x == y {
            return if r.is_zero() {
                Ok(())
            } else {
                Err(OmissionError::Invalid("diagonal must be zero".into()))
            };
        }
        match self.delta[x * n + y] {
            Some(old) if old != r => Err(OmissionError::Invalid(format!(
                "pair {}-{} assigned both {old} and {r}",
                self.labels[x], self.labels[y]
            ))),
            _ => {
                self.delta[x * n + y] = Some(r);
                self.delta[y * n + x] = Some(r);
                Ok(())
            }
        }
    }

    pub fn monoid(&self) -> &Arc<DistanceMonoid> {
        &self.monoid
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Option<Dist> {
        self.delta[x * self.len() + y]
    }

    /// Defined off-diagonal pairs `(x, y, δ)` with `x < y`.
    pub fn defined_pairs(&self) -> Vec<(usize, usize, Dist)> {
        let n = self.len();
        (0..n)
            .flat_map(|x| ((x + 1)..n).filter_map(move |y| self.get(x, y).map(|r| (x, y, r))))
            .collect()
    }

    /// The nonzero values taken.
    pub fn positive_image(&self) -> BTreeSet<Dist> {
        self.delta.iter().flatten().copied().filter(|d| !d.is_zero()).collect()
    }
}

/// The pattern `P_σ` of a tuple `(r_0, r_1, …, r_n)`: a walk
/// `x_0 … x_n` with `δ(x_{i-1}, x_i) = r_i` closed by `δ(x_0, x_n) = r_0`.
/// Tuples with a single summand would assign two values to one pair and
/// have no pattern.
pub fn sigma_pattern(monoid: Arc<DistanceMonoid>, tuple: &[Dist]) -> Option<PartialSemimetric> {
    if tuple.len() < 3 {
        return None;
    }
    let n = tuple.len() - 1;
    let labels = (0..=n).map(|i| format!("x{i}")).collect();
    let mut pairs: Vec<(usize, usize, Dist)> = (1..=n).map(|i| (i - 1, i, tuple[i])).collect();
    pairs.push((0, n, tuple[0]));
    PartialSemimetric::from_pairs(monoid, labels, &pairs).ok()
}

fn search(pattern: &PartialSemimetric, host: &MetricSpace, injective: bool) -> Option<Vec<usize>> {
    let n = pattern.len();
    // Place points so each one after the first is as constrained as possible.
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    while order.len() < n {
        let next = (0..n)
            .filter(|&x| !placed[x])
            .max_by_key(|&x| {
                let links = order.iter().filter(|&&y| pattern.get(x, y).is_some()).count();
                (links, std::cmp::Reverse(x))
            })
            .expect("unplaced point");
        placed[next] = true;
        order.push(next);
    }

    fn go(
        pattern: &PartialSemimetric,
        host: &MetricSpace,
        injective: bool,
        order: &[usize],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let depth = order.iter().filter(|&&x| map[x] != usize::MAX).count();
        let Some(&x) = order.get(depth) else {
            return true;
        };
        for v in 0..host.len() {
            if injective && used[v] {
                continue;
            }
            let fits = order[..depth]
                .iter()
                .all(|&y| pattern.get(x, y).is_none_or(|r| host.d(v, map[y]) == r));
            if fits {
                map[x] = v;
                used[v] = true;
                if go(pattern, host, injective, order, map, used) {
                    return true;
                }
                map[x] = usize::MAX;
                used[v] = order[..depth].iter().any(|&y| map[y] == v);
            }
        }
        false
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; host.len()];
    go(pattern, host, injective, &order, &mut map, &mut used).then_some(map)
}

/// An injection `f` with `d(f x, f y) = δ(x, y)` on every defined pair.
pub fn weak_embedding_exists(pattern: &PartialSemimetric, host: &MetricSpace) -> Option<Vec<usize>> {
    if pattern.len() > host.len() {
        return None;
    }
    search(pattern, host, true)
}

/// As [`weak_embedding_exists`] without injectivity.
pub fn weak_homomorphism_exists(pattern: &PartialSemimetric, host: &MetricSpace) -> Option<Vec<usize>> {
    if host.is_empty() && !pattern.is_empty() {
        return None;
    }
    search(pattern, host, false)
}
