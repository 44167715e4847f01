//! Path extensions: partial semimetrics in which every undefined base pair
//! is realised by a walk whose labels sum to its distance.
//!
//! Extensions are emitted edge-minimal (the defined pairs are exactly the
//! defined base pairs and the walk edges) and up to isomorphism over the
//! base. Adding defined pairs only makes a pattern harder to map
//! homomorphically, so minimal extensions are the ones that matter for
//! homomorphic freeness.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::canon::canonical_order;
use crate::monoid::{generated_set, Dist, DEFAULT_SUBMONOID_CAP};
use crate::space::MetricSpace;

use super::{OmissionError, PartialSemimetric};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathExtension {
    pub base: MetricSpace,
    /// Base points first, in base order, then fresh points.
    pub carrier: PartialSemimetric,
    /// A distance path for each undefined base pair `(x, y)`, `x < y`.
    pub paths: Vec<((usize, usize), Vec<usize>)>,
    /// The stored paths repeat no point.
    pub all_paths_simple: bool,
}

impl PathExtension {
    pub fn fresh_points(&self) -> usize {
        self.carrier.len() - self.base.len()
    }

    /// Undefined base pairs.
    pub fn undefined_pairs(&self) -> Vec<(usize, usize)> {
        self.paths.iter().map(|p| p.0).collect()
    }
}

/// Least `k` with `r <= k · min S`, where `r` is the least element strictly
/// above every base distance. Every distance path has fewer than `k` steps.
pub fn path_length_bound(base: &MetricSpace, s_set: &BTreeSet<Dist>) -> Result<usize, OmissionError> {
    let m = base.monoid();
    let s = *s_set
        .first()
        .ok_or_else(|| OmissionError::Invalid("S is empty".into()))?;
    if s.is_zero() || s_set.iter().any(|d| !m.contains(*d)) {
        return Err(OmissionError::Invalid("S must hold nonzero monoid elements".into()));
    }
    if !base.spectrum().is_subset(s_set) {
        return Err(OmissionError::Invalid("S must contain the base spectrum".into()));
    }
    let seed: BTreeSet<Dist> = s_set.union(&base.spectrum()).copied().collect();
    let g = generated_set(m, &seed, DEFAULT_SUBMONOID_CAP)?;
    if !m.is_archimedean_on(&g) {
        return Err(OmissionError::NonArchimedean);
    }
    let r = base
        .dominating_element()
        .ok_or_else(|| OmissionError::NotDominated(format!("{:?}", base.labels())))?;
    m.multiplier_bound(r, s).ok_or(OmissionError::NonArchimedean)
}

struct Builder<'a> {
    base: &'a MetricSpace,
    s: Vec<Dist>,
    k: usize,
    cap: usize,
    undefined: Vec<(usize, usize)>,
    is_undefined: BTreeSet<(usize, usize)>,
    total: usize,
    labels: HashMap<(usize, usize), Dist>,
    paths: Vec<Vec<usize>>,
    found: BTreeMap<(usize, usize, Vec<u32>), PathExtension>,
}

impl Builder<'_> {
    fn label(&self, u: usize, v: usize) -> Option<Dist> {
        let n = self.base.len();
        let key = (u.min(v), u.max(v));
        if u < n && v < n {
            return (!self.is_undefined.contains(&key)).then(|| self.base.d(u, v));
        }
        self.labels.get(&key).copied()
    }

    fn pairs_done(&mut self, t: usize) {
        if t == self.undefined.len() {
            self.record();
            return;
        }
        let (x, _) = self.undefined[t];
        let mut walk = vec![x];
        self.walk(t, &mut walk, Dist::ZERO);
    }

    fn walk(&mut self, t: usize, walk: &mut Vec<usize>, sum: Dist) {
        let (x, y) = self.undefined[t];
        let target = self.base.d(x, y);
        let steps = walk.len() - 1;
        if steps + 1 >= self.k {
            return;
        }
        let n = self.base.len();
        let c = *walk.last().expect("walk starts at x");
        let fresh_slot = self.total;
        for v in 0..=fresh_slot {
            if v == c || (v == fresh_slot && self.total >= self.cap) {
                continue;
            }
            if v < n && c < n && self.is_undefined.contains(&(c.min(v), c.max(v))) {
                continue;
            }
            let (choices, is_new) = match self.label(c, v) {
                Some(r) => (vec![r], false),
                None => (self.s.clone(), true),
            };
            for r in choices {
                let next = self.base.monoid().plus(sum, r);
                if next > target {
                    continue;
                }
                if v == fresh_slot {
                    self.total += 1;
                }
                if is_new {
                    self.labels.insert((c.min(v), c.max(v)), r);
                }
                walk.push(v);
                if v == y && steps + 1 >= 2 && next == target {
                    self.paths.push(walk.clone());
                    self.pairs_done(t + 1);
                    self.paths.pop();
                }
                self.walk(t, walk, next);
                walk.pop();
                if is_new {
                    self.labels.remove(&(c.min(v), c.max(v)));
                }
                if v == fresh_slot {
                    self.total -= 1;
                }
            }
        }
    }

    fn record(&mut self) {
        let n = self.base.len();
        let total = self.total;
        let colour = |i: usize, j: usize| -> u32 {
            if i == j {
                return 0;
            }
            self.label(i, j).map_or(0, |r| r.index() as u32 + 1)
        };
        let canon = canonical_order(total, n, colour);
        let simple = self
            .paths
            .iter()
            .all(|p| p.iter().collect::<BTreeSet<_>>().len() == p.len());
        let key = (total, self.undefined.len(), canon.key);
        if let Some(old) = self.found.get(&key) {
            if old.all_paths_simple || !simple {
                return;
            }
        }
        // position of each original point in canonical order
        let mut pos = vec![0; total];
        for (p, &o) in canon.order.iter().enumerate() {
            pos[o] = p;
        }
        let mut taken: BTreeSet<String> = self.base.labels().iter().cloned().collect();
        let mut names = self.base.labels().to_vec();
        for j in 1..=(total - n) {
            let mut l = format!("_{j}");
            while taken.contains(&l) {
                l.push('\'');
            }
            taken.insert(l.clone());
            names.push(l);
        }
        let mut carrier =
            PartialSemimetric::empty(self.base.monoid_arc().clone(), names).expect("labels are distinct");
        for i in 0..total {
            for j in (i + 1)..total {
                if let Some(r) = self.label(i, j) {
                    carrier.set(pos[i], pos[j], r).expect("consistent labels");
                }
            }
        }
        let paths = self
            .undefined
            .iter()
            .zip(&self.paths)
            .map(|(&pair, p)| (pair, p.iter().map(|&v| pos[v]).collect()))
            .collect();
        self.found.insert(
            key,
            PathExtension {
                base: self.base.clone(),
                carrier,
                paths,
                all_paths_simple: simple,
            },
        );
    }
}

/// Every path extension of `base` over `s_set`, up to isomorphism fixing
/// the base, optionally skipping carriers larger than `size_cap`. Sorted
/// by carrier size, then number of replaced pairs, then canonical form;
/// the base itself comes first.
pub fn enumerate_path_extensions(
    base: &MetricSpace,
    s_set: &BTreeSet<Dist>,
    size_cap: Option<usize>,
) -> Result<Vec<PathExtension>, OmissionError> {
    let k = path_length_bound(base, s_set)?;
    let n = base.len();
    let size_bound = n + k * n * n;
    let cap = size_cap.unwrap_or(size_bound).min(size_bound);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|x| ((x + 1)..n).map(move |y| (x, y))).collect();
    let mut builder = Builder {
        base,
        s: s_set.iter().copied().collect(),
        k,
        cap,
        undefined: Vec::new(),
        is_undefined: BTreeSet::new(),
        total: n,
        labels: HashMap::new(),
        paths: Vec::new(),
        found: BTreeMap::new(),
    };
    for mask in 0u64..(1u64 << pairs.len()) {
        let undefined: Vec<(usize, usize)> = (0..pairs.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| pairs[i])
            .collect();
        builder.is_undefined = undefined.iter().copied().collect();
        builder.undefined = undefined;
        builder.pairs_done(0);
    }
    let out: Vec<PathExtension> = builder.found.into_values().collect();
    debug_assert!(out.iter().all(|e| e.carrier.len() < size_bound.max(1)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::make_truncated;
    use std::sync::Arc;

    fn set(items: &[usize]) -> BTreeSet<Dist> {
        items.iter().map(|&i| Dist::new(i)).collect()
    }

    #[test]
    fn equilateral_triangle_has_only_itself() {
        let r2 = Arc::new(make_truncated(2));
        let eq = MetricSpace::equilateral(r2, 3, Dist::new(1)).unwrap();
        let exts = enumerate_path_extensions(&eq, &set(&[1, 2]), None).unwrap();
        assert_eq!(exts.len(), 1);
        assert_eq!(exts[0].carrier, PartialSemimetric::from_space(&eq));
    }

    #[test]
    fn single_point_has_only_itself() {
        let r2 = Arc::new(make_truncated(2));
        let p = MetricSpace::equilateral(r2, 1, Dist::new(1)).unwrap();
        assert_eq!(enumerate_path_extensions(&p, &set(&[1]), None).unwrap().len(), 1);
    }

    #[test]
    fn two_point_edge_over_r3() {
        // d(x,y)=2, k=3: either defined, or a 2-step path through a fresh
        // point labelled 1,1
        let r3 = Arc::new(make_truncated(3));
        let e = MetricSpace::equilateral(r3, 2, Dist::new(2)).unwrap();
        let exts = enumerate_path_extensions(&e, &set(&[1, 2, 3]), None).unwrap();
        assert_eq!(exts.len(), 2);
        let ext = &exts[1];
        assert_eq!(ext.fresh_points(), 1);
        assert_eq!(ext.carrier.get(0, 1), None);
        assert_eq!(ext.carrier.get(0, 2), Some(Dist::new(1)));
        assert_eq!(ext.paths, vec![((0, 1), vec![0, 2, 1])]);
        assert!(ext.all_paths_simple);
    }

    #[test]
    fn paths_are_distance_paths() {
        let r3 = Arc::new(make_truncated(3));
        let t = MetricSpace::triangle(r3, 1, 2, 2).unwrap();
        let s = set(&[1, 2, 3]);
        let k = path_length_bound(&t, &s).unwrap();
        for ext in enumerate_path_extensions(&t, &s, None).unwrap() {
            assert!(ext.carrier.len() < t.len() + k * t.len() * t.len());
            for ((x, y), p) in &ext.paths {
                assert_eq!((p[0], *p.last().unwrap()), (*x, *y));
                assert!(p.len() >= 3 && p.len() - 1 < k);
                let sum = t.monoid().sum(p.windows(2).map(|w| ext.carrier.get(w[0], w[1]).unwrap()));
                assert_eq!(sum, t.d(*x, *y));
                assert_eq!(ext.carrier.get(*x, *y), None);
            }
        }
    }

    #[test]
    fn errors() {
        let r2 = Arc::new(make_truncated(2));
        let t = MetricSpace::triangle(r2, 1, 1, 2).unwrap();
        assert!(matches!(
            enumerate_path_extensions(&t, &set(&[1, 2]), None),
            Err(OmissionError::NotDominated(_))
        ));
        assert!(matches!(
            enumerate_path_extensions(&t, &set(&[1]), None),
            Err(OmissionError::Invalid(_))
        ));
    }
}
