//! Finite metric spaces over a distance monoid.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::canon::{canonical_order, Canonical};
use crate::monoid::{make_truncated, Dist, DistanceMonoid};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("identity violated: d({0}, {1}) is zero iff the points coincide")]
    Identity(String, String),
    #[error("symmetry violated: d({0}, {1}) != d({1}, {0})")]
    Symmetry(String, String),
    #[error("triangle inequality violated: d({0}, {2}) > d({0}, {1}) + d({1}, {2})")]
    Triangle(String, String, String),
    #[error("malformed space: {0}")]
    Malformed(String),
    #[error("spaces are over different monoids")]
    MonoidMismatch,
    #[error("glue is not an isometry between the identified subspaces")]
    GlueNotIsometry,
    #[error("glue is empty")]
    EmptyGlue,
}

impl SpaceError {
    /// Labels of the witnessing points, if any.
    pub fn witness(&self) -> Vec<String> {
        match self {
            SpaceError::Identity(a, b) | SpaceError::Symmetry(a, b) => vec![a.clone(), b.clone()],
            SpaceError::Triangle(a, b, c) => vec![a.clone(), b.clone(), c.clone()],
            _ => vec![],
        }
    }

    /// Short name of the violated condition.
    pub fn condition(&self) -> &'static str {
        match self {
            SpaceError::Identity(..) => "identity",
            SpaceError::Symmetry(..) => "symmetry",
            SpaceError::Triangle(..) => "triangle",
            SpaceError::Malformed(_) => "malformed",
            SpaceError::MonoidMismatch => "monoid_mismatch",
            SpaceError::GlueNotIsometry => "glue_not_isometry",
            SpaceError::EmptyGlue => "empty_glue",
        }
    }
}

/// A finite metric space with distances in a [`DistanceMonoid`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricSpace {
    monoid: Arc<DistanceMonoid>,
    labels: Vec<String>,
    dist: Vec<Dist>,
}

/// Check the metric axioms and build a space. The first violation is
/// reported: identity over ordered pairs, then symmetry, then the triangle
/// inequality over ordered triples `(a, b, c)` as `d(a,c) <= d(a,b) ⊕ d(b,c)`.
pub fn validate_space(
    monoid: Arc<DistanceMonoid>,
    points: Vec<String>,
    dist: Vec<Vec<Dist>>,
) -> Result<MetricSpace, SpaceError> {
    let n = points.len();
    if dist.len() != n || dist.iter().any(|row| row.len() != n) {
        return Err(SpaceError::Malformed(format!("distance matrix must be {n}x{n}")));
    }
    if let Some(d) = dist.iter().flatten().find(|d| !monoid.contains(**d)) {
        return Err(SpaceError::Malformed(format!("distance {d} is not a monoid element")));
    }
    let mut seen = BTreeSet::new();
    for p in &points {
        if !seen.insert(p) {
            return Err(SpaceError::Malformed(format!("duplicate point label {p:?}")));
        }
    }
    let space = MetricSpace {
        monoid,
        labels: points,
        dist: dist.into_iter().flatten().collect(),
    };
    space.check()?;
    Ok(space)
}

impl MetricSpace {
    /// Build from a matrix of element indices.
    pub fn from_matrix(
        monoid: Arc<DistanceMonoid>,
        points: Vec<String>,
        dist: &[Vec<usize>],
    ) -> Result<MetricSpace, SpaceError> {
        let dist = dist
            .iter()
            .map(|row| row.iter().map(|&i| Dist::new(i)).collect())
            .collect();
        validate_space(monoid, points, dist)
    }

    /// Build with default labels `"0"`, `"1"`, … from a distance function.
    pub fn from_fn(
        monoid: Arc<DistanceMonoid>,
        n: usize,
        d: impl Fn(usize, usize) -> Dist,
    ) -> Result<MetricSpace, SpaceError> {
        let labels = (0..n).map(|i| i.to_string()).collect();
        Self::from_fn_labeled(monoid, labels, d)
    }

    pub fn from_fn_labeled(
        monoid: Arc<DistanceMonoid>,
        labels: Vec<String>,
        d: impl Fn(usize, usize) -> Dist,
    ) -> Result<MetricSpace, SpaceError> {
        let n = labels.len();
        let dist = (0..n).map(|i| (0..n).map(|j| d(i, j)).collect()).collect();
        validate_space(monoid, labels, dist)
    }

    /// `n` points at pairwise distance `d`.
    pub fn equilateral(monoid: Arc<DistanceMonoid>, n: usize, d: Dist) -> Result<MetricSpace, SpaceError> {
        Self::from_fn(monoid, n, |i, j| if i == j { Dist::ZERO } else { d })
    }

    /// Three points `0, 1, 2` with `d(0,1) = x`, `d(1,2) = y`, `d(0,2) = z`.
    pub fn triangle(monoid: Arc<DistanceMonoid>, x: usize, y: usize, z: usize) -> Result<MetricSpace, SpaceError> {
        Self::from_matrix(
            monoid,
            vec!["0".into(), "1".into(), "2".into()],
            &[vec![0, x, z], vec![x, 0, y], vec![z, y, 0]],
        )
    }

    fn check(&self) -> Result<(), SpaceError> {
        let n = self.len();
        let l = |i: usize| self.labels[i].clone();
        for a in 0..n {
            for b in 0..n {
                if (self.d(a, b).is_zero()) != (a == b) {
                    return Err(SpaceError::Identity(l(a), l(b)));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if self.d(a, b) != self.d(b, a) {
                    return Err(SpaceError::Symmetry(l(a), l(b)));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.d(a, c) > self.monoid.plus(self.d(a, b), self.d(b, c)) {
                        return Err(SpaceError::Triangle(l(a), l(b), l(c)));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn monoid(&self) -> &DistanceMonoid {
        &self.monoid
    }

    pub fn monoid_arc(&self) -> &Arc<DistanceMonoid> {
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

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn d(&self, a: usize, b: usize) -> Dist {
        self.dist[a * self.len() + b]
    }

    pub fn matrix(&self) -> Vec<Vec<usize>> {
        (0..self.len())
            .map(|i| (0..self.len()).map(|j| self.d(i, j).index()).collect())
            .collect()
    }

    /// Same points and distances, new labels.
    pub fn relabeled(&self, labels: Vec<String>) -> Result<MetricSpace, SpaceError> {
        Self::from_fn_labeled(self.monoid.clone(), labels, |i, j| self.d(i, j))
    }

    /// The subspace on `points`, in the given order.
    pub fn subspace(&self, points: &[usize]) -> MetricSpace {
        MetricSpace {
            monoid: self.monoid.clone(),
            labels: points.iter().map(|&p| self.labels[p].clone()).collect(),
            dist: points
                .iter()
                .flat_map(|&a| points.iter().map(move |&b| self.d(a, b)))
                .collect(),
        }
    }

    /// The image of `self` under a permutation, `perm[new] = old`.
    pub fn permuted(&self, order: &[usize]) -> MetricSpace {
        self.subspace(order)
    }

    /// Nonzero distances occurring between distinct points.
    pub fn spectrum(&self) -> BTreeSet<Dist> {
        self.dist.iter().copied().filter(|d| !d.is_zero()).collect()
    }

    pub fn max_distance(&self) -> Dist {
        self.dist.iter().copied().max().unwrap_or(Dist::ZERO)
    }

    /// Some monoid element strictly exceeds every distance.
    pub fn has_dominated_spectrum(&self) -> bool {
        self.max_distance() < self.monoid.max_element()
    }

    /// Least element strictly above every distance, if one exists.
    pub fn dominating_element(&self) -> Option<Dist> {
        let top = self.max_distance();
        self.monoid.elements().find(|&r| r > top)
    }

    /// Canonical ordering minimising the column-wise upper triangle.
    pub fn canonical(&self) -> Canonical {
        canonical_order(self.len(), 0, |i, j| self.d(i, j).index() as u32)
    }

    /// Canonical ordering with the first `fixed` points pinned.
    pub fn canonical_relative(&self, fixed: usize) -> Canonical {
        canonical_order(self.len(), fixed, |i, j| self.d(i, j).index() as u32)
    }

    /// The space with one point appended at the given distances.
    pub fn with_point(&self, label: String, to_existing: &[Dist]) -> Result<MetricSpace, SpaceError> {
        let n = self.len();
        assert_eq!(to_existing.len(), n);
        let mut labels = self.labels.clone();
        labels.push(label);
        Self::from_fn_labeled(self.monoid.clone(), labels, |i, j| match (i == n, j == n) {
            (true, true) => Dist::ZERO,
            (true, false) => to_existing[j],
            (false, true) => to_existing[i],
            (false, false) => self.d(i, j),
        })
    }

    /// Graphviz rendering; with `omit_max`, pairs at the monoid maximum are
    /// left out.
    pub fn to_dot(&self, omit_max: bool) -> String {
        let mut out = String::from("graph space {\n");
        for l in &self.labels {
            let _ = writeln!(out, "  {l:?};");
        }
        let top = self.monoid.max_element();
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                let d = self.d(i, j);
                if omit_max && d == top {
                    continue;
                }
                let _ = writeln!(
                    out,
                    "  {:?} -- {:?} [label={:?}];",
                    self.labels[i],
                    self.labels[j],
                    self.monoid.label(d)
                );
            }
        }
        out.push_str("}\n");
        out
    }
}

fn fresh_label(taken: &BTreeSet<String>, wanted: &str) -> String {
    let mut label = wanted.to_string();
    while taken.contains(&label) {
        label.push('\'');
    }
    label
}

/// Glue `a` and `b` along `glue` (pairs `(point of a, point of b)`).
///
/// The result lists the points of `a` first, then the unglued points of `b`.
/// Cross distances are `min over glued z of d_a(x, z) ⊕ d_b(z, y)`.
pub fn free_amalgamation(
    a: &MetricSpace,
    b: &MetricSpace,
    glue: &[(usize, usize)],
) -> Result<MetricSpace, SpaceError> {
    if a.monoid != b.monoid && *a.monoid != *b.monoid {
        return Err(SpaceError::MonoidMismatch);
    }
    if glue.is_empty() {
        return Err(SpaceError::EmptyGlue);
    }
    if glue.iter().any(|&(x, y)| x >= a.len() || y >= b.len()) {
        return Err(SpaceError::Malformed("glue refers to a missing point".into()));
    }
    let injective = |proj: fn(&(usize, usize)) -> usize| {
        glue.iter().map(proj).collect::<BTreeSet<_>>().len() == glue.len()
    };
    if !injective(|p| p.0) || !injective(|p| p.1) {
        return Err(SpaceError::GlueNotIsometry);
    }
    for &(x1, y1) in glue {
        for &(x2, y2) in glue {
            if a.d(x1, x2) != b.d(y1, y2) {
                return Err(SpaceError::GlueNotIsometry);
            }
        }
    }

    let m = &a.monoid;
    let glued_b: HashMap<usize, usize> = glue.iter().map(|&(x, y)| (y, x)).collect();
    let rest: Vec<usize> = (0..b.len()).filter(|y| !glued_b.contains_key(y)).collect();
    // where[i]: Left(point of a) or Right(point of b)
    let na = a.len();
    let total = na + rest.len();
    let mut taken: BTreeSet<String> = a.labels.iter().cloned().collect();
    let mut labels = a.labels.clone();
    for &y in &rest {
        let l = fresh_label(&taken, &b.labels[y]);
        taken.insert(l.clone());
        labels.push(l);
    }
    let mut dist = vec![Dist::ZERO; total * total];
    let b_index = |i: usize| rest[i - na];
    for i in 0..total {
        for j in 0..total {
            let d = match (i < na, j < na) {
                (true, true) => a.d(i, j),
                (false, false) => b.d(b_index(i), b_index(j)),
                (true, false) | (false, true) => {
                    let (x, y) = if i < na { (i, b_index(j)) } else { (j, b_index(i)) };
                    glue.iter()
                        .map(|&(za, zb)| m.plus(a.d(x, za), b.d(zb, y)))
                        .min()
                        .expect("glue is nonempty")
                }
            };
            dist[i * total + j] = d;
        }
    }
    let out = MetricSpace {
        monoid: a.monoid.clone(),
        labels,
        dist,
    };
    out.check()?;
    Ok(out)
}

/// A plain undirected graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    pub vertices: Vec<String>,
    pub edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> SimpleGraph {
        SimpleGraph {
            vertices: (0..n).map(|i| i.to_string()).collect(),
            edges: edges.to_vec(),
        }
    }

    pub fn cycle(n: usize) -> SimpleGraph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        SimpleGraph::new(n, &edges)
    }

    pub fn complete(n: usize) -> SimpleGraph {
        let edges: Vec<_> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
        SimpleGraph::new(n, &edges)
    }

    pub fn path(n: usize) -> SimpleGraph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        SimpleGraph::new(n, &edges)
    }
}

/// Shortest-path distance capped at `n`. Pairs in different components are
/// placed at distance `n`, the maximum of `R_n`.
pub fn truncated_path_metric(graph: &SimpleGraph, n: usize) -> Result<MetricSpace, SpaceError> {
    let v = graph.vertices.len();
    let mut adj = vec![Vec::new(); v];
    for &(x, y) in &graph.edges {
        if x >= v || y >= v {
            return Err(SpaceError::Malformed(format!("edge ({x}, {y}) out of range")));
        }
        if x != y {
            adj[x].push(y);
            adj[y].push(x);
        }
    }
    let mut dist = vec![vec![Dist::new(n); v]; v];
    for (s, row) in dist.iter_mut().enumerate() {
        let mut hops = vec![usize::MAX; v];
        hops[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if hops[y] == usize::MAX {
                    hops[y] = hops[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        for (t, h) in hops.into_iter().enumerate() {
            if h != usize::MAX {
                row[t] = Dist::new(h.min(n));
            }
        }
    }
    validate_space(Arc::new(make_truncated(n)), graph.vertices.clone(), dist)
}

/// A distance-preserving injection between subspaces of one space, stored
/// as `(x, φ(x))` pairs sorted by `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialIsometry {
    pairs: Vec<(usize, usize)>,
}

impl PartialIsometry {
    /// Build from pairs, checking injectivity and distance preservation.
    pub fn new(space: &MetricSpace, mut pairs: Vec<(usize, usize)>) -> Option<PartialIsometry> {
        pairs.sort_unstable();
        let dom: BTreeSet<_> = pairs.iter().map(|p| p.0).collect();
        let img: BTreeSet<_> = pairs.iter().map(|p| p.1).collect();
        if dom.len() != pairs.len() || img.len() != pairs.len() {
            return None;
        }
        if pairs.iter().any(|&(x, y)| x >= space.len() || y >= space.len()) {
            return None;
        }
        for &(x1, y1) in &pairs {
            for &(x2, y2) in &pairs {
                if space.d(x1, x2) != space.d(y1, y2) {
                    return None;
                }
            }
        }
        Some(PartialIsometry { pairs })
    }

    pub fn empty() -> PartialIsometry {
        PartialIsometry { pairs: Vec::new() }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn apply(&self, x: usize) -> Option<usize> {
        self.pairs
            .binary_search_by_key(&x, |p| p.0)
            .ok()
            .map(|i| self.pairs[i].1)
    }

    /// Transport along an injection `f` (for example an embedding).
    pub fn mapped(&self, f: &[usize]) -> Vec<(usize, usize)> {
        self.pairs.iter().map(|&(x, y)| (f[x], f[y])).collect()
    }

    /// `total` (a permutation) agrees with `self` on its domain.
    pub fn is_extended_by(&self, total: &[usize]) -> bool {
        self.pairs.iter().all(|&(x, y)| total.get(x) == Some(&y))
    }
}

/// Every partial isometry of `space`, including the empty map, each exactly
/// once. Domains come in order of size, then lexicographically; images for
/// one domain lexicographically.
pub fn enumerate_partial_isometries(space: &MetricSpace) -> impl Iterator<Item = PartialIsometry> + '_ {
    let n = space.len();
    (0..=n).flat_map(move |k| {
        combinations(n, k)
            .into_iter()
            .flat_map(move |dom| maps_from(space, &dom))
    })
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

fn maps_from(space: &MetricSpace, dom: &[usize]) -> Vec<PartialIsometry> {
    fn go(
        space: &MetricSpace,
        dom: &[usize],
        img: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<PartialIsometry>,
    ) {
        let i = img.len();
        if i == dom.len() {
            out.push(PartialIsometry {
                pairs: dom.iter().copied().zip(img.iter().copied()).collect(),
            });
            return;
        }
        for y in 0..space.len() {
            if used[y] {
                continue;
            }
            if (0..i).all(|j| space.d(dom[j], dom[i]) == space.d(img[j], y)) {
                used[y] = true;
                img.push(y);
                go(space, dom, img, used, out);
                img.pop();
                used[y] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(space, dom, &mut Vec::new(), &mut vec![false; space.len()], &mut out);
    out
}

/// Colour refinement run on two spaces in lockstep, so colours are
/// comparable across them. Points in `fixed` pairs are individualised.
/// Returns `None` when the colour histograms diverge.
fn joint_refinement(
    a: &MetricSpace,
    b: &MetricSpace,
    fixed: &[(usize, usize)],
) -> Option<(Vec<u32>, Vec<u32>)> {
    let n = a.len();
    let mut ca = vec![0u32; n];
    let mut cb = vec![0u32; n];
    for (k, &(x, y)) in fixed.iter().enumerate() {
        ca[x] = k as u32 + 1;
        cb[y] = k as u32 + 1;
    }
    let mut classes = 0;
    for _ in 0..=n {
        let mut table: HashMap<(u32, Vec<(Dist, u32)>), u32> = HashMap::new();
        let mut next = |s: &MetricSpace, c: &[u32]| -> Vec<u32> {
            (0..n)
                .map(|p| {
                    let mut row: Vec<(Dist, u32)> = (0..n).map(|q| (s.d(p, q), c[q])).collect();
                    row.sort_unstable();
                    let fresh = table.len() as u32;
                    *table.entry((c[p], row)).or_insert(fresh)
                })
                .collect()
        };
        let na = next(a, &ca);
        let nb = next(b, &cb);
        let mut ha = na.clone();
        let mut hb = nb.clone();
        ha.sort_unstable();
        hb.sort_unstable();
        if ha != hb {
            return None;
        }
        ca = na;
        cb = nb;
        let count = table.len();
        if count == classes {
            break;
        }
        classes = count;
    }
    Some((ca, cb))
}

/// Extend `fixed` to a total isometry from `a` onto `b`, if possible.
/// Returns `map` with `map[x]` the image of point `x` of `a`.
pub fn extend_isometry(a: &MetricSpace, b: &MetricSpace, fixed: &[(usize, usize)]) -> Option<Vec<usize>> {
    if a.len() != b.len() || *a.monoid != *b.monoid {
        return None;
    }
    for &(x1, y1) in fixed {
        for &(x2, y2) in fixed {
            if (x1 == x2) != (y1 == y2) || a.d(x1, x2) != b.d(y1, y2) {
                return None;
            }
        }
    }
    let (ca, cb) = joint_refinement(a, b, fixed)?;
    let n = a.len();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for &(x, y) in fixed {
        map[x] = y;
        used[y] = true;
    }
    // Unassigned points, rarest colour first.
    let mut freq: HashMap<u32, usize> = HashMap::new();
    for &c in &ca {
        *freq.entry(c).or_default() += 1;
    }
    let mut todo: Vec<usize> = (0..n).filter(|&x| map[x] == usize::MAX).collect();
    todo.sort_by_key(|&x| (freq[&ca[x]], x));
    let assigned: Vec<usize> = fixed.iter().map(|p| p.0).collect();

    fn go(
        a: &MetricSpace,
        b: &MetricSpace,
        ca: &[u32],
        cb: &[u32],
        todo: &[usize],
        assigned: &mut Vec<usize>,
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        let Some((&x, rest)) = todo.split_first() else {
            return true;
        };
        for y in 0..b.len() {
            if used[y] || cb[y] != ca[x] {
                continue;
            }
            if assigned.iter().all(|&p| a.d(p, x) == b.d(map[p], y)) {
                map[x] = y;
                used[y] = true;
                assigned.push(x);
                if go(a, b, ca, cb, rest, assigned, map, used) {
                    return true;
                }
                assigned.pop();
                used[y] = false;
                map[x] = usize::MAX;
            }
        }
        false
    }
    let mut assigned = assigned;
    go(a, b, &ca, &cb, &todo, &mut assigned, &mut map, &mut used).then_some(map)
}

/// Extend a partial map of `space` to an automorphism.
pub fn extend_to_automorphism(space: &MetricSpace, fixed: &[(usize, usize)]) -> Option<Vec<usize>> {
    extend_isometry(space, space, fixed)
}

/// A witness isometry `a → b`, if the spaces are isometric.
pub fn is_isometric(a: &MetricSpace, b: &MetricSpace) -> Option<Vec<usize>> {
    extend_isometry(a, b, &[])
}

/// `map` is a distance-preserving bijection from `a` onto `b`.
pub fn is_total_isometry(a: &MetricSpace, b: &MetricSpace, map: &[usize]) -> bool {
    if map.len() != a.len() || a.len() != b.len() {
        return false;
    }
    let mut seen = vec![false; b.len()];
    for &y in map {
        if y >= b.len() || std::mem::replace(&mut seen[y], true) {
            return false;
        }
    }
    (0..a.len()).all(|i| (0..a.len()).all(|j| a.d(i, j) == b.d(map[i], map[j])))
}

/// `map` is a distance-preserving injection from `a` into `b`.
pub fn is_isometric_embedding(a: &MetricSpace, b: &MetricSpace, map: &[usize]) -> bool {
    if map.len() != a.len() {
        return false;
    }
    let mut seen = BTreeSet::new();
    map.iter().all(|&y| y < b.len() && seen.insert(y))
        && (0..a.len()).all(|i| (0..a.len()).all(|j| a.d(i, j) == b.d(map[i], map[j])))
}

/// Distance rows from a new point to every point of `b`, drawn from
/// `allowed`, satisfying all triangle inequalities.
pub fn admissible_rows(b: &MetricSpace, allowed: &[Dist]) -> Vec<Vec<Dist>> {
    fn go(b: &MetricSpace, allowed: &[Dist], row: &mut Vec<Dist>, out: &mut Vec<Vec<Dist>>) {
        let j = row.len();
        if j == b.len() {
            out.push(row.clone());
            return;
        }
        let m = b.monoid();
        for &r in allowed {
            let fits = (0..j).all(|i| {
                let (s, t) = (row[i], b.d(i, j));
                r <= m.plus(s, t) && s <= m.plus(r, t) && t <= m.plus(r, s)
            });
            if fits {
                row.push(r);
                go(b, allowed, row, out);
                row.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(b, allowed, &mut Vec::with_capacity(b.len()), &mut out);
    out
}
