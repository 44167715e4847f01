//! Edge-labelled graphs and their shortest-path completion.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};
use std::sync::Arc;

use thiserror::Error;

use crate::monoid::{Dist, DistanceMonoid};
use crate::space::{validate_space, MetricSpace, SpaceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at {0}")]
    SelfLoop(String),
    #[error("edge {0}-{1} carries the zero distance")]
    ZeroLabel(String, String),
    #[error("edge {0}-{1} has two different labels")]
    ConflictingLabels(String, String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(String),
    #[error("label {0} is not a monoid element")]
    UnknownLabel(usize),
    #[error("base vertices span more than one component")]
    DisconnectedBase,
    #[error("base is empty")]
    EmptyBase,
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// A graph whose edges carry nonzero monoid elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    monoid: Arc<DistanceMonoid>,
    vertices: Vec<String>,
    edges: BTreeMap<(usize, usize), Dist>,
}

impl LabeledGraph {
    pub fn new(monoid: Arc<DistanceMonoid>, vertices: Vec<String>) -> Result<LabeledGraph, GraphError> {
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(GraphError::DuplicateVertex(v.clone()));
            }
        }
        Ok(LabeledGraph {
            monoid,
            vertices,
            edges: BTreeMap::new(),
        })
    }

    /// Build from `(u, v, label)` triples naming vertices by label.
    pub fn from_edges(
        monoid: Arc<DistanceMonoid>,
        vertices: Vec<String>,
        edges: &[(&str, &str, usize)],
    ) -> Result<LabeledGraph, GraphError> {
        let mut g = LabeledGraph::new(monoid, vertices)?;
        for &(u, v, r) in edges {
            let x = g.vertex(u)?;
            let y = g.vertex(v)?;
            g.add_edge(x, y, Dist::new(r))?;
        }
        Ok(g)
    }

    fn vertex(&self, label: &str) -> Result<usize, GraphError> {
        self.vertices
            .iter()
            .position(|v| v == label)
            .ok_or_else(|| GraphError::UnknownVertex(label.to_string()))
    }

    pub fn add_vertex(&mut self, label: String) -> Result<usize, GraphError> {
        if self.vertices.contains(&label) {
            return Err(GraphError::DuplicateVertex(label));
        }
        self.vertices.push(label);
        Ok(self.vertices.len() - 1)
    }

    pub fn add_edge(&mut self, x: usize, y: usize, r: Dist) -> Result<(), GraphError> {
        let n = self.vertices.len();
        if x >= n || y >= n {
            return Err(GraphError::UnknownVertex(format!("#{}", x.max(y))));
        }
        if x == y {
            return Err(GraphError::SelfLoop(self.vertices[x].clone()));
        }
        if !self.monoid.contains(r) {
            return Err(GraphError::UnknownLabel(r.index()));
        }
        if r.is_zero() {
            return Err(GraphError::ZeroLabel(self.vertices[x].clone(), self.vertices[y].clone()));
        }
        let key = (x.min(y), x.max(y));
        match self.edges.get(&key) {
            Some(&old) if old != r => Err(GraphError::ConflictingLabels(
                self.vertices[key.0].clone(),
                self.vertices[key.1].clone(),
            )),
            _ => {
                self.edges.insert(key, r);
                Ok(())
            }
        }
    }

    pub fn monoid(&self) -> &Arc<DistanceMonoid> {
        &self.monoid
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edges as `(x, y, label)` with `x < y`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Dist)> + '_ {
        self.edges.iter().map(|(&(x, y), &r)| (x, y, r))
    }

    pub fn label(&self, x: usize, y: usize) -> Option<Dist> {
        self.edges.get(&(x.min(y), x.max(y))).copied()
    }

    fn adjacency(&self) -> Vec<Vec<(usize, Dist)>> {
        let mut adj = vec![Vec::new(); self.len()];
        for (x, y, r) in self.edges() {
            adj[x].push((y, r));
            adj[y].push((x, r));
        }
        adj
    }

    /// Least label sum over paths from `source`, `None` when unreachable.
    /// The frontier is ordered by the monoid order; appending an edge never
    /// lowers a sum, so settled vertices are final.
    pub fn shortest_from(&self, source: usize) -> Vec<Option<Dist>> {
        let adj = self.adjacency();
        let mut best: Vec<Option<Dist>> = vec![None; self.len()];
        let mut done = vec![false; self.len()];
        best[source] = Some(Dist::ZERO);
        let mut heap = BinaryHeap::from([Reverse((Dist::ZERO, source))]);
        while let Some(Reverse((d, x))) = heap.pop() {
            if std::mem::replace(&mut done[x], true) {
                continue;
            }
            for &(y, r) in &adj[x] {
                let nd = self.monoid.plus(d, r);
                if !done[y] && best[y].is_none_or(|old| nd < old) {
                    best[y] = Some(nd);
                    heap.push(Reverse((nd, y)));
                }
            }
        }
        best
    }
}

/// The metric on the connected component containing `base`, with
/// `d(x, y)` the least ⊕-sum of labels along a path. Points keep the
/// graph's vertex order.
pub fn path_metric_completion(g: &LabeledGraph, base: &[usize]) -> Result<MetricSpace, GraphError> {
    let &first = base.first().ok_or(GraphError::EmptyBase)?;
    let from_first = g.shortest_from(first);
    if base.iter().any(|&b| from_first[b].is_none()) {
        return Err(GraphError::DisconnectedBase);
    }
    let component: Vec<usize> = (0..g.len()).filter(|&v| from_first[v].is_some()).collect();
    let rows: Vec<Vec<Option<Dist>>> = component.iter().map(|&v| g.shortest_from(v)).collect();
    let dist = rows
        .iter()
        .map(|row| component.iter().map(|&w| row[w].expect("same component")).collect())
        .collect();
    let labels = component.iter().map(|&v| g.vertices[v].clone()).collect();
    Ok(validate_space(g.monoid.clone(), labels, dist)?)
}
