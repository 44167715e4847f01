//! JSON formats for monoids, spaces, graphs, witnesses, forbidden classes
//! and path extensions.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eppa::{Certificate, EppaWitness};
use crate::graph::{GraphError, LabeledGraph};
use crate::monoid::{make_max_chain, make_truncated, validate_monoid, Dist, DistanceMonoid, MonoidError, MonoidKind};
use crate::omission::{ForbiddenClass, OmissionError, PathExtension};
use crate::space::{validate_space, MetricSpace, PartialIsometry, SimpleGraph, SpaceError};

/// Largest `n` accepted for the built-in families.
pub const MAX_FAMILY_N: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JsonError {
    #[error("unreadable JSON: {0}")]
    Parse(String),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Omission(#[from] OmissionError),
    #[error("unknown point {0:?}")]
    UnknownLabel(String),
    #[error("{0}")]
    Invalid(String),
}

impl From<serde_json::Error> for JsonError {
    fn from(e: serde_json::Error) -> Self {
        JsonError::Parse(e.to_string())
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MonoidSpec {
    Truncated { n: usize },
    MaxChain { n: usize },
    Table { labels: Vec<String>, plus: Vec<Vec<usize>> },
}

impl MonoidSpec {
    pub fn build(&self) -> Result<DistanceMonoid, MonoidError> {
        let check = |n: usize| {
            if n == 0 || n > MAX_FAMILY_N {
                Err(MonoidError::Malformed(format!("n must be in 1..={MAX_FAMILY_N}")))
            } else {
                Ok(n)
            }
        };
        match self {
            MonoidSpec::Truncated { n } => Ok(make_truncated(check(*n)?)),
            MonoidSpec::MaxChain { n } => Ok(make_max_chain(check(*n)?)),
            MonoidSpec::Table { labels, plus } => validate_monoid(labels.clone(), plus.clone()),
        }
    }

    pub fn of(m: &DistanceMonoid) -> MonoidSpec {
        match m.kind() {
            MonoidKind::Truncated(n) => MonoidSpec::Truncated { n },
            MonoidKind::MaxChain(n) => MonoidSpec::MaxChain { n },
            MonoidKind::Table => MonoidSpec::Table {
                labels: m.labels().to_vec(),
                plus: m.plus_table(),
            },
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct SpaceJson {
    pub monoid: MonoidSpec,
    pub points: Vec<String>,
    pub dist: Vec<Vec<usize>>,
}

impl SpaceJson {
    pub fn of(space: &MetricSpace) -> SpaceJson {
        SpaceJson {
            monoid: MonoidSpec::of(space.monoid()),
            points: space.labels().to_vec(),
            dist: space.matrix(),
        }
    }

    pub fn build(&self) -> Result<MetricSpace, JsonError> {
        let monoid = Arc::new(self.monoid.build()?);
        self.build_over(monoid)
    }

    /// Build over an already constructed monoid, which must match.
    pub fn build_over(&self, monoid: Arc<DistanceMonoid>) -> Result<MetricSpace, JsonError> {
        if self.monoid.build()? != *monoid {
            return Err(JsonError::Invalid("space uses a different monoid".into()));
        }
        let dist = self
            .dist
            .iter()
            .map(|row| row.iter().map(|&i| Dist::new(i)).collect())
            .collect();
        Ok(validate_space(monoid, self.points.clone(), dist)?)
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(untagged)]
pub enum EdgeJson {
    Labeled(String, String, usize),
    Plain(String, String),
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct GraphJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monoid: Option<MonoidSpec>,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeJson>,
}

impl GraphJson {
    fn index(&self, label: &str) -> Result<usize, JsonError> {
        self.vertices
            .iter()
            .position(|v| v == label)
            .ok_or_else(|| JsonError::UnknownLabel(label.to_string()))
    }

    /// Labels on edges are ignored.
    pub fn simple_graph(&self) -> Result<SimpleGraph, JsonError> {
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let (u, v) = match e {
                    EdgeJson::Labeled(u, v, _) | EdgeJson::Plain(u, v) => (u, v),
                };
                Ok((self.index(u)?, self.index(v)?))
            })
            .collect::<Result<Vec<_>, JsonError>>()?;
        Ok(SimpleGraph {
            vertices: self.vertices.clone(),
            edges,
        })
    }

    pub fn labeled_graph(&self) -> Result<LabeledGraph, JsonError> {
        let spec = self
            .monoid
            .as_ref()
            .ok_or_else(|| JsonError::Invalid("a labelled graph needs a monoid".into()))?;
        let mut g = LabeledGraph::new(Arc::new(spec.build()?), self.vertices.clone())?;
        for e in &self.edges {
            let EdgeJson::Labeled(u, v, r) = e else {
                return Err(JsonError::Invalid("every edge needs a label".into()));
            };
            g.add_edge(self.index(u)?, self.index(v)?, Dist::new(*r))?;
        }
        Ok(g)
    }
}

fn map_json(space_a: &MetricSpace, space_b: &MetricSpace, pairs: impl Iterator<Item = (usize, usize)>) -> BTreeMap<String, String> {
    pairs
        .map(|(x, y)| (space_a.label(x).to_string(), space_b.label(y).to_string()))
        .collect()
}

fn map_from_json(
    space_a: &MetricSpace,
    space_b: &MetricSpace,
    map: &BTreeMap<String, String>,
) -> Result<Vec<(usize, usize)>, JsonError> {
    map.iter()
        .map(|(x, y)| {
            let i = space_a.index_of(x).ok_or_else(|| JsonError::UnknownLabel(x.clone()))?;
            let j = space_b.index_of(y).ok_or_else(|| JsonError::UnknownLabel(y.clone()))?;
            Ok((i, j))
        })
        .collect()
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct CertificateJson {
    pub partial: BTreeMap<String, String>,
    pub total: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct WitnessJson {
    pub base: SpaceJson,
    pub witness: SpaceJson,
    /// Base label to witness label.
    pub embedding: BTreeMap<String, String>,
    #[serde(default)]
    pub certificates: Vec<CertificateJson>,
}

impl WitnessJson {
    pub fn of(w: &EppaWitness) -> WitnessJson {
        WitnessJson {
            base: SpaceJson::of(&w.base),
            witness: SpaceJson::of(&w.witness),
            embedding: map_json(&w.base, &w.witness, w.embedding.iter().copied().enumerate()),
            certificates: w
                .certificates
                .iter()
                .map(|c| CertificateJson {
                    partial: map_json(&w.base, &w.base, c.partial.pairs().iter().copied()),
                    total: map_json(&w.witness, &w.witness, c.total.iter().copied().enumerate()),
                })
                .collect(),
        }
    }

    /// Parse; certificates must at least be well-formed partial maps and
    /// permutations, their correctness is left to verification.
    pub fn build(&self) -> Result<EppaWitness, JsonError> {
        let base = self.base.build()?;
        let witness = self.witness.build_over(base.monoid_arc().clone())?;
        let mut embedding = vec![usize::MAX; base.len()];
        for (a, b) in map_from_json(&base, &witness, &self.embedding)? {
            embedding[a] = b;
        }
        if embedding.contains(&usize::MAX) {
            return Err(JsonError::Invalid("embedding must cover every base point".into()));
        }
        let certificates = self
            .certificates
            .iter()
            .map(|c| {
                let partial = PartialIsometry::new(&base, map_from_json(&base, &base, &c.partial)?)
                    .ok_or_else(|| JsonError::Invalid("certificate domain map is not a partial isometry".into()))?;
                let mut total = vec![usize::MAX; witness.len()];
                for (x, y) in map_from_json(&witness, &witness, &c.total)? {
                    total[x] = y;
                }
                if total.contains(&usize::MAX) {
                    return Err(JsonError::Invalid("certificate must be total".into()));
                }
                Ok(Certificate { partial, total })
            })
            .collect::<Result<Vec<_>, JsonError>>()?;
        Ok(EppaWitness {
            base,
            witness,
            embedding,
            certificates,
        })
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct ForbiddenJson {
    pub members: Vec<SpaceJson>,
    pub spectrum_bound: Vec<usize>,
}

impl ForbiddenJson {
    pub fn of(f: &ForbiddenClass) -> ForbiddenJson {
        ForbiddenJson {
            members: f.members.iter().map(SpaceJson::of).collect(),
            spectrum_bound: f.spectrum_bound.iter().map(|d| d.index()).collect(),
        }
    }

    pub fn build(&self) -> Result<ForbiddenClass, JsonError> {
        let members = self.members.iter().map(SpaceJson::build).collect::<Result<Vec<_>, _>>()?;
        Ok(ForbiddenClass::new(
            members,
            self.spectrum_bound.iter().map(|&i| Dist::new(i)).collect(),
        )?)
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct PathExtensionJson {
    pub base: SpaceJson,
    pub points: Vec<String>,
    pub delta: Vec<(String, String, usize)>,
    /// Keyed `"x|y"`.
    pub paths: BTreeMap<String, Vec<String>>,
    pub all_paths_simple: bool,
}

impl PathExtensionJson {
    pub fn of(e: &PathExtension) -> PathExtensionJson {
        let labels = e.carrier.labels();
        PathExtensionJson {
            base: SpaceJson::of(&e.base),
            points: labels.to_vec(),
            delta: e
                .carrier
                .defined_pairs()
                .into_iter()
                .map(|(x, y, r)| (labels[x].clone(), labels[y].clone(), r.index()))
                .collect(),
            paths: e
                .paths
                .iter()
                .map(|((x, y), p)| {
                    (
                        format!("{}|{}", labels[*x], labels[*y]),
                        p.iter().map(|&v| labels[v].clone()).collect(),
                    )
                })
                .collect(),
            all_paths_simple: e.all_paths_simple,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eppa::brute_force_witness;
    use crate::monoid::fixtures;

    #[test]
    fn monoid_specs_round_trip() {
        let specs = [
            r#"{"kind":"truncated","n":3}"#,
            r#"{"kind":"max_chain","n":2}"#,
        ];
        for s in specs {
            let spec: MonoidSpec = serde_json::from_str(s).unwrap();
            let m = spec.build().unwrap();
            assert_eq!(serde_json::to_string(&MonoidSpec::of(&m)).unwrap(), s);
        }
        let table = fixtures::two_class_semi_archimedean();
        let spec = MonoidSpec::of(&table);
        let text = serde_json::to_string(&spec).unwrap();
        let back: MonoidSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back.build().unwrap(), table);
        assert!(MonoidSpec::Truncated { n: 0 }.build().is_err());
    }

    #[test]
    fn space_round_trip() {
        let text = r#"{"monoid":{"kind":"truncated","n":2},"points":["a","b"],"dist":[[0,1],[1,0]]}"#;
        let s: SpaceJson = serde_json::from_str(text).unwrap();
        let space = s.build().unwrap();
        assert_eq!(serde_json::to_string(&SpaceJson::of(&space)).unwrap(), text);
    }

    #[test]
    fn graph_formats() {
        let text = r#"{"vertices":["a","b","c"],"edges":[["a","b"],["b","c"]]}"#;
        let g: GraphJson = serde_json::from_str(text).unwrap();
        assert_eq!(g.simple_graph().unwrap().edges, vec![(0, 1), (1, 2)]);
        assert!(g.labeled_graph().is_err());
        let text = r#"{"monoid":{"kind":"truncated","n":3},"vertices":["x","y"],"edges":[["x","y",2]]}"#;
        let g: GraphJson = serde_json::from_str(text).unwrap();
        assert_eq!(g.labeled_graph().unwrap().label(0, 1), Some(Dist::new(2)));
        assert_eq!(serde_json::to_string(&g).unwrap(), text);
    }

    #[test]
    fn witness_round_trip() {
        let r2 = Arc::new(make_truncated(2));
        let path = MetricSpace::triangle(r2, 1, 1, 2).unwrap();
        let w = brute_force_witness(&path, 6, &[Dist::new(1), Dist::new(2)].into()).unwrap();
        let j = WitnessJson::of(&w);
        let text = serde_json::to_string(&j).unwrap();
        let back: WitnessJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.build().unwrap(), w);
    }
}
