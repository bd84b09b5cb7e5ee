//! Quiver combinatorics, dimension vectors, and universe construction.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::universe::{Flavor, VarInfo, VarRole, VarUniverse};

/// A finite directed graph; loops and parallel edges allowed. The declared
/// vertex and edge orders are the single source of truth for variable naming
/// (`u_e` / `t_e` follow edge order).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quiver {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
}

impl Quiver {
    pub fn new(vertices: Vec<String>, edges: Vec<(String, String)>) -> Result<Self> {
        let q = Quiver { vertices, edges };
        for (s, t) in &q.edges {
            q.vertex_index(s)?;
            q.vertex_index(t)?;
        }
        let mut seen = std::collections::BTreeSet::new();
        for v in &q.vertices {
            if !seen.insert(v) {
                return Err(Error::Parse(format!("duplicate vertex id {v}")));
            }
        }
        Ok(q)
    }

    /// The quiver with one vertex and `g` loops.
    pub fn loop_quiver(g: usize) -> Quiver {
        Quiver {
            vertices: vec!["1".to_string()],
            edges: (0..g).map(|_| ("1".to_string(), "1".to_string())).collect(),
        }
    }

    pub fn vertex_index(&self, id: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == id)
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edge indices with source = target = the given vertex, in edge order.
    pub fn loops_at(&self, vertex: usize) -> Result<Vec<usize>> {
        if vertex >= self.vertices.len() {
            return Err(Error::UnknownVertex(vertex.to_string()));
        }
        let id = &self.vertices[vertex];
        Ok(self
            .edges
            .iter()
            .enumerate()
            .filter(|(_, (s, t))| s == id && t == id)
            .map(|(i, _)| i)
            .collect())
    }

    /// Edge indices from vertex `i` to vertex `j` (by index), in edge order.
    pub fn edges_between(&self, i: usize, j: usize) -> Vec<usize> {
        let (si, tj) = (&self.vertices[i], &self.vertices[j]);
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, (s, t))| s == si && t == tj)
            .map(|(k, _)| k)
            .collect()
    }

    pub fn from_json(text: &str) -> Result<Quiver> {
        let v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let vertices = v
            .get("vertices")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Parse("missing \"vertices\" array".into()))?
            .iter()
            .map(json_id)
            .collect::<Result<Vec<_>>>()?;
        let edges = v
            .get("edges")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Parse("missing \"edges\" array".into()))?
            .iter()
            .map(|e| {
                let pair = e
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| Error::Parse("edge must be a [source, target] pair".into()))?;
                Ok((json_id(&pair[0])?, json_id(&pair[1])?))
            })
            .collect::<Result<Vec<_>>>()?;
        Quiver::new(vertices, edges)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "vertices": self.vertices,
            "edges": self.edges.iter().map(|(s, t)| vec![s, t]).collect::<Vec<_>>(),
        })
    }
}

fn json_id(v: &serde_json::Value) -> Result<String> {
    match v {
        serde_json::Value::String(s) => Ok(s.clone()),
        serde_json::Value::Number(n) => Ok(n.to_string()),
        _ => Err(Error::Parse("vertex id must be a string or number".into())),
    }
}

/// A map vertex id -> nonnegative multiplicity, with finite support.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DimVector(pub BTreeMap<String, u32>);

impl DimVector {
    pub fn zero() -> DimVector {
        DimVector(BTreeMap::new())
    }

    /// The unit vector with a single 1 at the given vertex id.
    pub fn unit(vertex: &str) -> DimVector {
        DimVector(BTreeMap::from([(vertex.to_string(), 1)]))
    }

    pub fn scaled_unit(vertex: &str, n: u32) -> DimVector {
        let mut d = DimVector::zero();
        if n > 0 {
            d.0.insert(vertex.to_string(), n);
        }
        d
    }

    pub fn get(&self, vertex: &str) -> u32 {
        self.0.get(vertex).copied().unwrap_or(0)
    }

    pub fn add(&self, other: &DimVector) -> DimVector {
        let mut out = self.0.clone();
        for (k, v) in &other.0 {
            *out.entry(k.clone()).or_insert(0) += v;
        }
        out.retain(|_, v| *v > 0);
        DimVector(out)
    }

    pub fn total(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total() == 0
    }

    /// The single supported vertex id, if the support is a singleton.
    pub fn single_vertex(&self) -> Option<(&str, u32)> {
        let mut support = self.0.iter().filter(|(_, &v)| v > 0);
        let first = support.next()?;
        if support.next().is_some() {
            return None;
        }
        Some((first.0.as_str(), *first.1))
    }
}

/// Builds the ordered variable universe for a quiver and dimension vector:
/// parameters first, then alphabet variables grouped by vertex in slot order.
pub fn make_universe(q: &Quiver, n: &DimVector, flavor: Flavor) -> Result<Arc<VarUniverse>> {
    for v in n.0.keys() {
        q.vertex_index(v)?;
    }
    let mut vars = Vec::new();
    match flavor {
        Flavor::Cohomological => {
            vars.push(VarInfo {
                name: "h".into(),
                role: VarRole::Parameter,
                laurent: false,
            });
            for e in 1..=q.num_edges() {
                vars.push(VarInfo {
                    name: format!("u{e}"),
                    role: VarRole::Parameter,
                    laurent: false,
                });
            }
        }
        Flavor::KTheoretic => {
            vars.push(VarInfo {
                name: "q".into(),
                role: VarRole::Parameter,
                laurent: true,
            });
            for e in 1..=q.num_edges() {
                vars.push(VarInfo {
                    name: format!("t{e}"),
                    role: VarRole::Parameter,
                    laurent: true,
                });
            }
        }
    }
    for (vi, id) in q.vertices.iter().enumerate() {
        let count = n.get(id);
        for slot in 0..count as usize {
            let (prefix, laurent) = match flavor {
                Flavor::Cohomological => ("z", false),
                Flavor::KTheoretic => ("w", true),
            };
            vars.push(VarInfo {
                name: format!("{prefix}{}_{}", vi + 1, slot + 1),
                role: VarRole::Alphabet { vertex: vi, slot },
                laurent,
            });
        }
    }
    Ok(Arc::new(VarUniverse::new(vars)?))
}
