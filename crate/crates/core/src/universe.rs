//! Ordered variable universes shared by all polynomial values.
//!
//! A universe lists parameters first (`h`, `u_e` in the cohomological flavor,
//! `q`, `t_e` in the K-theoretic one), then alphabet variables grouped by
//! vertex in slot order. Exponent vectors of [`crate::MPoly`] are indexed by
//! position in this list.

use serde::{Deserialize, Serialize};
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VarRole {
    Parameter,
    /// Alphabet variable keyed by (vertex index, slot index), both 0-based.
    Alphabet {
        vertex: usize,
        slot: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VarInfo {
    pub name: String,
    pub role: VarRole,
    /// Whether negative exponents are permitted for this variable.
    pub laurent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VarUniverse {
    vars: Vec<VarInfo>,
}

impl VarUniverse {
    pub fn new(vars: Vec<VarInfo>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for v in &vars {
            if !seen.insert(v.name.clone()) {
                return Err(Error::UniverseMismatch(format!(
                    "duplicate variable name {}",
                    v.name
                )));
            }
        }
        Ok(VarUniverse { vars })
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[VarInfo] {
        &self.vars
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.vars[idx].name
    }

    pub fn is_laurent(&self, idx: usize) -> bool {
        self.vars[idx].laurent
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn parameter_indices(&self) -> Vec<usize> {
        (0..self.vars.len())
            .filter(|&i| self.vars[i].role == VarRole::Parameter)
            .collect()
    }

    pub fn alphabet_indices(&self) -> Vec<usize> {
        (0..self.vars.len())
            .filter(|&i| matches!(self.vars[i].role, VarRole::Alphabet { .. }))
            .collect()
    }

    /// Per-vertex groups of alphabet variable indices, in slot order.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut max_vertex = None;
        for v in &self.vars {
            if let VarRole::Alphabet { vertex, .. } = v.role {
                max_vertex = Some(max_vertex.map_or(vertex, |m: usize| m.max(vertex)));
            }
        }
        let Some(max_vertex) = max_vertex else {
            return Vec::new();
        };
        let mut blocks = vec![Vec::new(); max_vertex + 1];
        for (i, v) in self.vars.iter().enumerate() {
            if let VarRole::Alphabet { vertex, .. } = v.role {
                blocks[vertex].push(i);
            }
        }
        blocks
    }

    /// Indices of slots for a given vertex, ordered by slot.
    pub fn vertex_slots(&self, vertex: usize) -> Vec<usize> {
        self.blocks().get(vertex).cloned().unwrap_or_default()
    }

    /// Index of the alphabet variable with the given (vertex, slot) key.
    pub fn alphabet_index(&self, vertex: usize, slot: usize) -> Option<usize> {
        self.vars.iter().position(|v| {
            v.role
                == VarRole::Alphabet {
                    vertex,
                    slot,
                }
        })
    }

    /// Checks that `self` embeds into `other` by name, compatibly with order,
    /// and returns the index map.
    pub fn embedding_into(&self, other: &VarUniverse) -> Result<Vec<usize>> {
        let mut map = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            let Some(j) = other.index_of(&v.name) else {
                return Err(Error::UniverseMismatch(format!(
                    "variable {} missing from target universe",
                    v.name
                )));
            };
            if other.vars[j].role != v.role || (v.laurent && !other.vars[j].laurent) {
                return Err(Error::UniverseMismatch(format!(
                    "variable {} has incompatible role or Laurent flag",
                    v.name
                )));
            }
            map.push(j);
        }
        Ok(map)
    }

    /// Union of two universes: variables of `self` in order, then variables of
    /// `other` not already present. Roles must agree on common names.
    pub fn merge(&self, other: &VarUniverse) -> Result<Arc<VarUniverse>> {
        let mut vars = self.vars.clone();
        for v in &other.vars {
            match self.index_of(&v.name) {
                Some(i) => {
                    if self.vars[i].role != v.role {
                        return Err(Error::UniverseMismatch(format!(
                            "variable {} has conflicting roles",
                            v.name
                        )));
                    }
                }
                None => vars.push(v.clone()),
            }
        }
        Ok(Arc::new(VarUniverse::new(vars)?))
    }
}

/// Cohomological (`z`, `h`, `u_e`) vs K-theoretic (`w`, `q`, `t_e`) variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Flavor {
    Cohomological,
    KTheoretic,
}

impl std::fmt::Display for Flavor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Flavor::Cohomological => write!(f, "coh"),
            Flavor::KTheoretic => write!(f, "k"),
        }
    }
}
