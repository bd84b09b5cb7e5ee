//! Shuffle-algebra elements: a dimension vector plus a per-vertex-symmetric
//! (Laurent) polynomial over the induced universe.

use serde_json::{json, Value};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mpoly::MPoly;
use crate::quiver::{make_universe, DimVector, Quiver};
use crate::serialize;
use crate::universe::{Flavor, VarUniverse};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShuffleElement {
    pub quiver: Quiver,
    pub dim: DimVector,
    pub flavor: Flavor,
    poly: MPoly,
}

impl ShuffleElement {
    /// Validates the universe and per-vertex symmetry.
    pub fn new(quiver: Quiver, dim: DimVector, flavor: Flavor, poly: MPoly) -> Result<Self> {
        let u = make_universe(&quiver, &dim, flavor)?;
        if poly.universe() != &u {
            return Err(Error::UniverseMismatch(
                "polynomial universe does not match the element's quiver and dimension".into(),
            ));
        }
        if !poly.is_symmetric(&u.blocks()) {
            return Err(Error::NotSymmetric);
        }
        Ok(ShuffleElement {
            quiver,
            dim,
            flavor,
            poly,
        })
    }

    /// The unit of the algebra: dimension 0, polynomial 1.
    pub fn unit(quiver: Quiver, flavor: Flavor) -> Result<Self> {
        let dim = DimVector::zero();
        let u = make_universe(&quiver, &dim, flavor)?;
        ShuffleElement::new(quiver, dim, flavor, MPoly::one(u))
    }

    /// A single-variable generator at the given vertex: dimension unit-vector,
    /// polynomial z^d (or Laurent w^d).
    pub fn generator(quiver: Quiver, vertex: &str, d: i32, flavor: Flavor) -> Result<Self> {
        if d < 0 && flavor == Flavor::Cohomological {
            return Err(Error::NegativeExponent("z".into()));
        }
        let vi = quiver.vertex_index(vertex)?;
        let dim = DimVector::unit(vertex);
        let u = make_universe(&quiver, &dim, flavor)?;
        let slot = u.vertex_slots(vi)[0];
        let poly = MPoly::monomial(u, slot, d);
        ShuffleElement::new(quiver, dim, flavor, poly)
    }

    pub fn poly(&self) -> &MPoly {
        &self.poly
    }

    pub fn universe(&self) -> &Arc<VarUniverse> {
        self.poly.universe()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn add(&self, other: &ShuffleElement) -> Result<ShuffleElement> {
        if self.quiver != other.quiver || self.dim != other.dim || self.flavor != other.flavor {
            return Err(Error::UniverseMismatch(
                "elements live in different graded pieces".into(),
            ));
        }
        ShuffleElement::new(
            self.quiver.clone(),
            self.dim.clone(),
            self.flavor,
            self.poly.add(&other.poly)?,
        )
    }

    pub fn scale(&self, c: &crate::mpoly::Coeff) -> ShuffleElement {
        ShuffleElement {
            quiver: self.quiver.clone(),
            dim: self.dim.clone(),
            flavor: self.flavor,
            poly: self.poly.scale(c),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "flavor": self.flavor.to_string(),
            "quiver": self.quiver.to_json(),
            "dim": self.dim.0,
            "poly": serialize::mpoly_to_json(&self.poly),
        })
    }

    pub fn from_json(v: &Value) -> Result<ShuffleElement> {
        let flavor = match v.get("flavor").and_then(|x| x.as_str()) {
            Some("coh") => Flavor::Cohomological,
            Some("k") => Flavor::KTheoretic,
            other => {
                return Err(Error::Parse(format!(
                    "flavor must be \"coh\" or \"k\", got {other:?}"
                )))
            }
        };
        let quiver = Quiver::from_json(
            &v.get("quiver")
                .ok_or_else(|| Error::Parse("missing quiver".into()))?
                .to_string(),
        )?;
        let dim_map = v
            .get("dim")
            .and_then(|x| x.as_object())
            .ok_or_else(|| Error::Parse("missing dim object".into()))?;
        let mut dim = DimVector::zero();
        for (k, val) in dim_map {
            let n = val
                .as_u64()
                .ok_or_else(|| Error::Parse("dimension must be a nonnegative integer".into()))?;
            if n > 0 {
                dim.0.insert(k.clone(), n as u32);
            }
        }
        let poly = serialize::mpoly_from_json(
            v.get("poly")
                .ok_or_else(|| Error::Parse("missing poly".into()))?,
        )?;
        ShuffleElement::new(quiver, dim, flavor, poly)
    }
}
