//! Wheel conditions in both flavors.
//!
//! For every edge `e: i -> j` and all applicable slot triples `(a, b, c)`
//! with `a != c` (and `a != b != c` when `i = j`), the element must vanish
//! under two families of substitutions:
//!
//! * cohomological: `z_{ia} -> z_{jb} - u_e, z_{ic} -> z_{jb} + h - u_e`
//!   and the mirrored `z_{ja} -> z_{ib} - h + u_e, z_{jc} -> z_{ib} + u_e`;
//! * K-theoretic: `w_{ia} -> w_{jb} / t_e, w_{ic} -> q w_{jb} / t_e`
//!   and the mirrored `w_{ja} -> q^{-1} t_e w_{ib}, w_{jc} -> t_e w_{ib}`.

use std::collections::BTreeMap;

use crate::element::ShuffleElement;
use crate::error::{Error, Result};
use crate::mpoly::MPoly;
use crate::universe::Flavor;

/// One failing wheel substitution: the edge, which of the two substitution
/// families, and the slot triple (0-based, in the order `(a, b, c)` of the
/// definition).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WheelViolation {
    pub edge: usize,
    pub family: u8,
    pub slots: (usize, usize, usize),
}

impl std::fmt::Display for WheelViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "edge {} family {} slots (a={}, b={}, c={})",
            self.edge + 1,
            self.family,
            self.slots.0 + 1,
            self.slots.1 + 1,
            self.slots.2 + 1
        )
    }
}

/// Every applicable wheel substitution for a flavor/quiver/universe triple,
/// as variable bindings tagged with their provenance.
pub(crate) fn wheel_substitutions(
    flavor: Flavor,
    q: &crate::quiver::Quiver,
    u: &std::sync::Arc<crate::universe::VarUniverse>,
) -> Result<Vec<(WheelViolation, BTreeMap<String, MPoly>)>> {
    let mut subs = Vec::new();
    for (e, (src, tgt)) in q.edges.iter().enumerate() {
        let i = q.vertex_index(src)?;
        let j = q.vertex_index(tgt)?;
        for family in [1u8, 2u8] {
            // Family 1 pins slots a, c at the edge source and b at the
            // target; family 2 mirrors the roles.
            let (vi, vj) = if family == 1 { (i, j) } else { (j, i) };
            let ac_slots = u.vertex_slots(vi);
            let b_slots = u.vertex_slots(vj);
            for (sa, &va) in ac_slots.iter().enumerate() {
                for (sc, &vc) in ac_slots.iter().enumerate() {
                    if sa == sc {
                        continue;
                    }
                    for (sb, &vb) in b_slots.iter().enumerate() {
                        if vi == vj && (sb == sa || sb == sc) {
                            continue;
                        }
                        let (img_a, img_c) = substitution_images(flavor, u, e, family, vb)?;
                        let mut bindings = BTreeMap::new();
                        bindings.insert(u.name(va).to_string(), img_a);
                        bindings.insert(u.name(vc).to_string(), img_c);
                        subs.push((
                            WheelViolation {
                                edge: e,
                                family,
                                slots: (sa, sb, sc),
                            },
                            bindings,
                        ));
                    }
                }
            }
        }
    }
    Ok(subs)
}

/// Every applicable wheel substitution that fails to annihilate the element.
/// An empty list means the element lies in the shuffle algebra's wheel space.
pub fn wheel_violations(a: &ShuffleElement) -> Result<Vec<WheelViolation>> {
    let poly = a.poly();
    let mut violations = Vec::new();
    for (tag, bindings) in wheel_substitutions(a.flavor, &a.quiver, a.universe())? {
        if !poly.substitute(&bindings)?.is_zero() {
            violations.push(tag);
        }
    }
    Ok(violations)
}

/// Images of the pinned pair (slot a, slot c) in terms of the free slot
/// variable `vb`, per flavor, family, and edge.
fn substitution_images(
    flavor: Flavor,
    u: &std::sync::Arc<crate::universe::VarUniverse>,
    e: usize,
    family: u8,
    vb: usize,
) -> Result<(MPoly, MPoly)> {
    let xb = MPoly::var(u.clone(), vb);
    match flavor {
        Flavor::Cohomological => {
            let h = MPoly::var(
                u.clone(),
                u.index_of("h").ok_or_else(|| Error::UnknownVariable("h".into()))?,
            );
            let ue = MPoly::var(
                u.clone(),
                u.index_of(&format!("u{}", e + 1))
                    .ok_or_else(|| Error::UnknownVariable(format!("u{}", e + 1)))?,
            );
            if family == 1 {
                Ok((xb.sub(&ue)?, xb.add(&h)?.sub(&ue)?))
            } else {
                Ok((xb.sub(&h)?.add(&ue)?, xb.add(&ue)?))
            }
        }
        Flavor::KTheoretic => {
            let qi = u.index_of("q").ok_or_else(|| Error::UnknownVariable("q".into()))?;
            let ti = u
                .index_of(&format!("t{}", e + 1))
                .ok_or_else(|| Error::UnknownVariable(format!("t{}", e + 1)))?;
            let q = MPoly::var(u.clone(), qi);
            let q_inv = MPoly::monomial(u.clone(), qi, -1);
            let t = MPoly::var(u.clone(), ti);
            let t_inv = MPoly::monomial(u.clone(), ti, -1);
            if family == 1 {
                Ok((xb.mul(&t_inv)?, xb.mul(&q)?.mul(&t_inv)?))
            } else {
                Ok((xb.mul(&t)?.mul(&q_inv)?, xb.mul(&t)?))
            }
        }
    }
}

/// True iff the element satisfies every wheel condition of its flavor.
pub fn wheel_check(a: &ShuffleElement) -> Result<bool> {
    if a.flavor != Flavor::Cohomological {
        return Err(Error::FlavorMismatch {
            expected: Flavor::Cohomological.to_string(),
            found: a.flavor.to_string(),
        });
    }
    Ok(wheel_violations(a)?.is_empty())
}

/// K-theoretic counterpart of [`wheel_check`].
pub fn k_wheel_check(a: &ShuffleElement) -> Result<bool> {
    if a.flavor != Flavor::KTheoretic {
        return Err(Error::FlavorMismatch {
            expected: Flavor::KTheoretic.to_string(),
            found: a.flavor.to_string(),
        });
    }
    Ok(wheel_violations(a)?.is_empty())
}
