//! The zeta kernels attached to ordered pairs of vertices, in both flavors.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mpoly::MPoly;
use crate::quiver::Quiver;
use crate::ratfn::RatFn;
use crate::universe::{Flavor, VarUniverse};

fn param(u: &Arc<VarUniverse>, name: &str) -> Result<MPoly> {
    let idx = u
        .index_of(name)
        .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
    Ok(MPoly::var(u.clone(), idx))
}

fn param_inv(u: &Arc<VarUniverse>, name: &str) -> Result<MPoly> {
    let idx = u
        .index_of(name)
        .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
    Ok(MPoly::monomial(u.clone(), idx, -1))
}

/// zeta_ij(x) = ((x - h)/x)^{delta_ij} prod_{e: i->j} (x + u_e)
///                                     prod_{e: j->i} (x + h - u_e)
pub fn zeta(q: &Quiver, i: usize, j: usize, x: &MPoly) -> Result<RatFn> {
    if i >= q.num_vertices() || j >= q.num_vertices() {
        return Err(Error::UnknownVertex(i.max(j).to_string()));
    }
    let u = x.universe().clone();
    let h = param(&u, "h")?;
    let mut num = MPoly::one(u.clone());
    let mut den = MPoly::one(u.clone());
    if i == j {
        num = num.mul(&x.sub(&h)?)?;
        den = den.mul(x)?;
    }
    for e in q.edges_between(i, j) {
        num = num.mul(&x.add(&param(&u, &format!("u{}", e + 1))?)?)?;
    }
    for e in q.edges_between(j, i) {
        num = num.mul(&x.add(&h)?.sub(&param(&u, &format!("u{}", e + 1))?)?)?;
    }
    RatFn::new(num, den)
}

/// zeta~_ij(x) = ((x q^{-1} - 1)/(x - 1))^{delta_ij} prod_{e: i->j} (x t_e - 1)
///                                                   prod_{e: j->i} (x q t_e^{-1} - 1)
pub fn zeta_tilde(q: &Quiver, i: usize, j: usize, x: &MPoly) -> Result<RatFn> {
    if i >= q.num_vertices() || j >= q.num_vertices() {
        return Err(Error::UnknownVertex(i.max(j).to_string()));
    }
    let u = x.universe().clone();
    let one = MPoly::one(u.clone());
    let mut num = MPoly::one(u.clone());
    let mut den = MPoly::one(u.clone());
    if i == j {
        num = num.mul(&x.mul(&param_inv(&u, "q")?)?.sub(&one)?)?;
        den = den.mul(&x.sub(&one)?)?;
    }
    for e in q.edges_between(i, j) {
        num = num.mul(&x.mul(&param(&u, &format!("t{}", e + 1))?)?.sub(&one)?)?;
    }
    for e in q.edges_between(j, i) {
        let qte = param(&u, "q")?.mul(&param_inv(&u, &format!("t{}", e + 1))?)?;
        num = num.mul(&x.mul(&qte)?.sub(&one)?)?;
    }
    RatFn::new(num, den)
}

/// Kernel factor for the ordered pair of alphabet variables (va at vertex i,
/// vb at vertex j), split as a polynomial numerator plus the single pole
/// factor present when i = j. In the K-theoretic flavor the numerator is a
/// Laurent polynomial (the `w_b^{-1}` units of each edge factor stay in it).
pub fn pair_kernel(
    flavor: Flavor,
    q: &Quiver,
    u: &Arc<VarUniverse>,
    i: usize,
    j: usize,
    va: usize,
    vb: usize,
) -> Result<(MPoly, Option<MPoly>)> {
    let xa = MPoly::var(u.clone(), va);
    let xb = MPoly::var(u.clone(), vb);
    match flavor {
        Flavor::Cohomological => {
            let h = param(u, "h")?;
            let x = xa.sub(&xb)?;
            let mut num = MPoly::one(u.clone());
            let mut den = None;
            if i == j {
                num = num.mul(&x.sub(&h)?)?;
                den = Some(x.clone());
            }
            for e in q.edges_between(i, j) {
                num = num.mul(&x.add(&param(u, &format!("u{}", e + 1))?)?)?;
            }
            for e in q.edges_between(j, i) {
                num = num.mul(&x.add(&h)?.sub(&param(u, &format!("u{}", e + 1))?)?)?;
            }
            Ok((num, den))
        }
        Flavor::KTheoretic => {
            let wb_inv = MPoly::monomial(u.clone(), vb, -1);
            let mut num = MPoly::one(u.clone());
            let mut den = None;
            if i == j {
                // (x q^{-1} - 1)/(x - 1) with x = w_a/w_b, cleared by w_b.
                num = num.mul(&xa.mul(&param_inv(u, "q")?)?.sub(&xb)?)?;
                den = Some(xa.sub(&xb)?);
            }
            for e in q.edges_between(i, j) {
                let t = param(u, &format!("t{}", e + 1))?;
                num = num.mul(&xa.mul(&t)?.sub(&xb)?)?.mul(&wb_inv)?;
            }
            for e in q.edges_between(j, i) {
                let qte = param(u, "q")?.mul(&param_inv(u, &format!("t{}", e + 1))?)?;
                num = num.mul(&xa.mul(&qte)?.sub(&xb)?)?.mul(&wb_inv)?;
            }
            Ok((num, den))
        }
    }
}

/// The pole factor of the common denominator for two same-vertex slots, in
/// the fixed orientation a < b.
pub fn pole_factor(u: &Arc<VarUniverse>, va: usize, vb: usize) -> Result<MPoly> {
    let xa = MPoly::var(u.clone(), va);
    let xb = MPoly::var(u.clone(), vb);
    xa.sub(&xb)
}
