//! The kappa elements: explicit wheel-space elements attached to a vertex,
//! a dimension, and a power, in both flavors.

use crate::element::ShuffleElement;
use crate::error::{Error, Result};
use crate::mpoly::MPoly;
use crate::quiver::{make_universe, DimVector, Quiver};
use crate::universe::Flavor;

/// The explicit factors of `kappa_{i,n,d}`: first the power sum
/// `z_{i1}^d + ... + z_{in}^d`, then one factor `z_{ia} - z_{ib} + h - u_e`
/// per loop `e` at `i` and ordered slot pair `(a, b)` (diagonal pairs give
/// constant factors `h - u_e`). `kappa` is their product.
pub fn kappa_factors(q: &Quiver, vertex: &str, n: u32, d: u32) -> Result<Vec<MPoly>> {
    if n == 0 {
        return Err(Error::ZeroInput);
    }
    let vi = q.vertex_index(vertex)?;
    let dim = DimVector::scaled_unit(vertex, n);
    let u = make_universe(q, &dim, Flavor::Cohomological)?;
    let slots = u.vertex_slots(vi);
    let h = MPoly::var(
        u.clone(),
        u.index_of("h").ok_or_else(|| Error::UnknownVariable("h".into()))?,
    );

    let mut power_sum = MPoly::zero(u.clone());
    for &s in &slots {
        power_sum = power_sum.add(&MPoly::var(u.clone(), s).pow(d)?)?;
    }

    let mut factors = vec![power_sum];
    for e in q.loops_at(vi)? {
        let ue = MPoly::var(
            u.clone(),
            u.index_of(&format!("u{}", e + 1))
                .ok_or_else(|| Error::UnknownVariable(format!("u{}", e + 1)))?,
        );
        let shift = h.sub(&ue)?;
        for &sa in &slots {
            for &sb in &slots {
                let za = MPoly::var(u.clone(), sa);
                let zb = MPoly::var(u.clone(), sb);
                factors.push(za.sub(&zb)?.add(&shift)?);
            }
        }
    }
    Ok(factors)
}

/// `kappa_{i,n,d} = (z_{i1}^d + ... + z_{in}^d)
///                  * prod_{loops e at i} prod_{1<=a,b<=n} (z_{ia} - z_{ib} + h - u_e)`,
/// an element of dimension `n` at vertex `i`.
pub fn kappa(q: &Quiver, vertex: &str, n: u32, d: u32) -> Result<ShuffleElement> {
    let factors = kappa_factors(q, vertex, n, d)?;
    let mut product = factors[0].clone();
    for f in &factors[1..] {
        product = product.mul(f)?;
    }
    let dim = DimVector::scaled_unit(vertex, n);
    ShuffleElement::new(q.clone(), dim, Flavor::Cohomological, product)
}

/// The explicit factors of `kappa~_{i,n,d}`: first the power sum
/// `sum_a (w_{ia} - 1)^d`, then one factor `w_{ia} q / (w_{ib} t_e) - 1`
/// per loop `e` at `i` and ordered slot pair `(a, b)`, in the same order as
/// `kappa_factors` — the affine-shift lowest part of each factor is the
/// corresponding cohomological factor. `kappa_tilde` is their product.
pub fn kappa_tilde_factors(q: &Quiver, vertex: &str, n: u32, d: u32) -> Result<Vec<MPoly>> {
    if n == 0 {
        return Err(Error::ZeroInput);
    }
    let vi = q.vertex_index(vertex)?;
    let dim = DimVector::scaled_unit(vertex, n);
    let u = make_universe(q, &dim, Flavor::KTheoretic)?;
    let slots = u.vertex_slots(vi);
    let one = MPoly::one(u.clone());
    let qp = MPoly::var(
        u.clone(),
        u.index_of("q").ok_or_else(|| Error::UnknownVariable("q".into()))?,
    );

    let mut power_sum = MPoly::zero(u.clone());
    for &s in &slots {
        let w_minus_1 = MPoly::var(u.clone(), s).sub(&one)?;
        power_sum = power_sum.add(&w_minus_1.pow(d)?)?;
    }

    let mut factors = vec![power_sum];
    for e in q.loops_at(vi)? {
        let te_idx = u
            .index_of(&format!("t{}", e + 1))
            .ok_or_else(|| Error::UnknownVariable(format!("t{}", e + 1)))?;
        let te_inv = MPoly::monomial(u.clone(), te_idx, -1);
        for &sa in &slots {
            for &sb in &slots {
                let wa = MPoly::var(u.clone(), sa);
                let wb_inv = MPoly::monomial(u.clone(), sb, -1);
                factors.push(wa.mul(&qp)?.mul(&wb_inv)?.mul(&te_inv)?.sub(&one)?);
            }
        }
    }
    Ok(factors)
}

/// `kappa~_{i,n,d} = (sum_a (w_{ia} - 1)^d)
///                   * prod_{loops e at i} prod_{1<=a,b<=n} (w_{ia} q / (w_{ib} t_e) - 1)`,
/// cleared to Laurent-polynomial form (the `w_{ib}^{-1}` and `t_e^{-1}`
/// stay as Laurent exponents).
pub fn kappa_tilde(q: &Quiver, vertex: &str, n: u32, d: u32) -> Result<ShuffleElement> {
    let factors = kappa_tilde_factors(q, vertex, n, d)?;
    let mut product = factors[0].clone();
    for f in &factors[1..] {
        product = product.mul(f)?;
    }
    let dim = DimVector::scaled_unit(vertex, n);
    ShuffleElement::new(q.clone(), dim, Flavor::KTheoretic, product)
}
