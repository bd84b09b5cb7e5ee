//! The shuffle product in both flavors.
//!
//! The product of two elements of dimensions `n` and `n'` is computed as a
//! sum over shuffles (per-vertex splittings of the combined alphabet) of the
//! two input polynomials times the pairwise kernel factors. All summands are
//! placed over the fixed common denominator `prod_{i} prod_{a<b} (x_{i,a} -
//! x_{i,b})`, and the final division is performed exactly; failure of the
//! poles to cancel is a hard error rather than a silent approximation.

use itertools::Itertools;
use num::One;

use crate::element::ShuffleElement;
use crate::error::{Error, Result};
use crate::kernel::{pair_kernel, pole_factor};
use crate::mpoly::{Coeff, MPoly};
use crate::ratfn::RatFn;

/// All permutations of `0..n` together with their signs.
pub fn permutations_with_sign(n: usize) -> Vec<(Vec<usize>, i32)> {
    (0..n)
        .permutations(n)
        .map(|p| {
            let mut inv = 0;
            for a in 0..p.len() {
                for b in a + 1..p.len() {
                    if p[a] > p[b] {
                        inv += 1;
                    }
                }
            }
            (p, if inv % 2 == 0 { 1 } else { -1 })
        })
        .collect()
}

/// Symmetrization: the sum of `p` over all permutations of the variables
/// within each block (no factorial normalization).
pub fn sym(p: &RatFn, blocks: &[Vec<usize>]) -> Result<RatFn> {
    let arity = p.universe().arity();
    let nonempty: Vec<&Vec<usize>> = blocks.iter().filter(|b| !b.is_empty()).collect();
    if nonempty.is_empty() {
        return Ok(p.clone());
    }
    let per_block: Vec<Vec<(Vec<usize>, i32)>> = nonempty
        .iter()
        .map(|b| permutations_with_sign(b.len()))
        .collect();
    let mut total = RatFn::zero(p.universe().clone());
    for choice in per_block.iter().map(|ps| ps.iter()).multi_cartesian_product() {
        let mut perm: Vec<usize> = (0..arity).collect();
        for (block, (sigma, _)) in nonempty.iter().zip(&choice) {
            for (k, &sk) in sigma.iter().enumerate() {
                perm[block[k]] = block[sk];
            }
        }
        let permuted = RatFn::new(p.num().permute_vars(&perm), p.den().permute_vars(&perm))?;
        total = total.add(&permuted)?;
    }
    Ok(total)
}

/// The shuffle product. Both elements must share a quiver and a flavor; the
/// result lives in the sum of the two dimension vectors.
pub fn shuffle_mul(a: &ShuffleElement, b: &ShuffleElement) -> Result<ShuffleElement> {
    if a.flavor != b.flavor {
        return Err(Error::FlavorMismatch {
            expected: a.flavor.to_string(),
            found: b.flavor.to_string(),
        });
    }
    if a.quiver != b.quiver {
        return Err(Error::UniverseMismatch(
            "elements are over different quivers".into(),
        ));
    }
    let q = a.quiver.clone();
    let flavor = a.flavor;
    let nv = q.num_vertices();
    let dim = a.dim.add(&b.dim);
    let u = crate::quiver::make_universe(&q, &dim, flavor)?;

    // Per-vertex slot counts of the two factors.
    let an: Vec<usize> = q.vertices.iter().map(|v| a.dim.get(v) as usize).collect();
    let bn: Vec<usize> = q.vertices.iter().map(|v| b.dim.get(v) as usize).collect();

    // Embed `a` in the combined universe (its slots keep their names) and
    // `b` with slots shifted past those of `a` at each vertex.
    let a_ext = a.poly().extend_to(&u)?;
    let b_ext = {
        let bu = b.universe();
        let mut map = Vec::with_capacity(bu.arity());
        for v in bu.vars() {
            let j = match v.role {
                crate::universe::VarRole::Parameter => u.index_of(&v.name),
                crate::universe::VarRole::Alphabet { vertex, slot } => {
                    u.alphabet_index(vertex, slot + an[vertex])
                }
            }
            .ok_or_else(|| {
                Error::UniverseMismatch(format!("cannot embed variable {}", v.name))
            })?;
            map.push(j);
        }
        b.poly().map_variables(&u, &map)
    }?;
    let base = a_ext.mul(&b_ext)?;

    let slots: Vec<Vec<usize>> = (0..nv).map(|vi| u.vertex_slots(vi)).collect();
    let totals: Vec<usize> = (0..nv).map(|vi| an[vi] + bn[vi]).collect();

    // Per-vertex shuffles: the positions occupied by the first factor.
    let per_vertex: Vec<Vec<Vec<usize>>> = (0..nv)
        .map(|vi| (0..totals[vi]).combinations(an[vi]).collect())
        .collect();

    let arity = u.arity();
    let dbg = std::env::var("COHA_MUL_TRACE").is_ok();
    let t0 = std::time::Instant::now();

    // Build the numerator of the identity shuffle (factor `a` occupying the
    // first slots at each vertex) once: the base product, the kernel
    // numerators between every `a`-slot and every `b`-slot over all ordered
    // vertex pairs, and the denominator factors of same-vertex pairs that are
    // not split between the factors (those contribute no pole and are
    // multiplied back in to stay over the common denominator). Every other
    // shuffle's numerator is a relabeling of this one, so it is obtained by a
    // variable permutation instead of a fresh product.
    let mut kfacs: Vec<MPoly> = Vec::new();
    for i in 0..nv {
        for j in 0..nv {
            for ka in 0..an[i] {
                for kb in 0..bn[j] {
                    let (num, _) =
                        pair_kernel(flavor, &q, &u, i, j, slots[i][ka], slots[j][an[j] + kb])?;
                    kfacs.push(num);
                }
            }
        }
    }
    for vi in 0..nv {
        for x in 0..an[vi] {
            for y in x + 1..an[vi] {
                kfacs.push(pole_factor(&u, slots[vi][x], slots[vi][y])?);
            }
        }
        for x in an[vi]..totals[vi] {
            for y in x + 1..totals[vi] {
                kfacs.push(pole_factor(&u, slots[vi][x], slots[vi][y])?);
            }
        }
    }
    // Multiply the kernel factors together while the pending product against
    // the base stays small; once the cross product would be large, fold the
    // accumulated factor into the base instead, so intermediates track the
    // true product size rather than the full kernel expansion.
    const CROSS_LIMIT: usize = 1 << 23;
    let mut combined = base;
    let mut kfac = MPoly::one(u.clone());
    for f in &kfacs {
        kfac = kfac.mul(f)?;
        if kfac.num_terms() * combined.num_terms() > CROSS_LIMIT {
            combined = combined.mul(&kfac)?;
            kfac = MPoly::one(u.clone());
        }
    }
    let combined = combined.mul(&kfac)?;
    if dbg {
        eprintln!(
            "[mul] combined {} terms in {:?}",
            combined.num_terms(),
            t0.elapsed()
        );
    }

    let mut total = MPoly::zero(u.clone());
    for choice in per_vertex.iter().map(|cs| cs.iter()).multi_cartesian_product() {
        let a_slots: Vec<&Vec<usize>> = choice;
        let b_slots: Vec<Vec<usize>> = (0..nv)
            .map(|vi| {
                (0..totals[vi])
                    .filter(|p| !a_slots[vi].contains(p))
                    .collect()
            })
            .collect();

        // Relabel: the k-th slot of factor `a` at vertex vi becomes the
        // chosen position a_slots[vi][k], and likewise for `b`. The chosen
        // positions are increasing within each factor, so the relabeling
        // never reverses a same-factor denominator factor; only split pairs
        // whose pole gets reoriented against the common denominator flip the
        // sign.
        let mut perm: Vec<usize> = (0..arity).collect();
        let mut sign = 1i32;
        for vi in 0..nv {
            for (k, &p) in a_slots[vi].iter().enumerate() {
                perm[slots[vi][k]] = slots[vi][p];
            }
            for (k, &p) in b_slots[vi].iter().enumerate() {
                perm[slots[vi][an[vi] + k]] = slots[vi][p];
            }
            for &sa in a_slots[vi] {
                for &sb in &b_slots[vi] {
                    if sa > sb {
                        sign = -sign;
                    }
                }
            }
        }
        let mut term = combined.permute_vars(&perm);
        if sign < 0 {
            term = term.neg();
        }
        total = total.add(&term)?;
    }
    if dbg {
        eprintln!(
            "[mul] loop {:?}, total {} terms",
            t0.elapsed(),
            total.num_terms()
        );
    }

    // Divide the common denominator back out one binomial root factor at a
    // time — each (x_a - x_b) is prime, so divisibility by the product is
    // equivalent, and two-term divisors keep the long division cheap.
    let tdv = std::time::Instant::now();
    let mut poly = total;
    for vi in 0..nv {
        for x in 0..totals[vi] {
            for y in x + 1..totals[vi] {
                poly = poly
                    .div_exact(&pole_factor(&u, slots[vi][x], slots[vi][y])?)
                    .ok_or_else(|| {
                        Error::PoleNotCancelled(
                            "shuffle numerator not divisible by the root factors".into(),
                        )
                    })?;
            }
        }
    }
    if dbg {
        eprintln!("[mul] div {:?}, quotient {} terms", tdv.elapsed(), poly.num_terms());
    }
    ShuffleElement::new(q, dim, flavor, poly)
}

/// Symmetrization against the full pairwise kernel at a single vertex:
/// `Sym[f * prod_{a<b} zeta(x_a, x_b)]`, computed by antisymmetrizing the
/// cleared numerator and dividing exactly by `prod_{a<b} (x_a - x_b)`.
///
/// `f` must live in the universe of `dim` concentrated at `vertex`; the
/// result is a (Laurent) polynomial in the same universe.
pub fn sym_kernel_single_vertex(
    f: &MPoly,
    flavor: crate::universe::Flavor,
    q: &crate::quiver::Quiver,
    vertex: usize,
) -> Result<MPoly> {
    let u = f.universe().clone();
    let slots = u.vertex_slots(vertex);
    let n = slots.len();
    let mut pnum = MPoly::one(u.clone());
    let mut delta_factors = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let (num, pole) = pair_kernel(flavor, q, &u, vertex, vertex, slots[a], slots[b])?;
            pnum = pnum.mul(&num)?;
            if let Some(p) = pole {
                delta_factors.push(p);
            }
        }
    }
    let cleared = f.mul(&pnum)?;
    let arity = u.arity();
    let mut total = MPoly::zero(u.clone());
    for (sigma, sgn) in permutations_with_sign(n) {
        let mut perm: Vec<usize> = (0..arity).collect();
        for (k, &sk) in sigma.iter().enumerate() {
            perm[slots[k]] = slots[sk];
        }
        let mut t = cleared.permute_vars(&perm);
        if sgn < 0 {
            t = t.neg();
        }
        total = total.add(&t)?;
    }
    // Divide factor by factor: each root factor is prime and has two terms.
    for p in &delta_factors {
        total = total.div_exact(p).ok_or_else(|| {
            Error::PoleNotCancelled(
                "antisymmetrized numerator not divisible by root factors".into(),
            )
        })?;
    }
    Ok(total)
}

/// `n!` as an exact coefficient.
pub fn factorial(n: usize) -> Coeff {
    let mut acc = Coeff::one();
    for k in 2..=n {
        acc *= Coeff::from(num::BigInt::from(k));
    }
    acc
}
