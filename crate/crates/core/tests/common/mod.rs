//! Shared helpers for integration tests: a brute-force shuffle-product
//! oracle that symmetrizes over the full permutation group instead of
//! enumerating shuffle cosets.

use std::sync::Arc;

use shuffle_coha::product::factorial;
use shuffle_coha::{
    sym, zeta, zeta_tilde, Coeff, Flavor, MPoly, RatFn, ShuffleElement, VarRole, VarUniverse,
};

/// Embed `b`'s polynomial into the combined universe with its slots shifted
/// past those of `a` at every vertex.
fn embed_second(
    b: &ShuffleElement,
    an: &[usize],
    u: &Arc<VarUniverse>,
) -> MPoly {
    let bu = b.universe();
    let map: Vec<usize> = bu
        .vars()
        .iter()
        .map(|v| match v.role {
            VarRole::Parameter => u.index_of(&v.name).unwrap(),
            VarRole::Alphabet { vertex, slot } => {
                u.alphabet_index(vertex, slot + an[vertex]).unwrap()
            }
        })
        .collect();
    b.poly().map_variables(u, &map).unwrap()
}

/// `Sym[a * b * prod zeta] / (n! * n'!)`, computed with full symmetrization
/// and rational-function arithmetic throughout. Independent of the coset
/// enumeration used by `shuffle_mul`.
pub fn oracle_product(a: &ShuffleElement, b: &ShuffleElement) -> RatFn {
    assert_eq!(a.flavor, b.flavor);
    assert_eq!(a.quiver, b.quiver);
    let q = &a.quiver;
    let nv = q.num_vertices();
    let dim = a.dim.add(&b.dim);
    let u = shuffle_coha::make_universe(q, &dim, a.flavor).unwrap();
    let an: Vec<usize> = q.vertices.iter().map(|v| a.dim.get(v) as usize).collect();
    let bn: Vec<usize> = q.vertices.iter().map(|v| b.dim.get(v) as usize).collect();

    let a_ext = a.poly().extend_to(&u).unwrap();
    let b_ext = embed_second(b, &an, &u);
    let mut full = RatFn::from_mpoly(a_ext.mul(&b_ext).unwrap());

    for i in 0..nv {
        let i_slots = u.vertex_slots(i);
        for j in 0..nv {
            let j_slots = u.vertex_slots(j);
            for sa in 0..an[i] {
                for sb in an[j]..an[j] + bn[j] {
                    let x = match a.flavor {
                        Flavor::Cohomological => MPoly::var(u.clone(), i_slots[sa])
                            .sub(&MPoly::var(u.clone(), j_slots[sb]))
                            .unwrap(),
                        Flavor::KTheoretic => MPoly::monomial(u.clone(), i_slots[sa], 1)
                            .mul(&MPoly::monomial(u.clone(), j_slots[sb], -1))
                            .unwrap(),
                    };
                    let z = match a.flavor {
                        Flavor::Cohomological => zeta(q, i, j, &x).unwrap(),
                        Flavor::KTheoretic => zeta_tilde(q, i, j, &x).unwrap(),
                    };
                    full = full.mul(&z).unwrap();
                }
            }
        }
    }

    let symmed = sym(&full, &u.blocks()).unwrap();
    let mut norm = Coeff::from(num::BigInt::from(1));
    for vi in 0..nv {
        norm *= factorial(an[vi]) * factorial(bn[vi]);
    }
    symmed.scale(&(Coeff::from(num::BigInt::from(1)) / norm)).unwrap()
}
