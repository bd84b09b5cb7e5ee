//! Cohomological shuffle algebra: products, wheel conditions, kappa elements.

mod common;

use num::{BigInt, BigRational};
use std::sync::Arc;

use common::oracle_product;
use shuffle_coha::product::sym_kernel_single_vertex;
use shuffle_coha::{
    kappa, shuffle_mul, wheel_check, wheel_violations, Coeff, DimVector, Flavor, MPoly, Quiver,
    ShuffleElement,
};

fn rat(n: i64) -> Coeff {
    BigRational::from(BigInt::from(n))
}

fn gen(q: &Quiver, d: i32) -> ShuffleElement {
    ShuffleElement::generator(q.clone(), "1", d, Flavor::Cohomological).unwrap()
}

/// On the quiver with no edges, 1 * 1 in dimension 1 + 1 is the constant 2:
/// the two shuffle terms are (z1 - z2 - h)/(z1 - z2) and its mirror.
#[test]
fn q0_one_times_one_is_two() {
    let q = Quiver::loop_quiver(0);
    let a = gen(&q, 0);
    let p = shuffle_mul(&a, &a).unwrap();
    assert_eq!(p.dim.total(), 2);
    assert_eq!(p.poly().as_constant(), Some(rat(2)));
}

/// z^1 * z^0 = z1 + z2 - h and z^0 * z^1 = z1 + z2 + h on the edgeless
/// quiver (hand expansion over the common denominator).
#[test]
fn q0_degree_one_products() {
    let q = Quiver::loop_quiver(0);
    let z1 = gen(&q, 1);
    let z0 = gen(&q, 0);
    let u = shuffle_mul(&z1, &z0).unwrap();
    let univ = u.universe().clone();
    let h = MPoly::var(univ.clone(), univ.index_of("h").unwrap());
    let za = MPoly::var(univ.clone(), univ.index_of("z1_1").unwrap());
    let zb = MPoly::var(univ.clone(), univ.index_of("z1_2").unwrap());
    let sum = za.add(&zb).unwrap();
    assert_eq!(u.poly(), &sum.sub(&h).unwrap());
    let v = shuffle_mul(&z0, &z1).unwrap();
    assert_eq!(v.poly(), &sum.add(&h).unwrap());
}

/// The dimension-0 element with polynomial 1 is a two-sided unit.
#[test]
fn unit_is_two_sided_identity() {
    for g in [0usize, 1, 2] {
        let q = Quiver::loop_quiver(g);
        let e = ShuffleElement::unit(q.clone(), Flavor::Cohomological).unwrap();
        let a = kappa(&q, "1", 2, 1).unwrap();
        assert_eq!(shuffle_mul(&a, &e).unwrap(), a);
        assert_eq!(shuffle_mul(&e, &a).unwrap(), a);
    }
}

/// z^0 * z^0 on the one-loop quiver agrees with the brute-force
/// full-symmetrization oracle.
#[test]
fn q1_product_matches_full_sym_oracle() {
    let q = Quiver::loop_quiver(1);
    let a = gen(&q, 0);
    let b = gen(&q, 1);
    for (x, y) in [(&a, &a), (&a, &b), (&b, &a), (&b, &b)] {
        let fast = shuffle_mul(x, y).unwrap();
        let oracle = oracle_product(x, y).to_mpoly().expect("oracle is polynomial");
        assert_eq!(fast.poly(), &oracle);
    }
}

/// Products across an A2 quiver (one edge 1 -> 2): the two orders pick up
/// the two asymmetric kernel factors z + u and z + h - u.
#[test]
fn a2_cross_vertex_products() {
    let q = Quiver::new(
        vec!["1".into(), "2".into()],
        vec![("1".into(), "2".into())],
    )
    .unwrap();
    let a = ShuffleElement::generator(q.clone(), "1", 0, Flavor::Cohomological).unwrap();
    let b = ShuffleElement::generator(q.clone(), "2", 0, Flavor::Cohomological).unwrap();

    let ab = shuffle_mul(&a, &b).unwrap();
    let univ = ab.universe().clone();
    let z1 = MPoly::var(univ.clone(), univ.index_of("z1_1").unwrap());
    let z2 = MPoly::var(univ.clone(), univ.index_of("z2_1").unwrap());
    let h = MPoly::var(univ.clone(), univ.index_of("h").unwrap());
    let u1 = MPoly::var(univ.clone(), univ.index_of("u1").unwrap());
    assert_eq!(ab.poly(), &z1.sub(&z2).unwrap().add(&u1).unwrap());

    let ba = shuffle_mul(&b, &a).unwrap();
    assert_eq!(
        ba.poly(),
        &z2.sub(&z1).unwrap().add(&h).unwrap().sub(&u1).unwrap()
    );
}

/// Exact associativity on the one-loop quiver.
#[test]
fn associativity_q1() {
    let q = Quiver::loop_quiver(1);
    let a = gen(&q, 0);
    let b = gen(&q, 1);
    let c = gen(&q, 2);
    let left = shuffle_mul(&shuffle_mul(&a, &b).unwrap(), &c).unwrap();
    let right = shuffle_mul(&a, &shuffle_mul(&b, &c).unwrap()).unwrap();
    assert_eq!(left, right);
}

/// Exact associativity on the A2 quiver with mixed vertices.
#[test]
fn associativity_a2() {
    let q = Quiver::new(
        vec!["1".into(), "2".into()],
        vec![("1".into(), "2".into())],
    )
    .unwrap();
    let a = ShuffleElement::generator(q.clone(), "1", 1, Flavor::Cohomological).unwrap();
    let b = ShuffleElement::generator(q.clone(), "2", 0, Flavor::Cohomological).unwrap();
    let c = ShuffleElement::generator(q.clone(), "1", 0, Flavor::Cohomological).unwrap();
    let left = shuffle_mul(&shuffle_mul(&a, &b).unwrap(), &c).unwrap();
    let right = shuffle_mul(&a, &shuffle_mul(&b, &c).unwrap()).unwrap();
    assert_eq!(left, right);
}

/// Sym[z^e1 z^e2 z^e3 prod zeta] equals the iterated product of
/// single-variable generators (the monomial-expansion identity).
#[test]
fn monomial_expansion_equals_iterated_product() {
    let q = Quiver::loop_quiver(1);
    let iterated = shuffle_mul(&shuffle_mul(&gen(&q, 2), &gen(&q, 1)).unwrap(), &gen(&q, 0))
        .unwrap();
    let univ = iterated.universe().clone();
    let slots = univ.vertex_slots(0);
    let mono = MPoly::monomial(univ.clone(), slots[0], 2)
        .mul(&MPoly::monomial(univ.clone(), slots[1], 1))
        .unwrap();
    let symmed = sym_kernel_single_vertex(&mono, Flavor::Cohomological, &q, 0).unwrap();
    assert_eq!(iterated.poly(), &symmed);
}

/// Joint homogeneity: the product of jointly homogeneous elements is
/// jointly homogeneous of degree deg a + deg b + sum n_i n_j' deg zeta_ij.
#[test]
fn joint_homogeneity_degree_formula() {
    let q = Quiver::loop_quiver(1); // deg zeta_11 = 2
    let a = gen(&q, 2);
    let b = gen(&q, 1);
    let p = shuffle_mul(&a, &b).unwrap();
    assert!(p.poly().is_homogeneous());
    assert_eq!(p.poly().total_degree(), Some(2 + 1 + 2));
}

/// Flavor mismatch is rejected.
#[test]
fn flavor_mismatch_rejected() {
    let q = Quiver::loop_quiver(0);
    let a = gen(&q, 0);
    let b = ShuffleElement::generator(q.clone(), "1", 0, Flavor::KTheoretic).unwrap();
    assert!(matches!(
        shuffle_mul(&a, &b),
        Err(shuffle_coha::Error::FlavorMismatch { .. })
    ));
}

/// kappa_{i,1,d} = z^d prod_e (h - u_e): the n = 1 case is a plain monomial
/// times constants.
#[test]
fn kappa_n1_explicit() {
    let q = Quiver::loop_quiver(2);
    let k = kappa(&q, "1", 1, 3).unwrap();
    let univ = k.universe().clone();
    let h = MPoly::var(univ.clone(), univ.index_of("h").unwrap());
    let u1 = MPoly::var(univ.clone(), univ.index_of("u1").unwrap());
    let u2 = MPoly::var(univ.clone(), univ.index_of("u2").unwrap());
    let z = MPoly::var(univ.clone(), univ.index_of("z1_1").unwrap());
    let expected = z
        .pow(3)
        .unwrap()
        .mul(&h.sub(&u1).unwrap())
        .unwrap()
        .mul(&h.sub(&u2).unwrap())
        .unwrap();
    assert_eq!(k.poly(), &expected);
}

/// kappa_{1,2,1} on the one-loop quiver, written out in full.
#[test]
fn kappa_2_1_explicit_q1() {
    let q = Quiver::loop_quiver(1);
    let k = kappa(&q, "1", 2, 1).unwrap();
    let univ = k.universe().clone();
    let h = MPoly::var(univ.clone(), univ.index_of("h").unwrap());
    let u1 = MPoly::var(univ.clone(), univ.index_of("u1").unwrap());
    let z1 = MPoly::var(univ.clone(), univ.index_of("z1_1").unwrap());
    let z2 = MPoly::var(univ.clone(), univ.index_of("z1_2").unwrap());
    let s = h.sub(&u1).unwrap();
    let expected = z1
        .add(&z2)
        .unwrap()
        .mul(&s.pow(2).unwrap())
        .unwrap()
        .mul(&z1.sub(&z2).unwrap().add(&s).unwrap())
        .unwrap()
        .mul(&z2.sub(&z1).unwrap().add(&s).unwrap())
        .unwrap();
    assert_eq!(k.poly(), &expected);
}

/// With fewer than three slots at a looped vertex there is no applicable
/// wheel triple, so the check passes vacuously.
#[test]
fn wheel_vacuous_below_arity() {
    let q = Quiver::loop_quiver(1);
    for n in [1u32, 2] {
        let dim = DimVector::scaled_unit("1", n);
        let u = shuffle_coha::make_universe(&q, &dim, Flavor::Cohomological).unwrap();
        let e = ShuffleElement::new(q.clone(), dim, Flavor::Cohomological, MPoly::one(u))
            .unwrap();
        assert!(wheel_check(&e).unwrap());
    }
}

/// kappa_{1,3,d} satisfies the wheel conditions; the constant 1 at the same
/// dimension does not, and the violation list is non-empty.
#[test]
fn wheel_kappa_yes_constant_no() {
    let q = Quiver::loop_quiver(1);
    for d in [0u32, 1] {
        let k = kappa(&q, "1", 3, d).unwrap();
        assert!(wheel_check(&k).unwrap(), "kappa_{{1,3,{d}}} fails a wheel");
    }
    let dim = DimVector::scaled_unit("1", 3);
    let u = shuffle_coha::make_universe(&q, &dim, Flavor::Cohomological).unwrap();
    let one = ShuffleElement::new(q.clone(), dim, Flavor::Cohomological, MPoly::one(u)).unwrap();
    let violations = wheel_violations(&one).unwrap();
    assert!(!violations.is_empty());
    assert!(!wheel_check(&one).unwrap());
}

/// Products of wheel-space elements stay in the wheel space.
#[test]
fn wheel_closure_under_product() {
    let q = Quiver::loop_quiver(1);
    // Generators in dimension 1 are vacuously in the wheel space; their
    // triple product lands at the first dimension with actual wheels.
    let p = shuffle_mul(&shuffle_mul(&gen(&q, 1), &gen(&q, 0)).unwrap(), &gen(&q, 0)).unwrap();
    assert!(wheel_check(&p).unwrap());
    // A non-generator factor: kappa at n = 2 times a generator.
    let k = kappa(&q, "1", 2, 1).unwrap();
    let kp = shuffle_mul(&k, &gen(&q, 0)).unwrap();
    assert!(wheel_check(&kp).unwrap());
}

/// The symmetrization helper agrees with the product on a random-ish
/// non-monomial input, and detects a symmetric kernel element: on the
/// edgeless quiver, (z1 - z2 + h) s(z1, z2) symmetrizes to zero when s is
/// symmetric, because the two permutation terms cancel.
#[test]
fn sym_kernel_cancellation_q0() {
    let q = Quiver::loop_quiver(0);
    let dim = DimVector::scaled_unit("1", 2);
    let u = shuffle_coha::make_universe(&q, &dim, Flavor::Cohomological).unwrap();
    let slots = u.vertex_slots(0);
    let z1 = MPoly::var(u.clone(), slots[0]);
    let z2 = MPoly::var(u.clone(), slots[1]);
    let h = MPoly::var(u.clone(), u.index_of("h").unwrap());
    let s = z1.mul(&z2).unwrap().add(&z1.add(&z2).unwrap()).unwrap();
    let f = z1.sub(&z2).unwrap().add(&h).unwrap().mul(&s).unwrap();
    let symmed = sym_kernel_single_vertex(&f, Flavor::Cohomological, &q, 0).unwrap();
    assert!(symmed.is_zero());
}

/// The element constructor rejects non-symmetric polynomials.
#[test]
fn constructor_rejects_asymmetric() {
    let q = Quiver::loop_quiver(0);
    let dim = DimVector::scaled_unit("1", 2);
    let u: Arc<_> = shuffle_coha::make_universe(&q, &dim, Flavor::Cohomological).unwrap();
    let z1 = MPoly::var(u.clone(), u.vertex_slots(0)[0]);
    assert!(matches!(
        ShuffleElement::new(q, dim, Flavor::Cohomological, z1),
        Err(shuffle_coha::Error::NotSymmetric)
    ));
}
