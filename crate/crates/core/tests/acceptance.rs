//! Acceptance gate: eight exact-identity criteria at desk scale, one
//! pass/fail line each. Randomized instances use a fixed seed so runs are
//! reproducible.

use std::sync::Arc;

use num::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shuffle_coha::solver::sym_kernel_ratfn;
use shuffle_coha::{
    degenerate, graded_dimension_census, k_express_in_generators, k_wheel_check, kappa,
    kappa_tilde, make_universe, shuffle_mul, sym, verify_theorem, wheel_check, Coeff, DimVector,
    Error, Flavor, MPoly, Quiver, RatFn, ShuffleElement, SolverLimits, VarUniverse, VerifyPath,
};

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_cafe)
}

fn quivers() -> Vec<(&'static str, Quiver)> {
    vec![
        ("Q_0", Quiver::loop_quiver(0)),
        ("Q_1", Quiver::loop_quiver(1)),
        ("Q_2", Quiver::loop_quiver(2)),
        (
            "A_2",
            Quiver::new(vec!["1".into(), "2".into()], vec![("1".into(), "2".into())]).unwrap(),
        ),
    ]
}

/// Random nonzero polynomial with per-variable exponents bounded by
/// `max_exp` and per-term total (absolute) degree at most `max_total`.
fn random_poly(
    u: &Arc<VarUniverse>,
    rng: &mut ChaCha8Rng,
    max_terms: usize,
    max_exp: i32,
    max_total: i32,
) -> MPoly {
    loop {
        let k = rng.gen_range(1..=max_terms);
        let mut terms = Vec::new();
        for _ in 0..k {
            let e: Vec<i32> = loop {
                let e: Vec<i32> = (0..u.arity())
                    .map(|i| {
                        if u.is_laurent(i) {
                            rng.gen_range(-max_exp..=max_exp)
                        } else {
                            rng.gen_range(0..=max_exp)
                        }
                    })
                    .collect();
                if e.iter().map(|x| x.abs()).sum::<i32>() <= max_total {
                    break e;
                }
            };
            let c = rng.gen_range(-9..=9i64);
            if c != 0 {
                terms.push((e, Coeff::from(BigInt::from(c))));
            }
        }
        let p = MPoly::from_terms(u.clone(), terms).unwrap();
        if !p.is_zero() {
            return p;
        }
    }
}

/// Random nonzero element: a random polynomial symmetrized per vertex.
fn random_element(
    q: &Quiver,
    dim: &DimVector,
    flavor: Flavor,
    rng: &mut ChaCha8Rng,
    light: bool,
) -> ShuffleElement {
    let u = make_universe(q, dim, flavor).unwrap();
    loop {
        // Kept light: kernel products over 4 slots blow up quickly in the
        // K-theoretic flavor, and the criteria here test cancellation and
        // associativity, not bulk. `light` drops to a single symmetrized
        // monomial for the heaviest (two-loop, four-slot) instances.
        let p = if light {
            random_poly(&u, rng, 1, 1, 2)
        } else {
            random_poly(&u, rng, 2, 1, 3)
        };
        let s = sym(&RatFn::from_mpoly(p), &u.blocks())
            .unwrap()
            .to_mpoly()
            .unwrap();
        if !s.is_zero() {
            return ShuffleElement::new(q.clone(), dim.clone(), flavor, s).unwrap();
        }
    }
}

/// All nonzero dimension vectors of the quiver with the given total.
fn dims_of_total(q: &Quiver, total: u32) -> Vec<DimVector> {
    fn rec(vs: &[String], left: u32, cur: &mut DimVector, out: &mut Vec<DimVector>) {
        match vs {
            [] => {
                if !cur.is_zero() {
                    out.push(cur.clone());
                }
            }
            [v, rest @ ..] => {
                for k in 0..=left {
                    if k > 0 {
                        cur.0.insert(v.clone(), k);
                    } else {
                        cur.0.remove(v);
                    }
                    rec(rest, left - k, cur, out);
                }
                cur.0.remove(v);
            }
        }
    }
    let mut out = Vec::new();
    rec(&q.vertices, total, &mut DimVector::zero(), &mut out);
    out
}

/// Criterion 1: ring laws on 200 randomized instances over a 5-variable
/// Laurent universe, exact, plus canonical-form idempotence.
#[test]
fn criterion_1_ring_laws() {
    let q = Quiver::loop_quiver(2);
    let dim = DimVector::scaled_unit("1", 2);
    let u = make_universe(&q, &dim, Flavor::KTheoretic).unwrap();
    assert_eq!(u.arity(), 5);
    let mut rng = rng();
    for _ in 0..200 {
        let a = random_poly(&u, &mut rng, 4, 2, 6);
        let b = random_poly(&u, &mut rng, 4, 2, 6);
        let c = random_poly(&u, &mut rng, 4, 2, 6);
        let add_assoc = a.add(&b).unwrap().add(&c).unwrap() == a.add(&b.add(&c).unwrap()).unwrap();
        let mul_assoc = a.mul(&b).unwrap().mul(&c).unwrap() == a.mul(&b.mul(&c).unwrap()).unwrap();
        let dist = a.mul(&b.add(&c).unwrap()).unwrap()
            == a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        let canon = MPoly::from_terms(u.clone(), a.terms().map(|(e, c)| (e.clone(), c.clone())))
            .unwrap()
            == a;
        assert!(add_assoc && mul_assoc && dist && canon, "ring law failed");
    }
    println!("criterion 1: PASS — ring laws and canonical idempotence on 200 random instances");
}

/// Criterion 2: pole cancellation and symmetry for both products over
/// {Q_0, Q_1, Q_2, A_2} x (total slots <= 4), plus the identity oracles
/// 1 * 1 = 2 and its K-theoretic analogue 1 * 1 = 1 + q^{-1}.
#[test]
fn criterion_2_pole_cancellation_and_symmetry() {
    let mut rng = rng();
    for (_, q) in quivers() {
        let mut splits = Vec::new();
        for ta in 1..=3u32 {
            for tb in 1..=(4 - ta) {
                for da in dims_of_total(&q, ta) {
                    for db in dims_of_total(&q, tb) {
                        splits.push((da.clone(), db));
                    }
                }
            }
        }
        for flavor in [Flavor::Cohomological, Flavor::KTheoretic] {
            for (da, db) in &splits {
                let total: u32 = q.vertices.iter().map(|v| da.get(v) + db.get(v)).sum();
                let light = total >= 4 && q.edges.len() >= 2;
                let a = random_element(&q, da, flavor, &mut rng, light);
                let b = random_element(&q, db, flavor, &mut rng, light);
                // shuffle_mul only returns once the kernel poles cancelled
                // into a genuine (Laurent) polynomial.
                let p = shuffle_mul(&a, &b).unwrap();
                assert!(
                    p.poly().is_symmetric(&p.universe().blocks()),
                    "product not symmetric"
                );
            }
        }
    }

    // 1 * 1 = 2 on Q_0.
    let q0 = Quiver::loop_quiver(0);
    let one = ShuffleElement::generator(q0.clone(), "1", 0, Flavor::Cohomological).unwrap();
    let two = shuffle_mul(&one, &one).unwrap();
    assert_eq!(
        two.poly().as_constant(),
        Some(num::BigRational::from(BigInt::from(2)))
    );

    // K-theoretic 1 * 1 = 1 + q^{-1} on Q_0.
    let k_one = ShuffleElement::generator(q0.clone(), "1", 0, Flavor::KTheoretic).unwrap();
    let k_two = shuffle_mul(&k_one, &k_one).unwrap();
    let u = k_two.universe().clone();
    let qi = u.index_of("q").unwrap();
    let expect = MPoly::one(u.clone())
        .add(&MPoly::monomial(u.clone(), qi, -1))
        .unwrap();
    assert_eq!(*k_two.poly(), expect);

    println!("criterion 2: PASS — pole cancellation, symmetry, and both identity oracles");
}

/// Criterion 3: associativity of both products on 50 random triples per
/// quiver (total slots <= 4), exact equality.
#[test]
fn criterion_3_associativity() {
    let mut rng = rng();
    for (_, q) in quivers() {
        for i in 0..50 {
            let flavor = if i % 2 == 0 {
                Flavor::Cohomological
            } else {
                Flavor::KTheoretic
            };
            // Random split of at most 4 slots into three nonzero totals.
            let ta = rng.gen_range(1..=2u32);
            let tb = rng.gen_range(1..=(3 - ta).max(1));
            let tc = rng.gen_range(1..=(4 - ta - tb).max(1));
            let pick = |total: u32, rng: &mut ChaCha8Rng| {
                let ds = dims_of_total(&q, total);
                ds[rng.gen_range(0..ds.len())].clone()
            };
            let light = ta + tb + tc >= 4 && q.edges.len() >= 2;
            let a = random_element(&q, &pick(ta, &mut rng), flavor, &mut rng, light);
            let b = random_element(&q, &pick(tb, &mut rng), flavor, &mut rng, light);
            let c = random_element(&q, &pick(tc, &mut rng), flavor, &mut rng, light);
            let left = shuffle_mul(&shuffle_mul(&a, &b).unwrap(), &c).unwrap();
            let right = shuffle_mul(&a, &shuffle_mul(&b, &c).unwrap()).unwrap();
            assert_eq!(left, right, "associativity failed");
        }
    }
    println!("criterion 3: PASS — associativity of both products, 50 random triples per quiver");
}

/// Criterion 4: the wheel suite. kappa and kappa~ pass their wheel checks
/// over the full grid, and the wheel space is closed under the product on
/// 50 random wheel-satisfying pairs.
#[test]
fn criterion_4_wheel_suite() {
    for g in 0..=2usize {
        let q = Quiver::loop_quiver(g);
        for n in 1..=4u32 {
            for d in 0..=3u32 {
                let k = kappa(&q, "1", n, d).unwrap();
                assert!(wheel_check(&k).unwrap(), "wheel fails g={g} n={n} d={d}");
                let kt = kappa_tilde(&q, "1", n, d).unwrap();
                assert!(
                    k_wheel_check(&kt).unwrap(),
                    "K wheel fails g={g} n={n} d={d}"
                );
            }
        }
    }

    // Closure: products of wheel-satisfying elements satisfy the wheel
    // conditions. kappa elements provide a randomized pool of such pairs.
    let mut rng = rng();
    for _ in 0..50 {
        let g = rng.gen_range(0..=2usize);
        let q = Quiver::loop_quiver(g);
        let cap = if g == 2 { 3 } else { 4 };
        let na = rng.gen_range(1..cap);
        let nb = rng.gen_range(1..=(cap - na));
        let (da, db) = (rng.gen_range(0..=2u32), rng.gen_range(0..=2u32));
        let a = kappa(&q, "1", na, da).unwrap();
        let b = kappa(&q, "1", nb, db).unwrap();
        assert!(wheel_check(&a).unwrap() && wheel_check(&b).unwrap());
        let p = shuffle_mul(&a, &b).unwrap();
        assert!(
            wheel_check(&p).unwrap(),
            "closure fails g={g} na={na} nb={nb} da={da} db={db}"
        );
    }
    println!("criterion 4: PASS — wheel checks on the kappa grid and closure on 50 random pairs");
}

/// Criterion 5: kappa~_{1,n,d} is expressible in single-variable generators
/// with exact round trip for g in {0,1,2}, n in {2,3}, d in {0,1,2}; at
/// n = 3 the default resource cap may restrict to d <= 1, and any such
/// restriction is reported explicitly.
#[test]
fn criterion_5_k_generation() {
    let mut restricted = Vec::new();
    for g in 0..=2usize {
        let q = Quiver::loop_quiver(g);
        for n in [2u32, 3] {
            for d in 0..=2u32 {
                let kt = kappa_tilde(&q, "1", n, d).unwrap();
                match k_express_in_generators(&kt) {
                    Ok(pre) => {
                        let vi = q.vertex_index("1").unwrap();
                        let rt = sym_kernel_ratfn(&pre.f, Flavor::KTheoretic, &q, vi).unwrap();
                        assert_eq!(
                            rt,
                            RatFn::from_mpoly(kt.poly().clone()),
                            "round trip failed g={g} n={n} d={d}"
                        );
                    }
                    Err(Error::NotFoundWithinBounds(_)) | Err(Error::ResourceCap(_))
                        if n == 3 && d == 2 =>
                    {
                        restricted.push(format!("g={g} n=3 d=2"));
                    }
                    Err(e) => panic!("unexpected failure g={g} n={n} d={d}: {e}"),
                }
            }
        }
    }
    if restricted.is_empty() {
        println!("criterion 5: PASS — exact K round trips on the full grid (no restriction)");
    } else {
        println!(
            "criterion 5: PASS — exact K round trips; restricted under default cap: {}",
            restricted.join(", ")
        );
    }
}

/// Criterion 6: the theorem pipeline on both paths in the new regime g = 2.
#[test]
fn criterion_6_main_theorem() {
    for (n, dmax) in [(2u32, 2u32), (3, 1)] {
        for d in 0..=dmax {
            let r = verify_theorem(2, n, d, VerifyPath::Both, SolverLimits::default()).unwrap();
            assert_eq!(
                r["verified"],
                serde_json::json!(true),
                "verify_theorem failed at n={n} d={d}: {r}"
            );
        }
    }
    println!("criterion 6: PASS — both pipelines verify kappa_{{1,n,d}} for g=2 on the grid");
}

/// Criterion 7: degeneration fidelity. degenerate(kappa~) = kappa over the
/// criterion-4 grid, and leading-term compatibility holds on 50 random
/// pairs including a constructed cancellation case.
#[test]
fn criterion_7_degeneration() {
    for g in 0..=2usize {
        let q = Quiver::loop_quiver(g);
        for n in 1..=4u32 {
            for d in 0..=3u32 {
                if g == 2 && n == 4 {
                    // The expanded polynomials here have ~10^6 terms, so the
                    // identity is checked factorwise: lowest shifted parts
                    // are multiplicative (an exact ring fact, property-tested
                    // in the exact-arith suite), so matching each factor of
                    // kappa~ against the corresponding factor of kappa proves
                    // degenerate(kappa~) = kappa without expanding either
                    // product.
                    let kf = shuffle_coha::kappa::kappa_factors(&q, "1", n, d).unwrap();
                    let ktf = shuffle_coha::kappa::kappa_tilde_factors(&q, "1", n, d).unwrap();
                    let dim = DimVector::scaled_unit("1", n);
                    let target = make_universe(&q, &dim, Flavor::Cohomological).unwrap();
                    assert_eq!(kf.len(), ktf.len());
                    for (f, ft) in kf.iter().zip(&ktf) {
                        assert_eq!(
                            &shuffle_coha::degeneration::lowest_shifted_part(ft, &target).unwrap(),
                            f,
                            "factorwise degeneration mismatch g={g} n={n} d={d}"
                        );
                    }
                    continue;
                }
                let kt = kappa_tilde(&q, "1", n, d).unwrap();
                let k = kappa(&q, "1", n, d).unwrap();
                assert_eq!(
                    degenerate(&kt).unwrap().poly(),
                    k.poly(),
                    "degeneration mismatch g={g} n={n} d={d}"
                );
            }
        }
    }

    // Leading-term compatibility on random small K-elements.
    let mut rng = rng();
    let mut nonzero_cases = 0;
    for i in 0..50 {
        let g = rng.gen_range(0..=1usize);
        let q = Quiver::loop_quiver(g);
        let da = rng.gen_range(-2..=2i32);
        let db = rng.gen_range(-2..=2i32);
        let (a, b) = if i % 5 == 0 {
            let dim = DimVector::scaled_unit("1", 1);
            (
                random_element(&q, &dim, Flavor::KTheoretic, &mut rng, false),
                random_element(&q, &dim, Flavor::KTheoretic, &mut rng, false),
            )
        } else {
            (
                ShuffleElement::generator(q.clone(), "1", da, Flavor::KTheoretic).unwrap(),
                ShuffleElement::generator(q.clone(), "1", db, Flavor::KTheoretic).unwrap(),
            )
        };
        let ab = shuffle_mul(&a, &b).unwrap();
        let prod = shuffle_mul(&degenerate(&a).unwrap(), &degenerate(&b).unwrap()).unwrap();
        if prod.is_zero() {
            continue;
        }
        nonzero_cases += 1;
        assert_eq!(
            degenerate(&ab).unwrap().poly(),
            prod.poly(),
            "leading-term compatibility failed at pair {i}"
        );
    }
    assert!(nonzero_cases >= 25, "too few nonzero compatibility cases");

    // Constructed cancellation case: the candidate lowest part of the
    // shifted preimage symmetrizes to zero and the error branch fires.
    let q = Quiver::loop_quiver(0);
    let dim = DimVector::scaled_unit("1", 2);
    let u = make_universe(&q, &dim, Flavor::KTheoretic).unwrap();
    let w1 = MPoly::var(u.clone(), u.index_of("w1_1").unwrap());
    let w2 = MPoly::var(u.clone(), u.index_of("w1_2").unwrap());
    let qq = MPoly::var(u.clone(), u.index_of("q").unwrap());
    let f = w1.mul(&qq).unwrap().sub(&w2).unwrap().mul(&w2).unwrap();
    let target_poly =
        shuffle_coha::product::sym_kernel_single_vertex(&f, Flavor::KTheoretic, &q, 0).unwrap();
    let target =
        ShuffleElement::new(q.clone(), dim.clone(), Flavor::KTheoretic, target_poly).unwrap();
    let p = shuffle_coha::LaurentPreimage {
        dim,
        f: RatFn::from_mpoly(f),
        window: vec![(0, 0); u.arity()],
    };
    assert!(matches!(
        shuffle_coha::degenerate_preimage(&p, &target),
        Err(Error::LowestPartCancelled(_))
    ));

    println!(
        "criterion 7: PASS — kappa degeneration grid, leading-term compatibility \
         ({nonzero_cases} nonzero pairs), and the cancellation branch"
    );
}

/// Criterion 8: census sanity. subalg_dim <= wheel_dim on every tested row;
/// equality on Q_1, n = 2, degrees <= 4.
#[test]
fn criterion_8_census() {
    let lim = SolverLimits::default();
    for g in 0..=2usize {
        let q = Quiver::loop_quiver(g);
        for n in 1..=2u32 {
            let dmax = if g == 2 { 2 } else { 3 };
            for degree in 0..=dmax {
                let dim = DimVector::scaled_unit("1", n);
                let (wheel, sub) = graded_dimension_census(&q, &dim, degree, lim).unwrap();
                assert!(
                    sub <= wheel,
                    "containment violated at g={g} n={n} degree={degree}"
                );
            }
        }
    }
    for degree in 0..=4i32 {
        let q = Quiver::loop_quiver(1);
        let dim = DimVector::scaled_unit("1", 2);
        let (wheel, sub) = graded_dimension_census(&q, &dim, degree, lim).unwrap();
        assert_eq!(
            wheel, sub,
            "expected equality on Q_1 n=2 at degree {degree}"
        );
    }
    println!("criterion 8: PASS — containment on all rows; equality on Q_1, n=2, degrees <= 4");
}
