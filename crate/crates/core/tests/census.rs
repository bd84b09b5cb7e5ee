//! Graded dimension census: the subalgebra dimension never exceeds the
//! wheel-space dimension, with equality on the conjecturally tight cases.

use shuffle_coha::{
    graded_dimension_census, DimVector, Error, Quiver, SolverLimits,
};

fn census(g: usize, n: u32, degree: i32) -> (usize, usize) {
    let q = Quiver::loop_quiver(g);
    let dim = DimVector::scaled_unit("1", n);
    graded_dimension_census(&q, &dim, degree, SolverLimits::default()).unwrap()
}

/// n = 1: no wheel conditions and every monomial is a generator, so both
/// numbers are 1 in every degree.
#[test]
fn n1_census_is_one_one() {
    for g in 0..=2usize {
        for degree in 0..=4 {
            assert_eq!(census(g, 1, degree), (1, 1), "g={g} degree={degree}");
        }
    }
}

/// Containment forces subalg <= wheel on every row.
#[test]
fn containment_inequality() {
    for (g, n, dmax) in [(0usize, 2u32, 4i32), (1, 2, 4), (2, 2, 3), (1, 3, 3)] {
        for degree in 0..=dmax {
            let (wheel, sub) = census(g, n, degree);
            assert!(
                sub <= wheel,
                "containment violated at g={g} n={n} degree={degree}: {sub} > {wheel}"
            );
        }
    }
}

/// The conjecturally tight case: one loop, dimension 2, small degrees.
/// Wheels are vacuous below three slots, so the wheel numbers are partition
/// counts; the subalgebra matches them over the parameter fraction field.
#[test]
fn q1_n2_equality() {
    for degree in 0..=4 {
        let (wheel, sub) = census(1, 2, degree);
        assert_eq!(
            wheel, sub,
            "census inequality at degree {degree}: wheel={wheel} subalg={sub}"
        );
    }
}

/// Degree-graded wheel numbers for Q_1 at n = 2 are partition counts with
/// at most two parts (wheels vacuous).
#[test]
fn q1_n2_wheel_numbers_are_partition_counts() {
    let expect = [1usize, 1, 2, 2, 3];
    for (degree, &e) in expect.iter().enumerate() {
        let (wheel, _) = census(1, 2, degree as i32);
        assert_eq!(wheel, e, "degree {degree}");
    }
}

/// Multi-vertex dimension vectors are out of contract.
#[test]
fn multi_vertex_rejected() {
    let q = Quiver::new(
        vec!["1".into(), "2".into()],
        vec![("1".into(), "2".into())],
    )
    .unwrap();
    let mut dim = DimVector::zero();
    dim.0.insert("1".into(), 1);
    dim.0.insert("2".into(), 1);
    assert!(matches!(
        graded_dimension_census(&q, &dim, 2, SolverLimits::default()),
        Err(Error::MultiVertexTarget)
    ));
}

/// A tiny resource cap is reported as such rather than silently truncated.
#[test]
fn resource_cap_reported() {
    let q = Quiver::loop_quiver(1);
    let dim = DimVector::scaled_unit("1", 2);
    let lim = SolverLimits {
        max_unknowns: 1,
        ..Default::default()
    };
    assert!(matches!(
        graded_dimension_census(&q, &dim, 4, lim),
        Err(Error::ResourceCap(_))
    ));
}
