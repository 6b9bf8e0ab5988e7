mod common;

use common::boolean_oracle;
use pfc_core::cone::{cone_contains, decompose, rank_one_b, separating_functional, ConvexCone};
use pfc_core::jentzsch::{discretize, schaefer_check, Kernel, QuadratureRule};
use pfc_core::matrix::entrywise_cmp;
use pfc_core::nalgebra::DMatrix;
use pfc_core::perron::{
    collatz_wielandt, improve_bound, perron_fixed_point, DEFAULT_MAX_ITER, DEFAULT_TOL,
};
use pfc_core::structure::is_irreducible;
use pfc_core::{EntrywiseOrder, NonnegativeMatrix, OrderedVector};
use proptest::prelude::*;

fn entry() -> impl Strategy<Value = f64> {
    prop_oneof![1 => Just(0.0), 3 => 0.0..1.0f64]
}

fn matrix(max_n: usize) -> impl Strategy<Value = NonnegativeMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(entry(), n * n)
            .prop_map(move |e| NonnegativeMatrix::new(n, e).unwrap())
    })
}

/// `A1 <= A2` built as `A2 = A1 + D` with `D >= 0`.
fn ordered_pair(max_n: usize) -> impl Strategy<Value = (NonnegativeMatrix, NonnegativeMatrix)> {
    (1..=max_n).prop_flat_map(|n| {
        (
            prop::collection::vec(entry(), n * n),
            prop::collection::vec(entry(), n * n),
        )
            .prop_map(move |(a, d)| {
                let b = a.iter().zip(&d).map(|(x, y)| x + y).collect();
                (
                    NonnegativeMatrix::new(n, a).unwrap(),
                    NonnegativeMatrix::new(n, b).unwrap(),
                )
            })
    })
}

fn matrix_and_vector(max_n: usize) -> impl Strategy<Value = (NonnegativeMatrix, OrderedVector)> {
    (1..=max_n).prop_flat_map(|n| {
        (
            prop::collection::vec(entry(), n * n),
            prop::collection::vec(0.01..1.0f64, n),
        )
            .prop_map(move |(a, x)| {
                (
                    NonnegativeMatrix::new(n, a).unwrap(),
                    OrderedVector::new(x).unwrap(),
                )
            })
    })
}

fn square_cone() -> ConvexCone {
    let gens = vec![
        vec![1.0, 0.0, 1.0],
        vec![0.0, 1.0, 1.0],
        vec![-1.0, 0.0, 1.0],
        vec![0.0, -1.0, 1.0],
    ];
    let duals = vec![
        vec![1.0, 1.0, 1.0],
        vec![1.0, -1.0, 1.0],
        vec![-1.0, 1.0, 1.0],
        vec![-1.0, -1.0, 1.0],
    ];
    ConvexCone::polyhedral(3, gens, duals).unwrap()
}

fn cones() -> Vec<ConvexCone> {
    vec![
        ConvexCone::orthant(3).unwrap(),
        ConvexCone::lorentz(3, 2).unwrap(),
        ConvexCone::lorentz(3, 0).unwrap(),
        square_cone(),
    ]
}

fn vec3() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0..2.0f64, 3)
}

fn n1(x: &[f64]) -> f64 {
    x.iter().map(|v| v.abs()).sum()
}

fn mirror(order: EntrywiseOrder) -> EntrywiseOrder {
    match order {
        EntrywiseOrder::StrictLt => EntrywiseOrder::StrictGt,
        EntrywiseOrder::StrictGt => EntrywiseOrder::StrictLt,
        EntrywiseOrder::Leq => EntrywiseOrder::Geq,
        EntrywiseOrder::Geq => EntrywiseOrder::Leq,
        o => o,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn entrywise_order_is_antisymmetric(x in prop::collection::vec(-1.0..1.0f64, 1..8), shift in prop::collection::vec(-1.0..1.0f64, 8)) {
        let y: Vec<f64> = x.iter().zip(&shift).map(|(a, b)| a + b).collect();
        let xy = entrywise_cmp(&x, &y).unwrap();
        prop_assert_eq!(entrywise_cmp(&y, &x).unwrap(), mirror(xy));
        prop_assert_eq!(entrywise_cmp(&x, &x).unwrap(), EntrywiseOrder::Eq);
    }

    #[test]
    fn entrywise_order_matches_coordinates(x in prop::collection::vec(-1.0..1.0f64, 1..8), d in prop::collection::vec(0.0..1.0f64, 8)) {
        let y: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + b).collect();
        let o = entrywise_cmp(&x, &y).unwrap();
        prop_assert!(matches!(o, EntrywiseOrder::Eq | EntrywiseOrder::Leq | EntrywiseOrder::StrictLt));
        if x.iter().zip(&y).all(|(a, b)| a < b) {
            prop_assert_eq!(o, EntrywiseOrder::StrictLt);
        }
    }

    #[test]
    fn apply_is_monotone_and_bounded((a, x) in matrix_and_vector(7), d in prop::collection::vec(0.0..1.0f64, 7)) {
        let n = a.dim();
        let y = OrderedVector::new(x.coords().iter().zip(&d[..n]).map(|(p, q)| p + q).collect()).unwrap();
        let ax = a.apply(&x).unwrap();
        let ay = a.apply(&y).unwrap();
        prop_assert!(ax.coords().iter().zip(ay.coords()).all(|(p, q)| p <= q));
        // Entrywise triangle inequality in the induced 1-norm.
        prop_assert!(ax.norm1() <= a.norm1() * x.norm1() * (1.0 + 1e-12));
    }

    #[test]
    fn normalization_has_unit_mass((_, x) in matrix_and_vector(7), c in 0.1..100.0f64) {
        let u = x.normalize_1().unwrap();
        prop_assert!((u.norm1() - 1.0).abs() <= 1e-14);
        let scaled = OrderedVector::new(x.coords().iter().map(|v| v * c).collect()).unwrap();
        let v = scaled.normalize_1().unwrap();
        prop_assert!(u.coords().iter().zip(v.coords()).all(|(p, q)| (p - q).abs() <= 1e-14));
    }

    #[test]
    fn collatz_wielandt_encloses_radius((a, x) in matrix_and_vector(7)) {
        let (lo, hi) = collatz_wielandt(&a, &x).unwrap();
        let rho = common::oracle_radius(&a);
        let slack = 1e-10 * rho.max(1.0);
        prop_assert!(lo <= rho + slack, "lower {} > rho {}", lo, rho);
        prop_assert!(rho <= hi + slack, "rho {} > upper {}", rho, hi);
    }

    #[test]
    fn improve_bound_never_decreases((a, x) in matrix_and_vector(6)) {
        prop_assume!(is_irreducible(&a).irreducible);
        let (lo, _) = collatz_wielandt(&a, &x).unwrap();
        match improve_bound(&a, &x, lo) {
            Ok((y, r_new)) => {
                prop_assert!(y.is_strictly_positive());
                prop_assert!(r_new >= lo - 1e-12 * lo.max(1.0));
                prop_assert!(r_new <= common::oracle_radius(&a) + 1e-10);
            }
            // x happened to be an exact eigenvector.
            Err(pfc_core::Error::Precondition(_)) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn radius_is_monotone((a1, a2) in ordered_pair(6)) {
        let r1 = perron_fixed_point(&a1, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap().rho;
        let r2 = perron_fixed_point(&a2, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap().rho;
        prop_assert!(r1 <= r2 + 1e-9 * r2.max(1.0), "{} > {}", r1, r2);
    }

    #[test]
    fn perron_vector_is_nonnegative_unit(a in matrix(7)) {
        let cert = perron_fixed_point(&a, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        prop_assert!(cert.vector.is_nonnegative());
        prop_assert!((cert.vector.norm1() - 1.0).abs() <= 1e-12);
        prop_assert!(cert.cw_lower <= cert.rho + 1e-12 && cert.rho <= cert.cw_upper + 1e-12);
    }

    #[test]
    fn schaefer_split_is_a_zero_block(a in matrix(6)) {
        let (holds, split) = schaefer_check(&a);
        prop_assert_eq!(holds, boolean_oracle(&a));
        if let Some(s) = split {
            let n = a.dim();
            prop_assert!(!s.is_empty() && s.len() < n);
            for i in (0..n).filter(|i| !s.contains(i)) {
                for &j in &s {
                    prop_assert_eq!(a.get(i, j), 0.0);
                }
            }
        }
    }

    #[test]
    fn cone_is_closed_under_sums_and_scaling(x in vec3(), y in vec3(), t in 0.0..10.0f64) {
        for c in cones() {
            let (xp, _) = decompose(&c, &x).unwrap();
            let (yp, _) = decompose(&c, &y).unwrap();
            let sum: Vec<f64> = xp.iter().zip(&yp).map(|(p, q)| p + q).collect();
            let scaled: Vec<f64> = xp.iter().map(|p| t * p).collect();
            let tol = 1e-10 * (n1(&xp) + n1(&yp)).max(1.0) * t.max(1.0);
            prop_assert!(cone_contains(&c, &sum, tol).unwrap());
            prop_assert!(cone_contains(&c, &scaled, tol).unwrap());
        }
    }

    #[test]
    fn cone_is_pointed(x in vec3()) {
        prop_assume!(n1(&x) > 1e-3);
        for c in cones() {
            let neg: Vec<f64> = x.iter().map(|v| -v).collect();
            prop_assert!(!(c.contains(&x, 0.0) && c.contains(&neg, 0.0)));
        }
    }

    #[test]
    fn decompose_round_trips(x in vec3()) {
        for c in cones() {
            let (p, m) = decompose(&c, &x).unwrap();
            let tol = 1e-10 * n1(&x).max(1.0);
            prop_assert!(c.contains(&p, tol) && c.contains(&m, tol));
            let back: Vec<f64> = p.iter().zip(&m).map(|(a, b)| a - b).collect();
            prop_assert!(back.iter().zip(&x).all(|(a, b)| (a - b).abs() <= tol));
        }
    }

    #[test]
    fn rank_one_map_preserves_cone(u in vec3(), x in vec3()) {
        for c in cones() {
            let neg: Vec<f64> = u.iter().map(|v| -v).collect();
            if c.contains(&neg, 0.0) {
                prop_assert!(separating_functional(&c, &u).is_err());
                continue;
            }
            let f = separating_functional(&c, &u).unwrap();
            prop_assert!(f.eval(&u) > 0.0);
            let v_plus = c.interior_point();
            let b: DMatrix<f64> = rank_one_b(&c, &f, &u, &v_plus).unwrap();
            let bu = &b * DMatrix::from_column_slice(3, 1, &u);
            prop_assert!(bu.iter().zip(&v_plus).all(|(p, q)| (p - q).abs() <= 1e-9 * n1(&v_plus).max(1.0)));
            let (xp, _) = decompose(&c, &x).unwrap();
            let bx = &b * DMatrix::from_column_slice(3, 1, &xp);
            prop_assert!(c.contains(bx.as_slice(), 1e-9 * n1(&xp).max(1.0)));
        }
    }

    #[test]
    fn discretization_is_monotone_in_the_kernel(c0 in 0.0..2.0f64, c1 in 0.0..2.0f64, d0 in 0.0..1.0f64, d1 in 0.0..1.0f64, n in 1usize..12) {
        let rule = QuadratureRule::gauss_legendre(n).unwrap();
        let small = discretize(&Kernel::polynomial(vec![c0, c1]), &rule).unwrap();
        let large = discretize(&Kernel::polynomial(vec![c0 + d0, c1 + d1]), &rule).unwrap();
        prop_assert!(small.entries().iter().zip(large.entries()).all(|(p, q)| p <= q));
        let r_small = common::oracle_radius(&small);
        let r_large = common::oracle_radius(&large);
        prop_assert!(r_small <= r_large + 1e-12);
    }

    #[test]
    fn quadrature_weights_sum_to_one(n in 1usize..64) {
        let rule = QuadratureRule::gauss_legendre(n).unwrap();
        prop_assert!((rule.weights().iter().sum::<f64>() - 1.0).abs() <= 1e-14);
        prop_assert!(rule.nodes().iter().all(|&s| (0.0..=1.0).contains(&s)));
        prop_assert!(rule.weights().iter().all(|&w| w > 0.0));
    }
}
