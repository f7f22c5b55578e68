use graal_core::geometry::Geometry;
use graal_core::linalg::{dist2, dot};
use graal_core::proximal::{graal_prox_step, prox, Regularizer};
use proptest::prelude::*;

const DIM: usize = 4;

fn geometries() -> Vec<Geometry> {
    vec![
        Geometry::euclidean(DIM),
        Geometry::negative_entropy(DIM),
        Geometry::mahalanobis(vec![0.5, 1.0, 2.0, 4.0]).unwrap(),
    ]
}

fn normalize(v: &[f64]) -> Vec<f64> {
    let s: f64 = v.iter().sum();
    v.iter().map(|x| x / s).collect()
}

/// Maps raw draws in `(0, 1)` to a point in the interior of `dom h`;
/// entropic points are placed on the unit simplex.
fn point(geo: &Geometry, raw: &[f64]) -> Vec<f64> {
    match geo.kind() {
        graal_core::GeometryKind::NegativeEntropy => normalize(raw),
        _ => raw.iter().map(|r| 10.0 * r - 5.0).collect(),
    }
}

fn raw() -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(0.001f64..1.0, DIM)
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn bregman_nonnegative_and_strongly_convex(gi in 0usize..3, rx in raw(), ry in raw()) {
        let geo = &geometries()[gi];
        let (x, y) = (point(geo, &rx), point(geo, &ry));
        let b = geo.bregman(&x, &y).unwrap();
        let d = dist2(&x, &y);
        prop_assert!(b >= 0.0);
        prop_assert!(b >= 0.5 * geo.alpha() * d * d - 1e-12);
        prop_assert!(geo.bregman(&x, &x).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn convex_combination_identity(gi in 0usize..3, rx in raw(), rz in raw(), rw in raw(), beta in 0.0f64..=1.0) {
        let geo = &geometries()[gi];
        let (x, z, w) = (point(geo, &rx), point(geo, &rz), point(geo, &rw));
        let gz = geo.grad(&z).unwrap();
        let gw = geo.grad(&w).unwrap();
        let gy: Vec<f64> = gz.iter().zip(&gw).map(|(a, b)| beta * a + (1.0 - beta) * b).collect();
        let y = geo.grad_inv(&gy).unwrap();
        let lhs = geo.bregman(&x, &y).unwrap();
        let rhs = beta * (geo.bregman(&x, &z).unwrap() - geo.bregman(&y, &z).unwrap())
            + (1.0 - beta) * (geo.bregman(&x, &w).unwrap() - geo.bregman(&y, &w).unwrap());
        prop_assert!(rel_close(lhs, rhs, 1e-9), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn prox_optimality(
        case in 0usize..5,
        rv in raw(),
        zs in proptest::collection::vec(raw(), 100),
        lambda in 0.01f64..5.0,
        weight in 0.0f64..2.0,
    ) {
        let (geo, g) = match case {
            0 => (Geometry::euclidean(DIM), Regularizer::l1(weight).unwrap()),
            1 => (Geometry::mahalanobis(vec![0.5, 1.0, 2.0, 4.0]).unwrap(), Regularizer::l1(weight).unwrap()),
            2 => (Geometry::euclidean(DIM), Regularizer::simplices_of_sizes(&[2, 2]).unwrap()),
            3 => (Geometry::negative_entropy(DIM), Regularizer::simplices_of_sizes(&[1, 3]).unwrap()),
            _ => (Geometry::negative_entropy(DIM), Regularizer::Zero),
        };
        // entropy needs v in the interior but not on the simplex
        let v: Vec<f64> = match case {
            3 | 4 => rv.iter().map(|r| 3.0 * r).collect(),
            _ => rv.iter().map(|r| 6.0 * r - 3.0).collect(),
        };
        let x = prox(&geo, &g, lambda, &v).unwrap();
        let gv = geo.grad(&v).unwrap();
        let gx = geo.grad(&x).unwrap();
        let dg: Vec<f64> = gv.iter().zip(&gx).map(|(a, b)| a - b).collect();
        for rz in &zs {
            let z: Vec<f64> = match case {
                2 => {
                    let mut z = normalize(&rz[..2]);
                    z.extend(normalize(&rz[2..]));
                    z
                }
                3 => {
                    let mut z = vec![1.0];
                    z.extend(normalize(&rz[1..]));
                    z
                }
                4 => rz.iter().map(|r| 3.0 * r).collect(),
                _ => rz.iter().map(|r| 6.0 * r - 3.0).collect(),
            };
            let xz: Vec<f64> = x.iter().zip(&z).map(|(a, b)| a - b).collect();
            let lhs = lambda * (g.value(&x) - g.value(&z));
            prop_assert!(lhs <= dot(&dg, &xz) + 1e-9, "case {}: {} > {}", case, lhs, dot(&dg, &xz));
        }
    }

    #[test]
    fn entropic_prox_range(rv in proptest::collection::vec(-30.0f64..30.0, 6), lambda in 0.01f64..100.0,
                           ra in proptest::collection::vec(-50.0f64..50.0, 6)) {
        let geo = Geometry::negative_entropy(6);
        let g = Regularizer::simplices_of_sizes(&[2, 4]).unwrap();
        let w_bar: Vec<f64> = rv.iter().map(|v| v.exp()).collect();
        let x = graal_prox_step(&geo, &g, lambda, &w_bar, &ra).unwrap();
        prop_assert!(x.iter().all(|&v| v >= 0.0 && v.is_finite()));
        prop_assert!((x[..2].iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        prop_assert!((x[2..].iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn entropic_shift_invariance(rv in proptest::collection::vec(0.01f64..1.0, 5), lambda in 0.01f64..10.0,
                                 ra in proptest::collection::vec(-5.0f64..5.0, 5), c in -100.0f64..100.0) {
        let geo = Geometry::negative_entropy(5);
        let g = Regularizer::simplices_of_sizes(&[3, 2]).unwrap();
        let base = graal_prox_step(&geo, &g, lambda, &rv, &ra).unwrap();
        let mut shifted = ra.clone();
        shifted[3..].iter_mut().for_each(|a| *a += c);
        let x = graal_prox_step(&geo, &g, lambda, &rv, &shifted).unwrap();
        for (a, b) in base.iter().zip(&x) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }
}
