use hankel_recover::linalg::{inner, inner_mat, nuclear_norm, singular_values};
use hankel_recover::{hankel_map, svt, toeplitz_map, CMatrix, CVector, Complex64, HankelLift};
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = Complex64> {
    (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn signal(n: usize) -> impl Strategy<Value = CVector> {
    prop::collection::vec(complex(), 2 * n - 1).prop_map(CVector::from_vec)
}

fn square(n: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec(complex(), n * n).prop_map(move |v| CMatrix::from_vec(n, n, v))
}

fn signal_and_matrix() -> impl Strategy<Value = (usize, CVector, CMatrix)> {
    (1usize..12).prop_flat_map(|n| (Just(n), signal(n), square(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lift_adjoint_pairing((n, y, x) in signal_and_matrix()) {
        let lift = HankelLift::new(n).unwrap();
        let lhs = inner_mat(&lift.lift(&y).unwrap(), &x);
        let rhs = inner(&y, &lift.lift_adjoint(&x).unwrap());
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + y.norm() * x.norm()));
    }

    #[test]
    fn lift_is_isometric((n, y, _x) in signal_and_matrix()) {
        let lift = HankelLift::new(n).unwrap();
        let gy = lift.lift(&y).unwrap();
        prop_assert!((gy.norm() - y.norm()).abs() <= 1e-12 * (1.0 + y.norm()));
        let back = lift.lift_adjoint(&gy).unwrap();
        prop_assert!((back - &y).norm() <= 1e-12 * (1.0 + y.norm()));
    }

    #[test]
    fn projection_is_hankel_and_idempotent((n, _y, x) in signal_and_matrix()) {
        let lift = HankelLift::new(n).unwrap();
        let p = lift.project_hankel(&x).unwrap();
        for j in 0..n {
            for k in 1..n {
                if j + 1 < n {
                    prop_assert!((p[(j, k)] - p[(j + 1, k - 1)]).norm() <= 1e-12 * (1.0 + x.norm()));
                }
            }
        }
        let pp = lift.project_hankel(&p).unwrap();
        prop_assert!((pp - &p).norm() <= 1e-12 * (1.0 + x.norm()));
    }

    #[test]
    fn weighting_round_trip((n, x, _m) in signal_and_matrix()) {
        let lift = HankelLift::new(n).unwrap();
        let y = lift.weight_apply(&x, false).unwrap();
        let back = lift.weight_apply(&y, true).unwrap();
        prop_assert!((back - &x).norm() <= 1e-12 * (1.0 + x.norm()));
        // G D x is the Hankel matrix of x.
        let gy = lift.lift(&y).unwrap();
        prop_assert!((gy - hankel_map(&x, n).unwrap()).norm() <= 1e-12 * (1.0 + x.norm()));
    }

    #[test]
    fn toeplitz_and_hankel_share_singular_values((n, x, _m) in signal_and_matrix()) {
        let h = singular_values(&hankel_map(&x, n).unwrap()).unwrap();
        let t = singular_values(&toeplitz_map(&x, n).unwrap()).unwrap();
        for (a, b) in h.iter().zip(&t) {
            prop_assert!((a - b).abs() <= 1e-10 * (1.0 + h[0]));
        }
    }

    #[test]
    fn svt_shrinks_every_singular_value(x in square(5), tau in 0.0..20.0f64) {
        let s = singular_values(&x).unwrap();
        let out = singular_values(&svt(&x, tau).unwrap()).unwrap();
        for (o, v) in out.iter().zip(&s) {
            prop_assert!((o - (v - tau).max(0.0)).abs() <= 1e-10 * (1.0 + s[0]));
        }
    }

    #[test]
    fn svt_is_nonexpansive(a in square(4), b in square(4), tau in 0.0..10.0f64) {
        let da = svt(&a, tau).unwrap();
        let db = svt(&b, tau).unwrap();
        prop_assert!((da - db).norm() <= (a - b).norm() * (1.0 + 1e-10) + 1e-10);
    }

    #[test]
    fn nuclear_norm_is_subadditive(a in square(4), b in square(4)) {
        let lhs = nuclear_norm(&(&a + &b)).unwrap();
        prop_assert!(lhs <= nuclear_norm(&a).unwrap() + nuclear_norm(&b).unwrap() + 1e-9);
    }
}
