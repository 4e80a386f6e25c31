use nilkilling::linalg::{
    eigendecompose_symmetric, nullspace, rank, solve_affine, AffineSolution, EigenError, Matrix,
};
use nilkilling::scalar::{int, rat, Rational, Scalar};
use proptest::prelude::*;

fn arb_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix<Rational>> {
    proptest::collection::vec((-3i64..=3, 1i64..=2), rows * cols).prop_map(move |v| {
        Matrix::from_vec(rows, cols, v.into_iter().map(|(p, q)| rat(p, q)).collect())
    })
}

fn arb_shape() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=5, 1usize..=5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nullspace_vectors_are_annihilated(m in arb_shape().prop_flat_map(|(r, c)| arb_matrix(r, c))) {
        let ker = nullspace(&m);
        for v in ker.vectors() {
            prop_assert!(m.mul_vec(v).iter().all(Scalar::is_zero));
        }
        prop_assert_eq!(rank(&m) + ker.dim(), m.cols());
    }

    #[test]
    fn affine_solutions_are_certified(
        (m, b) in arb_shape().prop_flat_map(|(r, c)| (arb_matrix(r, c), proptest::collection::vec(-3i64..=3, r)))
    ) {
        let b: Vec<Rational> = b.into_iter().map(int).collect();
        match solve_affine(&m, &b) {
            AffineSolution::Feasible { particular, homogeneous } => {
                prop_assert_eq!(m.mul_vec(&particular), b.clone());
                for v in homogeneous.vectors() {
                    prop_assert!(m.mul_vec(v).iter().all(Scalar::is_zero));
                }
            }
            AffineSolution::Infeasible(w) => prop_assert!(w.verify(&m, &b)),
        }
    }

    #[test]
    fn eigendecomposition_reconstructs(m in arb_matrix(4, 4)) {
        let s = &m + &m.transpose();
        let n = s.rows();
        match eigendecompose_symmetric(&s) {
            Ok(spaces) => {
                let recon = spaces.iter().fold(Matrix::zeros(n, n), |acc, e| &acc + &e.projector.scale(&e.value));
                prop_assert_eq!(recon, s);
                check_projectors(&spaces.iter().map(|e| e.projector.clone()).collect::<Vec<_>>(), 0.0);
            }
            Err(EigenError::NeedsFloatFallback { .. }) => {
                let f = s.to_float();
                let spaces = eigendecompose_symmetric(&f).unwrap();
                let recon = spaces.iter().fold(Matrix::zeros(n, n), |acc, e| &acc + &e.projector.scale(&e.value));
                prop_assert!((&recon - &f).frobenius() < 1e-8);
                check_projectors(&spaces.iter().map(|e| e.projector.clone()).collect::<Vec<_>>(), 1e-8);
            }
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
    }
}

fn check_projectors<F: Scalar>(ps: &[Matrix<F>], tol: f64) {
    for (i, p) in ps.iter().enumerate() {
        assert!((p * p).approx_eq(p, tol), "projector {i} not idempotent");
        for q in &ps[i + 1..] {
            assert!(
                (p * q).data().iter().all(|x| x.abs_f64() <= tol),
                "projectors do not annihilate"
            );
        }
    }
}

#[test]
fn worked_nullspace_and_affine_examples() {
    assert_eq!(nullspace(&Matrix::<Rational>::zeros(3, 3)).dim(), 3);
    assert_eq!(nullspace(&Matrix::<Rational>::identity(4)).dim(), 0);
    let m = Matrix::from_rows(vec![vec![int(1), int(2)], vec![int(2), int(4)]]);
    let ker = nullspace(&m);
    assert_eq!(ker.dim(), 1);
    assert!(ker.contains(&[int(-2), int(1)]));

    let sol = solve_affine(&Matrix::<Rational>::identity(2), &[int(3), int(5)]);
    assert_eq!(sol.particular(), Some(&[int(3), int(5)][..]));
    match solve_affine(&Matrix::from_rows(vec![vec![int(1), int(1)]]), &[int(2)]) {
        AffineSolution::Feasible {
            particular,
            homogeneous,
        } => {
            assert_eq!(particular, vec![int(2), int(0)]);
            assert_eq!(homogeneous.dim(), 1);
        }
        AffineSolution::Infeasible(_) => panic!("x + y = 2 is feasible"),
    }
    let m = Matrix::from_rows(vec![vec![int(1)], vec![int(1)]]);
    assert!(!solve_affine(&m, &[int(0), int(1)]).is_feasible());
}
