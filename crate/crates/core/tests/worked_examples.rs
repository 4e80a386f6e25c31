mod common;

use common::build;
use nilkilling::catalog;
use nilkilling::classify::{
    classify, sufficient_decomposable, sufficient_indecomposable, BlockCertificate, Classified,
    DecomposableReason, Verdict,
};
use nilkilling::derivations::{extend_skew, skew_derivations, Extension};
use nilkilling::flow::{drift, integrate, seeded_initial_states, FirstIntegral};
use nilkilling::killing::{
    component_split, connection_table, is_killing, killing_space, killing_two_forms,
    parallel_space, KillingViolation,
};
use nilkilling::liealg::{
    ideal_decomposition, is_nonsingular, j_injective, ComponentKind, MetricLieAlgebra,
    Nonsingularity,
};
use nilkilling::linalg::matrix::unit;
use nilkilling::linalg::{Matrix, SubspaceBasis};
use nilkilling::oracle::{crosscheck, decomposable_membership, Membership, DEFAULT_SIZE_CAP};
use nilkilling::scalar::{int, rat, Rational};
use nilkilling::tensor::{MatrixSpace, Symmetry};

fn e(n: usize, i: usize) -> Vec<Rational> {
    unit(n, i)
}

fn h(rank: usize) -> MetricLieAlgebra<Rational> {
    build(catalog::heisenberg(rank))
}

fn dim6() -> MetricLieAlgebra<Rational> {
    build(catalog::dim6_free2step())
}

fn dim8() -> (MetricLieAlgebra<Rational>, Matrix<Rational>) {
    let (c, s) = catalog::dim8_double();
    (build(c), s)
}

fn dim6_mixed() -> Matrix<Rational> {
    &(&Matrix::sym_product(&e(6, 0), &e(6, 5)) - &Matrix::sym_product(&e(6, 1), &e(6, 4)))
        + &Matrix::sym_product(&e(6, 2), &e(6, 3))
}

#[test]
fn center_splits() {
    for r in 1..=3 {
        assert_eq!(h(r).split().center.dim(), 1);
    }
    let a = dim6();
    let split = a.split();
    assert!(split
        .center
        .same_as(&SubspaceBasis::span(6, vec![e(6, 3), e(6, 4), e(6, 5)])));
    assert!(split.derived.same_as(&split.center));
    assert!(split.abelian_factor.is_zero());
}

#[test]
fn j_maps() {
    let a = h(2);
    let j = a.j_operator(&e(5, 4));
    for i in 0..2 {
        assert_eq!(j.mul_vec(&e(5, i)), e(5, i + 2));
        assert_eq!(
            j.mul_vec(&e(5, i + 2)),
            e(5, i).iter().map(|c| -c.clone()).collect::<Vec<_>>()
        );
    }
    assert!(a.j_operator(&vec![int(0); 5]).is_zero());
    let a = dim6();
    let j4 = a.j_operator(&e(6, 3));
    assert_eq!(j4.mul_vec(&e(6, 0)), e(6, 1));
    assert_eq!(
        j4.mul_vec(&e(6, 1)),
        vec![int(-1), int(0), int(0), int(0), int(0), int(0)]
    );
    assert!(j4.mul_vec(&e(6, 2)).iter().all(|c| *c == int(0)));
}

#[test]
fn ideal_decompositions() {
    let hh = build(catalog::h1_plus_h1());
    assert_eq!(ideal_decomposition(&hh).unwrap().irreducible().count(), 2);
    assert_eq!(ideal_decomposition(&dim6()).unwrap().components.len(), 1);
    let ha = build(catalog::h1_plus_abelian2());
    let dec = ideal_decomposition(&ha).unwrap();
    let kinds: Vec<ComponentKind> = dec.components.iter().map(|c| c.kind).collect();
    assert_eq!(
        kinds
            .iter()
            .filter(|k| **k == ComponentKind::Irreducible)
            .count(),
        1
    );
    assert_eq!(dec.abelian().unwrap().space.dim(), 2);
}

#[test]
fn nonsingularity() {
    for r in 1..=3 {
        assert_eq!(is_nonsingular(&h(r), 64, 0), Nonsingularity::Nonsingular);
    }
    assert_eq!(
        is_nonsingular(&dim6(), 64, 0),
        Nonsingularity::Singular { witness: e(6, 0) }
    );
    let hh = build(catalog::h1_plus_h1());
    assert_eq!(
        is_nonsingular(&hh, 64, 0),
        Nonsingularity::Singular { witness: e(6, 0) }
    );
}

#[test]
fn j_injectivity() {
    assert!(j_injective(&dim6()));
    assert!(j_injective(&h(1)));
    let mut c = nilkilling::liealg::StructureConstants::new(4);
    c.set_bracket(0, 1, &[(2, int(1))]);
    assert!(!j_injective(&build(c)));
}

#[test]
fn killing_spaces() {
    let a = h(1);
    let k = killing_space(&a);
    let expected = MatrixSpace::span(
        Symmetry::Symmetric,
        3,
        &[
            a.split().complement_projector.clone(),
            Matrix::outer(&e(3, 2), &e(3, 2)),
        ],
    );
    assert!(k.same_as(&expected));
    for (name, alg) in common::catalog_algebras() {
        assert!(
            is_killing(&alg, &Matrix::identity(alg.dim()))
                .unwrap()
                .is_killing,
            "{name}"
        );
    }
    let (a8, s) = dim8();
    assert!(is_killing(&a8, &s).unwrap().is_killing);
    let check = is_killing(&a, &Matrix::outer(&e(3, 0), &e(3, 0))).unwrap();
    assert!(!check.is_killing);
    assert!(matches!(
        check.worst,
        Some(KillingViolation::ComplementPair { a: 0, b: 1, .. })
    ));
}

#[test]
fn component_splits() {
    let a = dim6();
    let id = Matrix::identity(6);
    let split = component_split(&a, &id).unwrap();
    assert_eq!(split.complement, a.split().complement_projector);
    assert!(split.mixed.is_zero());
    assert_eq!(split.center, a.split().center_projector);
    let split = component_split(&a, &dim6_mixed()).unwrap();
    assert!(split.complement.is_zero() && split.center.is_zero());
    assert_eq!(split.mixed, dim6_mixed());
    let (a8, s) = dim8();
    let split = component_split(&a8, &s).unwrap();
    assert_eq!(split.complement, s);
    assert!(split.mixed.is_zero() && split.center.is_zero());
}

#[test]
fn connection_tables() {
    let a = h(1);
    let t = connection_table(&a);
    let lx = &t.matrices[0];
    assert_eq!(lx.mul_vec(&e(3, 1)), vec![int(0), int(0), rat(1, 2)]);
    assert_eq!(lx.mul_vec(&e(3, 2)), vec![int(0), rat(-1, 2), int(0)]);
    assert!(t.matrices[2].mul_vec(&e(3, 2)).iter().all(|c| *c == int(0)));
    let ha = build(catalog::h1_plus_abelian2());
    let t = connection_table(&ha);
    assert!(t.matrices[3].is_zero() && t.matrices[4].is_zero());
}

#[test]
fn parallel_spaces() {
    assert_eq!(parallel_space(&dim6()).unwrap().space.dim(), 1);
    assert!(parallel_space(&dim6())
        .unwrap()
        .space
        .contains(&Matrix::identity(6)));
    assert_eq!(
        parallel_space(&build(catalog::h1_plus_h1()))
            .unwrap()
            .space
            .dim(),
        2
    );
    assert_eq!(
        parallel_space(&build(catalog::h1_plus_abelian2()))
            .unwrap()
            .space
            .dim(),
        4
    );
}

#[test]
fn two_forms_and_derivations() {
    assert_eq!(killing_two_forms(&h(1)).unwrap().dim(), 0);
    assert_eq!(skew_derivations(&h(1)).unwrap().dim(), 1);
    assert_eq!(skew_derivations(&dim6()).unwrap().dim(), 3);
}

#[test]
fn dim8_twisted_block_does_not_extend() {
    let (a, _) = dim8();
    let n = 8;
    let z1 = e(n, 6);
    let weights: Vec<Rational> = (0..n)
        .map(|i| {
            if i < 3 {
                int(1)
            } else if i < 6 {
                int(2)
            } else {
                int(0)
            }
        })
        .collect();
    let t = &a.j_operator(&z1) * &Matrix::diagonal(&weights);
    assert!(t.is_skew());
    assert!(matches!(
        extend_skew(&a, &t).unwrap(),
        Extension::Infeasible(_)
    ));
}

#[test]
fn classify_examples() {
    for (name, alg) in common::catalog_algebras() {
        let Classified::Exact(c) = classify(&alg, &Matrix::identity(alg.dim())).unwrap() else {
            panic!("{name}: metric has a rational spectrum");
        };
        assert_eq!(c.verdict, Verdict::Decomposable);
        for b in &c.blocks {
            match &b.certificate {
                BlockCertificate::SingleEigenvalue { shift } => assert_eq!(*shift, int(1)),
                BlockCertificate::Parallel => {}
                other => panic!("{name}: unexpected certificate {other:?}"),
            }
        }
    }
    let (a8, s) = dim8();
    assert_eq!(
        classify(&a8, &s).unwrap().verdict(),
        Verdict::Indecomposable
    );
}

#[test]
fn sufficient_conditions() {
    for r in 1..=3 {
        assert_eq!(
            sufficient_decomposable(&h(r)).unwrap(),
            Some(DecomposableReason::DimCenterOne)
        );
    }
    let (a8, s) = dim8();
    assert_eq!(sufficient_decomposable(&a8).unwrap(), None);
    assert!(sufficient_decomposable(&dim6()).unwrap().is_some());
    assert!(sufficient_indecomposable(&a8, &s).unwrap().is_some());
    let (sv, _, _) = a8.split().blocks(&Matrix::identity(8));
    assert_eq!(sufficient_indecomposable(&a8, &sv).unwrap(), None);
    let (sv, _, _) = dim6().split().blocks(&Matrix::identity(6));
    assert_eq!(sufficient_indecomposable(&dim6(), &sv).unwrap(), None);
}

#[test]
fn oracle_examples() {
    let a = dim6();
    assert!(matches!(
        decomposable_membership(&a, &dim6_mixed(), DEFAULT_SIZE_CAP).unwrap(),
        Membership::Member { .. }
    ));
    assert!(matches!(
        decomposable_membership(&a, &Matrix::identity(6), DEFAULT_SIZE_CAP).unwrap(),
        Membership::Member { .. }
    ));
    let (a8, s) = dim8();
    assert_eq!(
        decomposable_membership(&a8, &s, DEFAULT_SIZE_CAP).unwrap(),
        Membership::NotMember
    );
}

#[test]
fn crosscheck_examples() {
    let report = crosscheck(&dim6(), &[], 0, 1, DEFAULT_SIZE_CAP).unwrap();
    assert_eq!(report.entries.len(), 8);
    assert!(report.all_agree());
    assert!(report
        .entries
        .iter()
        .all(|e| e.oracle == Verdict::Decomposable));
    let (a8, s) = dim8();
    let report = crosscheck(&a8, &[("S".into(), s)], 3, 1, DEFAULT_SIZE_CAP).unwrap();
    assert!(report
        .entries
        .iter()
        .any(|e| e.label == "S" && e.oracle == Verdict::Indecomposable));
    for r in 1..=3 {
        assert!(crosscheck(&h(r), &[], 5, 1, DEFAULT_SIZE_CAP)
            .unwrap()
            .all_agree());
    }
}

#[test]
fn flow_examples() {
    let (a8, s) = dim8();
    let af = a8.to_float();
    let sf = s.to_float();
    for (w0, y0) in seeded_initial_states(8, 3, 5) {
        let traj = integrate(&af, &w0, &y0, 20.0, 20_000).unwrap();
        assert!(drift(FirstIntegral::Tensor(&sf), &traj) < 1e-8);
    }
    for (name, alg) in common::catalog_algebras() {
        let af = alg.to_float();
        let id = Matrix::identity(alg.dim());
        let (w0, y0) = &seeded_initial_states(alg.dim(), 1, 8)[0];
        let traj = integrate(&af, w0, y0, 20.0, 20_000).unwrap();
        assert!(drift(FirstIntegral::Tensor(&id), &traj) < 1e-10, "{name}");
    }
}
