mod common;

use common::{arb_algebra, arb_rational, combination};
use nilkilling::derivations::skew_derivations;
use nilkilling::killing::{killing_space, parallel_space};
use nilkilling::liealg::MetricLieAlgebra;
use nilkilling::linalg::matrix::unit;
use nilkilling::linalg::Matrix;
use nilkilling::oracle::{
    omega_product, omega_vector, DecomposabilityOracle, KillingField, Membership, DEFAULT_SIZE_CAP,
};
use nilkilling::scalar::{int, Rational};
use nilkilling::tensor::{MatrixSpace, Symmetry};
use proptest::prelude::*;

fn fields(alg: &MetricLieAlgebra<Rational>) -> Vec<KillingField<Rational>> {
    let n = alg.dim();
    (0..n)
        .map(|i| KillingField::Translation(unit(n, i)))
        .chain(
            skew_derivations(alg)
                .unwrap()
                .basis()
                .iter()
                .cloned()
                .map(KillingField::Derivation),
        )
        .collect()
}

fn lin_field(
    a: &KillingField<Rational>,
    b: &KillingField<Rational>,
    x: &Rational,
    y: &Rational,
) -> Option<KillingField<Rational>> {
    match (a, b) {
        (KillingField::Translation(u), KillingField::Translation(v)) => {
            Some(KillingField::Translation(
                u.iter()
                    .zip(v)
                    .map(|(p, q)| x.clone() * p.clone() + y.clone() * q.clone())
                    .collect(),
            ))
        }
        (KillingField::Derivation(d), KillingField::Derivation(e)) => {
            Some(KillingField::Derivation(&d.scale(x) + &e.scale(y)))
        }
        _ => None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn omega_product_is_symmetric_and_bilinear(
        alg in arb_algebra(),
        picks in proptest::collection::vec(0usize..64, 3),
        x in arb_rational(),
        y in arb_rational(),
    ) {
        let fs = fields(&alg);
        let (a, b, c) = (&fs[picks[0] % fs.len()], &fs[picks[1] % fs.len()], &fs[picks[2] % fs.len()]);
        let (pa, pb, pc) = (omega_vector(&alg, a), omega_vector(&alg, b), omega_vector(&alg, c));
        prop_assert_eq!(omega_product(&pa, &pc), omega_product(&pc, &pa));
        prop_assert!(omega_product(&pa, &pc).degree() <= 4);
        if let Some(ab) = lin_field(a, b, &x, &y) {
            let lhs = omega_product(&omega_vector(&alg, &ab), &pc);
            let rhs = omega_product(&pa, &pc).scale(&x).add(&omega_product(&pb, &pc).scale(&y));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn center_and_mixed_tensors_are_members(alg in arb_algebra(), coeffs in proptest::collection::vec(arb_rational(), 6)) {
        let n = alg.dim();
        let split = alg.split();
        let zs = split.center.vectors();
        let mut gens = parallel_space(&alg).unwrap().space.basis().to_vec();
        for i in 0..zs.len() {
            for j in i..zs.len() {
                gens.push(Matrix::sym_product(&zs[i], &zs[j]));
            }
        }
        let mixed: Vec<Matrix<Rational>> = split
            .complement
            .vectors()
            .iter()
            .flat_map(|v| zs.iter().map(move |z| Matrix::sym_product(v, z)))
            .collect();
        let mixed = MatrixSpace::span(Symmetry::Symmetric, n, &mixed);
        let killing_mixed = MatrixSpace::from_coordinate_space(
            Symmetry::Symmetric,
            n,
            killing_space(&alg).coordinate_space().intersection(mixed.coordinate_space()),
        );
        gens.extend(killing_mixed.basis().iter().cloned());
        let space = MatrixSpace::span(Symmetry::Symmetric, n, &gens);
        let s = combination(&space, &coeffs);
        let mut oracle = DecomposabilityOracle::new(&alg, DEFAULT_SIZE_CAP).unwrap();
        let member = matches!(oracle.membership(&s), Membership::Member { .. });
        prop_assert!(member);
    }

    #[test]
    fn verdict_independent_of_derivation_basis(
        alg in arb_algebra(),
        coeffs in proptest::collection::vec(arb_rational(), 6),
        mix in proptest::collection::vec(-2i64..=2, 36),
    ) {
        let der = skew_derivations(&alg).unwrap();
        let d = der.basis();
        // Unitriangular change of basis.
        let changed: Vec<Matrix<Rational>> = (0..d.len())
            .map(|i| {
                (i + 1..d.len()).fold(d[i].clone(), |acc, j| &acc + &d[j].scale(&int(mix[(i * 6 + j) % mix.len()])))
            })
            .collect();
        let s = combination(&killing_space(&alg), &coeffs);
        let a = DecomposabilityOracle::new(&alg, DEFAULT_SIZE_CAP).unwrap().membership(&s).verdict();
        let b = DecomposabilityOracle::with_derivation_basis(&alg, &changed, DEFAULT_SIZE_CAP)
            .unwrap()
            .membership(&s)
            .verdict();
        prop_assert_eq!(a, b);
    }
}

/// On doubles with `m = 3` (dimension ≤ 9) the oracle span, cut down to the
/// Killing space, is the classifier's decomposable subspace.
#[test]
fn oracle_members_are_the_decomposable_subspace() {
    use nilkilling::classify::{construct_double, decomposable_killing_space};
    use nilkilling::tensor::wedge;
    let w = |a, b| wedge(&unit::<Rational>(3, a), &unit(3, b));
    let families = [
        vec![w(0, 1)],
        vec![w(0, 1), w(1, 2)],
        vec![w(0, 1), w(1, 2), w(0, 2)],
    ];
    for gens in families {
        let (alg, _) = construct_double(&gens).unwrap();
        let k = killing_space(&alg);
        let d = decomposable_killing_space(&alg).unwrap();
        let mut oracle = DecomposabilityOracle::new(&alg, DEFAULT_SIZE_CAP).unwrap();
        for t in d.basis() {
            assert!(matches!(oracle.membership(t), Membership::Member { .. }));
        }
        let mut span: Vec<Matrix<Rational>> = d.basis().to_vec();
        for t in k.basis() {
            let extended = MatrixSpace::span(
                Symmetry::Symmetric,
                alg.dim(),
                &[span.clone(), vec![t.clone()]].concat(),
            );
            if extended.dim() > span.len() {
                assert_eq!(
                    oracle.membership(t),
                    Membership::NotMember,
                    "{} generators",
                    gens.len()
                );
                span.push(t.clone());
            }
        }
    }
}
