#![allow(dead_code)]

use nilkilling::catalog;
use nilkilling::liealg::{validate, MetricLieAlgebra, StructureConstants};
use nilkilling::linalg::Matrix;
use nilkilling::scalar::{int, rat, Rational};
use nilkilling::tensor::MatrixSpace;
use proptest::prelude::*;

pub fn build(c: StructureConstants<Rational>) -> MetricLieAlgebra<Rational> {
    validate(c).expect("fixture validates")
}

pub fn catalog_algebras() -> Vec<(String, MetricLieAlgebra<Rational>)> {
    catalog::valid_examples()
        .into_iter()
        .map(|(name, c)| (name, build(c)))
        .collect()
}

/// `[e_a, e_b] = Σ c·z_s` for `a < b < m`, centers `z_s = e_{m+s}`.
pub fn two_step(m: usize, k: usize, coeffs: &[i64]) -> StructureConstants<Rational> {
    let mut c = StructureConstants::new(m + k);
    let mut idx = 0;
    for a in 0..m {
        for b in a + 1..m {
            let terms: Vec<(usize, Rational)> = (0..k)
                .map(|s| {
                    let v = coeffs[idx % coeffs.len()];
                    idx += 1;
                    (m + s, int(v))
                })
                .filter(|(_, v)| *v != int(0))
                .collect();
            c.set_bracket(a, b, &terms);
        }
    }
    c
}

/// Random non-abelian 2-step algebras with `dim v ≤ 4`, `dim z ≤ 3`.
pub fn arb_algebra() -> impl Strategy<Value = MetricLieAlgebra<Rational>> {
    (
        2usize..=4,
        1usize..=3,
        proptest::collection::vec(-2i64..=2, 18),
    )
        .prop_filter_map("abelian", |(m, k, coeffs)| {
            validate(two_step(m, k, &coeffs)).ok()
        })
}

pub fn arb_rational() -> impl Strategy<Value = Rational> {
    (-5i64..=5, 1i64..=3).prop_map(|(p, q)| rat(p, q))
}

pub fn combination(space: &MatrixSpace<Rational>, coeffs: &[Rational]) -> Matrix<Rational> {
    let c: Vec<Rational> = (0..space.dim())
        .map(|i| coeffs[i % coeffs.len()].clone())
        .collect();
    space.combination(&c)
}

/// Doubles of `k ≤ 3` random integer skew `m × m` generators, `m ∈ {3, 4}`.
pub fn arb_double() -> impl Strategy<Value = (MetricLieAlgebra<Rational>, Matrix<Rational>)> {
    (
        3usize..=4,
        1usize..=3,
        proptest::collection::vec(-2i64..=2, 18),
    )
        .prop_filter_map("dependent generators", |(m, k, entries)| {
            let mut it = entries.into_iter().cycle();
            let gens: Vec<Matrix<Rational>> = (0..k)
                .map(|_| {
                    let mut g = Matrix::zeros(m, m);
                    for a in 0..m {
                        for b in a + 1..m {
                            let v = int(it.next().unwrap());
                            g[(a, b)] = -v.clone();
                            g[(b, a)] = v;
                        }
                    }
                    g
                })
                .collect();
            nilkilling::classify::construct_double(&gens).ok()
        })
}
