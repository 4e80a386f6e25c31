//! Skew-symmetric derivations and the extension problem for skew maps on `v`.
//!
//! A skew `D` preserving `v` and `z` is a derivation iff
//! `j(D z) = [D|_v, j(z)]` for every `z` in the center. Both operations solve
//! this blockwise system and then re-check the Leibniz rule on all basis pairs.

use thiserror::Error;

use crate::liealg::MetricLieAlgebra;
use crate::linalg::matrix::unit;
use crate::linalg::{
    nullspace, solve::linear_system, solve_affine, AffineSolution, InfeasibilityWitness, Matrix,
};
use crate::scalar::Scalar;
use crate::tensor::{combine, wedge, MatrixSpace, Symmetry};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum DerivationError {
    #[error("map is {rows}×{cols}, algebra has dimension {expected}")]
    DimensionMismatch {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("map is not skew-symmetric")]
    NotSkew,
    #[error("map does not act on v alone")]
    NotOnComplement,
    #[error("solved map violates the Leibniz rule on basis pair ({0}, {1})")]
    LeibnizFails(usize, usize),
}

/// Skew maps supported on the span of `vectors`: `u_a ∧ u_b`, `a < b`.
pub(crate) fn wedge_basis<F: Scalar>(vectors: &[Vec<F>]) -> Vec<Matrix<F>> {
    let mut out = Vec::new();
    for a in 0..vectors.len() {
        for b in a + 1..vectors.len() {
            out.push(wedge(&vectors[a], &vectors[b]));
        }
    }
    out
}

/// First basis pair on which `D[e_i, e_j] = [De_i, e_j] + [e_i, De_j]` fails.
pub fn leibniz_failure<F: Scalar>(
    alg: &MetricLieAlgebra<F>,
    d: &Matrix<F>,
) -> Option<(usize, usize)> {
    let n = alg.dim();
    let scale = alg.constant_scale() * d.max_abs().max(1.0);
    for i in 0..n {
        for j in i + 1..n {
            let (ei, ej) = (unit::<F>(n, i), unit::<F>(n, j));
            let lhs = d.mul_vec(alg.bracket_basis(i, j));
            let r1 = alg.bracket(&d.mul_vec(&ei), &ej);
            let r2 = alg.bracket(&ei, &d.mul_vec(&ej));
            let bad = (0..n)
                .any(|k| !(lhs[k].clone() - r1[k].clone() - r2[k].clone()).is_negligible(scale));
            if bad {
                return Some((i, j));
            }
        }
    }
    None
}

/// Rows of `j(A z_t) − [T, j(z_t)]` for all center basis vectors `z_t`.
fn derivation_residual<F: Scalar>(
    alg: &MetricLieAlgebra<F>,
    t: &Matrix<F>,
    a: &Matrix<F>,
) -> Vec<F> {
    let jmap = alg.j_map();
    jmap.center_basis
        .iter()
        .zip(&jmap.operators)
        .flat_map(|(z, jz)| {
            let lhs = alg.j_operator(&a.mul_vec(z));
            (&lhs - &t.commutator(jz)).into_data()
        })
        .collect()
}

/// `Der_a(n)`.
pub fn skew_derivations<F: Scalar>(
    alg: &MetricLieAlgebra<F>,
) -> Result<MatrixSpace<F>, DerivationError> {
    let n = alg.dim();
    let split = alg.split();
    let t_basis = wedge_basis(split.complement.vectors());
    let a_basis = wedge_basis(split.center.vectors());
    let zero = Matrix::zeros(n, n);
    let unknowns: Vec<(&Matrix<F>, &Matrix<F>)> = t_basis
        .iter()
        .map(|t| (t, &zero))
        .chain(a_basis.iter().map(|a| (&zero, a)))
        .collect();
    let system = linear_system(&unknowns, |(t, a)| derivation_residual(alg, t, a));
    let kernel = nullspace(&system);
    let all: Vec<Matrix<F>> = t_basis.iter().chain(&a_basis).cloned().collect();
    let derivations: Vec<Matrix<F>> = kernel
        .vectors()
        .iter()
        .map(|c| combine(c, &all, n))
        .collect();
    for d in &derivations {
        if let Some((i, j)) = leibniz_failure(alg, d) {
            return Err(DerivationError::LeibnizFails(i, j));
        }
    }
    Ok(MatrixSpace::span(Symmetry::Skew, n, &derivations))
}

#[derive(Clone, Debug, PartialEq)]
pub enum Extension<F> {
    /// `derivation` has `v`-block `T`; adding any element of `free` (skew maps
    /// on `z`) gives another extension.
    Extended {
        derivation: Matrix<F>,
        free: Vec<Matrix<F>>,
    },
    Infeasible(InfeasibilityWitness<F>),
}

impl<F> Extension<F> {
    pub fn is_extended(&self) -> bool {
        matches!(self, Extension::Extended { .. })
    }
}

/// Solves `j(A z_t) = [T, j(z_t)]` for a skew `A` on `z`. `T` is an ambient
/// skew matrix supported on `v`.
pub fn extend_skew<F: Scalar>(
    alg: &MetricLieAlgebra<F>,
    t: &Matrix<F>,
) -> Result<Extension<F>, DerivationError> {
    let n = alg.dim();
    if t.rows() != n || t.cols() != n {
        return Err(DerivationError::DimensionMismatch {
            expected: n,
            rows: t.rows(),
            cols: t.cols(),
        });
    }
    if !t.is_skew() {
        return Err(DerivationError::NotSkew);
    }
    let split = alg.split();
    let pv = &split.complement_projector;
    if !(&(pv * t) * pv).approx_eq(t, crate::scalar::FLOAT_SYMMETRY_TOL * t.max_abs().max(1.0)) {
        return Err(DerivationError::NotOnComplement);
    }
    let a_basis = wedge_basis(split.center.vectors());
    let zero = Matrix::zeros(n, n);
    let rhs: Vec<F> = derivation_residual(alg, t, &zero)
        .into_iter()
        .map(|x| -x)
        .collect();
    let system = if a_basis.is_empty() {
        Matrix::zeros(rhs.len(), 0)
    } else {
        linear_system(&a_basis, |a| derivation_residual(alg, &zero, a))
    };
    match solve_affine(&system, &rhs) {
        AffineSolution::Feasible {
            particular,
            homogeneous,
        } => {
            let a = combine(&particular, &a_basis, n);
            let derivation = t + &a;
            if let Some((i, j)) = leibniz_failure(alg, &derivation) {
                return Err(DerivationError::LeibnizFails(i, j));
            }
            let free = homogeneous
                .vectors()
                .iter()
                .map(|c| combine(c, &a_basis, n))
                .collect();
            Ok(Extension::Extended { derivation, free })
        }
        AffineSolution::Infeasible(w) => Ok(Extension::Infeasible(w)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{validate, StructureConstants};
    use crate::scalar::{int, Rational};

    fn alg(n: usize, brackets: &[(usize, usize, usize)]) -> MetricLieAlgebra<Rational> {
        let mut c = StructureConstants::new(n);
        for &(i, j, k) in brackets {
            c.set_bracket(i, j, &[(k, int(1))]);
        }
        validate(c).unwrap()
    }

    fn dim6() -> MetricLieAlgebra<Rational> {
        alg(6, &[(0, 1, 3), (0, 2, 4), (1, 2, 5)])
    }

    #[test]
    fn h1_has_one_skew_derivation() {
        let d = skew_derivations(&alg(3, &[(0, 1, 2)])).unwrap();
        assert_eq!(d.dim(), 1);
        let m = &d.basis()[0];
        assert_eq!(m[(2, 2)], int(0));
        assert!(m[(1, 0)] != int(0));
    }

    #[test]
    fn dim6_has_so3_worth() {
        let a = dim6();
        let d = skew_derivations(&a).unwrap();
        assert_eq!(d.dim(), 3);
        for m in d.basis() {
            assert!(m.is_skew());
            assert_eq!(leibniz_failure(&a, m), None);
        }
    }

    #[test]
    fn zero_extends_to_zero() {
        let a = dim6();
        match extend_skew(&a, &Matrix::zeros(6, 6)).unwrap() {
            Extension::Extended { derivation, free } => {
                assert!(derivation.is_zero());
                assert!(free.is_empty());
            }
            Extension::Infeasible(_) => panic!("zero must extend"),
        }
    }

    #[test]
    fn dim6_rotation_extends_uniquely() {
        let a = dim6();
        let t = wedge(&unit(6, 0), &unit(6, 1));
        match extend_skew(&a, &t).unwrap() {
            Extension::Extended { derivation, free } => {
                assert!(free.is_empty());
                assert!(skew_derivations(&a).unwrap().contains(&derivation));
            }
            Extension::Infeasible(_) => panic!("so(3) generators extend"),
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let a = dim6();
        assert!(matches!(
            extend_skew(&a, &Matrix::zeros(3, 3)),
            Err(DerivationError::DimensionMismatch { .. })
        ));
        assert_eq!(
            extend_skew(&a, &Matrix::identity(6)),
            Err(DerivationError::NotSkew)
        );
        assert_eq!(
            extend_skew(&a, &wedge(&unit(6, 0), &unit(6, 4))),
            Err(DerivationError::NotOnComplement)
        );
    }
}
