use super::algebra::MetricLieAlgebra;
use crate::linalg::{nullspace, Matrix, SubspaceBasis};
use crate::scalar::Scalar;

/// The orthogonal splitting `n = v ⊕ z` together with `n′ ⊆ z` and the
/// abelian factor `a = z ∩ n′⊥`.
#[derive(Clone, Debug, PartialEq)]
pub struct CenterSplit<F> {
    pub center: SubspaceBasis<F>,
    pub complement: SubspaceBasis<F>,
    pub derived: SubspaceBasis<F>,
    pub abelian_factor: SubspaceBasis<F>,
    pub center_projector: Matrix<F>,
    pub complement_projector: Matrix<F>,
    pub abelian_projector: Matrix<F>,
}

impl<F: Scalar> CenterSplit<F> {
    pub(crate) fn compute(alg: &MetricLieAlgebra<F>) -> Self {
        let n = alg.dim();
        // Row (j, k) of the stacked system: Σ_i x_i c[i][j][k] = 0.
        let stacked = Matrix::from_fn(n * n, n, |row, i| {
            let (j, k) = (row / n, row % n);
            alg.constant(i, j, k).clone()
        });
        let center = nullspace(&stacked);
        let complement = center.orthogonal_complement();
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let b = alg.bracket_basis(i, j);
                if b.iter().any(|c| !c.is_zero()) {
                    brackets.push(b.to_vec());
                }
            }
        }
        let derived = SubspaceBasis::span(n, brackets);
        let abelian_factor = center.intersection(&derived.orthogonal_complement());
        Self {
            center_projector: center.projector(),
            complement_projector: complement.projector(),
            abelian_projector: abelian_factor.projector(),
            center,
            complement,
            derived,
            abelian_factor,
        }
    }

    /// Orthogonal projections onto `v`, the mixed blocks and `z` of a symmetric matrix.
    pub fn blocks(&self, s: &Matrix<F>) -> (Matrix<F>, Matrix<F>, Matrix<F>) {
        let (pv, pz) = (&self.complement_projector, &self.center_projector);
        let sv = &(pv * s) * pv;
        let sz = &(pz * s) * pz;
        let sm = &(&(pv * s) * pz) + &(&(pz * s) * pv);
        (sv, sm, sz)
    }
}

/// `j(z_s)` for each vector `z_s` of the center basis, as operators on `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct JMap<F> {
    pub center_basis: Vec<Vec<F>>,
    pub operators: Vec<Matrix<F>>,
}

impl<F: Scalar> JMap<F> {
    pub(crate) fn compute(alg: &MetricLieAlgebra<F>) -> Self {
        let center_basis = alg.split().center.vectors().to_vec();
        let operators = center_basis.iter().map(|z| alg.j_operator(z)).collect();
        Self {
            center_basis,
            operators,
        }
    }

    /// `j` is injective iff its operators are linearly independent.
    pub fn is_injective(&self) -> bool {
        if self.operators.is_empty() {
            return true;
        }
        let n = self.operators[0].rows();
        let rows: Vec<Vec<F>> = self.operators.iter().map(|m| m.data().to_vec()).collect();
        SubspaceBasis::span(n * n, rows).dim() == self.operators.len()
    }
}

/// `true` iff `a = 0`.
pub fn j_injective<F: Scalar>(alg: &MetricLieAlgebra<F>) -> bool {
    alg.split().abelian_factor.is_zero()
}
