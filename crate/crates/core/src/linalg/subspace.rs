use super::matrix::{dot, is_zero_vec, Matrix};
use super::solve::{nullspace, rref};
use crate::scalar::Scalar;

/// A linear subspace of `F^ambient_dim`, stored as the nonzero rows of the
/// reduced row-echelon form of any spanning set. In exact arithmetic equal
/// subspaces therefore have identical representations.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceBasis<F> {
    ambient_dim: usize,
    vectors: Vec<Vec<F>>,
    pivots: Vec<usize>,
}

impl<F: Scalar> SubspaceBasis<F> {
    pub fn span(ambient_dim: usize, vectors: Vec<Vec<F>>) -> Self {
        assert!(
            vectors.iter().all(|v| v.len() == ambient_dim),
            "vector length does not match ambient dimension"
        );
        if vectors.is_empty() {
            return Self::zero(ambient_dim);
        }
        let ech = rref(&Matrix::from_rows(vectors));
        Self {
            ambient_dim,
            vectors: ech.reduced.row_vecs(),
            pivots: ech.pivots,
        }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            vectors: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self::span(
            ambient_dim,
            (0..ambient_dim)
                .map(|i| super::matrix::unit(ambient_dim, i))
                .collect(),
        )
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_zero(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<F>] {
        &self.vectors
    }

    /// Basis vectors as the rows of a matrix (`dim × ambient_dim`).
    pub fn as_matrix(&self) -> Matrix<F> {
        if self.vectors.is_empty() {
            Matrix::zeros(0, self.ambient_dim)
        } else {
            Matrix::from_rows(self.vectors.clone())
        }
    }

    /// Residual of `v` after reduction against the echelon rows.
    fn reduce(&self, v: &[F]) -> Vec<F> {
        let mut r = v.to_vec();
        for (row, &p) in self.vectors.iter().zip(&self.pivots) {
            let c = r[p].clone();
            if c.is_zero() {
                continue;
            }
            for (x, y) in r.iter_mut().zip(row) {
                *x = x.clone() - c.clone() * y.clone();
            }
        }
        r
    }

    pub fn contains(&self, v: &[F]) -> bool {
        assert_eq!(v.len(), self.ambient_dim);
        let scale = v.iter().map(Scalar::abs_f64).fold(1.0, f64::max);
        self.reduce(v).iter().all(|x| x.is_negligible(scale))
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.vectors.iter().all(|v| other.contains(v))
    }

    /// Subspace equality; representation equality in exact arithmetic.
    pub fn same_as(&self, other: &Self) -> bool {
        if F::EXACT {
            self == other
        } else {
            self.dim() == other.dim() && self.is_subspace_of(other)
        }
    }

    pub fn sum(&self, other: &Self) -> Self {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        let mut all = self.vectors.clone();
        all.extend(other.vectors.iter().cloned());
        Self::span(self.ambient_dim, all)
    }

    /// Orthogonal complement with respect to the standard inner product.
    pub fn orthogonal_complement(&self) -> Self {
        if self.vectors.is_empty() {
            return Self::full(self.ambient_dim);
        }
        nullspace(&self.as_matrix())
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.orthogonal_complement()
            .sum(&other.orthogonal_complement())
            .orthogonal_complement()
    }

    pub fn is_orthogonal_to(&self, other: &Self) -> bool {
        self.vectors
            .iter()
            .all(|u| other.vectors.iter().all(|v| dot(u, v).is_zero()))
    }

    /// Orthogonal projector `Bᵀ(BBᵀ)⁻¹B` onto the subspace. Exact over the
    /// rationals even when no rational orthonormal basis exists.
    pub fn projector(&self) -> Matrix<F> {
        let n = self.ambient_dim;
        if self.vectors.is_empty() {
            return Matrix::zeros(n, n);
        }
        let b = self.as_matrix();
        let bt = b.transpose();
        let gram = &b * &bt;
        let inv = gram
            .inverse()
            .expect("Gram matrix of an echelon basis is nonsingular");
        &(&bt * &inv) * &b
    }

    pub fn project(&self, v: &[F]) -> Vec<F> {
        self.projector().mul_vec(v)
    }

    /// Smallest subspace containing `self` that is invariant under every operator.
    pub fn invariant_closure(&self, operators: &[Matrix<F>]) -> Self {
        let mut current = self.clone();
        loop {
            let mut generators = current.vectors.clone();
            for op in operators {
                for v in &current.vectors {
                    let image = op.mul_vec(v);
                    if !is_zero_vec(&image) {
                        generators.push(image);
                    }
                }
            }
            let next = Self::span(self.ambient_dim, generators);
            if next.dim() == current.dim() {
                return next;
            }
            current = next;
        }
    }
}
