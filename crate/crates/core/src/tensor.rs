//! Coordinates on symmetric and skew-symmetric matrices, and subspaces of them.

use crate::linalg::{Matrix, SubspaceBasis};
use crate::scalar::Scalar;

/// A symmetric 2-tensor, identified with a symmetric endomorphism through the
/// orthonormal basis.
pub type SymTensor2<F> = Matrix<F>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    Symmetric,
    Skew,
}

impl Symmetry {
    pub fn coordinate_dim(self, n: usize) -> usize {
        match self {
            Symmetry::Symmetric => n * (n + 1) / 2,
            Symmetry::Skew => n * n.saturating_sub(1) / 2,
        }
    }

    fn pairs(self, n: usize) -> impl Iterator<Item = (usize, usize)> {
        let offset = usize::from(self == Symmetry::Skew);
        (0..n).flat_map(move |i| (i + offset..n).map(move |j| (i, j)))
    }

    /// `E_ii`, `E_ij + E_ji` (symmetric) or `e_i ∧ e_j` (skew), for `i ≤ j` / `i < j`.
    pub fn basis<F: Scalar>(self, n: usize) -> Vec<Matrix<F>> {
        self.pairs(n)
            .map(|(i, j)| {
                let mut m = Matrix::zeros(n, n);
                match self {
                    Symmetry::Symmetric => {
                        m[(i, j)] = F::one();
                        m[(j, i)] = F::one();
                    }
                    Symmetry::Skew => {
                        m[(j, i)] = F::one();
                        m[(i, j)] = -F::one();
                    }
                }
                m
            })
            .collect()
    }

    /// Coordinates with respect to [`Symmetry::basis`]; the input is assumed
    /// to have the matching symmetry.
    pub fn coordinates<F: Scalar>(self, m: &Matrix<F>) -> Vec<F> {
        let n = m.rows();
        self.pairs(n)
            .map(|(i, j)| match self {
                Symmetry::Symmetric => m[(i, j)].clone(),
                Symmetry::Skew => m[(j, i)].clone(),
            })
            .collect()
    }

    pub fn from_coordinates<F: Scalar>(self, n: usize, coords: &[F]) -> Matrix<F> {
        assert_eq!(coords.len(), self.coordinate_dim(n));
        combine(coords, &self.basis(n), n)
    }
}

/// `Σ c_k M_k`.
pub fn combine<F: Scalar>(coeffs: &[F], mats: &[Matrix<F>], n: usize) -> Matrix<F> {
    coeffs
        .iter()
        .zip(mats)
        .filter(|(c, _)| !c.is_zero())
        .fold(Matrix::zeros(n, n), |acc, (c, m)| &acc + &m.scale(c))
}

/// The map `x ↦ v·g(u, x) − u·g(v, x)`, sending `u` to `v` when both are
/// orthonormal.
pub fn wedge<F: Scalar>(u: &[F], v: &[F]) -> Matrix<F> {
    &Matrix::outer(v, u) - &Matrix::outer(u, v)
}

/// A linear space of symmetric or skew matrices, stored canonically in coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixSpace<F> {
    symmetry: Symmetry,
    n: usize,
    coords: SubspaceBasis<F>,
    basis: Vec<Matrix<F>>,
}

impl<F: Scalar> MatrixSpace<F> {
    pub fn span(symmetry: Symmetry, n: usize, mats: &[Matrix<F>]) -> Self {
        let coords = SubspaceBasis::span(
            symmetry.coordinate_dim(n),
            mats.iter().map(|m| symmetry.coordinates(m)).collect(),
        );
        Self::from_coordinate_space(symmetry, n, coords)
    }

    pub fn from_coordinate_space(symmetry: Symmetry, n: usize, coords: SubspaceBasis<F>) -> Self {
        let basis = coords
            .vectors()
            .iter()
            .map(|c| symmetry.from_coordinates(n, c))
            .collect();
        Self {
            symmetry,
            n,
            coords,
            basis,
        }
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Matrix<F>] {
        &self.basis
    }

    pub fn coordinate_space(&self) -> &SubspaceBasis<F> {
        &self.coords
    }

    pub fn contains(&self, m: &Matrix<F>) -> bool {
        self.coords.contains(&self.symmetry.coordinates(m))
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.coords.is_subspace_of(&other.coords)
    }

    pub fn same_as(&self, other: &Self) -> bool {
        self.symmetry == other.symmetry && self.coords.same_as(&other.coords)
    }

    pub fn combination(&self, coeffs: &[F]) -> Matrix<F> {
        combine(coeffs, &self.basis, self.n)
    }
}
