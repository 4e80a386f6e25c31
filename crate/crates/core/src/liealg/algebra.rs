use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use super::split::{CenterSplit, JMap};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Unvalidated bracket table `c[i][j][k]` with `[e_i, e_j] = Σ_k c[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants<F> {
    dim: usize,
    names: Vec<String>,
    constants: Vec<F>,
}

impl<F: Scalar> StructureConstants<F> {
    /// All brackets zero, basis named `e1 … eN`.
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            names: (1..=dim).map(|i| format!("e{i}")).collect(),
            constants: vec![F::zero(); dim * dim * dim],
        }
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.dim, "one name per basis vector");
        self.names = names;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &F {
        &self.constants[self.index(i, j, k)]
    }

    /// Sets a single entry without touching `c[j][i][k]`.
    pub fn set(&mut self, i: usize, j: usize, k: usize, value: F) {
        let idx = self.index(i, j, k);
        self.constants[idx] = value;
    }

    /// Sets `[e_i, e_j] = Σ coeff·e_k` and the antisymmetric partner.
    pub fn set_bracket(&mut self, i: usize, j: usize, terms: &[(usize, F)]) {
        for k in 0..self.dim {
            self.set(i, j, k, F::zero());
            self.set(j, i, k, F::zero());
        }
        for (k, c) in terms {
            let cur = self.get(i, j, *k).clone();
            self.set(i, j, *k, cur.clone() + c.clone());
            self.set(j, i, *k, -(cur + c.clone()));
        }
    }

    pub fn to_float(&self) -> StructureConstants<f64> {
        StructureConstants {
            dim: self.dim,
            names: self.names.clone(),
            constants: self.constants.iter().map(Scalar::to_f64).collect(),
        }
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &[F] {
        let start = self.index(i, j, 0);
        &self.constants[start..start + self.dim]
    }

    fn bracket(&self, x: &[F], y: &[F]) -> Vec<F> {
        bracket_with(self.dim, |i, j| self.bracket_basis(i, j), x, y)
    }

    fn max_abs(&self) -> f64 {
        self.constants
            .iter()
            .map(Scalar::abs_f64)
            .fold(0.0, f64::max)
    }
}

fn bracket_with<'a, F: Scalar>(
    n: usize,
    basis: impl Fn(usize, usize) -> &'a [F],
    x: &[F],
    y: &[F],
) -> Vec<F> {
    let mut out = vec![F::zero(); n];
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() || i == j {
                continue;
            }
            let coeff = xi.clone() * yj.clone();
            for (o, c) in out.iter_mut().zip(basis(i, j)) {
                if !c.is_zero() {
                    *o = o.clone() + coeff.clone() * c.clone();
                }
            }
        }
    }
    out
}

/// One failed identity, with 0-based basis indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `c[i][j][k] ≠ −c[j][i][k]` (or `[e_i, e_i] ≠ 0` when `i = j`).
    NotAntisymmetric {
        i: usize,
        j: usize,
        k: usize,
    },
    JacobiFails {
        i: usize,
        j: usize,
        k: usize,
    },
    /// `[[e_i, e_j], e_k] ≠ 0`.
    NotTwoStep {
        i: usize,
        j: usize,
        k: usize,
    },
    Abelian,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotAntisymmetric { i, j, k } => {
                write!(
                    f,
                    "NotAntisymmetric: c[{i}][{j}][{k}] != -c[{j}][{i}][{k}] (0-based)"
                )
            }
            Violation::JacobiFails { i, j, k } => {
                write!(
                    f,
                    "JacobiFails: Jacobi identity fails on basis triple ({i}, {j}, {k}) (0-based)"
                )
            }
            Violation::NotTwoStep { i, j, k } => {
                write!(f, "NotTwoStep: [[b{i}, b{j}], b{k}] != 0 (0-based basis b)")
            }
            Violation::Abelian => write!(f, "Abelian: all brackets vanish"),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("invalid Lie algebra ({} violation(s)): {}", .violations.len(), first(.violations))]
pub struct ValidationError {
    pub violations: Vec<Violation>,
}

fn first(v: &[Violation]) -> String {
    v.first().map(ToString::to_string).unwrap_or_default()
}

/// A validated 2-step nilpotent Lie algebra whose basis is orthonormal for the metric.
#[derive(Clone, Debug)]
pub struct MetricLieAlgebra<F> {
    constants: StructureConstants<F>,
    split: OnceLock<CenterSplit<F>>,
    jmap: OnceLock<JMap<F>>,
}

impl<F: Scalar> PartialEq for MetricLieAlgebra<F> {
    fn eq(&self, other: &Self) -> bool {
        self.constants == other.constants
    }
}

/// Checks antisymmetry, Jacobi, the 2-step condition and non-abelianness,
/// collecting every violation.
pub fn validate<F: Scalar>(
    raw: StructureConstants<F>,
) -> Result<MetricLieAlgebra<F>, ValidationError> {
    let n = raw.dim;
    let scale = raw.max_abs().max(1.0);
    let scale2 = scale * scale;
    let mut violations = Vec::new();

    for i in 0..n {
        for j in i..n {
            for k in 0..n {
                let sum = raw.get(i, j, k).clone() + raw.get(j, i, k).clone();
                let bad = if i == j {
                    !raw.get(i, i, k).is_negligible(scale)
                } else {
                    !sum.is_negligible(scale)
                };
                if bad {
                    violations.push(Violation::NotAntisymmetric { i, j, k });
                }
            }
        }
    }

    if raw.constants.iter().all(|c| c.is_negligible(scale)) {
        violations.push(Violation::Abelian);
        return Err(ValidationError { violations });
    }

    let unit = |i: usize| crate::linalg::matrix::unit::<F>(n, i);
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (ei, ej, ek) = (unit(i), unit(j), unit(k));
                let t1 = raw.bracket(&ei, raw.bracket_basis(j, k));
                let t2 = raw.bracket(&ej, raw.bracket_basis(k, i));
                let t3 = raw.bracket(&ek, raw.bracket_basis(i, j));
                let fails = (0..n).any(|m| {
                    !(t1[m].clone() + t2[m].clone() + t3[m].clone()).is_negligible(scale2)
                });
                if fails {
                    violations.push(Violation::JacobiFails { i, j, k });
                }
            }
        }
    }

    for i in 0..n {
        for j in i + 1..n {
            let inner = raw.bracket_basis(i, j).to_vec();
            for k in 0..n {
                let outer = raw.bracket(&inner, &unit(k));
                if outer.iter().any(|c| !c.is_negligible(scale2)) {
                    violations.push(Violation::NotTwoStep { i, j, k });
                }
            }
        }
    }

    if violations.is_empty() {
        Ok(MetricLieAlgebra {
            constants: raw,
            split: OnceLock::new(),
            jmap: OnceLock::new(),
        })
    } else {
        Err(ValidationError { violations })
    }
}

impl<F: Scalar> MetricLieAlgebra<F> {
    pub fn dim(&self) -> usize {
        self.constants.dim
    }

    pub fn names(&self) -> &[String] {
        &self.constants.names
    }

    pub fn structure_constants(&self) -> &StructureConstants<F> {
        &self.constants
    }

    /// `max(1, max |c_ijk|)`, the magnitude used for float zero tests.
    pub fn constant_scale(&self) -> f64 {
        self.constants.max_abs().max(1.0)
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &F {
        self.constants.get(i, j, k)
    }

    /// `[e_i, e_j]` as a coordinate vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[F] {
        self.constants.bracket_basis(i, j)
    }

    pub fn bracket(&self, x: &[F], y: &[F]) -> Vec<F> {
        self.constants.bracket(x, y)
    }

    /// Matrix of `y ↦ [x, y]`.
    pub fn ad(&self, x: &[F]) -> Matrix<F> {
        let n = self.dim();
        let mut m = Matrix::<F>::zeros(n, n);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for j in 0..n {
                for (k, c) in self.bracket_basis(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        m[(k, j)] = m[(k, j)].clone() + xi.clone() * c.clone();
                    }
                }
            }
        }
        m
    }

    /// The operator `j(z)` on the whole algebra: `g(j(z)x, y) = g(z, [x, y])`.
    ///
    /// For `z` in the center this is skew, vanishes on `z` and maps into `v`;
    /// it is linear in `z` and zero for `z ∈ v`.
    pub fn j_operator(&self, z: &[F]) -> Matrix<F> {
        let n = self.dim();
        Matrix::from_fn(n, n, |k, i| {
            let c = self.bracket_basis(i, k);
            crate::linalg::matrix::dot(z, c)
        })
    }

    pub fn split(&self) -> &CenterSplit<F> {
        self.split.get_or_init(|| CenterSplit::compute(self))
    }

    pub fn j_map(&self) -> &JMap<F> {
        self.jmap.get_or_init(|| JMap::compute(self))
    }

    pub fn basis_index(&self, name: &str) -> Option<usize> {
        self.names().iter().position(|n| n == name)
    }

    pub fn to_float(&self) -> MetricLieAlgebra<f64> {
        MetricLieAlgebra {
            constants: self.constants.to_float(),
            split: OnceLock::new(),
            jmap: OnceLock::new(),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum GramError {
    #[error("Gram matrix must be {expected}×{expected}, got {rows}×{cols}")]
    Shape {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("Gram matrix is not positive definite")]
    NotPositiveDefinite,
    #[error(transparent)]
    Invalid(#[from] ValidationError),
}

/// An algebra given in a basis with Gram matrix `G`, re-expressed in the
/// orthonormal basis `f_p = Σ_k M[k][p] e_k` with `M = L^{-T}`, `G = L Lᵀ`.
#[derive(Clone, Debug)]
pub struct Orthonormalized {
    pub algebra: MetricLieAlgebra<f64>,
    /// Columns are the new basis vectors in old coordinates.
    pub change_of_basis: Matrix<f64>,
}

impl Orthonormalized {
    /// A bilinear form given in the original basis, rewritten as `Mᵀ S M`.
    pub fn transform_form(&self, s: &Matrix<f64>) -> Matrix<f64> {
        let m = &self.change_of_basis;
        &(&m.transpose() * s) * m
    }
}

pub fn orthonormalize(
    raw: &StructureConstants<f64>,
    gram: &Matrix<f64>,
) -> Result<Orthonormalized, GramError> {
    let n = raw.dim();
    if gram.rows() != n || gram.cols() != n {
        return Err(GramError::Shape {
            expected: n,
            rows: gram.rows(),
            cols: gram.cols(),
        });
    }
    if !gram.is_symmetric() {
        return Err(GramError::NotSymmetric);
    }
    let g = nalgebra::DMatrix::from_row_slice(n, n, gram.data());
    let chol = nalgebra::Cholesky::new(g).ok_or(GramError::NotPositiveDefinite)?;
    let l = chol.l();
    let l_inv = l
        .clone()
        .try_inverse()
        .ok_or(GramError::NotPositiveDefinite)?;
    let m = l_inv.transpose();

    let mut out = StructureConstants::<f64>::new(n).with_names(raw.names().to_vec());
    for i in 0..n {
        for j in 0..n {
            for p in 0..n {
                let mut acc = 0.0;
                for k in 0..n {
                    for l_idx in 0..n {
                        let coeff = m[(k, i)] * m[(l_idx, j)];
                        if coeff == 0.0 {
                            continue;
                        }
                        for (mm, c) in raw.bracket_basis(k, l_idx).iter().enumerate() {
                            acc += coeff * c * l[(mm, p)];
                        }
                    }
                }
                out.set(i, j, p, acc);
            }
        }
    }
    let algebra = validate(out)?;
    Ok(Orthonormalized {
        algebra,
        change_of_basis: Matrix::from_fn(n, n, |i, j| m[(i, j)]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, Rational};

    fn heis1() -> StructureConstants<Rational> {
        let mut c = StructureConstants::new(3);
        c.set_bracket(0, 1, &[(2, int(1))]);
        c
    }

    #[test]
    fn heisenberg_is_valid() {
        let alg = validate(heis1()).unwrap();
        assert_eq!(alg.bracket_basis(1, 0), &[int(0), int(0), int(-1)]);
    }

    #[test]
    fn solvable_counterexample_is_not_two_step() {
        let mut c = StructureConstants::new(3);
        c.set_bracket(1, 2, &[(0, int(1))]);
        c.set_bracket(2, 0, &[(1, int(1))]);
        let err = validate(c).unwrap_err();
        assert!(err
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NotTwoStep { .. })));
        assert!(!err
            .violations
            .iter()
            .any(|v| matches!(v, Violation::JacobiFails { .. })));
    }

    #[test]
    fn zero_brackets_are_abelian() {
        let err = validate(StructureConstants::<Rational>::new(4)).unwrap_err();
        assert_eq!(err.violations, vec![Violation::Abelian]);
    }

    #[test]
    fn antisymmetry_violation_is_located() {
        let mut c = heis1();
        c.set(1, 0, 2, int(1));
        let err = validate(c).unwrap_err();
        assert!(err
            .violations
            .contains(&Violation::NotAntisymmetric { i: 0, j: 1, k: 2 }));
    }

    #[test]
    fn jacobi_violation_is_located() {
        let mut c = StructureConstants::new(3);
        c.set_bracket(0, 1, &[(2, int(1))]);
        c.set_bracket(0, 2, &[(0, int(1))]);
        let err = validate(c).unwrap_err();
        assert!(err
            .violations
            .contains(&Violation::JacobiFails { i: 0, j: 1, k: 2 }));
    }

    #[test]
    fn j_operator_matches_defining_identity() {
        let alg = validate(heis1()).unwrap();
        let z = [int(0), int(0), int(1)];
        let j = alg.j_operator(&z);
        // j(z) x = y and j(z) y = −x.
        assert_eq!(j[(1, 0)], int(1));
        assert_eq!(j[(0, 1)], int(-1));
        assert!(j.is_skew());
        assert!(alg.j_operator(&[int(0), int(0), int(0)]).is_zero());
    }

    #[test]
    fn gram_orthonormalization_rescales_brackets() {
        let mut c = StructureConstants::<f64>::new(3);
        c.set_bracket(0, 1, &[(2, 1.0)]);
        // |e3|² = 4: the unit center vector is e3/2, so [e1, e2] = 2·(e3/2).
        let gram = Matrix::diagonal(&[1.0, 1.0, 4.0]);
        let on = orthonormalize(&c, &gram).unwrap();
        assert!((on.algebra.constant(0, 1, 2) - 2.0).abs() < 1e-12);
        let s = on.transform_form(&gram);
        assert!(s.approx_eq(&Matrix::identity(3), 1e-12));
    }
}
