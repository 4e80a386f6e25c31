//! Row reduction, nullspaces and affine solving.

use super::matrix::{dot, Matrix};
use super::subspace::SubspaceBasis;
use crate::scalar::Scalar;

/// Reduced row-echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon<F> {
    /// Only the nonzero rows; `reduced.rows() == pivots.len()`.
    pub reduced: Matrix<F>,
    pub pivots: Vec<usize>,
}

impl<F> Echelon<F> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Gauss–Jordan elimination. Exact fields pivot on the first nonzero entry,
/// floats use partial pivoting with a relative zero threshold.
pub fn rref<F: Scalar>(m: &Matrix<F>) -> Echelon<F> {
    let cols = m.cols();
    let scale = if F::EXACT { 1.0 } else { m.max_abs() };
    let mut rows: Vec<Vec<F>> = m
        .row_vecs()
        .into_iter()
        .filter(|r| !r.iter().all(|x| x.is_negligible(scale)))
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let candidate = if F::EXACT {
            (r..rows.len()).find(|&i| !rows[i][c].is_zero())
        } else {
            (r..rows.len())
                .max_by(|&a, &b| rows[a][c].abs_f64().total_cmp(&rows[b][c].abs_f64()))
                .filter(|&i| !rows[i][c].is_negligible(scale))
        };
        let Some(p) = candidate else { continue };
        rows.swap(r, p);
        let inv = F::one() / rows[r][c].clone();
        for x in rows[r][c..].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() && F::EXACT {
                continue;
            }
            let factor = row[c].clone();
            if factor.is_negligible(scale) && !F::EXACT {
                row[c] = F::zero();
                continue;
            }
            for (x, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                if F::EXACT && p.is_zero() {
                    continue;
                }
                *x = x.clone() - factor.clone() * p.clone();
            }
            row[c] = F::zero();
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    if !F::EXACT {
        for row in rows.iter_mut() {
            for x in row.iter_mut() {
                if x.is_negligible(scale) {
                    *x = F::zero();
                }
            }
        }
    }
    let reduced = if rows.is_empty() {
        Matrix::zeros(0, cols)
    } else {
        Matrix::from_rows(rows)
    };
    Echelon { reduced, pivots }
}

pub fn rank<F: Scalar>(m: &Matrix<F>) -> usize {
    rref(m).rank()
}

/// Canonical basis of `{x : Mx = 0}`.
pub fn nullspace<F: Scalar>(m: &Matrix<F>) -> SubspaceBasis<F> {
    let ech = rref(m);
    SubspaceBasis::span(m.cols(), nullspace_vectors(&ech, m.cols()))
}

fn nullspace_vectors<F: Scalar>(ech: &Echelon<F>, cols: usize) -> Vec<Vec<F>> {
    let free: Vec<usize> = (0..cols).filter(|c| !ech.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![F::zero(); cols];
            x[f] = F::one();
            for (k, &p) in ech.pivots.iter().enumerate() {
                x[p] = -ech.reduced[(k, f)].clone();
            }
            x
        })
        .collect()
}

/// Evidence that `Mx = b` has no solution: `yᵀM = 0` while `yᵀb ≠ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct InfeasibilityWitness<F> {
    pub left_kernel: Vec<F>,
    /// `yᵀb`, nonzero.
    pub pairing: F,
    pub rank: usize,
    pub augmented_rank: usize,
}

impl<F: Scalar> InfeasibilityWitness<F> {
    /// Re-checks the witness against the system it claims to refute.
    pub fn verify(&self, m: &Matrix<F>, b: &[F]) -> bool {
        let y = &self.left_kernel;
        if y.len() != m.rows() || b.len() != m.rows() {
            return false;
        }
        let scale = m.max_abs().max(1.0) * y.iter().map(Scalar::abs_f64).fold(1.0, f64::max);
        let yt_m = m.transpose().mul_vec(y);
        yt_m.iter().all(|x| x.is_negligible(scale)) && !dot(y, b).is_negligible(scale)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AffineSolution<F> {
    Feasible {
        particular: Vec<F>,
        homogeneous: SubspaceBasis<F>,
    },
    Infeasible(InfeasibilityWitness<F>),
}

impl<F: Scalar> AffineSolution<F> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, AffineSolution::Feasible { .. })
    }

    pub fn particular(&self) -> Option<&[F]> {
        match self {
            AffineSolution::Feasible { particular, .. } => Some(particular),
            AffineSolution::Infeasible(_) => None,
        }
    }
}

/// Solves `Mx = b`. Infeasibility is a normal outcome and comes with a
/// left-kernel certificate.
pub fn solve_affine<F: Scalar>(m: &Matrix<F>, b: &[F]) -> AffineSolution<F> {
    assert_eq!(m.rows(), b.len(), "rows(M) must equal len(b)");
    let n = m.cols();
    let augmented = Matrix::from_fn(m.rows(), n + 1, |i, j| {
        if j < n {
            m[(i, j)].clone()
        } else {
            b[i].clone()
        }
    });
    let ech = rref(&augmented);
    if ech.pivots.last() == Some(&n) {
        let rank = ech.rank() - 1;
        return AffineSolution::Infeasible(left_kernel_witness(m, b, rank));
    }
    let mut particular = vec![F::zero(); n];
    for (k, &p) in ech.pivots.iter().enumerate() {
        particular[p] = ech.reduced[(k, n)].clone();
    }
    let homogeneous = SubspaceBasis::span(n, nullspace_vectors(&ech, n));
    AffineSolution::Feasible {
        particular,
        homogeneous,
    }
}

fn left_kernel_witness<F: Scalar>(m: &Matrix<F>, b: &[F], rank: usize) -> InfeasibilityWitness<F> {
    let left = nullspace(&m.transpose());
    let scale = m.max_abs().max(1.0);
    let y = left
        .vectors()
        .iter()
        .max_by(|u, v| dot(u, b).abs_f64().total_cmp(&dot(v, b).abs_f64()))
        .filter(|y| !dot(y, b).is_negligible(scale))
        .cloned()
        // The augmented rank exceeds rank(M), so some left-kernel vector pairs
        // nontrivially with b; reaching this means the elimination disagreed with itself.
        .expect("inconsistent system without a separating left-kernel vector");
    let pairing = dot(&y, b);
    InfeasibilityWitness {
        left_kernel: y,
        pairing,
        rank,
        augmented_rank: rank + 1,
    }
}

/// Helper that assembles the coefficient matrix of a linear map given by its
/// action on a list of basis elements: column `k` is `f(basis[k])`.
pub fn linear_system<F: Scalar, T>(basis: &[T], f: impl Fn(&T) -> Vec<F>) -> Matrix<F> {
    let columns: Vec<Vec<F>> = basis.iter().map(f).collect();
    let rows = columns.first().map_or(0, Vec::len);
    assert!(
        columns.iter().all(|c| c.len() == rows),
        "ragged linear system"
    );
    Matrix::from_fn(rows, columns.len(), |i, j| columns[j][i].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, Rational};

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn nullspace_of_zero_matrix_is_everything() {
        let ns = nullspace(&Matrix::<Rational>::zeros(3, 3));
        assert_eq!(ns.dim(), 3);
    }

    #[test]
    fn nullspace_of_identity_is_empty() {
        assert_eq!(nullspace(&Matrix::<Rational>::identity(4)).dim(), 0);
    }

    #[test]
    fn nullspace_rank_one() {
        // Hand reduction: x + 2y = 0  =>  (−2, 1).
        let ns = nullspace(&m(&[&[1, 2], &[2, 4]]));
        assert_eq!(ns.dim(), 1);
        assert!(ns.contains(&[int(-2), int(1)]));
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])) + ns.dim(), 2);
    }

    #[test]
    fn affine_identity() {
        let sol = solve_affine(&Matrix::<Rational>::identity(2), &[int(3), int(5)]);
        match sol {
            AffineSolution::Feasible {
                particular,
                homogeneous,
            } => {
                assert_eq!(particular, vec![int(3), int(5)]);
                assert_eq!(homogeneous.dim(), 0);
            }
            _ => panic!("expected feasible"),
        }
    }

    #[test]
    fn affine_underdetermined() {
        let sol = solve_affine(&m(&[&[1, 1]]), &[int(2)]);
        match sol {
            AffineSolution::Feasible {
                particular,
                homogeneous,
            } => {
                assert_eq!(particular, vec![int(2), int(0)]);
                assert_eq!(homogeneous.dim(), 1);
            }
            _ => panic!("expected feasible"),
        }
    }

    #[test]
    fn affine_contradictory_rows() {
        let a = m(&[&[1], &[1]]);
        let b = [int(0), int(1)];
        match solve_affine(&a, &b) {
            AffineSolution::Infeasible(w) => {
                assert!(w.verify(&a, &b));
                assert_eq!(w.rank, 1);
                assert_eq!(w.augmented_rank, 2);
            }
            _ => panic!("expected infeasible"),
        }
    }

    #[test]
    fn float_rank_respects_tolerance() {
        let a = Matrix::from_rows(vec![vec![1.0, 2.0], vec![2.0, 4.0 + 1e-13]]);
        assert_eq!(rank(&a), 1);
        let b = Matrix::from_rows(vec![vec![1.0, 2.0], vec![2.0, 4.1]]);
        assert_eq!(rank(&b), 2);
    }
}
