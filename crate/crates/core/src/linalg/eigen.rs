//! Symmetric eigendecomposition.
//!
//! Exact mode computes the characteristic polynomial (Faddeev–LeVerrier),
//! clears denominators and searches rational roots `p/q` with `p | a₀`,
//! `q | aₙ`. If the rational roots do not exhaust the dimension the caller
//! gets [`EigenError::NeedsFloatFallback`]. Float mode uses a standard
//! symmetric solver and merges eigenvalues closer than
//! `1e-9·(1 + spectral radius)` into one cluster.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use super::matrix::Matrix;
use super::solve::nullspace;
use super::subspace::SubspaceBasis;
use crate::scalar::{Rational, Scalar};

/// Relative gap under which float eigenvalues are merged.
pub const EIGEN_CLUSTER_TOL: f64 = 1e-9;

/// Largest integer whose divisors we are willing to enumerate.
const DIVISOR_SEARCH_LIMIT: u128 = 1_000_000_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct Eigenspace<F> {
    pub value: F,
    pub space: SubspaceBasis<F>,
    /// Orthogonal projector onto `space`.
    pub projector: Matrix<F>,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum EigenError {
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("rational roots account for {found} of {dim} dimensions; rerun in float mode")]
    NeedsFloatFallback { found: usize, dim: usize },
}

/// Eigenvalues sorted ascending, each with its eigenspace and projector.
pub fn eigendecompose_symmetric<F: Scalar>(
    s: &Matrix<F>,
) -> Result<Vec<Eigenspace<F>>, EigenError> {
    if !s.is_symmetric() {
        return Err(EigenError::NotSymmetric);
    }
    F::symmetric_eigen(s)
}

/// Coefficients `c₀ … cₙ` (ascending) of `det(λI − A)`.
pub fn characteristic_polynomial(a: &Matrix<Rational>) -> Vec<Rational> {
    let n = a.rows();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let id = Matrix::<Rational>::identity(n);
    let mut m = Matrix::<Rational>::zeros(n, n);
    for k in 1..=n {
        m = &(a * &m) + &id.scale(&coeffs[n + 1 - k]);
        let am = a * &m;
        coeffs[n - k] = -am.trace() / Rational::from_integer(BigInt::from(k));
    }
    coeffs
}

fn eval(poly: &[Rational], x: &Rational) -> Rational {
    poly.iter()
        .rev()
        .fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Synthetic division by `(λ − r)`; assumes `r` is a root.
fn deflate(poly: &[Rational], r: &Rational) -> Vec<Rational> {
    let n = poly.len() - 1;
    let mut out = vec![Rational::zero(); n];
    let mut carry = Rational::zero();
    for i in (0..n).rev() {
        carry = carry * r + &poly[i + 1];
        out[i] = carry.clone();
    }
    out
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u128()?;
    if n == 0 || n > DIVISOR_SEARCH_LIMIT {
        return None;
    }
    let mut primes = Vec::new();
    let mut rest = n;
    let mut p = 2u128;
    while p * p <= rest {
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            primes.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        primes.push((rest, 1));
    }
    let mut divs = vec![1u128];
    for (p, e) in primes {
        let mut next = Vec::with_capacity(divs.len() * (e + 1));
        for d in &divs {
            let mut pk = 1u128;
            for _ in 0..=e {
                next.push(d * pk);
                pk *= p;
            }
        }
        divs = next;
    }
    divs.sort_unstable();
    Some(divs.into_iter().map(BigInt::from).collect())
}

/// All rational roots with multiplicity, or `None` when the divisor search is
/// out of range.
fn rational_roots(poly: &[Rational]) -> Option<Vec<(Rational, usize)>> {
    let mut poly = poly.to_vec();
    let mut roots: Vec<(Rational, usize)> = Vec::new();
    let mut zero_mult = 0;
    while poly.len() > 1 && poly[0].is_zero() {
        poly.remove(0);
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push((Rational::zero(), zero_mult));
    }
    if poly.len() <= 1 {
        return Some(roots);
    }
    let lcm = poly
        .iter()
        .fold(BigInt::from(1), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = poly
        .iter()
        .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let a0 = ints[0].clone();
    let an = ints[ints.len() - 1].clone();
    let num_divs = divisors(&a0)?;
    let den_divs = divisors(&an)?;
    // Cauchy bound on root magnitude.
    let bound = poly[..poly.len() - 1]
        .iter()
        .map(|c| (c / &poly[poly.len() - 1]).abs())
        .fold(Rational::zero(), |a, b| if b > a { b } else { a })
        + Rational::one();
    let mut candidates: Vec<Rational> = Vec::new();
    for q in &den_divs {
        for p in &num_divs {
            let r = Rational::new(p.clone(), q.clone());
            if r > bound {
                continue;
            }
            candidates.push(r.clone());
            candidates.push(-r);
        }
    }
    candidates.sort();
    candidates.dedup();
    for r in candidates {
        let mut mult = 0;
        while poly.len() > 1 && eval(&poly, &r).is_zero() {
            poly = deflate(&poly, &r);
            mult += 1;
        }
        if mult > 0 {
            roots.push((r, mult));
        }
        if poly.len() == 1 {
            break;
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    Some(roots)
}

pub(crate) fn exact_symmetric_eigen(
    s: &Matrix<Rational>,
) -> Result<Vec<Eigenspace<Rational>>, EigenError> {
    let n = s.rows();
    let poly = characteristic_polynomial(s);
    let roots = rational_roots(&poly).ok_or(EigenError::NeedsFloatFallback { found: 0, dim: n })?;
    let found: usize = roots.iter().map(|(_, m)| m).sum();
    if found != n {
        return Err(EigenError::NeedsFloatFallback { found, dim: n });
    }
    let id = Matrix::<Rational>::identity(n);
    Ok(roots
        .into_iter()
        .map(|(value, mult)| {
            let space = nullspace(&(s - &id.scale(&value)));
            debug_assert_eq!(space.dim(), mult, "symmetric matrices are diagonalizable");
            let projector = space.projector();
            Eigenspace {
                value,
                space,
                projector,
            }
        })
        .collect())
}

pub(crate) fn float_symmetric_eigen(s: &Matrix<f64>) -> Result<Vec<Eigenspace<f64>>, EigenError> {
    let n = s.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let dm = DMatrix::from_row_slice(n, n, s.data());
    let eig = nalgebra::SymmetricEigen::new(dm);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let radius = eig.eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let tol = EIGEN_CLUSTER_TOL * (1.0 + radius);

    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match clusters.last_mut() {
            Some(c) if eig.eigenvalues[i] - eig.eigenvalues[*c.last().unwrap()] < tol => c.push(i),
            _ => clusters.push(vec![i]),
        }
    }

    Ok(clusters
        .into_iter()
        .map(|idx| {
            let value = idx.iter().map(|&i| eig.eigenvalues[i]).sum::<f64>() / idx.len() as f64;
            let raw: Vec<Vec<f64>> = idx
                .iter()
                .map(|&i| eig.eigenvectors.column(i).iter().copied().collect())
                .collect();
            let ortho = gram_schmidt(raw);
            let mut projector = Matrix::<f64>::zeros(n, n);
            for q in &ortho {
                projector = &projector + &Matrix::outer(q, q);
            }
            Eigenspace {
                value,
                space: SubspaceBasis::span(n, ortho),
                projector,
            }
        })
        .collect())
}

/// Modified Gram–Schmidt; drops numerically dependent vectors.
pub fn gram_schmidt(vectors: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for mut v in vectors {
        for q in &out {
            let c: f64 = v.iter().zip(q).map(|(a, b)| a * b).sum();
            for (x, y) in v.iter_mut().zip(q) {
                *x -= c * y;
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            out.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn identity_has_single_eigenvalue() {
        let e = eigendecompose_symmetric(&Matrix::<Rational>::identity(3)).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].value, int(1));
        assert_eq!(e[0].space.dim(), 3);
    }

    #[test]
    fn diag_one_two_blocks() {
        let s = Matrix::diagonal(&[int(1), int(1), int(1), int(2), int(2), int(2)]);
        let e = eigendecompose_symmetric(&s).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!((e[0].value.clone(), e[0].space.dim()), (int(1), 3));
        assert_eq!((e[1].value.clone(), e[1].space.dim()), (int(2), 3));
    }

    #[test]
    fn swap_matrix_plus_minus_one() {
        // Hand check: det(λI − A) = λ² − 1.
        let a = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(characteristic_polynomial(&a), vec![int(-1), int(0), int(1)]);
        let e = eigendecompose_symmetric(&a).unwrap();
        assert_eq!(
            e.iter().map(|x| x.value.clone()).collect::<Vec<_>>(),
            vec![int(-1), int(1)]
        );
        assert!(e.iter().all(|x| x.space.dim() == 1));
    }

    #[test]
    fn rational_eigenvalues_with_denominators() {
        let a = Matrix::diagonal(&[rat(1, 2), rat(-3, 4), rat(1, 2)]);
        let e = eigendecompose_symmetric(&a).unwrap();
        assert_eq!(e[0].value, rat(-3, 4));
        assert_eq!(e[1].value, rat(1, 2));
        assert_eq!(e[1].space.dim(), 2);
    }

    #[test]
    fn irrational_spectrum_requests_float() {
        // λ² − 2 has no rational roots.
        let a = m(&[&[0, 1], &[1, 0]]).scale(&int(1));
        let b = &a + &Matrix::diagonal(&[int(1), int(-1)]);
        assert!(matches!(
            eigendecompose_symmetric(&b),
            Err(EigenError::NeedsFloatFallback { .. })
        ));
        let f = eigendecompose_symmetric(&b.to_float()).unwrap();
        assert_eq!(f.len(), 2);
        assert!((f[1].value - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn float_clusters_merge_near_degenerate() {
        let a = Matrix::diagonal(&[1.0, 1.0 + 1e-13, 2.0]);
        let e = eigendecompose_symmetric(&a).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e[0].space.dim(), 2);
        let p = &e[0].projector;
        assert!((p * p).approx_eq(p, 1e-12));
    }

    #[test]
    fn non_symmetric_rejected() {
        assert_eq!(
            eigendecompose_symmetric(&m(&[&[1, 2], &[0, 1]])),
            Err(EigenError::NotSymmetric)
        );
    }
}
