//! Left-invariant symmetric Killing 2-tensors, the Levi-Civita connection,
//! parallel tensors and Killing 2-forms.
//!
//! A symmetric `S` is Killing iff
//!
//! * `[Sx, y] = [x, Sy]` for all `x, y ∈ v`, and
//! * `z, z′ ↦ g([x, Sz], z′)` is skew for every `x ∈ v`.
//!
//! Both conditions are linear in `S`, so the Killing space is one nullspace.

use thiserror::Error;

use crate::liealg::{ideal_decomposition, InternalInconsistency, MetricLieAlgebra};
use crate::linalg::matrix::dot;
use crate::linalg::{nullspace, solve::linear_system, Matrix};
use crate::scalar::Scalar;
use crate::tensor::{MatrixSpace, SymTensor2, Symmetry};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum KillingError {
    #[error("tensor is {rows}×{cols}, algebra has dimension {expected}")]
    DimensionMismatch {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("tensor is not symmetric")]
    NotSymmetric,
    #[error("parallel tensors from the connection ({commutant}) and from the ideal decomposition ({ideal}) differ")]
    MethodMismatch { commutant: usize, ideal: usize },
    #[error("a component of a Killing tensor is not Killing: {0}")]
    ComponentNotKilling(&'static str),
    #[error("-T^2 is not Killing for a computed Killing 2-form")]
    FormNotKilling,
    #[error(transparent)]
    Decomposition(#[from] InternalInconsistency),
}

/// The violated condition with the largest residual, indices into the
/// canonical bases of `v` and `z` (0-based).
#[derive(Clone, Debug, PartialEq)]
pub enum KillingViolation<F> {
    /// `[Sx_a, x_b] − [x_a, Sx_b] ≠ 0`.
    ComplementPair { a: usize, b: usize, residual: F },
    /// `g([x_a, Sz_b], z_c) + g([x_a, Sz_c], z_b) ≠ 0`.
    CenterPair {
        a: usize,
        b: usize,
        c: usize,
        residual: F,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct KillingCheck<F> {
    pub is_killing: bool,
    pub worst: Option<KillingViolation<F>>,
}

fn complement_residual<F: Scalar>(
    alg: &MetricLieAlgebra<F>,
    s: &Matrix<F>,
    x: &[F],
    y: &[F],
) -> Vec<F> {
    let lhs = alg.bracket(&s.mul_vec(x), y);
    let rhs = alg.bracket(x, &s.mul_vec(y));
    lhs.into_iter().zip(rhs).map(|(a, b)| a - b).collect()
}

fn center_residual<F: Scalar>(
    alg: &MetricLieAlgebra<F>,
    s: &Matrix<F>,
    x: &[F],
    z1: &[F],
    z2: &[F],
) -> F {
    dot(&alg.bracket(x, &s.mul_vec(z1)), z2) + dot(&alg.bracket(x, &s.mul_vec(z2)), z1)
}

/// All constraint values of the Killing system, in a fixed order.
fn killing_constraints<F: Scalar>(alg: &MetricLieAlgebra<F>, s: &Matrix<F>) -> Vec<F> {
    let split = alg.split();
    let vs = split.complement.vectors();
    let zs = split.center.vectors();
    let mut out = Vec::new();
    for a in 0..vs.len() {
        for b in a..vs.len() {
            out.extend(complement_residual(alg, s, &vs[a], &vs[b]));
        }
    }
    for x in vs {
        for b in 0..zs.len() {
            for c in b..zs.len() {
                out.push(center_residual(alg, s, x, &zs[b], &zs[c]));
            }
        }
    }
    out
}

pub fn killing_space<F: Scalar>(alg: &MetricLieAlgebra<F>) -> MatrixSpace<F> {
    let n = alg.dim();
    let basis = Symmetry::Symmetric.basis(n);
    let system = linear_system(&basis, |s| killing_constraints(alg, s));
    MatrixSpace::from_coordinate_space(Symmetry::Symmetric, n, nullspace(&system))
}

fn check_shape<F: Scalar>(alg: &MetricLieAlgebra<F>, s: &Matrix<F>) -> Result<(), KillingError> {
    let n = alg.dim();
    if s.rows() != n || s.cols() != n {
        return Err(KillingError::DimensionMismatch {
            expected: n,
            rows: s.rows(),
            cols: s.cols(),
        });
    }
    if !s.is_symmetric() {
        return Err(KillingError::NotSymmetric);
    }
    Ok(())
}

pub fn is_killing<F: Scalar>(
    alg: &MetricLieAlgebra<F>,
    s: &SymTensor2<F>,
) -> Result<KillingCheck<F>, KillingError> {
    check_shape(alg, s)?;
    let split = alg.split();
    let vs = split.complement.vectors();
    let zs = split.center.vectors();
    let scale = alg.constant_scale() * s.max_abs().max(1.0);

    let mut worst: Option<(f64, KillingViolation<F>)> = None;
    let mut consider = |mag: f64, v: KillingViolation<F>| {
        if worst.as_ref().is_none_or(|(m, _)| mag > *m) {
            worst = Some((mag, v));
        }
    };
    for a in 0..vs.len() {
        for b in a..vs.len() {
            let r = complement_residual(alg, s, &vs[a], &vs[b]);
            let (idx, mag) = r
                .iter()
                .enumerate()
                .map(|(i, x)| (i, x.abs_f64()))
                .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if !r[idx].is_negligible(scale) {
                consider(
                    mag,
                    KillingViolation::ComplementPair {
                        a,
                        b,
                        residual: r[idx].clone(),
                    },
                );
            }
        }
    }
    for (a, x) in vs.iter().enumerate() {
        for b in 0..zs.len() {
            for c in b..zs.len() {
                let r = center_residual(alg, s, x, &zs[b], &zs[c]);
                if !r.is_negligible(scale) {
                    consider(
                        r.abs_f64(),
                        KillingViolation::CenterPair {
                            a,
                            b,
                            c,
                            residual: r,
                        },
                    );
                }
            }
        }
    }
    Ok(KillingCheck {
        is_killing: worst.is_none(),
        worst: worst.map(|(_, v)| v),
    })
}

/// `S = S^v + S^m + S^z` by orthogonal projection onto `Sym²v`, `v·z`, `Sym²z`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentSplit<F> {
    pub complement: SymTensor2<F>,
    pub mixed: SymTensor2<F>,
    pub center: SymTensor2<F>,
}

/// Splits `S`; when `S` is Killing, also checks that `S^v` and `S^m` are.
pub fn component_split<F: Scalar>(
    alg: &MetricLieAlgebra<F>,
    s: &SymTensor2<F>,
) -> Result<ComponentSplit<F>, KillingError> {
    check_shape(alg, s)?;
    let (sv, sm, sz) = alg.split().blocks(s);
    if is_killing(alg, s)?.is_killing {
        if !is_killing(alg, &sv)?.is_killing {
            return Err(KillingError::ComponentNotKilling("S^v"));
        }
        if !is_killing(alg, &sm)?.is_killing {
            return Err(KillingError::ComponentNotKilling("S^m"));
        }
    }
    Ok(ComponentSplit {
        complement: sv,
        mixed: sm,
        center: sz,
    })
}

/// `Λ_i` with `Λ_i y = ∇_{e_i} y` for left-invariant `y`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionTable<F> {
    pub matrices: Vec<Matrix<F>>,
}

impl<F: Scalar> ConnectionTable<F> {
    /// `Λ_x = Σ x_i Λ_i`.
    pub fn along(&self, x: &[F]) -> Matrix<F> {
        let n = x.len();
        crate::tensor::combine(x, &self.matrices, n)
    }
}

/// Koszul formula in an orthonormal left-invariant frame:
/// `g(∇_{e_i} e_k, e_m) = ½(c_ikm + c_mik + c_mki)`.
pub fn connection_table<F: Scalar>(alg: &MetricLieAlgebra<F>) -> ConnectionTable<F> {
    let n = alg.dim();
    let half = F::one() / F::from_i64(2);
    let matrices = (0..n)
        .map(|i| {
            Matrix::from_fn(n, n, |m, k| {
                (alg.constant(i, k, m).clone()
                    + alg.constant(m, i, k).clone()
                    + alg.constant(m, k, i).clone())
                    * half.clone()
            })
        })
        .collect();
    ConnectionTable { matrices }
}

/// Parallel symmetric tensors, computed as the commutant of the connection
/// and from the ideal decomposition; the two must agree.
#[derive(Clone, Debug, PartialEq)]
pub struct ParallelSpace<F> {
    pub space: MatrixSpace<F>,
}

pub fn parallel_space_from_connection<F: Scalar>(alg: &MetricLieAlgebra<F>) -> MatrixSpace<F> {
    let n = alg.dim();
    let table = connection_table(alg);
    let basis = Symmetry::Symmetric.basis(n);
    let system = linear_system(&basis, |s| {
        table
            .matrices
            .iter()
            .flat_map(|l| l.commutator(s).into_data())
            .collect()
    });
    MatrixSpace::from_coordinate_space(Symmetry::Symmetric, n, nullspace(&system))
}

pub fn parallel_space_from_ideals<F: Scalar>(
    alg: &MetricLieAlgebra<F>,
) -> Result<MatrixSpace<F>, KillingError> {
    let n = alg.dim();
    let dec = ideal_decomposition(alg)?;
    let mut gens: Vec<Matrix<F>> = dec.irreducible().map(|c| c.projector.clone()).collect();
    if let Some(a) = dec.abelian() {
        let vs = a.space.vectors();
        for i in 0..vs.len() {
            for j in i..vs.len() {
                gens.push(Matrix::sym_product(&vs[i], &vs[j]));
            }
        }
    }
    Ok(MatrixSpace::span(Symmetry::Symmetric, n, &gens))
}

pub fn parallel_space<F: Scalar>(
    alg: &MetricLieAlgebra<F>,
) -> Result<ParallelSpace<F>, KillingError> {
    let commutant = parallel_space_from_connection(alg);
    let ideal = parallel_space_from_ideals(alg)?;
    if !commutant.same_as(&ideal) {
        return Err(KillingError::MethodMismatch {
            commutant: commutant.dim(),
            ideal: ideal.dim(),
        });
    }
    Ok(ParallelSpace { space: commutant })
}

/// Skew `T` preserving `v` and `z` with `[Tx, y] = [x, Ty]` and
/// `T[x, y] = 3[Tx, y]` on `v`; each `−T²` is checked to be Killing.
pub fn killing_two_forms<F: Scalar>(
    alg: &MetricLieAlgebra<F>,
) -> Result<MatrixSpace<F>, KillingError> {
    let n = alg.dim();
    let split = alg.split();
    let (pv, pz) = (&split.complement_projector, &split.center_projector);
    let vs = split.complement.vectors();
    let three = F::from_i64(3);
    let basis = Symmetry::Skew.basis(n);
    let system = linear_system(&basis, |t| {
        let mut out = (&(pv * t) * pz).into_data();
        for a in 0..vs.len() {
            for b in a..vs.len() {
                let (x, y) = (&vs[a], &vs[b]);
                out.extend(complement_residual(alg, t, x, y));
                let lhs = t.mul_vec(&alg.bracket(x, y));
                let rhs = alg.bracket(&t.mul_vec(x), y);
                out.extend(lhs.into_iter().zip(rhs).map(|(l, r)| l - three.clone() * r));
            }
        }
        out
    });
    let space = MatrixSpace::from_coordinate_space(Symmetry::Skew, n, nullspace(&system));
    for t in space.basis() {
        if !is_killing(alg, &form_to_tensor(t))?.is_killing {
            return Err(KillingError::FormNotKilling);
        }
    }
    Ok(space)
}

/// `−T²`.
pub fn form_to_tensor<F: Scalar>(t: &Matrix<F>) -> SymTensor2<F> {
    -&(t * t)
}
