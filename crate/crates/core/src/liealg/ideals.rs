//! Orthogonal decomposition of an algebra into irreducible ideals plus the
//! abelian factor.
//!
//! The complement `v` is refined into mutually orthogonal subspaces invariant
//! under every `j(z)`; a refinement step either finds a proper cyclic
//! subspace or, failing that, a proper eigenspace of a symmetric operator
//! commuting with all `j(z)`. Each piece `u` has derived span `w = [u, u]`.
//! Pieces with non-orthogonal derived spans are merged transitively, and each
//! group `(⊕u) ⊕ (Σw)` is an ideal. Every output is re-verified.

use thiserror::Error;

use super::algebra::MetricLieAlgebra;
use crate::linalg::matrix::unit;
use crate::linalg::{
    eigendecompose_symmetric, nullspace, solve::linear_system, Matrix, SubspaceBasis,
};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentKind {
    Irreducible,
    Abelian,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Component<F> {
    pub kind: ComponentKind,
    pub space: SubspaceBasis<F>,
    /// `space ∩ v`; empty for the abelian factor.
    pub complement_part: SubspaceBasis<F>,
    /// `space ∩ z`.
    pub center_part: SubspaceBasis<F>,
    pub projector: Matrix<F>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdealDecomposition<F> {
    pub components: Vec<Component<F>>,
}

impl<F: Scalar> IdealDecomposition<F> {
    pub fn irreducible(&self) -> impl Iterator<Item = &Component<F>> {
        self.components
            .iter()
            .filter(|c| c.kind == ComponentKind::Irreducible)
    }

    pub fn abelian(&self) -> Option<&Component<F>> {
        self.components
            .iter()
            .find(|c| c.kind == ComponentKind::Abelian)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("ideal decomposition failed verification: {0}")]
pub struct InternalInconsistency(pub String);

pub fn ideal_decomposition<F: Scalar>(
    alg: &MetricLieAlgebra<F>,
) -> Result<IdealDecomposition<F>, InternalInconsistency> {
    let n = alg.dim();
    let split = alg.split();
    let ops = &alg.j_map().operators;
    let pieces = refine_invariant(&split.complement, ops);
    let derived: Vec<SubspaceBasis<F>> = pieces.iter().map(|u| derived_span(alg, u)).collect();

    let mut parent: Vec<usize> = (0..pieces.len()).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for a in 0..pieces.len() {
        for b in a + 1..pieces.len() {
            if !derived[a].is_orthogonal_to(&derived[b]) {
                let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }

    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for i in 0..pieces.len() {
        let r = root(&mut parent, i);
        match groups.iter_mut().find(|(g, _)| *g == r) {
            Some((_, members)) => members.push(i),
            None => groups.push((r, vec![i])),
        }
    }

    let mut components = Vec::new();
    for (_, members) in groups {
        let complement_part = members
            .iter()
            .fold(SubspaceBasis::zero(n), |acc, &i| acc.sum(&pieces[i]));
        let center_part = members
            .iter()
            .fold(SubspaceBasis::zero(n), |acc, &i| acc.sum(&derived[i]));
        let space = complement_part.sum(&center_part);
        components.push(Component {
            kind: ComponentKind::Irreducible,
            projector: space.projector(),
            space,
            complement_part,
            center_part,
        });
    }
    components.sort_by_key(|c| c.space.vectors().first().map(|v| leading_index(v)));

    if !split.abelian_factor.is_zero() {
        let a = split.abelian_factor.clone();
        components.push(Component {
            kind: ComponentKind::Abelian,
            projector: split.abelian_projector.clone(),
            complement_part: SubspaceBasis::zero(n),
            center_part: a.clone(),
            space: a,
        });
    }

    let decomposition = IdealDecomposition { components };
    verify(alg, &decomposition)?;
    Ok(decomposition)
}

fn leading_index<F: Scalar>(v: &[F]) -> usize {
    v.iter().position(|x| !x.is_zero()).unwrap_or(usize::MAX)
}

/// `span{[x, y] : x, y ∈ u}`.
pub fn derived_span<F: Scalar>(
    alg: &MetricLieAlgebra<F>,
    u: &SubspaceBasis<F>,
) -> SubspaceBasis<F> {
    let vs = u.vectors();
    let mut out = Vec::new();
    for a in 0..vs.len() {
        for b in a + 1..vs.len() {
            out.push(alg.bracket(&vs[a], &vs[b]));
        }
    }
    SubspaceBasis::span(alg.dim(), out)
}

/// Splits `space` (assumed invariant under the skew operators `ops`) into
/// mutually orthogonal invariant subspaces that admit no further split found
/// by cyclic closures or symmetric commutant eigenspaces. Output is ordered by
/// leading coordinate.
pub fn refine_invariant<F: Scalar>(
    space: &SubspaceBasis<F>,
    ops: &[Matrix<F>],
) -> Vec<SubspaceBasis<F>> {
    let mut done = Vec::new();
    let mut todo = vec![space.clone()];
    while let Some(u) = todo.pop() {
        if u.dim() <= 1 {
            if !u.is_zero() {
                done.push(u);
            }
            continue;
        }
        match find_split(&u, ops) {
            Some(w) => {
                let rest = u.intersection(&w.orthogonal_complement());
                todo.push(rest);
                todo.push(w);
            }
            None => done.push(u),
        }
    }
    done.sort_by_key(|u| u.vectors().first().map(|v| leading_index(v)));
    done
}

fn find_split<F: Scalar>(u: &SubspaceBasis<F>, ops: &[Matrix<F>]) -> Option<SubspaceBasis<F>> {
    let n = u.ambient_dim();
    let p = u.projector();
    let mut candidates: Vec<Vec<F>> = u.vectors().to_vec();
    candidates.extend((0..n).map(|i| p.col(i)));
    for c in candidates {
        if c.iter().all(Scalar::is_zero) {
            continue;
        }
        let w = SubspaceBasis::span(n, vec![c]).invariant_closure(ops);
        if w.dim() < u.dim() {
            return Some(w);
        }
    }
    commutant_split(u, ops)
}

/// Looks for a symmetric `X` supported on `u` commuting with every operator
/// and having a proper eigenspace inside `u`.
fn commutant_split<F: Scalar>(u: &SubspaceBasis<F>, ops: &[Matrix<F>]) -> Option<SubspaceBasis<F>> {
    let n = u.ambient_dim();
    let d = u.dim();
    let basis = u.as_matrix();
    let sym_basis: Vec<Matrix<F>> = (0..d)
        .flat_map(|a| (a..d).map(move |b| (a, b)))
        .map(|(a, b)| {
            let y = Matrix::from_fn(d, d, |i, j| {
                if (i, j) == (a, b) || (i, j) == (b, a) {
                    F::one()
                } else {
                    F::zero()
                }
            });
            &(&basis.transpose() * &y) * &basis
        })
        .collect();
    let system = linear_system(&sym_basis, |x| {
        ops.iter()
            .flat_map(|op| x.commutator(op).into_data())
            .collect()
    });
    let kernel = nullspace(&system);
    if kernel.dim() <= 1 {
        return None;
    }
    for coeffs in kernel.vectors() {
        let x = coeffs
            .iter()
            .zip(&sym_basis)
            .fold(Matrix::zeros(n, n), |acc, (c, m)| &acc + &m.scale(c));
        let Ok(eigen) = eigendecompose_symmetric(&x) else {
            continue;
        };
        for e in eigen {
            let inside = e.space.intersection(u);
            if !inside.is_zero() && inside.dim() < d {
                return Some(inside);
            }
        }
    }
    None
}

fn verify<F: Scalar>(
    alg: &MetricLieAlgebra<F>,
    dec: &IdealDecomposition<F>,
) -> Result<(), InternalInconsistency> {
    let n = alg.dim();
    let fail = |msg: String| Err(InternalInconsistency(msg));
    let total: usize = dec.components.iter().map(|c| c.space.dim()).sum();
    if total != n {
        return fail(format!("component dimensions sum to {total}, expected {n}"));
    }
    if dec
        .components
        .iter()
        .filter(|c| c.kind == ComponentKind::Abelian)
        .count()
        > 1
    {
        return fail("more than one abelian component".into());
    }
    let derived_sum = dec
        .irreducible()
        .fold(SubspaceBasis::zero(n), |acc, c| acc.sum(&c.center_part));
    if !derived_sum.same_as(&alg.split().derived) {
        return fail("derived spans of the components do not add up to the derived algebra".into());
    }
    for (a, ca) in dec.components.iter().enumerate() {
        for cb in &dec.components[a + 1..] {
            if !ca.space.is_orthogonal_to(&cb.space) {
                return fail(format!(
                    "component {a} is not orthogonal to a later component"
                ));
            }
            for x in ca.space.vectors() {
                for y in cb.space.vectors() {
                    if alg.bracket(x, y).iter().any(|c| !c.is_zero()) {
                        return fail(format!(
                            "component {a} has a nonzero bracket with a later component"
                        ));
                    }
                }
            }
        }
        for i in 0..n {
            let e = unit(n, i);
            for x in ca.space.vectors() {
                if !ca.space.contains(&alg.bracket(&e, x)) {
                    return fail(format!(
                        "component {a} is not an ideal (fails at basis vector {i})"
                    ));
                }
            }
        }
        if ca.kind == ComponentKind::Abelian
            && ca
                .space
                .vectors()
                .iter()
                .any(|x| (0..n).any(|i| alg.bracket(x, &unit(n, i)).iter().any(|c| !c.is_zero())))
        {
            return fail("abelian component is not central".into());
        }
    }
    Ok(())
}
