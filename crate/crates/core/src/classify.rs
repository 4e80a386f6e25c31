//! Decomposability of symmetric Killing 2-tensors.
//!
//! Only the `v`-block `S^v` matters. It is block-diagonal across the
//! irreducible ideals; the abelian factor is always decomposable. On an
//! irreducible ideal with eigenvalues `λ_i` and eigenprojectors `P_i` on its
//! `v`-part, `S` is decomposable iff for some real `a` every
//! `T^{λ−a}_z = Σ (λ_i − a) j(z) P_i` extends to a skew derivation. With
//! unknowns `a` and skew `A_s` on the center this is one affine system:
//!
//! ```text
//! j(A_s z_t) + a [j(z_s), j(z_t)] = [T^λ_{z_s}, j(z_t)]   for all s, t.
//! ```

use thiserror::Error;

use crate::derivations::{leibniz_failure, wedge_basis};
use crate::killing::{is_killing, killing_space, KillingError, KillingViolation};
use crate::liealg::ideals::refine_invariant;
use crate::liealg::{
    ideal_decomposition, validate, Component, ComponentKind, IdealDecomposition,
    InternalInconsistency, MetricLieAlgebra, StructureConstants, ValidationError,
};
use crate::linalg::{
    eigendecompose_symmetric, nullspace, solve::linear_system, solve_affine, AffineSolution,
    EigenError, InfeasibilityWitness, Matrix, SubspaceBasis,
};
use crate::scalar::{Rational, Scalar};
use crate::tensor::{combine, MatrixSpace, Symmetry};

/// Residual bound for accepting a float solution of the extension system.
pub const FLOAT_RESIDUAL_TOL: f64 = 1e-8;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum ClassifyError {
    #[error("tensor is not Killing: {0}")]
    NotKilling(String),
    #[error("internal assertion failed: {0}")]
    InternalAssertion(String),
    #[error("spectrum of S^v is not rational; rerun in float mode")]
    NeedsFloatFallback,
    #[error(transparent)]
    Killing(#[from] KillingError),
}

impl From<InternalInconsistency> for ClassifyError {
    fn from(e: InternalInconsistency) -> Self {
        ClassifyError::InternalAssertion(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Decomposable,
    Indecomposable,
}

/// Eigen-data of `S^v` on the `v`-part of one irreducible ideal; eigenvalues ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralData<F> {
    pub eigenvalues: Vec<F>,
    pub spaces: Vec<SubspaceBasis<F>>,
    pub projectors: Vec<Matrix<F>>,
}

/// Two eigenspaces (0-based, ascending eigenvalue order) of one component on
/// which the restricted `j`-images are both not Lie subalgebras.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockPair {
    pub component: usize,
    pub first: usize,
    pub second: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum BlockCertificate<F> {
    /// Abelian factor: every tensor on it is parallel.
    Parallel,
    /// `S^v` is `a·Id` on the block.
    SingleEigenvalue { shift: F },
    /// Shift `a` and derivations `D_s` with `D_s|_v = T^{λ−a}_{z_s}`.
    Extends {
        shift: F,
        eigenvalues: Vec<F>,
        center_basis: Vec<Vec<F>>,
        derivations: Vec<Matrix<F>>,
    },
    /// Left-kernel vector refuting the extension system.
    Infeasible {
        eigenvalues: Vec<F>,
        witness: InfeasibilityWitness<F>,
    },
}

impl<F> BlockCertificate<F> {
    pub fn verdict(&self) -> Verdict {
        match self {
            BlockCertificate::Infeasible { .. } => Verdict::Indecomposable,
            _ => Verdict::Decomposable,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockResult<F> {
    pub component: usize,
    pub kind: ComponentKind,
    pub certificate: BlockCertificate<F>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification<F> {
    pub verdict: Verdict,
    /// `false` when computed in floating point.
    pub exact: bool,
    pub blocks: Vec<BlockResult<F>>,
    pub fast_indecomposable: Option<BlockPair>,
}

/// Result of [`classify`]: exact, or recomputed in floats after an irrational spectrum.
#[derive(Clone, Debug, PartialEq)]
pub enum Classified {
    Exact(Classification<Rational>),
    Numerical(Classification<f64>),
}

impl Classified {
    pub fn verdict(&self) -> Verdict {
        match self {
            Classified::Exact(c) => c.verdict,
            Classified::Numerical(c) => c.verdict,
        }
    }

    pub fn fast_indecomposable(&self) -> Option<BlockPair> {
        match self {
            Classified::Exact(c) => c.fast_indecomposable,
            Classified::Numerical(c) => c.fast_indecomposable,
        }
    }
}

/// Exact classification with automatic float fallback.
pub fn classify(
    alg: &MetricLieAlgebra<Rational>,
    s: &Matrix<Rational>,
) -> Result<Classified, ClassifyError> {
    match classify_in(alg, s) {
        Err(ClassifyError::NeedsFloatFallback) => {
            classify_in(&alg.to_float(), &s.to_float()).map(Classified::Numerical)
        }
        other => other.map(Classified::Exact),
    }
}

/// Classification in the algebra's own field; no fallback.
pub fn classify_in<F: Scalar>(
    alg: &MetricLieAlgebra<F>,
    s: &Matrix<F>,
) -> Result<Classification<F>, ClassifyError> {
    let check = is_killing(alg, s)?;
    if !check.is_killing {
        return Err(ClassifyError::NotKilling(describe_violation(check.worst)));
    }
    let (sv, _, _) = alg.split().blocks(s);
    let dec = ideal_decomposition(alg)?;
    assert_block_diagonal(&dec, &sv)?;

    let mut blocks = Vec::new();
    for (idx, comp) in dec.components.iter().enumerate() {
        let certificate = match comp.kind {
            ComponentKind::Abelian => BlockCertificate::Parallel,
            ComponentKind::Irreducible => classify_irreducible_v(alg, comp, &sv)?,
        };
        blocks.push(BlockResult {
            component: idx,
            kind: comp.kind,
            certificate,
        });
    }
    let verdict = if blocks
        .iter()
        .all(|b| b.certificate.verdict() == Verdict::Decomposable)
    {
        Verdict::Decomposable
    } else {
        Verdict::Indecomposable
    };
    let fast_indecomposable = sufficient_indecomposable_with(alg, &dec, &sv)?;
    if fast_indecomposable.is_some() && verdict == Verdict::Decomposable {
        return Err(ClassifyError::InternalAssertion(
            "sufficient indecomposability condition fired on a decomposable tensor".into(),
        ));
    }
    Ok(Classification {
        verdict,
        exact: F::EXACT,
        blocks,
        fast_indecomposable,
    })
}

fn describe_violation<F: Scalar>(v: Option<KillingViolation<F>>) -> String {
    match v {
        Some(KillingViolation::ComplementPair { a, b, residual }) => {
            format!("[Sx_{a}, x_{b}] - [x_{a}, Sx_{b}] has entry {residual}")
        }
        Some(KillingViolation::CenterPair { a, b, c, residual }) => {
            format!("g([x_{a}, Sz_{b}], z_{c}) + g([x_{a}, Sz_{c}], z_{b}) = {residual}")
        }
        None => "no violation recorded".into(),
    }
}

fn assert_block_diagonal<F: Scalar>(
    dec: &IdealDecomposition<F>,
    sv: &Matrix<F>,
) -> Result<(), ClassifyError> {
    let n = sv.rows();
    let mut sum = Matrix::zeros(n, n);
    for comp in dec.irreducible() {
        let p = comp.complement_part.projector();
        sum = &sum + &(&(&p * sv) * &p);
    }
    let tol = crate::scalar::FLOAT_RANK_TOL * sv.max_abs().max(1.0);
    if !sum.approx_eq(sv, tol) {
        return Err(ClassifyError::InternalAssertion(
            "S^v is not block-diagonal across the irreducible ideals".into(),
        ));
    }
    Ok(())
}

/// Eigendecomposition of `S^v` restricted to the `v`-part of `comp`, with the
/// invariants `Σ P_i = Id`, `Σ λ_i P_i = S^v` and `[v_i, v_j] = 0` checked.
pub fn spectral_data<F: Scalar>(
    alg: &MetricLieAlgebra<F>,
    comp: &Component<F>,
    sv: &Matrix<F>,
) -> Result<SpectralData<F>, ClassifyError> {
    let vc = &comp.complement_part;
    let p = vc.projector();
    let block = &(&p * sv) * &p;
    let eigen = eigendecompose_symmetric(&block).map_err(|e| match e {
        EigenError::NeedsFloatFallback { .. } => ClassifyError::NeedsFloatFallback,
        EigenError::NotSymmetric => {
            ClassifyError::InternalAssertion("S^v block is not symmetric".into())
        }
    })?;
    let mut data = SpectralData {
        eigenvalues: Vec::new(),
        spaces: Vec::new(),
        projectors: Vec::new(),
    };
    for e in eigen {
        let space = e.space.intersection(vc);
        if space.is_zero() {
            continue;
        }
        data.eigenvalues.push(e.value);
        data.projectors.push(space.projector());
        data.spaces.push(space);
    }

    let n = alg.dim();
    let tol = crate::scalar::FLOAT_RANK_TOL * sv.max_abs().max(1.0);
    let total: usize = data.spaces.iter().map(SubspaceBasis::dim).sum();
    let proj_sum = data
        .projectors
        .iter()
        .fold(Matrix::zeros(n, n), |acc, q| &acc + q);
    let recon = data
        .eigenvalues
        .iter()
        .zip(&data.projectors)
        .fold(Matrix::zeros(n, n), |acc, (l, q)| &acc + &q.scale(l));
    if total != vc.dim() || !proj_sum.approx_eq(&p, tol) || !recon.approx_eq(&block, tol) {
        return Err(ClassifyError::InternalAssertion(
            "eigenspaces of S^v do not reconstruct the block".into(),
        ));
    }
    for i in 0..data.spaces.len() {
        for j in i + 1..data.spaces.len() {
            for x in data.spaces[i].vectors() {
                for y in data.spaces[j].vectors() {
                    if alg.bracket(x, y).iter().any(|c| !c.is_negligible(1.0)) {
                        return Err(ClassifyError::InternalAssertion(format!(
                            "eigenspaces {i} and {j} of a Killing S^v do not commute"
                        )));
                    }
                }
            }
        }
    }
    Ok(data)
}

/// `T^λ_z = Σ λ_i j(z) P_i`.
fn spectral_twist<F: Scalar>(data: &SpectralData<F>, jz: &Matrix<F>) -> Matrix<F> {
    let n = jz.rows();
    data.eigenvalues
        .iter()
        .zip(&data.projectors)
        .fold(Matrix::zeros(n, n), |acc, (l, p)| &acc + &(jz * p).scale(l))
}

/// Decides decomposability of `S^v` on one irreducible ideal via the joint
/// affine system in the shift `a` and the center blocks `A_s`.
pub fn classify_irreducible_v<F: Scalar>(
    alg: &MetricLieAlgebra<F>,
    comp: &Component<F>,
    sv: &Matrix<F>,
) -> Result<BlockCertificate<F>, ClassifyError> {
    let data = spectral_data(alg, comp, sv)?;
    if data.eigenvalues.len() == 1 {
        return Ok(BlockCertificate::SingleEigenvalue {
            shift: data.eigenvalues[0].clone(),
        });
    }
    let n = alg.dim();
    let zc: Vec<Vec<F>> = comp.center_part.vectors().to_vec();
    let jz: Vec<Matrix<F>> = zc.iter().map(|z| alg.j_operator(z)).collect();
    let twists: Vec<Matrix<F>> = jz.iter().map(|j| spectral_twist(&data, j)).collect();
    let a_basis = wedge_basis(&zc);
    let d = zc.len();
    let per_block = a_basis.len();
    let unknowns = 1 + d * per_block;
    let block_rows = n * n;
    let rows = d * d * block_rows;

    let mut m = Matrix::<F>::zeros(rows, unknowns);
    let mut rhs = vec![F::zero(); rows];
    for s in 0..d {
        for t in 0..d {
            let base = (s * d + t) * block_rows;
            let shift_col = jz[s].commutator(&jz[t]);
            let target = twists[s].commutator(&jz[t]);
            for r in 0..block_rows {
                m[(base + r, 0)] = shift_col.data()[r].clone();
                rhs[base + r] = target.data()[r].clone();
            }
            for (k, w) in a_basis.iter().enumerate() {
                let col = alg.j_operator(&w.mul_vec(&zc[t]));
                for r in 0..block_rows {
                    m[(base + r, 1 + s * per_block + k)] = col.data()[r].clone();
                }
            }
        }
    }

    match solve_affine(&m, &rhs) {
        AffineSolution::Feasible { particular, .. } => {
            if !F::EXACT {
                let residual = m
                    .mul_vec(&particular)
                    .iter()
                    .zip(&rhs)
                    .map(|(a, b)| (a.clone() - b.clone()).abs_f64())
                    .fold(0.0, f64::max);
                if residual > FLOAT_RESIDUAL_TOL * m.max_abs().max(1.0) {
                    return Err(ClassifyError::InternalAssertion(format!(
                        "float extension residual {residual:e} exceeds tolerance"
                    )));
                }
            }
            let shift = particular[0].clone();
            let derivations: Vec<Matrix<F>> = (0..d)
                .map(|s| {
                    let coeffs = &particular[1 + s * per_block..1 + (s + 1) * per_block];
                    let a = combine(coeffs, &a_basis, n);
                    &(&twists[s] - &jz[s].scale(&shift)) + &a
                })
                .collect();
            for (s, dm) in derivations.iter().enumerate() {
                if !dm.is_skew() || leibniz_failure(alg, dm).is_some() {
                    return Err(ClassifyError::InternalAssertion(format!(
                        "extension D_{s} is not a skew derivation"
                    )));
                }
            }
            Ok(BlockCertificate::Extends {
                shift,
                eigenvalues: data.eigenvalues,
                center_basis: zc,
                derivations,
            })
        }
        AffineSolution::Infeasible(witness) => {
            if !witness.verify(&m, &rhs) {
                return Err(ClassifyError::InternalAssertion(
                    "infeasibility witness does not verify".into(),
                ));
            }
            Ok(BlockCertificate::Infeasible {
                eigenvalues: data.eigenvalues,
                witness,
            })
        }
    }
}

/// Re-checks a decomposable certificate: each `D_s` is a skew derivation with
/// `D_s|_v = T^{λ−a}_{z_s}`.
pub fn verify_extension<F: Scalar>(
    alg: &MetricLieAlgebra<F>,
    comp: &Component<F>,
    sv: &Matrix<F>,
    cert: &BlockCertificate<F>,
) -> bool {
    let BlockCertificate::Extends {
        shift,
        center_basis,
        derivations,
        ..
    } = cert
    else {
        return !matches!(cert, BlockCertificate::Infeasible { .. });
    };
    let Ok(data) = spectral_data(alg, comp, sv) else {
        return false;
    };
    let pv = &alg.split().complement_projector;
    let tol = FLOAT_RESIDUAL_TOL;
    center_basis.iter().zip(derivations).all(|(z, dm)| {
        let jz = alg.j_operator(z);
        let expected = &spectral_twist(&data, &jz) - &jz.scale(shift);
        let v_block = &(pv * dm) * pv;
        dm.is_skew() && leibniz_failure(alg, dm).is_none() && v_block.approx_eq(&expected, tol)
    })
}

fn is_lie_subalgebra<F: Scalar>(mats: &[Matrix<F>]) -> bool {
    let n = mats.first().map_or(0, Matrix::rows);
    let span = MatrixSpace::span(Symmetry::Skew, n, mats);
    let mut with_brackets: Vec<Matrix<F>> = span.basis().to_vec();
    for a in 0..span.dim() {
        for b in a + 1..span.dim() {
            with_brackets.push(span.basis()[a].commutator(&span.basis()[b]));
        }
    }
    MatrixSpace::span(Symmetry::Skew, n, &with_brackets).dim() == span.dim()
}

/// The decomposable Killing tensors, as a subspace of the Killing space.
///
/// `S^m` and `S^z` are always decomposable. On an irreducible ideal with
/// `v`-part projector `Q`, `S^v` is decomposable iff `S^v − aQ` extends for
/// some `a`; since `Q` is itself decomposable this is the span of `Q` and the
/// `S` for which every `j(z_s) S` extends, a linear condition in `S` and the
/// center blocks `A_s`.
pub fn decomposable_killing_space<F: Scalar>(
    alg: &MetricLieAlgebra<F>,
) -> Result<MatrixSpace<F>, ClassifyError> {
    let n = alg.dim();
    let killing = killing_space(alg);
    let split = alg.split();
    let mut gens = Vec::new();
    let mut v_blocks = Vec::new();
    for s in killing.basis() {
        let (sv, sm, sz) = split.blocks(s);
        gens.push(sm);
        gens.push(sz);
        v_blocks.push(sv);
    }
    let dec = ideal_decomposition(alg)?;
    for comp in dec.irreducible() {
        let q = comp.complement_part.projector();
        let restricted: Vec<Matrix<F>> = v_blocks.iter().map(|sv| &(&q * sv) * &q).collect();
        let block_space = MatrixSpace::span(Symmetry::Symmetric, n, &restricted);
        let candidates = block_space.basis();
        let zc: Vec<Vec<F>> = comp.center_part.vectors().to_vec();
        let jz: Vec<Matrix<F>> = zc.iter().map(|z| alg.j_operator(z)).collect();
        let a_basis = wedge_basis(&zc);
        let d = zc.len();

        enum Unknown {
            Tensor(usize),
            Center(usize, usize),
        }
        let unknowns: Vec<Unknown> = (0..candidates.len())
            .map(Unknown::Tensor)
            .chain((0..d).flat_map(|s| (0..a_basis.len()).map(move |k| Unknown::Center(s, k))))
            .collect();
        let system = linear_system(&unknowns, |u| {
            let mut out = Vec::with_capacity(d * d * n * n);
            for s in 0..d {
                for t in 0..d {
                    let block = match *u {
                        Unknown::Tensor(i) => -&(&jz[s] * &candidates[i]).commutator(&jz[t]),
                        Unknown::Center(s2, k) if s2 == s => {
                            alg.j_operator(&a_basis[k].mul_vec(&zc[t]))
                        }
                        Unknown::Center(..) => Matrix::zeros(n, n),
                    };
                    out.extend(block.into_data());
                }
            }
            out
        });
        for sol in nullspace(&system).vectors() {
            gens.push(combine(&sol[..candidates.len()], candidates, n));
        }
        gens.push(q);
    }
    let space = MatrixSpace::span(Symmetry::Symmetric, n, &gens);
    if !space.is_subspace_of(&killing) {
        return Err(ClassifyError::InternalAssertion(
            "decomposable subspace is not contained in the Killing space".into(),
        ));
    }
    Ok(space)
}

/// First eigenspace pair of an irreducible ideal where neither
/// `{j(z)|_{v_i}}` nor `{j(z)|_{v_j}}` is closed under commutators.
pub fn sufficient_indecomposable<F: Scalar>(
    alg: &MetricLieAlgebra<F>,
    sv: &Matrix<F>,
) -> Result<Option<BlockPair>, ClassifyError> {
    let dec = ideal_decomposition(alg)?;
    sufficient_indecomposable_with(alg, &dec, sv)
}

fn sufficient_indecomposable_with<F: Scalar>(
    alg: &MetricLieAlgebra<F>,
    dec: &IdealDecomposition<F>,
    sv: &Matrix<F>,
) -> Result<Option<BlockPair>, ClassifyError> {
    for (idx, comp) in dec.components.iter().enumerate() {
        if comp.kind != ComponentKind::Irreducible {
            continue;
        }
        let data = spectral_data(alg, comp, sv)?;
        let jz: Vec<Matrix<F>> = comp
            .center_part
            .vectors()
            .iter()
            .map(|z| alg.j_operator(z))
            .collect();
        let closed: Vec<bool> = data
            .projectors
            .iter()
            .map(|p| {
                let restricted: Vec<Matrix<F>> = jz.iter().map(|j| &(p * j) * p).collect();
                is_lie_subalgebra(&restricted)
            })
            .collect();
        for i in 0..closed.len() {
            for j in i + 1..closed.len() {
                if !closed[i] && !closed[j] {
                    return Ok(Some(BlockPair {
                        component: idx,
                        first: i,
                        second: j,
                    }));
                }
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecomposableReason {
    /// Every irreducible ideal has a one-dimensional center.
    DimCenterOne,
    /// On every irreducible ideal, the finest `j`-invariant splitting has at
    /// most one piece where the restricted `j`-image is non-abelian.
    AbelianExceptOne,
}

/// A cheap structural condition under which every Killing tensor is decomposable.
pub fn sufficient_decomposable<F: Scalar>(
    alg: &MetricLieAlgebra<F>,
) -> Result<Option<DecomposableReason>, ClassifyError> {
    let dec = ideal_decomposition(alg)?;
    let mut reason = DecomposableReason::DimCenterOne;
    for comp in dec.irreducible() {
        if comp.center_part.dim() == 1 {
            continue;
        }
        let jz: Vec<Matrix<F>> = comp
            .center_part
            .vectors()
            .iter()
            .map(|z| alg.j_operator(z))
            .collect();
        let pieces = refine_invariant(&comp.complement_part, &jz);
        let non_abelian = pieces
            .iter()
            .filter(|u| {
                let p = u.projector();
                let restricted: Vec<Matrix<F>> = jz.iter().map(|j| &(&p * j) * &p).collect();
                restricted.iter().enumerate().any(|(a, x)| {
                    restricted[a + 1..]
                        .iter()
                        .any(|y| x.commutator(y).data().iter().any(|c| !c.is_negligible(1.0)))
                })
            })
            .count();
        if non_abelian > 1 {
            return Ok(None);
        }
        reason = DecomposableReason::AbelianExceptOne;
    }
    Ok(Some(reason))
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum DoubleError {
    #[error("no generators given")]
    Empty,
    #[error("generator {0} is not a square matrix of the common size")]
    Shape(usize),
    #[error("generator {0} is not skew-symmetric")]
    NotSkew(usize),
    #[error("generators are linearly dependent")]
    GeneratorsDependent,
    #[error(transparent)]
    Invalid(#[from] ValidationError),
}

/// Two copies `v₁ = v₂ = ℝ^m` with `j(z_s) = diag(Z_s, Z_s)`, and the Killing
/// tensor `Id_{v₁} + 2·Id_{v₂}`.
pub fn construct_double(
    generators: &[Matrix<Rational>],
) -> Result<(MetricLieAlgebra<Rational>, Matrix<Rational>), DoubleError> {
    let m = generators.first().ok_or(DoubleError::Empty)?.rows();
    for (i, g) in generators.iter().enumerate() {
        if g.rows() != m || g.cols() != m {
            return Err(DoubleError::Shape(i));
        }
        if !g.is_skew() {
            return Err(DoubleError::NotSkew(i));
        }
    }
    if MatrixSpace::span(Symmetry::Skew, m, generators).dim() != generators.len() {
        return Err(DoubleError::GeneratorsDependent);
    }
    let k = generators.len();
    let n = 2 * m + k;
    let names: Vec<String> = (1..=2 * m)
        .map(|i| format!("e{i}"))
        .chain((1..=k).map(|s| format!("z{s}")))
        .collect();
    let mut c = StructureConstants::<Rational>::new(n).with_names(names);
    for copy in 0..2 {
        let off = copy * m;
        for a in 0..m {
            for b in a + 1..m {
                let terms: Vec<(usize, Rational)> = generators
                    .iter()
                    .enumerate()
                    .filter(|(_, g)| !Scalar::is_zero(&g[(b, a)]))
                    .map(|(s, g)| (2 * m + s, g[(b, a)].clone()))
                    .collect();
                if !terms.is_empty() {
                    c.set_bracket(off + a, off + b, &terms);
                }
            }
        }
    }
    let alg = validate(c)?;
    let diag: Vec<Rational> = (0..n)
        .map(|i| {
            if i < m {
                Rational::from_i64(1)
            } else if i < 2 * m {
                Rational::from_i64(2)
            } else {
                Rational::from_i64(0)
            }
        })
        .collect();
    Ok((alg, Matrix::diagonal(&diag)))
}
