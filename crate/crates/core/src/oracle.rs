//! Brute-force decomposability test.
//!
//! Killing vector fields of a 2-step nilpotent group are spanned by the
//! left-trivialized fields `ξ_x` (`x ∈ n`) and `ξ_D` (`D ∈ Der_a(n)`), with
//!
//! ```text
//! Ω_{ξ_x}(w) = x − [w, x],        Ω_{ξ_D}(w) = Dw − ½[w, Dw].
//! ```
//!
//! Ω of a symmetric product is the symmetric product of the Ω's, a polynomial
//! in `w` of degree at most 4. A constant tensor `S` is decomposable iff it is
//! a parallel tensor plus a combination of products `ξ_a·ξ_b`. Because the
//! symmetric product is bilinear, products of basis fields span all products
//! of Killing fields, so pairs `a ≤ b` over one fixed basis suffice.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::classify::{classify, ClassifyError, Verdict};
use crate::derivations::{skew_derivations, DerivationError};
use crate::killing::{killing_space, parallel_space, KillingError};
use crate::liealg::MetricLieAlgebra;
use crate::linalg::matrix::unit;
use crate::linalg::Matrix;
use crate::scalar::{Rational, Scalar};

pub const DEFAULT_SIZE_CAP: usize = 10;

/// Sorted multiset of `w`-coordinate indices.
pub type Monomial = Vec<usize>;

fn merge(a: &Monomial, b: &Monomial) -> Monomial {
    let mut m = a.clone();
    m.extend_from_slice(b);
    m.sort_unstable();
    m
}

/// Vector-valued polynomial in `w`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorPolynomial<F> {
    pub terms: BTreeMap<Monomial, Vec<F>>,
}

/// `Sym²(n)`-valued polynomial in `w`, coefficients as symmetric matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct OmegaPolynomial<F> {
    pub terms: BTreeMap<Monomial, Matrix<F>>,
}

impl<F> Default for VectorPolynomial<F> {
    fn default() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }
}

impl<F> Default for OmegaPolynomial<F> {
    fn default() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }
}

impl<F: Scalar> VectorPolynomial<F> {
    fn add_term(&mut self, m: Monomial, v: Vec<F>) {
        if v.iter().all(Scalar::is_zero) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                for (a, b) in existing.iter_mut().zip(v) {
                    *a = a.clone() + b;
                }
                if existing.iter().all(Scalar::is_zero) {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, v);
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn evaluate(&self, w: &[F]) -> Vec<F> {
        let n = w.len();
        let mut out = vec![F::zero(); n];
        for (m, v) in &self.terms {
            let c = m.iter().fold(F::one(), |acc, &i| acc * w[i].clone());
            for (o, x) in out.iter_mut().zip(v) {
                *o = o.clone() + c.clone() * x.clone();
            }
        }
        out
    }

    pub fn to_float(&self) -> VectorPolynomial<f64> {
        VectorPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.iter().map(Scalar::to_f64).collect()))
                .collect(),
        }
    }
}

impl<F: Scalar> OmegaPolynomial<F> {
    pub fn constant(s: &Matrix<F>) -> Self {
        let mut p = Self::default();
        p.add_term(Vec::new(), s.clone());
        p
    }

    fn add_term(&mut self, m: Monomial, s: Matrix<F>) {
        if s.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing = &*existing + &s;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, s);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, s) in &other.terms {
            out.add_term(m.clone(), s.clone());
        }
        out
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Self::default();
        for (m, s) in &self.terms {
            out.add_term(m.clone(), s.scale(c));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Vec::is_empty)
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn evaluate(&self, w: &[F]) -> Matrix<F> {
        let n = w.len();
        let mut out = Matrix::zeros(n, n);
        for (m, s) in &self.terms {
            let c = m.iter().fold(F::one(), |acc, &i| acc * w[i].clone());
            out = &out + &s.scale(&c);
        }
        out
    }

    pub fn to_float(&self) -> OmegaPolynomial<f64> {
        OmegaPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, s)| (m.clone(), s.to_float()))
                .collect(),
        }
    }
}

/// A Killing vector field from the generating set.
#[derive(Clone, Debug, PartialEq)]
pub enum KillingField<F> {
    /// `ξ_x` for an arbitrary `x ∈ n`.
    Translation(Vec<F>),
    /// `ξ_D` for a skew derivation `D`.
    Derivation(Matrix<F>),
}

/// `Ω_ξ(w)` as a polynomial of degree ≤ 2.
pub fn omega_vector<F: Scalar>(
    alg: &MetricLieAlgebra<F>,
    field: &KillingField<F>,
) -> VectorPolynomial<F> {
    let n = alg.dim();
    let mut p = VectorPolynomial::default();
    match field {
        KillingField::Translation(x) => {
            p.add_term(Vec::new(), x.clone());
            for i in 0..n {
                let b = alg.bracket(&unit(n, i), x);
                p.add_term(vec![i], b.into_iter().map(|c| -c).collect());
            }
        }
        KillingField::Derivation(d) => {
            let half = F::one() / F::from_i64(2);
            let images: Vec<Vec<F>> = (0..n).map(|j| d.col(j)).collect();
            for (i, img) in images.iter().enumerate() {
                p.add_term(vec![i], img.clone());
            }
            for i in 0..n {
                for (j, img) in images.iter().enumerate() {
                    let b = alg.bracket(&unit(n, i), img);
                    let mut m = vec![i, j];
                    m.sort_unstable();
                    p.add_term(m, b.into_iter().map(|c| -(c * half.clone())).collect());
                }
            }
        }
    }
    p
}

/// `Ω_{ξ_a·ξ_b} = Ω_{ξ_a}·Ω_{ξ_b}` with `u·v = uvᵀ + vuᵀ`.
pub fn omega_product<F: Scalar>(
    a: &VectorPolynomial<F>,
    b: &VectorPolynomial<F>,
) -> OmegaPolynomial<F> {
    let mut out = OmegaPolynomial::default();
    for (ma, va) in &a.terms {
        for (mb, vb) in &b.terms {
            out.add_term(merge(ma, mb), Matrix::sym_product(va, vb));
        }
    }
    out
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("algebra dimension {dim} exceeds the oracle size cap {cap}")]
    TooLarge { dim: usize, cap: usize },
    #[error(transparent)]
    Killing(#[from] KillingError),
    #[error(transparent)]
    Derivation(#[from] DerivationError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(
        "oracle and classifier disagree on {label}: classifier {classifier:?}, oracle {oracle:?}"
    )]
    OracleDisagreement {
        label: String,
        classifier: Verdict,
        oracle: Verdict,
    },
}

/// Index of a spanning element of the decomposable space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SpanLabel {
    /// The `q`-th parallel basis tensor.
    Parallel(usize),
    /// `ξ_a·ξ_b` over the generator list (`e_1 … e_n`, then `Der_a` basis).
    Product(usize, usize),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Membership {
    Member {
        coefficients: Vec<(SpanLabel, Rational)>,
    },
    NotMember,
}

impl Membership {
    pub fn verdict(&self) -> Verdict {
        match self {
            Membership::Member { .. } => Verdict::Decomposable,
            Membership::NotMember => Verdict::Indecomposable,
        }
    }
}

type SparseVec = BTreeMap<usize, Rational>;

/// Row-echelon basis over sparse vectors, recording each row as a
/// combination of the original spanning elements.
struct SparseEchelon {
    rows: Vec<(SparseVec, Vec<Rational>)>,
    pivots: HashMap<usize, usize>,
    generators: usize,
}

impl SparseEchelon {
    fn new(generators: usize) -> Self {
        Self {
            rows: Vec::new(),
            pivots: HashMap::new(),
            generators,
        }
    }

    /// Reduces `v` against the rows; `combo` accumulates the multiples subtracted.
    fn reduce(&self, v: &mut SparseVec, combo: &mut [Rational]) {
        let mut cursor = 0usize;
        loop {
            let next = v
                .range(cursor..)
                .find(|(k, _)| self.pivots.contains_key(k))
                .map(|(k, c)| (*k, c.clone()));
            let Some((key, coeff)) = next else { break };
            let (row, row_combo) = &self.rows[self.pivots[&key]];
            for (k, c) in row {
                let entry = v.entry(*k).or_insert_with(Rational::zero);
                *entry = entry.clone() - coeff.clone() * c.clone();
                if Scalar::is_zero(entry) {
                    v.remove(k);
                }
            }
            for (a, b) in combo.iter_mut().zip(row_combo) {
                if !Scalar::is_zero(b) {
                    *a = a.clone() + coeff.clone() * b.clone();
                }
            }
            cursor = key + 1;
        }
    }

    fn insert(&mut self, mut v: SparseVec, index: usize) {
        let mut combo = vec![Rational::zero(); self.generators];
        self.reduce(&mut v, &mut combo);
        let Some((&pivot, lead)) = v.iter().next() else {
            return;
        };
        let inv = Rational::one() / lead.clone();
        // Row = v / lead, and v = e_index − Σ combo·rows.
        let mut row_combo: Vec<Rational> = combo.into_iter().map(|c| -(c * inv.clone())).collect();
        row_combo[index] = row_combo[index].clone() + inv.clone();
        for c in v.values_mut() {
            *c = c.clone() * inv.clone();
        }
        self.pivots.insert(pivot, self.rows.len());
        self.rows.push((v, row_combo));
    }
}

/// Reusable decomposability oracle for one algebra.
pub struct DecomposabilityOracle<'a> {
    alg: &'a MetricLieAlgebra<Rational>,
    labels: Vec<SpanLabel>,
    coordinates: HashMap<(Monomial, usize, usize), usize>,
    echelon: SparseEchelon,
    pub generator_fields: Vec<KillingField<Rational>>,
    pub parallel_basis: Vec<Matrix<Rational>>,
}

impl<'a> DecomposabilityOracle<'a> {
    pub fn new(alg: &'a MetricLieAlgebra<Rational>, size_cap: usize) -> Result<Self, OracleError> {
        let n = alg.dim();
        if n > size_cap {
            return Err(OracleError::TooLarge {
                dim: n,
                cap: size_cap,
            });
        }
        let derivations = skew_derivations(alg)?;
        Self::with_derivation_basis(alg, derivations.basis(), size_cap)
    }

    /// Like [`DecomposabilityOracle::new`] with a caller-chosen basis of
    /// `Der_a(n)`; the caller is responsible for it being one.
    pub fn with_derivation_basis(
        alg: &'a MetricLieAlgebra<Rational>,
        derivations: &[Matrix<Rational>],
        size_cap: usize,
    ) -> Result<Self, OracleError> {
        let n = alg.dim();
        if n > size_cap {
            return Err(OracleError::TooLarge {
                dim: n,
                cap: size_cap,
            });
        }
        let parallel = parallel_space(alg)?;
        let mut generator_fields: Vec<KillingField<Rational>> = (0..n)
            .map(|i| KillingField::Translation(unit(n, i)))
            .collect();
        generator_fields.extend(derivations.iter().cloned().map(KillingField::Derivation));
        let omegas: Vec<VectorPolynomial<Rational>> = generator_fields
            .iter()
            .map(|f| omega_vector(alg, f))
            .collect();

        let mut labels = Vec::new();
        let mut spanning = Vec::new();
        for (q, p) in parallel.space.basis().iter().enumerate() {
            labels.push(SpanLabel::Parallel(q));
            spanning.push(OmegaPolynomial::constant(p));
        }
        for a in 0..omegas.len() {
            for b in a..omegas.len() {
                labels.push(SpanLabel::Product(a, b));
                spanning.push(omega_product(&omegas[a], &omegas[b]));
            }
        }

        let mut oracle = Self {
            alg,
            echelon: SparseEchelon::new(labels.len()),
            labels,
            coordinates: HashMap::new(),
            generator_fields,
            parallel_basis: parallel.space.basis().to_vec(),
        };
        for (idx, poly) in spanning.iter().enumerate() {
            let v = oracle.sparse(poly, true);
            oracle.echelon.insert(v, idx);
        }
        Ok(oracle)
    }

    /// Flattens to `(monomial, i ≤ j)` coordinates. Unknown coordinates are
    /// registered when `register` is set; otherwise they get fresh indices
    /// that no row can reduce.
    fn sparse(&mut self, poly: &OmegaPolynomial<Rational>, register: bool) -> SparseVec {
        let n = self.alg.dim();
        let mut v = SparseVec::new();
        for (m, s) in &poly.terms {
            for i in 0..n {
                for j in i..n {
                    let c = &s[(i, j)];
                    if Scalar::is_zero(c) {
                        continue;
                    }
                    let key = (m.clone(), i, j);
                    let next = self.coordinates.len();
                    let idx = if register {
                        *self.coordinates.entry(key).or_insert(next)
                    } else {
                        self.coordinates
                            .get(&key)
                            .copied()
                            .unwrap_or(usize::MAX - v.len())
                    };
                    v.insert(idx, c.clone());
                }
            }
        }
        v
    }

    pub fn span_labels(&self) -> &[SpanLabel] {
        &self.labels
    }

    pub fn spanning_dim(&self) -> usize {
        self.echelon.rows.len()
    }

    pub fn membership(&mut self, s: &Matrix<Rational>) -> Membership {
        let mut v = self.sparse(&OmegaPolynomial::constant(s), false);
        let mut combo = vec![Rational::zero(); self.labels.len()];
        self.echelon.reduce(&mut v, &mut combo);
        if !v.is_empty() {
            return Membership::NotMember;
        }
        let coefficients = self
            .labels
            .iter()
            .zip(combo)
            .filter(|(_, c)| !Scalar::is_zero(c))
            .map(|(l, c)| (*l, c))
            .collect();
        Membership::Member { coefficients }
    }

    /// Rebuilds `Σ c_l (spanning element l)` from a membership expansion.
    pub fn expand(&self, coefficients: &[(SpanLabel, Rational)]) -> OmegaPolynomial<Rational> {
        let omegas: Vec<VectorPolynomial<Rational>> = self
            .generator_fields
            .iter()
            .map(|f| omega_vector(self.alg, f))
            .collect();
        coefficients
            .iter()
            .fold(OmegaPolynomial::default(), |acc, (label, c)| {
                let term = match *label {
                    SpanLabel::Parallel(q) => OmegaPolynomial::constant(&self.parallel_basis[q]),
                    SpanLabel::Product(a, b) => omega_product(&omegas[a], &omegas[b]),
                };
                acc.add(&term.scale(c))
            })
    }
}

pub fn decomposable_membership(
    alg: &MetricLieAlgebra<Rational>,
    s: &Matrix<Rational>,
    size_cap: usize,
) -> Result<Membership, OracleError> {
    Ok(DecomposabilityOracle::new(alg, size_cap)?.membership(s))
}

/// `Σ_{s,t} (G⁻¹)_{st} Ω_{ξ_{z_s}·ξ_{S z_t}}` over the center basis with Gram
/// matrix `G`; equals `S` for every Killing `S ∈ z·v`.
pub fn mixed_tensor_expansion<F: Scalar>(
    alg: &MetricLieAlgebra<F>,
    s: &Matrix<F>,
) -> OmegaPolynomial<F> {
    let zs = alg.split().center.vectors();
    let gram = Matrix::from_fn(zs.len(), zs.len(), |a, b| {
        crate::linalg::matrix::dot(&zs[a], &zs[b])
    });
    let inv = gram.inverse().expect("center basis is independent");
    let mut out = OmegaPolynomial::default();
    for (a, za) in zs.iter().enumerate() {
        let left = omega_vector(alg, &KillingField::Translation(za.clone()));
        for (b, zb) in zs.iter().enumerate() {
            let c = &inv[(a, b)];
            if c.is_zero() {
                continue;
            }
            let right = omega_vector(alg, &KillingField::Translation(s.mul_vec(zb)));
            out = out.add(&omega_product(&left, &right).scale(c));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrosscheckEntry {
    pub label: String,
    pub classifier: Verdict,
    pub oracle: Verdict,
    pub numerical: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrosscheckReport {
    pub entries: Vec<CrosscheckEntry>,
    pub seed: u64,
}

impl CrosscheckReport {
    pub fn all_agree(&self) -> bool {
        self.entries.iter().all(|e| e.classifier == e.oracle)
    }
}

/// Compares classifier and oracle on every Killing basis element, `random`
/// seeded integer combinations of them, and any `extra` tensors.
pub fn crosscheck(
    alg: &MetricLieAlgebra<Rational>,
    extra: &[(String, Matrix<Rational>)],
    random: usize,
    seed: u64,
    size_cap: usize,
) -> Result<CrosscheckReport, OracleError> {
    let mut oracle = DecomposabilityOracle::new(alg, size_cap)?;
    let killing = killing_space(alg);
    let mut tensors: Vec<(String, Matrix<Rational>)> = killing
        .basis()
        .iter()
        .enumerate()
        .map(|(i, s)| (format!("killing[{i}]"), s.clone()))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for r in 0..random {
        let coeffs: Vec<Rational> = (0..killing.dim())
            .map(|_| Rational::from_i64(rng.gen_range(-3..=3)))
            .collect();
        tensors.push((format!("random[{r}]"), killing.combination(&coeffs)));
    }
    tensors.extend(extra.iter().cloned());

    let mut entries = Vec::new();
    for (label, s) in tensors {
        let classified = classify(alg, &s)?;
        let oracle_verdict = oracle.membership(&s).verdict();
        let entry = CrosscheckEntry {
            label,
            classifier: classified.verdict(),
            oracle: oracle_verdict,
            numerical: matches!(classified, crate::classify::Classified::Numerical(_)),
        };
        if entry.classifier != entry.oracle {
            return Err(OracleError::OracleDisagreement {
                label: entry.label,
                classifier: entry.classifier,
                oracle: entry.oracle,
            });
        }
        entries.push(entry);
    }
    Ok(CrosscheckReport { entries, seed })
}
