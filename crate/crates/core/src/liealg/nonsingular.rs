use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::algebra::MetricLieAlgebra;
use crate::linalg::{rank, Matrix};
use crate::scalar::Scalar;

pub const DEFAULT_NONSINGULARITY_SAMPLES: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub enum Nonsingularity<F> {
    /// `z ↦ j(z)x` fails to be injective at this `x ∈ v`.
    Singular { witness: Vec<F> },
    /// Every sampled `x` passed; not a proof.
    ProbablyNonsingular { samples: usize, seed: u64 },
    /// Decided exactly (only when `dim z = 1`).
    Nonsingular,
}

impl<F> Nonsingularity<F> {
    pub fn is_singular(&self) -> bool {
        matches!(self, Nonsingularity::Singular { .. })
    }
}

/// Nonsingular means `ad_x : v → z` is onto for every nonzero `x ∈ v`,
/// equivalently `z ↦ j(z)x` is injective.
pub fn is_nonsingular<F: Scalar>(
    alg: &MetricLieAlgebra<F>,
    samples: usize,
    seed: u64,
) -> Nonsingularity<F> {
    let split = alg.split();
    let jmap = alg.j_map();
    let v_basis = split.complement.vectors();

    if !split.abelian_factor.is_zero() {
        return Nonsingularity::Singular {
            witness: v_basis[0].clone(),
        };
    }
    if jmap.operators.len() == 1 {
        return if rank(&jmap.operators[0]) == split.complement.dim() {
            Nonsingularity::Nonsingular
        } else {
            // The kernel of j(z) inside v supplies the witness.
            let kernel = crate::linalg::nullspace(&jmap.operators[0]);
            let witness = kernel
                .intersection(&split.complement)
                .vectors()
                .first()
                .cloned()
                .expect("rank deficiency on v implies a kernel vector in v");
            Nonsingularity::Singular { witness }
        };
    }

    let injective_at = |x: &[F]| {
        let images: Vec<Vec<F>> = jmap.operators.iter().map(|op| op.mul_vec(x)).collect();
        rank(&Matrix::from_rows(images)) == jmap.operators.len()
    };
    for x in v_basis {
        if !injective_at(x) {
            return Nonsingularity::Singular { witness: x.clone() };
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let x = v_basis.iter().fold(vec![F::zero(); alg.dim()], |acc, b| {
            let c = F::from_i64(rng.gen_range(-5..=5));
            crate::linalg::matrix::axpy(&acc, &c, b)
        });
        if x.iter().all(Scalar::is_zero) {
            continue;
        }
        if !injective_at(&x) {
            return Nonsingularity::Singular { witness: x };
        }
    }
    Nonsingularity::ProbablyNonsingular { samples, seed }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::algebra::{validate, StructureConstants};
    use crate::linalg::matrix::unit;
    use crate::scalar::{int, Rational};

    fn alg(n: usize, brackets: &[(usize, usize, usize)]) -> MetricLieAlgebra<Rational> {
        let mut c = StructureConstants::new(n);
        for &(i, j, k) in brackets {
            c.set_bracket(i, j, &[(k, int(1))]);
        }
        validate(c).unwrap()
    }

    #[test]
    fn heisenberg_is_certainly_nonsingular() {
        let h = alg(5, &[(0, 2, 4), (1, 3, 4)]);
        assert_eq!(is_nonsingular(&h, 64, 0), Nonsingularity::Nonsingular);
    }

    #[test]
    fn dim6_singular_at_e1() {
        let a = alg(6, &[(0, 1, 3), (0, 2, 4), (1, 2, 5)]);
        assert_eq!(
            is_nonsingular(&a, 64, 0),
            Nonsingularity::Singular {
                witness: unit(6, 0)
            }
        );
    }

    #[test]
    fn h1_plus_h1_singular_at_x1() {
        let a = alg(6, &[(0, 1, 2), (3, 4, 5)]);
        assert_eq!(
            is_nonsingular(&a, 64, 0),
            Nonsingularity::Singular {
                witness: unit(6, 0)
            }
        );
    }

    #[test]
    fn quaternionic_h_type_is_probably_nonsingular() {
        // v = R⁴ with j(z_s) the three quaternion units.
        let mut c = StructureConstants::<Rational>::new(7);
        c.set_bracket(0, 1, &[(4, int(1))]);
        c.set_bracket(2, 3, &[(4, int(1))]);
        c.set_bracket(0, 2, &[(5, int(1))]);
        c.set_bracket(3, 1, &[(5, int(1))]);
        c.set_bracket(0, 3, &[(6, int(1))]);
        c.set_bracket(1, 2, &[(6, int(1))]);
        let a = validate(c).unwrap();
        assert!(matches!(
            is_nonsingular(&a, 64, 7),
            Nonsingularity::ProbablyNonsingular {
                samples: 64,
                seed: 7
            }
        ));
    }
}
