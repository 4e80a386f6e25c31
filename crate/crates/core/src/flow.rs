//! Geodesic flow of the left-invariant metric, in float arithmetic only.
//!
//! Write a geodesic as `γ(t) = exp w(t)` with left-trivialized velocity
//! `y = dL_{γ⁻¹} γ̇`. For left-invariant fields the Levi-Civita connection is
//! `∇_x y = ½([x,y] − ad_x* y − ad_y* x)`, so `∇_y y = −ad_y* y` and the
//! geodesic equation `ẏ + ∇_y y = 0` becomes `ẏ = ad_y* y`. Pairing with any
//! `u` gives `g(ad_y* y, u) = g(y_z, [y_v, u]) = g(j(y_z) y_v, u)`, hence
//!
//! ```text
//! ẏ_v = j(y_z) y_v,    ẏ_z = 0.
//! ```
//!
//! For position, `exp(w) exp(u) = exp(w + u + ½[w,u])` holds exactly in a
//! 2-step algebra, so `γ(t+s) = γ(t) exp(s y)` differentiates to
//! `ẇ = y + ½[w, y]`.
//!
//! A symmetric tensor field `F` with left-trivialization `Ω_F` is Killing iff
//! `Ω_F(w)(y, y)` is constant along every such solution.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::liealg::MetricLieAlgebra;
use crate::linalg::matrix::dot;
use crate::linalg::Matrix;
use crate::oracle::{OmegaPolynomial, VectorPolynomial};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum FlowError {
    #[error("at least one step is required")]
    NoSteps,
    #[error("integration time must be positive and finite, got {0}")]
    BadTime(f64),
    #[error("vector has length {found}, algebra has dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicState {
    pub t: f64,
    pub w: Vec<f64>,
    pub y: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub step: f64,
    pub states: Vec<GeodesicState>,
}

fn derivative(alg: &MetricLieAlgebra<f64>, w: &[f64], y: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let split = alg.split();
    let yz = split.center_projector.mul_vec(y);
    let ydot = alg.j_operator(&yz).mul_vec(y);
    let b = alg.bracket(w, y);
    let wdot = y.iter().zip(&b).map(|(a, c)| a + 0.5 * c).collect();
    (wdot, ydot)
}

fn shifted(base: &[f64], k: &[f64], h: f64) -> Vec<f64> {
    base.iter().zip(k).map(|(a, b)| a + h * b).collect()
}

fn check_dim(alg: &MetricLieAlgebra<f64>, v: &[f64]) -> Result<(), FlowError> {
    if v.len() != alg.dim() {
        return Err(FlowError::DimensionMismatch {
            expected: alg.dim(),
            found: v.len(),
        });
    }
    Ok(())
}

/// Classical fixed-step RK4 on `(w, y)`; samples every step.
pub fn integrate(
    alg: &MetricLieAlgebra<f64>,
    w0: &[f64],
    y0: &[f64],
    t_max: f64,
    steps: usize,
) -> Result<Trajectory, FlowError> {
    check_dim(alg, w0)?;
    check_dim(alg, y0)?;
    if steps == 0 {
        return Err(FlowError::NoSteps);
    }
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(FlowError::BadTime(t_max));
    }
    let h = t_max / steps as f64;
    let mut states = Vec::with_capacity(steps + 1);
    let (mut w, mut y) = (w0.to_vec(), y0.to_vec());
    states.push(GeodesicState {
        t: 0.0,
        w: w.clone(),
        y: y.clone(),
    });
    for step in 1..=steps {
        let (kw1, ky1) = derivative(alg, &w, &y);
        let (kw2, ky2) = derivative(
            alg,
            &shifted(&w, &kw1, h / 2.0),
            &shifted(&y, &ky1, h / 2.0),
        );
        let (kw3, ky3) = derivative(
            alg,
            &shifted(&w, &kw2, h / 2.0),
            &shifted(&y, &ky2, h / 2.0),
        );
        let (kw4, ky4) = derivative(alg, &shifted(&w, &kw3, h), &shifted(&y, &ky3, h));
        for i in 0..w.len() {
            w[i] += h / 6.0 * (kw1[i] + 2.0 * kw2[i] + 2.0 * kw3[i] + kw4[i]);
            y[i] += h / 6.0 * (ky1[i] + 2.0 * ky2[i] + 2.0 * ky3[i] + ky4[i]);
        }
        states.push(GeodesicState {
            t: step as f64 * h,
            w: w.clone(),
            y: y.clone(),
        });
    }
    Ok(Trajectory { step: h, states })
}

/// `y(t) = exp(t·j(z₀)) y₀`; the center part is constant.
pub fn exact_velocity(
    alg: &MetricLieAlgebra<f64>,
    y0: &[f64],
    t: f64,
) -> Result<Vec<f64>, FlowError> {
    check_dim(alg, y0)?;
    let n = alg.dim();
    let z0 = alg.split().center_projector.mul_vec(y0);
    let b = alg.j_operator(&z0);
    let generator = DMatrix::from_fn(n, n, |i, j| t * b[(i, j)]);
    let rotation = generator.exp();
    Ok((0..n)
        .map(|i| (0..n).map(|j| rotation[(i, j)] * y0[j]).sum())
        .collect())
}

/// Largest deviation of [`integrate`] from [`exact_velocity`] over the samples.
pub fn velocity_error(alg: &MetricLieAlgebra<f64>, traj: &Trajectory) -> f64 {
    let y0 = &traj.states[0].y;
    traj.states
        .iter()
        .map(|s| {
            let exact = exact_velocity(alg, y0, s.t).expect("trajectory matches algebra");
            exact
                .iter()
                .zip(&s.y)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

/// Candidate conserved quantity.
#[derive(Clone, Copy, Debug)]
pub enum FirstIntegral<'a> {
    /// Left-invariant symmetric tensor: `yᵀ S y`.
    Tensor(&'a Matrix<f64>),
    /// Tensor field with left-trivialization `Ω(w)`: `yᵀ Ω(w) y`.
    TensorField(&'a OmegaPolynomial<f64>),
    /// Vector field with left-trivialization `Ω(w)`: `g(Ω(w), y)`.
    VectorField(&'a VectorPolynomial<f64>),
}

pub fn first_integral(f: FirstIntegral<'_>, state: &GeodesicState) -> f64 {
    match f {
        FirstIntegral::Tensor(s) => dot(&state.y, &s.mul_vec(&state.y)),
        FirstIntegral::TensorField(p) => {
            let s = p.evaluate(&state.w);
            dot(&state.y, &s.mul_vec(&state.y))
        }
        FirstIntegral::VectorField(p) => dot(&p.evaluate(&state.w), &state.y),
    }
}

/// `max_t |F(t) − F(0)|`.
pub fn drift(f: FirstIntegral<'_>, traj: &Trajectory) -> f64 {
    let initial = first_integral(f, &traj.states[0]);
    traj.states
        .iter()
        .map(|s| (first_integral(f, s) - initial).abs())
        .fold(0.0, f64::max)
}

/// Initial `(w₀, y₀)` pairs with entries uniform in `[-1, 1]`.
pub fn seeded_initial_states(n: usize, count: usize, seed: u64) -> Vec<(Vec<f64>, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let w = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let y = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            (w, y)
        })
        .collect()
}
