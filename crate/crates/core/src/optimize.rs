//! Multistart derivative-free maximization over density matrices, and the
//! seeded random ensembles used throughout the crate.
//!
//! States are parameterized as `rho(x) = G G^dagger / Tr(G G^dagger)` with the
//! `2 d^2` real parameters `x` filling the complex `d x d` factor `G`, so
//! every point the search visits is a valid state. The local search is an
//! adaptive Nelder-Mead simplex; coherence objectives are not smooth.
//!
//! Randomness comes from ChaCha8 with one stream per restart, so results do
//! not depend on how restarts are scheduled across threads.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::QuantumOperation;
use crate::coherence::DensityMatrix;
use crate::error::{Error, Result};
use crate::matcore::{self, ComplexMatrix};

/// How states are generated from unconstrained parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Parameterization {
    /// `rho = G G^dagger / Tr(G G^dagger)` with a full complex `d x d` factor.
    #[default]
    FullFactor,
}

/// Settings for [`maximize_over_states`].
///
/// The default of 32 restarts suits dimensions up to 4; a budget of about
/// `8 * d` restarts is a reasonable choice for larger systems.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    pub step_tol: f64,
    pub objective_tol: f64,
    pub seed: u64,
    pub parameterization: Parameterization,
    /// Start one restart from (a regularized copy of) each basis state. These
    /// are added on top of `restarts` when `restarts < d`.
    pub include_basis_starts: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iterations: 2000,
            step_tol: 1e-8,
            objective_tol: 1e-9,
            seed: 0,
            parameterization: Parameterization::FullFactor,
            include_basis_starts: true,
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    fn check(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iterations == 0 {
            return Err(Error::Optimizer("restart and iteration counts must be positive".into()));
        }
        if !(self.step_tol > 0.0 && self.objective_tol > 0.0) {
            return Err(Error::Optimizer("tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// Where a restart began.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StartKind {
    Basis(usize),
    Random,
}

/// Summary of one restart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartTrace {
    pub index: usize,
    pub start: StartKind,
    pub iterations: usize,
    pub evaluations: usize,
    pub final_value: f64,
    pub converged: bool,
    /// Set when the objective returned a non-finite value.
    pub aborted: Option<String>,
    /// Best value seen so far, recorded after every iteration.
    pub best_history: Vec<f64>,
}

/// Result of [`maximize_over_states`].
#[derive(Debug, Clone)]
pub struct OptResult {
    pub best_value: f64,
    pub best_state: DensityMatrix,
    pub best_restart: usize,
    pub restarts: Vec<RestartTrace>,
    /// Whether the restart that produced `best_value` met both tolerances.
    pub converged: bool,
}

impl OptResult {
    pub fn total_iterations(&self) -> usize {
        self.restarts.iter().map(|r| r.iterations).sum()
    }

    pub fn total_evaluations(&self) -> usize {
        self.restarts.iter().map(|r| r.evaluations).sum()
    }

    pub fn aborted_restarts(&self) -> usize {
        self.restarts.iter().filter(|r| r.aborted.is_some()).count()
    }

    pub fn converged_restarts(&self) -> usize {
        self.restarts.iter().filter(|r| r.converged).count()
    }
}

/// Maximizes `objective` over all `dim x dim` density matrices.
pub fn maximize_over_states<F>(objective: F, dim: usize, cfg: &OptimizerConfig) -> Result<OptResult>
where
    F: Fn(&DensityMatrix) -> f64 + Sync,
{
    cfg.check()?;
    if dim < 2 {
        return Err(Error::Optimizer(format!("state dimension must be at least 2, got {dim}")));
    }
    let basis_starts = if cfg.include_basis_starts { dim } else { 0 };
    let total = cfg.restarts.max(basis_starts);

    let outcomes: Vec<(RestartTrace, Option<(f64, Vec<f64>)>)> = (0..total)
        .into_par_iter()
        .map(|index| {
            let start = if index < basis_starts {
                StartKind::Basis(index)
            } else {
                StartKind::Random
            };
            run_restart(&objective, dim, cfg, index, start)
        })
        .collect();

    let mut best: Option<(usize, f64, Vec<f64>)> = None;
    let mut traces = Vec::with_capacity(total);
    for (trace, found) in outcomes {
        if let Some((value, x)) = found {
            if best.as_ref().is_none_or(|(_, b, _)| value > *b) {
                best = Some((trace.index, value, x));
            }
        }
        traces.push(trace);
    }
    let (best_restart, best_value, x) =
        best.ok_or_else(|| Error::Optimizer("every restart was aborted".into()))?;
    let best_state = state_from_params(&x, dim).expect("best point was evaluated as a state");
    Ok(OptResult {
        best_value,
        best_state,
        best_restart,
        converged: traces[best_restart].converged,
        restarts: traces,
    })
}

fn state_from_params(x: &[f64], dim: usize) -> Option<DensityMatrix> {
    let data: Vec<Complex64> = x.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect();
    DensityMatrix::from_factor(&ComplexMatrix::from_vec_unchecked(dim, dim, data))
}

fn params_from_factor(g: &ComplexMatrix) -> Vec<f64> {
    g.as_slice().iter().flat_map(|z| [z.re, z.im]).collect()
}

enum EvalError {
    NonFinite(f64),
}

struct Evaluator<'a, F> {
    objective: &'a F,
    dim: usize,
    evaluations: usize,
    best: f64,
    best_x: Vec<f64>,
}

impl<F> Evaluator<'_, F>
where
    F: Fn(&DensityMatrix) -> f64,
{
    /// Returns the value to minimize (the negated objective).
    fn eval(&mut self, x: &[f64]) -> std::result::Result<f64, EvalError> {
        self.evaluations += 1;
        let Some(rho) = state_from_params(x, self.dim) else {
            return Ok(f64::INFINITY);
        };
        let value = (self.objective)(&rho);
        if !value.is_finite() {
            return Err(EvalError::NonFinite(value));
        }
        if value > self.best {
            self.best = value;
            self.best_x = x.to_vec();
        }
        Ok(-value)
    }
}

const INITIAL_STEP: f64 = 0.1;
const MAX_SIMPLEX_RESETS: usize = 3;

fn run_restart<F>(
    objective: &F,
    dim: usize,
    cfg: &OptimizerConfig,
    index: usize,
    start: StartKind,
) -> (RestartTrace, Option<(f64, Vec<f64>)>)
where
    F: Fn(&DensityMatrix) -> f64,
{
    let mut rng = stream_rng(cfg.seed, index as u64);
    let g = match start {
        StartKind::Basis(k) => {
            let mut g = ComplexMatrix::identity(dim).scale_real(1e-6);
            g[(k, k)] += Complex64::new(1.0, 0.0);
            g
        }
        StartKind::Random => {
            let g = ginibre_with(&mut rng, dim, dim);
            let fro = matcore::norm(g.as_slice()).max(f64::MIN_POSITIVE);
            g.scale_real(1.0 / fro)
        }
    };
    let x0 = params_from_factor(&g);

    let mut ev = Evaluator {
        objective,
        dim,
        evaluations: 0,
        best: f64::NEG_INFINITY,
        best_x: x0.clone(),
    };
    let mut trace = RestartTrace {
        index,
        start,
        iterations: 0,
        evaluations: 0,
        final_value: f64::NEG_INFINITY,
        converged: false,
        aborted: None,
        best_history: Vec::new(),
    };

    let outcome = nelder_mead(&mut ev, &x0, cfg, &mut trace);
    trace.evaluations = ev.evaluations;
    match outcome {
        Ok(converged) => {
            trace.converged = converged;
            trace.final_value = ev.best;
            let found = ev.best.is_finite().then_some((ev.best, ev.best_x));
            (trace, found)
        }
        Err(EvalError::NonFinite(v)) => {
            trace.aborted = Some(format!("objective returned {v}"));
            trace.final_value = ev.best;
            (trace, None)
        }
    }
}

/// Adaptive Nelder-Mead (dimension-dependent coefficients) on the negated
/// objective. Returns whether both tolerances were met before the iteration
/// budget ran out.
fn nelder_mead<F>(
    ev: &mut Evaluator<'_, F>,
    x0: &[f64],
    cfg: &OptimizerConfig,
    trace: &mut RestartTrace,
) -> std::result::Result<bool, EvalError>
where
    F: Fn(&DensityMatrix) -> f64,
{
    let n = x0.len();
    let nf = n as f64;
    let alpha = 1.0;
    let gamma = 1.0 + 2.0 / nf;
    let rho = 0.75 - 1.0 / (2.0 * nf);
    let sigma = 1.0 - 1.0 / nf;

    let mut center = x0.to_vec();
    let mut resets = 0;
    let mut last_best = f64::NEG_INFINITY;

    loop {
        let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
        simplex.push(center.clone());
        for i in 0..n {
            let mut v = center.clone();
            v[i] += INITIAL_STEP;
            simplex.push(v);
        }
        let mut values = Vec::with_capacity(n + 1);
        for v in &simplex {
            values.push(ev.eval(v)?);
        }

        let mut converged = false;
        while trace.iterations < cfg.max_iterations {
            trace.iterations += 1;
            let mut order: Vec<usize> = (0..=n).collect();
            order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
            simplex = order.iter().map(|&i| simplex[i].clone()).collect();
            values = order.iter().map(|&i| values[i]).collect();

            let spread = values[n] - values[0];
            let size = simplex[1..]
                .iter()
                .flat_map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()))
                .fold(0.0, f64::max);
            if spread.is_finite() && spread <= cfg.objective_tol && size <= cfg.step_tol {
                converged = true;
                trace.best_history.push(ev.best);
                break;
            }

            let mut centroid = vec![0.0; n];
            for v in &simplex[..n] {
                for (c, x) in centroid.iter_mut().zip(v) {
                    *c += x / nf;
                }
            }
            let along = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&simplex[n])
                    .map(|(c, w)| c + t * (c - w))
                    .collect()
            };
            let reflected = along(alpha);
            let f_r = ev.eval(&reflected)?;
            if f_r < values[0] {
                let expanded = along(alpha * gamma);
                let f_e = ev.eval(&expanded)?;
                if f_e < f_r {
                    simplex[n] = expanded;
                    values[n] = f_e;
                } else {
                    simplex[n] = reflected;
                    values[n] = f_r;
                }
            } else if f_r < values[n - 1] {
                simplex[n] = reflected;
                values[n] = f_r;
            } else {
                let (contracted, f_c, accept) = if f_r < values[n] {
                    let c = along(alpha * rho);
                    let f = ev.eval(&c)?;
                    (c, f, f <= f_r)
                } else {
                    let c = along(-rho);
                    let f = ev.eval(&c)?;
                    (c, f, f < values[n])
                };
                if accept {
                    simplex[n] = contracted;
                    values[n] = f_c;
                } else {
                    let best = simplex[0].clone();
                    for i in 1..=n {
                        let shrunk: Vec<f64> = best
                            .iter()
                            .zip(&simplex[i])
                            .map(|(b, x)| b + sigma * (x - b))
                            .collect();
                        values[i] = ev.eval(&shrunk)?;
                        simplex[i] = shrunk;
                    }
                }
            }
            trace.best_history.push(ev.best);
        }

        if !converged {
            return Ok(false);
        }
        let improved = ev.best - last_best > cfg.objective_tol;
        last_best = ev.best;
        resets += 1;
        if !improved || resets > MAX_SIMPLEX_RESETS || trace.iterations >= cfg.max_iterations {
            return Ok(true);
        }
        center = ev.best_x.clone();
    }
}

/// Mixes `index` into `seed` (SplitMix64 finalizer).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// ChaCha8 generator keyed by `seed`, positioned on stream `stream`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Matrix of i.i.d. standard complex Gaussian entries.
pub fn ginibre_with<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| complex_gaussian(rng)).collect();
    ComplexMatrix::from_vec_unchecked(rows, cols, data)
}

/// `G G^dagger / Tr(G G^dagger)` for a Ginibre matrix `G`.
pub fn random_density_with<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    loop {
        if let Some(rho) = DensityMatrix::from_factor(&ginibre_with(rng, dim, dim)) {
            return rho;
        }
    }
}

pub fn random_density(seed: u64, dim: usize) -> DensityMatrix {
    random_density_with(&mut ChaCha8Rng::seed_from_u64(seed), dim)
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix.
///
/// Gram-Schmidt produces `R` with a positive real diagonal, which is the
/// phase convention that makes `Q` Haar distributed.
pub fn random_unitary_with<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    loop {
        if let Some(q) = matcore::orthonormalize_columns(&ginibre_with(rng, dim, dim)) {
            return q;
        }
    }
}

pub fn random_unitary(seed: u64, dim: usize) -> ComplexMatrix {
    random_unitary_with(&mut ChaCha8Rng::seed_from_u64(seed), dim)
}

/// Random channel with `kraus_count` operators, read off as blocks of a
/// random isometry `C^{in} -> C^{out} (x) C^{kraus_count}`.
pub fn random_channel_with<R: Rng + ?Sized>(
    rng: &mut R,
    in_dim: usize,
    out_dim: usize,
    kraus_count: usize,
) -> QuantumOperation {
    assert!(
        out_dim * kraus_count >= in_dim,
        "isometry needs out_dim * kraus_count >= in_dim"
    );
    let v = loop {
        if let Some(v) = matcore::orthonormalize_columns(&ginibre_with(rng, kraus_count * out_dim, in_dim)) {
            break v;
        }
    };
    let ops = (0..kraus_count)
        .map(|mu| {
            let mut k = ComplexMatrix::zeros(out_dim, in_dim);
            for i in 0..out_dim {
                for j in 0..in_dim {
                    k[(i, j)] = v[(mu * out_dim + i, j)];
                }
            }
            k
        })
        .collect();
    QuantumOperation::kraus(ops).expect("isometry blocks form a valid channel")
}
