//! Seeded randomized checks of the identities and bounds satisfied by the
//! coherence measures and cohering powers.
//!
//! Each case runs a number of independent trials. Trial `t` of a case draws
//! from its own ChaCha stream, so a report depends only on the seed, the
//! profile and the trial counts, never on thread scheduling.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::channels::QuantumOperation;
use crate::coherence::{c_l1, c_r, CoherenceMeasure, DensityMatrix};
use crate::doc::matrix_to_json;
use crate::error::{Error, Result};
use crate::matcore::{self, ComplexMatrix, SubsystemShape};
use crate::optimize::{
    derive_seed, maximize_over_states, random_channel_with, random_density_with, random_unitary_with, stream_rng,
    OptimizerConfig,
};
use crate::power::{
    cohering_power, composition_bound_l1, continuity_gap, counterexample, generalized_cohering_power,
    l1_gain_ratio, tensor_power, unitary_power_l1, unitary_power_relent, unitary_product_bound_l1,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[allow(non_camel_case_types)]
pub enum CaseId {
    EQ3_L1_TENSOR,
    EQ4_RENT_TENSOR,
    P2_PRODUCT_BOUND,
    P2_TENSOR_EQUALITY,
    CONTINUITY,
    P3_COMPOSE_BOUND,
    P4_TENSOR_L1,
    P5_TENSOR_RENT,
    P6_QUBIT_EQUALITY,
    P7_COUNTEREXAMPLE,
    P8_RATIO_EQUALITY,
    HADAMARD_MAXIMALITY,
}

impl CaseId {
    pub const ALL: [CaseId; 12] = [
        CaseId::EQ3_L1_TENSOR,
        CaseId::EQ4_RENT_TENSOR,
        CaseId::P2_PRODUCT_BOUND,
        CaseId::P2_TENSOR_EQUALITY,
        CaseId::CONTINUITY,
        CaseId::P3_COMPOSE_BOUND,
        CaseId::P4_TENSOR_L1,
        CaseId::P5_TENSOR_RENT,
        CaseId::P6_QUBIT_EQUALITY,
        CaseId::P7_COUNTEREXAMPLE,
        CaseId::P8_RATIO_EQUALITY,
        CaseId::HADAMARD_MAXIMALITY,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseId::EQ3_L1_TENSOR => "EQ3_L1_TENSOR",
            CaseId::EQ4_RENT_TENSOR => "EQ4_RENT_TENSOR",
            CaseId::P2_PRODUCT_BOUND => "P2_PRODUCT_BOUND",
            CaseId::P2_TENSOR_EQUALITY => "P2_TENSOR_EQUALITY",
            CaseId::CONTINUITY => "CONTINUITY",
            CaseId::P3_COMPOSE_BOUND => "P3_COMPOSE_BOUND",
            CaseId::P4_TENSOR_L1 => "P4_TENSOR_L1",
            CaseId::P5_TENSOR_RENT => "P5_TENSOR_RENT",
            CaseId::P6_QUBIT_EQUALITY => "P6_QUBIT_EQUALITY",
            CaseId::P7_COUNTEREXAMPLE => "P7_COUNTEREXAMPLE",
            CaseId::P8_RATIO_EQUALITY => "P8_RATIO_EQUALITY",
            CaseId::HADAMARD_MAXIMALITY => "HADAMARD_MAXIMALITY",
        }
    }

    fn index(self) -> u64 {
        CaseId::ALL.iter().position(|&c| c == self).unwrap() as u64
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            CaseId::EQ3_L1_TENSOR => 1e-10,
            CaseId::P6_QUBIT_EQUALITY | CaseId::P8_RATIO_EQUALITY => 1e-4,
            CaseId::P7_COUNTEREXAMPLE => counterexample::REPRODUCTION_TOL,
            _ => 1e-9,
        }
    }

    /// Trials per profile; optimizer-backed cases are capped.
    pub fn default_trials(self, profile: Profile) -> usize {
        match (self, profile) {
            (CaseId::P7_COUNTEREXAMPLE, _) => 1,
            (CaseId::P6_QUBIT_EQUALITY, Profile::Quick) => 20,
            (CaseId::P6_QUBIT_EQUALITY, Profile::Full) => 100,
            (CaseId::P8_RATIO_EQUALITY, Profile::Quick) => 10,
            (CaseId::P8_RATIO_EQUALITY, Profile::Full) => 50,
            (_, Profile::Quick) => 100,
            (_, Profile::Full) => 1000,
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CaseId::ALL
            .iter()
            .copied()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidOperation(format!("unknown verification case `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Quick,
    Full,
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "quick" => Ok(Profile::Quick),
            "full" => Ok(Profile::Full),
            _ => Err(Error::InvalidOperation(format!("unknown profile `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropertyCase {
    pub id: CaseId,
    pub trials: usize,
    pub seed: u64,
    pub tolerance: f64,
}

impl PropertyCase {
    pub fn new(id: CaseId, profile: Profile, seed: u64) -> Self {
        Self {
            id,
            trials: id.default_trials(profile),
            seed,
            tolerance: id.default_tolerance(),
        }
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseReport {
    pub id: CaseId,
    pub trials: usize,
    pub failures: usize,
    pub tolerance: f64,
    /// Largest per-trial margin. For bounds this is `actual - bound`, for
    /// identities the absolute deviation.
    pub worst_margin: f64,
    /// Inputs of the worst trial (the worst failing one, if any failed).
    pub witness: Option<Value>,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub profile: Profile,
    pub cases: Vec<CaseReport>,
    pub passed: bool,
}

struct Trial {
    margin: f64,
    failed: bool,
    witness: Value,
}

impl Trial {
    /// Fails when `margin > tol`.
    fn upper(margin: f64, tol: f64, witness: Value) -> Self {
        Trial {
            margin,
            failed: margin.is_nan() || margin > tol,
            witness,
        }
    }
}

type TrialFn = fn(u64, &mut ChaCha8Rng, f64, u64) -> Result<Trial>;

pub fn run_property(case: &PropertyCase) -> CaseReport {
    let f: TrialFn = match case.id {
        CaseId::EQ3_L1_TENSOR => eq3_trial,
        CaseId::EQ4_RENT_TENSOR => eq4_trial,
        CaseId::P2_PRODUCT_BOUND => product_bound_trial,
        CaseId::P2_TENSOR_EQUALITY => unitary_tensor_trial,
        CaseId::CONTINUITY => continuity_trial,
        CaseId::P3_COMPOSE_BOUND => compose_bound_trial,
        CaseId::P4_TENSOR_L1 => |t, rng, tol, seed| channel_tensor_trial(t, rng, tol, seed, CoherenceMeasure::L1),
        CaseId::P5_TENSOR_RENT => {
            |t, rng, tol, seed| channel_tensor_trial(t, rng, tol, seed, CoherenceMeasure::RelativeEntropy)
        }
        CaseId::P6_QUBIT_EQUALITY => qubit_equality_trial,
        CaseId::P7_COUNTEREXAMPLE => counterexample_trial,
        CaseId::P8_RATIO_EQUALITY => ratio_trial,
        CaseId::HADAMARD_MAXIMALITY => hadamard_trial,
    };
    let case_seed = derive_seed(case.seed, case.id.index());
    let outcomes: Vec<Trial> = (0..case.trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream_rng(case_seed, t);
            let opt_seed = derive_seed(case_seed, t | (1 << 40));
            f(t, &mut rng, case.tolerance, opt_seed).unwrap_or_else(|e| Trial {
                margin: f64::MAX,
                failed: true,
                witness: json!({ "trial": t, "error": e.to_string() }),
            })
        })
        .collect();
    let failures = outcomes.iter().filter(|o| o.failed).count();
    let worst = outcomes
        .iter()
        .enumerate()
        .fold(None::<(usize, &Trial)>, |best, (i, o)| match best {
            Some((_, b)) if (b.failed, b.margin) >= (o.failed, o.margin) => best,
            _ => Some((i, o)),
        });
    CaseReport {
        id: case.id,
        trials: case.trials,
        failures,
        tolerance: case.tolerance,
        worst_margin: worst.map_or(0.0, |(_, o)| o.margin),
        witness: worst.map(|(_, o)| o.witness.clone()),
        passed: failures == 0,
    }
}

/// Every case at the profile's trial counts, in a fixed order.
pub fn run_all(seed: u64, profile: Profile) -> VerifyReport {
    run_cases(seed, profile, &CaseId::ALL)
}

pub fn run_cases(seed: u64, profile: Profile, ids: &[CaseId]) -> VerifyReport {
    let cases: Vec<CaseReport> = ids
        .iter()
        .map(|&id| run_property(&PropertyCase::new(id, profile, seed)))
        .collect();
    let passed = cases.iter().all(|c| c.passed);
    VerifyReport {
        seed,
        profile,
        cases,
        passed,
    }
}

fn small_dim(rng: &mut ChaCha8Rng) -> usize {
    rng.random_range(2..=3)
}

fn eq3_trial(t: u64, rng: &mut ChaCha8Rng, tol: f64, _: u64) -> Result<Trial> {
    let (da, db) = (small_dim(rng), small_dim(rng));
    let rho = random_density_with(rng, da);
    let sigma = random_density_with(rng, db);
    let lhs = c_l1(&rho.tensor(&sigma)) + 1.0;
    let rhs = (c_l1(&rho) + 1.0) * (c_l1(&sigma) + 1.0);
    let witness = json!({ "trial": t, "rho": matrix_to_json(rho.matrix()), "sigma": matrix_to_json(sigma.matrix()) });
    Ok(Trial::upper((lhs - rhs).abs(), tol, witness))
}

fn eq4_trial(t: u64, rng: &mut ChaCha8Rng, tol: f64, _: u64) -> Result<Trial> {
    let (da, db) = (small_dim(rng), small_dim(rng));
    let rho = random_density_with(rng, da);
    let sigma = random_density_with(rng, db);
    let dev = (c_r(&rho.tensor(&sigma)) - c_r(&rho) - c_r(&sigma)).abs();
    let witness = json!({ "trial": t, "rho": matrix_to_json(rho.matrix()), "sigma": matrix_to_json(sigma.matrix()) });
    Ok(Trial::upper(dev, tol, witness))
}

fn product_bound_trial(t: u64, rng: &mut ChaCha8Rng, tol: f64, _: u64) -> Result<Trial> {
    let d = rng.random_range(2..=4);
    let n = rng.random_range(2..=3);
    let us: Vec<ComplexMatrix> = (0..n).map(|_| random_unitary_with(rng, d)).collect();
    let check = unitary_product_bound_l1(&us)?;
    let witness = json!({
        "trial": t,
        "unitaries": us.iter().map(matrix_to_json).collect::<Vec<_>>(),
        "bound": check.bound,
        "actual": check.actual,
    });
    Ok(Trial::upper(check.excess(), tol, witness))
}

fn unitary_tensor_trial(t: u64, rng: &mut ChaCha8Rng, tol: f64, _: u64) -> Result<Trial> {
    let us: Vec<ComplexMatrix> = if t == 0 {
        vec![ComplexMatrix::hadamard(); 3]
    } else {
        let n = rng.random_range(2..=3);
        (0..n)
            .map(|_| {
                let d = small_dim(rng);
                random_unitary_with(rng, d)
            })
            .collect()
    };
    let mut predicted = 1.0;
    for u in &us {
        predicted *= unitary_power_l1(u)? + 1.0;
    }
    predicted -= 1.0;
    let joint = matcore::tensor_all(us.iter()).expect("non-empty factor list");
    let direct = cohering_power(&QuantumOperation::unitary(joint)?, CoherenceMeasure::L1)?.s_value;
    let mut dev = (direct - predicted).abs();
    if t == 0 {
        dev = dev.max((direct - 7.0).abs());
    }
    let witness = json!({
        "trial": t,
        "unitaries": us.iter().map(matrix_to_json).collect::<Vec<_>>(),
        "direct": direct,
        "predicted": predicted,
    });
    Ok(Trial::upper(dev, tol, witness))
}

/// `u w diag(exp(i eps lambda)) w^dagger`, a unitary near `u`.
fn perturb(rng: &mut ChaCha8Rng, u: &ComplexMatrix, eps: f64) -> ComplexMatrix {
    let d = u.rows();
    let w = random_unitary_with(rng, d);
    let phases: Vec<Complex64> = (0..d)
        .map(|_| Complex64::from_polar(1.0, eps * rng.random_range(-1.0..1.0)))
        .collect();
    let near_identity = w.conjugate(&ComplexMatrix::from_diagonal(&phases));
    u * &near_identity
}

fn continuity_trial(t: u64, rng: &mut ChaCha8Rng, tol: f64, _: u64) -> Result<Trial> {
    let d = [2, 4, 8][(t % 3) as usize];
    let u = random_unitary_with(rng, d);
    let (v, eps) = if t % 4 == 3 {
        (random_unitary_with(rng, d), None)
    } else {
        let eps = 10f64.powf(-rng.random_range(0.0..6.0));
        (perturb(rng, &u, eps), Some(eps))
    };
    let check = continuity_gap(&u, &v)?;
    let witness = json!({
        "trial": t,
        "u": matrix_to_json(&u),
        "v": matrix_to_json(&v),
        "epsilon": eps,
        "lhs": check.actual,
        "rhs": check.bound,
    });
    Ok(Trial::upper(check.excess(), tol, witness))
}

fn random_kraus_channel(rng: &mut ChaCha8Rng, in_dim: usize, out_dim: usize) -> QuantumOperation {
    let min_count = in_dim.div_ceil(out_dim);
    let count = rng.random_range(min_count..=min_count + 2);
    random_channel_with(rng, in_dim, out_dim, count)
}

fn compose_bound_trial(t: u64, rng: &mut ChaCha8Rng, tol: f64, _: u64) -> Result<Trial> {
    let din = small_dim(rng);
    let (op1, op2) = match t % 3 {
        0 => {
            let dout = small_dim(rng);
            let op2 = QuantumOperation::unitary(random_unitary_with(rng, dout))?;
            (random_kraus_channel(rng, din, dout), op2)
        }
        1 => {
            let dout = small_dim(rng);
            let sigma = random_density_with(rng, 2);
            (random_kraus_channel(rng, din, dout), QuantumOperation::append(sigma, dout)?)
        }
        _ => {
            let k = small_dim(rng);
            let traced = rng.random_range(0..2);
            let op2 = QuantumOperation::dismiss(SubsystemShape::new(vec![2, k])?, vec![traced])?;
            (random_kraus_channel(rng, din, 2 * k), op2)
        }
    };
    let check = composition_bound_l1(&op2, &op1)?;
    let witness = json!({
        "trial": t,
        "first": crate::doc::ChannelSpecDocument::from_operation(&op1),
        "second": crate::doc::ChannelSpecDocument::from_operation(&op2),
        "bound": check.bound,
        "actual": check.actual,
    });
    Ok(Trial::upper(check.excess(), tol, witness))
}

fn random_operation(rng: &mut ChaCha8Rng) -> Result<QuantumOperation> {
    let din = small_dim(rng);
    Ok(match rng.random_range(0..4) {
        0 => QuantumOperation::unitary(random_unitary_with(rng, din))?,
        1 => {
            let sigma = random_density_with(rng, 2);
            QuantumOperation::append(sigma, din)?
        }
        _ => {
            let dout = small_dim(rng);
            random_kraus_channel(rng, din, dout)
        }
    })
}

fn channel_tensor_trial(t: u64, rng: &mut ChaCha8Rng, tol: f64, _: u64, measure: CoherenceMeasure) -> Result<Trial> {
    let op1 = random_operation(rng)?;
    let op2 = random_operation(rng)?;
    let tp = tensor_power(&op1, &op2, measure)?;
    let witness = json!({
        "trial": t,
        "first": crate::doc::ChannelSpecDocument::from_operation(&op1),
        "second": crate::doc::ChannelSpecDocument::from_operation(&op2),
        "direct": tp.direct,
        "from_factors": tp.from_factors,
    });
    Ok(Trial::upper(tp.deviation(), tol, witness))
}

/// Agreement required between `2|ab|` and `||U||^2 - 1` for qubits.
const QUBIT_FORM_TOL: f64 = 1e-10;
/// The optimizer may never beat a basis state by more than this.
const FEASIBILITY_TOL: f64 = 1e-9;

fn qubit_equality_trial(t: u64, rng: &mut ChaCha8Rng, tol: f64, opt_seed: u64) -> Result<Trial> {
    let u = random_unitary_with(rng, 2);
    let two_ab = 2.0 * u[(0, 0)].norm() * u[(0, 1)].norm();
    let from_norm = unitary_power_l1(&u)?;
    let report = generalized_cohering_power(
        &QuantumOperation::unitary(u.clone())?,
        CoherenceMeasure::L1,
        &OptimizerConfig::with_seed(opt_seed),
    )?;
    let s_hat = report.s_hat_value.expect("optimizer value present");
    let gap = s_hat - report.s_value;
    let form_dev = (two_ab - from_norm).abs();
    let failed = form_dev > QUBIT_FORM_TOL || gap < -FEASIBILITY_TOL || gap > tol;
    Ok(Trial {
        margin: gap.abs(),
        failed,
        witness: json!({
            "trial": t,
            "u": matrix_to_json(&u),
            "s": report.s_value,
            "s_hat": s_hat,
            "two_ab": two_ab,
            "optimizer_seed": opt_seed,
        }),
    })
}

fn counterexample_trial(t: u64, _: &mut ChaCha8Rng, tol: f64, _: u64) -> Result<Trial> {
    let u = counterexample::unitary();
    let rho = counterexample::state();
    let s = unitary_power_relent(&u)?;
    let out = DensityMatrix::sanitize(&u.conjugate(rho.matrix()))?;
    let gain = c_r(&out) - c_r(&rho);
    let margin = (s - counterexample::REPORTED_POWER)
        .abs()
        .max((gain - counterexample::REPORTED_GAIN).abs());
    Ok(Trial {
        margin,
        failed: !(margin <= tol && gain > s),
        witness: json!({
            "trial": t,
            "u": matrix_to_json(&u),
            "rho": matrix_to_json(rho.matrix()),
            "s": s,
            "gain": gain,
        }),
    })
}

/// Per-iterate slack for the ratio never exceeding `S`.
const RATIO_UPPER_TOL: f64 = 1e-6;

fn ratio_trial(t: u64, rng: &mut ChaCha8Rng, tol: f64, opt_seed: u64) -> Result<Trial> {
    let d = 2 + (t % 2) as usize;
    let u = random_unitary_with(rng, d);
    let s = unitary_power_l1(&u)?;
    let violations = AtomicUsize::new(0);
    let res = maximize_over_states(
        |rho| {
            let r = l1_gain_ratio(&u, rho);
            if r > s + RATIO_UPPER_TOL {
                violations.fetch_add(1, Ordering::Relaxed);
            }
            r
        },
        d,
        &OptimizerConfig::with_seed(opt_seed),
    )?;
    let violations = violations.into_inner();
    let shortfall = s - res.best_value;
    let failed = violations > 0 || res.best_value > s + RATIO_UPPER_TOL || shortfall > tol;
    Ok(Trial {
        margin: shortfall.abs(),
        failed,
        witness: json!({
            "trial": t,
            "u": matrix_to_json(&u),
            "s": s,
            "ratio": res.best_value,
            "iterate_violations": violations,
            "optimizer_seed": opt_seed,
        }),
    })
}

fn hadamard_trial(t: u64, rng: &mut ChaCha8Rng, tol: f64, _: u64) -> Result<Trial> {
    let n = 1 + (t % 4) as u32;
    let bound = 2f64.powi(n as i32) - 1.0;
    let (u, margin) = if t < 4 {
        let h = matcore::tensor_all(std::iter::repeat_n(&ComplexMatrix::hadamard(), n as usize))
            .expect("at least one factor");
        let s = cohering_power(&QuantumOperation::unitary(h.clone())?, CoherenceMeasure::L1)?.s_value;
        (h, (s - bound).abs())
    } else {
        let u = random_unitary_with(rng, 1 << n);
        let s = unitary_power_l1(&u)?;
        (u, s - bound)
    };
    let witness = json!({ "trial": t, "qubits": n, "u": matrix_to_json(&u), "bound": bound });
    Ok(Trial::upper(margin, tol, witness))
}
