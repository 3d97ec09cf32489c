//! Cohering power of quantum operations.
//!
//! The cohering power `S_C(Phi)` is the largest coherence `Phi` produces from
//! an incoherent input, which is attained on a basis projector, so it is
//! computed exactly by enumeration. The generalized cohering power
//! `max_rho C(Phi(rho)) - C(rho)` is a nonconvex problem; it is estimated with
//! [`crate::optimize`] and always reported as a lower bound.

pub mod circuit;
pub mod counterexample;

use serde::{Deserialize, Serialize};

use crate::channels::{compose, QuantumOperation, CHANNEL_TOL};
use crate::coherence::{c_l1, shannon_entropy, CoherenceMeasure, DensityMatrix};
use crate::error::{Error, Result};
use crate::matcore::{self, ComplexMatrix};
use crate::optimize::{maximize_over_states, OptResult, OptimizerConfig};

pub use circuit::{circuit_hadamard_bound, CircuitSpec, Gate, GateApplication, HadamardBound};

/// Closed forms must match basis enumeration to this tolerance.
pub const CLOSED_FORM_TOL: f64 = 1e-9;

/// Two basis values closer than this count as a tie (lowest index wins).
const ARGMAX_TIE_TOL: f64 = 1e-12;

/// How `s_value` (and `s_hat_value`, when present) was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PowerMethod {
    BasisEnumeration,
    ClosedFormL1Unitary,
    ClosedFormREntUnitary,
    AppendClosedForm,
    DismissZero,
    Optimizer,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerDiagnostics {
    pub restarts: usize,
    pub converged_restarts: usize,
    pub aborted_restarts: usize,
    pub iterations: usize,
    pub evaluations: usize,
    /// Whether the restart that produced the best value met its tolerances.
    pub optimizer_converged: bool,
    /// `s_hat_value` is the best value found, a lower bound on the supremum.
    pub lower_bound: bool,
}

impl PowerDiagnostics {
    fn from_opt(res: &OptResult) -> Self {
        Self {
            restarts: res.restarts.len(),
            converged_restarts: res.converged_restarts(),
            aborted_restarts: res.aborted_restarts(),
            iterations: res.total_iterations(),
            evaluations: res.total_evaluations(),
            optimizer_converged: res.converged,
            lower_bound: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PowerReport {
    pub measure: CoherenceMeasure,
    pub s_value: f64,
    pub argmax_basis_index: usize,
    /// Closed-form value for unitary, appending and dismissal channels.
    pub closed_form_value: Option<f64>,
    pub s_hat_value: Option<f64>,
    pub s_hat_witness: Option<DensityMatrix>,
    pub method: PowerMethod,
    pub diagnostics: Option<PowerDiagnostics>,
}

/// Kraus form for structural variants whose direct application would rebuild
/// Kraus lists on every call.
fn prepared(op: &QuantumOperation) -> QuantumOperation {
    match op {
        QuantumOperation::Compose { .. } | QuantumOperation::Tensor { .. } => op.to_kraus(),
        _ => op.clone(),
    }
}

fn image(op: &QuantumOperation, rho: &DensityMatrix) -> DensityMatrix {
    DensityMatrix::from_channel_output(op.apply_matrix(rho.matrix()))
}

/// Coherence of every basis-state image, indexed by input basis state.
pub fn basis_coherences(op: &QuantumOperation, measure: CoherenceMeasure) -> Result<Vec<f64>> {
    let report = op.validate();
    if !report.passed {
        return Err(Error::InvalidOperation(format!("{:?}", report.issues)));
    }
    let op = prepared(op);
    let d = op.in_dim();
    (0..d)
        .map(|k| op.apply(&DensityMatrix::basis(d, k)).map(|out| measure.evaluate(&out)))
        .collect()
}

/// Exact cohering power by enumeration over basis inputs, cross-checked
/// against the closed form where one exists.
pub fn cohering_power(op: &QuantumOperation, measure: CoherenceMeasure) -> Result<PowerReport> {
    let values = basis_coherences(op, measure)?;
    let s_value = values.iter().copied().fold(0.0, f64::max);
    let argmax_basis_index = values
        .iter()
        .position(|&v| v >= s_value - ARGMAX_TIE_TOL)
        .unwrap_or(0);

    let (method, closed_form_value) = match (op, measure) {
        (QuantumOperation::Unitary { u }, CoherenceMeasure::L1) => {
            (PowerMethod::ClosedFormL1Unitary, Some(unitary_power_l1(u)?))
        }
        (QuantumOperation::Unitary { u }, CoherenceMeasure::RelativeEntropy) => {
            (PowerMethod::ClosedFormREntUnitary, Some(unitary_power_relent(u)?))
        }
        (QuantumOperation::Append { sigma, .. }, m) => (PowerMethod::AppendClosedForm, Some(m.evaluate(sigma))),
        (QuantumOperation::Dismiss { .. }, _) => (PowerMethod::DismissZero, Some(0.0)),
        _ => (PowerMethod::BasisEnumeration, None),
    };
    if let Some(cf) = closed_form_value {
        if (cf - s_value).abs() > CLOSED_FORM_TOL {
            return Err(Error::Numerical(format!(
                "closed form {cf} disagrees with basis enumeration {s_value}"
            )));
        }
    }
    Ok(PowerReport {
        measure,
        s_value,
        argmax_basis_index,
        closed_form_value,
        s_hat_value: None,
        s_hat_witness: None,
        method,
        diagnostics: None,
    })
}

fn require_unitary(u: &ComplexMatrix) -> Result<()> {
    let defect = u.unitarity_defect();
    if defect > CHANNEL_TOL {
        Err(Error::NotUnitary { defect })
    } else {
        Ok(())
    }
}

/// `||u||_{1->1}^2 - 1`.
pub fn unitary_power_l1(u: &ComplexMatrix) -> Result<f64> {
    require_unitary(u)?;
    let n = matcore::one_to_one_norm(u);
    Ok((n * n - 1.0).max(0.0))
}

/// Largest Shannon entropy of a column of `|u_ij|^2`, in bits.
pub fn unitary_power_relent(u: &ComplexMatrix) -> Result<f64> {
    require_unitary(u)?;
    Ok((0..u.cols())
        .map(|j| {
            let probs: Vec<f64> = u.column(j).iter().map(|z| z.norm_sqr()).collect();
            shannon_entropy(&probs)
        })
        .fold(0.0, f64::max))
}

/// Best-found generalized cohering power. The value is a certified lower
/// bound: it is attained by the returned witness state.
pub fn generalized_cohering_power(
    op: &QuantumOperation,
    measure: CoherenceMeasure,
    cfg: &OptimizerConfig,
) -> Result<PowerReport> {
    let mut report = cohering_power(op, measure)?;
    let op = prepared(op);
    let d = op.in_dim();
    let argmax_state = DensityMatrix::basis(d, report.argmax_basis_index);
    if d < 2 {
        report.s_hat_value = Some(report.s_value);
        report.s_hat_witness = Some(argmax_state);
        report.method = PowerMethod::Optimizer;
        return Ok(report);
    }
    let objective = |rho: &DensityMatrix| measure.evaluate(&image(&op, rho)) - measure.evaluate(rho);
    let res = maximize_over_states(objective, d, cfg)?;
    let diagnostics = PowerDiagnostics::from_opt(&res);
    // basis states are feasible, so the enumeration value is always attainable
    let (value, witness) = if res.best_value >= report.s_value {
        (res.best_value, res.best_state)
    } else {
        (report.s_value, argmax_state)
    };
    report.s_hat_value = Some(value);
    report.s_hat_witness = Some(witness);
    report.method = PowerMethod::Optimizer;
    report.diagnostics = Some(diagnostics);
    Ok(report)
}

/// Coherence gain `C(u rho u^dagger) - C(rho)` normalized by `C(rho) + 1`,
/// for the l1 measure.
pub fn l1_gain_ratio(u: &ComplexMatrix, rho: &DensityMatrix) -> f64 {
    let before = c_l1(rho);
    let after = c_l1(&DensityMatrix::from_channel_output(u.conjugate(rho.matrix())));
    (after - before) / (before + 1.0)
}

/// Maximizes [`l1_gain_ratio`] over states.
pub fn ratio_power_l1(u: &ComplexMatrix, cfg: &OptimizerConfig) -> Result<OptResult> {
    require_unitary(u)?;
    if u.rows() < 2 {
        return Err(Error::Optimizer("ratio maximization needs dimension at least 2".into()));
    }
    maximize_over_states(|rho| l1_gain_ratio(u, rho), u.rows(), cfg)
}

/// `actual` compared against an upper `bound`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub bound: f64,
    pub actual: f64,
}

impl BoundCheck {
    /// `actual - bound`; positive means violated.
    pub fn excess(&self) -> f64 {
        self.actual - self.bound
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.excess() <= tol
    }
}

/// `S(op2 . op1) + 1 <= (S(op2) + 1)(S(op1) + 1)` for the l1 measure, with
/// `op2` a unitary, appending or dismissal operation. `op1` acts first.
pub fn composition_bound_l1(op2: &QuantumOperation, op1: &QuantumOperation) -> Result<BoundCheck> {
    match op2 {
        QuantumOperation::Unitary { .. } | QuantumOperation::Append { .. } | QuantumOperation::Dismiss { .. } => {}
        _ => {
            return Err(Error::Unsupported(
                "the outer operation must be unitary, appending or dismissal".into(),
            ))
        }
    }
    if op1.out_dim() != op2.in_dim() {
        return Err(Error::DimensionMismatch {
            expected: op2.in_dim(),
            found: op1.out_dim(),
        });
    }
    let s2 = cohering_power(op2, CoherenceMeasure::L1)?.s_value;
    let s1 = cohering_power(op1, CoherenceMeasure::L1)?.s_value;
    let composed = compose(vec![op1.clone(), op2.clone()])?;
    let actual = cohering_power(&composed, CoherenceMeasure::L1)?.s_value;
    Ok(BoundCheck {
        bound: (s2 + 1.0) * (s1 + 1.0) - 1.0,
        actual,
    })
}

/// `S(U_1 U_2 ... U_n) + 1 <= prod_j (S(U_j) + 1)` for the l1 measure.
pub fn unitary_product_bound_l1(us: &[ComplexMatrix]) -> Result<BoundCheck> {
    let first = us
        .first()
        .ok_or_else(|| Error::InvalidOperation("empty unitary list".into()))?;
    let mut product = ComplexMatrix::identity(first.rows());
    let mut bound = 1.0;
    for u in us {
        if u.rows() != first.rows() || !u.is_square() {
            return Err(Error::DimensionMismatch {
                expected: first.rows(),
                found: u.rows(),
            });
        }
        bound *= unitary_power_l1(u)? + 1.0;
        product = &product * u;
    }
    Ok(BoundCheck {
        bound: bound - 1.0,
        actual: unitary_power_l1(&product)?,
    })
}

/// Cohering power of `op1 (x) op2` by enumeration on the product space,
/// next to the value predicted from the factors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TensorPower {
    pub direct: f64,
    pub from_factors: f64,
}

impl TensorPower {
    pub fn deviation(&self) -> f64 {
        (self.direct - self.from_factors).abs()
    }
}

/// For l1: `(S1 + 1)(S2 + 1) - 1`; for relative entropy: `S1 + S2`.
pub fn tensor_power(op1: &QuantumOperation, op2: &QuantumOperation, measure: CoherenceMeasure) -> Result<TensorPower> {
    let s1 = cohering_power(op1, measure)?.s_value;
    let s2 = cohering_power(op2, measure)?.s_value;
    let joint = crate::channels::tensor_ops(vec![op1.clone(), op2.clone()])?;
    let direct = cohering_power(&joint, measure)?.s_value;
    let from_factors = match measure {
        CoherenceMeasure::L1 => (s1 + 1.0) * (s2 + 1.0) - 1.0,
        CoherenceMeasure::RelativeEntropy => s1 + s2,
    };
    Ok(TensorPower { direct, from_factors })
}

/// `|S(u) - S(v)|` (as `actual`) against `2 sqrt(d) ||u - v||_{1->1}` (as `bound`).
pub fn continuity_gap(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<BoundCheck> {
    if u.rows() != v.rows() || u.cols() != v.cols() {
        return Err(Error::DimensionMismatch {
            expected: u.rows(),
            found: v.rows(),
        });
    }
    let lhs = (unitary_power_l1(u)? - unitary_power_l1(v)?).abs();
    let d = u.rows() as f64;
    let rhs = 2.0 * d.sqrt() * matcore::one_to_one_norm(&(u - v));
    Ok(BoundCheck { bound: rhs, actual: lhs })
}

/// Lower bound on the ancilla coherence needed to implement `op` with an
/// incoherent operation: `S_C` for l1; for the subadditive relative entropy,
/// the larger of `S_C` and the best-found generalized power.
pub fn ancilla_coherence_bound(op: &QuantumOperation, measure: CoherenceMeasure, cfg: &OptimizerConfig) -> Result<f64> {
    match measure {
        CoherenceMeasure::L1 => Ok(cohering_power(op, measure)?.s_value),
        CoherenceMeasure::RelativeEntropy => {
            let report = generalized_cohering_power(op, measure, cfg)?;
            Ok(report.s_value.max(report.s_hat_value.unwrap_or(0.0)))
        }
    }
}
