//! Quantum operations: construction, validation, application to states,
//! Kraus normal form and Stinespring dilation.

use num_complex::Complex64;

use crate::coherence::DensityMatrix;
use crate::error::{Error, Result};
use crate::matcore::{self, ComplexMatrix, SubsystemShape, HERMITIAN_TOL};
use crate::optimize;

/// Tolerance used when validating unitarity and Kraus completeness.
pub const CHANNEL_TOL: f64 = 1e-9;

/// Largest dimension for which the incoherence test also checks basis images.
const CROSS_CHECK_MAX_DIM: usize = 16;

/// Largest `in_dim * out_dim` for which Kraus lists are compressed through the Choi matrix.
const CHOI_COMPRESS_MAX: usize = 256;

/// A completely positive, trace-preserving map described structurally.
#[derive(Debug, Clone, PartialEq)]
pub enum QuantumOperation {
    /// `rho -> u rho u^dagger`.
    Unitary { u: ComplexMatrix },
    /// `rho -> sum_mu K_mu rho K_mu^dagger`, each `K_mu` of shape `out_dim x in_dim`.
    Kraus {
        ops: Vec<ComplexMatrix>,
        in_dim: usize,
        out_dim: usize,
    },
    /// `rho -> rho (x) sigma` on an `in_dim`-dimensional input; the appended factor is last.
    Append { sigma: DensityMatrix, in_dim: usize },
    /// Partial trace over the factors listed in `traced`.
    Dismiss {
        shape: SubsystemShape,
        traced: Vec<usize>,
    },
    /// Sequential composition, applied first to last.
    Compose { steps: Vec<QuantumOperation> },
    /// Parallel composition on a tensor-product input.
    Tensor { factors: Vec<QuantumOperation> },
}

/// Outcome of [`QuantumOperation::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    /// Worst `max |sum K^dagger K - I|` over all Kraus-type components.
    pub completeness_deviation: f64,
    /// Worst `max |u^dagger u - I|` over all unitary components.
    pub unitarity_defect: f64,
    /// Structural problems (dimension chains, index ranges, empty lists).
    pub issues: Vec<String>,
    pub passed: bool,
}

impl ValidationReport {
    fn empty() -> Self {
        Self {
            completeness_deviation: 0.0,
            unitarity_defect: 0.0,
            issues: Vec::new(),
            passed: true,
        }
    }

    fn merge(&mut self, other: ValidationReport) {
        self.completeness_deviation = self.completeness_deviation.max(other.completeness_deviation);
        self.unitarity_defect = self.unitarity_defect.max(other.unitarity_defect);
        self.issues.extend(other.issues);
    }

    fn finish(mut self) -> Self {
        self.passed = self.issues.is_empty()
            && self.completeness_deviation <= CHANNEL_TOL
            && self.unitarity_defect <= CHANNEL_TOL;
        self
    }
}

/// Channel written as `rho -> Tr_K(U (rho (x) |psi><psi|) U^dagger)`.
#[derive(Debug, Clone)]
pub struct DilationResult {
    pub ancilla_dim: usize,
    pub ancilla_state: Vec<Complex64>,
    pub big_unitary: ComplexMatrix,
    pub reconstruction_error: f64,
}

impl DilationResult {
    pub fn system_dim(&self) -> usize {
        self.big_unitary.rows() / self.ancilla_dim
    }

    /// Evaluates the dilated form on a system operator.
    pub fn reconstruct(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let ancilla = ComplexMatrix::outer(&self.ancilla_state, &self.ancilla_state);
        let joint = self.big_unitary.conjugate(&matcore::tensor(rho, &ancilla));
        matcore::trace_out_unchecked(&joint, &[self.system_dim(), self.ancilla_dim], &[0])
    }
}

impl QuantumOperation {
    /// Checked unitary channel.
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        let defect = u.unitarity_defect();
        if defect > CHANNEL_TOL {
            return Err(Error::NotUnitary { defect });
        }
        Ok(Self::Unitary { u })
    }

    pub fn identity(dim: usize) -> Self {
        Self::Unitary {
            u: ComplexMatrix::identity(dim),
        }
    }

    /// Checked Kraus channel; dimensions are taken from the first operator.
    pub fn kraus(ops: Vec<ComplexMatrix>) -> Result<Self> {
        let first = ops
            .first()
            .ok_or_else(|| Error::InvalidOperation("Kraus list is empty".into()))?;
        let op = Self::Kraus {
            in_dim: first.cols(),
            out_dim: first.rows(),
            ops,
        };
        op.checked()
    }

    pub fn append(sigma: DensityMatrix, in_dim: usize) -> Result<Self> {
        Self::Append { sigma, in_dim }.checked()
    }

    pub fn dismiss(shape: SubsystemShape, traced: Vec<usize>) -> Result<Self> {
        Self::Dismiss { shape, traced }.checked()
    }

    fn checked(self) -> Result<Self> {
        let report = self.validate();
        if report.passed {
            Ok(self)
        } else {
            Err(Error::InvalidOperation(describe_failure(&report)))
        }
    }

    pub fn in_dim(&self) -> usize {
        match self {
            Self::Unitary { u } => u.cols(),
            Self::Kraus { in_dim, .. } | Self::Append { in_dim, .. } => *in_dim,
            Self::Dismiss { shape, .. } => shape.total(),
            Self::Compose { steps } => steps.first().map_or(0, Self::in_dim),
            Self::Tensor { factors } => factors.iter().map(Self::in_dim).product(),
        }
    }

    pub fn out_dim(&self) -> usize {
        match self {
            Self::Unitary { u } => u.rows(),
            Self::Kraus { out_dim, .. } => *out_dim,
            Self::Append { sigma, in_dim } => in_dim * sigma.dim(),
            Self::Dismiss { shape, traced } => shape.dim_of(&shape.complement(traced)),
            Self::Compose { steps } => steps.last().map_or(0, Self::out_dim),
            Self::Tensor { factors } => factors.iter().map(Self::out_dim).product(),
        }
    }

    /// Checks completeness, unitarity and dimension consistency of every component.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::empty();
        match self {
            Self::Unitary { u } => {
                if !u.is_square() {
                    report.issues.push(format!("unitary must be square, got {}x{}", u.rows(), u.cols()));
                } else {
                    report.unitarity_defect = u.unitarity_defect();
                }
            }
            Self::Kraus { ops, in_dim, out_dim } => {
                if ops.is_empty() {
                    report.issues.push("Kraus list is empty".into());
                }
                let mut shapes_ok = true;
                for (i, k) in ops.iter().enumerate() {
                    if k.rows() != *out_dim || k.cols() != *in_dim {
                        shapes_ok = false;
                        report.issues.push(format!(
                            "Kraus operator {i} has shape {}x{}, expected {out_dim}x{in_dim}",
                            k.rows(),
                            k.cols()
                        ));
                    }
                }
                if shapes_ok && !ops.is_empty() {
                    report.completeness_deviation = completeness_deviation(ops, *in_dim);
                }
            }
            Self::Append { in_dim, .. } => {
                if *in_dim == 0 {
                    report.issues.push("append input dimension must be positive".into());
                }
            }
            Self::Dismiss { shape, traced } => {
                for (pos, &t) in traced.iter().enumerate() {
                    if t >= shape.len() {
                        report
                            .issues
                            .push(format!("traced index {t} out of range for {} factors", shape.len()));
                    } else if traced[..pos].contains(&t) {
                        report.issues.push(format!("traced index {t} repeated"));
                    }
                }
            }
            Self::Compose { steps } => {
                if steps.is_empty() {
                    report.issues.push("composition has no steps".into());
                }
                for step in steps {
                    report.merge(step.validate());
                }
                for (i, pair) in steps.windows(2).enumerate() {
                    if pair[0].out_dim() != pair[1].in_dim() {
                        report.issues.push(format!(
                            "step {i} outputs dimension {} but step {} expects {}",
                            pair[0].out_dim(),
                            i + 1,
                            pair[1].in_dim()
                        ));
                    }
                }
            }
            Self::Tensor { factors } => {
                if factors.is_empty() {
                    report.issues.push("tensor product has no factors".into());
                }
                for factor in factors {
                    report.merge(factor.validate());
                }
            }
        }
        report.finish()
    }

    /// Applies the channel to a state.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.in_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.in_dim(),
                found: rho.dim(),
            });
        }
        let out = self.apply_matrix(rho.matrix());
        let tr = out.trace();
        if (tr.re - 1.0).abs() > HERMITIAN_TOL || tr.im.abs() > HERMITIAN_TOL {
            return Err(Error::InvalidOperation(format!(
                "output trace {} indicates a non trace-preserving map",
                tr.re
            )));
        }
        Ok(DensityMatrix::from_channel_output(out))
    }

    /// The underlying linear map on `in_dim x in_dim` matrices.
    pub fn apply_matrix(&self, m: &ComplexMatrix) -> ComplexMatrix {
        match self {
            Self::Unitary { u } => u.conjugate(m),
            Self::Kraus { ops, out_dim, .. } => apply_kraus(ops, *out_dim, m),
            Self::Append { sigma, .. } => matcore::tensor(m, sigma.matrix()),
            Self::Dismiss { shape, traced } => {
                matcore::trace_out_unchecked(m, shape.dims(), &shape.complement(traced))
            }
            Self::Compose { steps } => steps
                .iter()
                .fold(m.clone(), |acc, step| step.apply_matrix(&acc)),
            Self::Tensor { .. } => apply_kraus(&self.kraus_operators(), self.out_dim(), m),
        }
    }

    /// A Kraus representation of the channel.
    pub fn kraus_operators(&self) -> Vec<ComplexMatrix> {
        match self {
            Self::Unitary { u } => vec![u.clone()],
            Self::Kraus { ops, .. } => ops.clone(),
            Self::Append { sigma, in_dim } => append_kraus(sigma, *in_dim),
            Self::Dismiss { shape, traced } => dismiss_kraus(shape, traced),
            Self::Compose { steps } => {
                let mut iter = steps.iter();
                let Some(first) = iter.next() else {
                    return Vec::new();
                };
                let in_dim = first.in_dim();
                let mut acc = first.kraus_operators();
                for step in iter {
                    let next = step.kraus_operators();
                    let mut product = Vec::with_capacity(acc.len() * next.len());
                    for b in &next {
                        for a in &acc {
                            product.push(b * a);
                        }
                    }
                    acc = compress_if_large(product, in_dim, step.out_dim());
                }
                acc
            }
            Self::Tensor { factors } => {
                let mut iter = factors.iter();
                let Some(first) = iter.next() else {
                    return Vec::new();
                };
                let (mut din, mut dout) = (first.in_dim(), first.out_dim());
                let mut acc = first.kraus_operators();
                for factor in iter {
                    let next = factor.kraus_operators();
                    let mut product = Vec::with_capacity(acc.len() * next.len());
                    for a in &acc {
                        for b in &next {
                            product.push(matcore::tensor(a, b));
                        }
                    }
                    din *= factor.in_dim();
                    dout *= factor.out_dim();
                    acc = compress_if_large(product, din, dout);
                }
                acc
            }
        }
    }

    /// Kraus normal form of this channel.
    pub fn to_kraus(&self) -> QuantumOperation {
        match self {
            Self::Kraus { .. } => self.clone(),
            _ => Self::Kraus {
                ops: self.kraus_operators(),
                in_dim: self.in_dim(),
                out_dim: self.out_dim(),
            },
        }
    }

    /// True iff every Kraus operator has at most one entry of modulus above
    /// `tol` in each column. For inputs up to dimension 16 the images of the
    /// basis projectors are also required to be diagonal.
    pub fn is_incoherent_operation(&self, tol: f64) -> bool {
        let ops = self.kraus_operators();
        let column_criterion = ops.iter().all(|k| {
            (0..k.cols()).all(|j| (0..k.rows()).filter(|&i| k[(i, j)].norm() > tol).count() <= 1)
        });
        if !column_criterion {
            return false;
        }
        let d = self.in_dim();
        if d > CROSS_CHECK_MAX_DIM {
            return true;
        }
        let out_dim = self.out_dim();
        (0..d).all(|k| {
            let image = apply_kraus(&ops, out_dim, &ComplexMatrix::basis_projector(d, k));
            (0..out_dim).all(|i| (0..out_dim).all(|j| i == j || image[(i, j)].norm() <= tol.max(1e-12)))
        })
    }

    /// Stinespring dilation with a `d^2`-dimensional ancilla, checked on 20 random states.
    pub fn stinespring_dilate(&self) -> Result<DilationResult> {
        self.stinespring_dilate_checked(20, 0x5eed_d11a)
    }

    /// As [`Self::stinespring_dilate`], checking the reconstruction on
    /// `check_states` seeded random states.
    pub fn stinespring_dilate_checked(&self, check_states: usize, seed: u64) -> Result<DilationResult> {
        let d = self.in_dim();
        if self.out_dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: self.out_dim(),
            });
        }
        if d > CROSS_CHECK_MAX_DIM {
            return Err(Error::Unsupported(format!("dilation of system dimension {d}")));
        }
        let report = self.validate();
        if !report.passed {
            return Err(Error::InvalidOperation(describe_failure(&report)));
        }
        let ancilla_dim = d * d;
        let mut ops = self.kraus_operators();
        if ops.len() > ancilla_dim {
            ops = choi_compress(&ops, d, d);
        }
        if ops.len() > ancilla_dim {
            return Err(Error::Dilation(format!(
                "{} Kraus operators exceed ancilla dimension {ancilla_dim}",
                ops.len()
            )));
        }
        let big_unitary = complete_isometry(&ops, d, ancilla_dim)?;
        let mut ancilla_state = vec![Complex64::new(0.0, 0.0); ancilla_dim];
        ancilla_state[0] = Complex64::new(1.0, 0.0);
        let mut result = DilationResult {
            ancilla_dim,
            ancilla_state,
            big_unitary,
            reconstruction_error: 0.0,
        };
        let mut worst: f64 = 0.0;
        for i in 0..check_states {
            let rho = optimize::random_density(optimize::derive_seed(seed, i as u64), d);
            let direct = self.apply_matrix(rho.matrix());
            worst = worst.max(direct.max_abs_diff(&result.reconstruct(rho.matrix())));
        }
        result.reconstruction_error = worst;
        Ok(result)
    }
}

/// Sequential composition `ops[0]` then `ops[1]` and so on.
pub fn compose(ops: Vec<QuantumOperation>) -> Result<QuantumOperation> {
    QuantumOperation::Compose { steps: ops }.checked()
}

/// Parallel composition on the tensor product of the inputs.
pub fn tensor_ops(ops: Vec<QuantumOperation>) -> Result<QuantumOperation> {
    QuantumOperation::Tensor { factors: ops }.checked()
}

fn describe_failure(report: &ValidationReport) -> String {
    let mut parts = report.issues.clone();
    if report.completeness_deviation > CHANNEL_TOL {
        parts.push(format!(
            "Kraus completeness deviation {:e} exceeds {CHANNEL_TOL:e}",
            report.completeness_deviation
        ));
    }
    if report.unitarity_defect > CHANNEL_TOL {
        parts.push(format!(
            "unitarity defect {:e} exceeds {CHANNEL_TOL:e}",
            report.unitarity_defect
        ));
    }
    parts.join("; ")
}

/// `max |sum K^dagger K - I|`.
pub fn completeness_deviation(ops: &[ComplexMatrix], in_dim: usize) -> f64 {
    let mut sum = ComplexMatrix::zeros(in_dim, in_dim);
    for k in ops {
        sum = &sum + &k.adjoint_mul(k);
    }
    sum.max_abs_diff(&ComplexMatrix::identity(in_dim))
}

pub(crate) fn apply_kraus(ops: &[ComplexMatrix], out_dim: usize, m: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    for k in ops {
        out = &out + &k.conjugate(m);
    }
    out
}

/// `{ sqrt(p_i) (I (x) |v_i>) }` for `sigma = sum_i p_i |v_i><v_i|`.
fn append_kraus(sigma: &DensityMatrix, in_dim: usize) -> Vec<ComplexMatrix> {
    let eig = matcore::hermitian_eigen(sigma.matrix()).expect("density matrices are Hermitian");
    let id = ComplexMatrix::identity(in_dim);
    let mut ops: Vec<ComplexMatrix> = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > 1e-15)
        .map(|(i, &p)| {
            let v = ComplexMatrix::column_vector(&eig.vectors.column(i));
            matcore::tensor(&id, &v).scale_real(p.sqrt())
        })
        .collect();
    if ops.is_empty() {
        // unreachable for unit-trace sigma; keep the list nonempty regardless
        let v = ComplexMatrix::column_vector(&eig.vectors.column(0));
        ops.push(matcore::tensor(&id, &v));
    }
    ops
}

/// `{ I_kept (x) <t| }` over the basis `t` of the traced factors.
fn dismiss_kraus(shape: &SubsystemShape, traced: &[usize]) -> Vec<ComplexMatrix> {
    let dims = shape.dims();
    let kept = shape.complement(traced);
    let kept_dims: Vec<usize> = kept.iter().map(|&i| dims[i]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&i| dims[i]).collect();
    let dk: usize = kept_dims.iter().product();
    let dt: usize = traced_dims.iter().product();
    let total = shape.total();
    let mut full = vec![0usize; dims.len()];
    (0..dt)
        .map(|t| {
            let td = matcore::digits(t, &traced_dims);
            let mut k = ComplexMatrix::zeros(dk, total);
            for a in 0..dk {
                let ad = matcore::digits(a, &kept_dims);
                for (&slot, &x) in kept.iter().zip(&ad) {
                    full[slot] = x;
                }
                for (&slot, &x) in traced.iter().zip(&td) {
                    full[slot] = x;
                }
                k[(a, matcore::flat_index(&full, dims))] = Complex64::new(1.0, 0.0);
            }
            k
        })
        .collect()
}

fn compress_if_large(ops: Vec<ComplexMatrix>, in_dim: usize, out_dim: usize) -> Vec<ComplexMatrix> {
    let choi_dim = in_dim * out_dim;
    if ops.len() > choi_dim && choi_dim <= CHOI_COMPRESS_MAX {
        choi_compress(&ops, in_dim, out_dim)
    } else {
        ops
    }
}

/// Minimal Kraus list obtained from the eigendecomposition of the Choi matrix
/// `sum_mu vec(K_mu) vec(K_mu)^dagger`.
fn choi_compress(ops: &[ComplexMatrix], in_dim: usize, out_dim: usize) -> Vec<ComplexMatrix> {
    let n = in_dim * out_dim;
    let mut choi = ComplexMatrix::zeros(n, n);
    for k in ops {
        let v = k.as_slice();
        choi = &choi + &ComplexMatrix::outer(v, v);
    }
    let eig = matcore::hermitian_eigen(&choi).expect("Choi matrix is Hermitian");
    let top = eig.values.first().copied().unwrap_or(0.0).max(0.0);
    let kept: Vec<ComplexMatrix> = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > top * 1e-14 && l > 0.0)
        .map(|(i, &l)| {
            let col: Vec<Complex64> = eig.vectors.column(i).iter().map(|z| z * l.sqrt()).collect();
            ComplexMatrix::from_vec_unchecked(out_dim, in_dim, col)
        })
        .collect();
    if kept.is_empty() {
        ops.to_vec()
    } else {
        kept
    }
}

/// Places the isometry `V = sum_mu K_mu (x) |mu>` in the columns `x * a + 0`
/// of a `d a x d a` matrix and completes the rest with Gram-Schmidt over the
/// canonical basis.
fn complete_isometry(ops: &[ComplexMatrix], d: usize, ancilla_dim: usize) -> Result<ComplexMatrix> {
    let deviation = completeness_deviation(ops, d);
    if deviation > CHANNEL_TOL {
        return Err(Error::Dilation(format!("Kraus completeness deviation {deviation:e}")));
    }
    let big = d * ancilla_dim;
    let mut columns: Vec<Option<Vec<Complex64>>> = vec![None; big];
    let mut accepted: Vec<Vec<Complex64>> = Vec::with_capacity(big);
    for x in 0..d {
        let mut col = vec![Complex64::new(0.0, 0.0); big];
        for (mu, k) in ops.iter().enumerate() {
            for i in 0..d {
                col[i * ancilla_dim + mu] = k[(i, x)];
            }
        }
        accepted.push(col.clone());
        columns[x * ancilla_dim] = Some(col);
    }

    let free: Vec<usize> = (0..big).filter(|&c| columns[c].is_none()).collect();
    let mut free_slots = free.into_iter();
    for e in 0..big {
        if accepted.len() == big {
            break;
        }
        let mut v = vec![Complex64::new(0.0, 0.0); big];
        v[e] = Complex64::new(1.0, 0.0);
        for _pass in 0..2 {
            for q in &accepted {
                let overlap = matcore::inner(q, &v);
                for (a, b) in v.iter_mut().zip(q) {
                    *a -= overlap * b;
                }
            }
        }
        let nv = matcore::norm(&v);
        if nv < 1e-6 {
            continue;
        }
        v.iter_mut().for_each(|z| *z /= nv);
        let slot = free_slots.next().expect("free slot for every accepted column");
        accepted.push(v.clone());
        columns[slot] = Some(v);
    }
    if accepted.len() != big {
        return Err(Error::Dilation(format!(
            "orthonormal completion found {} of {big} columns",
            accepted.len()
        )));
    }
    let mut u = ComplexMatrix::zeros(big, big);
    for (j, col) in columns.into_iter().enumerate() {
        let col = col.expect("all columns filled");
        for (i, z) in col.into_iter().enumerate() {
            u[(i, j)] = z;
        }
    }
    let defect = u.unitarity_defect();
    if defect > CHANNEL_TOL {
        return Err(Error::Dilation(format!("completed matrix has unitarity defect {defect:e}")));
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherence::dephase;

    fn pauli_z() -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&[1.0, -1.0])
    }

    fn phase_flip() -> QuantumOperation {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        QuantumOperation::kraus(vec![ComplexMatrix::identity(2).scale_real(s), pauli_z().scale_real(s)]).unwrap()
    }

    fn full_dephasing() -> QuantumOperation {
        QuantumOperation::kraus(vec![
            ComplexMatrix::basis_projector(2, 0),
            ComplexMatrix::basis_projector(2, 1),
        ])
        .unwrap()
    }

    fn cnot() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![0.0, 0.0, 1.0, 0.0],
        ])
        .unwrap()
    }

    #[test]
    fn validation_examples() {
        assert!(phase_flip().validate().passed);
        let id = QuantumOperation::Kraus {
            ops: vec![ComplexMatrix::identity(2)],
            in_dim: 2,
            out_dim: 2,
        };
        assert!(id.validate().passed);
        let lossy = QuantumOperation::Kraus {
            ops: vec![ComplexMatrix::identity(2).scale_real(0.9)],
            in_dim: 2,
            out_dim: 2,
        };
        let report = lossy.validate();
        assert!(!report.passed);
        assert!((report.completeness_deviation - 0.19).abs() < 1e-12);
        assert!(QuantumOperation::kraus(vec![ComplexMatrix::identity(2).scale_real(0.9)]).is_err());
    }

    #[test]
    fn validation_flags_structure() {
        let shape = SubsystemShape::new(vec![2, 2]).unwrap();
        assert!(QuantumOperation::dismiss(shape.clone(), vec![2]).is_err());
        assert!(QuantumOperation::dismiss(shape, vec![1, 1]).is_err());
        assert!(compose(vec![QuantumOperation::identity(2), QuantumOperation::identity(3)]).is_err());
        assert!(compose(vec![]).is_err());
        assert!(tensor_ops(vec![]).is_err());
        let not_unitary = ComplexMatrix::from_real_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(QuantumOperation::unitary(not_unitary), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn apply_examples() {
        let rho = optimize::random_density(3, 2);
        let sigma = optimize::random_density(4, 3);
        let out = QuantumOperation::identity(2).apply(&rho).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-15);
        let appended = QuantumOperation::append(sigma.clone(), 2).unwrap().apply(&rho).unwrap();
        assert!(appended.matrix().max_abs_diff(rho.tensor(&sigma).matrix()) < 1e-15);
        let shape = SubsystemShape::new(vec![2, 3]).unwrap();
        let dismissed = QuantumOperation::dismiss(shape, vec![1])
            .unwrap()
            .apply(&rho.tensor(&sigma))
            .unwrap();
        assert!(dismissed.matrix().max_abs_diff(rho.matrix()) < 1e-14);
        assert!(matches!(
            QuantumOperation::identity(3).apply(&rho),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn dismiss_everything_gives_scalar() {
        let shape = SubsystemShape::new(vec![2, 2]).unwrap();
        let op = QuantumOperation::dismiss(shape, vec![0, 1]).unwrap();
        assert_eq!(op.out_dim(), 1);
        let out = op.apply(&optimize::random_density(9, 4)).unwrap();
        assert!((out.matrix()[(0, 0)].re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn incoherence_examples() {
        assert!(QuantumOperation::unitary(cnot()).unwrap().is_incoherent_operation(1e-9));
        assert!(!QuantumOperation::unitary(ComplexMatrix::hadamard())
            .unwrap()
            .is_incoherent_operation(1e-9));
        let shape = SubsystemShape::new(vec![2, 3, 2]).unwrap();
        for traced in [vec![0], vec![1], vec![0, 2], vec![0, 1, 2]] {
            let op = QuantumOperation::dismiss(shape.clone(), traced).unwrap();
            assert!(op.is_incoherent_operation(1e-9));
        }
        assert!(phase_flip().is_incoherent_operation(1e-9));
        let coherent_sigma = QuantumOperation::append(DensityMatrix::maximally_coherent(2), 2).unwrap();
        assert!(!coherent_sigma.is_incoherent_operation(1e-9));
        let incoherent_sigma = QuantumOperation::append(DensityMatrix::diagonal(&[0.3, 0.7]).unwrap(), 2).unwrap();
        assert!(incoherent_sigma.is_incoherent_operation(1e-9));
    }

    #[test]
    fn kraus_forms_reproduce_channels() {
        let sigma = optimize::random_density(11, 2);
        let append = QuantumOperation::append(sigma, 3).unwrap();
        let ops = append.kraus_operators();
        assert!(completeness_deviation(&ops, 3) < 1e-12);

        let shape = SubsystemShape::new(vec![2, 3]).unwrap();
        let dismiss = QuantumOperation::dismiss(shape, vec![1]).unwrap();
        let ops = dismiss.kraus_operators();
        assert_eq!(ops.len(), 3);
        for seed in 0..10 {
            let rho = optimize::random_density(seed, 6);
            let via_kraus = apply_kraus(&ops, 2, rho.matrix());
            let direct = matcore::partial_trace(rho.matrix(), &SubsystemShape::new(vec![2, 3]).unwrap(), &[0]).unwrap();
            assert!(via_kraus.max_abs_diff(&direct) < 1e-14);
        }
        let u = optimize::random_unitary(5, 3);
        assert_eq!(QuantumOperation::unitary(u.clone()).unwrap().kraus_operators(), vec![u]);
    }

    #[test]
    fn composition_examples() {
        let u = optimize::random_unitary(21, 3);
        let there_and_back = compose(vec![
            QuantumOperation::unitary(u.clone()).unwrap(),
            QuantumOperation::unitary(u.adjoint()).unwrap(),
        ])
        .unwrap();
        let sigma = optimize::random_density(22, 2);
        let append_discard = compose(vec![
            QuantumOperation::append(sigma, 3).unwrap(),
            QuantumOperation::dismiss(SubsystemShape::new(vec![3, 2]).unwrap(), vec![1]).unwrap(),
        ])
        .unwrap();
        for seed in 0..10 {
            let rho = optimize::random_density(100 + seed, 3);
            assert!(there_and_back.apply(&rho).unwrap().matrix().max_abs_diff(rho.matrix()) < 1e-12);
            assert!(append_discard.apply(&rho).unwrap().matrix().max_abs_diff(rho.matrix()) < 1e-12);
        }
        let h = QuantumOperation::unitary(ComplexMatrix::hadamard()).unwrap();
        let hh = tensor_ops(vec![h.clone(), h]).unwrap();
        let direct = QuantumOperation::unitary(matcore::tensor(&ComplexMatrix::hadamard(), &ComplexMatrix::hadamard())).unwrap();
        for seed in 0..10 {
            let rho = optimize::random_density(200 + seed, 4);
            let a = hh.apply(&rho).unwrap();
            let b = direct.apply(&rho).unwrap();
            assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-12);
        }
    }

    #[test]
    fn dilation_examples() {
        let v = optimize::random_unitary(31, 2);
        let dil = QuantumOperation::unitary(v).unwrap().stinespring_dilate().unwrap();
        assert_eq!(dil.ancilla_dim, 4);
        assert!(dil.reconstruction_error <= 1e-12);
        assert!(dil.big_unitary.unitarity_defect() <= 1e-9);

        let dil = phase_flip().stinespring_dilate().unwrap();
        assert!(dil.reconstruction_error <= 1e-8);

        let dephasing = full_dephasing();
        let dil = dephasing.stinespring_dilate().unwrap();
        for seed in 0..10 {
            let rho = optimize::random_density(300 + seed, 2);
            let expected = dephase(&rho);
            assert!(dil.reconstruct(rho.matrix()).max_abs_diff(expected.matrix()) < 1e-12);
        }
        let ancilla = DensityMatrix::pure(&dil.ancilla_state).unwrap();
        assert!(QuantumOperation::append(ancilla, 2).unwrap().is_incoherent_operation(1e-9));
    }

    #[test]
    fn dilation_compresses_long_kraus_lists() {
        // 9 copies of the dephasing operators: more than d^2 = 4 entries.
        let mut ops = Vec::new();
        for _ in 0..3 {
            ops.push(ComplexMatrix::basis_projector(2, 0).scale_real(1.0 / 3f64.sqrt()));
            ops.push(ComplexMatrix::basis_projector(2, 1).scale_real(1.0 / 3f64.sqrt()));
        }
        let op = QuantumOperation::kraus(ops).unwrap();
        let dil = op.stinespring_dilate().unwrap();
        assert!(dil.reconstruction_error <= 1e-12);
    }

    #[test]
    fn dilation_rejects_dimension_change() {
        let op = QuantumOperation::append(DensityMatrix::basis(2, 0), 2).unwrap();
        assert!(matches!(op.stinespring_dilate(), Err(Error::DimensionMismatch { .. })));
    }
}
