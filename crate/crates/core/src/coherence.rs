//! Coherence of states in the fixed computational basis.
//!
//! Entropies are measured in bits. Analysing a different reference basis is
//! done by conjugating inputs with the basis change before calling in.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{self, ComplexMatrix, HERMITIAN_TOL};

/// Default tolerance for [`is_incoherent_state`].
pub const INCOHERENCE_TOL: f64 = 1e-9;

/// Hermitian, positive-semidefinite, unit-trace matrix.
#[derive(Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates `mat` as a state: Hermitian, trace one and eigenvalues
    /// no lower than `-1e-9`, all within [`HERMITIAN_TOL`].
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::NotSquare {
                rows: mat.rows(),
                cols: mat.cols(),
            });
        }
        let defect = mat.hermitian_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation: defect });
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > HERMITIAN_TOL || tr.im.abs() > HERMITIAN_TOL {
            return Err(Error::BadTrace { trace: tr.re });
        }
        let mat = mat.hermitian_part();
        let lowest = matcore::hermitian_eigenvalues(&mat)?
            .last()
            .copied()
            .unwrap_or(0.0);
        if lowest < -HERMITIAN_TOL {
            return Err(Error::NotPositive { eigenvalue: lowest });
        }
        Ok(Self { mat })
    }

    /// Projects an approximately valid matrix onto the state space:
    /// symmetrize, clip negative eigenvalues, renormalize the trace.
    pub fn sanitize(mat: &ComplexMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::NotSquare {
                rows: mat.rows(),
                cols: mat.cols(),
            });
        }
        let herm = mat.hermitian_part();
        let eig = matcore::hermitian_eigen(&herm)?;
        let clipped: Vec<f64> = eig.values.iter().map(|&l| l.max(0.0)).collect();
        let total: f64 = clipped.iter().sum();
        if total <= 0.0 {
            return Err(Error::BadTrace { trace: total });
        }
        let rebuilt = if eig.values.iter().all(|&l| l >= 0.0) {
            herm
        } else {
            eig.vectors.conjugate(&ComplexMatrix::from_real_diagonal(&clipped))
        };
        Self::new(rebuilt.scale_real(1.0 / rebuilt.trace().re))
    }

    /// `G G^dagger / Tr(G G^dagger)`; positive by construction.
    /// Returns `None` when `G` is numerically zero.
    pub fn from_factor(g: &ComplexMatrix) -> Option<Self> {
        if !g.is_square() {
            return None;
        }
        let gg = g.mul_adjoint(g);
        let tr = gg.trace().re;
        if !(tr.is_finite() && tr > f64::MIN_POSITIVE) {
            return None;
        }
        Some(Self {
            mat: gg.scale_real(1.0 / tr).hermitian_part(),
        })
    }

    /// Wraps a matrix known to be a state up to rounding (e.g. the image of a
    /// state under a channel), enforcing exact Hermiticity.
    pub(crate) fn from_channel_output(mat: ComplexMatrix) -> Self {
        Self {
            mat: mat.hermitian_part(),
        }
    }

    /// Basis projector `|k><k|`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index {k} out of range for dimension {dim}");
        Self {
            mat: ComplexMatrix::basis_projector(dim, k),
        }
    }

    /// Pure state `|psi><psi|` after normalizing `psi`.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let n = matcore::norm(psi);
        if psi.is_empty() || !n.is_finite() || n == 0.0 {
            return Err(Error::BadTrace { trace: n * n });
        }
        let v: Vec<Complex64> = psi.iter().map(|z| z / n).collect();
        Ok(Self {
            mat: ComplexMatrix::outer(&v, &v).hermitian_part(),
        })
    }

    /// Diagonal state with the given probabilities.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diagonal(probs))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            mat: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    /// The state with every entry equal to `1/dim`.
    pub fn maximally_coherent(dim: usize) -> Self {
        let v = vec![Complex64::new(1.0 / (dim as f64).sqrt(), 0.0); dim];
        Self {
            mat: ComplexMatrix::outer(&v, &v),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            mat: matcore::tensor(&self.mat, &other.mat),
        }
    }

    /// `lambda * self + (1 - lambda) * other`, for `lambda` in `[0, 1]`.
    pub fn mix(&self, lambda: f64, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidOperation(format!("mixing weight {lambda} outside [0, 1]")));
        }
        let m = &self.mat.scale_real(lambda) + &other.mat.scale_real(1.0 - lambda);
        Ok(Self { mat: m })
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        matcore::hermitian_eigenvalues(&self.mat).expect("density matrices are Hermitian")
    }
}

impl fmt::Debug for DensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DensityMatrix({:?})", self.mat)
    }
}

/// Which coherence quantifier to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoherenceMeasure {
    #[serde(rename = "l1")]
    L1,
    #[serde(rename = "relent")]
    RelativeEntropy,
}

impl CoherenceMeasure {
    pub fn evaluate(self, rho: &DensityMatrix) -> f64 {
        match self {
            Self::L1 => c_l1(rho),
            Self::RelativeEntropy => c_r(rho),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::L1 => "l1",
            Self::RelativeEntropy => "relent",
        }
    }
}

impl fmt::Display for CoherenceMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CoherenceMeasure {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "l1" => Ok(Self::L1),
            "relent" | "re" | "relative-entropy" => Ok(Self::RelativeEntropy),
            other => Err(format!("unknown coherence measure `{other}` (expected l1 or relent)")),
        }
    }
}

/// Deletes every off-diagonal entry.
pub fn dephase(rho: &DensityMatrix) -> DensityMatrix {
    let diag: Vec<Complex64> = rho.mat.diagonal().iter().map(|z| Complex64::new(z.re, 0.0)).collect();
    DensityMatrix {
        mat: ComplexMatrix::from_diagonal(&diag),
    }
}

/// Sum of the moduli of all off-diagonal entries.
pub fn c_l1(rho: &DensityMatrix) -> f64 {
    let m = &rho.mat;
    let n = m.rows();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                total += m[(i, j)].norm();
            }
        }
    }
    total
}

/// Shannon entropy in bits; nonpositive entries contribute nothing.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// Von Neumann entropy in bits. Eigenvalues in `[-1e-9, 0)` count as zero.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    shannon_entropy(&rho.eigenvalues())
}

/// Relative entropy of coherence `S(diag(rho)) - S(rho)`, in bits.
pub fn c_r(rho: &DensityMatrix) -> f64 {
    let diag: Vec<f64> = rho.mat.diagonal().iter().map(|z| z.re).collect();
    let value = shannon_entropy(&diag) - von_neumann_entropy(rho);
    debug_assert!(value >= -1e-9, "relative entropy of coherence {value} below tolerance");
    value.max(0.0)
}

/// True iff every off-diagonal modulus is at most `tol`.
pub fn is_incoherent_state(rho: &DensityMatrix, tol: f64) -> bool {
    let m = &rho.mat;
    let n = m.rows();
    (0..n).all(|i| (0..n).all(|j| i == j || m[(i, j)].norm() <= tol))
}
