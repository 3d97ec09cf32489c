//! JSON documents for matrices, channels, circuits and dilations.
//!
//! Complex scalars are `[re, im]` pairs (a bare number is read as a real
//! scalar) and matrices are arrays of row arrays. Floats are written in the
//! shortest form that parses back to the identical `f64`.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;
use thiserror::Error;

use crate::channels::{DilationResult, QuantumOperation};
use crate::coherence::DensityMatrix;
use crate::error::Error;
use crate::matcore::{ComplexMatrix, SubsystemShape};
use crate::power::{CircuitSpec, Gate, GateApplication};

/// Failure to turn text into a domain object.
#[derive(Debug, Error)]
pub enum DocError {
    /// The text is not a well-formed document.
    #[error("malformed document: {0}")]
    Parse(String),
    /// The document is well formed but describes an invalid object.
    #[error("invalid document: {0}")]
    Invalid(#[from] Error),
}

/// One complex scalar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarDoc(pub Complex64);

impl Serialize for ScalarDoc {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.0.re, self.0.im].serialize(s)
    }
}

impl<'de> Deserialize<'de> for ScalarDoc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Pair([f64; 2]),
            Real(f64),
        }
        Ok(match Repr::deserialize(d)? {
            Repr::Pair([re, im]) => ScalarDoc(Complex64::new(re, im)),
            Repr::Real(re) => ScalarDoc(Complex64::new(re, 0.0)),
        })
    }
}

pub type MatrixDoc = Vec<Vec<ScalarDoc>>;

pub fn matrix_to_doc(m: &ComplexMatrix) -> MatrixDoc {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|&z| ScalarDoc(z)).collect())
        .collect()
}

pub fn matrix_from_doc(doc: &MatrixDoc) -> Result<ComplexMatrix, DocError> {
    let rows: Vec<Vec<Complex64>> = doc.iter().map(|r| r.iter().map(|s| s.0).collect()).collect();
    if rows.is_empty() || rows[0].is_empty() {
        return Err(DocError::Parse("matrix must have at least one row and one column".into()));
    }
    ComplexMatrix::from_rows(&rows).map_err(|e| DocError::Parse(format!("bad matrix: {e}")))
}

/// A matrix as a JSON value in the document format.
pub fn matrix_to_json(m: &ComplexMatrix) -> Value {
    serde_json::to_value(matrix_to_doc(m)).expect("matrices serialize")
}

pub fn vector_to_json(v: &[Complex64]) -> Value {
    let doc: Vec<ScalarDoc> = v.iter().map(|&z| ScalarDoc(z)).collect();
    serde_json::to_value(doc).expect("vectors serialize")
}

/// Tree description of a quantum operation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ChannelSpecDocument {
    Unitary {
        #[serde(alias = "matrix")]
        u: MatrixDoc,
    },
    Kraus {
        ops: Vec<MatrixDoc>,
    },
    Append {
        sigma: MatrixDoc,
        in_dim: usize,
    },
    Dismiss {
        dims: Vec<usize>,
        traced: Vec<usize>,
    },
    Compose {
        steps: Vec<ChannelSpecDocument>,
    },
    Tensor {
        factors: Vec<ChannelSpecDocument>,
    },
}

impl ChannelSpecDocument {
    pub fn parse(text: &str) -> Result<Self, DocError> {
        serde_json::from_str(text).map_err(|e| DocError::Parse(e.to_string()))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    /// Builds the operation and checks that it validates.
    pub fn to_operation(&self) -> Result<QuantumOperation, DocError> {
        let op = self.build()?;
        let report = op.validate();
        if !report.passed {
            let mut reasons = report.issues.clone();
            if report.completeness_deviation > crate::channels::CHANNEL_TOL {
                reasons.push(format!("Kraus completeness deviation {:e}", report.completeness_deviation));
            }
            if report.unitarity_defect > crate::channels::CHANNEL_TOL {
                reasons.push(format!("unitarity defect {:e}", report.unitarity_defect));
            }
            return Err(DocError::Invalid(Error::InvalidOperation(reasons.join("; "))));
        }
        Ok(op)
    }

    fn build(&self) -> Result<QuantumOperation, DocError> {
        Ok(match self {
            Self::Unitary { u } => QuantumOperation::Unitary { u: matrix_from_doc(u)? },
            Self::Kraus { ops } => {
                let ops = ops.iter().map(matrix_from_doc).collect::<Result<Vec<_>, _>>()?;
                let first = ops
                    .first()
                    .ok_or_else(|| DocError::Invalid(Error::InvalidOperation("Kraus list is empty".into())))?;
                QuantumOperation::Kraus {
                    in_dim: first.cols(),
                    out_dim: first.rows(),
                    ops,
                }
            }
            Self::Append { sigma, in_dim } => QuantumOperation::Append {
                sigma: DensityMatrix::new(matrix_from_doc(sigma)?)?,
                in_dim: *in_dim,
            },
            Self::Dismiss { dims, traced } => QuantumOperation::Dismiss {
                shape: SubsystemShape::new(dims.clone())?,
                traced: traced.clone(),
            },
            Self::Compose { steps } => QuantumOperation::Compose {
                steps: steps.iter().map(Self::build).collect::<Result<_, _>>()?,
            },
            Self::Tensor { factors } => QuantumOperation::Tensor {
                factors: factors.iter().map(Self::build).collect::<Result<_, _>>()?,
            },
        })
    }

    pub fn from_operation(op: &QuantumOperation) -> Self {
        match op {
            QuantumOperation::Unitary { u } => Self::Unitary { u: matrix_to_doc(u) },
            QuantumOperation::Kraus { ops, .. } => Self::Kraus {
                ops: ops.iter().map(matrix_to_doc).collect(),
            },
            QuantumOperation::Append { sigma, in_dim } => Self::Append {
                sigma: matrix_to_doc(sigma.matrix()),
                in_dim: *in_dim,
            },
            QuantumOperation::Dismiss { shape, traced } => Self::Dismiss {
                dims: shape.dims().to_vec(),
                traced: traced.clone(),
            },
            QuantumOperation::Compose { steps } => Self::Compose {
                steps: steps.iter().map(Self::from_operation).collect(),
            },
            QuantumOperation::Tensor { factors } => Self::Tensor {
                factors: factors.iter().map(Self::from_operation).collect(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateDoc {
    pub g: String,
    pub on: Vec<usize>,
}

/// `{"qubits": N, "gates": [{"g": "H", "on": [0]}, ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitSpecDocument {
    pub qubits: usize,
    pub gates: Vec<GateDoc>,
}

impl CircuitSpecDocument {
    pub fn parse(text: &str) -> Result<Self, DocError> {
        serde_json::from_str(text).map_err(|e| DocError::Parse(e.to_string()))
    }

    pub fn to_circuit(&self) -> Result<CircuitSpec, DocError> {
        let gates = self
            .gates
            .iter()
            .map(|g| {
                let gate = match g.g.as_str() {
                    "H" => Gate::H,
                    "K" => Gate::K,
                    "Kinv" => Gate::KInv,
                    "CNOT" => Gate::Cnot,
                    "CCNOT" | "Toffoli" => Gate::Toffoli,
                    other => return Err(DocError::Parse(format!("unknown gate `{other}`"))),
                };
                Ok(GateApplication { gate, on: g.on.clone() })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CircuitSpec::new(self.qubits, gates)?)
    }
}

/// Serialized dilation: ancilla dimension, ancilla vector and big unitary.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DilationDocument {
    pub ancilla_dim: usize,
    pub ancilla_state: Vec<ScalarDoc>,
    pub big_unitary: MatrixDoc,
    pub reconstruction_error: f64,
}

impl From<&DilationResult> for DilationDocument {
    fn from(d: &DilationResult) -> Self {
        Self {
            ancilla_dim: d.ancilla_dim,
            ancilla_state: d.ancilla_state.iter().map(|&z| ScalarDoc(z)).collect(),
            big_unitary: matrix_to_doc(&d.big_unitary),
            reconstruction_error: d.reconstruction_error,
        }
    }
}
