//! Circuits over `{H, K, K^-1, CNOT, Toffoli}` and the Hadamard-count bound
//! on their l1 cohering power.
//!
//! Qubit 0 is the most significant bit of a basis index.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::ComplexMatrix;
use crate::power::unitary_power_l1;

/// Largest register for which the exact circuit unitary is built.
pub const EXACT_MAX_QUBITS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gate {
    H,
    /// `diag(1, i)`.
    K,
    /// `diag(1, -i)`.
    KInv,
    /// Control first, then target.
    Cnot,
    /// Two controls, then target.
    Toffoli,
}

impl Gate {
    pub fn arity(self) -> usize {
        match self {
            Gate::H | Gate::K | Gate::KInv => 1,
            Gate::Cnot => 2,
            Gate::Toffoli => 3,
        }
    }

    fn single_qubit_matrix(self) -> Option<[[Complex64; 2]; 2]> {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        match self {
            Gate::H => Some([[s, s], [s, -s]]),
            Gate::K => Some([[one, zero], [zero, Complex64::new(0.0, 1.0)]]),
            Gate::KInv => Some([[one, zero], [zero, Complex64::new(0.0, -1.0)]]),
            Gate::Cnot | Gate::Toffoli => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateApplication {
    pub gate: Gate,
    pub on: Vec<usize>,
}

/// Validated circuit: gates act in list order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitSpec {
    qubits: usize,
    gates: Vec<GateApplication>,
}

impl CircuitSpec {
    pub fn new(qubits: usize, gates: Vec<GateApplication>) -> Result<Self> {
        if qubits == 0 {
            return Err(Error::InvalidCircuit("circuit needs at least one qubit".into()));
        }
        for (pos, g) in gates.iter().enumerate() {
            if g.on.len() != g.gate.arity() {
                return Err(Error::InvalidCircuit(format!(
                    "gate {pos} ({:?}) needs {} qubit indices, got {}",
                    g.gate,
                    g.gate.arity(),
                    g.on.len()
                )));
            }
            for (i, &q) in g.on.iter().enumerate() {
                if q >= qubits {
                    return Err(Error::InvalidCircuit(format!(
                        "gate {pos} acts on qubit {q}, register has {qubits}"
                    )));
                }
                if g.on[..i].contains(&q) {
                    return Err(Error::InvalidCircuit(format!("gate {pos} repeats qubit {q}")));
                }
            }
        }
        Ok(Self { qubits, gates })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn gates(&self) -> &[GateApplication] {
        &self.gates
    }

    pub fn hadamard_count(&self) -> usize {
        self.gates.iter().filter(|g| g.gate == Gate::H).count()
    }

    /// One gate as a matrix on the whole register.
    pub fn embed(&self, g: &GateApplication) -> ComplexMatrix {
        let n = self.qubits;
        let dim = 1usize << n;
        let bit = |q: usize| 1usize << (n - 1 - q);
        let mut m = ComplexMatrix::zeros(dim, dim);
        match g.gate.single_qubit_matrix() {
            Some(u) => {
                let b = bit(g.on[0]);
                for j in 0..dim {
                    let jb = usize::from(j & b != 0);
                    for ib in 0..2 {
                        let i = if ib == 1 { j | b } else { j & !b };
                        m[(i, j)] = u[ib][jb];
                    }
                }
            }
            None => {
                let (controls, target) = g.on.split_at(g.on.len() - 1);
                let tb = bit(target[0]);
                for j in 0..dim {
                    let fire = controls.iter().all(|&c| j & bit(c) != 0);
                    let i = if fire { j ^ tb } else { j };
                    m[(i, j)] = Complex64::new(1.0, 0.0);
                }
            }
        }
        m
    }

    /// `G_last ... G_2 G_1` on the full `2^N` space.
    pub fn unitary(&self) -> ComplexMatrix {
        self.gates
            .iter()
            .fold(ComplexMatrix::identity(1usize << self.qubits), |acc, g| &self.embed(g) * &acc)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HadamardBound {
    pub hadamard_count: usize,
    /// `2^{#H} - 1`.
    pub bound: f64,
    /// l1 cohering power of the circuit unitary, for registers up to
    /// [`EXACT_MAX_QUBITS`] qubits.
    pub exact: Option<f64>,
}

/// Every `H` on one qubit has full-register l1 power 1 and every other gate
/// power 0, so the product bound gives `2^{#H} - 1`.
pub fn circuit_hadamard_bound(circuit: &CircuitSpec) -> Result<HadamardBound> {
    let hadamard_count = circuit.hadamard_count();
    let bound = 2f64.powi(hadamard_count.min(i32::MAX as usize) as i32) - 1.0;
    let exact = if circuit.qubits() <= EXACT_MAX_QUBITS {
        Some(unitary_power_l1(&circuit.unitary())?)
    } else {
        None
    };
    Ok(HadamardBound {
        hadamard_count,
        bound,
        exact,
    })
}
