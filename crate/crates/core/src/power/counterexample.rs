//! A qubit unitary and state for which the generalized relative-entropy
//! cohering power strictly exceeds the cohering power.
//!
//! The matrices are only known to four decimals, so they are projected back
//! onto the unitary group and the state space before use.

use num_complex::Complex64;

use crate::coherence::DensityMatrix;
use crate::matcore::{self, ComplexMatrix};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The unitary as printed, not exactly unitary.
pub fn printed_unitary() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![c(0.5828, -0.8125), c(-0.0148, 0.0007)],
        vec![c(-0.0125, -0.0080), c(-0.1021, -0.9947)],
    ])
    .expect("static matrix")
}

/// The state as printed.
pub fn printed_state() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![c(0.8706, 0.0), c(0.3078, 0.0527)],
        vec![c(0.3078, -0.0527), c(0.1294, 0.0)],
    ])
    .expect("static matrix")
}

/// Nearest unitary (polar factor) to [`printed_unitary`].
pub fn unitary() -> ComplexMatrix {
    matcore::nearest_unitary(&printed_unitary()).expect("printed matrix is far from singular")
}

/// [`printed_state`] symmetrized, eigenvalue-clipped and trace-normalized.
pub fn state() -> DensityMatrix {
    DensityMatrix::sanitize(&printed_state()).expect("printed state is close to valid")
}

/// Reported values, and the absolute tolerance within which they are reproduced.
pub const REPORTED_POWER: f64 = 0.0030;
pub const REPORTED_GAIN: f64 = 0.0190;
pub const REPRODUCTION_TOL: f64 = 2e-3;
