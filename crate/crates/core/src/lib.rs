//! Coherence measures of quantum states and the cohering power of quantum
//! operations.
//!
//! - [`matcore`]: dense complex matrices, tensor products, partial traces,
//!   Hermitian eigendecomposition and the induced 1->1 norm.
//! - [`coherence`]: density matrices and the l1 and relative-entropy
//!   coherence measures in the computational basis.
//! - [`channels`]: quantum operations, Kraus forms and Stinespring dilation.
//! - [`power`]: cohering power, its generalized form and the associated bounds.
//! - [`optimize`]: multistart maximization over states and random ensembles.
//! - [`verify`]: randomized checks of the cohering-power identities and
//!   inequalities, with replayable witnesses.
//! - [`doc`]: JSON documents for channels, circuits and matrices.

pub mod channels;
pub mod coherence;
pub mod doc;
pub mod error;
pub mod matcore;
pub mod optimize;
pub mod power;
pub mod verify;

pub use channels::{compose, tensor_ops, DilationResult, QuantumOperation, ValidationReport};
pub use coherence::{c_l1, c_r, dephase, is_incoherent_state, CoherenceMeasure, DensityMatrix};
pub use error::{Error, Result};
pub use matcore::{ComplexMatrix, ComplexScalar, SubsystemShape};
pub use optimize::{maximize_over_states, OptResult, OptimizerConfig};
pub use power::{cohering_power, generalized_cohering_power, PowerReport};
