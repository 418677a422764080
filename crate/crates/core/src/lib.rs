//! Classical simulation of circuits on `n` lines (`2n` qubits) whose one- and
//! two-line gates generate the spin group Spin(3n).
//!
//! A circuit is compiled to a single rotation in SO(3n), and single-qubit
//! measurement statistics are read from rows of that rotation in time
//! polynomial in `n`. A dense statevector oracle cross-checks small cases.

pub mod clifford;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod pauli;
pub mod random;
pub mod simulator;
pub mod spinmap;

pub use clifford::{CliffordElement, SpinElement};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, ComplexVector, TOL_COMPOSE, TOL_EXACT};
pub use pauli::{PauliString, ProductState, QubitState};
pub use simulator::{compile, simulate, Circuit, Gate, MeasurementReport, QubitSelection};
pub use spinmap::{Lines, RotationMatrix};
