//! Entanglement dynamics of qubits sharing a common vacuum bath.

pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod hilbert;
pub mod linalg;
pub mod oracles;
pub mod random;
pub mod scenario;
pub mod state;

pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use state::{BasisTag, DensityMatrix};
