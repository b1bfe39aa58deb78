//! Stabilizer circuit toolkit.
//!
//! Circuits over {H, P, Z, CNOT, CZ} are simulated with Clifford tableaus,
//! Hadamard-free pieces are described by Z4 phase polynomials plus a linear
//! reversible map, and the pipeline rewrites any Clifford into the eight-stage
//! form `-H-C-CZ-P-H-P-CZ-C-` and then into a linear-nearest-neighbour circuit
//! of two-qubit depth at most `14n - 4`.
//!
//! Qubits are 0-based and at most 64 (bit-vectors are single `u64` words).

pub mod circuit;
pub mod czsynth;
pub mod error;
pub mod generate;
pub mod linear;
pub mod oracle;
pub mod phasepoly;
pub mod pipeline;
pub mod tableau;

pub use circuit::{Circuit, Gate, Layout};
pub use error::{Error, Result};
pub use linear::LinearMatrix;
pub use phasepoly::PhasePoly;
pub use tableau::{PauliTerm, Tableau};

/// Largest supported qubit count.
pub const MAX_QUBITS: usize = 64;

pub(crate) fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}
