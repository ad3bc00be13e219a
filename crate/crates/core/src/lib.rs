//! Exact fermionic Fock-space computations for skew Howe duality.
//!
//! The crate realizes the dual pairs `(gl_d, gl_k)`, `(O(d), o_2k)` and
//! `(Sp(d), sp_2k)` by quadratic operators on `Λ(C^d ⊗ C^k)`, decomposes the
//! space into joint irreducibles and compares the result with the diagram
//! pairing rules and with Young-symmetrized tensors.

pub mod decompose;
pub mod diagram;
pub mod dual_pairs;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod rational;
pub mod tensor;
pub mod verify;

pub use error::{Error, Result};
pub use fock::{
    apply_annihilation, apply_creation, apply_quadratic, bracket, matrix_of, vacuum, FieldOp,
    FockSpace, FockState, ModeIndex, Monomial, QuadraticOperator, SignedState, StateVector,
};
pub use rational::{HalfInt, Q};
