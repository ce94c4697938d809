//! Construction, diagonalization, and interrogation of the electron–nuclear
//! spin Hamiltonian.

pub mod clock;
pub mod eigen;
pub mod hamiltonian;
pub mod operators;
pub mod sweep;
pub mod tensor;
pub mod thermal;
pub mod transitions;

pub use clock::{clock_transitions, ClockOptions, ClockTransition};
pub use eigen::{eigensystem, eigensystem_at, EigenSystem};
pub use hamiltonian::{build_hamiltonian, FieldPoint, SpinParams};
pub use operators::{spin_dim, spin_matrices};
pub use sweep::{field_sweep, FieldSweep};
pub use tensor::{rotate_tensor, rotate_tensor_explicit, rotation_from_angles};
pub use thermal::boltzmann_weights;
pub use transitions::{
    dipole_operator, transition_table, transition_table_with, Transition, TransitionOptions,
};
