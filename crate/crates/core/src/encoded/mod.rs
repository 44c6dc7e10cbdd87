//! Two-spins-per-qubit blockade encoding.
//!
//! A logical qubit lives on two adjacent spins (|0>_L = |01>, |1>_L = |10>)
//! and neighboring qubits are separated by blockade spins frozen in |0>.
//! The frozen spins cancel every Ising field up to the blockade width, so
//! idle logical qubits see no J1 or J2 terms; gates are built from exchange
//! pulses only, with every sigma^x and sigma^z field off.

pub mod gates;
pub mod layout;
pub mod pulses;

pub use gates::{
    compile_cphase, compile_cphase_with_phase, cphase_matrix, logical_action, logical_sigma_x,
    logical_sigma_z, reduced_hamiltonians, simulate_gate, GateReport, ReducedHamiltonians,
    TiltMode,
};
pub use layout::{verify_blockade_cancellation, FrozenSite, LogicalLayout, QubitSites};
pub use pulses::{
    composite_rotation, rotation_matrix, solve_pulse_parameters, solve_tilted, PulseParameters,
};
