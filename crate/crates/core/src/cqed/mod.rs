//! Resonator modes, qubit-resonator and two-qubit Hamiltonians, and closed-system dynamics.

pub mod dynamics;
mod hamiltonians;
mod operator;
mod resonator;

pub use dynamics::{
    basis_state, check_fock_cutoff, evolve_driven, evolve_series, oscillation_period, population,
    qubit_population, time_evolve, top_fock_population, DrivenHamiltonian, Propagator, Trajectory,
};
pub use hamiltonians::{
    annihilation, build_qubit_resonator_h, build_qubit_resonator_h_wells, build_rwa_h,
    dispersive_two_qubit_h, exchange_splitting, excitation_number, kron, sigma_minus, sigma_plus,
    sigma_x, sigma_z, tavis_cummings_h, TwoQubitParams,
};
pub use operator::{BasisFactor, OperatorMatrix};
pub use resonator::ResonatorParams;
