//! Circuit parameters, fluxoid wave vectors and effective potentials.

mod params;
mod potential;
mod wave_vectors;

pub use params::{
    effective_inductance, CircuitParams, DriveParams, FluxBias, InductanceSet, JunctionEnergies,
    PhaseState, TransformedPhases, WindingNumbers,
};
pub use potential::{
    optimal_mprime, outer_loop_offset, u_eff, u_eff_appendix, u_eff_appendix_gradient,
    u_eff_branch, u_eff_branch_gradient, u_eff_branch_parts, u_eff_gradient, u_eff_parts,
    u_eff_transformed, v_reduced, Bias, PotentialParts, ReducedPotential, TransformedPotential,
};
pub use wave_vectors::{wave_vectors, wave_vectors_branch, BiasScheme, WaveVectorSolution};
