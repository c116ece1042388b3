//! Entanglement and correlation measures.

mod concurrence;
mod discord;
mod invariant;

pub use concurrence::{
    concurrence_mixed, concurrence_pure, measure_report, n_concurrence, q_auxiliary, spin_flip_eigenvalues,
    MeasureReport,
};
pub use discord::{discord_pure_bipartition, discord_two_qubit, DiscordOptions, DiscordResult};
pub use invariant::{invariant_sigma, sigma_components, Model, SigmaBreakdown, ATOMS, PHOTONS};
