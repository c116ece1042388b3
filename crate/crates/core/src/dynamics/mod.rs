//! State generation for the cavity (Jaynes–Cummings) and free-space
//! (Weisskopf–Wigner) models, sudden death/birth times and the spectral
//! partition analysis.

mod collective;
mod esd;
mod jc;
mod spectral;
mod ww;

pub use collective::{
    collective_layout, collective_reduced, collective_state, pair_state, two_atom_ww_reduced, ModeSubset, Pair,
};
pub use esd::{
    birth_time_numeric, death_time_numeric, esb_birth_time, esd_death_time, jc_esd_window, jc_esd_window_closed,
    SuddenTime, ENTANGLED_Q,
};
pub use jc::{four_mode_layout, initial_state, jc_evolve_numeric, jc_state, pair_propagator, JcParams};
pub use spectral::{
    bandwidth_threshold, detection_probability, long_time, mode_edge_grid, partition_scan, scan_transition, spectrum,
    ScanRow,
};
pub use ww::{ww_solve, Bath, WwParams, WwPropagator, WwSolution};
