//! Quantum-correlation measures for small multi-qudit states, together with
//! the two standard entanglement sudden death models: pairs of resonant
//! Jaynes–Cummings atom/cavity systems and atoms decaying into a discretized
//! Weisskopf–Wigner bath.
//!
//! The crate is organised bottom-up:
//!
//! - [`qcore`]: layouts, pure states, density matrices, partial traces,
//!   Schmidt decompositions, set partitions and von Neumann entropy.
//! - [`measures`]: Wootters concurrence and its auxiliary function, the
//!   n-qubit concurrence, quantum discord and the invariant Σ.
//! - [`geoment`]: geometric entanglement per partition, per block count and
//!   the full hierarchy.
//! - [`dynamics`]: state generators for both models, sudden death/birth time
//!   finders and the spectral partitioning analysis.
//! - [`cli`]: sweep specifications and table writers behind the `esdkit`
//!   binary.
//!
//! Basis ordering is row-major mixed radix over the layout, first label most
//! significant. For the four-mode models the layout is `A1 P1 A2 P2` with
//! `g = 0`, `e = 1` for atoms and photon occupation `0`/`1`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod geoment;
pub(crate) mod linalg;
pub mod measures;
pub mod qcore;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
