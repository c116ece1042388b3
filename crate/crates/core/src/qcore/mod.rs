//! State containers and the tensor algebra underneath every measure.

mod entropy;
mod layout;
mod partition;
mod schmidt;
mod state;

pub use entropy::{binary_entropy, shannon_bits, von_neumann_entropy};
pub use layout::SubsystemLayout;
pub(crate) use partition::BlockIndexer;
pub use partition::{enumerate_partitions, Partition};
pub use schmidt::{schmidt, SchmidtDecomposition};
pub use state::{reduced_state, tensor_product, DensityMatrix, PureState};
pub use state::{HERMITIAN_TOL, NORM_TOL, PSD_TOL, TRACE_TOL};
