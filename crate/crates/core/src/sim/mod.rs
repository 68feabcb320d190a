//! Statevector simulation: gates, ansatz circuits, eigensolvers and the variational loop.

pub mod ansatz;
pub mod eigen;
pub mod gates;
pub mod spsa;
pub mod statevector;
pub mod vqe;

pub use ansatz::{prepare_ansatz, AnsatzSpec};
pub use eigen::extremal_eigenstate;
pub use gates::Mat2;
pub use spsa::{spsa_maximize, SpsaConfig, SpsaResult};
pub use statevector::Statevector;
pub use vqe::{vqe_multi_seed, vqe_relax, VqeResult};
