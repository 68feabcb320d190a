//! MaxCut through quantum relaxations.
//!
//! A graph is colored, each color class is packed into qubits with a quantum random access code,
//! and the cut function becomes a 2-local Hamiltonian whose expectation on embedded product
//! states equals the cut. The highest-energy state of that Hamiltonian, found exactly or with a
//! variational circuit on the built-in statevector simulator, is rounded back to a cut either by
//! measuring in random magic bases or by reading off the signs of the vertex operators.
//!
//! Every numeric type is generic over [`Real`] (`f32` or `f64`); the aliases at the crate root
//! fix `f64`.

// `!(x > 0)` rejects NaN along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod graph;
pub mod oracle;
pub mod pauli;
pub mod pipeline;
pub mod problems;
pub mod qrac;
pub mod rounding;
pub mod scalar;
pub mod shadows;
pub mod sim;

pub use error::{Error, Result};
pub use graph::{Assignment, Coloring};
pub use pauli::{Axis, PauliString};
pub use qrac::{Deformation, VertexPauliMap};
pub use scalar::Real;

pub type Graph = graph::Graph<f64>;
pub type Edge = graph::Edge<f64>;
pub type Statevector = sim::Statevector<f64>;
pub type RelaxedHamiltonian = qrac::RelaxedHamiltonian<f64>;
pub type EncodedState = qrac::EncodedState<f64>;
pub type RoundingSample = rounding::RoundingSample<f64>;
