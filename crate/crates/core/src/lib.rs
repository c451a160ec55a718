//! σ_k genome distances, double distance on ambiguous breakpoint graphs, and
//! the (2,3)-SAT reduction to σ_k disambiguation.

pub mod abg;
pub mod bp_graph;
pub mod genome;
pub mod half;
pub mod reduction;
pub mod solver;

pub use half::HalfInt;
