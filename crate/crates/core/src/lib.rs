pub mod candidates;
pub mod error;
pub mod graph;
pub mod policy;
pub mod protocol;
pub mod rational;
pub mod solver;
pub mod sweep;
