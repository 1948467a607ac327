//! Incremental configuration of the hardware racks domain: the domain model
//! and constraint checker, a step-wise solve engine with pluggable action
//! strategies, a scope-bounded verifier and a benchmark harness.

pub mod engine;
pub mod model;
pub mod strategies;
pub mod bench;
pub mod verifier;
