pub mod engine;
pub mod graph;
pub mod posa;
pub mod strategies;
pub mod verify;
pub mod harness;
