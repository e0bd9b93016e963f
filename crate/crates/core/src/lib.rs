pub mod bounds;
pub mod constructions;
pub mod embedding;
pub mod graph;
pub mod minors;
pub mod vortex;
