//! A finite-difference laboratory for Burgers-type equations with executable
//! Lie symmetry analysis.
//!
//! The crate bundles four discretizations of the Burgers equation (FTCS,
//! Lax–Wendroff, Crank–Nicolson and a semi-invariant scheme built from
//! fourth-order operators plus a tunable dissipation Ω), exact reference
//! solutions, a jet-space prolongation engine that checks group invariance
//! of the equations and of the schemes' modified equations, von Neumann
//! stability tooling, and a config-driven experiment harness that measures
//! L² error histories across Galilean frames.

pub mod equations;
pub mod exact;
pub mod experiments;
pub mod grid;
pub mod jet;
pub mod linalg;
pub mod modeq;
pub mod schemes;
mod series;
pub mod stability;
pub mod symmetry;
