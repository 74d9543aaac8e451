//! Quaternionic analysis for steady three-dimensional ideal flow.
//!
//! The crate builds monogenic flow potentials `w = φ + Ψ` from harmonic
//! velocity potentials, integrates quaternion-valued differential forms over
//! closed parametric surfaces, and evaluates the three-dimensional
//! Blasius–Chaplygin force and moment formulas. The planar module checks
//! that the surface formulas collapse to the classical contour integrals of
//! complex analysis when the flow does not depend on `z`.

pub mod catalog;
pub mod cli;
pub mod config;
pub mod error;
pub mod field;
pub mod planar;
pub mod force;
pub mod potential;
pub mod quadrature;
pub mod quat;
pub mod surface;
pub mod theorems;

pub use error::{Error, Result};
pub use quat::{Quaternion, ReducedPoint};
