//! Mixed-integer programming formulations for nonconvex piecewise linear
//! functions.
//!
//! The crate builds univariate (SOS2-based) and bivariate (grid
//! triangulation) formulations, writes them as LP or MPS files, and certifies
//! their structure (validity, idealness, sharpness, biclique covers, branching
//! strength) using exact rational arithmetic throughout.
//!
//! Module map:
//!
//! * [`geometry`]: exact vertex enumeration, convex hulls, planar polygons.
//! * [`encodings`]: Gray code, integer and binary zig-zag codes.
//! * [`sos2`]: univariate formulations and biclique covers.
//! * [`bivariate`]: grid triangulations, rectangle and triangle selection.
//! * [`model`], [`io`], [`generate`]: the solver-agnostic model, file
//!   formats and benchmark instances.
//! * [`verify`]: structural certificates and branching metrics.

pub mod bivariate;
pub mod encodings;
mod error;
pub mod generate;
pub mod geometry;
pub mod io;
pub(crate) mod linalg;
pub mod model;
pub mod par;
pub mod rational;
pub mod sos2;
pub mod verify;

pub use error::{Error, Result};
pub use rational::Rational;
