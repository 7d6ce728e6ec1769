//! Solvers for a degenerate nonlinear diffusion problem with power-law
//! boundary flux.
//!
//! The physical model is `u_t = kappa (u^n u_r)_r` on the half line with
//! inflow `-u^n u_r = q0 t^k` at the origin and zero initial data. Such
//! solutions have compact support: heat invades the medium behind a front
//! that advances at a finite speed. The problem is self-similar, and this
//! crate provides four independent routes to it:
//!
//! - [`similarity`] maps physical parameters to the reduced coordinates
//!   and holds the closed-form cases,
//! - [`series`] expands the reduced profile about the front and
//!   [`alpha`] roots the boundary condition for the front coefficient,
//! - [`shooting`] integrates the reduced equation from the front to the
//!   origin with an adaptive Runge-Kutta scheme ([`ode`]),
//! - [`pde`] solves the original equations on a grid with a conservative
//!   implicit scheme.
//!
//! [`reconstruct`] maps reduced profiles back to physical fields and
//! compares any two routes; [`tables`] reproduces published reference
//! values and analyzes a normalization discrepancy between two of them.

pub mod alpha;
pub mod error;
pub mod interp;
pub mod ode;
pub mod pde;
pub mod profile;
pub mod reconstruct;
pub mod rootfind;
pub mod series;
pub mod shooting;
pub mod similarity;
pub mod tables;

pub use error::{Error, Result};
pub use profile::{Profile, ProfileSource};
pub use similarity::{FluxConvention, PhysicalParams, SimilarityScales};
