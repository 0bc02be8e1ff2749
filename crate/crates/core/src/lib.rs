//! Gazeau–Klauder coherent states for an electron moving on a plane in
//! uniform, perpendicular magnetic and in-plane electric fields.
//!
//! The Hamiltonian splits into a Landau oscillator (discrete spectrum
//! ħω_c(n + ½)) and a drift part with a continuous spectrum. This crate builds
//! the discrete, continuous and combined coherent states over those spectra and
//! ships numerical certificates for their defining properties.
//!
//! * [`specfun`]: log-gamma, Pochhammer, ₁F₁(1; η; x), Laguerre polynomials,
//!   Gauss–Laguerre and adaptive semi-axis quadrature.
//! * [`model`]: physical parameters, gauges, ladder operators on a truncated
//!   Fock basis, spectra and plane eigenfunctions.
//! * [`states`]: ρ-weights, normalizers, state builders, overlaps and time
//!   evolution.
//! * [`verify`]: executable checks returning [`verify::VerificationReport`]s.

// `!(x > 0.0)` is used on purpose so that NaN is rejected along with the rest.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Reference constants are kept at the precision they were published with.
#![allow(clippy::excessive_precision)]

pub mod error;
pub mod model;
pub mod specfun;
pub mod states;
pub mod verify;

pub use error::{Error, Result};
