//! Quantization of finite-dimensional linear symplectic systems.
//!
//! A classical linear system is a phase space (S, sigma); a quantization is
//! a choice of complex structure J on it, fixed uniquely by any
//! positive-energy flow. This crate builds those structures, evaluates the
//! Gaussian vacuum each one defines, represents everything concretely on
//! truncated Fock spaces, and measures how two quantizations disagree: the
//! mean, variance, and full distribution of one structure's number
//! operators in the other's vacuum, through closed forms and brute-force
//! operator matrices that check each other.
//!
//! The flagship demonstration is a lattice Klein-Gordon field whose
//! inertial vacuum, restricted to one side of a boost horizon, reproduces
//! the thermal Bose-Einstein spectrum at inverse temperature 2 pi per unit
//! boost rapidity — and whose total alien-quanta content grows without
//! bound as the lattice refines, the finite-size witness of inequivalent
//! quantizations.
//!
//! Start from the runnable examples: `standard_quantization`,
//! `weyl_relations`, `oscillator_pair`, `number_distribution`,
//! `unruh_spectrum`, `divergence_family`. The same functionality is exposed
//! by the thin `symfock` binary (`validate`, `quantize`, `compare`,
//! `numdist`, `unruh`).

pub mod cli;
pub mod error;
pub mod fock_rep;
pub mod gaussian;
pub mod linalg;
pub mod models;
pub mod phase_space;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector, RMatrix, RVector};
