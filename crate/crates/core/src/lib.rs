//! Supersymmetric relativistic Hamiltonians for charged spin-0, spin-1/2 and
//! spin-1 particles in a constant magnetic field, realised as finite matrices
//! on a truncated Landau-level basis, together with suites that check their
//! supersymmetry algebra, exact Foldy–Wouthuysen block diagonalisation,
//! closed-form spectra, kernel structure and resolvent reductions.

pub mod analytic;
pub mod cli;
pub mod error;
pub mod fw;
pub mod landau;
pub mod models;
pub mod opalg;
pub mod report;
pub mod resolvent;
pub mod spin;
pub mod susy;

pub use error::{Error, Result};
