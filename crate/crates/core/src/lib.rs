//! Dressed-state spectra and photon-blockade maps for one or more
//! four-level atoms in the N configuration coupled to a driven cavity mode.
//!
//! The crate is organised bottom-up:
//!
//! - [`manifold`]: bare product-state bases of fixed excitation number;
//! - [`hamiltonian`]: parameters and the non-Hermitian Hamiltonian blocks;
//! - [`spectra`]: dressed states, optical activity and degeneracies;
//! - [`blockade`]: the two-state excitation model and ρ_exc metrics;
//! - [`sweep`]: 2-D parameter scans;
//! - [`config`], [`output`], [`figures`]: the command-line front end.

pub mod blockade;
pub mod config;
pub mod eigen;
pub mod error;
pub mod figures;
pub mod hamiltonian;
pub mod manifold;
pub mod output;
pub mod spectra;
pub mod sweep;

pub use error::{Error, Result};
pub use hamiltonian::{ModelParams, C64};
