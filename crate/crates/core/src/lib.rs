//! Spontaneous Cherenkov emission by pairs and small ensembles of free
//! electrons prepared in classically correlated, product, or path-entangled
//! states.
//!
//! Everything here is pure arithmetic on immutable inputs. The crate is
//! `no_std` and only needs `alloc` for scans, quadrature grids and many-body
//! bookkeeping. File formats, configuration and parallel drivers live in the
//! `qsubrad` companion crate.
//!
//! Units used throughout: photon energies in eV, lengths in nm, wavevectors
//! in nm⁻¹, speeds as β = v/c, angles in radians. Rates are reported as the
//! dimensionless on-cone factor Γ/Γ0.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod diagnostics;
pub mod emission;
pub mod error;
pub mod kinematics;
pub mod manybody;
pub mod paircorr;
pub mod quadrature;
pub mod units;
pub mod vec3;
pub mod wavepackets;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use vec3::Vec3;
