//! Physical constants in the eV / nm unit system.

/// ħc in eV·nm.
pub const HBAR_C_EV_NM: f64 = 197.326_980_4;

/// Electron rest energy m_e c² in eV.
pub const ELECTRON_REST_ENERGY_EV: f64 = 510_998.95;

/// Fine-structure constant α.
pub const FINE_STRUCTURE: f64 = 7.297_352_569_3e-3;

/// Converts a photon energy ħω (eV) to the vacuum wavenumber ω/c (nm⁻¹).
#[inline]
pub fn vacuum_wavenumber(omega_ev: f64) -> f64 {
    omega_ev / HBAR_C_EV_NM
}
