//! Medium model and Cherenkov-cone geometry.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::units::{FINE_STRUCTURE, HBAR_C_EV_NM};
use crate::{Error, Result, Vec3};

/// Relative tolerance under which `n β` is treated as sitting exactly on the
/// emission threshold.
const THRESHOLD_TOLERANCE: f64 = 4.0 * f64::EPSILON;

/// Piecewise-linear refractive index table over photon energy.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexTable {
    points: Vec<(f64, f64)>,
}

impl IndexTable {
    /// `points` are `(photon energy eV, n)` pairs with strictly increasing energies.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidTable("need at least two points"));
        }
        for &(e, n) in &points {
            if !e.is_finite() || e <= 0.0 {
                return Err(Error::InvalidTable("energies must be positive and finite"));
            }
            if !n.is_finite() || n <= 0.0 {
                return Err(Error::InvalidIndex(n));
            }
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidTable("energies must be strictly increasing"));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn eval(&self, omega_ev: f64) -> Result<f64> {
        let first = self.points[0];
        let last = self.points[self.points.len() - 1];
        if !(first.0..=last.0).contains(&omega_ev) {
            return Err(Error::OutsideTable {
                omega_ev,
                min_ev: first.0,
                max_ev: last.0,
            });
        }
        // first index whose energy is >= omega
        let hi = self.points.partition_point(|&(e, _)| e < omega_ev);
        let (e1, n1) = self.points[hi];
        if e1 == omega_ev || hi == 0 {
            return Ok(n1);
        }
        let (e0, n0) = self.points[hi - 1];
        let t = (omega_ev - e0) / (e1 - e0);
        Ok(n0 + t * (n1 - n0))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RefractiveIndex {
    Constant(f64),
    Table(IndexTable),
}

/// Homogeneous dielectric traversed by electrons of speed `beta`.
#[derive(Debug, Clone, PartialEq)]
pub struct Medium {
    index: RefractiveIndex,
    beta: f64,
}

impl Medium {
    pub fn new(index: RefractiveIndex, beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::InvalidBeta(beta));
        }
        if let RefractiveIndex::Constant(n) = index {
            if !n.is_finite() || n <= 0.0 {
                return Err(Error::InvalidIndex(n));
            }
        }
        Ok(Self { index, beta })
    }

    pub fn constant(n: f64, beta: f64) -> Result<Self> {
        Self::new(RefractiveIndex::Constant(n), beta)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn index(&self) -> &RefractiveIndex {
        &self.index
    }

    pub fn index_at(&self, omega_ev: f64) -> Result<f64> {
        match &self.index {
            RefractiveIndex::Constant(n) => Ok(*n),
            RefractiveIndex::Table(t) => t.eval(omega_ev),
        }
    }

    /// Whether `n(ω) β > 1`.
    pub fn emits_at(&self, omega_ev: f64) -> bool {
        self.index_at(omega_ev)
            .map(|n| n * self.beta > 1.0)
            .unwrap_or(false)
    }
}

/// Photon kinematics on the Cherenkov cone at one photon energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeGeometry {
    pub omega_ev: f64,
    pub n: f64,
    pub beta: f64,
    pub theta_c: f64,
    pub sin_theta: f64,
    pub cos_theta: f64,
    /// In-medium photon wavenumber nω/c (nm⁻¹).
    pub q: f64,
    pub q_t: f64,
    pub q_z: f64,
    /// `n β` sits on the threshold: the cone has collapsed and the rate is zero.
    pub degenerate: bool,
}

impl ConeGeometry {
    /// Unit emission direction at azimuth `phi`.
    pub fn direction(&self, phi: f64) -> Vec3 {
        let (s, c) = libm::sincos(phi);
        Vec3::new(self.sin_theta * c, self.sin_theta * s, self.cos_theta)
    }

    /// Photon wavevector q n̂ at azimuth `phi` (nm⁻¹).
    pub fn photon_momentum(&self, phi: f64) -> Vec3 {
        let (s, c) = libm::sincos(phi);
        Vec3::new(self.q_t * c, self.q_t * s, self.q_z)
    }
}

pub fn cherenkov_angle(medium: &Medium, omega_ev: f64) -> Result<ConeGeometry> {
    if !omega_ev.is_finite() || omega_ev <= 0.0 {
        return Err(Error::InvalidEnergy(omega_ev));
    }
    let n = medium.index_at(omega_ev)?;
    let beta = medium.beta();
    let n_beta = n * beta;
    let degenerate = (n_beta - 1.0).abs() <= THRESHOLD_TOLERANCE;
    if n_beta < 1.0 && !degenerate {
        return Err(Error::NoCherenkovEmission { n_beta });
    }
    let q = n * omega_ev / HBAR_C_EV_NM;
    let (cos_theta, sin_theta) = if degenerate {
        (1.0, 0.0)
    } else {
        // sqrt((nβ-1)(nβ+1)) / nβ keeps precision close to threshold
        (
            1.0 / n_beta,
            libm::sqrt((n_beta - 1.0) * (n_beta + 1.0)) / n_beta,
        )
    };
    Ok(ConeGeometry {
        omega_ev,
        n,
        beta,
        theta_c: libm::atan2(sin_theta, cos_theta),
        sin_theta,
        cos_theta,
        q,
        q_t: q * sin_theta,
        q_z: q * cos_theta,
        degenerate,
    })
}

/// Γ0 = α β sin²θc / 2π, the on-cone normalization of a single electron.
pub fn single_particle_rate(medium: &Medium, omega_ev: f64) -> Result<f64> {
    let geo = cherenkov_angle(medium, omega_ev)?;
    Ok(gamma0(&geo))
}

pub(crate) fn gamma0(geo: &ConeGeometry) -> f64 {
    FINE_STRUCTURE * geo.beta * geo.sin_theta * geo.sin_theta / (2.0 * PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn reference_medium() -> Medium {
        Medium::constant(2.0, 0.7).unwrap()
    }

    #[test]
    fn cone_at_two_ev() {
        let g = cherenkov_angle(&reference_medium(), 2.0).unwrap();
        assert_relative_eq!(g.theta_c, 0.775_193, max_relative = 1e-6);
        assert_relative_eq!(g.cos_theta, 0.714_286, max_relative = 1e-6);
        assert_relative_eq!(g.q, 0.020_270_8, max_relative = 1e-5);
        assert_relative_eq!(g.q_t, 0.014_186_6, max_relative = 1e-5);
        assert_relative_eq!(g.q_z, 0.014_479_230_6, max_relative = 1e-8);
        assert_relative_eq!(g.q_z, 2.0 / (HBAR_C_EV_NM * 0.7), max_relative = 1e-12);
        assert!(!g.degenerate);
    }

    #[test]
    fn ultrarelativistic_limit() {
        let m = Medium::constant(2.0, 1.0 - 1e-12).unwrap();
        let g = cherenkov_angle(&m, 1.0).unwrap();
        assert_relative_eq!(g.cos_theta, 0.5, max_relative = 1e-9);
        assert_relative_eq!(g.theta_c, PI / 3.0, max_relative = 1e-9);
        let g0 = single_particle_rate(&m, 1.0).unwrap();
        assert_relative_eq!(g0, FINE_STRUCTURE * 0.75 / (2.0 * PI), max_relative = 1e-9);
        assert_relative_eq!(g0, 8.711e-4, max_relative = 1e-3);
    }

    #[test]
    fn below_threshold_is_forbidden() {
        let m = Medium::constant(1.5, 0.5).unwrap();
        assert!(matches!(
            cherenkov_angle(&m, 2.0),
            Err(Error::NoCherenkovEmission { .. })
        ));
        assert!(!m.emits_at(2.0));
        assert!(single_particle_rate(&m, 2.0).is_err());
    }

    #[test]
    fn exact_threshold_is_degenerate() {
        let m = Medium::constant(2.0, 0.5).unwrap();
        let g = cherenkov_angle(&m, 2.0).unwrap();
        assert!(g.degenerate);
        assert_eq!(g.sin_theta, 0.0);
        assert_eq!(single_particle_rate(&m, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn gamma0_value() {
        // α · 0.7 · (1 - 1/1.96) / 2π evaluated by hand
        let expected = 7.297_352_569_3e-3 * 0.7 * (1.0 - 1.0 / 1.96) / (2.0 * PI);
        let g0 = single_particle_rate(&reference_medium(), 2.0).unwrap();
        assert_relative_eq!(g0, expected, max_relative = 1e-12);
        assert_relative_eq!(g0, 3.9820e-4, max_relative = 1e-4);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(Medium::constant(2.0, 1.2), Err(Error::InvalidBeta(1.2)));
        assert_eq!(Medium::constant(2.0, 0.0), Err(Error::InvalidBeta(0.0)));
        assert_eq!(Medium::constant(-1.0, 0.5), Err(Error::InvalidIndex(-1.0)));
        assert!(cherenkov_angle(&reference_medium(), 0.0).is_err());
        assert!(IndexTable::new(vec![(1.0, 2.0)]).is_err());
        assert!(IndexTable::new(vec![(2.0, 2.0), (1.0, 2.0)]).is_err());
        assert!(IndexTable::new(vec![(1.0, 2.0), (2.0, -1.0)]).is_err());
    }

    #[test]
    fn table_interpolation() {
        let t = IndexTable::new(vec![(1.0, 1.5), (2.0, 2.0), (3.0, 2.2)]).unwrap();
        assert_eq!(t.eval(1.0).unwrap(), 1.5);
        assert_eq!(t.eval(2.0).unwrap(), 2.0);
        assert_eq!(t.eval(3.0).unwrap(), 2.2);
        assert_relative_eq!(t.eval(1.5).unwrap(), 1.75, max_relative = 1e-15);
        assert!(matches!(t.eval(3.5), Err(Error::OutsideTable { .. })));
        let m = Medium::new(RefractiveIndex::Table(t), 0.6).unwrap();
        // n(1 eV) β = 0.9 forbidden, n(2 eV) β = 1.2 allowed
        assert!(!m.emits_at(1.0));
        assert!(m.emits_at(2.0));
    }

    proptest! {
        #[test]
        fn cone_closes_on_threshold(n in 1.01f64..4.0, frac in 0.0f64..1.0, omega in 0.01f64..50.0) {
            let beta_min = 1.0 / n;
            let beta = beta_min + frac * (1.0 - beta_min) * 0.999 + 1e-9;
            prop_assume!(beta < 1.0);
            let m = Medium::constant(n, beta).unwrap();
            let g = cherenkov_angle(&m, omega).unwrap();
            prop_assert!((libm::cos(g.theta_c) * n * beta - 1.0).abs() < 1e-12);
            let q2 = g.q_t * g.q_t + g.q_z * g.q_z;
            prop_assert!((q2 - g.q * g.q).abs() <= 1e-12 * g.q * g.q);
        }

        #[test]
        fn gamma0_increases_with_beta(n in 1.05f64..4.0, a in 0.0f64..1.0, b in 0.0f64..1.0) {
            let lo = 1.0 / n + 1e-6;
            let (b1, b2) = (lo + a.min(b) * (1.0 - lo) * 0.999, lo + a.max(b) * (1.0 - lo) * 0.999);
            prop_assume!(b2 > b1 + 1e-9);
            let g1 = single_particle_rate(&Medium::constant(n, b1).unwrap(), 1.0).unwrap();
            let g2 = single_particle_rate(&Medium::constant(n, b2).unwrap(), 1.0).unwrap();
            prop_assert!(g2 > g1);
        }

        #[test]
        fn table_nodes_are_exact(ns in proptest::collection::vec(0.5f64..3.0, 2..8)) {
            let pts: Vec<(f64, f64)> = ns.iter().enumerate().map(|(i, &n)| (1.0 + 0.37 * i as f64, n)).collect();
            let t = IndexTable::new(pts.clone()).unwrap();
            for (e, n) in pts {
                prop_assert_eq!(t.eval(e).unwrap(), n);
            }
        }
    }
}
