//! Gaussian wavepacket envelopes and the closed-form Fourier transforms of
//! their densities and mode overlaps.
//!
//! An envelope describes the probability density
//! `|φ(x)|² = Π_a (2πσ_a²)^(-1/2) exp(-(x_a - r0_a)² / 2σ_a²)`,
//! so `σ` is the per-axis standard deviation of the density, not of the
//! amplitude. The amplitude `φ` is the real, positive square root.

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result, Vec3};

/// 2√(2 ln 2): ratio between full width at half maximum and standard deviation.
pub const FWHM_PER_SIGMA: f64 = 2.354_820_045_030_949_3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianEnvelope {
    sigma: [f64; 3],
    center: Vec3,
}

impl GaussianEnvelope {
    pub fn new(sigma: [f64; 3], center: Vec3) -> Result<Self> {
        if sigma.iter().any(|s| !s.is_finite() || *s <= 0.0) {
            return Err(Error::InvalidWidth);
        }
        if !center.is_finite() {
            return Err(Error::InvalidVector("envelope center must be finite"));
        }
        Ok(Self { sigma, center })
    }

    pub fn centered(sigma: [f64; 3]) -> Result<Self> {
        Self::new(sigma, Vec3::ZERO)
    }

    /// Builds an envelope from per-axis full widths at half maximum of the density.
    pub fn from_fwhm(fwhm: [f64; 3], center: Vec3) -> Result<Self> {
        Self::new(fwhm.map(|w| w / FWHM_PER_SIGMA), center)
    }

    pub fn sigma(&self) -> [f64; 3] {
        self.sigma
    }

    pub fn center(&self) -> Vec3 {
        self.center
    }

    pub fn with_center(self, center: Vec3) -> Result<Self> {
        Self::new(self.sigma, center)
    }

    pub fn same_covariance(&self, other: &GaussianEnvelope) -> bool {
        self.sigma == other.sigma
    }

    /// |φ(x)|² in nm⁻³.
    pub fn density(&self, x: Vec3) -> f64 {
        let d = (x - self.center).to_array();
        let mut norm = 1.0;
        let mut expo = 0.0;
        for (da, sa) in d.iter().zip(self.sigma) {
            norm *= libm::sqrt(2.0 * PI) * sa;
            expo += da * da / (sa * sa);
        }
        libm::exp(-0.5 * expo) / norm
    }

    /// Σ_a q_a² σ_a², the exponent of |F(q)|².
    pub fn spread_exponent(&self, q: Vec3) -> f64 {
        let q = q.to_array();
        (0..3).map(|a| q[a] * q[a] * self.sigma[a] * self.sigma[a]).sum()
    }

    /// |F(q)|² = exp(-Σ q_a² σ_a²); independent of the center.
    pub fn structure_factor(&self, q: Vec3) -> f64 {
        libm::exp(-self.spread_exponent(q))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub fn flipped(self) -> Spin {
        match self {
            Spin::Up => Spin::Down,
            Spin::Down => Spin::Up,
        }
    }
}

/// Single-particle mode `e^{i k·x} φ(x - r0)` with a spin label.
///
/// The spin only makes modes distinguishable; it never enters a matrix
/// element other than through orthogonality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeWave {
    pub envelope: GaussianEnvelope,
    pub carrier_k: Vec3,
    pub spin: Spin,
}

impl ModeWave {
    pub fn new(envelope: GaussianEnvelope, carrier_k: Vec3, spin: Spin) -> Result<Self> {
        if !carrier_k.is_finite() {
            return Err(Error::InvalidVector("carrier wavevector must be finite"));
        }
        Ok(Self {
            envelope,
            carrier_k,
            spin,
        })
    }

    /// Complex amplitude e^{i k·x} φ(x) in nm^(-3/2).
    pub fn amplitude(&self, x: Vec3) -> Complex64 {
        Complex64::from_polar(libm::sqrt(self.envelope.density(x)), self.carrier_k.dot(x))
    }
}

/// F(q) = ∫ e^{-i q·x} |φ(x)|² d³x = e^{-i q·r0} exp(-Σ q_a² σ_a² / 2).
pub fn density_ft(envelope: &GaussianEnvelope, q: Vec3) -> Complex64 {
    let mag = libm::exp(-0.5 * envelope.spread_exponent(q));
    Complex64::from_polar(mag, -q.dot(envelope.center()))
}

/// M(q) = ∫ e^{-i q·x} φ_a(x) φ_b*(x) d³x for equal-width Gaussian modes.
///
/// With Δk = k_a - k_b, c = (r_a + r_b)/2 and d = r_a - r_b:
/// `M(q) = exp(-Σ d_a² / 8σ_a²) · e^{-i (q - Δk)·c} · exp(-Σ (q - Δk)_a² σ_a² / 2)`.
/// For a common envelope this is exactly `density_ft(q - Δk)`.
pub fn overlap_ft(mode_a: &ModeWave, mode_b: &ModeWave, q: Vec3) -> Result<Complex64> {
    let (ea, eb) = (&mode_a.envelope, &mode_b.envelope);
    if !ea.same_covariance(eb) {
        return Err(Error::UnequalCovariance);
    }
    let shifted = q - (mode_a.carrier_k - mode_b.carrier_k);
    if ea.center() == eb.center() {
        return Ok(density_ft(ea, shifted));
    }
    let d = (ea.center() - eb.center()).to_array();
    let sigma = ea.sigma();
    let separation: f64 = (0..3).map(|a| d[a] * d[a] / (sigma[a] * sigma[a])).sum();
    let midpoint = (ea.center() + eb.center()) * 0.5;
    let mag = libm::exp(-0.125 * separation - 0.5 * ea.spread_exponent(shifted));
    Ok(Complex64::from_polar(mag, -shifted.dot(midpoint)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn fig2c() -> GaussianEnvelope {
        GaussianEnvelope::centered([200.0, 200.0, 1.0]).unwrap()
    }

    #[test]
    fn transform_at_origin_is_one() {
        let f = density_ft(&fig2c(), Vec3::ZERO);
        assert_eq!(f, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn transverse_transform() {
        // (0.0141867 · 200)² = 8.05049, exp(-8.05049 / 2) = 0.0178591
        let f = density_ft(&fig2c(), Vec3::x_axis(0.014_186_690_756_734_758));
        assert_relative_eq!(f.re, 0.017_859_07, max_relative = 1e-6);
        assert!(f.im.abs() < 1e-18);
    }

    #[test]
    fn longitudinal_transform() {
        let env = GaussianEnvelope::centered([10.0, 10.0, 500.0]).unwrap();
        // (0.0144792 · 500)² = 52.4120
        let f = density_ft(&env, Vec3::z_axis(0.014_479_230_621_941_13));
        assert_relative_eq!(f.re, 4.157_884e-12, max_relative = 1e-6);
    }

    #[test]
    fn offset_center_adds_phase_only() {
        let env = fig2c().with_center(Vec3::new(30.0, -5.0, 2.0)).unwrap();
        let q = Vec3::new(0.01, 0.002, 0.3);
        let f = density_ft(&env, q);
        assert_relative_eq!(f.norm(), density_ft(&fig2c(), q).norm(), max_relative = 1e-14);
        assert_relative_eq!(f.arg(), -q.dot(env.center()), epsilon = 1e-14);
    }

    #[test]
    fn overlap_common_envelope() {
        let a = ModeWave::new(fig2c(), Vec3::x_axis(0.014_186_6), Spin::Up).unwrap();
        let b = ModeWave::new(fig2c(), Vec3::ZERO, Spin::Down).unwrap();
        assert_eq!(overlap_ft(&a, &a, Vec3::ZERO).unwrap(), Complex64::new(1.0, 0.0));
        let m = overlap_ft(&a, &b, Vec3::x_axis(0.014_186_6)).unwrap();
        assert_eq!(m, Complex64::new(1.0, 0.0));
        let m0 = overlap_ft(&a, &b, Vec3::ZERO).unwrap();
        assert_relative_eq!(m0.re, 0.017_859_07, max_relative = 1e-4);
    }

    #[test]
    fn overlap_rejects_unequal_widths() {
        let a = ModeWave::new(fig2c(), Vec3::ZERO, Spin::Up).unwrap();
        let env = GaussianEnvelope::centered([200.0, 200.0, 2.0]).unwrap();
        let b = ModeWave::new(env, Vec3::ZERO, Spin::Down).unwrap();
        assert_eq!(overlap_ft(&a, &b, Vec3::ZERO), Err(Error::UnequalCovariance));
    }

    #[test]
    fn displaced_overlap_shrinks() {
        // ∫ φ(x) φ(x - d) = exp(-d²/8σ²) in 1D
        let a = ModeWave::new(fig2c(), Vec3::ZERO, Spin::Up).unwrap();
        let env = fig2c().with_center(Vec3::x_axis(400.0)).unwrap();
        let b = ModeWave::new(env, Vec3::ZERO, Spin::Down).unwrap();
        let m = overlap_ft(&a, &b, Vec3::ZERO).unwrap();
        assert_relative_eq!(m.re, libm::exp(-0.5), max_relative = 1e-14);
    }

    #[test]
    fn fwhm_conversion() {
        let env = GaussianEnvelope::from_fwhm([FWHM_PER_SIGMA; 3], Vec3::ZERO).unwrap();
        for s in env.sigma() {
            assert_relative_eq!(s, 1.0, max_relative = 1e-15);
        }
        assert!(GaussianEnvelope::centered([1.0, 0.0, 1.0]).is_err());
    }

    fn arb_env() -> impl Strategy<Value = GaussianEnvelope> {
        (
            prop::array::uniform3(0.5f64..500.0),
            prop::array::uniform3(-100.0f64..100.0),
        )
            .prop_map(|(s, c)| GaussianEnvelope::new(s, c.into()).unwrap())
    }

    fn arb_q() -> impl Strategy<Value = Vec3> {
        prop::array::uniform3(-0.05f64..0.05).prop_map(Vec3::from)
    }

    proptest! {
        #[test]
        fn transform_bounded_by_one(env in arb_env(), q in arb_q()) {
            let f = density_ft(&env, q).norm();
            prop_assert!(f <= 1.0);
            if q != Vec3::ZERO && env.spread_exponent(q) > 1e-15 {
                prop_assert!(f < 1.0);
            }
        }

        #[test]
        fn real_density_is_hermitian(env in arb_env(), q in arb_q()) {
            let a = density_ft(&env, -q);
            let b = density_ft(&env, q).conj();
            prop_assert!((a - b).norm() <= 1e-14);
        }

        #[test]
        fn common_envelope_overlap_is_shifted_transform(env in arb_env(), q in arb_q(), ka in arb_q(), kb in arb_q()) {
            let a = ModeWave::new(env, ka, Spin::Up).unwrap();
            let b = ModeWave::new(env, kb, Spin::Down).unwrap();
            let m = overlap_ft(&a, &b, q).unwrap();
            let f = density_ft(&env, q - (ka - kb));
            prop_assert!((m - f).norm() <= 1e-12);
        }
    }
}
