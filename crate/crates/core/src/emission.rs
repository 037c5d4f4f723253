//! Cherenkov emission rates of two-electron states on the emission cone.
//!
//! Every rate is the dimensionless brace factor Γ/Γ0 evaluated at
//! cos θ = 1/nβ; the angular delta function is never represented. With
//! q⃗ = (nω/c) n̂ the factor is
//!
//! ```text
//! 2 + 2 Re{F1(q⃗) F2*(q⃗)} - cos ζ (|M(q⃗)|² + |M(-q⃗)|²)
//! ```
//!
//! where F is the density transform of each mode and M the transform of
//! φ1 φ2*. For a shared envelope this is `2 + 2|F(q⃗)|² - cos ζ (|F(q⃗-Δk)|² + |F(q⃗+Δk)|²)`.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use crate::kinematics::{cherenkov_angle, gamma0, ConeGeometry, Medium};
use crate::paircorr::{PairKind, PairState};
use crate::wavepackets::{density_ft, overlap_ft};
use crate::{Error, Result, Vec3};

/// Azimuth on the cone and photon energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmissionPoint {
    pub phi: f64,
    pub omega_ev: f64,
}

impl EmissionPoint {
    pub fn new(phi: f64, omega_ev: f64) -> Self {
        Self { phi, omega_ev }
    }
}

/// On-cone rate split into its classical and quantum parts.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RateBreakdown {
    /// Γc/Γ0 = incoherent + bunching.
    pub braces_classical: f64,
    /// Γq/Γ0 = classical + entangled_weight · term_entangled.
    pub braces_quantum: f64,
    pub term_incoherent: f64,
    pub term_bunching: f64,
    /// |M(q⃗)|² + |M(-q⃗)|², before the cos ζ weight.
    pub term_entangled: f64,
    /// -cos ζ for Bell states, 0 otherwise.
    pub entangled_weight: f64,
    pub gamma0: f64,
    pub theta_c: f64,
}

impl RateBreakdown {
    /// braces_quantum - braces_classical.
    pub fn quantum_term(&self) -> f64 {
        self.entangled_weight * self.term_entangled
    }
}

/// Which closed form evaluates the pair terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BracePath {
    /// Shifted density transforms of one common envelope.
    SharedEnvelope,
    /// Density transforms of each mode plus the mode-overlap transform.
    GeneralPair,
}

/// (bunching, entangled) terms at photon momentum `q`.
pub fn pair_terms(state: &PairState, q: Vec3, path: BracePath) -> Result<(f64, f64)> {
    match path {
        BracePath::SharedEnvelope => {
            if !state.shares_envelope() {
                return Err(Error::InvalidPair("shared-envelope path needs identical envelopes"));
            }
            let env = &state.mode_1().envelope;
            let dk = state.delta_k();
            let bunching = 2.0 * density_ft(env, q).norm_sqr();
            let entangled = density_ft(env, q - dk).norm_sqr() + density_ft(env, q + dk).norm_sqr();
            Ok((bunching, entangled))
        }
        BracePath::GeneralPair => {
            let (m1, m2) = (state.mode_1(), state.mode_2());
            let f1 = density_ft(&m1.envelope, q);
            let f2 = density_ft(&m2.envelope, q);
            let bunching = 2.0 * (f1 * f2.conj()).re;
            let entangled = if m1.envelope.same_covariance(&m2.envelope) {
                overlap_ft(m1, m2, q)?.norm_sqr() + overlap_ft(m1, m2, -q)?.norm_sqr()
            } else if matches!(state.kind(), PairKind::Product) {
                // no exchange term to report and no closed form for it
                0.0
            } else {
                return Err(Error::UnequalCovariance);
            };
            Ok((bunching, entangled))
        }
    }
}

fn default_path(state: &PairState) -> BracePath {
    if state.shares_envelope() {
        BracePath::SharedEnvelope
    } else {
        BracePath::GeneralPair
    }
}

fn entangled_weight(state: &PairState) -> f64 {
    match state.kind() {
        PairKind::Bell { zeta } => -libm::cos(zeta),
        PairKind::ClassicalMixture | PairKind::Product => 0.0,
    }
}

/// Brace factors at a given cone geometry and azimuth, using `path`.
pub fn rate_with_path(
    state: &PairState,
    geo: &ConeGeometry,
    phi: f64,
    path: BracePath,
) -> Result<RateBreakdown> {
    let q = geo.photon_momentum(phi);
    let (bunching, entangled) = pair_terms(state, q, path)?;
    let weight = entangled_weight(state);
    let classical = 2.0 + bunching;
    Ok(RateBreakdown {
        braces_classical: classical,
        braces_quantum: classical + weight * entangled,
        term_incoherent: 2.0,
        term_bunching: bunching,
        term_entangled: entangled,
        entangled_weight: weight,
        gamma0: gamma0(geo),
        theta_c: geo.theta_c,
    })
}

pub fn rate_on_cone(state: &PairState, medium: &Medium, point: EmissionPoint) -> Result<RateBreakdown> {
    let geo = cherenkov_angle(medium, point.omega_ev)?;
    rate_with_path(state, &geo, point.phi, default_path(state))
}

pub fn validate_phi_grid(phi_grid: &[f64]) -> Result<()> {
    if phi_grid.is_empty() {
        return Err(Error::InvalidGrid("azimuth grid is empty"));
    }
    if phi_grid.iter().any(|p| !(0.0..TAU).contains(p)) {
        return Err(Error::InvalidGrid("azimuths must lie in [0, 2π)"));
    }
    Ok(())
}

/// `count` azimuths evenly spaced over [0, 2π), starting at 0.
pub fn uniform_azimuths(count: usize) -> Vec<f64> {
    (0..count).map(|i| TAU * i as f64 / count as f64).collect()
}

/// `count` points from `start` to `end` inclusive.
pub fn linspace(start: f64, end: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => alloc::vec![start],
        _ => (0..count)
            .map(|i| start + (end - start) * i as f64 / (count - 1) as f64)
            .collect(),
    }
}

/// Rate along the cone at fixed photon energy, in grid order.
pub fn cone_scan(
    state: &PairState,
    medium: &Medium,
    omega_ev: f64,
    phi_grid: &[f64],
) -> Result<Vec<(f64, RateBreakdown)>> {
    validate_phi_grid(phi_grid)?;
    let geo = cherenkov_angle(medium, omega_ev)?;
    let path = default_path(state);
    phi_grid
        .iter()
        .map(|&phi| Ok((phi, rate_with_path(state, &geo, phi, path)?)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumSample {
    pub omega_ev: f64,
    /// False where n(ω)β < 1; the rate is then all zeros.
    pub allowed: bool,
    pub rate: RateBreakdown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumScan {
    /// ω0 = ħcβ|Δk| when Δk is longitudinal.
    pub omega0_ev: Option<f64>,
    pub samples: Vec<SpectrumSample>,
}

/// One spectrum point; kinematically forbidden energies are flagged rather than fatal.
pub fn spectrum_point(state: &PairState, medium: &Medium, phi: f64, omega_ev: f64) -> Result<SpectrumSample> {
    match rate_on_cone(state, medium, EmissionPoint::new(phi, omega_ev)) {
        Ok(rate) => Ok(SpectrumSample {
            omega_ev,
            allowed: true,
            rate,
        }),
        Err(Error::NoCherenkovEmission { .. }) => Ok(SpectrumSample {
            omega_ev,
            allowed: false,
            rate: RateBreakdown::default(),
        }),
        Err(e) => Err(e),
    }
}

pub fn spectrum_scan(state: &PairState, medium: &Medium, phi: f64, omega_grid: &[f64]) -> Result<SpectrumScan> {
    if omega_grid.is_empty() {
        return Err(Error::InvalidGrid("energy grid is empty"));
    }
    let samples = omega_grid
        .iter()
        .map(|&w| spectrum_point(state, medium, phi, w))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumScan {
        omega0_ev: state.resonance_energy(medium.beta()),
        samples,
    })
}

/// The two Δk constructions matched to the photon momentum on the cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaKMatch {
    /// Δk = q_T x̂.
    Transverse,
    /// Δk = (ω / ħcβ) ẑ = q_z ẑ, so ω0 = v0 Δk.
    Longitudinal,
}

pub fn match_delta_k(medium: &Medium, omega_ev: f64, mode: DeltaKMatch) -> Result<Vec3> {
    let geo = cherenkov_angle(medium, omega_ev)?;
    Ok(match mode {
        DeltaKMatch::Transverse => Vec3::x_axis(geo.q_t),
        DeltaKMatch::Longitudinal => Vec3::z_axis(geo.q_z),
    })
}

/// Product and Bell states of the same two modes evaluated side by side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairComparison {
    pub product: RateBreakdown,
    pub bell: RateBreakdown,
    /// Classical interference 2 Re{F1 F2*} of the product state.
    pub classical_interference: f64,
    /// -cos ζ (|M(q⃗)|² + |M(-q⃗)|²), present only for the entangled state.
    pub entanglement_term: f64,
}

pub fn pair_compare(
    product_state: &PairState,
    bell_state: &PairState,
    medium: &Medium,
    point: EmissionPoint,
) -> Result<PairComparison> {
    if !matches!(product_state.kind(), PairKind::Product) {
        return Err(Error::InvalidPair("first state must be a product state"));
    }
    if !matches!(bell_state.kind(), PairKind::Bell { .. }) {
        return Err(Error::InvalidPair("second state must be a Bell state"));
    }
    if product_state.mode_1() != bell_state.mode_1() || product_state.mode_2() != bell_state.mode_2() {
        return Err(Error::InvalidPair("states must be built from the same two modes"));
    }
    let geo = cherenkov_angle(medium, point.omega_ev)?;
    let product = rate_with_path(product_state, &geo, point.phi, BracePath::GeneralPair)?;
    let bell = rate_with_path(bell_state, &geo, point.phi, BracePath::GeneralPair)?;
    Ok(PairComparison {
        product,
        bell,
        classical_interference: product.term_bunching,
        entanglement_term: bell.quantum_term(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paircorr::partner_zeta;
    use crate::quadrature::QuadratureOracle;
    use crate::wavepackets::{GaussianEnvelope, ModeWave, Spin};
    use approx::assert_relative_eq;
    use core::f64::consts::{FRAC_PI_2, PI};

    fn medium() -> Medium {
        Medium::constant(2.0, 0.7).unwrap()
    }

    fn fig2c(kind: PairKind) -> PairState {
        let env = GaussianEnvelope::centered([200.0, 200.0, 1.0]).unwrap();
        let dk = match_delta_k(&medium(), 2.0, DeltaKMatch::Transverse).unwrap();
        PairState::shared(env, dk, dk, kind).unwrap()
    }

    fn fig2d(kind: PairKind) -> PairState {
        let env = GaussianEnvelope::centered([10.0, 10.0, 500.0]).unwrap();
        let dk = match_delta_k(&medium(), 2.0, DeltaKMatch::Longitudinal).unwrap();
        PairState::shared(env, Vec3::ZERO, dk, kind).unwrap()
    }

    /// Brace factor rebuilt from quadrature transforms, never touching the closed forms.
    fn oracle_braces(state: &PairState, point: EmissionPoint) -> f64 {
        let oracle = QuadratureOracle::new(256, 8.0).unwrap();
        let geo = cherenkov_angle(&medium(), point.omega_ev).unwrap();
        let q = geo.photon_momentum(point.phi);
        let (m1, m2) = (state.mode_1(), state.mode_2());
        let f1 = oracle.density_ft(&m1.envelope, q).unwrap();
        let f2 = oracle.density_ft(&m2.envelope, q).unwrap();
        let mut braces = 2.0 + 2.0 * (f1 * f2.conj()).re;
        if let PairKind::Bell { zeta } = state.kind() {
            let mp = oracle.overlap_ft(m1, m2, q).unwrap().norm_sqr();
            let mm = oracle.overlap_ft(m1, m2, -q).unwrap().norm_sqr();
            braces -= libm::cos(zeta) * (mp + mm);
        }
        braces
    }

    #[test]
    fn fig2c_values_on_axis() {
        let p = EmissionPoint::new(0.0, 2.0);
        let pi = rate_on_cone(&fig2c(PairKind::Bell { zeta: PI }), &medium(), p).unwrap();
        let zero = rate_on_cone(&fig2c(PairKind::Bell { zeta: 0.0 }), &medium(), p).unwrap();
        let half = rate_on_cone(&fig2c(PairKind::Bell { zeta: FRAC_PI_2 }), &medium(), p).unwrap();
        let cl = rate_on_cone(&fig2c(PairKind::ClassicalMixture), &medium(), p).unwrap();
        // frozen from the quadrature oracle
        assert_relative_eq!(pi.braces_quantum, 3.000_428_13, max_relative = 1e-8);
        assert_relative_eq!(zero.braces_quantum, 1.000_847_39, max_relative = 1e-8);
        assert_relative_eq!(cl.braces_classical, 2.000_637_76, max_relative = 1e-8);
        assert_relative_eq!(half.braces_quantum, cl.braces_classical, max_relative = 1e-15);
        for (s, r) in [
            (fig2c(PairKind::Bell { zeta: PI }), pi),
            (fig2c(PairKind::Bell { zeta: 0.0 }), zero),
            (fig2c(PairKind::ClassicalMixture), cl),
        ] {
            assert_relative_eq!(r.braces_quantum, oracle_braces(&s, p), max_relative = 1e-9);
        }
        assert_relative_eq!(pi.gamma0, 3.982e-4, max_relative = 1e-3);
    }

    #[test]
    fn fig2c_perpendicular_is_classical() {
        let p = EmissionPoint::new(FRAC_PI_2, 2.0);
        let cl = rate_on_cone(&fig2c(PairKind::ClassicalMixture), &medium(), p).unwrap();
        assert_relative_eq!(cl.braces_classical, 2.000_637_76, max_relative = 1e-8);
        for zeta in [0.0, FRAC_PI_2, PI] {
            let r = rate_on_cone(&fig2c(PairKind::Bell { zeta }), &medium(), p).unwrap();
            assert!((r.braces_quantum - cl.braces_classical).abs() < 1e-6);
            assert!(r.term_entangled < 3e-7);
        }
    }

    #[test]
    fn fig2d_resonance() {
        let p = EmissionPoint::new(0.0, 2.0);
        let pi = rate_on_cone(&fig2d(PairKind::Bell { zeta: PI }), &medium(), p).unwrap();
        let zero = rate_on_cone(&fig2d(PairKind::Bell { zeta: 0.0 }), &medium(), p).unwrap();
        let cl = rate_on_cone(&fig2d(PairKind::ClassicalMixture), &medium(), p).unwrap();
        assert_relative_eq!(pi.braces_quantum, 2.980_074_96, max_relative = 1e-8);
        assert_relative_eq!(zero.braces_quantum, 1.019_925_04, max_relative = 1e-8);
        assert_relative_eq!(cl.braces_classical, 2.0, max_relative = 1e-10);
        assert_relative_eq!(pi.braces_quantum, oracle_braces(&fig2d(PairKind::Bell { zeta: PI }), p), max_relative = 1e-9);
    }

    #[test]
    fn fig2d_off_resonance() {
        let p = EmissionPoint::new(0.0, 1.0);
        for zeta in [0.0, PI] {
            let r = rate_on_cone(&fig2d(PairKind::Bell { zeta }), &medium(), p).unwrap();
            assert!((r.braces_quantum - 2.0).abs() < 1e-5);
            assert!(r.term_entangled < 3e-6);
        }
    }

    #[test]
    fn transverse_scan_peaks_along_delta_k() {
        let phis = uniform_azimuths(72);
        let scan = cone_scan(&fig2c(PairKind::Bell { zeta: PI }), &medium(), 2.0, &phis).unwrap();
        let best = scan
            .iter()
            .max_by(|a, b| a.1.braces_quantum.total_cmp(&b.1.braces_quantum))
            .unwrap();
        assert!(best.0 == 0.0 || (best.0 - PI).abs() < 1e-12);
        assert!((scan[18].1.braces_quantum - 2.000_637_76).abs() < 1e-6);
        assert!((scan[36].1.braces_quantum - scan[0].1.braces_quantum).abs() < 1e-12);

        let classical = cone_scan(&fig2c(PairKind::ClassicalMixture), &medium(), 2.0, &phis).unwrap();
        let half = cone_scan(&fig2c(PairKind::Bell { zeta: FRAC_PI_2 }), &medium(), 2.0, &phis).unwrap();
        for (c, h) in classical.iter().zip(&half) {
            assert!((c.1.braces_classical - classical[0].1.braces_classical).abs() < 1e-12);
            assert!((c.1.braces_quantum - h.1.braces_quantum).abs() < 1e-12);
        }
    }

    #[test]
    fn scan_rejects_bad_grids() {
        let s = fig2c(PairKind::ClassicalMixture);
        assert!(cone_scan(&s, &medium(), 2.0, &[]).is_err());
        assert!(cone_scan(&s, &medium(), 2.0, &[TAU]).is_err());
        assert!(cone_scan(&s, &medium(), 2.0, &[-0.1]).is_err());
        assert!(spectrum_scan(&s, &medium(), 0.0, &[]).is_err());
    }

    #[test]
    fn spectrum_flags_forbidden_points() {
        use crate::kinematics::{IndexTable, RefractiveIndex};
        let table = IndexTable::new(alloc::vec![(1.0, 1.3), (3.0, 2.0)]).unwrap();
        let m = Medium::new(RefractiveIndex::Table(table), 0.7).unwrap();
        let s = fig2d(PairKind::Bell { zeta: PI });
        let scan = spectrum_scan(&s, &m, 0.0, &[1.0, 2.5]).unwrap();
        assert!(!scan.samples[0].allowed);
        assert_eq!(scan.samples[0].rate.braces_quantum, 0.0);
        assert!(scan.samples[1].allowed);
        assert_relative_eq!(scan.omega0_ev.unwrap(), 2.0, max_relative = 1e-12);
        assert!(spectrum_scan(&s, &m, 0.0, &[3.5]).is_err());
    }

    #[test]
    fn spectrum_zeta_average_is_classical() {
        let grid = linspace(1.0, 3.0, 41);
        let a = spectrum_scan(&fig2d(PairKind::Bell { zeta: 0.0 }), &medium(), 0.3, &grid).unwrap();
        let b = spectrum_scan(&fig2d(PairKind::Bell { zeta: PI }), &medium(), 0.3, &grid).unwrap();
        let c = spectrum_scan(&fig2d(PairKind::ClassicalMixture), &medium(), 0.3, &grid).unwrap();
        for ((x, y), z) in a.samples.iter().zip(&b.samples).zip(&c.samples) {
            let avg = 0.5 * (x.rate.braces_quantum + y.rate.braces_quantum);
            assert!((avg - z.rate.braces_classical).abs() < 1e-12);
        }
    }

    #[test]
    fn delta_k_constructions() {
        let t = match_delta_k(&medium(), 2.0, DeltaKMatch::Transverse).unwrap();
        let l = match_delta_k(&medium(), 2.0, DeltaKMatch::Longitudinal).unwrap();
        assert_relative_eq!(t.x, 0.014_186_6, max_relative = 1e-5);
        assert_eq!((t.y, t.z), (0.0, 0.0));
        assert_relative_eq!(l.z, 0.014_479_230_6, max_relative = 1e-8);
        let geo = cherenkov_angle(&medium(), 2.0).unwrap();
        assert_relative_eq!(l.z, geo.q * geo.cos_theta, max_relative = 1e-15);
        let forbidden = Medium::constant(1.2, 0.5).unwrap();
        assert!(match_delta_k(&forbidden, 2.0, DeltaKMatch::Transverse).is_err());
    }

    fn offset_pair(kind: PairKind, offset: Vec3) -> PairState {
        let env = GaussianEnvelope::centered([200.0, 200.0, 1.0]).unwrap();
        let dk = match_delta_k(&medium(), 2.0, DeltaKMatch::Transverse).unwrap();
        let m1 = ModeWave::new(env, dk, Spin::Up).unwrap();
        let m2 = ModeWave::new(env.with_center(offset).unwrap(), Vec3::ZERO, Spin::Down).unwrap();
        PairState::new(m1, m2, kind).unwrap()
    }

    #[test]
    fn compare_without_offset() {
        let p = EmissionPoint::new(0.0, 2.0);
        let prod = offset_pair(PairKind::Product, Vec3::ZERO);
        let bell = offset_pair(PairKind::Bell { zeta: PI }, Vec3::ZERO);
        let cmp = pair_compare(&prod, &bell, &medium(), p).unwrap();
        assert_relative_eq!(cmp.product.braces_quantum, 2.000_637_76, max_relative = 1e-8);
        assert_relative_eq!(cmp.bell.braces_quantum, 3.000_428_13, max_relative = 1e-8);
        assert!((cmp.product.braces_quantum - 2.0).abs() < 1e-3);
        assert!((cmp.bell.braces_quantum - 2.0).abs() > 0.9);

        let half = offset_pair(PairKind::Bell { zeta: FRAC_PI_2 }, Vec3::ZERO);
        let cmp = pair_compare(&prod, &half, &medium(), p).unwrap();
        assert!((cmp.bell.braces_quantum - cmp.product.braces_quantum).abs() < 1e-15);
    }

    #[test]
    fn compare_with_half_wave_offset() {
        // choose d along x̂ with q_T d = π
        let geo = cherenkov_angle(&medium(), 2.0).unwrap();
        let d = Vec3::x_axis(PI / geo.q_t);
        let p = EmissionPoint::new(0.0, 2.0);
        let prod = offset_pair(PairKind::Product, d);
        let bell = offset_pair(PairKind::Bell { zeta: PI }, d);
        let cmp = pair_compare(&prod, &bell, &medium(), p).unwrap();
        let f2 = GaussianEnvelope::centered([200.0, 200.0, 1.0])
            .unwrap()
            .structure_factor(geo.photon_momentum(0.0));
        assert_relative_eq!(cmp.product.braces_quantum, 2.0 - 2.0 * f2, max_relative = 1e-12);
        assert_relative_eq!(cmp.bell.braces_quantum, oracle_braces(&bell, p), max_relative = 1e-9);
        assert!(cmp.entanglement_term > 0.0);
    }

    #[test]
    fn compare_rejects_mismatched_states() {
        let p = EmissionPoint::new(0.0, 2.0);
        let prod = offset_pair(PairKind::Product, Vec3::ZERO);
        let bell = offset_pair(PairKind::Bell { zeta: PI }, Vec3::x_axis(10.0));
        assert!(pair_compare(&prod, &bell, &medium(), p).is_err());
        assert!(pair_compare(&bell, &prod, &medium(), p).is_err());
    }

    #[test]
    fn long_and_short_wavelength_limits() {
        let s = fig2c(PairKind::ClassicalMixture);
        let long = rate_on_cone(&s, &medium(), EmissionPoint::new(0.3, 1e-6)).unwrap();
        assert!((long.braces_classical - 4.0).abs() < 1e-4);
        let short = rate_on_cone(&s, &medium(), EmissionPoint::new(0.3, 50.0)).unwrap();
        assert!((short.braces_classical - 2.0).abs() < 1e-5);
    }

    #[test]
    fn partner_average_matches_mixture() {
        let p = EmissionPoint::new(0.7, 2.3);
        for zeta in [0.1, 1.3, 2.9, 4.4] {
            let a = rate_on_cone(&fig2c(PairKind::Bell { zeta }), &medium(), p).unwrap();
            let b = rate_on_cone(&fig2c(PairKind::Bell { zeta: partner_zeta(zeta) }), &medium(), p).unwrap();
            let c = rate_on_cone(&fig2c(PairKind::ClassicalMixture), &medium(), p).unwrap();
            assert!((0.5 * (a.braces_quantum + b.braces_quantum) - c.braces_classical).abs() < 1e-12);
        }
    }
}
