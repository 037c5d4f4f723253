//! Validity checks for the reduced emission model. They never fail: each
//! check yields a ratio and a pass flag, and callers decide what to do with
//! a warning.

use alloc::vec::Vec;
use core::fmt;

use crate::kinematics::Medium;
use crate::manybody::ManyBodyState;
use crate::paircorr::PairState;
use crate::quadrature::QuadratureOracle;
use crate::units::ELECTRON_REST_ENERGY_EV;
use crate::wavepackets::{density_ft, overlap_ft};
use crate::Vec3;

/// Photon momentum over electron momentum above which recoil matters.
pub const RECOIL_WARN: f64 = 1e-2;

/// Momentum spread over carrier separation above which modes overlap.
pub const SEPARATION_WARN: f64 = 1.0 / 3.0;

/// One pair of modes as seen by the separation check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModePairInfo {
    pub delta_k: Vec3,
    /// Per-axis momentum spread 1/(2σ), the wider of the two modes.
    pub spread: [f64; 3],
    /// |⟨u_a|u_b⟩|², when it could be evaluated.
    pub overlap: Option<f64>,
}

pub trait Diagnosable {
    fn mode_pairs(&self) -> Vec<ModePairInfo>;
}

fn spread(sa: [f64; 3], sb: [f64; 3]) -> [f64; 3] {
    core::array::from_fn(|a| 0.5 / sa[a].min(sb[a]))
}

impl Diagnosable for PairState {
    fn mode_pairs(&self) -> Vec<ModePairInfo> {
        let (a, b) = (self.mode_1(), self.mode_2());
        let overlap = match overlap_ft(a, b, Vec3::ZERO) {
            Ok(m) => Some(m.norm_sqr()),
            Err(_) => QuadratureOracle::default()
                .overlap_ft(a, b, Vec3::ZERO)
                .ok()
                .map(|m| m.norm_sqr()),
        };
        alloc::vec![ModePairInfo {
            delta_k: self.delta_k(),
            spread: spread(a.envelope.sigma(), b.envelope.sigma()),
            overlap,
        }]
    }
}

impl Diagnosable for ManyBodyState {
    fn mode_pairs(&self) -> Vec<ModePairInfo> {
        let env = self.envelope();
        let ks = self.carriers();
        let mut out = Vec::new();
        for i in 0..ks.len() {
            for j in i + 1..ks.len() {
                let dk = ks[i] - ks[j];
                out.push(ModePairInfo {
                    delta_k: dk,
                    spread: spread(env.sigma(), env.sigma()),
                    overlap: Some(density_ft(env, dk).norm_sqr()),
                });
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssumptionReport {
    /// ħq / p_e, or `None` when n(ω) is not available.
    pub recoil_ratio: Option<f64>,
    pub recoil_ok: bool,
    /// Worst pair: projected momentum spread over |Δk|; ∞ for Δk = 0.
    pub separation_ratio: f64,
    pub separation_ok: bool,
    /// Largest |⟨u_a|u_b⟩|² among mode pairs.
    pub max_mode_overlap: Option<f64>,
    /// Spatio-temporal walk-off is not modelled; always false.
    pub walk_off_modeled: bool,
}

impl AssumptionReport {
    pub fn all_ok(&self) -> bool {
        self.recoil_ok && self.separation_ok
    }
}

impl fmt::Display for AssumptionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let flag = |ok: bool| if ok { "ok" } else { "WARN" };
        match self.recoil_ratio {
            Some(r) => write!(f, "recoil_ratio={r:e} ({})", flag(self.recoil_ok))?,
            None => write!(f, "recoil_ratio=unavailable ({})", flag(self.recoil_ok))?,
        }
        write!(
            f,
            "; separation_ratio={:e} ({})",
            self.separation_ratio,
            flag(self.separation_ok)
        )?;
        if let Some(o) = self.max_mode_overlap {
            write!(f, "; mode_overlap={o:e}")?;
        }
        write!(f, "; walk_off=not-modeled")
    }
}

/// ħq/p_e = nω / (γ β m_e c²).
pub fn recoil_ratio(medium: &Medium, omega_ev: f64) -> Option<f64> {
    let n = medium.index_at(omega_ev).ok()?;
    let beta = medium.beta();
    let gamma = 1.0 / libm::sqrt(1.0 - beta * beta);
    Some(n * omega_ev / (gamma * beta * ELECTRON_REST_ENERGY_EV))
}

/// |Δp| / |Δk| with Δp the spread projected on the Δk direction.
pub fn separation_ratio(info: &ModePairInfo) -> f64 {
    let norm = info.delta_k.norm();
    if norm == 0.0 {
        return f64::INFINITY;
    }
    let d = (info.delta_k * (1.0 / norm)).to_array();
    let projected: f64 = (0..3).map(|a| d[a] * d[a] * info.spread[a] * info.spread[a]).sum();
    libm::sqrt(projected) / norm
}

pub fn validate_assumptions<S: Diagnosable + ?Sized>(state: &S, medium: &Medium, omega_ev: f64) -> AssumptionReport {
    let recoil = recoil_ratio(medium, omega_ev);
    let pairs = state.mode_pairs();
    let separation = pairs.iter().map(separation_ratio).fold(0.0, f64::max);
    let overlap = pairs
        .iter()
        .map(|p| p.overlap)
        .try_fold(None::<f64>, |acc, o| o.map(|v| Some(acc.map_or(v, |a| a.max(v)))))
        .flatten();
    AssumptionReport {
        recoil_ratio: recoil,
        recoil_ok: recoil.is_some_and(|r| r <= RECOIL_WARN),
        separation_ratio: separation,
        separation_ok: separation <= SEPARATION_WARN,
        max_mode_overlap: overlap,
        walk_off_modeled: false,
    }
}
