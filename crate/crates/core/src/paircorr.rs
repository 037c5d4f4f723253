//! Two-electron emitter states and their correlation functions.

use core::f64::consts::{PI, TAU};

use crate::wavepackets::{GaussianEnvelope, ModeWave};
use crate::{Error, Result, Vec3};

/// How the two modes are correlated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PairKind {
    /// ½|1↑ 2↓⟩⟨1↑ 2↓| + ½|1↓ 2↑⟩⟨1↓ 2↑|.
    ClassicalMixture,
    /// |1↑ 2↓⟩ with arbitrary, possibly distinct envelopes.
    Product,
    /// (|1↑ 2↓⟩ + e^{iζ}|1↓ 2↑⟩)/√2.
    Bell { zeta: f64 },
}

/// Pair of single-particle modes with opposite spin labels.
///
/// `ClassicalMixture` and `Bell` need modes of equal width and distinct
/// carriers. Their centers may differ, in which case rates go through the
/// general overlap formula instead of the shifted density transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairState {
    mode_1: ModeWave,
    mode_2: ModeWave,
    kind: PairKind,
}

impl PairState {
    pub fn new(mode_1: ModeWave, mode_2: ModeWave, kind: PairKind) -> Result<Self> {
        if mode_1.spin == mode_2.spin {
            return Err(Error::InvalidPair("modes must carry opposite spin labels"));
        }
        let kind = match kind {
            PairKind::Bell { zeta } => {
                if !zeta.is_finite() {
                    return Err(Error::InvalidZeta(zeta));
                }
                PairKind::Bell {
                    zeta: wrap_phase(zeta),
                }
            }
            k => k,
        };
        if !matches!(kind, PairKind::Product) {
            if !mode_1.envelope.same_covariance(&mode_2.envelope) {
                return Err(Error::UnequalCovariance);
            }
            if mode_1.carrier_k == mode_2.carrier_k {
                return Err(Error::DuplicateCarrier { first: 0, second: 1 });
            }
        }
        Ok(Self {
            mode_1,
            mode_2,
            kind,
        })
    }

    /// Bell or mixed pair of a common envelope with carriers `k` and `k - dk`.
    pub fn shared(envelope: GaussianEnvelope, k: Vec3, dk: Vec3, kind: PairKind) -> Result<Self> {
        use crate::wavepackets::Spin;
        let m1 = ModeWave::new(envelope, k, Spin::Up)?;
        let m2 = ModeWave::new(envelope, k - dk, Spin::Down)?;
        Self::new(m1, m2, kind)
    }

    pub fn mode_1(&self) -> &ModeWave {
        &self.mode_1
    }

    pub fn mode_2(&self) -> &ModeWave {
        &self.mode_2
    }

    pub fn kind(&self) -> PairKind {
        self.kind
    }

    pub fn with_kind(&self, kind: PairKind) -> Result<Self> {
        Self::new(self.mode_1, self.mode_2, kind)
    }

    /// Δk = k_1 - k_2.
    pub fn delta_k(&self) -> Vec3 {
        self.mode_1.carrier_k - self.mode_2.carrier_k
    }

    pub fn zeta(&self) -> Option<f64> {
        match self.kind {
            PairKind::Bell { zeta } => Some(zeta),
            _ => None,
        }
    }

    /// Both modes use the identical envelope, centers included.
    pub fn shares_envelope(&self) -> bool {
        self.mode_1.envelope == self.mode_2.envelope
    }

    /// ω0 = ħcβ|Δk| (eV) when Δk is purely longitudinal.
    pub fn resonance_energy(&self, beta: f64) -> Option<f64> {
        let dk = self.delta_k();
        (dk.x == 0.0 && dk.y == 0.0 && dk.z != 0.0)
            .then(|| crate::units::HBAR_C_EV_NM * beta * dk.z.abs())
    }
}

/// g²(x - x') of the Bell state: ½(1 - cos ζ cos[Δk·(x - x')]).
pub fn g2_bell(zeta: f64, dk: Vec3, separation: Vec3) -> f64 {
    0.5 * (1.0 - libm::cos(zeta) * libm::cos(dk.dot(separation)))
}

/// g² of the classically correlated mixture.
pub fn g2_classical() -> f64 {
    0.5
}

/// G¹(x, x) = |φ_1(x)|² + |φ_2(x)|².
///
/// Spin cross terms vanish, so this holds for every pair kind; for a shared
/// envelope it reduces to 2|φ(x)|².
pub fn g1_density(state: &PairState, x: Vec3) -> f64 {
    state.mode_1.envelope.density(x) + state.mode_2.envelope.density(x)
}

/// Normalized g²(x, x') for the state.
pub fn g2(state: &PairState, x: Vec3, x_prime: Vec3) -> f64 {
    match state.kind {
        PairKind::ClassicalMixture => g2_classical(),
        PairKind::Bell { zeta } => g2_bell(zeta, state.delta_k(), x - x_prime),
        PairKind::Product => {
            let (e1, e2) = (&state.mode_1.envelope, &state.mode_2.envelope);
            let num = e1.density(x) * e2.density(x_prime) + e2.density(x) * e1.density(x_prime);
            let den = g1_density(state, x) * g1_density(state, x_prime);
            if den == 0.0 {
                0.0
            } else {
                num / den
            }
        }
    }
}

/// G²(x, x') = G¹(x, x) G¹(x', x') g²(x, x').
pub fn g2_density(state: &PairState, x: Vec3, x_prime: Vec3) -> f64 {
    g1_density(state, x) * g1_density(state, x_prime) * g2(state, x, x_prime)
}

/// Phase angle that maps a Bell state onto its partner with opposite
/// interference sign.
/// Reduces a phase into [0, 2π).
pub fn wrap_phase(x: f64) -> f64 {
    let r = libm::fmod(x, TAU);
    let r = if r < 0.0 { r + TAU } else { r };
    if r >= TAU {
        0.0
    } else {
        r
    }
}

pub fn partner_zeta(zeta: f64) -> f64 {
    wrap_phase(zeta + PI)
}
