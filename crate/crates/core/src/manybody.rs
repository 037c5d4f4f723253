//! N-electron states built from one shared envelope and N distinct carriers.
//!
//! A state is a superposition of spin assignments,
//! `Σ_σ c_σ a†_{1σ1} a†_{2σ2} … a†_{NσN} |0⟩`, with creation operators in
//! ascending mode order. Fermionic signs come from a Jordan–Wigner ordering
//! of the spin-orbitals `2·mode + spin`.
//!
//! The rate is assembled by explicit operator algebra: the one-body matrix
//! `D_ij = Σ_σ ⟨a†_iσ a_jσ⟩` and two-body tensor
//! `T_ijkl = Σ_σσ' ⟨a†_iσ' a†_jσ a_kσ a_lσ'⟩` are enumerated over the basis,
//! then contracted with form factors:
//!
//! ```text
//! Γ/Γ0 = Σ_ij D_ij F(k_i - k_j) + Σ_ijkl T_ijkl F(q - k_k + k_j) F*(q + k_l - k_i)
//! ```

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::emission::EmissionPoint;
use crate::kinematics::{cherenkov_angle, Medium};
use crate::wavepackets::{density_ft, GaussianEnvelope, ModeWave, Spin};
use crate::{Error, Result, Vec3};

/// Upper bound on N for explicit enumeration.
pub const MAX_PARTICLES: usize = 8;

/// Tolerance on Σ|c|² = 1.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// One basis term: spins in mode order and a complex amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinTerm {
    pub spins: Vec<Spin>,
    pub coefficient: Complex64,
}

impl SpinTerm {
    pub fn new(spins: Vec<Spin>, coefficient: Complex64) -> Self {
        Self { spins, coefficient }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Reject states whose norm differs from one.
    Strict,
    /// Rescale the coefficients to unit norm.
    Renormalize,
}

type Occupation = u32;

fn orbital(mode: usize, spin: Spin) -> u32 {
    2 * mode as u32
        + match spin {
            Spin::Up => 0,
            Spin::Down => 1,
        }
}

/// Applies a_p (create = false) or a†_p (create = true) to a basis state.
fn apply(op_create: bool, p: u32, occ: Occupation) -> Option<(Occupation, f64)> {
    let bit = 1 << p;
    if (occ & bit != 0) == op_create {
        return None;
    }
    let below = (occ & (bit - 1)).count_ones();
    let sign = if below.is_multiple_of(2) { 1.0 } else { -1.0 };
    Some((occ ^ bit, sign))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManyBodyState {
    envelope: GaussianEnvelope,
    carriers: Vec<Vec3>,
    terms: Vec<SpinTerm>,
}

impl ManyBodyState {
    pub fn new(
        envelope: GaussianEnvelope,
        carriers: Vec<Vec3>,
        terms: Vec<SpinTerm>,
        normalization: Normalization,
    ) -> Result<Self> {
        let n = carriers.len();
        if n == 0 || terms.is_empty() {
            return Err(Error::EmptyState);
        }
        if n > MAX_PARTICLES {
            return Err(Error::TooManyParticles { n, max: MAX_PARTICLES });
        }
        if carriers.iter().any(|k| !k.is_finite()) {
            return Err(Error::InvalidVector("carrier wavevector must be finite"));
        }
        for i in 0..n {
            for j in i + 1..n {
                if carriers[i] == carriers[j] {
                    return Err(Error::DuplicateCarrier { first: i, second: j });
                }
            }
        }
        let mut seen = BTreeMap::new();
        for (idx, t) in terms.iter().enumerate() {
            if t.spins.len() != n {
                return Err(Error::AssignmentLength {
                    got: t.spins.len(),
                    expected: n,
                });
            }
            if !t.coefficient.re.is_finite() || !t.coefficient.im.is_finite() {
                return Err(Error::NotNormalized { norm: f64::NAN });
            }
            if seen.insert(t.spins.clone(), idx).is_some() {
                return Err(Error::DuplicateAssignment(idx));
            }
        }
        let norm: f64 = terms.iter().map(|t| t.coefficient.norm_sqr()).sum();
        let mut terms = terms;
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            if normalization == Normalization::Strict || norm == 0.0 {
                return Err(Error::NotNormalized { norm });
            }
            let scale = 1.0 / libm::sqrt(norm);
            for t in &mut terms {
                t.coefficient *= scale;
            }
        }
        // canonical order: ascending occupation bitmask
        terms.sort_by_key(|t| Self::occupation(&t.spins));
        Ok(Self {
            envelope,
            carriers,
            terms,
        })
    }

    /// Builds a state from modes sharing one envelope; their spin labels are
    /// superseded by the spin assignments in `terms`.
    pub fn from_modes(modes: &[ModeWave], terms: Vec<SpinTerm>, normalization: Normalization) -> Result<Self> {
        let first = modes.first().ok_or(Error::EmptyState)?;
        if modes.iter().any(|m| m.envelope != first.envelope) {
            return Err(Error::MismatchedEnvelope);
        }
        let carriers = modes.iter().map(|m| m.carrier_k).collect();
        Self::new(first.envelope, carriers, terms, normalization)
    }

    /// (|k1↑ k2↓⟩ + e^{iζ}|k1↓ k2↑⟩)/√2.
    pub fn bell(envelope: GaussianEnvelope, k1: Vec3, k2: Vec3, zeta: f64) -> Result<Self> {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        Self::new(
            envelope,
            alloc::vec![k1, k2],
            alloc::vec![
                SpinTerm::new(alloc::vec![Spin::Up, Spin::Down], Complex64::new(h, 0.0)),
                SpinTerm::new(alloc::vec![Spin::Down, Spin::Up], Complex64::from_polar(h, zeta)),
            ],
            Normalization::Strict,
        )
    }

    fn occupation(spins: &[Spin]) -> Occupation {
        spins
            .iter()
            .enumerate()
            .fold(0, |occ, (m, &s)| occ | 1 << orbital(m, s))
    }

    pub fn particles(&self) -> usize {
        self.carriers.len()
    }

    pub fn envelope(&self) -> &GaussianEnvelope {
        &self.envelope
    }

    pub fn carriers(&self) -> &[Vec3] {
        &self.carriers
    }

    pub fn terms(&self) -> &[SpinTerm] {
        &self.terms
    }

    /// Same physical state with modes `i` and `j` relabelled.
    pub fn swap_modes(&self, i: usize, j: usize) -> Result<Self> {
        let n = self.particles();
        if i >= n || j >= n {
            return Err(Error::InvalidVector("mode index out of range"));
        }
        if i == j {
            return Ok(self.clone());
        }
        let mut carriers = self.carriers.clone();
        carriers.swap(i, j);
        // exchanging two distinct creation operators in the ordered product is
        // one transposition
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut spins = t.spins.clone();
                spins.swap(i, j);
                SpinTerm::new(spins, -t.coefficient)
            })
            .collect();
        Self::new(self.envelope, carriers, terms, Normalization::Strict)
    }

    /// Multiplies every coefficient by e^{iθ}.
    pub fn with_global_phase(&self, theta: f64) -> Self {
        let phase = Complex64::from_polar(1.0, theta);
        let mut out = self.clone();
        for t in &mut out.terms {
            t.coefficient *= phase;
        }
        out
    }

    fn amplitudes(&self) -> BTreeMap<Occupation, Complex64> {
        self.terms
            .iter()
            .map(|t| (Self::occupation(&t.spins), t.coefficient))
            .collect()
    }

    /// ⟨Ψ| O |Ψ⟩ for an operator string applied right to left.
    fn expectation(&self, amps: &BTreeMap<Occupation, Complex64>, ops: &[(bool, u32)]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&occ, &c) in amps {
            let mut state = Some((occ, 1.0));
            for &(create, p) in ops.iter().rev() {
                state = state.and_then(|(o, s)| apply(create, p, o).map(|(o2, s2)| (o2, s * s2)));
            }
            if let Some((out, sign)) = state {
                if let Some(bra) = amps.get(&out) {
                    acc += bra.conj() * c * sign;
                }
            }
        }
        acc
    }

    /// Enumerates the reduced density matrices of the state.
    pub fn correlations(&self) -> Correlations {
        let n = self.particles();
        let amps = self.amplitudes();
        let spins = [Spin::Up, Spin::Down];
        let mut one_body = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let v: Complex64 = spins
                    .iter()
                    .map(|&s| self.expectation(&amps, &[(true, orbital(i, s)), (false, orbital(j, s))]))
                    .sum();
                if v != Complex64::new(0.0, 0.0) {
                    one_body.push((i, j, v));
                }
            }
        }
        let mut two_body = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut v = Complex64::new(0.0, 0.0);
                        for &s in &spins {
                            for &sp in &spins {
                                v += self.expectation(
                                    &amps,
                                    &[
                                        (true, orbital(i, sp)),
                                        (true, orbital(j, s)),
                                        (false, orbital(k, s)),
                                        (false, orbital(l, sp)),
                                    ],
                                );
                            }
                        }
                        if v != Complex64::new(0.0, 0.0) {
                            two_body.push(([i, j, k, l], v));
                        }
                    }
                }
            }
        }
        Correlations {
            carriers: self.carriers.clone(),
            envelope: self.envelope,
            one_body,
            two_body,
        }
    }
}

/// Non-zero entries of the one- and two-body reduced density matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct Correlations {
    carriers: Vec<Vec3>,
    envelope: GaussianEnvelope,
    one_body: Vec<(usize, usize, Complex64)>,
    two_body: Vec<([usize; 4], Complex64)>,
}

/// Brace factor of an N-electron state at one photon momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManyBodyRate {
    pub braces: f64,
    /// Imaginary part left after the contraction; should vanish.
    pub imag_residue: f64,
    pub incoherent: f64,
    pub coherent: f64,
    pub gamma0: f64,
}

impl Correlations {
    pub fn one_body(&self) -> &[(usize, usize, Complex64)] {
        &self.one_body
    }

    pub fn two_body(&self) -> &[([usize; 4], Complex64)] {
        &self.two_body
    }

    /// Contracts the correlations with form factors at photon momentum `q`.
    pub fn braces_at(&self, q: Vec3) -> ManyBodyRate {
        let k = &self.carriers;
        let f = |p: Vec3| density_ft(&self.envelope, p);
        let incoherent: Complex64 = self
            .one_body
            .iter()
            .map(|&(i, j, d)| d * f(k[i] - k[j]))
            .sum();
        let coherent: Complex64 = self
            .two_body
            .iter()
            .map(|&([i, j, kk, l], t)| t * f(q - k[kk] + k[j]) * f(q + k[l] - k[i]).conj())
            .sum();
        let total = incoherent + coherent;
        ManyBodyRate {
            braces: total.re,
            imag_residue: total.im,
            incoherent: incoherent.re,
            coherent: coherent.re,
            gamma0: 0.0,
        }
    }
}

pub fn build_state(modes: &[ModeWave], terms: Vec<SpinTerm>, normalization: Normalization) -> Result<ManyBodyState> {
    ManyBodyState::from_modes(modes, terms, normalization)
}

pub fn manybody_rate(state: &ManyBodyState, medium: &Medium, point: EmissionPoint) -> Result<ManyBodyRate> {
    let geo = cherenkov_angle(medium, point.omega_ev)?;
    let mut rate = state.correlations().braces_at(geo.photon_momentum(point.phi));
    rate.gamma0 = crate::kinematics::gamma0(&geo);
    Ok(rate)
}
