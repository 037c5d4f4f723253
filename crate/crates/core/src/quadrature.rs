//! Brute-force quadrature of the Fourier integrals behind the closed forms
//! in [`crate::wavepackets`].
//!
//! Nothing here calls the analytic transforms: the oracle integrates the
//! defining integrals directly, either with a tensor-product Gauss–Legendre
//! rule over analytic envelopes or with a uniform sum over sampled grids.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::wavepackets::{GaussianEnvelope, ModeWave};
use crate::{Error, Result, Vec3};

/// Gauss–Legendre nodes and weights on [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(degree: usize) -> Result<Self> {
        if degree < 2 {
            return Err(Error::InvalidRule("Gauss-Legendre needs at least two nodes"));
        }
        let n = degree;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = libm::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
            let mut deriv = 0.0;
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(n, x);
                deriv = dp;
                let dx = p / dp;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            if dp != 0.0 {
                deriv = dp;
            }
            let w = 2.0 / ((1.0 - x * x) * deriv * deriv);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Ok(Self { nodes, weights })
    }

    pub fn degree(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// ∫_a^b f(x) dx.
    pub fn integrate<T, F>(&self, a: f64, b: f64, mut f: F) -> T
    where
        T: core::ops::Add<Output = T> + core::ops::Mul<f64, Output = T> + Default,
        F: FnMut(f64) -> T,
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let mut acc = T::default();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(mid + half * x) * (w * half);
        }
        acc
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let j = j as f64;
        let p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Tensor-product Gauss–Legendre oracle over a box of ±`span_sigma` widths.
///
/// Gaussian envelopes are products of per-axis factors, so the tensor rule
/// is evaluated as a product of three one-dimensional rules; this is the same
/// sum as the full 3D grid, reordered.
#[derive(Debug, Clone)]
pub struct QuadratureOracle {
    rule: GaussLegendre,
    span_sigma: f64,
}

/// Highest phase advance per node, |q| · half-interval / nodes, that the
/// Gauss–Legendre rule is trusted to resolve.
pub const GL_PHASE_PER_NODE_LIMIT: f64 = 0.75;

impl Default for QuadratureOracle {
    fn default() -> Self {
        Self::new(96, 8.0).expect("default rule is valid")
    }
}

impl QuadratureOracle {
    pub fn new(nodes: usize, span_sigma: f64) -> Result<Self> {
        if !(span_sigma.is_finite() && span_sigma >= 6.0) {
            return Err(Error::InvalidRule("span must cover at least ±6σ"));
        }
        Ok(Self {
            rule: GaussLegendre::new(nodes)?,
            span_sigma,
        })
    }

    pub fn nodes(&self) -> usize {
        self.rule.degree()
    }

    pub fn span_sigma(&self) -> f64 {
        self.span_sigma
    }

    fn check_resolution(&self, axis: usize, k: f64, half_width: f64) -> Result<()> {
        let per_node = k.abs() * half_width / self.rule.degree() as f64;
        if per_node > GL_PHASE_PER_NODE_LIMIT {
            return Err(Error::GridTooCoarse {
                axis,
                q_spacing: per_node,
                limit: GL_PHASE_PER_NODE_LIMIT,
            });
        }
        Ok(())
    }

    /// ∫ e^{-i q·x} |φ(x)|² d³x by quadrature.
    pub fn density_ft(&self, envelope: &GaussianEnvelope, q: Vec3) -> Result<Complex64> {
        let sigma = envelope.sigma();
        let center = envelope.center().to_array();
        let q = q.to_array();
        let mut total = Complex64::new(1.0, 0.0);
        for a in 0..3 {
            let half = self.span_sigma * sigma[a];
            self.check_resolution(a, q[a], half)?;
            let (s, c, k) = (sigma[a], center[a], q[a]);
            let norm = 1.0 / (libm::sqrt(2.0 * PI) * s);
            let factor = self.rule.integrate(c - half, c + half, |x| {
                let u = (x - c) / s;
                Complex64::from_polar(norm * libm::exp(-0.5 * u * u), -k * x)
            });
            total *= factor;
        }
        Ok(total)
    }

    /// ∫ e^{-i q·x} φ_a(x) φ_b*(x) d³x by quadrature; widths may differ.
    pub fn overlap_ft(&self, mode_a: &ModeWave, mode_b: &ModeWave, q: Vec3) -> Result<Complex64> {
        let (sa, sb) = (mode_a.envelope.sigma(), mode_b.envelope.sigma());
        let (ca, cb) = (
            mode_a.envelope.center().to_array(),
            mode_b.envelope.center().to_array(),
        );
        let phase = (q - (mode_a.carrier_k - mode_b.carrier_k)).to_array();
        let mut total = Complex64::new(1.0, 0.0);
        for a in 0..3 {
            let lo = (ca[a] - self.span_sigma * sa[a]).min(cb[a] - self.span_sigma * sb[a]);
            let hi = (ca[a] + self.span_sigma * sa[a]).max(cb[a] + self.span_sigma * sb[a]);
            self.check_resolution(a, phase[a], 0.5 * (hi - lo))?;
            let norm = 1.0 / (libm::sqrt(2.0 * PI) * libm::sqrt(sa[a] * sb[a]));
            let factor = self.rule.integrate(lo, hi, |x| {
                let ua = (x - ca[a]) / sa[a];
                let ub = (x - cb[a]) / sb[a];
                let amp = norm * libm::exp(-0.25 * (ua * ua + ub * ub));
                Complex64::from_polar(amp, -phase[a] * x)
            });
            total *= factor;
        }
        Ok(total)
    }
}

/// Largest |q · spacing| per axis accepted by the uniform-grid sums.
pub const GRID_PHASE_LIMIT: f64 = PI / 4.0;

/// Edge samples above this fraction of the peak mean the grid cuts off the density.
const TRUNCATION_FRACTION: f64 = 1e-6;

/// Tolerance on Σ samples × cell volume = 1.
pub const GRID_NORMALIZATION_TOLERANCE: f64 = 1e-6;

/// Uniform 3D grid geometry. Sample `(i, j, k)` sits at
/// `origin + (i hx, j hy, k hz)` and is stored at `(i ny + j) nz + k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridGeometry {
    pub dims: [usize; 3],
    pub origin: Vec3,
    pub spacing: [f64; 3],
}

impl GridGeometry {
    pub fn new(dims: [usize; 3], origin: Vec3, spacing: [f64; 3]) -> Result<Self> {
        if dims.iter().any(|&d| d < 2) {
            return Err(Error::GridShape("every axis needs at least two samples"));
        }
        if spacing.iter().any(|h| !h.is_finite() || *h <= 0.0) {
            return Err(Error::GridShape("spacing must be positive and finite"));
        }
        if !origin.is_finite() {
            return Err(Error::GridShape("origin must be finite"));
        }
        Ok(Self {
            dims,
            origin,
            spacing,
        })
    }

    /// Geometry covering `center ± span_sigma σ` with `points` samples per axis.
    pub fn covering(envelope: &GaussianEnvelope, span_sigma: f64, points: [usize; 3]) -> Result<Self> {
        let sigma = envelope.sigma();
        let c = envelope.center().to_array();
        let mut origin = [0.0; 3];
        let mut spacing = [0.0; 3];
        for a in 0..3 {
            if points[a] < 2 {
                return Err(Error::GridShape("every axis needs at least two samples"));
            }
            origin[a] = c[a] - span_sigma * sigma[a];
            spacing[a] = 2.0 * span_sigma * sigma[a] / (points[a] - 1) as f64;
        }
        Self::new(points, origin.into(), spacing)
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    pub fn coordinate(&self, axis: usize, i: usize) -> f64 {
        self.origin.to_array()[axis] + i as f64 * self.spacing[axis]
    }

    pub fn point(&self, i: usize, j: usize, k: usize) -> Vec3 {
        Vec3::new(self.coordinate(0, i), self.coordinate(1, j), self.coordinate(2, k))
    }

    fn check_sampling(&self, q: Vec3) -> Result<()> {
        for (a, k) in q.to_array().into_iter().enumerate() {
            let q_spacing = (k * self.spacing[a]).abs();
            if q_spacing >= GRID_PHASE_LIMIT {
                return Err(Error::GridTooCoarse {
                    axis: a,
                    q_spacing,
                    limit: GRID_PHASE_LIMIT,
                });
            }
        }
        Ok(())
    }

    /// Per-axis phase tables e^{-i q_a x_a}.
    fn phases(&self, q: Vec3) -> [Vec<Complex64>; 3] {
        let q = q.to_array();
        core::array::from_fn(|a| {
            (0..self.dims[a])
                .map(|i| Complex64::from_polar(1.0, -q[a] * self.coordinate(a, i)))
                .collect()
        })
    }

    fn sample_with<T>(&self, f: impl Fn(Vec3) -> T) -> Vec<T> {
        let [nx, ny, nz] = self.dims;
        let mut out = Vec::with_capacity(self.len());
        for i in 0..nx {
            for j in 0..ny {
                for k in 0..nz {
                    out.push(f(self.point(i, j, k)));
                }
            }
        }
        out
    }

    /// Largest |value| on the two faces normal to `axis`.
    fn face_max(&self, axis: usize, magnitude: impl Fn(usize) -> f64) -> f64 {
        let [nx, ny, nz] = self.dims;
        let mut best: f64 = 0.0;
        for i in 0..nx {
            for j in 0..ny {
                for k in 0..nz {
                    let idx = [i, j, k];
                    if idx[axis] == 0 || idx[axis] == self.dims[axis] - 1 {
                        best = best.max(magnitude((i * ny + j) * nz + k));
                    }
                }
            }
        }
        best
    }

    fn check_truncation(&self, magnitude: impl Fn(usize) -> f64) -> Result<()> {
        let peak = (0..self.len()).map(&magnitude).fold(0.0, f64::max);
        for axis in 0..3 {
            if self.face_max(axis, &magnitude) > TRUNCATION_FRACTION * peak {
                return Err(Error::GridTruncated { axis });
            }
        }
        Ok(())
    }

    /// Σ_ijk e^{-i q·x_ijk} v_ijk · cell volume, nested so each axis carries its own phase.
    fn fourier_sum(&self, q: Vec3, value: impl Fn(usize) -> Complex64) -> Complex64 {
        let [px, py, pz] = self.phases(q);
        let [_, ny, nz] = self.dims;
        let mut total = Complex64::new(0.0, 0.0);
        for (i, ex) in px.iter().enumerate() {
            let mut plane = Complex64::new(0.0, 0.0);
            for (j, ey) in py.iter().enumerate() {
                let base = (i * ny + j) * nz;
                let line: Complex64 = pz.iter().enumerate().map(|(k, ez)| ez * value(base + k)).sum();
                plane += ey * line;
            }
            total += ex * plane;
        }
        total * self.cell_volume()
    }
}

/// Sampled probability density on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    geometry: GridGeometry,
    samples: Vec<f64>,
}

impl DensityGrid {
    pub fn new(geometry: GridGeometry, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != geometry.len() {
            return Err(Error::GridShape("sample count does not match dimensions"));
        }
        if samples.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::GridShape("density samples must be finite and non-negative"));
        }
        let norm = samples.iter().sum::<f64>() * geometry.cell_volume();
        if (norm - 1.0).abs() > GRID_NORMALIZATION_TOLERANCE {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { geometry, samples })
    }

    pub fn from_envelope(envelope: &GaussianEnvelope, geometry: GridGeometry) -> Result<Self> {
        let samples = geometry.sample_with(|x| envelope.density(x));
        Self::new(geometry, samples)
    }

    pub fn geometry(&self) -> &GridGeometry {
        &self.geometry
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn integral(&self) -> f64 {
        self.samples.iter().sum::<f64>() * self.geometry.cell_volume()
    }
}

/// Sampled complex mode amplitude on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeGrid {
    geometry: GridGeometry,
    samples: Vec<Complex64>,
}

impl ModeGrid {
    pub fn new(geometry: GridGeometry, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != geometry.len() {
            return Err(Error::GridShape("sample count does not match dimensions"));
        }
        if samples.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::GridShape("mode samples must be finite"));
        }
        Ok(Self { geometry, samples })
    }

    pub fn from_mode(mode: &ModeWave, geometry: GridGeometry) -> Result<Self> {
        let samples = geometry.sample_with(|x| mode.amplitude(x));
        Self::new(geometry, samples)
    }

    pub fn geometry(&self) -> &GridGeometry {
        &self.geometry
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }
}

/// ∫ e^{-i q·x} ρ(x) d³x as a uniform sum over the grid.
pub fn numeric_density_ft(grid: &DensityGrid, q: Vec3) -> Result<Complex64> {
    let g = &grid.geometry;
    g.check_sampling(q)?;
    g.check_truncation(|i| grid.samples[i])?;
    Ok(g.fourier_sum(q, |i| Complex64::new(grid.samples[i], 0.0)))
}

/// ∫ e^{-i q·x} ψ_a(x) ψ_b*(x) d³x as a uniform sum; both grids must share geometry.
pub fn numeric_overlap_ft(a: &ModeGrid, b: &ModeGrid, q: Vec3) -> Result<Complex64> {
    if a.geometry != b.geometry {
        return Err(Error::GridShape("mode grids must share one geometry"));
    }
    let g = &a.geometry;
    g.check_sampling(q)?;
    g.check_truncation(|i| a.samples[i].norm() * b.samples[i].norm())?;
    Ok(g.fourier_sum(q, |i| a.samples[i] * b.samples[i].conj()))
}
