//! Run configuration: a TOML file of flat `key = value` sections.
//!
//! ```toml
//! [medium]
//! n = 2.0                 # or index_table = [[omega_eV, n], ...]
//! beta = 0.7
//!
//! [envelope]
//! widths_nm = [200.0, 200.0, 1.0]
//! convention = "sigma"    # or "fwhm"
//! center_nm = [0.0, 0.0, 0.0]
//!
//! [state]
//! delta_k = "transverse"  # "longitudinal" or [kx, ky, kz] in 1/nm
//! zeta = ["0", "pi/2", "pi"]
//!
//! [cone]
//! omega_eV = 2.0
//! phi_count = 360
//! ```
//!
//! Every numeric field is checked against the model's preconditions here, so
//! a bad value is reported with its section, key and line.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use sha2::{Digest, Sha256};

use qsubrad_core::emission::DeltaKMatch;
use qsubrad_core::kinematics::{IndexTable, Medium, RefractiveIndex};
use qsubrad_core::wavepackets::GaussianEnvelope;
use qsubrad_core::Vec3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub field: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if !self.field.is_empty() {
            write!(f, "{}: ", self.field)?;
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for ConfigError {}

/// Finds the 1-based line that assigns `key` inside `[section]`.
pub fn locate(source: &str, section: &str, key: &str) -> Option<usize> {
    let mut current = String::new();
    for (idx, raw) in source.lines().enumerate() {
        let line = raw.trim();
        if let Some(rest) = line.strip_prefix('[') {
            if let Some(end) = rest.find(']') {
                current = rest[..end].trim().to_string();
                if key.is_empty() && current == section {
                    return Some(idx + 1);
                }
                continue;
            }
        }
        if current == section && !key.is_empty() {
            if let Some(rest) = line.strip_prefix(key) {
                if rest.trim_start().starts_with('=') {
                    return Some(idx + 1);
                }
            }
        }
    }
    None
}

fn line_of_offset(source: &str, offset: usize) -> usize {
    source[..offset.min(source.len())].matches('\n').count() + 1
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    medium: RawMedium,
    envelope: Option<RawEnvelope>,
    state: Option<RawState>,
    cone: Option<RawCone>,
    spectrum: Option<RawSpectrum>,
    compare: Option<RawCompare>,
    output: Option<RawOutput>,
    oracle: Option<RawOracle>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMedium {
    n: Option<f64>,
    index_table: Option<Vec<[f64; 2]>>,
    beta: f64,
}

#[derive(Debug, Deserialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum WidthConvention {
    Sigma,
    Fwhm,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEnvelope {
    widths_nm: [f64; 3],
    convention: Option<WidthConvention>,
    center_nm: Option<[f64; 3]>,
}

#[derive(Debug, Deserialize, Clone)]
#[serde(untagged)]
enum RawZeta {
    Number(f64),
    Text(String),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawDeltaK {
    Vector([f64; 3]),
    Named(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawState {
    delta_k: RawDeltaK,
    #[serde(rename = "delta_k_omega_eV")]
    delta_k_omega_ev: Option<f64>,
    zeta: Option<Vec<RawZeta>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCone {
    #[serde(rename = "omega_eV")]
    omega_ev: f64,
    phi_count: usize,
    phi_start: Option<f64>,
    phi_end: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpectrum {
    #[serde(rename = "omega0_eV")]
    omega0_ev: f64,
    phi: Option<f64>,
    ratio_range: Option<[f64; 2]>,
    #[serde(rename = "omega_range_eV")]
    omega_range_ev: Option<[f64; 2]>,
    count: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCompare {
    zeta: Option<RawZeta>,
    offset_nm: Option<[f64; 3]>,
}

#[derive(Debug, Deserialize, Clone, Copy, PartialEq, Eq, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    format: Option<Format>,
    precision: Option<usize>,
    path: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOracle {
    samples: Option<usize>,
    seed: Option<u64>,
    nodes: Option<usize>,
    span_sigma: Option<f64>,
    max_q_sigma: Option<f64>,
    tolerance: Option<f64>,
    density_grid: Option<PathBuf>,
}

/// A phase with the label used in column names (`pi/2` → `zetapi2`).
#[derive(Debug, Clone, PartialEq)]
pub struct Zeta {
    pub value: f64,
    pub label: String,
}

impl Zeta {
    pub fn column(&self) -> String {
        format!("braces_zeta{}", self.label)
    }
}

/// Parses `0`, `1.25`, `pi`, `pi/2`, `3pi/2`, `-pi/4`, `2*pi`.
pub fn parse_zeta(token: &str) -> Option<Zeta> {
    let t: String = token.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
    if t.is_empty() {
        return None;
    }
    let value = match t.find("pi") {
        Some(pos) => {
            let coef = match t[..pos].trim_end_matches('*') {
                "" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().ok()?,
            };
            let den = match &t[pos + 2..] {
                "" => 1.0,
                rest => rest.strip_prefix('/')?.parse::<f64>().ok()?,
            };
            if den == 0.0 {
                return None;
            }
            coef * PI / den
        }
        None => t.parse::<f64>().ok()?,
    };
    if !value.is_finite() {
        return None;
    }
    let label = t.replace(['/', '*'], "");
    Some(Zeta { value, label })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaKSpec {
    Matched(DeltaKMatch),
    Explicit(Vec3),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateSpec {
    pub delta_k: DeltaKSpec,
    /// Photon energy at which a matched Δk is evaluated; defaults to the scan's.
    pub match_omega_ev: Option<f64>,
    pub zetas: Vec<Zeta>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConeSpec {
    pub omega_ev: f64,
    pub phis: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSpec {
    pub omega0_ev: f64,
    pub phi: f64,
    /// ω/ω0 for each sample, exactly as gridded when a ratio range is given.
    pub ratios: Vec<f64>,
    pub omegas: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareSpec {
    pub zeta: Zeta,
    pub offset: Vec3,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    pub format: Format,
    pub precision: usize,
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSpec {
    pub samples: usize,
    pub seed: u64,
    pub nodes: usize,
    pub span_sigma: f64,
    pub max_q_sigma: f64,
    pub tolerance: f64,
    pub density_grid: Option<PathBuf>,
}

pub const DEFAULT_PRECISION: usize = 9;

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub medium: Medium,
    pub envelope: Option<GaussianEnvelope>,
    pub state: Option<StateSpec>,
    pub cone: Option<ConeSpec>,
    pub spectrum: Option<SpectrumSpec>,
    pub compare: CompareSpec,
    pub output: OutputSpec,
    pub oracle: OracleSpec,
    /// Hex SHA-256 of the configuration text.
    pub hash: String,
    source: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

struct Checker<'a> {
    source: &'a str,
}

impl Checker<'_> {
    fn err(&self, section: &str, key: &str, message: impl Into<String>) -> ConfigError {
        let line = locate(self.source, section, key).or_else(|| locate(self.source, section, ""));
        let field = if key.is_empty() {
            section.to_string()
        } else {
            format!("{section}.{key}")
        };
        ConfigError {
            line,
            field,
            message: message.into(),
        }
    }

    fn positive(&self, section: &str, key: &str, v: f64) -> Result<f64, ConfigError> {
        if v.is_finite() && v > 0.0 {
            Ok(v)
        } else {
            Err(self.err(section, key, format!("must be a positive finite number (got {v})")))
        }
    }

    fn finite3(&self, section: &str, key: &str, v: [f64; 3]) -> Result<Vec3, ConfigError> {
        if v.iter().all(|x| x.is_finite()) {
            Ok(v.into())
        } else {
            Err(self.err(section, key, "components must be finite"))
        }
    }

    fn zeta(&self, section: &str, key: &str, raw: &RawZeta) -> Result<Zeta, ConfigError> {
        match raw {
            RawZeta::Number(v) if v.is_finite() => Ok(Zeta {
                value: *v,
                label: format!("{v}"),
            }),
            RawZeta::Number(v) => Err(self.err(section, key, format!("phase must be finite (got {v})"))),
            RawZeta::Text(t) => parse_zeta(t).ok_or_else(|| {
                self.err(section, key, format!("cannot read phase `{t}`; use a number or forms like pi, pi/2, 3pi/2"))
            }),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let source = std::fs::read_to_string(path).map_err(|e| ConfigError {
            line: None,
            field: String::new(),
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::parse(&source, base)
    }

    /// Parses configuration text; relative file paths resolve against `base_dir`.
    pub fn parse(source: &str, base_dir: &Path) -> Result<Self, ConfigError> {
        let raw: RawConfig = toml::from_str(source).map_err(|e| ConfigError {
            line: e.span().map(|s| line_of_offset(source, s.start)),
            field: String::new(),
            message: e.message().to_string(),
        })?;
        let c = Checker { source };

        let m = &raw.medium;
        if !(m.beta.is_finite() && m.beta > 0.0 && m.beta < 1.0) {
            return Err(c.err("medium", "beta", format!("must satisfy 0 < beta < 1 (got {})", m.beta)));
        }
        let index = match (m.n, &m.index_table) {
            (Some(n), None) => {
                if !(n.is_finite() && n >= 1.0) {
                    return Err(c.err("medium", "n", format!("refractive index must be finite and >= 1 (got {n})")));
                }
                RefractiveIndex::Constant(n)
            }
            (None, Some(rows)) => {
                let table = IndexTable::new(rows.iter().map(|r| (r[0], r[1])).collect())
                    .map_err(|e| c.err("medium", "index_table", e.to_string()))?;
                RefractiveIndex::Table(table)
            }
            (Some(_), Some(_)) => return Err(c.err("medium", "n", "give either n or index_table, not both")),
            (None, None) => return Err(c.err("medium", "", "missing refractive index: set n or index_table")),
        };
        let medium = Medium::new(index, m.beta).map_err(|e| c.err("medium", "", e.to_string()))?;

        let envelope = match &raw.envelope {
            None => None,
            Some(e) => {
                for w in e.widths_nm {
                    c.positive("envelope", "widths_nm", w)?;
                }
                let center = c.finite3("envelope", "center_nm", e.center_nm.unwrap_or([0.0; 3]))?;
                let env = match e.convention.unwrap_or(WidthConvention::Sigma) {
                    WidthConvention::Sigma => GaussianEnvelope::new(e.widths_nm, center),
                    WidthConvention::Fwhm => GaussianEnvelope::from_fwhm(e.widths_nm, center),
                };
                Some(env.map_err(|err| c.err("envelope", "widths_nm", err.to_string()))?)
            }
        };

        let state = match &raw.state {
            None => None,
            Some(s) => {
                let delta_k = match &s.delta_k {
                    RawDeltaK::Vector(v) => DeltaKSpec::Explicit(c.finite3("state", "delta_k", *v)?),
                    RawDeltaK::Named(name) => match name.as_str() {
                        "transverse" => DeltaKSpec::Matched(DeltaKMatch::Transverse),
                        "longitudinal" => DeltaKSpec::Matched(DeltaKMatch::Longitudinal),
                        other => {
                            return Err(c.err(
                                "state",
                                "delta_k",
                                format!("expected \"transverse\", \"longitudinal\" or a 3-vector (got \"{other}\")"),
                            ))
                        }
                    },
                };
                let match_omega_ev = s
                    .delta_k_omega_ev
                    .map(|w| c.positive("state", "delta_k_omega_eV", w))
                    .transpose()?;
                let raw_zetas = s.zeta.clone().unwrap_or_else(|| {
                    ["0", "pi/2", "pi"].iter().map(|t| RawZeta::Text(t.to_string())).collect()
                });
                let mut zetas: Vec<Zeta> = Vec::new();
                for z in &raw_zetas {
                    let z = c.zeta("state", "zeta", z)?;
                    if zetas.iter().any(|o| o.label == z.label) {
                        return Err(c.err("state", "zeta", format!("phase `{}` listed twice", z.label)));
                    }
                    zetas.push(z);
                }
                Some(StateSpec {
                    delta_k,
                    match_omega_ev,
                    zetas,
                })
            }
        };

        let cone = match &raw.cone {
            None => None,
            Some(k) => {
                let omega_ev = c.positive("cone", "omega_eV", k.omega_ev)?;
                if k.phi_count == 0 {
                    return Err(c.err("cone", "phi_count", "must be at least 1"));
                }
                let phis = match (k.phi_start, k.phi_end) {
                    (None, None) => qsubrad_core::emission::uniform_azimuths(k.phi_count),
                    (start, end) => {
                        let (a, b) = (start.unwrap_or(0.0), end.unwrap_or(2.0 * PI));
                        if !(a.is_finite() && b.is_finite() && b > a) {
                            return Err(c.err("cone", "phi_end", "need finite phi_start < phi_end"));
                        }
                        if k.phi_count < 2 {
                            return Err(c.err("cone", "phi_count", "an explicit range needs at least 2 points"));
                        }
                        qsubrad_core::emission::linspace(a, b, k.phi_count)
                    }
                };
                Some(ConeSpec { omega_ev, phis })
            }
        };

        let spectrum = match &raw.spectrum {
            None => None,
            Some(s) => {
                let omega0_ev = c.positive("spectrum", "omega0_eV", s.omega0_ev)?;
                let phi = s.phi.unwrap_or(0.0);
                if !phi.is_finite() {
                    return Err(c.err("spectrum", "phi", "must be finite"));
                }
                if s.count < 2 {
                    return Err(c.err("spectrum", "count", "must be at least 2"));
                }
                let (lo, hi, key) = match (s.ratio_range, s.omega_range_ev) {
                    (Some(r), None) => (r[0] * omega0_ev, r[1] * omega0_ev, "ratio_range"),
                    (None, Some(w)) => (w[0], w[1], "omega_range_eV"),
                    (None, None) => (0.5 * omega0_ev, 1.5 * omega0_ev, ""),
                    (Some(_), Some(_)) => {
                        return Err(c.err("spectrum", "omega_range_eV", "give either ratio_range or omega_range_eV"))
                    }
                };
                if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi > lo) {
                    return Err(c.err("spectrum", key, "range must be positive and increasing"));
                }
                let (ratios, omegas): (Vec<f64>, Vec<f64>) = match s.ratio_range {
                    Some(r) => qsubrad_core::emission::linspace(r[0], r[1], s.count)
                        .into_iter()
                        .map(|x| (x, x * omega0_ev))
                        .unzip(),
                    None => qsubrad_core::emission::linspace(lo, hi, s.count)
                        .into_iter()
                        .map(|w| (w / omega0_ev, w))
                        .unzip(),
                };
                Some(SpectrumSpec {
                    omega0_ev,
                    phi,
                    ratios,
                    omegas,
                })
            }
        };

        let compare = match &raw.compare {
            None => CompareSpec {
                zeta: parse_zeta("pi").expect("valid token"),
                offset: Vec3::ZERO,
            },
            Some(k) => CompareSpec {
                zeta: match &k.zeta {
                    Some(z) => c.zeta("compare", "zeta", z)?,
                    None => parse_zeta("pi").expect("valid token"),
                },
                offset: c.finite3("compare", "offset_nm", k.offset_nm.unwrap_or([0.0; 3]))?,
            },
        };

        let output = match &raw.output {
            None => OutputSpec {
                format: Format::Csv,
                precision: DEFAULT_PRECISION,
                path: None,
            },
            Some(o) => {
                let precision = o.precision.unwrap_or(DEFAULT_PRECISION);
                if !(1..=17).contains(&precision) {
                    return Err(c.err("output", "precision", format!("must be between 1 and 17 digits (got {precision})")));
                }
                OutputSpec {
                    format: o.format.unwrap_or_default(),
                    precision,
                    path: o.path.as_ref().map(|p| base_dir.join(p)),
                }
            }
        };

        let o = raw.oracle.as_ref();
        let oracle = OracleSpec {
            samples: o.and_then(|o| o.samples).unwrap_or(100),
            seed: o.and_then(|o| o.seed).unwrap_or(1),
            nodes: o.and_then(|o| o.nodes).unwrap_or(96),
            span_sigma: o.and_then(|o| o.span_sigma).unwrap_or(8.0),
            max_q_sigma: o.and_then(|o| o.max_q_sigma).unwrap_or(5.0),
            tolerance: o.and_then(|o| o.tolerance).unwrap_or(1e-6),
            density_grid: o.and_then(|o| o.density_grid.as_ref()).map(|p| base_dir.join(p)),
        };
        if oracle.samples == 0 {
            return Err(c.err("oracle", "samples", "must be at least 1"));
        }
        if oracle.nodes < 2 {
            return Err(c.err("oracle", "nodes", "must be at least 2"));
        }
        if !(oracle.span_sigma.is_finite() && oracle.span_sigma >= 6.0) {
            return Err(c.err("oracle", "span_sigma", "must be at least 6"));
        }
        c.positive("oracle", "max_q_sigma", oracle.max_q_sigma)?;
        if !(oracle.tolerance.is_finite() && oracle.tolerance >= 0.0) {
            return Err(c.err("oracle", "tolerance", "must be a finite non-negative number"));
        }

        Ok(Self {
            medium,
            envelope,
            state,
            cone,
            spectrum,
            compare,
            output,
            oracle,
            hash: sha256_hex(source.as_bytes()),
            source: source.to_string(),
        })
    }

    /// A validation error for `section.key`, located in the source text.
    pub fn field_error(&self, section: &str, key: &str, message: impl Into<String>) -> ConfigError {
        Checker { source: &self.source }.err(section, key, message)
    }

    pub fn require_envelope(&self) -> Result<GaussianEnvelope, ConfigError> {
        self.envelope.ok_or_else(|| missing("envelope"))
    }

    pub fn require_state(&self) -> Result<&StateSpec, ConfigError> {
        self.state.as_ref().ok_or_else(|| missing("state"))
    }

    pub fn require_cone(&self) -> Result<&ConeSpec, ConfigError> {
        self.cone.as_ref().ok_or_else(|| missing("cone"))
    }

    pub fn require_spectrum(&self) -> Result<&SpectrumSpec, ConfigError> {
        self.spectrum.as_ref().ok_or_else(|| missing("spectrum"))
    }
}

fn missing(section: &str) -> ConfigError {
    ConfigError {
        line: None,
        field: section.to_string(),
        message: format!("section [{section}] is required by this command"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = "[medium]\nn = 2.0\nbeta = 0.7\n";

    fn parse(s: &str) -> Result<RunConfig, ConfigError> {
        RunConfig::parse(s, Path::new("."))
    }

    #[test]
    fn zeta_tokens() {
        let z = parse_zeta("pi/2").unwrap();
        assert_eq!(z.column(), "braces_zetapi2");
        assert_eq!(z.value, PI / 2.0);
        assert_eq!(parse_zeta("pi").unwrap().column(), "braces_zetapi");
        assert_eq!(parse_zeta("0").unwrap().column(), "braces_zeta0");
        assert_eq!(parse_zeta("3pi/2").unwrap().value, 1.5 * PI);
        assert_eq!(parse_zeta("-pi/4").unwrap().value, -0.25 * PI);
        assert_eq!(parse_zeta("2*pi").unwrap().label, "2pi");
        assert_eq!(parse_zeta("1.25").unwrap().value, 1.25);
        for bad in ["", "pie", "pi/0", "x", "pi/2/3"] {
            assert!(parse_zeta(bad).is_none(), "{bad}");
        }
    }

    #[test]
    fn beta_out_of_range_names_field_and_line() {
        let err = parse("[medium]\nn = 2.0\nbeta = 1.2\n").unwrap_err();
        assert_eq!(err.field, "medium.beta");
        assert_eq!(err.line, Some(3));
        assert!(err.to_string().contains("beta"));
    }

    #[test]
    fn unknown_keys_are_errors() {
        let err = parse("[medium]\nn = 2.0\nbeta = 0.7\ncolour = 1\n").unwrap_err();
        assert!(err.message.contains("colour"), "{err}");
        assert_eq!(err.line, Some(4));
        let err = parse(&format!("{BASE}[extra]\nx = 1\n")).unwrap_err();
        assert!(err.message.contains("extra"), "{err}");
    }

    #[test]
    fn syntax_errors_carry_line() {
        let err = parse("[medium]\nn = 2.0\nbeta = = 0.7\n").unwrap_err();
        assert_eq!(err.line, Some(3));
    }

    #[test]
    fn defaults_and_sections() {
        let cfg = parse(&format!("{BASE}[envelope]\nwidths_nm = [200.0, 200.0, 1.0]\n[state]\ndelta_k = \"transverse\"\n")).unwrap();
        let zetas: Vec<_> = cfg.state.as_ref().unwrap().zetas.iter().map(Zeta::column).collect();
        assert_eq!(zetas, ["braces_zeta0", "braces_zetapi2", "braces_zetapi"]);
        assert_eq!(cfg.output.precision, 9);
        assert_eq!(cfg.oracle.samples, 100);
        assert!(cfg.require_cone().is_err());
        assert_eq!(cfg.hash.len(), 64);
    }

    #[test]
    fn fwhm_convention() {
        let cfg = parse(&format!("{BASE}[envelope]\nwidths_nm = [2.3548200450309493, 1.0, 1.0]\nconvention = \"fwhm\"\n")).unwrap();
        assert!((cfg.envelope.unwrap().sigma()[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bad_values_are_located() {
        let err = parse(&format!("{BASE}[envelope]\nwidths_nm = [200.0, -1.0, 1.0]\n")).unwrap_err();
        assert_eq!((err.field.as_str(), err.line), ("envelope.widths_nm", Some(5)));
        let err = parse(&format!("{BASE}[state]\ndelta_k = \"sideways\"\n")).unwrap_err();
        assert_eq!(err.field, "state.delta_k");
        let err = parse(&format!("{BASE}[state]\ndelta_k = [0.1, 0, 0]\nzeta = [\"pi\", \"pi\"]\n")).unwrap_err();
        assert_eq!(err.field, "state.zeta");
        let err = parse("[medium]\nbeta = 0.7\n").unwrap_err();
        assert_eq!(err.field, "medium");
        let err = parse(&format!("{BASE}[output]\nprecision = 0\n")).unwrap_err();
        assert_eq!(err.field, "output.precision");
    }

    #[test]
    fn spectrum_ratio_grid_hits_resonance_exactly() {
        let cfg = parse(&format!("{BASE}[spectrum]\nomega0_eV = 2.0\nratio_range = [0.5, 1.5]\ncount = 201\n")).unwrap();
        let s = cfg.spectrum.unwrap();
        assert_eq!(s.omegas[100], 2.0);
        assert_eq!(s.omegas.len(), 201);
    }
}
