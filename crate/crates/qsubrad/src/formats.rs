//! Text formats for sampled densities and many-body state descriptions.
//!
//! Density grid (`#` starts a comment anywhere on a line):
//!
//! ```text
//! qsubrad-density-grid 1
//! dims 65 65 65
//! origin -1600 -1600 -8
//! spacing 50 50 0.25
//! 1.2e-14 1.3e-14 ...
//! ```
//!
//! Samples follow in row-major order, the last axis fastest, and must
//! integrate to one over the cell volume.
//!
//! Many-body state (TOML):
//!
//! ```toml
//! sigma_nm = [200.0, 200.0, 1.0]
//! center_nm = [0.0, 0.0, 0.0]     # optional
//! carriers = [[0.0141866, 0.0, 0.0], [0.0, 0.0, 0.0]]
//! renormalize = false             # optional
//!
//! [[term]]
//! spins = "ud"                    # one of u/d per carrier, in carrier order
//! re = 0.7071067811865476
//! im = 0.0
//! ```

use std::fmt::Write as _;

use serde::Deserialize;

use qsubrad_core::manybody::{ManyBodyState, Normalization, SpinTerm};
use qsubrad_core::quadrature::{DensityGrid, GridGeometry};
use qsubrad_core::wavepackets::{GaussianEnvelope, Spin};
use qsubrad_core::{Complex64, Vec3};

use crate::config::ConfigError;

pub const DENSITY_GRID_MAGIC: &str = "qsubrad-density-grid";
pub const DENSITY_GRID_VERSION: u32 = 1;

fn format_err(line: Option<usize>, field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line,
        field: field.to_string(),
        message: message.into(),
    }
}

pub fn parse_density_grid(text: &str) -> Result<DensityGrid, ConfigError> {
    let mut tokens = text.lines().enumerate().flat_map(|(i, line)| {
        let content = line.split('#').next().unwrap_or("");
        content.split_whitespace().map(move |t| (i + 1, t))
    });
    keyword(&mut tokens, DENSITY_GRID_MAGIC)?;

    fn next_num<'a, T: std::str::FromStr>(
        tokens: &mut impl Iterator<Item = (usize, &'a str)>,
        field: &str,
    ) -> Result<T, ConfigError> {
        match tokens.next() {
            Some((line, t)) => t
                .parse()
                .map_err(|_| format_err(Some(line), field, format!("cannot read `{t}` as a number"))),
            None => Err(format_err(None, field, "unexpected end of file")),
        }
    }
    fn keyword<'a>(tokens: &mut impl Iterator<Item = (usize, &'a str)>, word: &str) -> Result<(), ConfigError> {
        match tokens.next() {
            Some((_, t)) if t == word => Ok(()),
            Some((line, t)) => Err(format_err(Some(line), word, format!("expected `{word}`, found `{t}`"))),
            None => Err(format_err(None, word, format!("missing `{word}`"))),
        }
    }

    let version: u32 = next_num(&mut tokens, "version")?;
    if version != DENSITY_GRID_VERSION {
        return Err(format_err(Some(1), "version", format!("unsupported version {version}")));
    }
    keyword(&mut tokens, "dims")?;
    let dims = [
        next_num(&mut tokens, "dims")?,
        next_num(&mut tokens, "dims")?,
        next_num(&mut tokens, "dims")?,
    ];
    keyword(&mut tokens, "origin")?;
    let origin = Vec3::new(
        next_num(&mut tokens, "origin")?,
        next_num(&mut tokens, "origin")?,
        next_num(&mut tokens, "origin")?,
    );
    keyword(&mut tokens, "spacing")?;
    let spacing = [
        next_num(&mut tokens, "spacing")?,
        next_num(&mut tokens, "spacing")?,
        next_num(&mut tokens, "spacing")?,
    ];
    let geometry = GridGeometry::new(dims, origin, spacing).map_err(|e| format_err(None, "dims", e.to_string()))?;
    let mut samples = Vec::with_capacity(geometry.len());
    for _ in 0..geometry.len() {
        samples.push(next_num::<f64>(&mut tokens, "samples")?);
    }
    if let Some((line, t)) = tokens.next() {
        return Err(format_err(Some(line), "samples", format!("trailing data `{t}`")));
    }
    DensityGrid::new(geometry, samples).map_err(|e| format_err(None, "samples", e.to_string()))
}

pub fn write_density_grid(grid: &DensityGrid) -> String {
    let g = grid.geometry();
    let o = g.origin;
    let mut out = format!(
        "{DENSITY_GRID_MAGIC} {DENSITY_GRID_VERSION}\ndims {} {} {}\norigin {:e} {:e} {:e}\nspacing {:e} {:e} {:e}\n",
        g.dims[0], g.dims[1], g.dims[2], o.x, o.y, o.z, g.spacing[0], g.spacing[1], g.spacing[2]
    );
    for row in grid.samples().chunks(g.dims[2]) {
        let line: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManyBody {
    sigma_nm: [f64; 3],
    center_nm: Option<[f64; 3]>,
    carriers: Vec<[f64; 3]>,
    renormalize: Option<bool>,
    term: Vec<RawTerm>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    spins: String,
    re: f64,
    im: Option<f64>,
}

pub fn parse_manybody_state(text: &str) -> Result<ManyBodyState, ConfigError> {
    let raw: RawManyBody = toml::from_str(text).map_err(|e| {
        format_err(
            e.span().map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1),
            "",
            e.message(),
        )
    })?;
    let center = raw.center_nm.unwrap_or([0.0; 3]);
    let envelope = GaussianEnvelope::new(raw.sigma_nm, center.into())
        .map_err(|e| format_err(None, "sigma_nm", e.to_string()))?;
    let carriers: Vec<Vec3> = raw.carriers.iter().copied().map(Vec3::from).collect();
    let mut terms = Vec::with_capacity(raw.term.len());
    for (i, t) in raw.term.iter().enumerate() {
        let spins = t
            .spins
            .chars()
            .map(|c| match c {
                'u' | 'U' | '+' => Ok(Spin::Up),
                'd' | 'D' | '-' => Ok(Spin::Down),
                other => Err(format_err(None, &format!("term[{i}].spins"), format!("unknown spin `{other}`; use u or d"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        terms.push(SpinTerm::new(spins, Complex64::new(t.re, t.im.unwrap_or(0.0))));
    }
    let normalization = if raw.renormalize.unwrap_or(false) {
        Normalization::Renormalize
    } else {
        Normalization::Strict
    };
    ManyBodyState::new(envelope, carriers, terms, normalization).map_err(|e| format_err(None, "term", e.to_string()))
}
