//! Subcommand implementations. Each returns a [`Table`]; scans fan out over
//! a worker pool and collect in grid order, so results do not depend on the
//! number of threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rayon::ThreadPool;

use qsubrad_core::diagnostics::{validate_assumptions, AssumptionReport};
use qsubrad_core::emission::{match_delta_k, pair_compare as core_pair_compare, rate_on_cone, spectrum_point, EmissionPoint};
use qsubrad_core::kinematics::{cherenkov_angle, single_particle_rate};
use qsubrad_core::manybody::{manybody_rate as core_manybody_rate, ManyBodyState};
use qsubrad_core::paircorr::{PairKind, PairState};
use qsubrad_core::quadrature::{numeric_density_ft, QuadratureOracle, GRID_PHASE_LIMIT};
use qsubrad_core::wavepackets::{density_ft, overlap_ft, GaussianEnvelope, ModeWave, Spin};
use qsubrad_core::{Complex64, Vec3};

use crate::config::{sha256_hex, DeltaKSpec, RunConfig, StateSpec};
use crate::error::CliError;
use crate::formats::parse_density_grid;
use crate::output::{format_number, Table};
use crate::VERSION;

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Worker threads; `None` lets the pool pick.
    pub threads: Option<usize>,
    /// Turn assumption warnings into errors.
    pub strict: bool,
}

pub fn build_pool(threads: Option<usize>) -> Result<ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Pool(e.to_string()))
}

fn base_metadata(table: &mut Table, command: &str, cfg: &RunConfig, digits: usize) {
    table.meta("qsubrad_version", VERSION);
    table.meta("command", command);
    table.meta("config_sha256", &cfg.hash);
    table.meta("beta", format_number(cfg.medium.beta(), digits));
}

fn cone_metadata(table: &mut Table, cfg: &RunConfig, omega_ev: f64, digits: usize) {
    if let Ok(geo) = cherenkov_angle(&cfg.medium, omega_ev) {
        table.meta("omega_eV", format_number(omega_ev, digits));
        table.meta("theta_c_rad", format_number(geo.theta_c, digits));
        if let Ok(g0) = single_particle_rate(&cfg.medium, omega_ev) {
            table.meta("gamma0", format_number(g0, digits));
        }
    }
}

fn diagnostics(table: &mut Table, report: &AssumptionReport, opts: RunOptions) -> Result<(), CliError> {
    table.meta("diagnostics", report.to_string());
    if opts.strict && !report.all_ok() {
        return Err(CliError::Assumption(report.to_string()));
    }
    Ok(())
}

fn resolve_delta_k(cfg: &RunConfig, state: &StateSpec, default_omega: f64) -> Result<Vec3, CliError> {
    match state.delta_k {
        DeltaKSpec::Explicit(v) => Ok(v),
        DeltaKSpec::Matched(mode) => Ok(match_delta_k(&cfg.medium, state.match_omega_ev.unwrap_or(default_omega), mode)?),
    }
}

fn shared_pair(cfg: &RunConfig, env: GaussianEnvelope, dk: Vec3, kind: PairKind) -> Result<PairState, CliError> {
    PairState::shared(env, dk, dk, kind).map_err(|e| cfg.field_error("state", "delta_k", e.to_string()).into())
}

/// Classical mixture followed by one Bell state per configured phase.
fn scan_states(cfg: &RunConfig, default_omega: f64) -> Result<(Vec<PairState>, Vec<String>, Vec3), CliError> {
    let env = cfg.require_envelope()?;
    let state = cfg.require_state()?;
    let dk = resolve_delta_k(cfg, state, default_omega)?;
    let mut states = vec![shared_pair(cfg, env, dk, PairKind::ClassicalMixture)?];
    let mut columns = vec!["braces_classical".to_string()];
    for z in &state.zetas {
        states.push(shared_pair(cfg, env, dk, PairKind::Bell { zeta: z.value })?);
        columns.push(z.column());
    }
    Ok((states, columns, dk))
}

pub fn cone_scan(cfg: &RunConfig, opts: RunOptions) -> Result<Table, CliError> {
    let cone = cfg.require_cone()?;
    let (states, value_columns, _) = scan_states(cfg, cone.omega_ev)?;
    let digits = cfg.output.precision;
    let mut columns = vec!["phi_rad".to_string()];
    columns.extend(value_columns);
    let mut table = Table::new(columns);
    base_metadata(&mut table, "cone-scan", cfg, digits);
    cone_metadata(&mut table, cfg, cone.omega_ev, digits);
    if let Some(w0) = states[0].resonance_energy(cfg.medium.beta()) {
        table.meta("omega0_eV", format_number(w0, digits));
    }
    diagnostics(&mut table, &validate_assumptions(&states[0], &cfg.medium, cone.omega_ev), opts)?;

    cherenkov_angle(&cfg.medium, cone.omega_ev)?;
    let pool = build_pool(opts.threads)?;
    table.rows = pool.install(|| {
        cone.phis
            .par_iter()
            .map(|&phi| {
                let point = EmissionPoint::new(phi, cone.omega_ev);
                let mut row = vec![phi, rate_on_cone(&states[0], &cfg.medium, point)?.braces_classical];
                for s in &states[1..] {
                    row.push(rate_on_cone(s, &cfg.medium, point)?.braces_quantum);
                }
                Ok(row)
            })
            .collect::<Result<Vec<_>, qsubrad_core::Error>>()
    })?;
    Ok(table)
}

pub fn spectrum_scan(cfg: &RunConfig, opts: RunOptions) -> Result<Table, CliError> {
    let spec = cfg.require_spectrum()?;
    let (states, value_columns, _) = scan_states(cfg, spec.omega0_ev)?;
    let digits = cfg.output.precision;
    let mut columns = vec!["omega_over_omega0".to_string(), "omega_eV".to_string()];
    columns.extend(value_columns);
    columns.push("allowed".to_string());
    let mut table = Table::new(columns);
    base_metadata(&mut table, "spectrum-scan", cfg, digits);
    cone_metadata(&mut table, cfg, spec.omega0_ev, digits);
    table.meta("omega0_eV", format_number(spec.omega0_ev, digits));
    table.meta("phi_rad", format_number(spec.phi, digits));
    diagnostics(&mut table, &validate_assumptions(&states[0], &cfg.medium, spec.omega0_ev), opts)?;

    let pool = build_pool(opts.threads)?;
    table.rows = pool.install(|| {
        spec.ratios
            .par_iter()
            .zip(spec.omegas.par_iter())
            .map(|(&ratio, &omega)| {
                let classical = spectrum_point(&states[0], &cfg.medium, spec.phi, omega)?;
                let mut row = vec![ratio, omega, classical.rate.braces_classical];
                for s in &states[1..] {
                    row.push(spectrum_point(s, &cfg.medium, spec.phi, omega)?.rate.braces_quantum);
                }
                row.push(if classical.allowed { 1.0 } else { 0.0 });
                Ok(row)
            })
            .collect::<Result<Vec<_>, qsubrad_core::Error>>()
    })?;
    Ok(table)
}

pub fn pair_compare(cfg: &RunConfig, opts: RunOptions) -> Result<Table, CliError> {
    let cone = cfg.require_cone()?;
    let env = cfg.require_envelope()?;
    let state = cfg.require_state()?;
    let dk = resolve_delta_k(cfg, state, cone.omega_ev)?;
    let shifted = env
        .with_center(env.center() + cfg.compare.offset)
        .map_err(|e| cfg.field_error("compare", "offset_nm", e.to_string()))?;
    let m1 = ModeWave::new(env, dk, Spin::Up)?;
    let m2 = ModeWave::new(shifted, Vec3::ZERO, Spin::Down)?;
    let build = |kind| PairState::new(m1, m2, kind).map_err(|e| CliError::from(cfg.field_error("state", "delta_k", e.to_string())));
    let product = build(PairKind::Product)?;
    let bell = build(PairKind::Bell {
        zeta: cfg.compare.zeta.value,
    })?;

    let digits = cfg.output.precision;
    let columns = ["phi_rad", "braces_product", "braces_bell", "classical_interference", "entanglement_term"];
    let mut table = Table::new(columns.iter().map(|c| c.to_string()).collect());
    base_metadata(&mut table, "pair-compare", cfg, digits);
    cone_metadata(&mut table, cfg, cone.omega_ev, digits);
    table.meta("bell_zeta", &cfg.compare.zeta.label);
    diagnostics(&mut table, &validate_assumptions(&bell, &cfg.medium, cone.omega_ev), opts)?;

    let pool = build_pool(opts.threads)?;
    table.rows = pool.install(|| {
        cone.phis
            .par_iter()
            .map(|&phi| {
                let c = core_pair_compare(&product, &bell, &cfg.medium, EmissionPoint::new(phi, cone.omega_ev))?;
                Ok(vec![
                    phi,
                    c.product.braces_quantum,
                    c.bell.braces_quantum,
                    c.classical_interference,
                    c.entanglement_term,
                ])
            })
            .collect::<Result<Vec<_>, qsubrad_core::Error>>()
    })?;
    Ok(table)
}

pub fn manybody_rate(cfg: &RunConfig, state: &ManyBodyState, state_text: &str, opts: RunOptions) -> Result<Table, CliError> {
    let cone = cfg.require_cone()?;
    let digits = cfg.output.precision;
    let columns = ["phi_rad", "braces", "incoherent", "coherent", "imag_residue"];
    let mut table = Table::new(columns.iter().map(|c| c.to_string()).collect());
    base_metadata(&mut table, "manybody-rate", cfg, digits);
    table.meta("state_sha256", sha256_hex(state_text.as_bytes()));
    table.meta("particles", state.particles().to_string());
    cone_metadata(&mut table, cfg, cone.omega_ev, digits);
    diagnostics(&mut table, &validate_assumptions(state, &cfg.medium, cone.omega_ev), opts)?;

    cherenkov_angle(&cfg.medium, cone.omega_ev)?;
    let pool = build_pool(opts.threads)?;
    table.rows = pool.install(|| {
        cone.phis
            .par_iter()
            .map(|&phi| {
                let r = core_manybody_rate(state, &cfg.medium, EmissionPoint::new(phi, cone.omega_ev))?;
                Ok(vec![phi, r.braces, r.incoherent, r.coherent, r.imag_residue])
            })
            .collect::<Result<Vec<_>, qsubrad_core::Error>>()
    })?;
    Ok(table)
}

/// Result of `oracle-check`: the comparison table and whether every
/// relative error stayed within tolerance.
#[derive(Debug, Clone)]
pub struct OracleOutcome {
    pub table: Table,
    pub max_error: f64,
    pub passed: bool,
}

const CHECK_DENSITY: f64 = 0.0;
const CHECK_OVERLAP: f64 = 1.0;
const CHECK_GRID: f64 = 2.0;

/// Uniform point in the unit ball.
fn unit_ball(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let u: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..=1.0));
        if u.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
            return u;
        }
    }
}

/// Momentum with |q_a σ_a| inside a ball of radius `r`.
fn scaled_q(rng: &mut ChaCha8Rng, sigma: [f64; 3], r: f64) -> Vec3 {
    let u = unit_ball(rng);
    Vec3::new(u[0] * r / sigma[0], u[1] * r / sigma[1], u[2] * r / sigma[2])
}

fn comparison_row(check: f64, q: Vec3, analytic: Complex64, numeric: Complex64) -> Vec<f64> {
    let err = (analytic - numeric).norm() / analytic.norm();
    vec![check, q.x, q.y, q.z, analytic.re, analytic.im, numeric.re, numeric.im, err]
}

/// Analytic transforms against the quadrature oracle at random momenta, and
/// optionally against a sampled density grid.
pub fn oracle_check(cfg: &RunConfig) -> Result<OracleOutcome, CliError> {
    let env = cfg.require_envelope()?;
    let spec = &cfg.oracle;
    let oracle = QuadratureOracle::new(spec.nodes, spec.span_sigma)
        .map_err(|e| cfg.field_error("oracle", "nodes", e.to_string()))?;
    let sigma = env.sigma();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut rows = Vec::new();

    for _ in 0..spec.samples {
        let q = scaled_q(&mut rng, sigma, spec.max_q_sigma);
        rows.push(comparison_row(CHECK_DENSITY, q, density_ft(&env, q), oracle.density_ft(&env, q)?));
    }
    for _ in 0..spec.samples {
        // the overlap depends on q - Δk; keep both inside the sampling ball
        let s = scaled_q(&mut rng, sigma, spec.max_q_sigma);
        let dk = scaled_q(&mut rng, sigma, spec.max_q_sigma);
        let u = unit_ball(&mut rng);
        let offset = Vec3::new(u[0] * sigma[0], u[1] * sigma[1], u[2] * sigma[2]);
        let a = ModeWave::new(env, dk, Spin::Up)?;
        let b = ModeWave::new(env.with_center(env.center() + offset)?, Vec3::ZERO, Spin::Down)?;
        let q = s + dk;
        rows.push(comparison_row(CHECK_OVERLAP, q, overlap_ft(&a, &b, q)?, oracle.overlap_ft(&a, &b, q)?));
    }
    if let Some(path) = &spec.density_grid {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        let grid = parse_density_grid(&text).map_err(|mut e| {
            e.field = format!("{}: {}", path.display(), e.field);
            e
        })?;
        let spacing = grid.geometry().spacing;
        for _ in 0..spec.samples {
            let q = scaled_q(&mut rng, sigma, spec.max_q_sigma).to_array();
            // shrink toward the origin until every axis is resolved by the grid
            let scale = (0..3)
                .map(|a| 0.99 * GRID_PHASE_LIMIT / (q[a].abs() * spacing[a]))
                .fold(1.0, f64::min);
            let q = Vec3::from(q) * scale;
            rows.push(comparison_row(CHECK_GRID, q, density_ft(&env, q), numeric_density_ft(&grid, q)?));
        }
    }

    let digits = cfg.output.precision;
    let columns = [
        "check", "q_x", "q_y", "q_z", "analytic_re", "analytic_im", "numeric_re", "numeric_im", "rel_error",
    ];
    let mut table = Table::new(columns.iter().map(|c| c.to_string()).collect());
    base_metadata(&mut table, "oracle-check", cfg, digits);
    table.meta("checks", "0=density_ft vs quadrature, 1=overlap_ft vs quadrature, 2=density_ft vs grid");
    table.meta("tolerance", format_number(spec.tolerance, digits));
    let max_error = rows.iter().map(|r| r[8]).fold(0.0, f64::max);
    let passed = rows.iter().all(|r| r[8] <= spec.tolerance);
    table.meta("max_rel_error", format_number(max_error, digits));
    table.meta("result", if passed { "pass" } else { "fail" });
    table.rows = rows;
    Ok(OracleOutcome {
        table,
        max_error,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::Path;

    fn cfg(extra: &str) -> RunConfig {
        let text = format!(
            "[medium]\nn = 2.0\nbeta = 0.7\n[envelope]\nwidths_nm = [200.0, 200.0, 1.0]\n[state]\ndelta_k = \"transverse\"\n[cone]\nomega_eV = 2.0\nphi_count = 8\n{extra}"
        );
        RunConfig::parse(&text, Path::new(".")).unwrap()
    }

    #[test]
    fn cone_scan_rows() {
        let t = cone_scan(&cfg(""), RunOptions::default()).unwrap();
        assert_eq!(t.columns, ["phi_rad", "braces_classical", "braces_zeta0", "braces_zetapi2", "braces_zetapi"]);
        assert_eq!(t.rows.len(), 8);
        let r = &t.rows[0];
        assert!((r[1] - 2.00063776).abs() < 1e-8);
        assert!((r[2] - 1.00084739).abs() < 1e-8);
        assert!((r[4] - 3.00042813).abs() < 1e-8);
        assert!(t.metadata.iter().any(|(k, _)| k == "gamma0"));
        assert!(!t.metadata.iter().any(|(k, _)| k == "omega0_eV"));
    }

    #[test]
    fn zero_delta_k_is_a_config_error() {
        let c = cfg("").clone();
        let text = "[medium]\nn = 2.0\nbeta = 0.7\n[envelope]\nwidths_nm = [200.0, 200.0, 1.0]\n[state]\ndelta_k = [0.0, 0.0, 0.0]\n[cone]\nomega_eV = 2.0\nphi_count = 8\n";
        let zero = RunConfig::parse(text, Path::new(".")).unwrap();
        let err = cone_scan(&zero, RunOptions::default()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("state.delta_k"), "{err}");
        assert!(cone_scan(&c, RunOptions::default()).is_ok());
    }

    #[test]
    fn forbidden_cone_is_physics_error() {
        let text = "[medium]\nn = 1.2\nbeta = 0.7\n[envelope]\nwidths_nm = [200.0, 200.0, 1.0]\n[state]\ndelta_k = [0.01, 0.0, 0.0]\n[cone]\nomega_eV = 2.0\nphi_count = 8\n";
        let c = RunConfig::parse(text, Path::new(".")).unwrap();
        assert_eq!(cone_scan(&c, RunOptions::default()).unwrap_err().exit_code(), 3);
    }

    #[test]
    fn strict_mode_rejects_warnings() {
        let text = "[medium]\nn = 2.0\nbeta = 0.7\n[envelope]\nwidths_nm = [1.0, 1.0, 1.0]\n[state]\ndelta_k = [0.01, 0.0, 0.0]\n[cone]\nomega_eV = 2.0\nphi_count = 4\n";
        let c = RunConfig::parse(text, Path::new(".")).unwrap();
        assert!(cone_scan(&c, RunOptions::default()).is_ok());
        let err = cone_scan(&c, RunOptions { threads: None, strict: true }).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn pair_compare_without_offset() {
        let t = pair_compare(&cfg(""), RunOptions::default()).unwrap();
        let r = &t.rows[0];
        assert!((r[1] - 2.0).abs() < 1e-3);
        assert!((r[2] - 2.0).abs() > 0.9);
    }

    #[test]
    fn oracle_passes_by_default() {
        let out = oracle_check(&cfg("[oracle]\nsamples = 20\n")).unwrap();
        assert!(out.passed, "max error {}", out.max_error);
        assert_eq!(out.table.rows.len(), 40);
    }
}
