//! The five subcommands. Each returns data; `run` handles files and exit codes.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use gse_core::bosonic_full::single_polariton_rate_full;
use gse_core::emission::{emission_spectrum, sweep_record, SweepRecord};
use gse_core::fermionic::{single_polariton_rate_fermionic, FermionicModel};
use gse_core::oracle::{exact_transition_elements, ExactTransitions};
use gse_core::{GseError, Model};
use rayon::prelude::*;

use crate::config::{CommandKind, RunConfig};
use crate::output::{fmt_float, gnuplot_script, sweep_csv_string};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_PHYSICS: i32 = 3;
pub const EXIT_TOLERANCE: i32 = 4;
pub const EXIT_ORACLE: i32 = 5;

/// Sum-rule residual accepted by the oracle check.
pub const SUM_RULE_TOL: f64 = 1e-10;

#[derive(Debug)]
pub enum CliError {
    Gse(GseError),
    Io(PathBuf, std::io::Error),
}

impl From<GseError> for CliError {
    fn from(e: GseError) -> Self {
        CliError::Gse(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Gse(GseError::CutoffNotConverged { .. }) => EXIT_ORACLE,
            CliError::Gse(e) if e.is_physics() => EXIT_PHYSICS,
            CliError::Gse(_) | CliError::Io(..) => EXIT_CONFIG,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Gse(e) => write!(f, "{e}"),
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
        }
    }
}

/// Runs `f` on a pool capped by `GSE_NUM_THREADS` when set.
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let threads = std::env::var("GSE_NUM_THREADS").ok().and_then(|v| v.parse::<usize>().ok());
    match threads {
        Some(n) if n > 0 => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        _ => f(),
    }
}

fn evaluate(points: Vec<(Model, f64, u64)>, cfg: &RunConfig) -> Result<Vec<SweepRecord>, GseError> {
    let mut records = with_pool(|| {
        points
            .par_iter()
            .map(|&(model, detuning, n)| {
                // Report the requested sample, not ω_c/ω₀ − 1 after rounding.
                sweep_record(model, &cfg.params_at(detuning, n), cfg.raw_dicke).map(|r| SweepRecord { detuning, ..r })
            })
            .collect::<Result<Vec<_>, _>>()
    })?;
    records.sort_by(|a, b| {
        a.model
            .name()
            .cmp(b.model.name())
            .then(a.detuning.total_cmp(&b.detuning))
            .then(a.n_electrons.cmp(&b.n_electrons))
    });
    Ok(records)
}

/// One record per (model, detuning) at the first N of the range.
pub fn run_sweep(cfg: &RunConfig) -> Result<Vec<SweepRecord>, GseError> {
    let n = cfg.n.samples()[0];
    let points = cfg.models.iter().flat_map(|&m| cfg.detuning.samples().into_iter().map(move |d| (m, d, n))).collect();
    evaluate(points, cfg)
}

/// One record per (model, detuning, N).
pub fn run_grid(cfg: &RunConfig) -> Result<Vec<SweepRecord>, GseError> {
    let ns = cfg.n.samples();
    let mut points = Vec::new();
    for &m in &cfg.models {
        for d in cfg.detuning.samples() {
            points.extend(ns.iter().map(|&n| (m, d, n)));
        }
    }
    evaluate(points, cfg)
}

/// |a − b|/max(|a|, |b|), zero when both vanish.
pub fn relative_deviation(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub detuning: f64,
    pub pair: (Model, Model),
    pub dev_plus: f64,
    pub dev_minus: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub rows: Vec<CompareRow>,
    pub tolerance: f64,
    pub max_deviation: f64,
    pub mean_deviation: f64,
}

impl CompareReport {
    /// Strict comparison: a zero tolerance always fails.
    pub fn within_tolerance(&self) -> bool {
        self.max_deviation < self.tolerance
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("detuning,pair,dev_p,dev_m\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{}-{},{},{}",
                fmt_float(r.detuning),
                r.pair.0.name(),
                r.pair.1.name(),
                fmt_float(r.dev_plus),
                fmt_float(r.dev_minus)
            );
        }
        s
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{:>10} {:>20} {:>12} {:>12}", "detuning", "pair", "dev_p", "dev_m");
        for r in &self.rows {
            let pair = format!("{}-{}", r.pair.0.name(), r.pair.1.name());
            let _ = writeln!(s, "{:>10.4} {:>20} {:>12.4e} {:>12.4e}", r.detuning, pair, r.dev_plus, r.dev_minus);
        }
        let _ = writeln!(s, "max deviation  {:.4e}", self.max_deviation);
        let _ = writeln!(s, "mean deviation {:.4e}", self.mean_deviation);
        let verdict = if self.within_tolerance() { "within tolerance" } else { "OUT OF TOLERANCE" };
        let _ = writeln!(s, "tolerance      {:.4e}: {verdict}", self.tolerance);
        s
    }
}

/// Pairwise single-polariton rate deviations over the detuning range.
pub fn run_compare(cfg: &RunConfig) -> Result<CompareReport, GseError> {
    let records = run_sweep(cfg)?;
    let models = &cfg.models;
    let mut rows = Vec::new();
    for d in cfg.detuning.samples() {
        let at = |m: Model| records.iter().find(|r| r.model == m && r.detuning == d);
        for (i, &a) in models.iter().enumerate() {
            for &b in &models[i + 1..] {
                if let (Some(ra), Some(rb)) = (at(a), at(b)) {
                    rows.push(CompareRow {
                        detuning: d,
                        pair: (a, b),
                        dev_plus: relative_deviation(ra.plus.rate_em, rb.plus.rate_em),
                        dev_minus: relative_deviation(ra.minus.rate_em, rb.minus.rate_em),
                    });
                }
            }
        }
    }
    let devs: Vec<f64> = rows.iter().flat_map(|r| [r.dev_plus, r.dev_minus]).collect();
    let max_deviation = devs.iter().copied().fold(0.0, f64::max);
    let mean_deviation = if devs.is_empty() { 0.0 } else { devs.iter().sum::<f64>() / devs.len() as f64 };
    let g = records.first().map_or(0.0, |r| r.g);
    Ok(CompareReport { rows, tolerance: cfg.effective_tolerance(g), max_deviation, mean_deviation })
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleRow {
    pub n_electrons: u64,
    pub exact: ExactTransitions,
    /// Fermionic first-order rates (Γ⁺, Γ⁻).
    pub fermionic: (f64, f64),
    /// Full bosonic rates (Γ⁺, Γ⁻).
    pub bosonic: (f64, f64),
    /// Fermionic-vs-exact relative errors.
    pub error: (f64, f64),
    pub tolerance: f64,
}

impl OracleRow {
    pub fn passed(&self) -> bool {
        self.error.0 <= self.tolerance
            && self.error.1 <= self.tolerance
            && self.exact.sum_rule_residual() <= SUM_RULE_TOL
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub rows: Vec<OracleRow>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(OracleRow::passed)
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:>3} {:>6} {:>6} {:>14} {:>14} {:>14} {:>10} {:>10}",
            "N", "cutoff", "branch", "exact", "fermionic", "bosonic", "rel_err", "tol"
        );
        for r in &self.rows {
            for (label, exact, ferm, bos, err) in [
                ("+", r.exact.single.0, r.fermionic.0, r.bosonic.0, r.error.0),
                ("-", r.exact.single.1, r.fermionic.1, r.bosonic.1, r.error.1),
            ] {
                let _ = writeln!(
                    s,
                    "{:>3} {:>6} {:>6} {:>14.6e} {:>14.6e} {:>14.6e} {:>10.3e} {:>10.3e}",
                    r.n_electrons, r.exact.photon_cutoff, label, exact, ferm, bos, err, r.tolerance
                );
            }
            let _ = writeln!(
                s,
                "{:>3} sum rule {:.12} residual {:.3e} {}",
                r.n_electrons,
                r.exact.sum_rule,
                r.exact.sum_rule_residual(),
                if r.passed() { "ok" } else { "FAIL" }
            );
        }
        s
    }
}

/// Exact diagonalization against the fermionic and full bosonic rates,
/// tolerance 10·g² on the fermionic single-polariton rates.
pub fn run_oracle(cfg: &RunConfig) -> Result<OracleReport, GseError> {
    let detuning = cfg.detuning.start;
    let rows = with_pool(|| {
        cfg.n
            .samples()
            .par_iter()
            .map(|&n| {
                let params = cfg.params_at(detuning, n);
                params.validate()?;
                let dicke = params.dicke(cfg.raw_dicke);
                let exact = exact_transition_elements(&dicke, cfg.photon_cutoff)?;
                let model = FermionicModel::from_dicke(&dicke, params.omega_1().unwrap_or(0.0));
                let fermionic = single_polariton_rate_fermionic(&model, n)?;
                let bosonic = single_polariton_rate_full(dicke.omega_0, dicke.omega_c, dicke.g_minus_one())?;
                let g = dicke.g() / dicke.omega_0;
                Ok(OracleRow {
                    n_electrons: n,
                    error: (
                        relative_deviation(fermionic.0, exact.single.0),
                        relative_deviation(fermionic.1, exact.single.1),
                    ),
                    exact,
                    fermionic,
                    bosonic,
                    tolerance: 10.0 * g * g,
                })
            })
            .collect::<Result<Vec<_>, GseError>>()
    })?;
    Ok(OracleReport { rows })
}

/// Frequencies spanning both peaks with a 10Γ_cav margin.
pub fn spectrum_grid(records: &[SweepRecord], gamma_cav: f64, points: usize) -> Vec<f64> {
    let freqs: Vec<f64> = records.iter().flat_map(|r| [r.plus.frequency(), r.minus.frequency()]).flatten().collect();
    let lo = freqs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = freqs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (lo, hi) = if lo.is_finite() { (lo - 10.0 * gamma_cav, hi + 10.0 * gamma_cav) } else { (0.0, 2.0) };
    (0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64).collect()
}

pub const SPECTRUM_POINTS: usize = 2001;

/// (model, frequency, intensity) rows at the first detuning and N.
pub fn run_spectrum(cfg: &RunConfig) -> Result<String, GseError> {
    let n = cfg.n.samples()[0];
    let params = cfg.params_at(cfg.detuning.start, n);
    let records = cfg.models.iter().map(|&m| sweep_record(m, &params, cfg.raw_dicke)).collect::<Result<Vec<_>, _>>()?;
    let grid = spectrum_grid(&records, params.gamma_cav, SPECTRUM_POINTS);
    let mut s = String::from("model,frequency,intensity\n");
    for r in &records {
        for (w, i) in grid.iter().zip(emission_spectrum(r, params.gamma_cav, &grid)?) {
            let _ = writeln!(s, "{},{},{}", r.model.name(), fmt_float(*w), fmt_float(i));
        }
    }
    Ok(s)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

/// Writes `contents` to the configured output, or stdout without one.
fn emit(cfg: &RunConfig, contents: &str) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => {
            write_file(path, contents)?;
            if cfg.emit_gnuplot {
                write_file(&path.with_extension("gp"), &gnuplot_script(path, &cfg.models))?;
            }
            Ok(())
        }
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

/// Runs a resolved configuration and returns the process exit code.
pub fn run(cfg: &RunConfig) -> Result<i32, CliError> {
    match cfg.command {
        CommandKind::Sweep => emit(cfg, &sweep_csv_string(&run_sweep(cfg)?))?,
        CommandKind::Grid => emit(cfg, &sweep_csv_string(&run_grid(cfg)?))?,
        CommandKind::Spectrum => emit(cfg, &run_spectrum(cfg)?)?,
        CommandKind::Compare => {
            let report = run_compare(cfg)?;
            eprint!("{}", report.summary());
            if let Some(path) = &cfg.out {
                write_file(path, &report.to_csv())?;
            }
            if !report.within_tolerance() {
                return Ok(EXIT_TOLERANCE);
            }
        }
        CommandKind::Oracle => {
            let report = run_oracle(cfg)?;
            print!("{}", report.summary());
            if !report.passed() {
                return Ok(EXIT_ORACLE);
            }
        }
    }
    Ok(EXIT_OK)
}
