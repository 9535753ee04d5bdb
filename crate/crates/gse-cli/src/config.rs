//! Run configuration: `key = value` files with `[section]` headers, merged
//! under command-line flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use gse_core::{GseError, Model, Result, SystemParams};

/// Default electron number when neither `--n` nor `--n-range` is given.
pub const DEFAULT_N: u64 = 10_000;

#[derive(Debug, Parser)]
#[command(name = "gse", version, about = "Ground-state electroluminescence rates and sweeps")]
pub struct Cli {
    /// Config file (`key = value` lines, optional `[section]` headers).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum Command {
    /// Rates over a detuning range at fixed coupling.
    Sweep(Flags),
    /// Rates over detuning × N at fixed single-electron coupling.
    Grid(Flags),
    /// Pairwise deviations between the model tiers.
    Compare(Flags),
    /// Exact diagonalization against the fermionic and bosonic rates.
    Oracle(Flags),
    /// Two-Lorentzian emission spectrum at one parameter point.
    Spectrum(Flags),
}

impl Command {
    pub fn flags(&self) -> &Flags {
        match self {
            Command::Sweep(f) | Command::Grid(f) | Command::Compare(f) | Command::Oracle(f) | Command::Spectrum(f) => f,
        }
    }

    pub fn kind(&self) -> CommandKind {
        match self {
            Command::Sweep(_) => CommandKind::Sweep,
            Command::Grid(_) => CommandKind::Grid,
            Command::Compare(_) => CommandKind::Compare,
            Command::Oracle(_) => CommandKind::Oracle,
            Command::Spectrum(_) => CommandKind::Spectrum,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Sweep,
    Grid,
    Compare,
    Oracle,
    Spectrum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelChoice {
    Pert,
    Full,
    Fermionic,
    All,
}

impl ModelChoice {
    pub fn models(self) -> Vec<Model> {
        match self {
            ModelChoice::Pert => vec![Model::Pert],
            ModelChoice::Full => vec![Model::Full],
            ModelChoice::Fermionic => vec![Model::Fermionic],
            ModelChoice::All => Model::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Args)]
pub struct Flags {
    #[arg(long, value_enum)]
    pub model: Option<ModelChoice>,
    /// Collective coupling g_N/ω₀.
    #[arg(long)]
    pub g: Option<f64>,
    /// Single-electron coupling χ/ω₀; g_N = χ√N.
    #[arg(long)]
    pub chi: Option<f64>,
    /// Number of electrons N.
    #[arg(long)]
    pub n: Option<u64>,
    /// `start:stop:count[:log|:lin]`.
    #[arg(long, value_parser = NRange::parse_arg)]
    pub n_range: Option<NRange>,
    /// `start:stop:step` of (ω_c − ω₀)/ω₀.
    #[arg(long, value_parser = Range::parse_arg, allow_hyphen_values = true)]
    pub detuning: Option<Range>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Relative tolerance for `compare` (default 5·g/ω₀).
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Starting photon cutoff for `oracle`; raised until converged.
    #[arg(long)]
    pub photon_cutoff: Option<usize>,
    /// Absolute upper-band energy ω₂; enables the lead gates.
    #[arg(long)]
    pub omega2_ref: Option<f64>,
    /// Treat ω_c and χ as already renormalized.
    #[arg(long)]
    pub raw_dicke: bool,
    /// Write a gnuplot script next to the CSV.
    #[arg(long)]
    pub emit_gnuplot: bool,
}

/// Inclusive `start:stop:step` range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range {
    pub fn single(value: f64) -> Self {
        Self { start: value, stop: value, step: 1.0 }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num =
            |t: &str| t.trim().parse::<f64>().map_err(|_| GseError::Config(format!("bad number '{t}' in range '{s}'")));
        let range = match parts.as_slice() {
            [v] => Self::single(num(v)?),
            [a, b, c] => Self { start: num(a)?, stop: num(b)?, step: num(c)? },
            _ => return Err(GseError::Config(format!("range '{s}' is not start:stop:step"))),
        };
        range.validate()?;
        Ok(range)
    }

    fn parse_arg(s: &str) -> std::result::Result<Self, String> {
        Self::parse(s).map_err(|e| e.to_string())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite() && self.step.is_finite()) {
            return Err(GseError::Config("range bounds must be finite".into()));
        }
        if self.step <= 0.0 {
            return Err(GseError::Config(format!("range step {} must be positive", self.step)));
        }
        if self.stop < self.start {
            return Err(GseError::Config(format!("empty range {}:{}", self.start, self.stop)));
        }
        Ok(())
    }

    /// Samples start + i·step, the last within step/10⁶ of stop, snapped to
    /// 12 decimals so that `-0.5:0.5:0.01` yields 0.1 rather than 0.09999….
    pub fn samples(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-6).floor() as usize + 1;
        (0..count)
            .map(|i| {
                let x = self.start + i as f64 * self.step;
                format!("{x:.12}").parse().unwrap_or(x)
            })
            .collect()
    }
}

/// Electron numbers between `start` and `stop`, `count` samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NRange {
    pub start: u64,
    pub stop: u64,
    pub count: usize,
    pub log: bool,
}

impl NRange {
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || GseError::Config(format!("N range '{s}' is not start:stop:count[:log|:lin]"));
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let int = |t: &str| t.parse::<u64>().map_err(|_| bad());
        let (start, stop, count, log) = match parts.as_slice() {
            [a, b] => (int(a)?, int(b)?, None, false),
            [a, b, c] => (int(a)?, int(b)?, Some(int(c)?), true),
            [a, b, c, "log"] => (int(a)?, int(b)?, Some(int(c)?), true),
            [a, b, c, "lin"] => (int(a)?, int(b)?, Some(int(c)?), false),
            _ => return Err(bad()),
        };
        if start == 0 || stop < start {
            return Err(GseError::Config(format!("empty N range {start}:{stop}")));
        }
        let count = count.map_or((stop - start + 1) as usize, |c| c as usize);
        if count == 0 {
            return Err(GseError::Config("N range needs at least one sample".into()));
        }
        Ok(Self { start, stop, count, log })
    }

    fn parse_arg(s: &str) -> std::result::Result<Self, String> {
        Self::parse(s).map_err(|e| e.to_string())
    }

    pub fn single(n: u64) -> Self {
        Self { start: n, stop: n, count: 1, log: false }
    }

    /// Rounded, strictly increasing samples.
    pub fn samples(&self) -> Vec<u64> {
        if self.count == 1 || self.start == self.stop {
            return vec![self.start];
        }
        let (a, b) = (self.start as f64, self.stop as f64);
        let last = (self.count - 1) as f64;
        let mut out: Vec<u64> = (0..self.count)
            .map(|i| {
                let t = i as f64 / last;
                let x = if self.log { a * (b / a).powf(t) } else { a + (b - a) * t };
                x.round() as u64
            })
            .collect();
        out.dedup();
        out
    }
}

/// Fully resolved configuration of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub models: Vec<Model>,
    pub detuning: Range,
    pub g: Option<f64>,
    pub chi: Option<f64>,
    pub n: NRange,
    pub out: Option<PathBuf>,
    pub tolerance: Option<f64>,
    pub photon_cutoff: usize,
    pub raw_dicke: bool,
    pub emit_gnuplot: bool,
    /// Reservoir and loss constants; ω_c, χ and N are set per sample.
    pub system: SystemParams,
}

impl RunConfig {
    pub fn new(command: CommandKind) -> Self {
        let (g, n) = match command {
            CommandKind::Oracle => (Some(0.02), NRange { start: 2, stop: 4, count: 3, log: false }),
            _ => (None, NRange::single(DEFAULT_N)),
        };
        Self {
            command,
            models: Model::ALL.to_vec(),
            detuning: match command {
                CommandKind::Sweep | CommandKind::Grid | CommandKind::Compare => {
                    Range { start: -0.5, stop: 0.5, step: 0.01 }
                }
                CommandKind::Oracle | CommandKind::Spectrum => Range::single(0.0),
            },
            g,
            chi: None,
            n,
            out: None,
            tolerance: None,
            photon_cutoff: gse_core::oracle::DEFAULT_CUTOFF,
            raw_dicke: false,
            emit_gnuplot: false,
            system: SystemParams::default(),
        }
    }

    /// Defaults, then `file`, then `flags`.
    pub fn resolve(command: &Command, file: Option<&Path>) -> Result<Self> {
        let mut cfg = Self::new(command.kind());
        if let Some(path) = file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| GseError::Config(format!("cannot read {}: {e}", path.display())))?;
            cfg.apply_file(&parse_config_text(&text)?)?;
        }
        cfg.apply_flags(command.flags());
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply_flags(&mut self, f: &Flags) {
        if let Some(m) = f.model {
            self.models = m.models();
        }
        if f.g.is_some() {
            self.g = f.g;
            self.chi = None;
        }
        if f.chi.is_some() {
            self.chi = f.chi;
            self.g = None;
        }
        if let Some(n) = f.n {
            self.n = NRange::single(n);
        }
        if let Some(r) = f.n_range {
            self.n = r;
        }
        if let Some(d) = f.detuning {
            self.detuning = d;
        }
        if f.out.is_some() {
            self.out = f.out.clone();
        }
        if f.tolerance.is_some() {
            self.tolerance = f.tolerance;
        }
        if let Some(c) = f.photon_cutoff {
            self.photon_cutoff = c;
        }
        if f.omega2_ref.is_some() {
            self.system.omega_2_ref = f.omega2_ref;
        }
        self.raw_dicke |= f.raw_dicke;
        self.emit_gnuplot |= f.emit_gnuplot;
    }

    /// Applies `section.key` entries; unknown keys are rejected.
    pub fn apply_file(&mut self, entries: &BTreeMap<String, String>) -> Result<()> {
        for (key, value) in entries {
            let bare = key.rsplit('.').next().unwrap_or(key);
            let float = || value.parse::<f64>().map_err(|_| bad_value(key, value));
            let boolean = || match value.as_str() {
                "true" | "yes" | "1" => Ok(true),
                "false" | "no" | "0" => Ok(false),
                _ => Err(bad_value(key, value)),
            };
            match bare {
                "model" => {
                    self.models = ModelChoice::from_str(value, true).map_err(|_| bad_value(key, value))?.models();
                }
                "g" => {
                    self.g = Some(float()?);
                    self.chi = None;
                }
                "chi" => {
                    self.chi = Some(float()?);
                    self.g = None;
                }
                "n" => self.n = NRange::single(value.parse().map_err(|_| bad_value(key, value))?),
                "n_range" => self.n = NRange::parse(value)?,
                "detuning" => self.detuning = Range::parse(value)?,
                "out" => self.out = Some(PathBuf::from(value)),
                "tolerance" => self.tolerance = Some(float()?),
                "photon_cutoff" => self.photon_cutoff = value.parse().map_err(|_| bad_value(key, value))?,
                "raw_dicke" => self.raw_dicke = boolean()?,
                "emit_gnuplot" => self.emit_gnuplot = boolean()?,
                "omega_0" => self.system.omega_0 = float()?,
                "omega2_ref" | "omega_2_ref" => self.system.omega_2_ref = Some(float()?),
                "n_sites_total" => {
                    self.system.n_sites_total = value.parse().map_err(|_| bad_value(key, value))?;
                }
                "gamma_el" => self.system.gamma_el = float()?,
                "gamma_cav" => self.system.gamma_cav = float()?,
                "gamma_dark_plus" => self.system.gamma_dark_plus = float()?,
                "gamma_dark_minus" => self.system.gamma_dark_minus = float()?,
                "mu_l" => self.system.mu_l = float()?,
                "mu_r" => self.system.mu_r = float()?,
                _ => return Err(GseError::Config(format!("unknown config key '{key}'"))),
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.detuning.validate()?;
        if self.models.is_empty() {
            return Err(GseError::Config("no model selected".into()));
        }
        match (self.g, self.chi) {
            (None, None) => return Err(GseError::Config("one of --g or --chi is required".into())),
            (Some(v), _) | (_, Some(v)) if !(v >= 0.0 && v.is_finite()) => {
                return Err(GseError::Config(format!("coupling {v} must be finite and non-negative")));
            }
            _ => {}
        }
        if self.command == CommandKind::Grid && self.chi.is_none() {
            return Err(GseError::Config("grid needs a fixed --chi".into()));
        }
        if let Some(t) = self.tolerance {
            if t.is_nan() || t < 0.0 {
                return Err(GseError::Config(format!("tolerance {t} must be non-negative")));
            }
        }
        if self.command == CommandKind::Oracle && self.n.stop > gse_core::oracle::MAX_ELECTRONS {
            return Err(GseError::Config(format!(
                "oracle supports N <= {}, got {}",
                gse_core::oracle::MAX_ELECTRONS,
                self.n.stop
            )));
        }
        if self.photon_cutoff < 8 || self.photon_cutoff > gse_core::oracle::MAX_CUTOFF {
            return Err(GseError::Config(format!(
                "photon cutoff {} outside 8..={}",
                self.photon_cutoff,
                gse_core::oracle::MAX_CUTOFF
            )));
        }
        Ok(())
    }

    /// Compare tolerance, 5·g/ω₀ unless configured.
    pub fn effective_tolerance(&self, g: f64) -> f64 {
        self.tolerance.unwrap_or(5.0 * g)
    }

    /// System parameters at one (detuning, N) sample.
    pub fn params_at(&self, detuning: f64, n: u64) -> SystemParams {
        let omega_0 = self.system.omega_0;
        let chi = match (self.g, self.chi) {
            (Some(g), _) => g * omega_0 / (n as f64).sqrt(),
            (None, Some(chi)) => chi * omega_0,
            (None, None) => 0.0,
        };
        SystemParams {
            omega_c: omega_0 * (1.0 + detuning),
            chi,
            n_electrons: n,
            n_sites_total: self.system.n_sites_total.max(n),
            ..self.system.clone()
        }
    }
}

fn bad_value(key: &str, value: &str) -> GseError {
    GseError::Config(format!("bad value '{value}' for '{key}'"))
}

/// Parses `key = value` lines; `[section]` headers prefix keys as
/// `section.key`. `#` and `;` start comments.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut section = String::new();
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split(['#', ';']).next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            section = name.trim().to_string();
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| GseError::Config(format!("line {}: expected key = value", lineno + 1)))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(GseError::Config(format!("line {}: empty key", lineno + 1)));
        }
        let full = if section.is_empty() { key.to_string() } else { format!("{section}.{key}") };
        out.insert(full, value.trim().to_string());
    }
    Ok(out)
}
