//! Command-line front end: configuration, subcommands and atomic output.

mod commands;
mod config;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

pub use commands::{
    cmd_coupling, cmd_currents, cmd_cut, cmd_gap, cmd_landscape, cmd_minima, cmd_rabi, cmd_reproduce,
    cmd_twoqubit, compute_gap, csv_report, json_report, scorecard, Outcome, ScoreEntry, VERSION,
};
pub use config::{
    CircuitSection, CouplingSection, Format, Model, OutputSection, QedSection, RunConfig, SolverSection,
    TwoQubitSection, UnitsSection,
};

use crate::{GfqError, Result};

#[derive(Debug, Parser)]
#[command(name = "gfq", version, about = "Current-biased gradiometric flux qubit toolkit")]
pub struct Cli {
    /// TOML configuration file.
    #[arg(long, env = "GFQ_CONFIG", global = true)]
    pub config: Option<PathBuf>,

    /// Write to this file (atomically) instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(flatten)]
    pub overrides: Overrides,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// Local minima of the potential, with the analytic well positions.
    Minima,
    /// Potential on a (phi_p, phitilde_m) grid.
    Landscape,
    /// Double-well cut along phitilde_m = 0.
    Cut,
    /// Tunnelling gap of the lowest doublet.
    Gap,
    /// Trapping and alpha-loop currents at each minimum.
    Currents,
    /// Coupling g/(Phi0 I_b) over ratio and f_alpha.
    Coupling,
    /// Vacuum Rabi oscillation, rotating-wave and full model.
    Rabi,
    /// Dispersive two-qubit exchange against exact diagonalisation.
    Twoqubit,
    /// Scorecard of every reference number.
    Reproduce,
}

impl std::str::FromStr for Command {
    type Err = GfqError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "minima" => Command::Minima,
            "landscape" => Command::Landscape,
            "cut" => Command::Cut,
            "gap" => Command::Gap,
            "currents" => Command::Currents,
            "coupling" => Command::Coupling,
            "rabi" => Command::Rabi,
            "twoqubit" => Command::Twoqubit,
            "reproduce" => Command::Reproduce,
            other => return Err(GfqError::Config(format!("unknown command {other:?}"))),
        })
    }
}

/// Flags that override configuration keys of the same name.
#[derive(Debug, Default, Args)]
pub struct Overrides {
    /// Trapping-loop flux f1 (Phi0).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub f1: Option<f64>,
    /// Trapping-loop flux f2 (Phi0).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub f2: Option<f64>,
    /// Alpha-loop flux (Phi0).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub f_alpha: Option<f64>,
    /// Winding difference n2 - n1.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub m: Option<i64>,
    /// Winding sum n1 + n2 (default: energetically preferred).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub mprime: Option<i64>,
    /// Alpha-loop winding.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub n: Option<i64>,
    /// Branch to alpha-loop junction energy ratio.
    #[arg(long, global = true)]
    pub ej_ratio: Option<f64>,
    /// E_J / E_C.
    #[arg(long, global = true)]
    pub ej_over_ec: Option<f64>,
    /// Trapping-loop stiffness (E_J).
    #[arg(long, global = true)]
    pub stiffness_loop: Option<f64>,
    /// Alpha-loop stiffness (E_J).
    #[arg(long, global = true)]
    pub stiffness_alpha: Option<f64>,
    /// Alpha-loop bias current, Phi0 I / (2 pi E_J).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub beta0: Option<f64>,
    /// Branch-node bias current, same units.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub beta_branch: Option<f64>,
    /// L_eff in pH, for SI currents.
    #[arg(long, global = true)]
    pub l_eff_ph: Option<f64>,
    /// E_J/h in GHz, for SI frequencies.
    #[arg(long, global = true)]
    pub ej_over_h_ghz: Option<f64>,
    #[arg(long, global = true)]
    pub model: Option<Model>,
    /// Seeds per axis of the minimum search.
    #[arg(long, global = true)]
    pub seeds: Option<usize>,
    /// Landscape points per axis.
    #[arg(long, global = true)]
    pub grid_points: Option<usize>,
    /// Points on the double-well cut.
    #[arg(long, global = true)]
    pub cut_points: Option<usize>,
    /// Grid points of the 1D gap solve.
    #[arg(long, global = true)]
    pub gap_points: Option<usize>,
    /// Grid points per axis of the 2D gap solve.
    #[arg(long, global = true)]
    pub gap_points_2d: Option<usize>,
    /// Gap solve in 1 or 2 dimensions.
    #[arg(long, global = true)]
    pub gap_dims: Option<usize>,
    /// Qubit gap (rabi).
    #[arg(long, global = true)]
    pub delta: Option<f64>,
    /// Qubit-resonator coupling (rabi).
    #[arg(long, global = true)]
    pub g: Option<f64>,
    /// Resonator frequency (rabi).
    #[arg(long, global = true)]
    pub omega: Option<f64>,
    /// Fock states kept per mode.
    #[arg(long, global = true)]
    pub fock_cutoff: Option<usize>,
    /// Length of the rabi run in vacuum-Rabi periods.
    #[arg(long, global = true)]
    pub periods: Option<f64>,
    /// Left qubit gap (twoqubit).
    #[arg(long, global = true)]
    pub delta_l: Option<f64>,
    /// Right qubit gap (twoqubit).
    #[arg(long, global = true)]
    pub delta_r: Option<f64>,
    /// Left coupling (twoqubit).
    #[arg(long, global = true)]
    pub g_l: Option<f64>,
    /// Right coupling (twoqubit).
    #[arg(long, global = true)]
    pub g_r: Option<f64>,
    /// Bus mode frequency (twoqubit).
    #[arg(long, global = true)]
    pub omega1: Option<f64>,
    /// Build the dispersive Hamiltonian even outside its validity range.
    #[arg(long, global = true)]
    pub force: bool,
    /// Output format (default depends on the command).
    #[arg(long, global = true)]
    pub format: Option<Format>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut RunConfig) {
        fn set<T: Copy>(slot: &mut T, v: Option<T>) {
            if let Some(v) = v {
                *slot = v;
            }
        }
        let c = &mut cfg.circuit;
        set(&mut c.f1, self.f1);
        set(&mut c.f2, self.f2);
        set(&mut c.f_alpha, self.f_alpha);
        set(&mut c.m, self.m);
        if self.mprime.is_some() {
            c.mprime = self.mprime;
        }
        set(&mut c.n, self.n);
        set(&mut c.ej_ratio, self.ej_ratio);
        set(&mut c.ej_over_ec, self.ej_over_ec);
        set(&mut c.stiffness_loop, self.stiffness_loop);
        set(&mut c.stiffness_alpha, self.stiffness_alpha);
        set(&mut cfg.drive.beta0, self.beta0);
        set(&mut cfg.drive.beta_branch, self.beta_branch);
        set(&mut cfg.units.l_eff_ph, self.l_eff_ph);
        set(&mut cfg.units.ej_over_h_ghz, self.ej_over_h_ghz);
        let s = &mut cfg.solver;
        if self.model.is_some() {
            s.model = self.model;
        }
        set(&mut s.seeds, self.seeds);
        set(&mut s.grid_points, self.grid_points);
        set(&mut s.cut_points, self.cut_points);
        set(&mut s.gap_points, self.gap_points);
        set(&mut s.gap_points_2d, self.gap_points_2d);
        set(&mut s.gap_dims, self.gap_dims);
        let q = &mut cfg.qed;
        set(&mut q.delta, self.delta);
        set(&mut q.g, self.g);
        set(&mut q.omega, self.omega);
        set(&mut q.fock_cutoff, self.fock_cutoff);
        set(&mut q.periods, self.periods);
        let t = &mut cfg.two_qubit;
        set(&mut t.delta_l, self.delta_l);
        set(&mut t.delta_r, self.delta_r);
        set(&mut t.g_l, self.g_l);
        set(&mut t.g_r, self.g_r);
        set(&mut t.omega1, self.omega1);
        if self.force {
            t.force = true;
        }
        if self.format.is_some() {
            cfg.output.format = self.format;
        }
    }
}

/// 0 success, 1 scorecard failure, 2 configuration or physics-domain status, 3 I/O.
pub fn exit_code(err: &GfqError) -> i32 {
    match err {
        GfqError::Io(_) => 3,
        _ => 2,
    }
}

/// Effective configuration: defaults, then the file, then flags. Validated.
pub fn resolve_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    cli.overrides.apply(&mut cfg);
    cfg.validate()?;
    Ok(cfg)
}

pub fn execute(command: Command, cfg: &RunConfig) -> Result<Outcome> {
    match command {
        Command::Minima => cmd_minima(cfg),
        Command::Landscape => cmd_landscape(cfg),
        Command::Cut => cmd_cut(cfg),
        Command::Gap => cmd_gap(cfg),
        Command::Currents => cmd_currents(cfg),
        Command::Coupling => cmd_coupling(cfg),
        Command::Rabi => cmd_rabi(cfg),
        Command::Twoqubit => cmd_twoqubit(cfg),
        Command::Reproduce => cmd_reproduce(cfg),
    }
}

/// Write via a temporary file in the target directory, then rename into place.
pub fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| GfqError::Io(e.error))?;
    Ok(())
}

pub fn run_with(cli: Cli) -> i32 {
    let result = resolve_config(&cli).and_then(|cfg| execute(cli.command, &cfg));
    match result {
        Ok(outcome) => {
            let written = match &cli.out {
                Some(path) => write_atomic(path, &outcome.text),
                None => std::io::stdout()
                    .lock()
                    .write_all(outcome.text.as_bytes())
                    .map_err(GfqError::from),
            };
            if let Err(e) = written {
                eprintln!("gfq: {e}");
                return 3;
            }
            outcome.code
        }
        Err(e) => {
            eprintln!("gfq: {e}");
            exit_code(&e)
        }
    }
}

pub fn run() -> i32 {
    run_with(Cli::parse())
}
