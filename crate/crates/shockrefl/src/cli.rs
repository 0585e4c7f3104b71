//! Command-line front end.
//!
//! Angles are read and printed in degrees and converted to radians at this
//! boundary. Exit codes are stable: 0 success, 2 invalid input or archive,
//! 3 no convergence, 4 admissibility failure, 5 attached shock.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::admissibility::full_report;
use crate::archive::{read_archive, write_archive};
use crate::error::{Error, Result};
use crate::gas::GasParams;
use crate::shock::{angle_diagram, state2_solve};
use crate::solver::{continuation_sweep, normal_reflection, IterationParams, SolutionField, SweepStatus};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;
pub const EXIT_REPORT: i32 = 4;
pub const EXIT_ATTACHED: i32 = 5;

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::AttachedShockDetected { .. } => EXIT_ATTACHED,
        Error::NoConvergence(_)
        | Error::BracketingFailure(_)
        | Error::EllipticityLost { .. }
        | Error::VacuumReached { .. }
        | Error::LinearSolver(_)
        | Error::GraphPropertyLost(_)
        | Error::FoldedMesh { .. }
        | Error::RootSeparationFailure { .. }
        | Error::DegenerateSonicArc(_) => EXIT_NO_CONVERGENCE,
        _ => EXIT_INPUT,
    }
}

#[derive(Debug, Parser)]
#[command(name = "shockrefl", version, about = "Regular shock reflection solver and verifier")]
pub struct Cli {
    /// Log filter (error, warn, info, debug, trace).
    #[arg(long, global = true, default_value = "warn")]
    pub log_level: String,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Detachment and sonic angles, critical density and the attachment flag.
    Angles(Common),
    /// Weak and strong reflected states over a grid of wedge angles.
    Polar {
        #[command(flatten)]
        common: Common,
        /// Number of angles, spaced evenly in (0, 90] degrees.
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
    /// Solve at one wedge angle and certify the result.
    Solve {
        #[command(flatten)]
        common: Common,
        /// Step of the internal continuation from 90 degrees.
        #[arg(long)]
        coarse_step: Option<f64>,
    },
    /// Continuation over a descending angle grid starting at 90 degrees.
    Sweep(Common),
    /// Recompute the admissibility report of an archived run.
    Verify {
        path: PathBuf,
    },
}

/// Flags shared by the solver commands. Unset flags fall back to `--config`
/// and then to the built-in defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    #[arg(long)]
    pub rho0: Option<f64>,
    #[arg(long)]
    pub rho1: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Accept gamma above 3.
    #[arg(long)]
    pub allow_any_gamma: bool,
    /// Wedge angle in degrees.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Angle grid in degrees: `start:stop:step` or a comma-separated list.
    #[arg(long)]
    pub theta_grid: Option<String>,
    #[arg(long)]
    pub n1: Option<usize>,
    #[arg(long)]
    pub n2: Option<usize>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub relax: Option<f64>,
    /// Cutoff band width as a fraction of the sonic radius.
    #[arg(long)]
    pub cutoff_fraction: Option<f64>,
    #[arg(long)]
    pub tol_fixed_point: Option<f64>,
    #[arg(long)]
    pub max_outer: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file with a run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Fully resolved run configuration; written into every `meta.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub rho0: f64,
    pub rho1: f64,
    pub gamma: f64,
    pub allow_any_gamma: bool,
    pub theta_deg: Option<f64>,
    pub theta_grid_deg: Option<Vec<f64>>,
    pub n1: usize,
    pub n2: usize,
    pub iteration: IterationParams,
    pub coarse_step_deg: f64,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            rho0: 1.0,
            rho1: 2.0,
            gamma: 2.0,
            allow_any_gamma: false,
            theta_deg: None,
            theta_grid_deg: None,
            n1: 65,
            n2: 65,
            iteration: IterationParams::default(),
            coarse_step_deg: 1.0,
            seed: 0,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn gas(&self) -> Result<GasParams> {
        if self.allow_any_gamma {
            GasParams::new_unrestricted(self.rho0, self.rho1, self.gamma)
        } else {
            GasParams::new(self.rho0, self.rho1, self.gamma)
        }
    }

    /// Checks everything that does not need a solve.
    pub fn validate(&self) -> Result<()> {
        self.gas()?;
        self.iteration.validate()?;
        if self.n1 < 5 || self.n2 < 5 {
            return Err(Error::InvalidParameter(format!("grid {}x{} is too small (min 5x5)", self.n1, self.n2)));
        }
        if !(self.coarse_step_deg > 0.0) {
            return Err(Error::InvalidParameter("coarse step must be positive".into()));
        }
        Ok(())
    }
}

/// Parses `start:stop:step` (inclusive of `stop` up to rounding) or a list.
pub fn parse_theta_grid(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidParameter(format!("cannot parse angle grid {s:?}"));
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::InvalidParameter("empty angle grid".into()));
    }
    if s.contains(':') {
        let parts: Vec<f64> = s.split(':').map(|p| p.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<_>>()?;
        let [start, stop, step] = parts[..] else { return Err(bad()) };
        if !(step > 0.0) || stop > start {
            return Err(Error::InvalidParameter("grid must descend with a positive step".into()));
        }
        let n = ((start - stop) / step + 1e-9).floor() as usize;
        return Ok((0..=n).map(|k| start - k as f64 * step).collect());
    }
    s.split(',').map(|p| p.trim().parse::<f64>().map_err(|_| bad())).collect()
}

fn resolve(common: &Common) -> Result<RunConfig> {
    let mut rc = match &common.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::InvalidParameter(format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| Error::InvalidParameter(format!("{}: {e}", p.display())))?
        }
        None => RunConfig::default(),
    };
    macro_rules! set {
        ($field:expr, $value:expr) => {
            if let Some(v) = $value {
                $field = v;
            }
        };
    }
    set!(rc.rho0, common.rho0);
    set!(rc.rho1, common.rho1);
    set!(rc.gamma, common.gamma);
    set!(rc.n1, common.n1);
    set!(rc.n2, common.n2);
    set!(rc.iteration.sigma, common.sigma);
    set!(rc.iteration.relax, common.relax);
    set!(rc.iteration.cutoff_fraction, common.cutoff_fraction);
    set!(rc.iteration.tol_fixed_point, common.tol_fixed_point);
    set!(rc.iteration.max_outer, common.max_outer);
    set!(rc.seed, common.seed);
    rc.allow_any_gamma |= common.allow_any_gamma;
    if common.theta.is_some() {
        rc.theta_deg = common.theta;
    }
    if let Some(g) = &common.theta_grid {
        rc.theta_grid_deg = Some(parse_theta_grid(g)?);
    }
    if common.out.is_some() {
        rc.out = common.out.clone();
    }
    rc.validate()?;
    Ok(rc)
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Angles(c) => resolve(&c).and_then(|rc| cmd_angles(&rc)),
        Command::Polar { common, points } => resolve(&common).and_then(|rc| cmd_polar(&rc, points)),
        Command::Solve { common, coarse_step } => resolve(&common).and_then(|mut rc| {
            if let Some(s) = coarse_step {
                rc.coarse_step_deg = s;
                rc.validate()?;
            }
            cmd_solve(&rc)
        }),
        Command::Sweep(c) => resolve(&c).and_then(|rc| cmd_sweep(&rc)),
        Command::Verify { path } => cmd_verify(&path),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn write_out(rc: &RunConfig, name: &str, contents: &[u8]) -> Result<()> {
    if let Some(dir) = &rc.out {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join(name), contents)?;
    }
    Ok(())
}

pub fn cmd_angles(rc: &RunConfig) -> Result<i32> {
    let d = angle_diagram(&rc.gas()?)?;
    let json = serde_json::json!({
        "theta_d": d.theta_d.to_degrees(),
        "theta_s": d.theta_s.to_degrees(),
        "rho_c": d.rho_c,
        "attachment_possible": d.attachment_possible,
    });
    let text = serde_json::to_string_pretty(&json)?;
    println!("{text}");
    write_out(rc, "angles.json", text.as_bytes())?;
    Ok(EXIT_OK)
}

/// Rows of the polar table, angles `90 k / points` for `k = 1..=points`.
pub fn polar_csv(gas: &GasParams, points: usize) -> Result<String> {
    if points == 0 {
        return Err(Error::InvalidParameter("polar needs at least one angle".into()));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "theta_w", "status", "u2_weak", "v2_weak", "rho2_weak", "mach_p0_weak", "u2_strong", "v2_strong",
        "rho2_strong", "k2_weak", "k2_strong",
    ])?;
    let f = |v: f64| format!("{v:.16e}");
    for k in 1..=points {
        let deg = 90.0 * k as f64 / points as f64;
        match state2_solve(gas, deg.to_radians()) {
            Ok(p) => {
                let (su, sv, sr, sk) = p.strong.map_or((String::new(), String::new(), String::new(), String::new()), |s| {
                    (f(s.u), f(s.v), f(s.rho), f(s.k))
                });
                w.write_record([
                    f(deg),
                    "attached".into(),
                    f(p.weak.u),
                    f(p.weak.v),
                    f(p.weak.rho),
                    f(p.mach_p0_weak),
                    su,
                    sv,
                    sr,
                    f(p.weak.k),
                    sk,
                ])?;
            }
            Err(Error::DetachedWedgeAngle { .. }) => {
                let mut row = vec![f(deg), "detached".to_string()];
                row.extend(std::iter::repeat_n(String::new(), 9));
                w.write_record(row)?;
            }
            Err(e) => return Err(e),
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Archive(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Archive(e.to_string()))
}

pub fn cmd_polar(rc: &RunConfig, points: usize) -> Result<i32> {
    let text = polar_csv(&rc.gas()?, points)?;
    match &rc.out {
        Some(_) => write_out(rc, "polar.csv", text.as_bytes())?,
        None => print!("{text}"),
    }
    Ok(EXIT_OK)
}

fn status_error(status: &SweepStatus) -> Option<Error> {
    match status {
        SweepStatus::Completed => None,
        SweepStatus::Detached { theta_deg } => Some(Error::DetachedWedgeAngle { theta_deg: *theta_deg }),
        SweepStatus::Attached { foot, .. } => Some(Error::AttachedShockDetected { foot: *foot, threshold: f64::NAN }),
        SweepStatus::NoConvergence { message, .. } => Some(Error::NoConvergence(message.clone())),
    }
}

/// Solution at `rc.theta_deg`, reached by continuation from the flat wall.
pub fn solve_at(rc: &RunConfig) -> Result<SolutionField> {
    let gas = rc.gas()?;
    let theta = rc.theta_deg.ok_or_else(|| Error::InvalidParameter("--theta is required".into()))?;
    if !(theta > 0.0 && theta <= 90.0) {
        return Err(Error::InvalidParameter(format!("wedge angle {theta} deg is outside (0, 90]")));
    }
    if theta == 90.0 {
        return normal_reflection(&gas, rc.n1, rc.n2, &rc.iteration);
    }
    state2_solve(&gas, theta.to_radians())?;
    let mut grid = vec![90.0];
    let mut t = 90.0 - rc.coarse_step_deg;
    while t > theta + 1e-9 {
        grid.push(t);
        t -= rc.coarse_step_deg;
    }
    grid.push(theta);
    let rad: Vec<f64> = grid.iter().map(|d: &f64| d.to_radians()).collect();
    let sweep = continuation_sweep(&gas, &rad, &rc.iteration, rc.n1, rc.n2)?;
    if let Some(e) = status_error(&sweep.status) {
        return Err(e);
    }
    Ok(sweep.members.into_iter().last().expect("completed sweep has members"))
}

pub fn cmd_solve(rc: &RunConfig) -> Result<i32> {
    let sol = solve_at(rc)?;
    let report = full_report(&sol)?;
    print!("{}", report.table());
    if let Some(dir) = &rc.out {
        write_archive(dir, &sol, "converged", Some(&report), Some(serde_json::to_value(rc)?))?;
    }
    Ok(if report.verdict { EXIT_OK } else { EXIT_REPORT })
}

fn member_dir(out: &Path, theta_deg: f64) -> PathBuf {
    out.join(format!("theta_{theta_deg:08.4}"))
}

pub fn cmd_sweep(rc: &RunConfig) -> Result<i32> {
    let gas = rc.gas()?;
    let grid = rc
        .theta_grid_deg
        .clone()
        .ok_or_else(|| Error::InvalidParameter("--theta-grid is required".into()))?;
    if grid.is_empty() {
        return Err(Error::InvalidParameter("empty angle grid".into()));
    }
    let rad: Vec<f64> = grid.iter().map(|d| d.to_radians()).collect();
    let sweep = continuation_sweep(&gas, &rad, &rc.iteration, rc.n1, rc.n2)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["theta_w", "status", "distance_to_previous", "verdict"])?;
    let mut all_pass = true;
    for (k, sol) in sweep.members.iter().enumerate() {
        let report = full_report(sol)?;
        all_pass &= report.verdict;
        if let Some(out) = &rc.out {
            let dir = member_dir(out, sol.theta_w.to_degrees());
            write_archive(&dir, sol, "converged", Some(&report), Some(serde_json::to_value(rc)?))?;
        }
        let dist = if k == 0 { String::new() } else { format!("{:.16e}", sweep.distances[k - 1]) };
        w.write_record([
            format!("{:.16e}", sol.theta_w.to_degrees()),
            "converged".into(),
            dist,
            if report.verdict { "pass".into() } else { "fail".into() },
        ])?;
    }
    let failed_at = match &sweep.status {
        SweepStatus::Completed => None,
        SweepStatus::Detached { theta_deg }
        | SweepStatus::Attached { theta_deg, .. }
        | SweepStatus::NoConvergence { theta_deg, .. } => Some(*theta_deg),
    };
    if let Some(t) = failed_at {
        w.write_record([format!("{t:.16e}"), sweep.status.label().into(), String::new(), String::new()])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Archive(e.to_string()))?;
    match &rc.out {
        Some(_) => write_out(rc, "family.csv", &bytes)?,
        None => print!("{}", String::from_utf8_lossy(&bytes)),
    }
    let detail = match &sweep.status {
        SweepStatus::NoConvergence { message, .. } => format!(" ({message})"),
        _ => String::new(),
    };
    println!(
        "sweep status: {}{}; {} member(s), last angle {:.4} deg",
        sweep.status.label(),
        detail,
        sweep.members.len(),
        sweep.members.last().map_or(f64::NAN, |m| m.theta_w.to_degrees())
    );
    Ok(match status_error(&sweep.status) {
        Some(e) => exit_code(&e),
        None if all_pass => EXIT_OK,
        None => EXIT_REPORT,
    })
}

pub fn cmd_verify(path: &Path) -> Result<i32> {
    let loaded = read_archive(path)?;
    for name in &loaded.tampered {
        eprintln!("warning: {name} does not match the digest recorded in meta.json");
    }
    let report = full_report(&loaded.field)?;
    if report.input_hash != loaded.meta.input_hash {
        eprintln!("warning: field digest differs from the one recorded at write time");
    }
    print!("{}", report.table());
    Ok(if report.verdict { EXIT_OK } else { EXIT_REPORT })
}
