//! On-disk run archives.
//!
//! A run directory holds `meta.json`, `shock.csv`, `field.csv`,
//! `residuals.csv` and, once verified, `report.json`. Floating-point values in
//! the CSV files carry 17 significant digits so that a field read back is
//! bit-identical to the one written. `meta.json` records SHA-256 digests of
//! the CSV files, which lets the verifier flag archives edited after the run.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::admissibility::{field_hash, AdmissibilityReport};
use crate::error::{Error, Result};
use crate::gas::GasParams;
use crate::geometry::mesh::SIDE_ASSIGNMENT;
use crate::geometry::{build_configuration, ShockCurve, SquareMap};
use crate::shock::{state2_solve, Regime};
use crate::solver::{ResidualRecord, SolutionField, SolveMeta};
use crate::Vec2;

pub const FORMAT: &str = "shockrefl-archive-1";
const DATA_FILES: [&str; 3] = ["field.csv", "shock.csv", "residuals.csv"];

/// Contents of `meta.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchiveMeta {
    pub format: String,
    pub params: GasParams,
    pub theta_w_deg: f64,
    pub theta_w_rad: f64,
    pub regime: Regime,
    pub sigma: f64,
    pub n1: usize,
    pub n2: usize,
    pub stretched: bool,
    pub collapsed_sonic: bool,
    pub solve: SolveMeta,
    pub points: BTreeMap<String, Option<[f64; 2]>>,
    pub sonic_center: [f64; 2],
    pub sonic_radius: f64,
    pub shock_direction: [f64; 2],
    pub side_assignment: BTreeMap<String, String>,
    pub status: String,
    /// Digest of the field as the verifier reads it.
    pub input_hash: String,
    /// SHA-256 of each data file.
    pub file_hashes: BTreeMap<String, String>,
    /// The command-line configuration that produced the run, if any.
    pub run_config: Option<serde_json::Value>,
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn pt(p: Vec2) -> [f64; 2] {
    [p.x, p.y]
}

fn sha_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn field_csv(sol: &SolutionField) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["i", "j", "xi1", "xi2", "phi", "grad_norm", "rho", "ellipticity_margin"])?;
    let m = &sol.mesh;
    for i in 0..m.n1 {
        for j in 0..m.n2 {
            let x = m.node(i, j);
            let g = sol.grad(i, j);
            let rho = sol.density_at(i, j).unwrap_or(f64::NAN);
            let margin = sol.margin_at(i, j).unwrap_or(f64::NAN);
            w.write_record([
                i.to_string(),
                j.to_string(),
                num(x.x),
                num(x.y),
                num(sol.phi[m.idx(i, j)]),
                num(g.norm()),
                num(rho),
                num(margin),
            ])?;
        }
    }
    w.into_inner().map_err(|e| Error::Archive(e.to_string()))
}

fn shock_csv(sol: &SolutionField) -> Result<Vec<u8>> {
    let g = sol.shock.samples()?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["T", "S", "xi1", "xi2"])?;
    for (k, p) in sol.shock.points.iter().enumerate() {
        w.write_record([num(g.t[k]), num(g.s[k]), num(p.x), num(p.y)])?;
    }
    w.into_inner().map_err(|e| Error::Archive(e.to_string()))
}

fn residuals_csv(sol: &SolutionField) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["outer", "shock_movement", "interior_residual"])?;
    for r in &sol.residual_history {
        w.write_record([r.outer.to_string(), num(r.shock_movement), num(r.interior_residual)])?;
    }
    w.into_inner().map_err(|e| Error::Archive(e.to_string()))
}

/// Writes a run directory; `report` is written as `report.json` when given.
pub fn write_archive(
    dir: &Path,
    sol: &SolutionField,
    status: &str,
    report: Option<&AdmissibilityReport>,
    run_config: Option<serde_json::Value>,
) -> Result<ArchiveMeta> {
    fs::create_dir_all(dir)?;
    let files = [("field.csv", field_csv(sol)?), ("shock.csv", shock_csv(sol)?), ("residuals.csv", residuals_csv(sol)?)];
    let mut file_hashes = BTreeMap::new();
    for (name, bytes) in &files {
        fs::write(dir.join(name), bytes)?;
        file_hashes.insert(name.to_string(), sha_hex(bytes));
    }
    let c = &sol.config;
    let mut points = BTreeMap::new();
    points.insert("P0".into(), c.p0.map(pt));
    points.insert("P1".into(), Some(pt(sol.shock.p1())));
    points.insert("P2".into(), Some(pt(sol.shock.p2())));
    points.insert("P3".into(), Some(pt(c.p3)));
    points.insert("P4".into(), Some(pt(c.p4)));
    let meta = ArchiveMeta {
        format: FORMAT.into(),
        params: c.params,
        theta_w_deg: sol.theta_w.to_degrees(),
        theta_w_rad: sol.theta_w,
        regime: c.regime,
        sigma: sol.meta.iteration.sigma,
        n1: sol.mesh.n1,
        n2: sol.mesh.n2,
        stretched: sol.mesh.stretched,
        collapsed_sonic: sol.mesh.collapsed_sonic,
        solve: sol.meta.clone(),
        points,
        sonic_center: pt(c.sonic_center),
        sonic_radius: c.sonic_radius,
        shock_direction: pt(sol.shock.direction_e),
        side_assignment: SIDE_ASSIGNMENT.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
        status: status.into(),
        input_hash: field_hash(sol),
        file_hashes,
        run_config,
    };
    fs::write(dir.join("meta.json"), serde_json::to_string_pretty(&meta)?)?;
    if let Some(r) = report {
        fs::write(dir.join("report.json"), r.to_json()?)?;
    }
    Ok(meta)
}

/// A field read back from disk.
pub struct LoadedArchive {
    pub meta: ArchiveMeta,
    pub field: SolutionField,
    /// Data files whose digest differs from the one recorded at write time.
    pub tampered: Vec<String>,
}

fn read_file(dir: &Path, name: &str) -> Result<Vec<u8>> {
    fs::read(dir.join(name)).map_err(|e| Error::Archive(format!("{name}: {e}")))
}

fn parse(v: &str, what: &str) -> Result<f64> {
    v.trim().parse::<f64>().map_err(|_| Error::Archive(format!("bad number {v:?} in {what}")))
}

/// Reads a run directory and rebuilds the field for verification.
pub fn read_archive(dir: &Path) -> Result<LoadedArchive> {
    let meta: ArchiveMeta = serde_json::from_slice(&read_file(dir, "meta.json")?)?;
    if meta.format != FORMAT {
        return Err(Error::Archive(format!("unknown archive format {:?}", meta.format)));
    }
    let mut tampered = Vec::new();
    let mut bytes = BTreeMap::new();
    for name in DATA_FILES {
        let b = read_file(dir, name)?;
        if meta.file_hashes.get(name).map(String::as_str) != Some(sha_hex(&b).as_str()) {
            tampered.push(name.to_string());
        }
        bytes.insert(name, b);
    }

    let (n1, n2) = (meta.n1, meta.n2);
    let mut nodes = vec![Vec2::zeros(); n1 * n2];
    let mut phi = vec![f64::NAN; n1 * n2];
    let mut seen = vec![false; n1 * n2];
    let mut rd = csv::Reader::from_reader(bytes["field.csv"].as_slice());
    for rec in rd.records() {
        let rec = rec?;
        if rec.len() < 5 {
            return Err(Error::Archive("field.csv row has too few columns".into()));
        }
        let i: usize = rec[0].parse().map_err(|_| Error::Archive("bad index in field.csv".into()))?;
        let j: usize = rec[1].parse().map_err(|_| Error::Archive("bad index in field.csv".into()))?;
        if i >= n1 || j >= n2 || seen[i * n2 + j] {
            return Err(Error::Archive(format!("field.csv node ({i}, {j}) is out of range or repeated")));
        }
        seen[i * n2 + j] = true;
        nodes[i * n2 + j] = Vec2::new(parse(&rec[2], "field.csv")?, parse(&rec[3], "field.csv")?);
        phi[i * n2 + j] = parse(&rec[4], "field.csv")?;
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::Archive("field.csv does not cover the grid".into()));
    }

    let mut points = Vec::new();
    let mut rd = csv::Reader::from_reader(bytes["shock.csv"].as_slice());
    for rec in rd.records() {
        let rec = rec?;
        if rec.len() < 4 {
            return Err(Error::Archive("shock.csv row has too few columns".into()));
        }
        points.push(Vec2::new(parse(&rec[2], "shock.csv")?, parse(&rec[3], "shock.csv")?));
    }
    if points.len() != n2 {
        return Err(Error::Archive(format!("shock.csv has {} points for a grid with {n2}", points.len())));
    }

    let mut history = Vec::new();
    let mut rd = csv::Reader::from_reader(bytes["residuals.csv"].as_slice());
    for rec in rd.records() {
        let rec = rec?;
        if rec.len() < 3 {
            return Err(Error::Archive("residuals.csv row has too few columns".into()));
        }
        history.push(ResidualRecord {
            outer: rec[0].parse().map_err(|_| Error::Archive("bad iteration in residuals.csv".into()))?,
            shock_movement: parse(&rec[1], "residuals.csv")?,
            interior_residual: parse(&rec[2], "residuals.csv")?,
        });
    }

    let params = GasParams::new_unrestricted(meta.params.rho0, meta.params.rho1, meta.params.gamma)?;
    let pair = state2_solve(&params, meta.theta_w_rad)?;
    let config = build_configuration(&params, meta.theta_w_rad, &pair, meta.sigma)?;
    let mesh = SquareMap { n1, n2, nodes, collapsed_sonic: meta.collapsed_sonic, stretched: meta.stretched };
    let direction = Vec2::new(meta.shock_direction[0], meta.shock_direction[1]);
    let field = SolutionField {
        config,
        shock: ShockCurve::new(points, direction),
        mesh,
        phi,
        theta_w: meta.theta_w_rad,
        residual_history: history,
        meta: meta.solve.clone(),
    };
    Ok(LoadedArchive { meta, field, tampered })
}
