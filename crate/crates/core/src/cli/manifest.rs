//! Run manifests: enough to re-execute a command and check that its outputs
//! come out byte-identical.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use tailspace::verify::{POINTWISE_TOL, SOLVER_TOL, SWEEP_TOL};
use tailspace::Result;

use super::Outcome;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

impl FileDigest {
    pub fn of(path: &Path) -> Result<Self> {
        let data = std::fs::read(path)?;
        let hash = Sha256::digest(&data);
        Ok(Self {
            path: path.to_string_lossy().into_owned(),
            sha256: hash.iter().map(|b| format!("{b:02x}")).collect(),
            bytes: data.len() as u64,
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Tolerances {
    pub pointwise: f64,
    pub sweep: f64,
    pub solver: f64,
    #[serde(rename = "override")]
    pub override_: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    /// Arguments after the program name.
    pub argv: Vec<String>,
    pub cwd: String,
    pub seeds: Vec<u64>,
    pub threads: Option<usize>,
    pub tolerances: Tolerances,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub passed: bool,
    pub wall_clock_seconds: f64,
}

impl RunManifest {
    pub fn build(argv: &[String], threads: Option<usize>, outcome: &Outcome, seconds: f64) -> Result<Self> {
        Ok(Self {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            argv: argv.to_vec(),
            cwd: std::env::current_dir()?.to_string_lossy().into_owned(),
            seeds: outcome.seeds.clone(),
            threads,
            tolerances: Tolerances {
                pointwise: POINTWISE_TOL,
                sweep: SWEEP_TOL,
                solver: SOLVER_TOL,
                override_: outcome.tol_override,
            },
            inputs: outcome.inputs.iter().map(|p| FileDigest::of(p)).collect::<Result<_>>()?,
            outputs: outcome.outputs.iter().map(|p| FileDigest::of(p)).collect::<Result<_>>()?,
            passed: outcome.ok,
            wall_clock_seconds: seconds,
        })
    }
}
