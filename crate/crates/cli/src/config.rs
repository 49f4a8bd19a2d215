use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

/// Tolerances and their defaults, addressable with `--tol name=value`.
pub const DEFAULT_TOLERANCES: [(&str, f64); 8] = [
    ("identity", 1e-8),
    ("unimodular", 1e-12),
    ("interpolation", 1e-8),
    ("match", 1e-12),
    ("endpoint", 1e-8),
    ("log_exact", 1e-6),
    ("log_walks", 1e-3),
    ("trossos", 1e-3),
];

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub grid_size: usize,
    pub tolerances: BTreeMap<String, f64>,
    pub slack_constant: f64,
    pub seed: u64,
    #[serde(skip)]
    pub output_dir: PathBuf,
}

impl RunConfig {
    pub fn new(
        grid: usize,
        tol: &[String],
        slack: f64,
        seed: u64,
        out: PathBuf,
    ) -> Result<Self, CliError> {
        if grid < 256 || !grid.is_power_of_two() {
            return Err(CliError::Input(format!(
                "--grid {grid}: must be a power of two >= 256"
            )));
        }
        if !(slack > 0.0 && slack.is_finite()) {
            return Err(CliError::Input(format!(
                "--slack {slack}: must be positive"
            )));
        }
        let mut tolerances: BTreeMap<String, f64> = DEFAULT_TOLERANCES
            .iter()
            .map(|&(k, v)| (k.to_string(), v))
            .collect();
        for t in tol {
            let (name, value) = t
                .split_once('=')
                .ok_or_else(|| CliError::Input(format!("--tol {t}: expected name=value")))?;
            let value: f64 = value
                .parse()
                .map_err(|_| CliError::Input(format!("--tol {t}: not a number")))?;
            match tolerances.get_mut(name) {
                Some(slot) if value > 0.0 => *slot = value,
                Some(_) => return Err(CliError::Input(format!("--tol {t}: must be positive"))),
                None => {
                    let known: Vec<_> = tolerances.keys().cloned().collect();
                    return Err(CliError::Input(format!(
                        "--tol {name}: unknown tolerance (known: {})",
                        known.join(", ")
                    )));
                }
            }
        }
        Ok(Self {
            grid_size: grid,
            tolerances,
            slack_constant: slack,
            seed,
            output_dir: out,
        })
    }

    pub fn tol(&self, name: &str) -> f64 {
        self.tolerances[name]
    }
}

/// SHA-256 over the configuration, the subcommand and its inputs.
pub fn config_hash<A: Serialize>(
    cfg: &RunConfig,
    command: &str,
    args: &A,
    inputs: &[Vec<u8>],
) -> String {
    let mut h = Sha256::new();
    h.update(serde_json::to_vec(cfg).expect("config serializes"));
    h.update(command.as_bytes());
    h.update(serde_json::to_vec(args).expect("args serialize"));
    for bytes in inputs {
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(bytes);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}
