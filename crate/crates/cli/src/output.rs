use std::fs;
use std::path::{Path, PathBuf};

use diskfn::acceptance::Check;
use serde::Serialize;

use crate::config::RunConfig;
use crate::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Writes artifacts into the output directory, each stamped with the version,
/// config hash and seed.
pub struct Artifacts {
    dir: PathBuf,
    hash: String,
    seed: u64,
    pub written: Vec<PathBuf>,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    version: &'a str,
    config_hash: &'a str,
    seed: u64,
    command: &'a str,
    config: &'a RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<&'a [Check]>,
    result: T,
}

impl Artifacts {
    pub fn new(cfg: &RunConfig, hash: String) -> Result<Self, CliError> {
        fs::create_dir_all(&cfg.output_dir).map_err(|e| {
            CliError::Input(format!("cannot create {}: {e}", cfg.output_dir.display()))
        })?;
        Ok(Self {
            dir: cfg.output_dir.clone(),
            hash,
            seed: cfg.seed,
            written: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, body: &[u8]) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, body)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
        self.written.push(path);
        Ok(())
    }

    pub fn json<T: Serialize>(
        &mut self,
        name: &str,
        command: &str,
        cfg: &RunConfig,
        report: Option<&[Check]>,
        result: T,
    ) -> Result<(), CliError> {
        let env = Envelope {
            version: VERSION,
            config_hash: &self.hash,
            seed: self.seed,
            command,
            config: cfg,
            report,
            result,
        };
        let mut body = serde_json::to_vec_pretty(&env)
            .map_err(|e| CliError::Verify(format!("serialization failed: {e}")))?;
        body.push(b'\n');
        self.write(name, &body)
    }

    /// CSV with a leading `#` line carrying version, hash and seed.
    pub fn csv(&mut self, name: &str, body: &str) -> Result<(), CliError> {
        let text = format!(
            "# diskfn {VERSION} config_hash={} seed={}\n{body}",
            self.hash, self.seed
        );
        self.write(name, text.as_bytes())
    }
}

pub fn read_input(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

pub fn parse<T: serde::de::DeserializeOwned>(path: &Path, bytes: &[u8]) -> Result<T, CliError> {
    serde_json::from_slice(bytes)
        .map_err(|e| CliError::Input(format!("{}: invalid JSON: {e}", path.display())))
}

pub fn print_report(report: &[Check]) {
    for c in report {
        let tag = if c.passed() { "pass" } else { "FAIL" };
        println!(
            "{tag:>4}  {}  value={:.6e}  threshold={:.6e}",
            c.check_name, c.value, c.threshold
        );
    }
}
