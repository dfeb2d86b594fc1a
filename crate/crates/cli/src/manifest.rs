use std::collections::BTreeMap;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{io_at, CliError, CliResult};

pub const DIGEST_ALGORITHM: &str = "sha256";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

/// Everything needed to repeat a run: the argument vector, the resolved
/// configuration and digests of every input and output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub command_line: Vec<String>,
    pub config: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub digest_algorithm: String,
    pub inputs: Vec<FileDigest>,
    #[serde(default)]
    pub outputs: Vec<FileDigest>,
    pub toolkit_version: String,
    pub started_at: String,
    pub finished_at: Option<String>,
}

impl RunManifest {
    pub fn begin(
        command_line: &[String],
        command: &str,
        config: BTreeMap<String, String>,
        seed: Option<u64>,
        inputs: &[&Path],
    ) -> CliResult<Self> {
        Ok(RunManifest {
            command: command.to_string(),
            command_line: command_line.to_vec(),
            config,
            seed,
            digest_algorithm: DIGEST_ALGORITHM.to_string(),
            inputs: inputs.iter().map(|p| digest_file(p)).collect::<CliResult<_>>()?,
            outputs: Vec::new(),
            toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
            started_at: now(),
            finished_at: None,
        })
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent).map_err(io_at(parent))?;
        }
        let text = serde_json::to_string_pretty(self).map_err(|e| CliError::data(e.to_string()))?;
        fs::write(path, text + "\n").map_err(io_at(path))
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(io_at(path))?;
        serde_json::from_str(&text).map_err(|e| CliError::data(format!("{}: not a run manifest: {e}", path.display())))
    }

    /// Records output digests and the finish time, then rewrites the manifest.
    pub fn finish(&mut self, path: &Path, outputs: &[PathBuf]) -> CliResult<()> {
        self.outputs = outputs.iter().map(|p| digest_file(p)).collect::<CliResult<_>>()?;
        self.finished_at = Some(now());
        self.write(path)
    }
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

pub fn digest_file(path: &Path) -> CliResult<FileDigest> {
    let mut file = fs::File::open(path).map_err(io_at(path))?;
    let mut hasher = Sha256::new();
    let mut buf = vec![0u8; 1 << 16];
    loop {
        let n = file.read(&mut buf).map_err(io_at(path))?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(FileDigest {
        path: path.display().to_string(),
        sha256: hex::encode(hasher.finalize()),
    })
}

/// Parses the `key=value` lines written by `render_config`.
pub fn config_map(text: &str) -> BTreeMap<String, String> {
    text.lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.to_string(), v.trim().to_string()))
        .collect()
}
