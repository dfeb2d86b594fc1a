use std::fs;
use std::path::{Path, PathBuf};

use seqtag::corpus::{parse, Dataset, SourceFormat};

use crate::error::{io_at, CliError, CliResult};

pub fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(io_at(path))
}

pub fn read_dataset(path: &Path, format: SourceFormat) -> CliResult<Dataset> {
    let text = read_text(path)?;
    parse(&text, format).map_err(|e| CliError::data(format!("{}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(io_at(parent))?;
    }
    fs::write(path, text).map_err(io_at(path))
}

/// `<path>.run.json` next to a primary output file.
pub fn sidecar(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".run.json");
    path.with_file_name(name)
}
