use log::info;

use crate::cli::RerunArgs;
use crate::error::{CliError, CliResult};
use crate::manifest::{digest_file, RunManifest};

pub fn run(args: RerunArgs) -> CliResult<()> {
    let recorded = RunManifest::read(&args.manifest)?;
    if recorded.command_line.get(1).map(String::as_str) == Some("rerun") {
        return Err(CliError::data("manifest records a rerun; point at the original run manifest"));
    }
    for input in &recorded.inputs {
        let now = digest_file(input.path.as_ref())?;
        if now.sha256 != input.sha256 {
            return Err(CliError::data(format!("input {} changed since the recorded run", input.path)));
        }
    }
    info!("re-running: {}", recorded.command_line.join(" "));
    crate::run(recorded.command_line.clone())?;
    if args.verify {
        if recorded.outputs.is_empty() {
            return Err(CliError::data("manifest has no recorded outputs to verify"));
        }
        for output in &recorded.outputs {
            let now = digest_file(output.path.as_ref())?;
            if now.sha256 != output.sha256 {
                return Err(CliError::data(format!("output {} differs from the recorded run", output.path)));
            }
        }
        info!("all {} outputs match the recorded digests", recorded.outputs.len());
    }
    Ok(())
}
