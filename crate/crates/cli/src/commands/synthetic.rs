use std::collections::BTreeMap;

use log::info;
use seqtag::corpus::write_conll;
use seqtag::synthetic::{generate_task, SyntheticConfig};

use crate::cli::SyntheticArgs;
use crate::error::CliResult;
use crate::io::write_text;
use crate::manifest::RunManifest;

pub fn run(argv: &[String], args: SyntheticArgs) -> CliResult<()> {
    let cfg = SyntheticConfig {
        train: args.train,
        dev: args.dev,
        test: args.test,
        unlabeled: args.unlabeled,
        seed: args.seed,
    };
    let mut config = BTreeMap::new();
    for (k, v) in [("train", cfg.train), ("dev", cfg.dev), ("test", cfg.test), ("unlabeled", cfg.unlabeled)] {
        config.insert(k.to_string(), v.to_string());
    }
    let manifest_path = args.out_dir.join("run.json");
    let mut manifest = RunManifest::begin(argv, "generate-synthetic", config, Some(cfg.seed), &[])?;
    manifest.write(&manifest_path)?;

    let task = generate_task(&cfg);
    let mut outputs = Vec::new();
    for (name, data) in [("train", &task.train), ("dev", &task.dev), ("test", &task.test)] {
        let path = args.out_dir.join(format!("{name}.conll"));
        write_text(&path, &write_conll(data))?;
        outputs.push(path);
    }
    let path = args.out_dir.join("unlabeled.txt");
    write_text(&path, &task.unlabeled_text())?;
    outputs.push(path);
    info!("wrote synthetic task to {}", args.out_dir.display());
    manifest.finish(&manifest_path, &outputs)
}
