use std::collections::BTreeMap;

use log::info;
use seqtag::corpus::{serialize, write_split_manifest, SplitIndices, SourceFormat};

use crate::cli::SplitArgs;
use crate::error::CliResult;
use crate::io::{read_dataset, write_text};
use crate::manifest::RunManifest;

pub fn run(argv: &[String], args: SplitArgs) -> CliResult<()> {
    let format = SourceFormat::from(args.format);
    let dataset = read_dataset(&args.input, format)?;
    let r = args.ratios;
    let mut config = BTreeMap::new();
    config.insert("format".to_string(), args.format.extension().to_string());
    config.insert("ratios".to_string(), format!("{},{},{}", r.train, r.dev, r.test));
    let manifest_path = args.out_dir.join("run.json");
    let mut manifest = RunManifest::begin(argv, "split", config, Some(args.seed), &[&args.input])?;
    manifest.write(&manifest_path)?;

    let split = SplitIndices::generate(dataset.len(), r, args.seed)?;
    let mut outputs = Vec::new();
    for (name, idx) in [("train", &split.train), ("dev", &split.dev), ("test", &split.test)] {
        let part = seqtag::corpus::Dataset::new(
            idx.iter().map(|&i| dataset.sentences()[i].clone()).collect(),
            format,
        );
        let path = args.out_dir.join(format!("{name}.{}", args.format.extension()));
        write_text(&path, &serialize(&part, format))?;
        info!("{name}: {} sentences -> {}", part.len(), path.display());
        outputs.push(path);
    }
    let index_path = args.out_dir.join("split.txt");
    write_text(&index_path, &write_split_manifest(&split))?;
    outputs.push(index_path);
    manifest.finish(&manifest_path, &outputs)
}
