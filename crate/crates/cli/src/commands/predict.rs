use std::collections::BTreeMap;
use std::path::Path;

use log::info;
use seqtag::corpus::{parse_conll_input, parse_ssf, Dataset, SourceFormat};
use seqtag::eval::{write_interchange, Interchange, InterchangeToken};
use seqtag::nn::{read_checkpoint_dtype, Precision, Real};
use seqtag::train::Tagger;

use crate::cli::PredictArgs;
use crate::error::{CliError, CliResult};
use crate::io::{read_text, sidecar, write_text};
use crate::manifest::RunManifest;

pub fn run(argv: &[String], args: PredictArgs) -> CliResult<()> {
    let format = SourceFormat::from(args.format);
    let text = read_text(&args.input)?;
    let mut config = BTreeMap::new();
    config.insert("format".to_string(), args.format.extension().to_string());
    config.insert("model".to_string(), args.model.display().to_string());
    let manifest_path = args.manifest.clone().unwrap_or_else(|| sidecar(&args.out));
    let mut manifest = RunManifest::begin(argv, "predict", config, None, &[&args.input])?;

    let dtype = read_checkpoint_dtype(&args.model).map_err(|e| CliError::data(format!("{}: {e}", args.model.display())))?;
    let output = if text.trim().is_empty() {
        String::new()
    } else {
        let parsed = match format {
            SourceFormat::Conll => parse_conll_input(&text),
            SourceFormat::Ssf => parse_ssf(&text),
        };
        let dataset = parsed.map_err(|e| CliError::data(format!("{}: {e}", args.input.display())))?;
        let pred = match dtype {
            Precision::F32 => tag::<f32>(&args.model, &dataset)?,
            Precision::F64 => tag::<f64>(&args.model, &dataset)?,
        };
        info!("tagged {} sentences", dataset.len());
        write_interchange(&interchange(&dataset, &pred))
    };
    manifest.write(&manifest_path)?;
    write_text(&args.out, &output)?;
    manifest.finish(&manifest_path, &[args.out.clone()])
}

fn tag<T: Real>(model: &Path, dataset: &Dataset) -> CliResult<Vec<Vec<String>>> {
    let tagger = Tagger::<T>::load(model).map_err(|e| CliError::data(format!("{}: {e}", model.display())))?;
    Ok(tagger.predict(dataset.sentences())?)
}

/// Input labels (or `O` for unlabeled input) become the gold column.
fn interchange(dataset: &Dataset, pred: &[Vec<String>]) -> Interchange {
    let sentences = dataset
        .sentences()
        .iter()
        .zip(pred)
        .map(|(s, p)| {
            s.tokens()
                .iter()
                .zip(p)
                .map(|(t, p)| InterchangeToken {
                    surface: t.surface.clone(),
                    pos: t.pos.clone(),
                    gold: t.label.clone(),
                    pred: p.clone(),
                })
                .collect()
        })
        .collect();
    Interchange { sentences }
}
