use seqtag::corpus::{LabelScheme, SourceFormat};
use seqtag::eval::{chunk_prf, format_report, parse_interchange, token_prf, ReportStyle};
use seqtag::nn::{read_checkpoint_dtype, Precision, Real};
use seqtag::train::Tagger;

use crate::cli::EvaluateArgs;
use crate::error::{CliError, CliResult};
use crate::io::{read_dataset, read_text};

pub fn run(args: EvaluateArgs) -> CliResult<()> {
    let format = SourceFormat::from(args.format);
    let (gold, pred) = if let Some(path) = &args.interchange {
        let data = parse_interchange(&read_text(path)?).map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
        (data.gold(), data.pred())
    } else if let (Some(model), Some(test)) = (&args.model, &args.test) {
        let test = read_dataset(test, format)?;
        let pred = match read_checkpoint_dtype(model)? {
            Precision::F32 => predict::<f32>(model, &test)?,
            Precision::F64 => predict::<f64>(model, &test)?,
        };
        (test.labels(), pred)
    } else if let (Some(gold), Some(pred)) = (&args.gold, &args.pred) {
        (read_dataset(gold, format)?.labels(), read_dataset(pred, format)?.labels())
    } else {
        return Err(CliError::usage(
            "give --interchange FILE, --model DIR with --test FILE, or --gold FILE with --pred FILE",
        ));
    };
    print!("{}", render(&gold, &pred, args.machine)?);
    Ok(())
}

fn predict<T: Real>(model: &std::path::Path, test: &seqtag::corpus::Dataset) -> CliResult<Vec<Vec<String>>> {
    let tagger = Tagger::<T>::load(model).map_err(|e| CliError::data(format!("{}: {e}", model.display())))?;
    Ok(tagger.predict(test.sentences())?)
}

/// Token report, then the chunk report when the gold labels carry chunk prefixes.
pub fn render(gold: &[Vec<String>], pred: &[Vec<String>], machine: bool) -> CliResult<String> {
    let style = if machine { ReportStyle::Machine } else { ReportStyle::Human };
    let mut out = String::from("# token level\n");
    out.push_str(&format_report(&token_prf(gold, pred)?, style));
    let scheme = LabelScheme::detect(gold.iter().flatten().map(String::as_str));
    out.push_str("# chunk level\n");
    match scheme {
        LabelScheme::Iob2 => out.push_str(&format_report(&chunk_prf(gold, pred)?, style)),
        LabelScheme::Raw => out.push_str("NA: gold labels carry no chunk prefixes\n"),
    }
    Ok(out)
}
