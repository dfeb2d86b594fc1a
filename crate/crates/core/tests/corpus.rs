use proptest::prelude::*;
use seqtag::corpus::{
    normalize_labels, parse, parse_conll, parse_conll_input, parse_ssf, random_split, read_split_manifest, serialize,
    write_split_manifest, Dataset, LabelMode, LabelScheme, Sentence, SourceFormat, SplitIndices, SplitRatios, Token,
};
use seqtag::Error;

const LABELS: [&str; 7] = ["O", "B-PER", "I-PER", "B-LOC", "I-LOC", "B-ORG", "I-ORG"];

fn token_strategy() -> impl Strategy<Value = (String, String, String)> {
    ("[a-z][a-z0-9]{0,5}", "[A-Z]{2,3}", prop::sample::select(LABELS.to_vec()))
        .prop_map(|(s, p, l)| (s, p, l.to_string()))
}

fn dataset_strategy() -> impl Strategy<Value = Vec<Vec<(String, String, String)>>> {
    prop::collection::vec(prop::collection::vec(token_strategy(), 1..12), 1..8)
}

fn build(triples: &[Vec<(String, String, String)>], format: SourceFormat) -> Dataset {
    let sentences = triples
        .iter()
        .map(|s| Sentence::new(s.iter().map(|(a, b, c)| Token::new(a, b, c).unwrap()).collect()).unwrap())
        .collect();
    Dataset::new(sentences, format)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn conll_round_trip(triples in dataset_strategy()) {
        let d = build(&triples, SourceFormat::Conll);
        let back = parse_conll(&serialize(&d, SourceFormat::Conll)).unwrap();
        prop_assert_eq!(back.triples(), triples);
    }

    #[test]
    fn ssf_round_trip(triples in dataset_strategy()) {
        let d = build(&triples, SourceFormat::Ssf);
        let back = parse_ssf(&serialize(&d, SourceFormat::Ssf)).unwrap();
        prop_assert_eq!(back.source_format(), SourceFormat::Ssf);
        prop_assert_eq!(back.triples(), triples);
    }

    #[test]
    fn ssf_to_conll_keeps_triples(triples in dataset_strategy()) {
        let ssf = parse_ssf(&serialize(&build(&triples, SourceFormat::Ssf), SourceFormat::Ssf)).unwrap();
        let conll = parse(&serialize(&ssf, SourceFormat::Conll), SourceFormat::Conll).unwrap();
        prop_assert_eq!(conll.triples(), ssf.triples());
    }

    #[test]
    fn split_partitions_indices(n in 3usize..400, seed in any::<u64>()) {
        let s = SplitIndices::generate(n, SplitRatios::default(), seed).unwrap();
        let mut all: Vec<usize> = s.train.iter().chain(&s.dev).chain(&s.test).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
        prop_assert_eq!(s.train.len(), (n as f64 * 0.70 + 1e-9).floor() as usize);
        prop_assert_eq!(s.dev.len(), (n as f64 * 0.17 + 1e-9).floor() as usize);
        prop_assert_eq!(&SplitIndices::generate(n, SplitRatios::default(), seed).unwrap(), &s);
        prop_assert_eq!(read_split_manifest(&write_split_manifest(&s)).unwrap(), s);
    }
}

#[test]
fn split_datasets_follow_indices() {
    let triples: Vec<Vec<(String, String, String)>> =
        (0..50).map(|i| vec![(format!("w{i}"), "NN".into(), "O".into())]).collect();
    let d = build(&triples, SourceFormat::Conll);
    let (train, dev, test) = random_split(&d, SplitRatios::default(), 3).unwrap();
    let idx = SplitIndices::generate(50, SplitRatios::default(), 3).unwrap();
    for (part, ids) in [(&train, &idx.train), (&dev, &idx.dev), (&test, &idx.test)] {
        let want: Vec<_> = ids.iter().map(|&i| triples[i].clone()).collect();
        assert_eq!(part.triples(), want);
    }
    let other = SplitIndices::generate(50, SplitRatios::default(), 4).unwrap();
    assert_ne!(other.train, idx.train);
    assert!(SplitIndices::generate(2, SplitRatios::default(), 0).is_err());
    assert!("0.5,0.5,0.5".parse::<SplitRatios>().is_err());
    assert!("0.8,0.1".parse::<SplitRatios>().is_err());
}

fn parse_line(err: Error) -> usize {
    match err {
        Error::Parse { line, .. } => line,
        other => panic!("expected a parse error, got {other}"),
    }
}

#[test]
fn malformed_conll() {
    assert_eq!(parse_line(parse_conll("a NN O\nb NN\n").unwrap_err()), 2);
    assert_eq!(parse_line(parse_conll("a NN X O\nb NN O\n").unwrap_err()), 2);
    assert!(parse_conll("\n\n-DOCSTART- -X- O\n\n").unwrap_err().to_string().contains("no sentences"));
    let err = parse_conll_input("a\n").unwrap_err();
    assert!(err.to_string().contains("missing POS column"), "{err}");
    let d = parse_conll_input("a NN\nb VB\n").unwrap();
    assert_eq!(d.labels(), vec![vec!["O", "O"]]);
}

#[test]
fn conll_extra_columns_and_docstart() {
    let d = parse_conll("-DOCSTART- -X- -X- O\n\nEU NNP B-NP B-ORG\nrejects VBZ B-VP O\n\n\n\nok JJ B-ADJP O\n").unwrap();
    assert_eq!(d.len(), 2);
    assert_eq!(d.labels()[0], vec!["B-ORG", "O"]);
}

#[test]
fn malformed_ssf() {
    let unclosed = "<Sentence id=\"1\">\n1\t((\tNP\t<ne=PER>\n1.1\tram\tNNP\n</Sentence>\n";
    assert_eq!(parse_line(parse_ssf(unclosed).unwrap_err()), 4);
    let nested = "<Sentence id=\"1\">\n1\t((\tNP\t<ne=PER>\n2\t((\tNP\t<ne=LOC>\n";
    let err = parse_ssf(nested).unwrap_err();
    assert!(err.to_string().contains("nested"), "{err}");
    let stray = "<Sentence id=\"1\">\n1\tram\tNNP\n\t))\n</Sentence>\n";
    assert_eq!(parse_line(parse_ssf(stray).unwrap_err()), 3);
    assert_eq!(parse_line(parse_ssf("<Sentence id=\"1\">\n1\tram\n</Sentence>\n").unwrap_err()), 2);
    assert!(parse_ssf("<Sentence id=\"1\">\n1\tram\tNNP\n").is_err());
    assert!(parse_ssf("").is_err());
}

#[test]
fn ssf_group_labels_members() {
    let text = "<Document>\n<Sentence id=\"1\">\n1\t((\tNP\t<fs ne='LOC'>\n1.1\tnayi\tNNP\n1.2\tdilli\tNNP\n\t))\n2\tmein\tPSP\n</Sentence>\n</Document>\n";
    let d = parse_ssf(text).unwrap();
    assert_eq!(d.labels(), vec![vec!["LOC", "LOC", "O"]]);
    assert_eq!(d.tag_inventory().scheme(), LabelScheme::Raw);
    let iob = normalize_labels(&d, LabelScheme::Iob2, LabelMode::Lenient).unwrap();
    assert_eq!(iob.labels(), vec![vec!["B-LOC", "I-LOC", "O"]]);
}

#[test]
fn label_normalization() {
    let d = parse_conll("a NN I-PER\nb NN I-PER\nc NN O\nd NN I-LOC\n").unwrap();
    let lenient = normalize_labels(&d, LabelScheme::Iob2, LabelMode::Lenient).unwrap();
    assert_eq!(lenient.labels()[0], vec!["B-PER", "I-PER", "O", "B-LOC"]);
    assert!(normalize_labels(&d, LabelScheme::Iob2, LabelMode::Strict).is_err());
    let raw = normalize_labels(&lenient, LabelScheme::Raw, LabelMode::Lenient).unwrap();
    assert_eq!(raw.labels()[0], vec!["PER", "PER", "O", "LOC"]);
    let again = normalize_labels(&lenient, LabelScheme::Iob2, LabelMode::Strict).unwrap();
    assert_eq!(again.labels(), lenient.labels());
}
