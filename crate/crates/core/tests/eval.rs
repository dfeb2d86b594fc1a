use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seqtag::eval::{chunk_prf, extract_chunks, format_report, parse_interchange, token_prf, Chunk, ReportStyle};

const LABELS: [&str; 5] = ["O", "B-A", "I-A", "B-B", "I-B"];

/// Per-token start flags first, then grouping; written independently of the library.
fn oracle_chunks(labels: &[&str]) -> Vec<Chunk> {
    let kind = |l: &str| if l == "O" { None } else { Some(l[2..].to_string()) };
    let starts: Vec<bool> = (0..labels.len())
        .map(|i| match kind(labels[i]) {
            None => false,
            Some(k) => labels[i].starts_with("B-") || i == 0 || kind(labels[i - 1]).as_deref() != Some(k.as_str()),
        })
        .collect();
    let mut out = Vec::new();
    for i in 0..labels.len() {
        if starts[i] {
            let mut end = i + 1;
            while end < labels.len() && !starts[end] && kind(labels[end]).is_some() {
                end += 1;
            }
            out.push(Chunk {
                kind: kind(labels[i]).unwrap(),
                start: i,
                end,
            });
        }
    }
    out
}

#[test]
fn chunk_extraction_exhaustive() {
    let mut count = 0;
    for len in 0..=6u32 {
        for code in 0..5usize.pow(len) {
            let mut c = code;
            let labels: Vec<&str> = (0..len)
                .map(|_| {
                    let l = LABELS[c % 5];
                    c /= 5;
                    l
                })
                .collect();
            assert_eq!(extract_chunks(&labels).unwrap(), oracle_chunks(&labels), "{labels:?}");
            count += 1;
        }
    }
    assert_eq!(count, (0..=6).map(|n| 5usize.pow(n)).sum::<usize>());
}

fn random_labels(rng: &mut ChaCha8Rng, len: usize) -> Vec<String> {
    (0..len).map(|_| LABELS[rng.gen_range(0..5)].to_string()).collect()
}

#[test]
fn random_tallies_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let n = rng.gen_range(1..8);
        let gold: Vec<Vec<String>> = (0..n).map(|_| { let l = rng.gen_range(1..10); random_labels(&mut rng, l) }).collect();
        let pred: Vec<Vec<String>> = gold.iter().map(|g| random_labels(&mut rng, g.len())).collect();

        let mut chunk: BTreeMap<String, [u64; 3]> = BTreeMap::new();
        let mut token: BTreeMap<String, [u64; 3]> = BTreeMap::new();
        for (g, p) in gold.iter().zip(&pred) {
            let gs: Vec<&str> = g.iter().map(String::as_str).collect();
            let ps: Vec<&str> = p.iter().map(String::as_str).collect();
            let (gc, pc) = (oracle_chunks(&gs), oracle_chunks(&ps));
            for c in &pc {
                chunk.entry(c.kind.clone()).or_default()[if gc.contains(c) { 0 } else { 1 }] += 1;
            }
            for c in gc.iter().filter(|c| !pc.contains(c)) {
                chunk.entry(c.kind.clone()).or_default()[2] += 1;
            }
            for (a, b) in gs.iter().zip(&ps) {
                let (a, b) = (a.trim_start_matches(['B', 'I']).trim_start_matches('-'), b.trim_start_matches(['B', 'I']).trim_start_matches('-'));
                if a == b && a != "O" {
                    token.entry(a.to_string()).or_default()[0] += 1;
                } else if a != b {
                    if b != "O" {
                        token.entry(b.to_string()).or_default()[1] += 1;
                    }
                    if a != "O" {
                        token.entry(a.to_string()).or_default()[2] += 1;
                    }
                }
            }
        }
        for (report, want) in [(chunk_prf(&gold, &pred).unwrap(), chunk), (token_prf(&gold, &pred).unwrap(), token)] {
            let got: BTreeMap<String, [u64; 3]> = report.rows.iter().map(|(k, s)| (k.clone(), [s.tp, s.fp, s.fn_])).collect();
            assert_eq!(got, want);
            let tp: u64 = want.values().map(|v| v[0]).sum();
            let fp: u64 = want.values().map(|v| v[1]).sum();
            let fn_: u64 = want.values().map(|v| v[2]).sum();
            assert_eq!((report.total.tp, report.total.fp, report.total.fn_), (tp, fp, fn_));
            let p = if tp + fp == 0 { 0.0 } else { tp as f64 / (tp + fp) as f64 };
            let r = if tp + fn_ == 0 { 0.0 } else { tp as f64 / (tp + fn_) as f64 };
            let f = if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
            assert!((report.total.f1 - f).abs() < 1e-12);
        }
    }
}

fn v(labels: &[&str]) -> Vec<String> {
    labels.iter().map(|s| s.to_string()).collect()
}

#[test]
fn golden_chunk_report() {
    let gold = vec![v(&["B-PER", "I-PER", "O", "B-LOC"]), v(&["B-ORG", "O", "B-PER"])];
    let pred = vec![v(&["B-PER", "I-PER", "O", "B-ORG"]), v(&["B-ORG", "O", "O"])];
    let report = chunk_prf(&gold, &pred).unwrap();
    let want = include_str!("data/golden_chunk_report.tsv");
    assert_eq!(format_report(&report, ReportStyle::Machine), want);
    let human = format_report(&report, ReportStyle::Human);
    assert_eq!(human.lines().count(), 5);
    assert!(human.lines().last().unwrap().starts_with("Total:"));
}

#[test]
fn sentence_order_does_not_matter() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let gold: Vec<Vec<String>> = (0..20).map(|_| random_labels(&mut rng, 6)).collect();
    let pred: Vec<Vec<String>> = (0..20).map(|_| random_labels(&mut rng, 6)).collect();
    let order: Vec<usize> = (0..20).rev().collect();
    let pg: Vec<_> = order.iter().map(|&i| gold[i].clone()).collect();
    let pp: Vec<_> = order.iter().map(|&i| pred[i].clone()).collect();
    assert_eq!(chunk_prf(&gold, &pred).unwrap(), chunk_prf(&pg, &pp).unwrap());
    assert_eq!(token_prf(&gold, &pred).unwrap(), token_prf(&pg, &pp).unwrap());
}

#[test]
fn token_scores_ignore_prefixes() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let strip = |s: &[Vec<String>]| -> Vec<Vec<String>> {
        s.iter().map(|r| r.iter().map(|l| l.rsplit('-').next().unwrap().to_string()).collect()).collect()
    };
    let gold: Vec<Vec<String>> = (0..10).map(|_| random_labels(&mut rng, 7)).collect();
    let pred: Vec<Vec<String>> = (0..10).map(|_| random_labels(&mut rng, 7)).collect();
    assert_eq!(
        token_prf(&gold, &pred).unwrap().rows,
        token_prf(&strip(&gold), &strip(&pred)).unwrap().rows
    );
    assert!(chunk_prf(&strip(&gold), &strip(&pred)).is_err());
}

#[test]
fn single_token_chunks_agree_with_token_scores() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let pick = |rng: &mut ChaCha8Rng| ["O", "B-A", "B-B"][rng.gen_range(0..3)].to_string();
    let gold: Vec<Vec<String>> = (0..15).map(|_| (0..5).map(|_| pick(&mut rng)).collect()).collect();
    let pred: Vec<Vec<String>> = (0..15).map(|_| (0..5).map(|_| pick(&mut rng)).collect()).collect();
    let c = chunk_prf(&gold, &pred).unwrap();
    let t = token_prf(&gold, &pred).unwrap();
    assert_eq!(c.rows, t.rows);
    assert_eq!(c.total, t.total);
}

#[test]
fn interchange_errors_name_line() {
    let err = parse_interchange("a NN O O\nb NN O\n").unwrap_err();
    assert!(matches!(err, seqtag::Error::Parse { line: 2, .. }), "{err}");
    assert!(parse_interchange("").unwrap().sentences.is_empty());
}
