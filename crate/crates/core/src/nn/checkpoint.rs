use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use super::{CellType, Matrix, Network, NetworkConfig, ParamStore, Precision, Real};
use crate::corpus::{TagInventory, Vocabulary};
use crate::{Error, Result};

pub const CHECKPOINT_FORMAT: &str = "SEQTAG-1";
const MANIFEST: &str = "manifest.txt";
const VOCAB: &str = "vocab.txt";
const POS: &str = "pos.txt";
const LABELS: &str = "labels.txt";

/// A trained tagger: parameters plus the id spaces they were trained against.
#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint<T> {
    pub config: NetworkConfig,
    pub store: ParamStore<T>,
    pub vocab: Vocabulary,
    pub tags: TagInventory,
    /// Free-form `key value` pairs (keys without whitespace, values on one line).
    pub metadata: BTreeMap<String, String>,
}

fn manifest_err(msg: impl Into<String>) -> Error {
    Error::data(format!("checkpoint manifest: {}", msg.into()))
}

/// Reads only the element type recorded in a checkpoint directory.
pub fn read_checkpoint_dtype(dir: impl AsRef<Path>) -> Result<Precision> {
    let text = fs::read_to_string(dir.as_ref().join(MANIFEST))?;
    let mut lines = text.lines();
    check_format(lines.next())?;
    for line in lines {
        if let Some(rest) = line.strip_prefix("dtype ") {
            return rest.parse();
        }
    }
    Err(manifest_err("no dtype line"))
}

fn check_format(line: Option<&str>) -> Result<()> {
    match line.and_then(|l| l.strip_prefix("format ")) {
        Some(CHECKPOINT_FORMAT) => Ok(()),
        Some(other) => Err(manifest_err(format!("unsupported format `{other}`"))),
        None => Err(manifest_err("missing format line")),
    }
}

impl<T: Real> Checkpoint<T> {
    pub fn network(&self) -> Result<Network> {
        Network::bind(self.config.clone(), &self.store)
    }

    pub fn save(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        self.network()?;
        fs::create_dir_all(dir)?;
        let c = &self.config;
        let mut m = String::new();
        m.push_str(&format!("format {CHECKPOINT_FORMAT}\n"));
        m.push_str(&format!("dtype {}\n", T::PRECISION));
        m.push_str(&format!("step {}\n", self.store.step()));
        m.push_str(&format!("config cell {}\n", c.cell));
        m.push_str(&format!("config bidirectional {}\n", c.bidirectional));
        m.push_str(&format!("config layers {}\n", c.layers));
        m.push_str(&format!("config hidden {}\n", c.hidden));
        m.push_str(&format!("config embed_dim {}\n", c.embed_dim));
        m.push_str(&format!("config pos_count {}\n", c.pos_count));
        m.push_str(&format!("config classes {}\n", c.classes));
        m.push_str(&format!("config dropout {}\n", c.dropout));
        for (k, v) in &self.metadata {
            if k.is_empty() || k.chars().any(char::is_whitespace) || v.contains('\n') {
                return Err(Error::data(format!("metadata entry `{k}` cannot be stored")));
            }
            m.push_str(&format!("meta {k} {v}\n"));
        }
        for p in self.store.iter() {
            let file = format!("{}.bin", p.name());
            let (rows, cols) = p.value().shape();
            m.push_str(&format!(
                "param {} {rows} {cols} {} {file} {}\n",
                p.name(),
                T::PRECISION,
                if p.is_frozen() { "frozen" } else { "trainable" }
            ));
            let mut bytes = Vec::with_capacity(p.len() * T::BYTES);
            for &x in p.value().data() {
                x.write_le(&mut bytes);
            }
            fs::write(dir.join(file), bytes)?;
        }
        m.push_str(&format!("vocab {VOCAB}\npos {POS}\nlabels {LABELS}\n"));

        let mut vocab = format!("min_count {}\n", self.vocab.min_count());
        for (w, n) in self.vocab.words().iter().zip(self.vocab.counts()).skip(2) {
            vocab.push_str(&format!("{w}\t{n}\n"));
        }
        fs::write(dir.join(VOCAB), vocab)?;
        fs::write(dir.join(POS), lines(self.tags.pos_tags()))?;
        fs::write(dir.join(LABELS), lines(self.tags.ne_labels()))?;
        fs::write(dir.join(MANIFEST), m)?;
        Ok(())
    }

    pub fn load(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let text = fs::read_to_string(dir.join(MANIFEST))?;
        let mut lines_iter = text.lines();
        check_format(lines_iter.next())?;

        let mut config: BTreeMap<String, String> = BTreeMap::new();
        let mut metadata = BTreeMap::new();
        let mut store = ParamStore::new();
        let mut step = 0;
        let mut dtype = None;
        for line in lines_iter {
            let fields: Vec<&str> = line.splitn(6, ' ').collect();
            match fields.as_slice() {
                ["dtype", d] => {
                    let d: Precision = d.parse()?;
                    if d != T::PRECISION {
                        return Err(Error::config(format!(
                            "checkpoint stores {d} parameters, {} requested",
                            T::PRECISION
                        )));
                    }
                    dtype = Some(d);
                }
                ["step", s] => step = s.parse().map_err(|_| manifest_err(format!("bad step `{s}`")))?,
                ["config", k, v] => {
                    config.insert(k.to_string(), v.to_string());
                }
                ["meta", k, rest @ ..] => {
                    metadata.insert(k.to_string(), rest.join(" "));
                }
                ["param", name, rows, cols, d, rest] => {
                    let (file, state) = rest.split_once(' ').unwrap_or((rest, "trainable"));
                    let parse = |x: &str| x.parse::<usize>().map_err(|_| manifest_err(format!("bad dimension `{x}`")));
                    let (rows, cols) = (parse(rows)?, parse(cols)?);
                    if d.parse::<Precision>()? != T::PRECISION {
                        return Err(manifest_err(format!("parameter `{name}` stored as {d}")));
                    }
                    let bytes = fs::read(dir.join(file))?;
                    if bytes.len() != rows * cols * T::BYTES {
                        return Err(manifest_err(format!(
                            "`{file}` holds {} bytes, expected {}",
                            bytes.len(),
                            rows * cols * T::BYTES
                        )));
                    }
                    let data = bytes.chunks_exact(T::BYTES).map(T::read_le).collect();
                    let id = store.add(name, Matrix::from_vec(rows, cols, data)?)?;
                    store.set_frozen(id, state == "frozen");
                }
                ["vocab", _] | ["pos", _] | ["labels", _] => {}
                _ if line.trim().is_empty() => {}
                _ => return Err(manifest_err(format!("unrecognized line `{line}`"))),
            }
        }
        if dtype.is_none() {
            return Err(manifest_err("no dtype line"));
        }
        store.set_step(step);

        let get = |k: &str| config.get(k).ok_or_else(|| manifest_err(format!("missing config field `{k}`")));
        let num = |k: &str| -> Result<usize> {
            get(k)?.parse().map_err(|_| manifest_err(format!("config field `{k}` is not an integer")))
        };
        let config = NetworkConfig {
            cell: get("cell")?.parse::<CellType>()?,
            bidirectional: get("bidirectional")?
                .parse()
                .map_err(|_| manifest_err("config field `bidirectional` is not a boolean"))?,
            layers: num("layers")?,
            hidden: num("hidden")?,
            embed_dim: num("embed_dim")?,
            pos_count: num("pos_count")?,
            classes: num("classes")?,
            dropout: get("dropout")?
                .parse()
                .map_err(|_| manifest_err("config field `dropout` is not a number"))?,
        };

        let vocab = read_vocab(&fs::read_to_string(dir.join(VOCAB))?)?;
        let pos: Vec<String> = fs::read_to_string(dir.join(POS))?.lines().map(str::to_string).collect();
        let labels: Vec<String> = fs::read_to_string(dir.join(LABELS))?.lines().map(str::to_string).collect();
        let tags = TagInventory::from_ordered(pos, labels);

        let ckpt = Checkpoint {
            config,
            store,
            vocab,
            tags,
            metadata,
        };
        let net = ckpt.network()?;
        let emb_rows = ckpt.store.value(net.embedding_id()).rows();
        if emb_rows != ckpt.vocab.len() {
            return Err(Error::config(format!(
                "embedding has {emb_rows} rows but the vocabulary has {} words",
                ckpt.vocab.len()
            )));
        }
        if ckpt.tags.pos_count() != ckpt.config.pos_count || ckpt.tags.label_count() != ckpt.config.classes {
            return Err(Error::config("tag inventory does not match the network configuration"));
        }
        Ok(ckpt)
    }
}

fn lines(items: &[String]) -> String {
    items.iter().map(|s| format!("{s}\n")).collect()
}

fn read_vocab(text: &str) -> Result<Vocabulary> {
    let mut lines = text.lines();
    let min_count = lines
        .next()
        .and_then(|l| l.strip_prefix("min_count "))
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| manifest_err("vocabulary file lacks a min_count header"))?;
    let entries = lines
        .enumerate()
        .map(|(i, l)| {
            let (w, n) = l
                .split_once('\t')
                .ok_or_else(|| Error::parse(i + 2, "expected `word<TAB>count`"))?;
            let n = n.parse().map_err(|_| Error::parse(i + 2, format!("bad count `{n}`")))?;
            Ok((w.to_string(), n))
        })
        .collect::<Result<Vec<_>>>()?;
    Vocabulary::from_parts(entries, min_count)
}
