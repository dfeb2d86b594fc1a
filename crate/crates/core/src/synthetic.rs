//! Generated corpora with known structure, used to exercise the pipeline end
//! to end.
//!
//! Tagging task: entity words come from two 20-word lexicons, but the entity
//! type is decided by a trigger word next to the entity. Half of the triggers
//! precede the entity (`dr X`), the other half follow it (`X nagar`), so a
//! left-to-right model cannot see every cue. Decoys keep both facts necessary:
//! a lexicon word without a trigger is `O`, and a trigger next to a filler word
//! marks nothing. POS tags are assigned by word index and carry no entity
//! signal.

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Dataset, Sentence, SourceFormat, Token, OUTSIDE};
use crate::embed::derive_seed;

pub const LEXICON_SIZE: usize = 20;
pub const FILLER_COUNT: usize = 152;
/// Lexicon words, triggers and fillers together.
pub const TASK_VOCAB_SIZE: usize = 2 * LEXICON_SIZE + 8 + FILLER_COUNT;

const POS_TAGS: [&str; 5] = ["JJ", "NN", "NNP", "PSP", "VB"];
const PRE_TRIGGERS: [(&str, &str); 4] = [("shri", "PER"), ("dr", "PER"), ("zila", "LOC"), ("gaon", "LOC")];
const POST_TRIGGERS: [(&str, &str); 4] = [("ji", "PER"), ("sahab", "PER"), ("nagar", "LOC"), ("pur", "LOC")];

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticConfig {
    pub train: usize,
    pub dev: usize,
    pub test: usize,
    pub unlabeled: usize,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            train: 1000,
            dev: 200,
            test: 200,
            unlabeled: 20_000,
            seed: 7,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticTask {
    pub train: Dataset,
    pub dev: Dataset,
    pub test: Dataset,
    /// Unannotated sentences from the same distribution.
    pub unlabeled: Vec<Vec<String>>,
}

impl SyntheticTask {
    /// One sentence per line, tokens separated by spaces.
    pub fn unlabeled_text(&self) -> String {
        let mut out = String::new();
        for s in &self.unlabeled {
            out.push_str(&s.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Sentence sampler for the tagging task.
#[derive(Debug, Clone)]
pub struct TaskGenerator {
    lexicons: [Vec<String>; 2],
    fillers: Vec<String>,
    lexicon_weights: WeightedIndex<f64>,
    filler_weights: WeightedIndex<f64>,
}

fn zipf(n: usize, s: f64) -> WeightedIndex<f64> {
    WeightedIndex::new((1..=n).map(|r| 1.0 / (r as f64).powf(s))).expect("positive weights")
}

fn pos_of(word_index: usize) -> &'static str {
    POS_TAGS[(word_index * 7 + 3) % POS_TAGS.len()]
}

enum Segment {
    Entity { trigger: usize, before: bool, words: Vec<String> },
    LoneLexicon(String),
    LoneTrigger { trigger: usize, before: bool },
}

impl Default for TaskGenerator {
    fn default() -> Self {
        Self::new()
    }
}

impl TaskGenerator {
    pub fn new() -> Self {
        let lexicons = [
            (0..LEXICON_SIZE).map(|i| format!("naam{i:02}")).collect(),
            (0..LEXICON_SIZE).map(|i| format!("sthan{i:02}")).collect(),
        ];
        TaskGenerator {
            lexicons,
            fillers: (0..FILLER_COUNT).map(|i| format!("w{i:03}")).collect(),
            lexicon_weights: zipf(LEXICON_SIZE, 0.8),
            filler_weights: zipf(FILLER_COUNT, 1.0),
        }
    }

    pub fn lexicon(&self, which: usize) -> &[String] {
        &self.lexicons[which]
    }

    pub fn fillers(&self) -> &[String] {
        &self.fillers
    }

    pub fn triggers() -> Vec<(&'static str, &'static str)> {
        PRE_TRIGGERS.iter().chain(&POST_TRIGGERS).copied().collect()
    }

    /// POS tag of any task word; unknown words get `NN`.
    pub fn pos(&self, word: &str) -> &'static str {
        if let Some(i) = self.fillers.iter().position(|w| w == word) {
            return pos_of(i);
        }
        for (l, lex) in self.lexicons.iter().enumerate() {
            if let Some(i) = lex.iter().position(|w| w == word) {
                return pos_of(FILLER_COUNT + l * LEXICON_SIZE + i);
            }
        }
        if let Some(i) = Self::triggers().iter().position(|(w, _)| *w == word) {
            return pos_of(FILLER_COUNT + 2 * LEXICON_SIZE + i);
        }
        "NN"
    }

    fn lexicon_word<R: Rng>(&self, rng: &mut R) -> String {
        let lex = rng.gen_range(0..2);
        self.lexicons[lex][self.lexicon_weights.sample(rng)].clone()
    }

    fn filler<R: Rng>(&self, rng: &mut R) -> String {
        self.fillers[self.filler_weights.sample(rng)].clone()
    }

    fn token(&self, word: &str, label: &str) -> Token {
        Token::new(word, self.pos(word), label).expect("generated tokens are well formed")
    }

    pub fn sentence<R: Rng>(&self, rng: &mut R) -> Sentence {
        let mut segments = Vec::new();
        let entities = [0, 1, 1, 1, 2, 2][rng.gen_range(0..6)];
        for _ in 0..entities {
            let len = if rng.gen_bool(0.3) { 2 } else { 1 };
            segments.push(Segment::Entity {
                trigger: rng.gen_range(0..4),
                before: rng.gen_bool(0.5),
                words: (0..len).map(|_| self.lexicon_word(rng)).collect(),
            });
        }
        if rng.gen_bool(0.4) {
            segments.push(Segment::LoneLexicon(self.lexicon_word(rng)));
        }
        if rng.gen_bool(0.5) {
            segments.push(Segment::LoneTrigger {
                trigger: rng.gen_range(0..4),
                before: rng.gen_bool(0.5),
            });
        }
        segments.shuffle(rng);

        let mut tokens = Vec::new();
        let lead = rng.gen_range(0..3);
        for _ in 0..lead {
            tokens.push(self.token(&self.filler(rng), OUTSIDE));
        }
        for (i, seg) in segments.iter().enumerate() {
            if i > 0 {
                for _ in 0..rng.gen_range(1..4) {
                    tokens.push(self.token(&self.filler(rng), OUTSIDE));
                }
            }
            match seg {
                Segment::Entity { trigger, before, words } => {
                    let (tw, kind) = if *before { PRE_TRIGGERS[*trigger] } else { POST_TRIGGERS[*trigger] };
                    if *before {
                        tokens.push(self.token(tw, OUTSIDE));
                    }
                    for (j, w) in words.iter().enumerate() {
                        let prefix = if j == 0 { "B" } else { "I" };
                        tokens.push(self.token(w, &format!("{prefix}-{kind}")));
                    }
                    if !*before {
                        tokens.push(self.token(tw, OUTSIDE));
                    }
                }
                Segment::LoneLexicon(w) => tokens.push(self.token(w, OUTSIDE)),
                Segment::LoneTrigger { trigger, before } => {
                    if *before {
                        tokens.push(self.token(PRE_TRIGGERS[*trigger].0, OUTSIDE));
                        tokens.push(self.token(&self.filler(rng), OUTSIDE));
                    } else {
                        tokens.push(self.token(&self.filler(rng), OUTSIDE));
                        tokens.push(self.token(POST_TRIGGERS[*trigger].0, OUTSIDE));
                    }
                }
            }
        }
        // Trailing filler so no sentence ends on a trigger or lexicon word.
        let tail = rng.gen_range(1..4);
        for _ in 0..tail {
            tokens.push(self.token(&self.filler(rng), OUTSIDE));
        }
        Sentence::new(tokens).expect("at least one token")
    }
}

fn dataset<R: Rng>(generator: &TaskGenerator, n: usize, rng: &mut R) -> Dataset {
    Dataset::new((0..n).map(|_| generator.sentence(rng)).collect(), SourceFormat::Conll)
}

/// Train/dev/test splits and an unlabeled corpus, each from its own stream.
pub fn generate_task(cfg: &SyntheticConfig) -> SyntheticTask {
    let generator = TaskGenerator::new();
    let stream = |k: u64| ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, 0x5e17, k));
    let unlabeled = {
        let mut rng = stream(4);
        (0..cfg.unlabeled)
            .map(|_| {
                generator
                    .sentence(&mut rng)
                    .tokens()
                    .iter()
                    .map(|t| t.surface.clone())
                    .collect()
            })
            .collect()
    };
    SyntheticTask {
        train: dataset(&generator, cfg.train, &mut stream(1)),
        dev: dataset(&generator, cfg.dev, &mut stream(2)),
        test: dataset(&generator, cfg.test, &mut stream(3)),
        unlabeled,
    }
}

/// Sentences drawn from either `{a1..a5}` or `{b1..b5}`, never mixing the two.
pub fn two_cluster_corpus(sentences: usize, seed: u64) -> Vec<Vec<String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..sentences)
        .map(|_| {
            let cluster = if rng.gen_bool(0.5) { 'a' } else { 'b' };
            let len = rng.gen_range(6..=10);
            (0..len)
                .map(|_| format!("{cluster}{}", rng.gen_range(1..=5)))
                .collect()
        })
        .collect()
}
