//! Word vectors from unannotated text: skip-gram with negative sampling and
//! GloVe over a windowed co-occurrence table, plus the text vector format.

mod cooccur;
mod glove;
mod hogwild;
mod skipgram;
mod source;
mod table;

pub use cooccur::{build_cooccurrence, read_spill, write_spill, CooccurrenceTable};
pub use glove::{glove_objective, glove_weight, train_glove, GloveConfig, GloveParams};
pub use hogwild::derive_seed;
pub use skipgram::{generate_skipgram_pairs, train_sgns, PairOptions, SgnsConfig, Subsampler};
pub use source::{CorpusSource, TextCorpus};
pub use table::{load_vectors, nearest_neighbors, read_vectors, save_vectors, seeded_uniform, write_vectors, EmbeddingTable};

/// Table produced by a trainer plus its per-epoch mean loss.
#[derive(Debug, Clone)]
pub struct TrainedEmbeddings {
    pub table: EmbeddingTable,
    pub epoch_losses: Vec<f64>,
}
