//! Tagger training: Adam, length-bucketed batches, the epoch loop with
//! dev-set model selection, and prediction from a saved model.

mod adam;
mod batching;
mod config;
mod history;
mod predict;
mod trainer;

pub use adam::{AdamConfig, adam_step};
pub use batching::{batch_plan, encode_dataset, encode_sentence, make_batches, MAX_SENTENCE_LEN};
pub use config::{apply_config, parse_bool, render_config, TrainConfig};
pub use history::{EpochRecord, TrainHistory};
pub use predict::Tagger;
pub use trainer::{train_ner, EmbeddingInit, TrainOutcome, CLIP_NORM};
