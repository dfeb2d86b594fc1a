pub mod embeddings;
pub mod evaluate;
pub mod ner;
pub mod predict;
pub mod rerun;
pub mod split;
pub mod synthetic;
