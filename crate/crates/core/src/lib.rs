//! Neural sequence labeling toolkit.
//!
//! Two stages: word vectors are learned from unannotated text ([`embed`]), then a
//! recurrent tagger over word vectors and one-hot POS tags is trained on labeled
//! sentences ([`nn`], [`train`]) and scored with entity-level metrics ([`eval`]).

pub mod corpus;
pub mod embed;
mod error;
pub mod eval;
pub mod nn;
pub mod synthetic;
pub mod train;

pub use embed::derive_seed;
pub use error::{Error, Result};
