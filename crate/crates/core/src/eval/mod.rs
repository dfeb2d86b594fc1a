//! Token-level and chunk-level precision/recall/F1 with CoNLL chunk semantics.

mod chunks;
mod interchange;
mod metrics;
mod report;

pub use chunks::{extract_chunks, Chunk};
pub use interchange::{parse_interchange, write_interchange, Interchange, InterchangeToken};
pub use metrics::{chunk_prf, token_prf, EvalLevel, EvalReport, Scores};
pub use report::{format_report, ReportStyle};
