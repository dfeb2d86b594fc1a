//! Differentiable building blocks of the tagger with hand-written backward
//! passes: input layer, vanilla RNN and LSTM cells, bidirectional wrapper,
//! inverted dropout and softmax cross-entropy.

mod batch;
mod bidirectional;
mod checkpoint;
mod dropout;
mod gradcheck;
mod init;
mod input;
mod matrix;
mod network;
mod params;
mod real;
mod recurrent;
mod softmax;

pub use batch::{Sequence, SequenceBatch, NO_POS};
pub use bidirectional::{bidirectional_backward, bidirectional_forward, BidirectionalCache};
pub use checkpoint::{read_checkpoint_dtype, Checkpoint, CHECKPOINT_FORMAT};
pub use dropout::{dropout_backward, dropout_forward, DropoutMask, Mode};
pub use gradcheck::{check_gradients, gradient_check, GradCheckOptions, GradCheckReport, ParamCheck};
pub use init::{orthogonal, xavier_uniform};
pub use input::{embed_concat, embed_concat_backward};
pub use matrix::Matrix;
pub use network::{CellType, ForwardPass, Network, NetworkConfig, StepOutput};
pub use params::{Param, ParamId, ParamStore};
pub use real::{Precision, Real};
pub use recurrent::{
    lstm_forward, recurrent_backward, recurrent_forward, rnn_forward, CellWeights, Direction, RecurrentCache,
    RecurrentGrads,
};
pub use softmax::{softmax_xent, SoftmaxOutput};
