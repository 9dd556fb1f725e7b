//! Layered subspace codes built from lifted Gabidulin codes, the operator
//! channel they are designed for, and the parallel and successive layered
//! decoders.

pub mod channel;
pub mod finite_field;
pub mod gabidulin;
pub mod layered;
pub mod lifted;
pub mod matrix;
pub mod rng;
pub mod subspace;

pub use channel::{ChannelError, ChannelMode, ChannelOutcome, ChannelSpec};
pub use finite_field::{ExtFieldElement, FieldError, FieldParams, PrimeField};
pub use gabidulin::{CodeError, DecodeFailure, ErasureHints, GabidulinCode, LinearizedPoly, Message, RankCodeword};
pub use layered::{
    BoundedDistanceDecoder, ComponentDecoder, LayerDecodeReport, LayerStatus, LayeredCode, LayeredCodeword,
    LayeredError, Regime, SicOptions, SicOrder, SicStage,
};
pub use lifted::{LiftedCode, LiftedDecoded};
pub use matrix::{rank_distance, LinalgError, MatrixFq};
pub use subspace::{subspace_distance, Subspace};
