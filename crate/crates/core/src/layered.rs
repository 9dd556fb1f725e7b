//! Layered subspace codes.
//!
//! `L` lifted Gabidulin codes with lengths `n_1, …, n_L` and a common `m` are
//! stacked into one code in ambient dimension `N + m`, `N = Σ n_l`. Layer `l`
//! owns identity columns `offset(l) .. offset(l) + n_l` and every layer shares
//! the payload columns `N .. N + m`. A codeword is the direct sum of one
//! component subspace per layer:
//!
//! ```text
//!     [ I_{n_1}   0     …    0      X_1 ]
//!     [   0     I_{n_2} …    0      X_2 ]
//!     [   ⋮                  ⋱      ⋮   ]
//!     [   0       0     …  I_{n_L}  X_L ]
//! ```
//!
//! Two decoders are provided. [`LayeredCode::decode_alg1`] decodes every
//! layer independently from the part of the received space that vanishes on
//! the other layers' identity columns. [`LayeredCode::decode_alg2`] decodes
//! layers one after another and adds every decoded component back into the
//! received space before extracting the next layer (successive interference
//! cancellation), optionally sweeping again over the layers that failed.
//!
//! Layer indices in this API are 0-based.

use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::finite_field::FieldParams;
use crate::gabidulin::{CodeError, DecodeFailure, GabidulinCode, Message};
use crate::lifted::{LiftedCode, LiftedDecoded};
use crate::matrix::{LinalgError, MatrixFq};
use crate::subspace::Subspace;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LayeredError {
    #[error("invalid layered code: {0}")]
    Parameters(String),
    #[error("layer index {index} out of range for {layers} layers")]
    LayerIndex { index: usize, layers: usize },
    #[error("expected {expected} messages, got {got}")]
    MessageCount { expected: usize, got: usize },
    #[error("components do not form a direct sum")]
    EmbeddingCollision,
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The per-layer decoder the layered algorithms call.
pub trait ComponentDecoder: Sync {
    fn decode(&self, code: &LiftedCode, received: &Subspace) -> Result<LiftedDecoded, DecodeFailure>;
}

/// [`LiftedCode::subspace_decode`].
#[derive(Clone, Copy, Debug, Default)]
pub struct BoundedDistanceDecoder;

impl ComponentDecoder for BoundedDistanceDecoder {
    fn decode(&self, code: &LiftedCode, received: &Subspace) -> Result<LiftedDecoded, DecodeFailure> {
        code.subspace_decode(received)
            .unwrap_or(Err(DecodeFailure::Malformed))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredCode {
    params: Arc<FieldParams>,
    layers: Vec<LiftedCode>,
    offsets: Vec<usize>,
    total_n: usize,
}

/// An encoded codeword with its per-layer pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredCodeword {
    pub messages: Vec<Message>,
    /// `X_l`, each `n_l × m`.
    pub matrices: Vec<MatrixFq>,
    /// `V_l` embedded in the full ambient space.
    pub components: Vec<Subspace>,
    /// `V = V_1 ⊕ … ⊕ V_L`.
    pub subspace: Subspace,
}

/// Whether a `(V, U)` pair is inside the region where both algorithms are
/// guaranteed to recover `V`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `2 d_S(V, U) < d_S(C)`.
    Guaranteed,
    BeyondCapability,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Guaranteed => "guaranteed",
            Regime::BeyondCapability => "beyond",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LayerStatus {
    Decoded(LiftedDecoded),
    Failed(DecodeFailure),
    /// Not attempted (e.g. a single-layer decode of another layer).
    Skipped,
}

impl LayerStatus {
    pub fn decoded(&self) -> Option<&LiftedDecoded> {
        match self {
            LayerStatus::Decoded(d) => Some(d),
            _ => None,
        }
    }

    pub fn is_decoded(&self) -> bool {
        matches!(self, LayerStatus::Decoded(_))
    }
}

/// One layer attempt of the successive decoder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SicStage {
    /// 1-based sweep number.
    pub sweep: usize,
    pub layer: usize,
    /// Dimension of the extracted `U_l'` this attempt decoded from.
    pub extracted_dim: usize,
    pub decoded: bool,
    /// The accumulated space after this attempt.
    pub accumulated: Subspace,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerDecodeReport {
    pub layers: Vec<LayerStatus>,
    /// `⊕` of the decoded components, failed layers contributing `{0}`.
    pub recomposed: Subspace,
    /// Sweeps executed by the successive decoder (0 for the parallel one).
    pub sweeps: usize,
    pub stages: Vec<SicStage>,
}

impl LayerDecodeReport {
    pub fn all_decoded(&self) -> bool {
        self.layers.iter().all(LayerStatus::is_decoded)
    }

    pub fn decoded_layers(&self) -> Vec<usize> {
        (0..self.layers.len()).filter(|&l| self.layers[l].is_decoded()).collect()
    }

    /// `d_S(V, U)` followed by `d_S(V, S)` for the accumulated space `S`
    /// after every stage.
    pub fn distance_chain(&self, transmitted: &Subspace, received: &Subspace) -> Result<Vec<usize>, LinalgError> {
        let mut chain = vec![transmitted.distance(received)?];
        for stage in &self.stages {
            chain.push(transmitted.distance(&stage.accumulated)?);
        }
        Ok(chain)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum SicOrder {
    /// Layer `L` first.
    #[default]
    Descending,
    Ascending,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SicOptions {
    pub iterative: bool,
    pub max_sweeps: usize,
    pub order: SicOrder,
}

impl Default for SicOptions {
    fn default() -> Self {
        SicOptions {
            iterative: false,
            max_sweeps: 1,
            order: SicOrder::Descending,
        }
    }
}

impl SicOptions {
    pub fn iterative(max_sweeps: usize) -> Self {
        SicOptions {
            iterative: true,
            max_sweeps,
            order: SicOrder::Descending,
        }
    }
}

impl LayeredCode {
    /// Builds the code from `(n_l, k_l)` pairs with default evaluation points.
    pub fn new(params: &Arc<FieldParams>, layout: &[(usize, usize)]) -> Result<Self, LayeredError> {
        let codes = layout
            .iter()
            .map(|&(n, k)| GabidulinCode::new(params, n, k))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_codes(codes)
    }

    pub fn from_codes(codes: Vec<GabidulinCode>) -> Result<Self, LayeredError> {
        let first = codes
            .first()
            .ok_or_else(|| LayeredError::Parameters("at least one layer is required".into()))?;
        let params = Arc::clone(first.params());
        if codes.iter().any(|c| c.params() != &params) {
            return Err(LayeredError::Parameters(
                "all layers must share the same field".into(),
            ));
        }
        let mut offsets = Vec::with_capacity(codes.len());
        let mut total_n = 0;
        for c in &codes {
            offsets.push(total_n);
            total_n += c.n();
        }
        Ok(LayeredCode {
            params,
            layers: codes.into_iter().map(LiftedCode::new).collect(),
            offsets,
            total_n,
        })
    }

    pub fn params(&self) -> &Arc<FieldParams> {
        &self.params
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    pub fn layer(&self, l: usize) -> Result<&LiftedCode, LayeredError> {
        self.layers.get(l).ok_or(LayeredError::LayerIndex {
            index: l,
            layers: self.layers.len(),
        })
    }

    pub fn layers(&self) -> &[LiftedCode] {
        &self.layers
    }

    pub fn m(&self) -> usize {
        self.params.m()
    }

    /// `N = Σ n_l`.
    pub fn total_n(&self) -> usize {
        self.total_n
    }

    pub fn ambient_dim(&self) -> usize {
        self.total_n + self.m()
    }

    pub fn offset(&self, l: usize) -> usize {
        self.offsets[l]
    }

    /// `(n_l, k_l)` for every layer.
    pub fn layout(&self) -> Vec<(usize, usize)> {
        self.layers.iter().map(|c| (c.n(), c.k())).collect()
    }

    /// `min_l d_S(C_l)`.
    pub fn min_distance(&self) -> usize {
        self.layers
            .iter()
            .map(LiftedCode::min_subspace_distance)
            .min()
            .expect("at least one layer")
    }

    /// Ambient positions of layer `l`'s own coordinates: its identity block
    /// followed by the payload columns.
    pub fn layer_positions(&self, l: usize) -> Vec<usize> {
        let n_l = self.layers[l].n();
        let start = self.offsets[l];
        (start..start + n_l)
            .chain(self.total_n..self.ambient_dim())
            .collect()
    }

    /// The identity columns of every other layer (0-based), i.e. the
    /// coordinates on which `U_l` must vanish.
    pub fn foreign_identity_coords(&self, l: usize) -> Vec<usize> {
        let start = self.offsets[l];
        let end = start + self.layers[l].n();
        (0..start).chain(end..self.total_n).collect()
    }

    pub fn random_messages<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Message> {
        self.layers
            .iter()
            .map(|c| c.inner().random_message(rng))
            .collect()
    }

    /// `V_l` for the payload `x`, embedded in the full ambient space.
    pub fn component_subspace(&self, l: usize, x: &MatrixFq) -> Result<Subspace, LayeredError> {
        let lifted = self.layer(l)?.lift(x)?;
        Ok(self.embed_component(l, &lifted))
    }

    /// Embeds a subspace of layer `l`'s stripped ambient `F_q^{n_l + m}`.
    pub fn embed_component(&self, l: usize, component: &Subspace) -> Subspace {
        component.embed(self.ambient_dim(), &self.layer_positions(l))
    }

    pub fn encode(&self, messages: &[Message]) -> Result<LayeredCodeword, LayeredError> {
        if messages.len() != self.layers.len() {
            return Err(LayeredError::MessageCount {
                expected: self.layers.len(),
                got: messages.len(),
            });
        }
        let mut matrices = Vec::with_capacity(messages.len());
        let mut components = Vec::with_capacity(messages.len());
        for (l, (code, msg)) in self.layers.iter().zip(messages).enumerate() {
            let x = code.inner().encode(msg)?.to_matrix(&self.params);
            components.push(self.component_subspace(l, &x)?);
            matrices.push(x);
        }
        let subspace = self.direct_sum(&components)?;
        Ok(LayeredCodeword {
            messages: messages.to_vec(),
            matrices,
            components,
            subspace,
        })
    }

    fn direct_sum(&self, components: &[Subspace]) -> Result<Subspace, LayeredError> {
        let f = self.params.base();
        let mut acc = MatrixFq::zeros(f, 0, self.ambient_dim());
        let mut expected = 0;
        for c in components {
            if c.ambient_dim() != self.ambient_dim() {
                return Err(LayeredError::Linalg(LinalgError::AmbientMismatch {
                    left: c.ambient_dim(),
                    right: self.ambient_dim(),
                }));
            }
            acc = acc.vstack(c.basis())?;
            expected += c.dim();
        }
        let sum = Subspace::row_space(&acc);
        if sum.dim() != expected {
            return Err(LayeredError::EmbeddingCollision);
        }
        Ok(sum)
    }

    /// Rebuilds `V̂` from per-layer components given in each layer's stripped
    /// ambient (`{0}` for a missing layer).
    pub fn recompose(&self, components: &[Subspace]) -> Result<Subspace, LayeredError> {
        if components.len() != self.layers.len() {
            return Err(LayeredError::MessageCount {
                expected: self.layers.len(),
                got: components.len(),
            });
        }
        let embedded = components
            .iter()
            .enumerate()
            .map(|(l, c)| {
                let own = self.layers[l].ambient_dim();
                if c.ambient_dim() != own {
                    return Err(LayeredError::Linalg(LinalgError::AmbientMismatch {
                        left: c.ambient_dim(),
                        right: own,
                    }));
                }
                Ok(self.embed_component(l, c))
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.direct_sum(&embedded)
    }

    fn check_received(&self, u: &Subspace) -> Result<(), LayeredError> {
        if u.ambient_dim() != self.ambient_dim() {
            return Err(LayeredError::Linalg(LinalgError::AmbientMismatch {
                left: u.ambient_dim(),
                right: self.ambient_dim(),
            }));
        }
        Ok(())
    }

    /// `U ∩ {x : x vanishes on the other layers' identity columns}`, still
    /// in the full ambient space.
    pub fn extract_component_unstripped(&self, u: &Subspace, l: usize) -> Result<Subspace, LayeredError> {
        self.check_received(u)?;
        self.layer(l)?;
        Ok(u.vanishing_on(&self.foreign_identity_coords(l)))
    }

    /// `U_l`: the vectors of `U` vanishing on the other layers' identity
    /// columns, with those columns removed (a subspace of `F_q^{n_l + m}`).
    pub fn extract_component(&self, u: &Subspace, l: usize) -> Result<Subspace, LayeredError> {
        let unstripped = self.extract_component_unstripped(u, l)?;
        Ok(unstripped.delete_coordinates(&self.foreign_identity_coords(l)))
    }

    pub fn regime(&self, v: &Subspace, u: &Subspace) -> Result<Regime, LayeredError> {
        Ok(if 2 * v.distance(u)? < self.min_distance() {
            Regime::Guaranteed
        } else {
            Regime::BeyondCapability
        })
    }

    fn try_layer<D: ComponentDecoder + ?Sized>(
        &self,
        u: &Subspace,
        l: usize,
        decoder: &D,
    ) -> Result<(usize, LayerStatus), LayeredError> {
        let extracted = self.extract_component(u, l)?;
        let status = match decoder.decode(&self.layers[l], &extracted) {
            Ok(d) => LayerStatus::Decoded(d),
            Err(f) => LayerStatus::Failed(f),
        };
        Ok((extracted.dim(), status))
    }

    fn recompose_statuses(&self, statuses: &[LayerStatus]) -> Result<Subspace, LayeredError> {
        let f = self.params.base();
        let parts: Vec<Subspace> = statuses
            .iter()
            .enumerate()
            .map(|(l, s)| match s {
                LayerStatus::Decoded(d) => d.subspace.clone(),
                _ => Subspace::zero(f, self.layers[l].ambient_dim()),
            })
            .collect();
        self.recompose(&parts)
    }

    /// Decodes only layer `l` (extract, then component decode).
    pub fn decode_layer<D: ComponentDecoder + ?Sized>(
        &self,
        u: &Subspace,
        l: usize,
        decoder: &D,
    ) -> Result<LayerStatus, LayeredError> {
        self.check_received(u)?;
        self.layer(l)?;
        Ok(self.try_layer(u, l, decoder)?.1)
    }

    /// Parallel per-layer decoding with the bounded-distance component decoder.
    pub fn decode_alg1(&self, u: &Subspace) -> Result<LayerDecodeReport, LayeredError> {
        self.decode_alg1_with(u, &BoundedDistanceDecoder)
    }

    /// Parallel per-layer decoding: every layer is extracted from `U` and
    /// decoded on its own.
    pub fn decode_alg1_with<D: ComponentDecoder + ?Sized>(
        &self,
        u: &Subspace,
        decoder: &D,
    ) -> Result<LayerDecodeReport, LayeredError> {
        self.check_received(u)?;
        let layers = (0..self.layers.len())
            .map(|l| Ok(self.try_layer(u, l, decoder)?.1))
            .collect::<Result<Vec<_>, LayeredError>>()?;
        Ok(LayerDecodeReport {
            recomposed: self.recompose_statuses(&layers)?,
            layers,
            sweeps: 0,
            stages: Vec::new(),
        })
    }

    /// Successive decoding with the bounded-distance component decoder.
    pub fn decode_alg2(&self, u: &Subspace, options: &SicOptions) -> Result<LayerDecodeReport, LayeredError> {
        self.decode_alg2_with(u, options, &BoundedDistanceDecoder)
    }

    /// Successive interference cancellation.
    ///
    /// Starting from `S = U`, layers are visited in `options.order`; layer
    /// `l` is extracted from `S` and decoded, and on success `S` becomes
    /// `S + V̂_l`. A failed layer contributes `{0}`. In iterative mode the
    /// layers that failed are retried in further sweeps until a sweep decodes
    /// nothing new, every layer is decoded, or `max_sweeps` is reached.
    /// Decoded layers are never revisited.
    pub fn decode_alg2_with<D: ComponentDecoder + ?Sized>(
        &self,
        u: &Subspace,
        options: &SicOptions,
        decoder: &D,
    ) -> Result<LayerDecodeReport, LayeredError> {
        self.check_received(u)?;
        if options.max_sweeps == 0 {
            return Err(LayeredError::Parameters("max_sweeps must be at least 1".into()));
        }
        let order: Vec<usize> = match options.order {
            SicOrder::Descending => (0..self.layers.len()).rev().collect(),
            SicOrder::Ascending => (0..self.layers.len()).collect(),
        };
        let sweeps_allowed = if options.iterative { options.max_sweeps } else { 1 };
        let mut statuses = vec![LayerStatus::Skipped; self.layers.len()];
        let mut accumulated = u.clone();
        let mut stages = Vec::new();
        let mut sweeps = 0;
        for sweep in 1..=sweeps_allowed {
            sweeps = sweep;
            let mut progress = false;
            for &l in &order {
                if statuses[l].is_decoded() {
                    continue;
                }
                let (extracted_dim, status) = self.try_layer(&accumulated, l, decoder)?;
                let decoded = status.is_decoded();
                if let LayerStatus::Decoded(d) = &status {
                    accumulated = accumulated.sum(&self.embed_component(l, &d.subspace))?;
                    progress = true;
                }
                statuses[l] = status;
                stages.push(SicStage {
                    sweep,
                    layer: l,
                    extracted_dim,
                    decoded,
                    accumulated: accumulated.clone(),
                });
            }
            if !progress || statuses.iter().all(LayerStatus::is_decoded) {
                break;
            }
        }
        Ok(LayerDecodeReport {
            recomposed: self.recompose_statuses(&statuses)?,
            layers: statuses,
            sweeps,
            stages,
        })
    }
}
