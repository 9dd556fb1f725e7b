//! One encode → channel → decode cycle.
//!
//! Every consumer (simulation, scenarios, search, verification) draws its
//! instances through [`generate`], so two runs that use the same seed, grid
//! point and trial index see the same codeword and the same received space.

use lsc_core::channel::{apply_with, ChannelMode, ChannelOutcome};
use lsc_core::rng::{derive_seed, rng_from_seed};
use lsc_core::{
    ComponentDecoder, DecodeFailure, LayerDecodeReport, LayerStatus, LayeredCode, LayeredCodeword, Regime,
    SicOptions, Subspace,
};

use crate::config::Algorithm;
use crate::HarnessError;

#[derive(Clone, Debug)]
pub struct TrialInstance {
    pub grid_point: usize,
    pub trial: u64,
    pub seed: u64,
    pub mode: ChannelMode,
    pub codeword: LayeredCodeword,
    pub outcome: ChannelOutcome,
}

impl TrialInstance {
    pub fn transmitted(&self) -> &Subspace {
        &self.codeword.subspace
    }

    pub fn received(&self) -> &Subspace {
        &self.outcome.received
    }
}

/// Seeds the trial from `(base_seed, grid_point, trial)`, draws one message
/// per layer, encodes, and passes the codeword through the channel.
pub fn generate(
    code: &LayeredCode,
    mode: ChannelMode,
    base_seed: u64,
    grid_point: usize,
    trial: u64,
) -> Result<TrialInstance, HarnessError> {
    let seed = derive_seed(base_seed, grid_point as u64, trial);
    let mut rng = rng_from_seed(seed);
    let messages = code.random_messages(&mut rng);
    let codeword = code.encode(&messages)?;
    let outcome = apply_with(&codeword.subspace, mode, &mut rng)?;
    Ok(TrialInstance {
        grid_point,
        trial,
        seed,
        mode,
        codeword,
        outcome,
    })
}

/// Ground-truth distances of a trial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    pub ds_vu: usize,
    /// `d_S(V_l, U_l)` per layer.
    pub ds_layers: Vec<usize>,
    pub regime: Regime,
}

pub fn profile(code: &LayeredCode, inst: &TrialInstance) -> Result<Profile, HarnessError> {
    let v = inst.transmitted();
    let u = inst.received();
    let ds_layers = (0..code.num_layers())
        .map(|l| {
            let v_l = code.extract_component(v, l)?;
            let u_l = code.extract_component(u, l)?;
            Ok(v_l.distance(&u_l)?)
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    Ok(Profile {
        ds_vu: v.distance(u)?,
        ds_layers,
        regime: code.regime(v, u)?,
    })
}

/// Per-layer outcome judged against the transmitted messages.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LayerVerdict {
    Ok,
    /// Decoded to a codeword other than the transmitted one.
    Wrong,
    Fail(DecodeFailure),
    Skip,
}

impl LayerVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            LayerVerdict::Ok => "ok",
            LayerVerdict::Wrong => "wrong",
            LayerVerdict::Fail(DecodeFailure::RadiusExceeded) => "fail-radius",
            LayerVerdict::Fail(DecodeFailure::Tie) => "fail-tie",
            LayerVerdict::Fail(DecodeFailure::Malformed) => "fail-malformed",
            LayerVerdict::Skip => "skip",
        }
    }
}

pub fn verdict(status: &LayerStatus, transmitted: &[lsc_core::ExtFieldElement]) -> LayerVerdict {
    match status {
        LayerStatus::Decoded(d) if d.message == transmitted => LayerVerdict::Ok,
        LayerStatus::Decoded(_) => LayerVerdict::Wrong,
        LayerStatus::Failed(f) => LayerVerdict::Fail(*f),
        LayerStatus::Skipped => LayerVerdict::Skip,
    }
}

pub fn verdicts(report: &LayerDecodeReport, codeword: &LayeredCodeword) -> Vec<LayerVerdict> {
    report
        .layers
        .iter()
        .zip(&codeword.messages)
        .map(|(s, m)| verdict(s, m))
        .collect()
}

pub fn decode(
    code: &LayeredCode,
    algorithm: Algorithm,
    sic: SicOptions,
    received: &Subspace,
    decoder: &dyn ComponentDecoder,
) -> Result<LayerDecodeReport, HarnessError> {
    Ok(match algorithm {
        Algorithm::Alg1 => code.decode_alg1_with(received, decoder)?,
        Algorithm::Alg2 => code.decode_alg2_with(
            received,
            &SicOptions {
                iterative: false,
                ..sic
            },
            decoder,
        )?,
        Algorithm::Alg2Iterative => code.decode_alg2_with(
            received,
            &SicOptions {
                iterative: true,
                ..sic
            },
            decoder,
        )?,
    })
}
