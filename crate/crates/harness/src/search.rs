//! Randomized search for instances outside the guaranteed decoding region.
//!
//! Three targets are searched, each under a fixed `(ρ, t)`:
//!
//! * `a`: `2 d_S(V, U) ≥ d_S(C)` and the parallel decoder recovers every layer;
//! * `b`: the parallel decoder recovers every layer, the successive one does not;
//! * `c`: the parallel decoder fails some layer, the successive one recovers all.
//!
//! A target may additionally pin the per-layer distances `d_S(V_l, U_l)`
//! and the retry distances `d_S(V_l, U_l')`, where `U_l'` is what the
//! successive decoder extracts for layer `l` from the accumulated space at
//! the moment it attempts that layer. Trials are evaluated in parallel in
//! blocks of `progress` trials; the lowest-index hit is reported, so the
//! result does not depend on the worker count.

use lsc_core::channel::ChannelMode;
use lsc_core::{BoundedDistanceDecoder, LayerDecodeReport, LayeredCode, SicOptions, Subspace};
use rayon::prelude::*;

use crate::config::{Algorithm, ExperimentConfig, SearchTarget};
use crate::dump::{code_entries, Fixture};
use crate::records::join;
use crate::trial::{decode, generate, profile, verdicts, LayerVerdict, Profile, TrialInstance};
use crate::HarnessError;

/// `(ρ, t)` used when the configuration does not set one.
pub fn default_channel(target: SearchTarget) -> (usize, usize) {
    match target {
        SearchTarget::A | SearchTarget::B => (2, 2),
        SearchTarget::C => (2, 1),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchHit {
    pub trial: u64,
    pub seed: u64,
    pub profile: Profile,
    /// Retry distance per layer; `None` for layers the successive decoder
    /// never attempted.
    pub retry: Vec<Option<usize>>,
    pub alg1: Vec<LayerVerdict>,
    pub alg2: Vec<LayerVerdict>,
    pub fixture: Fixture,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub target: SearchTarget,
    pub channel: (usize, usize),
    /// Trials evaluated before the hit (inclusive) or the whole budget.
    pub trials_run: u64,
    pub hit: Option<SearchHit>,
}

fn all_ok(v: &[LayerVerdict]) -> bool {
    v.iter().all(|&x| x == LayerVerdict::Ok)
}

/// `d_S(V_l, U_l')` for every layer attempted in the first sweep.
pub fn retry_distances(
    code: &LayeredCode,
    transmitted: &Subspace,
    received: &Subspace,
    report: &LayerDecodeReport,
) -> Result<Vec<Option<usize>>, HarnessError> {
    let mut out = vec![None; code.num_layers()];
    let mut before = received.clone();
    for stage in report.stages.iter().filter(|s| s.sweep == 1) {
        let l = stage.layer;
        let v_l = code.extract_component(transmitted, l)?;
        let u_l = code.extract_component(&before, l)?;
        out[l] = Some(v_l.distance(&u_l)?);
        before = stage.accumulated.clone();
    }
    Ok(out)
}

struct Evaluator<'a> {
    code: &'a LayeredCode,
    config: &'a ExperimentConfig,
    target: SearchTarget,
    mode: ChannelMode,
    stream: usize,
    layers_pin: Option<Vec<usize>>,
    retry_pin: Option<Vec<usize>>,
}

impl Evaluator<'_> {
    fn eval(&self, trial: u64) -> Result<Option<(TrialInstance, SearchHit)>, HarnessError> {
        let code = self.code;
        let inst = generate(code, self.mode, self.config.seed, self.stream, trial)?;
        let prof = profile(code, &inst)?;
        if self.layers_pin.as_ref().is_some_and(|p| *p != prof.ds_layers) {
            return Ok(None);
        }
        if self.target == SearchTarget::A && 2 * prof.ds_vu < code.min_distance() {
            return Ok(None);
        }
        let sic = SicOptions {
            iterative: false,
            ..self.config.sic
        };
        let d = &BoundedDistanceDecoder;
        let r1 = decode(code, Algorithm::Alg1, sic, inst.received(), d)?;
        let alg1 = verdicts(&r1, &inst.codeword);
        let found = match self.target {
            SearchTarget::A => all_ok(&alg1),
            SearchTarget::B => all_ok(&alg1),
            SearchTarget::C => !all_ok(&alg1),
        };
        if !found {
            return Ok(None);
        }
        let r2 = decode(code, Algorithm::Alg2, sic, inst.received(), d)?;
        let alg2 = verdicts(&r2, &inst.codeword);
        let found = match self.target {
            SearchTarget::A => true,
            SearchTarget::B => !all_ok(&alg2),
            SearchTarget::C => all_ok(&alg2),
        };
        if !found {
            return Ok(None);
        }
        let retry = retry_distances(code, inst.transmitted(), inst.received(), &r2)?;
        if let Some(pin) = &self.retry_pin {
            if retry.iter().zip(pin).any(|(r, p)| *r != Some(*p)) || retry.len() != pin.len() {
                return Ok(None);
            }
        }
        let fixture = self.fixture(&inst, &prof, &retry, &alg1, &alg2);
        let hit = SearchHit {
            trial,
            seed: inst.seed,
            profile: prof,
            retry,
            alg1,
            alg2,
            fixture,
        };
        Ok(Some((inst, hit)))
    }

    fn fixture(
        &self,
        inst: &TrialInstance,
        prof: &Profile,
        retry: &[Option<usize>],
        alg1: &[LayerVerdict],
        alg2: &[LayerVerdict],
    ) -> Fixture {
        let mut entries: Vec<(String, String)> = vec![
            ("target".into(), self.target.label().into()),
            ("base_seed".into(), self.config.seed.to_string()),
            ("trial".into(), inst.trial.to_string()),
            ("seed".into(), inst.seed.to_string()),
        ];
        entries.extend(code_entries(self.code));
        let retry = retry.iter().map(|r| r.map_or("-".to_string(), |d| d.to_string()));
        entries.extend([
            ("rho".into(), inst.outcome.rho.to_string()),
            ("t".into(), inst.outcome.t.to_string()),
            ("min_distance".into(), self.code.min_distance().to_string()),
            ("ds_vu".into(), prof.ds_vu.to_string()),
            ("ds_layers".into(), join(&prof.ds_layers)),
            ("retry".into(), join(retry)),
            ("alg1".into(), join(alg1.iter().map(|v| v.as_str()))),
            ("alg2".into(), join(alg2.iter().map(|v| v.as_str()))),
        ]);
        Fixture {
            entries,
            transmitted: inst.transmitted().clone(),
            received: inst.received().clone(),
        }
    }
}

/// Searches every configured target. `progress(target, trials_done)` is
/// called after each block.
pub fn run_search_beyond(
    config: &ExperimentConfig,
    progress: &mut dyn FnMut(SearchTarget, u64),
) -> Result<Vec<SearchOutcome>, HarnessError> {
    let code = config.code();
    let pool = crate::pool(config.workers)?;
    let mut outcomes = Vec::new();
    for &target in &config.search.targets {
        let (rho, t) = config
            .search
            .channel
            .iter()
            .find(|(tg, _)| *tg == target)
            .map_or(default_channel(target), |(_, c)| *c);
        if rho > code.total_n() || t > code.m() {
            return Err(HarnessError::Config(crate::ConfigError::Invalid {
                line: 1,
                message: format!("search target {} needs rho = {rho}, t = {t}, outside the channel bounds", target.label()),
            }));
        }
        let pins = config.search.pins.iter().find(|p| p.target == target);
        let eval = Evaluator {
            code: &code,
            config,
            target,
            mode: ChannelMode::Exact { rho, t },
            stream: target as usize,
            layers_pin: pins.and_then(|p| p.layers.clone()),
            retry_pin: pins.and_then(|p| p.retry.clone()),
        };
        let mut hit = None;
        let mut done = 0;
        while done < config.search.budget && hit.is_none() {
            let end = (done + config.search.progress).min(config.search.budget);
            let found = pool.install(|| {
                (done..end)
                    .into_par_iter()
                    .map(|i| eval.eval(i))
                    .find_first(|r| !matches!(r, Ok(None)))
            });
            match found {
                Some(Err(e)) => return Err(e),
                Some(Ok(Some((inst, h)))) => {
                    done = inst.trial + 1;
                    hit = Some(h);
                }
                _ => done = end,
            }
            progress(target, done);
        }
        outcomes.push(SearchOutcome {
            target,
            channel: (rho, t),
            trials_run: done,
            hit,
        });
    }
    Ok(outcomes)
}

/// Re-decodes a fixture with both algorithms and returns the per-layer
/// success flags `(alg1, alg2)`, judged by comparing each decoded component
/// with the transmitted one.
pub fn replay(code: &LayeredCode, fixture: &Fixture, sic: SicOptions) -> Result<(Vec<bool>, Vec<bool>), HarnessError> {
    let v = &fixture.transmitted;
    let u = &fixture.received;
    let judge = |report: &LayerDecodeReport| -> Result<Vec<bool>, HarnessError> {
        (0..code.num_layers())
            .map(|l| {
                let truth = code.extract_component(v, l)?;
                Ok(report.layers[l].decoded().is_some_and(|d| d.subspace == truth))
            })
            .collect()
    };
    let r1 = code.decode_alg1(u)?;
    let r2 = code.decode_alg2(
        u,
        &SicOptions {
            iterative: false,
            ..sic
        },
    )?;
    Ok((judge(&r1)?, judge(&r2)?))
}
