//! Experiment configuration.
//!
//! Configurations are TOML documents with the sections `[field]`, `[code]`,
//! `[channel]`, `[run]`, `[scenario]`, `[search]` and `[verify]`; only
//! `[field]` and `[code]` are required. Unknown keys are rejected, and every
//! error carries the 1-based line it refers to. The accepted keys are listed
//! in the README.

use std::ops::Range;
use std::path::Path;
use std::sync::Arc;

use lsc_core::channel::ChannelMode;
use lsc_core::{FieldParams, LayeredCode, PrimeField, SicOptions, SicOrder};
use serde::Deserialize;
use thiserror::Error;
use toml::Spanned;

pub const DEFAULT_TRIALS: u64 = 100;
pub const DEFAULT_MAX_SWEEPS: usize = 4;
pub const DEFAULT_SEARCH_BUDGET: u64 = 1_000_000;
pub const DEFAULT_SEARCH_PROGRESS: u64 = 10_000;
pub const DEFAULT_VERIFY_TRIALS: u64 = 10_000;
pub const DEFAULT_VERIFY_DECODE_TRIALS: u64 = 1_000;
pub const DEFAULT_VERIFY_CAP: u128 = 1 << 20;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Alg1,
    Alg2,
    Alg2Iterative,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Alg1 => "alg1",
            Algorithm::Alg2 => "alg2",
            Algorithm::Alg2Iterative => "alg2-iterative",
        }
    }
}

/// The channel settings swept by a run, one entry per grid point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChannelGrid {
    pub points: Vec<ChannelMode>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scenario {
    /// Adaptive number of layers under a fixed channel.
    Multicast,
    /// Every layer is an independent source; all-layer recovery statistics.
    MultiSource,
    /// A receiver interested in one layer only (0-based).
    Unicast(usize),
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Multicast => "multicast",
            Scenario::MultiSource => "multi-source",
            Scenario::Unicast(_) => "unicast",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SearchTarget {
    /// `2 d_S(V, U) ≥ d_S(C)` and the parallel decoder recovers every layer.
    A,
    /// The parallel decoder recovers every layer, the successive one does not.
    B,
    /// The parallel decoder fails a layer, the successive one recovers all.
    C,
}

impl SearchTarget {
    pub fn label(self) -> &'static str {
        match self {
            SearchTarget::A => "a",
            SearchTarget::B => "b",
            SearchTarget::C => "c",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub budget: u64,
    pub progress: u64,
    pub targets: Vec<SearchTarget>,
    /// `(ρ, t)` per target; targets not listed use their default.
    pub channel: Vec<(SearchTarget, (usize, usize))>,
    pub pins: Vec<SearchPin>,
}

/// Required per-layer distances for a search target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchPin {
    pub target: SearchTarget,
    /// `d_S(V_l, U_l)` for every layer.
    pub layers: Option<Vec<usize>>,
    /// `d_S(V_l, U_l')` for every layer, as seen by the successive decoder.
    pub retry: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    /// Random checks per algebraic property.
    pub trials: u64,
    /// Channel draws per `(ρ, t)` for the decoding suites.
    pub decode_trials: u64,
    /// Largest enumeration an exhaustive suite may perform.
    pub cap: u128,
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub params: Arc<FieldParams>,
    pub layers: Vec<(usize, usize)>,
    pub channel: ChannelGrid,
    pub algorithms: Vec<Algorithm>,
    pub trials: u64,
    pub seed: u64,
    pub workers: Option<usize>,
    pub sic: SicOptions,
    pub scenario: Option<Scenario>,
    pub search: SearchConfig,
    pub verify: VerifyConfig,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    field: RawField,
    code: RawCode,
    #[serde(default)]
    channel: RawChannel,
    #[serde(default)]
    run: RawRun,
    scenario: Option<RawScenario>,
    #[serde(default)]
    search: RawSearch,
    #[serde(default)]
    verify: RawVerify,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawField {
    q: Spanned<u32>,
    m: Spanned<usize>,
    modulus: Option<Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCode {
    layers: Spanned<Vec<Spanned<Vec<usize>>>>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawChannel {
    mode: Option<Spanned<String>>,
    rho: Option<Spanned<Vec<usize>>>,
    t: Option<Spanned<Vec<usize>>>,
    max_distance: Option<Spanned<usize>>,
    collected: Option<Spanned<Vec<usize>>>,
    error_packets: Option<Spanned<Vec<usize>>>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawRun {
    algorithm: Option<Spanned<String>>,
    trials: Option<u64>,
    seed: Option<u64>,
    workers: Option<Spanned<usize>>,
    sic_order: Option<Spanned<String>>,
    max_sweeps: Option<Spanned<usize>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    kind: Spanned<String>,
    layer: Option<Spanned<usize>>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawSearch {
    budget: Option<Spanned<u64>>,
    progress: Option<Spanned<u64>>,
    targets: Option<Spanned<Vec<String>>>,
    channel_a: Option<Spanned<Vec<usize>>>,
    channel_b: Option<Spanned<Vec<usize>>>,
    channel_c: Option<Spanned<Vec<usize>>>,
    layers_a: Option<Spanned<Vec<usize>>>,
    layers_b: Option<Spanned<Vec<usize>>>,
    layers_c: Option<Spanned<Vec<usize>>>,
    retry_a: Option<Spanned<Vec<usize>>>,
    retry_b: Option<Spanned<Vec<usize>>>,
    retry_c: Option<Spanned<Vec<usize>>>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawVerify {
    trials: Option<u64>,
    decode_trials: Option<u64>,
    cap: Option<u64>,
}

struct Source<'a> {
    text: &'a str,
}

impl Source<'_> {
    fn line(&self, span: Range<usize>) -> usize {
        let end = span.start.min(self.text.len());
        self.text[..end].bytes().filter(|&b| b == b'\n').count() + 1
    }

    fn err<T>(&self, span: Range<usize>, message: impl Into<String>) -> Result<T, ConfigError> {
        Err(ConfigError::Invalid {
            line: self.line(span),
            message: message.into(),
        })
    }
}

impl ExperimentConfig {
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let src = Source { text };
        let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::Invalid {
            line: e.span().map_or(1, |s| src.line(s)),
            message: e.message().trim().to_string(),
        })?;

        let q_span = raw.field.q.span();
        let q = *raw.field.q.get_ref();
        if PrimeField::new(q).is_err() {
            return src.err(q_span, format!("q = {q} is not a supported prime"));
        }
        let m = *raw.field.m.get_ref();
        let params = match &raw.field.modulus {
            Some(text) => {
                let modulus = match FieldParams::parse_modulus(text.get_ref()) {
                    Ok(v) => v,
                    Err(e) => return src.err(text.span(), e.to_string()),
                };
                FieldParams::new(q, m, modulus).or_else(|e| src.err(text.span(), e.to_string()))?
            }
            None => FieldParams::with_default_modulus(q, m)
                .or_else(|e| src.err(raw.field.m.span(), e.to_string()))?,
        };

        let layers_span = raw.code.layers.span();
        let mut layers = Vec::new();
        for pair in raw.code.layers.get_ref() {
            let &[n, k] = pair.get_ref().as_slice() else {
                return src.err(pair.span(), "each layer must be a pair [n, k]");
            };
            if !(1 <= k && k <= n && n <= m) {
                return src.err(
                    pair.span(),
                    format!("layer [{n}, {k}] must satisfy 1 <= k <= n <= m (m = {m})"),
                );
            }
            layers.push((n, k));
        }
        if layers.is_empty() {
            return src.err(layers_span, "at least one layer is required");
        }
        let total_n: usize = layers.iter().map(|l| l.0).sum();

        let channel = parse_channel(&src, &raw.channel, total_n, m)?;

        let algorithms = match &raw.run.algorithm {
            None => vec![Algorithm::Alg1, Algorithm::Alg2],
            Some(a) => match a.get_ref().as_str() {
                "alg1" => vec![Algorithm::Alg1],
                "alg2" => vec![Algorithm::Alg2],
                "alg2-iterative" => vec![Algorithm::Alg2Iterative],
                "both" => vec![Algorithm::Alg1, Algorithm::Alg2],
                "all" => vec![Algorithm::Alg1, Algorithm::Alg2, Algorithm::Alg2Iterative],
                other => {
                    return src.err(
                        a.span(),
                        format!("unknown algorithm {other:?} (expected alg1, alg2, alg2-iterative, both or all)"),
                    )
                }
            },
        };

        let order = match &raw.run.sic_order {
            None => SicOrder::Descending,
            Some(o) => match o.get_ref().as_str() {
                "descending" => SicOrder::Descending,
                "ascending" => SicOrder::Ascending,
                other => {
                    return src.err(
                        o.span(),
                        format!("unknown sic_order {other:?} (expected descending or ascending)"),
                    )
                }
            },
        };
        let max_sweeps = match &raw.run.max_sweeps {
            None => DEFAULT_MAX_SWEEPS,
            Some(s) if *s.get_ref() == 0 => return src.err(s.span(), "max_sweeps must be at least 1"),
            Some(s) => *s.get_ref(),
        };
        let workers = match &raw.run.workers {
            Some(w) if *w.get_ref() == 0 => return src.err(w.span(), "workers must be at least 1"),
            w => w.as_ref().map(|w| *w.get_ref()),
        };

        let scenario = match &raw.scenario {
            None => None,
            Some(s) => Some(match s.kind.get_ref().as_str() {
                "multicast" => Scenario::Multicast,
                "multi-source" => Scenario::MultiSource,
                "unicast" => {
                    let Some(layer) = &s.layer else {
                        return src.err(s.kind.span(), "unicast needs `layer` (1-based)");
                    };
                    let l = *layer.get_ref();
                    if l == 0 || l > layers.len() {
                        return src.err(
                            layer.span(),
                            format!("layer must be between 1 and {}", layers.len()),
                        );
                    }
                    Scenario::Unicast(l - 1)
                }
                other => {
                    return src.err(
                        s.kind.span(),
                        format!("unknown scenario {other:?} (expected multicast, multi-source or unicast)"),
                    )
                }
            }),
        };

        let search = parse_search(&src, &raw.search, total_n, m, layers.len())?;
        let verify = VerifyConfig {
            trials: raw.verify.trials.unwrap_or(DEFAULT_VERIFY_TRIALS),
            decode_trials: raw.verify.decode_trials.unwrap_or(DEFAULT_VERIFY_DECODE_TRIALS),
            cap: raw.verify.cap.map_or(DEFAULT_VERIFY_CAP, u128::from),
        };

        Ok(ExperimentConfig {
            params,
            layers,
            channel,
            algorithms,
            trials: raw.run.trials.unwrap_or(DEFAULT_TRIALS),
            seed: raw.run.seed.unwrap_or(0),
            workers,
            sic: SicOptions {
                iterative: false,
                max_sweeps,
                order,
            },
            scenario,
            search,
            verify,
        })
    }

    pub fn code(&self) -> LayeredCode {
        LayeredCode::new(&self.params, &self.layers).expect("layers validated at parse time")
    }

    pub fn sic_options(&self, algorithm: Algorithm) -> SicOptions {
        SicOptions {
            iterative: algorithm == Algorithm::Alg2Iterative,
            ..self.sic
        }
    }

    /// Applies command-line overrides.
    pub fn with_overrides(mut self, seed: Option<u64>, trials: Option<u64>, workers: Option<usize>) -> Self {
        if let Some(s) = seed {
            self.seed = s;
        }
        if let Some(t) = trials {
            self.trials = t;
        }
        if let Some(w) = workers {
            self.workers = Some(w.max(1));
        }
        self
    }
}

fn parse_channel(src: &Source, raw: &RawChannel, total_n: usize, m: usize) -> Result<ChannelGrid, ConfigError> {
    let mode = raw.mode.as_ref().map_or("exact", |s| s.get_ref().as_str());
    let list = |v: &Option<Spanned<Vec<usize>>>, default: usize| -> Vec<usize> {
        v.as_ref().map_or(vec![default], |s| s.get_ref().clone())
    };
    let mut points = Vec::new();
    match mode {
        "exact" => {
            for (key, v) in [("collected", &raw.collected), ("error_packets", &raw.error_packets)] {
                if let Some(v) = v {
                    return src.err(v.span(), format!("`{key}` is only valid in matrix mode"));
                }
            }
            let rhos = list(&raw.rho, 0);
            let ts = list(&raw.t, 0);
            if let Some(bad) = rhos.iter().find(|&&r| r > total_n) {
                let span = raw.rho.as_ref().unwrap().span();
                return src.err(span, format!("rho = {bad} exceeds dim(V) = {total_n}"));
            }
            if let Some(bad) = ts.iter().find(|&&t| t > m) {
                let span = raw.t.as_ref().unwrap().span();
                return src.err(span, format!("t = {bad} exceeds ambient - dim(V) = {m}"));
            }
            let max = raw.max_distance.as_ref().map(|s| *s.get_ref());
            for &rho in &rhos {
                for &t in &ts {
                    if max.is_none_or(|max| rho + t <= max) {
                        points.push(ChannelMode::Exact { rho, t });
                    }
                }
            }
        }
        "matrix" => {
            for (key, v) in [("rho", &raw.rho), ("t", &raw.t)] {
                if let Some(v) = v {
                    return src.err(v.span(), format!("`{key}` is only valid in exact mode"));
                }
            }
            if let Some(v) = &raw.max_distance {
                return src.err(v.span(), "`max_distance` is only valid in exact mode");
            }
            for &collected in &list(&raw.collected, total_n) {
                for &error_packets in &list(&raw.error_packets, 0) {
                    points.push(ChannelMode::Matrix {
                        collected,
                        error_packets,
                    });
                }
            }
        }
        other => {
            let span = raw.mode.as_ref().unwrap().span();
            return src.err(span, format!("unknown channel mode {other:?} (expected exact or matrix)"));
        }
    }
    if points.is_empty() {
        let span = raw.mode.as_ref().map_or(0..0, |s| s.span());
        return src.err(span, "the channel grid is empty");
    }
    Ok(ChannelGrid { points })
}

fn parse_search(
    src: &Source,
    raw: &RawSearch,
    total_n: usize,
    m: usize,
    num_layers: usize,
) -> Result<SearchConfig, ConfigError> {
    let budget = match &raw.budget {
        Some(b) if *b.get_ref() == 0 => return src.err(b.span(), "budget must be at least 1"),
        b => b.as_ref().map_or(DEFAULT_SEARCH_BUDGET, |b| *b.get_ref()),
    };
    let progress = match &raw.progress {
        Some(p) if *p.get_ref() == 0 => return src.err(p.span(), "progress must be at least 1"),
        p => p.as_ref().map_or(DEFAULT_SEARCH_PROGRESS, |p| *p.get_ref()),
    };
    let targets = match &raw.targets {
        None => vec![SearchTarget::A, SearchTarget::B, SearchTarget::C],
        Some(list) => {
            let mut out = Vec::new();
            for t in list.get_ref() {
                out.push(match t.as_str() {
                    "a" => SearchTarget::A,
                    "b" => SearchTarget::B,
                    "c" => SearchTarget::C,
                    other => {
                        return src.err(list.span(), format!("unknown search target {other:?} (expected a, b or c)"))
                    }
                });
            }
            out
        }
    };
    let mut channel = Vec::new();
    for (target, v) in [
        (SearchTarget::A, &raw.channel_a),
        (SearchTarget::B, &raw.channel_b),
        (SearchTarget::C, &raw.channel_c),
    ] {
        if let Some(v) = v {
            let &[rho, t] = v.get_ref().as_slice() else {
                return src.err(v.span(), "search channel must be a pair [rho, t]");
            };
            if rho > total_n || t > m {
                return src.err(v.span(), format!("[{rho}, {t}] is outside the channel bounds"));
            }
            channel.push((target, (rho, t)));
        }
    }
    let mut pins = Vec::new();
    for (target, layers, retry) in [
        (SearchTarget::A, &raw.layers_a, &raw.retry_a),
        (SearchTarget::B, &raw.layers_b, &raw.retry_b),
        (SearchTarget::C, &raw.layers_c, &raw.retry_c),
    ] {
        let mut pin = SearchPin {
            target,
            layers: None,
            retry: None,
        };
        for (slot, v) in [(&mut pin.layers, layers), (&mut pin.retry, retry)] {
            if let Some(v) = v {
                if v.get_ref().len() != num_layers {
                    return src.err(v.span(), format!("expected one distance per layer ({num_layers})"));
                }
                *slot = Some(v.get_ref().clone());
            }
        }
        if pin.layers.is_some() || pin.retry.is_some() {
            pins.push(pin);
        }
    }
    Ok(SearchConfig {
        budget,
        progress,
        targets,
        channel,
        pins,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = "[field]\nq = 2\nm = 4\n\n[code]\nlayers = [[3, 1], [4, 1]]\n";

    fn line_of(text: &str) -> usize {
        match ExperimentConfig::parse(text) {
            Err(ConfigError::Invalid { line, .. }) => line,
            other => panic!("expected an error, got {other:?}"),
        }
    }

    #[test]
    fn minimal_config_defaults() {
        let c = ExperimentConfig::parse(BASE).unwrap();
        assert_eq!(c.params.modulus(), &[1, 1, 0, 0, 1]);
        assert_eq!(c.layers, vec![(3, 1), (4, 1)]);
        assert_eq!(c.channel.points, vec![ChannelMode::Exact { rho: 0, t: 0 }]);
        assert_eq!(c.algorithms, vec![Algorithm::Alg1, Algorithm::Alg2]);
        assert_eq!(c.trials, DEFAULT_TRIALS);
        assert_eq!(c.search.budget, DEFAULT_SEARCH_BUDGET);
        assert_eq!(c.code().min_distance(), 6);
    }

    #[test]
    fn grid_with_distance_cap() {
        let text = format!("{BASE}[channel]\nrho = [0, 1, 2]\nt = [0, 1, 2]\nmax_distance = 2\n");
        let c = ExperimentConfig::parse(&text).unwrap();
        assert_eq!(c.channel.points.len(), 6);
    }

    #[test]
    fn errors_point_at_the_offending_line() {
        assert_eq!(line_of("[field]\nq = 4\nm = 4\n[code]\nlayers = [[3, 1]]\n"), 2);
        assert_eq!(line_of("[field]\nq = 2\nm = 4\n[code]\nlayers = [[5, 1]]\n"), 5);
        assert_eq!(line_of(&format!("{BASE}[run]\nalgorithm = \"alg3\"\n")), 8);
        assert_eq!(line_of(&format!("{BASE}[channel]\nrho = [9]\n")), 8);
        assert_eq!(line_of(&format!("{BASE}[run]\ncolour = 1\n")), 8);
        assert_eq!(line_of(&format!("{BASE}[scenario]\nkind = \"unicast\"\nlayer = 3\n")), 9);
        assert_eq!(line_of("[field]\nq = 2\nm = 4\nmodulus = \"1,0,0,0,1\"\n[code]\nlayers = [[3, 1]]\n"), 4);
        assert_eq!(line_of("[field]\nq = 2\nm = \n"), 3);
    }

    #[test]
    fn overrides_replace_config_values() {
        let c = ExperimentConfig::parse(BASE)
            .unwrap()
            .with_overrides(Some(9), Some(3), Some(2));
        assert_eq!((c.seed, c.trials, c.workers), (9, 3, Some(2)));
    }
}
