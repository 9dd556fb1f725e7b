//! Network scenarios.
//!
//! * `multicast`: one source, receivers of different quality. The number of
//!   layers is swept (`1..=L`, keeping the first layers of the configured
//!   code) under the first configured channel point, reporting the rate
//!   `Σ k_l · m` (in `F_q` symbols) against the recovery rate.
//! * `multi-source`: each layer carries an independent source; reports
//!   per-layer and all-layer recovery for every channel point.
//! * `unicast`: the receiver decodes only its own layer (extract, then the
//!   component decoder). Trials are generated exactly as in `simulate`, so
//!   the success rate equals the parallel decoder's marginal for that layer.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use lsc_core::{BoundedDistanceDecoder, LayeredCode, Regime};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Algorithm, ExperimentConfig, Scenario};
use crate::records::{join, mode_columns};
use crate::trial::{decode, generate, profile, verdict, verdicts, LayerVerdict};
use crate::HarnessError;

pub const SCENARIO_COLUMNS: &[&str] = &[
    "scenario",
    "point",
    "trial",
    "seed",
    "algorithm",
    "layers_used",
    "rate",
    "mode",
    "rho",
    "t",
    "ds_vu",
    "layer_status",
    "success",
    "regime",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScenarioRecord {
    pub scenario: String,
    pub point: usize,
    pub trial: u64,
    pub seed: u64,
    pub algorithm: String,
    pub layers_used: usize,
    pub rate: usize,
    pub mode: String,
    pub rho: usize,
    pub t: usize,
    pub ds_vu: usize,
    pub layer_status: String,
    pub success: u8,
    pub regime: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScenarioRow {
    pub point: usize,
    pub algorithm: String,
    pub layers_used: usize,
    pub rate: usize,
    pub trials: u64,
    pub successes: u64,
    /// Trials in which each layer decoded correctly.
    pub layer_successes: Vec<u64>,
    pub guaranteed: u64,
    pub guaranteed_failures: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScenarioSummary {
    pub rows: Vec<ScenarioRow>,
}

pub const SCENARIO_SUMMARY_HEADER: &str =
    "point  algorithm       layers  rate  trials  successes  rate_ok  layer_successes  guaranteed_failures";

impl ScenarioSummary {
    pub fn from_records(records: &[ScenarioRecord]) -> Self {
        let mut order = Vec::new();
        let mut rows: BTreeMap<(usize, String), ScenarioRow> = BTreeMap::new();
        for r in records {
            let statuses: Vec<&str> = r.layer_status.split(';').collect();
            let key = (r.point, r.algorithm.clone());
            let row = rows.entry(key.clone()).or_insert_with(|| {
                order.push(key);
                ScenarioRow {
                    point: r.point,
                    algorithm: r.algorithm.clone(),
                    layers_used: r.layers_used,
                    rate: r.rate,
                    trials: 0,
                    successes: 0,
                    layer_successes: vec![0; statuses.len()],
                    guaranteed: 0,
                    guaranteed_failures: 0,
                }
            });
            row.trials += 1;
            row.successes += u64::from(r.success);
            for (count, s) in row.layer_successes.iter_mut().zip(&statuses) {
                *count += u64::from(*s == "ok");
            }
            if r.regime == Regime::Guaranteed.as_str() {
                row.guaranteed += 1;
                row.guaranteed_failures += u64::from(r.success == 0);
            }
        }
        ScenarioSummary {
            rows: order.into_iter().map(|k| rows.remove(&k).unwrap()).collect(),
        }
    }

    pub fn violations(&self) -> u64 {
        self.rows.iter().map(|r| r.guaranteed_failures).sum()
    }

    pub fn render(&self) -> String {
        let mut s = String::from(SCENARIO_SUMMARY_HEADER);
        s.push('\n');
        for r in &self.rows {
            let rate = if r.trials == 0 {
                0.0
            } else {
                r.successes as f64 / r.trials as f64
            };
            let _ = writeln!(
                s,
                "{:<5}  {:<14}  {:>6}  {:>4}  {:>6}  {:>9}  {:.4}   {:<15}  {:>19}",
                r.point,
                r.algorithm,
                r.layers_used,
                r.rate,
                r.trials,
                r.successes,
                rate,
                join(&r.layer_successes),
                r.guaranteed_failures
            );
        }
        s
    }
}

#[derive(Clone, Debug)]
pub struct ScenarioOutput {
    pub records: Vec<ScenarioRecord>,
    pub summary: ScenarioSummary,
}

fn rate(code: &LayeredCode) -> usize {
    code.layout().iter().map(|(_, k)| k * code.m()).sum()
}

/// Runs the configured scenario (multi-source when none is configured).
pub fn run_scenario(config: &ExperimentConfig) -> Result<ScenarioOutput, HarnessError> {
    let scenario = config.scenario.unwrap_or(Scenario::MultiSource);
    let full = config.code();
    // (point, code, channel) triples
    let points: Vec<(usize, LayeredCode, lsc_core::channel::ChannelMode)> = match scenario {
        Scenario::Multicast => (1..=config.layers.len())
            .map(|j| {
                let code = LayeredCode::new(&config.params, &config.layers[..j])?;
                Ok((j - 1, code, config.channel.points[0]))
            })
            .collect::<Result<_, HarnessError>>()?,
        _ => config
            .channel
            .points
            .iter()
            .enumerate()
            .map(|(g, &mode)| (g, full.clone(), mode))
            .collect(),
    };
    let algorithms: Vec<Algorithm> = match scenario {
        Scenario::Unicast(_) => vec![Algorithm::Alg1],
        _ => config.algorithms.clone(),
    };
    let trials = config.trials;
    let total = points.len() as u64 * trials;
    let rows = crate::pool(config.workers)?.install(|| {
        (0..total)
            .into_par_iter()
            .map(|idx| {
                let (point, code, mode) = &points[(idx / trials) as usize];
                let trial = idx % trials;
                let inst = generate(code, *mode, config.seed, *point, trial)?;
                let prof = profile(code, &inst)?;
                let (mode_name, ..) = mode_columns(*mode);
                algorithms
                    .iter()
                    .map(|&algorithm| {
                        let statuses: Vec<LayerVerdict> = match scenario {
                            Scenario::Unicast(l) => {
                                let status = code.decode_layer(inst.received(), l, &BoundedDistanceDecoder)?;
                                (0..code.num_layers())
                                    .map(|i| {
                                        if i == l {
                                            verdict(&status, &inst.codeword.messages[l])
                                        } else {
                                            LayerVerdict::Skip
                                        }
                                    })
                                    .collect()
                            }
                            _ => {
                                let report = decode(code, algorithm, config.sic, inst.received(), &BoundedDistanceDecoder)?;
                                verdicts(&report, &inst.codeword)
                            }
                        };
                        let success = statuses
                            .iter()
                            .all(|&v| v == LayerVerdict::Ok || v == LayerVerdict::Skip);
                        Ok(ScenarioRecord {
                            scenario: scenario.name().into(),
                            point: *point,
                            trial,
                            seed: inst.seed,
                            algorithm: match scenario {
                                Scenario::Unicast(_) => "unicast".into(),
                                _ => algorithm.as_str().into(),
                            },
                            layers_used: code.num_layers(),
                            rate: rate(code),
                            mode: mode_name.clone(),
                            rho: inst.outcome.rho,
                            t: inst.outcome.t,
                            ds_vu: prof.ds_vu,
                            layer_status: join(statuses.iter().map(|v| v.as_str())),
                            success: u8::from(success),
                            regime: prof.regime.as_str().into(),
                        })
                    })
                    .collect::<Result<Vec<_>, HarnessError>>()
            })
            .collect::<Result<Vec<_>, HarnessError>>()
    })?;
    let records: Vec<ScenarioRecord> = rows.into_iter().flatten().collect();
    let summary = ScenarioSummary::from_records(&records);
    Ok(ScenarioOutput { records, summary })
}
