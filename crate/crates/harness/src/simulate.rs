//! Monte Carlo decoding statistics over a channel grid.

use lsc_core::{BoundedDistanceDecoder, ComponentDecoder, LayeredCode};
use rayon::prelude::*;

use crate::config::{Algorithm, ExperimentConfig};
use crate::records::{join, mode_columns, Summary, TrialRecord};
use crate::trial::{decode, generate, profile, verdicts, LayerVerdict};
use crate::HarnessError;

#[derive(Clone, Debug)]
pub struct SimulationOutput {
    /// Grid point major, then trial index, then algorithm in config order.
    pub records: Vec<TrialRecord>,
    pub summary: Summary,
}

pub fn run_simulate(config: &ExperimentConfig) -> Result<SimulationOutput, HarnessError> {
    run_simulate_with(config, &BoundedDistanceDecoder)
}

pub fn run_simulate_with(
    config: &ExperimentConfig,
    decoder: &dyn ComponentDecoder,
) -> Result<SimulationOutput, HarnessError> {
    let code = config.code();
    let trials = config.trials;
    let total = config.channel.points.len() as u64 * trials;
    let rows = crate::pool(config.workers)?.install(|| {
        (0..total)
            .into_par_iter()
            .map(|idx| simulate_trial(&code, config, decoder, (idx / trials) as usize, idx % trials))
            .collect::<Result<Vec<_>, HarnessError>>()
    })?;
    let records: Vec<TrialRecord> = rows.into_iter().flatten().collect();
    let summary = Summary::from_records(&records);
    Ok(SimulationOutput { records, summary })
}

fn simulate_trial(
    code: &LayeredCode,
    config: &ExperimentConfig,
    decoder: &dyn ComponentDecoder,
    grid_point: usize,
    trial: u64,
) -> Result<Vec<TrialRecord>, HarnessError> {
    let mode = config.channel.points[grid_point];
    let inst = generate(code, mode, config.seed, grid_point, trial)?;
    let prof = profile(code, &inst)?;
    let (mode_name, rho_req, t_req, collected, error_packets) = mode_columns(mode);
    config
        .algorithms
        .iter()
        .map(|&algorithm| {
            let report = decode(code, algorithm, config.sic, inst.received(), decoder)?;
            let verdicts = verdicts(&report, &inst.codeword);
            let chain = if algorithm == Algorithm::Alg1 {
                String::new()
            } else {
                join(report.distance_chain(inst.transmitted(), inst.received())?)
            };
            Ok(TrialRecord {
                trial,
                grid_point,
                seed: inst.seed,
                algorithm: algorithm.as_str().into(),
                mode: mode_name.clone(),
                rho_req,
                t_req,
                collected,
                error_packets,
                rho: inst.outcome.rho,
                t: inst.outcome.t,
                ds_vu: prof.ds_vu,
                ds_layers: join(&prof.ds_layers),
                layer_status: join(verdicts.iter().map(|v| v.as_str())),
                success: u8::from(verdicts.iter().all(|&v| v == LayerVerdict::Ok)),
                regime: prof.regime.as_str().into(),
                sweeps: report.sweeps,
                chain,
            })
        })
        .collect()
}
