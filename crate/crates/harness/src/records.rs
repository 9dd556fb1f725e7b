//! Per-trial CSV records and the summary derived from them.
//!
//! The column set is frozen in `docs/formats.md`. List-valued columns are
//! joined with `;`. Columns that do not apply to a row are left empty.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;

use lsc_core::channel::ChannelMode;
use serde::Serialize;

use crate::HarnessError;

pub const SIMULATE_COLUMNS: &[&str] = &[
    "trial",
    "grid_point",
    "seed",
    "algorithm",
    "mode",
    "rho_req",
    "t_req",
    "collected",
    "error_packets",
    "rho",
    "t",
    "ds_vu",
    "ds_layers",
    "layer_status",
    "success",
    "regime",
    "sweeps",
    "chain",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub grid_point: usize,
    pub seed: u64,
    pub algorithm: String,
    pub mode: String,
    pub rho_req: Option<usize>,
    pub t_req: Option<usize>,
    pub collected: Option<usize>,
    pub error_packets: Option<usize>,
    pub rho: usize,
    pub t: usize,
    pub ds_vu: usize,
    pub ds_layers: String,
    pub layer_status: String,
    /// 1 when every layer decoded to the transmitted codeword.
    pub success: u8,
    pub regime: String,
    pub sweeps: usize,
    pub chain: String,
}

pub fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")
}

/// `(mode, rho_req, t_req, collected, error_packets)` columns.
pub fn mode_columns(mode: ChannelMode) -> (String, Option<usize>, Option<usize>, Option<usize>, Option<usize>) {
    match mode {
        ChannelMode::Exact { rho, t } => ("exact".into(), Some(rho), Some(t), None, None),
        ChannelMode::Matrix {
            collected,
            error_packets,
        } => ("matrix".into(), None, None, Some(collected), Some(error_packets)),
    }
}

pub fn describe_mode(mode: ChannelMode) -> String {
    match mode {
        ChannelMode::Exact { rho, t } => format!("exact rho={rho} t={t}"),
        ChannelMode::Matrix {
            collected,
            error_packets,
        } => format!("matrix collected={collected} errors={error_packets}"),
    }
}

/// Serializes records with a header row, even when there are none.
pub fn write_csv<W: Write, R: Serialize>(out: W, columns: &[&str], records: &[R]) -> Result<(), HarnessError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(columns)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv_string<R: Serialize>(columns: &[&str], records: &[R]) -> Result<String, HarnessError> {
    let mut buf = Vec::new();
    write_csv(&mut buf, columns, records)?;
    Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SummaryRow {
    pub algorithm: String,
    pub grid_point: usize,
    pub channel: String,
    pub trials: u64,
    pub successes: u64,
    pub guaranteed: u64,
    pub guaranteed_failures: u64,
}

impl SummaryRow {
    pub fn success_rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub rows: Vec<SummaryRow>,
}

pub const SUMMARY_HEADER: &str =
    "grid_point  algorithm       channel                        trials  successes  rate     guaranteed  guaranteed_failures";

impl Summary {
    /// Aggregates per `(grid_point, algorithm)` straight from the records.
    pub fn from_records(records: &[TrialRecord]) -> Self {
        let mut order: Vec<(usize, String)> = Vec::new();
        let mut rows: BTreeMap<(usize, String), SummaryRow> = BTreeMap::new();
        for r in records {
            let key = (r.grid_point, r.algorithm.clone());
            let row = rows.entry(key.clone()).or_insert_with(|| {
                order.push(key);
                SummaryRow {
                    algorithm: r.algorithm.clone(),
                    grid_point: r.grid_point,
                    channel: record_channel(r),
                    trials: 0,
                    successes: 0,
                    guaranteed: 0,
                    guaranteed_failures: 0,
                }
            });
            row.trials += 1;
            row.successes += u64::from(r.success);
            if r.regime == "guaranteed" {
                row.guaranteed += 1;
                row.guaranteed_failures += u64::from(r.success == 0);
            }
        }
        Summary {
            rows: order.into_iter().map(|k| rows.remove(&k).unwrap()).collect(),
        }
    }

    /// Guaranteed-regime trials that did not recover `V`.
    pub fn violations(&self) -> u64 {
        self.rows.iter().map(|r| r.guaranteed_failures).sum()
    }

    pub fn render(&self) -> String {
        let mut s = String::from(SUMMARY_HEADER);
        s.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:<10}  {:<14}  {:<29}  {:>6}  {:>9}  {:.4}  {:>10}  {:>19}",
                r.grid_point,
                r.algorithm,
                r.channel,
                r.trials,
                r.successes,
                r.success_rate(),
                r.guaranteed,
                r.guaranteed_failures
            );
        }
        s
    }
}

fn record_channel(r: &TrialRecord) -> String {
    match (r.rho_req, r.t_req, r.collected, r.error_packets) {
        (Some(rho), Some(t), _, _) => describe_mode(ChannelMode::Exact { rho, t }),
        (_, _, Some(collected), Some(error_packets)) => describe_mode(ChannelMode::Matrix {
            collected,
            error_packets,
        }),
        _ => r.mode.clone(),
    }
}
