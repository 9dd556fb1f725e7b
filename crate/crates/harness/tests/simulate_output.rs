use lsc_harness::config::ExperimentConfig;
use lsc_harness::records::{to_csv_string, SIMULATE_COLUMNS};
use lsc_harness::simulate::run_simulate;

const GOLDEN_CONFIG: &str = include_str!("data/golden.toml");
const GOLDEN_CSV: &str = include_str!("golden/simulate.csv");

fn golden() -> ExperimentConfig {
    ExperimentConfig::parse(GOLDEN_CONFIG).unwrap()
}

#[test]
fn csv_matches_the_golden_file() {
    let out = run_simulate(&golden()).unwrap();
    assert_eq!(to_csv_string(SIMULATE_COLUMNS, &out.records).unwrap(), GOLDEN_CSV);
}

#[test]
fn csv_is_identical_across_worker_counts() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/two_layer.toml")).unwrap();
    let base = ExperimentConfig::parse(&text).unwrap();
    let csv = |workers| {
        let c = base.clone().with_overrides(None, Some(30), Some(workers));
        to_csv_string(SIMULATE_COLUMNS, &run_simulate(&c).unwrap().records).unwrap()
    };
    let one = csv(1);
    assert_eq!(one, csv(3));
    assert_eq!(one, csv(8));
}

#[test]
fn zero_trials_give_a_header_only_csv() {
    let c = golden().with_overrides(None, Some(0), None);
    let out = run_simulate(&c).unwrap();
    assert!(out.records.is_empty());
    assert_eq!(
        to_csv_string(SIMULATE_COLUMNS, &out.records).unwrap(),
        format!("{}\n", SIMULATE_COLUMNS.join(","))
    );
    assert_eq!(out.summary.violations(), 0);
}

#[test]
fn summary_counts_are_column_sums() {
    let out = run_simulate(&golden().with_overrides(None, Some(50), None)).unwrap();
    for row in &out.summary.rows {
        let mine: Vec<_> = out
            .records
            .iter()
            .filter(|r| r.grid_point == row.grid_point && r.algorithm == row.algorithm)
            .collect();
        assert_eq!(row.trials, mine.len() as u64);
        assert_eq!(row.successes, mine.iter().map(|r| u64::from(r.success)).sum::<u64>());
        assert_eq!(row.guaranteed, mine.iter().filter(|r| r.regime == "guaranteed").count() as u64);
    }
}

#[test]
fn seed_override_changes_the_draws() {
    let a = run_simulate(&golden()).unwrap();
    let b = run_simulate(&golden().with_overrides(Some(43), None, None)).unwrap();
    assert_ne!(a.records[0].seed, b.records[0].seed);
}

#[test]
fn matrix_mode_records_the_request_and_the_realization() {
    let text = "[field]\nq = 2\nm = 4\n[code]\nlayers = [[3, 1], [4, 1]]\n\
                [channel]\nmode = \"matrix\"\ncollected = [7]\nerror_packets = [1]\n[run]\ntrials = 20\n";
    let out = run_simulate(&ExperimentConfig::parse(text).unwrap()).unwrap();
    for r in &out.records {
        assert_eq!(r.mode, "matrix");
        assert_eq!((r.collected, r.error_packets), (Some(7), Some(1)));
        assert_eq!((r.rho_req, r.t_req), (None, None));
        assert!(r.t <= 1 && r.rho <= 7);
        assert_eq!(r.ds_vu, r.rho + r.t);
    }
}

#[test]
fn guaranteed_grid_always_succeeds_and_beyond_it_sometimes_does() {
    let text = "[field]\nq = 2\nm = 4\nmodulus = \"1,1,0,0,1\"\n[code]\nlayers = [[3, 1], [4, 1]]\n\
                [channel]\nrho = [0, 1, 2]\nt = [0, 1, 2]\n[run]\nalgorithm = \"alg1\"\ntrials = 400\nseed = 2\n";
    let out = run_simulate(&ExperimentConfig::parse(text).unwrap()).unwrap();
    assert_eq!(out.summary.violations(), 0);
    for row in &out.summary.rows {
        let (rho, t) = (row.grid_point / 3, row.grid_point % 3);
        if rho + t <= 2 {
            assert_eq!(row.successes, row.trials, "rho={rho}, t={t}");
        }
        if (rho, t) == (2, 2) {
            assert!(0 < row.successes && row.successes < row.trials, "{}", row.successes);
        }
    }
}
