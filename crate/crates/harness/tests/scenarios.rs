use lsc_harness::config::{ExperimentConfig, Scenario};
use lsc_harness::scenario::run_scenario;
use lsc_harness::simulate::run_simulate;

fn config(layers: &str, channel: &str, extra: &str) -> ExperimentConfig {
    let text = format!(
        "[field]\nq = 2\nm = 4\nmodulus = \"1,1,0,0,1\"\n[code]\nlayers = {layers}\n\
         [channel]\n{channel}\n[run]\nalgorithm = \"alg1\"\ntrials = 300\nseed = 5\n{extra}"
    );
    ExperimentConfig::parse(&text).unwrap()
}

#[test]
fn unicast_matches_the_parallel_decoder_marginal() {
    let channel = "rho = [1, 2, 3]\nt = [0, 1, 2]";
    for layer in 1..=2 {
        let uni = config("[[3, 1], [4, 1]]", channel, &format!("[scenario]\nkind = \"unicast\"\nlayer = {layer}\n"));
        assert_eq!(uni.scenario, Some(Scenario::Unicast(layer - 1)));
        let sim = config("[[3, 1], [4, 1]]", channel, "");
        let a = run_scenario(&uni).unwrap().records;
        let b = run_simulate(&sim).unwrap().records;
        assert_eq!(a.len(), b.len());
        for (u, s) in a.iter().zip(&b) {
            assert_eq!((u.point, u.trial, u.seed), (s.grid_point, s.trial, s.seed));
            let us: Vec<&str> = u.layer_status.split(';').collect();
            let ss: Vec<&str> = s.layer_status.split(';').collect();
            assert_eq!(us[layer - 1], ss[layer - 1]);
            assert_eq!(u.success == 1, ss[layer - 1] == "ok");
            assert!(us.iter().enumerate().all(|(i, v)| i == layer - 1 || *v == "skip"));
        }
    }
}

#[test]
fn unequal_protection_favours_the_strong_layer() {
    let c = config(
        "[[3, 1], [4, 3]]",
        "rho = [0, 1, 2]\nt = [0, 1, 2]\nmax_distance = 2",
        "[scenario]\nkind = \"multi-source\"\n",
    );
    let out = run_scenario(&c).unwrap();
    let mut ok = [0u64; 2];
    let mut n = 0;
    for r in out.records.iter().filter(|r| r.rho + r.t == 2) {
        n += 1;
        for (count, s) in ok.iter_mut().zip(r.layer_status.split(';')) {
            *count += u64::from(s == "ok");
        }
    }
    assert_eq!(n, 900);
    // the (3,1) layer corrects every ρ + t = 2 outcome, the (4,3) layer does not
    assert_eq!(ok[0], n);
    assert!(ok[1] < ok[0], "{ok:?}");
}

#[test]
fn zero_noise_multicast_delivers_every_prefix() {
    let c = config("[[3, 1], [4, 1]]", "rho = [0]\nt = [0]", "[scenario]\nkind = \"multicast\"\n");
    let out = run_scenario(&c).unwrap();
    assert_eq!(out.summary.rows.len(), 2);
    for (row, (layers, rate)) in out.summary.rows.iter().zip([(1, 4), (2, 8)]) {
        assert_eq!((row.layers_used, row.rate), (layers, rate));
        assert_eq!(row.successes, row.trials);
        assert_eq!(row.trials, 300);
    }
}

#[test]
fn multi_source_reports_every_channel_point() {
    let c = config("[[3, 1], [4, 1]]", "rho = [0, 3]\nt = [0, 1]", "[scenario]\nkind = \"multi-source\"\n");
    let out = run_scenario(&c).unwrap();
    assert_eq!(out.summary.rows.len(), 4);
    assert_eq!(out.summary.violations(), 0);
    let full = &out.summary.rows[0];
    assert_eq!(full.layer_successes, vec![300, 300]);
}
