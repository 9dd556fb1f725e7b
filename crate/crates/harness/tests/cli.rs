use std::path::Path;
use std::process::{Command, Output};

const LSC: &str = env!("CARGO_BIN_EXE_lsc");

fn lsc(args: &[&str]) -> Output {
    Command::new(LSC).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

const TINY: &str = "[field]\nq = 2\nm = 2\n[code]\nlayers = [[2, 1], [2, 1]]\n[channel]\nrho = [0, 1]\nt = [0, 2]\n\
                    [run]\ntrials = 5\n[verify]\ntrials = 100\ndecode_trials = 10\n";

#[test]
fn simulate_routes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "tiny.toml", TINY);
    let out = lsc(&["simulate", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("trial,grid_point,seed,"));
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("grid_point  algorithm"));

    let csv = dir.path().join("out.csv");
    let out = lsc(&["simulate", "--config", &cfg, "--out", csv.to_str().unwrap(), "--seed", "3", "--workers", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("grid_point  algorithm"));
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 1 + 4 * 5 * 2);
}

#[test]
fn configuration_errors_exit_with_two_and_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.toml", "[field]\nq = 2\nm = 4\n[code]\nlayers = [[3, 4]]\n");
    let out = lsc(&["simulate", "--config", &bad]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 5"), "{err}");

    let unknown = write(dir.path(), "unknown.toml", "[field]\nq = 2\nm = 4\ncolour = 1\n[code]\nlayers = [[3, 1]]\n");
    let out = lsc(&["dump-code", "--config", &unknown]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 4"));

    let out = lsc(&["dump-code", "--config", "/nonexistent/config.toml"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_exits_with_one_on_a_violation() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "tiny.toml", TINY);
    let ok = lsc(&["verify", "--config", &cfg]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));
    let bad = lsc(&["verify", "--config", &cfg, "--inject-fault"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8(bad.stdout).unwrap().contains("FAIL  layered.guaranteed"));
}

#[test]
fn search_exits_with_three_when_nothing_is_found() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!("{TINY}[search]\ntargets = [\"a\"]\nchannel_a = [0, 0]\nbudget = 50\nprogress = 25\n");
    let cfg = write(dir.path(), "search.toml", &text);
    let out = lsc(&["search-beyond", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stdout).unwrap().contains("target a: not found in 50 trials"));
}

#[test]
fn search_dumps_fixtures_that_replay() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/two_layer.toml");
    let cfg = cfg.to_str().unwrap();
    let dump = dir.path().join("fixtures");
    let out = lsc(&["search-beyond", "--config", cfg, "--dump", dump.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let replayed = lsc(&["replay", "--config", cfg, "--fixture", dump.join("target_c.fixture").to_str().unwrap()]);
    assert_eq!(replayed.status.code(), Some(0));
    assert_eq!(String::from_utf8(replayed.stdout).unwrap(), "alg1 = fail;ok\nalg2 = ok;ok\n");
}

#[test]
fn dump_code_describes_the_layout() {
    let cfg = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/two_layer.toml");
    let out = lsc(&["dump-code", "--config", cfg.to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("min_distance = 6\n"));
    assert!(text.contains("layer.1 = n=3 k=1 identity=1..3"));
}
