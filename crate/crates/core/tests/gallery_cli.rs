use parity_forge::analysis::solve_parity;
use parity_forge::cli::{self, wilson};
use parity_forge::config::Config;
use parity_forge::gallery::{self, Params};
use parity_forge::mdp::{materialize, MdpModel};
use parity_forge::num::rat;
use parity_forge::Error;
use serde_json::Value as Json;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("parity-forge").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Json {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "stderr: {err}");
    serde_json::from_str(&out).unwrap()
}

fn scratch(name: &str, body: &str) -> std::path::PathBuf {
    let p = std::env::temp_dir().join(format!("parity-forge-{}-{name}", std::process::id()));
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn catalog_builds_with_defaults() {
    for f in gallery::list() {
        let m = gallery::build(f.name, &Params::new()).unwrap();
        assert!(!m.initial().is_empty(), "{}", f.name);
        for (k, _, _) in f.params {
            assert!(!k.is_empty());
        }
        if gallery::is_finite(f.name, &Params::new()) {
            let (x, frontier) = materialize(&*m, usize::MAX, 64).unwrap();
            assert!(frontier.is_empty());
            assert!(x.validate().is_valid());
        }
    }
}

#[test]
fn family_specs() {
    let (name, p) = gallery::parse_spec("ladder(weights=[1/2,1/4,1/4], controlled=true)").unwrap();
    assert_eq!(name, "ladder");
    assert_eq!(p["weights"], "1/2,1/4,1/4");
    assert_eq!(p["controlled"], "true");
    assert!(gallery::build_spec("ladder(weights=[1/2,1/4,1/4])").is_ok());
    assert!(matches!(gallery::build_spec("nope"), Err(Error::UnknownFamily(_))));
    assert!(matches!(gallery::build_spec("walk(q=1/2)"), Err(Error::BadParams(_))));
    assert!(matches!(gallery::build_spec("walk(p=1)"), Err(Error::BadParams(_))));
    assert!(matches!(gallery::build_spec("as_win_walk(p=2/3)"), Err(Error::BadParams(_))));
    assert!(matches!(gallery::build_spec("ladder(weights=[1/2,1/3])"), Err(Error::BadParams(_))));
    assert!(matches!(gallery::build_spec("walk(p=1/2"), Err(Error::Parse(_))));
    assert!(matches!(gallery::build_spec("walk(p)"), Err(Error::Parse(_))));
    // same seed, same instance
    let a = gallery::build_spec("random(n=7,seed=3)").unwrap();
    let b = gallery::build_spec("random(n=7,seed=3)").unwrap();
    assert_eq!(
        materialize(&*a, usize::MAX, 8).unwrap().0.to_json(),
        materialize(&*b, usize::MAX, 8).unwrap().0.to_json()
    );
}

#[test]
fn fig3_values() {
    let m = gallery::fig3(&rat(1, 3));
    let v = solve_parity(&m).values;
    assert_eq!(v, vec![rat(1, 3), rat(1, 3), rat(1, 1), rat(0, 1)]);
}

#[test]
fn cli_solve_and_info() {
    let j = json(&["solve", "fig3", "--exact"]);
    assert_eq!(j["mode"], "exact");
    assert_eq!(j["values"]["a"], "1/2");
    assert_eq!(j["values"]["c"], "1/1");
    let j = json(&["solve", "fig3(p=1/4)", "--objective", "reach:c"]);
    assert_eq!(j["values"]["b"], "1/4");
    let j = json(&["info", "fig3"]);
    assert!(j.is_object());
    // byte-stable output
    assert_eq!(run(&["solve", "random(n=6,seed=2)"]).1, run(&["solve", "random(n=6,seed=2)"]).1);
}

#[test]
fn cli_synthesize_and_check() {
    let j = json(&["synthesize", "walk(objective=cobuchi)", "--objective", "cobuchi"]);
    assert_eq!(j["strategy"]["class"], "md");
    assert_eq!(j["truncated"], true);
    let j = json(&["synthesize", "fig3", "--class", "1bit", "--epsilon", "0"]);
    assert_eq!(j["initial"]["a"]["attainment"], "1/2");
    let j = json(&["synthesize", "random(n=5,seed=1)", "--class", "markov"]);
    assert_eq!(j["strategy"]["class"], "markov");
    let (code, _, err) = run(&["check", "fig3"]);
    assert_eq!(code, 0, "{err}");
    assert!(err.contains("pass"));
}

#[test]
fn cli_exit_codes() {
    assert_eq!(run(&["solve", "nope"]).0, 2);
    assert_eq!(run(&["solve", "walk(q=1)"]).0, 2);
    assert_eq!(run(&["solve", "fig3", "--objective", "bogus"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    // fig3 carries color 2, which the co-Büchi construction refuses
    let (code, _, err) = run(&["synthesize", "fig3", "--objective", "cobuchi"]);
    assert_eq!(code, 3);
    assert!(err.starts_with("error:"));
    assert_eq!(run(&["synthesize", "fig3", "--epsilon", "1"]).0, 2);
}

#[test]
fn cli_evaluate_from_file() {
    let (_, out, _) = run(&["synthesize", "fig3", "--epsilon", "0"]);
    let j: Json = serde_json::from_str(&out).unwrap();
    let path = scratch("sigma.json", &j["strategy"].to_string());
    let p = path.to_str().unwrap();
    let e = json(&["evaluate", "fig3", p]);
    assert!(e.to_string().contains("1/2"));
    let mc = json(&["evaluate", "fig3", p, "--mc", "2000", "--seed", "4"]);
    assert_eq!(mc["mode"], "monte-carlo");
    assert_eq!(mc, json(&["evaluate", "fig3", p, "--mc", "2000", "--seed", "4"]));
    std::fs::remove_file(path).unwrap();
    assert_eq!(run(&["evaluate", "fig3", "/nonexistent/sigma.json"]).0, 2);
}

#[test]
fn cli_config_file() {
    let good = scratch("good.toml", "horizon = 4\nbranch_cap = 8\n[urchin]\nspikes = \"exact\"\n");
    let (code, _, err) = run(&["--config", good.to_str().unwrap(), "solve", "walk"]);
    assert_eq!(code, 0, "{err}");
    let bad = scratch("bad.toml", "horizon = 4\nbogus = 1\n");
    assert_eq!(run(&["--config", bad.to_str().unwrap(), "solve", "fig3"]).0, 2);
    let weak = scratch("weak.toml", "[urchin]\nalpha = \"9/10\"\nbeta = \"4/5\"\ngamma = \"3/5\"\nerr_shift = 4\n");
    assert_eq!(run(&["--config", weak.to_str().unwrap(), "urchin", "as_win_walk"]).0, 2);
    for p in [good, bad, weak] {
        std::fs::remove_file(p).unwrap();
    }
    let c = Config::from_toml("seed = 9").unwrap();
    assert_eq!(c.seed, 9);
    assert_eq!(c.horizon, Config::default().horizon);
}

#[test]
fn wilson_interval() {
    let (lo, hi) = wilson(50, 100);
    assert!(lo < 0.5 && 0.5 < hi && hi - lo < 0.2);
    assert_eq!(wilson(0, 0), (0.0, 1.0));
    let (lo, hi) = wilson(100, 100);
    assert!(hi <= 1.0 + 1e-12 && lo > 0.9);
}
