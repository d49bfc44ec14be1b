use std::path::Path;
use std::process::{Command, Output};

fn timeavg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_timeavg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .to_string()
}

#[test]
fn decide_examples() {
    let o = timeavg(&["decide", "--domain", "loss", "--p", "0.5", "--M", "100", "--W0", "100", "--rho", "1.05"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&stdout(&o), "chosen"), "SureOption");

    let o = timeavg(&["decide", "--domain", "gain", "--p", "0.5", "--M", "100", "--W0", "100"]);
    assert_eq!(field(&stdout(&o), "chosen"), "SureOption");

    let o = timeavg(&["decide", "--domain", "gain", "--p", "0.5", "--M", "0", "--W0", "100"]);
    assert_eq!(field(&stdout(&o), "chosen"), "Indifferent");
}

#[test]
fn decide_domain_errors_exit_2() {
    let o = timeavg(&["decide", "--domain", "loss", "--p", "0.5", "--M", "200", "--W0", "100"]);
    assert_eq!(o.status.code(), Some(2));
    let o = timeavg(&["decide", "--domain", "gain", "--p", "1.5", "--M", "1", "--W0", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = timeavg(&["decide", "--domain", "sideways", "--p", "0.5", "--M", "1", "--W0", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn simulate_examples() {
    let o = timeavg(&["simulate", "--p", "1", "--x", "0.3", "--steps", "100", "--trajectories", "1", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&stdout(&o), "empirical_growth_factor"), "1.3");

    let o = timeavg(&["simulate", "--p", "0.5", "--x", "1", "--steps", "100000", "--trajectories", "1", "--seed", "7"]);
    let g: f64 = field(&stdout(&o), "empirical_growth_factor").parse().unwrap();
    assert!((g - 2f64.sqrt()).abs() / 2f64.sqrt() < 0.01, "{g}");

    let o = timeavg(&["simulate", "--p", "0.5", "--x", "-2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("domain error"));
}

#[test]
fn simulate_writes_paths() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("paths.csv");
    let o = timeavg(&[
        "simulate", "--p", "1", "--x", "1", "--steps", "2", "--trajectories", "2", "--paths",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, "trajectory_id,t,wealth\n0,0,1\n0,1,2\n0,2,4\n1,0,1\n1,1,2\n1,2,4\n");
}

#[test]
fn unwritable_output_exits_3() {
    let o = timeavg(&["figure", "fig1", "--out", "/nonexistent-dir/fig1.csv"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn survey_bundled_and_missing() {
    let o = timeavg(&["survey"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("agreement: 3/3"), "{text}");

    let o = timeavg(&["survey", "--path", "/nonexistent/survey.csv"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn survey_rho_one_keeps_bundled_choices() {
    let a = timeavg(&["survey", "--json"]);
    let b = timeavg(&["survey", "--json", "--rho", "1.0"]);
    let pick = |o: &Output| {
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        v["problems"]
            .as_array()
            .unwrap()
            .iter()
            .map(|p| p["model_choice"].as_str().unwrap().to_string())
            .collect::<Vec<_>>()
    };
    assert_eq!(pick(&a), pick(&b));
}

#[test]
fn survey_invalid_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, "id,description,domain,p,M,W0,rho,count_a,count_b,sure_option\nq,x,loss,0.5,1,1,1.05,0,0,b\n").unwrap();
    let o = timeavg(&["survey", "--path", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::write(&path, "").unwrap();
    let o = timeavg(&["survey", "--path", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

fn assert_json_round_trip(args: &[&str]) {
    let o = timeavg(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}");
    let emitted = stdout(&o);
    let value: serde_json::Value = serde_json::from_str(&emitted).unwrap();
    let again = serde_json::to_string_pretty(&value).unwrap() + "\n";
    assert_eq!(emitted, again, "{args:?}");
}

#[test]
fn json_output_round_trips() {
    assert_json_round_trip(&["decide", "--domain", "loss", "--p", "0.95", "--M", "190", "--W0", "200", "--json"]);
    assert_json_round_trip(&["contrast", "--p", "0.05", "--x", "-0.3", "--json"]);
    assert_json_round_trip(&["simulate", "--p", "0.3", "--x", "0.7", "--steps", "1000", "--trajectories", "10", "--json"]);
    assert_json_round_trip(&["survey", "--json"]);
}

#[test]
fn typed_json_round_trips() {
    let o = timeavg(&["survey", "--json"]);
    let parsed: timeavg_cli::SurveyOutput = serde_json::from_slice(&o.stdout).unwrap();
    let again = serde_json::to_string_pretty(&parsed).unwrap() + "\n";
    assert_eq!(stdout(&o), again);
}

fn figure_bytes(dir: &Path, name: &str, args: &[&str]) -> Vec<u8> {
    let path = dir.join(name);
    let mut all = args.to_vec();
    all.extend(["--out", path.to_str().unwrap()]);
    let o = timeavg(&all);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::read(path).unwrap()
}

#[test]
fn figures_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    for fig in ["fig1", "fig2", "fig3", "fig4"] {
        let a = figure_bytes(dir.path(), &format!("{fig}a.csv"), &["figure", fig]);
        let b = figure_bytes(dir.path(), &format!("{fig}b.csv"), &["figure", fig]);
        assert_eq!(a, b, "{fig}");
        let stdout_run = timeavg(&["figure", fig]);
        assert_eq!(stdout_run.stdout, a, "{fig}");
    }
}

#[test]
fn figure_custom_params() {
    let o = timeavg(&["figure", "fig2", "--p", "0.3", "--rho", "1.1", "--min", "-0.5", "--count", "3"]);
    assert_eq!(stdout(&o), "x,hyperbole_p0.3_rho1.1,line_x\n-0.5,-0.451779946,-0.5\n-0.25,-0.249495023,-0.25\n0,0,0\n");
    let o = timeavg(&["figure", "fig1", "--min", "-1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = timeavg(&["figure", "fig3", "--p", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_sets_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("timeavg.conf");
    std::fs::write(&cfg, "rho = 1.0\nthreshold_db = 1.5\n").unwrap();
    let c = cfg.to_str().unwrap();

    let o = timeavg(&["--config", c, "contrast", "--p", "0.5", "--x", "-1"]);
    assert_eq!(field(&stdout(&o), "classification"), "Fuzzy");
    let o = timeavg(&["contrast", "--p", "0.5", "--x", "-1"]);
    assert_eq!(field(&stdout(&o), "classification"), "Crisp");

    // rho = 1 removes the risk-seeking region.
    let o = timeavg(&["decide", "--config", c, "--domain", "loss", "--p", "0.5", "--M", "10", "--W0", "100"]);
    assert_eq!(field(&stdout(&o), "chosen"), "SureOption");
    let o = timeavg(&["decide", "--domain", "loss", "--p", "0.5", "--M", "10", "--W0", "100"]);
    assert_eq!(field(&stdout(&o), "chosen"), "RiskyOption");

    std::fs::write(&cfg, "speed = 3\n").unwrap();
    let o = timeavg(&["--config", c, "crossover", "--p", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = timeavg(&["--config", "/nonexistent.conf", "crossover", "--p", "0.5"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn crossover_and_divergence() {
    let o = timeavg(&["crossover", "--p", "0.5", "--rho", "1.05"]);
    assert_eq!(stdout(&o), "crossover: -0.181405896\n");
    let o = timeavg(&["crossover", "--p", "0.5", "--rho", "1"]);
    assert_eq!(o.status.code(), Some(2));

    let o = timeavg(&["divergence", "--p", "1", "--x", "0.5", "--steps", "2", "--trajectories", "3"]);
    assert_eq!(
        stdout(&o),
        "t,ensemble_mean_wealth,analytic_ensemble_mean,median_wealth,analytic_median\n\
         0,1,1,1,1\n1,1.5,1.5,1.5,1.5\n2,2.25,2.25,2.25,2.25\n"
    );
}
