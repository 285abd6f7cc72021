//! End-to-end checks of the `mhl` command line, both through `cli::run` and
//! through the built binary.

use std::path::PathBuf;
use std::process::Command;

use morrey_holder::cli::{run, CommandOutcome};
use serde_json::Value;

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    // tests run in parallel and share names: write aside, then rename atomically
    let tmp = dir.join(format!("{name}.{:?}", std::thread::current().id()));
    std::fs::write(&tmp, contents).unwrap();
    std::fs::rename(&tmp, &path).unwrap();
    path
}

fn chi1() -> String {
    scratch(
        "chi1.json",
        r#"{"dim":1,"shells":[{"inner":0,"outer":1,"value":1}]}"#,
    )
    .display()
    .to_string()
}

fn power(name: &str, a: &str) -> String {
    scratch(name, &format!(r#"{{"type":"power","a":"{a}"}}"#))
        .display()
        .to_string()
}

fn mhl(args: &[&str]) -> CommandOutcome {
    let mut argv = vec!["mhl"];
    argv.extend_from_slice(args);
    run(&argv)
}

fn payload(out: &CommandOutcome) -> Value {
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {:?}", out.stdout))
}

#[test]
fn norm_of_unit_indicator() {
    let f = chi1();
    let out = mhl(&["norm", "--function", &f, "--p", "1", "--q", "2"]);
    assert_eq!(out.exit_code, 0, "{}", out.stderr);
    let v = payload(&out);
    assert!((v["value"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-12);
    assert_eq!(v["method"], "exact-candidates");

    let oracle = payload(&mhl(&[
        "norm",
        "--function",
        &f,
        "--p",
        "1",
        "--q",
        "2",
        "--oracle",
    ]));
    assert_eq!(oracle["method"], "grid-oracle");
    let weak = payload(&mhl(&[
        "norm",
        "--function",
        &f,
        "--p",
        "1",
        "--q",
        "2",
        "--weak",
    ]));
    assert_eq!(weak["argmax_gamma"], 1.0);
}

#[test]
fn norm_with_phi_weight() {
    let f = chi1();
    let phi = power("phi_half.json", "1/2");
    let out = mhl(&["norm", "--function", &f, "--p", "1", "--phi", &phi]);
    assert_eq!(out.exit_code, 0, "{}", out.stderr);
    // (|B_1 cap B_r| / |B_r|) r^{1/2} peaks at r = 1
    assert!((payload(&out)["value"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn check_exponents_reports_q_failure() {
    let out = mhl(&[
        "check-exponents",
        "--p",
        "1",
        "--q",
        "2",
        "--factors",
        "2/2,2/2",
        "--d",
        "1",
    ]);
    assert_eq!(out.exit_code, 1);
    let v = payload(&out);
    assert_eq!(v["q_condition_holds"], false);
    assert_eq!(v["p_condition_holds"], true);

    let ok = mhl(&[
        "check-exponents",
        "--p",
        "1",
        "--q",
        "2",
        "--factors",
        "2/4,2/4",
        "--d",
        "1",
    ]);
    assert_eq!(ok.exit_code, 0);
}

#[test]
fn falsify_p_writes_csv_and_diverges() {
    let csv = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests-out.csv");
    let csv_arg = csv.display().to_string();
    let out = mhl(&[
        "falsify",
        "--mode",
        "p",
        "--p",
        "2",
        "--q",
        "2",
        "--factors",
        "2/4,2/4",
        "--d",
        "1",
        "--Kmax",
        "10000",
        "--csv",
        &csv_arg,
    ]);
    assert_eq!(out.exit_code, 1, "{}", out.stderr);
    let v = payload(&out);
    let slope = v["fitted_slope"].as_f64().unwrap();
    assert!((slope - 0.125).abs() <= 0.15 * 0.125, "{slope}");
    assert_eq!(v["verdict"], "diverges");
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("param,lhs,rhs,ratio"));
    assert_eq!(lines.count(), 5);
}

#[test]
fn falsify_modes_and_csv_to_stdout() {
    let out = mhl(&[
        "falsify",
        "--mode",
        "q",
        "--p",
        "1",
        "--q",
        "2",
        "--factors",
        "2/2,2/2",
        "--d",
        "1",
        "--radii",
        "0.005,0.05,0.5,5",
        "--csv",
        "-",
    ]);
    assert_eq!(out.exit_code, 1);
    assert!(out.stdout.starts_with("param,lhs,rhs,ratio\n0.005,"));

    let bounded = mhl(&[
        "falsify",
        "--mode",
        "weak-p",
        "--p",
        "1",
        "--q",
        "2",
        "--factors",
        "2/4,2/4",
        "--d",
        "1",
        "--Kmax",
        "1000",
    ]);
    assert_eq!(bounded.exit_code, 0);
    assert_eq!(payload(&bounded)["verdict"], "bounded");

    let (quarter, one) = (power("phi_quarter.json", "1/4"), power("phi_one.json", "1"));
    let phi = mhl(&[
        "falsify",
        "--mode",
        "phi",
        "--p",
        "1",
        "--factor-ps",
        "2,2",
        "--phi",
        &one,
        "--factor-phis",
        &quarter,
        &quarter,
        "--d",
        "1",
        "--radii",
        "1,4,100",
    ]);
    assert_eq!(phi.exit_code, 1, "{}", phi.stderr);
    let analytic: Vec<f64> = payload(&phi)["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["analytic"].as_f64().unwrap())
        .collect();
    for (a, e) in analytic.iter().zip([1.0, 2.0, 10.0]) {
        assert!((a - e).abs() < 1e-12);
    }
}

#[test]
fn q_violation_in_p_mode_is_a_usage_error() {
    let out = mhl(&[
        "falsify",
        "--mode",
        "p",
        "--p",
        "1",
        "--q",
        "2",
        "--factors",
        "2/2,2/2",
        "--d",
        "1",
    ]);
    assert_eq!(out.exit_code, 2);
    assert!(out.stderr.contains("q-condition"), "{}", out.stderr);
}

#[test]
fn verify_holder_modes() {
    let f = chi1();
    let g = scratch(
        "steps.json",
        r#"{"dim":1,"shells":[{"inner":0,"outer":1,"value":2},{"inner":2,"outer":3,"value":1}]}"#,
    )
    .display()
    .to_string();
    for mode in ["strong", "weak"] {
        let out = mhl(&[
            "verify-holder",
            "--functions",
            &f,
            &g,
            "--mode",
            mode,
            "--p",
            "1",
            "--q",
            "2",
            "--factors",
            "2/4,2/4",
        ]);
        assert_eq!(out.exit_code, 0, "{}", out.stderr);
        assert_eq!(payload(&out)["holds"], true);
        assert!(out.stderr.starts_with("PASS"));
    }
    let (quarter, half) = (
        power("phi_quarter.json", "1/4"),
        power("phi_half.json", "1/2"),
    );
    for mode in ["gen-strong", "gen-weak"] {
        let out = mhl(&[
            "verify-holder",
            "--functions",
            &f,
            &g,
            "--mode",
            mode,
            "--p",
            "1",
            "--factor-ps",
            "2,2",
            "--phi",
            &half,
            "--factor-phis",
            &quarter,
            &quarter,
        ]);
        assert_eq!(out.exit_code, 0, "{}", out.stderr);
        assert_eq!(payload(&out)["mode"], mode);
    }
    // R = 100 indicator against a q-violating system: ratio 10
    let big = scratch(
        "chi100.json",
        r#"{"dim":1,"shells":[{"inner":0,"outer":100,"value":1}]}"#,
    )
    .display()
    .to_string();
    let out = mhl(&[
        "verify-holder",
        "--functions",
        &big,
        &big,
        "--mode",
        "strong",
        "--p",
        "1",
        "--q",
        "1",
        "--factors",
        "2/4,2/4",
    ]);
    assert_eq!(out.exit_code, 1);
    assert!(out.stderr.starts_with("FAIL"));
}

#[test]
fn phi_check_and_chi_norm() {
    let half = power("phi_half.json", "1/2");
    let out = mhl(&[
        "phi-check",
        "--phi",
        &half,
        "--p",
        "2",
        "--d",
        "1",
        "--eps",
        "0.5",
    ]);
    assert_eq!(out.exit_code, 0);
    assert_eq!(payload(&out)["g_p"]["member"], true);
    let out = mhl(&["phi-check", "--phi", &half, "--p", "4", "--d", "1"]);
    assert_eq!(out.exit_code, 1);

    let out = mhl(&["chi-norm", "--R", "3", "--d", "2", "--p", "1", "--q", "2"]);
    let v = payload(&out);
    let closed = v["closed_form"].as_f64().unwrap();
    assert!((v["norm"]["value"].as_f64().unwrap() - closed).abs() <= 1e-12 * closed);
}

#[test]
fn audit_is_reproducible() {
    let f = chi1();
    let args = [
        "audit-centered",
        "--function",
        &f,
        "--p",
        "1",
        "--q",
        "2",
        "--samples",
        "500",
        "--seed",
        "3",
    ];
    let a = mhl(&args);
    let b = mhl(&args);
    assert_eq!(a.exit_code, 0, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout);
    assert!(payload(&a)["margin"].as_f64().unwrap() >= 0.0);
}

#[test]
fn errors_name_the_field() {
    let bad = scratch(
        "bad.json",
        r#"{"dim":1,"shells":[{"inner":2,"outer":1,"value":1}]}"#,
    )
    .display()
    .to_string();
    let out = mhl(&["norm", "--function", &bad, "--p", "1", "--q", "2"]);
    assert_eq!(out.exit_code, 2);
    assert!(out.stderr.contains("--function"), "{}", out.stderr);

    let broken = scratch("broken.json", "{not json").display().to_string();
    let out = mhl(&["norm", "--function", &broken, "--p", "1", "--q", "2"]);
    assert_eq!(out.exit_code, 2);
    assert!(out.stderr.contains("malformed JSON"));

    let f = chi1();
    let out = mhl(&["norm", "--function", &f, "--p", "0.5", "--q", "2"]);
    assert_eq!(out.exit_code, 2);
    assert!(out.stderr.contains("--p"), "{}", out.stderr);

    assert_eq!(
        mhl(&["norm", "--function", &f, "--p", "1", "--q", "2", "--bogus"]).exit_code,
        2
    );
    assert_eq!(mhl(&["frobnicate"]).exit_code, 2);
    assert_eq!(mhl(&["--help"]).exit_code, 0);
}

#[test]
fn binary_honours_thread_cap_and_is_deterministic() {
    let f = chi1();
    let args = [
        "falsify",
        "--mode",
        "p",
        "--p",
        "2",
        "--q",
        "2",
        "--factors",
        "2/4,2/4",
        "--d",
        "1",
        "--Kmax",
        "3000",
    ];
    let runs: Vec<std::process::Output> = ["1", "4"]
        .iter()
        .map(|n| {
            Command::new(env!("CARGO_BIN_EXE_mhl"))
                .args(args)
                .env("MHL_THREADS", n)
                .output()
                .unwrap()
        })
        .collect();
    assert_eq!(runs[0].status.code(), Some(1));
    assert_eq!(runs[0].stdout, runs[1].stdout);

    let bad = Command::new(env!("CARGO_BIN_EXE_mhl"))
        .args(["norm", "--function", &f, "--p", "1", "--q", "2"])
        .env("MHL_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("MHL_THREADS"));
}

#[test]
fn function_queries() {
    let steps = scratch(
        "steps_adjacent.json",
        r#"{"dim":1,"shells":[{"inner":0,"outer":1,"value":2},{"inner":1,"outer":2,"value":1,"outer_closed":true}]}"#,
    )
    .display()
    .to_string();
    let out = mhl(&[
        "function",
        "--function",
        &steps,
        "--r",
        "2",
        "--p",
        "1",
        "--gamma",
        "1.5",
    ]);
    assert_eq!(out.exit_code, 0, "{}", out.stderr);
    let v = payload(&out);
    assert_eq!(v["ball_integral"], 6.0);
    assert_eq!(v["superlevel_measure"], 2.0);

    let v = payload(&mhl(&[
        "function",
        "--function",
        &chi1(),
        "--r",
        "1",
        "--p",
        "1",
        "--a",
        "0.5",
    ]));
    assert_eq!(v["offcenter_integral"], 1.5);
    let v = payload(&mhl(&["function", "--indicator", "1", "--d", "3"]));
    assert!((v["unit_ball_volume"].as_f64().unwrap() - 4.18879020).abs() < 1e-8);

    // g_{0.5,3}: [0, 2+2^-1/2] after merging, then [3, 3+3^-1/2]
    let v = payload(&mhl(&[
        "function", "--g-eps", "0.5", "--K", "3", "--d", "1",
    ]));
    let shells = v["function"]["shells"].as_array().unwrap();
    assert_eq!(shells.len(), 2);
    assert!((shells[0]["outer"].as_f64().unwrap() - 2.70711).abs() < 1e-5);
    assert!((shells[1]["outer"].as_f64().unwrap() - 3.57735).abs() < 1e-5);

    // g * g = g, closure flags included
    let g = scratch("g_05_3.json", &v["function"].to_string())
        .display()
        .to_string();
    let squared = payload(&mhl(&["function", "--function", &g, "--times", &g]));
    assert_eq!(squared["function"], v["function"]);

    assert_eq!(mhl(&["function", "--indicator", "1"]).exit_code, 2);
    assert_eq!(
        mhl(&["function", "--function", &chi1(), "--gamma", "1"]).exit_code,
        2
    );
}

#[test]
fn phi_eval_multiplies_weights() {
    let quarter = power("phi_quarter_eval.json", "1/4");
    let table = scratch(
        "phi_table.json",
        r#"{"type":"table","knots":[[1,1],[4,0.5]]}"#,
    )
    .display()
    .to_string();
    let v = payload(&mhl(&["phi-eval", "--phi", &table, "--r", "2"]));
    assert!((v["value"].as_f64().unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
    let v = payload(&mhl(&["phi-eval", "--phi", &quarter, &quarter, "--r", "4"]));
    assert_eq!(v["phi"]["a"], "1/2");
    assert_eq!(v["value"], 0.5);
    let v = payload(&mhl(&["phi-eval", "--phi", &quarter, &table, "--r", "4"]));
    assert!((v["value"].as_f64().unwrap() - 0.35355339).abs() < 1e-8);
}

#[test]
fn embedding_mode_and_exact_decade_spread() {
    let steps = scratch(
        "steps_embedding.json",
        r#"{"dim":1,"shells":[{"inner":0,"outer":1,"value":2},{"inner":1,"outer":2,"value":1}]}"#,
    )
    .display()
    .to_string();
    let out = mhl(&[
        "verify-holder",
        "--functions",
        &steps,
        "--mode",
        "embedding",
        "--p",
        "1",
        "--q",
        "1",
    ]);
    assert_eq!(out.exit_code, 0, "{}", out.stderr);
    let v = payload(&out);
    assert_eq!(
        (v["lhs"].as_f64(), v["rhs"].as_f64()),
        (Some(4.0), Some(6.0))
    );

    // analytic ratio R^{1/2} over {1, 4, 100} spans exactly one decade
    let (one, quarter) = (
        power("phi_one_dec.json", "1"),
        power("phi_quarter_dec.json", "1/4"),
    );
    let out = mhl(&[
        "falsify",
        "--mode",
        "phi",
        "--p",
        "1",
        "--d",
        "1",
        "--factor-ps",
        "2,2",
        "--phi",
        &one,
        "--factor-phis",
        &quarter,
        &quarter,
        "--radii",
        "1,4,100",
    ]);
    assert_eq!(out.exit_code, 1, "{}", out.stderr);
    assert_eq!(payload(&out)["verdict"], "diverges");
}
