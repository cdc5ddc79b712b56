use std::io::Write;
use std::process::{Command, Output};

use poisson_approx::applications::RANDOM_GRAPH_TABLE;
use poisson_approx::report::{BoundKind, BoundReport};
use poisson_approx::tv_lower_improved::k1_tilde;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_poisson-approx"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn reports(args: &[&str]) -> Vec<BoundReport> {
    let mut full = args.to_vec();
    full.push("--json");
    serde_json::from_str(&stdout(&full)).unwrap()
}

fn find<'a>(rs: &'a [BoundReport], name: &str, provenance: &str) -> &'a BoundReport {
    rs.iter()
        .find(|r| r.name == name && r.provenance == provenance)
        .unwrap_or_else(|| panic!("no {name}/{provenance} in {rs:?}"))
}

fn toml_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".toml").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn closed_form_k1_at_one() {
    let rs = reports(&["k1", "--lambda", "1", "--closed-form"]);
    assert_eq!(rs.len(), 1);
    let v = rs[0].value.get();
    assert!((v - 0.0321).abs() < 5e-5, "{v}");
    assert!((v - k1_tilde(1.0)).abs() <= 1e-12 * v);
}

#[test]
fn k1_search_beats_closed_form_and_reports_its_argmax() {
    let rs = reports(&["k1", "--lambda", "1"]);
    let search = find(&rs, "k1", "grid-search");
    assert!(search.value.get() >= find(&rs, "k1", "closed-form").value.get());
    for key in ["alpha1", "alpha2", "theta_s", "evaluations"] {
        assert!(search.context.contains_key(key), "{key}");
    }
}

#[test]
fn random_graph_example_row() {
    let rs = reports(&["example", "random-graph", "--n", "30", "--k", "27"]);
    assert_eq!(find(&rs, "lambda", "mean").value.get(), 4060.0);
    let h = find(&rs, "poisson_entropy", "poisson-entropy").value.get();
    assert!((h - 5.573).abs() < 5e-4, "{h}");
    assert!(find(&rs, "max_rel_error", "entropy-chen-stein").value.get() <= 1e-3);
}

#[test]
fn stein_plan_uses_the_ceiling() {
    let rs = reports(&[
        "plan",
        "--mode",
        "stein",
        "--epsilon",
        "1e-10",
        "--d-lower",
        "2.47e-4",
    ]);
    // ln(1e10) / 2.47e-4 = 93222.05..., so the smallest valid N is 93223.
    assert_eq!(
        find(&rs, "n_required", "chernoff-stein").value.get(),
        93223.0
    );
}

#[test]
fn spec_plan_reports_both_exponents() {
    let rs = reports(&[
        "plan",
        "--mode",
        "bayes",
        "--epsilon",
        "1e-10",
        "--profile",
        "geometric",
        "--n",
        "100",
        "--lambda",
        "0.1",
        "--alpha",
        "0.05",
    ]);
    let plans: Vec<f64> = rs
        .iter()
        .filter(|r| r.name == "n_required")
        .map(|r| r.value.get())
        .collect();
    assert_eq!(plans.len(), 2);
    assert!(plans[0] < plans[1]);
}

#[test]
fn tv_bounds_include_the_oracle_for_small_n() {
    let rs = reports(&["tv-bounds", "--p", "0.1,0.2,0.3"]);
    let exact = find(&rs, "tv", "oracle").value.get();
    for r in &rs {
        match r.kind {
            BoundKind::Lower => assert!(r.value.get() <= exact, "{r:?}"),
            BoundKind::Upper => assert!(r.value.get() >= exact, "{r:?}"),
            _ => {}
        }
    }
    let big = reports(&[
        "tv-bounds",
        "--profile",
        "linear",
        "--n",
        "50",
        "--lambda",
        "2",
    ]);
    assert!(big.iter().all(|r| r.provenance != "oracle"));
}

#[test]
fn kl_bounds_sandwich_the_oracle() {
    let rs = reports(&["kl-bounds", "--p", "0.05,0.1,0.02"]);
    let exact = find(&rs, "kl", "oracle").value.get();
    assert!(find(&rs, "kl_lower", "refined-pinsker-k2").value.get() <= exact);
    assert!(find(&rs, "kl_upper", "third-moment").value.get() >= exact);
}

#[test]
fn json_round_trips_bit_exactly() {
    let text = stdout(&["tv-bounds", "--p", "0.1,0.2,0.3", "--json"]);
    let rs: Vec<BoundReport> = serde_json::from_str(&text).unwrap();
    let again: Vec<BoundReport> =
        serde_json::from_str(&serde_json::to_string(&rs).unwrap()).unwrap();
    assert_eq!(rs.len(), again.len());
    for (a, b) in rs.iter().zip(&again) {
        assert_eq!(a.value.get().to_bits(), b.value.get().to_bits());
        assert_eq!(a, b);
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["k1", "--lambda", "3", "--json"];
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn csv_has_the_documented_columns() {
    let text = stdout(&["tv-bounds", "--p", "0.1,0.2", "--csv"]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("case,lambda,name,value,kind,provenance"));
    assert!(lines.all(|l| l.contains(",0.3,")));
}

#[test]
fn hypercube_table_in_order() {
    let text = stdout(&["tables", "--which", "1"]);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<(u32, u32)> = rdr
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].parse().unwrap(), r[1].parse().unwrap())
        })
        .collect();
    assert_eq!(rows, RANDOM_GRAPH_TABLE.to_vec());
}

#[test]
fn moving_average_table_as_json() {
    let text = stdout(&["tables", "--which", "2", "--json"]);
    let rows: Vec<serde_json::Value> = serde_json::from_str(&text).unwrap();
    assert_eq!(rows.len(), 15);
    assert!(rows
        .iter()
        .all(|r| r["max_rel_error"].as_f64().unwrap() < 0.06));
}

#[test]
fn invalid_arguments_exit_with_two() {
    for args in [
        &["tv-bounds", "--p", "1.5"][..],
        &["k1", "--lambda", "-1"],
        &["tv-bounds"],
        &[
            "plan",
            "--mode",
            "stein",
            "--epsilon",
            "2",
            "--d-lower",
            "1e-3",
        ],
        &["no-such-command"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn inapplicable_bounds_exit_with_three() {
    let out = run(&["example", "random-graph", "--n", "12", "--k", "5"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("eta"));
}

#[test]
fn schedule_file_is_used_and_validated() {
    let f = toml_file("iterations = 1\ngrid_points = 3\n");
    let rs = reports(&[
        "k1",
        "--lambda",
        "1",
        "--schedule",
        f.path().to_str().unwrap(),
    ]);
    assert_eq!(
        find(&rs, "k1", "grid-search").context["iterations"].to_string(),
        "1"
    );
    let bad = toml_file("iterations = 1\nbogus = 2\n");
    assert_eq!(
        run(&[
            "k1",
            "--lambda",
            "1",
            "--schedule",
            bad.path().to_str().unwrap()
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn model_file_drives_the_entropy_bound() {
    let f = toml_file(
        "p = [0.1, 0.1, 0.1]\nneighbors = [[0, 1], [0, 1, 2], [1, 2]]\n\
         [[pair]]\nalpha = 0\nbeta = 1\nmoment = 0.02\n\
         [[pair]]\nalpha = 1\nbeta = 0\nmoment = 0.02\n\
         [[pair]]\nalpha = 1\nbeta = 2\nmoment = 0.02\n\
         [[pair]]\nalpha = 2\nbeta = 1\nmoment = 0.02\n",
    );
    let rs = reports(&["entropy-bounds", "--model", f.path().to_str().unwrap()]);
    let r = find(&rs, "entropy_error", "entropy-chen-stein");
    assert!(r.value.get() > 0.0);
    assert_eq!(r.context["lambda"].to_string(), "0.3");

    let missing = toml_file("p = [0.1, 0.1]\nneighbors = [[0, 1], [0, 1]]\n");
    assert_eq!(
        run(&[
            "entropy-bounds",
            "--model",
            missing.path().to_str().unwrap()
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn human_output_rounds_to_four_digits() {
    let text = stdout(&["k1", "--lambda", "1", "--closed-form"]);
    assert!(text.contains("0.03206"), "{text}");
}
