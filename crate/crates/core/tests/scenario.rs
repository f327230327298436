use nicadil::scenario::{run_scenario_text, RunOptions, Verdict};

fn run(text: &str) -> nicadil::scenario::Report {
    run_scenario_text(text, &RunOptions::default()).unwrap()
}

fn bundled(name: &str) -> String {
    std::fs::read_to_string(format!("{}/scenarios/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn bundled_scenarios_pass() {
    for name in [
        "scalar_kernel.json",
        "zero_contraction.json",
        "two_factor_tensor.json",
        "real_factor.json",
        "covariant_m2.json",
        "empty.json",
    ] {
        let report = run(&bundled(name));
        assert_eq!(report.verdict, Verdict::Pass, "{name}: {}", report.to_json());
        assert_eq!(report.exit_code(), 0);
    }
}

#[test]
fn empty_task_list() {
    let report = run(&bundled("empty.json"));
    assert!(report.tasks.is_empty());
    assert_eq!(report.summary.total, 0);
    assert_eq!(report.exit_code(), 0);
}

#[test]
fn norm_exceeded_is_a_setup_error() {
    let report = run(&bundled("norm_exceeded.json"));
    assert_eq!(report.exit_code(), 3);
    assert_eq!(report.setup_errors[0].kind, "NormExceeded");
    assert_eq!(report.tasks[0].verdict, Verdict::Error);
}

#[test]
fn mixed_real_support_is_rejected() {
    let text = r#"{
      "factors": [{ "kind": "real", "generators": ["1", "1.41421356237309504880"] }],
      "representation": { "mode": "tensor", "legs": [[[[0.5]], [[0.25]]]] },
      "tasks": [{ "type": "kernel_check", "support": { "depth": 1 } }]
    }"#;
    let report = run(text);
    let task = &report.tasks[0];
    assert_eq!(task.verdict, Verdict::Error);
    assert_eq!(task.error.as_ref().unwrap().kind, "NotInMonoid");
    assert_eq!(report.exit_code(), 3);
}

#[test]
fn failing_check_exits_one() {
    let text = r#"{
      "factors": [{ "kind": "cyclic" }, { "kind": "cyclic" }],
      "representation": { "mode": "direct", "generators": [[[[0, 1], [0, 0]]], [[[0, 1], [0, 0]]]] },
      "tasks": [{ "type": "validate" }]
    }"#;
    let report = run(text);
    assert_eq!(report.tasks[0].verdict, Verdict::Fail);
    assert_eq!(report.exit_code(), 1);
}

#[test]
fn schema_errors() {
    for text in [
        "not json",
        r#"{"factors": 3, "tasks": []}"#,
        r#"{"factors": [{"kind": "cyclic"}], "tasks": [], "bogus": 1}"#,
        r#"{"factors": [{"kind": "cyclic"}], "tasks": [{"type": "teleport"}]}"#,
        r#"{"factors": [{"kind": "cyclic", "generators": ["1", "2"]}], "tasks": []}"#,
        r#"{"factors": [{"kind": "cyclic"}], "tasks": [{"type": "dilate", "support": {"points": [[1, 2]]}}]}"#,
        r#"{"factors": [{"kind": "cyclic"}], "representation": {"mode": "direct", "generators": [[[[1, 0], [0]]]]}, "tasks": []}"#,
    ] {
        assert!(run_scenario_text(text, &RunOptions::default()).is_err(), "accepted: {text}");
    }
}

#[test]
fn overrides_reach_the_report() {
    let text = bundled("norm_two_factor.json");
    let options = RunOptions {
        seed: Some(5),
        tol: Some(1e-7),
        depth: Some(1),
        parallel: false,
    };
    let report = run_scenario_text(&text, &options).unwrap();
    assert_eq!(report.environment.seed, 5);
    assert_eq!(report.environment.tolerances.tol, 1e-7);
    assert_eq!(report.environment.depth, 1);
    assert_eq!(report.tasks[0].seed, 5);
    let other = run_scenario_text(&text, &RunOptions { seed: Some(6), ..options }).unwrap();
    assert_ne!(
        report.tasks[0].results.get("contractive_sup"),
        other.tasks[0].results.get("contractive_sup")
    );
}

#[test]
fn parallel_matches_sequential() {
    let text = bundled("two_factor_tensor.json");
    let strip = |mut r: nicadil::scenario::Report| {
        for t in &mut r.tasks {
            t.wall_time_ms = 0.0;
        }
        r.to_json()
    };
    let seq = strip(run(&text));
    let par = strip(run_scenario_text(&text, &RunOptions { parallel: true, ..Default::default() }).unwrap());
    assert_eq!(seq, par);
}

mod malformed {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn truncated_scenarios_are_schema_errors(cut in 1usize..400) {
            let text = bundled("two_factor_tensor.json");
            let trimmed = text.trim_end();
            let cut = cut.min(trimmed.len() - 1);
            prop_assume!(trimmed.is_char_boundary(cut));
            prop_assert!(run_scenario_text(&trimmed[..cut], &RunOptions::default()).is_err());
        }

        #[test]
        fn wrong_coefficient_lengths(extra in 1usize..4) {
            let s = vec!["1"; 1 + extra].join(", ");
            let text = format!(
                r#"{{"factors": [{{"kind": "cyclic"}}], "tasks": [{{"type": "dilate", "support": {{"points": [[{s}]]}}}}]}}"#
            );
            prop_assert!(run_scenario_text(&text, &RunOptions::default()).is_err());
        }
    }
}
