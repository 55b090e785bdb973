//! Report emission, parsing and run-level contracts.

use gaplab::generror::{IdentityId, IdentityResult, Status, Tolerance};
use gaplab::harness::{
    emit_report, exit_code, generate_scenario, read_scenario, run, write_scenario, Dims, Format,
    Mode, RunConfig, RunReport, ScenarioDims, ScenarioReport, Summary,
};
use serde_json::Value;

fn small_config() -> RunConfig {
    RunConfig {
        num_scenarios: 5,
        ..RunConfig::default()
    }
}

fn strip_wall_time(bytes: &[u8]) -> Value {
    let mut v: Value = serde_json::from_slice(bytes).unwrap();
    v.as_object_mut().unwrap().remove("wall_time_secs");
    v
}

#[test]
fn json_round_trip_recomputes_summary() {
    let report = run(&RunConfig {
        mode: Mode::Adversarial,
        ..small_config()
    })
    .unwrap();
    let v: Value = serde_json::from_slice(&emit_report(&report, Format::Json).unwrap()).unwrap();
    let mut tally = [0u64; 3];
    for scenario in v["scenarios"].as_array().unwrap() {
        for r in scenario["results"].as_array().unwrap() {
            let i = match r["status"].as_str().unwrap() {
                "pass" => 0,
                "fail" => 1,
                "skipped" => {
                    assert!(r["reason"].is_string());
                    2
                }
                other => panic!("unexpected status {other}"),
            };
            tally[i] += 1;
        }
    }
    assert_eq!(tally[0], v["summary"]["pass"].as_u64().unwrap());
    assert_eq!(tally[1], v["summary"]["fail"].as_u64().unwrap());
    assert_eq!(tally[2], v["summary"]["skipped"].as_u64().unwrap());
    assert!(tally[2] > 0);
    assert!(v["triangles"].is_array());
}

#[test]
fn one_result_gives_two_csv_lines() {
    let report = RunReport {
        config: RunConfig::default(),
        scenarios: vec![ScenarioReport {
            seed: Some(0),
            source: None,
            dims: ScenarioDims {
                datapoints: 2,
                n: 1,
                models: 2,
            },
            results: vec![IdentityResult::compare(
                IdentityId::A1,
                "lambda=1,Q=given".into(),
                0.1,
                0.1,
                &Tolerance::default(),
            )],
            triangles: vec![],
        }],
        summary: Summary {
            pass: 1,
            fail: 0,
            skipped: 0,
        },
        wall_time_secs: 0.0,
    };
    let text = String::from_utf8(emit_report(&report, Format::Csv).unwrap()).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], "scenario,identity,lhs,rhs,abs_err,rel_err,status");
    assert!(lines[1].contains("1.0000000000000001e-1"));
    assert!(lines[1].ends_with(",pass"));
}

#[test]
fn identical_configs_give_identical_reports() {
    let a = run(&small_config()).unwrap();
    let b = run(&small_config()).unwrap();
    let ja = emit_report(&a, Format::Json).unwrap();
    let jb = emit_report(&b, Format::Json).unwrap();
    assert_eq!(strip_wall_time(&ja), strip_wall_time(&jb));
    assert_eq!(
        emit_report(&a, Format::Csv).unwrap(),
        emit_report(&b, Format::Csv).unwrap()
    );
}

#[test]
fn tightened_tolerance_produces_fails() {
    let mut config = small_config();
    config.tolerance = Tolerance {
        rel: 1e-15,
        abs: 1e-15,
    };
    let report = run(&config).unwrap();
    assert!(report.summary.fail > 0);
    assert_eq!(exit_code(&report), 1);
    let default = run(&small_config()).unwrap();
    assert_eq!(default.summary.fail, 0);
    assert_eq!(exit_code(&default), 0);
}

#[test]
fn summary_matches_detailed_list() {
    let report = run(&small_config()).unwrap();
    assert_eq!(report.summary, Summary::tally(report.results()));
    assert!(report.results().all(|r| r.status == Status::Pass));
}

#[test]
fn pinned_fixture_is_evaluated_after_generated_scenarios() {
    let dir = std::env::temp_dir().join(format!("gaplab-fixture-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("scenario.json");
    let s = generate_scenario(42, &Dims::default(), Mode::FullSupport).unwrap();
    write_scenario(&s, &path).unwrap();
    let back = read_scenario(&path).unwrap();
    assert_eq!(back.n, s.n);
    let report = run(&RunConfig {
        num_scenarios: 1,
        fixtures: vec![path.clone()],
        ..RunConfig::default()
    })
    .unwrap();
    assert_eq!(report.scenarios.len(), 2);
    assert_eq!(report.scenarios[1].seed, None);
    assert_eq!(report.summary.fail, 0);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn unwritable_output_is_an_io_error() {
    let report = run(&RunConfig {
        num_scenarios: 1,
        ..RunConfig::default()
    })
    .unwrap();
    let bad = std::path::Path::new("/nonexistent-dir/report.json");
    let err = gaplab::harness::write_report(&report, Format::Json, Some(bad)).unwrap_err();
    assert!(matches!(err, gaplab::Error::Io(_)));
}
