//! Replays the checked-in fuzz corpus through the same checks as the fuzz
//! targets, so regressions show up in a plain `cargo test`.

use std::fs;
use std::path::PathBuf;

use mmtrace_core::export::{inspect_csv, plot_script};
use mmtrace_core::scenario::parse_scenario;

fn seeds(target: &str) -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .map(|p| {
            let text = fs::read_to_string(&p).unwrap();
            (p, text)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty());
    out
}

#[test]
fn scenario_seeds() {
    let mut accepted = 0;
    for (path, text) in seeds("scenario_parse") {
        let Ok(config) = parse_scenario(&text) else {
            continue;
        };
        accepted += 1;
        let again = parse_scenario(&config.to_toml()).unwrap();
        assert_eq!(again, config, "{}", path.display());
        let _ = config.build_environment();
    }
    assert!(accepted >= 5);
}

#[test]
fn scenario_seeds_with_bad_values_are_rejected() {
    for (path, text) in seeds("scenario_parse") {
        let name = path.file_stem().unwrap().to_str().unwrap();
        let result = parse_scenario(&text).and_then(|c| c.build_environment());
        match name {
            "unknown_key" | "too_few_samples" | "bad_bend" | "nan_frequency" | "overlapping_slabs" => {
                assert!(result.is_err(), "{name} should be rejected")
            }
            _ => assert!(result.is_ok(), "{name}: {}", result.unwrap_err()),
        }
    }
}

#[test]
fn csv_seeds() {
    for (path, text) in seeds("csv_inspect") {
        let name = path.file_stem().unwrap().to_str().unwrap().to_string();
        match inspect_csv(&text) {
            Ok(summary) => {
                assert!(!matches!(name.as_str(), "ragged" | "data_after_footer"), "{name} accepted");
                plot_script(&[("input.csv".to_string(), summary)]).unwrap();
            }
            Err(_) => assert!(matches!(name.as_str(), "ragged" | "data_after_footer"), "{name} rejected"),
        }
    }
}
