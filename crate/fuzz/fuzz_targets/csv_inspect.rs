#![no_main]

use libfuzzer_sys::fuzz_target;
use mmtrace_core::export::{inspect_csv, plot_script};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(summary) = inspect_csv(text) {
        assert!(summary.rows.iter().all(|r| r.len() + usize::from(!summary.labels.is_empty()) == summary.columns.len()));
        plot_script(&[("input.csv".to_string(), summary)]).expect("one input always renders");
    }
});
