//! Scans must produce bit-identical output at any worker count.

use shatterscan_core::experiments::{records_to_csv, threshold_scan, RecordFormat, ScanConfig};
use shatterscan_core::types::ArrayKind;

fn config(threads: Option<usize>) -> ScanConfig {
    ScanConfig {
        kind: ArrayKind::Words,
        n: 8,
        q: Some(2),
        t: 2,
        k_min: 4,
        k_max: 16,
        k_step: 4,
        trials: 200,
        seed: 20260811,
        threads,
        out: None,
        format: RecordFormat::Csv,
    }
}

#[test]
fn scan_csv_identical_across_worker_counts() {
    let baseline = records_to_csv(&threshold_scan(&config(Some(1))).unwrap());
    for threads in [2usize, 8] {
        let csv = records_to_csv(&threshold_scan(&config(Some(threads))).unwrap());
        assert_eq!(csv, baseline, "threads={threads}");
    }
    // And with whatever the global default pool is.
    let csv = records_to_csv(&threshold_scan(&config(None)).unwrap());
    assert_eq!(csv, baseline);
}

#[test]
fn perm_scan_identical_across_worker_counts() {
    let cfg = |threads| ScanConfig {
        kind: ArrayKind::Perms,
        n: 6,
        q: None,
        t: 2,
        k_min: 2,
        k_max: 10,
        k_step: 2,
        trials: 150,
        seed: 7,
        threads,
        out: None,
        format: RecordFormat::Csv,
    };
    let baseline = records_to_csv(&threshold_scan(&cfg(Some(1))).unwrap());
    assert_eq!(
        records_to_csv(&threshold_scan(&cfg(Some(8))).unwrap()),
        baseline
    );
}
