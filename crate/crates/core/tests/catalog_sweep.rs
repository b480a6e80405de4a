//! Full verification sweep: every registered entry runs all of its lanes at
//! a feasibility-sized bound. This exercises the oracle-vs-brute and
//! oracle-vs-word-DP comparisons plus every frozen fact, entry by entry.

use specker_core::catalog::{get_entry, list_entries, verify_entry};

#[test]
fn every_entry_verifies() {
    for name in list_entries() {
        let entry = get_entry(name).unwrap();
        let max_n = entry.brute_max_n.max(entry.base + 3).min(10);
        let report = verify_entry(name, max_n).unwrap();
        for lane in &report.lanes {
            assert!(lane.pass, "{name} / {}: {}", lane.lane, lane.detail);
        }
        println!(
            "{name}: {} lanes pass at max_n = {max_n}",
            report.lanes.len()
        );
    }
}

#[test]
fn sequences_match_documented_prefixes() {
    // spot checks straight from the registry front end
    let cases: Vec<(&str, Vec<&str>)> = vec![
        ("binary_relations", vec!["1", "2", "16", "512"]),
        ("equivalence_relations", vec!["1", "1", "2", "5", "15", "52"]),
        ("trees", vec!["1", "1", "3", "16", "125"]),
        ("catalan", vec!["1", "2", "5", "14", "42"]),
        ("e2eq", vec!["0", "1", "0", "3", "0", "10"]),
        ("fibonacci", vec!["0", "1", "1", "2", "3", "5", "8"]),
        ("lucas", vec!["2", "1", "3", "4", "7", "11"]),
    ];
    for (name, expect) in cases {
        let entry = get_entry(name).unwrap();
        let seq = entry.sequence(entry.base + expect.len() - 1);
        let got: Vec<String> = seq.into_iter().map(|(_, v)| v).collect();
        assert_eq!(got, expect, "{name}");
    }
}
