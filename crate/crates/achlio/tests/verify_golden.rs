//! Pins the exhaustive expansion verifier against a committed golden report
//! on a fixed n=24 fixture, so report format and verdict changes are
//! deliberate.

use rand_chacha::ChaCha12Rng;

use achlio::graph::{ExpansionMode, Graph, DEFAULT_SUBSET_BUDGET};
use achlio::verify::verify_avg_degree;

#[test]
fn exhaustive_expansion_matches_golden_report() {
    let fixture = include_str!("data/expansion_n24.txt");
    let golden = include_str!("data/expansion_n24_golden.json");
    let g = Graph::parse_edge_list(fixture).unwrap();
    assert_eq!(g.n(), 24);
    // exhaustive mode never touches the rng; any seed gives the same report
    let mut rng = <ChaCha12Rng as rand::SeedableRng>::seed_from_u64(0);
    let report = verify_avg_degree(
        &g,
        16,
        4,
        ExpansionMode::Exhaustive,
        DEFAULT_SUBSET_BUDGET,
        &mut rng,
    );
    let got = serde_json::to_value(&report).unwrap();
    let want: serde_json::Value = serde_json::from_str(golden).unwrap();
    assert_eq!(got, want);
}
