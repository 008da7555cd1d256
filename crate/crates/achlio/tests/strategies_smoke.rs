//! End-to-end runs of each strategy at small scale through the real engine.

use achlio::engine::{run, Outcome, RunParams, SamplingModel};
use achlio::posa::is_hamilton_cycle;
use achlio::strategies::{
    DOutParams, DOutStrategy, SublogParams, SublogStrategy, SuperlogParams, SuperlogStrategy,
};

fn rebuild(record: &achlio::engine::RunRecord) -> achlio::graph::Graph {
    let mut g = achlio::graph::Graph::new(record.n);
    for entry in record.ledger.as_ref().expect("ledger") {
        if let achlio::engine::Choice::Pick(i) = entry.choice {
            let (u, v) = entry.candidates[i];
            if u != v {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

#[test]
fn sublog_small_run_reaches_hamilton() {
    let n = 400;
    let k = 4;
    let mut wins = 0;
    for seed in 0..3 {
        let params = RunParams {
            n,
            k,
            model: SamplingModel::RelaxedPairs,
            seed,
            max_rounds: 200_000,
            ledger: true,
        };
        let mut s = SublogStrategy::new(n, k, SublogParams::desk(n, k));
        let record = run(&params, &mut s, None).unwrap();
        match &record.outcome {
            Outcome::Hamiltonian(c) => {
                let g = rebuild(&record);
                assert!(is_hamilton_cycle(&g, c));
                wins += 1;
            }
            other => eprintln!("seed {seed}: {other:?} phases {:?}", record.phase_rounds),
        }
    }
    assert!(wins >= 2, "sublog won only {wins}/3 small runs");
}

#[test]
fn dout_small_run_builds_and_certifies() {
    let n = 200;
    let k = 6;
    let d = 3;
    let mut certified = 0;
    for seed in 0..3 {
        let params = RunParams {
            n,
            k,
            model: SamplingModel::RelaxedPairs,
            seed,
            max_rounds: 50_000,
            ledger: true,
        };
        let mut s = DOutStrategy::intermediate(n, DOutParams::new(d, k));
        let record = run(&params, &mut s, None).unwrap();
        match &record.outcome {
            Outcome::Hamiltonian(c) => {
                let g = rebuild(&record);
                assert!(is_hamilton_cycle(&g, c));
                // the cycle must live inside the recorded d-out graph
                let dg = s.d_out_graph();
                assert!(is_hamilton_cycle(&dg, c));
                certified += 1;
            }
            Outcome::NotCertified => {}
            other => panic!("seed {seed}: unexpected outcome {other:?}"),
        }
        for outs in s.out_neighbors() {
            assert!(outs.len() <= d);
            let mut sorted = outs.clone();
            sorted.sort_unstable();
            sorted.dedup();
            assert_eq!(sorted.len(), outs.len(), "duplicate out-neighbor");
        }
    }
    assert!(certified >= 2, "only {certified}/3 runs certified");
}

#[test]
fn dout_zero_d_finishes_immediately() {
    let params = RunParams {
        n: 50,
        k: 2,
        model: SamplingModel::ExactMissing,
        seed: 1,
        max_rounds: 1000,
        ledger: false,
    };
    let mut s = DOutStrategy::new(50, DOutParams::new(0, 2));
    let record = run(&params, &mut s, None).unwrap();
    assert_eq!(record.outcome, Outcome::Constructed);
    assert_eq!(record.total_rounds, 0);
}

#[test]
fn superlog_small_run_reaches_hamilton() {
    let n = 2000;
    let k = 4000;
    let p = SuperlogParams {
        h: 4.1,
        d_exp: 8,
        d_tilde: 4,
        l: 10,
        desk_inner: true,
    };
    let mut wins = 0;
    for seed in 0..3 {
        let params = RunParams {
            n,
            k,
            model: SamplingModel::RelaxedPairs,
            seed,
            max_rounds: 30_000,
            ledger: true,
        };
        let mut s = SuperlogStrategy::new(n, k, p);
        let record = run(&params, &mut s, None).unwrap();
        match &record.outcome {
            Outcome::Hamiltonian(c) => {
                let g = rebuild(&record);
                assert!(is_hamilton_cycle(&g, c));
                wins += 1;
            }
            other => eprintln!("seed {seed}: {other:?} phases {:?}", record.phase_rounds),
        }
    }
    assert!(wins >= 2, "superlog won only {wins}/3 small runs");
}
