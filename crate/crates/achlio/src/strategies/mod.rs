//! Online strategies for the K-offer edge process, plus offline ledger
//! analyzers used by the experiment harness.

pub mod dout;
pub mod sublog;
pub mod superlog;

pub use dout::{DOutParams, DOutStrategy};
pub use sublog::{CoreStatus, SublogCore, SublogParams, SublogStrategy};
pub use superlog::{SuperlogParams, SuperlogStrategy};

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::engine::{Choice, RoundOffer, RunRecord, Strategy, StrategyStatus};
use crate::graph::{Graph, Vertex};
use crate::posa::hamiltonicity_search;

/// Accepts every legal candidate (the first one in the offer). With K = 1
/// this reproduces the uniform random graph process; hitting times are then
/// read off the ledger afterwards.
pub struct CollectAll;

impl Strategy for CollectAll {
    fn on_offer(&mut self, offer: &RoundOffer, g: &Graph, _rng: &mut ChaCha12Rng) -> Choice {
        match offer
            .candidates
            .iter()
            .position(|&(u, v)| u != v && !g.has_edge(u, v))
        {
            Some(i) => Choice::Pick(i),
            None => Choice::Skip,
        }
    }

    fn on_applied(&mut self, _added: Option<(Vertex, Vertex)>, _g: &Graph, _rng: &mut ChaCha12Rng) {}

    fn phase_label(&self) -> &str {
        "collect"
    }

    fn name(&self) -> &str {
        "collect_all"
    }

    fn status(&self, _g: &Graph) -> StrategyStatus {
        StrategyStatus::Running
    }
}

/// Replays the picked edges of a ledger and returns the pairs in pick order
/// together with the round index at which each was added.
fn picked_edges(record: &RunRecord) -> Result<Vec<(u64, Vertex, Vertex)>, String> {
    let ledger = record
        .ledger
        .as_ref()
        .ok_or_else(|| "run record has no ledger".to_string())?;
    let mut out = Vec::new();
    for entry in ledger {
        if let Choice::Pick(i) = entry.choice {
            let (u, v) = *entry
                .candidates
                .get(i)
                .ok_or_else(|| format!("round {}: pick {} out of range", entry.round, i))?;
            if u != v {
                out.push((entry.round, u, v));
            }
        }
    }
    Ok(out)
}

/// First round index r such that the graph built from the first r rounds of
/// the ledger has minimum degree ≥ `d`, or None if the run never got there.
pub fn min_degree_hitting_time(record: &RunRecord, d: usize) -> Result<Option<u64>, String> {
    let picks = picked_edges(record)?;
    let n = record.n;
    if d == 0 {
        return Ok(Some(0));
    }
    let mut deg = vec![0usize; n];
    let mut deficient = n;
    let mut g = Graph::new(n);
    for (round, u, v) in picks {
        if g.add_edge(u, v).map_err(|e| e.to_string())? {
            for w in [u, v] {
                deg[w as usize] += 1;
                if deg[w as usize] == d {
                    deficient -= 1;
                }
            }
            if deficient == 0 {
                return Ok(Some(round + 1));
            }
        }
    }
    Ok(None)
}

/// First round index at which the evolving graph is Hamiltonian, found by
/// fast-forwarding to the min-degree-2 hitting time and then re-running the
/// rotation search every few added edges.
pub fn hamilton_hitting_time(record: &RunRecord, restarts: usize) -> Result<Option<u64>, String> {
    let Some(tau2) = min_degree_hitting_time(record, 2)? else {
        return Ok(None);
    };
    let picks = picked_edges(record)?;
    let mut g = Graph::new(record.n);
    let mut rng = ChaCha12Rng::seed_from_u64(record.rng.seed ^ 0x9e3779b97f4a7c15);
    let mut idx = 0;
    while idx < picks.len() && picks[idx].0 < tau2 {
        let (_, u, v) = picks[idx];
        g.add_edge(u, v).map_err(|e| e.to_string())?;
        idx += 1;
    }
    let mut checked_round = tau2;
    loop {
        if hamiltonicity_search(&g, restarts, &mut rng).is_some() {
            return Ok(Some(checked_round));
        }
        if idx >= picks.len() {
            return Ok(None);
        }
        // advance in small steps so the reported round stays tight
        let stop = (idx + 8).min(picks.len());
        while idx < stop {
            let (round, u, v) = picks[idx];
            g.add_edge(u, v).map_err(|e| e.to_string())?;
            checked_round = round + 1;
            idx += 1;
        }
    }
}

/// Number of vertices with degree < `d` in the graph formed by the first `t`
/// rounds of the ledger. Errors if the record covers fewer than `t` rounds.
pub fn degree_deficiency_probe(record: &RunRecord, d: usize, t: u64) -> Result<usize, String> {
    if t > record.total_rounds {
        return Err(format!(
            "probe at round {t} but the run only has {} rounds",
            record.total_rounds
        ));
    }
    let picks = picked_edges(record)?;
    let mut g = Graph::new(record.n);
    for (round, u, v) in picks {
        if round >= t {
            break;
        }
        g.add_edge(u, v).map_err(|e| e.to_string())?;
    }
    Ok((0..record.n as Vertex).filter(|&v| g.degree(v) < d).count())
}
