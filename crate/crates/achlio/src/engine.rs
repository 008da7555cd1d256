//! The Achlioptas process driver: per round, sample K candidate edges under
//! the chosen model, ask the strategy for a choice, apply it, and record.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, Vertex};

pub const RNG_ALGORITHM: &str = "chacha12";

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("pick index {0} out of range for K={1}")]
    PickOutOfRange(usize, usize),
    #[error("ExactMissing model needs {needed} missing edges but only {left} remain")]
    GraphNearlyComplete { needed: usize, left: usize },
    #[error("unknown rng algorithm {0:?} (only {RNG_ALGORITHM:?} is supported)")]
    UnknownAlgorithm(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SamplingModel {
    /// K distinct uniform missing edges per round.
    ExactMissing,
    /// K i.i.d. ordered pairs over [n]²; loops and repeats possible, and
    /// discarded silently when picked.
    RelaxedPairs,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RoundOffer {
    pub round_index: u64,
    pub candidates: Vec<(Vertex, Vertex)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Choice {
    Pick(usize),
    Skip,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Outcome {
    /// Hamilton cycle certificate, verified against the final graph.
    Hamiltonian(Vec<Vertex>),
    /// The strategy reached its construction goal without a cycle
    /// certificate (e.g. a d-out build, or a stop predicate firing).
    Constructed,
    /// Construction succeeded but the Hamiltonicity search found no
    /// certificate; the graph may still be Hamiltonian.
    NotCertified,
    BudgetExhausted,
    PhaseFailed(String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RngSpec {
    pub seed: u64,
    pub algorithm: String,
}

impl RngSpec {
    pub fn new(seed: u64) -> Self {
        RngSpec {
            seed,
            algorithm: RNG_ALGORITHM.into(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub round: u64,
    pub candidates: Vec<(Vertex, Vertex)>,
    pub choice: Choice,
    pub phase: String,
}

/// Full record of one run. Two runs with equal `RngSpec` and parameters are
/// byte-identical after serialization, except for the `timestamp` field.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunRecord {
    pub rng: RngSpec,
    pub n: usize,
    pub k: usize,
    pub model: SamplingModel,
    pub strategy: String,
    pub phase_rounds: Vec<(String, u64)>,
    pub total_rounds: u64,
    pub edges_added: u64,
    pub discarded_picks: u64,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ledger: Option<Vec<LedgerEntry>>,
    /// Excluded from determinism comparisons.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

impl RunRecord {
    /// Serialization with the timestamp stripped, for determinism checks.
    pub fn deterministic_json(&self) -> String {
        let mut clone = self.clone();
        clone.timestamp = None;
        serde_json::to_string(&clone).expect("RunRecord serializes")
    }
}

/// Online strategy contract: sees only the current offer, the graph so far,
/// and its own state. Tie-breaking randomness comes from the strategy
/// sub-stream passed in.
pub trait Strategy {
    fn on_offer(&mut self, offer: &RoundOffer, g: &Graph, rng: &mut ChaCha12Rng) -> Choice;
    /// Called after the engine applies the choice; `added` is the edge
    /// actually inserted (None on Skip or on a discarded loop/duplicate).
    fn on_applied(&mut self, added: Option<(Vertex, Vertex)>, g: &Graph, rng: &mut ChaCha12Rng);
    fn phase_label(&self) -> &str;
    fn name(&self) -> &str;
    /// A strategy may declare success (with an optional certificate) or
    /// unrecoverable failure; the engine stops on either.
    fn status(&self, g: &Graph) -> StrategyStatus {
        let _ = g;
        StrategyStatus::Running
    }
}

#[derive(Clone, Debug)]
pub enum StrategyStatus {
    Running,
    Hamiltonian(Vec<Vertex>),
    Constructed,
    NotCertified,
    Failed(String),
}

pub struct Engine {
    pub graph: Graph,
    pub model: SamplingModel,
    pub k: usize,
    pub round: u64,
    pub edges_added: u64,
    pub discarded_picks: u64,
    offer_rng: ChaCha12Rng,
}

impl Engine {
    pub fn new(n: usize, k: usize, model: SamplingModel, seed: u64) -> (Engine, ChaCha12Rng) {
        let mut offer_rng = ChaCha12Rng::seed_from_u64(seed);
        offer_rng.set_stream(0);
        let mut strategy_rng = ChaCha12Rng::seed_from_u64(seed);
        strategy_rng.set_stream(1);
        (
            Engine {
                graph: Graph::new(n),
                model,
                k,
                round: 0,
                edges_added: 0,
                discarded_picks: 0,
                offer_rng,
            },
            strategy_rng,
        )
    }

    pub fn next_offer(&mut self) -> Result<RoundOffer, EngineError> {
        let n = self.graph.n();
        let candidates = match self.model {
            SamplingModel::RelaxedPairs => (0..self.k)
                .map(|_| {
                    (
                        self.offer_rng.gen_range(0..n) as Vertex,
                        self.offer_rng.gen_range(0..n) as Vertex,
                    )
                })
                .collect(),
            SamplingModel::ExactMissing => {
                let missing = n * (n - 1) / 2 - self.graph.edge_count();
                if missing < self.k {
                    return Err(EngineError::GraphNearlyComplete {
                        needed: self.k,
                        left: missing,
                    });
                }
                let mut picked: Vec<(Vertex, Vertex)> = Vec::with_capacity(self.k);
                while picked.len() < self.k {
                    let u = self.offer_rng.gen_range(0..n) as Vertex;
                    let v = self.offer_rng.gen_range(0..n) as Vertex;
                    if u == v || self.graph.has_edge(u, v) {
                        continue;
                    }
                    let e = if u < v { (u, v) } else { (v, u) };
                    if !picked.contains(&e) {
                        picked.push(e);
                    }
                }
                picked
            }
        };
        Ok(RoundOffer {
            round_index: self.round,
            candidates,
        })
    }

    /// Applies a choice to the graph. Returns the edge actually inserted,
    /// None on Skip or when a RelaxedPairs pick is a loop or duplicate.
    pub fn apply(
        &mut self,
        offer: &RoundOffer,
        choice: Choice,
    ) -> Result<Option<(Vertex, Vertex)>, EngineError> {
        let added = match choice {
            Choice::Skip => None,
            Choice::Pick(i) => {
                let &(u, v) = offer
                    .candidates
                    .get(i)
                    .ok_or(EngineError::PickOutOfRange(i, self.k))?;
                if self.graph.add_edge(u, v).map_err(|_| {
                    EngineError::PickOutOfRange(i, self.k)
                })? {
                    self.edges_added += 1;
                    Some(if u < v { (u, v) } else { (v, u) })
                } else {
                    self.discarded_picks += 1;
                    None
                }
            }
        };
        self.round += 1;
        Ok(added)
    }

    pub fn step<S: Strategy + ?Sized>(
        &mut self,
        strategy: &mut S,
        strategy_rng: &mut ChaCha12Rng,
        ledger: Option<&mut Vec<LedgerEntry>>,
    ) -> Result<(RoundOffer, Choice), EngineError> {
        let offer = self.next_offer()?;
        let choice = strategy.on_offer(&offer, &self.graph, strategy_rng);
        if let Choice::Pick(i) = choice {
            if i >= offer.candidates.len() {
                return Err(EngineError::PickOutOfRange(i, self.k));
            }
        }
        if let Some(ledger) = ledger {
            ledger.push(LedgerEntry {
                round: offer.round_index,
                candidates: offer.candidates.clone(),
                choice,
                phase: strategy.phase_label().to_string(),
            });
        }
        let added = self.apply(&offer, choice)?;
        strategy.on_applied(added, &self.graph, strategy_rng);
        Ok((offer, choice))
    }
}

pub struct RunParams {
    pub n: usize,
    pub k: usize,
    pub model: SamplingModel,
    pub seed: u64,
    pub max_rounds: u64,
    pub ledger: bool,
}

/// Drives a strategy until it reports success/failure, an optional stop
/// predicate fires, or the round budget runs out.
pub fn run<S: Strategy + ?Sized>(
    params: &RunParams,
    strategy: &mut S,
    stop: Option<&dyn Fn(&Graph) -> bool>,
) -> Result<RunRecord, EngineError> {
    let (mut engine, mut strategy_rng) =
        Engine::new(params.n, params.k, params.model, params.seed);
    let mut ledger: Vec<LedgerEntry> = Vec::new();
    let mut phase_rounds: Vec<(String, u64)> = Vec::new();
    let mut outcome = Outcome::BudgetExhausted;
    while engine.round < params.max_rounds {
        match strategy.status(&engine.graph) {
            StrategyStatus::Running => {}
            StrategyStatus::Hamiltonian(c) => {
                outcome = Outcome::Hamiltonian(c);
                break;
            }
            StrategyStatus::Constructed => {
                outcome = Outcome::Constructed;
                break;
            }
            StrategyStatus::NotCertified => {
                outcome = Outcome::NotCertified;
                break;
            }
            StrategyStatus::Failed(why) => {
                outcome = Outcome::PhaseFailed(why);
                break;
            }
        }
        if let Some(stop) = stop {
            if stop(&engine.graph) {
                outcome = Outcome::Constructed;
                break;
            }
        }
        engine.step(
            strategy,
            &mut strategy_rng,
            params.ledger.then_some(&mut ledger),
        )?;
        let label = strategy.phase_label().to_string();
        match phase_rounds.last_mut() {
            Some((name, count)) if *name == label => *count += 1,
            _ => phase_rounds.push((label, 1)),
        }
    }
    if engine.round >= params.max_rounds {
        // the stop/status may have become true exactly at the budget edge
        match strategy.status(&engine.graph) {
            StrategyStatus::Hamiltonian(c) => outcome = Outcome::Hamiltonian(c),
            StrategyStatus::Constructed => outcome = Outcome::Constructed,
            StrategyStatus::NotCertified => outcome = Outcome::NotCertified,
            _ => {
                if let Some(stop) = stop {
                    if stop(&engine.graph) {
                        outcome = Outcome::Constructed;
                    }
                }
            }
        }
    }
    if let Outcome::Hamiltonian(ref c) = outcome {
        assert!(
            crate::posa::is_hamilton_cycle(&engine.graph, c),
            "certificate failed verification"
        );
    }
    Ok(RunRecord {
        rng: RngSpec::new(params.seed),
        n: params.n,
        k: params.k,
        model: params.model,
        strategy: strategy.name().to_string(),
        phase_rounds,
        total_rounds: engine.round,
        edges_added: engine.edges_added,
        discarded_picks: engine.discarded_picks,
        outcome,
        ledger: params.ledger.then_some(ledger),
        timestamp: None,
    })
}

/// Replays a recorded ledger through a fresh strategy instance and checks the
/// choices match (online-purity check). Returns the reconstructed graph.
pub fn replay<S: Strategy>(
    n: usize,
    seed: u64,
    ledger: &[LedgerEntry],
    strategy: &mut S,
) -> Result<Graph, String> {
    let mut g = Graph::new(n);
    let mut strategy_rng = ChaCha12Rng::seed_from_u64(seed);
    strategy_rng.set_stream(1);
    for entry in ledger {
        let offer = RoundOffer {
            round_index: entry.round,
            candidates: entry.candidates.clone(),
        };
        let choice = strategy.on_offer(&offer, &g, &mut strategy_rng);
        if choice != entry.choice {
            return Err(format!(
                "round {}: replay chose {:?}, ledger has {:?}",
                entry.round, choice, entry.choice
            ));
        }
        let added = match choice {
            Choice::Skip => None,
            Choice::Pick(i) => {
                let (u, v) = offer.candidates[i];
                match g.add_edge(u, v) {
                    Ok(true) => Some(if u < v { (u, v) } else { (v, u) }),
                    _ => None,
                }
            }
        };
        strategy.on_applied(added, &g, &mut strategy_rng);
    }
    Ok(g)
}

/// Always picks the first candidate. With K=1 under ExactMissing this is the
/// Erdős–Rényi process.
pub struct FirstEdge;

impl Strategy for FirstEdge {
    fn on_offer(&mut self, _offer: &RoundOffer, _g: &Graph, _rng: &mut ChaCha12Rng) -> Choice {
        Choice::Pick(0)
    }
    fn on_applied(&mut self, _added: Option<(Vertex, Vertex)>, _g: &Graph, _rng: &mut ChaCha12Rng) {
    }
    fn phase_label(&self) -> &str {
        "first_edge"
    }
    fn name(&self) -> &str {
        "first_edge"
    }
}

/// Always skips; useful for round-accounting tests.
pub struct AlwaysSkip;

impl Strategy for AlwaysSkip {
    fn on_offer(&mut self, _offer: &RoundOffer, _g: &Graph, _rng: &mut ChaCha12Rng) -> Choice {
        Choice::Skip
    }
    fn on_applied(&mut self, _added: Option<(Vertex, Vertex)>, _g: &Graph, _rng: &mut ChaCha12Rng) {
    }
    fn phase_label(&self) -> &str {
        "skip"
    }
    fn name(&self) -> &str {
        "always_skip"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_missing_single_edge() {
        let (mut e, _) = Engine::new(2, 1, SamplingModel::ExactMissing, 0);
        let offer = e.next_offer().unwrap();
        assert_eq!(offer.candidates, vec![(0, 1)]);
    }

    #[test]
    fn exact_missing_never_offers_present() {
        let (mut e, mut rng) = Engine::new(30, 3, SamplingModel::ExactMissing, 1);
        let mut s = FirstEdge;
        for _ in 0..300 {
            let offer = e.next_offer().unwrap();
            for &(u, v) in &offer.candidates {
                assert!(u != v && !e.graph.has_edge(u, v));
            }
            let choice = s.on_offer(&offer, &e.graph, &mut rng);
            e.apply(&offer, choice).unwrap();
        }
    }

    #[test]
    fn exact_missing_exhaustion_errors() {
        let (mut e, _) = Engine::new(3, 2, SamplingModel::ExactMissing, 0);
        e.graph.add_edge(0, 1).unwrap();
        e.graph.add_edge(0, 2).unwrap();
        assert!(matches!(
            e.next_offer(),
            Err(EngineError::GraphNearlyComplete { .. })
        ));
    }

    #[test]
    fn skip_and_pick_both_advance_round() {
        let params = RunParams {
            n: 20,
            k: 2,
            model: SamplingModel::RelaxedPairs,
            seed: 5,
            max_rounds: 50,
            ledger: false,
        };
        let rec = run(&params, &mut AlwaysSkip, None).unwrap();
        assert_eq!(rec.total_rounds, 50);
        assert_eq!(rec.edges_added, 0);
        assert_eq!(rec.outcome, Outcome::BudgetExhausted);
    }

    #[test]
    fn stop_predicate_counts_rounds() {
        let params = RunParams {
            n: 50,
            k: 2,
            model: SamplingModel::ExactMissing,
            seed: 9,
            max_rounds: 1000,
            ledger: false,
        };
        let rec = run(&params, &mut FirstEdge, Some(&|g: &Graph| g.edge_count() >= 5)).unwrap();
        assert_eq!(rec.total_rounds, 5);
        assert_eq!(rec.outcome, Outcome::Constructed);
    }

    #[test]
    fn zero_budget_is_exhausted() {
        let params = RunParams {
            n: 10,
            k: 1,
            model: SamplingModel::ExactMissing,
            seed: 0,
            max_rounds: 0,
            ledger: false,
        };
        let rec = run(&params, &mut FirstEdge, None).unwrap();
        assert_eq!(rec.outcome, Outcome::BudgetExhausted);
    }

    #[test]
    fn same_seed_identical_records_and_replay() {
        let params = RunParams {
            n: 100,
            k: 4,
            model: SamplingModel::RelaxedPairs,
            seed: 77,
            max_rounds: 400,
            ledger: true,
        };
        let a = run(&params, &mut FirstEdge, None).unwrap();
        let b = run(&params, &mut FirstEdge, None).unwrap();
        assert_eq!(a.deterministic_json(), b.deterministic_json());
        let g = replay(100, 77, a.ledger.as_ref().unwrap(), &mut FirstEdge).unwrap();
        assert_eq!(g.edge_count() as u64, a.edges_added);
    }

    #[test]
    fn pick_out_of_range_errors() {
        struct Bad;
        impl Strategy for Bad {
            fn on_offer(&mut self, _: &RoundOffer, _: &Graph, _: &mut ChaCha12Rng) -> Choice {
                Choice::Pick(999)
            }
            fn on_applied(&mut self, _: Option<(Vertex, Vertex)>, _: &Graph, _: &mut ChaCha12Rng) {}
            fn phase_label(&self) -> &str {
                "bad"
            }
            fn name(&self) -> &str {
                "bad"
            }
        }
        let params = RunParams {
            n: 10,
            k: 2,
            model: SamplingModel::RelaxedPairs,
            seed: 0,
            max_rounds: 10,
            ledger: false,
        };
        assert!(run(&params, &mut Bad, None).is_err());
    }
}
