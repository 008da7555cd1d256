//! The sub-logarithmic regime algorithm (§2): build a D-core expander, give
//! every outside vertex d neighbors in it, then finish via Pósa booster
//! trials.
//!
//! The phase logic lives in `SublogCore`, which consumes one (possibly
//! filtered) candidate list per round. `SublogStrategy` drives it directly on
//! the engine graph; the superlog strategy drives it on a mirrored induced
//! subgraph (Phase 4).

use rand::seq::SliceRandom;
use rand_chacha::ChaCha12Rng;

use crate::engine::{Choice, RoundOffer, Strategy, StrategyStatus};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::posa::{
    apply_booster, booster_pairs, extend_or_close, random_greedy_path, BoosterSet, ExtendResult,
    PathRecord,
};

#[derive(Clone, Copy, Debug)]
pub struct SublogParams {
    /// Phase-budget constant ε.
    pub epsilon: f64,
    /// Core parameter D (paper: ⌈1/ε⌉).
    pub core_d: usize,
    /// Target degree into the core for outside vertices (paper: 20).
    pub attach_d: usize,
    /// Rounds per Phase-3 trial (paper: ⌈10⁴/K⌉).
    pub t_boost: u64,
    /// Maximum Phase-3 trials (paper: 2n).
    pub max_trials: u64,
    /// Endpoint cap for booster enumeration.
    pub r_cap: usize,
}

impl SublogParams {
    /// Paper constants; only sensible asymptotically.
    pub fn fidelity(n: usize, k: usize) -> Self {
        let epsilon = 0.009;
        SublogParams {
            epsilon,
            core_d: (1.0 / epsilon).ceil() as usize,
            attach_d: 20,
            t_boost: (1e4 / k as f64).ceil() as u64,
            max_trials: 2 * n as u64,
            r_cap: (n / 100).max(1),
        }
    }

    /// Desk-scale constants, tuned for n in the thousands.
    pub fn desk(n: usize, k: usize) -> Self {
        SublogParams {
            // generous phase budgets: the waiting time for attachment hits
            // at desk scale is ~(d·n/2K)·H_X, far above the paper's ε; the
            // phases exit early, so only failures pay the full budget
            epsilon: 2.0,
            core_d: 3,
            attach_d: 4,
            t_boost: (1e4 / k as f64).ceil() as u64,
            max_trials: 2 * n as u64,
            r_cap: (n / 16).clamp(64, 256),
        }
    }
}

enum Phase {
    /// Phase 1: pick the first usable candidate for ⌈(3/4)Dn⌉ rounds.
    Core { rounds_left: u64 },
    /// Phase 2a, sub-stage j: prefer candidates joining a vertex of V_H^c
    /// with core-degree exactly j to V_H.
    Attach { j: usize, rounds_left: u64 },
    /// Phase 2b: prefer candidates joining the frozen deficient set X to V_H.
    Freeze { rounds_left: u64 },
    /// Phase 3: prefer booster pairs of the maintained longest path.
    Boost {
        trial_rounds_left: u64,
        trials_done: u64,
    },
    Done,
    Failed(String),
}

/// Outcome of the core state machine, in inner vertex ids.
pub enum CoreStatus {
    Running,
    Hamiltonian(Vec<Vertex>),
    Failed(String),
}

/// Per-round sublog decision logic over its own view of the graph. Every call
/// to `choose` is one round (a `None` return is a Skip that still consumes
/// the round's budget).
pub struct SublogCore {
    pub params: SublogParams,
    n: usize,
    /// Planning K for the phase budgets.
    k_plan: usize,
    phase: Phase,
    label: String,
    in_core: Vec<bool>,
    /// Degree into V_H, tracked for vertices outside it.
    core_deg: Vec<usize>,
    /// Phase 2b frozen deficient set.
    in_x: Vec<bool>,
    x_left: usize,
    path: Vec<Vertex>,
    boosters: BoosterSet,
    /// Candidate picked this round, pending on_applied.
    pending: Option<(Vertex, Vertex)>,
    cycle: Option<Vec<Vertex>>,
}

impl SublogCore {
    pub fn new(n: usize, k_plan: usize, params: SublogParams) -> Self {
        let rounds = (0.75 * params.core_d as f64 * n as f64).ceil() as u64;
        SublogCore {
            params,
            n,
            k_plan: k_plan.max(1),
            phase: Phase::Core {
                rounds_left: rounds,
            },
            label: "core".into(),
            in_core: vec![false; n],
            core_deg: vec![0; n],
            in_x: vec![false; n],
            x_left: 0,
            path: Vec::new(),
            boosters: BoosterSet::default(),
            pending: None,
            cycle: None,
        }
    }

    pub fn status(&self) -> CoreStatus {
        match &self.phase {
            Phase::Done => CoreStatus::Hamiltonian(self.cycle.clone().expect("done with cycle")),
            Phase::Failed(why) => CoreStatus::Failed(why.clone()),
            _ => CoreStatus::Running,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    fn attach_budget(&self) -> u64 {
        let n = self.n as f64;
        ((self.params.epsilon / (2.0 * self.params.attach_d as f64 * self.k_plan as f64))
            * n
            * n.ln())
        .ceil() as u64
    }

    fn freeze_budget(&self) -> u64 {
        let n = self.n as f64;
        ((0.5 + self.params.epsilon) * (n / self.k_plan as f64) * n.ln()).ceil() as u64
    }

    /// Phase transitions that need the current graph; called at the top of
    /// every round.
    fn advance(&mut self, g: &Graph, rng: &mut ChaCha12Rng) {
        loop {
            match self.phase {
                Phase::Core { rounds_left } => {
                    if rounds_left > 0 {
                        return;
                    }
                    let core = g.peel_core(self.params.core_d);
                    // Lemma 2.5 needs |W| ≥ n/2; treat a smaller core as a
                    // failed phase goal
                    if core.len() < self.n / 2 {
                        self.phase = Phase::Failed(format!(
                            "core: |{}-core| = {} < n/2",
                            self.params.core_d,
                            core.len()
                        ));
                        continue;
                    }
                    for v in core.iter() {
                        self.in_core[v as usize] = true;
                    }
                    for v in 0..self.n as Vertex {
                        if !self.in_core[v as usize] {
                            self.core_deg[v as usize] =
                                g.neighbors(v).filter(|&w| self.in_core[w as usize]).count();
                        }
                    }
                    self.phase = Phase::Attach {
                        j: 0,
                        rounds_left: self.attach_budget(),
                    };
                    self.label = "attach:j0".into();
                }
                Phase::Attach { j, rounds_left } => {
                    let stage_done = rounds_left == 0
                        || !(0..self.n).any(|v| !self.in_core[v] && self.core_deg[v] == j);
                    if !stage_done {
                        return;
                    }
                    if j + 1 < self.params.attach_d {
                        self.phase = Phase::Attach {
                            j: j + 1,
                            rounds_left: self.attach_budget(),
                        };
                        self.label = format!("attach:j{}", j + 1);
                        continue;
                    }
                    self.x_left = 0;
                    for v in 0..self.n {
                        if !self.in_core[v] && self.core_deg[v] < self.params.attach_d {
                            self.in_x[v] = true;
                            self.x_left += 1;
                        }
                    }
                    self.phase = Phase::Freeze {
                        rounds_left: self.freeze_budget(),
                    };
                    self.label = "freeze".into();
                }
                Phase::Freeze { rounds_left } => {
                    if self.x_left == 0 {
                        self.enter_boost(g, rng);
                        continue;
                    }
                    if rounds_left == 0 {
                        self.phase = Phase::Failed(format!(
                            "freeze: {} deficient vertices remain",
                            self.x_left
                        ));
                        continue;
                    }
                    return;
                }
                Phase::Boost {
                    trial_rounds_left,
                    trials_done,
                } => {
                    if trial_rounds_left > 0 {
                        return;
                    }
                    if trials_done >= self.params.max_trials {
                        self.phase = Phase::Failed(format!(
                            "boost: no Hamilton cycle after {trials_done} trials"
                        ));
                        continue;
                    }
                    // failed trial: graph unchanged (only boosters are ever
                    // picked), so the booster set is still valid
                    self.phase = Phase::Boost {
                        trial_rounds_left: self.params.t_boost,
                        trials_done: trials_done + 1,
                    };
                    return;
                }
                Phase::Done | Phase::Failed(_) => return,
            }
        }
    }

    fn enter_boost(&mut self, g: &Graph, rng: &mut ChaCha12Rng) {
        self.label = "boost".into();
        let seed = random_greedy_path(g, rng);
        match extend_or_close(g, &seed) {
            ExtendResult::Hamilton(c) => {
                self.cycle = Some(c);
                self.phase = Phase::Done;
                self.label = "done".into();
            }
            ExtendResult::Path(p) => {
                self.path = p.vertices().to_vec();
                self.recompute_boosters(g);
                self.phase = Phase::Boost {
                    trial_rounds_left: self.params.t_boost,
                    trials_done: 1,
                };
            }
            ExtendResult::ComponentSpanned(_) => {
                self.phase = Phase::Failed("boost: graph is disconnected".into());
            }
        }
    }

    fn recompute_boosters(&mut self, g: &Graph) {
        let p = PathRecord::new(g, self.path.clone()).expect("maintained path is valid");
        self.boosters = booster_pairs(g, &p, self.params.r_cap);
    }

    /// One round: returns the index (into `cands`) to pick, or None to skip.
    pub fn choose(
        &mut self,
        cands: &[(Vertex, Vertex)],
        g: &Graph,
        rng: &mut ChaCha12Rng,
    ) -> Option<usize> {
        self.advance(g, rng);
        let legal = |&(u, v): &(Vertex, Vertex)| u != v && !g.has_edge(u, v);
        let choice = match &self.phase {
            Phase::Core { .. } => cands.iter().position(legal),
            Phase::Attach { j, .. } => {
                let j = *j;
                let hits: Vec<usize> = cands
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| legal(e))
                    .filter(|&(_, &(u, v))| {
                        let (inside, outside) = match (self.in_core[u as usize], self.in_core[v as usize])
                        {
                            (true, false) => (u, v),
                            (false, true) => (v, u),
                            _ => return false,
                        };
                        let _ = inside;
                        self.core_deg[outside as usize] == j
                    })
                    .map(|(i, _)| i)
                    .collect();
                hits.choose(rng).copied()
            }
            Phase::Freeze { .. } => {
                let hits: Vec<usize> = cands
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| legal(e))
                    .filter(|&(_, &(u, v))| {
                        (self.in_x[u as usize] && self.in_core[v as usize])
                            || (self.in_x[v as usize] && self.in_core[u as usize])
                    })
                    .map(|(i, _)| i)
                    .collect();
                hits.choose(rng).copied()
            }
            Phase::Boost { .. } => {
                let hits: Vec<usize> = cands
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| legal(e))
                    .filter(|&(_, &(u, v))| self.boosters.contains(u, v))
                    .map(|(i, _)| i)
                    .collect();
                hits.choose(rng).copied()
            }
            Phase::Done | Phase::Failed(_) => None,
        };
        self.tick();
        if let Some(i) = choice {
            self.pending = Some(cands[i]);
        }
        choice
    }

    fn tick(&mut self) {
        match &mut self.phase {
            Phase::Core { rounds_left }
            | Phase::Attach { rounds_left, .. }
            | Phase::Freeze { rounds_left }
            | Phase::Boost {
                trial_rounds_left: rounds_left,
                ..
            } => *rounds_left = rounds_left.saturating_sub(1),
            _ => {}
        }
    }

    /// Must be called after the engine applies the round; `added` is in
    /// inner vertex ids (None on skip or discarded pick).
    pub fn applied(&mut self, added: Option<(Vertex, Vertex)>, g: &Graph, rng: &mut ChaCha12Rng) {
        self.pending = None;
        let Some((u, v)) = added else { return };
        match self.phase {
            Phase::Attach { .. } | Phase::Freeze { .. } => {
                for (a, b) in [(u, v), (v, u)] {
                    if self.in_core[a as usize] && !self.in_core[b as usize] {
                        self.core_deg[b as usize] += 1;
                        if self.in_x[b as usize]
                            && self.core_deg[b as usize] >= self.params.attach_d
                        {
                            self.in_x[b as usize] = false;
                            self.x_left -= 1;
                        }
                    }
                }
            }
            Phase::Boost { trials_done, .. } => {
                if !self.boosters.contains(u, v) {
                    return;
                }
                let p = PathRecord::new(g, self.path.clone()).expect("maintained path is valid");
                match apply_booster(g, &p, u, v) {
                    ExtendResult::Hamilton(c) => {
                        self.cycle = Some(c);
                        self.phase = Phase::Done;
                        self.label = "done".into();
                    }
                    ExtendResult::Path(q) => {
                        debug_assert!(q.len() >= self.path.len() - 1);
                        self.path = q.vertices().to_vec();
                        self.recompute_boosters(g);
                        // successful trial: start the next one
                        self.phase = Phase::Boost {
                            trial_rounds_left: self.params.t_boost,
                            trials_done: trials_done + 1,
                        };
                    }
                    ExtendResult::ComponentSpanned(_) => {
                        self.phase = Phase::Failed("boost: graph is disconnected".into());
                    }
                }
                let _ = rng;
            }
            _ => {}
        }
    }

    /// The core set computed at the Phase 1 → 2 boundary (empty before).
    pub fn core_set(&self) -> VertexSet {
        VertexSet::from_iter(
            self.n,
            (0..self.n as Vertex).filter(|&v| self.in_core[v as usize]),
        )
    }
}

/// `SublogCore` as a plain engine strategy over the whole graph.
pub struct SublogStrategy {
    core: SublogCore,
}

impl SublogStrategy {
    pub fn new(n: usize, k: usize, params: SublogParams) -> Self {
        SublogStrategy {
            core: SublogCore::new(n, k, params),
        }
    }
}

impl Strategy for SublogStrategy {
    fn on_offer(&mut self, offer: &RoundOffer, g: &Graph, rng: &mut ChaCha12Rng) -> Choice {
        match self.core.choose(&offer.candidates, g, rng) {
            Some(i) => Choice::Pick(i),
            None => Choice::Skip,
        }
    }

    fn on_applied(&mut self, added: Option<(Vertex, Vertex)>, g: &Graph, rng: &mut ChaCha12Rng) {
        self.core.applied(added, g, rng);
    }

    fn phase_label(&self) -> &str {
        self.core.label()
    }

    fn name(&self) -> &str {
        "sublog"
    }

    fn status(&self, _g: &Graph) -> StrategyStatus {
        match self.core.status() {
            CoreStatus::Running => StrategyStatus::Running,
            CoreStatus::Hamiltonian(c) => StrategyStatus::Hamiltonian(c),
            CoreStatus::Failed(why) => StrategyStatus::Failed(why),
        }
    }
}
