//! Two-stage greedy d-out construction (§4): decisions based only on the
//! first coordinate of each offered ordered pair.

use rand::seq::SliceRandom;
use rand_chacha::ChaCha12Rng;

use crate::engine::{Choice, RoundOffer, Strategy, StrategyStatus};
use crate::graph::{Graph, Vertex};
use crate::posa::{hamiltonicity_search, is_hamilton_cycle};

#[derive(Clone, Copy, Debug)]
pub struct DOutParams {
    pub d: usize,
    pub epsilon: f64,
    /// Planning K for the stage budgets (usually the engine K).
    pub k: usize,
    /// Restarts for the intermediate strategy's certification search.
    pub restarts: usize,
}

impl DOutParams {
    pub fn new(d: usize, k: usize) -> Self {
        DOutParams {
            d,
            epsilon: 2.0,
            k,
            restarts: 100,
        }
    }
}

enum DOutPhase {
    /// Stage 1, sub-stage j: prefer pairs whose first coordinate still has
    /// out-count at most j (stragglers from earlier sub-stages included).
    Stage1 { j: usize, rounds_left: u64 },
    /// Stage 2: prefer pairs whose first coordinate is in the frozen
    /// deficient set U.
    Stage2 { rounds_left: u64 },
    Done,
    Failed,
}

pub struct DOutStrategy {
    params: DOutParams,
    n: usize,
    phase: DOutPhase,
    label: String,
    out_count: Vec<usize>,
    /// Histogram of out-counts in 0..d, for cheap stage-exit tests.
    hist: Vec<usize>,
    /// Recorded out-neighbors, in selection order, per vertex.
    out_neighbors: Vec<Vec<Vertex>>,
    deficient: usize,
    in_u: Vec<bool>,
    /// Candidate index whose first coordinate we credited, pending apply.
    pending_first: Option<Vertex>,
    /// Whether to certify Hamiltonicity of the d-out graph on completion.
    certify: bool,
    certificate: Option<Vec<Vertex>>,
    not_certified: bool,
}

impl DOutStrategy {
    pub fn new(n: usize, params: DOutParams) -> Self {
        let t1 = stage1_budget(n, &params);
        let phase = if params.d == 0 {
            DOutPhase::Done
        } else {
            DOutPhase::Stage1 {
                j: 0,
                rounds_left: t1,
            }
        };
        let mut hist = vec![0; params.d.max(1)];
        if params.d > 0 {
            hist[0] = n;
        }
        DOutStrategy {
            params,
            n,
            phase,
            label: "stage1:j0".into(),
            out_count: vec![0; n],
            hist,
            out_neighbors: vec![Vec::new(); n],
            deficient: n,
            in_u: vec![false; n],
            pending_first: None,
            certify: false,
            certificate: None,
            not_certified: false,
        }
    }

    /// d-out construction followed by Hamiltonicity certification of the
    /// recorded d-out graph (§4 upper bound via Bohman–Frieze for d=3).
    pub fn intermediate(n: usize, params: DOutParams) -> Self {
        let mut s = DOutStrategy::new(n, params);
        s.certify = true;
        s
    }

    /// The orientation-erased union of each vertex's recorded out-neighbors.
    pub fn d_out_graph(&self) -> Graph {
        let mut g = Graph::new(self.n);
        for (u, outs) in self.out_neighbors.iter().enumerate() {
            for &v in outs {
                g.add_edge(u as Vertex, v).unwrap();
            }
        }
        g
    }

    pub fn out_neighbors(&self) -> &[Vec<Vertex>] {
        &self.out_neighbors
    }

    /// Vertices with out-count ≤ j.
    fn at_most(&self, j: usize) -> usize {
        self.hist[..=j.min(self.hist.len() - 1)].iter().sum()
    }

    fn advance(&mut self, rng: &mut ChaCha12Rng) {
        loop {
            match self.phase {
                DOutPhase::Stage1 { j, rounds_left } => {
                    if self.params.d == 0 || self.deficient == 0 {
                        self.finish(rng);
                        continue;
                    }
                    // sub-stage j ends on budget, or early once every vertex
                    // is past count j
                    if rounds_left == 0 || self.at_most(j) == 0 {
                        if j + 1 < self.params.d {
                            self.phase = DOutPhase::Stage1 {
                                j: j + 1,
                                rounds_left: stage1_budget(self.n, &self.params),
                            };
                            self.label = format!("stage1:j{}", j + 1);
                        } else {
                            // freeze U = vertices with out-count < d
                            for v in 0..self.n {
                                self.in_u[v] = self.out_count[v] < self.params.d;
                            }
                            self.phase = DOutPhase::Stage2 {
                                rounds_left: stage2_budget(self.n, &self.params),
                            };
                            self.label = "stage2".into();
                        }
                        continue;
                    }
                    return;
                }
                DOutPhase::Stage2 { rounds_left } => {
                    if self.deficient == 0 {
                        self.finish(rng);
                        continue;
                    }
                    if rounds_left == 0 {
                        self.phase = DOutPhase::Failed;
                        continue;
                    }
                    return;
                }
                DOutPhase::Done | DOutPhase::Failed => return,
            }
        }
    }

    fn finish(&mut self, rng: &mut ChaCha12Rng) {
        if self.certify {
            let g = self.d_out_graph();
            match hamiltonicity_search(&g, self.params.restarts, rng) {
                Some(c) => {
                    debug_assert!(is_hamilton_cycle(&g, &c));
                    self.certificate = Some(c);
                }
                None => self.not_certified = true,
            }
        }
        self.phase = DOutPhase::Done;
        self.label = "done".into();
    }

    fn tick(&mut self) {
        match &mut self.phase {
            DOutPhase::Stage1 { rounds_left, .. } | DOutPhase::Stage2 { rounds_left } => {
                *rounds_left -= 1;
            }
            _ => {}
        }
    }
}

fn stage1_budget(n: usize, p: &DOutParams) -> u64 {
    ((1.0 + p.epsilon / (2.0 * p.d.max(1) as f64)) * n as f64).ceil() as u64
}

fn stage2_budget(n: usize, p: &DOutParams) -> u64 {
    ((1.0 + p.epsilon) * (n as f64 / p.k as f64) * (n as f64).ln()).ceil() as u64
}

impl Strategy for DOutStrategy {
    fn on_offer(&mut self, offer: &RoundOffer, g: &Graph, rng: &mut ChaCha12Rng) -> Choice {
        self.advance(rng);
        let wanted: Vec<usize> = match self.phase {
            DOutPhase::Stage1 { j, .. } => offer
                .candidates
                .iter()
                .enumerate()
                .filter(|&(_, &(u, v))| {
                    u != v && self.out_count[u as usize] <= j && !g.has_edge(u, v)
                })
                .map(|(i, _)| i)
                .collect(),
            DOutPhase::Stage2 { .. } => offer
                .candidates
                .iter()
                .enumerate()
                .filter(|&(_, &(u, v))| u != v && self.in_u[u as usize] && !g.has_edge(u, v))
                .map(|(i, _)| i)
                .collect(),
            DOutPhase::Done | DOutPhase::Failed => return Choice::Skip,
        };
        self.tick();
        match wanted.choose(rng) {
            Some(&i) => {
                self.pending_first = Some(offer.candidates[i].0);
                Choice::Pick(i)
            }
            None => Choice::Skip,
        }
    }

    fn on_applied(&mut self, added: Option<(Vertex, Vertex)>, _g: &Graph, rng: &mut ChaCha12Rng) {
        let first = self.pending_first.take();
        if added.is_none() {
            return;
        }
        let (a, b) = added.unwrap();
        let u = first.expect("pick without recorded first coordinate");
        let v = if a == u { b } else { a };
        let uc = &mut self.out_count[u as usize];
        if *uc < self.params.d {
            self.out_neighbors[u as usize].push(v);
            self.hist[*uc] -= 1;
            *uc += 1;
            if *uc == self.params.d {
                self.deficient -= 1;
                self.in_u[u as usize] = false;
            } else {
                self.hist[*uc] += 1;
            }
        } else {
            *uc += 1;
        }
        if self.deficient == 0 {
            self.advance(rng);
        }
    }

    fn phase_label(&self) -> &str {
        &self.label
    }

    fn name(&self) -> &str {
        if self.certify {
            "intermediate"
        } else {
            "d_out"
        }
    }

    fn status(&self, _g: &Graph) -> StrategyStatus {
        match self.phase {
            DOutPhase::Done => {
                if let Some(c) = &self.certificate {
                    StrategyStatus::Hamiltonian(c.clone())
                } else if self.not_certified {
                    StrategyStatus::NotCertified
                } else {
                    StrategyStatus::Constructed
                }
            }
            DOutPhase::Failed => StrategyStatus::Failed("stage2: deficient vertices remain".into()),
            _ => StrategyStatus::Running,
        }
    }
}
