//! The super-logarithmic regime algorithm (§3): cover almost everything with
//! few long paths, build a small expander on the leftover, stitch the paths
//! into one cycle through the expander, make the remaining expander vertices
//! into a second cycle with the sublog machinery, then merge the two cycles
//! with a rotation-style patch.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand_chacha::ChaCha12Rng;

use crate::engine::{Choice, RoundOffer, Strategy, StrategyStatus};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::posa::is_hamilton_cycle;
use crate::strategies::sublog::{CoreStatus, SublogCore, SublogParams};

#[derive(Clone, Copy, Debug)]
pub struct SuperlogParams {
    /// Scale parameter h; the uncovered target is m = ⌊n/h²⌋.
    pub h: f64,
    /// Core parameter for the leftover expander.
    pub d_exp: usize,
    /// Core parameter for re-peeling X̃ after connectors are consumed; kept
    /// below d_exp because the Phase-2 budget leaves X right at its own
    /// core threshold.
    pub d_tilde: usize,
    /// Number of paths grown in the cover phase.
    pub l: usize,
    /// Use the desk-scale preset for the inner (Phase 4) sublog run.
    pub desk_inner: bool,
}

impl SuperlogParams {
    /// Paper constants; only sensible asymptotically.
    pub fn fidelity(n: usize, k: usize) -> Self {
        let h = (k as f64 / (n as f64).ln()).powf(0.1).max(1.5);
        SuperlogParams {
            h,
            d_exp: 2000,
            d_tilde: 1000,
            l: ((n as f64) / (h.powi(4) * (n as f64).ln())).floor().max(1.0) as usize,
            desk_inner: false,
        }
    }

    /// Desk-scale constants, tuned for n in the tens of thousands.
    pub fn desk(n: usize, _k: usize) -> Self {
        let m_target = (n as f64 / 57.0).clamp(64.0, 600.0);
        let h = (n as f64 / m_target).sqrt();
        SuperlogParams {
            h,
            d_exp: 8,
            d_tilde: 4,
            l: ((m_target / 14.0).round() as usize).max(4),
            desk_inner: true,
        }
    }

    pub fn m(&self, n: usize) -> usize {
        ((n as f64) / (self.h * self.h)).floor() as usize
    }
}

enum SPhase {
    /// Phase 1: grow l vertex-disjoint paths until only m vertices are
    /// uncovered.
    Cover,
    /// Phase 2: densify the uncovered set so it has a large d_exp-core X.
    Expander,
    /// Phase 3: join the cover paths into one cycle via short connector
    /// paths through X̃ (the core of X minus used connectors).
    Join,
    /// Phase 4: run the sublog machinery on the unused expander vertices.
    Inner,
    /// Phase 5a: collect edges between the two cycles.
    MergeCollect,
    /// Phase 5b: wait for a successor-pair edge and patch.
    MergePlus,
    Done,
    Failed(String),
}

struct InnerState {
    core: SublogCore,
    mirror: Graph,
    /// inner id → engine vertex
    ids: Vec<Vertex>,
    /// engine vertex → inner id
    to_inner: Vec<Option<u32>>,
}

pub struct SuperlogStrategy {
    p: SuperlogParams,
    n: usize,
    k: usize,
    m: usize,
    phase: SPhase,
    label: String,

    // phase 1
    covered: Vec<bool>,
    covered_count: usize,
    /// Vertex → path index, set only for current left endpoints.
    left_ep: Vec<Option<usize>>,
    /// Paths; index 0 is the fixed seed end, the last entry is the growing
    /// left endpoint.
    paths: Vec<Vec<Vertex>>,
    cover_left: u64,

    // phase 2
    in_yc: Vec<bool>,
    expander_left: u64,
    x: VertexSet,

    // phase 3
    x_tilde: VertexSet,
    in_i: Vec<bool>,
    i_count: usize,
    joins_done: usize,
    /// Vertex → (path index, is-front-endpoint) for current path endpoints.
    ep_info: Vec<Option<(usize, bool)>>,
    pending: Option<(usize, bool, Vertex)>,
    window_left: u64,
    join_budget_left: u64,
    c_y: Vec<Vertex>,

    // phase 4
    inner: Option<InnerState>,
    c_x: Vec<Vertex>,

    // phase 5
    t1_left: u64,
    t2_left: u64,
    in_cx: Vec<bool>,
    in_cy: Vec<bool>,
    succ_x: Vec<Option<Vertex>>,
    succ_y: Vec<Option<Vertex>>,
    /// Normalized (x⁺, y⁺) pairs still missing, mapped to their cut edge.
    eplus: BTreeMap<(Vertex, Vertex), (Vertex, Vertex)>,
    cycle: Option<Vec<Vertex>>,
}

fn norm(u: Vertex, v: Vertex) -> (Vertex, Vertex) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

impl SuperlogStrategy {
    pub fn new(n: usize, k: usize, p: SuperlogParams) -> Self {
        let m = p.m(n);
        let l = p.l.min(n.saturating_sub(m)).max(1);
        let mut covered = vec![false; n];
        let mut left_ep = vec![None; n];
        let mut paths = Vec::with_capacity(l);
        for s in 0..l as Vertex {
            covered[s as usize] = true;
            left_ep[s as usize] = Some(paths.len());
            paths.push(vec![s]);
        }
        let cover_budget = ((1.0 + (-p.h).exp()) * n as f64).ceil() as u64;
        SuperlogStrategy {
            p,
            n,
            k: k.max(1),
            m,
            phase: SPhase::Cover,
            label: "cover".into(),
            covered,
            covered_count: l,
            left_ep,
            paths,
            cover_left: cover_budget,
            in_yc: vec![false; n],
            expander_left: 0,
            x: VertexSet::new(n),
            x_tilde: VertexSet::new(n),
            in_i: vec![false; n],
            i_count: 0,
            joins_done: 0,
            ep_info: vec![None; n],
            pending: None,
            window_left: 0,
            join_budget_left: 0,
            c_y: Vec::new(),
            inner: None,
            c_x: Vec::new(),
            t1_left: 0,
            t2_left: 0,
            in_cx: vec![false; n],
            in_cy: vec![false; n],
            succ_x: vec![None; n],
            succ_y: vec![None; n],
            eplus: BTreeMap::new(),
            cycle: None,
        }
    }

    fn fail(&mut self, why: String) {
        self.phase = SPhase::Failed(why);
        self.label = "failed".into();
    }

    /// Per-connect round window at the current path count.
    fn join_window(&self, paths_now: usize) -> u64 {
        let n = self.n as f64;
        ((2.0 * n * self.p.h * self.p.h) / (paths_now.max(1) as f64 * self.k as f64)).ceil() as u64
    }

    fn join_budget(&self) -> u64 {
        let n = self.n as f64;
        ((8.0 * n * self.p.h * self.p.h * ((self.p.l.max(2) as f64).ln() + 2.0)) / self.k as f64)
            .ceil() as u64
    }

    fn rebuild_endpoints(&mut self) {
        self.ep_info.iter_mut().for_each(|e| *e = None);
        for (pi, path) in self.paths.iter().enumerate() {
            self.ep_info[path[0] as usize] = Some((pi, true));
            self.ep_info[*path.last().expect("nonempty path") as usize] = Some((pi, false));
        }
    }

    fn recompute_x_tilde(&mut self, g: &Graph) {
        let remaining = VertexSet::from_iter(
            self.n,
            self.x.iter().filter(|&v| !self.in_i[v as usize]),
        );
        self.x_tilde = g.peel_core_within(&remaining, self.p.d_tilde);
    }

    /// Phase transitions that need the current graph.
    fn advance(&mut self, g: &Graph, rng: &mut ChaCha12Rng) {
        loop {
            match &self.phase {
                SPhase::Cover => {
                    if self.covered_count >= self.n - self.m {
                        for v in 0..self.n {
                            self.in_yc[v] = !self.covered[v];
                        }
                        self.expander_left =
                            (0.75 * self.p.d_exp as f64 * self.m as f64).ceil() as u64;
                        self.phase = SPhase::Expander;
                        self.label = "expander".into();
                        continue;
                    }
                    if self.cover_left == 0 {
                        let missing = self.n - self.m - self.covered_count;
                        self.fail(format!("cover: budget spent, {missing} vertices short"));
                        continue;
                    }
                    return;
                }
                SPhase::Expander => {
                    if self.expander_left > 0 {
                        return;
                    }
                    let yc = VertexSet::from_iter(
                        self.n,
                        (0..self.n as Vertex).filter(|&v| self.in_yc[v as usize]),
                    );
                    self.x = g.peel_core_within(&yc, self.p.d_exp);
                    if self.x.len() < self.m / 2 {
                        let (got, d) = (self.x.len(), self.p.d_exp);
                        self.fail(format!("expander: |{d}-core| = {got} < m/2"));
                        continue;
                    }
                    self.x_tilde = g.peel_core_within(&self.x, self.p.d_tilde);
                    self.rebuild_endpoints();
                    self.pending = None;
                    self.window_left = self.join_window(self.paths.len());
                    self.join_budget_left = self.join_budget();
                    self.phase = SPhase::Join;
                    self.label = "join".into();
                    continue;
                }
                SPhase::Join => {
                    if !self.c_y.is_empty() {
                        self.enter_inner(g, rng);
                        continue;
                    }
                    if self.window_left == 0 {
                        // the two-step connect attempt timed out; retry
                        self.pending = None;
                        if self.join_budget_left == 0 {
                            let left = self.paths.len();
                            self.fail(format!("join: budget spent with {left} paths left"));
                            continue;
                        }
                        self.window_left = self.join_window(self.paths.len());
                    }
                    return;
                }
                SPhase::Inner => {
                    let status = self.inner.as_ref().expect("inner set").core.status();
                    match status {
                        CoreStatus::Running => return,
                        CoreStatus::Hamiltonian(inner_cycle) => {
                            let inner = self.inner.as_ref().expect("inner set");
                            self.c_x =
                                inner_cycle.iter().map(|&v| inner.ids[v as usize]).collect();
                            self.enter_merge();
                            continue;
                        }
                        CoreStatus::Failed(why) => {
                            self.fail(format!("p4:{why}"));
                            continue;
                        }
                    }
                }
                SPhase::MergeCollect => {
                    if self.t1_left == 0 {
                        self.t2_left =
                            ((self.n as f64) / (self.n as f64).ln()).ceil() as u64;
                        self.phase = SPhase::MergePlus;
                        self.label = "merge:plus".into();
                        continue;
                    }
                    return;
                }
                SPhase::MergePlus => {
                    if self.t2_left == 0 {
                        let pairs = self.eplus.len();
                        self.fail(format!("merge: no successor pair arrived ({pairs} waiting)"));
                        continue;
                    }
                    return;
                }
                SPhase::Done | SPhase::Failed(_) => return,
            }
        }
    }

    fn enter_inner(&mut self, g: &Graph, _rng: &mut ChaCha12Rng) {
        let ids: Vec<Vertex> = (0..self.n as Vertex)
            .filter(|&v| self.in_yc[v as usize] && !self.in_i[v as usize])
            .collect();
        let n_in = ids.len();
        if n_in < 3 {
            self.fail(format!("p4: only {n_in} vertices left for the second cycle"));
            return;
        }
        let mut to_inner = vec![None; self.n];
        for (i, &v) in ids.iter().enumerate() {
            to_inner[v as usize] = Some(i as u32);
        }
        let mut mirror = Graph::new(n_in);
        for (i, &v) in ids.iter().enumerate() {
            for w in g.neighbors(v) {
                if let Some(j) = to_inner[w as usize] {
                    if (i as u32) < j {
                        mirror
                            .add_edge(i as Vertex, j as Vertex)
                            .expect("mirror edge in range");
                    }
                }
            }
        }
        // effective K seen by the inner process: candidates land inside the
        // inner set at rate K·(n_in/n)²
        let lambda = self.k as f64 * (n_in as f64 / self.n as f64).powi(2);
        let k_inner = (lambda.floor() as usize).max(1);
        let params = if self.p.desk_inner {
            SublogParams::desk(n_in, k_inner)
        } else {
            SublogParams::fidelity(n_in, k_inner)
        };
        let core = SublogCore::new(n_in, k_inner, params);
        self.inner = Some(InnerState {
            core,
            mirror,
            ids,
            to_inner,
        });
        self.phase = SPhase::Inner;
        self.label = "p4:core".into();
    }

    fn enter_merge(&mut self) {
        debug_assert_eq!(self.c_x.len() + self.c_y.len(), self.n);
        for (cycle, in_c, succ) in [
            (&self.c_x, &mut self.in_cx, &mut self.succ_x),
            (&self.c_y, &mut self.in_cy, &mut self.succ_y),
        ] {
            let len = cycle.len();
            for (i, &v) in cycle.iter().enumerate() {
                in_c[v as usize] = true;
                succ[v as usize] = Some(cycle[(i + 1) % len]);
            }
        }
        self.t1_left = ((self.n as f64) / (self.p.h * self.p.h)).ceil() as u64;
        self.phase = SPhase::MergeCollect;
        self.label = "merge:collect".into();
    }

    /// Splice C_X and C_Y into one cycle using the cut edge (x, y) and the
    /// successor edge (x⁺, y⁺), both present in the graph.
    fn patch(&mut self, g: &Graph, x: Vertex, y: Vertex) {
        let pos = |cycle: &[Vertex], v: Vertex| {
            cycle
                .iter()
                .position(|&w| w == v)
                .expect("vertex on its cycle")
        };
        let (ix, iy) = (pos(&self.c_x, x), pos(&self.c_y, y));
        let (len_x, len_y) = (self.c_x.len(), self.c_y.len());
        let mut cycle = Vec::with_capacity(self.n);
        cycle.push(x);
        // all of C_Y, walked backwards from y so it ends at y⁺
        for t in 0..len_y {
            cycle.push(self.c_y[(iy + len_y - t) % len_y]);
        }
        // the rest of C_X, walked forwards from x⁺ back round to x
        for t in 1..len_x {
            cycle.push(self.c_x[(ix + t) % len_x]);
        }
        if is_hamilton_cycle(g, &cycle) {
            self.cycle = Some(cycle);
            self.phase = SPhase::Done;
            self.label = "done".into();
        } else {
            self.fail("merge: patched cycle failed verification".into());
        }
    }

    fn tick(&mut self) {
        match self.phase {
            SPhase::Cover => self.cover_left = self.cover_left.saturating_sub(1),
            SPhase::Expander => self.expander_left = self.expander_left.saturating_sub(1),
            SPhase::Join => {
                self.window_left = self.window_left.saturating_sub(1);
                self.join_budget_left = self.join_budget_left.saturating_sub(1);
            }
            SPhase::MergeCollect => self.t1_left = self.t1_left.saturating_sub(1),
            SPhase::MergePlus => self.t2_left = self.t2_left.saturating_sub(1),
            _ => {}
        }
    }

    /// Completes a two-step connect: `first` and `second` are (path index,
    /// front endpoint?, expander attachment vertex).
    fn complete_join(
        &mut self,
        g: &Graph,
        first: (usize, bool, Vertex),
        second: (usize, bool, Vertex),
    ) {
        let (pi1, front1, x1) = first;
        let (pi2, front2, x2) = second;
        let orient_end = |p: &[Vertex], front: bool| -> Vec<Vertex> {
            // connected endpoint last
            if front {
                p.iter().rev().copied().collect()
            } else {
                p.to_vec()
            }
        };
        if self.paths.len() == 1 {
            // closing: both connects hit the single remaining path
            debug_assert_eq!(pi1, pi2);
            let Some(conn) = g.shortest_path(x2, x1, &self.x_tilde) else {
                self.pending = Some(second);
                return;
            };
            let mut cyc = if front1 {
                self.paths[0].clone()
            } else {
                self.paths[0].iter().rev().copied().collect()
            };
            cyc.extend_from_slice(&conn);
            for &w in &conn {
                self.in_i[w as usize] = true;
                self.i_count += 1;
            }
            self.joins_done += 1;
            self.c_y = cyc;
            return;
        }
        let Some(conn) = g.shortest_path(x1, x2, &self.x_tilde) else {
            self.pending = Some(second);
            return;
        };
        let mut joined = orient_end(&self.paths[pi1], front1);
        joined.extend_from_slice(&conn);
        let tail = orient_end(&self.paths[pi2], front2);
        joined.extend(tail.iter().rev());
        for &w in &conn {
            self.in_i[w as usize] = true;
            self.i_count += 1;
        }
        self.joins_done += 1;
        debug_assert!(
            self.i_count as f64 <= self.joins_done as f64 * 3.0 * (self.m.max(2) as f64).ln() + 1.0
        );
        let (hi, lo) = (pi1.max(pi2), pi1.min(pi2));
        self.paths.swap_remove(hi);
        self.paths.swap_remove(lo);
        self.paths.push(joined);
        self.recompute_x_tilde(g);
        self.rebuild_endpoints();
        self.window_left = self.join_window(self.paths.len());
    }
}

impl Strategy for SuperlogStrategy {
    fn on_offer(&mut self, offer: &RoundOffer, g: &Graph, rng: &mut ChaCha12Rng) -> Choice {
        self.advance(g, rng);
        let cands = &offer.candidates;
        let legal = |&(u, v): &(Vertex, Vertex)| u != v && !g.has_edge(u, v);
        let choice = match &self.phase {
            SPhase::Cover => {
                let hits: Vec<usize> = cands
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| legal(e))
                    .filter(|&(_, &(u, v))| {
                        (self.left_ep[u as usize].is_some() && !self.covered[v as usize])
                            || (self.left_ep[v as usize].is_some() && !self.covered[u as usize])
                    })
                    .map(|(i, _)| i)
                    .collect();
                hits.choose(rng).copied()
            }
            SPhase::Expander => cands
                .iter()
                .position(|e| legal(e) && self.in_yc[e.0 as usize] && self.in_yc[e.1 as usize]),
            SPhase::Join => {
                let ep_ok = |e: Vertex| -> bool {
                    let Some((pi, _)) = self.ep_info[e as usize] else {
                        return false;
                    };
                    match self.pending {
                        None => true,
                        Some((ppi, pfront, _)) => {
                            if self.paths.len() == 1 {
                                // second connect must take the other side
                                self.ep_info[e as usize] == Some((ppi, !pfront))
                            } else {
                                pi != ppi
                            }
                        }
                    }
                };
                let hits: Vec<usize> = cands
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| legal(e))
                    .filter(|&(_, &(u, v))| {
                        (self.x_tilde.contains(u) && ep_ok(v))
                            || (self.x_tilde.contains(v) && ep_ok(u))
                    })
                    .map(|(i, _)| i)
                    .collect();
                hits.choose(rng).copied()
            }
            SPhase::Inner => {
                let inner = self.inner.as_mut().expect("inner set");
                let mut orig = Vec::new();
                let mut mapped = Vec::new();
                for (i, &(u, v)) in cands.iter().enumerate() {
                    if u == v {
                        continue;
                    }
                    if let (Some(iu), Some(iv)) =
                        (inner.to_inner[u as usize], inner.to_inner[v as usize])
                    {
                        orig.push(i);
                        mapped.push((iu as Vertex, iv as Vertex));
                    }
                }
                let pick = inner.core.choose(&mapped, &inner.mirror, rng);
                self.label = format!("p4:{}", inner.core.label());
                pick.map(|j| orig[j])
            }
            SPhase::MergeCollect => {
                let hits: Vec<usize> = cands
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| legal(e))
                    .filter(|&(_, &(u, v))| {
                        (self.in_cx[u as usize] && self.in_cy[v as usize])
                            || (self.in_cx[v as usize] && self.in_cy[u as usize])
                    })
                    .map(|(i, _)| i)
                    .collect();
                hits.choose(rng).copied()
            }
            SPhase::MergePlus => {
                let hits: Vec<usize> = cands
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| legal(e))
                    .filter(|&(_, &(u, v))| self.eplus.contains_key(&norm(u, v)))
                    .map(|(i, _)| i)
                    .collect();
                hits.choose(rng).copied()
            }
            SPhase::Done | SPhase::Failed(_) => None,
        };
        self.tick();
        match choice {
            Some(i) => Choice::Pick(i),
            None => Choice::Skip,
        }
    }

    fn on_applied(&mut self, added: Option<(Vertex, Vertex)>, g: &Graph, rng: &mut ChaCha12Rng) {
        if let SPhase::Inner = self.phase {
            let inner = self.inner.as_mut().expect("inner set");
            let mapped = added.and_then(|(u, v)| {
                match (inner.to_inner[u as usize], inner.to_inner[v as usize]) {
                    (Some(iu), Some(iv)) => Some((iu as Vertex, iv as Vertex)),
                    _ => None,
                }
            });
            if let Some((iu, iv)) = mapped {
                inner
                    .mirror
                    .add_edge(iu, iv)
                    .expect("mirror edge in range");
            }
            let mirror = &inner.mirror;
            inner.core.applied(mapped, mirror, rng);
            self.label = format!("p4:{}", inner.core.label());
            return;
        }
        let Some((u, v)) = added else { return };
        match self.phase {
            SPhase::Cover => {
                for (a, b) in [(u, v), (v, u)] {
                    if let Some(pi) = self.left_ep[a as usize] {
                        if !self.covered[b as usize] {
                            self.paths[pi].push(b);
                            self.covered[b as usize] = true;
                            self.covered_count += 1;
                            self.left_ep[a as usize] = None;
                            self.left_ep[b as usize] = Some(pi);
                            break;
                        }
                    }
                }
            }
            SPhase::Join => {
                let connect = [(u, v), (v, u)].into_iter().find_map(|(x, e)| {
                    if !self.x_tilde.contains(x) {
                        return None;
                    }
                    self.ep_info[e as usize].map(|(pi, front)| (pi, front, x))
                });
                let Some(second) = connect else { return };
                match self.pending.take() {
                    None => self.pending = Some(second),
                    Some(first) => self.complete_join(g, first, second),
                }
            }
            SPhase::MergeCollect => {
                let (x, y) = if self.in_cx[u as usize] {
                    (u, v)
                } else {
                    (v, u)
                };
                if !(self.in_cx[x as usize] && self.in_cy[y as usize]) {
                    return;
                }
                let xs = self.succ_x[x as usize].expect("on cycle");
                let ys = self.succ_y[y as usize].expect("on cycle");
                if g.has_edge(xs, ys) {
                    self.patch(g, x, y);
                } else {
                    self.eplus.entry(norm(xs, ys)).or_insert((x, y));
                }
            }
            SPhase::MergePlus => {
                if let Some(&(x, y)) = self.eplus.get(&norm(u, v)) {
                    self.patch(g, x, y);
                }
            }
            _ => {}
        }
    }

    fn phase_label(&self) -> &str {
        &self.label
    }

    fn name(&self) -> &str {
        "superlog"
    }

    fn status(&self, _g: &Graph) -> StrategyStatus {
        match &self.phase {
            SPhase::Done => {
                StrategyStatus::Hamiltonian(self.cycle.clone().expect("done with cycle"))
            }
            SPhase::Failed(why) => StrategyStatus::Failed(why.clone()),
            _ => StrategyStatus::Running,
        }
    }
}
