//! Pósa rotation-extension machinery: rotation closures over a fixed start
//! vertex, booster-pair enumeration, path extension / cycle absorption, and a
//! restart-based Hamiltonicity search that doubles as a certifier.

use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::graph::{Graph, Vertex};

#[derive(Debug, Error)]
pub enum PosaError {
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("graph has {0} vertices, above the brute-force cap of {1}")]
    BruteForceCap(usize, usize),
}

/// An ordered simple path, validated against a graph on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathRecord {
    verts: Vec<Vertex>,
}

impl PathRecord {
    pub fn new(g: &Graph, verts: Vec<Vertex>) -> Result<Self, PosaError> {
        if verts.is_empty() {
            return Err(PosaError::InvalidPath("empty vertex list".into()));
        }
        let mut seen = vec![false; g.n()];
        for &v in &verts {
            if v as usize >= g.n() {
                return Err(PosaError::InvalidPath(format!("vertex {v} out of range")));
            }
            if seen[v as usize] {
                return Err(PosaError::InvalidPath(format!("repeated vertex {v}")));
            }
            seen[v as usize] = true;
        }
        for w in verts.windows(2) {
            if !g.has_edge(w[0], w[1]) {
                return Err(PosaError::InvalidPath(format!(
                    "missing edge ({}, {})",
                    w[0], w[1]
                )));
            }
        }
        Ok(PathRecord { verts })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.verts
    }

    /// Length in edges.
    pub fn len(&self) -> usize {
        self.verts.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn start(&self) -> Vertex {
        self.verts[0]
    }

    pub fn end(&self) -> Vertex {
        *self.verts.last().unwrap()
    }

    pub fn reversed(&self) -> PathRecord {
        let mut verts = self.verts.clone();
        verts.reverse();
        PathRecord { verts }
    }
}

struct ClosureStep {
    endpoint: Vertex,
    /// Index into `steps` of the parent state; usize::MAX for the root.
    parent: usize,
    /// Pivot position in the parent's path: the rotation reverses the suffix
    /// after this position.
    pivot: usize,
}

/// The set R of endpoints reachable from a base path by elementary rotations
/// with the start vertex held fixed, plus enough bookkeeping to reconstruct
/// one witness path per endpoint.
pub struct RotationClosure {
    base: Vec<Vertex>,
    steps: Vec<ClosureStep>,
    index: HashMap<Vertex, usize>,
}

impl RotationClosure {
    pub fn base(&self) -> &[Vertex] {
        &self.base
    }

    pub fn fixed_start(&self) -> Vertex {
        self.base[0]
    }

    /// Endpoints in discovery order; the first entry is the base endpoint.
    pub fn endpoints(&self) -> Vec<Vertex> {
        self.steps.iter().map(|s| s.endpoint).collect()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.index.contains_key(&v)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// A concrete path in the closure ending at `y`, reconstructed by
    /// replaying the rotation sequence from the base path.
    pub fn path_to(&self, y: Vertex) -> Option<Vec<Vertex>> {
        let mut idx = *self.index.get(&y)?;
        let mut pivots = Vec::new();
        while idx != usize::MAX {
            let step = &self.steps[idx];
            if step.parent == usize::MAX {
                break;
            }
            pivots.push(step.pivot);
            idx = step.parent;
        }
        pivots.reverse();
        let mut path = self.base.clone();
        for pivot in pivots {
            path[pivot + 1..].reverse();
        }
        Some(path)
    }

    /// Predecessors of R along the base path.
    pub fn r_minus(&self) -> Vec<Vertex> {
        let pos = self.base_positions();
        let mut out: Vec<Vertex> = self
            .steps
            .iter()
            .filter_map(|s| {
                let p = pos[&s.endpoint];
                if p > 0 {
                    Some(self.base[p - 1])
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Successors of R along the base path; the base endpoint contributes none.
    pub fn r_plus(&self) -> Vec<Vertex> {
        let pos = self.base_positions();
        let mut out: Vec<Vertex> = self
            .steps
            .iter()
            .filter_map(|s| {
                let p = pos[&s.endpoint];
                if p + 1 < self.base.len() {
                    Some(self.base[p + 1])
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn base_positions(&self) -> HashMap<Vertex, usize> {
        self.base
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect()
    }
}

/// Computes the rotation closure of `p` with `p.start()` fixed, by BFS over
/// endpoints. Each endpoint is expanded once, from one witness path; all
/// witness paths share the start vertex and the length of the base path.
pub fn rotation_closure(g: &Graph, p: &PathRecord) -> RotationClosure {
    rotation_closure_capped(g, p, usize::MAX)
}

/// `rotation_closure`, but the BFS stops once `max_endpoints` endpoints have
/// been discovered. The result is a closure prefix in BFS order: every
/// recorded endpoint still has a valid witness path via `path_to`.
pub fn rotation_closure_capped(
    g: &Graph,
    p: &PathRecord,
    max_endpoints: usize,
) -> RotationClosure {
    let base = p.vertices().to_vec();
    let h = base.len() - 1;
    if h == 0 {
        let endpoint = base[0];
        return RotationClosure {
            base,
            steps: vec![ClosureStep {
                endpoint,
                parent: usize::MAX,
                pivot: 0,
            }],
            index: HashMap::from([(endpoint, 0)]),
        };
    }
    let mut steps = vec![ClosureStep {
        endpoint: base[h],
        parent: usize::MAX,
        pivot: 0,
    }];
    let mut index = HashMap::from([(base[h], 0usize)]);
    // frontier of (step index, witness path); paths are dropped once expanded
    let mut frontier = std::collections::VecDeque::from([(0usize, base.clone())]);
    let mut pos_of = vec![usize::MAX; g.n()];
    while let Some((step_idx, path)) = frontier.pop_front() {
        if steps.len() >= max_endpoints {
            break;
        }
        for (i, &v) in path.iter().enumerate() {
            pos_of[v as usize] = i;
        }
        let endpoint = path[h];
        for w in g.neighbors(endpoint) {
            let i = pos_of[w as usize];
            // chord (path[i], endpoint); i = h-1 is the path edge (identity
            // rotation). i = 0 is valid: x₀ x_h … x₁ still starts at x₀.
            if i == usize::MAX || i >= h - 1 {
                continue;
            }
            let new_end = path[i + 1];
            if steps.len() >= max_endpoints || index.contains_key(&new_end) {
                continue;
            }
            let mut new_path = path.clone();
            new_path[i + 1..].reverse();
            let idx = steps.len();
            steps.push(ClosureStep {
                endpoint: new_end,
                parent: step_idx,
                pivot: i,
            });
            index.insert(new_end, idx);
            frontier.push_back((idx, new_path));
        }
        for &v in path.iter() {
            pos_of[v as usize] = usize::MAX;
        }
    }
    RotationClosure { base, steps, index }
}

/// Lemma check: `N(R) \ R ⊆ R⁻ ∪ R⁺` for the computed closure.
pub fn posa_containment_check(g: &Graph, closure: &RotationClosure) -> bool {
    let r: BTreeSet<Vertex> = closure.endpoints().into_iter().collect();
    let r_minus: BTreeSet<Vertex> = closure.r_minus().into_iter().collect();
    let r_plus: BTreeSet<Vertex> = closure.r_plus().into_iter().collect();
    for &y in &r {
        for w in g.neighbors(y) {
            if !r.contains(&w) && !r_minus.contains(&w) && !r_plus.contains(&w) {
                return false;
            }
        }
    }
    true
}

fn norm(a: Vertex, b: Vertex) -> (Vertex, Vertex) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Non-edges whose addition lengthens the longest path or closes an
/// (h+1)-cycle.
#[derive(Clone, Debug, Default)]
pub struct BoosterSet {
    pairs: BTreeSet<(Vertex, Vertex)>,
}

impl BoosterSet {
    pub fn contains(&self, u: Vertex, v: Vertex) -> bool {
        self.pairs.contains(&norm(u, v))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.pairs.iter().copied()
    }
}

/// Double-rotation booster enumeration: pairs `(x₀, v)` for `v` in the
/// closure R, plus, for up to `r_cap` endpoints `y`, pairs `(y, z)` with `z`
/// in the closure computed with `y` fixed. Only non-edges are returned.
/// `r_cap` also bounds the endpoints explored per closure (4·`r_cap` for the
/// outer one), so the cost is O(r_cap²·h); pass `usize::MAX` for the exact
/// enumeration.
pub fn booster_pairs(g: &Graph, p: &PathRecord, r_cap: usize) -> BoosterSet {
    let closure = rotation_closure_capped(g, p, r_cap.saturating_mul(4));
    let x0 = closure.fixed_start();
    let mut pairs = BTreeSet::new();
    let endpoints = closure.endpoints();
    for &v in &endpoints {
        if !g.has_edge(x0, v) {
            pairs.insert(norm(x0, v));
        }
    }
    for &y in endpoints.iter().take(r_cap) {
        let path = closure.path_to(y).unwrap();
        let rev = PathRecord::new(g, path.into_iter().rev().collect())
            .expect("closure path is valid");
        let inner = rotation_closure_capped(g, &rev, r_cap);
        for z in inner.endpoints() {
            if !g.has_edge(y, z) {
                pairs.insert(norm(y, z));
            }
        }
    }
    BoosterSet { pairs }
}

/// Result of `extend_or_close`.
#[derive(Clone, Debug)]
pub enum ExtendResult {
    /// A Hamilton cycle: n vertices, cyclically closed.
    Hamilton(Vec<Vertex>),
    /// A rotation-maximal path: no closure endpoint (in either orientation)
    /// extends, and no closable cycle can be absorbed.
    Path(PathRecord),
    /// A cycle spans the path's connected component but not the whole graph;
    /// the path is returned unchanged.
    ComponentSpanned(PathRecord),
}

enum StepAction {
    Extended(Vec<Vertex>),
    Hamilton(Vec<Vertex>),
    Absorbed(Vec<Vertex>),
    Spanned,
    Stuck,
}

/// Lazy extension search: the same endpoint BFS as `rotation_closure`, but
/// returns as soon as some witness endpoint has a neighbor off the path
/// (yielding the extended path). Visits endpoints in the same order with the
/// same witnesses, so it is exactly `rotation_closure` + endpoint scan with
/// an early exit.
fn find_rotation_extension(g: &Graph, base: &[Vertex], on_path: &[bool]) -> Option<Vec<Vertex>> {
    let h = base.len() - 1;
    let extend = |path: Vec<Vertex>| -> Option<Vec<Vertex>> {
        let end = path[h];
        g.neighbors(end).find(|&w| !on_path[w as usize]).map(|w| {
            let mut out = path;
            out.push(w);
            out
        })
    };
    if h == 0 {
        return extend(base.to_vec());
    }
    if let Some(out) = extend(base.to_vec()) {
        return Some(out);
    }
    let mut seen = vec![false; g.n()];
    seen[base[h] as usize] = true;
    let mut frontier = std::collections::VecDeque::from([base.to_vec()]);
    let mut pos_of = vec![usize::MAX; g.n()];
    while let Some(path) = frontier.pop_front() {
        for (i, &v) in path.iter().enumerate() {
            pos_of[v as usize] = i;
        }
        let endpoint = path[h];
        for w in g.neighbors(endpoint) {
            let i = pos_of[w as usize];
            if i == usize::MAX || i >= h - 1 {
                continue;
            }
            let new_end = path[i + 1];
            if seen[new_end as usize] {
                continue;
            }
            seen[new_end as usize] = true;
            let mut new_path = path.clone();
            new_path[i + 1..].reverse();
            if let Some(out) = extend(new_path.clone()) {
                return Some(out);
            }
            frontier.push_back(new_path);
        }
        for &v in path.iter() {
            pos_of[v as usize] = usize::MAX;
        }
    }
    None
}

fn try_make_progress(g: &Graph, verts: &[Vertex]) -> StepAction {
    let n = g.n();
    let mut on_path = vec![false; n];
    for &v in verts {
        on_path[v as usize] = true;
    }
    let record = PathRecord { verts: verts.to_vec() };
    // try extension from the closure of either orientation
    for oriented in [record.clone(), record.reversed()] {
        if let Some(path) = find_rotation_extension(g, oriented.vertices(), &on_path) {
            return StepAction::Extended(path);
        }
    }
    // no extension: try to close an (h+1)-cycle and absorb it
    let closure = rotation_closure(g, &record);
    let x0 = record.start();
    for y in closure.endpoints() {
        if y != x0 && g.has_edge(x0, y) {
            let ring = closure.path_to(y).unwrap();
            if ring.len() == n {
                return StepAction::Hamilton(ring);
            }
            // find an edge from the ring to an outside vertex
            for (j, &c) in ring.iter().enumerate() {
                if let Some(w) = g.neighbors(c).find(|&w| !on_path[w as usize]) {
                    // open the ring at c and prepend w
                    let mut path = vec![w];
                    path.extend(ring[..=j].iter().rev());
                    path.extend(ring[j + 1..].iter().rev());
                    return StepAction::Absorbed(path);
                }
            }
            return StepAction::Spanned;
        }
    }
    StepAction::Stuck
}

/// Repeatedly extends the path through rotation closures, closing and
/// absorbing (h+1)-cycles when possible. Returns a Hamilton cycle or a
/// locally-maximal path.
pub fn extend_or_close(g: &Graph, p: &PathRecord) -> ExtendResult {
    let mut verts = p.vertices().to_vec();
    loop {
        match try_make_progress(g, &verts) {
            StepAction::Extended(v) | StepAction::Absorbed(v) => verts = v,
            StepAction::Hamilton(ring) => return ExtendResult::Hamilton(ring),
            StepAction::Spanned => {
                return ExtendResult::ComponentSpanned(PathRecord { verts })
            }
            StepAction::Stuck => return ExtendResult::Path(PathRecord { verts }),
        }
    }
}

/// Realizes the (h+1)-cycle promised by a booster pair `(a, b)` that was just
/// added to the graph, then keeps extending. Falls back to a plain
/// `extend_or_close` when the targeted double rotation does not apply.
pub fn apply_booster(g: &Graph, p: &PathRecord, a: Vertex, b: Vertex) -> ExtendResult {
    let closure = rotation_closure(g, p);
    for (u, v) in [(a, b), (b, a)] {
        let head = if u == closure.fixed_start() {
            Some(p.vertices().to_vec())
        } else {
            closure
                .path_to(u)
                .map(|path| path.into_iter().rev().collect())
        };
        if let Some(head_path) = head {
            // head_path starts at u; look for v in its closure
            let rec = PathRecord { verts: head_path };
            let inner = rotation_closure(g, &rec);
            if inner.contains(v) {
                let ring = inner.path_to(v).unwrap();
                let rec = PathRecord { verts: ring };
                return extend_or_close(g, &rec);
            }
        }
    }
    extend_or_close(g, p)
}

/// Greedy random maximal path: random start, random unvisited neighbor steps.
pub fn random_greedy_path<R: Rng>(g: &Graph, rng: &mut R) -> PathRecord {
    let n = g.n();
    let start = rng.gen_range(0..n) as Vertex;
    let mut visited = vec![false; n];
    visited[start as usize] = true;
    let mut verts = vec![start];
    loop {
        let cur = *verts.last().unwrap();
        let options: Vec<Vertex> = g
            .neighbors(cur)
            .filter(|&w| !visited[w as usize])
            .collect();
        match options.choose(rng) {
            Some(&w) => {
                visited[w as usize] = true;
                verts.push(w);
            }
            None => break,
        }
    }
    PathRecord { verts }
}

/// Checks that `cycle` is a Hamilton cycle of `g`.
pub fn is_hamilton_cycle(g: &Graph, cycle: &[Vertex]) -> bool {
    let n = g.n();
    if cycle.len() != n || n < 3 {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in cycle {
        if v as usize >= n || seen[v as usize] {
            return false;
        }
        seen[v as usize] = true;
    }
    for i in 0..n {
        if !g.has_edge(cycle[i], cycle[(i + 1) % n]) {
            return false;
        }
    }
    true
}

/// Rotation-extension Hamiltonicity search with random restarts. Sound but
/// incomplete: a returned cycle is verified; `None` means not found.
pub fn hamiltonicity_search<R: Rng>(g: &Graph, restarts: usize, rng: &mut R) -> Option<Vec<Vertex>> {
    if g.n() < 3 || !g.connected() {
        return None;
    }
    if (0..g.n() as Vertex).any(|v| g.degree(v) < 2) {
        return None;
    }
    for _ in 0..restarts {
        let start = random_greedy_path(g, rng);
        if let ExtendResult::Hamilton(cycle) = extend_or_close(g, &start) {
            debug_assert!(is_hamilton_cycle(g, &cycle));
            if is_hamilton_cycle(g, &cycle) {
                return Some(cycle);
            }
        }
    }
    None
}

pub const BRUTE_FORCE_CAP: usize = 14;

/// Exact Hamiltonicity by bitmask dynamic programming; small n only.
pub fn brute_force_hamiltonian(g: &Graph) -> Result<Option<Vec<Vertex>>, PosaError> {
    let n = g.n();
    if n > BRUTE_FORCE_CAP {
        return Err(PosaError::BruteForceCap(n, BRUTE_FORCE_CAP));
    }
    if n < 3 {
        return Ok(None);
    }
    // paths from vertex 0: reach[mask][v] with 0 in mask
    let full: u32 = (1u32 << n) - 1;
    let mut reach = vec![0u32; 1 << n]; // bitset over end vertices
    reach[1] = 1; // path {0} ending at 0
    for mask in 1u32..=full {
        if mask & 1 == 0 || reach[mask as usize] == 0 {
            continue;
        }
        let ends = reach[mask as usize];
        for v in 0..n {
            if ends & (1 << v) == 0 {
                continue;
            }
            for w in g.neighbors(v as Vertex) {
                let bit = 1u32 << w;
                if mask & bit == 0 {
                    reach[(mask | bit) as usize] |= 1 << w;
                }
            }
        }
    }
    let ends = reach[full as usize];
    let closing = (0..n).find(|&v| ends & (1 << v) != 0 && g.has_edge(v as Vertex, 0));
    let Some(last) = closing else {
        return Ok(None);
    };
    // reconstruct the Hamilton path 0..last
    let mut cycle = vec![last as Vertex];
    let mut mask = full;
    let mut cur = last;
    while mask != 1 {
        let prev_mask = mask & !(1u32 << cur);
        let prev = (0..n)
            .find(|&u| {
                reach[prev_mask as usize] & (1 << u) != 0 && g.has_edge(u as Vertex, cur as Vertex)
            })
            .expect("dp reconstruction");
        cycle.push(prev as Vertex);
        mask = prev_mask;
        cur = prev;
    }
    cycle.reverse();
    debug_assert!(is_hamilton_cycle(g, &cycle));
    Ok(Some(cycle))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn complete(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..n as Vertex {
            for v in (u + 1)..n as Vertex {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    fn cycle_graph(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for v in 0..n as Vertex {
            g.add_edge(v, (v + 1) % n as Vertex).unwrap();
        }
        g
    }

    #[test]
    fn path_record_validation() {
        let g = cycle_graph(5);
        assert!(PathRecord::new(&g, vec![0, 1, 2]).is_ok());
        assert!(PathRecord::new(&g, vec![0, 2]).is_err());
        assert!(PathRecord::new(&g, vec![0, 1, 0]).is_err());
        assert!(PathRecord::new(&g, vec![]).is_err());
    }

    #[test]
    fn closure_of_chordless_path_is_trivial() {
        let mut g = Graph::new(4);
        g.add_edge(0, 1).unwrap();
        g.add_edge(1, 2).unwrap();
        g.add_edge(2, 3).unwrap();
        let p = PathRecord::new(&g, vec![0, 1, 2, 3]).unwrap();
        let c = rotation_closure(&g, &p);
        assert_eq!(c.endpoints(), vec![3]);
    }

    #[test]
    fn one_elementary_rotation() {
        // 0-1-2-3 plus chord (1, 3): rotation yields endpoint 2
        let mut g = Graph::new(4);
        g.add_edge(0, 1).unwrap();
        g.add_edge(1, 2).unwrap();
        g.add_edge(2, 3).unwrap();
        g.add_edge(1, 3).unwrap();
        let p = PathRecord::new(&g, vec![0, 1, 2, 3]).unwrap();
        let c = rotation_closure(&g, &p);
        let ends = c.endpoints();
        assert!(ends.contains(&3) && ends.contains(&2));
        let path = c.path_to(2).unwrap();
        assert_eq!(path, vec![0, 1, 3, 2]);
        assert_eq!(PathRecord::new(&g, path).unwrap().len(), 3);
    }

    #[test]
    fn closure_paths_share_start_and_length() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for _ in 0..50 {
            let g = Graph::gnm(10, 18, &mut rng);
            let p = random_greedy_path(&g, &mut rng);
            if p.len() < 2 {
                continue;
            }
            let c = rotation_closure(&g, &p);
            for y in c.endpoints() {
                let path = c.path_to(y).unwrap();
                assert_eq!(path[0], p.start());
                assert_eq!(path.len(), p.vertices().len());
                assert_eq!(*path.last().unwrap(), y);
                PathRecord::new(&g, path).unwrap();
            }
        }
    }

    #[test]
    fn truncated_closure_fails_containment() {
        // negative control: drop endpoints from R and re-check by hand
        let g = complete(6);
        let p = PathRecord::new(&g, vec![0, 1, 2, 3, 4, 5]).unwrap();
        let c = rotation_closure(&g, &p);
        assert!(posa_containment_check(&g, &c));
        let r: Vec<Vertex> = c.endpoints().into_iter().take(1).collect();
        // with R truncated to one endpoint, 5's neighbors spill outside R⁻∪R⁺
        let r_set: BTreeSet<Vertex> = r.iter().copied().collect();
        let ok = r.iter().all(|&y| {
            g.neighbors(y).all(|w| r_set.contains(&w) || w == 4 || w == 0)
        });
        assert!(!ok);
    }

    #[test]
    fn five_cycle_minus_edge_booster() {
        let mut g = cycle_graph(5);
        // remove edge (4, 0) by rebuilding
        let mut h = Graph::new(5);
        for (u, v) in g.edges() {
            if (u, v) != (0, 4) {
                h.add_edge(u, v).unwrap();
            }
        }
        g = h;
        let p = PathRecord::new(&g, vec![0, 1, 2, 3, 4]).unwrap();
        let boosters = booster_pairs(&g, &p, usize::MAX);
        assert!(boosters.contains(0, 4));
    }

    #[test]
    fn star_path_is_maximal() {
        let mut g = Graph::new(4);
        g.add_edge(0, 1).unwrap();
        g.add_edge(0, 2).unwrap();
        g.add_edge(0, 3).unwrap();
        let p = PathRecord::new(&g, vec![1, 0, 2]).unwrap();
        match extend_or_close(&g, &p) {
            ExtendResult::Path(q) => assert_eq!(q.len(), 2),
            other => panic!("expected maximal path, got {other:?}"),
        }
    }

    #[test]
    fn n_cycle_returns_hamilton() {
        let g = cycle_graph(8);
        let p = PathRecord::new(&g, vec![0, 1, 2, 3, 4, 5, 6, 7]).unwrap();
        match extend_or_close(&g, &p) {
            ExtendResult::Hamilton(c) => assert!(is_hamilton_cycle(&g, &c)),
            other => panic!("expected Hamilton cycle, got {other:?}"),
        }
    }

    #[test]
    fn search_finds_k4_cycle() {
        let g = complete(4);
        let mut rng = ChaCha12Rng::seed_from_u64(0);
        let c = hamiltonicity_search(&g, 10, &mut rng).unwrap();
        assert!(is_hamilton_cycle(&g, &c));
    }

    #[test]
    fn search_rejects_tree() {
        let mut g = Graph::new(5);
        for v in 1..5 {
            g.add_edge(0, v).unwrap();
        }
        let mut rng = ChaCha12Rng::seed_from_u64(0);
        assert!(hamiltonicity_search(&g, 20, &mut rng).is_none());
    }

    #[test]
    fn brute_force_k5_and_broken_c6() {
        assert!(brute_force_hamiltonian(&complete(5)).unwrap().is_some());
        let g = cycle_graph(6);
        let mut h = Graph::new(6);
        for (u, v) in g.edges() {
            if (u, v) != (2, 3) {
                h.add_edge(u, v).unwrap();
            }
        }
        assert!(brute_force_hamiltonian(&h).unwrap().is_none());
        assert!(brute_force_hamiltonian(&complete(15)).is_err());
    }
}
