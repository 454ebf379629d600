//! Left-compression (shifting), cliques, and enumeration of left-compressed families.

use crate::error::{Error, Result};
use crate::hypergraph::{binomial, colex_rank, ground_set, subsets, Edge, Hypergraph, Vertex};

/// Elementary down-shifts of `e`: replace some `v` by `v - 1` when `v - 1` is absent.
fn lower_covers(e: Edge) -> impl Iterator<Item = Edge> {
    e.vertices()
        .filter(move |&v| v > 1 && !e.contains(v - 1))
        .map(move |v| e.without(v).with(v - 1))
}

/// Every edge's coordinatewise-dominated r-sets are edges too.
///
/// Dominance on sorted r-sets is generated by the elementary shifts `v -> v - 1`,
/// so it is enough to check those.
pub fn is_left_compressed(g: &Hypergraph) -> bool {
    g.edges()
        .iter()
        .all(|&e| lower_covers(e).all(|f| g.contains(f)))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompressionTrace {
    /// `(before, after)` for every replaced edge, in application order.
    pub steps: Vec<(Edge, Edge)>,
    pub fixed_point: bool,
}

/// Shifts edges down until the graph is left-compressed.
///
/// Applies the pair shifts `S_ij` (`i < j`, pairs taken by increasing `j`, then
/// `i`) until none changes the graph. `S_ij` moves every edge `e` with `j ∈ e`,
/// `i ∉ e` to `e - j + i` when that set is not already an edge; moving all of
/// them at once is what keeps cliques and the Lagrangian from dropping. Each
/// replacement lowers the sum of colex ranks, so the loop ends.
pub fn compress(g: &Hypergraph) -> (Hypergraph, CompressionTrace) {
    let mut edges: Vec<Edge> = g.edges().to_vec();
    let mut steps = Vec::new();
    let n = g.n() as Vertex;
    loop {
        let before = steps.len();
        for j in 2..=n {
            for i in 1..j {
                shift_pair(&mut edges, i, j, &mut steps);
            }
        }
        if steps.len() == before {
            break;
        }
    }
    let out = Hypergraph::from_sorted_unchecked(g.r(), g.n(), edges);
    let trace = CompressionTrace {
        fixed_point: is_left_compressed(&out),
        steps,
    };
    (out, trace)
}

fn shift_pair(edges: &mut Vec<Edge>, i: Vertex, j: Vertex, steps: &mut Vec<(Edge, Edge)>) {
    let moves: Vec<(Edge, Edge)> = edges
        .iter()
        .filter(|e| e.contains(j) && !e.contains(i))
        .map(|&e| (e, e.without(j).with(i)))
        .filter(|(_, f)| edges.binary_search(f).is_err())
        .collect();
    if moves.is_empty() {
        return;
    }
    edges.retain(|e| moves.iter().all(|(from, _)| from != e));
    edges.extend(moves.iter().map(|&(_, to)| to));
    edges.sort_unstable();
    steps.extend(moves);
}

/// Candidates `w` in `cand` (all larger than `v`) such that `s ∪ {v, w}` stays a clique,
/// given that `s ∪ {w}` and `s ∪ {v}` already are.
fn refine_candidates(g: &Hypergraph, s: Edge, v: Vertex, cand: u64) -> u64 {
    let r = g.r();
    if s.len() + 2 < r {
        return cand;
    }
    let mut out = 0u64;
    let mut rest = cand;
    while rest != 0 {
        let w = rest.trailing_zeros() + 1;
        rest &= rest - 1;
        let vw = Edge::EMPTY.with(v).with(w);
        let ok = match r {
            2 => g.contains(vw),
            3 => s.vertices().all(|u| g.contains(vw.with(u))),
            _ => subsets(s, r - 2).all(|u| g.contains(Edge::from_mask(u.mask() | vw.mask()))),
        };
        if ok {
            out |= 1 << (w - 1);
        }
    }
    out
}

/// Branch and bound for a maximum clique; stops early once `stop_at` is reached.
fn max_clique_search(g: &Hypergraph, s: Edge, cand: u64, best: &mut Edge, stop_at: usize) -> bool {
    if s.len() > best.len() {
        *best = s;
        if best.len() >= stop_at {
            return true;
        }
    }
    let mut cand = cand;
    while cand != 0 {
        if s.len() + cand.count_ones() as usize <= best.len() {
            return false;
        }
        let v = cand.trailing_zeros() + 1;
        cand &= cand - 1;
        let next = refine_candidates(g, s, v, cand);
        if max_clique_search(g, s.with(v), next, best, stop_at) {
            return true;
        }
    }
    false
}

/// A maximum clique (vertex set all of whose r-subsets are edges).
///
/// The empty graph has clique number `r - 1`; the returned set is then `[r - 1]`.
pub fn maximum_clique(g: &Hypergraph) -> Edge {
    let mut best = Edge::EMPTY;
    max_clique_search(g, Edge::EMPTY, g.vertex_set().mask(), &mut best, usize::MAX);
    if best.len() < g.r() {
        // fewer than r vertices are vacuously complete
        ground_set(g.r() - 1)
    } else {
        best
    }
}

/// ω(G); `r - 1` for the empty graph.
pub fn clique_number(g: &Hypergraph) -> usize {
    maximum_clique(g).len()
}

/// Some clique on exactly `t` vertices, if one exists.
pub fn find_clique(g: &Hypergraph, t: usize) -> Option<Edge> {
    if t > g.n() {
        return None;
    }
    if t < g.r() {
        return Some(ground_set(t));
    }
    let mut best = Edge::EMPTY;
    if max_clique_search(g, Edge::EMPTY, g.vertex_set().mask(), &mut best, t) {
        // trim a larger witness down to t vertices; sub-cliques are cliques
        let mut s = best;
        while s.len() > t {
            s = s.without(s.max_vertex());
        }
        Some(s)
    } else {
        None
    }
}

/// `ω(G) >= t`. For left-compressed graphs a clique exists iff `[t]` is one.
pub fn contains_clique(g: &Hypergraph, t: usize) -> bool {
    if t > g.n() {
        return false;
    }
    if t < g.r() {
        return true;
    }
    if g.is_clique(ground_set(t)) {
        return true;
    }
    if is_left_compressed(g) {
        return false;
    }
    find_clique(g, t).is_some()
}

/// All maximum cliques, up to `limit` of them, in lexicographic search order.
pub fn maximum_cliques(g: &Hypergraph, limit: usize) -> Vec<Edge> {
    let omega = clique_number(g);
    let mut out = Vec::new();
    if omega < g.r() {
        return out;
    }
    collect_cliques(
        g,
        Edge::EMPTY,
        g.vertex_set().mask(),
        omega,
        &mut out,
        limit,
    );
    out
}

fn collect_cliques(
    g: &Hypergraph,
    s: Edge,
    cand: u64,
    size: usize,
    out: &mut Vec<Edge>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    if s.len() == size {
        out.push(s);
        return;
    }
    let mut cand = cand;
    while cand != 0 && s.len() + cand.count_ones() as usize >= size {
        let v = cand.trailing_zeros() + 1;
        cand &= cand - 1;
        let next = refine_candidates(g, s, v, cand);
        collect_cliques(g, s.with(v), next, size, out, limit);
        if out.len() >= limit {
            return;
        }
    }
}

/// Largest ground set the enumerator accepts, as a count of r-sets.
pub const MAX_ENUMERATION_GROUND: u64 = 1 << 16;

/// The r-subsets of `[t]` under coordinatewise dominance, indexed by colex rank.
#[derive(Clone, Debug)]
pub struct DominancePoset {
    t: usize,
    r: usize,
    elements: Vec<Edge>,
    covers: Vec<Vec<usize>>,
}

impl DominancePoset {
    pub fn new(t: usize, r: usize) -> Result<Self> {
        if r < 2 || t < r {
            return Err(Error::InvalidParameters(format!(
                "need t >= r >= 2 (got t = {t}, r = {r})"
            )));
        }
        if t > 64 {
            return Err(Error::TooManyVertices(t));
        }
        let ground = binomial(t as u64, r as u64);
        if ground > MAX_ENUMERATION_GROUND {
            return Err(Error::GuardExceeded {
                t,
                r,
                ground,
                limit: MAX_ENUMERATION_GROUND,
            });
        }
        let elements: Vec<Edge> = subsets(ground_set(t), r).collect();
        let covers = elements
            .iter()
            .map(|&e| lower_covers(e).map(|f| colex_rank(f) as usize).collect())
            .collect();
        Ok(DominancePoset {
            t,
            r,
            elements,
            covers,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, rank: usize) -> Edge {
        self.elements[rank]
    }

    /// Ranks of the elements directly below `rank`.
    pub fn lower_covers(&self, rank: usize) -> &[usize] {
        &self.covers[rank]
    }

    /// Down-sets with exactly `m` elements.
    pub fn ideals(&self, m: usize) -> LeftCompressedIter<'_> {
        LeftCompressedIter::new(self, m)
    }
}

/// Depth-first generation of the `m`-element down-sets of a [`DominancePoset`].
///
/// Each down-set is built by adding elements in increasing colex order, which
/// is a linear extension of dominance: the parent of an ideal is the ideal minus
/// its colex-largest element (always maximal), so every ideal has one canonical
/// path and is produced once.
pub struct LeftCompressedIter<'a> {
    poset: &'a DominancePoset,
    m: usize,
    chosen: Vec<usize>,
    cursor: Vec<usize>,
    in_ideal: Vec<bool>,
    done: bool,
}

impl<'a> LeftCompressedIter<'a> {
    fn new(poset: &'a DominancePoset, m: usize) -> Self {
        LeftCompressedIter {
            poset,
            m,
            chosen: Vec::with_capacity(m),
            cursor: vec![0; m + 1],
            in_ideal: vec![false; poset.len()],
            done: m > poset.len(),
        }
    }

    fn pop(&mut self) {
        match self.chosen.pop() {
            Some(x) => self.in_ideal[x] = false,
            None => self.done = true,
        }
    }

    fn current(&self) -> Hypergraph {
        let edges = self
            .chosen
            .iter()
            .map(|&x| self.poset.elements[x])
            .collect();
        Hypergraph::from_sorted_unchecked(self.poset.r, self.poset.t, edges)
    }
}

impl Iterator for LeftCompressedIter<'_> {
    type Item = Hypergraph;

    fn next(&mut self) -> Option<Hypergraph> {
        let total = self.poset.len();
        while !self.done {
            let depth = self.chosen.len();
            if depth == self.m {
                let g = self.current();
                self.pop();
                return Some(g);
            }
            let need = self.m - depth;
            let mut found = None;
            for x in self.cursor[depth]..total {
                if total - x < need {
                    break;
                }
                if self.poset.covers[x].iter().all(|&c| self.in_ideal[c]) {
                    found = Some(x);
                    break;
                }
            }
            match found {
                Some(x) => {
                    self.cursor[depth] = x + 1;
                    self.cursor[depth + 1] = x + 1;
                    self.chosen.push(x);
                    self.in_ideal[x] = true;
                }
                None => self.pop(),
            }
        }
        None
    }
}

/// All left-compressed r-graphs on `[t]` with `m` edges, each exactly once.
pub fn enumerate_left_compressed(t: usize, r: usize, m: usize) -> Result<Vec<Hypergraph>> {
    let poset = DominancePoset::new(t, r)?;
    Ok(poset.ideals(m).collect())
}

pub fn count_left_compressed(t: usize, r: usize, m: usize) -> Result<u64> {
    let poset = DominancePoset::new(t, r)?;
    Ok(poset.ideals(m).count() as u64)
}
