//! Edges, uniform hypergraphs, the colex order and neighbourhood (link) families.
//!
//! Vertices are 1-based `u32` ids in `1..=64`. A vertex set is stored as a
//! `u64` bitmask with vertex `v` at bit `v - 1`, which makes the colex order on
//! sets of equal size coincide with the integer order of their masks: the
//! largest element of `A △ B` is the highest differing bit.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

pub type Vertex = u32;

pub const MAX_VERTICES: usize = 64;

/// C(n, k), exact for every `n <= 64`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc as u64
}

/// A finite set of vertices stored as a bitmask; edges and link members are both `Edge`s.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Edge(u64);

impl Edge {
    pub const EMPTY: Edge = Edge(0);

    /// Builds an edge from strictly increasing 1-based vertex ids.
    pub fn new(vertices: &[Vertex]) -> Result<Self> {
        let mut mask = 0u64;
        let mut prev = 0;
        for &v in vertices {
            if v == 0 || v as usize > MAX_VERTICES {
                return Err(Error::VertexLimit(u64::from(v)));
            }
            if v <= prev {
                return Err(Error::UnsortedEdge(vertices.to_vec()));
            }
            prev = v;
            mask |= 1 << (v - 1);
        }
        Ok(Edge(mask))
    }

    pub const fn from_mask(mask: u64) -> Self {
        Edge(mask)
    }

    pub const fn mask(self) -> u64 {
        self.0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn contains(self, v: Vertex) -> bool {
        v >= 1 && v as usize <= MAX_VERTICES && self.0 >> (v - 1) & 1 == 1
    }

    /// Largest vertex, or 0 for the empty set.
    pub const fn max_vertex(self) -> Vertex {
        64 - self.0.leading_zeros()
    }

    pub const fn is_subset_of(self, other: Edge) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn with(self, v: Vertex) -> Edge {
        Edge(self.0 | 1 << (v - 1))
    }

    pub fn without(self, v: Vertex) -> Edge {
        Edge(self.0 & !(1 << (v - 1)))
    }

    pub fn vertices(self) -> Vertices {
        Vertices(self.0)
    }

    pub fn to_vec(self) -> Vec<Vertex> {
        self.vertices().collect()
    }

    /// Sorted coordinatewise comparison `a_p <= b_p` for every p (equal sizes only).
    pub fn is_dominated_by(self, other: Edge) -> bool {
        self.len() == other.len() && self.vertices().zip(other.vertices()).all(|(a, b)| a <= b)
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (idx, v) in self.vertices().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Ascending iterator over the vertices of an [`Edge`].
#[derive(Clone)]
pub struct Vertices(u64);

impl Iterator for Vertices {
    type Item = Vertex;

    fn next(&mut self) -> Option<Vertex> {
        if self.0 == 0 {
            return None;
        }
        let bit = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(bit + 1)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Vertices {}

/// Iterates the `k`-subsets of the vertices in `ground`, in colex order.
pub fn subsets(ground: Edge, k: usize) -> impl Iterator<Item = Edge> {
    let items: Vec<Vertex> = ground.to_vec();
    let n = items.len();
    // Gosper's hack over index masks; increasing index masks are colex in `items`.
    let mut state: Option<u64> = if k > n {
        None
    } else if k == 64 {
        Some(u64::MAX)
    } else {
        Some((1u64 << k) - 1)
    };
    std::iter::from_fn(move || {
        let idx = state?;
        let mut mask = 0u64;
        let mut bits = idx;
        while bits != 0 {
            let b = bits.trailing_zeros() as usize;
            mask |= 1 << (items[b] - 1);
            bits &= bits - 1;
        }
        state = if idx == 0 {
            None
        } else {
            let c = idx & idx.wrapping_neg();
            let r = idx.wrapping_add(c);
            let next = (((r ^ idx) >> 2) / c) | r;
            if r == 0 || (n < 64 && next >> n != 0) {
                None
            } else {
                Some(next)
            }
        };
        Some(Edge(mask))
    })
}

/// The set `{1, ..., n}` as a mask.
pub fn ground_set(n: usize) -> Edge {
    if n >= 64 {
        Edge(u64::MAX)
    } else {
        Edge((1u64 << n) - 1)
    }
}

/// Colex comparison of two sets of equal size.
pub fn colex_compare(a: Edge, b: Edge) -> Result<Ordering> {
    if a.len() != b.len() {
        return Err(Error::ArityMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(a.0.cmp(&b.0))
}

/// 0-based position of `a` in the colex enumeration of all `|a|`-sets.
pub fn colex_rank(a: Edge) -> u64 {
    a.vertices()
        .enumerate()
        .map(|(idx, v)| binomial(u64::from(v - 1), idx as u64 + 1))
        .sum()
}

/// Inverse of [`colex_rank`] for `r`-sets.
pub fn colex_unrank(r: usize, k: u64) -> Result<Edge> {
    let mut rem = k;
    let mut mask = 0u64;
    for p in (1..=r as u64).rev() {
        // largest c with C(c, p) <= rem; the vertex is c + 1
        let mut c = p - 1;
        while binomial(c + 1, p) <= rem {
            c += 1;
            if c >= MAX_VERTICES as u64 {
                return Err(Error::VertexLimit(c + 1));
            }
        }
        rem -= binomial(c, p);
        mask |= 1 << c;
    }
    Ok(Edge(mask))
}

/// Next set of the same size in colex order.
pub(crate) fn colex_successor(e: Edge) -> Option<Edge> {
    let x = e.0;
    if x == 0 {
        return None;
    }
    let c = x & x.wrapping_neg();
    let (r, overflow) = x.overflowing_add(c);
    if overflow {
        return None;
    }
    Some(Edge((((r ^ x) >> 2) / c) | r))
}

/// An `r`-uniform hypergraph on the vertex set `[n]`.
///
/// Edges are kept sorted in colex order and are unique.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    r: usize,
    n: usize,
    edges: Vec<Edge>,
}

impl Hypergraph {
    pub fn new(r: usize, n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidParameters(format!(
                "uniformity must be at least 2 (got {r})"
            )));
        }
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices(n));
        }
        if n < r {
            return Err(Error::InvalidParameters(format!(
                "vertex count {n} is smaller than uniformity {r}"
            )));
        }
        let ground = ground_set(n);
        let mut edges: Vec<Edge> = edges.into_iter().collect();
        for e in &edges {
            if e.len() != r {
                return Err(Error::ArityMismatch {
                    expected: r,
                    got: e.len(),
                });
            }
            if !e.is_subset_of(ground) {
                return Err(Error::VertexOutOfRange {
                    vertex: e.max_vertex(),
                    n,
                });
            }
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].to_string()));
        }
        Ok(Hypergraph { r, n, edges })
    }

    /// Convenience constructor from vertex lists.
    pub fn from_lists<L: AsRef<[Vertex]>>(r: usize, n: usize, lists: &[L]) -> Result<Self> {
        let edges = lists
            .iter()
            .map(|l| Edge::new(l.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(r, n, edges)
    }

    pub(crate) fn from_sorted_unchecked(r: usize, n: usize, edges: Vec<Edge>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        Hypergraph { r, n, edges }
    }

    pub fn empty(r: usize, n: usize) -> Result<Self> {
        Self::new(r, n, std::iter::empty())
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges in colex order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn vertex_set(&self) -> Edge {
        ground_set(self.n)
    }

    /// Vertices lying in at least one edge.
    pub fn touched_vertices(&self) -> Edge {
        Edge(self.edges.iter().fold(0, |acc, e| acc | e.0))
    }

    /// Same edges on a larger vertex set (appends isolated vertices).
    pub fn with_vertex_count(&self, n: usize) -> Result<Self> {
        if n < self.n {
            return Err(Error::InvalidParameters(format!(
                "cannot shrink vertex set from {} to {n}",
                self.n
            )));
        }
        Self::new(self.r, n, self.edges.iter().copied())
    }

    pub fn is_subgraph_of(&self, other: &Hypergraph) -> bool {
        self.r == other.r && self.edges.iter().all(|&e| other.contains(e))
    }

    /// All vertex sets of size `k` inside `set` are edges.
    pub fn is_clique(&self, set: Edge) -> bool {
        subsets(set, self.r).all(|e| self.contains(e))
    }

    pub(crate) fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v == 0 || v as usize > self.n {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }

    fn check_pair(&self, i: Vertex, j: Vertex) -> Result<()> {
        self.check_vertex(i)?;
        self.check_vertex(j)?;
        if i == j {
            return Err(Error::SameVertex(i));
        }
        Ok(())
    }
}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Hypergraph(r={}, n={}, {:?})",
            self.r, self.n, self.edges
        )
    }
}

/// First `m` sets of the colex order; the vertex count is the largest vertex used.
pub fn colex_graph(r: usize, m: u64) -> Result<Hypergraph> {
    if m == 0 {
        return Err(Error::InvalidParameters(
            "a colex graph needs at least one edge".into(),
        ));
    }
    let mut edges = Vec::with_capacity(m as usize);
    let mut e = colex_unrank(r, 0)?;
    for k in 0..m {
        if k > 0 {
            e = colex_successor(e).ok_or(Error::VertexLimit(65))?;
        }
        edges.push(e);
    }
    let n = edges.last().map_or(r, |e| e.max_vertex() as usize);
    if n > MAX_VERTICES {
        return Err(Error::TooManyVertices(n));
    }
    Hypergraph::new(r, n, edges)
}

/// `[t]^{(r)}`, the complete `r`-graph on `t` vertices.
pub fn complete_graph(t: usize, r: usize) -> Result<Hypergraph> {
    if t < r {
        return Err(Error::InvalidParameters(format!(
            "complete graph needs t >= r (got t = {t}, r = {r})"
        )));
    }
    if t > MAX_VERTICES {
        return Err(Error::TooManyVertices(t));
    }
    Hypergraph::new(r, t, subsets(ground_set(t), r))
}

/// A family of equal-size vertex sets arising as a neighbourhood.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkSet {
    arity: usize,
    members: Vec<Edge>,
}

impl LinkSet {
    fn new(arity: usize, mut members: Vec<Edge>) -> Self {
        members.sort_unstable();
        members.dedup();
        LinkSet { arity, members }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn members(&self) -> &[Edge] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.members.binary_search(&e).is_ok()
    }

    pub fn intersection(&self, other: &LinkSet) -> LinkSet {
        let members = self
            .members
            .iter()
            .copied()
            .filter(|&e| other.contains(e))
            .collect();
        LinkSet::new(self.arity, members)
    }
}

/// `E_i`: the `(r-1)`-sets completing `i` to an edge.
pub fn vertex_link(g: &Hypergraph, i: Vertex) -> Result<LinkSet> {
    g.check_vertex(i)?;
    let members = g
        .edges
        .iter()
        .filter(|e| e.contains(i))
        .map(|e| e.without(i))
        .collect();
    Ok(LinkSet::new(g.r - 1, members))
}

/// `E_i^c`: the `(r-1)`-sets avoiding `i` whose union with `i` is not an edge.
pub fn vertex_link_complement(g: &Hypergraph, i: Vertex) -> Result<LinkSet> {
    g.check_vertex(i)?;
    let members = subsets(g.vertex_set().without(i), g.r - 1)
        .filter(|a| !g.contains(a.with(i)))
        .collect();
    Ok(LinkSet::new(g.r - 1, members))
}

/// `E_ij`: the `(r-2)`-sets completing `{i, j}` to an edge.
pub fn pair_link(g: &Hypergraph, i: Vertex, j: Vertex) -> Result<LinkSet> {
    g.check_pair(i, j)?;
    let pair = Edge::EMPTY.with(i).with(j);
    let members = g
        .edges
        .iter()
        .filter(|e| pair.is_subset_of(**e))
        .map(|e| Edge(e.0 & !pair.0))
        .collect();
    Ok(LinkSet::new(g.r - 2, members))
}

/// `E_ij^c`: the `(r-2)`-sets avoiding `i, j` whose union with `{i, j}` is not an edge.
pub fn pair_link_complement(g: &Hypergraph, i: Vertex, j: Vertex) -> Result<LinkSet> {
    g.check_pair(i, j)?;
    let pair = Edge::EMPTY.with(i).with(j);
    let members = subsets(Edge(g.vertex_set().0 & !pair.0), g.r - 2)
        .filter(|b| !g.contains(Edge(b.0 | pair.0)))
        .collect();
    Ok(LinkSet::new(g.r - 2, members))
}

/// `E_{i∖j} = E_i ∩ E_j^c`.
pub fn difference_link(g: &Hypergraph, i: Vertex, j: Vertex) -> Result<LinkSet> {
    g.check_pair(i, j)?;
    let members = g
        .edges
        .iter()
        .filter(|e| e.contains(i) && !e.contains(j))
        .map(|e| e.without(i))
        .filter(|a| !g.contains(a.with(j)))
        .collect();
    Ok(LinkSet::new(g.r - 1, members))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: &[Vertex]) -> Edge {
        Edge::new(v).unwrap()
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 3), 10);
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(64, 32), 1_832_624_140_942_590_534);
        for n in 1..=64u64 {
            for k in 1..=n {
                assert_eq!(
                    binomial(n, k) as u128,
                    binomial(n - 1, k - 1) as u128 + binomial(n - 1, k) as u128
                );
            }
        }
    }

    #[test]
    fn colex_examples() {
        assert_eq!(
            colex_compare(e(&[2, 4, 6]), e(&[1, 5, 6])),
            Ok(Ordering::Less)
        );
        assert_eq!(
            colex_compare(e(&[1, 2, 3]), e(&[1, 2, 3])),
            Ok(Ordering::Equal)
        );
        assert_eq!(
            colex_compare(e(&[1, 2, 4]), e(&[1, 3, 4])),
            Ok(Ordering::Less)
        );
        assert!(colex_compare(e(&[1, 2]), e(&[1, 2, 3])).is_err());

        assert_eq!(colex_rank(e(&[1, 2, 3])), 0);
        assert_eq!(colex_rank(e(&[2, 3, 4])), 3);
        assert_eq!(colex_rank(e(&[1, 2, 6])), 10);

        assert_eq!(colex_unrank(3, 0).unwrap(), e(&[1, 2, 3]));
        assert_eq!(colex_unrank(3, 9).unwrap(), e(&[3, 4, 5]));
        assert_eq!(colex_unrank(3, 16).unwrap(), e(&[1, 5, 6]));
    }

    #[test]
    fn listing_matches_printed_colex_sequence() {
        let listing =
            "123 124 134 234 125 135 235 145 245 345 126 136 236 146 246 346 156 256 356 456 127";
        for (k, word) in listing.split(' ').enumerate() {
            let vs: Vec<Vertex> = word.chars().map(|c| c.to_digit(10).unwrap()).collect();
            assert_eq!(colex_unrank(3, k as u64).unwrap(), e(&vs), "position {k}");
            assert_eq!(colex_rank(e(&vs)), k as u64);
        }
    }

    #[test]
    fn unrank_rejects_vertices_past_64() {
        assert!(colex_unrank(2, binomial(64, 2)).is_err());
        assert_eq!(colex_unrank(2, binomial(64, 2) - 1).unwrap(), e(&[63, 64]));
    }

    #[test]
    fn colex_graphs_and_complete_graphs() {
        let g = colex_graph(3, 4).unwrap();
        assert_eq!(g, complete_graph(4, 3).unwrap());
        let g = colex_graph(3, 1).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges(), &[e(&[1, 2, 3])]);
        let g = colex_graph(3, 11).unwrap();
        assert_eq!(g.n(), 6);
        let mut expected: Vec<Edge> = complete_graph(5, 3).unwrap().edges().to_vec();
        expected.push(e(&[1, 2, 6]));
        assert_eq!(g.edges(), expected.as_slice());

        assert_eq!(complete_graph(4, 3).unwrap().edge_count(), 4);
        assert_eq!(complete_graph(5, 3).unwrap().edge_count(), 10);
        assert_eq!(complete_graph(3, 3).unwrap().edges(), &[e(&[1, 2, 3])]);
        assert!(colex_graph(3, 0).is_err());
    }

    #[test]
    fn colex_graph_prefixes_are_complete_graphs() {
        for r in 2..=3 {
            for t in r..=12 {
                let m = binomial(t as u64, r as u64);
                assert_eq!(colex_graph(r, m).unwrap(), complete_graph(t, r).unwrap());
            }
        }
    }

    #[test]
    fn hypergraph_validation() {
        assert!(matches!(
            Hypergraph::from_lists(3, 4, &[[1, 2, 3], [1, 2, 3]]),
            Err(Error::DuplicateEdge(_))
        ));
        assert!(matches!(
            Hypergraph::from_lists(3, 4, &[[1, 2, 5]]),
            Err(Error::VertexOutOfRange { vertex: 5, n: 4 })
        ));
        assert!(matches!(
            Hypergraph::from_lists(3, 4, &[vec![1, 2]]),
            Err(Error::ArityMismatch { .. })
        ));
        assert!(Hypergraph::empty(3, 65).is_err());
        assert!(Edge::new(&[0, 1]).is_err());
        assert!(Edge::new(&[2, 1]).is_err());
    }

    #[test]
    fn vertex_links() {
        let k4 = complete_graph(4, 3).unwrap();
        let link = vertex_link(&k4, 4).unwrap();
        assert_eq!(link.members(), &[e(&[1, 2]), e(&[1, 3]), e(&[2, 3])]);
        assert_eq!(link.arity(), 2);

        let single = Hypergraph::from_lists(3, 4, &[[1, 2, 3]]).unwrap();
        assert!(vertex_link(&single, 4).unwrap().is_empty());
        assert!(vertex_link(&single, 5).is_err());
        assert_eq!(vertex_link_complement(&single, 4).unwrap().len(), 3);

        let c11 = colex_graph(3, 11).unwrap();
        assert_eq!(vertex_link(&c11, 6).unwrap().members(), &[e(&[1, 2])]);
    }

    #[test]
    fn pair_links() {
        let k5 = complete_graph(5, 3).unwrap();
        let link = pair_link(&k5, 4, 5).unwrap();
        assert_eq!(link.members(), &[e(&[1]), e(&[2]), e(&[3])]);

        let c11 = colex_graph(3, 11).unwrap();
        assert!(pair_link(&c11, 5, 6).unwrap().is_empty());
        assert_eq!(pair_link(&c11, 1, 6).unwrap().members(), &[e(&[2])]);
        assert_eq!(pair_link(&c11, 6, 1).unwrap().members(), &[e(&[2])]);
        assert!(matches!(pair_link(&c11, 2, 2), Err(Error::SameVertex(2))));
        assert!(pair_link(&c11, 1, 7).is_err());

        // r = 2: the pair link is {∅} exactly when ij is an edge
        let p = Hypergraph::from_lists(2, 3, &[[1, 2]]).unwrap();
        assert_eq!(pair_link(&p, 1, 2).unwrap().members(), &[Edge::EMPTY]);
        assert!(pair_link(&p, 1, 3).unwrap().is_empty());
        assert_eq!(
            pair_link_complement(&p, 1, 3).unwrap().members(),
            &[Edge::EMPTY]
        );
    }

    #[test]
    fn difference_links() {
        let g = Hypergraph::from_lists(3, 4, &[[1, 2, 3], [1, 2, 4]]).unwrap();
        assert!(difference_link(&g, 3, 4).unwrap().is_empty());
        let g = Hypergraph::from_lists(3, 4, &[[1, 2, 3]]).unwrap();
        assert_eq!(difference_link(&g, 3, 4).unwrap().members(), &[e(&[1, 2])]);
        assert!(difference_link(&g, 4, 3).unwrap().is_empty());
    }

    #[test]
    fn subsets_enumeration() {
        let all: Vec<Edge> = subsets(ground_set(5), 3).collect();
        assert_eq!(all.len(), 10);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(
            subsets(ground_set(3), 0).collect::<Vec<_>>(),
            vec![Edge::EMPTY]
        );
        assert_eq!(subsets(ground_set(3), 4).count(), 0);
        assert_eq!(subsets(ground_set(64), 1).count(), 64);
        assert_eq!(subsets(ground_set(64), 64).count(), 1);
        let sparse = e(&[2, 5, 9]);
        let pairs: Vec<Edge> = subsets(sparse, 2).collect();
        assert_eq!(pairs, vec![e(&[2, 5]), e(&[2, 9]), e(&[5, 9])]);
    }
}
