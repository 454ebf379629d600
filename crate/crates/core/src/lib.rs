//! Lagrangians of uniform hypergraphs.
//!
//! The Lagrangian of an `r`-graph `G` on `[n]` is the maximum of
//! `λ(G, x) = Σ_{e ∈ E} Π_{v ∈ e} x_v` over the standard simplex. This crate
//! provides the combinatorial substrate (colex order, links, left-compressed
//! families, cliques), a certified simplex optimizer for `λ(G)`, and
//! desk-scale verifiers for clique/Lagrangian bounds on 3-graphs.

pub mod edge_list;
pub mod error;
pub mod hypergraph;
pub mod lagrangian;
pub mod structure;
pub mod theorems;

pub use error::{Error, Result};
pub use hypergraph::{Edge, Hypergraph, LinkSet, Vertex};
