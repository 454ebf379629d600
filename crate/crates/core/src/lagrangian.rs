//! The Lagrangian `λ(G) = max { λ(G, x) : x ∈ S }` and its optimality certificates.
//!
//! `λ(G)` is computed by multi-start growth-transform ascent: the update
//! `x_i <- x_i · ∂_i λ(G, x) / (r · λ(G, x))` maps the simplex to itself and
//! never decreases a homogeneous form with nonnegative coefficients. Stalls on a
//! face (a zero-weight vertex that would like to grow) are escaped with a
//! projected-gradient step, and the final point is polished by Newton's method
//! on the KKT system of its support. Closed forms are used for 2-graphs
//! (via the clique number) and for complete graphs.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{
    binomial, difference_link, pair_link, vertex_link, Edge, Hypergraph, LinkSet, Vertex,
};
use crate::structure::{clique_number, is_left_compressed, maximum_clique, maximum_cliques};

/// Absolute tolerance on `Σ x_i = 1`.
pub const FEASIBILITY_TOL: f64 = 1e-12;

/// Per-iteration slack allowed before a decrease counts as a monotonicity failure.
pub const MONOTONE_SLACK: f64 = 1e-14;

static MONOTONICITY_VIOLATIONS: AtomicU64 = AtomicU64::new(0);

/// Number of growth-transform steps, process-wide, that decreased the objective
/// by more than [`MONOTONE_SLACK`].
pub fn monotonicity_violations() -> u64 {
    MONOTONICITY_VIOLATIONS.load(AtomicOrdering::Relaxed)
}

/// Neumaier's compensated sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::default();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// A point of the standard simplex; entry `i - 1` is the weight of vertex `i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Weighting(Vec<f64>);

impl Weighting {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if let Some((idx, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w >= 0.0))
        {
            return Err(Error::InfeasibleWeighting(format!(
                "weight of vertex {} is {w}",
                idx + 1
            )));
        }
        let total: f64 = weights.iter().copied().collect::<CompensatedSum>().total();
        if (total - 1.0).abs() > FEASIBILITY_TOL {
            return Err(Error::InfeasibleWeighting(format!(
                "weights sum to {total}"
            )));
        }
        Ok(Weighting(weights))
    }

    pub fn uniform(n: usize) -> Self {
        Weighting(vec![1.0 / n as f64; n])
    }

    /// Uniform on the vertices of `set`, zero elsewhere on `[n]`.
    pub fn uniform_on(set: Edge, n: usize) -> Self {
        let k = set.len() as f64;
        Weighting(
            (1..=n as Vertex)
                .map(|v| if set.contains(v) { 1.0 / k } else { 0.0 })
                .collect(),
        )
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self, v: Vertex) -> f64 {
        self.0[v as usize - 1]
    }

    /// Vertices with strictly positive weight.
    pub fn support(&self) -> Edge {
        support_of(&self.0)
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

fn support_of(x: &[f64]) -> Edge {
    let mut mask = 0u64;
    for (idx, &w) in x.iter().enumerate() {
        if w > 0.0 {
            mask |= 1 << idx;
        }
    }
    Edge::from_mask(mask)
}

fn product(e: Edge, x: &[f64]) -> f64 {
    e.vertices().map(|v| x[v as usize - 1]).product()
}

/// `λ(F, x)` for an arbitrary family of vertex sets.
pub fn family_value(members: &[Edge], x: &[f64]) -> f64 {
    members
        .iter()
        .map(|&e| product(e, x))
        .collect::<CompensatedSum>()
        .total()
}

impl LinkSet {
    /// `λ(L, x) = Σ_{A ∈ L} Π_{v ∈ A} x_v`; the empty set contributes 1.
    pub fn value(&self, x: &Weighting) -> f64 {
        family_value(self.members(), x.as_slice())
    }
}

fn check_length(g: &Hypergraph, x: &Weighting) -> Result<()> {
    if x.len() < g.n() {
        return Err(Error::InfeasibleWeighting(format!(
            "{} weights for {} vertices",
            x.len(),
            g.n()
        )));
    }
    Ok(())
}

pub(crate) fn objective(g: &Hypergraph, x: &[f64]) -> f64 {
    family_value(g.edges(), x)
}

/// `λ(G, x)`.
pub fn evaluate(g: &Hypergraph, x: &Weighting) -> Result<f64> {
    check_length(g, x)?;
    Ok(objective(g, x.as_slice()))
}

/// Exact `λ(G, x)` for rational weights.
pub fn evaluate_exact(g: &Hypergraph, x: &[BigRational]) -> Result<BigRational> {
    if x.len() < g.n() {
        return Err(Error::InfeasibleWeighting(format!(
            "{} weights for {} vertices",
            x.len(),
            g.n()
        )));
    }
    let mut total = BigRational::zero();
    for e in g.edges() {
        let mut p = BigRational::from_integer(BigInt::from(1));
        for v in e.vertices() {
            p *= &x[v as usize - 1];
        }
        total += p;
    }
    Ok(total)
}

/// `λ(E_i, x)`, which equals `∂λ(G, x)/∂x_i`.
pub fn link_value(g: &Hypergraph, i: Vertex, x: &Weighting) -> Result<f64> {
    check_length(g, x)?;
    Ok(vertex_link(g, i)?.value(x))
}

/// All partial derivatives `∂_i λ(G, x)`, indexed by `i - 1`.
pub(crate) fn gradient(g: &Hypergraph, x: &[f64]) -> Vec<f64> {
    let mut acc = vec![CompensatedSum::default(); x.len()];
    let mut verts = [0usize; 64];
    for e in g.edges() {
        let k = e.len();
        for (slot, v) in verts.iter_mut().zip(e.vertices()) {
            *slot = v as usize - 1;
        }
        for a in 0..k {
            let p: f64 = (0..k).filter(|&b| b != a).map(|b| x[verts[b]]).product();
            acc[verts[a]].add(p);
        }
    }
    acc.into_iter().map(CompensatedSum::total).collect()
}

/// Second derivatives restricted to `support` (`λ(E_ij, x)` off the diagonal, zero on it).
fn hessian(g: &Hypergraph, x: &[f64], support: &[usize]) -> DMatrix<f64> {
    let k = support.len();
    let mut pos = vec![usize::MAX; x.len()];
    for (p, &v) in support.iter().enumerate() {
        pos[v] = p;
    }
    let mut h = DMatrix::zeros(k, k);
    let mut verts = [0usize; 64];
    for e in g.edges() {
        let len = e.len();
        for (slot, v) in verts.iter_mut().zip(e.vertices()) {
            *slot = v as usize - 1;
        }
        for a in 0..len {
            for b in (a + 1)..len {
                let (pa, pb) = (pos[verts[a]], pos[verts[b]]);
                if pa == usize::MAX || pb == usize::MAX {
                    continue;
                }
                let p: f64 = (0..len)
                    .filter(|&c| c != a && c != b)
                    .map(|c| x[verts[c]])
                    .product();
                h[(pa, pb)] += p;
                h[(pb, pa)] += p;
            }
        }
    }
    h
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    Ascent,
    Refined,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::ClosedForm => "closed-form",
            Method::Ascent => "ascent",
            Method::Refined => "refined",
        })
    }
}

/// Outcome of a maximization of `λ(G, ·)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OptResult {
    pub value: f64,
    pub weighting: Weighting,
    pub support_size: usize,
    /// `max_{i ∈ support} |∂_i λ(G, x) - r·value|`.
    pub kkt_residual: f64,
    /// `max(0, max_{i ∉ support} ∂_i λ(G, x) - r·value)`; zero at a KKT point.
    pub outside_excess: f64,
    /// Every pair of supported vertices lies in a common edge.
    pub edge_cover_ok: bool,
    pub method: Method,
    pub iterations: usize,
    /// Zero objective with zero gradient: no ascent direction exists.
    pub degenerate: bool,
}

/// Serialized form of an [`OptResult`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptRecord {
    pub value: f64,
    pub weights: Vec<f64>,
    pub support: Vec<Vertex>,
    pub kkt_residual: f64,
    pub edge_cover_ok: bool,
    pub method: Method,
    pub iterations: usize,
}

impl OptResult {
    pub fn support(&self) -> Edge {
        if self.degenerate {
            Edge::EMPTY
        } else {
            self.weighting.support()
        }
    }

    pub fn record(&self) -> OptRecord {
        OptRecord {
            value: self.value,
            weights: self.weighting.as_slice().to_vec(),
            support: self.support().to_vec(),
            kkt_residual: self.kkt_residual,
            edge_cover_ok: self.edge_cover_ok,
            method: self.method,
            iterations: self.iterations,
        }
    }

    /// Value plus the KKT-derived slack used for strict-inequality verdicts.
    pub fn upper_estimate(&self) -> f64 {
        self.value + self.kkt_residual + self.outside_excess
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AscentOptions {
    pub max_iters: usize,
    /// Stop when one growth-transform step gains less than this.
    pub tol: f64,
}

impl Default for AscentOptions {
    fn default() -> Self {
        AscentOptions {
            max_iters: 200_000,
            tol: 1e-12,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LagrangianOptions {
    pub ascent: AscentOptions,
    pub random_starts: usize,
    pub seed: u64,
    /// Values within this are treated as equal when comparing candidate optima.
    pub value_tol: f64,
    /// Weights below this are zeroed before certification.
    pub trim: f64,
    pub use_closed_forms: bool,
    /// Cap on the number of maximum cliques used as starting points.
    pub max_clique_starts: usize,
}

impl Default for LagrangianOptions {
    fn default() -> Self {
        LagrangianOptions {
            ascent: AscentOptions::default(),
            random_starts: 4,
            seed: 0,
            value_tol: 1e-9,
            trim: 1e-13,
            use_closed_forms: true,
            max_clique_starts: 32,
        }
    }
}

/// Euclidean projection onto `{y : Σ y = 1, y >= 0, y_j = 0 off allowed}`.
fn project_to_simplex(v: &[f64], allowed: u64) -> Vec<f64> {
    let mut vals: Vec<f64> = (0..v.len())
        .filter(|&i| allowed >> i & 1 == 1)
        .map(|i| v[i])
        .collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (k, &u) in vals.iter().enumerate() {
        cumulative += u;
        let candidate = (cumulative - 1.0) / (k + 1) as f64;
        if u - candidate > 0.0 {
            theta = candidate;
        }
    }
    let mut out: Vec<f64> = (0..v.len())
        .map(|i| {
            if allowed >> i & 1 == 1 {
                (v[i] - theta).max(0.0)
            } else {
                0.0
            }
        })
        .collect();
    normalize(&mut out);
    out
}

fn normalize(x: &mut [f64]) {
    let total: f64 = x.iter().copied().collect::<CompensatedSum>().total();
    if total > 0.0 {
        for w in x.iter_mut() {
            *w /= total;
        }
    }
}

fn kkt_measures(g: &Hypergraph, x: &[f64], value: f64) -> (f64, f64) {
    let grad = gradient(g, x);
    let target = g.r() as f64 * value;
    let mut residual: f64 = 0.0;
    let mut excess: f64 = 0.0;
    for (i, &d) in grad.iter().enumerate().take(g.n()) {
        if x[i] > 0.0 {
            residual = residual.max((d - target).abs());
        } else {
            excess = excess.max(d - target);
        }
    }
    (residual, excess)
}

/// Pairs of supported vertices that share no edge.
fn uncovered_pair(g: &Hypergraph, support: Edge) -> Option<(Vertex, Vertex)> {
    let mut covered = vec![0u64; 65];
    for e in g.edges() {
        for v in e.vertices() {
            covered[v as usize] |= e.mask();
        }
    }
    for i in support.vertices() {
        let missing = support.mask() & !covered[i as usize] & !(1u64 << (i - 1));
        if missing != 0 {
            let j = missing.trailing_zeros() + 1;
            return Some((i.min(j), i.max(j)));
        }
    }
    None
}

fn finish(g: &Hypergraph, x: Vec<f64>, method: Method, iterations: usize) -> OptResult {
    let value = objective(g, &x);
    let (kkt_residual, outside_excess) = kkt_measures(g, &x, value);
    let support = support_of(&x);
    OptResult {
        value,
        support_size: support.len(),
        kkt_residual,
        outside_excess: outside_excess.max(0.0),
        edge_cover_ok: uncovered_pair(g, support).is_none(),
        method,
        iterations,
        degenerate: false,
        weighting: Weighting(x),
    }
}

/// Re-scores a weighting of `g`, recomputing value and KKT measures.
pub fn reweigh(g: &Hypergraph, x: Vec<f64>, method: Method, iterations: usize) -> OptResult {
    finish(g, x, method, iterations)
}

fn ascend_masked(g: &Hypergraph, x0: &[f64], allowed: u64, opts: &AscentOptions) -> OptResult {
    const MAX_ESCAPES: usize = 64;
    let r = g.r() as f64;
    let mut x: Vec<f64> = x0.to_vec();
    let mut value = objective(g, &x);
    let mut iterations = 0;
    let mut escapes = 0;
    loop {
        while iterations < opts.max_iters && value > 0.0 {
            let grad = gradient(g, &x);
            let scale = r * value;
            let mut next: Vec<f64> = x.iter().zip(&grad).map(|(w, d)| w * d / scale).collect();
            normalize(&mut next);
            let next_value = objective(g, &next);
            iterations += 1;
            if next_value < value - MONOTONE_SLACK {
                MONOTONICITY_VIOLATIONS.fetch_add(1, AtomicOrdering::Relaxed);
            }
            let gain = next_value - value;
            if gain >= 0.0 {
                x = next;
                value = next_value;
            }
            if gain < opts.tol {
                break;
            }
        }

        let grad = gradient(g, &x);
        let target = r * value;
        let escape_needed =
            (0..g.n()).any(|i| allowed >> i & 1 == 1 && x[i] == 0.0 && grad[i] > target + 1e-12);
        if value == 0.0 && grad.iter().all(|&d| d == 0.0) {
            let mut res = finish(g, x, Method::Ascent, iterations);
            res.degenerate = true;
            res.support_size = 0;
            return res;
        }
        if !(escape_needed || value == 0.0)
            || escapes >= MAX_ESCAPES
            || iterations >= opts.max_iters
        {
            break;
        }
        escapes += 1;
        match projected_gradient_step(g, &x, &grad, value, allowed) {
            Some((y, v)) => {
                x = y;
                value = v;
            }
            None => break,
        }
    }
    finish(g, x, Method::Ascent, iterations)
}

/// One projected-gradient step with backtracking; `None` if no step improves.
fn projected_gradient_step(
    g: &Hypergraph,
    x: &[f64],
    grad: &[f64],
    value: f64,
    allowed: u64,
) -> Option<(Vec<f64>, f64)> {
    let mut step = 1.0;
    for _ in 0..60 {
        let moved: Vec<f64> = x.iter().zip(grad).map(|(w, d)| w + step * d).collect();
        let y = project_to_simplex(&moved, allowed);
        let v = objective(g, &y);
        if v > value {
            return Some((y, v));
        }
        step *= 0.5;
    }
    None
}

/// Growth-transform ascent from a feasible start.
///
/// Returns the final point with its KKT residual over the support and the
/// edge-cover check on supported pairs.
pub fn ascend(g: &Hypergraph, x0: &Weighting, opts: &AscentOptions) -> Result<OptResult> {
    check_length(g, x0)?;
    let x: Vec<f64> = x0.as_slice()[..g.n()].to_vec();
    Ok(ascend_masked(g, &x, g.vertex_set().mask(), opts))
}

/// Newton's method on `∂_i λ = μ (i ∈ support), Σ x_i = 1`.
///
/// Accepted only if it stays interior to the support face, does not lower the
/// objective, and shrinks the KKT residual.
fn refine(g: &Hypergraph, res: OptResult) -> OptResult {
    if res.degenerate || res.support_size < 2 {
        return res;
    }
    let n = g.n();
    let support: Vec<usize> = (0..n).filter(|&i| res.weighting.0[i] > 0.0).collect();
    let k = support.len();
    let mut x = res.weighting.0.clone();
    let mut mu = g.r() as f64 * res.value;
    let mut improved = false;
    for _ in 0..30 {
        let grad = gradient(g, &x);
        let mut f = DVector::zeros(k + 1);
        for (p, &i) in support.iter().enumerate() {
            f[p] = grad[i] - mu;
        }
        f[k] = support.iter().map(|&i| x[i]).sum::<f64>() - 1.0;
        if f.amax() < 1e-16 {
            break;
        }
        let h = hessian(g, &x, &support);
        let mut jac = DMatrix::zeros(k + 1, k + 1);
        jac.view_mut((0, 0), (k, k)).copy_from(&h);
        for p in 0..k {
            jac[(p, k)] = -1.0;
            jac[(k, p)] = 1.0;
        }
        let Some(delta) = jac.lu().solve(&(-f)) else {
            break;
        };
        if !delta.iter().all(|d| d.is_finite()) {
            break;
        }
        let mut trial = x.clone();
        for (p, &i) in support.iter().enumerate() {
            trial[i] += delta[p];
        }
        if support.iter().any(|&i| trial[i] <= 0.0) {
            break;
        }
        normalize(&mut trial);
        x = trial;
        mu += delta[k];
        improved = true;
    }
    if !improved {
        return res;
    }
    let candidate = finish(g, x, Method::Refined, res.iterations);
    if candidate.value >= res.value - MONOTONE_SLACK && candidate.kkt_residual < res.kkt_residual {
        candidate
    } else {
        res
    }
}

fn trimmed(x: &[f64], trim: f64) -> Vec<f64> {
    let mut y: Vec<f64> = x.iter().map(|&w| if w < trim { 0.0 } else { w }).collect();
    normalize(&mut y);
    y
}

/// Total order used to pick among candidate optima: value (within `value_tol`),
/// then smaller support, then lexicographically larger weights.
fn better(a: &OptResult, b: &OptResult, value_tol: f64) -> bool {
    if (a.value - b.value).abs() > value_tol {
        return a.value > b.value;
    }
    if a.support_size != b.support_size {
        return a.support_size < b.support_size;
    }
    for (wa, wb) in a.weighting.as_slice().iter().zip(b.weighting.as_slice()) {
        match wa.total_cmp(wb) {
            Ordering::Equal => continue,
            ord => return ord == Ordering::Greater,
        }
    }
    false
}

fn select_best(results: Vec<OptResult>, value_tol: f64) -> OptResult {
    let top = results
        .iter()
        .map(|r| r.value)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut pool: Vec<OptResult> = results
        .into_iter()
        .filter(|r| r.value >= top - value_tol)
        .collect();
    let mut best = pool.swap_remove(0);
    for cand in pool {
        if better(&cand, &best, f64::INFINITY) {
            best = cand;
        }
    }
    best
}

/// Shrinks the support of an optimum while keeping its value.
///
/// Supported pairs not covered by an edge are merged (the objective is linear
/// along that exchange, so moving all weight to the steeper vertex cannot lose
/// value); then the smallest-weight vertex is dropped and the rest re-optimized
/// for as long as the value stays within `value_tol`.
pub fn minimize_support(g: &Hypergraph, res: OptResult, opts: &LagrangianOptions) -> OptResult {
    if res.degenerate || res.method == Method::ClosedForm {
        return res;
    }
    let mut current = {
        let x = trimmed(res.weighting.as_slice(), opts.trim);
        let mut out = finish(g, x, res.method, res.iterations);
        if out.value < res.value - opts.value_tol {
            out = res;
        }
        out
    };
    loop {
        let x = current.weighting.as_slice().to_vec();
        let support = support_of(&x);
        if let Some((i, j)) = uncovered_pair(g, support) {
            let grad = gradient(g, &x);
            let (keep, drop) = if grad[i as usize - 1] >= grad[j as usize - 1] {
                (i, j)
            } else {
                (j, i)
            };
            let mut y = x.clone();
            y[keep as usize - 1] += y[drop as usize - 1];
            y[drop as usize - 1] = 0.0;
            let allowed = support.without(drop).mask();
            let merged = refine(g, ascend_masked(g, &y, allowed, &opts.ascent));
            let merged = with_iterations(merged, current.iterations);
            current = trim_result(g, merged, opts.trim);
            continue;
        }
        if support.len() <= 1 {
            break;
        }
        let drop = support
            .vertices()
            .min_by(|&a, &b| {
                x[a as usize - 1]
                    .total_cmp(&x[b as usize - 1])
                    .then(b.cmp(&a))
            })
            .expect("nonempty support");
        let mut y = x.clone();
        y[drop as usize - 1] = 0.0;
        normalize(&mut y);
        let allowed = support.without(drop).mask();
        let cand = refine(g, ascend_masked(g, &y, allowed, &opts.ascent));
        let cand = trim_result(g, with_iterations(cand, current.iterations), opts.trim);
        if cand.value >= current.value - opts.value_tol && !cand.degenerate {
            current = cand;
        } else {
            break;
        }
    }
    current
}

fn with_iterations(mut res: OptResult, before: usize) -> OptResult {
    res.iterations += before;
    res
}

fn trim_result(g: &Hypergraph, res: OptResult, trim: f64) -> OptResult {
    if res.degenerate {
        return res;
    }
    let x = trimmed(res.weighting.as_slice(), trim);
    finish(g, x, res.method, res.iterations)
}

/// `C(t, r) / t^r`, the Lagrangian of `[t]^{(r)}`.
pub fn complete_lagrangian(t: usize, r: usize) -> Result<BigRational> {
    if t < r || r == 0 {
        return Err(Error::InvalidParameters(format!(
            "complete Lagrangian needs t >= r >= 1 (got t = {t}, r = {r})"
        )));
    }
    let num = BigInt::from(binomial(t as u64, r as u64));
    let den = BigInt::from(t).pow(r as u32);
    Ok(BigRational::new(num, den))
}

/// `(1/2)(1 - 1/ω(G))` for a 2-graph; zero when there are no edges.
pub fn motzkin_straus(g: &Hypergraph) -> Result<BigRational> {
    if g.r() != 2 {
        return Err(Error::InvalidParameters(format!(
            "Motzkin–Straus applies to 2-graphs (got r = {})",
            g.r()
        )));
    }
    let omega = clique_number(g) as i64;
    Ok(BigRational::new(
        BigInt::from(omega - 1),
        BigInt::from(2 * omega),
    ))
}

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn closed_form_result(g: &Hypergraph, set: Edge, value: &BigRational) -> OptResult {
    let x = Weighting::uniform_on(set, g.n()).into_vec();
    let mut res = finish(g, x, Method::ClosedForm, 0);
    res.value = to_f64(value);
    res
}

/// Starting points for multi-start ascent.
fn starting_points(g: &Hypergraph, opts: &LagrangianOptions) -> Vec<Vec<f64>> {
    let n = g.n();
    let mut starts = vec![Weighting::uniform(n).into_vec()];
    for clique in maximum_cliques(g, opts.max_clique_starts) {
        starts.push(Weighting::uniform_on(clique, n).into_vec());
    }
    for k in g.r()..n {
        starts.push(Weighting::uniform_on(crate::hypergraph::ground_set(k), n).into_vec());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.random_starts {
        let mut x: Vec<f64> = (0..n).map(|_| Exp1.sample(&mut rng)).collect();
        normalize(&mut x);
        starts.push(x);
    }
    starts
}

/// `λ(G)` with an optimal weighting of minimal support.
///
/// 2-graphs and graphs complete on their non-isolated vertices use closed forms
/// (unless disabled); everything else runs multi-start ascent from the uniform
/// point, every maximum clique, every initial segment `[k]`, and
/// `random_starts` Dirichlet points.
pub fn lagrangian(g: &Hypergraph, opts: &LagrangianOptions) -> OptResult {
    if g.is_empty() {
        let mut x = vec![0.0; g.n()];
        x[0] = 1.0;
        let mut res = finish(g, x, Method::ClosedForm, 0);
        res.degenerate = true;
        res.support_size = 0;
        return res;
    }
    if opts.use_closed_forms {
        if g.r() == 2 {
            let clique = maximum_clique(g);
            let value = motzkin_straus(g).expect("r = 2");
            return closed_form_result(g, clique, &value);
        }
        let touched = g.touched_vertices();
        if g.edge_count() as u64 == binomial(touched.len() as u64, g.r() as u64) {
            let value = complete_lagrangian(touched.len(), g.r()).expect("t >= r");
            return closed_form_result(g, touched, &value);
        }
    }
    let results: Vec<OptResult> = starting_points(g, opts)
        .iter()
        .map(|x0| refine(g, ascend_masked(g, x0, g.vertex_set().mask(), &opts.ascent)))
        .collect();
    let best = select_best(results, opts.value_tol);
    minimize_support(g, best, opts)
}

/// Optimality audit of a weighting.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub tol: f64,
    pub kkt_residual: f64,
    pub kkt_ok: bool,
    pub uncovered_pairs: Vec<(Vertex, Vertex)>,
    pub pair_cover_ok: bool,
    pub left_compressed: bool,
    /// `x_1 >= x_2 >= ... >= x_n` (within `tol`); only checked for left-compressed graphs.
    pub monotone_ok: Option<bool>,
    /// Largest `|x_j λ(E_ij) + λ(E_{i∖j}) - x_i λ(E_ij) - λ(E_{j∖i})|` over supported pairs.
    pub exchange_residual: f64,
    pub exchange_ok: bool,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.kkt_ok && self.pair_cover_ok && self.exchange_ok && self.monotone_ok.unwrap_or(true)
    }
}

/// Checks the first-order optimality conditions of `res` on `g`.
pub fn certify(g: &Hypergraph, res: &OptResult, tol: f64) -> Certificate {
    let x = res.weighting.as_slice();
    let value = objective(g, x);
    let (kkt_residual, _) = kkt_measures(g, x, value);
    let support = support_of(&x[..g.n()]);
    let mut uncovered_pairs = Vec::new();
    let mut exchange_residual: f64 = 0.0;
    let verts: Vec<Vertex> = support.vertices().collect();
    for (a, &i) in verts.iter().enumerate() {
        for &j in &verts[a + 1..] {
            if !g.edges().iter().any(|e| e.contains(i) && e.contains(j)) {
                uncovered_pairs.push((i, j));
            }
            let eij = pair_link(g, i, j)
                .expect("valid pair")
                .value(&res.weighting);
            let di = difference_link(g, i, j)
                .expect("valid pair")
                .value(&res.weighting);
            let dj = difference_link(g, j, i)
                .expect("valid pair")
                .value(&res.weighting);
            let lhs = x[j as usize - 1] * eij + di;
            let rhs = x[i as usize - 1] * eij + dj;
            exchange_residual = exchange_residual.max((lhs - rhs).abs());
        }
    }
    let left_compressed = is_left_compressed(g);
    let monotone_ok = left_compressed.then(|| x[..g.n()].windows(2).all(|w| w[0] >= w[1] - tol));
    Certificate {
        tol,
        kkt_residual,
        kkt_ok: kkt_residual <= tol,
        pair_cover_ok: uncovered_pairs.is_empty(),
        uncovered_pairs,
        left_compressed,
        monotone_ok,
        exchange_residual,
        exchange_ok: exchange_residual <= tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{colex_graph, complete_graph};

    fn w(v: &[f64]) -> Weighting {
        Weighting::new(v.to_vec()).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn weighting_validation() {
        assert!(Weighting::new(vec![0.5, 0.6]).is_err());
        assert!(Weighting::new(vec![1.5, -0.5]).is_err());
        assert!(Weighting::new(vec![f64::NAN, 1.0]).is_err());
        assert!(Weighting::new(vec![0.25; 4]).is_ok());
        let g = complete_graph(4, 3).unwrap();
        assert!(evaluate(&g, &w(&[0.5, 0.5])).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let g = Hypergraph::from_lists(3, 3, &[[1, 2, 3]]).unwrap();
        let third = 1.0 / 3.0;
        assert!((evaluate(&g, &w(&[third; 3])).unwrap() - 1.0 / 27.0).abs() < 1e-15);

        let k5 = complete_graph(5, 3).unwrap();
        assert!((evaluate(&k5, &Weighting::uniform(5)).unwrap() - 0.08).abs() < 1e-15);

        let c17 = colex_graph(3, 17).unwrap();
        let x = w(&[0.2, 0.2, 0.2, 0.2, 0.1, 0.1]);
        assert!((evaluate(&c17, &x).unwrap() - 0.082).abs() < 1e-15);
        // appended isolated vertices with zero weight change nothing
        let bigger = c17.with_vertex_count(8).unwrap();
        let x8 = w(&[0.2, 0.2, 0.2, 0.2, 0.1, 0.1, 0.0, 0.0]);
        assert_eq!(evaluate(&bigger, &x8).unwrap(), evaluate(&c17, &x).unwrap());
    }

    #[test]
    fn evaluate_exact_matches() {
        let c17 = colex_graph(3, 17).unwrap();
        let x = [q(1, 5), q(1, 5), q(1, 5), q(1, 5), q(1, 10), q(1, 10)];
        assert_eq!(evaluate_exact(&c17, &x).unwrap(), q(41, 500));
    }

    #[test]
    fn link_value_examples() {
        let g = Hypergraph::from_lists(3, 3, &[[1, 2, 3]]).unwrap();
        let x = w(&[0.5, 0.3, 0.2]);
        assert!((link_value(&g, 1, &x).unwrap() - 0.06).abs() < 1e-15);
        assert!(link_value(&g, 4, &x).is_err());

        for (t, r) in [(5, 3), (6, 2), (6, 4)] {
            let kt = complete_graph(t, r).unwrap();
            let x = Weighting::uniform(t);
            let expected =
                binomial(t as u64 - 1, r as u64 - 1) as f64 / (t as f64).powi(r as i32 - 1);
            for i in 1..=t as Vertex {
                assert!((link_value(&kt, i, &x).unwrap() - expected).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn gradient_agrees_with_link_values() {
        let g = colex_graph(3, 14).unwrap();
        let x = w(&[0.3, 0.2, 0.15, 0.15, 0.1, 0.1]);
        let grad = gradient(&g, x.as_slice());
        for i in 1..=6 {
            assert!((grad[i as usize - 1] - link_value(&g, i, &x).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn simplex_projection() {
        let p = project_to_simplex(&[0.5, 0.5, 0.5], 0b111);
        assert!(p.iter().all(|&v| (v - 1.0 / 3.0).abs() < 1e-15));
        let p = project_to_simplex(&[2.0, 0.0, 0.0], 0b111);
        assert_eq!(p, vec![1.0, 0.0, 0.0]);
        let p = project_to_simplex(&[0.9, 0.9, 5.0], 0b011);
        assert_eq!(p, vec![0.5, 0.5, 0.0]);
    }

    #[test]
    fn ascend_triangle_converges_to_barycenter() {
        let k3 = complete_graph(3, 2).unwrap();
        let res = ascend(&k3, &w(&[0.5, 0.3, 0.2]), &AscentOptions::default()).unwrap();
        assert!((res.value - 1.0 / 3.0).abs() < 1e-9);
        for &x in res.weighting.as_slice() {
            assert!((x - 1.0 / 3.0).abs() < 1e-6);
        }
    }

    #[test]
    fn ascend_complete_graph_is_immediately_stationary() {
        let k5 = complete_graph(5, 3).unwrap();
        let res = ascend(&k5, &Weighting::uniform(5), &AscentOptions::default()).unwrap();
        assert!((res.value - 0.08).abs() < 1e-15);
        assert!(res.kkt_residual < 1e-10);
        assert!(res.iterations <= 1);
        assert!(res.edge_cover_ok);
    }

    #[test]
    fn ascend_empty_graph_is_degenerate() {
        let g = Hypergraph::empty(3, 4).unwrap();
        let res = ascend(&g, &Weighting::uniform(4), &AscentOptions::default()).unwrap();
        assert_eq!(res.value, 0.0);
        assert!(res.degenerate);
        assert_eq!(res.support_size, 0);
        let res = lagrangian(&g, &LagrangianOptions::default());
        assert_eq!(res.value, 0.0);
    }

    #[test]
    fn ascend_escapes_a_face() {
        // all weight on the 123 face; vertex 4 is strictly better, growth can't revive it
        let g =
            Hypergraph::from_lists(3, 4, &[[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]]).unwrap();
        let x0 = w(&[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.0]);
        let res = ascend(&g, &x0, &AscentOptions::default()).unwrap();
        assert!((res.value - 0.0625).abs() < 1e-9, "{}", res.value);
    }

    #[test]
    fn closed_forms() {
        assert_eq!(complete_lagrangian(5, 3).unwrap(), q(2, 25));
        assert_eq!(complete_lagrangian(4, 3).unwrap(), q(1, 16));
        // (1/6)(t-3)(t-2)/(t-1)^2 at t = 6 equals λ([5]^(3))
        assert_eq!(q(3 * 4, 6 * 25), complete_lagrangian(5, 3).unwrap());
        for t in 3..30i64 {
            assert_eq!(
                complete_lagrangian(t as usize, 3).unwrap(),
                q((t - 1) * (t - 2), 6 * t * t)
            );
        }

        let k3 = complete_graph(3, 2).unwrap();
        assert_eq!(motzkin_straus(&k3).unwrap(), q(1, 3));
        let k2 = Hypergraph::from_lists(2, 2, &[[1, 2]]).unwrap();
        assert_eq!(motzkin_straus(&k2).unwrap(), q(1, 4));
        let c5 = Hypergraph::from_lists(2, 5, &[[1, 2], [2, 3], [3, 4], [4, 5], [1, 5]]).unwrap();
        assert_eq!(motzkin_straus(&c5).unwrap(), q(1, 4));
        assert_eq!(
            motzkin_straus(&Hypergraph::empty(2, 3).unwrap()).unwrap(),
            q(0, 1)
        );
        assert!(motzkin_straus(&complete_graph(4, 3).unwrap()).is_err());
    }

    #[test]
    fn lagrangian_dispatch() {
        let opts = LagrangianOptions::default();
        let k5 = complete_graph(5, 3).unwrap();
        let res = lagrangian(&k5, &opts);
        assert_eq!(res.method, Method::ClosedForm);
        assert!((res.value - 0.08).abs() < 1e-15);

        let numeric = LagrangianOptions {
            use_closed_forms: false,
            ..opts
        };
        let res = lagrangian(&k5, &numeric);
        assert!((res.value - 0.08).abs() < 1e-12);

        let k3 = complete_graph(3, 2).unwrap().with_vertex_count(5).unwrap();
        let res = lagrangian(&k3, &opts);
        assert_eq!(res.value, 1.0 / 3.0);
        assert_eq!(res.support(), Edge::new(&[1, 2, 3]).unwrap());

        for m in 10..=16 {
            let g = colex_graph(3, m).unwrap();
            let res = lagrangian(&g, &opts);
            assert!((res.value - 0.08).abs() < 1e-7, "m = {m}: {}", res.value);
        }
    }

    #[test]
    fn support_minimization() {
        let opts = LagrangianOptions {
            use_closed_forms: false,
            ..LagrangianOptions::default()
        };
        let k4 = complete_graph(4, 3).unwrap().with_vertex_count(5).unwrap();
        let padded = finish(&k4, vec![0.25, 0.25, 0.25, 0.25, 0.0], Method::Ascent, 0);
        let res = minimize_support(&k4, padded, &opts);
        assert_eq!(res.support_size, 4);
        assert!((res.value - 0.0625).abs() < 1e-15);

        let k3_plus = complete_graph(3, 2).unwrap().with_vertex_count(4).unwrap();
        let res = lagrangian(&k3_plus, &opts);
        assert_eq!(res.support(), Edge::new(&[1, 2, 3]).unwrap());
        assert!((res.value - 1.0 / 3.0).abs() < 1e-12);

        let two_triangles =
            Hypergraph::from_lists(2, 6, &[[1, 2], [1, 3], [2, 3], [4, 5], [4, 6], [5, 6]])
                .unwrap();
        // start spread over both triangles
        let spread = ascend(&two_triangles, &Weighting::uniform(6), &opts.ascent).unwrap();
        assert!((spread.value - 1.0 / 6.0).abs() < 1e-9);
        let res = minimize_support(&two_triangles, spread, &opts);
        assert_eq!(res.support_size, 3);
        assert!((res.value - 1.0 / 3.0).abs() < 1e-9, "{}", res.value);
        assert!(res.edge_cover_ok);
    }

    #[test]
    fn certify_examples() {
        let k5 = complete_graph(5, 3).unwrap();
        let res = lagrangian(&k5, &LagrangianOptions::default());
        let cert = certify(&k5, &res, 1e-10);
        assert!(cert.passed(), "{cert:?}");

        let pendant = Hypergraph::from_lists(2, 4, &[[1, 2], [1, 3], [2, 3], [3, 4]]).unwrap();
        let res = lagrangian(&pendant, &LagrangianOptions::default());
        let cert = certify(&pendant, &res, 1e-10);
        assert!(cert.pair_cover_ok);
        assert!(cert.kkt_ok);

        let c13 = colex_graph(3, 13).unwrap();
        let res = lagrangian(&c13, &LagrangianOptions::default());
        let cert = certify(&c13, &res, 1e-8);
        assert!(cert.left_compressed);
        assert_eq!(cert.monotone_ok, Some(true));
        assert!(cert.passed(), "{cert:?}");
    }
}
