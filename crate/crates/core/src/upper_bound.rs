//! Upper bounds: round the relaxation's `x` to an ordering, then improve it
//! by simulated annealing with insertion moves.
//!
//! The annealing schedule and neighbourhood are this crate's own defaults.

use nalgebra::DMatrix;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ordering::{cutwidth_of_ordering, pair_count, pair_index, position_cuts, Permutation};
use crate::rng::{self, tags};

/// Relative positions `p_i = Σ_{j>i} (1 − x_ij) + Σ_{j<i} x_ji` read from
/// row 0 of the lifted matrix.
pub fn relative_positions(xbar: &DMatrix<f64>, n: usize) -> Result<Vec<f64>> {
    let m = pair_count(n);
    if xbar.nrows() != m + 1 || xbar.ncols() != m + 1 {
        return Err(Error::Dimension { expected: m + 1, got: xbar.nrows() });
    }
    let x = |i: usize, j: usize| xbar[(0, pair_index(i, j, n) + 1)];
    Ok((0..n)
        .map(|i| (i + 1..n).map(|j| 1.0 - x(i, j)).sum::<f64>() + (0..i).map(|j| x(j, i)).sum::<f64>())
        .collect())
}

/// Positions closer than this compare equal, so rounding noise in `x` does
/// not decide ties.
const POSITION_GRID: f64 = 1e-9;

/// Sorts vertices by relative position, ties by vertex id.
pub fn round_to_ordering(xbar: &DMatrix<f64>, n: usize) -> Result<Permutation> {
    let p = relative_positions(xbar, n)?;
    let key: Vec<i64> = p.iter().map(|v| (v / POSITION_GRID).round() as i64).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (key[v], v));
    Permutation::from_order(&order)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnealParams {
    pub t0: f64,
    pub cooling: f64,
    /// Move evaluations; `None` means `50 n²`.
    pub budget: Option<usize>,
    /// Independent runs from the rounded ordering; the best wins, ties going
    /// to the lowest run index.
    pub restarts: usize,
}

impl Default for AnnealParams {
    fn default() -> Self {
        AnnealParams { t0: 2.0, cooling: 0.98, budget: None, restarts: 1 }
    }
}

impl AnnealParams {
    pub fn budget_for(&self, n: usize) -> usize {
        self.budget.unwrap_or(50 * n * n)
    }
}

/// Ordering with its gap cuts kept up to date under insertion moves.
struct Layout<'g> {
    graph: &'g Graph,
    order: Vec<usize>,
    pos: Vec<usize>,
    /// `cuts[k]`: edges between positions `≤ k` and `> k`, `k < n − 1`.
    cuts: Vec<usize>,
    /// Scratch: neighbours of the moving vertex at positions `< t`.
    before: Vec<usize>,
    fresh: Vec<usize>,
}

impl<'g> Layout<'g> {
    fn new(graph: &'g Graph, perm: &Permutation) -> Self {
        let n = graph.n();
        let mut cuts = position_cuts(graph, perm);
        cuts.truncate(n.saturating_sub(1));
        Layout {
            graph,
            order: perm.order(),
            pos: perm.positions().to_vec(),
            cuts,
            before: vec![0; n + 1],
            fresh: Vec::with_capacity(n),
        }
    }

    fn width(&self) -> usize {
        self.cuts.iter().copied().max().unwrap_or(0)
    }

    /// Width after moving the vertex at position `a` to position `b`; the
    /// changed cuts are left in `fresh`.
    fn evaluate(&mut self, a: usize, b: usize) -> usize {
        let n = self.order.len();
        let v = self.order[a];
        let deg = self.graph.degree(v);
        self.before.iter_mut().for_each(|c| *c = 0);
        for &u in self.graph.neighbors(v) {
            self.before[self.pos[u] + 1] += 1;
        }
        for t in 1..=n {
            self.before[t] += self.before[t - 1];
        }
        self.fresh.clear();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        for k in lo..hi {
            let value = if a < b {
                // Prefix 0..=k is the old prefix 0..=k+1 without v.
                let inside = self.before[k + 2];
                self.old_cut(k + 1) + 2 * inside - deg
            } else {
                // Prefix 0..=k is the old prefix 0..k plus v.
                let inside = self.before[k];
                self.old_cut_before(k) + deg - 2 * inside
            };
            self.fresh.push(value);
        }
        let mut width = 0;
        for (k, &c) in self.cuts.iter().enumerate() {
            width = width.max(if k >= lo && k < hi { self.fresh[k - lo] } else { c });
        }
        width
    }

    /// Old cut after position `k` (`0` past the end).
    fn old_cut(&self, k: usize) -> usize {
        self.cuts.get(k).copied().unwrap_or(0)
    }

    /// Old cut of the prefix `0..k` (`0` for the empty prefix).
    fn old_cut_before(&self, k: usize) -> usize {
        if k == 0 { 0 } else { self.cuts[k - 1] }
    }

    fn apply(&mut self, a: usize, b: usize) {
        let v = self.order.remove(a);
        self.order.insert(b, v);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        for p in lo..=hi {
            self.pos[self.order[p]] = p;
        }
        for (offset, &c) in self.fresh.iter().enumerate() {
            self.cuts[lo + offset] = c;
        }
    }

    fn permutation(&self) -> Permutation {
        Permutation::from_positions(self.pos.clone()).expect("layout keeps a permutation")
    }
}

/// Annealing over orderings from `start`; returns the best ordering seen.
pub fn improve_sa(graph: &Graph, start: &Permutation, params: &AnnealParams, seed: u64) -> Result<Permutation> {
    let n = graph.n();
    if start.n() != n {
        return Err(Error::Dimension { expected: n, got: start.n() });
    }
    if n < 3 {
        return Ok(start.clone());
    }
    let mut rng = rng::stream(seed, tags::UPPER_BOUND, n as u64);
    let mut layout = Layout::new(graph, start);
    let mut current = layout.width();
    let mut best = current;
    let mut best_perm = start.clone();
    let mut temperature = params.t0;
    let mut accepted = 0usize;
    for _ in 0..params.budget_for(n) {
        if best == 0 {
            break;
        }
        let a = rng.random_range(0..n);
        let mut b = rng.random_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        let width = layout.evaluate(a, b);
        let delta = width as f64 - current as f64;
        if delta <= 0.0 || rng.random::<f64>() < (-delta / temperature).exp() {
            layout.apply(a, b);
            current = width;
            accepted += 1;
            if accepted % n == 0 {
                temperature *= params.cooling;
            }
            if current < best {
                best = current;
                best_perm = layout.permutation();
            }
        }
    }
    Ok(best_perm)
}

#[derive(Clone, Debug, PartialEq)]
pub struct UpperBound {
    pub value: usize,
    pub ordering: Permutation,
    /// Cutwidth of the rounded ordering before annealing.
    pub rounded_value: usize,
}

pub fn compute_upper_bound(graph: &Graph, xbar: &DMatrix<f64>, params: &AnnealParams, seed: u64) -> Result<UpperBound> {
    let rounded = round_to_ordering(xbar, graph.n())?;
    let rounded_value = cutwidth_of_ordering(graph, &rounded);
    let mut ordering = rounded.clone();
    let mut value = rounded_value;
    for run in 0..params.restarts.max(1) {
        // Run 0 keeps the caller's seed so a single run is unaffected by restarts.
        let run_seed = if run == 0 { seed } else { rng::derive_seed(seed, tags::UPPER_BOUND_RESTART, run as u64) };
        let candidate = improve_sa(graph, &rounded, params, run_seed)?;
        let width = cutwidth_of_ordering(graph, &candidate);
        if width < value || run == 0 {
            ordering = candidate;
            value = width;
        }
    }
    debug_assert!(value <= rounded_value);
    Ok(UpperBound { value, ordering, rounded_value })
}
