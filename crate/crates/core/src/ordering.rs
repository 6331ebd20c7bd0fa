//! Vertex orderings, their 0/1 linear-ordering encoding, cutwidth evaluation
//! and exact small-instance solvers.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Number of unordered pairs, `C(n, 2)`.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Lexicographic 0-based rank of the pair `(i, j)`, `i < j < n`: rows grouped
/// by `i` ascending, then `j` ascending. Adding one gives the pair's row in
/// the lifted matrix.
///
/// Panics when `i >= j` or `j >= n`.
#[inline]
pub fn pair_index(i: usize, j: usize, n: usize) -> usize {
    assert!(i < j && j < n, "pair_index requires i < j < n, got ({i}, {j}, {n})");
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Inverse of [`pair_index`].
pub fn pair_of(index: usize, n: usize) -> (usize, usize) {
    assert!(index < pair_count(n), "pair rank {index} out of range for n = {n}");
    let mut i = 0;
    let mut start = 0;
    loop {
        let row = n - i - 1;
        if index < start + row {
            return (i, i + 1 + index - start);
        }
        start += row;
        i += 1;
    }
}

/// A bijection from vertices to positions `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    pos: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            pos: (0..n).collect(),
        }
    }

    /// `pos[v]` is the position of vertex `v`.
    pub fn from_positions(pos: Vec<usize>) -> Result<Self> {
        let n = pos.len();
        let mut seen = vec![false; n];
        for &p in &pos {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Contract(format!(
                    "positions {pos:?} are not a permutation of 0..{n}"
                )));
            }
        }
        Ok(Permutation { pos })
    }

    /// `order[k]` is the vertex placed at position `k`.
    pub fn from_order(order: &[usize]) -> Result<Self> {
        let n = order.len();
        let mut pos = vec![usize::MAX; n];
        for (k, &v) in order.iter().enumerate() {
            if v >= n || pos[v] != usize::MAX {
                return Err(Error::Contract(format!(
                    "order {order:?} is not a permutation of 0..{n}"
                )));
            }
            pos[v] = k;
        }
        Ok(Permutation { pos })
    }

    pub fn n(&self) -> usize {
        self.pos.len()
    }

    pub fn position(&self, v: usize) -> usize {
        self.pos[v]
    }

    pub fn positions(&self) -> &[usize] {
        &self.pos
    }

    /// Vertices listed by position.
    pub fn order(&self) -> Vec<usize> {
        let mut order = vec![0; self.pos.len()];
        for (v, &p) in self.pos.iter().enumerate() {
            order[p] = v;
        }
        order
    }

    pub fn reversed(&self) -> Self {
        let n = self.pos.len();
        Permutation {
            pos: self.pos.iter().map(|&p| n - 1 - p).collect(),
        }
    }
}

/// Real vector indexed by pairs `i < j`; for a permutation encoding,
/// `x_ij = 1` exactly when `i` precedes `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct LoVector {
    n: usize,
    x: Vec<f64>,
}

impl LoVector {
    pub fn new(n: usize, x: Vec<f64>) -> Result<Self> {
        if x.len() != pair_count(n) {
            return Err(Error::Dimension {
                expected: pair_count(n),
                got: x.len(),
            });
        }
        Ok(LoVector { n, x })
    }

    pub fn encode(perm: &Permutation) -> Self {
        let n = perm.n();
        let mut x = Vec::with_capacity(pair_count(n));
        for i in 0..n {
            for j in i + 1..n {
                x.push(if perm.position(i) < perm.position(j) { 1.0 } else { 0.0 });
            }
        }
        LoVector { n, x }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `x_ij` for `i < j`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.x[pair_index(i, j, self.n)]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.x
    }
}

/// Number of edges `{u, w}` with `π(u) ≤ π(v) < π(w)`.
pub fn cutwidth_of_vertex(graph: &Graph, perm: &Permutation, v: usize) -> usize {
    let pv = perm.position(v);
    graph
        .edges()
        .iter()
        .filter(|&&(a, b)| {
            let (pa, pb) = (perm.position(a), perm.position(b));
            pa.min(pb) <= pv && pv < pa.max(pb)
        })
        .count()
}

/// Cut sizes after each position: entry `k` counts edges between positions
/// `0..=k` and `k+1..n`. The last entry is always zero.
pub fn position_cuts(graph: &Graph, perm: &Permutation) -> Vec<usize> {
    let n = graph.n();
    let mut delta = vec![0i64; n + 1];
    for &(a, b) in graph.edges() {
        let (lo, hi) = {
            let (pa, pb) = (perm.position(a), perm.position(b));
            (pa.min(pb), pa.max(pb))
        };
        delta[lo] += 1;
        delta[hi] -= 1;
    }
    let mut running = 0i64;
    delta[..n]
        .iter()
        .map(|d| {
            running += d;
            running as usize
        })
        .collect()
}

/// Maximum vertex cutwidth under `perm`.
pub fn cutwidth_of_ordering(graph: &Graph, perm: &Permutation) -> usize {
    position_cuts(graph, perm).into_iter().max().unwrap_or(0)
}

/// Which closed-form expression of a vertex's cutwidth to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadraticForm {
    /// Six sums of products of `x` and `1 − x` factors.
    Products,
    /// The same expression expanded into constant, linear and quadratic
    /// parts; this is the form the relaxation is built from.
    Expanded,
}

/// Evaluates the quadratic cutwidth expression of vertex `v` at a (possibly
/// fractional) linear-ordering vector. On permutation encodings both forms
/// equal [`cutwidth_of_vertex`].
pub fn cutwidth_vertex_quadratic(graph: &Graph, x: &LoVector, v: usize, form: QuadraticForm) -> f64 {
    match form {
        QuadraticForm::Products => quadratic_products(graph, x, v),
        QuadraticForm::Expanded => quadratic_expanded(graph, x, v),
    }
}

fn quadratic_products(g: &Graph, x: &LoVector, v: usize) -> f64 {
    let n = g.n();
    let a = |u: usize, w: usize| g.a(u, w) as f64;
    let mut total = 0.0;
    for u in 0..v {
        for w in v + 1..n {
            total += a(u, w) * x.get(u, v) * x.get(v, w);
        }
    }
    for u in v + 1..n {
        for w in v + 1..n {
            if w != u {
                total += a(u, w) * (1.0 - x.get(v, u)) * x.get(v, w);
            }
        }
    }
    for u in 0..v {
        for w in 0..v {
            if w != u {
                total += a(u, w) * x.get(u, v) * (1.0 - x.get(w, v));
            }
        }
    }
    for u in v + 1..n {
        for w in 0..v {
            total += a(u, w) * (1.0 - x.get(v, u)) * (1.0 - x.get(w, v));
        }
    }
    for w in v + 1..n {
        total += a(v, w) * x.get(v, w);
    }
    for w in 0..v {
        total += a(v, w) * (1.0 - x.get(w, v));
    }
    total
}

fn quadratic_expanded(g: &Graph, x: &LoVector, v: usize) -> f64 {
    let n = g.n();
    let a = |u: usize, w: usize| g.a(u, w) as f64;
    let mut total = 0.0;
    for w in 0..v {
        for u in v..n {
            total += a(u, w);
        }
    }
    for w in v + 1..n {
        for u in v..n {
            if u != w {
                total += a(u, w) * x.get(v, w);
            }
        }
    }
    for u in 0..v {
        for w in 0..v {
            if w != u {
                total += a(u, w) * x.get(u, v);
            }
        }
    }
    for u in v + 1..n {
        for w in 0..v {
            total -= a(u, w) * (x.get(v, u) + x.get(w, v));
        }
    }
    for w in 0..v {
        total -= a(v, w) * x.get(w, v);
    }
    for u in 0..v {
        for w in v + 1..n {
            total += 2.0 * a(u, w) * x.get(u, v) * x.get(v, w);
        }
    }
    for u in v + 1..n {
        for w in v + 1..n {
            if w != u {
                total -= a(u, w) * x.get(v, u) * x.get(v, w);
            }
        }
    }
    for u in 0..v {
        for w in 0..v {
            if w != u {
                total -= a(u, w) * x.get(u, v) * x.get(w, v);
            }
        }
    }
    total
}

pub const BRUTE_FORCE_MAX_N: usize = 10;
pub const SUBSET_DP_MAX_N: usize = 24;

/// Exact cutwidth by enumerating all `n!` orderings (Heap's algorithm).
/// Returns the first optimal ordering met.
pub fn exact_cutwidth_bruteforce(graph: &Graph) -> Result<(usize, Permutation)> {
    let n = graph.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::TooLarge {
            n,
            max: BRUTE_FORCE_MAX_N,
            what: "brute-force enumeration",
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut pos: Vec<usize> = (0..n).collect();
    let eval = |pos: &[usize]| {
        let mut delta = [0i32; BRUTE_FORCE_MAX_N + 1];
        for &(a, b) in graph.edges() {
            let (pa, pb) = (pos[a], pos[b]);
            delta[pa.min(pb)] += 1;
            delta[pa.max(pb)] -= 1;
        }
        let mut run = 0;
        let mut best = 0;
        for d in &delta[..n] {
            run += d;
            best = best.max(run);
        }
        best as usize
    };
    let mut best = eval(&pos);
    let mut best_pos = pos.clone();
    let mut c = vec![0usize; n];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            let k = if i % 2 == 0 { 0 } else { c[i] };
            order.swap(k, i);
            pos[order[k]] = k;
            pos[order[i]] = i;
            let value = eval(&pos);
            if value < best {
                best = value;
                best_pos.copy_from_slice(&pos);
            }
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok((best, Permutation { pos: best_pos }))
}

/// Exact cutwidth by dynamic programming over vertex prefix sets:
/// `f(S) = max(cut(S), min_{v ∈ S} f(S ∖ {v}))`, `O(2^n · n)` time.
pub fn exact_cutwidth_subset_dp(graph: &Graph) -> Result<usize> {
    subset_dp(graph).map(|(value, _)| value)
}

/// Like [`exact_cutwidth_subset_dp`] but also reconstructs an optimal
/// ordering.
pub fn exact_cutwidth_subset_dp_with_order(graph: &Graph) -> Result<(usize, Permutation)> {
    let (value, table) = subset_dp(graph)?;
    let n = graph.n();
    let mut order = vec![0; n];
    let mut set: usize = (1usize << n) - 1;
    for slot in (0..n).rev() {
        let v = (0..n)
            .filter(|&v| set & (1 << v) != 0)
            .min_by_key(|&v| (table[set ^ (1 << v)], v))
            .expect("non-empty set");
        order[slot] = v;
        set ^= 1 << v;
    }
    Ok((value, Permutation::from_order(&order)?))
}

fn subset_dp(graph: &Graph) -> Result<(usize, Vec<u8>)> {
    let n = graph.n();
    if n > SUBSET_DP_MAX_N {
        return Err(Error::TooLarge {
            n,
            max: SUBSET_DP_MAX_N,
            what: "subset dynamic programming",
        });
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| graph.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect();
    let full = 1usize << n;
    // cut(S) <= n^2/4 <= 144 and so is every f value, so bytes suffice.
    let mut cut = vec![0u8; full];
    let mut best = vec![0u8; full];
    for set in 1..full {
        let low = set.trailing_zeros() as usize;
        let rest = set ^ (1 << low);
        let inside = (adj[low] & rest as u32).count_ones() as i32;
        cut[set] = (cut[rest] as i32 + graph.degree(low) as i32 - 2 * inside) as u8;
        let mut bits = set;
        let mut min_prev = u8::MAX;
        while bits != 0 {
            let v = bits.trailing_zeros();
            bits &= bits - 1;
            min_prev = min_prev.min(best[set ^ (1 << v)]);
        }
        best[set] = cut[set].max(min_prev);
    }
    Ok((best[full - 1] as usize, best))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm_1based(pi: &[usize]) -> Permutation {
        Permutation::from_positions(pi.iter().map(|p| p - 1).collect()).unwrap()
    }

    #[test]
    fn pair_index_examples() {
        // 1-based examples shifted to 0-based vertices; rank + 1 = 1-based rank.
        assert_eq!(pair_index(0, 1, 4) + 1, 1);
        assert_eq!(pair_index(1, 3, 4) + 1, 5);
        assert_eq!(pair_index(2, 3, 4) + 1, 6);
    }

    #[test]
    fn pair_index_is_a_bijection() {
        for n in 2..9 {
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    assert_eq!(pair_index(i, j, n), k);
                    assert_eq!(pair_of(k, n), (i, j));
                    k += 1;
                }
            }
            assert_eq!(k, pair_count(n));
        }
    }

    #[test]
    #[should_panic]
    fn pair_index_rejects_unordered() {
        pair_index(2, 1, 4);
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::from_positions(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_positions(vec![0, 3, 1]).is_err());
        assert!(Permutation::from_order(&[2, 0, 1]).is_ok());
        let p = Permutation::from_order(&[2, 0, 1]).unwrap();
        assert_eq!(p.positions(), &[1, 2, 0]);
        assert_eq!(p.order(), vec![2, 0, 1]);
    }

    #[test]
    fn encode_examples() {
        assert_eq!(LoVector::encode(&Permutation::identity(3)).as_slice(), &[1.0, 1.0, 1.0]);
        assert_eq!(
            LoVector::encode(&Permutation::identity(3).reversed()).as_slice(),
            &[0.0, 0.0, 0.0]
        );
        assert_eq!(LoVector::encode(&perm_1based(&[2, 1, 3])).as_slice(), &[0.0, 1.0, 1.0]);
    }

    #[test]
    fn vertex_cutwidth_examples() {
        let p3 = Graph::path(3);
        let id = Permutation::identity(3);
        assert_eq!(
            (0..3).map(|v| cutwidth_of_vertex(&p3, &id, v)).collect::<Vec<_>>(),
            vec![1, 1, 0]
        );
        assert_eq!(cutwidth_of_vertex(&Graph::complete(4), &Permutation::identity(4), 1), 4);
        let g = Graph::erdos_renyi(7, 0.6, 2);
        let perm = perm_1based(&[3, 7, 1, 5, 2, 6, 4]);
        let last = perm.order()[6];
        assert_eq!(cutwidth_of_vertex(&g, &perm, last), 0);
    }

    #[test]
    fn ordering_cutwidth_examples() {
        assert_eq!(cutwidth_of_ordering(&Graph::path(3), &Permutation::identity(3)), 1);
        let k4 = Graph::complete(4);
        for order in [[0, 1, 2, 3], [3, 1, 0, 2], [2, 3, 1, 0]] {
            assert_eq!(cutwidth_of_ordering(&k4, &Permutation::from_order(&order).unwrap()), 4);
        }
        assert_eq!(cutwidth_of_ordering(&Graph::cycle(4), &Permutation::identity(4)), 2);
    }

    #[test]
    fn position_cuts_agree_with_vertex_counts() {
        let g = Graph::erdos_renyi(8, 0.5, 5);
        let perm = perm_1based(&[4, 2, 8, 6, 1, 3, 7, 5]);
        let cuts = position_cuts(&g, &perm);
        for v in 0..8 {
            assert_eq!(cuts[perm.position(v)], cutwidth_of_vertex(&g, &perm, v));
        }
    }

    #[test]
    fn quadratic_examples() {
        let p3 = Graph::path(3);
        let x = LoVector::encode(&Permutation::identity(3));
        assert_eq!(cutwidth_vertex_quadratic(&p3, &x, 1, QuadraticForm::Products), 1.0);
        for form in [QuadraticForm::Products, QuadraticForm::Expanded] {
            let g = Graph::erdos_renyi(6, 0.7, 1);
            let ones = LoVector::encode(&Permutation::identity(6));
            assert_eq!(cutwidth_vertex_quadratic(&g, &ones, 5, form), 0.0);
        }
        let k2 = Graph::complete(2);
        let half = LoVector::new(2, vec![0.5]).unwrap();
        for form in [QuadraticForm::Products, QuadraticForm::Expanded] {
            assert_eq!(cutwidth_vertex_quadratic(&k2, &half, 0, form), 0.5);
            assert_eq!(cutwidth_vertex_quadratic(&k2, &half, 1, form), 0.5);
        }
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(exact_cutwidth_bruteforce(&Graph::complete(5)).unwrap().0, 6);
        assert_eq!(exact_cutwidth_bruteforce(&Graph::path(6)).unwrap().0, 1);
        assert_eq!(exact_cutwidth_bruteforce(&Graph::cycle(5)).unwrap().0, 2);
        assert_eq!(exact_cutwidth_bruteforce(&Graph::star(4)).unwrap().0, 2);
        assert!(matches!(
            exact_cutwidth_bruteforce(&Graph::empty(11)),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn brute_force_witness_is_optimal() {
        let g = Graph::erdos_renyi(7, 0.5, 8);
        let (cw, witness) = exact_cutwidth_bruteforce(&g).unwrap();
        assert_eq!(cutwidth_of_ordering(&g, &witness), cw);
    }

    #[test]
    fn subset_dp_examples() {
        assert_eq!(exact_cutwidth_subset_dp(&Graph::empty(6)).unwrap(), 0);
        assert_eq!(exact_cutwidth_subset_dp(&Graph::complete(8)).unwrap(), 16);
        assert!(matches!(
            exact_cutwidth_subset_dp(&Graph::empty(25)),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn subset_dp_matches_brute_force() {
        for seed in 0..50 {
            let g = Graph::erdos_renyi(8, 0.5, seed);
            let dp = exact_cutwidth_subset_dp(&g).unwrap();
            assert_eq!(dp, exact_cutwidth_bruteforce(&g).unwrap().0, "seed {seed}");
            let (value, order) = exact_cutwidth_subset_dp_with_order(&g).unwrap();
            assert_eq!(value, dp);
            assert_eq!(cutwidth_of_ordering(&g, &order), dp);
        }
    }

    #[test]
    fn complete_graph_cutwidth_closed_form() {
        for n in 2..=9 {
            assert_eq!(exact_cutwidth_subset_dp(&Graph::complete(n)).unwrap(), n * n / 4);
        }
    }
}
