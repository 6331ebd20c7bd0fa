//! Simulated-annealing separation of violated cuts.
//!
//! A search state is an [`IndexTuple`]; its neighbours differ in one
//! resampled slot. Each step evaluates every enabled cut kind on the
//! neighbour and moves by the Metropolis rule. The temperature cools only
//! when a worsening move is accepted.

use std::collections::HashMap;

use nalgebra::DMatrix;
use rand::Rng as _;

use crate::cuts::{Cut, CutCandidate, CutKind, IndexTuple};
use crate::ordering::pair_count;
use crate::rng::{self, tags, Rng};

const NEIGHBOR_RETRIES: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct SaParams {
    pub t_init: f64,
    pub cooling: f64,
    pub max_steps: usize,
    pub max_plateau: usize,
    pub families: Vec<CutKind>,
}

impl SaParams {
    /// `T_init = 0.042`, `f_t = 0.97`, `C(n, 2)` steps, plateau `⌊n/2⌋`.
    pub fn for_graph(n: usize, families: &[CutKind]) -> Self {
        SaParams {
            t_init: 0.042,
            cooling: 0.97,
            max_steps: pair_count(n),
            max_plateau: n / 2,
            families: families.to_vec(),
        }
    }
}

fn random_pair(n: usize, rng: &mut Rng) -> (usize, usize) {
    let a = rng.random_range(0..n);
    let mut b = rng.random_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    (a.min(b), a.max(b))
}

/// A uniformly random valid tuple. Needs `n ≥ 2`.
pub fn random_tuple(n: usize, rng: &mut Rng) -> IndexTuple {
    assert!(n >= 2, "index tuples need at least two vertices");
    let quad_len = n.min(4);
    let mut chosen = rand::seq::index::sample(rng, n, quad_len).into_vec();
    chosen.sort_unstable();
    let mut quad = [0; 4];
    quad[..quad_len].copy_from_slice(&chosen);
    let uv = random_pair(n, rng);
    let qw = random_pair(n, rng);
    IndexTuple { quad, quad_len, uv, qw }
}

/// Number of resamplable slots: the quadruple entries plus four pair entries.
pub fn slot_count(t: &IndexTuple) -> usize {
    t.quad_len + 4
}

/// `t` with `slot` set to `value` and each group re-sorted, or `None` if the
/// result has a repeated quadruple entry or a degenerate pair.
pub fn with_slot(t: &IndexTuple, slot: usize, value: usize) -> Option<IndexTuple> {
    let mut out = *t;
    let ql = t.quad_len;
    if slot < ql {
        out.quad[slot] = value;
        out.quad[..ql].sort_unstable();
        if out.quad[..ql].windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
    } else {
        let pair = match (slot - ql) / 2 {
            0 => &mut out.uv,
            1 => &mut out.qw,
            _ => panic!("slot {slot} out of range"),
        };
        if (slot - ql) % 2 == 0 {
            pair.0 = value;
        } else {
            pair.1 = value;
        }
        if pair.0 == pair.1 {
            return None;
        }
        *pair = (pair.0.min(pair.1), pair.0.max(pair.1));
    }
    Some(out)
}

/// Resamples one uniformly chosen slot; falls back to a fresh random tuple
/// if repeated attempts keep producing invalid tuples.
pub fn random_neighbor_indices(t: &IndexTuple, n: usize, rng: &mut Rng) -> IndexTuple {
    for _ in 0..NEIGHBOR_RETRIES {
        let slot = rng.random_range(0..slot_count(t));
        let value = rng.random_range(0..n);
        if let Some(next) = with_slot(t, slot, value) {
            return next;
        }
    }
    random_tuple(n, rng)
}

/// Violation used by the annealer: −∞ for kinds the tuple cannot
/// instantiate, collapsed tuples and redundant liftings.
pub fn search_violation(kind: CutKind, t: &IndexTuple, xbar: &DMatrix<f64>, n: usize) -> (Option<Cut>, f64) {
    match Cut::from_tuple(kind, t) {
        Some(cut) if cut.validate(n).is_ok() && !cut.is_redundant_lifting() => {
            (Some(cut), cut.violation(xbar, n))
        }
        _ => (None, f64::NEG_INFINITY),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SaOutcome {
    /// Best cut seen, `None` if no enabled kind was ever instantiable.
    pub best: Option<Cut>,
    pub violation: f64,
    pub steps: usize,
    pub accepted_worse: usize,
}

/// One annealing run.
pub fn separate_one(xbar: &DMatrix<f64>, n: usize, params: &SaParams, rng: &mut Rng) -> SaOutcome {
    let mut outcome = SaOutcome {
        best: None,
        violation: f64::NEG_INFINITY,
        steps: 0,
        accepted_worse: 0,
    };
    if n < 2 {
        return outcome;
    }
    let mut current = random_tuple(n, rng);
    let mut current_violation = f64::NEG_INFINITY;
    let mut current_cut: Option<Cut> = None;
    let mut temperature = params.t_init;
    let mut plateau = 0;
    while plateau < params.max_plateau && outcome.steps < params.max_steps {
        outcome.steps += 1;
        plateau += 1;
        let neighbor = random_neighbor_indices(&current, n, rng);
        for &kind in &params.families {
            let (cut, violation) = search_violation(kind, &neighbor, xbar, n);
            let delta = violation - current_violation;
            let accept = if delta > 0.0 {
                true
            } else if rng.random::<f64>() < (delta / temperature).exp() {
                temperature *= params.cooling;
                outcome.accepted_worse += 1;
                true
            } else {
                false
            };
            if accept {
                current = neighbor;
                current_violation = violation;
                current_cut = cut;
            }
        }
        if current_violation > outcome.violation {
            outcome.best = current_cut;
            outcome.violation = current_violation;
            plateau = 0;
        }
    }
    outcome
}

/// Runs `count` independent annealers, deduplicates by canonical cut keeping
/// the largest violation, and keeps those above `min_violation`. Run `r`
/// draws from a stream derived from `(seed, r)`. Output is sorted by
/// decreasing violation, ties by cut.
pub fn separate_batch(
    xbar: &DMatrix<f64>,
    n: usize,
    params: &SaParams,
    count: usize,
    seed: u64,
    min_violation: f64,
) -> Vec<CutCandidate> {
    let mut best: HashMap<Cut, f64> = HashMap::new();
    for run in 0..count {
        let mut rng = rng::stream(seed, tags::SEPARATION, run as u64);
        let out = separate_one(xbar, n, params, &mut rng);
        if let Some(cut) = out.best {
            // Re-evaluate on the canonical cut so the cached value is exactly
            // what a caller recomputes (summation order can differ).
            let key = cut.canonical();
            let violation = key.violation(xbar, n);
            if violation > min_violation {
                best.insert(key, violation);
            }
        }
    }
    let mut out: Vec<CutCandidate> = best
        .into_iter()
        .map(|(cut, violation)| CutCandidate { cut, violation })
        .collect();
    sort_candidates(&mut out);
    out
}

pub fn sort_candidates(c: &mut [CutCandidate]) {
    c.sort_by(|a, b| b.violation.total_cmp(&a.violation).then(a.cut.cmp(&b.cut)));
}

/// Most violated non-redundant cut of each enabled kind, by enumeration.
/// Exponential in the index arity; for tests on small graphs only.
pub fn exhaustive_most_violated(xbar: &DMatrix<f64>, n: usize, families: &[CutKind]) -> Option<CutCandidate> {
    let mut best: Option<CutCandidate> = None;
    for &kind in families {
        for cut in crate::cuts::enumerate_all(kind, n) {
            if cut.is_redundant_lifting() {
                continue;
            }
            let violation = cut.violation(xbar, n);
            if best.map_or(true, |b| violation > b.violation) {
                best = Some(CutCandidate { cut, violation });
            }
        }
    }
    best
}
