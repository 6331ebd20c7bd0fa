//! Cutting-plane driver: solve the relaxation, separate violated cuts,
//! re-solve, prune cuts with small multipliers, repeat.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::cuts::{Cut, CutKind};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::{derive_seed, tags};
use crate::sdp_model::{build_basic_relaxation, CutId};
use crate::sdp_solver::{solve, SdpSolution, SolveStatus, SolverSettings};
use crate::separation::{separate_batch, SaParams};

/// Slack used when rounding a fractional bound up to an integer.
pub const ROUND_EPS: f64 = 1e-6;

/// Which cut kinds the separator may use in a given iteration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Schedule {
    /// 3-dicycles in iterations 1–2, plus triangles in 3–4, everything later.
    Staged,
    /// The same kinds in every iteration.
    Fixed(Vec<CutKind>),
    /// 3-dicycles alone in iteration 1, then the given kinds.
    DicycleFirst(Vec<CutKind>),
}

impl Schedule {
    pub fn families(&self, iter: usize) -> Result<Vec<CutKind>> {
        match self {
            Schedule::Staged => families_for_iteration(iter),
            Schedule::Fixed(kinds) if iter >= 1 => Ok(kinds.clone()),
            Schedule::DicycleFirst(_) if iter == 1 => Ok(vec![CutKind::Dicycle3]),
            Schedule::DicycleFirst(kinds) if iter > 1 => Ok(kinds.clone()),
            Schedule::Fixed(_) | Schedule::DicycleFirst(_) => Err(Error::Contract("iterations are numbered from 1".into())),
        }
    }
}

pub fn families_for_iteration(iter: usize) -> Result<Vec<CutKind>> {
    match iter {
        0 => Err(Error::Contract("iterations are numbered from 1".into())),
        1 | 2 => Ok(vec![CutKind::Dicycle3]),
        3 | 4 => {
            let mut v = vec![CutKind::Dicycle3];
            v.extend(CutKind::TRIANGLES);
            Ok(v)
        }
        _ => Ok(CutKind::ALL.to_vec()),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriverParams {
    pub max_iter: usize,
    pub improvement_min: f64,
    /// Cuts added per iteration; `None` means `2 n²`.
    pub num_cuts: Option<usize>,
    pub min_violation: f64,
    pub prune_factor: f64,
    pub schedule: Schedule,
    /// Wall-clock limit checked between iterations.
    pub time_limit: Option<Duration>,
}

impl Default for DriverParams {
    fn default() -> Self {
        DriverParams {
            max_iter: 7,
            improvement_min: 1e-2,
            num_cuts: None,
            min_violation: 1e-4,
            prune_factor: 0.01,
            schedule: Schedule::Staged,
            time_limit: None,
        }
    }
}

impl DriverParams {
    pub fn num_cuts_for(&self, n: usize) -> usize {
        self.num_cuts.unwrap_or(2 * n * n)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.min_violation >= 0.0) || !(self.prune_factor >= 0.0) || self.improvement_min.is_nan() {
            return Err(Error::Contract("driver thresholds must be nonnegative".into()));
        }
        if let Schedule::Fixed(kinds) | Schedule::DicycleFirst(kinds) = &self.schedule {
            if kinds.is_empty() {
                return Err(Error::Contract("a fixed schedule needs at least one cut kind".into()));
            }
        }
        Ok(())
    }
}

/// Cuts whose `|γ|` is below `factor` times the mean `|γ|` of the pool. With a
/// zero mean nothing is removed.
pub fn prune_cuts(duals: &[(CutId, f64)], factor: f64) -> Vec<CutId> {
    if duals.is_empty() {
        return Vec::new();
    }
    let mean = duals.iter().map(|(_, g)| g.abs()).sum::<f64>() / duals.len() as f64;
    if !(mean > 0.0) {
        return Vec::new();
    }
    let threshold = factor * mean;
    duals
        .iter()
        .filter(|(_, g)| g.abs() < threshold)
        .map(|(id, _)| *id)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    /// 0 for the basic relaxation.
    pub iter: usize,
    pub families: Vec<CutKind>,
    /// Primal objective of the solve.
    pub alpha: f64,
    /// Certified lower bound from the solve's multipliers.
    pub bound: f64,
    pub separated: usize,
    pub added: usize,
    pub pruned: usize,
    pub pool: usize,
    pub status: SolveStatus,
    pub solver_iterations: usize,
    pub solve_seconds: f64,
    pub separation_seconds: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    /// Certified bound of the basic relaxation.
    pub alpha_init: f64,
    /// Certified bound after the last iteration.
    pub alpha_final: f64,
    pub lb_integer: u64,
    pub records: Vec<IterationRecord>,
    /// Cuts in the final relaxation, in insertion order.
    pub pool: Vec<Cut>,
    pub time_sdp: f64,
    pub time_separation: f64,
    pub time_total: f64,
    pub time_limit_hit: bool,
    /// Set when the bound fell by more than the solver tolerance allows.
    pub bound_decreased: bool,
    pub last_status: SolveStatus,
    #[serde(skip)]
    pub final_xbar: DMatrix<f64>,
}

impl BoundReport {
    pub fn cut_count(&self) -> usize {
        self.pool.len()
    }
}

/// `⌈bound − ε⌉`, never negative.
pub fn integer_bound(bound: f64) -> u64 {
    if bound.is_finite() {
        (bound - ROUND_EPS).ceil().max(0.0) as u64
    } else {
        0
    }
}

fn record(iter: usize, families: Vec<CutKind>, sol: &SdpSolution, pool: usize, solve_seconds: f64) -> IterationRecord {
    IterationRecord {
        iter,
        families,
        alpha: sol.alpha,
        bound: sol.dual_bound,
        separated: 0,
        added: 0,
        pruned: 0,
        pool,
        status: sol.status,
        solver_iterations: sol.iterations,
        solve_seconds,
        separation_seconds: 0.0,
    }
}

pub fn compute_lower_bound(graph: &Graph, params: &DriverParams, settings: &SolverSettings, seed: u64) -> Result<BoundReport> {
    params.validate()?;
    let n = graph.n();
    if n < 2 {
        return Err(Error::Contract(format!("the lower bound needs at least two vertices, got {n}")));
    }
    let started = Instant::now();
    let mut problem = build_basic_relaxation(graph)?;
    let t = Instant::now();
    let mut sol = solve(&problem, settings, None)?;
    let mut time_sdp = t.elapsed().as_secs_f64();
    let mut time_separation = 0.0;
    let mut records = vec![record(0, Vec::new(), &sol, 0, time_sdp)];
    let alpha_init = sol.dual_bound;
    let mut alpha = alpha_init;
    let mut pool: Vec<(CutId, Cut)> = Vec::new();
    let mut keys: HashSet<Cut> = HashSet::new();
    let mut improvement = f64::INFINITY;
    let mut iter = 0;
    let mut time_limit_hit = false;
    let mut bound_decreased = false;
    let num_cuts = params.num_cuts_for(n);
    let slack = 2.0 * settings.tol_gap * alpha_init.abs().max(1.0);

    while iter < params.max_iter && improvement > params.improvement_min && sol.status != SolveStatus::Infeasible {
        if params.time_limit.is_some_and(|limit| started.elapsed() >= limit) {
            time_limit_hit = true;
            break;
        }
        iter += 1;
        let families = params.schedule.families(iter)?;
        let t = Instant::now();
        let sa = SaParams::for_graph(n, &families);
        let round_seed = derive_seed(seed, tags::SEPARATION_ROUND, iter as u64);
        let found = separate_batch(&sol.xbar, n, &sa, 2 * num_cuts, round_seed, params.min_violation);
        let separated = found.len();
        let mut added = 0;
        for cand in found {
            if added == num_cuts {
                break;
            }
            let key = cand.cut.canonical();
            if keys.contains(&key) {
                continue;
            }
            let constraint = crate::cuts::instantiate_cut(&cand.cut, n)?;
            let id = problem.add_cut(constraint)?;
            pool.push((id, key));
            keys.insert(key);
            added += 1;
        }
        let separation_seconds = t.elapsed().as_secs_f64();
        time_separation += separation_seconds;

        let t = Instant::now();
        let next = solve(&problem, settings, Some(&sol))?;
        let solve_seconds = t.elapsed().as_secs_f64();
        time_sdp += solve_seconds;
        if next.status == SolveStatus::Infeasible {
            // Keep the last certified bound.
            let mut r = record(iter, families, &next, pool.len(), solve_seconds);
            r.separated = separated;
            r.added = added;
            r.separation_seconds = separation_seconds;
            records.push(r);
            sol = SdpSolution { status: SolveStatus::Infeasible, ..sol };
            break;
        }
        let removed = prune_cuts(&next.cut_duals, params.prune_factor);
        problem.remove_cuts(&removed);
        let removed_set: HashSet<CutId> = removed.iter().copied().collect();
        pool.retain(|(id, cut)| {
            let keep = !removed_set.contains(id);
            if !keep {
                keys.remove(cut);
            }
            keep
        });
        let mut r = record(iter, families, &next, pool.len(), solve_seconds);
        r.separated = separated;
        r.added = added;
        r.pruned = removed.len();
        r.separation_seconds = separation_seconds;
        records.push(r);
        improvement = next.dual_bound - alpha;
        if next.dual_bound < alpha - slack {
            bound_decreased = true;
        }
        alpha = next.dual_bound;
        sol = next;
    }

    Ok(BoundReport {
        n,
        alpha_init,
        alpha_final: alpha,
        lb_integer: integer_bound(alpha),
        records,
        pool: pool.into_iter().map(|(_, c)| c).collect(),
        time_sdp,
        time_separation,
        time_total: started.elapsed().as_secs_f64(),
        time_limit_hit,
        bound_decreased,
        last_status: sol.status,
        final_xbar: sol.xbar,
    })
}
