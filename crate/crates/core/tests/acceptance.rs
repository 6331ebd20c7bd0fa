//! End-to-end acceptance run: one pass/fail line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so that the long numerical
//! criteria print progress as they go. Set `ACCEPTANCE_ONLY=3,10` to run a
//! subset.

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use nalgebra::DMatrix;

use cutwidth_core::cuts::{enumerate_all, Cut, CutKind};
use cutwidth_core::lower_bound::{compute_lower_bound, BoundReport, DriverParams, Schedule};
use cutwidth_core::ordering::{
    cutwidth_of_ordering, cutwidth_vertex_quadratic, exact_cutwidth_bruteforce, exact_cutwidth_subset_dp,
    QuadraticForm,
};
use cutwidth_core::report::{gap_ceiling, gap_raw};
use cutwidth_core::sdp_model::{build_basic_relaxation, rank_one_lift, Sense};
use cutwidth_core::sdp_solver::{residuals, solve, SolveStatus, SolverSettings};
use cutwidth_core::upper_bound::{compute_upper_bound, AnnealParams};
use cutwidth_core::{Graph, LoVector, Permutation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// All orderings of `0..n` (Heap's algorithm).
fn all_orders(n: usize) -> Vec<Vec<usize>> {
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = vec![a.clone()];
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Edges with one endpoint at a position `≤ pos[v]` and the other after it.
fn direct_count(graph: &Graph, pos: &[usize], v: usize) -> usize {
    let mut count = 0;
    for u in 0..graph.n() {
        for w in u + 1..graph.n() {
            if graph.has_edge(u, w) {
                let (a, b) = (pos[u].min(pos[w]), pos[u].max(pos[w]));
                if a <= pos[v] && pos[v] < b {
                    count += 1;
                }
            }
        }
    }
    count
}

fn criterion_1() -> Outcome {
    let mut checks = 0usize;
    for n in 3..=6 {
        let orders = all_orders(n);
        for g in 0..20u64 {
            let p = 0.2 + 0.6 * (g as f64 / 19.0);
            let graph = Graph::erdos_renyi(n, p, 1000 * n as u64 + g);
            for order in &orders {
                let perm = Permutation::from_order(order).map_err(|e| e.to_string())?;
                let x = LoVector::encode(&perm);
                for v in 0..n {
                    let direct = direct_count(&graph, perm.positions(), v) as f64;
                    let products = cutwidth_vertex_quadratic(&graph, &x, v, QuadraticForm::Products);
                    let expanded = cutwidth_vertex_quadratic(&graph, &x, v, QuadraticForm::Expanded);
                    ensure(products == direct && expanded == direct, || {
                        format!("n={n} graph {g} order {order:?} vertex {v}: {products} / {expanded} / {direct}")
                    })?;
                    checks += 1;
                }
            }
        }
    }
    Ok(format!("{checks} (graph, ordering, vertex) triples agree exactly"))
}

fn criterion_2() -> Outcome {
    let mut checks = 0usize;
    let mut worst = f64::NEG_INFINITY;
    for n in [4, 5] {
        let cuts: Vec<Cut> = CutKind::ALL.iter().flat_map(|&k| enumerate_all(k, n)).collect();
        let forms: Vec<_> = cuts.iter().map(|c| c.form(n)).collect();
        for order in all_orders(n) {
            let perm = Permutation::from_order(&order).map_err(|e| e.to_string())?;
            let xbar = rank_one_lift(&LoVector::encode(&perm));
            for (cut, form) in cuts.iter().zip(&forms) {
                let value = form.value(&xbar);
                let bad = match form.sense {
                    Sense::Equal => value.abs() > 1e-12,
                    Sense::LessEqual => value > 1e-12,
                };
                ensure(!bad, || format!("{cut} has value {value} at ordering {order:?}"))?;
                worst = worst.max(form.violation(&xbar));
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} cut evaluations, largest violation {worst:.1e}"))
}

/// Pairs `ij, ik, jk` of one triple, indexed 0, 1, 2.
const IJ: usize = 0;
const IK: usize = 1;
const JK: usize = 2;

/// A symmetric 3×3 matrix over the pairs of one triple, diagonal = `x`.
#[derive(Clone, Copy)]
struct Small([[f64; 3]; 3]);

impl Small {
    fn at(&self, a: usize, b: usize) -> f64 {
        self.0[a][b]
    }

    fn dicycle(&self) -> f64 {
        self.at(IK, IK) - self.at(IJ, IK) - self.at(IK, JK) + self.at(IJ, JK)
    }

    /// Lifted matrix for `n = 3`, usable with the library's cut forms.
    fn lifted(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(4, 4);
        m[(0, 0)] = 1.0;
        for a in 0..3 {
            m[(0, a + 1)] = self.at(a, a);
            m[(a + 1, 0)] = self.at(a, a);
            for b in 0..3 {
                m[(a + 1, b + 1)] = self.at(a, b);
            }
        }
        m
    }
}

/// Entries in `[0, 1]`; with `solve_dicycle` the `X_{ik,ik}` entry is set so
/// the 3-dicycle equation holds exactly, rejecting values outside `[0, 1]`.
fn sample_small(rng: &mut ChaCha8Rng, solve_dicycle: bool) -> Option<Small> {
    let mut m = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in a..3 {
            let v = rng.random::<f64>();
            m[a][b] = v;
            m[b][a] = v;
        }
    }
    if solve_dicycle {
        let v = m[IJ][IK] + m[IK][JK] - m[IJ][JK];
        if !(0.0..=1.0).contains(&v) {
            return None;
        }
        m[IK][IK] = v;
    }
    Some(Small(m))
}

const EPS: f64 = 1e-9;

/// Largest violation of the triangle inequalities over all choices of pairs
/// of the triple, repeated pairs included.
fn triangle_violation(x: &Small, families: &[usize]) -> f64 {
    let mut worst = f64::NEG_INFINITY;
    for a in 0..3 {
        for b in 0..3 {
            for &f in families {
                let v = match f {
                    1 => -x.at(a, b),
                    2 => x.at(a, b) - x.at(a, a),
                    3 => x.at(a, a) + x.at(b, b) - 1.0 - x.at(a, b),
                    _ => f64::NEG_INFINITY,
                };
                worst = worst.max(v);
            }
            for c in 0..3 {
                for &f in families {
                    // Pairs (a, b, c) play the roles (ij, kℓ, uv).
                    let v = match f {
                        4 => x.at(a, b) + x.at(c, b) - x.at(b, b) - x.at(a, c),
                        5 => x.at(a, a) + x.at(b, b) + x.at(c, c) - 1.0 - x.at(a, b) - x.at(a, c) - x.at(b, c),
                        _ => f64::NEG_INFINITY,
                    };
                    worst = worst.max(v);
                }
            }
        }
    }
    worst
}

/// The four facet groups of the order-3 squared polytope (the equation aside).
fn lo3_facets_hold(x: &Small) -> bool {
    x.at(IJ, JK) >= -EPS
        && x.at(IJ, IK) <= x.at(IJ, IJ) + EPS
        && x.at(IJ, IK) <= x.at(IK, IK) + EPS
        && x.at(IK, JK) <= x.at(IK, IK) + EPS
        && x.at(IK, JK) <= x.at(JK, JK) + EPS
        && x.at(IJ, IJ) + x.at(JK, JK) <= 1.0 + x.at(IJ, JK) + EPS
}

/// The four RLT liftings of `0 ≤ x_ij + x_jk − x_ik ≤ 1` by the pair `uv`,
/// each as `lhs ≤ 0`.
fn rlt_values(x: &Small, uv: usize) -> [f64; 4] {
    let lin = x.at(IJ, IJ) + x.at(JK, JK) - x.at(IK, IK);
    let lifted = x.at(IJ, uv) + x.at(JK, uv) - x.at(IK, uv);
    let xuv = x.at(uv, uv);
    [-lifted, lifted - xuv, -(lin - lifted), lin - lifted - (1.0 - xuv)]
}

const SAMPLES: usize = 100_000;

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    // The order-3 facets imply every triangle inequality on the triple.
    let mut accepted = 0;
    let mut drawn = 0usize;
    let mut worst = f64::NEG_INFINITY;
    let forms: Vec<_> = CutKind::TRIANGLES
        .iter()
        .flat_map(|&k| enumerate_all(k, 3))
        .map(|c| (c, c.form(3)))
        .collect();
    while accepted < SAMPLES {
        drawn += 1;
        ensure(drawn < 200 * SAMPLES, || format!("rejection rate too high: {accepted} of {drawn}"))?;
        let Some(x) = sample_small(&mut rng, true) else { continue };
        if !lo3_facets_hold(&x) {
            continue;
        }
        accepted += 1;
        let v = triangle_violation(&x, &[1, 2, 3, 4, 5]);
        worst = worst.max(v);
        ensure(v <= EPS, || format!("triangle inequality violated by {v:e} at {:?}", x.0))?;
        // The library's forms must agree with the direct formulas here.
        let xbar = x.lifted();
        ensure(x.dicycle().abs() < 1e-12, || "sampled point breaks the 3-dicycle equation".into())?;
        for (cut, form) in &forms {
            let value = form.value(&xbar);
            ensure(value <= EPS, || format!("{cut} violated by {value:e}"))?;
        }
    }

    // Redundant liftings: each case against only the constraints said to imply it.
    // (kind index, lifting pair, triangle families used, 3-dicycle used)
    let cases: [(usize, usize, &[usize], bool); 12] = [
        (0, IJ, &[1, 2], false),
        (0, JK, &[1, 2], false),
        (0, IK, &[1], true),
        (1, IJ, &[2], true),
        (1, JK, &[2], true),
        (1, IK, &[2], false),
        (2, IJ, &[2], true),
        (2, JK, &[2], true),
        (2, IK, &[2], false),
        (3, IJ, &[2, 3], false),
        (3, JK, &[2, 3], false),
        (3, IK, &[3], true),
    ];
    for &(kind, uv, families, dicycle) in &cases {
        let mut accepted = 0;
        let mut drawn = 0usize;
        while accepted < SAMPLES {
            drawn += 1;
            ensure(drawn < 200 * SAMPLES, || format!("rejection rate too high for case {kind}/{uv}"))?;
            let Some(x) = sample_small(&mut rng, dicycle) else { continue };
            if triangle_violation(&x, families) > EPS {
                continue;
            }
            accepted += 1;
            let v = rlt_values(&x, uv)[kind];
            worst = worst.max(v);
            ensure(v <= EPS, || {
                format!("{} with pair {uv} violated by {v:e} at {:?}", CutKind::RLT[kind], x.0)
            })?;
        }
    }
    Ok(format!("{} sampled points, largest violation {worst:.1e}", SAMPLES * (1 + cases.len())))
}

fn criterion_4() -> Outcome {
    let problem = build_basic_relaxation(&Graph::complete(2)).map_err(|e| e.to_string())?;
    let sol = solve(&problem, &SolverSettings::default(), None).map_err(|e| e.to_string())?;
    ensure(sol.status == SolveStatus::Optimal, || format!("status {:?}", sol.status))?;
    ensure((sol.alpha - 0.5).abs() <= 1e-4, || format!("alpha {}", sol.alpha))?;
    let r = residuals(&problem, &sol).map_err(|e| e.to_string())?;
    ensure(r.primal_infeas <= 1e-5 && r.dual_infeas <= 1e-5 && r.rel_gap <= 1e-5, || format!("{r:?}"))?;
    // Complementary slackness: γ_i g_i(X̄) and ⟨X̄, Σ γ_i A_i⟩ are both small.
    let mut slack: f64 = 0.0;
    for (c, g) in problem.constraints().zip(&sol.base_duals) {
        let value = c.evaluate(&sol.xbar, sol.alpha).map_err(|e| e.to_string())?;
        slack = slack.max((g * value).abs());
    }
    ensure(slack <= 1e-5, || format!("largest |γ·g| = {slack:e}"))?;
    ensure(sol.dual_bound <= 0.5 + 1e-9 && sol.dual_bound >= 0.5 - 1e-4, || {
        format!("certified bound {}", sol.dual_bound)
    })?;
    Ok(format!(
        "alpha {:.6}, residuals {:.1e}/{:.1e}/{:.1e}, max |γ·g| {slack:.1e}",
        sol.alpha, r.primal_infeas, r.dual_infeas, r.rel_gap
    ))
}

/// The hundred small instances shared by criteria 5 and 6.
fn small_instances() -> Vec<(String, Graph)> {
    (1..=100u64)
        .map(|seed| {
            let n = 4 + (seed as usize % 7);
            if seed % 2 == 1 {
                let p = [0.3, 0.5, 0.7][(seed / 2) as usize % 3];
                (format!("er({n},{p}) seed {seed}"), Graph::erdos_renyi(n, p, seed))
            } else {
                let d = [0.5, 0.7, 0.9][(seed / 2) as usize % 3];
                (format!("rgg({n},{d}) seed {seed}"), Graph::random_geometric(n, d, seed))
            }
        })
        .collect()
}

struct SmallResult {
    exact: usize,
    ub: usize,
}

fn sandwich() -> Result<Vec<SmallResult>, String> {
    let mut out = Vec::new();
    for (k, (name, graph)) in small_instances().into_iter().enumerate() {
        let seed = k as u64 + 1;
        let dp = exact_cutwidth_subset_dp(&graph).map_err(|e| e.to_string())?;
        let (brute, _) = exact_cutwidth_bruteforce(&graph).map_err(|e| e.to_string())?;
        ensure(dp == brute, || format!("{name}: subset DP {dp} but enumeration {brute}"))?;
        let lb = compute_lower_bound(&graph, &DriverParams::default(), &SolverSettings::default(), seed)
            .map_err(|e| format!("{name}: {e}"))?;
        let ub = compute_upper_bound(&graph, &lb.final_xbar, &AnnealParams::default(), seed)
            .map_err(|e| format!("{name}: {e}"))?;
        ensure(cutwidth_of_ordering(&graph, &ub.ordering) == ub.value, || format!("{name}: witness mismatch"))?;
        ensure(lb.lb_integer as usize <= dp && dp <= ub.value, || {
            format!("{name}: lb {} (alpha {}) exact {dp} ub {}", lb.lb_integer, lb.alpha_final, ub.value)
        })?;
        out.push(SmallResult { exact: dp, ub: ub.value });
    }
    Ok(out)
}

/// One full pipeline run on an ER(20, 0.8) instance.
struct BigRun {
    report: BoundReport,
    ub: usize,
    seconds: f64,
}

fn big_run(seed: u64) -> Result<BigRun, String> {
    let graph = Graph::erdos_renyi(20, 0.8, seed);
    let start = Instant::now();
    let report = compute_lower_bound(&graph, &DriverParams::default(), &SolverSettings::default(), seed)
        .map_err(|e| e.to_string())?;
    let ub = compute_upper_bound(&graph, &report.final_xbar, &AnnealParams::default(), seed)
        .map_err(|e| e.to_string())?;
    Ok(BigRun { report, ub: ub.value, seconds: start.elapsed().as_secs_f64() })
}

fn criterion_7(runs: &[(u64, BigRun)]) -> Outcome {
    let mut parts = Vec::new();
    for (seed, run) in runs {
        let r = &run.report;
        let ratio = r.alpha_final / r.alpha_init;
        parts.push(format!("seed {seed}: {:.2} -> {:.2} (x{ratio:.3}, UB {}, {:.0}s)", r.alpha_init, r.alpha_final, run.ub, run.seconds));
        ensure(ratio >= 1.10, || format!("seed {seed}: ratio {ratio:.4} below 1.10; {}", parts.join("; ")))?;
        ensure(run.seconds <= 600.0, || format!("seed {seed} took {:.0}s", run.seconds))?;
        ensure(run.ub as u64 >= r.lb_integer, || format!("seed {seed}: UB {} below LB {}", run.ub, r.lb_integer))?;
    }
    Ok(parts.join("; "))
}

fn trace(seed: u64, schedule: Schedule) -> Result<BoundReport, String> {
    let graph = Graph::erdos_renyi(20, 0.8, seed);
    let params = DriverParams { improvement_min: f64::NEG_INFINITY, schedule, ..DriverParams::default() };
    compute_lower_bound(&graph, &params, &SolverSettings::default(), seed).map_err(|e| e.to_string())
}

/// The staged run of criterion 7 against 3-dicycles in every iteration, both
/// on seed 1. A staged run that stopped early keeps its final bound.
fn criterion_8(staged: &BigRun) -> Outcome {
    let tol = SolverSettings::default().tol_gap;
    let dicycle = trace(1, Schedule::Fixed(vec![CutKind::Dicycle3]))?;
    let all = &staged.report;
    let at7 = |r: &BoundReport| r.records.iter().find(|rec| rec.iter == 7).map_or(r.alpha_final, |rec| rec.bound);
    let curve = |r: &BoundReport| r.records.iter().map(|rec| format!("{:.2}", rec.bound)).collect::<Vec<_>>().join(" ");
    let detail = format!("dicycle [{}]; all [{}]", curve(&dicycle), curve(all));
    ensure(all.alpha_final >= dicycle.alpha_final - 2.0 * tol, || detail.clone())?;
    ensure(at7(all) >= at7(&dicycle) - 2.0 * tol, || detail.clone())?;
    Ok(detail)
}

fn criterion_9(first: &BigRun) -> Outcome {
    let again = big_run(1)?;
    let (a, b) = (&first.report, &again.report);
    ensure((a.alpha_final - b.alpha_final).abs() <= 1e-9, || format!("{} vs {}", a.alpha_final, b.alpha_final))?;
    ensure(a.pool == b.pool, || format!("pools differ: {} vs {} cuts", a.pool.len(), b.pool.len()))?;
    ensure(first.ub == again.ub, || format!("UB {} vs {}", first.ub, again.ub))?;
    Ok(format!("LB final {:.9} twice, {} identical cuts", a.alpha_final, a.pool.len()))
}

fn criterion_10() -> Outcome {
    // Published (LB, UB, gap) rows for random graphs on 20 vertices.
    let rows = [
        (14.27, 26u64, "0.42"),
        (21.54, 36, "0.39"),
        (21.92, 41, "0.46"),
        (36.40, 55, "0.33"),
        (38.65, 57, "0.32"),
        (46.59, 68, "0.31"),
    ];
    let mut parts = Vec::new();
    for (lb, ub, printed) in rows {
        let got = format!("{:.2}", gap_ceiling(lb, ub));
        ensure(got == printed, || format!("LB {lb} UB {ub}: {got} vs printed {printed}"))?;
        parts.push(format!("{lb}/{ub} -> {got} (raw {:.3})", gap_raw(lb, ub)));
    }
    Ok(parts.join(", "))
}

fn run(id: usize, only: &Option<Vec<usize>>, failures: &mut Vec<usize>, f: impl FnOnce() -> Outcome) {
    if only.as_ref().is_some_and(|o| !o.contains(&id)) {
        return;
    }
    let start = Instant::now();
    let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    let secs = Duration::as_secs_f64(&start.elapsed());
    match outcome {
        Ok(detail) => println!("criterion {id:>2}: PASS  [{secs:.1}s] {detail}"),
        Err(detail) => {
            println!("criterion {id:>2}: FAIL  [{secs:.1}s] {detail}");
            failures.push(id);
        }
    }
}

fn main() {
    // `cargo test -- --list` and friends pass flags; there is nothing to list.
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let only: Option<Vec<usize>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|t| t.trim().parse().ok()).collect());
    let wants = |ids: &[usize]| only.as_ref().map_or(true, |o| ids.iter().any(|i| o.contains(i)));
    let mut failures = Vec::new();

    run(1, &only, &mut failures, criterion_1);
    run(2, &only, &mut failures, criterion_2);
    run(3, &only, &mut failures, criterion_3);
    run(4, &only, &mut failures, criterion_4);

    let t = Instant::now();
    let small = if wants(&[5, 6]) { Some(sandwich()) } else { None };
    let small_secs = t.elapsed().as_secs_f64();
    run(5, &only, &mut failures, || {
        let results = small.as_ref().unwrap().as_ref().map_err(Clone::clone)?;
        ensure(small_secs <= 900.0, || format!("took {small_secs:.0}s"))?;
        Ok(format!("{} instances, lb ≤ exact ≤ UB on all, {small_secs:.0}s", results.len()))
    });
    run(6, &only, &mut failures, || {
        let results = small.as_ref().unwrap().as_ref().map_err(Clone::clone)?;
        let hits = results.iter().filter(|r| r.ub == r.exact).count();
        ensure(hits * 10 >= results.len() * 9, || format!("UB optimal on {hits} of {}", results.len()))?;
        Ok(format!("UB optimal on {hits} of {}", results.len()))
    });

    let big: Result<Vec<(u64, BigRun)>, String> = if wants(&[7, 8, 9]) {
        let seeds: &[u64] = if wants(&[7]) { &[1, 2, 3] } else { &[1] };
        seeds.iter().map(|&s| big_run(s).map(|r| (s, r))).collect()
    } else {
        Ok(Vec::new())
    };
    run(7, &only, &mut failures, || criterion_7(big.as_ref().map_err(Clone::clone)?));
    run(8, &only, &mut failures, || {
        let runs = big.as_ref().map_err(Clone::clone)?;
        criterion_8(&runs.first().ok_or("no reference run")?.1)
    });
    run(9, &only, &mut failures, || {
        let runs = big.as_ref().map_err(Clone::clone)?;
        criterion_9(&runs.first().ok_or("no reference run")?.1)
    });
    run(10, &only, &mut failures, criterion_10);

    if !failures.is_empty() {
        println!("failed criteria: {failures:?}");
        std::process::exit(1);
    }
}
