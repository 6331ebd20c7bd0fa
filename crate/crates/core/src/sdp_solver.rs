//! First-order solver for [`SdpProblem`]s.
//!
//! Operator splitting in the conic form `min α  s.t.  A z + s = b, s ∈ K`
//! with `z = (svec X̄, α)`. `svec` stacks the upper triangle column by column
//! and scales off-diagonal entries by √2, so it is an isometry. The rows of
//! `A` are the constraints (each scaled to unit norm, `s` in a box), an
//! identity copy of `X̄` (`s` in the PSD cone) and an identity copy of `α`
//! (`s` free). The last row keeps `AᵀRA` a multiple of the identity outside
//! the constraint block, so each linear step reduces by Woodbury to a
//! system in the constraint space, solved by warm-started preconditioned
//! conjugate gradients.
//!
//! Multipliers are returned with the convention of the Lagrangian
//! `α + Σ γ_i g_i(X̄, α) − ⟨S, X̄⟩`: inequality multipliers are nonnegative.

use std::collections::HashMap;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sdp_model::{CutId, LinearConstraint, Sense, SdpProblem};

const SQRT2: f64 = std::f64::consts::SQRT_2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverSettings {
    /// Largest violation of a unit-norm-scaled constraint.
    pub tol_primal: f64,
    /// Dual stationarity residual.
    pub tol_dual: f64,
    /// `|primal − dual| / (1 + |primal| + |dual|)`.
    pub tol_gap: f64,
    pub max_iterations: usize,
    pub tol_psd: f64,
    pub rho: f64,
    pub sigma: f64,
    pub relaxation: f64,
    /// Penalty multiplier for equality rows.
    pub rho_equality_scale: f64,
    pub adaptive_rho: bool,
    pub adapt_interval: usize,
    /// Rebalance when primal and dual residuals differ by more than this factor.
    pub adapt_threshold: f64,
    pub check_interval: usize,
    pub cg_tolerance: f64,
    pub cg_max_iterations: usize,
    /// Record residuals every `log_every` iterations (0 disables).
    pub log_every: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            tol_primal: 1e-5,
            tol_dual: 1e-5,
            tol_gap: 1e-5,
            max_iterations: 20_000,
            tol_psd: 1e-7,
            rho: 0.1,
            sigma: 1e-6,
            relaxation: 1.6,
            rho_equality_scale: 100.0,
            adaptive_rho: true,
            adapt_interval: 200,
            adapt_threshold: 10.0,
            check_interval: 10,
            cg_tolerance: 1e-9,
            cg_max_iterations: 1000,
            log_every: 0,
        }
    }
}

impl SolverSettings {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            self.tol_primal,
            self.tol_dual,
            self.tol_gap,
            self.tol_psd,
            self.rho,
            self.sigma,
            self.cg_tolerance,
        ];
        if positive.iter().any(|v| !(*v > 0.0)) {
            return Err(Error::Contract("solver tolerances and penalties must be positive".into()));
        }
        if !(self.adapt_threshold > 1.0) {
            return Err(Error::Contract("adapt_threshold must exceed 1".into()));
        }
        if !(self.relaxation > 0.0 && self.relaxation < 2.0) {
            return Err(Error::Contract("relaxation must lie in (0, 2)".into()));
        }
        if self.check_interval == 0 || self.adapt_interval == 0 || self.max_iterations == 0 {
            return Err(Error::Contract("iteration counts must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    Optimal,
    MaxIterations,
    Infeasible,
}

impl SolveStatus {
    pub fn name(self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::MaxIterations => "max_iter",
            SolveStatus::Infeasible => "infeasible",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    pub primal_infeas: f64,
    pub dual_infeas: f64,
    pub rel_gap: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationLog {
    pub iter: usize,
    pub primal_res: f64,
    pub dual_res: f64,
    pub gap: f64,
    pub rho: f64,
}

/// Internal iterate kept for warm starts.
#[derive(Clone, Debug)]
pub struct WarmStart {
    x: Vec<f64>,
    s_psd: Vec<f64>,
    y_psd: Vec<f64>,
    base_s: Vec<f64>,
    base_y: Vec<f64>,
    cut_sy: HashMap<CutId, (f64, f64)>,
    rho: f64,
}

#[derive(Clone, Debug)]
pub struct SdpSolution {
    pub alpha: f64,
    pub xbar: DMatrix<f64>,
    pub base_duals: Vec<f64>,
    pub cut_duals: Vec<(CutId, f64)>,
    pub status: SolveStatus,
    /// Residuals as tracked by the solver, on unit-norm rows.
    pub residuals: Residuals,
    /// `Σ γ_i c_i` of the returned multipliers.
    pub dual_objective: f64,
    /// A certified lower bound on the optimum, see [`dual_bound`].
    pub dual_bound: f64,
    pub iterations: usize,
    pub cg_iterations: usize,
    pub log: Vec<IterationLog>,
    pub warm: WarmStart,
}

impl SdpSolution {
    /// Penalty at exit, reused by warm starts.
    pub fn warm_rho(&self) -> f64 {
        self.warm.rho
    }

    pub fn cut_dual_map(&self) -> HashMap<CutId, f64> {
        self.cut_duals.iter().copied().collect()
    }
}

/// Position of `(r, c)`, `r ≤ c`, in `svec`.
#[inline]
pub fn svec_index(r: usize, c: usize) -> usize {
    debug_assert!(r <= c);
    c * (c + 1) / 2 + r
}

pub fn svec(m: &DMatrix<f64>) -> Vec<f64> {
    let k = m.nrows();
    let mut out = vec![0.0; k * (k + 1) / 2];
    for c in 0..k {
        for r in 0..=c {
            out[svec_index(r, c)] = if r == c { m[(r, c)] } else { SQRT2 * 0.5 * (m[(r, c)] + m[(c, r)]) };
        }
    }
    out
}

pub fn smat(v: &[f64], k: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(k, k);
    for c in 0..k {
        for r in 0..c {
            let x = v[svec_index(r, c)] / SQRT2;
            m[(r, c)] = x;
            m[(c, r)] = x;
        }
        m[(c, c)] = v[svec_index(c, c)];
    }
    m
}

fn check_symmetric(m: &DMatrix<f64>) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::Contract("matrix is not square".into()));
    }
    let scale = m.amax().max(1.0);
    for c in 0..m.ncols() {
        for r in 0..c {
            if (m[(r, c)] - m[(c, r)]).abs() > 1e-12 * scale {
                return Err(Error::Contract(format!("matrix is not symmetric at ({r}, {c})")));
            }
        }
    }
    Ok(())
}

/// Splits a symmetric matrix into its PSD part: eigenvalues clipped at zero.
pub fn project_psd(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    check_symmetric(m)?;
    Ok(psd_part(m.clone()).0)
}

/// `(Π_PSD(m), λ_min(m))`.
fn psd_part(m: DMatrix<f64>) -> (DMatrix<f64>, f64) {
    let k = m.nrows();
    if k == 0 {
        return (m, 0.0);
    }
    let eig = SymmetricEigen::new(m);
    let lmin = eig.eigenvalues.min();
    let pos: Vec<usize> = (0..k).filter(|&i| eig.eigenvalues[i] > 0.0).collect();
    let mut w = DMatrix::zeros(k, pos.len());
    for (col, &i) in pos.iter().enumerate() {
        let s = eig.eigenvalues[i].sqrt();
        for r in 0..k {
            w[(r, col)] = eig.eigenvectors[(r, i)] * s;
        }
    }
    let mut out = DMatrix::zeros(k, k);
    out.gemm(1.0, &w, &w.transpose(), 0.0);
    (out, lmin)
}

pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    SymmetricEigen::new(m.clone()).eigenvalues.min()
}

/// Constraints compiled to unit-norm sparse rows over `z = (svec X̄, α)`.
struct Compiled {
    order: usize,
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
    b: Vec<f64>,
    norm: Vec<f64>,
    equality: Vec<bool>,
    base_len: usize,
    cut_ids: Vec<CutId>,
}

impl Compiled {
    fn new(problem: &SdpProblem) -> Compiled {
        let order = problem.order();
        let dim = order * (order + 1) / 2;
        let mut c = Compiled {
            order,
            dim,
            row_ptr: vec![0],
            cols: Vec::new(),
            vals: Vec::new(),
            b: Vec::new(),
            norm: Vec::new(),
            equality: Vec::new(),
            base_len: problem.base().len(),
            cut_ids: problem.cuts().iter().map(|(id, _)| *id).collect(),
        };
        for con in problem.constraints() {
            c.push(con);
        }
        c
    }

    fn push(&mut self, con: &LinearConstraint) {
        let start = self.cols.len();
        for t in con.terms() {
            let (col, v) = if t.row == t.col {
                (svec_index(t.row, t.row), t.coeff)
            } else {
                (svec_index(t.row, t.col), SQRT2 * t.coeff)
            };
            self.cols.push(col);
            self.vals.push(v);
        }
        if con.alpha_coeff != 0.0 {
            self.cols.push(self.dim);
            self.vals.push(con.alpha_coeff);
        }
        let norm = self.vals[start..].iter().map(|v| v * v).sum::<f64>().sqrt();
        let norm = if norm > 0.0 { norm } else { 1.0 };
        for v in &mut self.vals[start..] {
            *v /= norm;
        }
        self.row_ptr.push(self.cols.len());
        self.b.push(-con.constant / norm);
        self.norm.push(norm);
        self.equality.push(con.sense == Sense::Equal);
    }

    fn rows(&self) -> usize {
        self.b.len()
    }

    fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
        (&self.cols[a..b], &self.vals[a..b])
    }

    fn mul(&self, z: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            let (cols, vals) = self.row(i);
            *o = cols.iter().zip(vals).map(|(&c, &v)| v * z[c]).sum();
        }
    }

    /// `out += scale · Lᵀ w`
    fn mul_t_add(&self, w: &[f64], scale: f64, out: &mut [f64]) {
        for (i, &wi) in w.iter().enumerate() {
            if wi == 0.0 {
                continue;
            }
            let (cols, vals) = self.row(i);
            for (&c, &v) in cols.iter().zip(vals) {
                out[c] += scale * v * wi;
            }
        }
    }

    fn project(&self, i: usize, v: f64) -> f64 {
        if self.equality[i] {
            0.0
        } else {
            v.max(0.0)
        }
    }
}

/// Preconditioned conjugate gradients on `H w = g` with
/// `H = diag(rinv) + L Lᵀ / δ`; returns the iteration count.
fn pcg(
    lin: &Compiled,
    rinv: &[f64],
    delta: f64,
    g: &[f64],
    w: &mut [f64],
    tol: f64,
    max_iter: usize,
    scratch: &mut [f64],
) -> usize {
    let p_len = g.len();
    if p_len == 0 {
        return 0;
    }
    let apply = |v: &[f64], out: &mut [f64], scratch: &mut [f64]| {
        scratch.iter_mut().for_each(|s| *s = 0.0);
        lin.mul_t_add(v, 1.0, scratch);
        lin.mul(scratch, out);
        for i in 0..v.len() {
            out[i] = out[i] / delta + rinv[i] * v[i];
        }
    };
    let diag: Vec<f64> = (0..p_len).map(|i| rinv[i] + 1.0 / delta).collect();
    let mut r = vec![0.0; p_len];
    apply(w, &mut r, scratch);
    for i in 0..p_len {
        r[i] = g[i] - r[i];
    }
    let gnorm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
    let target = tol * gnorm.max(1e-30);
    let mut z: Vec<f64> = (0..p_len).map(|i| r[i] / diag[i]).collect();
    let mut p = z.clone();
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    let mut hp = vec![0.0; p_len];
    for it in 0..max_iter {
        let rnorm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if rnorm <= target {
            return it;
        }
        apply(&p, &mut hp, scratch);
        let php: f64 = p.iter().zip(&hp).map(|(a, b)| a * b).sum();
        if php <= 0.0 {
            return it;
        }
        let step = rz / php;
        for i in 0..p_len {
            w[i] += step * p[i];
            r[i] -= step * hp[i];
            z[i] = r[i] / diag[i];
        }
        let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..p_len {
            p[i] = z[i] + beta * p[i];
        }
    }
    max_iter
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

struct Metrics {
    primal: f64,
    dual: f64,
    gap: f64,
    dual_objective: f64,
}

/// Solves `problem`. A previous solution of a problem with the same base
/// constraints may be passed to warm start; cuts are matched by id and new
/// cuts start with zero multipliers.
pub fn solve(problem: &SdpProblem, settings: &SolverSettings, warm: Option<&SdpSolution>) -> Result<SdpSolution> {
    settings.validate()?;
    let lin = Compiled::new(problem);
    let (order, dim) = (lin.order, lin.dim);
    let nvar = dim + 1;
    let p = lin.rows();

    let mut rho = warm.map_or(settings.rho, |w| w.warm.rho);
    let mut x = vec![0.0; nvar];
    let mut s_psd = vec![0.0; dim];
    let mut y_psd = vec![0.0; dim];
    let mut s_lin = vec![0.0; p];
    let mut y_lin = vec![0.0; p];
    let mut s_alpha = 0.0;
    match warm {
        Some(w) if w.warm.x.len() == nvar && w.warm.base_s.len() == lin.base_len => {
            x.copy_from_slice(&w.warm.x);
            s_psd.copy_from_slice(&w.warm.s_psd);
            y_psd.copy_from_slice(&w.warm.y_psd);
            s_lin[..lin.base_len].copy_from_slice(&w.warm.base_s);
            y_lin[..lin.base_len].copy_from_slice(&w.warm.base_y);
            let mut ax = vec![0.0; p];
            lin.mul(&x, &mut ax);
            for (k, id) in lin.cut_ids.iter().enumerate() {
                let i = lin.base_len + k;
                match w.warm.cut_sy.get(id) {
                    Some(&(s, y)) => {
                        s_lin[i] = s;
                        y_lin[i] = y;
                    }
                    None => s_lin[i] = lin.project(i, lin.b[i] - ax[i]),
                }
            }
            s_alpha = x[dim];
        }
        Some(_) => return Err(Error::Contract("warm start comes from a different problem shape".into())),
        None => {
            // Start from X̄ = e₀e₀ᵀ, which satisfies the homogenising row.
            x[svec_index(0, 0)] = 1.0;
            s_psd[svec_index(0, 0)] = 1.0;
        }
    }

    let mut q = vec![0.0; nvar];
    q[dim] = 1.0;
    let alpha_r = settings.relaxation;
    let sigma = settings.sigma;

    let rho_row = |i: usize, rho: f64| if lin.equality[i] { rho * settings.rho_equality_scale } else { rho };
    let mut rinv: Vec<f64> = (0..p).map(|i| 1.0 / rho_row(i, rho)).collect();

    let mut rhs = vec![0.0; nvar];
    let mut g = vec![0.0; p];
    let mut w = vec![0.0; p];
    let mut xt = vec![0.0; nvar];
    let mut lxt = vec![0.0; p];
    let mut scratch = vec![0.0; nvar];
    let mut tmp_lin = vec![0.0; p];
    let mut log = Vec::new();
    let mut cg_total = 0;
    let mut status = SolveStatus::MaxIterations;
    let mut metrics = Metrics { primal: f64::INFINITY, dual: f64::INFINITY, gap: f64::INFINITY, dual_objective: f64::NAN };
    let mut y_prev_check = y_lin.clone();
    let mut certificate_hits = 0;
    let mut iterations = 0;

    for iter in 1..=settings.max_iterations {
        iterations = iter;
        let delta = sigma + rho;
        // rhs = σx − q + Lᵀ(R(b − s) + y) + (ρ s_X − y_X, ρ s_α)
        for i in 0..nvar {
            rhs[i] = sigma * x[i] - q[i];
        }
        for i in 0..p {
            tmp_lin[i] = (lin.b[i] - s_lin[i]) / rinv[i] + y_lin[i];
        }
        lin.mul_t_add(&tmp_lin, 1.0, &mut rhs);
        for i in 0..dim {
            rhs[i] += rho * s_psd[i] - y_psd[i];
        }
        rhs[dim] += rho * s_alpha;
        // Woodbury: x̃ = (rhs − Lᵀw)/δ with (R⁻¹ + LLᵀ/δ) w = L rhs / δ.
        lin.mul(&rhs, &mut g);
        for v in &mut g {
            *v /= delta;
        }
        cg_total += pcg(&lin, &rinv, delta, &g, &mut w, settings.cg_tolerance, settings.cg_max_iterations, &mut scratch);
        xt.copy_from_slice(&rhs);
        lin.mul_t_add(&w, -1.0, &mut xt);
        for v in &mut xt {
            *v /= delta;
        }
        lin.mul(&xt, &mut lxt);

        for i in 0..nvar {
            x[i] = alpha_r * xt[i] + (1.0 - alpha_r) * x[i];
        }
        for i in 0..p {
            let t = alpha_r * (lin.b[i] - lxt[i]) + (1.0 - alpha_r) * s_lin[i];
            let r = 1.0 / rinv[i];
            let s_new = lin.project(i, t + y_lin[i] / r);
            y_lin[i] += r * (t - s_new);
            s_lin[i] = s_new;
        }
        s_alpha = alpha_r * xt[dim] + (1.0 - alpha_r) * s_alpha;
        let mut v = vec![0.0; dim];
        for i in 0..dim {
            v[i] = alpha_r * xt[i] + (1.0 - alpha_r) * s_psd[i] + y_psd[i] / rho;
        }
        let (proj, _) = psd_part(smat(&v, order));
        s_psd = svec(&proj);
        for i in 0..dim {
            y_psd[i] = rho * (v[i] - s_psd[i]);
        }

        let check = iter % settings.check_interval == 0 || iter == settings.max_iterations;
        let adapt = settings.adaptive_rho && iter % settings.adapt_interval == 0;
        let logging = settings.log_every > 0 && iter % settings.log_every == 0;
        if !(check || adapt || logging) {
            continue;
        }
        metrics = compute_metrics(&lin, &s_psd, x[dim], &y_lin, &y_psd);
        if logging {
            log.push(IterationLog { iter, primal_res: metrics.primal, dual_res: metrics.dual, gap: metrics.gap, rho });
        }
        if check {
            if metrics.primal <= settings.tol_primal && metrics.dual <= settings.tol_dual && metrics.gap <= settings.tol_gap {
                status = SolveStatus::Optimal;
                break;
            }
            if infeasibility_certificate(&lin, &y_lin, &y_prev_check, &mut scratch) {
                certificate_hits += 1;
                if certificate_hits >= 3 {
                    status = SolveStatus::Infeasible;
                    break;
                }
            } else {
                certificate_hits = 0;
            }
            y_prev_check.copy_from_slice(&y_lin);
        }
        if adapt {
            // A large primal residual calls for a larger penalty, a large dual
            // residual for a smaller one.
            let ratio = metrics.primal / metrics.dual.max(1e-30);
            if ratio > settings.adapt_threshold || ratio * settings.adapt_threshold < 1.0 {
                rho = (rho * ratio.sqrt().clamp(0.2, 5.0)).clamp(1e-6, 1e6);
                for i in 0..p {
                    rinv[i] = 1.0 / rho_row(i, rho);
                }
            }
        }
    }
    metrics = if status == SolveStatus::Optimal { metrics } else { compute_metrics(&lin, &s_psd, x[dim], &y_lin, &y_psd) };

    let xbar_raw = smat(&s_psd, order);
    let (xbar, _) = psd_part(xbar_raw);
    let gammas: Vec<f64> = (0..p)
        .map(|i| {
            let g = -y_lin[i] / lin.norm[i];
            if lin.equality[i] { g } else { g.max(0.0) }
        })
        .collect();
    let bound = dual_bound(problem, &gammas[..lin.base_len], &gammas[lin.base_len..]);
    let warm_state = WarmStart {
        x: x.clone(),
        s_psd: s_psd.clone(),
        y_psd: y_psd.clone(),
        base_s: s_lin[..lin.base_len].to_vec(),
        base_y: y_lin[..lin.base_len].to_vec(),
        cut_sy: lin
            .cut_ids
            .iter()
            .enumerate()
            .map(|(k, id)| (*id, (s_lin[lin.base_len + k], y_lin[lin.base_len + k])))
            .collect(),
        rho,
    };
    Ok(SdpSolution {
        alpha: x[dim],
        xbar,
        base_duals: gammas[..lin.base_len].to_vec(),
        cut_duals: lin.cut_ids.iter().copied().zip(gammas[lin.base_len..].iter().copied()).collect(),
        status,
        residuals: Residuals { primal_infeas: metrics.primal, dual_infeas: metrics.dual, rel_gap: metrics.gap },
        dual_objective: metrics.dual_objective,
        dual_bound: bound,
        iterations,
        cg_iterations: cg_total,
        log,
        warm: warm_state,
    })
}

fn compute_metrics(lin: &Compiled, s_psd: &[f64], alpha: f64, y_lin: &[f64], y_psd: &[f64]) -> Metrics {
    let p = lin.rows();
    let dim = lin.dim;
    let mut z = Vec::with_capacity(dim + 1);
    z.extend_from_slice(s_psd);
    z.push(alpha);
    let mut lz = vec![0.0; p];
    lin.mul(&z, &mut lz);
    let mut primal: f64 = 0.0;
    for i in 0..p {
        let v = lz[i] - lin.b[i];
        primal = primal.max(if lin.equality[i] { v.abs() } else { v.max(0.0) });
    }
    // Aᵀy − q on the α coordinate and on svec X̄.
    let mut aty = vec![0.0; dim + 1];
    lin.mul_t_add(y_lin, 1.0, &mut aty);
    for i in 0..dim {
        aty[i] -= y_psd[i];
    }
    aty[dim] -= 1.0;
    let dual = aty[dim].abs().max(norm2(&aty[..dim]));
    let dual_objective: f64 = (0..p).map(|i| y_lin[i] * lin.b[i]).sum();
    let gap = (alpha - dual_objective).abs() / (1.0 + alpha.abs() + dual_objective.abs());
    Metrics { primal, dual, gap, dual_objective }
}

/// Farkas-type test on the change of the constraint multipliers between
/// checks: `Aᵀδy ≈ 0` while `bᵀδy > 0` proves the constraints inconsistent.
fn infeasibility_certificate(lin: &Compiled, y: &[f64], y_prev: &[f64], scratch: &mut [f64]) -> bool {
    let dy: Vec<f64> = y.iter().zip(y_prev).map(|(a, b)| a - b).collect();
    let size = norm_inf(&dy);
    if size < 1e-6 {
        return false;
    }
    scratch.iter_mut().for_each(|v| *v = 0.0);
    lin.mul_t_add(&dy, 1.0, scratch);
    // The PSD copy rows absorb any NSD part of Lᵀδy.
    let dim = lin.dim;
    let m = smat(&scratch[..dim], lin.order);
    let (psd, _) = psd_part(m.clone());
    let residual = norm2(&svec(&psd)).max(scratch[dim].abs());
    let support: f64 = dy.iter().zip(&lin.b).map(|(d, b)| d * b).sum();
    residual <= 1e-5 * size && support > 1e-5 * size
}

/// `Σ γ_i A_i` as a symmetric matrix.
pub fn dual_matrix(problem: &SdpProblem, base: &[f64], cuts: &[f64]) -> DMatrix<f64> {
    let k = problem.order();
    let mut s = DMatrix::zeros(k, k);
    for (c, &g) in problem.constraints().zip(base.iter().chain(cuts)) {
        if g == 0.0 {
            continue;
        }
        for t in c.terms() {
            s[(t.row, t.col)] += g * t.coeff;
            if t.row != t.col {
                s[(t.col, t.row)] += g * t.coeff;
            }
        }
    }
    s
}

/// A lower bound on the problem's optimum valid for any multipliers.
///
/// Inequality multipliers are clipped at zero and all multipliers rescaled so
/// that the `α` coefficient of the Lagrangian vanishes; then for every
/// feasible point `α ≥ Σ γ_i c_i + ⟨S, X̄⟩ ≥ Σ γ_i c_i + min(0, λ_min(S))·t`
/// where `t` bounds `tr X̄`. Without a trace bound a negative `λ_min(S)`
/// gives no bound (`−∞`).
pub fn dual_bound(problem: &SdpProblem, base: &[f64], cuts: &[f64]) -> f64 {
    let mut gamma: Vec<f64> = Vec::with_capacity(base.len() + cuts.len());
    for (c, &g) in problem.constraints().zip(base.iter().chain(cuts)) {
        gamma.push(if c.sense == Sense::LessEqual { g.max(0.0) } else { g });
    }
    let weight: f64 = problem.constraints().zip(&gamma).map(|(c, g)| -g * c.alpha_coeff).sum();
    if !(weight > 0.0) {
        return f64::NEG_INFINITY;
    }
    for g in &mut gamma {
        *g /= weight;
    }
    let (b, c) = gamma.split_at(base.len());
    let s = dual_matrix(problem, b, c);
    let constant: f64 = problem.constraints().zip(&gamma).map(|(c, g)| g * c.constant).sum();
    let lmin = min_eigenvalue(&s);
    if lmin >= 0.0 {
        return constant;
    }
    match problem.trace_bound() {
        Some(t) => constant + t * lmin,
        None => f64::NEG_INFINITY,
    }
}

/// Residuals of `(α, X̄, γ)` recomputed from the problem data:
/// the largest raw constraint violation (or negative eigenvalue of `X̄`),
/// the largest dual infeasibility (stationarity in `α`, negative eigenvalue
/// of `Σ γ_i A_i`, negative inequality multiplier), and the relative gap
/// between `α` and `Σ γ_i c_i`.
pub fn residuals(problem: &SdpProblem, solution: &SdpSolution) -> Result<Residuals> {
    let cut_duals = solution.cut_dual_map();
    let cuts: Vec<f64> = problem
        .cuts()
        .iter()
        .map(|(id, _)| cut_duals.get(id).copied().unwrap_or(0.0))
        .collect();
    residuals_of(problem, solution.alpha, &solution.xbar, &solution.base_duals, &cuts)
}

pub fn residuals_of(problem: &SdpProblem, alpha: f64, xbar: &DMatrix<f64>, base: &[f64], cuts: &[f64]) -> Result<Residuals> {
    if base.len() != problem.base().len() || cuts.len() != problem.cuts().len() {
        return Err(Error::Dimension { expected: problem.constraint_count(), got: base.len() + cuts.len() });
    }
    if xbar.nrows() != problem.order() || xbar.ncols() != problem.order() {
        return Err(Error::Dimension { expected: problem.order(), got: xbar.nrows() });
    }
    let mut primal: f64 = (-min_eigenvalue(xbar)).max(0.0);
    let mut dual: f64 = 0.0;
    let mut stationarity = 1.0;
    let mut dual_objective = 0.0;
    for (c, &g) in problem.constraints().zip(base.iter().chain(cuts)) {
        primal = primal.max(c.infeasibility_of(c.evaluate_unchecked(xbar, alpha)));
        if c.sense == Sense::LessEqual {
            dual = dual.max(-g);
        }
        stationarity += g * c.alpha_coeff;
        dual_objective += g * c.constant;
    }
    dual = dual.max(stationarity.abs());
    dual = dual.max(-min_eigenvalue(&dual_matrix(problem, base, cuts)));
    let rel_gap = (alpha - dual_objective).abs() / (1.0 + alpha.abs() + dual_objective.abs());
    Ok(Residuals { primal_infeas: primal, dual_infeas: dual, rel_gap })
}
