//! The basic semidefinite relaxation: minimise `α` subject to one cutwidth
//! inequality per vertex, `diag(X) = x` and `X̄_00 = 1`, over the bordered PSD
//! matrix `X̄ = [[1, xᵀ], [x, X]]` of order `C(n, 2) + 1`.
//!
//! Constraints are sparse linear functionals of `X̄` plus a multiple of `α`.
//! A term at position `(r, c)`, `r < c`, multiplies `X̄_rc + X̄_cr`, so adding
//! a single off-diagonal entry `w · X̄_rc` stores the coefficient `w / 2`.

use std::fmt;
use std::io::Write;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ordering::{pair_count, pair_index, LoVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sense {
    /// `value ≤ 0`
    LessEqual,
    /// `value = 0`
    Equal,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::LessEqual => "<=0",
            Sense::Equal => "=0",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub row: usize,
    pub col: usize,
    pub coeff: f64,
}

/// `constant + alpha_coeff · α + Σ terms` compared against zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearConstraint {
    pub sense: Sense,
    pub constant: f64,
    pub alpha_coeff: f64,
    terms: Vec<Term>,
}

impl LinearConstraint {
    pub fn new(sense: Sense) -> Self {
        LinearConstraint {
            sense,
            constant: 0.0,
            alpha_coeff: 0.0,
            terms: Vec::new(),
        }
    }

    /// Adds `weight · X̄_rc` (one entry, not the symmetric pair).
    pub fn add_entry(&mut self, r: usize, c: usize, weight: f64) -> &mut Self {
        let (row, col) = (r.min(c), r.max(c));
        let coeff = if row == col { weight } else { 0.5 * weight };
        self.terms.push(Term { row, col, coeff });
        self
    }

    /// Adds a raw symmetric-position coefficient (see module docs).
    pub fn add_term(&mut self, row: usize, col: usize, coeff: f64) -> &mut Self {
        assert!(row <= col, "terms are stored with row <= col");
        self.terms.push(Term { row, col, coeff });
        self
    }

    /// Sorts and merges terms, dropping exact zeros.
    pub fn finish(mut self) -> Self {
        self.terms
            .sort_unstable_by_key(|t| (t.row, t.col));
        let mut merged: Vec<Term> = Vec::with_capacity(self.terms.len());
        for t in self.terms {
            match merged.last_mut() {
                Some(last) if last.row == t.row && last.col == t.col => last.coeff += t.coeff,
                _ => merged.push(t),
            }
        }
        merged.retain(|t| t.coeff != 0.0);
        self.terms = merged;
        self
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn max_position(&self) -> Option<usize> {
        self.terms.iter().map(|t| t.col).max()
    }

    /// `constant + alpha_coeff · α + Σ terms` at `(X̄, α)`.
    pub fn evaluate(&self, xbar: &DMatrix<f64>, alpha: f64) -> Result<f64> {
        if let Some(max) = self.max_position() {
            if max >= xbar.nrows() || xbar.nrows() != xbar.ncols() {
                return Err(Error::Dimension {
                    expected: max + 1,
                    got: xbar.nrows().min(xbar.ncols()),
                });
            }
        }
        Ok(self.evaluate_unchecked(xbar, alpha))
    }

    pub(crate) fn evaluate_unchecked(&self, xbar: &DMatrix<f64>, alpha: f64) -> f64 {
        let mut value = self.constant + self.alpha_coeff * alpha;
        for t in &self.terms {
            value += if t.row == t.col {
                t.coeff * xbar[(t.row, t.row)]
            } else {
                t.coeff * (xbar[(t.row, t.col)] + xbar[(t.col, t.row)])
            };
        }
        value
    }

    /// Violation magnitude of a constraint value: the signed value for `≤ 0`
    /// (positive means violated), `|value|` for `= 0`.
    pub fn violation_of(&self, value: f64) -> f64 {
        match self.sense {
            Sense::LessEqual => value,
            Sense::Equal => value.abs(),
        }
    }

    /// Nonnegative infeasibility: `max(0, value)` or `|value|`.
    pub fn infeasibility_of(&self, value: f64) -> f64 {
        self.violation_of(value).max(0.0)
    }
}

/// Role of a base constraint; cuts are tracked separately.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseRole {
    Cutwidth(usize),
    Diagonal(usize),
    Homogenizing,
    Other,
}

/// Handle of a cut added to a problem; stable across additions and removals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CutId(pub u64);

#[derive(Clone, Debug)]
pub struct SdpProblem {
    m: usize,
    base: Vec<LinearConstraint>,
    roles: Vec<BaseRole>,
    cuts: Vec<(CutId, LinearConstraint)>,
    next_cut: u64,
    trace_bound: Option<f64>,
}

impl SdpProblem {
    /// An empty problem over a lifted matrix of order `m + 1`. Without a
    /// trace bound the safeguarded dual bound can only use PSD dual slacks.
    pub fn new(m: usize, trace_bound: Option<f64>) -> Self {
        SdpProblem {
            m,
            base: Vec::new(),
            roles: Vec::new(),
            cuts: Vec::new(),
            next_cut: 0,
            trace_bound,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Order of `X̄`.
    pub fn order(&self) -> usize {
        self.m + 1
    }

    /// An upper bound on `tr(X̄)` valid for every feasible point.
    pub fn trace_bound(&self) -> Option<f64> {
        self.trace_bound
    }

    pub fn push_base(&mut self, constraint: LinearConstraint, role: BaseRole) -> Result<()> {
        self.check_positions(&constraint)?;
        self.base.push(constraint);
        self.roles.push(role);
        Ok(())
    }

    pub fn base(&self) -> &[LinearConstraint] {
        &self.base
    }

    pub fn base_roles(&self) -> &[BaseRole] {
        &self.roles
    }

    pub fn add_cut(&mut self, constraint: LinearConstraint) -> Result<CutId> {
        self.check_positions(&constraint)?;
        let id = CutId(self.next_cut);
        self.next_cut += 1;
        self.cuts.push((id, constraint));
        Ok(id)
    }

    pub fn remove_cuts(&mut self, ids: &[CutId]) {
        if ids.is_empty() {
            return;
        }
        let drop: std::collections::HashSet<_> = ids.iter().copied().collect();
        self.cuts.retain(|(id, _)| !drop.contains(id));
    }

    pub fn cuts(&self) -> &[(CutId, LinearConstraint)] {
        &self.cuts
    }

    pub fn cut(&self, id: CutId) -> Option<&LinearConstraint> {
        self.cuts.iter().find(|(c, _)| *c == id).map(|(_, c)| c)
    }

    /// Base constraints followed by cuts.
    pub fn constraints(&self) -> impl Iterator<Item = &LinearConstraint> {
        self.base.iter().chain(self.cuts.iter().map(|(_, c)| c))
    }

    pub fn constraint_count(&self) -> usize {
        self.base.len() + self.cuts.len()
    }

    fn check_positions(&self, c: &LinearConstraint) -> Result<()> {
        match c.max_position() {
            Some(max) if max > self.m => Err(Error::Contract(format!(
                "constraint touches row {max} of a lifted matrix of order {}",
                self.m + 1
            ))),
            _ => Ok(()),
        }
    }

    /// Writes a plain-text listing of every constraint:
    /// `kind index sense constant alpha_coeff nterms row:col:coeff ...`.
    pub fn write_dump<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(
            out,
            "# m={} order={} base={} cuts={}",
            self.m,
            self.order(),
            self.base.len(),
            self.cuts.len()
        )?;
        let rows = self
            .base
            .iter()
            .enumerate()
            .map(|(i, c)| ("base", i as u64, c))
            .chain(self.cuts.iter().map(|(id, c)| ("cut", id.0, c)));
        for (kind, index, c) in rows {
            write!(
                out,
                "{kind} {index} {} {:?} {:?} {}",
                c.sense,
                c.constant,
                c.alpha_coeff,
                c.terms.len()
            )?;
            for t in &c.terms {
                write!(out, " {}:{}:{:?}", t.row, t.col, t.coeff)?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Lifted-matrix row of pair `(i, j)`, `i < j`.
#[inline]
pub fn lifted(i: usize, j: usize, n: usize) -> usize {
    pair_index(i, j, n) + 1
}

/// The right-hand side of vertex `v`'s cutwidth inequality as a linear
/// functional of `X̄` (no `α` term), transcribed from the expanded quadratic
/// expression with products `x_ab x_cd` replaced by `X_{ab,cd}`.
pub fn cutwidth_rhs(graph: &Graph, v: usize) -> LinearConstraint {
    let n = graph.n();
    let a = |u: usize, w: usize| graph.a(u, w) as f64;
    let x = |i: usize, j: usize| lifted(i, j, n);
    let mut c = LinearConstraint::new(Sense::LessEqual);
    for w in 0..v {
        for u in v..n {
            c.constant += a(u, w);
        }
    }
    for w in v + 1..n {
        for u in v..n {
            if u != w && graph.has_edge(u, w) {
                c.add_entry(0, x(v, w), 1.0);
            }
        }
    }
    for u in 0..v {
        for w in 0..v {
            if w != u && graph.has_edge(u, w) {
                c.add_entry(0, x(u, v), 1.0);
            }
        }
    }
    for u in v + 1..n {
        for w in 0..v {
            if graph.has_edge(u, w) {
                c.add_entry(0, x(v, u), -1.0);
                c.add_entry(0, x(w, v), -1.0);
            }
        }
    }
    for w in 0..v {
        if graph.has_edge(v, w) {
            c.add_entry(0, x(w, v), -1.0);
        }
    }
    for u in 0..v {
        for w in v + 1..n {
            if graph.has_edge(u, w) {
                c.add_entry(x(u, v), x(v, w), 2.0 * a(u, w));
            }
        }
    }
    for u in v + 1..n {
        for w in v + 1..n {
            if w != u && graph.has_edge(u, w) {
                c.add_entry(x(v, u), x(v, w), -1.0);
            }
        }
    }
    for u in 0..v {
        for w in 0..v {
            if w != u && graph.has_edge(u, w) {
                c.add_entry(x(u, v), x(w, v), -1.0);
            }
        }
    }
    c.finish()
}

/// Builds the basic relaxation: `n` cutwidth inequalities `RHS_v − α ≤ 0`,
/// then `C(n, 2)` equalities `X̄_pp − X̄_0p = 0`, then `X̄_00 − 1 = 0`.
pub fn build_basic_relaxation(graph: &Graph) -> Result<SdpProblem> {
    let n = graph.n();
    if n < 2 {
        return Err(Error::Contract(format!(
            "the relaxation needs at least two vertices, got {n}"
        )));
    }
    let m = pair_count(n);
    // Every feasible X̄ has X̄_00 = 1 and X̄_pp = X̄_0p ≤ 1, so tr(X̄) ≤ m + 1.
    let mut problem = SdpProblem::new(m, Some((m + 1) as f64));
    for v in 0..n {
        let mut c = cutwidth_rhs(graph, v);
        c.alpha_coeff = -1.0;
        problem.push_base(c, BaseRole::Cutwidth(v))?;
    }
    for p in 1..=m {
        let mut c = LinearConstraint::new(Sense::Equal);
        c.add_entry(p, p, 1.0).add_entry(0, p, -1.0);
        problem.push_base(c.finish(), BaseRole::Diagonal(p - 1))?;
    }
    let mut c = LinearConstraint::new(Sense::Equal);
    c.add_entry(0, 0, 1.0);
    c.constant = -1.0;
    problem.push_base(c.finish(), BaseRole::Homogenizing)?;
    Ok(problem)
}

/// `(1, x)(1, x)ᵀ` for a linear-ordering vector.
pub fn rank_one_lift(x: &LoVector) -> DMatrix<f64> {
    let v: Vec<f64> = std::iter::once(1.0).chain(x.as_slice().iter().copied()).collect();
    let v = nalgebra::DVector::from_vec(v);
    &v * v.transpose()
}

/// The `x` part (row 0 without its first entry) of a lifted matrix.
pub fn linear_part(xbar: &DMatrix<f64>, n: usize) -> Result<LoVector> {
    let m = pair_count(n);
    if xbar.nrows() != m + 1 {
        return Err(Error::Dimension {
            expected: m + 1,
            got: xbar.nrows(),
        });
    }
    LoVector::new(n, (1..=m).map(|p| xbar[(0, p)]).collect())
}
