//! Strengthening cuts over the lifted matrix.
//!
//! Every cut is a short linear functional of `X̄` compared against zero.
//! `x_ab` is read from row 0 (`X̄_{0,ab}`) and `X_{ab,cd}` from
//! `X̄_{ab,cd}`; see [`crate::sdp_model`] for the indexing.

use std::fmt;

use arrayvec::ArrayVec;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sdp_model::{lifted, LinearConstraint, Sense};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CutKind {
    Dicycle3,
    Tri1,
    Tri2,
    Tri3,
    Tri4,
    Tri5,
    Lo24,
    RltXL,
    RltXR,
    Rlt1XL,
    Rlt1XR,
}

impl CutKind {
    pub const ALL: [CutKind; 11] = [
        CutKind::Dicycle3,
        CutKind::Tri1,
        CutKind::Tri2,
        CutKind::Tri3,
        CutKind::Tri4,
        CutKind::Tri5,
        CutKind::Lo24,
        CutKind::RltXL,
        CutKind::RltXR,
        CutKind::Rlt1XL,
        CutKind::Rlt1XR,
    ];

    pub const TRIANGLES: [CutKind; 5] = [
        CutKind::Tri1,
        CutKind::Tri2,
        CutKind::Tri3,
        CutKind::Tri4,
        CutKind::Tri5,
    ];

    pub const RLT: [CutKind; 4] = [
        CutKind::RltXL,
        CutKind::RltXR,
        CutKind::Rlt1XL,
        CutKind::Rlt1XR,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CutKind::Dicycle3 => "DICYCLE3",
            CutKind::Tri1 => "TRI1",
            CutKind::Tri2 => "TRI2",
            CutKind::Tri3 => "TRI3",
            CutKind::Tri4 => "TRI4",
            CutKind::Tri5 => "TRI5",
            CutKind::Lo24 => "LO24",
            CutKind::RltXL => "RLT_XL",
            CutKind::RltXR => "RLT_XR",
            CutKind::Rlt1XL => "RLT_1XL",
            CutKind::Rlt1XR => "RLT_1XR",
        }
    }

    pub fn from_name(name: &str) -> Option<CutKind> {
        CutKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(name))
    }

    pub fn sense(self) -> Sense {
        match self {
            CutKind::Dicycle3 => Sense::Equal,
            _ => Sense::LessEqual,
        }
    }

    pub fn is_rlt(self) -> bool {
        CutKind::RLT.contains(&self)
    }

    /// Number of index slots used in [`Cut::idx`].
    pub fn arity(self) -> usize {
        match self {
            CutKind::Dicycle3 => 3,
            CutKind::Tri1 | CutKind::Tri2 | CutKind::Tri3 => 4,
            CutKind::Tri4 | CutKind::Tri5 => 6,
            CutKind::Lo24 => 4,
            CutKind::RltXL | CutKind::RltXR | CutKind::Rlt1XL | CutKind::Rlt1XR => 5,
        }
    }
}

impl fmt::Display for CutKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The separator's search state `((i, j, k, ℓ), (u, v), (q, w))`.
///
/// The quadruple is shortened to `min(n, 4)` entries on tiny graphs, so
/// families needing more vertices than exist are simply not instantiable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IndexTuple {
    pub quad: [usize; 4],
    pub quad_len: usize,
    pub uv: (usize, usize),
    pub qw: (usize, usize),
}

impl IndexTuple {
    pub fn quad(&self) -> &[usize] {
        &self.quad[..self.quad_len]
    }

    /// Strictly increasing quadruple, `u < v`, `q < w`, all below `n`.
    pub fn is_valid(&self, n: usize) -> bool {
        let quad = self.quad();
        self.quad_len == n.min(4)
            && quad.windows(2).all(|w| w[0] < w[1])
            && quad.iter().all(|&i| i < n)
            && self.uv.0 < self.uv.1
            && self.uv.1 < n
            && self.qw.0 < self.qw.1
            && self.qw.1 < n
    }
}

/// A concrete cut: a kind plus its vertex indices (0-based).
///
/// Layout of `idx` by kind, unused slots zero:
///
/// | kind        | idx                  |
/// |-------------|----------------------|
/// | DICYCLE3    | `i j k`              |
/// | TRI1..TRI3  | `i j u v`            |
/// | TRI4, TRI5  | `i j u v q w`        |
/// | LO24        | `i j k ℓ`            |
/// | RLT_*       | `i j k u v`          |
///
/// For TRI4 the pair `(u, v)` is the one appearing on both sides:
/// `X_{ij,uv} + X_{qw,uv} ≤ X_{uv,uv} + X_{ij,qw}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cut {
    pub kind: CutKind,
    pub idx: [usize; 6],
}

/// One entry of a cut's linear form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FormTerm {
    pub row: usize,
    pub col: usize,
    pub coeff: f64,
}

/// `constant + Σ coeff · X̄[row, col]`.
#[derive(Clone, Debug, PartialEq)]
pub struct CutForm {
    pub sense: Sense,
    pub constant: f64,
    pub terms: ArrayVec<FormTerm, 8>,
}

impl CutForm {
    fn new(sense: Sense, constant: f64) -> Self {
        CutForm {
            sense,
            constant,
            terms: ArrayVec::new(),
        }
    }

    fn push(&mut self, row: usize, col: usize, coeff: f64) {
        self.terms.push(FormTerm { row, col, coeff });
    }

    pub fn value(&self, xbar: &DMatrix<f64>) -> f64 {
        self.terms
            .iter()
            .fold(self.constant, |acc, t| acc + t.coeff * xbar[(t.row, t.col)])
    }

    pub fn violation(&self, xbar: &DMatrix<f64>) -> f64 {
        let v = self.value(xbar);
        match self.sense {
            Sense::LessEqual => v,
            Sense::Equal => v.abs(),
        }
    }

    pub fn to_constraint(&self) -> LinearConstraint {
        let mut c = LinearConstraint::new(self.sense);
        c.constant = self.constant;
        for t in &self.terms {
            c.add_entry(t.row, t.col, t.coeff);
        }
        c.finish()
    }
}

fn ordered_pair(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

impl Cut {
    pub fn new(kind: CutKind, indices: &[usize]) -> Result<Cut> {
        if indices.len() != kind.arity() {
            return Err(Error::Contract(format!(
                "{kind} takes {} indices, got {}",
                kind.arity(),
                indices.len()
            )));
        }
        let mut idx = [0; 6];
        idx[..indices.len()].copy_from_slice(indices);
        Ok(Cut { kind, idx })
    }

    /// Extracts the indices `kind` needs from a search tuple. TRI kinds take
    /// `(i, j)` from the first two quadruple entries. Returns `None` when the
    /// quadruple is too short for the kind.
    pub fn from_tuple(kind: CutKind, t: &IndexTuple) -> Option<Cut> {
        let q = t.quad();
        let need = match kind {
            CutKind::Dicycle3 | CutKind::RltXL | CutKind::RltXR | CutKind::Rlt1XL | CutKind::Rlt1XR => 3,
            CutKind::Lo24 => 4,
            _ => 2,
        };
        if q.len() < need {
            return None;
        }
        let idx = match kind {
            CutKind::Dicycle3 => [q[0], q[1], q[2], 0, 0, 0],
            CutKind::Tri1 | CutKind::Tri2 | CutKind::Tri3 => [q[0], q[1], t.uv.0, t.uv.1, 0, 0],
            CutKind::Tri4 | CutKind::Tri5 => [q[0], q[1], t.uv.0, t.uv.1, t.qw.0, t.qw.1],
            CutKind::Lo24 => [q[0], q[1], q[2], q[3], 0, 0],
            _ => [q[0], q[1], q[2], t.uv.0, t.uv.1, 0],
        };
        Some(Cut { kind, idx })
    }

    pub fn indices(&self) -> &[usize] {
        &self.idx[..self.kind.arity()]
    }

    /// Pairs of a TRI cut in order `(i,j), (u,v)[, (q,w)]`.
    fn tri_pairs(&self) -> ArrayVec<(usize, usize), 3> {
        let i = &self.idx;
        let mut out = ArrayVec::new();
        out.push((i[0], i[1]));
        out.push((i[2], i[3]));
        if matches!(self.kind, CutKind::Tri4 | CutKind::Tri5) {
            out.push((i[4], i[5]));
        }
        out
    }

    /// Checks index ordering, range and distinctness. TRI cuts need pairwise
    /// distinct pairs: with a repeated pair each is either identically zero
    /// or implied by `diag(X) = x` and positive semidefiniteness.
    pub fn validate(&self, n: usize) -> Result<()> {
        let bad = |why: &str| Err(Error::Contract(format!("{self}: {why}")));
        if self.indices().iter().any(|&i| i >= n) {
            return bad("vertex out of range");
        }
        let increasing = |s: &[usize]| s.windows(2).all(|w| w[0] < w[1]);
        match self.kind {
            CutKind::Dicycle3 | CutKind::Lo24 => {
                if !increasing(self.indices()) {
                    return bad("indices must be strictly increasing");
                }
            }
            CutKind::RltXL | CutKind::RltXR | CutKind::Rlt1XL | CutKind::Rlt1XR => {
                if !increasing(&self.idx[..3]) || self.idx[3] >= self.idx[4] {
                    return bad("need i < j < k and u < v");
                }
            }
            _ => {
                let pairs = self.tri_pairs();
                if pairs.iter().any(|p| p.0 >= p.1) {
                    return bad("pairs must be increasing");
                }
                for a in 0..pairs.len() {
                    for b in a + 1..pairs.len() {
                        if pairs[a] == pairs[b] {
                            return bad("pairs must be distinct");
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// True for RLT cuts whose lifting pair is one of the triple's own pairs;
    /// those are implied by triangle inequalities and 3-dicycle equations.
    pub fn is_redundant_lifting(&self) -> bool {
        self.kind.is_rlt() && is_redundant_lifting((self.idx[0], self.idx[1], self.idx[2]), (self.idx[3], self.idx[4]))
    }

    /// The cut's linear form. Assumes the indices are ordered as in
    /// [`Cut::validate`] but does not require distinctness.
    pub fn form(&self, n: usize) -> CutForm {
        let p = |a: usize, b: usize| {
            let (a, b) = ordered_pair(a, b);
            lifted(a, b, n)
        };
        let x = &self.idx;
        let mut f;
        match self.kind {
            CutKind::Dicycle3 => {
                let (ij, ik, jk) = (p(x[0], x[1]), p(x[0], x[2]), p(x[1], x[2]));
                f = CutForm::new(Sense::Equal, 0.0);
                f.push(0, ik, 1.0);
                f.push(ij, ik, -1.0);
                f.push(ik, jk, -1.0);
                f.push(ij, jk, 1.0);
            }
            CutKind::Tri1 => {
                f = CutForm::new(Sense::LessEqual, 0.0);
                f.push(p(x[0], x[1]), p(x[2], x[3]), -1.0);
            }
            CutKind::Tri2 => {
                let (a, b) = (p(x[0], x[1]), p(x[2], x[3]));
                f = CutForm::new(Sense::LessEqual, 0.0);
                f.push(a, b, 1.0);
                f.push(a, a, -1.0);
            }
            CutKind::Tri3 => {
                let (a, b) = (p(x[0], x[1]), p(x[2], x[3]));
                f = CutForm::new(Sense::LessEqual, -1.0);
                f.push(a, a, 1.0);
                f.push(b, b, 1.0);
                f.push(a, b, -1.0);
            }
            CutKind::Tri4 => {
                let (a, c, b) = (p(x[0], x[1]), p(x[2], x[3]), p(x[4], x[5]));
                f = CutForm::new(Sense::LessEqual, 0.0);
                f.push(a, c, 1.0);
                f.push(b, c, 1.0);
                f.push(c, c, -1.0);
                f.push(a, b, -1.0);
            }
            CutKind::Tri5 => {
                let (a, b, c) = (p(x[0], x[1]), p(x[2], x[3]), p(x[4], x[5]));
                f = CutForm::new(Sense::LessEqual, -1.0);
                f.push(a, a, 1.0);
                f.push(b, b, 1.0);
                f.push(c, c, 1.0);
                f.push(a, b, -1.0);
                f.push(a, c, -1.0);
                f.push(b, c, -1.0);
            }
            CutKind::Lo24 => {
                let (i, j, k, l) = (x[0], x[1], x[2], x[3]);
                f = CutForm::new(Sense::LessEqual, 0.0);
                f.push(0, p(i, l), 1.0);
                f.push(p(i, k), p(j, k), 1.0);
                f.push(p(j, k), p(j, l), 1.0);
                f.push(0, p(i, k), -1.0);
                f.push(0, p(j, l), -1.0);
                f.push(p(i, j), p(k, l), -1.0);
                f.push(p(i, l), p(j, k), -1.0);
            }
            CutKind::RltXL | CutKind::RltXR | CutKind::Rlt1XL | CutKind::Rlt1XR => {
                let (ij, jk, ik, uv) = (p(x[0], x[1]), p(x[1], x[2]), p(x[0], x[2]), p(x[3], x[4]));
                // s = X_{ij,uv} + X_{jk,uv} − X_{ik,uv}, l = x_ij + x_jk − x_ik
                let (s_sign, l_sign, constant, x_uv) = match self.kind {
                    CutKind::RltXL => (-1.0, 0.0, 0.0, 0.0),
                    CutKind::RltXR => (1.0, 0.0, 0.0, -1.0),
                    CutKind::Rlt1XL => (1.0, -1.0, 0.0, 0.0),
                    _ => (-1.0, 1.0, -1.0, 1.0),
                };
                f = CutForm::new(Sense::LessEqual, constant);
                if l_sign != 0.0 {
                    f.push(0, ij, l_sign);
                    f.push(0, jk, l_sign);
                    f.push(0, ik, -l_sign);
                }
                f.push(ij, uv, s_sign);
                f.push(jk, uv, s_sign);
                f.push(ik, uv, -s_sign);
                if x_uv != 0.0 {
                    f.push(0, uv, x_uv);
                }
            }
        }
        f
    }

    pub fn violation(&self, xbar: &DMatrix<f64>, n: usize) -> f64 {
        self.form(n).violation(xbar)
    }

    /// Representative under the symmetries that leave the constraint
    /// unchanged: pair exchange for TRI1 and TRI3, exchange of the two outer
    /// pairs for TRI4, any pair order for TRI5.
    pub fn canonical(&self) -> Cut {
        let mut c = *self;
        let i = &mut c.idx;
        match self.kind {
            CutKind::Tri1 | CutKind::Tri3 => {
                if (i[2], i[3]) < (i[0], i[1]) {
                    i.swap(0, 2);
                    i.swap(1, 3);
                }
            }
            CutKind::Tri4 => {
                if (i[4], i[5]) < (i[0], i[1]) {
                    i.swap(0, 4);
                    i.swap(1, 5);
                }
            }
            CutKind::Tri5 => {
                let mut pairs = [(i[0], i[1]), (i[2], i[3]), (i[4], i[5])];
                pairs.sort_unstable();
                *i = [pairs[0].0, pairs[0].1, pairs[1].0, pairs[1].1, pairs[2].0, pairs[2].1];
            }
            _ => {}
        }
        c
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.kind)?;
        for (pos, v) in self.indices().iter().enumerate() {
            if pos > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        f.write_str(")")
    }
}

/// `(u, v)` is one of `(i, j)`, `(j, k)`, `(i, k)`.
pub fn is_redundant_lifting(ijk: (usize, usize, usize), uv: (usize, usize)) -> bool {
    let (i, j, k) = ijk;
    uv == (i, j) || uv == (j, k) || uv == (i, k)
}

/// Validated constraint for a cut.
pub fn instantiate_cut(cut: &Cut, n: usize) -> Result<LinearConstraint> {
    cut.validate(n)?;
    Ok(cut.form(n).to_constraint())
}

/// A separated cut with the violation it had at the matrix it was found on.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutCandidate {
    pub cut: Cut,
    pub violation: f64,
}

/// Every valid cut of `kind` on `n` vertices, redundant liftings included.
pub fn enumerate_all(kind: CutKind, n: usize) -> Vec<Cut> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    let triples: Vec<[usize; 3]> = (0..n)
        .flat_map(|i| (i + 1..n).flat_map(move |j| (j + 1..n).map(move |k| [i, j, k])))
        .collect();
    let mut out = Vec::new();
    match kind {
        CutKind::Dicycle3 => {
            for t in &triples {
                out.push(Cut { kind, idx: [t[0], t[1], t[2], 0, 0, 0] });
            }
        }
        CutKind::Lo24 => {
            for t in &triples {
                for l in t[2] + 1..n {
                    out.push(Cut { kind, idx: [t[0], t[1], t[2], l, 0, 0] });
                }
            }
        }
        CutKind::Tri1 | CutKind::Tri2 | CutKind::Tri3 => {
            for &a in &pairs {
                for &b in &pairs {
                    if a != b {
                        out.push(Cut { kind, idx: [a.0, a.1, b.0, b.1, 0, 0] });
                    }
                }
            }
        }
        CutKind::Tri4 | CutKind::Tri5 => {
            for &a in &pairs {
                for &b in &pairs {
                    for &c in &pairs {
                        if a != b && a != c && b != c {
                            out.push(Cut { kind, idx: [a.0, a.1, b.0, b.1, c.0, c.1] });
                        }
                    }
                }
            }
        }
        _ => {
            for t in &triples {
                for &(u, v) in &pairs {
                    out.push(Cut { kind, idx: [t[0], t[1], t[2], u, v, 0] });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordering::{LoVector, Permutation};
    use crate::sdp_model::rank_one_lift;

    fn zeros(n: usize) -> DMatrix<f64> {
        let m = crate::ordering::pair_count(n);
        DMatrix::zeros(m + 1, m + 1)
    }

    fn set(x: &mut DMatrix<f64>, r: usize, c: usize, v: f64) {
        x[(r, c)] = v;
        x[(c, r)] = v;
    }

    #[test]
    fn dicycle_form_matches_literal_expression() {
        let n = 4;
        let cut = Cut::new(CutKind::Dicycle3, &[0, 1, 3]).unwrap();
        let (ij, ik, jk) = (lifted(0, 1, n), lifted(0, 3, n), lifted(1, 3, n));
        let mut x = zeros(n);
        set(&mut x, 0, ik, 0.7);
        set(&mut x, ij, ik, 0.2);
        set(&mut x, ik, jk, 0.1);
        set(&mut x, ij, jk, 0.05);
        let expected = 0.7 - 0.2 - 0.1 + 0.05;
        assert!((cut.form(n).value(&x) - expected).abs() < 1e-15);
        let c = instantiate_cut(&cut, n).unwrap();
        assert_eq!(c.sense, Sense::Equal);
        assert!((c.evaluate(&x, 0.0).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn lo24_form_matches_literal_expression() {
        let n = 5;
        let (i, j, k, l) = (0, 2, 3, 4);
        let cut = Cut::new(CutKind::Lo24, &[i, j, k, l]).unwrap();
        let p = |a, b| lifted(a, b, n);
        let mut x = zeros(n);
        let vals = [
            (0, p(i, l), 0.9),
            (p(i, k), p(j, k), 0.3),
            (p(j, k), p(j, l), 0.25),
            (0, p(i, k), 0.1),
            (0, p(j, l), 0.2),
            (p(i, j), p(k, l), 0.05),
            (p(i, l), p(j, k), 0.15),
        ];
        for &(r, c, v) in &vals {
            set(&mut x, r, c, v);
        }
        let expected = 0.9 + 0.3 + 0.25 - 0.1 - 0.2 - 0.05 - 0.15;
        assert!((cut.violation(&x, n) - expected).abs() < 1e-15);
        let lc = instantiate_cut(&cut, n).unwrap();
        assert!((lc.evaluate(&x, 0.0).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn tri3_form() {
        let n = 4;
        let cut = Cut::new(CutKind::Tri3, &[0, 1, 2, 3]).unwrap();
        let (a, b) = (lifted(0, 1, n), lifted(2, 3, n));
        let mut x = zeros(n);
        set(&mut x, a, a, 0.8);
        set(&mut x, b, b, 0.6);
        set(&mut x, a, b, 0.3);
        assert!((cut.violation(&x, n) - (0.8 + 0.6 - 1.0 - 0.3)).abs() < 1e-15);
    }

    #[test]
    fn violation_examples() {
        let n = 4;
        let cut = Cut::new(CutKind::Tri5, &[0, 1, 0, 2, 2, 3]).unwrap();
        let mut x = zeros(n);
        for (a, b) in [(0, 1), (0, 2), (2, 3)] {
            let p = lifted(a, b, n);
            x[(p, p)] = 1.0;
        }
        assert_eq!(cut.violation(&x, n), 2.0);

        let n = 3;
        let cut = Cut::new(CutKind::Dicycle3, &[0, 1, 2]).unwrap();
        let mut x = zeros(n);
        set(&mut x, 0, lifted(0, 2, n), 1.0);
        assert_eq!(cut.violation(&x, n), 1.0);
        set(&mut x, 0, lifted(0, 2, n), -1.0);
        assert_eq!(cut.violation(&x, n), 1.0);
    }

    #[test]
    fn redundancy_examples() {
        assert!(is_redundant_lifting((0, 1, 2), (0, 1)));
        assert!(!is_redundant_lifting((0, 1, 2), (0, 3)));
        assert!(is_redundant_lifting((0, 1, 2), (0, 2)));
        assert!(is_redundant_lifting((0, 1, 2), (1, 2)));
        assert!(!is_redundant_lifting((0, 1, 3), (1, 2)));
        let c = Cut::new(CutKind::Rlt1XR, &[0, 1, 2, 0, 2]).unwrap();
        assert!(c.is_redundant_lifting());
        let c = Cut::new(CutKind::Tri1, &[0, 1, 0, 2]).unwrap();
        assert!(!c.is_redundant_lifting());
    }

    #[test]
    fn canonical_key_examples() {
        let a = Cut::new(CutKind::Tri3, &[0, 1, 2, 3]).unwrap();
        let b = Cut::new(CutKind::Tri3, &[2, 3, 0, 1]).unwrap();
        assert_eq!(a.canonical(), b.canonical());
        let a = Cut::new(CutKind::Dicycle3, &[0, 1, 2]).unwrap();
        let b = Cut::new(CutKind::Dicycle3, &[0, 1, 3]).unwrap();
        assert_ne!(a.canonical(), b.canonical());
        let pairs = [(0, 1), (1, 3), (2, 4)];
        let orders = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let keys: Vec<Cut> = orders
            .iter()
            .map(|o| {
                let idx: Vec<usize> = o.iter().flat_map(|&k| [pairs[k].0, pairs[k].1]).collect();
                Cut::new(CutKind::Tri5, &idx).unwrap().canonical()
            })
            .collect();
        assert!(keys.windows(2).all(|w| w[0] == w[1]));
        let a = Cut::new(CutKind::Tri2, &[0, 1, 2, 3]).unwrap();
        let b = Cut::new(CutKind::Tri2, &[2, 3, 0, 1]).unwrap();
        assert_ne!(a.canonical(), b.canonical());
    }

    #[test]
    fn canonical_preserves_the_constraint() {
        let n = 6;
        let x = {
            let mut m = zeros(n);
            let order = m.nrows();
            for r in 0..order {
                for c in r..order {
                    set(&mut m, r, c, ((r * 7 + c * 13) % 11) as f64 / 10.0);
                }
            }
            m
        };
        for kind in CutKind::ALL {
            for cut in enumerate_all(kind, n).into_iter().step_by(7) {
                let a = cut.violation(&x, n);
                let b = cut.canonical().violation(&x, n);
                assert!((a - b).abs() < 1e-12, "{cut}");
            }
        }
    }

    #[test]
    fn validation() {
        assert!(Cut::new(CutKind::Dicycle3, &[0, 1]).is_err());
        let c = Cut::new(CutKind::Dicycle3, &[0, 2, 1]).unwrap();
        assert!(c.validate(4).is_err());
        let c = Cut::new(CutKind::Tri4, &[0, 1, 0, 1, 2, 3]).unwrap();
        assert!(c.validate(4).is_err());
        let c = Cut::new(CutKind::Lo24, &[0, 1, 2, 4]).unwrap();
        assert!(c.validate(4).is_err());
        assert!(instantiate_cut(&c, 5).is_ok());
        let c = Cut::new(CutKind::RltXR, &[0, 1, 2, 3, 3]).unwrap();
        assert!(c.validate(5).is_err());
    }

    #[test]
    fn from_tuple_respects_quadruple_length() {
        let t = IndexTuple { quad: [0, 1, 2, 0], quad_len: 3, uv: (0, 2), qw: (1, 2) };
        assert!(t.is_valid(3));
        assert!(Cut::from_tuple(CutKind::Lo24, &t).is_none());
        let d = Cut::from_tuple(CutKind::Dicycle3, &t).unwrap();
        assert_eq!(d.indices(), &[0, 1, 2]);
        let t5 = Cut::from_tuple(CutKind::Tri5, &t).unwrap();
        assert_eq!(t5.indices(), &[0, 1, 0, 2, 1, 2]);
        let r = Cut::from_tuple(CutKind::RltXL, &t).unwrap();
        assert!(r.is_redundant_lifting());
    }

    #[test]
    fn enumeration_counts() {
        let n = 5;
        let m = 10;
        assert_eq!(enumerate_all(CutKind::Dicycle3, n).len(), 10);
        assert_eq!(enumerate_all(CutKind::Lo24, n).len(), 5);
        assert_eq!(enumerate_all(CutKind::Tri2, n).len(), m * (m - 1));
        assert_eq!(enumerate_all(CutKind::Tri5, n).len(), m * (m - 1) * (m - 2));
        assert_eq!(enumerate_all(CutKind::RltXL, n).len(), 10 * m);
        for kind in CutKind::ALL {
            for c in enumerate_all(kind, n) {
                c.validate(n).unwrap();
            }
        }
    }

    #[test]
    fn lo24_tight_at_the_equality_ordering() {
        // Order (k, i, ℓ, j): both sides equal 1.
        let n = 4;
        let (i, j, k, l) = (0, 1, 2, 3);
        let perm = Permutation::from_order(&[k, i, l, j]).unwrap();
        let x = rank_one_lift(&LoVector::encode(&perm));
        let cut = Cut::new(CutKind::Lo24, &[i, j, k, l]).unwrap();
        assert_eq!(cut.violation(&x, n), 0.0);
        let f = cut.form(n);
        let lhs: f64 = f.terms.iter().filter(|t| t.coeff > 0.0).map(|t| x[(t.row, t.col)]).sum();
        assert_eq!(lhs, 1.0);
    }
}
