//! The interval monoid over a truncated `W(R)`.
//!
//! Elements are principal intervals `[0,x]` and chain intervals
//! `⋃ [0, a + n·b]` with `b ≠ 0`. For a finite ring `a + n·b` grows without
//! bound when `b ≠ 0` (the column space of a matrix below `x` is no larger
//! than that of `x`), so no chain interval is principal.

use serde::Serialize;

use super::{AxiomResult, CuReport};
use crate::dot;
use crate::verdict::{Certificate, Verdict};
use crate::wr::{covers, TruncatedPoM};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaElem {
    Principal(usize),
    Chain { base: usize, step: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct LambdaModel {
    pub ring: String,
    pub k_max: usize,
    pub elements: Vec<LambdaElem>,
    pub labels: Vec<String>,
    pub leq: Vec<Vec<bool>>,
    pub leq_certificate: Vec<Vec<Certificate>>,
    pub add: Vec<Vec<Option<usize>>>,
    pub way_below: Vec<Vec<bool>>,
    pub compact: Vec<bool>,
    /// Element index of `[0, x]` for each class `x` of `W`.
    pub principal: Vec<usize>,
    /// `x ↦ [0,x]` reflects and preserves the order.
    pub embedding_ok: bool,
    pub certificate: Certificate,
}

struct Ctx<'a> {
    w: &'a TruncatedPoM,
}

impl Ctx<'_> {
    /// `a, a+b, a+2b, ...` while the sums stay in the table.
    fn terms(&self, a: usize, b: usize) -> Vec<usize> {
        let mut out = vec![a];
        let mut t = a;
        while let Some(s) = self.w.add(t, b) {
            if s == t {
                break;
            }
            out.push(s);
            t = s;
        }
        out
    }

    fn includes(&self, i: LambdaElem, j: LambdaElem) -> (bool, Certificate) {
        use LambdaElem::*;
        match (i, j) {
            (Principal(x), Principal(y)) => (self.w.leq(x, y), Certificate::Exact),
            (Principal(x), Chain { base, step }) => {
                if self.terms(base, step).iter().any(|&t| self.w.leq(x, t)) {
                    (true, Certificate::Exact)
                } else {
                    (false, Certificate::TruncationRelative)
                }
            }
            (Chain { .. }, Principal(_)) => (false, Certificate::Exact),
            (Chain { base, step }, Chain { base: b2, step: s2 }) => {
                let zero = self.w.zero;
                let base_ok = self.terms(b2, s2).iter().any(|&t| self.w.leq(base, t));
                let step_ok = self.terms(zero, s2).iter().any(|&t| self.w.leq(step, t));
                if base_ok && step_ok {
                    (true, Certificate::Exact)
                } else {
                    (false, Certificate::TruncationRelative)
                }
            }
        }
    }

    fn sum(&self, i: LambdaElem, j: LambdaElem) -> Option<LambdaElem> {
        use LambdaElem::*;
        let w = self.w;
        match (i, j) {
            (Principal(x), Principal(y)) => w.add(x, y).map(Principal),
            (Principal(x), Chain { base, step }) | (Chain { base, step }, Principal(x)) => {
                w.add(x, base).map(|b| Chain { base: b, step })
            }
            (Chain { base, step }, Chain { base: b2, step: s2 }) => Some(Chain {
                base: w.add(base, b2)?,
                step: w.add(step, s2)?,
            }),
        }
    }

    fn label(&self, e: LambdaElem) -> String {
        match e {
            LambdaElem::Principal(x) => format!("[0,{}]", self.w.classes[x]),
            LambdaElem::Chain { base, step } => {
                format!("sup [0,{} + n·{}]", self.w.classes[base], self.w.classes[step])
            }
        }
    }
}

/// Builds the interval model over the certified part of `w`.
pub fn lambda_of_ring(w: &TruncatedPoM) -> LambdaModel {
    let ctx = Ctx { w };
    let n = w.len();
    let mut elements: Vec<LambdaElem> = (0..n).map(LambdaElem::Principal).collect();
    for step in (0..n).filter(|&s| s != w.zero) {
        for base in 0..n {
            let c = LambdaElem::Chain { base, step };
            let dup = elements.iter().any(|&e| ctx.includes(c, e).0 && ctx.includes(e, c).0);
            if !dup {
                elements.push(c);
            }
        }
    }
    let m = elements.len();
    let mut leq = vec![vec![false; m]; m];
    let mut leq_certificate = vec![vec![Certificate::Exact; m]; m];
    let mut certificate = Certificate::Exact;
    for i in 0..m {
        for j in 0..m {
            let (b, c) = ctx.includes(elements[i], elements[j]);
            leq[i][j] = b;
            leq_certificate[i][j] = c;
            certificate = certificate.weaker(c);
        }
    }
    let find = |e: LambdaElem| (0..m).find(|&k| ctx.includes(e, elements[k]).0 && ctx.includes(elements[k], e).0);
    let add: Vec<Vec<Option<usize>>> = (0..m)
        .map(|i| (0..m).map(|j| ctx.sum(elements[i], elements[j]).and_then(find)).collect())
        .collect();
    if add.iter().flatten().any(|s| s.is_none()) {
        certificate = certificate.weaker(Certificate::TruncationRelative);
    }
    let compact: Vec<bool> = elements.iter().map(|e| matches!(e, LambdaElem::Principal(_))).collect();
    let way_below: Vec<Vec<bool>> = (0..m).map(|i| (0..m).map(|j| compact[i] && leq[i][j]).collect()).collect();
    let embedding_ok = (0..n).all(|x| (0..n).all(|y| w.leq(x, y) == leq[x][y]));
    LambdaModel {
        ring: w.ring.clone(),
        k_max: w.k_max,
        labels: elements.iter().map(|&e| ctx.label(e)).collect(),
        elements,
        leq,
        leq_certificate,
        add,
        way_below,
        compact,
        principal: (0..n).collect(),
        embedding_ok,
        certificate,
    }
}

impl LambdaModel {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn compacts(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.compact[i]).collect()
    }

    pub fn to_dot(&self) -> String {
        dot::hasse(&format!("Lambda(W({}))", self.ring), &self.labels, &covers(&self.leq), &[])
    }

    /// Axiom evidence on the model, using principal approximants of chain
    /// intervals as the increasing sequences.
    pub fn check(&self, w: &TruncatedPoM) -> CuReport {
        let ctx = Ctx { w };
        let m = self.len();
        let cert = Certificate::TruncationRelative;
        let row = |axiom: &str, checked: usize, bad: Option<String>| AxiomResult {
            axiom: axiom.into(),
            verdict: if bad.is_some() { Verdict::False } else { Verdict::True },
            certificate: if bad.is_some() { Certificate::Exact } else { cert },
            checked: checked as u64,
            counterexample: bad,
            chain: None,
        };
        // Sup of the principal approximants of a chain element, among the model.
        let approximants = |i: usize| -> Vec<usize> {
            match self.elements[i] {
                LambdaElem::Principal(x) => vec![self.principal[x]],
                LambdaElem::Chain { base, step } => ctx.terms(base, step).iter().map(|&t| self.principal[t]).collect(),
            }
        };
        // A principal element above every computed term is an artifact of
        // the truncation, so chain suprema are compared among chains only.
        let is_sup = |seq: &[usize], s: usize| {
            seq.windows(2).all(|p| self.leq[p[0]][p[1]])
                && seq.iter().all(|&t| self.leq[t][s])
                && (0..m)
                    .filter(|&u| seq.iter().all(|&t| self.leq[t][u]) && self.compact[u] == self.compact[s])
                    .all(|u| self.leq[s][u])
        };
        let o1 = (0..m)
            .find(|&i| !is_sup(&approximants(i), i))
            .map(|i| format!("approximants of {} have another supremum", self.labels[i]));
        let o2 = (0..m)
            .find(|&i| {
                let seq = approximants(i);
                !seq.windows(2).all(|p| self.way_below[p[0]][p[1]]) || !is_sup(&seq, i)
            })
            .map(|i| format!("{} has no rapidly increasing approximation", self.labels[i]));
        let mut o3 = None;
        let mut o3n = 0;
        for a in 0..m {
            for x in 0..m {
                if !self.way_below[a][x] {
                    continue;
                }
                for b in 0..m {
                    for y in 0..m {
                        if !self.way_below[b][y] {
                            continue;
                        }
                        if let (Some(s), Some(t)) = (self.add[a][b], self.add[x][y]) {
                            o3n += 1;
                            if o3.is_none() && !self.way_below[s][t] {
                                o3 = Some(format!("{} ≪ {} fails", self.labels[s], self.labels[t]));
                            }
                        }
                    }
                }
            }
        }
        let mut o4 = None;
        let mut o4n = 0;
        for i in 0..m {
            for j in 0..m {
                let (LambdaElem::Chain { base, step }, Some(s)) = (self.elements[i], self.add[i][j]) else {
                    continue;
                };
                let other = approximants(j);
                let mine = ctx.terms(base, step);
                let sums: Vec<usize> = mine
                    .iter()
                    .enumerate()
                    .filter_map(|(k, &t)| {
                        let o = *other.get(k).unwrap_or(other.last().expect("nonempty"));
                        let LambdaElem::Principal(ox) = self.elements[o] else { unreachable!() };
                        w.add(t, ox).map(|z| self.principal[z])
                    })
                    .collect();
                o4n += 1;
                if !sums.is_empty() && !sums.iter().all(|&z| self.leq[z][s]) {
                    o4 = Some(format!("sup of sums differs from {}", self.labels[s]));
                }
            }
        }
        CuReport {
            monoid: format!("Lambda(W({})) up to {}x{}", self.ring, self.k_max, self.k_max),
            axioms: vec![
                row("O1", m, o1),
                row("O2", m, o2),
                row("O3", o3n, o3),
                row("O4", o4n, o4),
            ],
            range: Some(format!("classes of W up to {}x{}", self.k_max, self.k_max)),
            note: Some("relative to the truncation; evidence, not proof".into()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cu::{Ext, Symbolic};
    use crate::matrix::Mat;
    use crate::ring::{ExplicitTables, FiniteRing, RingHom, RingSpec};
    use crate::subequiv::rank;
    use crate::wr::{build_w, WOptions};

    #[test]
    fn gf2_is_natbar() {
        let r = FiniteRing::gf(2).unwrap();
        let w = build_w(&r, 3, &WOptions::default()).unwrap();
        let l = lambda_of_ring(&w);
        assert_eq!(l.len(), 5);
        assert!(l.embedding_ok);
        // Rank of each principal interval, ∞ for the chain.
        let value = |i: usize| match l.elements[i] {
            LambdaElem::Principal(x) => Ext::Fin(rank(&w.classes[x]).unwrap() as u64),
            LambdaElem::Chain { .. } => Ext::Inf,
        };
        let nb = Symbolic::NatBar;
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(l.leq[i][j], nb.leq(&[value(i)], &[value(j)]));
                assert_eq!(l.way_below[i][j], nb.way_below(&[value(i)], &[value(j)]));
            }
        }
        assert!(l.check(&w).is_cu());
    }

    #[test]
    fn product_is_natbar_squared() {
        let amb = FiniteRing::product(&RingSpec::Gf(2), &RingSpec::Gf(3)).unwrap();
        let (f2, f3) = (FiniteRing::gf(2).unwrap(), FiniteRing::gf(3).unwrap());
        let proj = |t: &crate::ring::Ring, k: usize| {
            RingHom::from_fn(&amb, t, true, |e| {
                let l = amb.label(e).trim_matches(|c| c == '(' || c == ')').to_string();
                let v: u64 = l.split(',').nth(k).unwrap().parse().unwrap();
                t.elem(v).unwrap()
            })
            .unwrap()
        };
        let (p1, p2) = (proj(&f2, 0), proj(&f3, 1));
        let w = build_w(&amb, 2, &WOptions::default()).unwrap();
        let l = lambda_of_ring(&w);
        let ranks = |m: &Mat| {
            let a = p1.apply_mat(m).unwrap();
            let b = p2.apply_mat(m).unwrap();
            [rank(&a).unwrap() as u64, rank(&b).unwrap() as u64]
        };
        let value = |i: usize| -> Vec<Ext> {
            match l.elements[i] {
                LambdaElem::Principal(x) => ranks(&w.classes[x]).iter().map(|&r| Ext::Fin(r)).collect(),
                LambdaElem::Chain { base, step } => {
                    let (a, s) = (ranks(&w.classes[base]), ranks(&w.classes[step]));
                    (0..2).map(|k| if s[k] > 0 { Ext::Inf } else { Ext::Fin(a[k]) }).collect()
                }
            }
        };
        assert_eq!(l.len(), 16, "{:?}", l.labels);
        let mut vals: Vec<Vec<Ext>> = (0..16).map(value).collect();
        let nb = Symbolic::NatBarPow(2);
        for i in 0..16 {
            for j in 0..16 {
                assert_eq!(l.leq[i][j], nb.leq(&vals[i], &vals[j]), "{} {}", l.labels[i], l.labels[j]);
                assert_eq!(l.way_below[i][j], nb.way_below(&vals[i], &vals[j]));
            }
        }
        vals.sort();
        vals.dedup();
        assert_eq!(vals.len(), 16);
    }

    #[test]
    fn zero_ring_is_trivial() {
        let spec = RingSpec::Explicit(ExplicitTables {
            size: 1,
            add: vec![0],
            mul: vec![0],
            one: Some(0),
            labels: None,
        });
        let r = spec.build().unwrap();
        let w = build_w(&r, 2, &WOptions::default()).unwrap();
        assert_eq!(lambda_of_ring(&w).len(), 1);
    }
}
