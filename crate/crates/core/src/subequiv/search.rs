//! Exhaustive witness search for `a = r·b·t` over an arbitrary finite ring.
//!
//! The column set `{b·v}` is enumerated once. Columns of `b·t` are then
//! assigned one at a time while every row of `r` keeps the list of row
//! vectors still compatible with the columns fixed so far.

use std::collections::HashMap;

use crate::matrix::Mat;
use crate::ring::Elem;
use crate::verdict::Budget;

pub(crate) enum Outcome {
    Found(Mat, Mat),
    Absent,
    OutOfBudget,
}

/// All vectors of length `len` over a ring of order `s`, as digit lists with
/// the first entry most significant.
fn vectors(s: usize, len: usize, budget: &mut Budget) -> Option<Vec<Vec<Elem>>> {
    let count = (s as u64).checked_pow(len as u32)?;
    if !budget.charge(count) {
        return None;
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut cur = vec![Elem::ZERO; len];
    for _ in 0..count {
        out.push(cur.clone());
        for slot in cur.iter_mut().rev() {
            if slot.idx() + 1 < s {
                *slot = Elem(slot.0 + 1);
                break;
            }
            *slot = Elem::ZERO;
        }
    }
    Some(out)
}

/// Plain exhaustive search: no reductions, deterministic enumeration order.
pub(crate) fn exhaustive(a: &Mat, b: &Mat, budget: &mut Budget) -> Outcome {
    let ring = a.ring().clone();
    let s = ring.size();
    let (m, n) = a.shape();
    let (p, q) = b.shape();

    let Some(vs) = vectors(s, q, budget) else {
        return Outcome::OutOfBudget;
    };
    // Distinct columns b·v with one preimage each, in first-seen order.
    let mut index: HashMap<Vec<Elem>, usize> = HashMap::new();
    let mut cols: Vec<Vec<Elem>> = Vec::new();
    let mut pre: Vec<usize> = Vec::new();
    for (vi, v) in vs.iter().enumerate() {
        let c: Vec<Elem> = (0..p)
            .map(|i| (0..q).fold(Elem::ZERO, |acc, k| ring.add(acc, ring.mul(b.get(i, k), v[k]))))
            .collect();
        if let std::collections::hash_map::Entry::Vacant(e) = index.entry(c.clone()) {
            e.insert(cols.len());
            cols.push(c);
            pre.push(vi);
        }
    }
    if !budget.charge((vs.len() * p * q) as u64) {
        return Outcome::OutOfBudget;
    }
    let Some(us) = vectors(s, p, budget) else {
        return Outcome::OutOfBudget;
    };
    let nc = cols.len();
    if !budget.charge((us.len() * nc * p) as u64) {
        return Outcome::OutOfBudget;
    }
    let mut dot = vec![Elem::ZERO; us.len() * nc];
    for (ui, u) in us.iter().enumerate() {
        for (ci, c) in cols.iter().enumerate() {
            dot[ui * nc + ci] = (0..p).fold(Elem::ZERO, |acc, k| ring.add(acc, ring.mul(u[k], c[k])));
        }
    }

    // Distinct columns of a; duplicates reuse the same assignment.
    let mut distinct: Vec<usize> = Vec::new();
    let mut same_as = vec![0usize; n];
    for j in 0..n {
        match distinct
            .iter()
            .position(|&d| (0..m).all(|i| a.get(i, d) == a.get(i, j)))
        {
            Some(pos) => same_as[j] = pos,
            None => {
                same_as[j] = distinct.len();
                distinct.push(j);
            }
        }
    }

    let all: Vec<u32> = (0..us.len() as u32).collect();
    let start: Vec<Vec<u32>> = vec![all; m];
    let mut chosen = vec![0usize; distinct.len()];
    let mut ctx = Ctx {
        a,
        dot: &dot,
        nc,
        distinct: &distinct,
        chosen: &mut chosen,
        budget,
    };
    match ctx.dfs(0, &start) {
        Some(rows) => {
            let mut r = Mat::zeros(&ring, m, p);
            for (i, &ui) in rows.iter().enumerate() {
                for k in 0..p {
                    r.set(i, k, us[ui as usize][k]);
                }
            }
            let mut t = Mat::zeros(&ring, q, n);
            for j in 0..n {
                let v = &vs[pre[chosen[same_as[j]]]];
                for k in 0..q {
                    t.set(k, j, v[k]);
                }
            }
            Outcome::Found(r, t)
        }
        None if budget.exhausted() => Outcome::OutOfBudget,
        None => Outcome::Absent,
    }
}

struct Ctx<'a> {
    a: &'a Mat,
    dot: &'a [Elem],
    nc: usize,
    distinct: &'a [usize],
    chosen: &'a mut Vec<usize>,
    budget: &'a mut Budget,
}

impl Ctx<'_> {
    fn dfs(&mut self, level: usize, sets: &[Vec<u32>]) -> Option<Vec<u32>> {
        if level == self.distinct.len() {
            return Some(sets.iter().map(|s| s[0]).collect());
        }
        let j = self.distinct[level];
        let m = self.a.rows();
        for c in 0..self.nc {
            let work: usize = sets.iter().map(|s| s.len()).sum();
            if !self.budget.charge(work as u64 + 1) {
                return None;
            }
            let mut next: Vec<Vec<u32>> = Vec::with_capacity(m);
            let mut ok = true;
            for (i, set) in sets.iter().enumerate() {
                let target = self.a.get(i, j);
                let kept: Vec<u32> = set
                    .iter()
                    .copied()
                    .filter(|&u| self.dot[u as usize * self.nc + c] == target)
                    .collect();
                if kept.is_empty() {
                    ok = false;
                    break;
                }
                next.push(kept);
            }
            if !ok {
                continue;
            }
            self.chosen[level] = c;
            if let Some(found) = self.dfs(level + 1, &next) {
                return Some(found);
            }
            if self.budget.exhausted() {
                return None;
            }
        }
        None
    }
}
