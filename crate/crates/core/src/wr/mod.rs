//! Truncated models of `W(R)` and `V(R)`.
//!
//! Every matrix of size at most `k×k` is stored zero-padded to `k×k` and
//! identified by its code. The padded universe is split into orbits under
//! invertible row and column operations (which preserve `∼₁`), orbit
//! representatives are merged by exact `≼₁` decisions, and the order and
//! addition tables are read off canonical representatives.

mod saturation;
mod vmonoid;

pub use saturation::{saturation_report, SaturationReport, SaturationStep};
pub use vmonoid::{build_v, VMonoid};

use rayon::prelude::*;
use serde::Serialize;

use crate::dot;
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::ring::{Elem, Ring};
use crate::subequiv::{has_fast_path, precsim1_with, swap_witness, Sub1Options};
use crate::verdict::{Certificate, Verdict};

#[derive(Clone, Debug)]
pub struct WOptions {
    pub search: Sub1Options,
    /// Largest padded universe `|R|^(k²)` accepted.
    pub universe_limit: u64,
}

impl Default for WOptions {
    fn default() -> Self {
        WOptions {
            search: Sub1Options::default(),
            universe_limit: 1 << 22,
        }
    }
}

/// A truncated positively ordered monoid of `∼₁`-classes.
#[derive(Clone, Debug, Serialize)]
pub struct TruncatedPoM {
    pub ring: String,
    pub k_max: usize,
    /// Canonical representative of each class (trimmed).
    pub classes: Vec<Mat>,
    pub leq: Vec<Vec<bool>>,
    pub add: Vec<Vec<Option<usize>>>,
    pub add_certificate: Vec<Vec<Certificate>>,
    /// Covering pairs `(lower, upper)`.
    pub hasse: Vec<(usize, usize)>,
    pub zero: usize,
    /// Class of `[1]` when the ring is unital.
    pub unit: Option<usize>,
    pub evaluations: u64,
    #[serde(skip)]
    pub(crate) class_of: Vec<u32>,
    #[serde(skip)]
    pub(crate) ring_ref: Option<Ring>,
}

impl TruncatedPoM {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn ring_handle(&self) -> &Ring {
        self.ring_ref.as_ref().expect("built from a ring")
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn add(&self, i: usize, j: usize) -> Option<usize> {
        self.add[i][j]
    }

    /// Class of any matrix that fits in `k_max × k_max` after dropping zero
    /// rows and columns.
    pub fn class_of(&self, m: &Mat) -> Option<usize> {
        let c = compress(m);
        if c.rows() > self.k_max || c.cols() > self.k_max {
            return None;
        }
        let code = c.pad_to(self.k_max, self.k_max).encode();
        Some(self.class_of[code as usize] as usize)
    }

    /// Class of a padded `k×k` code.
    pub fn class_of_code(&self, code: u64) -> usize {
        self.class_of[code as usize] as usize
    }

    pub fn incomparable_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if !self.leq[i][j] && !self.leq[j][i] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_chain(&self) -> bool {
        self.incomparable_pairs().is_empty()
    }

    /// Classes sorted so that `leq` is compatible with the order; for a
    /// chain this is the chain itself.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by_key(|&i| (0..self.len()).filter(|&j| self.leq[j][i]).count());
        idx
    }

    pub fn to_dot(&self) -> String {
        let labels: Vec<String> = self.classes.iter().map(|m| m.to_string()).collect();
        dot::hasse(&format!("W({})", self.ring), &labels, &self.hasse, &self.incomparable_pairs())
    }

    /// Checks the positively ordered monoid laws on the certified entries.
    pub fn check_laws(&self) -> LawReport {
        let n = self.len();
        let mut failures = Vec::new();
        for i in 0..n {
            if !self.leq[i][i] {
                failures.push(format!("leq not reflexive at {i}"));
            }
            if !self.leq[self.zero][i] {
                failures.push(format!("zero not below {i}"));
            }
            if self.add[self.zero][i] != Some(i) {
                failures.push(format!("zero is not neutral for {i}"));
            }
            for j in 0..n {
                if i != j && self.leq[i][j] && self.leq[j][i] {
                    failures.push(format!("classes {i} and {j} are equivalent"));
                }
                if self.add[i][j] != self.add[j][i] {
                    failures.push(format!("addition not commutative at ({i},{j})"));
                }
                for l in 0..n {
                    if self.leq[i][j] && self.leq[j][l] && !self.leq[i][l] {
                        failures.push(format!("leq not transitive at ({i},{j},{l})"));
                    }
                    // i <= j implies i + l <= j + l where both sums are certified.
                    if self.leq[i][j] {
                        if let (Some(a), Some(b)) = (self.add[i][l], self.add[j][l]) {
                            if !self.leq[a][b] {
                                failures.push(format!("addition not monotone at ({i},{j},{l})"));
                            }
                        }
                    }
                }
            }
        }
        LawReport { failures }
    }

    /// Re-derives commutativity of each certified sum from the explicit
    /// swap witness `u' ⊕ u ≼₁ u ⊕ u'`.
    pub fn swap_witnessed(&self) -> Result<bool> {
        let ring = self.ring_handle();
        if !ring.is_unital() {
            return Ok(false);
        }
        for i in 0..self.len() {
            for j in 0..self.len() {
                if self.add[i][j].is_some() {
                    swap_witness(&self.classes[i], &self.classes[j])?;
                }
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LawReport {
    pub failures: Vec<String>,
}

impl LawReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Drops zero rows and columns anywhere (a permutation-equivalent matrix)
/// over unital rings, trailing ones otherwise.
pub(crate) fn compress(m: &Mat) -> Mat {
    if !m.ring().is_unital() {
        return m.trim();
    }
    let rows: Vec<usize> = (0..m.rows()).filter(|&i| (0..m.cols()).any(|j| m.get(i, j) != Elem::ZERO)).collect();
    let cols: Vec<usize> = (0..m.cols()).filter(|&j| (0..m.rows()).any(|i| m.get(i, j) != Elem::ZERO)).collect();
    if rows.is_empty() {
        return Mat::zeros(m.ring(), 1, 1);
    }
    let mut out = Mat::zeros(m.ring(), rows.len(), cols.len());
    for (a, &i) in rows.iter().enumerate() {
        for (b, &j) in cols.iter().enumerate() {
            out.set(a, b, m.get(i, j));
        }
    }
    out
}

struct UnionFind(Vec<u32>);

impl UnionFind {
    fn find(&mut self, mut x: u32) -> u32 {
        while self.0[x as usize] != x {
            let p = self.0[x as usize];
            self.0[x as usize] = self.0[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Smaller code becomes the root so roots are orbit minima.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi as usize] = lo;
        }
    }
}

/// Codes reachable in one elementary invertible step.
fn neighbours(ring: &Ring, k: usize, data: &[Elem], gens: &[Elem], units: &[Elem], out: &mut Vec<u64>) {
    let s = ring.size() as u64;
    let encode = |d: &[Elem]| d.iter().fold(0u64, |acc, e| acc * s + e.0 as u64);
    let mut w = data.to_vec();
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            for &x in gens {
                // row_i += x·row_j
                w.copy_from_slice(data);
                for c in 0..k {
                    w[i * k + c] = ring.add(w[i * k + c], ring.mul(x, data[j * k + c]));
                }
                out.push(encode(&w));
                // col_j += col_i·x
                w.copy_from_slice(data);
                for r in 0..k {
                    w[r * k + j] = ring.add(w[r * k + j], ring.mul(data[r * k + i], x));
                }
                out.push(encode(&w));
            }
        }
        for &u in units {
            w.copy_from_slice(data);
            for c in 0..k {
                w[i * k + c] = ring.mul(u, data[i * k + c]);
            }
            out.push(encode(&w));
            w.copy_from_slice(data);
            for r in 0..k {
                w[r * k + i] = ring.mul(data[r * k + i], u);
            }
            out.push(encode(&w));
        }
        if i + 1 < k {
            w.copy_from_slice(data);
            for c in 0..k {
                w.swap(i * k + c, (i + 1) * k + c);
            }
            out.push(encode(&w));
            w.copy_from_slice(data);
            for r in 0..k {
                w.swap(r * k + i, r * k + i + 1);
            }
            out.push(encode(&w));
        }
    }
}

fn orbits(ring: &Ring, k: usize, count: u64) -> UnionFind {
    let mut uf = UnionFind((0..count as u32).collect());
    if !ring.is_unital() {
        return uf;
    }
    let gens = ring.additive_generators();
    let units: Vec<Elem> = ring.units().into_iter().filter(|&u| Some(u) != ring.one()).collect();
    let mut buf = Vec::new();
    for code in 0..count {
        let m = Mat::decode(ring, k, k, code);
        buf.clear();
        neighbours(ring, k, m.entries(), &gens, &units, &mut buf);
        for &c in &buf {
            uf.union(code as u32, c as u32);
        }
    }
    uf
}

fn decide(a: &Mat, b: &Mat, opts: &Sub1Options) -> Result<(bool, u64)> {
    let d = precsim1_with(a, b, opts)?;
    match d.verdict {
        Verdict::True => Ok((true, d.evaluations)),
        Verdict::False => Ok((false, d.evaluations)),
        Verdict::Unknown => Err(Error::Budget(format!(
            "deciding {a} ≼₁ {b} exceeded {} evaluations; raise the budget",
            opts.budget
        ))),
    }
}

/// Builds the truncation of `W(R)` on matrices up to `k_max × k_max`.
pub fn build_w(ring: &Ring, k_max: usize, opts: &WOptions) -> Result<TruncatedPoM> {
    if k_max == 0 {
        return Err(Error::Precondition("k_max must be positive".into()));
    }
    let count = Mat::count(ring, k_max, k_max)
        .filter(|&c| c <= opts.universe_limit)
        .ok_or_else(|| {
            Error::Unsupported(format!(
                "{}^{} padded matrices exceed the universe limit {}",
                ring.size(),
                k_max * k_max,
                opts.universe_limit
            ))
        })?;
    let mut uf = orbits(ring, k_max, count);
    let roots: Vec<u32> = (0..count as u32).map(|c| uf.find(c)).collect();
    let mut orbit_reps: Vec<u32> = roots.iter().copied().filter(|&r| roots[r as usize] == r).collect();
    orbit_reps.sort_unstable();
    orbit_reps.dedup();

    // Merge orbits by exact ∼₁.
    let mut evaluations = 0u64;
    let mut class_reps: Vec<Mat> = Vec::new();
    let mut orbit_class = vec![u32::MAX; count as usize];
    for &o in &orbit_reps {
        let m = compress(&Mat::decode(ring, k_max, k_max, o as u64));
        let (refl, ev) = decide(&m, &m, &opts.search)?;
        evaluations += ev;
        if !refl {
            return Err(Error::Precondition(format!(
                "{m} is not ≼₁ itself; the ring is not weakly s-unital at this size"
            )));
        }
        let mut hit = None;
        for (ci, rep) in class_reps.iter().enumerate() {
            let (up, e1) = decide(&m, rep, &opts.search)?;
            evaluations += e1;
            if up {
                let (down, e2) = decide(rep, &m, &opts.search)?;
                evaluations += e2;
                if down {
                    hit = Some(ci);
                    break;
                }
            }
        }
        let ci = hit.unwrap_or_else(|| {
            class_reps.push(m);
            class_reps.len() - 1
        });
        orbit_class[o as usize] = ci as u32;
    }
    let class_of: Vec<u32> = roots.iter().map(|&r| orbit_class[r as usize]).collect();

    // Canonical representatives: smallest (rows, cols, entries) trimmed member.
    let n = class_reps.len();
    let mut best: Vec<Option<(usize, usize, Vec<u16>)>> = vec![None; n];
    for code in 0..count {
        let c = class_of[code as usize] as usize;
        let key = Mat::decode(ring, k_max, k_max, code).trim().sort_key();
        if best[c].as_ref().map_or(true, |b| key < *b) {
            best[c] = Some(key);
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| best[a].cmp(&best[b]));
    let mut renumber = vec![0u32; n];
    for (new, &old) in order.iter().enumerate() {
        renumber[old] = new as u32;
    }
    let classes: Vec<Mat> = order
        .iter()
        .map(|&old| {
            let (r, c, e) = best[old].clone().expect("nonempty class");
            Mat::new(ring, r, c, e.into_iter().map(Elem).collect()).expect("valid entries")
        })
        .collect();
    let class_of: Vec<u32> = class_of.iter().map(|&c| renumber[c as usize]).collect();

    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let decided: Vec<Result<(bool, u64)>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            if i == j {
                Ok((true, 0))
            } else {
                decide(&classes[i], &classes[j], &opts.search)
            }
        })
        .collect();
    let mut leq = vec![vec![false; n]; n];
    for (&(i, j), d) in pairs.iter().zip(decided) {
        let (v, ev) = d?;
        leq[i][j] = v;
        evaluations += ev;
    }

    let mut w = TruncatedPoM {
        ring: ring.spec().to_string(),
        k_max,
        classes,
        leq,
        add: vec![vec![None; n]; n],
        add_certificate: vec![vec![Certificate::TruncationRelative; n]; n],
        hasse: Vec::new(),
        zero: 0,
        unit: None,
        evaluations,
        class_of,
        ring_ref: Some(ring.clone()),
    };
    w.zero = w.class_of(&Mat::zeros(ring, 1, 1)).expect("zero fits");
    w.unit = ring.one().and_then(|u| w.class_of(&Mat::scalar(ring, u)));
    let fast = has_fast_path(ring);
    for i in 0..n {
        for j in 0..n {
            let found = if i == w.zero {
                Some(j)
            } else if j == w.zero {
                Some(i)
            } else {
                let s = w.classes[i].diag_sum(&w.classes[j])?;
                match w.class_of(&s) {
                    Some(c) => Some(c),
                    None if fast => sum_class(&w, i, j, &s, opts)?,
                    None => None,
                }
            };
            if let Some(c) = found {
                w.add[i][j] = Some(c);
                w.add_certificate[i][j] = Certificate::Exact;
            }
        }
    }
    w.hasse = covers(&w.leq);
    Ok(w)
}

/// A class equivalent to an oversized sum, among the classes above both
/// summands.
fn sum_class(w: &TruncatedPoM, i: usize, j: usize, s: &Mat, opts: &WOptions) -> Result<Option<usize>> {
    for c in (0..w.len()).filter(|&c| w.leq(i, c) && w.leq(j, c)) {
        let rep = &w.classes[c];
        let both = precsim1_with(s, rep, &opts.search)?.verdict == Verdict::True
            && precsim1_with(rep, s, &opts.search)?.verdict == Verdict::True;
        if both {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// Covering pairs of a partial order given as a relation table.
pub fn covers(leq: &[Vec<bool>]) -> Vec<(usize, usize)> {
    let n = leq.len();
    let lt = |i: usize, j: usize| i != j && leq[i][j] && !leq[j][i];
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if lt(i, j) && !(0..n).any(|l| lt(i, l) && lt(l, j)) {
                out.push((i, j));
            }
        }
    }
    out
}
