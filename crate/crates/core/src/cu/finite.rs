use serde::Serialize;

use crate::error::{Error, Result};
use crate::wr::TruncatedPoM;

/// A finite positively ordered monoid given by tables. Sums may be missing
/// when the table comes from a truncation.
#[derive(Clone, Debug, Serialize)]
pub struct FiniteMonoid {
    pub name: String,
    pub labels: Vec<String>,
    pub add: Vec<Vec<Option<usize>>>,
    pub leq: Vec<Vec<bool>>,
    pub zero: usize,
    /// `≪` supplied by an ambient structure; otherwise it is computed from
    /// increasing sequences, which in a finite poset are eventually constant.
    pub way_below: Option<Vec<Vec<bool>>>,
}

impl FiniteMonoid {
    pub fn new(name: &str, labels: Vec<String>, add: Vec<Vec<usize>>, leq: Vec<Vec<bool>>, zero: usize) -> Result<Self> {
        let add = add.into_iter().map(|r| r.into_iter().map(Some).collect()).collect();
        let m = FiniteMonoid {
            name: name.to_string(),
            labels,
            add,
            leq,
            zero,
            way_below: None,
        };
        m.validate()?;
        Ok(m)
    }

    /// Builds the algebraic order `x ≤ y` iff `y = x + z` for some `z`.
    pub fn with_algebraic_order(name: &str, add: Vec<Vec<usize>>, zero: usize) -> Result<Self> {
        let n = add.len();
        let mut leq = vec![vec![false; n]; n];
        for x in 0..n {
            for z in 0..n {
                leq[x][add[x][z]] = true;
            }
        }
        let labels = (0..n).map(|i| i.to_string()).collect();
        FiniteMonoid::new(name, labels, add, leq, zero)
    }

    pub fn from_truncated(w: &TruncatedPoM) -> FiniteMonoid {
        FiniteMonoid {
            name: format!("W({}) up to {}x{}", w.ring, w.k_max, w.k_max),
            labels: w.classes.iter().map(|m| m.to_string()).collect(),
            add: w.add.clone(),
            leq: w.leq.clone(),
            zero: w.zero,
            way_below: None,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn is_total(&self) -> bool {
        self.add.iter().all(|r| r.iter().all(|s| s.is_some()))
    }

    pub fn sum(&self, x: usize, y: usize) -> Option<usize> {
        self.add[x][y]
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    /// `x ≪ y` by quantifying over increasing sequences: their suprema are
    /// their eventual values, so this asks `x ≤ z` for every `z ≥ y`.
    pub fn way_below_by_sequences(&self, x: usize, y: usize) -> bool {
        (0..self.len()).filter(|&z| self.leq(y, z)).all(|z| self.leq(x, z))
    }

    pub fn way_below(&self, x: usize, y: usize) -> bool {
        match &self.way_below {
            Some(t) => t[x][y],
            None => self.way_below_by_sequences(x, y),
        }
    }

    /// Checks the positively ordered monoid laws on every defined entry.
    pub fn validate(&self) -> Result<()> {
        let n = self.len();
        let bad = |m: String| Err(Error::Invariant(format!("{}: {m}", self.name)));
        if self.add.len() != n || self.leq.len() != n || self.zero >= n {
            return bad("table sizes disagree".into());
        }
        for x in 0..n {
            if self.add[x].len() != n || self.leq[x].len() != n {
                return bad("table sizes disagree".into());
            }
            if self.sum(self.zero, x) != Some(x) {
                return bad(format!("0 + {} ≠ {}", self.labels[x], self.labels[x]));
            }
            if !self.leq(self.zero, x) {
                return bad(format!("0 is not below {}", self.labels[x]));
            }
            if !self.leq(x, x) {
                return bad("order is not reflexive".into());
            }
            for y in 0..n {
                if self.sum(x, y) != self.sum(y, x) {
                    return bad(format!("addition not commutative at {},{}", self.labels[x], self.labels[y]));
                }
                if self.sum(x, y).is_some_and(|s| s >= n) {
                    return bad("sum out of range".into());
                }
                if x != y && self.leq(x, y) && self.leq(y, x) {
                    return bad("order is not antisymmetric".into());
                }
                for z in 0..n {
                    if self.leq(x, y) && self.leq(y, z) && !self.leq(x, z) {
                        return bad("order is not transitive".into());
                    }
                    let l = self.sum(x, y).and_then(|s| self.sum(s, z));
                    let r = self.sum(y, z).and_then(|s| self.sum(x, s));
                    if let (Some(l), Some(r)) = (l, r) {
                        if l != r {
                            return bad("addition not associative".into());
                        }
                    }
                    if self.leq(x, y) {
                        if let (Some(a), Some(b)) = (self.sum(x, z), self.sum(y, z)) {
                            if !self.leq(a, b) {
                                return bad("addition not monotone".into());
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub(crate) fn down_closure(&self, set: &[usize]) -> u64 {
        let mut mask = 0u64;
        for z in 0..self.len() {
            if set.iter().any(|&g| self.leq(z, g)) {
                mask |= 1 << z;
            }
        }
        mask
    }

    pub(crate) fn is_interval(&self, mask: u64) -> bool {
        let n = self.len();
        let members: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if members.is_empty() {
            return false;
        }
        let down = members.iter().all(|&x| (0..n).all(|z| !self.leq(z, x) || mask >> z & 1 == 1));
        let directed = members.iter().all(|&x| {
            members
                .iter()
                .all(|&y| members.iter().any(|&z| self.leq(x, z) && self.leq(y, z)))
        });
        down && directed
    }
}

/// `Λ_σ(M)` of a finite monoid, with intervals as member sets.
#[derive(Clone, Debug, Serialize)]
pub struct LambdaSigma {
    /// Member bitmask of each interval.
    pub intervals: Vec<u64>,
    /// Index of `[0, x]` for each `x`.
    pub principal: Vec<usize>,
    pub monoid: FiniteMonoid,
}

/// Enumerates every interval of `m` and builds the interval monoid.
pub fn lambda_sigma(m: &FiniteMonoid) -> Result<LambdaSigma> {
    let n = m.len();
    if n > 16 {
        return Err(Error::Unsupported(format!("interval enumeration over {n} elements")));
    }
    let intervals: Vec<u64> = (1u64..1 << n).filter(|&mask| m.is_interval(mask)).collect();
    let index = |mask: u64| intervals.iter().position(|&i| i == mask);
    let members = |mask: u64| (0..n).filter(move |&i| mask >> i & 1 == 1);
    let k = intervals.len();
    let mut add = vec![vec![None; k]; k];
    for a in 0..k {
        for b in 0..k {
            let mut sums = Vec::new();
            let mut complete = true;
            for x in members(intervals[a]) {
                for y in members(intervals[b]) {
                    match m.sum(x, y) {
                        Some(s) => sums.push(s),
                        None => complete = false,
                    }
                }
            }
            if complete {
                let c = m.down_closure(&sums);
                add[a][b] = Some(index(c).ok_or_else(|| Error::Invariant("sum of intervals is not an interval".into()))?);
            }
        }
    }
    let leq: Vec<Vec<bool>> = (0..k)
        .map(|a| (0..k).map(|b| intervals[a] & !intervals[b] == 0).collect())
        .collect();
    // I ≪ J iff I ⊆ [0, y] for some y ∈ J.
    let wb: Vec<Vec<bool>> = (0..k)
        .map(|a| {
            (0..k)
                .map(|b| members(intervals[b]).any(|y| intervals[a] & !m.down_closure(&[y]) == 0))
                .collect()
        })
        .collect();
    let principal: Vec<usize> = (0..n)
        .map(|x| index(m.down_closure(&[x])).expect("principal intervals are intervals"))
        .collect();
    let labels = intervals
        .iter()
        .map(|&mask| match principal.iter().position(|&p| intervals[p] == mask) {
            Some(x) => format!("[0,{}]", m.labels[x]),
            None => {
                let l: Vec<&str> = members(mask).map(|i| m.labels[i].as_str()).collect();
                format!("{{{}}}", l.join(","))
            }
        })
        .collect();
    let zero = principal[m.zero];
    Ok(LambdaSigma {
        intervals,
        principal,
        monoid: FiniteMonoid {
            name: format!("Lambda({})", m.name),
            labels,
            add,
            leq,
            zero,
            way_below: Some(wb),
        },
    })
}
