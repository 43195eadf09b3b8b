//! The relation `≼_M`: chains of `≼₁` steps and block-triangular steps
//! `diag(c, d) ≼₀ [[c, e], [0, d]]`.
//!
//! All matrices live zero-padded in `S×S` for a size cap `S`. Consecutive
//! `≼₁` steps are absorbed by moving to the up-set of a `∼₁`-class, so the
//! search runs over classes of the truncated `W(R)` at level `S`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::ring::Elem;
use crate::subequiv::Sub1Options;
use crate::verdict::{Budget, Certificate, Verdict, DEFAULT_BUDGET};
use crate::wr::{build_w, TruncatedPoM, WOptions};

#[derive(Clone, Debug)]
pub struct MalcolmsonOptions {
    /// Maximal number of `≼₀` steps.
    pub depth: usize,
    /// Intermediate matrices are at most `size_cap × size_cap`.
    pub size_cap: usize,
    pub budget: u64,
    pub search: Sub1Options,
}

impl Default for MalcolmsonOptions {
    fn default() -> Self {
        MalcolmsonOptions {
            depth: 4,
            size_cap: 2,
            budget: DEFAULT_BUDGET,
            search: Sub1Options::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    Sub1,
    Triangular,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainStep {
    pub kind: StepKind,
    pub from: Mat,
    pub to: Mat,
}

#[derive(Clone, Debug, Serialize)]
pub struct MalcolmsonReport {
    pub verdict: Verdict,
    pub certificate: Certificate,
    /// Steps used when found, or explored otherwise.
    pub depth: usize,
    /// The reachable set was closed before the depth ran out.
    pub saturated: bool,
    pub reached_classes: usize,
    pub chain: Vec<ChainStep>,
    pub evaluations: u64,
}

#[derive(Clone)]
struct Parent {
    class: usize,
    kind: StepKind,
    from: Mat,
    to: Mat,
}

/// Reachability from one class inside a level-`S` truncation.
pub struct Reach {
    parent: Vec<Option<Parent>>,
    reached: Vec<bool>,
    /// Layer in which each class was first reached.
    pub layer: Vec<Option<usize>>,
    pub saturated: bool,
    pub depth: usize,
    pub out_of_budget: bool,
    pub evaluations: u64,
}

impl Reach {
    pub fn contains(&self, class: usize) -> bool {
        self.reached[class]
    }

    fn chain_to(&self, target: usize) -> Vec<ChainStep> {
        let mut out = Vec::new();
        let mut c = target;
        while let Some(p) = &self.parent[c] {
            out.push(ChainStep {
                kind: p.kind,
                from: p.from.clone(),
                to: p.to.clone(),
            });
            c = p.class;
        }
        out.reverse();
        out
    }
}

/// Every class reachable from `start` in at most `depth` steps.
pub fn reach(w: &TruncatedPoM, start: usize, depth: usize, budget: u64) -> Result<Reach> {
    let ring = w.ring_handle().clone();
    if !ring.is_unital() {
        return Err(Error::Precondition("≼_M is defined over unital rings".into()));
    }
    let s = w.k_max;
    let n = w.len();
    let count = Mat::count(&ring, s, s).expect("universe fits");
    let mut members: Vec<Vec<u64>> = vec![Vec::new(); n];
    for code in 0..count {
        members[w.class_of_code(code)].push(code);
    }
    let mut budget = Budget::new(budget);
    let mut r = Reach {
        parent: vec![None; n],
        reached: vec![false; n],
        layer: vec![None; n],
        saturated: false,
        depth: 0,
        out_of_budget: false,
        evaluations: 0,
    };
    r.reached[start] = true;
    r.layer[start] = Some(0);
    let mut frontier = vec![start];
    let size = ring.size() as u64;
    for d in 1..=depth {
        let mut next: Vec<usize> = Vec::new();
        let mark = |c: usize, p: Parent, r: &mut Reach, next: &mut Vec<usize>| {
            if !r.reached[c] {
                r.reached[c] = true;
                r.layer[c] = Some(d);
                r.parent[c] = Some(p);
                next.push(c);
            }
        };
        for &c in &frontier {
            for u in 0..n {
                if w.leq(c, u) {
                    let p = Parent {
                        class: c,
                        kind: StepKind::Sub1,
                        from: w.classes[c].clone(),
                        to: w.classes[u].clone(),
                    };
                    mark(u, p, &mut r, &mut next);
                }
            }
            for &code in &members[c] {
                let m = Mat::decode(&ring, s, s, code);
                for r1 in 1..s {
                    for c1 in 1..s {
                        let off_zero = (0..r1).all(|i| (c1..s).all(|j| m.get(i, j) == Elem::ZERO))
                            && (r1..s).all(|i| (0..c1).all(|j| m.get(i, j) == Elem::ZERO));
                        if !off_zero {
                            continue;
                        }
                        let cells = r1 * (s - c1);
                        let choices = size.pow(cells as u32);
                        if !budget.charge(choices) {
                            r.out_of_budget = true;
                            r.evaluations = budget.spent;
                            r.depth = d;
                            return Ok(r);
                        }
                        for e in 1..choices {
                            let block = Mat::decode(&ring, r1, s - c1, e);
                            let mut t = m.clone();
                            t.paste(0, c1, &block);
                            let tc = w.class_of_code(t.encode());
                            let p = Parent {
                                class: c,
                                kind: StepKind::Triangular,
                                from: m.trim(),
                                to: t.trim(),
                            };
                            mark(tc, p, &mut r, &mut next);
                        }
                    }
                }
            }
        }
        r.depth = d;
        if next.is_empty() {
            r.saturated = true;
            break;
        }
        frontier = next;
    }
    r.evaluations = budget.spent;
    Ok(r)
}

/// Decides `a ≼_M b` within the depth and size cap.
pub fn precsim_m(a: &Mat, b: &Mat, opts: &MalcolmsonOptions) -> Result<MalcolmsonReport> {
    let w = build_w(
        a.ring(),
        opts.size_cap,
        &WOptions {
            search: opts.search,
            ..WOptions::default()
        },
    )?;
    precsim_m_in(&w, a, b, opts)
}

/// As [`precsim_m`], reusing a level-`S` truncation.
pub fn precsim_m_in(w: &TruncatedPoM, a: &Mat, b: &Mat, opts: &MalcolmsonOptions) -> Result<MalcolmsonReport> {
    let (Some(ca), Some(cb)) = (w.class_of(a), w.class_of(b)) else {
        return Ok(MalcolmsonReport {
            verdict: Verdict::Unknown,
            certificate: Certificate::CapRelative,
            depth: 0,
            saturated: false,
            reached_classes: 0,
            chain: Vec::new(),
            evaluations: 0,
        });
    };
    let r = reach(w, ca, opts.depth, opts.budget)?;
    let reached_classes = r.reached.iter().filter(|&&x| x).count();
    if r.contains(cb) {
        let mut chain = r.chain_to(cb);
        if let Some(first) = chain.first_mut() {
            first.from = a.clone();
        }
        if let Some(last) = chain.last_mut() {
            if last.kind == StepKind::Sub1 {
                last.to = b.clone();
            }
        }
        return Ok(MalcolmsonReport {
            verdict: Verdict::True,
            certificate: Certificate::Exact,
            depth: r.layer[cb].unwrap_or(0),
            saturated: r.saturated,
            reached_classes,
            chain,
            evaluations: r.evaluations,
        });
    }
    let verdict = if r.out_of_budget { Verdict::Unknown } else { Verdict::False };
    Ok(MalcolmsonReport {
        verdict,
        certificate: Certificate::CapRelative,
        depth: r.depth,
        saturated: r.saturated,
        reached_classes,
        chain: Vec::new(),
        evaluations: r.evaluations,
    })
}

/// Pairs of classes `(x, y)` with `x ≼_M y` but not `x ≼₁ y`, each with the
/// number of steps needed.
pub fn separations(w: &TruncatedPoM, depth: usize, budget: u64) -> Result<Vec<(usize, usize, usize)>> {
    let mut out = Vec::new();
    for x in 0..w.len() {
        let r = reach(w, x, depth, budget)?;
        for y in 0..w.len() {
            if r.contains(y) && !w.leq(x, y) {
                out.push((x, y, r.layer[y].unwrap_or(0)));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::FiniteRing;

    #[test]
    fn examples() {
        let f2 = FiniteRing::gf(2).unwrap();
        let opts = MalcolmsonOptions {
            depth: 1,
            ..Default::default()
        };
        let a = Mat::parse(&f2, "[[1,0],[0,1]]").unwrap();
        let b = Mat::parse(&f2, "[[1,1],[0,1]]").unwrap();
        assert_eq!(precsim_m(&a, &b, &opts).unwrap().verdict, Verdict::True);
        let one = Mat::parse(&f2, "1").unwrap();
        assert_eq!(precsim_m(&one, &one, &opts).unwrap().verdict, Verdict::True);
        let zero = Mat::parse(&f2, "0").unwrap();
        let rep = precsim_m(&one, &zero, &MalcolmsonOptions::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::False);
        assert!(rep.saturated);
    }

    #[test]
    fn triangular_step_over_z4() {
        let z4 = FiniteRing::zmod(4).unwrap();
        let dd = Mat::parse(&z4, "[[2,0],[0,2]]").unwrap();
        let one = Mat::parse(&z4, "1").unwrap();
        let rep = precsim_m(&dd, &one, &MalcolmsonOptions::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::True);
        assert!(rep.chain.iter().any(|s| s.kind == StepKind::Triangular));
        // Not visible to ≼₁.
        assert_eq!(crate::subequiv::precsim1(&dd, &one).unwrap().verdict, Verdict::False);
    }

    #[test]
    fn oversized_input_is_unknown() {
        let f2 = FiniteRing::gf(2).unwrap();
        let big = Mat::identity(&f2, 3).unwrap();
        let rep = precsim_m(&big, &big, &MalcolmsonOptions::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Unknown);
    }
}
