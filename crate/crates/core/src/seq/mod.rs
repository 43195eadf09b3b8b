//! The sequence semigroup `S(R)`: increasing sequences `(x_n)` with
//! witnesses `y_{n+1}·x_{n+1}·x_n = x_n`, stored as finitely many stages.

mod compact;
mod idem;
mod literal;
mod sup;

pub use compact::{is_compact_seq, realized_classes, CompactReport, Realized};
pub use idem::{idem_to_seq, seq_to_idem, splitting_check, ColIdem, IdemReport, SplittingReport};
pub use literal::{parse_matrix_list, parse_sequence};
pub use sup::{seq_sup, Link};

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{same_ring, Mat};
use crate::ring::{Elem, Ring, RingHom};
use crate::subequiv::{precsim1_with, Sub1Options};
use crate::verdict::{Certificate, Decision, Verdict};
use crate::wr::TruncatedPoM;

/// How a sequence continues past its stored stages.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tail {
    /// The last stage repeats forever, linked by this witness.
    Stabilized(Mat),
    /// Nothing is known past the stored stages.
    Open,
}

/// Stages `x_1, ..., x_N` with `x_i` of shape `n_{i+1} × n_i`, and
/// witnesses `y_2, ..., y_N` where `witnesses[i]` links `stages[i+1]` to
/// `stages[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeqElem {
    pub stages: Vec<Mat>,
    pub witnesses: Vec<Mat>,
    pub tail: Tail,
}

impl SeqElem {
    pub fn new(stages: Vec<Mat>, witnesses: Vec<Mat>, tail: Tail) -> Result<SeqElem> {
        let first = stages
            .first()
            .ok_or_else(|| Error::Precondition("a sequence needs at least one stage".into()))?;
        let ring = first.ring();
        let tail_mat = match &tail {
            Tail::Stabilized(m) => Some(m),
            Tail::Open => None,
        };
        if stages.iter().chain(&witnesses).chain(tail_mat).any(|m| !same_ring(m.ring(), ring)) {
            return Err(Error::RingMismatch);
        }
        if witnesses.len() + 1 != stages.len() {
            return Err(Error::Precondition(format!(
                "{} stages need {} witnesses, got {}",
                stages.len(),
                stages.len() - 1,
                witnesses.len()
            )));
        }
        Ok(SeqElem { stages, witnesses, tail })
    }

    /// The constant sequence `(x, x, ...)` linked by `y`.
    pub fn constant(x: Mat, y: Mat) -> Result<SeqElem> {
        SeqElem::new(vec![x], Vec::new(), Tail::Stabilized(y))
    }

    /// Finds the witnesses by solving `y·(x_{i+1}·x_i) = x_i`.
    pub fn with_found_witnesses(stages: Vec<Mat>, stabilized: bool, opts: &Sub1Options) -> Result<SeqElem> {
        let missing = |i: usize| Error::Precondition(format!("no witness links stage {} to stage {}", i + 2, i + 1));
        let mut witnesses = Vec::new();
        for i in 0..stages.len().saturating_sub(1) {
            let y = link_witness(&stages[i + 1], &stages[i], opts.budget)?.ok_or_else(|| missing(i))?;
            witnesses.push(y);
        }
        let tail = if stabilized {
            let last = stages
                .last()
                .ok_or_else(|| Error::Precondition("a sequence needs at least one stage".into()))?;
            let y = link_witness(last, last, opts.budget)?.ok_or_else(|| missing(stages.len() - 1))?;
            Tail::Stabilized(y)
        } else {
            Tail::Open
        };
        SeqElem::new(stages, witnesses, tail)
    }

    pub fn ring(&self) -> &Ring {
        self.stages[0].ring()
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    pub fn is_stabilized(&self) -> bool {
        matches!(self.tail, Tail::Stabilized(_))
    }

    pub fn is_zero(&self) -> bool {
        self.stages.iter().all(Mat::is_zero)
    }

    /// Stage `i`, continuing a stabilized tail.
    pub fn stage(&self, i: usize) -> Option<&Mat> {
        match (self.stages.get(i), &self.tail) {
            (Some(m), _) => Some(m),
            (None, Tail::Stabilized(_)) => self.stages.last(),
            (None, Tail::Open) => None,
        }
    }

    /// Witness linking stage `i+1` to stage `i`, continuing a stabilized tail.
    pub fn witness(&self, i: usize) -> Option<&Mat> {
        match (self.witnesses.get(i), &self.tail) {
            (Some(m), _) => Some(m),
            (None, Tail::Stabilized(y)) if i + 1 >= self.stages.len() => Some(y),
            _ => None,
        }
    }

    /// The first `n` stages as an open sequence, continuing a stabilized tail.
    pub fn extended(&self, n: usize) -> Result<SeqElem> {
        let stages: Option<Vec<Mat>> = (0..n).map(|i| self.stage(i).cloned()).collect();
        let witnesses: Option<Vec<Mat>> = (0..n.saturating_sub(1)).map(|i| self.witness(i).cloned()).collect();
        match (stages, witnesses) {
            (Some(s), Some(w)) => SeqElem::new(s, w, Tail::Open),
            _ => Err(Error::Precondition(format!("an open sequence of {} stages has no stage {n}", self.len()))),
        }
    }

    pub fn describe(&self) -> String {
        let st: Vec<String> = self.stages.iter().map(|m| m.to_string()).collect();
        let tail = match &self.tail {
            Tail::Stabilized(_) => ", repeated",
            Tail::Open => ", ...",
        };
        format!("({}{})", st.join(", "), tail)
    }
}

impl fmt::Display for SeqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// Multiplication and equality on stage values. Lets the witness
/// equations be checked over rings without finite tables.
pub trait StageAlgebra {
    type Value: fmt::Display;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn equal(&self, a: &Self::Value, b: &Self::Value) -> bool;
}

/// Matrices over a finite ring with exact shapes.
pub struct MatAlgebra;

impl StageAlgebra for MatAlgebra {
    type Value = Mat;

    fn mul(&self, a: &Mat, b: &Mat) -> Result<Mat> {
        a.mul(b)
    }

    fn equal(&self, a: &Mat, b: &Mat) -> bool {
        a == b
    }
}

/// Itemized failures of `y_{i+1}·x_{i+1}·x_i = x_i`; `tail` is the witness
/// for the last stage repeating.
pub fn witness_violations<A: StageAlgebra>(
    alg: &A,
    stages: &[A::Value],
    witnesses: &[A::Value],
    tail: Option<&A::Value>,
) -> Vec<String> {
    let mut out = Vec::new();
    let mut check = |i: usize, y: &A::Value, next: &A::Value, cur: &A::Value, what: &str| {
        match alg.mul(next, cur).and_then(|p| alg.mul(y, &p)) {
            Ok(v) if alg.equal(&v, cur) => {}
            Ok(v) => out.push(format!("{what} {}: y·x'·x = {v}, expected {cur}", i + 1)),
            Err(e) => out.push(format!("{what} {}: {e}", i + 1)),
        }
    };
    for (i, y) in witnesses.iter().enumerate() {
        if let (Some(cur), Some(next)) = (stages.get(i), stages.get(i + 1)) {
            check(i, y, next, cur, "link at stage");
        }
    }
    if let (Some(y), Some(last)) = (tail, stages.last()) {
        check(stages.len() - 1, y, last, last, "stabilized tail at stage");
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct SeqReport {
    pub verdict: Verdict,
    pub violations: Vec<String>,
}

pub fn validate_seq(s: &SeqElem) -> SeqReport {
    let tail = match &s.tail {
        Tail::Stabilized(y) => Some(y),
        Tail::Open => None,
    };
    let violations = witness_violations(&MatAlgebra, &s.stages, &s.witnesses, tail);
    SeqReport {
        verdict: Verdict::from_bool(violations.is_empty()),
        violations,
    }
}

fn ensure_valid(s: &SeqElem, what: &str) -> Result<()> {
    let r = validate_seq(s);
    if r.violations.is_empty() {
        Ok(())
    } else {
        Err(Error::Invariant(format!("{what} does not validate: {}", r.violations.join("; "))))
    }
}

/// Some `y` with `y·a = b`, found row by row in the left span of the rows
/// of `a`. `Err(Budget)` when the span is too large to enumerate.
pub fn left_solve(a: &Mat, b: &Mat, budget: u64) -> Result<Option<Mat>> {
    if !same_ring(a.ring(), b.ring()) {
        return Err(Error::RingMismatch);
    }
    if a.cols() != b.cols() {
        return Err(Error::Shape(format!("{}x{} and {}x{} have different widths", a.rows(), a.cols(), b.rows(), b.cols())));
    }
    let ring = a.ring();
    let combos = Mat::count(ring, 1, a.rows()).filter(|&c| c <= budget);
    let Some(combos) = combos else {
        return Err(Error::Budget(format!("left span of {} rows", a.rows())));
    };
    let mut span: HashMap<Vec<Elem>, u64> = HashMap::new();
    for code in 0..combos {
        let c = Mat::decode(ring, 1, a.rows(), code);
        span.entry(c.mul(a)?.entries().to_vec()).or_insert(code);
    }
    let mut y = Mat::zeros(ring, b.rows(), a.rows());
    for i in 0..b.rows() {
        let row = b.block(i, i + 1, 0, b.cols());
        let Some(&code) = span.get(row.entries()) else {
            return Ok(None);
        };
        y.paste(i, 0, &Mat::decode(ring, 1, a.rows(), code));
    }
    Ok(Some(y))
}

/// `y` with `y·next·cur = cur`.
pub fn link_witness(next: &Mat, cur: &Mat, budget: u64) -> Result<Option<Mat>> {
    left_solve(&next.mul(cur)?, cur, budget)
}

/// `a ≤ b`: every stage of `a` is `≼₁` some stage of `b`. The witness lists
/// the matching stage of `b` for each stage of `a`.
pub fn seq_leq(a: &SeqElem, b: &SeqElem, opts: &Sub1Options) -> Result<Decision<Vec<usize>>> {
    if !same_ring(a.ring(), b.ring()) {
        return Err(Error::RingMismatch);
    }
    let mut spent = 0;
    let mut matches = Vec::new();
    let mut unknown = false;
    for x in &a.stages {
        let mut found = None;
        for (j, z) in b.stages.iter().enumerate() {
            let d = precsim1_with(x, z, opts)?;
            spent += d.evaluations;
            match d.verdict {
                Verdict::True => {
                    found = Some(j);
                    break;
                }
                Verdict::Unknown => unknown = true,
                Verdict::False => {}
            }
        }
        match found {
            Some(j) => matches.push(j),
            None if unknown => return Ok(Decision::unknown(spent)),
            None => {
                let certificate = if b.is_stabilized() {
                    Certificate::Exact
                } else {
                    Certificate::StageRelative
                };
                return Ok(Decision {
                    verdict: Verdict::False,
                    certificate,
                    witness: None,
                    evaluations: spent,
                });
            }
        }
    }
    let certificate = if a.is_stabilized() {
        Certificate::Exact
    } else {
        Certificate::StageRelative
    };
    Ok(Decision {
        verdict: Verdict::True,
        certificate,
        witness: Some(matches),
        evaluations: spent,
    })
}

/// Stagewise `⊕`. A shorter stabilized summand is padded with its tail; a
/// shorter open summand truncates the other.
pub fn seq_sum(a: &SeqElem, b: &SeqElem) -> Result<SeqElem> {
    if !same_ring(a.ring(), b.ring()) {
        return Err(Error::RingMismatch);
    }
    let n = match (a.is_stabilized(), b.is_stabilized()) {
        (true, true) => a.len().max(b.len()),
        (true, false) => b.len(),
        (false, true) => a.len(),
        (false, false) => a.len().min(b.len()),
    };
    let (ea, eb) = (a.extended(n)?, b.extended(n)?);
    let stages = ea
        .stages
        .iter()
        .zip(&eb.stages)
        .map(|(x, y)| x.diag_sum(y))
        .collect::<Result<Vec<_>>>()?;
    let witnesses = ea
        .witnesses
        .iter()
        .zip(&eb.witnesses)
        .map(|(x, y)| x.diag_sum(y))
        .collect::<Result<Vec<_>>>()?;
    let tail = match (&a.tail, &b.tail) {
        (Tail::Stabilized(y), Tail::Stabilized(z)) => Tail::Stabilized(y.diag_sum(z)?),
        _ => Tail::Open,
    };
    let out = SeqElem::new(stages, witnesses, tail)?;
    ensure_valid(&out, "the sum")?;
    Ok(out)
}

/// Entrywise image under a ring homomorphism.
pub fn induce_morphism(f: &RingHom, s: &SeqElem) -> Result<SeqElem> {
    let map = |ms: &[Mat]| ms.iter().map(|m| f.apply_mat(m)).collect::<Result<Vec<_>>>();
    let tail = match &s.tail {
        Tail::Stabilized(y) => Tail::Stabilized(f.apply_mat(y)?),
        Tail::Open => Tail::Open,
    };
    let out = SeqElem::new(map(&s.stages)?, map(&s.witnesses)?, tail)?;
    ensure_valid(&out, "the image")?;
    Ok(out)
}

/// Image of each class of `src` in `tgt` under `f`, through its
/// representative; `None` when the image does not fit the truncation.
/// Also reports whether every comparable pair maps to a comparable pair.
pub fn induce_on_classes(f: &RingHom, src: &TruncatedPoM, tgt: &TruncatedPoM) -> Result<(Vec<Option<usize>>, bool)> {
    let images = src
        .classes
        .iter()
        .map(|m| Ok(tgt.class_of(&f.apply_mat(m)?)))
        .collect::<Result<Vec<_>>>()?;
    let monotone = (0..src.len()).all(|i| {
        (0..src.len()).all(|j| match (images[i], images[j]) {
            (Some(a), Some(b)) if src.leq(i, j) => tgt.leq(a, b),
            _ => true,
        })
    });
    Ok((images, monotone))
}
