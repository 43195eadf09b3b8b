use serde::Serialize;

use super::{left_solve, link_witness, SeqElem, Tail};
use crate::cu::{LambdaElem, LambdaModel};
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::subequiv::{equivalent1, precsim1_with, Sub1Options};
use crate::verdict::{Certificate, Verdict};
use crate::wr::TruncatedPoM;

#[derive(Clone, Debug, Serialize)]
pub struct CompactReport {
    pub verdict: Verdict,
    pub certificate: Certificate,
    /// `z = s·z²` representing the class.
    pub z: Option<Mat>,
    pub s: Option<Mat>,
    /// Stage the recipe factored through.
    pub n0: Option<usize>,
    pub method: String,
}

fn report(verdict: Verdict, certificate: Certificate, zs: Option<(Mat, Mat)>, n0: Option<usize>, method: &str) -> CompactReport {
    let (z, s) = match zs {
        Some((z, s)) => (Some(z), Some(s)),
        None => (None, None),
    };
    CompactReport {
        verdict,
        certificate,
        z,
        s,
        n0,
        method: method.into(),
    }
}

/// `s` with `z = s·z²`, for square `z`.
fn regular_witness(z: &Mat, budget: u64) -> Result<Option<Mat>> {
    left_solve(&z.mul(z)?, z, budget)
}

/// Square matrices of size at most `bound` that are `∼₁ target` and satisfy
/// `z = s·z²` for some `s`.
fn exhaustive(target: &Mat, bound: usize, opts: &Sub1Options) -> Result<Option<(Mat, Mat)>> {
    let ring = target.ring();
    for n in 1..=bound {
        let count = Mat::count(ring, n, n)
            .filter(|&c| c <= opts.budget)
            .ok_or_else(|| Error::Budget(format!("{n}x{n} matrices")))?;
        for code in 0..count {
            let z = Mat::decode(ring, n, n, code);
            let Some(s) = regular_witness(&z, opts.budget)? else {
                continue;
            };
            if equivalent1(&z, target, opts)? == Verdict::True {
                return Ok(Some((z, s)));
            }
        }
    }
    Ok(None)
}

/// Looks for `z`, `s` with `z = s·z²` and `[(z)] = [(x_n)]`.
///
/// Stabilized tails with a valid witness `y` give `z = x_N`, `s = y`. Otherwise
/// the recipe picks `n0` with every later stored stage `≼₁ x_{n0}`, factors
/// `x_{n0+1} = r·x_{n0}·t` and sets `z = x_{n0}·t`, `s = y_{n0+1}·r`. Failing
/// that, square matrices up to `bound` are searched.
pub fn is_compact_seq(seq: &SeqElem, bound: usize, opts: &Sub1Options) -> Result<CompactReport> {
    let ring = seq.ring();
    if seq.is_zero() && seq.is_stabilized() {
        let z = Mat::zeros(ring, 1, 1);
        return Ok(report(Verdict::True, Certificate::Exact, Some((z.clone(), z)), None, "zero"));
    }
    if let Tail::Stabilized(y) = &seq.tail {
        let x = seq.stages.last().expect("nonempty");
        if y.mul(x)?.mul(x).ok().as_ref() == Some(x) {
            return Ok(report(
                Verdict::True,
                Certificate::Exact,
                Some((x.clone(), y.clone())),
                Some(seq.len() - 1),
                "stabilized tail",
            ));
        }
    }
    let n = seq.len();
    for n0 in 0..n.saturating_sub(1) {
        let x = &seq.stages[n0];
        let mut bounded = true;
        for later in &seq.stages[n0 + 1..] {
            if precsim1_with(later, x, opts)?.verdict != Verdict::True {
                bounded = false;
                break;
            }
        }
        if !bounded {
            continue;
        }
        let Some(w) = precsim1_with(&seq.stages[n0 + 1], x, opts)?.witness else {
            continue;
        };
        let t = w.t.pad_to(x.cols(), seq.stages[n0 + 1].cols());
        let r = w.r.pad_to(seq.stages[n0 + 1].rows(), x.rows());
        let z = x.mul(&t)?;
        let s = seq.witnesses[n0].mul(&r)?;
        if z.is_square() && s.mul(&z)?.mul(&z)? == z {
            let cert = if seq.is_stabilized() {
                Certificate::Exact
            } else {
                Certificate::StageRelative
            };
            return Ok(report(Verdict::True, cert, Some((z, s)), Some(n0), "recipe"));
        }
    }
    if !seq.is_stabilized() {
        return Ok(report(Verdict::Unknown, Certificate::StageRelative, None, None, "recipe"));
    }
    let target = seq.stages.last().expect("nonempty");
    Ok(match exhaustive(target, bound, opts)? {
        Some(zs) => report(Verdict::True, Certificate::Exact, Some(zs), None, "exhaustive"),
        None => report(Verdict::False, Certificate::CapRelative, None, None, "exhaustive"),
    })
}

/// Whether a Λ element is the class of a valid sequence.
#[derive(Clone, Debug, Serialize)]
pub struct Realized {
    pub element: String,
    pub verdict: Verdict,
    pub certificate: Certificate,
    pub stages: Vec<Mat>,
}

/// For each element of the interval model, a valid sequence of class
/// representatives with that class, searched within the truncation.
pub fn realized_classes(w: &TruncatedPoM, model: &LambdaModel, opts: &Sub1Options) -> Result<Vec<Realized>> {
    let ring = w.ring_handle();
    let k = w.k_max;
    let total = Mat::count(ring, k, k).ok_or_else(|| Error::Budget("universe".into()))?;
    let members = |c: usize| (0..total).filter(move |&code| w.class_of_code(code) == c).map(move |code| Mat::decode(ring, k, k, code));
    let mut out = Vec::new();
    for (e, el) in model.elements.iter().enumerate() {
        let (found, cert) = match *el {
            LambdaElem::Principal(x) => {
                let mut hit = None;
                for z in members(x) {
                    if regular_witness(&z, opts.budget)?.is_some() {
                        hit = Some(vec![z]);
                        break;
                    }
                }
                (hit, Certificate::TruncationRelative)
            }
            LambdaElem::Chain { base, step } => {
                let mut terms = vec![base];
                let mut t = base;
                while let Some(s) = w.add(t, step) {
                    if s == t {
                        break;
                    }
                    terms.push(s);
                    t = s;
                }
                // Depth-first over representatives linked by witnesses.
                fn dfs(
                    w: &TruncatedPoM,
                    terms: &[usize],
                    path: &mut Vec<Mat>,
                    members: &dyn Fn(usize) -> Vec<Mat>,
                    budget: u64,
                ) -> Result<bool> {
                    if path.len() == terms.len() {
                        return Ok(true);
                    }
                    for z in members(terms[path.len()]) {
                        let ok = match path.last() {
                            Some(prev) => link_witness(&z, prev, budget)?.is_some(),
                            None => true,
                        };
                        if ok {
                            path.push(z);
                            if dfs(w, terms, path, members, budget)? {
                                return Ok(true);
                            }
                            path.pop();
                        }
                    }
                    Ok(false)
                }
                let mut path = Vec::new();
                let all = |c: usize| members(c).collect::<Vec<_>>();
                let hit = dfs(w, &terms, &mut path, &all, opts.budget)?.then_some(path);
                (hit, Certificate::StageRelative)
            }
        };
        out.push(Realized {
            element: model.labels[e].clone(),
            verdict: if found.is_some() { Verdict::True } else { Verdict::Unknown },
            certificate: cert,
            stages: found.unwrap_or_default(),
        });
    }
    Ok(out)
}
