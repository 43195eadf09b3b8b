//! Idempotent matrices and Murray–von Neumann equivalence.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{same_ring, Mat};
use crate::subequiv::{precsim1_with, Sub1Options};
use crate::verdict::{Budget, Decision, Verdict};

/// A square matrix with `e·e = e`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Idem(Mat);

impl Idem {
    pub fn new(m: Mat) -> Result<Idem> {
        if !m.is_idempotent() {
            return Err(Error::Precondition(format!("{m} is not a square idempotent")));
        }
        Ok(Idem(m))
    }

    pub fn base(&self) -> &Mat {
        &self.0
    }

    pub fn into_mat(self) -> Mat {
        self.0
    }

    pub fn size(&self) -> usize {
        self.0.rows()
    }

    pub fn diag_sum(&self, other: &Idem) -> Result<Idem> {
        Ok(Idem(self.0.diag_sum(&other.0)?))
    }
}

/// `e = x·y` and `f = y·x`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct MvnWitness {
    pub x: Mat,
    pub y: Mat,
}

impl MvnWitness {
    pub fn check(&self, e: &Idem, f: &Idem) -> bool {
        let xy = self.x.mul(&self.y);
        let yx = self.y.mul(&self.x);
        matches!((xy, yx), (Ok(p), Ok(q)) if p == e.0 && q == f.0)
    }
}

/// Decides `e ∼ f`, with `x = e·x·f` and `y = f·y·e`.
///
/// Both `e ≼₁ f` and `f ≼₁ e` are necessary. From `e = r·f·t` the candidates
/// `x = e·r·f`, `y = f·t·e` give `x·y = e`; over a finite ring `y·x` is then
/// an idempotent below `f` equivalent to `e`, which stable finiteness forces
/// to be `f`. The exhaustive search only runs if that check fails.
pub fn mvn_equivalent(e: &Idem, f: &Idem, opts: &Sub1Options) -> Result<Decision<MvnWitness>> {
    if !same_ring(e.0.ring(), f.0.ring()) {
        return Err(Error::RingMismatch);
    }
    let fwd = precsim1_with(&e.0, &f.0, opts)?;
    if fwd.verdict == Verdict::False {
        return Ok(Decision::exact(Verdict::False, None, fwd.evaluations));
    }
    let back = precsim1_with(&f.0, &e.0, opts)?;
    let spent = fwd.evaluations + back.evaluations;
    if back.verdict == Verdict::False {
        return Ok(Decision::exact(Verdict::False, None, spent));
    }
    if let Some(w) = fwd.witness {
        let x = e.0.mul(&w.r)?.mul(&f.0)?;
        let y = f.0.mul(&w.t)?.mul(&e.0)?;
        let cand = MvnWitness { x, y };
        if cand.check(e, f) {
            return Ok(Decision::exact(Verdict::True, Some(cand), spent));
        }
    }
    let mut budget = Budget::new(opts.budget.saturating_sub(spent));
    let found = exhaustive(e, f, &mut budget);
    let spent = spent + budget.spent;
    Ok(match found {
        Some(Some(w)) => Decision::exact(Verdict::True, Some(w), spent),
        Some(None) => Decision::exact(Verdict::False, None, spent),
        None => Decision::unknown(spent),
    })
}

/// All normalized `x = e·x·f`, then `y = f·y·e` with `x·y = e`, `y·x = f`.
fn exhaustive(e: &Idem, f: &Idem, budget: &mut Budget) -> Option<Option<MvnWitness>> {
    let ring = e.0.ring();
    let (n, m) = (e.size(), f.size());
    let count = Mat::count(ring, n, m)?;
    let mut xs: Vec<Mat> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for code in 0..count {
        if !budget.charge((n * m * (n + m)) as u64) {
            return None;
        }
        let x = e.0.mul_unchecked(&Mat::decode(ring, n, m, code)).mul_unchecked(&f.0);
        if seen.insert(x.encode()) {
            xs.push(x);
        }
    }
    let mut ys: Vec<Mat> = Vec::new();
    seen.clear();
    for code in 0..Mat::count(ring, m, n)? {
        if !budget.charge((n * m * (n + m)) as u64) {
            return None;
        }
        let y = f.0.mul_unchecked(&Mat::decode(ring, m, n, code)).mul_unchecked(&e.0);
        if seen.insert(y.encode()) {
            ys.push(y);
        }
    }
    for x in &xs {
        for y in &ys {
            if !budget.charge((n * m * (n + m)) as u64) {
                return None;
            }
            let w = MvnWitness { x: x.clone(), y: y.clone() };
            if w.check(e, f) {
                return Some(Some(w));
            }
        }
    }
    Some(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::FiniteRing;

    fn idem(r: &crate::ring::Ring, s: &str) -> Idem {
        Idem::new(Mat::parse(r, s).unwrap()).unwrap()
    }

    #[test]
    fn examples() {
        let f2 = FiniteRing::gf(2).unwrap();
        let opts = Sub1Options::default();
        let one = idem(&f2, "1");
        let d = mvn_equivalent(&one, &one, &opts).unwrap();
        assert_eq!(d.verdict, Verdict::True);

        let e11 = idem(&f2, "[[1,0],[0,0]]");
        let d = mvn_equivalent(&one, &e11, &opts).unwrap();
        assert!(d.witness.unwrap().check(&one, &e11));

        let zero = idem(&f2, "0");
        assert_eq!(mvn_equivalent(&one, &zero, &opts).unwrap().verdict, Verdict::False);
        assert!(Idem::new(Mat::parse(&f2, "[[0,1],[0,0]]").unwrap()).is_err());
    }

    #[test]
    fn search_agrees_on_small_cases() {
        let f2 = FiniteRing::gf(2).unwrap();
        let a = idem(&f2, "[[1,1],[0,0]]");
        let b = idem(&f2, "[[0,0],[0,1]]");
        let mut budget = Budget::new(1 << 20);
        let w = exhaustive(&a, &b, &mut budget).unwrap().unwrap();
        assert!(w.check(&a, &b));
        assert!(exhaustive(&a, &idem(&f2, "[[1,0],[0,1]]"), &mut budget).unwrap().is_none());
    }
}
