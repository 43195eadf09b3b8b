//! The relations `a ≼₁ b` (`a = r·b·t`) and `≼_M`, plus the constructive
//! lemmas built on them.

mod field;
mod lemmas;
mod malcolmson;
mod search;

pub use lemmas::{complement, regular_idempotent, swap_witness, triangular_identity, Complement, Regular};
pub use malcolmson::{precsim_m, precsim_m_in, reach, separations, ChainStep, MalcolmsonOptions, MalcolmsonReport, Reach, StepKind};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{same_ring, Mat};
use crate::ring::{Elem, Ring};
use crate::uniserial::diagonalize;
use crate::verdict::{Budget, Decision, Verdict, DEFAULT_BUDGET};

#[cfg(test)]
pub(crate) use field::rank;

/// Witness for `a = r·b·t`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Sub1Witness {
    pub r: Mat,
    pub t: Mat,
}

impl Sub1Witness {
    pub fn check(&self, a: &Mat, b: &Mat) -> bool {
        self.r.cols() == b.rows()
            && b.cols() == self.t.rows()
            && self.r.mul(b).and_then(|x| x.mul(&self.t)).map_or(false, |x| x == *a)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Exact reductions first, exhaustive search last.
    Auto,
    /// Exhaustive search on the unreduced pair.
    Generic,
    /// Rank comparison; only over prime fields.
    FieldRank,
}

#[derive(Clone, Copy, Debug)]
pub struct Sub1Options {
    pub budget: u64,
    pub strategy: Strategy,
}

impl Default for Sub1Options {
    fn default() -> Self {
        Sub1Options {
            budget: DEFAULT_BUDGET,
            strategy: Strategy::Auto,
        }
    }
}

pub fn precsim1(a: &Mat, b: &Mat) -> Result<Decision<Sub1Witness>> {
    precsim1_with(a, b, &Sub1Options::default())
}

/// Decides `a ≼₁ b`. An exhausted budget yields `Unknown`, never `False`.
pub fn precsim1_with(a: &Mat, b: &Mat, opts: &Sub1Options) -> Result<Decision<Sub1Witness>> {
    if !same_ring(a.ring(), b.ring()) {
        return Err(Error::RingMismatch);
    }
    let mut budget = Budget::new(opts.budget);
    let found = match opts.strategy {
        Strategy::Generic => generic(a, b, &mut budget),
        Strategy::FieldRank => {
            if a.ring().prime_field().is_none() {
                return Err(Error::Precondition("the rank strategy needs a prime field".into()));
            }
            Search::Done(field::witness(a, b)?)
        }
        Strategy::Auto => auto(a, b, &mut budget)?,
    };
    match found {
        Search::Done(Some((r, t))) => {
            let w = Sub1Witness { r, t };
            if !w.check(a, b) {
                return Err(Error::Invariant(format!("witness for {a} ≼₁ {b} fails to reproduce a")));
            }
            Ok(Decision::exact(Verdict::True, Some(w), budget.spent))
        }
        Search::Done(None) => Ok(Decision::exact(Verdict::False, None, budget.spent)),
        Search::OutOfBudget => Ok(Decision::unknown(budget.spent)),
    }
}

/// `a ∼₁ b`.
pub fn equivalent1(a: &Mat, b: &Mat, opts: &Sub1Options) -> Result<Verdict> {
    let fwd = precsim1_with(a, b, opts)?.verdict;
    if fwd.is_false() {
        return Ok(fwd);
    }
    Ok(fwd.and(precsim1_with(b, a, opts)?.verdict))
}

enum Search {
    Done(Option<(Mat, Mat)>),
    OutOfBudget,
}

fn generic(a: &Mat, b: &Mat, budget: &mut Budget) -> Search {
    match search::exhaustive(a, b, budget) {
        search::Outcome::Found(r, t) => Search::Done(Some((r, t))),
        search::Outcome::Absent => Search::Done(None),
        search::Outcome::OutOfBudget => Search::OutOfBudget,
    }
}

fn nonzero_rows(x: &Mat) -> Vec<usize> {
    (0..x.rows()).filter(|&i| (0..x.cols()).any(|j| x.get(i, j) != Elem::ZERO)).collect()
}

fn nonzero_cols(x: &Mat) -> Vec<usize> {
    (0..x.cols()).filter(|&j| (0..x.rows()).any(|i| x.get(i, j) != Elem::ZERO)).collect()
}

fn select(x: &Mat, rows: &[usize], cols: &[usize]) -> Mat {
    let mut out = Mat::zeros(x.ring(), rows.len(), cols.len());
    for (i, &ri) in rows.iter().enumerate() {
        for (j, &cj) in cols.iter().enumerate() {
            out.set(i, j, x.get(ri, cj));
        }
    }
    out
}

/// Places `x` at the given rows and columns of an `rows×cols` zero matrix.
fn scatter(x: &Mat, rows: usize, cols: usize, at_rows: &[usize], at_cols: &[usize]) -> Mat {
    let mut out = Mat::zeros(x.ring(), rows, cols);
    for (i, &ri) in at_rows.iter().enumerate() {
        for (j, &cj) in at_cols.iter().enumerate() {
            out.set(ri, cj, x.get(i, j));
        }
    }
    out
}

fn auto(a: &Mat, b: &Mat, budget: &mut Budget) -> Result<Search> {
    let ring = a.ring().clone();
    let (ra, ca) = (nonzero_rows(a), nonzero_cols(a));
    if ra.is_empty() {
        let r = Mat::zeros(&ring, a.rows(), b.rows());
        let t = Mat::zeros(&ring, b.cols(), a.cols());
        return Ok(Search::Done(Some((r, t))));
    }
    let (rb, cb) = (nonzero_rows(b), nonzero_cols(b));
    if rb.is_empty() {
        return Ok(Search::Done(None));
    }
    // Zero rows and columns carry no information: drop them and scatter the
    // witness back afterwards.
    let a0 = select(a, &ra, &ca);
    let b0 = select(b, &rb, &cb);
    let inner = reduced(&a0, &b0, budget)?;
    Ok(match inner {
        Search::Done(Some((r0, t0))) => Search::Done(Some((
            scatter(&r0, a.rows(), b.rows(), &ra, &rb),
            scatter(&t0, b.cols(), a.cols(), &cb, &ca),
        ))),
        other => other,
    })
}

fn reduced(a: &Mat, b: &Mat, budget: &mut Budget) -> Result<Search> {
    let ring = a.ring().clone();
    if let Some((fa, fb)) = ring.factors() {
        // Over R×S the relation holds iff it holds in each factor.
        let (a1, a2) = split(a, fa, fb);
        let (b1, b2) = split(b, fa, fb);
        let (r1, t1) = match auto(&a1, &b1, budget)? {
            Search::Done(Some(w)) => w,
            other => return Ok(other),
        };
        let (r2, t2) = match auto(&a2, &b2, budget)? {
            Search::Done(Some(w)) => w,
            other => return Ok(other),
        };
        return Ok(Search::Done(Some((join(&ring, &r1, &r2), join(&ring, &t1, &t2)))));
    }
    if ring.prime_field().is_some() {
        return Ok(Search::Done(field::witness(a, b)?));
    }
    if let Some((_, k)) = ring.chain_ring() {
        if k >= 2 && (a.rows() > 1 || a.cols() > 1 || b.rows() > 1 || b.cols() > 1) {
            return chain_reduce(a, b, budget);
        }
    }
    Ok(oriented(a, b, budget))
}

/// Whether `≼₁` over `ring` is decided without exhaustive search:
/// prime fields, `Z/p^k`, and products of such rings.
pub(crate) fn has_fast_path(ring: &Ring) -> bool {
    ring.prime_field().is_some()
        || ring.chain_ring().is_some()
        || ring
            .factors()
            .is_some_and(|(a, b)| has_fast_path(a) && has_fast_path(b))
}

fn split(m: &Mat, fa: &Ring, fb: &Ring) -> (Mat, Mat) {
    let sb = fb.size();
    let (r, c) = m.shape();
    let x = m.entries().iter().map(|e| Elem((e.idx() / sb) as u16)).collect();
    let y = m.entries().iter().map(|e| Elem((e.idx() % sb) as u16)).collect();
    (Mat::from_raw(fa, r, c, x), Mat::from_raw(fb, r, c, y))
}

fn join(ring: &Ring, x: &Mat, y: &Mat) -> Mat {
    let sb = ring.factors().expect("product ring").1.size();
    let data = x
        .entries()
        .iter()
        .zip(y.entries())
        .map(|(p, q)| Elem((p.idx() * sb + q.idx()) as u16))
        .collect();
    Mat::from_raw(ring, x.rows(), x.cols(), data)
}

/// Exhaustive search, transposing first when that shrinks the column set
/// and the ring is commutative.
fn oriented(a: &Mat, b: &Mat, budget: &mut Budget) -> Search {
    if a.ring().is_commutative() && b.rows() < b.cols() {
        match generic(&a.transpose(), &b.transpose(), budget) {
            Search::Done(Some((r, t))) => Search::Done(Some((t.transpose(), r.transpose()))),
            other => other,
        }
    } else {
        generic(a, b, budget)
    }
}

/// Over `Z/p^k` both sides are replaced by diagonal forms `U·x·V`; the
/// relation is invariant under invertible factors, so this is exact.
fn chain_reduce(a: &Mat, b: &Mat, budget: &mut Budget) -> Result<Search> {
    let na = a.rows().max(a.cols());
    let nb = b.rows().max(b.cols());
    let ca = diagonalize(&a.pad_to(na, na))?;
    let cb = diagonalize(&b.pad_to(nb, nb))?;
    let (da, db) = (ca.d.clone(), cb.d.clone());
    let (ia, ib) = (diagonal_support(&da), diagonal_support(&db));
    if ib.is_empty() {
        return Ok(Search::Done(None));
    }
    let sa = select(&da, &ia, &ia);
    let sb = select(&db, &ib, &ib);
    Ok(match oriented(&sa, &sb, budget) {
        Search::Done(Some((r0, t0))) => {
            // da = R·db·T with R, T scattered from the trimmed witness.
            let r_d = scatter(&r0, na, nb, &ia, &ib);
            let t_d = scatter(&t0, nb, na, &ib, &ia);
            // a_pad = Ua⁻¹·da·Va⁻¹ and db = Ub·b_pad·Vb.
            let r_pad = ca.u_inv.mul(&r_d)?.mul(&cb.u)?;
            let t_pad = cb.v.mul(&t_d)?.mul(&ca.v_inv)?;
            Search::Done(Some((
                r_pad.block(0, a.rows(), 0, b.rows()),
                t_pad.block(0, b.cols(), 0, a.cols()),
            )))
        }
        other => other,
    })
}

fn diagonal_support(d: &Mat) -> Vec<usize> {
    (0..d.rows()).filter(|&i| d.get(i, i) != Elem::ZERO).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{FiniteRing, RingSpec};
    use proptest::prelude::*;

    fn generic_opts() -> Sub1Options {
        Sub1Options {
            budget: DEFAULT_BUDGET,
            strategy: super::Strategy::Generic,
        }
    }

    #[test]
    fn examples() {
        let f2 = FiniteRing::gf(2).unwrap();
        let a = Mat::parse(&f2, "[[1]]").unwrap();
        let b = Mat::parse(&f2, "[[1,0],[0,0]]").unwrap();
        let d = precsim1(&a, &b).unwrap();
        assert_eq!(d.verdict, Verdict::True);
        assert!(d.witness.unwrap().check(&a, &b));

        let z4 = FiniteRing::zmod(4).unwrap();
        let one = Mat::parse(&z4, "1").unwrap();
        let two = Mat::parse(&z4, "2").unwrap();
        assert_eq!(precsim1(&one, &two).unwrap().verdict, Verdict::False);
        assert_eq!(precsim1(&two, &one).unwrap().verdict, Verdict::True);
        assert_eq!(precsim1_with(&one, &two, &generic_opts()).unwrap().verdict, Verdict::False);
    }

    #[test]
    fn incomparable_over_z4() {
        let z4 = FiniteRing::zmod(4).unwrap();
        let dd = Mat::parse(&z4, "[[2,0],[0,2]]").unwrap();
        let one = Mat::parse(&z4, "1").unwrap();
        for opts in [Sub1Options::default(), generic_opts()] {
            assert_eq!(precsim1_with(&dd, &one, &opts).unwrap().verdict, Verdict::False);
            assert_eq!(precsim1_with(&one, &dd, &opts).unwrap().verdict, Verdict::False);
        }
    }

    #[test]
    fn unknown_on_budget() {
        let z4 = FiniteRing::zmod(4).unwrap();
        let a = Mat::parse(&z4, "[[1,1],[0,1]]").unwrap();
        let opts = Sub1Options {
            budget: 2,
            strategy: super::Strategy::Generic,
        };
        assert_eq!(precsim1_with(&a, &a, &opts).unwrap().verdict, Verdict::Unknown);
    }

    #[test]
    fn rank_strategy_rejects_other_rings() {
        let z4 = FiniteRing::zmod(4).unwrap();
        let a = Mat::parse(&z4, "1").unwrap();
        let opts = Sub1Options {
            budget: 10,
            strategy: super::Strategy::FieldRank,
        };
        assert!(precsim1_with(&a, &a, &opts).is_err());
    }

    #[test]
    fn non_unital_ideal() {
        let ideal: RingSpec = RingSpec::parse("ideal(zmod(4),[2])").unwrap();
        let j = ideal.build().unwrap();
        let two = Mat::parse(&j, "1").unwrap();
        // 2 = r·2·t has no solution with r, t in {0, 2}.
        assert_eq!(precsim1(&two, &two).unwrap().verdict, Verdict::False);
    }

    fn mat_strategy(n: u16, max: usize) -> impl proptest::strategy::Strategy<Value = (usize, usize, Vec<u16>)> {
        (1..=max, 1..=max, proptest::collection::vec(0..n, max * max))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn chain_reduction_agrees_with_search(a in mat_strategy(8, 2), b in mat_strategy(8, 2)) {
            let r = FiniteRing::zmod(8).unwrap();
            let ma = Mat::new(&r, a.0, a.1, a.2[..a.0 * a.1].iter().map(|&x| Elem(x)).collect()).unwrap();
            let mb = Mat::new(&r, b.0, b.1, b.2[..b.0 * b.1].iter().map(|&x| Elem(x)).collect()).unwrap();
            let fast = precsim1(&ma, &mb).unwrap().verdict;
            let slow = precsim1_with(&ma, &mb, &generic_opts()).unwrap().verdict;
            prop_assert_eq!(fast, slow);
        }

        #[test]
        fn product_split_agrees_with_search(a in mat_strategy(6, 2), b in mat_strategy(6, 2)) {
            let r = FiniteRing::product(&RingSpec::Gf(2), &RingSpec::Gf(3)).unwrap();
            let ma = Mat::new(&r, a.0, a.1, a.2[..a.0 * a.1].iter().map(|&x| Elem(x)).collect()).unwrap();
            let mb = Mat::new(&r, b.0, b.1, b.2[..b.0 * b.1].iter().map(|&x| Elem(x)).collect()).unwrap();
            let fast = precsim1(&ma, &mb).unwrap();
            let slow = precsim1_with(&ma, &mb, &generic_opts()).unwrap().verdict;
            prop_assert_eq!(fast.verdict, slow);
            if let Some(w) = fast.witness {
                prop_assert!(w.check(&ma, &mb));
            }
        }
    }
}
