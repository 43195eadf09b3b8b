//! Rank normal form over a prime field.

use crate::error::{Error, Result};
use crate::matrix::{ElementaryOp, Mat, OpLog};
use crate::ring::Elem;

/// `P · x · Q = diag(1,…,1,0,…,0)` with `rank` ones.
pub(crate) struct RankForm {
    pub rank: usize,
    pub p: Mat,
    pub p_inv: Mat,
    pub q: Mat,
    pub q_inv: Mat,
}

pub(crate) fn rank_form(x: &Mat) -> Result<RankForm> {
    let ring = x.ring().clone();
    if ring.prime_field().is_none() {
        return Err(Error::Precondition("rank form needs a prime field".into()));
    }
    let (m, n) = x.shape();
    let mut w = x.clone();
    let mut log = OpLog::new(&ring, m, n);
    let mut t = 0;
    while t < m.min(n) {
        let pivot = (t..m)
            .flat_map(|i| (t..n).map(move |j| (i, j)))
            .find(|&(i, j)| w.get(i, j) != Elem::ZERO);
        let Some((i, j)) = pivot else { break };
        if i != t {
            log.apply(&mut w, ElementaryOp::RowSwap { a: t, b: i });
        }
        if j != t {
            log.apply(&mut w, ElementaryOp::ColSwap { a: t, b: j });
        }
        let inv = ring.inverse(w.get(t, t)).expect("nonzero element of a field");
        if w.get(t, t) != ring.one().unwrap() {
            log.apply(&mut w, ElementaryOp::RowScale { row: t, unit: inv });
        }
        for i in 0..m {
            let v = w.get(i, t);
            if i != t && v != Elem::ZERO {
                log.apply(&mut w, ElementaryOp::RowAdd { target: i, source: t, factor: ring.neg(v) });
            }
        }
        for j in t + 1..n {
            let v = w.get(t, j);
            if v != Elem::ZERO {
                log.apply(&mut w, ElementaryOp::ColAdd { target: j, source: t, factor: ring.neg(v) });
            }
        }
        t += 1;
    }
    Ok(RankForm {
        rank: t,
        p: log.left()?,
        p_inv: log.left_inverse()?,
        q: log.right()?,
        q_inv: log.right_inverse()?,
    })
}

#[cfg(test)]
pub(crate) fn rank(x: &Mat) -> Result<usize> {
    Ok(rank_form(x)?.rank)
}

/// Witness for `a = r·b·t` when `rank(a) <= rank(b)`.
pub(crate) fn witness(a: &Mat, b: &Mat) -> Result<Option<(Mat, Mat)>> {
    let fa = rank_form(a)?;
    let fb = rank_form(b)?;
    if fa.rank > fb.rank {
        return Ok(None);
    }
    let ring = a.ring();
    let one = ring.one().expect("field");
    // E_a = S · E_b · T with S, T partial identities.
    let mut s = Mat::zeros(ring, a.rows(), b.rows());
    let mut t = Mat::zeros(ring, b.cols(), a.cols());
    for i in 0..fa.rank {
        s.set(i, i, one);
        t.set(i, i, one);
    }
    let r = fa.p_inv.mul(&s)?.mul(&fb.p)?;
    let t = fb.q.mul(&t)?.mul(&fa.q_inv)?;
    Ok(Some((r, t)))
}
