use serde::Serialize;

use super::{ensure_valid, SeqElem, Tail};
use crate::error::{Error, Result};
use crate::matrix::{same_ring, Mat};
use crate::subequiv::{precsim1_with, Sub1Options};
use crate::verdict::Verdict;

/// `x = a·x'·b` between stage `n` of consecutive chain members.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Link {
    pub a: Mat,
    pub b: Mat,
}

fn link_for(lower: &Mat, upper: &Mat, given: Option<&Link>, opts: &Sub1Options) -> Result<Link> {
    let link = match given {
        Some(l) => l.clone(),
        None => {
            let d = precsim1_with(lower, upper, opts)?;
            match (d.verdict, d.witness) {
                (Verdict::True, Some(w)) => Link { a: w.r, b: w.t },
                _ => {
                    return Err(Error::Precondition(format!(
                        "no witness for {lower} ≼₁ {upper}; the chain is not increasing at this stage"
                    )))
                }
            }
        }
    };
    let a = link.a.pad_to(lower.rows(), upper.rows());
    let b = link.b.pad_to(upper.cols(), lower.cols());
    if a.mul(upper)?.mul(&b)? != *lower {
        return Err(Error::Precondition(format!("link witness does not give {lower} from {upper}")));
    }
    Ok(Link { a, b })
}

/// Supremum of an increasing chain `s_0 ≤ s_1 ≤ ...` by the diagonal
/// construction: stage `n` is `x_n^{(n)}·b_n`, where
/// `x_n^{(n-1)} = a_n·x_n^{(n)}·b_n`, linked by `y_{n+1}^{(n)}·a_{n+1}`.
///
/// `links[n-1]` may supply `(a_n, b_n)`; missing ones are searched. With
/// `close`, the last member's later stages and tail follow, giving the
/// supremum of the finite chain; otherwise the tail is open.
pub fn seq_sup(chain: &[SeqElem], links: &[Option<Link>], close: bool, opts: &Sub1Options) -> Result<SeqElem> {
    let k = chain.len();
    let first = chain
        .first()
        .ok_or_else(|| Error::Precondition("the chain is empty".into()))?;
    if chain.iter().any(|s| !same_ring(s.ring(), first.ring())) {
        return Err(Error::RingMismatch);
    }
    for (i, s) in chain.iter().enumerate() {
        ensure_valid(s, &format!("chain member {i}"))?;
    }
    let stage = |m: usize, n: usize| {
        chain[m]
            .stage(n)
            .cloned()
            .ok_or_else(|| Error::Precondition(format!("chain member {m} has no stage {n}")))
    };
    let witness = |m: usize, n: usize| {
        chain[m]
            .witness(n)
            .cloned()
            .ok_or_else(|| Error::Precondition(format!("chain member {m} has no witness at stage {n}")))
    };
    let mut found: Vec<Link> = Vec::new();
    for n in 1..k {
        found.push(link_for(
            &stage(n - 1, n)?,
            &stage(n, n)?,
            links.get(n - 1).and_then(|l| l.as_ref()),
            opts,
        )?);
    }
    let mut stages = vec![stage(0, 0)?];
    for n in 1..k {
        stages.push(stage(n, n)?.mul(&found[n - 1].b)?);
    }
    let mut witnesses = Vec::new();
    for n in 0..k.saturating_sub(1) {
        witnesses.push(witness(n, n)?.mul(&found[n].a)?);
    }
    let last = k - 1;
    let tail = if close {
        let member = &chain[last];
        let upto = member.len().max(k + 1);
        for n in k..upto {
            stages.push(stage(last, n)?);
            witnesses.push(witness(last, n - 1)?);
        }
        match &member.tail {
            Tail::Stabilized(y) => Tail::Stabilized(y.clone()),
            Tail::Open => Tail::Open,
        }
    } else {
        Tail::Open
    };
    let out = SeqElem::new(stages, witnesses, tail)?;
    ensure_valid(&out, "the supremum")?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{FiniteRing, Ring};
    use crate::seq::{seq_leq, validate_seq};
    use crate::verdict::Certificate;

    fn m(r: &Ring, s: &str) -> Mat {
        Mat::parse(r, s).unwrap()
    }

    fn ident(r: &Ring, n: usize) -> SeqElem {
        let i = Mat::identity(r, n).unwrap();
        SeqElem::constant(i.clone(), i).unwrap()
    }

    #[test]
    fn constant_chain() {
        let f2 = FiniteRing::gf(2).unwrap();
        let e = SeqElem::constant(m(&f2, "[[1,0],[0,0]]"), m(&f2, "[[1,0],[0,0]]")).unwrap();
        let o = Sub1Options::default();
        let s = seq_sup(&[e.clone(), e.clone()], &[], true, &o).unwrap();
        assert!(seq_leq(&s, &e, &o).unwrap().verdict.is_true());
        assert!(seq_leq(&e, &s, &o).unwrap().verdict.is_true());
    }

    #[test]
    fn identities_grow() {
        let f2 = FiniteRing::gf(2).unwrap();
        let chain: Vec<SeqElem> = (1..=3).map(|n| ident(&f2, n)).collect();
        let o = Sub1Options::default();
        let s = seq_sup(&chain, &[], false, &o).unwrap();
        assert_eq!(s.tail, Tail::Open);
        let ranks: Vec<usize> = s.stages.iter().map(|x| crate::subequiv::rank(x).unwrap()).collect();
        // u_n = I_{n+1}·b_n factors through the previous member's stage.
        assert_eq!(ranks, vec![1, 1, 2]);
        let closed = seq_sup(&chain, &[], true, &o).unwrap();
        for c in &chain {
            let d = seq_leq(c, &closed, &o).unwrap();
            assert!(d.verdict.is_true() && d.certificate == Certificate::Exact);
        }
        assert!(seq_leq(&closed, &chain[2], &o).unwrap().verdict.is_true());
    }

    #[test]
    fn nontrivial_witnesses_over_z4() {
        let z4 = FiniteRing::zmod(4).unwrap();
        let o = Sub1Options::default();
        let lower = SeqElem::with_found_witnesses(vec![m(&z4, "[[2]]"), m(&z4, "[[2]]")], false, &o);
        // [2]·[2]·y = 0, so a constant [2] has no witness.
        assert!(lower.is_err());
        let lower = SeqElem::new(
            vec![m(&z4, "[[2]]"), m(&z4, "[[1,0],[0,0]]").block(0, 2, 0, 1)],
            vec![m(&z4, "[[1,0]]")],
            Tail::Open,
        )
        .unwrap();
        assert!(validate_seq(&lower).verdict.is_true());
        let upper = SeqElem::constant(m(&z4, "[[1,0],[0,3]]"), m(&z4, "[[1,0],[0,3]]")).unwrap();
        let s = seq_sup(&[lower, upper.clone()], &[], true, &o).unwrap();
        assert!(validate_seq(&s).verdict.is_true());
        assert!(seq_leq(&s, &upper, &o).unwrap().verdict.is_true());
    }
}
