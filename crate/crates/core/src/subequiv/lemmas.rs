//! Constructive witnesses: complements of idempotent classes, regular
//! elements, the block-triangular identity and the swap of a diagonal sum.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{Idem, Mat};
use crate::subequiv::{field, precsim1_with, Sub1Options, Sub1Witness};
use crate::verdict::{Budget, Decision, Verdict};

/// Output of [`complement`]: `[f] + [w] = [v]` with `[f] = [e]`.
#[derive(Clone, Debug, Serialize)]
pub struct Complement {
    /// `e = r·v·s` with `r = e·r` and `s = s·e`.
    pub r: Mat,
    pub s: Mat,
    pub f: Mat,
    pub w: Mat,
    /// `e = r·f·(v·s)` and `f = (v·s)·e·r`.
    pub e_below_f: Sub1Witness,
    pub f_below_e: Sub1Witness,
    /// `v = [f a]·(f ⊕ w)·[v; b]`.
    pub v_below_sum: Sub1Witness,
    /// `f ⊕ w = [f·c; c − f·c]·v·[d·s·r, d − d·s·r·v]`.
    pub sum_below_v: Sub1Witness,
}

/// `(a, b)` with `a·x·b = x`: identities in unital rings, a search otherwise.
fn self_witness(x: &Mat, opts: &Sub1Options) -> Result<(Mat, Mat)> {
    let ring = x.ring();
    if ring.is_unital() {
        return Ok((Mat::identity(ring, x.rows())?, Mat::identity(ring, x.cols())?));
    }
    let d = precsim1_with(x, x, opts)?;
    match d.verdict {
        Verdict::True => {
            let w = d.witness.expect("witness");
            Ok((w.r, w.t))
        }
        Verdict::False => Err(Error::Precondition(format!("{x} is not of the form a·x·b"))),
        Verdict::Unknown => Err(Error::Budget(format!("searching a·{x}·b"))),
    }
}

/// Complements `[e] <= [v]` inside `W(R)`.
pub fn complement(e: &Idem, v: &Mat, opts: &Sub1Options) -> Result<Complement> {
    let eb = e.base();
    let d = if v == eb {
        Decision::exact(Verdict::True, Some(Sub1Witness { r: eb.clone(), t: eb.clone() }), 0)
    } else {
        precsim1_with(eb, v, opts)?
    };
    let w0 = match d.verdict {
        Verdict::True => d.witness.expect("witness"),
        Verdict::False => return Err(Error::Precondition(format!("{eb} is not ≼₁ {v}"))),
        Verdict::Unknown => return Err(Error::Budget(format!("deciding {eb} ≼₁ {v}"))),
    };
    let r = eb.mul(&w0.r)?;
    let s = w0.t.mul(eb)?;
    let f = v.mul(&s)?.mul(&r)?;
    let w = v.sub(&f.mul(v)?)?;
    let vs = v.mul(&s)?;
    let e_below_f = Sub1Witness { r: r.clone(), t: vs.clone() };
    let f_below_e = Sub1Witness {
        r: vs.clone(),
        t: r.clone(),
    };

    let (a, b) = self_witness(&w, opts)?;
    let v_below_sum = Sub1Witness {
        r: f.hcat(&a)?,
        t: v.vcat(&b)?,
    };
    let (c, dd) = self_witness(v, opts)?;
    let fc = f.mul(&c)?;
    let dsr = dd.mul(&s)?.mul(&r)?;
    let sum_below_v = Sub1Witness {
        r: fc.vcat(&c.sub(&fc)?)?,
        t: dsr.hcat(&dd.sub(&dsr.mul(v)?)?)?,
    };

    let sum = f.diag_sum(&w)?;
    let ok = f.is_idempotent()
        && e_below_f.check(eb, &f)
        && f_below_e.check(&f, eb)
        && v_below_sum.check(v, &sum)
        && sum_below_v.check(&sum, v);
    if !ok {
        return Err(Error::Invariant("complement witnesses fail to verify".into()));
    }
    Ok(Complement {
        r,
        s,
        f,
        w,
        e_below_f,
        f_below_e,
        v_below_sum,
        sum_below_v,
    })
}

/// A von Neumann regular element with its idempotent.
#[derive(Clone, Debug, Serialize)]
pub struct Regular {
    /// `a = a·x·a` and `x = x·a·x`.
    pub x: Mat,
    /// `e = a·x`.
    pub e: Mat,
    /// `e = (a·x)·a·x`.
    pub e_below_a: Sub1Witness,
    /// `a = e·e·a`.
    pub a_below_e: Sub1Witness,
}

/// Searches `x` with `a = a·x·a`; `False` means `a` is not regular.
pub fn regular_idempotent(a: &Mat, opts: &Sub1Options) -> Result<Decision<Regular>> {
    let ring = a.ring().clone();
    let (m, n) = a.shape();
    let mut budget = Budget::new(opts.budget);
    let x = if ring.prime_field().is_some() {
        let f = field::rank_form(a)?;
        let one = ring.one().expect("field");
        let mut part = Mat::zeros(&ring, n, m);
        for i in 0..f.rank {
            part.set(i, i, one);
        }
        Some(f.q.mul(&part)?.mul(&f.p)?)
    } else {
        let Some(count) = Mat::count(&ring, n, m) else {
            return Ok(Decision::unknown(0));
        };
        let mut hit = None;
        for code in 0..count {
            if !budget.charge((m * n * (m + n)) as u64) {
                return Ok(Decision::unknown(budget.spent));
            }
            let x = Mat::decode(&ring, n, m, code);
            if a.mul_unchecked(&x).mul_unchecked(a) == *a {
                hit = Some(x);
                break;
            }
        }
        hit
    };
    let Some(x) = x else {
        return Ok(Decision::exact(Verdict::False, None, budget.spent));
    };
    let x = x.mul(a)?.mul(&x)?;
    let e = a.mul(&x)?;
    let reg = Regular {
        e_below_a: Sub1Witness { r: e.clone(), t: x.clone() },
        a_below_e: Sub1Witness { r: e.clone(), t: a.clone() },
        x,
        e,
    };
    let ok = reg.e.is_idempotent()
        && a.mul(&reg.x)?.mul(a)? == *a
        && reg.e_below_a.check(&reg.e, a)
        && reg.a_below_e.check(a, &reg.e);
    if !ok {
        return Err(Error::Invariant("regular-element witnesses fail to verify".into()));
    }
    Ok(Decision::exact(Verdict::True, Some(reg), budget.spent))
}

/// For `a = a·a'·a` the factors `L = diag(a·a', I)` and
/// `R = [[a'·a, −a'·c], [0, I]]` with `L·[[a, c], [0, b]]·R = diag(a, b)`.
pub fn triangular_identity(a: &Mat, a_inner: &Mat, b: &Mat, c: &Mat) -> Result<Sub1Witness> {
    let ring = a.ring();
    if !ring.is_unital() {
        return Err(Error::Precondition("the block identity is built over unital rings".into()));
    }
    if a.mul(a_inner)?.mul(a)? != *a {
        return Err(Error::Precondition("a·a'·a differs from a".into()));
    }
    if c.shape() != (a.rows(), b.cols()) {
        return Err(Error::Shape("c must have a's rows and b's columns".into()));
    }
    let aa = a.mul(a_inner)?;
    let left = aa.diag_sum(&Mat::identity(ring, b.rows())?)?;
    let top = a_inner.mul(a)?.hcat(&a_inner.mul(c)?.neg())?;
    let bottom = Mat::zeros(ring, b.cols(), a.cols()).hcat(&Mat::identity(ring, b.cols())?)?;
    let right = top.vcat(&bottom)?;
    let w = Sub1Witness { r: left, t: right };
    let upper = Mat::block2(a, c, &Mat::zeros(ring, b.rows(), a.cols()), b)?;
    if !w.check(&a.diag_sum(b)?, &upper) {
        return Err(Error::Invariant("block identity fails to reproduce diag(a, b)".into()));
    }
    Ok(w)
}

/// Permutation witness for `u' ⊕ u ≼₁ u ⊕ u'`.
pub fn swap_witness(u: &Mat, u2: &Mat) -> Result<Sub1Witness> {
    let ring = u.ring();
    let (m, n) = u.shape();
    let (m2, n2) = u2.shape();
    let p = Mat::block2(
        &Mat::zeros(ring, m2, m),
        &Mat::identity(ring, m2)?,
        &Mat::identity(ring, m)?,
        &Mat::zeros(ring, m, m2),
    )?;
    let q = Mat::block2(
        &Mat::zeros(ring, n, n2),
        &Mat::identity(ring, n)?,
        &Mat::identity(ring, n2)?,
        &Mat::zeros(ring, n2, n),
    )?;
    let w = Sub1Witness { r: p, t: q };
    if !w.check(&u2.diag_sum(u)?, &u.diag_sum(u2)?) {
        return Err(Error::Invariant("swap witness fails".into()));
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::FiniteRing;

    #[test]
    fn complement_examples() {
        let f2 = FiniteRing::gf(2).unwrap();
        let opts = Sub1Options::default();
        let e = Idem::new(Mat::parse(&f2, "1").unwrap()).unwrap();
        let v = Mat::identity(&f2, 2).unwrap();
        let c = complement(&e, &v, &opts).unwrap();
        assert_eq!(c.f.trim(), Mat::parse(&f2, "1").unwrap());
        assert_eq!(c.w, Mat::parse(&f2, "[[0,0],[0,1]]").unwrap());

        let zero = Idem::new(Mat::parse(&f2, "0").unwrap()).unwrap();
        let v = Mat::parse(&f2, "[[1,1],[0,1]]").unwrap();
        let c = complement(&zero, &v, &opts).unwrap();
        assert!(c.f.is_zero());
        assert_eq!(c.w, v);

        let big = Idem::new(Mat::identity(&f2, 2).unwrap()).unwrap();
        assert!(complement(&big, &Mat::parse(&f2, "1").unwrap(), &opts).is_err());
    }

    #[test]
    fn complement_of_equal_idempotent() {
        let f2 = FiniteRing::gf(2).unwrap();
        let e = Mat::parse(&f2, "[[1,1],[0,0]]").unwrap();
        let c = complement(&Idem::new(e.clone()).unwrap(), &e, &Sub1Options::default()).unwrap();
        assert!(c.w.is_zero());
        assert_eq!(c.f, e);
    }

    #[test]
    fn regular_examples() {
        let f2 = FiniteRing::gf(2).unwrap();
        let a = Mat::parse(&f2, "[[1,1],[0,0]]").unwrap();
        let d = regular_idempotent(&a, &Sub1Options::default()).unwrap();
        assert_eq!(d.verdict, Verdict::True);
        assert!(d.witness.unwrap().e.is_idempotent());

        let z4 = FiniteRing::zmod(4).unwrap();
        let two = Mat::parse(&z4, "2").unwrap();
        assert_eq!(regular_idempotent(&two, &Sub1Options::default()).unwrap().verdict, Verdict::False);
        let one = Mat::parse(&z4, "1").unwrap();
        let d = regular_idempotent(&one, &Sub1Options::default()).unwrap();
        assert_eq!(d.witness.unwrap().e, one);
    }

    #[test]
    fn triangular_and_swap() {
        let f2 = FiniteRing::gf(2).unwrap();
        let a = Mat::parse(&f2, "[[1,1],[0,0]]").unwrap();
        let x = regular_idempotent(&a, &Sub1Options::default()).unwrap().witness.unwrap().x;
        let b = Mat::parse(&f2, "[[0,1]]").unwrap();
        let c = Mat::parse(&f2, "[[1,0],[1,1]]").unwrap();
        triangular_identity(&a, &x, &b, &c).unwrap();
        swap_witness(&a, &b).unwrap();
    }
}
