use super::{Elem, Ring, RingSpec};
use crate::error::{Error, Result};
use crate::matrix::Mat;

/// A (not necessarily unital) ring homomorphism between finite rings.
#[derive(Clone, Debug)]
pub struct RingHom {
    source: Ring,
    target: Ring,
    map: Vec<Elem>,
    unital: bool,
}

impl RingHom {
    /// Wraps a table and checks the homomorphism laws exhaustively.
    pub fn new(source: &Ring, target: &Ring, map: Vec<Elem>, unital: bool) -> Result<RingHom> {
        if map.len() != source.size() {
            return Err(Error::Precondition("hom table must cover the source".into()));
        }
        if map.iter().any(|e| e.idx() >= target.size()) {
            return Err(Error::Precondition("hom value outside target".into()));
        }
        let h = RingHom {
            source: source.clone(),
            target: target.clone(),
            map,
            unital,
        };
        h.validate()?;
        Ok(h)
    }

    pub fn from_fn(source: &Ring, target: &Ring, unital: bool, f: impl Fn(Elem) -> Elem) -> Result<RingHom> {
        RingHom::new(source, target, source.elements().map(f).collect(), unital)
    }

    pub fn identity(ring: &Ring) -> RingHom {
        RingHom {
            source: ring.clone(),
            target: ring.clone(),
            map: ring.elements().collect(),
            unital: ring.is_unital(),
        }
    }

    /// Reduction `Z/n -> Z/m` for `m | n`.
    pub fn reduction(source: &Ring, target: &Ring) -> Result<RingHom> {
        let (n, m) = match (source.spec(), target.spec()) {
            (RingSpec::Zmod(n) | RingSpec::Gf(n), RingSpec::Zmod(m) | RingSpec::Gf(m)) => (*n, *m),
            _ => return Err(Error::Precondition("reduction needs cyclic rings".into())),
        };
        if n % m != 0 {
            return Err(Error::Precondition(format!("{m} does not divide {n}")));
        }
        RingHom::from_fn(source, target, true, |x| Elem((x.0 as u64 % m) as u16))
    }

    /// Corner embedding `R -> M_k(R)`, `x |-> x e11`.
    pub fn corner(source: &Ring, target: &Ring) -> Result<RingHom> {
        let k = match target.spec() {
            RingSpec::Matrix(inner, k) if **inner == *source.spec() => *k,
            _ => return Err(Error::Precondition("corner embedding needs target matrix(source,k)".into())),
        };
        let s = source.size();
        // e11 carries the most significant digit.
        let shift = s.pow((k * k - 1) as u32);
        RingHom::from_fn(source, target, false, |x| Elem((x.idx() * shift) as u16))
    }

    pub fn validate(&self) -> Result<()> {
        let (s, t) = (&self.source, &self.target);
        if self.apply(Elem::ZERO) != Elem::ZERO {
            return Err(Error::Precondition("hom does not preserve zero".into()));
        }
        for a in s.elements() {
            for b in s.elements() {
                if self.apply(s.add(a, b)) != t.add(self.apply(a), self.apply(b)) {
                    return Err(Error::Precondition(format!("hom not additive at ({a},{b})")));
                }
                if self.apply(s.mul(a, b)) != t.mul(self.apply(a), self.apply(b)) {
                    return Err(Error::Precondition(format!("hom not multiplicative at ({a},{b})")));
                }
            }
        }
        if self.unital {
            match (s.one(), t.one()) {
                (Some(u), Some(v)) if self.apply(u) == v => {}
                _ => return Err(Error::Precondition("hom declared unital but does not send 1 to 1".into())),
            }
        }
        Ok(())
    }

    #[inline]
    pub fn apply(&self, a: Elem) -> Elem {
        self.map[a.idx()]
    }

    /// Entrywise image of a matrix.
    pub fn apply_mat(&self, m: &Mat) -> Result<Mat> {
        if *m.ring() != self.source {
            return Err(Error::RingMismatch);
        }
        Ok(Mat::from_raw(&self.target, m.rows(), m.cols(), m.entries().iter().map(|&x| self.apply(x)).collect()))
    }

    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    pub fn is_unital(&self) -> bool {
        self.unital
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &RingHom) -> Result<RingHom> {
        if *self.target != *other.source {
            return Err(Error::RingMismatch);
        }
        RingHom::new(
            &self.source,
            &other.target,
            self.map.iter().map(|&x| other.apply(x)).collect(),
            self.unital && other.unital,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::FiniteRing;

    #[test]
    fn reduction_and_corner() {
        let z4 = FiniteRing::zmod(4).unwrap();
        let z2 = FiniteRing::zmod(2).unwrap();
        let red = RingHom::reduction(&z4, &z2).unwrap();
        assert_eq!(red.apply(Elem(2)), Elem(0));
        assert_eq!(red.apply(Elem(3)), Elem(1));
        let m2 = FiniteRing::matrix_ring(&RingSpec::Zmod(2), 2).unwrap();
        let c = RingHom::corner(&z2, &m2).unwrap();
        assert_eq!(m2.label(c.apply(Elem(1))), "[[1,0],[0,0]]");
        let comp = red.then(&c).unwrap();
        assert_eq!(comp.apply(Elem(3)), c.apply(Elem(1)));
        assert!(!comp.is_unital());
    }

    #[test]
    fn non_hom_rejected() {
        let z4 = FiniteRing::zmod(4).unwrap();
        // x |-> 2x is additive but not multiplicative.
        assert!(RingHom::from_fn(&z4, &z4, false, |x| Elem(((2 * x.0) % 4) as u16)).is_err());
    }
}
