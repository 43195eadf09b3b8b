use std::sync::Arc;

use super::{Elem, FiniteRing, Ring, RingSpec, Structure};
use crate::error::{Error, Result};

/// A two-sided ideal of a unital finite ring, used as a non-unital ring.
#[derive(Clone, Debug)]
pub struct IdealRing {
    ambient: Ring,
    members: Vec<Elem>,
    generators: Vec<Elem>,
}

/// Smallest two-sided ideal of `ambient` containing `generators`.
pub fn ideal_closure(ambient: &Ring, generators: &[Elem]) -> Result<IdealRing> {
    if !ambient.is_unital() {
        return Err(Error::Precondition("ideal_closure needs a unital ambient ring".into()));
    }
    let n = ambient.size();
    let mut inside = vec![false; n];
    inside[0] = true;
    let mut frontier: Vec<Elem> = Vec::new();
    for &g in generators {
        if g.idx() >= n {
            return Err(Error::Precondition(format!("generator {g} not in ring")));
        }
        if !inside[g.idx()] {
            inside[g.idx()] = true;
            frontier.push(g);
        }
    }
    while let Some(x) = frontier.pop() {
        let push = |y: Elem, inside: &mut Vec<bool>, frontier: &mut Vec<Elem>| {
            if !inside[y.idx()] {
                inside[y.idx()] = true;
                frontier.push(y);
            }
        };
        push(ambient.neg(x), &mut inside, &mut frontier);
        for r in ambient.elements() {
            push(ambient.mul(r, x), &mut inside, &mut frontier);
            push(ambient.mul(x, r), &mut inside, &mut frontier);
        }
        let current: Vec<Elem> = ambient.elements().filter(|e| inside[e.idx()]).collect();
        for y in current {
            push(ambient.add(x, y), &mut inside, &mut frontier);
        }
    }
    let members = ambient.elements().filter(|e| inside[e.idx()]).collect();
    Ok(IdealRing {
        ambient: ambient.clone(),
        members,
        generators: generators.to_vec(),
    })
}

impl IdealRing {
    pub fn ambient(&self) -> &Ring {
        &self.ambient
    }

    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn contains(&self, a: Elem) -> bool {
        self.members.binary_search(&a).is_ok()
    }

    /// Exhaustive check that the member set is a two-sided ideal.
    pub fn is_ideal(&self) -> bool {
        let r = &self.ambient;
        self.contains(Elem::ZERO)
            && self.members.iter().all(|&x| {
                self.contains(r.neg(x))
                    && self.members.iter().all(|&y| self.contains(r.add(x, y)))
                    && r.elements().all(|s| self.contains(r.mul(s, x)) && self.contains(r.mul(x, s)))
            })
    }

    pub fn spec(&self) -> RingSpec {
        RingSpec::Ideal(
            Box::new(self.ambient.spec().clone()),
            self.generators.iter().map(|g| g.0).collect(),
        )
    }

    /// Identifier of an ambient element inside the induced ring.
    pub fn local_id(&self, a: Elem) -> Option<Elem> {
        self.members.binary_search(&a).ok().map(|i| Elem(i as u16))
    }

    /// Ambient element for an identifier of the induced ring.
    pub fn ambient_id(&self, a: Elem) -> Elem {
        self.members[a.idx()]
    }

    /// The induced ring on the members, relabelled densely (zero stays 0).
    pub fn to_ring(&self) -> Result<Ring> {
        Ok(Arc::new(self.to_ring_raw()?))
    }

    pub(crate) fn to_ring_raw(&self) -> Result<FiniteRing> {
        let r = &self.ambient;
        let m = self.members.len();
        let local = |x: Elem| self.local_id(x).expect("closed under the operations");
        let mut add = Vec::with_capacity(m * m);
        let mut mul = Vec::with_capacity(m * m);
        for &x in &self.members {
            for &y in &self.members {
                add.push(local(r.add(x, y)));
                mul.push(local(r.mul(x, y)));
            }
        }
        let one = r.one().and_then(|u| self.local_id(u));
        let labels = self.members.iter().map(|&x| r.label(x).to_string()).collect();
        FiniteRing::from_tables(self.spec(), m, add, mul, one, Some(labels), Structure::Other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_z_mod_four() {
        let r = FiniteRing::zmod(4).unwrap();
        let i = ideal_closure(&r, &[Elem(2)]).unwrap();
        assert_eq!(i.members(), &[Elem(0), Elem(2)]);
        assert!(i.is_ideal());
        let j = i.to_ring().unwrap();
        assert!(!j.is_unital());
        assert_eq!(j.size(), 2);
        assert_eq!(j.label(Elem(1)), "2");
        assert_eq!(j.mul(Elem(1), Elem(1)), Elem(0));
    }

    #[test]
    fn unit_generates_everything() {
        let r = FiniteRing::zmod(2).unwrap();
        let i = ideal_closure(&r, &[Elem(1)]).unwrap();
        assert_eq!(i.members().len(), 2);
        assert!(i.to_ring().unwrap().is_unital());
    }

    #[test]
    fn upper_triangular_corner() {
        let r = FiniteRing::upper_triangular(&RingSpec::Gf(2), 2).unwrap();
        // Positions are (0,0),(0,1),(1,1), most significant first: e12 = 0b010.
        let e12 = Elem(2);
        assert_eq!(r.label(e12), "[[0,1],[0,0]]");
        let i = ideal_closure(&r, &[e12]).unwrap();
        assert_eq!(i.members(), &[Elem(0), e12]);
        // Oracle: the set {0, e12} is closed by hand.
        assert!(i.is_ideal());
    }

    #[test]
    fn closure_is_idempotent() {
        let r = FiniteRing::zmod(12).unwrap();
        for g in r.elements() {
            let i = ideal_closure(&r, &[g]).unwrap();
            let j = ideal_closure(&r, i.members()).unwrap();
            assert_eq!(i.members(), j.members());
        }
    }

    #[test]
    fn closure_matches_principal_ideal_oracle() {
        // In Z/n the ideal generated by g is gcd(g, n) Z/n.
        let n = 12u64;
        let r = FiniteRing::zmod(n).unwrap();
        for g in 0..n {
            let i = ideal_closure(&r, &[Elem(g as u16)]).unwrap();
            let d = (1..=n).filter(|d| n % d == 0 && g % d == 0).max().unwrap();
            let expected: Vec<Elem> = (0..n).filter(|x| x % d == 0).map(|x| Elem(x as u16)).collect();
            assert_eq!(i.members(), &expected[..]);
        }
    }
}
