//! Finite rings given by full operation tables.
//!
//! Elements are dense identifiers `0..size` with zero always `0`. Every
//! constructor validates the ring axioms exhaustively before handing out a
//! [`Ring`].

mod hom;
mod ideal;
mod spec;
mod sunital;

pub use hom::RingHom;
pub use ideal::{ideal_closure, IdealRing};
pub use spec::{ExplicitTables, RingSpec};
pub use sunital::{check_weakly_s_unital, SUnitalReport, SUnitalOptions};

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest ring order accepted by the constructors (keeps tables under 1 MiB).
pub const MAX_RING_SIZE: usize = 512;

/// An element identifier.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u16);

impl Elem {
    pub const ZERO: Elem = Elem(0);

    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Arithmetic shape of a ring that some algorithms can exploit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Structure {
    /// `Z/n` with identifiers equal to residues.
    Cyclic { n: u64 },
    Other,
}

pub type Ring = Arc<FiniteRing>;

#[derive(Clone)]
pub struct FiniteRing {
    spec: RingSpec,
    size: usize,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    one: Option<Elem>,
    characteristic: u64,
    commutative: bool,
    labels: Vec<String>,
    structure: Structure,
    factors: OnceLock<Option<(Ring, Ring)>>,
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteRing({}, order {})", self.spec, self.size)
    }
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && self.add == other.add && self.mul == other.mul
    }
}

impl FiniteRing {
    /// Builds a ring from a specification.
    pub fn construct(spec: &RingSpec) -> Result<Ring> {
        spec.build()
    }

    pub fn zmod(n: u64) -> Result<Ring> {
        RingSpec::Zmod(n).build()
    }

    pub fn gf(p: u64) -> Result<Ring> {
        RingSpec::Gf(p).build()
    }

    pub fn matrix_ring(inner: &RingSpec, k: usize) -> Result<Ring> {
        RingSpec::Matrix(Box::new(inner.clone()), k).build()
    }

    pub fn upper_triangular(inner: &RingSpec, k: usize) -> Result<Ring> {
        RingSpec::Upper(Box::new(inner.clone()), k).build()
    }

    pub fn product(a: &RingSpec, b: &RingSpec) -> Result<Ring> {
        RingSpec::Product(Box::new(a.clone()), Box::new(b.clone())).build()
    }

    /// Validates raw tables and wraps them. `labels` defaults to the identifiers.
    pub(crate) fn from_tables(
        spec: RingSpec,
        size: usize,
        add: Vec<Elem>,
        mul: Vec<Elem>,
        one: Option<Elem>,
        labels: Option<Vec<String>>,
        structure: Structure,
    ) -> Result<FiniteRing> {
        if size == 0 {
            return Err(Error::RingAxiom("empty element set".into()));
        }
        if size > MAX_RING_SIZE {
            return Err(Error::RingSpec(format!(
                "ring order {size} exceeds the supported maximum {MAX_RING_SIZE}"
            )));
        }
        if add.len() != size * size || mul.len() != size * size {
            return Err(Error::RingAxiom("operation tables must be size x size".into()));
        }
        if add.iter().chain(mul.iter()).any(|e| e.idx() >= size) {
            return Err(Error::RingAxiom("table entry out of range".into()));
        }
        if let Some(u) = one {
            if u.idx() >= size {
                return Err(Error::RingAxiom("identity out of range".into()));
            }
        }
        let labels = match labels {
            Some(l) if l.len() == size => l,
            Some(_) => return Err(Error::RingSpec("label count differs from ring order".into())),
            None => (0..size).map(|i| i.to_string()).collect(),
        };
        let mut neg = vec![Elem::ZERO; size];
        for a in 0..size {
            match (0..size).find(|&b| add[a * size + b] == Elem::ZERO) {
                Some(b) => neg[a] = Elem(b as u16),
                None => return Err(Error::RingAxiom(format!("element {a} has no additive inverse"))),
            }
        }
        let mut ring = FiniteRing {
            spec,
            size,
            add,
            mul,
            neg,
            one,
            characteristic: 0,
            commutative: false,
            labels,
            structure,
            factors: OnceLock::new(),
        };
        ring.validate()?;
        ring.commutative = (0..size).all(|a| (0..size).all(|b| ring.mul[a * size + b] == ring.mul[b * size + a]));
        ring.characteristic = match one {
            Some(u) => ring.additive_order(u),
            None => (0..size).map(|a| ring.additive_order(Elem(a as u16))).fold(1, lcm),
        };
        Ok(ring)
    }

    /// Exhaustive check of the ring axioms.
    pub fn validate(&self) -> Result<()> {
        let n = self.size;
        let (add, mul) = (&self.add, &self.mul);
        for a in 0..n {
            if add[a] != Elem(a as u16) || add[a * n] != Elem(a as u16) {
                return Err(Error::RingAxiom(format!("0 is not an additive identity for {a}")));
            }
            for b in 0..n {
                if add[a * n + b] != add[b * n + a] {
                    return Err(Error::RingAxiom(format!("addition not commutative at ({a},{b})")));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = add[a * n + b].idx();
                let mab = mul[a * n + b].idx();
                for c in 0..n {
                    if add[ab * n + c] != add[a * n + add[b * n + c].idx()] {
                        return Err(Error::RingAxiom(format!("addition not associative at ({a},{b},{c})")));
                    }
                    if mul[mab * n + c] != mul[a * n + mul[b * n + c].idx()] {
                        return Err(Error::RingAxiom(format!("multiplication not associative at ({a},{b},{c})")));
                    }
                    let bc = add[b * n + c].idx();
                    let left = mul[a * n + bc];
                    let left_expected = add[mul[a * n + b].idx() * n + mul[a * n + c].idx()];
                    if left != left_expected {
                        return Err(Error::RingAxiom(format!("left distributivity fails at ({a},{b},{c})")));
                    }
                    let right = mul[bc * n + a];
                    let right_expected = add[mul[b * n + a].idx() * n + mul[c * n + a].idx()];
                    if right != right_expected {
                        return Err(Error::RingAxiom(format!("right distributivity fails at ({a},{b},{c})")));
                    }
                }
            }
        }
        if let Some(u) = self.one {
            for a in 0..n {
                let e = Elem(a as u16);
                if self.mul(u, e) != e || self.mul(e, u) != e {
                    return Err(Error::RingAxiom(format!("{u} is not a two-sided identity (fails at {a})")));
                }
            }
        }
        Ok(())
    }

    fn additive_order(&self, a: Elem) -> u64 {
        let mut k = 1;
        let mut x = a;
        while x != Elem::ZERO {
            x = self.add(x, a);
            k += 1;
        }
        k
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a.idx() * self.size + b.idx()]
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a.idx() * self.size + b.idx()]
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a.idx()]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn one(&self) -> Option<Elem> {
        self.one
    }

    pub fn is_unital(&self) -> bool {
        self.one.is_some()
    }

    pub fn is_commutative(&self) -> bool {
        self.commutative
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn name(&self) -> String {
        self.spec.to_string()
    }

    pub fn label(&self, a: Elem) -> &str {
        &self.labels[a.idx()]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// The factors of a product ring; identifiers split as `a·|B| + b`.
    pub fn factors(&self) -> Option<&(Ring, Ring)> {
        self.factors
            .get_or_init(|| match &self.spec {
                RingSpec::Product(a, b) => Some((a.build().ok()?, b.build().ok()?)),
                _ => None,
            })
            .as_ref()
    }

    pub fn structure(&self) -> Structure {
        self.structure
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.size).map(|i| Elem(i as u16))
    }

    /// Returns `p` when the ring is the prime field `Z/p`.
    pub fn prime_field(&self) -> Option<u64> {
        match self.structure {
            Structure::Cyclic { n } if is_prime(n) => Some(n),
            _ => None,
        }
    }

    /// Returns `(p, k)` with `k >= 1` when the ring is `Z/p^k`.
    pub fn chain_ring(&self) -> Option<(u64, u32)> {
        match self.structure {
            Structure::Cyclic { n } => prime_power(n),
            _ => None,
        }
    }

    /// Multiplicative inverse, if `a` is a unit.
    pub fn inverse(&self, a: Elem) -> Option<Elem> {
        let u = self.one?;
        self.elements()
            .find(|&b| self.mul(a, b) == u && self.mul(b, a) == u)
    }

    pub fn is_unit(&self, a: Elem) -> bool {
        self.inverse(a).is_some()
    }

    pub fn units(&self) -> Vec<Elem> {
        self.elements().filter(|&a| self.is_unit(a)).collect()
    }

    /// A small generating set of the additive group, greedy in identifier order.
    pub fn additive_generators(&self) -> Vec<Elem> {
        let mut span = vec![false; self.size];
        span[0] = true;
        let mut gens = Vec::new();
        for a in self.elements() {
            if span[a.idx()] {
                continue;
            }
            gens.push(a);
            // Close span under adding a.
            let mut changed = true;
            while changed {
                changed = false;
                for x in 0..self.size {
                    if span[x] {
                        let y = self.add(Elem(x as u16), a).idx();
                        if !span[y] {
                            span[y] = true;
                            changed = true;
                        }
                    }
                }
            }
        }
        gens
    }

    /// `Z/p^k` valuation of an element of a chain ring; `k` for zero.
    pub fn valuation(&self, a: Elem) -> Option<u32> {
        let (p, k) = self.chain_ring()?;
        let mut v = 0;
        let mut x = a.0 as u64;
        if x == 0 {
            return Some(k);
        }
        while x % p == 0 {
            x /= p;
            v += 1;
        }
        Some(v)
    }

    pub fn elem(&self, id: u64) -> Result<Elem> {
        if (id as usize) < self.size {
            Ok(Elem(id as u16))
        } else {
            Err(Error::Parse(format!("element {id} out of range for {}", self.spec)))
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n % d == 0)?;
    let mut m = n;
    let mut k = 0;
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zmod_basics() {
        let r = FiniteRing::zmod(4).unwrap();
        assert_eq!(r.size(), 4);
        assert_eq!(r.one(), Some(Elem(1)));
        assert_eq!(r.characteristic(), 4);
        assert_eq!(r.mul(Elem(2), Elem(2)), Elem(0));
        assert_eq!(r.chain_ring(), Some((2, 2)));
        assert_eq!(r.prime_field(), None);
        let radical: Vec<_> = r.elements().filter(|&a| !r.is_unit(a)).collect();
        assert_eq!(radical, vec![Elem(0), Elem(2)]);
    }

    #[test]
    fn gf2_is_field() {
        let r = FiniteRing::zmod(2).unwrap();
        assert_eq!(r.one(), Some(Elem(1)));
        assert_eq!(r.prime_field(), Some(2));
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(FiniteRing::gf(4).is_err());
        assert!(FiniteRing::zmod(1).is_err());
    }

    #[test]
    fn matrix_ring_order_and_noncommutativity() {
        let r = FiniteRing::matrix_ring(&RingSpec::Gf(2), 2).unwrap();
        assert_eq!(r.size(), 16);
        assert!(r.is_unital());
        assert!(!r.is_commutative());
        assert_eq!(r.units().len(), 6);
        assert_eq!(r.characteristic(), 2);
    }

    #[test]
    fn product_and_upper() {
        let p = FiniteRing::product(&RingSpec::Gf(2), &RingSpec::Gf(3)).unwrap();
        assert_eq!(p.size(), 6);
        assert_eq!(p.characteristic(), 6);
        assert!(p.is_commutative());
        let u = FiniteRing::upper_triangular(&RingSpec::Gf(2), 2).unwrap();
        assert_eq!(u.size(), 8);
        assert!(!u.is_commutative());
    }

    #[test]
    fn additive_generators_span() {
        let r = FiniteRing::matrix_ring(&RingSpec::Gf(2), 2).unwrap();
        assert_eq!(r.additive_generators().len(), 4);
        let z = FiniteRing::zmod(6).unwrap();
        assert_eq!(z.additive_generators(), vec![Elem(1)]);
    }

    #[test]
    fn valuations() {
        let r = FiniteRing::zmod(8).unwrap();
        assert_eq!(r.valuation(Elem(0)), Some(3));
        assert_eq!(r.valuation(Elem(4)), Some(2));
        assert_eq!(r.valuation(Elem(6)), Some(1));
        assert_eq!(r.valuation(Elem(3)), Some(0));
    }
}
