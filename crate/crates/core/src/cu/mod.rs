//! Positively ordered monoids, their interval monoids `Λ_σ(M)`, the
//! way-below relation and the axioms (O1)–(O4).
//!
//! Symbolic monoids have points in `ℕ̄^r` and increasing sequences given
//! in closed form ([`ChainDesc`]), so suprema are computed exactly. Finite
//! monoids are given by tables.

mod axioms;
mod enumerate;
mod finite;
mod interval;
mod lambda;

pub use axioms::{check_cu_axioms, check_finite, AxiomResult, CuReport, Range};
pub use enumerate::{enumerate_monoids, structured_corpus};
pub use finite::{lambda_sigma, FiniteMonoid, LambdaSigma};
pub use interval::{
    interval_add, interval_includes, interval_member, lambda_nat_is_natbar, way_below, Interval, IsoReport, OrderedMonoid,
};
pub use lambda::{lambda_of_ring, LambdaModel, LambdaElem};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of `ℕ̄ = ℕ ∪ {∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Ext {
    Fin(u64),
    Inf,
}

impl Ext {
    pub fn is_finite(self) -> bool {
        matches!(self, Ext::Fin(_))
    }

    pub fn plus(self, other: Ext) -> Ext {
        match (self, other) {
            (Ext::Fin(a), Ext::Fin(b)) => Ext::Fin(a + b),
            _ => Ext::Inf,
        }
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::Fin(a) => write!(f, "{a}"),
            Ext::Inf => write!(f, "∞"),
        }
    }
}

pub type Point = Vec<Ext>;

pub fn show_point(p: &[Ext]) -> String {
    if p.len() == 1 {
        return p[0].to_string();
    }
    let parts: Vec<String> = p.iter().map(|e| e.to_string()).collect();
    format!("({})", parts.join(","))
}

pub fn fin(xs: &[u64]) -> Point {
    xs.iter().map(|&x| Ext::Fin(x)).collect()
}

/// One coordinate of a closed-form sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coord {
    /// `n ↦ offset + slope·n`.
    Affine { offset: u64, slope: u64 },
    Inf,
}

impl Coord {
    pub fn at(self, n: u64) -> Ext {
        match self {
            Coord::Affine { offset, slope } => Ext::Fin(offset + slope * n),
            Coord::Inf => Ext::Inf,
        }
    }

    pub fn limit(self) -> Ext {
        match self {
            Coord::Affine { offset, slope: 0 } => Ext::Fin(offset),
            _ => Ext::Inf,
        }
    }

    fn shifted(self, n0: u64) -> Coord {
        match self {
            Coord::Affine { offset, slope } => Coord::Affine {
                offset: offset + slope * n0,
                slope,
            },
            Coord::Inf => Coord::Inf,
        }
    }

    fn plus(self, other: Coord) -> Coord {
        match (self, other) {
            (Coord::Affine { offset: a, slope: s }, Coord::Affine { offset: b, slope: t }) => Coord::Affine {
                offset: a + b,
                slope: s + t,
            },
            _ => Coord::Inf,
        }
    }
}

/// Increasing sequence: finitely many `head` terms, then an affine tail.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChainDesc {
    pub head: Vec<Point>,
    pub tail: Vec<Coord>,
}

impl ChainDesc {
    pub fn affine(tail: Vec<Coord>) -> ChainDesc {
        ChainDesc { head: Vec::new(), tail }
    }

    pub fn constant(p: &[Ext]) -> ChainDesc {
        ChainDesc::affine(
            p.iter()
                .map(|&e| match e {
                    Ext::Fin(x) => Coord::Affine { offset: x, slope: 0 },
                    Ext::Inf => Coord::Inf,
                })
                .collect(),
        )
    }

    pub fn at(&self, n: u64) -> Point {
        let h = self.head.len() as u64;
        if n < h {
            self.head[n as usize].clone()
        } else {
            self.tail.iter().map(|c| c.at(n - h)).collect()
        }
    }

    /// Coordinatewise limit of the tail.
    pub fn limit(&self) -> Point {
        self.tail.iter().map(|c| c.limit()).collect()
    }

    pub fn is_eventually_constant(&self) -> bool {
        self.tail
            .iter()
            .all(|c| matches!(c, Coord::Affine { slope: 0, .. } | Coord::Inf))
    }

    /// Termwise sum.
    pub fn plus(&self, other: &ChainDesc, m: &Symbolic) -> ChainDesc {
        let h = self.head.len().max(other.head.len());
        let head = (0..h as u64).map(|n| m.add(&self.at(n), &other.at(n))).collect();
        let a = (h - self.head.len()) as u64;
        let b = (h - other.head.len()) as u64;
        let tail = self
            .tail
            .iter()
            .zip(&other.tail)
            .map(|(x, y)| x.shifted(a).plus(y.shifted(b)))
            .collect();
        ChainDesc { head, tail }
    }

    pub fn describe(&self) -> String {
        let head: Vec<String> = self.head.iter().map(|p| show_point(p)).collect();
        let tail: Vec<String> = self
            .tail
            .iter()
            .map(|c| match c {
                Coord::Affine { offset, slope: 0 } => offset.to_string(),
                Coord::Affine { offset, slope } => format!("{offset}+{slope}n"),
                Coord::Inf => "∞".into(),
            })
            .collect();
        let tail = if tail.len() == 1 {
            tail[0].clone()
        } else {
            format!("({})", tail.join(","))
        };
        if head.is_empty() {
            tail
        } else {
            format!("{}, then {}", head.join(", "), tail)
        }
    }
}

/// Built-in symbolic positively ordered monoids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Symbolic {
    /// `ℕ`.
    Nat,
    /// `ℕ̄`.
    NatBar,
    /// `ℕ̄^r`, componentwise.
    NatBarPow(usize),
    /// `{0, ∞}`.
    ZeroInf,
    /// `ℕ×ℕ` with `(r',s') ≤ (r,s)` iff `r'+s' ≤ r+s` and `r' ≤ r`.
    Nsd,
    /// `Λ_σ` of an `∞`-free base. A point is the coordinatewise limit of a
    /// cofinal sequence; finite points are principal intervals.
    Lambda(Box<Symbolic>),
}

impl fmt::Display for Symbolic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbolic::Nat => write!(f, "N"),
            Symbolic::NatBar => write!(f, "Nbar"),
            Symbolic::NatBarPow(r) => write!(f, "Nbar^{r}"),
            Symbolic::ZeroInf => write!(f, "{{0,inf}}"),
            Symbolic::Nsd => write!(f, "NxN(nsd)"),
            Symbolic::Lambda(b) => write!(f, "Lambda({b})"),
        }
    }
}

impl Symbolic {
    /// Parses `N`, `Nbar`, `Nbar^r`, `0inf`, `nsd`, `lambda(N)`, `lambda(nsd)`.
    pub fn parse(text: &str) -> Result<Symbolic> {
        let t = text.trim().to_ascii_lowercase();
        if let Some(inner) = t.strip_prefix("lambda(").and_then(|s| s.strip_suffix(')')) {
            let base = Symbolic::parse(inner)?;
            return Symbolic::lambda(base);
        }
        if let Some(r) = t.strip_prefix("nbar^") {
            let r: usize = r.parse().map_err(|_| Error::Parse(format!("bad power in {text}")))?;
            if r == 0 {
                return Err(Error::Parse("power must be positive".into()));
            }
            return Ok(Symbolic::NatBarPow(r));
        }
        match t.as_str() {
            "n" | "nat" => Ok(Symbolic::Nat),
            "nbar" | "natbar" => Ok(Symbolic::NatBar),
            "0inf" | "zeroinf" | "{0,inf}" => Ok(Symbolic::ZeroInf),
            "nsd" | "nxn" => Ok(Symbolic::Nsd),
            _ => Err(Error::Parse(format!("unknown symbolic monoid {text}"))),
        }
    }

    pub fn lambda(base: Symbolic) -> Result<Symbolic> {
        match base {
            Symbolic::Nat | Symbolic::Nsd => Ok(Symbolic::Lambda(Box::new(base))),
            other => Err(Error::Unsupported(format!(
                "interval monoid of {other}: chain forms need an ∞-free base"
            ))),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Symbolic::Nat | Symbolic::NatBar | Symbolic::ZeroInf => 1,
            Symbolic::NatBarPow(r) => *r,
            Symbolic::Nsd => 2,
            Symbolic::Lambda(b) => b.dim(),
        }
    }

    pub fn allows_inf(&self) -> bool {
        !matches!(self, Symbolic::Nat | Symbolic::Nsd)
    }

    pub fn zero(&self) -> Point {
        vec![Ext::Fin(0); self.dim()]
    }

    fn nsd_order(&self) -> bool {
        match self {
            Symbolic::Nsd => true,
            Symbolic::Lambda(b) => b.nsd_order(),
            _ => false,
        }
    }

    pub fn contains(&self, p: &[Ext]) -> bool {
        if p.len() != self.dim() {
            return false;
        }
        match self {
            Symbolic::Nat | Symbolic::Nsd => p.iter().all(|e| e.is_finite()),
            Symbolic::ZeroInf => matches!(p[0], Ext::Fin(0) | Ext::Inf),
            Symbolic::Lambda(_) => self.normalize(p) == p,
            _ => true,
        }
    }

    /// Canonical limit point: in the NSD order an unbounded first
    /// coordinate swallows everything.
    pub fn normalize(&self, p: &[Ext]) -> Point {
        if self.nsd_order() && p[0] == Ext::Inf {
            return vec![Ext::Inf, Ext::Inf];
        }
        p.to_vec()
    }

    pub fn leq(&self, a: &[Ext], b: &[Ext]) -> bool {
        if self.nsd_order() {
            return a[0].plus(a[1]) <= b[0].plus(b[1]) && a[0] <= b[0];
        }
        a.iter().zip(b).all(|(x, y)| x <= y)
    }

    pub fn add(&self, a: &[Ext], b: &[Ext]) -> Point {
        let s: Point = a.iter().zip(b).map(|(x, y)| x.plus(*y)).collect();
        self.normalize(&s)
    }

    /// Decision procedure for `≪`.
    pub fn way_below(&self, a: &[Ext], b: &[Ext]) -> bool {
        match self {
            // Bounded increasing sequences are eventually constant.
            Symbolic::Nat | Symbolic::Nsd | Symbolic::ZeroInf => self.leq(a, b),
            Symbolic::NatBar | Symbolic::NatBarPow(_) | Symbolic::Lambda(_) => {
                a.iter().all(|e| e.is_finite()) && self.leq(a, b)
            }
        }
    }

    /// Checks that `c` is an increasing sequence of elements.
    pub fn validate_chain(&self, c: &ChainDesc) -> Result<()> {
        if c.tail.len() != self.dim() || c.head.iter().any(|p| p.len() != self.dim()) {
            return Err(Error::Shape(format!("chain of the wrong dimension for {self}")));
        }
        let n = c.head.len() as u64 + 2;
        for k in 0..=n {
            let p = c.at(k);
            if !self.contains(&p) {
                return Err(Error::Precondition(format!("term {k} = {} is not in {self}", show_point(&p))));
            }
            if k > 0 && !self.leq(&c.at(k - 1), &p) {
                return Err(Error::Precondition(format!("chain decreases at term {k}")));
            }
        }
        Ok(())
    }

    /// Supremum of an increasing sequence, `None` when it has none.
    pub fn sup(&self, c: &ChainDesc) -> Option<Point> {
        let lim = c.limit();
        match self {
            Symbolic::Nat | Symbolic::Nsd => {
                // Strictly increasing runs are unbounded in r+s, hence in ℕ.
                lim.iter().all(|e| e.is_finite()).then_some(lim)
            }
            _ => {
                let lim = self.normalize(&lim);
                self.contains(&lim).then_some(lim)
            }
        }
    }

    /// A rapidly increasing sequence with supremum `p`.
    pub fn rapid(&self, p: &[Ext]) -> ChainDesc {
        match self {
            Symbolic::ZeroInf => ChainDesc::constant(p),
            _ => ChainDesc::affine(
                p.iter()
                    .map(|&e| match e {
                        Ext::Fin(x) => Coord::Affine { offset: x, slope: 0 },
                        Ext::Inf => Coord::Affine { offset: 0, slope: 1 },
                    })
                    .collect(),
            ),
        }
    }

    /// Elements with finite coordinates at most `bound`, plus `∞` where allowed.
    pub fn elements(&self, bound: u64) -> Vec<Point> {
        let values: Vec<Ext> = match self {
            Symbolic::ZeroInf => vec![Ext::Fin(0), Ext::Inf],
            _ => {
                let mut v: Vec<Ext> = (0..=bound).map(Ext::Fin).collect();
                if self.allows_inf() {
                    v.push(Ext::Inf);
                }
                v
            }
        };
        let mut out = vec![Vec::new()];
        for _ in 0..self.dim() {
            out = out
                .into_iter()
                .flat_map(|p: Point| {
                    values.iter().map(move |&v| {
                        let mut q = p.clone();
                        q.push(v);
                        q
                    })
                })
                .collect();
        }
        out.retain(|p| self.contains(p));
        out
    }

    /// The elements of [`Symbolic::elements`] as a finite table. Sums that
    /// leave the range are left undefined. For the ℕ×ℕ order the range is
    /// `r+s <= bound`, which is a down-set.
    pub fn truncation(&self, bound: u64) -> FiniteMonoid {
        let mut elems = self.elements(bound);
        if matches!(self, Symbolic::Nsd) {
            elems.retain(|p| p[0].plus(p[1]) <= Ext::Fin(bound));
        }
        let index = |p: &Point| elems.iter().position(|q| q == p);
        let add = elems
            .iter()
            .map(|a| elems.iter().map(|b| index(&self.add(a, b))).collect())
            .collect();
        let leq = elems
            .iter()
            .map(|a| elems.iter().map(|b| self.leq(a, b)).collect())
            .collect();
        FiniteMonoid {
            name: format!("{self} up to {bound}"),
            labels: elems.iter().map(|p| show_point(p)).collect(),
            add,
            leq,
            zero: index(&self.zero()).expect("zero is in range"),
            way_below: None,
        }
    }

    /// Increasing sequences with offsets at most `bound`, slopes at most
    /// `slope`, and at most one head term from the element range.
    pub fn chains(&self, bound: u64, slope: u64) -> Vec<ChainDesc> {
        let mut coords: Vec<Coord> = Vec::new();
        if !matches!(self, Symbolic::ZeroInf) {
            for offset in 0..=bound {
                for s in 0..=slope {
                    coords.push(Coord::Affine { offset, slope: s });
                }
            }
        } else {
            coords.push(Coord::Affine { offset: 0, slope: 0 });
        }
        if self.allows_inf() {
            coords.push(Coord::Inf);
        }
        let mut tails: Vec<Vec<Coord>> = vec![Vec::new()];
        for _ in 0..self.dim() {
            tails = tails
                .into_iter()
                .flat_map(|t| {
                    coords.iter().map(move |&c| {
                        let mut u = t.clone();
                        u.push(c);
                        u
                    })
                })
                .collect();
        }
        let mut heads: Vec<Vec<Point>> = vec![Vec::new()];
        heads.extend(self.elements(bound).into_iter().map(|p| vec![p]));
        let mut out = Vec::new();
        for t in &tails {
            for h in &heads {
                let c = ChainDesc {
                    head: h.clone(),
                    tail: t.clone(),
                };
                if self.validate_chain(&c).is_ok() {
                    out.push(c);
                }
            }
        }
        out
    }
}

/// The symbolic model of `SCu` of an ideal: an ambient monoid and a
/// distinguished submonoid given by its elements.
#[derive(Clone, Debug, Serialize)]
pub struct ScuPair {
    pub ambient: Symbolic,
    pub sub: Vec<Point>,
}

/// `(ℕ̄, {0})`, the model for the radical of a nearly simple domain.
pub fn scu_radical_of_nearly_simple() -> ScuPair {
    ScuPair {
        ambient: Symbolic::NatBar,
        sub: vec![vec![Ext::Fin(0)]],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nsd_order_examples() {
        let m = Symbolic::Nsd;
        assert!(m.leq(&fin(&[0, 1]), &fin(&[1, 0])));
        assert!(!m.leq(&fin(&[1, 0]), &fin(&[0, 1])));
        assert_eq!(m.add(&fin(&[1, 0]), &fin(&[0, 1])), fin(&[1, 1]));
    }

    #[test]
    fn sups() {
        let up = ChainDesc::affine(vec![Coord::Affine { offset: 0, slope: 1 }]);
        assert_eq!(Symbolic::Nat.sup(&up), None);
        assert_eq!(Symbolic::NatBar.sup(&up), Some(vec![Ext::Inf]));
        let l = Symbolic::lambda(Symbolic::Nsd).unwrap();
        let c = ChainDesc::affine(vec![Coord::Affine { offset: 0, slope: 1 }, Coord::Affine { offset: 3, slope: 0 }]);
        assert_eq!(l.sup(&c), Some(vec![Ext::Inf, Ext::Inf]));
        assert!(Symbolic::lambda(Symbolic::NatBar).is_err());
    }

    #[test]
    fn chain_sum_aligns_heads() {
        let m = Symbolic::NatBar;
        let a = ChainDesc {
            head: vec![fin(&[0])],
            tail: vec![Coord::Affine { offset: 2, slope: 1 }],
        };
        let b = ChainDesc::affine(vec![Coord::Affine { offset: 1, slope: 0 }]);
        let s = a.plus(&b, &m);
        for n in 0..5 {
            assert_eq!(s.at(n), m.add(&a.at(n), &b.at(n)));
        }
    }

    #[test]
    fn parse_names() {
        assert_eq!(Symbolic::parse("Nbar^2").unwrap(), Symbolic::NatBarPow(2));
        assert_eq!(
            Symbolic::parse("lambda(N)").unwrap(),
            Symbolic::Lambda(Box::new(Symbolic::Nat))
        );
        assert!(Symbolic::parse("Z").is_err());
    }
}
