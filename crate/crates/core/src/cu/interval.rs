use serde::{Deserialize, Serialize};

use super::{show_point, ChainDesc, Coord, Ext, FiniteMonoid, Point, Symbolic};
use crate::error::{Error, Result};

/// A countably generated interval, in one of three closed forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interval {
    /// `[0, x]` in a symbolic monoid.
    Principal(Point),
    /// Union of `[0, x_n]` along an increasing sequence.
    Chain(ChainDesc),
    /// Down-closure of a finite set in a finite monoid.
    Generators(Vec<usize>),
}

impl Interval {
    pub fn describe(&self, labels: Option<&[String]>) -> String {
        match self {
            Interval::Principal(p) => format!("[0,{}]", show_point(p)),
            Interval::Chain(c) => format!("sup [0,x_n], x_n = {}", c.describe()),
            Interval::Generators(g) => {
                let names: Vec<String> = g
                    .iter()
                    .map(|&i| labels.map(|l| l[i].clone()).unwrap_or_else(|| i.to_string()))
                    .collect();
                format!("down{{{}}}", names.join(","))
            }
        }
    }
}

/// Eventual behaviour of one coordinate along a sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Ev {
    Fin(u64),
    /// Unbounded but finite at every stage.
    Grow,
    Inf,
}

impl Ev {
    fn from_ext(e: Ext) -> Ev {
        match e {
            Ext::Fin(x) => Ev::Fin(x),
            Ext::Inf => Ev::Inf,
        }
    }

    fn plus(self, o: Ev) -> Ev {
        match (self, o) {
            (Ev::Fin(a), Ev::Fin(b)) => Ev::Fin(a + b),
            (Ev::Inf, _) | (_, Ev::Inf) => Ev::Inf,
            _ => Ev::Grow,
        }
    }

    /// Every stage on the left is dominated by some stage on the right.
    fn below(self, o: Ev) -> bool {
        match (self, o) {
            (Ev::Fin(a), Ev::Fin(b)) => a <= b,
            (_, Ev::Inf) => true,
            (Ev::Fin(_), Ev::Grow) | (Ev::Grow, Ev::Grow) => true,
            _ => false,
        }
    }
}

fn eventual(m: &Symbolic, i: &Interval) -> Result<Vec<Ev>> {
    match i {
        Interval::Principal(p) => {
            if !m.contains(p) {
                return Err(Error::Precondition(format!("{} is not in {m}", show_point(p))));
            }
            Ok(p.iter().map(|&e| Ev::from_ext(e)).collect())
        }
        Interval::Chain(c) => {
            m.validate_chain(c)?;
            Ok(c.tail
                .iter()
                .map(|&k| match k {
                    Coord::Affine { offset, slope: 0 } => Ev::Fin(offset),
                    Coord::Affine { .. } => Ev::Grow,
                    Coord::Inf => Ev::Inf,
                })
                .collect())
        }
        Interval::Generators(_) => Err(Error::Unsupported(format!("generator sets over the symbolic monoid {m}"))),
    }
}

fn ev_leq(m: &Symbolic, a: &[Ev], b: &[Ev]) -> bool {
    if matches!(m, Symbolic::Nsd) {
        return a[0].plus(a[1]).below(b[0].plus(b[1])) && a[0].below(b[0]);
    }
    a.iter().zip(b).all(|(x, y)| x.below(*y))
}

/// An ordered monoid: a finite table or a symbolic built-in.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderedMonoid {
    Finite(FiniteMonoid),
    Symbolic(Symbolic),
}

fn finite_members(m: &FiniteMonoid, i: &Interval) -> Result<u64> {
    match i {
        Interval::Generators(g) => {
            if g.is_empty() || g.iter().any(|&x| x >= m.len()) {
                return Err(Error::Precondition("generators must be nonempty elements".into()));
            }
            let mask = m.down_closure(g);
            if !m.is_interval(mask) {
                return Err(Error::Precondition(format!(
                    "{} is not upward directed",
                    i.describe(Some(&m.labels))
                )));
            }
            Ok(mask)
        }
        _ => Err(Error::Unsupported("principal and chain forms need a symbolic monoid".into())),
    }
}

fn maximal(m: &FiniteMonoid, mask: u64) -> Vec<usize> {
    let members: Vec<usize> = (0..m.len()).filter(|&i| mask >> i & 1 == 1).collect();
    members
        .iter()
        .copied()
        .filter(|&x| !members.iter().any(|&y| y != x && m.leq(x, y)))
        .collect()
}

pub fn interval_member(m: &OrderedMonoid, i: &Interval, z: &Point) -> Result<bool> {
    match m {
        OrderedMonoid::Symbolic(s) => {
            let e = eventual(s, i)?;
            let p = eventual(s, &Interval::Principal(z.clone()))?;
            Ok(ev_leq(s, &p, &e))
        }
        OrderedMonoid::Finite(f) => {
            let mask = finite_members(f, i)?;
            match z.as_slice() {
                [Ext::Fin(x)] if (*x as usize) < f.len() => Ok(mask >> x & 1 == 1),
                _ => Err(Error::Precondition("finite elements are single indices".into())),
            }
        }
    }
}

/// `I ⊆ J`.
pub fn interval_includes(m: &OrderedMonoid, i: &Interval, j: &Interval) -> Result<bool> {
    match m {
        OrderedMonoid::Symbolic(s) => Ok(ev_leq(s, &eventual(s, i)?, &eventual(s, j)?)),
        OrderedMonoid::Finite(f) => Ok(finite_members(f, i)? & !finite_members(f, j)? == 0),
    }
}

pub fn interval_add(m: &OrderedMonoid, i: &Interval, j: &Interval) -> Result<Interval> {
    match m {
        OrderedMonoid::Symbolic(s) => {
            eventual(s, i)?;
            eventual(s, j)?;
            match (i, j) {
                (Interval::Principal(x), Interval::Principal(y)) => Ok(Interval::Principal(s.add(x, y))),
                _ => {
                    let as_chain = |t: &Interval| match t {
                        Interval::Principal(p) => ChainDesc::constant(p),
                        Interval::Chain(c) => c.clone(),
                        Interval::Generators(_) => unreachable!(),
                    };
                    Ok(Interval::Chain(as_chain(i).plus(&as_chain(j), s)))
                }
            }
        }
        OrderedMonoid::Finite(f) => {
            let (a, b) = (finite_members(f, i)?, finite_members(f, j)?);
            let mut sums = Vec::new();
            for x in (0..f.len()).filter(|&x| a >> x & 1 == 1) {
                for y in (0..f.len()).filter(|&y| b >> y & 1 == 1) {
                    sums.push(f.sum(x, y).ok_or_else(|| {
                        Error::Unsupported(format!("{} + {} is outside the table", f.labels[x], f.labels[y]))
                    })?);
                }
            }
            Ok(Interval::Generators(maximal(f, f.down_closure(&sums))))
        }
    }
}

/// `I ≪ J` iff `I ⊆ [0, y]` for some `y ∈ J`.
pub fn way_below(m: &OrderedMonoid, i: &Interval, j: &Interval) -> Result<bool> {
    match m {
        OrderedMonoid::Symbolic(s) => {
            let e = eventual(s, i)?;
            if e.contains(&Ev::Grow) {
                return Ok(false);
            }
            // The largest element of a bounded interval is its eventual value.
            let top: Point = e
                .iter()
                .map(|v| match v {
                    Ev::Fin(x) => Ext::Fin(*x),
                    _ => Ext::Inf,
                })
                .collect();
            interval_member(m, j, &top)
        }
        OrderedMonoid::Finite(f) => {
            let a = finite_members(f, i)?;
            let b = finite_members(f, j)?;
            Ok((0..f.len())
                .filter(|&y| b >> y & 1 == 1)
                .any(|y| a & !f.down_closure(&[y]) == 0))
        }
    }
}

/// Evidence that `Λ_σ(ℕ)` is order-isomorphic to `ℕ̄`.
#[derive(Clone, Debug, Serialize)]
pub struct IsoReport {
    pub range: String,
    /// Distinct intervals found among the enumerated forms.
    pub classes: usize,
    pub bijective: bool,
    pub order: bool,
    pub addition: bool,
    pub way_below: bool,
}

impl IsoReport {
    pub fn holds(&self) -> bool {
        self.bijective && self.order && self.addition && self.way_below
    }
}

/// Enumerates principal and chain intervals of `ℕ` in a range, merges them
/// by mutual inclusion, and compares with `ℕ̄` via "largest element or ∞".
pub fn lambda_nat_is_natbar(bound: u64) -> Result<IsoReport> {
    let nat = OrderedMonoid::Symbolic(Symbolic::Nat);
    let mut forms: Vec<Interval> = (0..=bound).map(|x| Interval::Principal(vec![Ext::Fin(x)])).collect();
    forms.extend(Symbolic::Nat.chains(bound, 2).into_iter().map(Interval::Chain));
    let mut reps: Vec<Interval> = Vec::new();
    for f in forms {
        let mut seen = false;
        for r in &reps {
            if interval_includes(&nat, &f, r)? && interval_includes(&nat, r, &f)? {
                seen = true;
                break;
            }
        }
        if !seen {
            reps.push(f);
        }
    }
    let image = |i: &Interval| -> Result<Ext> {
        // Largest member, if any member bounds the interval.
        for x in 0..=bound * 4 + 4 {
            if interval_includes(&nat, i, &Interval::Principal(vec![Ext::Fin(x)]))? {
                return Ok(Ext::Fin(x));
            }
        }
        Ok(Ext::Inf)
    };
    let imgs: Vec<Ext> = reps.iter().map(image).collect::<Result<_>>()?;
    let mut sorted = imgs.clone();
    sorted.sort();
    sorted.dedup();
    let expected: Vec<Ext> = (0..=bound).map(Ext::Fin).chain([Ext::Inf]).collect();
    let bijective = sorted.len() == imgs.len() && sorted == expected;
    let nb = Symbolic::NatBar;
    let (mut order, mut addition, mut wb) = (true, true, true);
    for (a, ia) in reps.iter().zip(&imgs) {
        for (b, ib) in reps.iter().zip(&imgs) {
            order &= interval_includes(&nat, a, b)? == nb.leq(&[*ia], &[*ib]);
            wb &= way_below(&nat, a, b)? == nb.way_below(&[*ia], &[*ib]);
            let s = interval_add(&nat, a, b)?;
            addition &= image(&s)? == ia.plus(*ib);
        }
    }
    Ok(IsoReport {
        range: format!("principal [0,x] for x <= {bound}; chains with offset <= {bound}, slope <= 2, one head term"),
        classes: reps.len(),
        bijective,
        order,
        addition,
        way_below: wb,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cu::fin;
    use proptest::prelude::*;

    fn nat() -> OrderedMonoid {
        OrderedMonoid::Symbolic(Symbolic::Nat)
    }

    fn full() -> Interval {
        Interval::Chain(ChainDesc::affine(vec![Coord::Affine { offset: 0, slope: 1 }]))
    }

    #[test]
    fn examples() {
        let p = |x| Interval::Principal(fin(&[x]));
        assert_eq!(interval_add(&nat(), &p(2), &p(3)).unwrap(), p(5));
        let s = interval_add(&nat(), &full(), &p(1)).unwrap();
        assert!(interval_includes(&nat(), &s, &full()).unwrap() && interval_includes(&nat(), &full(), &s).unwrap());
        let nsd = OrderedMonoid::Symbolic(Symbolic::Nsd);
        let a = Interval::Principal(fin(&[1, 0]));
        let b = Interval::Principal(fin(&[0, 1]));
        assert_eq!(interval_add(&nsd, &a, &b).unwrap(), Interval::Principal(fin(&[1, 1])));
        assert!(way_below(&nat(), &p(2), &full()).unwrap());
        assert!(!way_below(&nat(), &full(), &full()).unwrap());
        assert!(way_below(&nat(), &p(4), &p(4)).unwrap());
    }

    #[test]
    fn lambda_of_nat() {
        let r = lambda_nat_is_natbar(3).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.classes, 5);
    }

    #[test]
    fn finite_forms() {
        let add: Vec<Vec<usize>> = (0..3).map(|x| (0..3).map(|y| (x + y).min(2)).collect()).collect();
        let m = OrderedMonoid::Finite(FiniteMonoid::with_algebraic_order("trunc", add, 0).unwrap());
        let one = Interval::Generators(vec![1]);
        assert_eq!(interval_add(&m, &one, &one).unwrap(), Interval::Generators(vec![2]));
        assert!(way_below(&m, &one, &one).unwrap());
        assert!(interval_member(&m, &one, &fin(&[0])).unwrap());
    }

    fn coord() -> impl proptest::strategy::Strategy<Value = Coord> {
        (0u64..4, 0u64..2).prop_map(|(offset, slope)| Coord::Affine { offset, slope })
    }

    fn nsd_interval() -> impl proptest::strategy::Strategy<Value = Interval> {
        prop_oneof![
            (0u64..4, 0u64..4).prop_map(|(a, b)| Interval::Principal(fin(&[a, b]))),
            (coord(), coord()).prop_map(|(a, b)| Interval::Chain(ChainDesc::affine(vec![a, b]))),
        ]
    }

    fn limit(i: &Interval) -> Point {
        let l = Symbolic::lambda(Symbolic::Nsd).unwrap();
        match i {
            Interval::Principal(p) => p.clone(),
            Interval::Chain(c) => l.normalize(&c.limit()),
            _ => unreachable!(),
        }
    }

    proptest! {
        #[test]
        fn add_laws_nsd(a in nsd_interval(), b in nsd_interval(), c in nsd_interval()) {
            let m = OrderedMonoid::Symbolic(Symbolic::Nsd);
            let eq = |x: &Interval, y: &Interval| {
                interval_includes(&m, x, y).unwrap() && interval_includes(&m, y, x).unwrap()
            };
            let ab = interval_add(&m, &a, &b).unwrap();
            prop_assert!(eq(&ab, &interval_add(&m, &b, &a).unwrap()));
            let l = interval_add(&m, &ab, &c).unwrap();
            let r = interval_add(&m, &a, &interval_add(&m, &b, &c).unwrap()).unwrap();
            prop_assert!(eq(&l, &r));
            if interval_includes(&m, &a, &b).unwrap() {
                let ac = interval_add(&m, &a, &c).unwrap();
                let bc = interval_add(&m, &b, &c).unwrap();
                prop_assert!(interval_includes(&m, &ac, &bc).unwrap());
            }
        }

        #[test]
        fn nsd_intervals_match_lambda_points(a in nsd_interval(), b in nsd_interval()) {
            let m = OrderedMonoid::Symbolic(Symbolic::Nsd);
            let l = Symbolic::lambda(Symbolic::Nsd).unwrap();
            prop_assert_eq!(interval_includes(&m, &a, &b).unwrap(), l.leq(&limit(&a), &limit(&b)));
            prop_assert_eq!(way_below(&m, &a, &b).unwrap(), l.way_below(&limit(&a), &limit(&b)));
            let s = interval_add(&m, &a, &b).unwrap();
            prop_assert_eq!(limit(&s), l.add(&limit(&a), &limit(&b)));
        }
    }
}
