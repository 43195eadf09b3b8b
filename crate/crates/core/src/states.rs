//! Normalized states on finite fragments of ordered monoids: dimension
//! functions, Sylvester rank functions, and their extension to intervals.
//!
//! Everything is exact over `ℚ`. Equalities are eliminated first, giving
//! `x = x0 + N·t`; vertices are then found by solving every square subsystem
//! of the remaining inequalities in `t`.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeTuple;
use serde::{Serialize, Serializer};

use crate::cu::{Coord, Ext, FiniteMonoid, Interval, LambdaElem, LambdaModel, OrderedMonoid, Symbolic};
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::wr::TruncatedPoM;

pub type Q = BigRational;

/// Exact rational, serialized as `[numerator, denominator]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rat(pub Q);

impl Rat {
    pub fn int(n: i64) -> Rat {
        Rat(Q::from_integer(BigInt::from(n)))
    }

    pub fn new(num: i64, den: i64) -> Rat {
        Rat(Q::new(BigInt::from(num), BigInt::from(den)))
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn ser_int<S: SerializeTuple>(t: &mut S, n: &BigInt) -> std::result::Result<(), S::Error> {
    match n.to_i64() {
        Some(v) => t.serialize_element(&v),
        None => t.serialize_element(&n.to_string()),
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(2)?;
        ser_int(&mut t, self.0.numer())?;
        ser_int(&mut t, self.0.denom())?;
        t.end()
    }
}

fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintKind {
    /// `coeffs·x = rhs`.
    Eq,
    /// `coeffs·x ≥ rhs`.
    Ge,
}

#[derive(Clone, Debug, Serialize)]
pub struct Constraint {
    pub kind: ConstraintKind,
    pub coeffs: Vec<Rat>,
    pub rhs: Rat,
    pub origin: String,
}

impl Constraint {
    fn new(kind: ConstraintKind, n: usize, terms: &[(usize, i64)], rhs: i64, origin: String) -> Constraint {
        let mut coeffs = vec![q(0); n];
        for &(i, c) in terms {
            coeffs[i] += q(c);
        }
        Constraint {
            kind,
            coeffs: coeffs.into_iter().map(Rat).collect(),
            rhs: Rat(q(rhs)),
            origin,
        }
    }

    pub fn holds(&self, x: &[Q]) -> bool {
        let lhs: Q = self.coeffs.iter().zip(x).map(|(c, v)| &c.0 * v).sum();
        match self.kind {
            ConstraintKind::Eq => lhs == self.rhs.0,
            ConstraintKind::Ge => lhs >= self.rhs.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Feasibility {
    Empty,
    Nonempty,
    /// Vertex enumeration was skipped.
    Unknown,
}

/// Sampling of block-triangular triples for the Sylvester inequalities.
#[derive(Clone, Copy, Debug)]
pub struct Sampling {
    /// Enumerate every triple when there are at most this many.
    pub exhaustive_limit: u64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling {
            exhaustive_limit: 1 << 16,
            samples: 4096,
            seed: 0,
        }
    }
}

pub enum Variant<'a> {
    Dimension,
    /// Adds `d(a)+d(b) ≤ d([[a,c],[0,b]])`; the monoid must be `W` of `w`.
    Sylvester { w: &'a TruncatedPoM, sampling: Sampling },
}

/// Limits for vertex enumeration.
#[derive(Clone, Copy, Debug)]
pub struct VertexLimits {
    pub max_free_dim: usize,
    pub max_subsystems: u64,
}

impl Default for VertexLimits {
    fn default() -> Self {
        VertexLimits {
            max_free_dim: 12,
            max_subsystems: 2_000_000,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StatePolytope {
    pub monoid: String,
    pub labels: Vec<String>,
    pub unit: usize,
    pub variant: &'static str,
    /// What the constraints were read from.
    pub fragment: String,
    pub equalities: Vec<Constraint>,
    pub inequalities: Vec<Constraint>,
    /// Dimension of the affine hull of the equalities; `None` when they
    /// are inconsistent.
    pub free_dim: Option<usize>,
    pub vertices: Option<Vec<Vec<Rat>>>,
    pub feasibility: Feasibility,
    pub sylvester_triples: usize,
    pub sampled: bool,
    pub note: Option<String>,
}

impl StatePolytope {
    pub fn is_empty(&self) -> bool {
        self.feasibility == Feasibility::Empty
    }

    /// `x` satisfies every constraint exactly.
    pub fn contains(&self, x: &[Q]) -> bool {
        x.len() == self.labels.len() && self.equalities.iter().chain(&self.inequalities).all(|c| c.holds(x))
    }

    pub fn vertex_values(&self) -> Vec<Vec<Q>> {
        self.vertices
            .iter()
            .flatten()
            .map(|v| v.iter().map(|r| r.0.clone()).collect())
            .collect()
    }
}

fn check_order_unit(m: &FiniteMonoid, u: usize) -> Result<()> {
    if u >= m.len() {
        return Err(Error::Precondition(format!("unit index {u} out of range")));
    }
    let mut multiples = vec![u];
    let mut cur = u;
    while let Some(next) = m.sum(cur, u) {
        if multiples.contains(&next) {
            break;
        }
        multiples.push(next);
        cur = next;
    }
    match (0..m.len()).find(|&x| x != m.zero && !multiples.iter().any(|&k| m.leq(x, k))) {
        Some(x) => Err(Error::Precondition(format!(
            "{} is not an order unit on the fragment: {} is below no multiple in the table",
            m.labels[u], m.labels[x]
        ))),
        None => Ok(()),
    }
}

fn covers(m: &FiniteMonoid) -> Vec<(usize, usize)> {
    crate::wr::covers(&m.leq)
}

/// Triples of classes `(a, b, t)` with `t` the class of a block-triangular
/// matrix with diagonal blocks in `a` and `b`.
fn sylvester_triples(w: &TruncatedPoM, s: &Sampling) -> (Vec<(usize, usize, usize)>, bool) {
    let ring = w.ring_handle();
    let k = w.k_max;
    let mut shapes = Vec::new();
    for p in 1..k {
        for r in 1..=k - p {
            for q in 1..k {
                for t in 1..=k - q {
                    shapes.push((p, q, r, t));
                }
            }
        }
    }
    let count = |&(p, q, r, t): &(usize, usize, usize, usize)| Mat::count(ring, 1, p * q + r * t + p * t);
    let total: Option<u64> = shapes.iter().try_fold(0u64, |acc, sh| count(sh).and_then(|c| acc.checked_add(c)));
    let exhaustive = total.is_some_and(|t| t <= s.exhaustive_limit);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut record = |a: Mat, b: Mat, c: Mat| {
        let z = Mat::zeros(ring, b.rows(), a.cols());
        let tri = Mat::block2(&a, &c, &z, &b).expect("block shapes agree");
        if let (Some(x), Some(y), Some(t)) = (w.class_of(&a), w.class_of(&b), w.class_of(&tri)) {
            if w.add(x, y) != Some(t) && seen.insert((x.min(y), x.max(y), t)) {
                out.push((x, y, t));
            }
        }
    };
    if exhaustive {
        for &(p, q, r, t) in &shapes {
            for ca in 0..Mat::count(ring, p, q).unwrap() {
                for cb in 0..Mat::count(ring, r, t).unwrap() {
                    for cc in 0..Mat::count(ring, p, t).unwrap() {
                        record(
                            Mat::decode(ring, p, q, ca),
                            Mat::decode(ring, r, t, cb),
                            Mat::decode(ring, p, t, cc),
                        );
                    }
                }
            }
        }
    } else if !shapes.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
        let n = ring.size() as u64;
        let random = |rng: &mut ChaCha8Rng, rows: usize, cols: usize| {
            let mut m = Mat::zeros(ring, rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    m.set(i, j, crate::ring::Elem(rng.gen_range(0..n) as u16));
                }
            }
            m
        };
        for _ in 0..s.samples {
            let (p, q, r, t) = shapes[rng.gen_range(0..shapes.len())];
            let a = random(&mut rng, p, q);
            let b = random(&mut rng, r, t);
            let c = random(&mut rng, p, t);
            record(a, b, c);
        }
    }
    (out, !exhaustive)
}

/// Reduced row echelon form of `[A | b]`. Returns the pivot columns, or
/// `None` when the system is inconsistent.
fn rref(rows: &mut Vec<Vec<Q>>, n: usize) -> Option<Vec<usize>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..=n {
                    let d = &f * &rows[r][j];
                    rows[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    rows.truncate(r);
    Some(pivots)
}

/// Solves a square system; `None` if singular.
fn solve_square(mut a: Vec<Vec<Q>>) -> Option<Vec<Q>> {
    let n = a.len();
    let pivots = rref(&mut a, n)?;
    (pivots.len() == n).then(|| a.into_iter().map(|row| row[n].clone()).collect())
}

fn binomial(n: usize, k: usize) -> u64 {
    let k = k.min(n.saturating_sub(k));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

struct Reduced {
    x0: Vec<Q>,
    /// Columns are a basis of the solution space of the homogeneous system.
    basis: Vec<Vec<Q>>,
}

fn eliminate(eqs: &[Constraint], n: usize) -> Option<Reduced> {
    let mut rows: Vec<Vec<Q>> = eqs
        .iter()
        .map(|c| {
            let mut r: Vec<Q> = c.coeffs.iter().map(|v| v.0.clone()).collect();
            r.push(c.rhs.0.clone());
            r
        })
        .collect();
    let pivots = rref(&mut rows, n)?;
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut x0 = vec![q(0); n];
    for (row, &p) in rows.iter().zip(&pivots) {
        x0[p] = row[n].clone();
    }
    let basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![q(0); n];
            v[f] = q(1);
            for (row, &p) in rows.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect();
    Some(Reduced { x0, basis })
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

enum Vertices {
    Found(Vec<Vec<Q>>),
    Skipped(String),
}

fn enumerate_vertices(red: &Reduced, ineqs: &[Constraint], limits: &VertexLimits) -> Vertices {
    let f = red.basis.len();
    // Inequalities in t: g·N t ≥ h − g·x0.
    let mut rows: Vec<(Vec<Q>, Q)> = Vec::new();
    let mut seen = HashSet::new();
    for c in ineqs {
        let g: Vec<Q> = c.coeffs.iter().map(|v| v.0.clone()).collect();
        let lhs: Vec<Q> = red.basis.iter().map(|b| dot(&g, b)).collect();
        let rhs = &c.rhs.0 - dot(&g, &red.x0);
        if lhs.iter().all(Zero::is_zero) {
            if rhs.is_positive() {
                return Vertices::Found(Vec::new());
            }
            continue;
        }
        if seen.insert((lhs.clone(), rhs.clone())) {
            rows.push((lhs, rhs));
        }
    }
    let point = |t: &[Q]| -> Vec<Q> {
        let mut x = red.x0.clone();
        for (b, tv) in red.basis.iter().zip(t) {
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi += bi * tv;
            }
        }
        x
    };
    let feasible = |t: &[Q]| rows.iter().all(|(g, h)| dot(g, t) >= *h);
    if f == 0 {
        return Vertices::Found(if feasible(&[]) { vec![red.x0.clone()] } else { Vec::new() });
    }
    if f > limits.max_free_dim {
        return Vertices::Skipped(format!("free dimension {f} exceeds {}", limits.max_free_dim));
    }
    let subsystems = binomial(rows.len(), f);
    if subsystems > limits.max_subsystems {
        return Vertices::Skipped(format!("{subsystems} subsystems exceed {}", limits.max_subsystems));
    }
    let mut found: Vec<Vec<Q>> = Vec::new();
    let mut found_set = HashSet::new();
    let mut idx: Vec<usize> = (0..f).collect();
    if rows.len() >= f {
        loop {
            let a: Vec<Vec<Q>> = idx
                .iter()
                .map(|&i| {
                    let mut r = rows[i].0.clone();
                    r.push(rows[i].1.clone());
                    r
                })
                .collect();
            if let Some(t) = solve_square(a) {
                if feasible(&t) && found_set.insert(t.clone()) {
                    found.push(point(&t));
                }
            }
            // Next combination in lexicographic order.
            let mut k = f;
            while k > 0 && idx[k - 1] == rows.len() - f + k - 1 {
                k -= 1;
            }
            if k == 0 {
                break;
            }
            idx[k - 1] += 1;
            for j in k..f {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    found.sort();
    Vertices::Found(found)
}

/// The polytope of states `s` with `s(0) = 0`, `s(u) = 1`, additive on the
/// certified sums and monotone on the order of the fragment.
pub fn state_polytope(m: &FiniteMonoid, unit: usize, variant: &Variant) -> Result<StatePolytope> {
    state_polytope_with(m, unit, variant, &VertexLimits::default())
}

pub fn state_polytope_with(
    m: &FiniteMonoid,
    unit: usize,
    variant: &Variant,
    limits: &VertexLimits,
) -> Result<StatePolytope> {
    check_order_unit(m, unit)?;
    let n = m.len();
    let l = |i: usize| m.labels[i].as_str();
    let mut eqs = vec![
        Constraint::new(ConstraintKind::Eq, n, &[(m.zero, 1)], 0, format!("s({}) = 0", l(m.zero))),
        Constraint::new(ConstraintKind::Eq, n, &[(unit, 1)], 1, format!("s({}) = 1", l(unit))),
    ];
    let mut defined = 0usize;
    for i in 0..n {
        for j in i..n {
            if let Some(k) = m.sum(i, j) {
                defined += 1;
                if i == m.zero || j == m.zero {
                    continue;
                }
                eqs.push(Constraint::new(
                    ConstraintKind::Eq,
                    n,
                    &[(i, 1), (j, 1), (k, -1)],
                    0,
                    format!("s({}) + s({}) = s({})", l(i), l(j), l(k)),
                ));
            }
        }
    }
    let mut ineqs: Vec<Constraint> = covers(m)
        .into_iter()
        .map(|(a, b)| {
            Constraint::new(ConstraintKind::Ge, n, &[(b, 1), (a, -1)], 0, format!("s({}) <= s({})", l(a), l(b)))
        })
        .collect();
    let (name, triples, sampled) = match variant {
        Variant::Dimension => ("dimension", 0, false),
        Variant::Sylvester { w, sampling } => {
            if w.len() != n || w.leq != m.leq {
                return Err(Error::Precondition("the Sylvester variant needs the monoid built from w".into()));
            }
            let (ts, sampled) = sylvester_triples(w, sampling);
            for &(a, b, t) in &ts {
                ineqs.push(Constraint::new(
                    ConstraintKind::Ge,
                    n,
                    &[(t, 1), (a, -1), (b, -1)],
                    0,
                    format!("s({}) + s({}) <= s({})", l(a), l(b), l(t)),
                ));
            }
            ("sylvester", ts.len(), sampled)
        }
    };
    let fragment = format!(
        "{} classes, {} certified sums of {} pairs, {} order covers",
        n,
        defined,
        n * (n + 1) / 2,
        covers(m).len()
    );
    let mut out = StatePolytope {
        monoid: m.name.clone(),
        labels: m.labels.clone(),
        unit,
        variant: name,
        fragment,
        equalities: eqs,
        inequalities: ineqs,
        free_dim: None,
        vertices: None,
        feasibility: Feasibility::Unknown,
        sylvester_triples: triples,
        sampled,
        note: None,
    };
    let Some(red) = eliminate(&out.equalities, n) else {
        out.vertices = Some(Vec::new());
        out.feasibility = Feasibility::Empty;
        out.note = Some("the equalities are inconsistent".into());
        return Ok(out);
    };
    out.free_dim = Some(red.basis.len());
    match enumerate_vertices(&red, &out.inequalities, limits) {
        Vertices::Found(vs) => {
            // Every class is below a multiple of the unit, so the polytope is
            // bounded and has a vertex unless it is empty.
            out.feasibility = if vs.is_empty() {
                Feasibility::Empty
            } else {
                Feasibility::Nonempty
            };
            for v in &vs {
                if !out.contains(v) {
                    return Err(Error::Invariant("a vertex violates a constraint".into()));
                }
            }
            out.vertices = Some(vs.into_iter().map(|v| v.into_iter().map(Rat).collect()).collect());
        }
        Vertices::Skipped(why) => out.note = Some(format!("H-representation only: {why}")),
    }
    Ok(out)
}

/// A value in `[0, ∞]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtValue {
    Finite(Rat),
    Inf,
}

impl ExtValue {
    pub fn plus(&self, other: &ExtValue) -> ExtValue {
        match (self, other) {
            (ExtValue::Finite(a), ExtValue::Finite(b)) => ExtValue::Finite(Rat(&a.0 + &b.0)),
            _ => ExtValue::Inf,
        }
    }

    fn max(self, other: ExtValue) -> ExtValue {
        match (self, other) {
            (ExtValue::Finite(a), ExtValue::Finite(b)) => ExtValue::Finite(a.max(b)),
            _ => ExtValue::Inf,
        }
    }
}

impl fmt::Display for ExtValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtValue::Finite(r) => write!(f, "{r}"),
            ExtValue::Inf => write!(f, "∞"),
        }
    }
}

/// A state given by its values.
#[derive(Clone, Debug)]
pub enum StateValues {
    /// `s(p) = Σ cᵢ pᵢ` on a symbolic monoid.
    Linear(Vec<Q>),
    /// One value per element of a finite monoid.
    Table(Vec<Q>),
}

fn linear_at(c: &[Q], p: &[Ext]) -> ExtValue {
    let mut acc = q(0);
    for (ci, pi) in c.iter().zip(p) {
        match pi {
            Ext::Fin(v) => acc += ci * q(*v as i64),
            Ext::Inf if ci.is_positive() => return ExtValue::Inf,
            Ext::Inf => {}
        }
    }
    ExtValue::Finite(Rat(acc))
}

fn check_linear(c: &[Q], m: &Symbolic) -> Result<()> {
    let base = match m {
        Symbolic::Lambda(b) => b.as_ref(),
        other => other,
    };
    if c.len() != base.dim() {
        return Err(Error::Precondition(format!("{} coefficients for dimension {}", c.len(), base.dim())));
    }
    if c.iter().any(Signed::is_negative) {
        return Err(Error::Precondition("coefficients must be nonnegative".into()));
    }
    if matches!(base, Symbolic::Nsd) && c[1] > c[0] {
        return Err(Error::Precondition("not monotone: (0,1) <= (1,0) needs c1 <= c0".into()));
    }
    Ok(())
}

/// `λ_s(I)`: the supremum of `s` along a cofinal sequence of `I`.
pub fn extend_functional(s: &StateValues, m: &OrderedMonoid, i: &Interval) -> Result<ExtValue> {
    match (s, m, i) {
        (StateValues::Linear(c), OrderedMonoid::Symbolic(sym), Interval::Principal(p)) => {
            check_linear(c, sym)?;
            Ok(linear_at(c, p))
        }
        (StateValues::Linear(c), OrderedMonoid::Symbolic(sym), Interval::Chain(ch)) => {
            check_linear(c, sym)?;
            sym.validate_chain(ch)?;
            // Monotone along the chain, so the supremum is the limit.
            let lim: Vec<Ext> = ch
                .tail
                .iter()
                .map(|co| match co {
                    Coord::Affine { offset, slope: 0 } => Ext::Fin(*offset),
                    _ => Ext::Inf,
                })
                .collect();
            Ok(linear_at(c, &lim))
        }
        (StateValues::Table(v), OrderedMonoid::Finite(fm), Interval::Generators(g)) => {
            if v.len() != fm.len() {
                return Err(Error::Precondition("one value per element is required".into()));
            }
            if g.is_empty() || g.iter().any(|&x| x >= fm.len()) {
                return Err(Error::Precondition("generators must be nonempty elements".into()));
            }
            Ok(g.iter()
                .map(|&x| ExtValue::Finite(Rat(v[x].clone())))
                .reduce(ExtValue::max)
                .expect("nonempty"))
        }
        _ => Err(Error::Unsupported("state values do not match the interval form".into())),
    }
}

/// `λ_s` on an element of the interval model of `W`: `[0,x]` gives `s(x)`;
/// a chain `a + n·b` is unbounded unless `s(b) = 0`.
pub fn extend_on_lambda(values: &[Q], model: &LambdaModel, elem: usize) -> Result<ExtValue> {
    if elem >= model.len() {
        return Err(Error::Precondition(format!("element {elem} out of range")));
    }
    let n = model.principal.len();
    if values.len() != n {
        return Err(Error::Precondition(format!("{} values for {n} classes", values.len())));
    }
    Ok(match model.elements[elem] {
        LambdaElem::Principal(x) => ExtValue::Finite(Rat(values[x].clone())),
        LambdaElem::Chain { base, step } if values[step].is_zero() => ExtValue::Finite(Rat(values[base].clone())),
        LambdaElem::Chain { .. } => ExtValue::Inf,
    })
}

/// Convenience for tests and callers: `Rat` vectors from integers.
pub fn rats(xs: &[i64]) -> Vec<Q> {
    xs.iter().map(|&x| q(x)).collect()
}

impl From<Q> for Rat {
    fn from(v: Q) -> Rat {
        Rat(v)
    }
}
