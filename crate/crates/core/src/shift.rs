//! Polynomials without constant term in `x_0, x_1, ...` over a prime field,
//! subject to `x_{i+1}·x_i = x_i`, under explicit variable and degree bounds.
//!
//! Reducing `x_j x_i ↦ x_i` for `j > i` drops every letter that is followed
//! somewhere by a smaller one, so normal forms are nondecreasing words and a
//! monomial is its exponent vector.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::seq::StageAlgebra;

/// Largest supported number of variables.
pub const MAX_VARS: usize = 8;

/// A normal-form monomial `x_0^{e_0} x_1^{e_1} ⋯`, never the empty word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: [u8; MAX_VARS],
}

impl Ord for Monomial {
    /// Lexicographic on exponents from `x_0`: a larger exponent at the first
    /// difference is larger, so `x_0² > x_0 x_2`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.exps.cmp(&other.exps)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn var(i: usize) -> Result<Monomial> {
        if i >= MAX_VARS {
            return Err(Error::Precondition(format!("x{i} exceeds {MAX_VARS} variables")));
        }
        let mut exps = [0; MAX_VARS];
        exps[i] = 1;
        Ok(Monomial { exps })
    }

    /// Normal form of a word of variable indices.
    pub fn from_word(word: &[usize]) -> Result<Monomial> {
        if word.is_empty() {
            return Err(Error::Precondition("the empty word is the constant 1".into()));
        }
        let mut exps = [0u8; MAX_VARS];
        let mut min_after = usize::MAX;
        for &i in word.iter().rev() {
            if i >= MAX_VARS {
                return Err(Error::Precondition(format!("x{i} exceeds {MAX_VARS} variables")));
            }
            if i <= min_after {
                exps[i] = exps[i]
                    .checked_add(1)
                    .ok_or_else(|| Error::Precondition("exponent overflow".into()))?;
                min_after = i;
            }
        }
        Ok(Monomial { exps })
    }

    pub fn degree(&self) -> usize {
        self.exps.iter().map(|&e| e as usize).sum()
    }

    /// Smallest variable index present.
    pub fn st(&self) -> usize {
        self.exps.iter().position(|&e| e > 0).expect("monomials are nonempty")
    }

    /// Largest variable index present.
    pub fn end(&self) -> usize {
        self.exps.iter().rposition(|&e| e > 0).expect("monomials are nonempty")
    }

    pub fn exponents(&self) -> &[u8] {
        &self.exps[..=self.end()]
    }

    /// `p·q`: letters of `p` above `st(q)` are absorbed.
    pub fn mul(&self, q: &Monomial) -> Monomial {
        let s = q.st();
        let mut exps = q.exps;
        exps[..s].copy_from_slice(&self.exps[..s]);
        exps[s] += self.exps[s];
        Monomial { exps }
    }

    /// Nondecreasing word of the monomial.
    pub fn word(&self) -> Vec<usize> {
        let mut w = Vec::new();
        for (i, &e) in self.exps.iter().enumerate() {
            w.extend(std::iter::repeat_n(i, e as usize));
        }
        w
    }

    pub fn parse(text: &str) -> Result<Monomial> {
        Monomial::from_word(&parse_word(text)?)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { format!("x{i}") } else { format!("x{i}^{e}") })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Parses `x2 x0^2 x1` (spaces or `*` between letters) into a word.
pub fn parse_word(text: &str) -> Result<Vec<usize>> {
    let mut word = Vec::new();
    for tok in text.split(|c: char| c.is_whitespace() || c == '*').filter(|t| !t.is_empty()) {
        let body = tok
            .strip_prefix('x')
            .ok_or_else(|| Error::Parse(format!("expected a variable like x0, found {tok:?}")))?;
        let (idx, exp) = match body.split_once('^') {
            Some((i, e)) => (i, e),
            None => (body, "1"),
        };
        let i: usize = idx.parse().map_err(|_| Error::Parse(format!("bad variable {tok:?}")))?;
        let e: usize = exp.parse().map_err(|_| Error::Parse(format!("bad exponent {tok:?}")))?;
        if e == 0 {
            return Err(Error::Parse(format!("zero exponent in {tok:?}")));
        }
        word.extend(std::iter::repeat_n(i, e));
    }
    if word.is_empty() {
        return Err(Error::Parse("empty monomial".into()));
    }
    Ok(word)
}

/// Every irreducible word reachable by rewriting `x_j x_i ↦ x_i` (`j > i`)
/// at any position, in any order.
pub fn all_reductions(word: &[usize]) -> HashSet<Vec<usize>> {
    let mut seen = HashSet::new();
    let mut stack = vec![word.to_vec()];
    let mut out = HashSet::new();
    while let Some(w) = stack.pop() {
        if !seen.insert(w.clone()) {
            continue;
        }
        let mut reducible = false;
        for p in 0..w.len().saturating_sub(1) {
            if w[p] > w[p + 1] {
                reducible = true;
                let mut v = w.clone();
                v.remove(p);
                stack.push(v);
            }
        }
        if !reducible {
            out.insert(w);
        }
    }
    out
}

/// `st(p)`.
pub fn st_of(m: &Monomial) -> usize {
    m.st()
}

/// A polynomial with normal-form monomials and nonzero coefficients in
/// `ℤ/p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftPoly {
    p: u64,
    vars: usize,
    degree_bound: usize,
    terms: BTreeMap<Monomial, u64>,
}

impl Serialize for ShiftPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Coefficient field and bounds shared by a family of polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftBounds {
    pub p: u64,
    pub vars: usize,
    pub degree: usize,
}

impl ShiftBounds {
    pub fn new(field: &Ring, vars: usize, degree: usize) -> Result<ShiftBounds> {
        let p = field
            .prime_field()
            .ok_or_else(|| Error::Precondition(format!("{} is not a prime field", field.name())))?;
        if vars == 0 || vars > MAX_VARS || degree == 0 {
            return Err(Error::Precondition(format!("bounds need 1..={MAX_VARS} variables and positive degree")));
        }
        Ok(ShiftBounds { p, vars, degree })
    }

    pub fn zero(&self) -> ShiftPoly {
        ShiftPoly {
            p: self.p,
            vars: self.vars,
            degree_bound: self.degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(&self, m: Monomial) -> Result<ShiftPoly> {
        let mut z = self.zero();
        z.check(&m)?;
        z.terms.insert(m, 1);
        Ok(z)
    }

    pub fn var(&self, i: usize) -> Result<ShiftPoly> {
        self.monomial(Monomial::var(i)?)
    }

    /// Parses a signed sum of monomials with optional integer coefficients,
    /// e.g. `x0^2 + 2 x1 x3 - x1`.
    pub fn parse(&self, text: &str) -> Result<ShiftPoly> {
        let mut out = self.zero();
        let t = text.trim();
        if t == "0" {
            return Ok(out);
        }
        let mut chunks: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for c in t.chars() {
            if c == '+' || c == '-' {
                if !cur.trim().is_empty() {
                    chunks.push((neg, cur.trim().to_string()));
                }
                cur.clear();
                neg = c == '-';
            } else {
                cur.push(c);
            }
        }
        if !cur.trim().is_empty() {
            chunks.push((neg, cur.trim().to_string()));
        }
        if chunks.is_empty() {
            return Err(Error::Parse(format!("empty polynomial {text:?}")));
        }
        for (neg, chunk) in chunks {
            let (coef, rest) = match chunk.split_once(|c: char| !c.is_ascii_digit()) {
                _ if chunk.starts_with('x') => (1u64, chunk.as_str()),
                Some((digits, _)) if !digits.is_empty() => {
                    let n: u64 = digits.parse().map_err(|_| Error::Parse(format!("bad coefficient in {chunk:?}")))?;
                    (n, chunk[digits.len()..].trim_start_matches(|c: char| c.is_whitespace() || c == '*'))
                }
                _ => return Err(Error::Parse(format!("bad term {chunk:?}"))),
            };
            let m = Monomial::parse(rest)?;
            out.check(&m)?;
            let c = coef % self.p;
            let c = if neg { (self.p - c) % self.p } else { c };
            out.add_term(m, c);
        }
        Ok(out)
    }
}

impl ShiftPoly {
    pub fn bounds(&self) -> ShiftBounds {
        ShiftBounds {
            p: self.p,
            vars: self.vars,
            degree: self.degree_bound,
        }
    }

    fn check(&self, m: &Monomial) -> Result<()> {
        if m.end() >= self.vars {
            return Err(Error::Precondition(format!("{m} uses a variable beyond x{}", self.vars - 1)));
        }
        if m.degree() > self.degree_bound {
            return Err(Error::DegreeOverflow {
                degree: m.degree(),
                bound: self.degree_bound,
            });
        }
        Ok(())
    }

    fn add_term(&mut self, m: Monomial, c: u64) {
        if c == 0 {
            return;
        }
        let p = self.p;
        let e = self.terms.entry(m).or_insert(0);
        *e = (*e + c) % p;
        if *e == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    fn compatible(&self, other: &ShiftPoly) -> Result<()> {
        if self.p != other.p || self.vars != other.vars || self.degree_bound != other.degree_bound {
            return Err(Error::Precondition("polynomials have different fields or bounds".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &ShiftPoly) -> Result<ShiftPoly> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(*m, c);
        }
        Ok(out)
    }

    /// Bilinear product; a result term above the degree bound is an error.
    pub fn mul(&self, other: &ShiftPoly) -> Result<ShiftPoly> {
        self.compatible(other)?;
        let mut out = self.bounds().zero();
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                let m = a.mul(b);
                out.check(&m)?;
                out.add_term(m, ca * cb % self.p);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for ShiftPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // Largest monomial first.
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, &c)| if c == 1 { m.to_string() } else { format!("{c} {m}") })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// 1×1 polynomial stages for sequence validation.
pub struct ShiftAlgebra;

impl StageAlgebra for ShiftAlgebra {
    type Value = ShiftPoly;

    fn mul(&self, a: &ShiftPoly, b: &ShiftPoly) -> Result<ShiftPoly> {
        a.mul(b)
    }

    fn equal(&self, a: &ShiftPoly, b: &ShiftPoly) -> bool {
        a == b
    }
}

/// `(x_0, x_1, ..., x_{d-1})` with witnesses `y_{i+1} = x_{i+1}`.
pub fn variable_sequence(b: &ShiftBounds) -> Result<(Vec<ShiftPoly>, Vec<ShiftPoly>)> {
    let stages = (0..b.vars).map(|i| b.var(i)).collect::<Result<Vec<_>>>()?;
    let witnesses = stages[1..].to_vec();
    Ok((stages, witnesses))
}

/// Every normal monomial in `vars` variables of degree `1..=degree`.
pub fn monomials(vars: usize, degree: usize) -> Vec<Monomial> {
    fn rec(start: usize, vars: usize, left: usize, word: &mut Vec<usize>, out: &mut Vec<Monomial>) {
        if !word.is_empty() {
            out.push(Monomial::from_word(word).expect("nonempty"));
        }
        if left == 0 {
            return;
        }
        for i in start..vars {
            word.push(i);
            rec(i, vars, left - 1, word, out);
            word.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, vars, degree, &mut Vec::new(), &mut out);
    out.sort();
    out
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CompactSearch {
    pub vars: usize,
    /// Degree bound for the entries of `s`, and of `z` in the scalar case.
    pub degree: usize,
    /// Matrix size of `z` and `s`.
    pub size: usize,
    /// Degree bound for the entries of `z`.
    pub z_degree: usize,
    /// Solve `z = z²·s` instead of `z = s·z²`.
    pub mirrored: bool,
    /// Cap on the number of `z` candidates.
    pub budget: u64,
}

impl CompactSearch {
    pub fn scalar(vars: usize, degree: usize) -> CompactSearch {
        CompactSearch {
            vars,
            degree,
            size: 1,
            z_degree: degree,
            mirrored: false,
            budget: 1 << 22,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Solution {
    /// Row-major entries.
    pub z: Vec<ShiftPoly>,
    pub s: Vec<ShiftPoly>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompactSearchReport {
    pub search: CompactSearch,
    pub equation: &'static str,
    pub candidates_total: u128,
    pub candidates_checked: u64,
    pub complete: bool,
    /// Solutions with `z ≠ 0`; `z = 0` always solves with any `s`.
    pub nonzero_solutions: Vec<Solution>,
    pub covered: String,
}

/// Polynomial over indexed monomials, sorted by index.
type Terms = Vec<(u32, u64)>;

/// Every monomial up to a degree, with a product table.
struct Universe {
    monos: Vec<Monomial>,
    index: HashMap<Monomial, u32>,
    /// `table[a*n + b]` is the index of `a·b`, or `u32::MAX` when the
    /// product leaves the universe.
    table: Vec<u32>,
    p: u64,
}

impl Universe {
    fn new(vars: usize, degree: usize, p: u64) -> Universe {
        let monos = monomials(vars, degree);
        let index: HashMap<Monomial, u32> = monos.iter().enumerate().map(|(i, m)| (*m, i as u32)).collect();
        let n = monos.len();
        let mut table = vec![u32::MAX; n * n];
        for (a, ma) in monos.iter().enumerate() {
            for (b, mb) in monos.iter().enumerate() {
                if let Some(&i) = index.get(&ma.mul(mb)) {
                    table[a * n + b] = i;
                }
            }
        }
        Universe { monos, index, table, p }
    }

    fn len(&self) -> usize {
        self.monos.len()
    }

    fn mul_into(&self, a: &Terms, b: &Terms, acc: &mut Acc) {
        let n = self.len();
        for &(ia, ca) in a {
            for &(ib, cb) in b {
                let m = self.table[ia as usize * n + ib as usize];
                debug_assert!(m != u32::MAX, "product outside the universe");
                acc.add(m as usize, ca * cb % self.p, self.p);
            }
        }
    }
}

/// Dense accumulator that remembers which slots it touched.
struct Acc {
    vals: Vec<u64>,
    touched: Vec<usize>,
}

impl Acc {
    fn new(n: usize) -> Acc {
        Acc {
            vals: vec![0; n],
            touched: Vec::new(),
        }
    }

    fn add(&mut self, i: usize, c: u64, p: u64) {
        if self.vals[i] == 0 {
            self.touched.push(i);
        }
        self.vals[i] = (self.vals[i] + c) % p;
        // A slot that returns to zero stays in `touched`; `drain` skips it.
        if self.vals[i] == 0 {
            self.vals[i] = p;
        }
    }

    /// Nonzero entries `(offset + slot, value)`, leaving the accumulator empty.
    fn drain(&mut self, offset: usize, p: u64) -> Vec<(usize, u64)> {
        self.touched.sort_unstable();
        let mut out = Vec::with_capacity(self.touched.len());
        for &i in &self.touched {
            let v = self.vals[i] % p;
            if v != 0 {
                out.push((offset + i, v));
            }
            self.vals[i] = 0;
        }
        self.touched.clear();
        out
    }
}

fn to_terms(v: Vec<(usize, u64)>) -> Terms {
    v.into_iter().map(|(i, c)| (i as u32, c)).collect()
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let (mut b, mut e) = (a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Solves `Σ_u c_u·cols[u] = target` over `ℤ/p`; columns and target are
/// sparse over row keys.
fn solve_linear(cols: &[Vec<(usize, u64)>], target: &[(usize, u64)], p: u64) -> Option<Vec<u64>> {
    let mut keys: Vec<usize> = cols.iter().flatten().chain(target).map(|&(k, _)| k).collect();
    keys.sort_unstable();
    keys.dedup();
    let row_of = |k: usize| keys.binary_search(&k).expect("collected");
    let n = cols.len();
    let mut rows = vec![vec![0u64; n + 1]; keys.len()];
    for (c, col) in cols.iter().enumerate() {
        for &(k, v) in col {
            rows[row_of(k)][c] = v;
        }
    }
    for &(k, v) in target {
        rows[row_of(k)][n] = v;
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = inv_mod(rows[r][c], p);
        for v in rows[r].iter_mut() {
            *v = *v * inv % p;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| row[n] != 0) {
        return None;
    }
    let mut sol = vec![0; n];
    for (row, &c) in rows.iter().zip(&pivots) {
        sol[c] = row[n];
    }
    Some(sol)
}

/// All `z ≠ 0` in the bounded range for which some `s` in its range solves
/// `z = s·z²` (or `z = z²·s` when mirrored). For each `z` the equation is
/// linear in the coefficients of `s`, so `s` is solved for, not enumerated.
pub fn search_compact_solutions(field: &Ring, search: &CompactSearch) -> Result<CompactSearchReport> {
    let k = search.size;
    if k == 0 || search.z_degree == 0 || search.degree == 0 {
        return Err(Error::Precondition("size and degrees must be positive".into()));
    }
    if k > 3 {
        return Err(Error::Unsupported("matrix searches beyond 3x3".into()));
    }
    let top = search.degree + 2 * search.z_degree;
    let b = ShiftBounds::new(field, search.vars, top)?;
    let p = b.p;
    let uni = Universe::new(search.vars, top, p);
    let idx = |m: &Monomial| uni.index[m];
    let z_monos: Vec<u32> = monomials(search.vars, search.z_degree).iter().map(idx).collect();
    let s_monos: Vec<u32> = monomials(search.vars, search.degree).iter().map(idx).collect();
    let per_entry = (p as u128)
        .checked_pow(z_monos.len() as u32)
        .ok_or_else(|| Error::Budget("too many entry supports".into()))?;
    let total = per_entry
        .checked_pow((k * k) as u32)
        .ok_or_else(|| Error::Budget("too many candidates".into()))?;
    let checked = total.min(search.budget as u128) as u64;
    let nu = uni.len();
    let entry_of = |mut code: u128| -> Terms {
        let mut t = Vec::new();
        for &m in &z_monos {
            let c = (code % p as u128) as u64;
            code /= p as u128;
            if c != 0 {
                t.push((m, c));
            }
        }
        t.sort_unstable();
        t
    };
    let solve_one = |code: u64, acc: &mut Acc, seen: &mut Vec<u32>, stamp: &mut u32| -> Option<Solution> {
        let mut rest = code as u128;
        let z: Vec<Terms> = (0..k * k)
            .map(|_| {
                let e = entry_of(rest % per_entry);
                rest /= per_entry;
                e
            })
            .collect();
        if z.iter().all(Vec::is_empty) {
            return None;
        }
        let zz: Vec<Terms> = (0..k * k)
            .map(|ij| {
                let (i, j) = (ij / k, ij % k);
                for l in 0..k {
                    uni.mul_into(&z[i * k + l], &z[l * k + j], acc);
                }
                to_terms(acc.drain(0, p))
            })
            .collect();
        let mut s: Vec<Terms> = vec![Vec::new(); k * k];
        // Row `line` of s (column when mirrored) meets row `line` of z.
        for line in 0..k {
            let mut cols = Vec::with_capacity(k * s_monos.len());
            *stamp += 1;
            for l in 0..k {
                for &m in &s_monos {
                    let unit: Terms = vec![(m, 1)];
                    let mut col = Vec::new();
                    for other in 0..k {
                        if search.mirrored {
                            uni.mul_into(&zz[other * k + l], &unit, acc);
                        } else {
                            uni.mul_into(&unit, &zz[l * k + other], acc);
                        }
                        col.extend(acc.drain(other * nu, p));
                    }
                    for &(key, _) in &col {
                        seen[key] = *stamp;
                    }
                    cols.push(col);
                }
            }
            let mut target = Vec::new();
            for other in 0..k {
                let entry = if search.mirrored { &z[other * k + line] } else { &z[line * k + other] };
                target.extend(entry.iter().map(|&(m, c)| (other * nu + m as usize, c)));
            }
            // A target monomial that no column reaches rules out every `s`.
            if target.iter().any(|&(key, _)| seen[key] != *stamp) {
                return None;
            }
            let sol = solve_linear(&cols, &target, p)?;
            let mut u = 0;
            for l in 0..k {
                for &m in &s_monos {
                    if sol[u] != 0 {
                        let entry = if search.mirrored { l * k + line } else { line * k + l };
                        s[entry].push((m, sol[u]));
                    }
                    u += 1;
                }
            }
        }
        let poly = |t: &Terms| {
            let mut out = b.zero();
            for &(m, c) in t {
                out.add_term(uni.monos[m as usize], c);
            }
            out
        };
        Some(Solution {
            z: z.iter().map(poly).collect(),
            s: s.iter().map(poly).collect(),
        })
    };
    let chunk = 1u64 << 12;
    let chunks = checked.div_ceil(chunk);
    let nonzero: Vec<Solution> = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut acc = Acc::new(nu);
            let mut seen = vec![0u32; k * nu];
            let mut stamp = 0u32;
            let lo = c * chunk;
            let hi = (lo + chunk).min(checked);
            (lo..hi)
                .filter_map(|code| solve_one(code, &mut acc, &mut seen, &mut stamp))
                .collect::<Vec<_>>()
        })
        .collect();
    let complete = checked as u128 == total;
    Ok(CompactSearchReport {
        search: *search,
        equation: if search.mirrored { "z = z²·s" } else { "z = s·z²" },
        candidates_total: total,
        candidates_checked: checked,
        complete,
        nonzero_solutions: nonzero,
        covered: format!(
            "{k}x{k} z with entries in span of {} monomials (degree <= {}), s with entries of degree <= {}, {} variables over F_{p}; {} of {} candidates",
            z_monos.len(),
            search.z_degree,
            search.degree,
            search.vars,
            checked,
            total
        ),
    })
}
