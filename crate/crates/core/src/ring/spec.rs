//! Ring specifications: an inline form such as `matrix(gf(2),2)` and a
//! key/value file form.
//!
//! File grammar (one `key = value` per line, `#` starts a comment):
//!
//! ```text
//! kind   = zmod | gf | matrix | upper | product | ideal | explicit
//! params = <kind specific>
//!          zmod, gf:       an integer
//!          matrix, upper:  <inline spec>, <k>
//!          product:        <inline spec>, <inline spec>
//!          ideal:          <inline spec of the unital ambient ring>
//!          explicit:       the ring order
//! generators = <ids>                    (ideal only, whitespace separated)
//! one    = <id>                         (explicit only, optional)
//! add    = <row>; <row>; ...            (explicit only, rows of ids)
//! mul    = <row>; <row>; ...            (explicit only)
//! labels = <label> <label> ...          (explicit only, optional)
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ideal_closure, is_prime, Elem, FiniteRing, Ring, Structure, MAX_RING_SIZE};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplicitTables {
    pub size: usize,
    pub add: Vec<u16>,
    pub mul: Vec<u16>,
    pub one: Option<u16>,
    pub labels: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RingSpec {
    Zmod(u64),
    Gf(u64),
    Matrix(Box<RingSpec>, usize),
    Upper(Box<RingSpec>, usize),
    Product(Box<RingSpec>, Box<RingSpec>),
    Ideal(Box<RingSpec>, Vec<u16>),
    Explicit(ExplicitTables),
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Zmod(n) => write!(f, "zmod({n})"),
            RingSpec::Gf(p) => write!(f, "gf({p})"),
            RingSpec::Matrix(r, k) => write!(f, "matrix({r},{k})"),
            RingSpec::Upper(r, k) => write!(f, "upper({r},{k})"),
            RingSpec::Product(a, b) => write!(f, "product({a},{b})"),
            RingSpec::Ideal(r, g) => {
                let gens: Vec<String> = g.iter().map(|x| x.to_string()).collect();
                write!(f, "ideal({r},[{}])", gens.join(","))
            }
            RingSpec::Explicit(t) => write!(f, "explicit({})", t.size),
        }
    }
}

impl RingSpec {
    /// Parses the inline form. Accepts `zmod4`/`gf2` shorthands.
    pub fn parse(text: &str) -> Result<RingSpec> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::RingSpec("empty ring specification".into()));
        }
        let (head, args) = match s.find('(') {
            Some(i) => {
                if !s.ends_with(')') {
                    return Err(Error::RingSpec(format!("unbalanced parentheses in {text:?}")));
                }
                (&s[..i], Some(&s[i + 1..s.len() - 1]))
            }
            None => (s.as_str(), None),
        };
        let args: Vec<&str> = match args {
            Some(a) => split_top_level(a)?,
            None => Vec::new(),
        };
        let int = |x: &str| -> Result<u64> {
            x.parse::<u64>()
                .map_err(|_| Error::RingSpec(format!("expected an integer, found {x:?}")))
        };
        let head_lower = head.to_ascii_lowercase();
        // Shorthands zmodN, gfN.
        for (prefix, is_gf) in [("zmod", false), ("gf", true), ("z", false)] {
            if let Some(rest) = head_lower.strip_prefix(prefix) {
                if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) && args.is_empty() {
                    let n = int(rest)?;
                    return Ok(if is_gf { RingSpec::Gf(n) } else { RingSpec::Zmod(n) });
                }
            }
        }
        let want = |k: usize| -> Result<()> {
            if args.len() == k {
                Ok(())
            } else {
                Err(Error::RingSpec(format!("{head} expects {k} argument(s), got {}", args.len())))
            }
        };
        match head_lower.as_str() {
            "zmod" => {
                want(1)?;
                Ok(RingSpec::Zmod(int(args[0])?))
            }
            "gf" => {
                want(1)?;
                Ok(RingSpec::Gf(int(args[0])?))
            }
            "matrix" | "matrix_ring" | "mat" => {
                want(2)?;
                Ok(RingSpec::Matrix(Box::new(RingSpec::parse(args[0])?), int(args[1])? as usize))
            }
            "upper" | "upper_triangular" => {
                want(2)?;
                Ok(RingSpec::Upper(Box::new(RingSpec::parse(args[0])?), int(args[1])? as usize))
            }
            "product" => {
                want(2)?;
                Ok(RingSpec::Product(
                    Box::new(RingSpec::parse(args[0])?),
                    Box::new(RingSpec::parse(args[1])?),
                ))
            }
            "ideal" => {
                want(2)?;
                let gens = args[1]
                    .strip_prefix('[')
                    .and_then(|g| g.strip_suffix(']'))
                    .ok_or_else(|| Error::RingSpec("ideal generators must be bracketed".into()))?;
                let gens = gens
                    .split(',')
                    .filter(|g| !g.is_empty())
                    .map(|g| int(g).map(|v| v as u16))
                    .collect::<Result<Vec<_>>>()?;
                Ok(RingSpec::Ideal(Box::new(RingSpec::parse(args[0])?), gens))
            }
            _ => Err(Error::RingSpec(format!("unknown ring kind {head:?}"))),
        }
    }

    /// Renders the key/value file form. `parse_file(to_file_string())` is the identity.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        let row_block = |t: &[u16], n: usize| -> String {
            t.chunks(n)
                .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
                .collect::<Vec<_>>()
                .join("; ")
        };
        match self {
            RingSpec::Zmod(n) => out.push_str(&format!("kind = zmod\nparams = {n}\n")),
            RingSpec::Gf(p) => out.push_str(&format!("kind = gf\nparams = {p}\n")),
            RingSpec::Matrix(r, k) => out.push_str(&format!("kind = matrix\nparams = {r}, {k}\n")),
            RingSpec::Upper(r, k) => out.push_str(&format!("kind = upper\nparams = {r}, {k}\n")),
            RingSpec::Product(a, b) => out.push_str(&format!("kind = product\nparams = {a}, {b}\n")),
            RingSpec::Ideal(r, g) => {
                let gens: Vec<String> = g.iter().map(|x| x.to_string()).collect();
                out.push_str(&format!("kind = ideal\nparams = {r}\ngenerators = {}\n", gens.join(" ")));
            }
            RingSpec::Explicit(t) => {
                out.push_str(&format!("kind = explicit\nparams = {}\n", t.size));
                if let Some(u) = t.one {
                    out.push_str(&format!("one = {u}\n"));
                }
                out.push_str(&format!("add = {}\n", row_block(&t.add, t.size)));
                out.push_str(&format!("mul = {}\n", row_block(&t.mul, t.size)));
                if let Some(l) = &t.labels {
                    out.push_str(&format!("labels = {}\n", l.join(" ")));
                }
            }
        }
        out
    }

    /// Parses the key/value file form.
    pub fn parse_file(text: &str) -> Result<RingSpec> {
        let mut kind = None;
        let mut params = None;
        let mut generators = None;
        let mut one = None;
        let mut add = None;
        let mut mul = None;
        let mut labels = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::RingSpec(format!("line {}: expected key = value", lineno + 1)))?;
            let (k, v) = (k.trim().to_ascii_lowercase(), v.trim().to_string());
            let slot = match k.as_str() {
                "kind" => &mut kind,
                "params" => &mut params,
                "generators" => &mut generators,
                "one" => &mut one,
                "add" => &mut add,
                "mul" => &mut mul,
                "labels" => &mut labels,
                other => return Err(Error::RingSpec(format!("line {}: unknown key {other:?}", lineno + 1))),
            };
            if slot.replace(v).is_some() {
                return Err(Error::RingSpec(format!("line {}: duplicate key {k:?}", lineno + 1)));
            }
        }
        let kind = kind.ok_or_else(|| Error::RingSpec("missing key `kind`".into()))?;
        let params = params.ok_or_else(|| Error::RingSpec("missing key `params`".into()))?;
        let int = |x: &str| -> Result<u64> {
            x.trim()
                .parse::<u64>()
                .map_err(|_| Error::RingSpec(format!("expected an integer, found {x:?}")))
        };
        let compact: String = params.chars().filter(|c| !c.is_whitespace()).collect();
        let args = split_top_level(&compact)?;
        let spec = match kind.to_ascii_lowercase().as_str() {
            "zmod" => RingSpec::Zmod(int(&params)?),
            "gf" => RingSpec::Gf(int(&params)?),
            "matrix" | "upper" | "product" => {
                if args.len() != 2 {
                    return Err(Error::RingSpec(format!("{kind} params need two entries")));
                }
                match kind.as_str() {
                    "matrix" => RingSpec::Matrix(Box::new(RingSpec::parse(args[0])?), int(args[1])? as usize),
                    "upper" => RingSpec::Upper(Box::new(RingSpec::parse(args[0])?), int(args[1])? as usize),
                    _ => RingSpec::Product(
                        Box::new(RingSpec::parse(args[0])?),
                        Box::new(RingSpec::parse(args[1])?),
                    ),
                }
            }
            "ideal" => {
                let gens = generators
                    .unwrap_or_default()
                    .split_whitespace()
                    .map(|g| int(g).map(|v| v as u16))
                    .collect::<Result<Vec<_>>>()?;
                RingSpec::Ideal(Box::new(RingSpec::parse(&params)?), gens)
            }
            "explicit" => {
                let size = int(&params)? as usize;
                let table = |name: &str, t: Option<String>| -> Result<Vec<u16>> {
                    let t = t.ok_or_else(|| Error::RingSpec(format!("explicit ring needs `{name}`")))?;
                    let rows: Vec<&str> = t.split(';').collect();
                    if rows.len() != size {
                        return Err(Error::RingSpec(format!("`{name}` needs {size} rows")));
                    }
                    let mut out = Vec::with_capacity(size * size);
                    for r in rows {
                        let vals = r
                            .split_whitespace()
                            .map(|x| int(x).map(|v| v as u16))
                            .collect::<Result<Vec<_>>>()?;
                        if vals.len() != size {
                            return Err(Error::RingSpec(format!("`{name}` rows need {size} entries")));
                        }
                        out.extend(vals);
                    }
                    Ok(out)
                };
                RingSpec::Explicit(ExplicitTables {
                    size,
                    add: table("add", add)?,
                    mul: table("mul", mul)?,
                    one: one.map(|o| int(&o).map(|v| v as u16)).transpose()?,
                    labels: labels.map(|l| l.split_whitespace().map(String::from).collect()),
                })
            }
            other => return Err(Error::RingSpec(format!("unknown kind {other:?}"))),
        };
        Ok(spec)
    }

    /// Constructs and validates the ring.
    pub fn build(&self) -> Result<Ring> {
        Ok(std::sync::Arc::new(self.build_raw()?))
    }

    fn build_raw(&self) -> Result<FiniteRing> {
        match self {
            RingSpec::Zmod(n) | RingSpec::Gf(n) => {
                let n = *n;
                if n < 2 {
                    return Err(Error::RingSpec(format!("modulus must be at least 2, got {n}")));
                }
                if matches!(self, RingSpec::Gf(_)) && !is_prime(n) {
                    return Err(Error::RingSpec(format!("gf({n}): order must be prime")));
                }
                if n as usize > MAX_RING_SIZE {
                    return Err(Error::RingSpec(format!("modulus {n} too large")));
                }
                let size = n as usize;
                let mut add = Vec::with_capacity(size * size);
                let mut mul = Vec::with_capacity(size * size);
                for a in 0..n {
                    for b in 0..n {
                        add.push(Elem(((a + b) % n) as u16));
                        mul.push(Elem(((a * b) % n) as u16));
                    }
                }
                FiniteRing::from_tables(self.clone(), size, add, mul, Some(Elem(1)), None, Structure::Cyclic { n })
            }
            RingSpec::Matrix(inner, k) | RingSpec::Upper(inner, k) => {
                let k = *k;
                if k == 0 {
                    return Err(Error::RingSpec("matrix size must be positive".into()));
                }
                let base = inner.build_raw()?;
                let upper = matches!(self, RingSpec::Upper(..));
                let positions: Vec<(usize, usize)> = (0..k)
                    .flat_map(|i| (0..k).map(move |j| (i, j)))
                    .filter(|&(i, j)| !upper || i <= j)
                    .collect();
                let s = base.size();
                let size = checked_pow(s, positions.len())?;
                let decode = |mut id: usize| -> Vec<Elem> {
                    // Most significant digit first.
                    let mut m = vec![Elem::ZERO; k * k];
                    for &(i, j) in positions.iter().rev() {
                        m[i * k + j] = Elem((id % s) as u16);
                        id /= s;
                    }
                    m
                };
                let encode = |m: &[Elem]| -> u16 {
                    let mut id = 0usize;
                    for &(i, j) in &positions {
                        id = id * s + m[i * k + j].idx();
                    }
                    id as u16
                };
                let mats: Vec<Vec<Elem>> = (0..size).map(decode).collect();
                let mut add = Vec::with_capacity(size * size);
                let mut mul = Vec::with_capacity(size * size);
                let mut buf = vec![Elem::ZERO; k * k];
                for x in &mats {
                    for y in &mats {
                        for t in 0..k * k {
                            buf[t] = base.add(x[t], y[t]);
                        }
                        add.push(Elem(encode(&buf)));
                        for i in 0..k {
                            for j in 0..k {
                                let mut acc = Elem::ZERO;
                                for l in 0..k {
                                    acc = base.add(acc, base.mul(x[i * k + l], y[l * k + j]));
                                }
                                buf[i * k + j] = acc;
                            }
                        }
                        mul.push(Elem(encode(&buf)));
                    }
                }
                let one = base.one().map(|u| {
                    let mut m = vec![Elem::ZERO; k * k];
                    for i in 0..k {
                        m[i * k + i] = u;
                    }
                    Elem(encode(&m))
                });
                let labels = mats
                    .iter()
                    .map(|m| {
                        let rows: Vec<String> = (0..k)
                            .map(|i| {
                                let r: Vec<&str> = (0..k).map(|j| base.label(m[i * k + j])).collect();
                                format!("[{}]", r.join(","))
                            })
                            .collect();
                        format!("[{}]", rows.join(","))
                    })
                    .collect();
                FiniteRing::from_tables(self.clone(), size, add, mul, one, Some(labels), Structure::Other)
            }
            RingSpec::Product(a, b) => {
                let ra = a.build_raw()?;
                let rb = b.build_raw()?;
                let (sa, sb) = (ra.size(), rb.size());
                let size = sa
                    .checked_mul(sb)
                    .filter(|&s| s <= MAX_RING_SIZE)
                    .ok_or_else(|| Error::RingSpec("product ring too large".into()))?;
                let split = |id: usize| (Elem((id / sb) as u16), Elem((id % sb) as u16));
                let join = |x: Elem, y: Elem| Elem((x.idx() * sb + y.idx()) as u16);
                let mut add = Vec::with_capacity(size * size);
                let mut mul = Vec::with_capacity(size * size);
                for u in 0..size {
                    let (u1, u2) = split(u);
                    for v in 0..size {
                        let (v1, v2) = split(v);
                        add.push(join(ra.add(u1, v1), rb.add(u2, v2)));
                        mul.push(join(ra.mul(u1, v1), rb.mul(u2, v2)));
                    }
                }
                let one = match (ra.one(), rb.one()) {
                    (Some(x), Some(y)) => Some(join(x, y)),
                    _ => None,
                };
                let labels = (0..size)
                    .map(|u| {
                        let (x, y) = split(u);
                        format!("({},{})", ra.label(x), rb.label(y))
                    })
                    .collect();
                FiniteRing::from_tables(self.clone(), size, add, mul, one, Some(labels), Structure::Other)
            }
            RingSpec::Ideal(ambient, gens) => {
                let amb = ambient.build()?;
                let g = gens
                    .iter()
                    .map(|&x| amb.elem(x as u64))
                    .collect::<Result<Vec<_>>>()?;
                let ideal = ideal_closure(&amb, &g)?;
                let mut ring = ideal.to_ring_raw()?;
                ring.spec = self.clone();
                Ok(ring)
            }
            RingSpec::Explicit(t) => {
                let conv = |v: &[u16]| v.iter().map(|&x| Elem(x)).collect::<Vec<_>>();
                FiniteRing::from_tables(
                    self.clone(),
                    t.size,
                    conv(&t.add),
                    conv(&t.mul),
                    t.one.map(Elem),
                    t.labels.clone(),
                    Structure::Other,
                )
            }
        }
    }
}

fn checked_pow(base: usize, exp: usize) -> Result<usize> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc
            .checked_mul(base)
            .filter(|&v| v <= MAX_RING_SIZE)
            .ok_or_else(|| Error::RingSpec(format!("ring order exceeds {MAX_RING_SIZE}")))?;
    }
    Ok(acc)
}

/// Splits on commas that are not nested inside parentheses or brackets.
fn split_top_level(s: &str) -> Result<Vec<&str>> {
    let mut parts = Vec::new();
    let mut depth: i32 = 0;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::RingSpec(format!("unbalanced brackets in {s:?}")));
                }
            }
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::RingSpec(format!("unbalanced brackets in {s:?}")));
    }
    if !s.is_empty() {
        parts.push(&s[start..]);
    }
    Ok(parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inline_round_trip() {
        for text in [
            "zmod(4)",
            "gf(3)",
            "matrix(gf(2),2)",
            "upper(zmod(4),2)",
            "product(gf(2),gf(3))",
            "ideal(zmod(4),[2])",
            "product(matrix(gf(2),2),zmod(3))",
        ] {
            let spec = RingSpec::parse(text).unwrap();
            assert_eq!(spec.to_string(), text);
            assert_eq!(RingSpec::parse(&spec.to_string()).unwrap(), spec);
        }
    }

    #[test]
    fn shorthands() {
        assert_eq!(RingSpec::parse("zmod4").unwrap(), RingSpec::Zmod(4));
        assert_eq!(RingSpec::parse("gf2").unwrap(), RingSpec::Gf(2));
        assert_eq!(
            RingSpec::parse("product(gf2, gf3)").unwrap(),
            RingSpec::Product(Box::new(RingSpec::Gf(2)), Box::new(RingSpec::Gf(3)))
        );
    }

    #[test]
    fn file_round_trip_structured() {
        for text in ["zmod(4)", "matrix(gf(2),2)", "product(gf(2),gf(3))", "ideal(zmod(4),[2])"] {
            let spec = RingSpec::parse(text).unwrap();
            let file = spec.to_file_string();
            assert_eq!(RingSpec::parse_file(&file).unwrap(), spec, "{file}");
        }
    }

    #[test]
    fn file_round_trip_explicit() {
        let text = "# the field with two elements\nkind = explicit\nparams = 2\none = 1\nadd = 0 1; 1 0\nmul = 0 0; 0 1\nlabels = o i\n";
        let spec = RingSpec::parse_file(text).unwrap();
        let again = RingSpec::parse_file(&spec.to_file_string()).unwrap();
        assert_eq!(spec, again);
        let ring = spec.build().unwrap();
        assert_eq!(ring.label(Elem(1)), "i");
        assert_eq!(ring.characteristic(), 2);
    }

    #[test]
    fn explicit_rejects_bad_tables() {
        // Not associative: a*a = a, but a+a = 0 and mul table breaks distributivity.
        let text = "kind = explicit\nparams = 2\nadd = 0 1; 1 0\nmul = 0 1; 1 1\n";
        let spec = RingSpec::parse_file(text).unwrap();
        assert!(spec.build().is_err());
        let text = "kind = explicit\nparams = 2\nadd = 0 1; 1 1\nmul = 0 0; 0 0\n";
        assert!(RingSpec::parse_file(text).unwrap().build().is_err());
    }

    #[test]
    fn matrix_labels_and_identity() {
        let r = RingSpec::parse("matrix(gf(2),2)").unwrap().build().unwrap();
        let one = r.one().unwrap();
        assert_eq!(r.label(one), "[[1,0],[0,1]]");
        // e11 is the element with only the most significant digit set.
        assert_eq!(r.label(Elem(8)), "[[1,0],[0,0]]");
    }
}
