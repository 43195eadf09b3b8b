//! Rectangular matrices over a finite ring.
//!
//! A [`Mat`] is a finite representative of an element of `M∞(R)`: it is
//! stored exactly as given and only [`Mat::trim`] drops zero border rows and
//! columns.

mod elementary;
mod idem;

pub use elementary::{ElementaryOp, OpLog};
pub use idem::{mvn_equivalent, Idem, MvnWitness};

use std::fmt;
use std::sync::Arc;

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::ring::{Elem, Ring};

#[derive(Clone)]
pub struct Mat {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl PartialEq for Mat {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
            && (Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring)
    }
}

impl Eq for Mat {}

impl std::hash::Hash for Mat {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
        self.cols.hash(state);
        self.data.hash(state);
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(i, j).0)?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Serialize for Mat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Mat", 3)?;
        st.serialize_field("rows", &self.rows)?;
        st.serialize_field("cols", &self.cols)?;
        st.serialize_field("entries", &self.to_string())?;
        st.end()
    }
}

pub(crate) fn same_ring(a: &Ring, b: &Ring) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Mat {
    pub fn new(ring: &Ring, rows: usize, cols: usize, data: Vec<Elem>) -> Result<Mat> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape("matrices need positive dimensions".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::Shape(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        if let Some(e) = data.iter().find(|e| e.idx() >= ring.size()) {
            return Err(Error::Shape(format!("entry {e} outside ring {}", ring.spec())));
        }
        Ok(Mat {
            ring: ring.clone(),
            rows,
            cols,
            data,
        })
    }

    pub(crate) fn from_raw(ring: &Ring, rows: usize, cols: usize, data: Vec<Elem>) -> Mat {
        debug_assert_eq!(data.len(), rows * cols);
        Mat {
            ring: ring.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows(ring: &Ring, rows: &[&[u16]]) -> Result<Mat> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Mat::new(ring, r, c, rows.iter().flat_map(|x| x.iter().map(|&v| Elem(v))).collect())
    }

    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> Mat {
        Mat::from_raw(ring, rows.max(1), cols.max(1), vec![Elem::ZERO; rows.max(1) * cols.max(1)])
    }

    pub fn scalar(ring: &Ring, a: Elem) -> Mat {
        Mat::from_raw(ring, 1, 1, vec![a])
    }

    /// Identity matrix; fails over non-unital rings.
    pub fn identity(ring: &Ring, n: usize) -> Result<Mat> {
        let one = ring
            .one()
            .ok_or_else(|| Error::Precondition(format!("{} has no identity", ring.spec())))?;
        let mut m = Mat::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, one);
        }
        Ok(m)
    }

    pub fn diagonal(ring: &Ring, d: &[Elem]) -> Mat {
        let n = d.len().max(1);
        let mut m = Mat::zeros(ring, n, n);
        for (i, &x) in d.iter().enumerate() {
            m.set(i, i, x);
        }
        m
    }

    /// Parses `[[1,0],[0,1]]`; whitespace is ignored. A bare integer is a 1x1 matrix.
    pub fn parse(ring: &Ring, text: &str) -> Result<Mat> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if let Ok(v) = s.parse::<u64>() {
            return Ok(Mat::scalar(ring, ring.elem(v)?));
        }
        let inner = s
            .strip_prefix('[')
            .and_then(|x| x.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("matrix literal must be bracketed: {text:?}")))?;
        let mut rows: Vec<Vec<Elem>> = Vec::new();
        let mut rest = inner;
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('[')
                .ok_or_else(|| Error::Parse(format!("expected '[' in {text:?}")))?;
            let end = body
                .find(']')
                .ok_or_else(|| Error::Parse(format!("unterminated row in {text:?}")))?;
            let row = body[..end]
                .split(',')
                .map(|x| {
                    x.parse::<u64>()
                        .map_err(|_| Error::Parse(format!("bad entry {x:?} in {text:?}")))
                        .and_then(|v| ring.elem(v))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
            rest = &body[end + 1..];
            if let Some(r) = rest.strip_prefix(',') {
                rest = r;
            } else if !rest.is_empty() {
                return Err(Error::Parse(format!("expected ',' between rows in {text:?}")));
            }
        }
        let c = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != c) {
            return Err(Error::Parse(format!("ragged rows in {text:?}")));
        }
        Mat::new(ring, rows.len(), c, rows.into_iter().flatten().collect())
    }

    #[inline]
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn entries(&self) -> &[Elem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&e| e == Elem::ZERO)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn check_ring(&self, other: &Mat) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        self.check_ring(other)?;
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Mat) -> Mat {
        let r = &self.ring;
        let (m, k, n) = (self.rows, self.cols, other.cols);
        let mut out = vec![Elem::ZERO; m * n];
        for i in 0..m {
            for l in 0..k {
                let a = self.data[i * k + l];
                if a == Elem::ZERO {
                    continue;
                }
                for j in 0..n {
                    let p = r.mul(a, other.data[l * n + j]);
                    out[i * n + j] = r.add(out[i * n + j], p);
                }
            }
        }
        Mat::from_raw(r, m, n, out)
    }

    /// Product in `M∞(R)`: the inner dimensions are padded with zeros to agree.
    pub fn mul_inf(&self, other: &Mat) -> Result<Mat> {
        self.check_ring(other)?;
        let k = self.cols.max(other.rows);
        Ok(self.pad_to(self.rows, k).mul_unchecked(&other.pad_to(k, other.cols)))
    }

    /// Product of a chain of matrices in `M∞(R)`.
    pub fn product_inf(factors: &[&Mat]) -> Result<Mat> {
        let (first, rest) = factors
            .split_first()
            .ok_or_else(|| Error::Shape("empty product".into()))?;
        let mut acc = (*first).clone();
        for f in rest {
            acc = acc.mul_inf(f)?;
        }
        Ok(acc)
    }

    fn zip(&self, other: &Mat, f: impl Fn(Elem, Elem) -> Elem) -> Result<Mat> {
        self.check_ring(other)?;
        if self.shape() != other.shape() {
            return Err(Error::Shape(format!(
                "shapes {}x{} and {}x{} differ",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Mat::from_raw(&self.ring, self.rows, self.cols, data))
    }

    pub fn add(&self, other: &Mat) -> Result<Mat> {
        let r = self.ring.clone();
        self.zip(other, |a, b| r.add(a, b))
    }

    pub fn sub(&self, other: &Mat) -> Result<Mat> {
        let r = self.ring.clone();
        self.zip(other, |a, b| r.sub(a, b))
    }

    /// Difference in `M∞(R)`, padding both operands to a common shape.
    pub fn sub_inf(&self, other: &Mat) -> Result<Mat> {
        let (r, c) = (self.rows.max(other.rows), self.cols.max(other.cols));
        self.pad_to(r, c).sub(&other.pad_to(r, c))
    }

    pub fn neg(&self) -> Mat {
        let data = self.data.iter().map(|&a| self.ring.neg(a)).collect();
        Mat::from_raw(&self.ring, self.rows, self.cols, data)
    }

    pub fn map(&self, f: impl Fn(Elem) -> Elem) -> Mat {
        Mat::from_raw(&self.ring, self.rows, self.cols, self.data.iter().map(|&a| f(a)).collect())
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(&self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Block-diagonal sum `x ⊕ y`.
    pub fn diag_sum(&self, other: &Mat) -> Result<Mat> {
        self.check_ring(other)?;
        let mut out = Mat::zeros(&self.ring, self.rows + other.rows, self.cols + other.cols);
        out.paste(0, 0, self);
        out.paste(self.rows, self.cols, other);
        Ok(out)
    }

    /// Drops all-zero trailing rows and columns, keeping at least a 1x1 matrix.
    pub fn trim(&self) -> Mat {
        let mut r = self.rows;
        while r > 1 && (0..self.cols).all(|j| self.get(r - 1, j) == Elem::ZERO) {
            r -= 1;
        }
        let mut c = self.cols;
        while c > 1 && (0..r).all(|i| self.get(i, c - 1) == Elem::ZERO) {
            c -= 1;
        }
        self.block(0, r, 0, c)
    }

    /// Resizes to the given shape, filling new entries with zeros. Entries
    /// outside the new shape are dropped.
    pub fn pad_to(&self, rows: usize, cols: usize) -> Mat {
        if (rows, cols) == self.shape() {
            return self.clone();
        }
        let mut out = Mat::zeros(&self.ring, rows, cols);
        for i in 0..self.rows.min(rows) {
            for j in 0..self.cols.min(cols) {
                out.set(i, j, self.get(i, j));
            }
        }
        out
    }

    /// Equality in `M∞(R)`.
    pub fn inf_eq(&self, other: &Mat) -> bool {
        let (r, c) = (self.rows.max(other.rows), self.cols.max(other.cols));
        same_ring(&self.ring, &other.ring) && self.pad_to(r, c).data == other.pad_to(r, c).data
    }

    /// Submatrix of rows `r0..r1` and columns `c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Mat {
        let mut out = Mat::zeros(&self.ring, r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                out.set(i - r0, j - c0, self.get(i, j));
            }
        }
        out
    }

    /// Writes `m` with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, m: &Mat) {
        for i in 0..m.rows {
            for j in 0..m.cols {
                self.set(r0 + i, c0 + j, m.get(i, j));
            }
        }
    }

    /// Horizontal concatenation.
    pub fn hcat(&self, other: &Mat) -> Result<Mat> {
        self.check_ring(other)?;
        if self.rows != other.rows {
            return Err(Error::Shape("hcat needs equal row counts".into()));
        }
        let mut out = Mat::zeros(&self.ring, self.rows, self.cols + other.cols);
        out.paste(0, 0, self);
        out.paste(0, self.cols, other);
        Ok(out)
    }

    /// Vertical concatenation.
    pub fn vcat(&self, other: &Mat) -> Result<Mat> {
        self.check_ring(other)?;
        if self.cols != other.cols {
            return Err(Error::Shape("vcat needs equal column counts".into()));
        }
        let mut out = Mat::zeros(&self.ring, self.rows + other.rows, self.cols);
        out.paste(0, 0, self);
        out.paste(self.rows, 0, other);
        Ok(out)
    }

    /// `[[a, b], [c, d]]` from four blocks.
    pub fn block2(a: &Mat, b: &Mat, c: &Mat, d: &Mat) -> Result<Mat> {
        a.hcat(b)?.vcat(&c.hcat(d)?)
    }

    pub fn is_idempotent(&self) -> bool {
        self.is_square() && self.mul_unchecked(self) == *self
    }

    /// Index of this matrix among all matrices of its shape, entries read as
    /// base-|R| digits with the first entry most significant.
    pub fn encode(&self) -> u64 {
        let s = self.ring.size() as u64;
        self.data.iter().fold(0u64, |acc, e| acc * s + e.0 as u64)
    }

    pub fn decode(ring: &Ring, rows: usize, cols: usize, mut code: u64) -> Mat {
        let s = ring.size() as u64;
        let mut data = vec![Elem::ZERO; rows * cols];
        for slot in data.iter_mut().rev() {
            *slot = Elem((code % s) as u16);
            code /= s;
        }
        Mat::from_raw(ring, rows, cols, data)
    }

    /// Number of matrices of the given shape, if it fits in `u64`.
    pub fn count(ring: &Ring, rows: usize, cols: usize) -> Option<u64> {
        (ring.size() as u64).checked_pow((rows * cols) as u32)
    }

    /// Entrywise ring key (shape then entries) used for canonical ordering.
    pub fn sort_key(&self) -> (usize, usize, Vec<u16>) {
        (self.rows, self.cols, self.data.iter().map(|e| e.0).collect())
    }

    /// Rebinds the entries to another ring with the same identifiers.
    pub fn with_ring(&self, ring: &Ring) -> Result<Mat> {
        Mat::new(ring, self.rows, self.cols, self.data.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::FiniteRing;
    use proptest::prelude::*;

    fn f2() -> Ring {
        FiniteRing::gf(2).unwrap()
    }

    #[test]
    fn diag_sum_examples() {
        let r = f2();
        let one = Mat::parse(&r, "[[1]]").unwrap();
        assert_eq!(one.diag_sum(&one).unwrap(), Mat::parse(&r, "[[1,0],[0,1]]").unwrap());
        let x = Mat::parse(&r, "[[1,1]]").unwrap();
        let y = Mat::parse(&r, "[[1],[0]]").unwrap();
        assert_eq!(
            x.diag_sum(&y).unwrap(),
            Mat::parse(&r, "[[1,1,0],[0,0,1],[0,0,0]]").unwrap()
        );
        let z = Mat::parse(&r, "[[0]]").unwrap();
        let s = z.diag_sum(&y).unwrap();
        assert_eq!(s.shape(), (3, 2));
        assert_eq!(s.get(1, 1), Elem(1));
    }

    #[test]
    fn diag_sum_rejects_ring_mismatch() {
        let a = Mat::parse(&f2(), "[[1]]").unwrap();
        let b = Mat::parse(&FiniteRing::zmod(3).unwrap(), "[[1]]").unwrap();
        assert_eq!(a.diag_sum(&b), Err(Error::RingMismatch));
    }

    #[test]
    fn literal_parsing() {
        let r = FiniteRing::zmod(4).unwrap();
        let m = Mat::parse(&r, " [ [1, 0] , [0 ,3] ] ").unwrap();
        assert_eq!(m.to_string(), "[[1,0],[0,3]]");
        assert!(Mat::parse(&r, "[[1,0],[0]]").is_err());
        assert!(Mat::parse(&r, "[[4]]").is_err());
        assert_eq!(Mat::parse(&r, "2").unwrap().to_string(), "[[2]]");
    }

    #[test]
    fn trim_examples() {
        let r = f2();
        let m = Mat::parse(&r, "[[1,0,0],[0,0,0]]").unwrap();
        assert_eq!(m.trim().to_string(), "[[1]]");
        assert_eq!(Mat::zeros(&r, 3, 2).trim().shape(), (1, 1));
    }

    #[test]
    fn encode_round_trip() {
        let r = FiniteRing::zmod(3).unwrap();
        for code in 0..81 {
            assert_eq!(Mat::decode(&r, 2, 2, code).encode(), code);
        }
    }

    fn arb_mat(max: usize) -> impl Strategy<Value = (usize, usize, Vec<u16>)> {
        (1..=max, 1..=max).prop_flat_map(|(r, c)| (Just(r), Just(c), proptest::collection::vec(0u16..4, r * c)))
    }

    proptest! {
        #[test]
        fn trim_idempotent((r, c, d) in arb_mat(4)) {
            let ring = FiniteRing::zmod(4).unwrap();
            let m = Mat::new(&ring, r, c, d.into_iter().map(Elem).collect()).unwrap();
            let t = m.trim();
            prop_assert_eq!(t.trim(), t.clone());
            prop_assert!(t.inf_eq(&m));
        }

        #[test]
        fn diag_sum_associative((r1, c1, d1) in arb_mat(3), (r2, c2, d2) in arb_mat(3), (r3, c3, d3) in arb_mat(3)) {
            let ring = FiniteRing::zmod(4).unwrap();
            let mk = |r, c, d: Vec<u16>| Mat::new(&ring, r, c, d.into_iter().map(Elem).collect()).unwrap();
            let (x, y, z) = (mk(r1, c1, d1), mk(r2, c2, d2), mk(r3, c3, d3));
            let left = x.diag_sum(&y).unwrap().diag_sum(&z).unwrap();
            let right = x.diag_sum(&y.diag_sum(&z).unwrap()).unwrap();
            prop_assert_eq!(left.shape(), (r1 + r2 + r3, c1 + c2 + c3));
            prop_assert_eq!(left, right);
        }

        #[test]
        fn mul_associative((r, c, d1) in arb_mat(3), d2 in proptest::collection::vec(0u16..4, 9), d3 in proptest::collection::vec(0u16..4, 9)) {
            let ring = FiniteRing::zmod(4).unwrap();
            let x = Mat::new(&ring, r, c, d1.into_iter().map(Elem).collect()).unwrap();
            let y = Mat::new(&ring, 3, 3, d2.into_iter().map(Elem).collect()).unwrap().block(0, c, 0, 3);
            let z = Mat::new(&ring, 3, 3, d3.into_iter().map(Elem).collect()).unwrap();
            let left = x.mul(&y).unwrap().mul(&z).unwrap();
            let right = x.mul(&y.mul(&z).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}
