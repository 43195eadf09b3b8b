use serde::Serialize;

use super::Mat;
use crate::error::{Error, Result};
use crate::ring::{Elem, Ring};

/// An invertible elementary row or column operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum ElementaryOp {
    /// `row[target] += factor * row[source]`
    RowAdd { target: usize, source: usize, factor: Elem },
    /// `col[target] += col[source] * factor`
    ColAdd { target: usize, source: usize, factor: Elem },
    RowSwap { a: usize, b: usize },
    ColSwap { a: usize, b: usize },
    /// `row[row] = unit * row[row]`
    RowScale { row: usize, unit: Elem },
    /// `col[col] = col[col] * unit`
    ColScale { col: usize, unit: Elem },
}

impl ElementaryOp {
    pub fn is_row(&self) -> bool {
        matches!(self, ElementaryOp::RowAdd { .. } | ElementaryOp::RowSwap { .. } | ElementaryOp::RowScale { .. })
    }

    pub fn apply(&self, m: &mut Mat) {
        let r = m.ring().clone();
        match *self {
            ElementaryOp::RowAdd { target, source, factor } => {
                for j in 0..m.cols() {
                    let v = r.add(m.get(target, j), r.mul(factor, m.get(source, j)));
                    m.set(target, j, v);
                }
            }
            ElementaryOp::ColAdd { target, source, factor } => {
                for i in 0..m.rows() {
                    let v = r.add(m.get(i, target), r.mul(m.get(i, source), factor));
                    m.set(i, target, v);
                }
            }
            ElementaryOp::RowSwap { a, b } => {
                for j in 0..m.cols() {
                    let t = m.get(a, j);
                    m.set(a, j, m.get(b, j));
                    m.set(b, j, t);
                }
            }
            ElementaryOp::ColSwap { a, b } => {
                for i in 0..m.rows() {
                    let t = m.get(i, a);
                    m.set(i, a, m.get(i, b));
                    m.set(i, b, t);
                }
            }
            ElementaryOp::RowScale { row, unit } => {
                for j in 0..m.cols() {
                    let v = r.mul(unit, m.get(row, j));
                    m.set(row, j, v);
                }
            }
            ElementaryOp::ColScale { col, unit } => {
                for i in 0..m.rows() {
                    let v = r.mul(m.get(i, col), unit);
                    m.set(i, col, v);
                }
            }
        }
    }

    pub fn inverse(&self, ring: &Ring) -> Result<ElementaryOp> {
        Ok(match *self {
            ElementaryOp::RowAdd { target, source, factor } => ElementaryOp::RowAdd {
                target,
                source,
                factor: ring.neg(factor),
            },
            ElementaryOp::ColAdd { target, source, factor } => ElementaryOp::ColAdd {
                target,
                source,
                factor: ring.neg(factor),
            },
            op @ (ElementaryOp::RowSwap { .. } | ElementaryOp::ColSwap { .. }) => op,
            ElementaryOp::RowScale { row, unit } => ElementaryOp::RowScale {
                row,
                unit: ring.inverse(unit).ok_or_else(|| Error::Invariant("scaling by a non-unit".into()))?,
            },
            ElementaryOp::ColScale { col, unit } => ElementaryOp::ColScale {
                col,
                unit: ring.inverse(unit).ok_or_else(|| Error::Invariant("scaling by a non-unit".into()))?,
            },
        })
    }
}

/// A recorded sequence of row operations (a left factor `U`) and column
/// operations (a right factor `V`) applied to an `m x n` matrix.
#[derive(Clone, Debug)]
pub struct OpLog {
    ring: Ring,
    rows: usize,
    cols: usize,
    pub row_ops: Vec<ElementaryOp>,
    pub col_ops: Vec<ElementaryOp>,
}

impl OpLog {
    pub fn new(ring: &Ring, rows: usize, cols: usize) -> OpLog {
        OpLog {
            ring: ring.clone(),
            rows,
            cols,
            row_ops: Vec::new(),
            col_ops: Vec::new(),
        }
    }

    /// Applies `op` to `m` and records it.
    pub fn apply(&mut self, m: &mut Mat, op: ElementaryOp) {
        op.apply(m);
        if op.is_row() {
            self.row_ops.push(op);
        } else {
            self.col_ops.push(op);
        }
    }

    pub fn len(&self) -> usize {
        self.row_ops.len() + self.col_ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `U` with `U · A · V` equal to the transformed matrix.
    pub fn left(&self) -> Result<Mat> {
        let mut u = Mat::identity(&self.ring, self.rows)?;
        for op in &self.row_ops {
            op.apply(&mut u);
        }
        Ok(u)
    }

    pub fn right(&self) -> Result<Mat> {
        let mut v = Mat::identity(&self.ring, self.cols)?;
        for op in &self.col_ops {
            op.apply(&mut v);
        }
        Ok(v)
    }

    pub fn left_inverse(&self) -> Result<Mat> {
        let mut u = Mat::identity(&self.ring, self.rows)?;
        for op in self.row_ops.iter().rev() {
            op.inverse(&self.ring)?.apply(&mut u);
        }
        Ok(u)
    }

    pub fn right_inverse(&self) -> Result<Mat> {
        let mut v = Mat::identity(&self.ring, self.cols)?;
        for op in self.col_ops.iter().rev() {
            op.inverse(&self.ring)?.apply(&mut v);
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::FiniteRing;

    #[test]
    fn inverses_reconstruct() {
        let r = FiniteRing::zmod(8).unwrap();
        let a = Mat::parse(&r, "[[2,3,1],[4,6,2],[1,1,1]]").unwrap();
        let mut m = a.clone();
        let mut log = OpLog::new(&r, 3, 3);
        let ops = [
            ElementaryOp::RowAdd { target: 1, source: 0, factor: Elem(6) },
            ElementaryOp::ColSwap { a: 0, b: 2 },
            ElementaryOp::RowScale { row: 2, unit: Elem(3) },
            ElementaryOp::ColAdd { target: 1, source: 0, factor: Elem(5) },
            ElementaryOp::RowSwap { a: 0, b: 2 },
            ElementaryOp::ColScale { col: 1, unit: Elem(7) },
        ];
        for op in ops {
            log.apply(&mut m, op);
        }
        let (u, v) = (log.left().unwrap(), log.right().unwrap());
        assert_eq!(u.mul(&a).unwrap().mul(&v).unwrap(), m);
        let id = Mat::identity(&r, 3).unwrap();
        assert_eq!(u.mul(&log.left_inverse().unwrap()).unwrap(), id);
        assert_eq!(v.mul(&log.right_inverse().unwrap()).unwrap(), id);
    }
}
