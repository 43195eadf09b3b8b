//! The idempotent `E = ι∘π` of the splitting of `lim (R^{n_i}, x_i·)`, its
//! corners `Z_i`, and the way back from corners to a sequence.
//!
//! Indexing: `stages[j]` plays the role of `x_j` for `j ≥ 0`, and
//! `witnesses[j-1]` the role of `y_j`, so `y_j·x_j·x_{j-1} = x_{j-1}`. The free
//! summands are `R^{n_1} ⊕ R^{n_2} ⊕ ...` with `x_j` of shape `n_{j+1} × n_j`.

use serde::Serialize;

use super::{ensure_valid, SeqElem, Tail};
use crate::error::{Error, Result};
use crate::matrix::{Idem, Mat};

/// A column-finite idempotent, by corners or as a finite square matrix.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ColIdem {
    /// `Z_i` of shape `k_{i+1} × k_i` with `Z_{i+1}·Z_i = [Z_i; 0]`.
    Corners { sizes: Vec<usize>, corners: Vec<Mat> },
    Finite(Idem),
}

impl ColIdem {
    pub fn corners(corners: Vec<Mat>) -> Result<ColIdem> {
        let first = corners
            .first()
            .ok_or_else(|| Error::Precondition("at least one corner is needed".into()))?;
        let mut sizes = vec![first.cols()];
        for z in &corners {
            if z.cols() != *sizes.last().expect("nonempty") || z.rows() <= z.cols() {
                return Err(Error::Shape(format!("corner {}x{} breaks the increasing sizes", z.rows(), z.cols())));
            }
            sizes.push(z.rows());
        }
        let c = ColIdem::Corners { sizes, corners };
        c.check()?;
        Ok(c)
    }

    /// Checks `Z_{i+1}·Z_i = [Z_i; 0]` on every stored pair.
    pub fn check(&self) -> Result<()> {
        if let ColIdem::Corners { corners, .. } = self {
            for (i, pair) in corners.windows(2).enumerate() {
                let (z, next) = (&pair[0], &pair[1]);
                let padded = z.pad_to(next.rows(), z.cols());
                if next.mul(z)? != padded {
                    return Err(Error::Invariant(format!("corner relation fails at {i}")));
                }
            }
        }
        Ok(())
    }
}

/// `E`, truncated to the blocks the stored data determines.
#[derive(Clone, Debug, Serialize)]
pub struct IdemReport {
    /// `n_1, n_2, ...`.
    pub blocks: Vec<usize>,
    /// Row blocks `1..=M+1`, column blocks `1..=M`.
    pub matrix: Mat,
    pub idem: ColIdem,
    /// Column blocks on which `E² = E` was verified.
    pub verified_columns: usize,
}

struct Data {
    x: Vec<Mat>,
    /// `y[j]` is `y_j`; `y[0]` is unused.
    y: Vec<Mat>,
}

impl Data {
    fn new(s: &SeqElem, extra: usize) -> Result<Data> {
        let n = if s.is_stabilized() { s.len() + extra } else { s.len() };
        let e = s.extended(n)?;
        let mut y = vec![Mat::zeros(s.ring(), 0, 0)];
        y.extend(e.witnesses);
        Ok(Data { x: e.stages, y })
    }

    /// Number of column blocks, `M`.
    fn m(&self) -> usize {
        self.x.len() - 1
    }

    /// `n_i`.
    fn n(&self, i: usize) -> usize {
        if i == 0 {
            self.x[0].cols()
        } else {
            self.x[i - 1].rows()
        }
    }

    /// `y_a·y_{a+1}⋯y_b·v`, just `v` when `a > b`.
    fn ys_then(&self, a: usize, b: usize, v: &Mat) -> Result<Mat> {
        let mut acc = v.clone();
        for j in (a..=b).rev() {
            acc = self.y[j].mul(&acc)?;
        }
        Ok(acc)
    }

    /// Block `k+1` of column block `i`, for `k = 0..=i`.
    fn entry(&self, k: usize, i: usize) -> Result<Mat> {
        let top = self.ys_then(k + 1, i, &self.x[i])?;
        if k == 0 {
            return Ok(top);
        }
        let lower = self.x[k].mul(&self.ys_then(k, i, &self.x[i])?)?;
        top.sub(&lower)
    }

    fn offsets(&self, upto: usize) -> Vec<usize> {
        let mut off = vec![0];
        for b in 1..=upto {
            off.push(off[b - 1] + self.n(b));
        }
        off
    }

    fn matrix(&self) -> Result<Mat> {
        let m = self.m();
        let off = self.offsets(m + 1);
        let mut e = Mat::zeros(self.x[0].ring(), off[m + 1], off[m]);
        for i in 1..=m {
            for k in 0..=i {
                e.paste(off[k], off[i - 1], &self.entry(k, i)?);
            }
        }
        Ok(e)
    }
}

/// Builds `E` from the column formula, verifies `E² = E` where the stored
/// data determines it, and extracts the corners `Z_i`. Stabilized tails are
/// unrolled `extra` more stages.
pub fn seq_to_idem(s: &SeqElem, extra: usize) -> Result<IdemReport> {
    ensure_valid(s, "the sequence")?;
    let d = Data::new(s, extra)?;
    let m = d.m();
    if m == 0 {
        return Err(Error::Precondition("at least two stages are needed".into()));
    }
    let e = d.matrix()?;
    let off = d.offsets(m + 1);
    if m >= 2 {
        // Columns of blocks < M only meet rows of blocks <= M.
        let left = e.block(0, off[m + 1], 0, off[m]);
        let right = e.block(0, off[m], 0, off[m - 1]);
        if left.mul(&right)? != e.block(0, off[m + 1], 0, off[m - 1]) {
            return Err(Error::Invariant("E² ≠ E on the determined columns".into()));
        }
    }
    let corners: Vec<Mat> = (0..m).map(|i| e.block(0, off[i + 2], 0, off[i + 1])).collect();
    let idem = ColIdem::corners(corners)?;
    Ok(IdemReport {
        blocks: (1..=m + 1).map(|b| d.n(b)).collect(),
        matrix: e,
        idem,
        verified_columns: m.saturating_sub(1),
    })
}

/// The sequence of corners linked by `[I | 0]`, or a constant idempotent.
pub fn idem_to_seq(e: &ColIdem) -> Result<SeqElem> {
    let out = match e {
        ColIdem::Finite(f) => SeqElem::constant(f.base().clone(), f.base().clone())?,
        ColIdem::Corners { sizes, corners } => {
            e.check()?;
            let ring = corners[0].ring();
            if !ring.is_unital() {
                return Err(Error::Precondition(
                    "[I | 0] witnesses need a unital ring; pass the ambient ring".into(),
                ));
            }
            let witnesses = (0..corners.len().saturating_sub(1))
                .map(|i| Ok(Mat::identity(ring, sizes[i + 1])?.pad_to(sizes[i + 1], sizes[i + 2])))
                .collect::<Result<Vec<_>>>()?;
            SeqElem::new(corners.clone(), witnesses, Tail::Open)?
        }
    };
    ensure_valid(&out, "the corner sequence")?;
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct SplittingReport {
    /// Column blocks where `π∘ι` was evaluated.
    pub blocks_checked: usize,
    pub generators: usize,
    /// `ι` respects the transition maps.
    pub iota_compatible: bool,
    /// `π∘ι` is the identity on every stage generator.
    pub identity: bool,
    pub failures: Vec<String>,
}

/// Evaluates `π∘ι` on the generators of each free stage and checks that
/// `ι` is well defined on the limit.
pub fn splitting_check(s: &SeqElem, extra: usize) -> Result<SplittingReport> {
    ensure_valid(s, "the sequence")?;
    let d = Data::new(s, extra)?;
    let m = d.m();
    let mut failures = Vec::new();
    let mut generators = 0;
    let mut identity = true;
    for i in 1..=m {
        generators += d.n(i);
        // Push block k+1 of ι(φ_i(·)) to stage i+1 along x_i⋯x_{k+1}.
        let mut total = d.entry(i, i)?;
        for k in 0..i {
            let mut v = d.entry(k, i)?;
            for j in k + 1..=i {
                v = d.x[j].mul(&v)?;
            }
            total = total.add(&v)?;
        }
        if total != d.x[i] {
            identity = false;
            failures.push(format!("π∘ι differs from the identity on stage {i}"));
        }
    }
    let mut compatible = true;
    for i in 1..m {
        // ι(φ_i(a)) = ι(φ_{i+1}(x_i a)), compared blockwise.
        for k in 0..=i + 1 {
            let lhs = if k <= i {
                d.entry(k, i)?
            } else {
                Mat::zeros(d.x[0].ring(), d.n(k + 1), d.n(i))
            };
            let rhs = d.entry(k, i + 1)?.mul(&d.x[i])?;
            if lhs != rhs {
                compatible = false;
                failures.push(format!("ι is not compatible with x_{i} in block {}", k + 1));
            }
        }
    }
    Ok(SplittingReport {
        blocks_checked: m,
        generators,
        iota_compatible: compatible,
        identity,
        failures,
    })
}
