//! Murray–von Neumann classes of idempotents and the map into `W(R)`.

use std::collections::HashMap;

use serde::Serialize;

use super::TruncatedPoM;
use crate::dot;
use crate::error::{Error, Result};
use crate::matrix::{mvn_equivalent, Idem, Mat};
use crate::subequiv::Sub1Options;
use crate::verdict::Verdict;

#[derive(Clone, Debug, Serialize)]
pub struct VMonoid {
    pub ring: String,
    pub k_max: usize,
    /// Square idempotent representatives.
    pub classes: Vec<Mat>,
    /// `ι`: the `W` class of each idempotent class.
    pub iota: Vec<usize>,
    pub add: Vec<Vec<Option<usize>>>,
    /// Algebraic order `x <= y` iff `x + z = y` for a certified `z`.
    pub leq: Vec<Vec<bool>>,
    pub zero: usize,
    pub iota_injective: bool,
    /// `ι` preserves the order.
    pub iota_monotone: bool,
    /// `ι` reflects the order as well.
    pub iota_order_embedding: bool,
    /// Every `W` class contains an idempotent.
    pub iota_surjective: bool,
}

impl VMonoid {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn to_dot(&self) -> String {
        let labels: Vec<String> = self.classes.iter().map(|m| m.to_string()).collect();
        dot::hasse(&format!("V({})", self.ring), &labels, &super::covers(&self.leq), &[])
    }
}

/// Smallest `s` with every nonzero entry inside the top-left `s×s` block.
fn square_trim(m: &Mat) -> Mat {
    let t = m.trim();
    let s = t.rows().max(t.cols());
    m.block(0, s, 0, s)
}

/// Enumerates idempotents of the padded universe of `w` and classifies
/// them by `∼`, bucketed by their `W` class.
pub fn build_v(w: &TruncatedPoM, opts: &Sub1Options) -> Result<VMonoid> {
    let ring = w.ring_handle().clone();
    let k = w.k_max;
    let count = Mat::count(&ring, k, k).expect("universe fits");
    let mut buckets: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut classes: Vec<Mat> = Vec::new();
    let mut iota: Vec<usize> = Vec::new();
    let mut v_of_code: HashMap<u64, usize> = HashMap::new();
    for code in 0..count {
        let m = Mat::decode(&ring, k, k, code);
        if !m.is_idempotent() {
            continue;
        }
        let wc = w.class_of_code(code);
        let e = Idem::new(square_trim(&m))?;
        let mut hit = None;
        for &vc in buckets.get(&wc).map(|v| v.as_slice()).unwrap_or(&[]) {
            let rep = Idem::new(classes[vc].clone())?;
            match mvn_equivalent(&e, &rep, opts)?.verdict {
                Verdict::True => {
                    hit = Some(vc);
                    break;
                }
                Verdict::False => {}
                Verdict::Unknown => {
                    return Err(Error::Budget(format!("deciding {} ∼ {}", e.base(), rep.base())));
                }
            }
        }
        let vc = match hit {
            Some(vc) => {
                if e.base().sort_key() < classes[vc].sort_key() {
                    classes[vc] = e.base().clone();
                }
                vc
            }
            None => {
                classes.push(e.base().clone());
                iota.push(wc);
                buckets.entry(wc).or_default().push(classes.len() - 1);
                classes.len() - 1
            }
        };
        v_of_code.insert(code, vc);
    }

    // Canonical numbering by representative.
    let n = classes.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| classes[i].sort_key());
    let mut renumber = vec![0usize; n];
    for (new, &old) in order.iter().enumerate() {
        renumber[old] = new;
    }
    let classes: Vec<Mat> = order.iter().map(|&i| classes[i].clone()).collect();
    let iota: Vec<usize> = order.iter().map(|&i| iota[i]).collect();
    let lookup = |m: &Mat| -> Option<usize> {
        let m = square_trim(m);
        if m.rows() > k {
            return None;
        }
        v_of_code.get(&m.pad_to(k, k).encode()).map(|&v| renumber[v])
    };

    let mut add = vec![vec![None; n]; n];
    for i in 0..n {
        for j in 0..n {
            // The zero class is the only one whose representative has zero rows.
            add[i][j] = if classes[i].is_zero() {
                Some(j)
            } else if classes[j].is_zero() {
                Some(i)
            } else {
                lookup(&classes[i].diag_sum(&classes[j])?)
            };
        }
    }
    // Orthogonal splittings m = p + (m − p) inside the universe certify
    // [p] + [m − p] = [m] even when the diagonal sum does not fit.
    let idems: Vec<(u64, Mat)> = v_of_code.keys().map(|&c| (c, Mat::decode(&ring, k, k, c))).collect();
    for (mc, m) in &idems {
        for (pc, p) in &idems {
            if m.mul(p)? != *p || p.mul(m)? != *p {
                continue;
            }
            let q = m.sub(p)?;
            let (i, j, s) = (renumber[v_of_code[pc]], renumber[v_of_code[&q.encode()]], renumber[v_of_code[mc]]);
            match add[i][j] {
                Some(t) if t != s => {
                    return Err(Error::Invariant(format!("{} + {} has two classes", classes[i], classes[j])))
                }
                _ => add[i][j] = Some(s),
            }
        }
    }
    let zero = lookup(&Mat::zeros(&ring, 1, 1)).expect("zero idempotent");
    let mut leq = vec![vec![false; n]; n];
    for i in 0..n {
        leq[i][i] = true;
        for l in 0..n {
            if let Some(j) = add[i][l] {
                leq[i][j] = true;
            }
        }
    }

    let mut seen = vec![false; w.len()];
    for &c in &iota {
        seen[c] = true;
    }
    let iota_injective = {
        let mut s = iota.clone();
        s.sort_unstable();
        s.dedup();
        s.len() == n
    };
    let iota_monotone = (0..n).all(|i| (0..n).all(|j| !leq[i][j] || w.leq(iota[i], iota[j])));
    let iota_order_embedding =
        iota_monotone && (0..n).all(|i| (0..n).all(|j| leq[i][j] == w.leq(iota[i], iota[j])));
    Ok(VMonoid {
        ring: w.ring.clone(),
        k_max: k,
        classes,
        iota,
        add,
        leq,
        zero,
        iota_injective,
        iota_monotone,
        iota_order_embedding,
        iota_surjective: seen.iter().all(|&s| s),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::FiniteRing;
    use crate::wr::{build_w, WOptions};

    #[test]
    fn gf2_by_rank() {
        let r = FiniteRing::gf(2).unwrap();
        let w = build_w(&r, 3, &WOptions::default()).unwrap();
        let v = build_v(&w, &Sub1Options::default()).unwrap();
        assert_eq!(v.len(), 4);
        assert!(v.iota_injective && v.iota_surjective && v.iota_order_embedding);
    }

    #[test]
    fn zmod4_free_ranks() {
        let r = FiniteRing::zmod(4).unwrap();
        let w = build_w(&r, 2, &WOptions::default()).unwrap();
        let v = build_v(&w, &Sub1Options::default()).unwrap();
        assert_eq!(v.len(), 3);
        assert!(v.iota_injective && v.iota_monotone);
        assert!(!v.iota_surjective);
    }
}
