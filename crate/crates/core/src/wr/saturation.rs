//! Stability of truncated `W(R)` tables under enlarging the truncation.
//!
//! This is evidence only: agreement between two consecutive levels says
//! nothing about larger ones.

use serde::Serialize;

use super::{build_w, TruncatedPoM, WOptions};
use crate::error::Result;
use crate::ring::Ring;

#[derive(Clone, Debug, Serialize)]
pub struct SaturationStep {
    pub from_k: usize,
    pub to_k: usize,
    pub classes_before: usize,
    pub classes_after: usize,
    /// Distinct classes at `from_k` that merged at `to_k`.
    pub merged: Vec<(usize, usize)>,
    /// Pairs whose comparability changed.
    pub changed: Vec<(usize, usize)>,
    pub stable_entries: usize,
    /// Sums truncated at `from_k` that become certified at `to_k`.
    pub newly_certified_sums: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SaturationReport {
    pub ring: String,
    pub k_max: usize,
    pub steps: Vec<SaturationStep>,
    pub all_stable: bool,
    pub note: &'static str,
}

fn step(a: &TruncatedPoM, b: &TruncatedPoM) -> SaturationStep {
    let map: Vec<usize> = a.classes.iter().map(|m| b.class_of(m).expect("smaller matrices fit")).collect();
    let n = a.len();
    let mut merged = Vec::new();
    let mut changed = Vec::new();
    let mut stable = 0;
    let mut newly = 0;
    for i in 0..n {
        for j in 0..n {
            if i < j && map[i] == map[j] {
                merged.push((i, j));
            }
            if a.leq(i, j) == b.leq(map[i], map[j]) {
                stable += 1;
            } else {
                changed.push((i, j));
            }
            if a.add(i, j).is_none() && b.add(map[i], map[j]).is_some() {
                newly += 1;
            }
        }
    }
    SaturationStep {
        from_k: a.k_max,
        to_k: b.k_max,
        classes_before: n,
        classes_after: b.len(),
        merged,
        changed,
        stable_entries: stable,
        newly_certified_sums: newly,
    }
}

/// Compares levels `k` and `k+1` for every `k < k_max`.
pub fn saturation_report(ring: &Ring, k_max: usize, opts: &WOptions) -> Result<SaturationReport> {
    let levels: Vec<TruncatedPoM> = (1..=k_max).map(|k| build_w(ring, k, opts)).collect::<Result<_>>()?;
    let steps: Vec<SaturationStep> = levels.windows(2).map(|p| step(&p[0], &p[1])).collect();
    let all_stable = steps.iter().all(|s| s.merged.is_empty() && s.changed.is_empty());
    Ok(SaturationReport {
        ring: ring.spec().to_string(),
        k_max,
        steps,
        all_stable,
        note: "stability between consecutive truncations is evidence, not a proof of saturation",
    })
}
