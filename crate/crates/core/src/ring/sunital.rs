//! Weak s-unitality: every `a ∈ M_n(R)` factors as `a = b·a·c`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::Ring;
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::subequiv::{precsim1_with, Sub1Options};
use crate::verdict::{Certificate, Verdict};

#[derive(Clone, Debug)]
pub struct SUnitalOptions {
    /// Largest `|R|^(n²)` checked exhaustively.
    pub exhaustive_limit: u64,
    /// Sample size used above the limit; `None` makes that an error.
    pub samples: Option<usize>,
    pub seed: u64,
    pub search: Sub1Options,
}

impl Default for SUnitalOptions {
    fn default() -> Self {
        SUnitalOptions {
            exhaustive_limit: 1 << 16,
            samples: Some(2000),
            seed: 0,
            search: Sub1Options::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SUnitalLevel {
    pub n: usize,
    pub verdict: Verdict,
    pub certificate: Certificate,
    pub checked: u64,
    pub counterexample: Option<Mat>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SUnitalReport {
    pub ring: String,
    pub levels: Vec<SUnitalLevel>,
}

impl SUnitalReport {
    pub fn holds(&self) -> bool {
        self.levels.iter().all(|l| l.verdict == Verdict::True)
    }
}

pub fn check_weakly_s_unital(ring: &Ring, n_max: usize, opts: &SUnitalOptions) -> Result<SUnitalReport> {
    if n_max == 0 {
        return Err(Error::Precondition("n_max must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut levels = Vec::new();
    for n in 1..=n_max {
        if ring.is_unital() {
            levels.push(SUnitalLevel {
                n,
                verdict: Verdict::True,
                certificate: Certificate::Exact,
                checked: 0,
                counterexample: None,
            });
            continue;
        }
        let total = Mat::count(ring, n, n).filter(|&c| c <= opts.exhaustive_limit);
        let (candidates, certificate): (Box<dyn Iterator<Item = Mat>>, Certificate) = match (total, opts.samples) {
            (Some(c), _) => (Box::new((0..c).map(|code| Mat::decode(ring, n, n, code))), Certificate::Exact),
            (None, Some(k)) => {
                let s = ring.size() as u16;
                let sample: Vec<Mat> = (0..k)
                    .map(|_| {
                        let data = (0..n * n).map(|_| super::Elem(rng.gen_range(0..s))).collect();
                        Mat::from_raw(ring, n, n, data)
                    })
                    .collect();
                (Box::new(sample.into_iter()), Certificate::Sampled)
            }
            (None, None) => {
                return Err(Error::Budget(format!(
                    "M_{n}({}) exceeds the exhaustive limit and sampling is off",
                    ring.spec()
                )))
            }
        };
        let mut level = SUnitalLevel {
            n,
            verdict: Verdict::True,
            certificate,
            checked: 0,
            counterexample: None,
        };
        for a in candidates {
            level.checked += 1;
            match precsim1_with(&a, &a, &opts.search)?.verdict {
                Verdict::True => {}
                Verdict::False => {
                    level.verdict = Verdict::False;
                    level.certificate = Certificate::Exact;
                    level.counterexample = Some(a);
                    break;
                }
                Verdict::Unknown => level.verdict = Verdict::Unknown,
            }
        }
        levels.push(level);
    }
    Ok(SUnitalReport {
        ring: ring.spec().to_string(),
        levels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{FiniteRing, RingSpec};

    #[test]
    fn unital_rings_pass() {
        let r = FiniteRing::zmod(4).unwrap();
        assert!(check_weakly_s_unital(&r, 2, &SUnitalOptions::default()).unwrap().holds());
    }

    #[test]
    fn ideal_two_z4_fails() {
        let j = RingSpec::parse("ideal(zmod(4),[2])").unwrap().build().unwrap();
        let rep = check_weakly_s_unital(&j, 1, &SUnitalOptions::default()).unwrap();
        assert_eq!(rep.levels[0].verdict, Verdict::False);
        let a = rep.levels[0].counterexample.clone().unwrap();
        assert_eq!(j.label(a.get(0, 0)), "2");
    }

    #[test]
    fn ideal_of_product_is_unital_inside() {
        // F2 x 0 inside F2 x F3 has its own identity, so every a = e·a·e.
        let amb = FiniteRing::product(&RingSpec::Gf(2), &RingSpec::Gf(3)).unwrap();
        let e = amb.elements().find(|&x| amb.label(x) == "(1,0)").unwrap();
        let j = crate::ring::ideal_closure(&amb, &[e]).unwrap().to_ring().unwrap();
        assert!(check_weakly_s_unital(&j, 2, &SUnitalOptions::default()).unwrap().holds());
    }
}
