//! Matrix lists and sequence literals.
//!
//! A matrix list is any run of matrix literals, optionally separated by
//! commas, semicolons or whitespace: `[[1]] [[1,0],[0,0]]`.
//!
//! A sequence literal is `stages | witnesses | tail`. The witness section
//! lists `y_1, y_2, ...` (`y_i` links stage `i` back to stage `i-1`) or is
//! `auto` to search for them. The tail is `open` (the default), a matrix
//! `y` with `x_N = y·x_N·x_N`, or `auto`.

use super::{SeqElem, Tail};
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::ring::Ring;
use crate::subequiv::Sub1Options;

pub fn parse_matrix_list(ring: &Ring, text: &str) -> Result<Vec<Mat>> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = None;
    for (i, c) in text.char_indices() {
        match c {
            '[' => {
                if depth == 0 {
                    start = Some(i);
                }
                depth += 1;
            }
            ']' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| Error::Parse(format!("unbalanced ']' in {text:?}")))?;
                if depth == 0 {
                    let s = start.take().expect("opened");
                    out.push(Mat::parse(ring, &text[s..=i])?);
                }
            }
            c if depth == 0 && !(c.is_whitespace() || c == ',' || c == ';') => {
                return Err(Error::Parse(format!("unexpected {c:?} between matrices in {text:?}")));
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced '[' in {text:?}")));
    }
    Ok(out)
}

pub fn parse_sequence(ring: &Ring, text: &str, opts: &Sub1Options) -> Result<SeqElem> {
    let parts: Vec<&str> = text.split('|').map(str::trim).collect();
    if parts.len() > 3 {
        return Err(Error::Parse("a sequence has at most three sections".into()));
    }
    let stages = parse_matrix_list(ring, parts[0])?;
    if stages.is_empty() {
        return Err(Error::Parse("a sequence needs at least one stage".into()));
    }
    let witnesses = parts.get(1).copied().unwrap_or("");
    let tail = parts.get(2).copied().unwrap_or("open");
    let auto_w = witnesses.eq_ignore_ascii_case("auto");
    let auto_t = tail.eq_ignore_ascii_case("auto");
    if auto_w || auto_t {
        if !auto_w && !(stages.len() == 1 && witnesses.is_empty()) {
            return Err(Error::Parse("an automatic tail needs automatic witnesses".into()));
        }
        if !auto_t && !tail.eq_ignore_ascii_case("open") {
            return Err(Error::Parse("automatic witnesses take an `open` or `auto` tail".into()));
        }
        return SeqElem::with_found_witnesses(stages, auto_t, opts);
    }
    let ws = parse_matrix_list(ring, witnesses)?;
    let tail = if tail.eq_ignore_ascii_case("open") {
        Tail::Open
    } else {
        let ys = parse_matrix_list(ring, tail)?;
        match ys.as_slice() {
            [y] => Tail::Stabilized(y.clone()),
            _ => return Err(Error::Parse(format!("expected one tail matrix, found {}", ys.len()))),
        }
    };
    SeqElem::new(stages, ws, tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::FiniteRing;

    #[test]
    fn lists_and_sequences() {
        let f2 = FiniteRing::gf(2).unwrap();
        let l = parse_matrix_list(&f2, "[[1]]; [[1,0],[0,0]]  [[0]]").unwrap();
        assert_eq!(l.len(), 3);
        assert!(parse_matrix_list(&f2, "[[1]] x").is_err());
        assert!(parse_matrix_list(&f2, "[[1]").is_err());
        let s = parse_sequence(&f2, "[[1]] [[1,0],[0,0]] | [[1,0],[0,0]] | [[1,0],[0,0]]", &Sub1Options::default()).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.is_stabilized());
        let a = parse_sequence(&f2, "[[1]] [[1]] | auto | auto", &Sub1Options::default()).unwrap();
        assert!(a.is_stabilized());
        let o = parse_sequence(&f2, "[[1]]", &Sub1Options::default()).unwrap();
        assert!(!o.is_stabilized());
    }
}
