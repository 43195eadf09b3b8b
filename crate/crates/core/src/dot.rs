//! Graphviz output for finite posets.

use std::fmt::Write;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// A Hasse diagram drawn bottom-up. `incomparable` pairs are joined by
/// undirected dashed edges.
pub fn hasse(name: &str, labels: &[String], covers: &[(usize, usize)], incomparable: &[(usize, usize)]) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(name)).unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  node [shape=box, fontname=\"monospace\"];").unwrap();
    for (i, l) in labels.iter().enumerate() {
        writeln!(out, "  n{i} [label={}];", quote(l)).unwrap();
    }
    for &(a, b) in covers {
        writeln!(out, "  n{a} -> n{b};").unwrap();
    }
    for &(a, b) in incomparable {
        writeln!(out, "  n{a} -> n{b} [dir=none, style=dashed, color=gray, constraint=false];").unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escapes_and_lists_edges() {
        let d = hasse("P", &["a\"b".into(), "c".into()], &[(0, 1)], &[]);
        assert!(d.contains("n0 [label=\"a\\\"b\"]"));
        assert!(d.contains("n0 -> n1;"));
        assert!(d.ends_with("}\n"));
    }
}
