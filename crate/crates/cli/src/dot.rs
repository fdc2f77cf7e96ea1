//! Hasse diagrams as Graphviz digraphs, edges pointing upwards.

use std::fmt::Write as _;

use umtl_core::audit::set_names;
use umtl_core::{ElemSet, FiniteMTLAlgebra};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn digraph(name: &str, labels: &[String], covers: &[(usize, usize)]) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(name)).unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  node [shape=plaintext];").unwrap();
    for (i, l) in labels.iter().enumerate() {
        writeln!(out, "  n{i} [label={}];", quote(l)).unwrap();
    }
    for (x, y) in covers {
        writeln!(out, "  n{x} -> n{y};").unwrap();
    }
    out.push_str("}\n");
    out
}

/// The element order.
pub fn order_dot(name: &str, a: &FiniteMTLAlgebra) -> String {
    let labels: Vec<String> = a.names().to_vec();
    digraph(name, &labels, &a.covers())
}

/// Covering pairs of a family of sets under inclusion.
pub fn inclusion_covers(sets: &[ElemSet]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, &x) in sets.iter().enumerate() {
        for (j, &y) in sets.iter().enumerate() {
            if x.is_proper_subset(y) && !sets.iter().any(|&z| x.is_proper_subset(z) && z.is_proper_subset(y)) {
                out.push((i, j));
            }
        }
    }
    out
}

/// A lattice of subsets, such as the U-filters.
pub fn sets_dot(name: &str, a: &FiniteMTLAlgebra, sets: &[ElemSet]) -> String {
    let labels: Vec<String> = sets.iter().map(|&s| set_names(a, s)).collect();
    digraph(name, &labels, &inclusion_covers(sets))
}
