//! Graphviz output. Node order is the canonical order of the input, so the
//! text is stable across runs.

use std::fmt::Write as _;

use crate::activity::{DetOut, PrunedOutputNfa};
use crate::machine::Transformation;
use crate::orbit::{OsgGraph, OsgVertex};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\\\""))
}

/// Parallel edges between the same pair of nodes share one arrow.
fn push_edges(out: &mut String, edges: &[(usize, usize, String)]) {
    let mut merged: Vec<(usize, usize, Vec<&str>)> = Vec::new();
    for (from, to, label) in edges {
        match merged.iter_mut().find(|(f, t, _)| f == from && t == to) {
            Some((_, _, labels)) => labels.push(label),
            None => merged.push((*from, *to, vec![label])),
        }
    }
    for (from, to, labels) in merged {
        let _ = writeln!(
            out,
            "  n{from} -> n{to} [label={}];",
            quote(&labels.join("\\n"))
        );
    }
}

fn header(name: &str) -> String {
    format!("digraph {} {{\n  rankdir=LR;\n", quote(name))
}

/// The Mealy machine of `t`, edges labeled `x|y`. `names` is indexed by
/// canonical state.
pub fn mealy_dot(t: &Transformation, names: &[String]) -> String {
    let mut out = header("mealy");
    for (q, name) in names.iter().enumerate() {
        let _ = writeln!(out, "  n{q} [shape=circle, label={}];", quote(name));
    }
    let k = t.alphabet_size();
    let edges: Vec<_> = (0..t.state_count())
        .flat_map(|q| (1..=k).map(move |x| (q, t.target(q, x), format!("{x}|{}", t.output(q, x)))))
        .collect();
    push_edges(&mut out, &edges);
    out.push_str("}\n");
    out
}

pub fn nfa_dot(nfa: &PrunedOutputNfa, names: &[String]) -> String {
    let mut out = header("out");
    for &q in nfa.states() {
        let _ = writeln!(out, "  n{q} [shape=circle, label={}];", quote(&names[q]));
    }
    let edges: Vec<_> = nfa
        .transitions()
        .iter()
        .map(|t| (t.from, t.to, t.label.to_string()))
        .collect();
    push_edges(&mut out, &edges);
    out.push_str("}\n");
    out
}

/// Label of a subset: its members' names, sorted, in braces.
pub fn subset_label(subset: &[usize], names: &[String]) -> String {
    let mut members: Vec<&str> = subset.iter().map(|&q| names[q].as_str()).collect();
    members.sort_unstable();
    format!("{{{}}}", members.join(","))
}

pub fn detout_dot(det: &DetOut, names: &[String]) -> String {
    let mut out = header("detout");
    for (i, subset) in det.subsets().iter().enumerate() {
        let _ = writeln!(
            out,
            "  n{i} [shape=box, label={}];",
            quote(&subset_label(subset, names))
        );
    }
    let edges: Vec<_> = det
        .edges()
        .map(|(from, y, to)| (from, to, y.to_string()))
        .collect();
    push_edges(&mut out, &edges);
    out.push_str("}\n");
    out
}

/// The orbit signalizer graph; vertices are labeled `(name_s, name_t)` and
/// edges `x (m,ℓ)`.
pub fn osg_dot(g: &OsgGraph, mut name: impl FnMut(&Transformation) -> String) -> String {
    let mut out = header("osg");
    for (i, OsgVertex { s, t }) in g.vertices().iter().enumerate() {
        let label = format!("({}, {})", name(s), name(t));
        let _ = writeln!(out, "  n{i} [shape=box, label={}];", quote(&label));
    }
    let edges: Vec<_> = g
        .edges()
        .iter()
        .map(|e| {
            (
                e.from,
                e.to,
                format!("{} ({},{})", e.letter, e.index, e.period),
            )
        })
        .collect();
    push_edges(&mut out, &edges);
    out.push_str("}\n");
    out
}
