use std::fmt::Write;

use super::{AmbiguousBreakpointGraph, Resolution};

/// Graphviz rendering.
///
/// Node attribute `kind` is one of `inner`, `s_telomere`, `d_telomere` or
/// `isolated`. Square edges carry `square=<index>` and `matching=E|Etilde`
/// and are orange (solid style for E, dashed for Etilde); fixed edges carry
/// `kind=fixed` and are blue. With a resolution, unselected square edges get
/// `selected=false` and are drawn dotted grey.
pub fn to_dot(abg: &AmbiguousBreakpointGraph, tau: Option<&Resolution>) -> String {
    let mut out = String::from("digraph abg {\n  edge [dir=none];\n  node [shape=circle];\n");
    let label = |x: u32| match abg.labels() {
        Some(l) => l[x as usize].to_string(),
        None => x.to_string(),
    };
    for x in 0..abg.vertex_count() as u32 {
        let (kind, shape) = if abg.square_of(x).is_none() {
            ("s_telomere", "box")
        } else if abg.d_partner(x).is_none() {
            ("d_telomere", "diamond")
        } else {
            ("inner", "circle")
        };
        writeln!(
            out,
            "  v{x} [label=\"{}\", kind={kind}, shape={shape}];",
            label(x)
        )
        .unwrap();
    }
    for i in 0..abg.isolated_count() {
        let name = abg
            .isolated_labels()
            .get(i)
            .map_or_else(|| format!("i{i}"), ToString::to_string);
        writeln!(
            out,
            "  i{i} [label=\"{name}\", kind=isolated, shape=point];"
        )
        .unwrap();
    }
    for (i, sq) in abg.squares().iter().enumerate() {
        for bit in [false, true] {
            let (matching, style) = if bit {
                ("Etilde", "dashed")
            } else {
                ("E", "solid")
            };
            for (a, b) in sq.matching(bit) {
                write!(out, "  v{a} -> v{b} [square={i}, matching={matching}").unwrap();
                match tau.map(|t| t.bits()[i] == bit) {
                    Some(false) => out.push_str(", selected=false, color=grey, style=dotted];\n"),
                    Some(true) => writeln!(
                        out,
                        ", selected=true, color=orange, style={style}, penwidth=2];"
                    )
                    .unwrap(),
                    None => writeln!(out, ", color=orange, style={style}];").unwrap(),
                }
            }
        }
    }
    for &(a, b) in abg.d_edges() {
        writeln!(out, "  v{a} -> v{b} [kind=fixed, color=blue];").unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::super::tests::small_abg;
    use super::*;

    #[test]
    fn empty_graph() {
        let abg = AmbiguousBreakpointGraph::new(0, vec![], vec![], 0).unwrap();
        assert_eq!(
            to_dot(&abg, None),
            "digraph abg {\n  edge [dir=none];\n  node [shape=circle];\n}\n"
        );
    }

    #[test]
    fn small_graph_counts() {
        let abg = small_abg();
        let dot = to_dot(&abg, None);
        assert_eq!(dot.matches(" [label=").count(), 12);
        assert_eq!(dot.matches("square=").count(), 8);
        assert_eq!(dot.matches("kind=fixed").count(), 4);
        let dot = to_dot(&abg, Some(&Resolution(vec![false, true])));
        assert_eq!(dot.matches("selected=true").count(), 4);
        // every edge endpoint is a declared node
        for line in dot.lines().filter(|l| l.contains("->")) {
            let t: Vec<&str> = line.split_whitespace().collect();
            for v in [t[0], t[2]] {
                assert!(dot.contains(&format!("  {v} [label=")));
            }
        }
    }
}
