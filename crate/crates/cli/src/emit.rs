//! JSON and DOT serialization of run reports.

use std::fmt::Write;

use crate::report::{GraphReport, RunReport};

pub fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// One `digraph` per graph. Each edge is written once together with its
/// reverse; self-reverse edges get `dir=both`.
pub fn dot_graph(out: &mut String, prefix: &str, g: &GraphReport) {
    writeln!(out, "digraph {} {{", quote(&format!("{prefix}_{}", g.name))).unwrap();
    writeln!(out, "  graph [betti={}];", quote(&g.betti_number)).unwrap();
    for v in &g.vertices {
        writeln!(out, "  v{} [label={}, length={}];", v.id, quote(&format!("v{} ({})", v.id, v.length)), v.length)
            .unwrap();
    }
    for e in &g.edges {
        let (id, rev): (usize, usize) = (e.id.parse().unwrap(), e.reverse.parse().unwrap());
        if id > rev {
            continue;
        }
        let mut label = e.label.join(" ");
        if id != rev {
            let back = &g.edges[rev];
            label = format!("{label} | {}", back.label.join(" "));
        }
        let mut attrs = vec![format!("len={}", e.length), format!("label={}", quote(&label))];
        if id == rev {
            attrs.push("dir=both".into());
        }
        attrs.push(format!("kind={}", quote(&e.kind)));
        writeln!(out, "  v{} -> v{} [{}];", e.source, e.target, attrs.join(", ")).unwrap();
    }
    out.push_str("}\n");
}

pub fn dot(report: &RunReport) -> String {
    let mut out = String::new();
    let Some(graphs) = &report.graphs else { return out };
    let prefix = format!("D{}_N{}_p{}", report.inputs.d, report.inputs.n, report.inputs.p);
    for g in [&graphs.mumford, &graphs.quotient, &graphs.plus_cover] {
        dot_graph(&mut out, &prefix, g);
    }
    out
}
