//! Graphviz output for the relations of a spec.

use std::fmt::Write;

use gsokit_core::{Digraph, GsoSpec, NodeId, Result, UGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum GraphKind {
    /// earlier_than
    Et,
    /// not_later_than: earlier_than solid, the rest dashed
    Nlt,
    /// nonsimultaneous, undirected
    Ns,
    /// pairs that may be observed simultaneously, undirected
    NsComplement,
}

impl GraphKind {
    fn name(self) -> &'static str {
        match self {
            GraphKind::Et => "earlier_than",
            GraphKind::Nlt => "not_later_than",
            GraphKind::Ns => "nonsimultaneous",
            GraphKind::NsComplement => "simultaneity",
        }
    }
}

/// `reduce` draws the transitive reduction of the `earlier_than` part.
pub fn export(spec: &GsoSpec, kind: GraphKind, reduce: bool) -> Result<String> {
    let et = spec.earlier_than_graph()?;
    let solid = if reduce { et.transitive_reduction()? } else { et.clone() };
    match kind {
        GraphKind::Et => Ok(directed(kind.name(), &solid, None)),
        GraphKind::Nlt => {
            let dashed = spec.not_later_than_graph()?.difference(&et)?;
            Ok(directed(kind.name(), &solid, Some(&dashed)))
        }
        GraphKind::Ns => Ok(undirected(kind.name(), &spec.nonsimultaneous_graph()?)),
        GraphKind::NsComplement => Ok(undirected(
            kind.name(),
            &spec.nonsimultaneous_graph()?.complement(),
        )),
    }
}

fn header(out: &mut String, keyword: &str, name: &str, vertices: &std::collections::BTreeSet<NodeId>) {
    writeln!(out, "{keyword} {name} {{").unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    for v in vertices {
        writeln!(out, "  \"{v}\";").unwrap();
    }
}

fn directed(name: &str, solid: &Digraph, dashed: Option<&Digraph>) -> String {
    let mut out = String::new();
    header(&mut out, "digraph", name, solid.vertices());
    for (a, b) in solid.edges() {
        writeln!(out, "  \"{a}\" -> \"{b}\";").unwrap();
    }
    for (a, b) in dashed.into_iter().flat_map(Digraph::edges) {
        writeln!(out, "  \"{a}\" -> \"{b}\" [style=dashed];").unwrap();
    }
    out.push_str("}\n");
    out
}

fn undirected(name: &str, g: &UGraph) -> String {
    let mut out = String::new();
    header(&mut out, "graph", name, g.vertices());
    for (a, b) in g.pairs() {
        writeln!(out, "  \"{a}\" -- \"{b}\";").unwrap();
    }
    out.push_str("}\n");
    out
}
