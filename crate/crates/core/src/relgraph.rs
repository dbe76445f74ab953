//! Finite directed graphs without self-loops, and the relation algebra the
//! rest of the crate is written in.
//!
//! Undirected graphs are directed graphs with a symmetric edge set
//! ([`UGraph`]). Vertices and edges are kept in ordered sets, so iteration
//! order (and everything serialized from it) is deterministic.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::id::NodeId;

pub type Edge = (NodeId, NodeId);

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Digraph {
    vertices: BTreeSet<NodeId>,
    edges: BTreeSet<Edge>,
}

impl Digraph {
    /// Build a graph, rejecting self-loops and edges with unknown endpoints.
    pub fn new<V, E, A, B>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<NodeId>,
        E: IntoIterator<Item = (A, B)>,
        A: Into<NodeId>,
        B: Into<NodeId>,
    {
        let vertices: BTreeSet<NodeId> = vertices.into_iter().map(Into::into).collect();
        let mut g = Digraph {
            vertices,
            edges: BTreeSet::new(),
        };
        for (a, b) in edges {
            g.insert(a.into(), b.into())?;
        }
        Ok(g)
    }

    pub fn empty<V>(vertices: V) -> Self
    where
        V: IntoIterator,
        V::Item: Into<NodeId>,
    {
        Digraph {
            vertices: vertices.into_iter().map(Into::into).collect(),
            edges: BTreeSet::new(),
        }
    }

    /// All ordered pairs of distinct vertices.
    pub fn complete<V>(vertices: V) -> Self
    where
        V: IntoIterator,
        V::Item: Into<NodeId>,
    {
        let mut g = Digraph::empty(vertices);
        g.edges = g.all_pairs().collect();
        g
    }

    pub(crate) fn insert(&mut self, a: NodeId, b: NodeId) -> Result<bool> {
        if a == b {
            return Err(Error::SelfLoop(a));
        }
        for v in [&a, &b] {
            if !self.vertices.contains(v) {
                return Err(Error::UnknownVertex(v.clone()));
            }
        }
        Ok(self.edges.insert((a, b)))
    }

    pub fn vertices(&self) -> &BTreeSet<NodeId> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, a: &NodeId, b: &NodeId) -> bool {
        has_pair(&self.edges, a, b)
    }

    pub fn has_edge(&self, a: &str, b: &str) -> bool {
        self.contains(&NodeId::from(a), &NodeId::from(b))
    }

    pub fn successors<'a>(&'a self, v: &'a NodeId) -> impl Iterator<Item = &'a NodeId> + 'a {
        successors_in(&self.edges, v)
    }

    fn all_pairs(&self) -> impl Iterator<Item = Edge> + '_ {
        self.vertices.iter().flat_map(move |a| {
            self.vertices
                .iter()
                .filter(move |b| *b != a)
                .map(move |b| (a.clone(), b.clone()))
        })
    }

    fn adjacency(&self) -> BTreeMap<&NodeId, Vec<&NodeId>> {
        let mut adj: BTreeMap<&NodeId, Vec<&NodeId>> =
            self.vertices.iter().map(|v| (v, Vec::new())).collect();
        for (a, b) in &self.edges {
            adj.entry(a).or_default().push(b);
        }
        adj
    }

    /// Vertices reachable from each vertex by a nonempty path. A vertex on a
    /// cycle reaches itself.
    fn reach(&self) -> BTreeMap<&NodeId, BTreeSet<&NodeId>> {
        let adj = self.adjacency();
        let mut out = BTreeMap::new();
        for v in &self.vertices {
            let mut seen: BTreeSet<&NodeId> = BTreeSet::new();
            let mut stack: Vec<&NodeId> = adj[v].clone();
            while let Some(w) = stack.pop() {
                if seen.insert(w) {
                    stack.extend(adj[w].iter().copied());
                }
            }
            out.insert(v, seen);
        }
        out
    }

    /// Edge `(v,w)` iff there is a nonempty path from `v` to `w`; self-loops
    /// produced by cycles are dropped.
    pub fn transitive_closure(&self) -> Digraph {
        let edges = self
            .reach()
            .into_iter()
            .flat_map(|(v, ws)| {
                ws.into_iter()
                    .filter(move |w| *w != v)
                    .map(move |w| (v.clone(), w.clone()))
            })
            .collect();
        Digraph {
            vertices: self.vertices.clone(),
            edges,
        }
    }

    pub fn is_acyclic(&self) -> bool {
        self.find_cycle_vertex().is_none()
    }

    fn find_cycle_vertex(&self) -> Option<NodeId> {
        self.reach()
            .into_iter()
            .find(|(v, ws)| ws.contains(v))
            .map(|(v, _)| v.clone())
    }

    /// `E = E⁺` minus self-loops. A bare 2-cycle counts as transitive.
    pub fn is_transitive(&self) -> bool {
        self.transitive_closure().edges == self.edges
    }

    /// The unique minimal graph with the same closure. Defined for DAGs only.
    pub fn transitive_reduction(&self) -> Result<Digraph> {
        if let Some(v) = self.find_cycle_vertex() {
            return Err(Error::CyclicInput(v));
        }
        let closure = self.transitive_closure();
        let edges = closure
            .edges
            .iter()
            .filter(|(u, v)| !closure.successors(u).any(|w| closure.contains(w, v)))
            .cloned()
            .collect();
        Ok(Digraph {
            vertices: self.vertices.clone(),
            edges,
        })
    }

    /// Pairs related in at least one direction, as a symmetric graph.
    pub fn comparability(&self) -> UGraph {
        self.sym()
    }

    /// Pairs of distinct vertices related in neither direction.
    pub fn incomparability(&self) -> UGraph {
        let edges = self
            .all_pairs()
            .filter(|(a, b)| !self.contains(a, b) && !self.contains(b, a))
            .collect();
        UGraph(Digraph {
            vertices: self.vertices.clone(),
            edges,
        })
    }

    pub fn complement(&self) -> Digraph {
        let edges = self
            .all_pairs()
            .filter(|(a, b)| !self.contains(a, b))
            .collect();
        Digraph {
            vertices: self.vertices.clone(),
            edges,
        }
    }

    /// `g ∪ g⁻¹`.
    pub fn sym(&self) -> UGraph {
        let edges = self
            .edges
            .iter()
            .flat_map(|(a, b)| [(a.clone(), b.clone()), (b.clone(), a.clone())])
            .collect();
        UGraph(Digraph {
            vertices: self.vertices.clone(),
            edges,
        })
    }

    pub fn inverse(&self) -> Digraph {
        Digraph {
            vertices: self.vertices.clone(),
            edges: self.edges.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
        }
    }

    fn same_vertices(&self, other: &Digraph) -> Result<()> {
        if self.vertices == other.vertices {
            Ok(())
        } else {
            Err(Error::VertexMismatch)
        }
    }

    pub fn union(&self, other: &Digraph) -> Result<Digraph> {
        self.same_vertices(other)?;
        Ok(Digraph {
            vertices: self.vertices.clone(),
            edges: self.edges.union(&other.edges).cloned().collect(),
        })
    }

    pub fn intersection(&self, other: &Digraph) -> Result<Digraph> {
        self.same_vertices(other)?;
        Ok(Digraph {
            vertices: self.vertices.clone(),
            edges: self.edges.intersection(&other.edges).cloned().collect(),
        })
    }

    /// `G − H`: edges of `self` not in `other`.
    pub fn difference(&self, other: &Digraph) -> Result<Digraph> {
        self.same_vertices(other)?;
        Ok(Digraph {
            vertices: self.vertices.clone(),
            edges: self.edges.difference(&other.edges).cloned().collect(),
        })
    }

    pub fn is_subgraph_of(&self, other: &Digraph) -> bool {
        self.vertices == other.vertices && self.edges.is_subset(&other.edges)
    }

    pub fn is_symmetric(&self) -> bool {
        self.edges.iter().all(|(a, b)| self.contains(b, a))
    }
}

/// Targets of the edges leaving `v` in a raw edge set.
pub(crate) fn successors_in<'a>(
    edges: &'a BTreeSet<Edge>,
    v: &'a NodeId,
) -> impl Iterator<Item = &'a NodeId> + 'a {
    edges
        .range((v.clone(), NodeId::from(""))..)
        .take_while(move |(x, _)| x == v)
        .map(|(_, y)| y)
}

pub(crate) fn has_pair(edges: &BTreeSet<Edge>, a: &NodeId, b: &NodeId) -> bool {
    edges
        .range((a.clone(), b.clone())..)
        .next()
        .is_some_and(|(x, y)| x == a && y == b)
}

/// An undirected graph: a [`Digraph`] whose edge set is symmetric.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct UGraph(Digraph);

impl UGraph {
    pub fn new(g: Digraph) -> Result<Self> {
        if let Some((a, b)) = g.edges.iter().find(|(a, b)| !g.contains(b, a)) {
            return Err(Error::NotSymmetric(a.clone(), b.clone()));
        }
        Ok(UGraph(g))
    }

    /// Build from unordered pairs; each pair yields both directions.
    pub fn from_pairs<V, E, A, B>(vertices: V, pairs: E) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<NodeId>,
        E: IntoIterator<Item = (A, B)>,
        A: Into<NodeId>,
        B: Into<NodeId>,
    {
        let mut g = Digraph::empty(vertices);
        for (a, b) in pairs {
            let (a, b) = (a.into(), b.into());
            g.insert(a.clone(), b.clone())?;
            g.insert(b, a)?;
        }
        Ok(UGraph(g))
    }

    pub fn empty<V>(vertices: V) -> Self
    where
        V: IntoIterator,
        V::Item: Into<NodeId>,
    {
        UGraph(Digraph::empty(vertices))
    }

    pub fn complete<V>(vertices: V) -> Self
    where
        V: IntoIterator,
        V::Item: Into<NodeId>,
    {
        UGraph(Digraph::complete(vertices))
    }

    pub fn as_digraph(&self) -> &Digraph {
        &self.0
    }

    pub fn into_digraph(self) -> Digraph {
        self.0
    }

    pub fn vertices(&self) -> &BTreeSet<NodeId> {
        &self.0.vertices
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`.
    pub fn pairs(&self) -> impl Iterator<Item = (&NodeId, &NodeId)> + '_ {
        self.0.edges.iter().filter(|(a, b)| a < b).map(|(a, b)| (a, b))
    }

    pub fn pair_count(&self) -> usize {
        self.0.edges.len() / 2
    }

    pub fn contains(&self, a: &NodeId, b: &NodeId) -> bool {
        self.0.contains(a, b)
    }

    pub fn has_edge(&self, a: &str, b: &str) -> bool {
        self.0.has_edge(a, b)
    }

    pub fn complement(&self) -> UGraph {
        UGraph(self.0.complement())
    }

    pub fn union(&self, other: &UGraph) -> Result<UGraph> {
        self.0.union(&other.0).map(UGraph)
    }

    pub fn intersection(&self, other: &UGraph) -> Result<UGraph> {
        self.0.intersection(&other.0).map(UGraph)
    }

    pub fn difference(&self, other: &UGraph) -> Result<UGraph> {
        self.0.difference(&other.0).map(UGraph)
    }
}

impl AsRef<Digraph> for UGraph {
    fn as_ref(&self) -> &Digraph {
        &self.0
    }
}

/// Triangles `(u,v,w)` of the two shapes forbidden in a not-later-than graph:
/// `solid(u,v), dashed(v,w), dashed(u,w)` or `dashed(u,v), solid(v,w),
/// dashed(u,w)`. Each triple is listed once, in lexicographic order.
pub fn forbidden_triangles(solid: &Digraph, dashed: &Digraph) -> Vec<(NodeId, NodeId, NodeId)> {
    let mut found = BTreeSet::new();
    for (u, v) in solid.edges() {
        for w in dashed.successors(v) {
            if dashed.contains(u, w) {
                found.insert((u.clone(), v.clone(), w.clone()));
            }
        }
    }
    for (u, v) in dashed.edges() {
        for w in solid.successors(v) {
            if dashed.contains(u, w) {
                found.insert((u.clone(), v.clone(), w.clone()));
            }
        }
    }
    found.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness;

    fn chain() -> Digraph {
        Digraph::new(["a", "b", "c"], [("a", "b"), ("b", "c")]).unwrap()
    }

    #[test]
    fn construction_rejects_self_loops_and_foreign_endpoints() {
        assert_eq!(
            Digraph::new(["a"], [("a", "a")]),
            Err(Error::SelfLoop("a".into()))
        );
        assert_eq!(
            Digraph::new(["a"], [("a", "b")]),
            Err(Error::UnknownVertex("b".into()))
        );
    }

    #[test]
    fn closure_of_chain() {
        let tc = chain().transitive_closure();
        let want = Digraph::new(["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")]).unwrap();
        assert_eq!(tc, want);
        assert_eq!(tc.transitive_closure(), tc);
    }

    #[test]
    fn closure_of_empty_graph() {
        let g = Digraph::empty(["a", "b"]);
        assert_eq!(g.transitive_closure(), g);
    }

    #[test]
    fn closure_drops_cycle_self_loops() {
        let g = Digraph::new(["a", "b"], [("a", "b"), ("b", "a")]).unwrap();
        assert_eq!(g.transitive_closure(), g);
        assert!(g.is_transitive());
        assert!(!g.is_acyclic());
        assert!(matches!(g.transitive_reduction(), Err(Error::CyclicInput(_))));
    }

    #[test]
    fn non_transitive_chain() {
        assert!(!chain().is_transitive());
        assert!(chain().is_acyclic());
    }

    #[test]
    fn example1_closure_and_reduction() {
        let solid = witness::example1_reduction();
        assert_eq!(solid.edge_count(), 7);
        let g1 = solid.transitive_closure();
        assert_eq!(g1, witness::example1_g1());
        assert_eq!(g1.edge_count(), 17);
        assert!(g1.is_transitive() && g1.is_acyclic());
        assert_eq!(g1.transitive_reduction().unwrap(), solid);
    }

    #[test]
    fn reduction_of_chain_closure_and_diamond() {
        assert_eq!(chain().transitive_closure().transitive_reduction().unwrap(), chain());
        let diamond = Digraph::new(
            ["a", "b", "c", "d"],
            [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d"), ("a", "d")],
        )
        .unwrap();
        let red = diamond.transitive_reduction().unwrap();
        assert_eq!(red.edge_count(), 4);
        assert!(!red.has_edge("a", "d"));
    }

    #[test]
    fn comparability_and_incomparability_of_g1() {
        let g1 = witness::example1_g1();
        assert_eq!(g1.comparability().pair_count(), 17);
        let ic = g1.incomparability();
        let pairs: Vec<_> = ic.pairs().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        assert_eq!(pairs, [("o2", "o3"), ("o5", "o6"), ("o5", "o7"), ("o6", "o7")]);
    }

    #[test]
    fn comparability_small_cases() {
        assert_eq!(Digraph::empty(["a", "b"]).comparability().pair_count(), 0);
        let g = Digraph::new(["a", "b"], [("a", "b")]).unwrap();
        let co = g.comparability();
        assert!(co.has_edge("a", "b") && co.has_edge("b", "a"));
        assert_eq!(g.sym(), co);
    }

    #[test]
    fn incomparability_extremes() {
        let tournament = Digraph::new(["a", "b", "c"], [("a", "b"), ("c", "b"), ("a", "c")]).unwrap();
        assert_eq!(tournament.incomparability().pair_count(), 0);
        assert_eq!(Digraph::empty(["a", "b", "c", "d"]).incomparability().pair_count(), 6);
    }

    #[test]
    fn complement_cases() {
        let ns = witness::example1_g3();
        let co = ns.complement();
        let pairs: Vec<_> = co.pairs().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        assert_eq!(pairs, [("o5", "o6"), ("o5", "o7"), ("o6", "o7")]);
        let g = chain();
        assert_eq!(g.complement().complement(), g);
        let e = Digraph::empty(["a", "b"]).complement();
        assert!(e.has_edge("a", "b") && e.has_edge("b", "a"));
    }

    #[test]
    fn set_algebra() {
        let dashed = witness::example1_g2().difference(&witness::example1_g1()).unwrap();
        let want: BTreeSet<Edge> = [("o5", "o6"), ("o5", "o7"), ("o6", "o7"), ("o7", "o6")]
            .into_iter()
            .map(|(a, b)| (a.into(), b.into()))
            .collect();
        assert_eq!(dashed.edges(), &want);
        let g = chain();
        assert_eq!(g.intersection(&g.complement()).unwrap().edge_count(), 0);
        assert_eq!(
            g.union(&Digraph::empty(["a"])),
            Err(Error::VertexMismatch)
        );
    }

    #[test]
    fn forbidden_triangle_patterns() {
        let v = ["u", "v", "w"];
        let solid = Digraph::new(v, [("u", "v")]).unwrap();
        let dashed = Digraph::new(v, [("v", "w"), ("u", "w")]).unwrap();
        assert_eq!(
            forbidden_triangles(&solid, &dashed),
            [("u".into(), "v".into(), "w".into())]
        );
        let solid = Digraph::new(v, [("v", "w")]).unwrap();
        let dashed = Digraph::new(v, [("u", "v"), ("u", "w")]).unwrap();
        assert_eq!(
            forbidden_triangles(&solid, &dashed),
            [("u".into(), "v".into(), "w".into())]
        );
        let g1 = witness::example1_g1();
        let dashed = witness::example1_g2().difference(&g1).unwrap();
        assert!(forbidden_triangles(&g1, &dashed).is_empty());
    }

    #[test]
    fn ugraph_requires_symmetry() {
        let g = Digraph::new(["a", "b"], [("a", "b")]).unwrap();
        assert!(matches!(UGraph::new(g), Err(Error::NotSymmetric(_, _))));
    }
}
