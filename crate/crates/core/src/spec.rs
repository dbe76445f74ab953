//! The universe sorts and the specification level of a gso-structure.

use alloc::collections::BTreeSet;
use alloc::vec;

use crate::error::{DecompositionCondition, Error, Result};
use crate::id::NodeId;
use crate::relgraph::{forbidden_triangles, has_pair, successors_in, Digraph, Edge, UGraph};
use crate::report::{AxiomId, Proposition, ReportBuilder, ValidationReport, DEFAULT_WITNESS_LIMIT};

/// Events, event occurrences and observations, plus the `occurrence`
/// relation between occurrences and events.
///
/// The sorts are not required to be disjoint here; that is what
/// [`Universe::validate`] reports on.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Universe {
    pub events: BTreeSet<NodeId>,
    pub occurrences: BTreeSet<NodeId>,
    pub observations: BTreeSet<NodeId>,
    /// `(occurrence, event)` pairs.
    pub occurrence_of: BTreeSet<(NodeId, NodeId)>,
    /// Domain elements that belong to no sort.
    pub individuals: BTreeSet<NodeId>,
}

impl Universe {
    /// Every element mentioned by the universe.
    pub fn domain(&self) -> BTreeSet<NodeId> {
        let mut d: BTreeSet<NodeId> = self
            .events
            .iter()
            .chain(&self.occurrences)
            .chain(&self.observations)
            .chain(&self.individuals)
            .cloned()
            .collect();
        for (o, e) in &self.occurrence_of {
            d.insert(o.clone());
            d.insert(e.clone());
        }
        d
    }

    /// Axioms e1–e5.
    pub fn validate(&self) -> ValidationReport {
        let mut out = ReportBuilder::new(DEFAULT_WITNESS_LIMIT);
        check_universe(self, &self.domain(), &mut out);
        out.finish()
    }

    /// Occurrences of `e`, i.e. the fibre of the occurrence function.
    pub fn occurrences_of<'a>(&'a self, e: &'a NodeId) -> impl Iterator<Item = &'a NodeId> + 'a {
        self.occurrence_of
            .iter()
            .filter(move |(_, ev)| ev == e)
            .map(|(o, _)| o)
    }
}

pub(crate) fn check_universe(u: &Universe, domain: &BTreeSet<NodeId>, out: &mut ReportBuilder) {
    for x in domain {
        let (ev, eo, ob) = (
            u.events.contains(x),
            u.occurrences.contains(x),
            u.observations.contains(x),
        );
        if !(ev || eo || ob) {
            out.push(AxiomId::E1, vec![x.clone()]);
        }
        if (ev && eo) || (ev && ob) || (eo && ob) {
            out.push(AxiomId::E2, vec![x.clone()]);
        }
    }
    for (o, e) in &u.occurrence_of {
        if !(u.events.contains(e) && u.occurrences.contains(o)) {
            out.push(AxiomId::E3, vec![e.clone(), o.clone()]);
        }
    }
    for o in &u.occurrences {
        let mut events = u
            .occurrence_of
            .range((o.clone(), NodeId::from(""))..)
            .take_while(|(x, _)| x == o)
            .map(|(_, e)| e);
        let first = events.clone().find(|e| u.events.contains(*e));
        if first.is_none() {
            out.push(AxiomId::E4, vec![o.clone()]);
        }
        if let Some(e1) = events.next() {
            for e2 in events {
                out.push(AxiomId::E5, vec![o.clone(), e1.clone(), e2.clone()]);
            }
        }
    }
}

/// The three relations of a gso-structure over a set of event occurrences.
///
/// Relations are stored as raw pair sets so that malformed input (self-loops,
/// pairs outside the occurrence set) can be represented and reported by
/// [`GsoSpec::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GsoSpec {
    pub occurrences: BTreeSet<NodeId>,
    pub earlier_than: BTreeSet<Edge>,
    pub not_later_than: BTreeSet<Edge>,
    pub nonsimultaneous: BTreeSet<Edge>,
}

impl GsoSpec {
    /// The all-concurrent spec: every relation empty.
    pub fn empty<V>(occurrences: V) -> Self
    where
        V: IntoIterator,
        V::Item: Into<NodeId>,
    {
        GsoSpec {
            occurrences: occurrences.into_iter().map(Into::into).collect(),
            ..GsoSpec::default()
        }
    }

    pub fn from_graphs(et: &Digraph, nlt: &Digraph, ns: &UGraph) -> Result<Self> {
        if et.vertices() != nlt.vertices() || et.vertices() != ns.vertices() {
            return Err(Error::VertexMismatch);
        }
        Ok(GsoSpec {
            occurrences: et.vertices().clone(),
            earlier_than: et.edges().clone(),
            not_later_than: nlt.edges().clone(),
            nonsimultaneous: ns.as_digraph().edges().clone(),
        })
    }

    /// The spec of a strict partial order `order` (already transitive):
    /// `⊏ = ≺ = order`, `<>` its comparability graph.
    pub fn from_partial_order(order: &Digraph) -> Self {
        GsoSpec {
            occurrences: order.vertices().clone(),
            earlier_than: order.edges().clone(),
            not_later_than: order.edges().clone(),
            nonsimultaneous: order.comparability().as_digraph().edges().clone(),
        }
    }

    fn graph(&self, edges: &BTreeSet<Edge>) -> Result<Digraph> {
        Digraph::new(self.occurrences.iter().cloned(), edges.iter().cloned())
    }

    pub fn earlier_than_graph(&self) -> Result<Digraph> {
        self.graph(&self.earlier_than)
    }

    pub fn not_later_than_graph(&self) -> Result<Digraph> {
        self.graph(&self.not_later_than)
    }

    pub fn nonsimultaneous_graph(&self) -> Result<UGraph> {
        UGraph::new(self.graph(&self.nonsimultaneous)?)
    }

    /// Occurrences plus every endpoint of every relation.
    pub fn domain(&self) -> BTreeSet<NodeId> {
        let mut d = self.occurrences.clone();
        for (a, b) in self
            .earlier_than
            .iter()
            .chain(&self.not_later_than)
            .chain(&self.nonsimultaneous)
        {
            d.insert(a.clone());
            d.insert(b.clone());
        }
        d
    }

    /// Axioms gso1–gso9.
    pub fn validate(&self) -> ValidationReport {
        self.validate_with_limit(DEFAULT_WITNESS_LIMIT)
    }

    pub fn validate_with_limit(&self, limit: usize) -> ValidationReport {
        let mut out = ReportBuilder::new(limit);
        check_spec(self, &self.occurrences, &self.domain(), &mut out);
        out.finish()
    }

    /// Propositions 1–3, which every valid spec satisfies. Meant as a test
    /// utility: it does not check the precondition.
    pub fn check_derived_propositions(&self) -> ValidationReport {
        let mut out = ReportBuilder::new(DEFAULT_WITNESS_LIMIT);
        let et = &self.earlier_than;
        let nlt = &self.not_later_than;
        for (a, b) in et {
            if a == b {
                out.push(Proposition::EarlierIrreflexive, vec![a.clone()]);
            }
            for c in successors_in(et, b) {
                if !has_pair(et, a, c) {
                    out.push(Proposition::EarlierTransitive, vec![a.clone(), b.clone(), c.clone()]);
                }
            }
            if has_pair(nlt, b, a) {
                out.push(Proposition::EarlierExcludesReverse, vec![a.clone(), b.clone()]);
            }
        }
        for (a, b) in nlt {
            if has_pair(nlt, b, a) && has_pair(&self.nonsimultaneous, a, b) {
                out.push(Proposition::MutualNotLaterSimultaneous, vec![a.clone(), b.clone()]);
            }
        }
        out.finish()
    }

    /// Split a valid spec into its base order, the residual not-later-than
    /// edges and the nonsimultaneous slack.
    pub fn decompose(&self) -> Result<SpecDecomposition> {
        if let Some(v) = self.validate().violations.into_iter().next() {
            return Err(Error::InvalidSpec(v));
        }
        let base = self.earlier_than_graph()?;
        let nlt = self.not_later_than_graph()?;
        let ns = self.nonsimultaneous_graph()?;
        let residual = nlt.difference(&base)?;
        let slack = ns.difference(&base.comparability())?;
        Ok(SpecDecomposition {
            base,
            residual,
            slack,
        })
    }
}

/// `earlier_than = not_later_than ∩ nonsimultaneous`.
pub fn derive_earlier_than(nlt: &Digraph, ns: &UGraph) -> Result<Digraph> {
    nlt.intersection(ns.as_digraph())
}

pub(crate) fn check_spec(
    s: &GsoSpec,
    occurrence: &BTreeSet<NodeId>,
    domain: &BTreeSet<NodeId>,
    out: &mut ReportBuilder,
) {
    let (et, nlt, ns) = (&s.earlier_than, &s.not_later_than, &s.nonsimultaneous);
    for (axiom, rel) in [(AxiomId::Gso1, et), (AxiomId::Gso2, nlt), (AxiomId::Gso3, ns)] {
        for (a, b) in rel {
            if !occurrence.contains(a) || !occurrence.contains(b) {
                out.push(axiom, vec![a.clone(), b.clone()]);
            }
        }
    }
    for x in domain {
        if has_pair(ns, x, x) {
            out.push(AxiomId::Gso4, vec![x.clone()]);
        }
    }
    for (a, b) in ns {
        if !has_pair(ns, b, a) {
            out.push(AxiomId::Gso5, vec![a.clone(), b.clone()]);
        }
    }
    // gso6 can only fail on a pair that is in at least one of the relations.
    let pairs: BTreeSet<&Edge> = et.iter().chain(nlt).chain(ns).collect();
    for (a, b) in pairs {
        let lhs = has_pair(nlt, a, b) && has_pair(ns, a, b);
        if lhs != has_pair(et, a, b) {
            out.push(AxiomId::Gso6, vec![a.clone(), b.clone()]);
        }
    }
    for x in domain {
        if has_pair(nlt, x, x) {
            out.push(AxiomId::Gso7, vec![x.clone()]);
        }
    }
    for (a, b) in nlt {
        for c in successors_in(nlt, b) {
            if a != c && !has_pair(nlt, a, c) {
                out.push(AxiomId::Gso8, vec![a.clone(), b.clone(), c.clone()]);
            }
        }
    }
    // gso9: (⊏(a,b) ∧ ≺(b,c)) ∨ (≺(a,b) ∧ ⊏(b,c)) ⊃ ≺(a,c)
    let mut gso9 = BTreeSet::new();
    for (a, b) in nlt {
        for c in successors_in(et, b) {
            if !has_pair(et, a, c) {
                gso9.insert((a, b, c));
            }
        }
    }
    for (a, b) in et {
        for c in successors_in(nlt, b) {
            if !has_pair(et, a, c) {
                gso9.insert((a, b, c));
            }
        }
    }
    for (a, b, c) in gso9 {
        out.push(AxiomId::Gso9, vec![a.clone(), b.clone(), c.clone()]);
    }
}

/// A spec in graph form: `earlier_than = base`,
/// `not_later_than = base ∪ residual`,
/// `nonsimultaneous = comparability(base) ∪ slack`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecDecomposition {
    pub base: Digraph,
    pub residual: Digraph,
    pub slack: UGraph,
}

impl SpecDecomposition {
    pub fn occurrences(&self) -> &BTreeSet<NodeId> {
        self.base.vertices()
    }

    pub fn validate(&self) -> core::result::Result<(), DecompositionCondition> {
        use DecompositionCondition::*;
        if self.base.vertices() != self.residual.vertices()
            || self.base.vertices() != self.slack.vertices()
        {
            return Err(VertexMismatch);
        }
        if !self.base.is_acyclic() {
            return Err(BaseCyclic);
        }
        if !self.base.is_transitive() {
            return Err(BaseNotTransitive);
        }
        let nlt = self.base.union(&self.residual).expect("same vertices");
        if !nlt.is_transitive() {
            return Err(NotLaterThanNotTransitive);
        }
        let ic_base = self.base.incomparability();
        if let Some((u, v)) = self.residual.edges().iter().find(|(u, v)| !ic_base.contains(u, v)) {
            return Err(ResidualComparable(u.clone(), v.clone()));
        }
        if let Some((u, v, w)) = forbidden_triangles(&self.base, &self.residual).into_iter().next() {
            return Err(ForbiddenTriangle(u, v, w));
        }
        let ic_nlt = nlt.incomparability();
        let slack = self.slack.as_digraph();
        if let Some((u, v)) = slack.edges().iter().find(|(u, v)| !slack.contains(v, u)) {
            return Err(SlackNotSymmetric(u.clone(), v.clone()));
        }
        if let Some((u, v)) = self.slack.pairs().find(|(u, v)| !ic_nlt.contains(u, v)) {
            return Err(SlackComparable(u.clone(), v.clone()));
        }
        Ok(())
    }

    /// Reassemble the spec.
    pub fn compose(&self) -> Result<GsoSpec> {
        self.validate().map_err(Error::InvalidDecomposition)?;
        let nlt = self.base.union(&self.residual)?;
        let ns = self.base.comparability().union(&self.slack)?;
        GsoSpec::from_graphs(&self.base, &nlt, &ns)
    }
}
