//! The worked example structures: the seven-occurrence gso-structure, its
//! four stratified-order extensions, and the two-observation model that
//! witnesses consistency of T_gso.

use alloc::collections::BTreeSet;

use crate::id::NodeId;
use crate::model::GsoModel;
use crate::observations::RankingStructure;
use crate::relgraph::{Digraph, UGraph};
use crate::spec::{GsoSpec, Universe};

const OCCURRENCES: [&str; 7] = ["o1", "o2", "o3", "o4", "o5", "o6", "o7"];

/// Transitive reduction of the example's `earlier_than`.
pub fn example1_reduction() -> Digraph {
    Digraph::new(
        OCCURRENCES,
        [
            ("o1", "o2"),
            ("o1", "o3"),
            ("o2", "o4"),
            ("o3", "o4"),
            ("o4", "o5"),
            ("o4", "o6"),
            ("o4", "o7"),
        ],
    )
    .expect("static graph")
}

/// `earlier_than`: 17 edges.
pub fn example1_g1() -> Digraph {
    example1_reduction().transitive_closure()
}

/// `not_later_than`: `G₁` plus the four edges among `o5, o6, o7`.
pub fn example1_g2() -> Digraph {
    let dashed = Digraph::new(
        OCCURRENCES,
        [("o5", "o6"), ("o5", "o7"), ("o6", "o7"), ("o7", "o6")],
    )
    .expect("static graph");
    example1_g1().union(&dashed).expect("same vertices")
}

/// `nonsimultaneous`: the comparability graph of `G₁` plus `{o2,o3}`.
pub fn example1_g3() -> UGraph {
    let extra = UGraph::from_pairs(OCCURRENCES, [("o2", "o3")]).expect("static graph");
    example1_g1().comparability().union(&extra).expect("same vertices")
}

pub fn example1_spec() -> GsoSpec {
    GsoSpec::from_graphs(&example1_g1(), &example1_g2(), &example1_g3()).expect("same vertices")
}

fn steps(text: &str) -> RankingStructure {
    text.parse().expect("static step sequence")
}

pub fn observation_a() -> RankingStructure {
    steps("{o1}{o2}{o3}{o4}{o5,o6,o7}")
}

pub fn observation_b() -> RankingStructure {
    steps("{o1}{o3}{o2}{o4}{o5,o6,o7}")
}

pub fn observation_c() -> RankingStructure {
    steps("{o1}{o2}{o3}{o4}{o5}{o6,o7}")
}

pub fn observation_d() -> RankingStructure {
    steps("{o1}{o3}{o2}{o4}{o5}{o6,o7}")
}

/// Events `e1..e7`, occurrences `o1..o7` with `oᵢ ↦ eᵢ`, the example spec,
/// and observations `ob_a`, `ob_d` given by extensions (a) and (d).
pub fn witness_model() -> GsoModel {
    let events: BTreeSet<NodeId> = (1..=7).map(|i| NodeId::new(alloc::format!("e{i}"))).collect();
    let occurrence_of = (1..=7)
        .map(|i| (NodeId::new(alloc::format!("o{i}")), NodeId::new(alloc::format!("e{i}"))))
        .collect();
    let universe = Universe {
        events,
        occurrences: OCCURRENCES.into_iter().map(NodeId::from).collect(),
        observations: BTreeSet::new(),
        occurrence_of,
        individuals: BTreeSet::new(),
    };
    let mut m = GsoModel::new(universe, example1_spec());
    m.add_observation("ob_a".into(), &observation_a());
    m.add_observation("ob_d".into(), &observation_d());
    m
}
