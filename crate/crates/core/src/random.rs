//! Random generators for graphs, specs, models and PSL-core fragments.
//! Used by the property and acceptance tests.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::extensions::reconstruct;
use crate::id::NodeId;
use crate::model::{build_model, ClassificationData, GsoModel};
use crate::observations::RankingStructure;
use crate::psl::PslCoreModel;
use crate::relgraph::{Digraph, UGraph};
use crate::spec::{GsoSpec, SpecDecomposition};

/// `prefix0 .. prefix{n-1}`.
pub fn ids(prefix: &str, n: usize) -> Vec<NodeId> {
    (0..n).map(|i| NodeId::new(format!("{prefix}{i}"))).collect()
}

/// A DAG on `v0..` where each pair is joined with probability `p`, edges
/// oriented along a random topological order.
pub fn random_dag<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> Digraph {
    let mut order = ids("v", n);
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((order[i].clone(), order[j].clone()));
            }
        }
    }
    Digraph::new(order.iter().cloned(), edges).expect("acyclic by construction")
}

pub fn random_ranking<R: Rng + ?Sized>(rng: &mut R, carrier: &BTreeSet<NodeId>) -> RankingStructure {
    let k = rng.gen_range(1..=carrier.len().max(1));
    let mut blocks = alloc::vec![BTreeSet::new(); k];
    for x in carrier {
        blocks[rng.gen_range(0..k)].insert(x.clone());
    }
    blocks.retain(|b| !b.is_empty());
    blocks.shuffle(rng);
    RankingStructure::new(blocks).expect("disjoint nonempty blocks")
}

/// A valid spec on `o0..o{n-1}` built from its decomposition: a random
/// partial order as `earlier_than`, then random residual edges (each kept
/// only if the decomposition stays valid after closing), then random slack.
pub fn random_spec<R: Rng + ?Sized>(rng: &mut R, n: usize) -> GsoSpec {
    let occ = ids("o", n);
    let density = rng.gen_range(0.0..0.6);
    let mut base_edges = Vec::new();
    let mut order = occ.clone();
    order.shuffle(rng);
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                base_edges.push((order[i].clone(), order[j].clone()));
            }
        }
    }
    let base = Digraph::new(occ.iter().cloned(), base_edges)
        .expect("acyclic")
        .transitive_closure();
    let mut residual = Digraph::empty(occ.iter().cloned());
    let mut candidates: Vec<_> = base.incomparability().as_digraph().edges().iter().cloned().collect();
    candidates.shuffle(rng);
    let keep = rng.gen_range(0.0..1.0);
    for (a, b) in candidates {
        if !rng.gen_bool(keep) {
            continue;
        }
        let mut nlt = base.union(&residual).expect("same carrier");
        if nlt.contains(&a, &b) {
            continue;
        }
        nlt = Digraph::new(
            occ.iter().cloned(),
            nlt.edges().iter().cloned().chain([(a, b)]),
        )
        .expect("no self-loops");
        let closed = nlt.transitive_closure();
        if closed.edges().iter().any(|(x, y)| x == y) {
            continue;
        }
        let trial = SpecDecomposition {
            residual: closed.difference(&base).expect("same carrier"),
            base: base.clone(),
            slack: UGraph::empty(occ.iter().cloned()),
        };
        if trial.validate().is_ok() {
            residual = trial.residual;
        }
    }
    let nlt = base.union(&residual).expect("same carrier");
    let free: Vec<_> = nlt.incomparability().pairs().map(|(a, b)| (a.clone(), b.clone())).collect();
    let slack_density = rng.gen_range(0.0..1.0);
    let slack_pairs: Vec<_> = free.into_iter().filter(|_| rng.gen_bool(slack_density)).collect();
    let slack = UGraph::from_pairs(occ.iter().cloned(), slack_pairs).expect("carrier pairs");
    SpecDecomposition {
        base,
        residual,
        slack,
    }
    .compose()
    .expect("valid by construction")
}

/// A valid spec obtained by reconstructing from `k` random rankings.
pub fn random_spec_from_family<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> GsoSpec {
    let carrier: BTreeSet<NodeId> = ids("o", n).into_iter().collect();
    let family: Vec<_> = (0..k.max(1))
        .map(|_| random_ranking(rng, &carrier).to_order())
        .collect();
    reconstruct(&carrier, &family).expect("nonempty family").into_spec()
}

/// Classification data with `n` occurrences and `k ≥ 1` observations. The
/// spec is whatever the random ranking family determines.
pub fn random_classification<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> ClassificationData {
    let carrier: BTreeSet<NodeId> = ids("o", n).into_iter().collect();
    let ranking_family: BTreeMap<NodeId, RankingStructure> = ids("ob", k.max(1))
        .into_iter()
        .map(|o| (o, random_ranking(rng, &carrier)))
        .collect();
    let family: Vec<_> = ranking_family.values().map(RankingStructure::to_order).collect();
    let spec = reconstruct(&carrier, &family).expect("nonempty family").into_spec();
    let n_events = rng.gen_range(1..=n.max(1));
    let events = ids("e", n_events);
    let mut event_partition: BTreeMap<NodeId, BTreeSet<NodeId>> = BTreeMap::new();
    for o in &carrier {
        let e = events.choose(rng).expect("at least one event");
        event_partition.entry(e.clone()).or_default().insert(o.clone());
    }
    ClassificationData {
        event_partition,
        decomposition: spec.decompose().expect("reconstructed specs are valid"),
        ranking_family,
    }
}

pub fn random_model<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> GsoModel {
    build_model(&random_classification(rng, n, k)).expect("valid data")
}

/// A random model with one random fact added or removed. Usually, but not
/// always, no longer a model of the full theory.
pub fn perturbed_model<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> GsoModel {
    let mut m = random_model(rng, n, k);
    let occ: Vec<NodeId> = m.universe.occurrences.iter().cloned().collect();
    let obs: Vec<NodeId> = m.universe.observations.iter().cloned().collect();
    let a = occ.choose(rng).cloned().unwrap_or_else(|| "o0".into());
    let b = occ.choose(rng).cloned().unwrap_or_else(|| "o0".into());
    let o = obs.choose(rng).cloned().unwrap_or_else(|| "ob0".into());
    fn toggle<T: Ord>(set: &mut BTreeSet<T>, x: T) {
        if !set.remove(&x) {
            set.insert(x);
        }
    }
    match rng.gen_range(0..8) {
        0 => toggle(&mut m.spec.earlier_than, (a, b)),
        1 => toggle(&mut m.spec.not_later_than, (a, b)),
        2 => toggle(&mut m.spec.nonsimultaneous, (a, b)),
        3 => toggle(&mut m.observed_before, (a, b, o)),
        4 => toggle(&mut m.observed_simult, (a, b, o)),
        5 => {
            m.universe.observations.remove(&o);
            m.observed_before.retain(|t| t.2 != o);
            m.observed_simult.retain(|t| t.2 != o);
        }
        6 => toggle(&mut m.universe.occurrence_of, (a, "e0".into())),
        _ => {
            m.universe.events.insert("unused".into());
        }
    }
    m
}

/// A well-formed PSL-core fragment with up to `activities` activities,
/// `observers` observer objects and `timepoints` timepoints, plus noise:
/// objects that miss an activity or observe one twice, extra occurrences,
/// and objects that do not exist throughout.
pub fn random_psl<R: Rng + ?Sized>(
    rng: &mut R,
    activities: usize,
    observers: usize,
    timepoints: usize,
) -> PslCoreModel {
    let mut p = PslCoreModel::default();
    let acts = ids("a", rng.gen_range(1..=activities.max(1)));
    let times = ids("t", rng.gen_range(1..=timepoints.max(1)));
    p.activities = acts.iter().cloned().collect();
    p.timepoints = times.iter().cloned().collect();
    let mut chain = times.clone();
    chain.shuffle(rng);
    for i in 0..chain.len() {
        for j in i + 1..chain.len() {
            p.before.insert((chain[i].clone(), chain[j].clone()));
        }
    }
    let mut next_occ = 0;
    let mut occurrence = |p: &mut PslCoreModel, a: &NodeId| {
        let o = NodeId::new(format!("ao{next_occ}"));
        next_occ += 1;
        p.activity_occurrences.insert(o.clone());
        p.occurrence_of.insert((o.clone(), a.clone()));
        o
    };
    let n_observers = rng.gen_range(0..=observers);
    let noise = rng.gen_range(0..=2);
    for (i, x) in ids("x", n_observers + noise).into_iter().enumerate() {
        p.objects.insert(x.clone());
        let defect = if i < n_observers { None } else { Some(rng.gen_range(0..3)) };
        for t in &times {
            if defect != Some(0) || (t != &times[0] && rng.gen_bool(0.5)) {
                p.exists_at.insert((x.clone(), t.clone()));
            }
        }
        for (k, a) in acts.iter().enumerate() {
            if defect == Some(1) && k == 0 {
                continue;
            }
            let o = occurrence(&mut p, a);
            p.participates_in.insert((x.clone(), o, times.choose(rng).unwrap().clone()));
            if defect == Some(2) && k == 0 {
                let o = occurrence(&mut p, a);
                p.participates_in.insert((x.clone(), o, times.choose(rng).unwrap().clone()));
            }
            // A second participation in a shared occurrence disqualifies
            // that occurrence but not the observer.
            if rng.gen_bool(0.2) {
                let shared = occurrence(&mut p, a);
                for t in times.choose_multiple(rng, 2.min(times.len())) {
                    p.participates_in.insert((x.clone(), shared.clone(), t.clone()));
                }
                if times.len() < 2 {
                    p.participates_in.remove(&(x.clone(), shared, times[0].clone()));
                }
            }
        }
    }
    if rng.gen_bool(0.3) {
        let a = acts.choose(rng).unwrap().clone();
        occurrence(&mut p, &a);
    }
    p
}
