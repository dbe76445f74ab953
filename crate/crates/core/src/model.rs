//! Finite models of the full theory: universe, spec and observations.
//! Exhaustive axiom checking, projection of observations, and the
//! classification / construction round trip.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{ClassCondition, Error, Result};
use crate::id::NodeId;
use crate::observations::{graph_gi, RankingStructure, StratOrder};
use crate::relgraph::{has_pair, Digraph, UGraph};
use crate::report::{AxiomId, ReportBuilder, ValidationReport, DEFAULT_WITNESS_LIMIT};
use crate::spec::{check_spec, check_universe, GsoSpec, SpecDecomposition, Universe};

/// `(occurrence, occurrence, observation)`.
pub type Triple = (NodeId, NodeId, NodeId);

/// Largest sort [`check_axioms`] evaluates.
pub const CHECK_SIZE_LIMIT: usize = 50;
/// Largest sort [`isomorphic`] searches.
pub const ISOMORPHISM_SIZE_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GsoModel {
    pub universe: Universe,
    pub spec: GsoSpec,
    pub observed_before: BTreeSet<Triple>,
    pub observed_simult: BTreeSet<Triple>,
}

impl GsoModel {
    /// A model without observations.
    pub fn new(universe: Universe, spec: GsoSpec) -> Self {
        GsoModel {
            universe,
            spec,
            ..GsoModel::default()
        }
    }

    /// Declare `obs` as an observation whose run is the step sequence `r`.
    pub fn add_observation(&mut self, obs: NodeId, r: &RankingStructure) {
        for block_pair in r.blocks().iter().enumerate() {
            let (i, block) = block_pair;
            for later in &r.blocks()[i + 1..] {
                for a in block {
                    for b in later {
                        self.observed_before.insert((a.clone(), b.clone(), obs.clone()));
                    }
                }
            }
            for a in block {
                for b in block {
                    if a != b {
                        self.observed_simult.insert((a.clone(), b.clone(), obs.clone()));
                    }
                }
            }
        }
        self.universe.observations.insert(obs);
    }

    /// Every element the model mentions.
    pub fn domain(&self) -> BTreeSet<NodeId> {
        let mut d = self.universe.domain();
        d.extend(self.spec.domain());
        for (a, b, o) in self.observed_before.iter().chain(&self.observed_simult) {
            d.insert(a.clone());
            d.insert(b.clone());
            d.insert(o.clone());
        }
        d
    }

    pub fn observation_ids(&self) -> &BTreeSet<NodeId> {
        &self.universe.observations
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Theory {
    /// e1–e5.
    Univ,
    /// gso1–gso9.
    Spec,
    /// e1–o10.
    Gso,
    /// gso1–o10 with ex1–ex2 in place of the event axioms.
    GsoMinus,
}

impl Theory {
    pub fn includes(self, axiom: AxiomId) -> bool {
        use AxiomId::*;
        let universe = matches!(axiom, E1 | E2 | E3 | E4 | E5);
        let minus = matches!(axiom, Ex1 | Ex2);
        let spec = matches!(
            axiom,
            Gso1 | Gso2 | Gso3 | Gso4 | Gso5 | Gso6 | Gso7 | Gso8 | Gso9
        );
        match self {
            Theory::Univ => universe,
            Theory::Spec => spec,
            Theory::Gso => !minus,
            Theory::GsoMinus => !universe,
        }
    }

    pub fn axioms(self) -> Vec<AxiomId> {
        AxiomId::ALL.into_iter().filter(|a| self.includes(*a)).collect()
    }
}

fn check_size(m: &GsoModel, limit: usize) -> Result<()> {
    for (sort, size) in [
        ("events", m.universe.events.len()),
        ("occurrences", m.universe.occurrences.len()),
        ("observations", m.universe.observations.len()),
        ("individuals", m.universe.individuals.len()),
    ] {
        if size > limit {
            return Err(Error::SizeLimit { sort, size, limit });
        }
    }
    Ok(())
}

pub fn check_axioms(m: &GsoModel, theory: Theory) -> Result<ValidationReport> {
    check_axioms_with_limit(m, theory, DEFAULT_WITNESS_LIMIT)
}

/// Evaluate every axiom of `theory` on `m` by exhaustive substitution.
/// Reports each failing instance, up to `witness_limit` lines in total.
pub fn check_axioms_with_limit(
    m: &GsoModel,
    theory: Theory,
    witness_limit: usize,
) -> Result<ValidationReport> {
    check_size(m, CHECK_SIZE_LIMIT)?;
    let domain = m.domain();
    let mut out = ReportBuilder::new(witness_limit);
    if theory.includes(AxiomId::E1) {
        check_universe(&m.universe, &domain, &mut out);
    }
    if theory.includes(AxiomId::Gso1) {
        check_spec(&m.spec, &m.universe.occurrences, &domain, &mut out);
    }
    if theory.includes(AxiomId::O1) {
        check_observations(m, &mut out);
    }
    if theory.includes(AxiomId::Ex1) {
        let u = &m.universe;
        for x in &domain {
            let (eo, ob) = (u.occurrences.contains(x), u.observations.contains(x));
            if !(eo || ob) {
                out.push(AxiomId::Ex1, vec![x.clone()]);
            }
            if eo && ob {
                out.push(AxiomId::Ex2, vec![x.clone()]);
            }
        }
    }
    Ok(out.finish())
}

/// Triples of one relation grouped by observation, as `(a, b)` pairs.
fn by_observation(rel: &BTreeSet<Triple>) -> BTreeMap<&NodeId, BTreeSet<(NodeId, NodeId)>> {
    let mut map: BTreeMap<&NodeId, BTreeSet<(NodeId, NodeId)>> = BTreeMap::new();
    for (a, b, o) in rel {
        map.entry(o).or_default().insert((a.clone(), b.clone()));
    }
    map
}

fn check_observations(m: &GsoModel, out: &mut ReportBuilder) {
    let u = &m.universe;
    let (eo, obs) = (&u.occurrences, &u.observations);
    for (axiom, rel) in [(AxiomId::O1, &m.observed_before), (AxiomId::O2, &m.observed_simult)] {
        for (a, b, o) in rel {
            if !eo.contains(a) || !eo.contains(b) || !obs.contains(o) {
                out.push(axiom, vec![a.clone(), b.clone(), o.clone()]);
            }
        }
    }
    let before = by_observation(&m.observed_before);
    let simult = by_observation(&m.observed_simult);
    let none = BTreeSet::new();
    for (o, rel) in &before {
        for (a, b) in rel {
            if a == b {
                out.push(AxiomId::O3, vec![a.clone(), (*o).clone()]);
            }
        }
    }
    for (o, rel) in &before {
        for (a, b) in rel {
            for (_, c) in rel.range((b.clone(), NodeId::from(""))..).take_while(|(x, _)| x == b) {
                if !rel.contains(&(a.clone(), c.clone())) {
                    out.push(AxiomId::O4, vec![a.clone(), b.clone(), c.clone(), (*o).clone()]);
                }
            }
        }
    }
    for o in obs {
        let b = before.get(o).unwrap_or(&none);
        let s = simult.get(o).unwrap_or(&none);
        for x in eo {
            for y in eo {
                let lhs = x != y
                    && !b.contains(&(x.clone(), y.clone()))
                    && !b.contains(&(y.clone(), x.clone()));
                if lhs != s.contains(&(x.clone(), y.clone())) {
                    out.push(AxiomId::O5, vec![x.clone(), y.clone(), o.clone()]);
                }
            }
        }
    }
    for (o, rel) in &simult {
        for (a, b) in rel {
            for (_, c) in rel.range((b.clone(), NodeId::from(""))..).take_while(|(x, _)| x == b) {
                if a != c && !rel.contains(&(a.clone(), c.clone())) {
                    out.push(AxiomId::O6, vec![a.clone(), b.clone(), c.clone(), (*o).clone()]);
                }
            }
        }
    }
    let spec = &m.spec;
    for (a, b) in &spec.nonsimultaneous {
        for o in obs {
            let rel = before.get(o).unwrap_or(&none);
            if !rel.contains(&(a.clone(), b.clone())) && !rel.contains(&(b.clone(), a.clone())) {
                out.push(AxiomId::O7, vec![a.clone(), b.clone(), o.clone()]);
            }
        }
    }
    for (a, b) in &spec.not_later_than {
        for o in obs {
            let pair = (a.clone(), b.clone());
            if !before.get(o).is_some_and(|r| r.contains(&pair))
                && !simult.get(o).is_some_and(|r| r.contains(&pair))
            {
                out.push(AxiomId::O8, vec![a.clone(), b.clone(), o.clone()]);
            }
        }
    }
    let seen_simult: BTreeSet<(&NodeId, &NodeId)> =
        m.observed_simult.iter().map(|(a, b, _)| (a, b)).collect();
    let seen_before: BTreeSet<(&NodeId, &NodeId)> =
        m.observed_before.iter().map(|(a, b, _)| (a, b)).collect();
    for a in eo {
        for b in eo {
            if a == b {
                continue;
            }
            if !has_pair(&spec.nonsimultaneous, a, b) && !seen_simult.contains(&(a, b)) {
                out.push(AxiomId::O9, vec![a.clone(), b.clone()]);
            }
            if !has_pair(&spec.not_later_than, a, b) && !seen_before.contains(&(b, a)) {
                out.push(AxiomId::O10, vec![a.clone(), b.clone()]);
            }
        }
    }
}

/// `⊲_obs = {(a,b) : observed_before(a,b,obs)}` on the occurrence set.
pub fn project_observation(m: &GsoModel, obs: &NodeId) -> Result<StratOrder> {
    if !m.universe.observations.contains(obs) {
        return Err(Error::UnknownObservation(obs.clone()));
    }
    let edges = m
        .observed_before
        .iter()
        .filter(|(_, _, o)| o == obs)
        .map(|(a, b, _)| (a.clone(), b.clone()));
    Ok(StratOrder::new(Digraph::new(
        m.universe.occurrences.iter().cloned(),
        edges,
    )?))
}

/// A model in combinatorial form: the event partition, the spec as graphs,
/// and one ranking structure per observation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationData {
    /// Event id to its (nonempty) set of occurrences.
    pub event_partition: BTreeMap<NodeId, BTreeSet<NodeId>>,
    pub decomposition: SpecDecomposition,
    pub ranking_family: BTreeMap<NodeId, RankingStructure>,
}

impl ClassificationData {
    pub fn occurrences(&self) -> &BTreeSet<NodeId> {
        self.decomposition.occurrences()
    }

    pub fn validate(&self) -> core::result::Result<(), ClassCondition> {
        use ClassCondition::*;
        let occurrences = self.occurrences();
        let mut covered = BTreeSet::new();
        for (e, block) in &self.event_partition {
            if block.is_empty() {
                return Err(EmptyEvent(e.clone()));
            }
            for o in block {
                if !occurrences.contains(o) {
                    return Err(ForeignOccurrence(o.clone()));
                }
                if !covered.insert(o) {
                    return Err(SharedOccurrence(o.clone()));
                }
            }
        }
        if let Some(o) = occurrences.iter().find(|o| !covered.contains(o)) {
            return Err(UncoveredOccurrence(o.clone()));
        }
        for e in self.event_partition.keys() {
            if occurrences.contains(e) || self.ranking_family.contains_key(e) {
                return Err(SortClash(e.clone()));
            }
        }
        if let Some(o) = self.ranking_family.keys().find(|o| occurrences.contains(*o)) {
            return Err(SortClash(o.clone()));
        }
        self.decomposition.validate().map_err(Decomposition)?;
        for (o, r) in &self.ranking_family {
            if r.check_carrier(occurrences).is_err() {
                return Err(RankingCarrier(o.clone()));
            }
        }
        let d = &self.decomposition;
        let nlt = d.base.union(&d.residual).expect("validated");
        let ns = d.base.comparability().union(&d.slack).expect("validated");
        let mut nlt_meet = Digraph::complete(occurrences.iter().cloned());
        let mut ns_meet = UGraph::complete(occurrences.iter().cloned());
        for r in self.ranking_family.values() {
            nlt_meet = nlt_meet.intersection(&graph_gi(r)).expect("same carrier");
            ns_meet = ns_meet
                .intersection(&r.to_order().order().comparability())
                .expect("same carrier");
        }
        if nlt != nlt_meet {
            return Err(NotLaterThanIntersection);
        }
        if ns != ns_meet {
            return Err(NonsimultaneousIntersection);
        }
        Ok(())
    }
}

/// Read off the combinatorial description of a model of the full theory.
/// Events without occurrences are dropped.
pub fn classify(m: &GsoModel) -> Result<ClassificationData> {
    let report = check_axioms_with_limit(m, Theory::Gso, 1)?;
    if let Some(v) = report.violations.into_iter().next() {
        return Err(Error::NotAModel(v));
    }
    let mut event_partition = BTreeMap::new();
    for e in &m.universe.events {
        let block: BTreeSet<NodeId> = m.universe.occurrences_of(e).cloned().collect();
        if !block.is_empty() {
            event_partition.insert(e.clone(), block);
        }
    }
    let decomposition = m.spec.decompose()?;
    let mut ranking_family = BTreeMap::new();
    for o in &m.universe.observations {
        ranking_family.insert(o.clone(), project_observation(m, o)?.to_ranking()?);
    }
    let d = ClassificationData {
        event_partition,
        decomposition,
        ranking_family,
    };
    d.validate().map_err(Error::InvalidClassificationData)?;
    Ok(d)
}

/// The model described by `d`.
pub fn build_model(d: &ClassificationData) -> Result<GsoModel> {
    d.validate().map_err(Error::InvalidClassificationData)?;
    let universe = Universe {
        events: d.event_partition.keys().cloned().collect(),
        occurrences: d.occurrences().clone(),
        observations: BTreeSet::new(),
        occurrence_of: d
            .event_partition
            .iter()
            .flat_map(|(e, block)| block.iter().map(move |o| (o.clone(), e.clone())))
            .collect(),
        individuals: BTreeSet::new(),
    };
    let mut m = GsoModel::new(universe, d.decomposition.compose()?);
    for (o, r) in &d.ranking_family {
        m.add_observation(o.clone(), r);
    }
    Ok(m)
}

/// Whether some sort-preserving bijection carries every relation of `m1`
/// onto the corresponding relation of `m2`.
///
/// Occurrences are matched by backtracking; the event and observation maps
/// are then forced up to elements with identical images, so they are
/// compared as multisets.
pub fn isomorphic(m1: &GsoModel, m2: &GsoModel) -> Result<bool> {
    check_size(m1, ISOMORPHISM_SIZE_LIMIT)?;
    check_size(m2, ISOMORPHISM_SIZE_LIMIT)?;
    let (u1, u2) = (&m1.universe, &m2.universe);
    if u1.events.len() != u2.events.len()
        || u1.occurrences.len() != u2.occurrences.len()
        || u1.observations.len() != u2.observations.len()
        || u1.individuals.len() != u2.individuals.len()
        || m1.domain().len() != m2.domain().len()
    {
        return Ok(false);
    }
    let (v1, v2) = (View::new(m1), View::new(m2));
    let mut sig1: Vec<_> = (0..v1.n).map(|i| v1.signature(i)).collect();
    let mut sig2: Vec<_> = (0..v2.n).map(|i| v2.signature(i)).collect();
    let (s1, s2) = (sig1.clone(), sig2.clone());
    sig1.sort();
    sig2.sort();
    if sig1 != sig2 {
        return Ok(false);
    }
    let mut map = vec![usize::MAX; v1.n];
    let mut used = vec![false; v2.n];
    Ok(match_occurrences(&v1, &v2, &s1, &s2, 0, &mut map, &mut used))
}

/// A model with occurrences numbered `0..n`.
struct View<'a> {
    n: usize,
    /// Per occurrence, its event (if any) and the size of that event's fibre.
    event: Vec<Option<(&'a NodeId, usize)>>,
    empty_events: usize,
    et: Vec<Vec<bool>>,
    nlt: Vec<Vec<bool>>,
    ns: Vec<Vec<bool>>,
    /// Per observation, the `(before, simult)` matrices.
    runs: Vec<(Matrix, Matrix)>,
}

type Matrix = Vec<Vec<bool>>;
/// Event fibre size, then the sorted relation rows of one occurrence.
type Signature = (Option<usize>, Vec<(bool, bool, bool, Vec<(bool, bool, bool)>)>);

impl<'a> View<'a> {
    fn new(m: &'a GsoModel) -> Self {
        let ids: Vec<&NodeId> = m.universe.occurrences.iter().collect();
        let n = ids.len();
        let index: BTreeMap<&NodeId, usize> = ids.iter().enumerate().map(|(i, x)| (*x, i)).collect();
        let matrix = |rel: &BTreeSet<(NodeId, NodeId)>| {
            let mut mat = vec![vec![false; n]; n];
            for (a, b) in rel {
                if let (Some(&i), Some(&j)) = (index.get(a), index.get(b)) {
                    mat[i][j] = true;
                }
            }
            mat
        };
        let mut fibre: BTreeMap<&NodeId, usize> = BTreeMap::new();
        for (_, e) in &m.universe.occurrence_of {
            *fibre.entry(e).or_default() += 1;
        }
        let event = ids
            .iter()
            .map(|o| {
                m.universe
                    .occurrence_of
                    .iter()
                    .find(|(x, _)| x == *o)
                    .map(|(_, e)| (e, fibre[e]))
            })
            .collect();
        let empty_events = m
            .universe
            .events
            .iter()
            .filter(|e| !fibre.contains_key(e))
            .count();
        let before = by_observation(&m.observed_before);
        let simult = by_observation(&m.observed_simult);
        let none = BTreeSet::new();
        let runs = m
            .universe
            .observations
            .iter()
            .map(|o| {
                (
                    matrix(before.get(o).unwrap_or(&none)),
                    matrix(simult.get(o).unwrap_or(&none)),
                )
            })
            .collect();
        View {
            n,
            event,
            empty_events,
            et: matrix(&m.spec.earlier_than),
            nlt: matrix(&m.spec.not_later_than),
            ns: matrix(&m.spec.nonsimultaneous),
            runs,
        }
    }

    fn pair(&self, i: usize, j: usize) -> (bool, bool, bool, Vec<(bool, bool, bool)>) {
        let mut obs: Vec<_> = self
            .runs
            .iter()
            .map(|(b, s)| (b[i][j], b[j][i], s[i][j]))
            .collect();
        obs.sort();
        (self.et[i][j], self.nlt[i][j], self.ns[i][j], obs)
    }

    fn signature(&self, i: usize) -> Signature {
        let mut rows: Vec<_> = (0..self.n).map(|j| self.pair(i, j)).collect();
        rows.sort();
        (self.event[i].map(|(_, k)| k), rows)
    }
}

fn match_occurrences(
    v1: &View,
    v2: &View,
    s1: &[Signature],
    s2: &[Signature],
    i: usize,
    map: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    if i == v1.n {
        return complete_match(v1, v2, map);
    }
    for j in 0..v2.n {
        if used[j] || s1[i] != s2[j] {
            continue;
        }
        let consistent = (0..i).all(|k| {
            let l = map[k];
            v1.et[i][k] == v2.et[j][l]
                && v1.et[k][i] == v2.et[l][j]
                && v1.nlt[i][k] == v2.nlt[j][l]
                && v1.nlt[k][i] == v2.nlt[l][j]
                && v1.ns[i][k] == v2.ns[j][l]
                && v1.ns[k][i] == v2.ns[l][j]
                && v1.pair(i, k) == v2.pair(j, l)
                && v1.pair(k, i) == v2.pair(l, j)
                && same_event(v1, i, k) == same_event(v2, j, l)
        });
        if !consistent {
            continue;
        }
        map[i] = j;
        used[j] = true;
        if match_occurrences(v1, v2, s1, s2, i + 1, map, used) {
            return true;
        }
        used[j] = false;
    }
    false
}

fn same_event(v: &View, i: usize, k: usize) -> bool {
    matches!((v.event[i], v.event[k]), (Some((a, _)), Some((b, _))) if a == b)
}

fn complete_match(v1: &View, v2: &View, map: &[usize]) -> bool {
    if v1.empty_events != v2.empty_events {
        return false;
    }
    let run_image = |v: &View, (b, s): &(Vec<Vec<bool>>, Vec<Vec<bool>>), perm: Option<&[usize]>| {
        let mut cells = Vec::new();
        for i in 0..v.n {
            for j in 0..v.n {
                let (x, y) = match perm {
                    Some(p) => (p[i], p[j]),
                    None => (i, j),
                };
                cells.push((x, y, b[i][j], s[i][j]));
            }
        }
        cells.sort();
        cells
    };
    let mut r1: Vec<_> = v1.runs.iter().map(|r| run_image(v1, r, Some(map))).collect();
    let mut r2: Vec<_> = v2.runs.iter().map(|r| run_image(v2, r, None)).collect();
    r1.sort();
    r2.sort();
    r1 == r2
}
