//! A finite fragment of PSL-core and the interpretation of the event-free
//! theory into it: activities become event occurrences, observer objects
//! become observations.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::error::{Error, PslDefect, Result};
use crate::id::NodeId;
use crate::model::{check_axioms, GsoModel, Theory};
use crate::relgraph::{has_pair, Edge};
use crate::report::ValidationReport;
use crate::spec::{GsoSpec, Universe};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PslCoreModel {
    pub activities: BTreeSet<NodeId>,
    pub activity_occurrences: BTreeSet<NodeId>,
    pub timepoints: BTreeSet<NodeId>,
    pub objects: BTreeSet<NodeId>,
    /// `(activity occurrence, activity)`.
    pub occurrence_of: BTreeSet<(NodeId, NodeId)>,
    /// `(object, activity occurrence, timepoint)`.
    pub participates_in: BTreeSet<(NodeId, NodeId, NodeId)>,
    /// Strict total order on the timepoints.
    pub before: BTreeSet<Edge>,
    /// `(object, timepoint)`.
    pub exists_at: BTreeSet<(NodeId, NodeId)>,
}

impl PslCoreModel {
    pub fn validate(&self) -> Result<()> {
        self.defect().map_or(Ok(()), |d| Err(Error::IllFormedPsl(d)))
    }

    fn defect(&self) -> Option<PslDefect> {
        use PslDefect::*;
        let sorts = [
            &self.activities,
            &self.activity_occurrences,
            &self.timepoints,
            &self.objects,
        ];
        for (i, s) in sorts.iter().enumerate() {
            for t in &sorts[i + 1..] {
                if let Some(x) = s.intersection(t).next() {
                    return Some(SortClash(x.clone()));
                }
            }
        }
        let is_ao = |x: &NodeId| self.activity_occurrences.contains(x);
        let is_tp = |x: &NodeId| self.timepoints.contains(x);
        let is_obj = |x: &NodeId| self.objects.contains(x);
        for (o, a) in &self.occurrence_of {
            if !is_ao(o) {
                return Some(NotAnActivityOccurrence(o.clone()));
            }
            if !self.activities.contains(a) {
                return Some(NotAnActivity(a.clone()));
            }
        }
        for o in &self.activity_occurrences {
            match self.occurrence_of.iter().filter(|(x, _)| x == o).count() {
                0 => return Some(NoActivity(o.clone())),
                1 => {}
                _ => return Some(SeveralActivities(o.clone())),
            }
        }
        for (x, o, t) in &self.participates_in {
            if !is_obj(x) {
                return Some(NotAnObject(x.clone()));
            }
            if !is_ao(o) {
                return Some(NotAnActivityOccurrence(o.clone()));
            }
            if !is_tp(t) {
                return Some(NotATimepoint(t.clone()));
            }
        }
        for (x, t) in &self.exists_at {
            if !is_obj(x) {
                return Some(NotAnObject(x.clone()));
            }
            if !is_tp(t) {
                return Some(NotATimepoint(t.clone()));
            }
        }
        for (a, b) in &self.before {
            for x in [a, b] {
                if !is_tp(x) {
                    return Some(NotATimepoint(x.clone()));
                }
            }
        }
        for a in &self.timepoints {
            for b in &self.timepoints {
                let (ab, ba) = (has_pair(&self.before, a, b), has_pair(&self.before, b, a));
                let ok = if a == b { !ab } else { ab != ba };
                if !ok {
                    return Some(BeforeNotStrictTotal(a.clone(), b.clone()));
                }
                if ab {
                    for c in &self.timepoints {
                        if has_pair(&self.before, b, c) && !has_pair(&self.before, a, c) {
                            return Some(BeforeNotStrictTotal(a.clone(), c.clone()));
                        }
                    }
                }
            }
        }
        None
    }

    /// For an observer, the timepoint at which it observes each activity.
    fn observation_times(&self, x: &NodeId) -> Option<BTreeMap<&NodeId, &NodeId>> {
        if !self.objects.contains(x)
            || !self
                .timepoints
                .iter()
                .all(|t| self.exists_at.contains(&(x.clone(), t.clone())))
        {
            return None;
        }
        let mut times = BTreeMap::new();
        for a in &self.activities {
            let mut witnesses = self.occurrence_of.iter().filter(|(_, b)| b == a).filter_map(|(o, _)| {
                let mut ts = self
                    .participates_in
                    .iter()
                    .filter(|(y, p, _)| y == x && p == o)
                    .map(|(_, _, t)| t);
                match (ts.next(), ts.next()) {
                    (Some(t), None) => Some(t),
                    _ => None,
                }
            });
            match (witnesses.next(), witnesses.next()) {
                (Some(t), None) => {
                    times.insert(a, t);
                }
                _ => return None,
            }
        }
        Some(times)
    }

    /// Objects that exist throughout and observe every activity exactly
    /// once, at exactly one timepoint.
    pub fn observers(&self) -> BTreeSet<NodeId> {
        self.objects
            .iter()
            .filter(|x| self.observation_times(x).is_some())
            .cloned()
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationResult {
    pub model: GsoModel,
    /// Observation id to the observer object it stands for.
    pub observer_map: BTreeMap<NodeId, NodeId>,
}

/// Interpret `p` as an event-free gso model. Observation ids are the
/// observer object ids.
pub fn translate(p: &PslCoreModel) -> Result<TranslationResult> {
    p.validate()?;
    let observers: Vec<(NodeId, BTreeMap<&NodeId, &NodeId>)> = p
        .objects
        .iter()
        .filter_map(|x| p.observation_times(x).map(|t| (x.clone(), t)))
        .collect();
    let mut m = GsoModel::new(
        Universe {
            occurrences: p.activities.clone(),
            observations: observers.iter().map(|(x, _)| x.clone()).collect(),
            ..Universe::default()
        },
        GsoSpec::empty(p.activities.iter().cloned()),
    );
    for (x, times) in &observers {
        for a1 in &p.activities {
            for a2 in &p.activities {
                let (t1, t2) = (times[a1], times[a2]);
                if has_pair(&p.before, t1, t2) {
                    m.observed_before.insert((a1.clone(), a2.clone(), x.clone()));
                } else if a1 != a2 && t1 == t2 {
                    m.observed_simult.insert((a1.clone(), a2.clone(), x.clone()));
                }
            }
        }
    }
    if !observers.is_empty() {
        let before = |a1: &NodeId, a2: &NodeId, x: &NodeId| {
            m.observed_before.contains(&(a1.clone(), a2.clone(), x.clone()))
        };
        let simult = |a1: &NodeId, a2: &NodeId, x: &NodeId| {
            m.observed_simult.contains(&(a1.clone(), a2.clone(), x.clone()))
        };
        let mut spec = GsoSpec::empty(p.activities.iter().cloned());
        for a1 in &p.activities {
            for a2 in &p.activities {
                let all = |f: &dyn Fn(&NodeId) -> bool| observers.iter().all(|(x, _)| f(x));
                let pair = (a1.clone(), a2.clone());
                if all(&|x| before(a1, a2, x)) {
                    spec.earlier_than.insert(pair.clone());
                }
                if all(&|x| before(a1, a2, x) || simult(a1, a2, x)) {
                    spec.not_later_than.insert(pair.clone());
                }
                if all(&|x| before(a1, a2, x) || before(a2, a1, x)) {
                    spec.nonsimultaneous.insert(pair);
                }
            }
        }
        m.spec = spec;
    }
    let observer_map = observers
        .into_iter()
        .map(|(x, _)| (x.clone(), x))
        .collect();
    Ok(TranslationResult {
        model: m,
        observer_map,
    })
}

/// The reduced theory's axioms evaluated on the translation of `p`.
pub fn verify_interpretation(p: &PslCoreModel) -> Result<ValidationReport> {
    check_axioms(&translate(p)?.model, Theory::GsoMinus)
}
