//! The JSON document format shared by all commands. Every document carries a
//! `kind` tag; the remaining keys name sorts and relations.

use std::collections::{BTreeMap, BTreeSet};

use gsokit_core::model::project_observation;
use gsokit_core::{
    ClassificationData, Digraph, GsoModel, GsoSpec, NodeId, PslCoreModel, RankingStructure,
    SpecDecomposition, UGraph, Universe,
};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown document kind {0:?}")]
    UnknownKind(String),
    #[error("key {key:?} is not allowed in a {kind} document")]
    UnexpectedKey { kind: &'static str, key: &'static str },
    #[error("ill-formed id {0:?}")]
    BadId(String),
    #[error("{0} is referenced but not declared")]
    Undeclared(NodeId),
    #[error("observation {0}: {1}")]
    Steps(String, gsokit_core::Error),
    #[error("{0}")]
    Core(#[from] gsokit_core::Error),
    #[error("expected a {expected} document, found {found}")]
    WrongKind { expected: &'static str, found: &'static str },
}

pub type Pair = (String, String);
pub type Triple = (String, String, String);

/// A step sequence, as text or as an array of steps.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Steps {
    Text(String),
    Blocks(Vec<Vec<String>>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Observations {
    /// Observation ids, or (in a family) unnamed step sequences.
    List(Vec<Steps>),
    /// Observation id to its run.
    Named(BTreeMap<String, Steps>),
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    events: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    occurrences: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    observations: Option<Observations>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    individuals: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    occurrence_of: Option<Vec<Pair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    earlier_than: Option<Vec<Pair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    not_later_than: Option<Vec<Pair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    nonsimultaneous: Option<Vec<Pair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    observed_before: Option<Vec<Triple>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    observed_simult: Option<Vec<Triple>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    activities: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    activity_occurrences: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    timepoints: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    objects: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none", alias = "participate_in")]
    participates_in: Option<Vec<Triple>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    before: Option<Vec<Pair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    exists_at: Option<Vec<Pair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    event_partition: Option<BTreeMap<String, Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    base: Option<Vec<Pair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    residual: Option<Vec<Pair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    slack: Option<Vec<Pair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ranking_family: Option<BTreeMap<String, Steps>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    Spec(GsoSpec),
    Model(GsoModel),
    Psl(PslCoreModel),
    Family(ObservationFamily),
    Classification(ClassificationData),
}

/// Named runs, optionally with an explicit carrier.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ObservationFamily {
    pub carrier: Option<BTreeSet<NodeId>>,
    /// Runs in document order, named or not.
    pub observations: Vec<(Option<NodeId>, RankingStructure)>,
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Spec(_) => "spec",
            Document::Model(_) => "gso-model",
            Document::Psl(_) => "psl-model",
            Document::Family(_) => "observation-family",
            Document::Classification(_) => "classification",
        }
    }

    pub fn parse(text: &str) -> Result<Document, DocumentError> {
        let raw: Raw = serde_json::from_str(text)?;
        from_raw(raw)
    }

    /// Canonical JSON, newline-terminated: one key per line, one tuple per
    /// line, flat lists inline.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(to_raw(self)).expect("plain data");
        let mut out = String::new();
        write_value(&mut out, &value, 0);
        out.push('\n');
        out
    }

    /// The spec of a spec or model document.
    pub fn into_spec(self) -> Result<GsoSpec, DocumentError> {
        match self {
            Document::Spec(s) => Ok(s),
            Document::Model(m) => Ok(m.spec),
            other => Err(DocumentError::WrongKind {
                expected: "spec",
                found: other.kind(),
            }),
        }
    }

    /// The carrier this document declares, if any.
    pub fn carrier(&self) -> Option<BTreeSet<NodeId>> {
        match self {
            Document::Spec(s) => Some(s.occurrences.clone()),
            Document::Model(m) => Some(m.universe.occurrences.clone()),
            Document::Family(f) => f
                .carrier
                .clone()
                .or_else(|| f.observations.first().map(|(_, r)| r.carrier())),
            Document::Classification(d) => Some(d.occurrences().clone()),
            Document::Psl(p) => Some(p.activities.clone()),
        }
    }
}

const SPEC_KEYS: &[&str] = &[
    "occurrences",
    "individuals",
    "earlier_than",
    "not_later_than",
    "nonsimultaneous",
];
const MODEL_KEYS: &[&str] = &[
    "events",
    "occurrences",
    "observations",
    "individuals",
    "occurrence_of",
    "earlier_than",
    "not_later_than",
    "nonsimultaneous",
    "observed_before",
    "observed_simult",
];
const PSL_KEYS: &[&str] = &[
    "activities",
    "activity_occurrences",
    "timepoints",
    "objects",
    "occurrence_of",
    "participates_in",
    "before",
    "exists_at",
];
const FAMILY_KEYS: &[&str] = &["occurrences", "observations"];
const CLASSIFICATION_KEYS: &[&str] = &[
    "occurrences",
    "event_partition",
    "base",
    "residual",
    "slack",
    "ranking_family",
];

fn present_keys(raw: &Raw) -> Vec<&'static str> {
    let mut keys = Vec::new();
    let mut add = |k: &'static str, present: bool| {
        if present {
            keys.push(k);
        }
    };
    add("events", raw.events.is_some());
    add("occurrences", raw.occurrences.is_some());
    add("observations", raw.observations.is_some());
    add("individuals", raw.individuals.is_some());
    add("occurrence_of", raw.occurrence_of.is_some());
    add("earlier_than", raw.earlier_than.is_some());
    add("not_later_than", raw.not_later_than.is_some());
    add("nonsimultaneous", raw.nonsimultaneous.is_some());
    add("observed_before", raw.observed_before.is_some());
    add("observed_simult", raw.observed_simult.is_some());
    add("activities", raw.activities.is_some());
    add("activity_occurrences", raw.activity_occurrences.is_some());
    add("timepoints", raw.timepoints.is_some());
    add("objects", raw.objects.is_some());
    add("participates_in", raw.participates_in.is_some());
    add("before", raw.before.is_some());
    add("exists_at", raw.exists_at.is_some());
    add("event_partition", raw.event_partition.is_some());
    add("base", raw.base.is_some());
    add("residual", raw.residual.is_some());
    add("slack", raw.slack.is_some());
    add("ranking_family", raw.ranking_family.is_some());
    keys
}

fn id(s: &str) -> Result<NodeId, DocumentError> {
    let x = NodeId::from(s);
    if x.is_well_formed() {
        Ok(x)
    } else {
        Err(DocumentError::BadId(s.to_string()))
    }
}

fn ids(xs: Option<Vec<String>>) -> Result<BTreeSet<NodeId>, DocumentError> {
    xs.unwrap_or_default().iter().map(|s| id(s)).collect()
}

fn pairs(xs: Option<Vec<Pair>>) -> Result<BTreeSet<(NodeId, NodeId)>, DocumentError> {
    xs.unwrap_or_default()
        .iter()
        .map(|(a, b)| Ok((id(a)?, id(b)?)))
        .collect()
}

fn triples(xs: Option<Vec<Triple>>) -> Result<BTreeSet<(NodeId, NodeId, NodeId)>, DocumentError> {
    xs.unwrap_or_default()
        .iter()
        .map(|(a, b, c)| Ok((id(a)?, id(b)?, id(c)?)))
        .collect()
}

fn symmetric(ps: BTreeSet<(NodeId, NodeId)>) -> BTreeSet<(NodeId, NodeId)> {
    ps.iter()
        .flat_map(|(a, b)| [(a.clone(), b.clone()), (b.clone(), a.clone())])
        .collect()
}

fn steps(name: &str, s: &Steps) -> Result<RankingStructure, DocumentError> {
    let r = match s {
        Steps::Text(t) => t.parse(),
        Steps::Blocks(bs) => {
            for x in bs.iter().flatten() {
                id(x)?;
            }
            RankingStructure::from_steps(bs.iter().map(|b| b.iter().map(String::as_str)))
        }
    };
    let r = r.map_err(|e| DocumentError::Steps(name.to_string(), e))?;
    for x in r.carrier() {
        id(x.as_str())?;
    }
    Ok(r)
}

fn require_declared<'a>(
    declared: &BTreeSet<NodeId>,
    used: impl IntoIterator<Item = &'a NodeId>,
) -> Result<(), DocumentError> {
    for x in used {
        if !declared.contains(x) {
            return Err(DocumentError::Undeclared(x.clone()));
        }
    }
    Ok(())
}

fn from_raw(raw: Raw) -> Result<Document, DocumentError> {
    let kind: &'static str = match raw.kind.as_str() {
        "spec" => "spec",
        "gso-model" => "gso-model",
        "psl-model" => "psl-model",
        "observation-family" => "observation-family",
        "classification" => "classification",
        _ => return Err(DocumentError::UnknownKind(raw.kind)),
    };
    let allowed = match kind {
        "spec" => SPEC_KEYS,
        "gso-model" => MODEL_KEYS,
        "psl-model" => PSL_KEYS,
        "observation-family" => FAMILY_KEYS,
        _ => CLASSIFICATION_KEYS,
    };
    if let Some(key) = present_keys(&raw).into_iter().find(|k| !allowed.contains(k)) {
        return Err(DocumentError::UnexpectedKey { kind, key });
    }
    match kind {
        "spec" => {
            let occurrences = ids(raw.occurrences)?;
            let mut declared = ids(raw.individuals)?;
            declared.extend(occurrences.iter().cloned());
            let spec = GsoSpec {
                occurrences,
                earlier_than: pairs(raw.earlier_than)?,
                not_later_than: pairs(raw.not_later_than)?,
                nonsimultaneous: symmetric(pairs(raw.nonsimultaneous)?),
            };
            require_declared(&declared, spec.domain().iter())?;
            Ok(Document::Spec(spec))
        }
        "gso-model" => {
            let occurrences = ids(raw.occurrences)?;
            let mut universe = Universe {
                events: ids(raw.events)?,
                occurrences: occurrences.clone(),
                observations: BTreeSet::new(),
                occurrence_of: pairs(raw.occurrence_of)?,
                individuals: ids(raw.individuals)?,
            };
            let mut runs = Vec::new();
            match raw.observations {
                None => {}
                Some(Observations::List(xs)) => {
                    for x in xs {
                        match x {
                            Steps::Text(t) => {
                                universe.observations.insert(id(&t)?);
                            }
                            Steps::Blocks(_) => {
                                return Err(DocumentError::BadId("<step array>".into()));
                            }
                        }
                    }
                }
                Some(Observations::Named(map)) => {
                    for (name, s) in &map {
                        runs.push((id(name)?, steps(name, s)?));
                    }
                }
            }
            let spec = GsoSpec {
                occurrences,
                earlier_than: pairs(raw.earlier_than)?,
                not_later_than: pairs(raw.not_later_than)?,
                nonsimultaneous: symmetric(pairs(raw.nonsimultaneous)?),
            };
            let mut m = GsoModel::new(universe, spec);
            for (name, r) in &runs {
                m.add_observation(name.clone(), r);
            }
            m.observed_before.extend(triples(raw.observed_before)?);
            m.observed_simult.extend(triples(raw.observed_simult)?);
            let u = &m.universe;
            let declared: BTreeSet<NodeId> = u
                .events
                .iter()
                .chain(&u.occurrences)
                .chain(&u.observations)
                .chain(&u.individuals)
                .cloned()
                .collect();
            require_declared(&declared, m.domain().iter())?;
            Ok(Document::Model(m))
        }
        "psl-model" => {
            let p = PslCoreModel {
                activities: ids(raw.activities)?,
                activity_occurrences: ids(raw.activity_occurrences)?,
                timepoints: ids(raw.timepoints)?,
                objects: ids(raw.objects)?,
                occurrence_of: pairs(raw.occurrence_of)?,
                participates_in: triples(raw.participates_in)?,
                before: pairs(raw.before)?,
                exists_at: pairs(raw.exists_at)?,
            };
            p.validate()?;
            Ok(Document::Psl(p))
        }
        "observation-family" => {
            let carrier = raw.occurrences.map(|xs| ids(Some(xs))).transpose()?;
            let mut observations = Vec::new();
            match raw.observations {
                None => {}
                Some(Observations::List(xs)) => {
                    for (i, s) in xs.iter().enumerate() {
                        observations.push((None, steps(&format!("#{i}"), s)?));
                    }
                }
                Some(Observations::Named(map)) => {
                    for (name, s) in &map {
                        observations.push((Some(id(name)?), steps(name, s)?));
                    }
                }
            }
            Ok(Document::Family(ObservationFamily {
                carrier,
                observations,
            }))
        }
        _ => {
            let occurrences = ids(raw.occurrences)?;
            let mut event_partition = BTreeMap::new();
            for (e, block) in raw.event_partition.unwrap_or_default() {
                event_partition.insert(id(&e)?, ids(Some(block))?);
            }
            let mut ranking_family = BTreeMap::new();
            for (o, s) in raw.ranking_family.unwrap_or_default() {
                ranking_family.insert(id(&o)?, steps(&o, &s)?);
            }
            let decomposition = SpecDecomposition {
                base: Digraph::new(occurrences.iter().cloned(), pairs(raw.base)?)?,
                residual: Digraph::new(occurrences.iter().cloned(), pairs(raw.residual)?)?,
                slack: UGraph::new(Digraph::new(
                    occurrences.iter().cloned(),
                    symmetric(pairs(raw.slack)?),
                )?)?,
            };
            Ok(Document::Classification(ClassificationData {
                event_partition,
                decomposition,
                ranking_family,
            }))
        }
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(xs) => xs.iter().all(|x| !x.is_array() && !x.is_object()),
        Value::Object(_) => false,
        _ => true,
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent + 1);
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&pad);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(out, x, indent + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
        Value::Array(xs) if !is_flat(v) => {
            out.push_str("[\n");
            for (i, x) in xs.iter().enumerate() {
                out.push_str(&pad);
                write_value(out, x, indent + 1);
                out.push_str(if i + 1 < xs.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push(']');
        }
        Value::Array(xs) => {
            out.push('[');
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&x.to_string());
            }
            out.push(']');
        }
        other => out.push_str(&other.to_string()),
    }
}

fn names(xs: &BTreeSet<NodeId>) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

fn out_pairs<'a>(xs: impl IntoIterator<Item = &'a (NodeId, NodeId)>) -> Vec<Pair> {
    xs.into_iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect()
}

fn out_triples(xs: &BTreeSet<(NodeId, NodeId, NodeId)>) -> Vec<Triple> {
    xs.iter()
        .map(|(a, b, c)| (a.to_string(), b.to_string(), c.to_string()))
        .collect()
}

/// Each unordered pair once, smaller id first.
fn out_symmetric(xs: &BTreeSet<(NodeId, NodeId)>) -> Vec<Pair> {
    let mut seen = BTreeSet::new();
    for (a, b) in xs {
        let p = if a <= b { (a, b) } else { (b, a) };
        seen.insert(p);
    }
    seen.into_iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect()
}

fn nonempty<T>(v: Vec<T>) -> Option<Vec<T>> {
    (!v.is_empty()).then_some(v)
}

/// Runs of a model as step sequences, when the observed triples are exactly
/// the ones those step sequences generate.
fn runs_as_steps(m: &GsoModel) -> Option<BTreeMap<String, Steps>> {
    let mut runs = BTreeMap::new();
    let mut rebuilt = GsoModel::new(m.universe.clone(), m.spec.clone());
    for o in &m.universe.observations {
        let r = project_observation(m, o).ok()?.to_ranking().ok()?;
        rebuilt.add_observation(o.clone(), &r);
        runs.insert(o.to_string(), Steps::Text(r.to_string()));
    }
    (rebuilt.observed_before == m.observed_before && rebuilt.observed_simult == m.observed_simult)
        .then_some(runs)
}

fn to_raw(doc: &Document) -> Raw {
    let mut raw = Raw {
        kind: doc.kind().to_string(),
        ..Raw::default()
    };
    match doc {
        Document::Spec(s) => {
            raw.occurrences = Some(names(&s.occurrences));
            raw.earlier_than = Some(out_pairs(&s.earlier_than));
            raw.not_later_than = Some(out_pairs(&s.not_later_than));
            raw.nonsimultaneous = Some(out_symmetric(&s.nonsimultaneous));
            let extra: BTreeSet<NodeId> = s.domain().difference(&s.occurrences).cloned().collect();
            raw.individuals = nonempty(names(&extra));
        }
        Document::Model(m) => {
            let u = &m.universe;
            raw.events = Some(names(&u.events));
            raw.occurrences = Some(names(&u.occurrences));
            raw.individuals = nonempty(names(&u.individuals));
            raw.occurrence_of = Some(out_pairs(&u.occurrence_of));
            raw.earlier_than = Some(out_pairs(&m.spec.earlier_than));
            raw.not_later_than = Some(out_pairs(&m.spec.not_later_than));
            raw.nonsimultaneous = Some(out_symmetric(&m.spec.nonsimultaneous));
            let named_runs = (m.spec.occurrences == u.occurrences)
                .then(|| runs_as_steps(m))
                .flatten();
            match named_runs {
                Some(runs) => raw.observations = Some(Observations::Named(runs)),
                None => {
                    raw.observations = Some(Observations::List(
                        u.observations.iter().map(|o| Steps::Text(o.to_string())).collect(),
                    ));
                    raw.observed_before = Some(out_triples(&m.observed_before));
                    raw.observed_simult = Some(out_triples(&m.observed_simult));
                }
            }
        }
        Document::Psl(p) => {
            raw.activities = Some(names(&p.activities));
            raw.activity_occurrences = Some(names(&p.activity_occurrences));
            raw.timepoints = Some(names(&p.timepoints));
            raw.objects = Some(names(&p.objects));
            raw.occurrence_of = Some(out_pairs(&p.occurrence_of));
            raw.participates_in = Some(out_triples(&p.participates_in));
            raw.before = Some(out_pairs(&p.before));
            raw.exists_at = Some(out_pairs(&p.exists_at));
        }
        Document::Family(f) => {
            raw.occurrences = f.carrier.as_ref().map(names);
            let all_named = f.observations.iter().all(|(n, _)| n.is_some());
            raw.observations = Some(if all_named && !f.observations.is_empty() {
                Observations::Named(
                    f.observations
                        .iter()
                        .map(|(n, r)| (n.as_ref().unwrap().to_string(), Steps::Text(r.to_string())))
                        .collect(),
                )
            } else {
                Observations::List(
                    f.observations
                        .iter()
                        .map(|(_, r)| Steps::Text(r.to_string()))
                        .collect(),
                )
            });
        }
        Document::Classification(d) => {
            let dec = &d.decomposition;
            raw.occurrences = Some(names(d.occurrences()));
            raw.event_partition = Some(
                d.event_partition
                    .iter()
                    .map(|(e, b)| (e.to_string(), names(b)))
                    .collect(),
            );
            raw.base = Some(out_pairs(dec.base.edges()));
            raw.residual = Some(out_pairs(dec.residual.edges()));
            raw.slack = Some(out_symmetric(dec.slack.as_digraph().edges()));
            raw.ranking_family = Some(
                d.ranking_family
                    .iter()
                    .map(|(o, r)| (o.to_string(), Steps::Text(r.to_string())))
                    .collect(),
            );
        }
    }
    raw
}
