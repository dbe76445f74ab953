//! Stratified-order extensions of a gso-structure: membership, exhaustive
//! enumeration, and reconstruction of the structure from a family of
//! extensions.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::id::NodeId;
use crate::observations::{RankingStructure, StratOrder};
use crate::relgraph::{has_pair, Digraph, UGraph};
use crate::report::{AxiomId, ReportBuilder, ValidationReport, DEFAULT_WITNESS_LIMIT};
use crate::spec::GsoSpec;

/// Largest carrier [`enumerate_extensions`] accepts by default. The number of
/// step sequences on `n` elements is the ordered Bell number (about 1.0e8
/// for `n = 10`).
pub const DEFAULT_ENUMERATION_BOUND: usize = 10;

/// Hard ceiling from the bitmask representation.
const MAX_CARRIER: usize = 63;

/// Why a stratified order is not an extension of a spec.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtensionFailure {
    /// `{a,b}` is nonsimultaneous but the order leaves them simultaneous.
    Nonsimultaneous(NodeId, NodeId),
    /// `(a,b)` is not-later-than but the order has `b` before `a`.
    NotLaterThan(NodeId, NodeId),
}

impl fmt::Display for ExtensionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtensionFailure::Nonsimultaneous(a, b) => {
                write!(f, "nonsimultaneous ({a},{b}) observed simultaneously")
            }
            ExtensionFailure::NotLaterThan(a, b) => {
                write!(f, "not_later_than ({a},{b}) but {b} observed before {a}")
            }
        }
    }
}

/// `Ok(None)` when `s` is an extension of `spec`, i.e.
/// `nonsimultaneous ⊆ sym(⊲)` and `not_later_than ⊆ ⊲⌢`; otherwise the first
/// failing pair.
pub fn is_extension(spec: &GsoSpec, s: &StratOrder) -> Result<Option<ExtensionFailure>> {
    if &spec.occurrences != s.carrier() {
        return Err(Error::CarrierMismatch);
    }
    for (a, b) in &spec.nonsimultaneous {
        if !s.before(a, b) && !s.before(b, a) {
            return Ok(Some(ExtensionFailure::Nonsimultaneous(a.clone(), b.clone())));
        }
    }
    for (a, b) in &spec.not_later_than {
        if a == b || s.before(b, a) {
            return Ok(Some(ExtensionFailure::NotLaterThan(a.clone(), b.clone())));
        }
    }
    Ok(None)
}

/// Ω for a spec: every ranking whose order is an extension, canonically sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionSet {
    pub spec: GsoSpec,
    pub members: Vec<RankingStructure>,
}

impl ExtensionSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn orders(&self) -> Vec<StratOrder> {
        self.members.iter().map(RankingStructure::to_order).collect()
    }

    pub fn reconstruct(&self) -> Result<Reconstruction> {
        reconstruct(&self.spec.occurrences, &self.orders())
    }
}

pub fn enumerate_extensions(spec: &GsoSpec) -> Result<ExtensionSet> {
    enumerate_extensions_bounded(spec, DEFAULT_ENUMERATION_BOUND)
}

/// Enumerate Ω, refusing carriers larger than `bound`.
///
/// Step sequences are built block by block. A block `B` may come next only
/// if no two members of `B` are nonsimultaneous and every not-later-than
/// predecessor of a member is already placed or in `B`; those are exactly
/// the extension conditions restricted to the new block, so the search is
/// complete and emits nothing spurious.
pub fn enumerate_extensions_bounded(spec: &GsoSpec, bound: usize) -> Result<ExtensionSet> {
    if let Some(v) = spec.validate().violations.into_iter().next() {
        return Err(Error::InvalidSpec(v));
    }
    let n = spec.occurrences.len();
    if n > bound.min(MAX_CARRIER) {
        return Err(Error::CarrierTooLarge {
            size: n,
            bound: bound.min(MAX_CARRIER),
        });
    }
    let ids: Vec<&NodeId> = spec.occurrences.iter().collect();
    let index: BTreeMap<&NodeId, usize> = ids.iter().enumerate().map(|(i, x)| (*x, i)).collect();
    let mut preds = vec![0u64; n];
    let mut conflicts = vec![0u64; n];
    for (a, b) in &spec.not_later_than {
        preds[index[b]] |= 1 << index[a];
    }
    for (a, b) in &spec.nonsimultaneous {
        conflicts[index[a]] |= 1 << index[b];
    }
    let search = Search {
        preds,
        conflicts,
        full: if n == 0 { 0 } else { u64::MAX >> (64 - n) },
    };
    let mut found = Vec::new();
    search.run(0, &mut Vec::new(), &mut found);
    let mut members: Vec<RankingStructure> = found
        .into_iter()
        .map(|blocks| {
            RankingStructure::new(
                blocks
                    .into_iter()
                    .map(|mask| {
                        (0..n)
                            .filter(|i| mask >> i & 1 == 1)
                            .map(|i| ids[i].clone())
                            .collect()
                    })
                    .collect(),
            )
            .expect("disjoint nonempty blocks")
        })
        .collect();
    members.sort();
    Ok(ExtensionSet {
        spec: spec.clone(),
        members,
    })
}

struct Search {
    preds: Vec<u64>,
    conflicts: Vec<u64>,
    full: u64,
}

impl Search {
    fn admissible(&self, placed: u64, block: u64) -> bool {
        let mut rest = block;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if self.conflicts[i] & block != 0 || self.preds[i] & !(placed | block) != 0 {
                return false;
            }
        }
        true
    }

    fn run(&self, placed: u64, blocks: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        let remaining = self.full & !placed;
        if remaining == 0 {
            out.push(blocks.clone());
            return;
        }
        let mut block = remaining;
        loop {
            if self.admissible(placed, block) {
                blocks.push(block);
                self.run(placed | block, blocks, out);
                blocks.pop();
            }
            block = (block - 1) & remaining;
            if block == 0 {
                break;
            }
        }
    }
}

/// The relations recovered from a family of stratified orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconstruction {
    pub nonsimultaneous: UGraph,
    pub not_later_than: Digraph,
    pub earlier_than: Digraph,
}

impl Reconstruction {
    pub fn into_spec(self) -> GsoSpec {
        GsoSpec::from_graphs(&self.earlier_than, &self.not_later_than, &self.nonsimultaneous)
            .expect("graphs share the carrier")
    }

    pub fn matches(&self, spec: &GsoSpec) -> bool {
        self.nonsimultaneous.vertices() == &spec.occurrences
            && self.nonsimultaneous.as_digraph().edges() == &spec.nonsimultaneous
            && self.not_later_than.edges() == &spec.not_later_than
            && self.earlier_than.edges() == &spec.earlier_than
    }
}

/// `<> = ⋂ sym(⊲)`, `⊏ = ⋂ ⊲⌢`, `≺ = <> ∩ ⊏`.
pub fn reconstruct(carrier: &BTreeSet<NodeId>, family: &[StratOrder]) -> Result<Reconstruction> {
    let Some((first, rest)) = family.split_first() else {
        return Err(Error::EmptyFamily);
    };
    if family.iter().any(|s| s.carrier() != carrier) {
        return Err(Error::CarrierMismatch);
    }
    let mut ns = first.order().sym();
    let mut nlt = first.frown_order();
    for s in rest {
        ns = ns.intersection(&s.order().sym())?;
        nlt = nlt.intersection(&s.frown_order())?;
    }
    let et = nlt.intersection(ns.as_digraph())?;
    Ok(Reconstruction {
        nonsimultaneous: ns,
        not_later_than: nlt,
        earlier_than: et,
    })
}

/// Axioms o9 and o10 for a family of observations of `spec`: every
/// simultaneity and every reversal the spec permits is seen somewhere.
pub fn check_completeness(spec: &GsoSpec, family: &[StratOrder]) -> ValidationReport {
    let mut out = ReportBuilder::new(DEFAULT_WITNESS_LIMIT);
    for a in &spec.occurrences {
        for b in &spec.occurrences {
            if a == b {
                continue;
            }
            if a < b
                && !has_pair(&spec.nonsimultaneous, a, b)
                && !family.iter().any(|s| s.simultaneous(a, b))
            {
                out.push(AxiomId::O9, vec![a.clone(), b.clone()]);
            }
            if !has_pair(&spec.not_later_than, a, b) && !family.iter().any(|s| s.before(b, a)) {
                out.push(AxiomId::O10, vec![a.clone(), b.clone()]);
            }
        }
    }
    out.finish()
}

pub fn minimal_reconstructing_subsets(
    spec: &GsoSpec,
) -> Result<BTreeSet<BTreeSet<RankingStructure>>> {
    minimal_reconstructing_subsets_bounded(spec, DEFAULT_ENUMERATION_BOUND)
}

/// All inclusion-minimal subsets of Ω that reconstruct `spec`.
///
/// Every member of Ω already satisfies the spec, so a subset reconstructs
/// it exactly when, for each pair the spec leaves free, some member
/// exercises that freedom. The minimal subsets are therefore the minimal
/// covers of those requirements.
pub fn minimal_reconstructing_subsets_bounded(
    spec: &GsoSpec,
    bound: usize,
) -> Result<BTreeSet<BTreeSet<RankingStructure>>> {
    let omega = enumerate_extensions_bounded(spec, bound)?;
    let orders = omega.orders();
    let mut requirements: Vec<Vec<usize>> = Vec::new();
    for a in &spec.occurrences {
        for b in &spec.occurrences {
            if a == b {
                continue;
            }
            if a < b && !has_pair(&spec.nonsimultaneous, a, b) {
                requirements.push(
                    (0..orders.len())
                        .filter(|&i| orders[i].simultaneous(a, b))
                        .collect(),
                );
            }
            if !has_pair(&spec.not_later_than, a, b) {
                requirements.push((0..orders.len()).filter(|&i| orders[i].before(b, a)).collect());
            }
        }
    }
    let mut covers = BTreeSet::new();
    if requirements.is_empty() {
        for r in &omega.members {
            covers.insert(BTreeSet::from([r.clone()]));
        }
        return Ok(covers);
    }
    if requirements.iter().any(Vec::is_empty) {
        return Ok(covers);
    }
    let mut chosen = Vec::new();
    collect_minimal_covers(&requirements, &mut chosen, &mut covers, &omega.members);
    Ok(covers)
}

fn collect_minimal_covers(
    requirements: &[Vec<usize>],
    chosen: &mut Vec<usize>,
    out: &mut BTreeSet<BTreeSet<RankingStructure>>,
    members: &[RankingStructure],
) {
    // Once some chosen member covers nothing on its own it never will again.
    let private_ok = chosen.iter().all(|m| {
        requirements.iter().any(|req| {
            req.contains(m) && !chosen.iter().any(|other| other != m && req.contains(other))
        })
    });
    if !private_ok {
        return;
    }
    match requirements
        .iter()
        .find(|req| !req.iter().any(|m| chosen.contains(m)))
    {
        None => {
            out.insert(chosen.iter().map(|&i| members[i].clone()).collect());
        }
        Some(req) => {
            for &m in req {
                chosen.push(m);
                collect_minimal_covers(requirements, chosen, out, members);
                chosen.pop();
            }
        }
    }
}
