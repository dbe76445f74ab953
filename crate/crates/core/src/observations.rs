//! Observations as stratified orders, their ranking-structure normal form,
//! and the textual step-sequence syntax `{a,b}{c}{d,e}`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, RankingDefect, Result};
use crate::id::NodeId;
use crate::relgraph::{Digraph, UGraph};
use crate::report::{AxiomId, ReportBuilder, ValidationReport, DEFAULT_WITNESS_LIMIT};

/// A candidate stratified order: the graph's vertex set is the carrier.
///
/// Construction does not check the order axioms; [`StratOrder::checked`] and
/// [`is_stratified`] do.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StratOrder(Digraph);

impl StratOrder {
    pub fn new(order: Digraph) -> Self {
        StratOrder(order)
    }

    pub fn checked(order: Digraph) -> Result<Self> {
        let report = is_stratified(&order);
        match report.violations.into_iter().next() {
            Some(v) => Err(Error::NotStratified(v)),
            None => Ok(StratOrder(order)),
        }
    }

    pub fn carrier(&self) -> &BTreeSet<NodeId> {
        self.0.vertices()
    }

    pub fn order(&self) -> &Digraph {
        &self.0
    }

    pub fn before(&self, a: &NodeId, b: &NodeId) -> bool {
        self.0.contains(a, b)
    }

    /// `a ⌢ b`: distinct and unordered.
    pub fn simultaneous(&self, a: &NodeId, b: &NodeId) -> bool {
        a != b && !self.0.contains(a, b) && !self.0.contains(b, a)
    }

    /// The simultaneity relation `⌢` as a symmetric graph.
    pub fn simultaneity(&self) -> UGraph {
        self.0.incomparability()
    }

    pub fn to_ranking(&self) -> Result<RankingStructure> {
        to_ranking(self)
    }

    pub fn frown_order(&self) -> Digraph {
        frown_order(self)
    }
}

/// Checks irreflexivity (o3), transitivity (o4) and transitivity of
/// simultaneity (o6). Only the first witness per axiom is kept; the rest
/// are counted.
pub fn is_stratified(rel: &Digraph) -> ValidationReport {
    is_stratified_with_limit(rel, Some(1))
}

/// As [`is_stratified`], keeping up to `per_axiom` witnesses per axiom
/// (`None` keeps everything up to the global cap).
pub fn is_stratified_with_limit(rel: &Digraph, per_axiom: Option<usize>) -> ValidationReport {
    let mut out = ReportBuilder::new(DEFAULT_WITNESS_LIMIT);
    if let Some(n) = per_axiom {
        out = out.per_rule(n);
    }
    for (a, b) in rel.edges() {
        if a == b {
            out.push(AxiomId::O3, vec![a.clone()]);
        }
        for c in rel.successors(b) {
            if !rel.contains(a, c) {
                out.push(AxiomId::O4, vec![a.clone(), b.clone(), c.clone()]);
            }
        }
    }
    let simult = rel.incomparability();
    for (a, b) in simult.as_digraph().edges() {
        for c in simult.as_digraph().successors(b) {
            if a != c && !simult.contains(a, c) {
                out.push(AxiomId::O6, vec![a.clone(), b.clone(), c.clone()]);
            }
        }
    }
    out.finish()
}

/// A partition of the carrier into steps, listed in execution order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RankingStructure {
    blocks: Vec<BTreeSet<NodeId>>,
}

impl RankingStructure {
    /// Blocks must be nonempty and pairwise disjoint; the carrier is their union.
    pub fn new(blocks: Vec<BTreeSet<NodeId>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (i, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidRanking(RankingDefect::EmptyBlock(i)));
            }
            for x in block {
                if !seen.insert(x) {
                    return Err(Error::DuplicateOccurrence(x.clone()));
                }
            }
        }
        Ok(RankingStructure { blocks })
    }

    pub fn from_steps<I, B, T>(steps: I) -> Result<Self>
    where
        I: IntoIterator<Item = B>,
        B: IntoIterator<Item = T>,
        T: Into<NodeId>,
    {
        RankingStructure::new(
            steps
                .into_iter()
                .map(|b| b.into_iter().map(Into::into).collect())
                .collect(),
        )
    }

    /// Check that the blocks cover exactly `carrier`.
    pub fn check_carrier(&self, carrier: &BTreeSet<NodeId>) -> Result<()> {
        let mine = self.carrier();
        if let Some(x) = mine.difference(carrier).next() {
            return Err(Error::InvalidRanking(RankingDefect::Foreign(x.clone())));
        }
        if let Some(x) = carrier.difference(&mine).next() {
            return Err(Error::InvalidRanking(RankingDefect::Uncovered(x.clone())));
        }
        Ok(())
    }

    pub fn blocks(&self) -> &[BTreeSet<NodeId>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn carrier(&self) -> BTreeSet<NodeId> {
        self.blocks.iter().flatten().cloned().collect()
    }

    /// Position of each element's block.
    pub fn rank_of(&self) -> BTreeMap<&NodeId, usize> {
        self.blocks
            .iter()
            .enumerate()
            .flat_map(|(i, b)| b.iter().map(move |x| (x, i)))
            .collect()
    }

    pub fn to_order(&self) -> StratOrder {
        from_ranking(self)
    }
}

impl Ord for RankingStructure {
    /// Fewer steps first, then lexicographic on the step sequence.
    fn cmp(&self, other: &Self) -> Ordering {
        self.blocks
            .len()
            .cmp(&other.blocks.len())
            .then_with(|| self.blocks.cmp(&other.blocks))
    }
}

impl PartialOrd for RankingStructure {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Blocks are the classes of "equal or simultaneous", ordered by `⊲̂`.
pub fn to_ranking(s: &StratOrder) -> Result<RankingStructure> {
    if let Some(v) = is_stratified(s.order()).violations.into_iter().next() {
        return Err(Error::NotStratified(v));
    }
    let order = s.order();
    // In a stratified order every member of a step has the same predecessors,
    // so the predecessor count orders the steps.
    let mut preds: BTreeMap<&NodeId, usize> = s.carrier().iter().map(|x| (x, 0)).collect();
    for (_, b) in order.edges() {
        *preds.get_mut(b).expect("edge endpoint in carrier") += 1;
    }
    let mut blocks: Vec<(usize, BTreeSet<NodeId>)> = Vec::new();
    let mut placed: BTreeSet<&NodeId> = BTreeSet::new();
    for x in s.carrier() {
        if placed.contains(x) {
            continue;
        }
        let block: BTreeSet<NodeId> = s
            .carrier()
            .iter()
            .filter(|y| *y == x || s.simultaneous(x, y))
            .cloned()
            .collect();
        for y in &block {
            placed.insert(s.carrier().get(y).expect("member of carrier"));
        }
        blocks.push((preds[x], block));
    }
    blocks.sort_by_key(|(p, _)| *p);
    Ok(RankingStructure {
        blocks: blocks.into_iter().map(|(_, b)| b).collect(),
    })
}

/// `⋃ {A × B : A before B}`.
pub fn from_ranking(r: &RankingStructure) -> StratOrder {
    let mut g = Digraph::empty(r.carrier());
    for (i, a) in r.blocks.iter().enumerate() {
        for b in &r.blocks[i + 1..] {
            for x in a {
                for y in b {
                    g.insert(x.clone(), y.clone()).expect("distinct carrier members");
                }
            }
        }
    }
    StratOrder(g)
}

/// `Ĝ(R)`: the order of `r` plus the complete graph on every step.
pub fn graph_gi(r: &RankingStructure) -> Digraph {
    let StratOrder(mut g) = from_ranking(r);
    for block in &r.blocks {
        for x in block {
            for y in block {
                if x != y {
                    g.insert(x.clone(), y.clone()).expect("distinct carrier members");
                }
            }
        }
    }
    g
}

/// `⊲⌢ = {(x,y) : x ≠ y ∧ ¬ y ⊲ x}`.
pub fn frown_order(s: &StratOrder) -> Digraph {
    s.order().inverse().complement()
}

/// Parse `{a,b}{c}`; whitespace between tokens is ignored. The empty string
/// denotes the ranking of the empty carrier.
pub fn parse_steps(text: &str) -> Result<RankingStructure> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let mut blocks = Vec::new();
    let mut seen = BTreeSet::new();
    skip_ws(&mut pos);
    while pos < bytes.len() {
        if bytes[pos] != b'{' {
            return Err(Error::Parse { pos, msg: "expected '{'" });
        }
        pos += 1;
        let mut block = BTreeSet::new();
        loop {
            skip_ws(&mut pos);
            let start = pos;
            while pos < bytes.len() && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_') {
                pos += 1;
            }
            if start == pos {
                return Err(Error::Parse {
                    pos,
                    msg: "expected identifier",
                });
            }
            let id = NodeId::from(&text[start..pos]);
            if !seen.insert(id.clone()) {
                return Err(Error::DuplicateOccurrence(id));
            }
            block.insert(id);
            skip_ws(&mut pos);
            match bytes.get(pos) {
                Some(b',') => pos += 1,
                Some(b'}') => {
                    pos += 1;
                    break;
                }
                _ => {
                    return Err(Error::Parse {
                        pos,
                        msg: "expected ',' or '}'",
                    })
                }
            }
        }
        blocks.push(block);
        skip_ws(&mut pos);
    }
    Ok(RankingStructure { blocks })
}

pub fn render_steps(r: &RankingStructure) -> String {
    alloc::format!("{r}")
}

impl fmt::Display for RankingStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for block in &self.blocks {
            f.write_str("{")?;
            for (i, x) in block.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("}")?;
        }
        Ok(())
    }
}

impl FromStr for RankingStructure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_steps(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness;

    fn fig1() -> RankingStructure {
        "{o1,o2}{o3}{o4,o5,o6}{o7,o8}{o9,o10}".parse().unwrap()
    }

    #[test]
    fn fig1_order_is_stratified_and_ranks_back() {
        let s = fig1().to_order();
        // (10² − (2² + 1² + 3² + 2² + 2²)) / 2 cross-step pairs
        assert_eq!(s.order().edge_count(), 39);
        assert!(is_stratified(s.order()).is_empty());
        let r = s.to_ranking().unwrap();
        let want: Vec<BTreeSet<NodeId>> = [
            &["o1", "o2"][..],
            &["o3"],
            &["o4", "o5", "o6"],
            &["o7", "o8"],
            &["o9", "o10"],
        ]
        .iter()
        .map(|b| b.iter().map(|x| NodeId::from(*x)).collect())
        .collect();
        assert_eq!(r.blocks(), &want[..]);
        assert_eq!(r, fig1());
        assert_eq!(from_ranking(&r), s);
    }

    #[test]
    fn partial_order_that_is_not_stratified() {
        let g = Digraph::new(["a", "b", "c"], [("a", "c")]).unwrap();
        let r = is_stratified(&g);
        assert!(r.violates(AxiomId::O6));
        assert!(!r.violates(AxiomId::O4));
        assert!(r.violations.iter().any(|v| v.to_string() == "O6 (a,b,c)"));
        let g = Digraph::new(["a", "b", "c", "d"], [("a", "c"), ("b", "d")]).unwrap();
        assert!(is_stratified(&g).violates(AxiomId::O6));
        assert!(matches!(
            StratOrder::new(g).to_ranking(),
            Err(Error::NotStratified(_))
        ));
    }

    #[test]
    fn non_transitive_relation_fails_o4() {
        let g = Digraph::new(["a", "b", "c"], [("a", "b"), ("b", "c")]).unwrap();
        let r = is_stratified(&g);
        assert!(r.violates(AxiomId::O4));
    }

    #[test]
    fn first_witness_per_axiom_plus_count() {
        let g = Digraph::new(["a", "b", "c", "d"], [("a", "b"), ("b", "c"), ("c", "d")]).unwrap();
        let r = is_stratified(&g);
        assert_eq!(r.violations.iter().filter(|v| v.rule == AxiomId::O4.into()).count(), 1);
        assert!(r.total() > r.violations.len());
        let full = is_stratified_with_limit(&g, None);
        assert_eq!(full.total(), r.total());
        assert!(full.omitted.is_empty());
    }

    #[test]
    fn empty_relation_is_one_step() {
        let g = Digraph::empty(["a", "b", "c"]);
        assert!(is_stratified(&g).is_empty());
        let r = StratOrder::new(g).to_ranking().unwrap();
        assert_eq!(r.to_string(), "{a,b,c}");
        assert_eq!(from_ranking(&r).order().edge_count(), 0);
    }

    #[test]
    fn total_order_ranks_as_singletons() {
        let g = Digraph::new(["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")]).unwrap();
        let r = StratOrder::checked(g).unwrap().to_ranking().unwrap();
        assert_eq!(r.to_string(), "{a}{b}{c}");
        assert_eq!(frown_order(&r.to_order()), *r.to_order().order());
    }

    #[test]
    fn from_ranking_small() {
        let r: RankingStructure = "{a}{b,c}".parse().unwrap();
        let want = Digraph::new(["a", "b", "c"], [("a", "b"), ("a", "c")]).unwrap();
        assert_eq!(from_ranking(&r).order(), &want);
        let gi = graph_gi(&r);
        let want = Digraph::new(
            ["a", "b", "c"],
            [("a", "b"), ("a", "c"), ("b", "c"), ("c", "b")],
        )
        .unwrap();
        assert_eq!(gi, want);
        let singles: RankingStructure = "{a}{b}{c}".parse().unwrap();
        assert_eq!(graph_gi(&singles), *from_ranking(&singles).order());
    }

    #[test]
    fn graph_gi_of_observation_a() {
        let a = witness::observation_a();
        let gi = graph_gi(&a);
        let order = from_ranking(&a);
        let extra = gi.difference(order.order()).unwrap();
        assert_eq!(extra.edge_count(), 6);
        for (x, y) in extra.edges() {
            assert!(["o5", "o6", "o7"].contains(&x.as_str()));
            assert!(["o5", "o6", "o7"].contains(&y.as_str()));
        }
        assert_eq!(gi, frown_order(&order));
    }

    #[test]
    fn frown_order_of_observation_d() {
        let d = witness::observation_d().to_order();
        let frown = frown_order(&d);
        let extra = frown.difference(d.order()).unwrap();
        let pairs: Vec<_> = extra.edges().iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        assert_eq!(pairs, [("o6", "o7"), ("o7", "o6")]);
        let e = frown_order(&StratOrder::new(Digraph::empty(["a", "b"])));
        assert_eq!(e.edge_count(), 2);
    }

    #[test]
    fn parse_and_render() {
        let r = parse_steps("{o1}{o2,o3}").unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r.blocks()[1].len(), 2);
        assert_eq!(render_steps(&parse_steps(" { o3 , o2 }{o1} ").unwrap()), "{o2,o3}{o1}");
        assert_eq!(
            parse_steps("{o1}{o1}"),
            Err(Error::DuplicateOccurrence("o1".into()))
        );
        assert!(matches!(parse_steps("{o1"), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(parse_steps("o1"), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(parse_steps("{}"), Err(Error::Parse { pos: 1, .. })));
        assert!(matches!(parse_steps("{a-b}"), Err(Error::Parse { pos: 2, .. })));
        assert!(parse_steps("").unwrap().is_empty());
    }

    #[test]
    fn ranking_validation() {
        assert!(matches!(
            RankingStructure::new(vec![BTreeSet::new()]),
            Err(Error::InvalidRanking(RankingDefect::EmptyBlock(0)))
        ));
        let r: RankingStructure = "{a}{b}".parse().unwrap();
        let carrier: BTreeSet<NodeId> = ["a", "b", "c"].into_iter().map(NodeId::from).collect();
        assert!(matches!(
            r.check_carrier(&carrier),
            Err(Error::InvalidRanking(RankingDefect::Uncovered(_)))
        ));
    }

    #[test]
    fn canonical_order_puts_fewer_steps_first() {
        let mut v: Vec<RankingStructure> = ["{a}{b}", "{a,b}", "{b}{a}"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        v.sort();
        let rendered: Vec<String> = v.iter().map(|r| r.to_string()).collect();
        assert_eq!(rendered, ["{a,b}", "{a}{b}", "{b}{a}"]);
    }
}
