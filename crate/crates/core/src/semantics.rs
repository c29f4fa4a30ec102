//! Extension semantics and the compatible-goal selection pipeline.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::literal::Literal;
use crate::rational::Rational;

pub const DEFAULT_BOUND: usize = 25;
/// Largest framework a [`NodeSet`] can index.
pub const MAX_NODES: usize = 128;

/// A set of framework nodes, by index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct NodeSet(pub u128);

impl NodeSet {
    pub const EMPTY: NodeSet = NodeSet(0);

    pub fn full(n: usize) -> Self {
        if n >= 128 {
            NodeSet(u128::MAX)
        } else {
            NodeSet((1u128 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        NodeSet(1u128 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u128 << i;
    }

    pub fn with(self, i: usize) -> Self {
        NodeSet(self.0 | 1u128 << i)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, o: NodeSet) -> NodeSet {
        NodeSet(self.0 | o.0)
    }

    pub fn intersects(self, o: NodeSet) -> bool {
        self.0 & o.0 != 0
    }

    pub fn is_subset(self, o: NodeSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_strict_subset(self, o: NodeSet) -> bool {
        self.is_subset(o) && self != o
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        core::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        })
    }

    pub fn members(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for NodeSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = NodeSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

/// Lexicographic order on the sorted member lists, so `{}` < `{0}` < `{0,1}` < `{1}`.
impl Ord for NodeSet {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for NodeSet {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SemanticsError {
    SizeBoundExceeded { nodes: usize, bound: usize },
    MissingPreference(Literal),
}

impl fmt::Display for SemanticsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemanticsError::SizeBoundExceeded { nodes, bound } => write!(
                f,
                "framework has {nodes} nodes, above the enumeration bound {bound}"
            ),
            SemanticsError::MissingPreference(g) => write!(f, "no preference for goal `{g}`"),
        }
    }
}

impl core::error::Error for SemanticsError {}

/// Directed graph on nodes `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    out: Vec<NodeSet>,
    inc: Vec<NodeSet>,
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Digraph {
            n,
            out: alloc::vec![NodeSet::EMPTY; n],
            inc: alloc::vec![NodeSet::EMPTY; n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Digraph::new(n);
        for (a, b) in edges {
            g.add_edge(*a, *b);
        }
        g
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a < self.n && b < self.n && a < MAX_NODES && b < MAX_NODES, "node out of range");
        self.out[a].insert(b);
        self.inc[b].insert(a);
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn attacks(&self, a: usize, b: usize) -> bool {
        self.out[a].contains(b)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |a| self.out[a].iter().map(move |b| (a, b)))
    }

    pub fn is_conflict_free(&self, s: NodeSet) -> bool {
        s.iter().all(|a| !self.out[a].intersects(s))
    }

    /// Nodes attacked by some member of `s`.
    pub fn attacked_by(&self, s: NodeSet) -> NodeSet {
        s.iter().fold(NodeSet::EMPTY, |acc, a| acc.union(self.out[a]))
    }

    /// `s ∪ s⁺`.
    pub fn range(&self, s: NodeSet) -> NodeSet {
        s.union(self.attacked_by(s))
    }

    pub fn is_admissible(&self, s: NodeSet) -> bool {
        if !self.is_conflict_free(s) {
            return false;
        }
        let plus = self.attacked_by(s);
        s.iter().all(|a| self.inc[a].is_subset(plus))
    }

    fn check_bound(&self, bound: usize) -> Result<(), SemanticsError> {
        let limit = bound.min(MAX_NODES);
        if self.n > limit {
            return Err(SemanticsError::SizeBoundExceeded {
                nodes: self.n,
                bound: limit,
            });
        }
        Ok(())
    }

    /// Every conflict-free subset, ∅ included, in canonical order.
    pub fn conflict_free_sets(&self, bound: usize) -> Result<Vec<NodeSet>, SemanticsError> {
        self.check_bound(bound)?;
        let mut out = Vec::new();
        self.extend_cf(0, NodeSet::EMPTY, NodeSet::EMPTY, &mut out);
        out.sort();
        Ok(out)
    }

    fn extend_cf(&self, i: usize, cur: NodeSet, blocked: NodeSet, out: &mut Vec<NodeSet>) {
        if i == self.n {
            out.push(cur);
            return;
        }
        self.extend_cf(i + 1, cur, blocked, out);
        if !blocked.contains(i) && !self.out[i].contains(i) {
            let blocked = blocked.union(self.out[i]).union(self.inc[i]);
            self.extend_cf(i + 1, cur.with(i), blocked, out);
        }
    }

    pub fn admissible_sets(&self, bound: usize) -> Result<Vec<NodeSet>, SemanticsError> {
        Ok(self
            .conflict_free_sets(bound)?
            .into_iter()
            .filter(|s| self.is_admissible(*s))
            .collect())
    }

    /// Inclusion-maximal admissible sets.
    pub fn preferred_extensions(&self, bound: usize) -> Result<Vec<NodeSet>, SemanticsError> {
        Ok(maximal(&self.admissible_sets(bound)?))
    }

    /// Conflict-free sets whose range is inclusion-maximal.
    pub fn stage_extensions(&self, bound: usize) -> Result<Vec<NodeSet>, SemanticsError> {
        let cf = self.conflict_free_sets(bound)?;
        let ranges: Vec<NodeSet> = cf.iter().map(|s| self.range(*s)).collect();
        Ok(cf
            .iter()
            .zip(&ranges)
            .filter(|(_, r)| !ranges.iter().any(|o| r.is_strict_subset(*o)))
            .map(|(s, _)| *s)
            .collect())
    }
}

/// Inclusion-maximal members of `sets`.
pub fn maximal(sets: &[NodeSet]) -> Vec<NodeSet> {
    let mut out: Vec<NodeSet> = sets
        .iter()
        .filter(|s| !sets.iter().any(|o| s.is_strict_subset(*o)))
        .copied()
        .collect();
    out.sort();
    out.dedup();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GoalCounting {
    /// Count distinct pursuable goals among the members' goals.
    PursuableOnly,
    /// Count members.
    AllElements,
}

/// How framework nodes map to goals and how sets are scored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Valuation {
    goals: Vec<Literal>,
    pursuable: BTreeSet<Literal>,
    prefs: alloc::collections::BTreeMap<Literal, Rational>,
    counting: GoalCounting,
}

impl Valuation {
    /// Fails with the first node goal lacking a preference.
    pub fn new(
        goals: Vec<Literal>,
        pursuable: BTreeSet<Literal>,
        prefs: alloc::collections::BTreeMap<Literal, Rational>,
        counting: GoalCounting,
    ) -> Result<Self, Literal> {
        if let Some(g) = goals.iter().find(|g| !prefs.contains_key(*g)) {
            return Err(g.clone());
        }
        Ok(Valuation {
            goals,
            pursuable,
            prefs,
            counting,
        })
    }

    pub fn goal(&self, node: usize) -> &Literal {
        &self.goals[node]
    }

    pub fn counting(&self) -> GoalCounting {
        self.counting
    }

    /// COMP_GOALS: distinct goals of the members.
    pub fn comp_goals(&self, s: NodeSet) -> BTreeSet<Literal> {
        s.iter().map(|i| self.goals[i].clone()).collect()
    }

    pub fn goal_count(&self, s: NodeSet) -> usize {
        match self.counting {
            GoalCounting::PursuableOnly => self
                .comp_goals(s)
                .iter()
                .filter(|g| self.pursuable.contains(*g))
                .count(),
            GoalCounting::AllElements => s.len(),
        }
    }

    /// Σ PREF over the distinct goals of the members.
    pub fn utility(&self, s: NodeSet) -> Rational {
        self.comp_goals(s).iter().map(|g| self.prefs[g]).sum()
    }
}

fn keep_best<K: Ord + Copy>(sets: &[NodeSet], key: impl Fn(NodeSet) -> K) -> Vec<NodeSet> {
    let Some(best) = sets.iter().map(|s| key(*s)).max() else {
        return Vec::new();
    };
    sets.iter().copied().filter(|s| key(*s) == best).collect()
}

/// MAX_GOAL.
pub fn max_goal(sets: &[NodeSet], val: &Valuation) -> Vec<NodeSet> {
    keep_best(sets, |s| val.goal_count(s))
}

/// MAX_UTIL.
pub fn max_util(sets: &[NodeSet], val: &Valuation) -> Vec<NodeSet> {
    keep_best(sets, |s| val.utility(s))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Policy {
    GoalsFirst,
    UtilityFirst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StageName {
    ConflictFree,
    MaxGoal,
    MaxUtil,
    Maximal,
}

impl fmt::Display for StageName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StageName::ConflictFree => "conflict_free",
            StageName::MaxGoal => "max_goal",
            StageName::MaxUtil => "max_util",
            StageName::Maximal => "maximal",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage {
    pub name: StageName,
    pub kept: Vec<NodeSet>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelectionResult {
    pub trace: Vec<Stage>,
    pub proper_extensions: Vec<NodeSet>,
    pub compatible_goal_sets: Vec<BTreeSet<Literal>>,
    /// (goal count, utility) per proper extension.
    pub metrics: Vec<(usize, Rational)>,
}

impl SelectionResult {
    pub fn conflict_free(&self) -> &[NodeSet] {
        &self.trace[0].kept
    }
}

/// Conflict-free sets, then the policy's first criterion, the second only
/// when more than one set survives, then inclusion-maximality.
pub fn select(
    g: &Digraph,
    val: &Valuation,
    policy: Policy,
    bound: usize,
) -> Result<SelectionResult, SemanticsError> {
    let cf = g.conflict_free_sets(bound)?;
    let mut trace = alloc::vec![Stage {
        name: StageName::ConflictFree,
        kept: cf.clone(),
    }];
    let (first, second): (StageName, StageName) = match policy {
        Policy::GoalsFirst => (StageName::MaxGoal, StageName::MaxUtil),
        Policy::UtilityFirst => (StageName::MaxUtil, StageName::MaxGoal),
    };
    let apply = |name: StageName, sets: &[NodeSet]| match name {
        StageName::MaxGoal => max_goal(sets, val),
        StageName::MaxUtil => max_util(sets, val),
        _ => unreachable!(),
    };
    let mut current = apply(first, &cf);
    trace.push(Stage {
        name: first,
        kept: current.clone(),
    });
    if current.len() > 1 {
        current = apply(second, &current);
        trace.push(Stage {
            name: second,
            kept: current.clone(),
        });
    }
    let proper = maximal(&current);
    trace.push(Stage {
        name: StageName::Maximal,
        kept: proper.clone(),
    });
    Ok(SelectionResult {
        compatible_goal_sets: proper.iter().map(|s| val.comp_goals(*s)).collect(),
        metrics: proper.iter().map(|s| (val.goal_count(*s), val.utility(*s))).collect(),
        proper_extensions: proper,
        trace,
    })
}
