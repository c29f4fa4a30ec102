//! Partial plans, instrumental arguments and the argument store.
//!
//! Every goal-rooted subtree of a stored argument is itself stored. Structural
//! relations (sub-argument, co-location, node identity) are keyed on the
//! content id, so a clone created with [`ArgumentStore::with_clone`] behaves
//! exactly like its original everywhere except in its own id.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use sha2::{Digest, Sha256};

use crate::kb::{KnowledgeBase, PlanRule, RuleId};
use crate::literal::{Literal, ResourceAtom};

/// Stable argument identifier, printed as 16 hex digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArgId(pub u64);

impl fmt::Display for ArgId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

/// `[H, ψ]`. A goal node is identified by the rule it instantiates; the
/// other variants are elementary leaves.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PartialPlan {
    Rule(RuleId),
    Belief(Literal),
    Action(Literal),
    Resource(ResourceAtom),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArgError {
    CyclicGoalDependency(Vec<Literal>),
    NoRuleForGoal(Literal),
    UnknownGoal(Literal),
    UnknownArgument(ArgId),
}

impl fmt::Display for ArgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArgError::CyclicGoalDependency(path) => {
                f.write_str("cyclic goal dependency: ")?;
                for (i, g) in path.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" -> ")?;
                    }
                    write!(f, "{g}")?;
                }
                Ok(())
            }
            ArgError::NoRuleForGoal(g) => write!(f, "goal `{g}` is the head of no rule"),
            ArgError::UnknownGoal(g) => write!(f, "unknown goal `{g}`"),
            ArgError::UnknownArgument(id) => write!(f, "unknown argument {id}"),
        }
    }
}

impl core::error::Error for ArgError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Logical,
    Resource,
    Whole,
}

/// One instrumental argument. `children` holds the store indices of the
/// sub-arguments for the root rule's subgoals, in subgoal order.
#[derive(Clone, Debug)]
pub struct Argument {
    pub id: ArgId,
    pub content: ArgId,
    pub claim: Literal,
    pub rule: RuleId,
    pub children: Vec<usize>,
    nodes: BTreeSet<ArgId>,
    support: BTreeSet<PartialPlan>,
    rec: BTreeSet<(ArgId, ResourceAtom)>,
    size: usize,
}

impl Argument {
    /// Content ids of every goal node in the tree, the root included.
    pub fn nodes(&self) -> &BTreeSet<ArgId> {
        &self.nodes
    }

    pub fn support(&self) -> &BTreeSet<PartialPlan> {
        &self.support
    }

    /// Resource atoms tagged with the content id of the goal node requiring them.
    pub fn rec(&self) -> &BTreeSet<(ArgId, ResourceAtom)> {
        &self.rec
    }

    pub fn rec_atoms(&self) -> BTreeSet<ResourceAtom> {
        self.rec.iter().map(|(_, r)| r.clone()).collect()
    }

    /// Number of tree nodes, leaves included, counting repeated subtrees each time.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn rules(&self) -> impl Iterator<Item = RuleId> + '_ {
        self.support.iter().filter_map(|p| match p {
            PartialPlan::Rule(r) => Some(*r),
            _ => None,
        })
    }

    pub fn beliefs(&self) -> impl Iterator<Item = &Literal> {
        self.support.iter().filter_map(|p| match p {
            PartialPlan::Belief(l) => Some(l),
            _ => None,
        })
    }

    pub fn actions(&self) -> impl Iterator<Item = &Literal> {
        self.support.iter().filter_map(|p| match p {
            PartialPlan::Action(l) => Some(l),
            _ => None,
        })
    }
}

/// All instrumental arguments of one knowledge base, sorted by id.
#[derive(Clone, Debug)]
pub struct ArgumentStore {
    kb: KnowledgeBase,
    args: Vec<Argument>,
    index: BTreeMap<ArgId, usize>,
    by_claim: BTreeMap<Literal, Vec<usize>>,
    clones: u64,
}

struct Builder<'a> {
    kb: &'a KnowledgeBase,
    memo: BTreeMap<Literal, Vec<ArgId>>,
    stack: Vec<Literal>,
    made: BTreeMap<ArgId, (RuleId, Vec<ArgId>)>,
}

fn rule_key(rule: &PlanRule) -> String {
    use core::fmt::Write;
    let mut s = String::new();
    let _ = write!(s, "{rule}");
    s
}

fn content_hash(rule: &PlanRule, children: &[ArgId]) -> ArgId {
    let mut h = Sha256::new();
    h.update(rule_key(rule).as_bytes());
    for c in children {
        h.update(b"|");
        h.update(c.0.to_be_bytes());
    }
    let digest = h.finalize();
    let mut first = [0u8; 8];
    first.copy_from_slice(&digest[..8]);
    ArgId(u64::from_be_bytes(first))
}

impl Builder<'_> {
    fn goal(&mut self, g: &Literal) -> Result<Vec<ArgId>, ArgError> {
        if let Some(done) = self.memo.get(g) {
            return Ok(done.clone());
        }
        if let Some(pos) = self.stack.iter().position(|s| s == g) {
            let mut path: Vec<Literal> = self.stack[pos..].to_vec();
            path.push(g.clone());
            return Err(ArgError::CyclicGoalDependency(path));
        }
        self.stack.push(g.clone());
        let mut out = Vec::new();
        for (rid, rule) in self.kb.rules().iter().enumerate() {
            if &rule.head != g {
                continue;
            }
            let mut options: Vec<Vec<ArgId>> = Vec::new();
            for sg in &rule.subgoals {
                options.push(self.goal(sg)?);
            }
            // cartesian product over the subgoals' alternatives
            let mut combos: Vec<Vec<ArgId>> = alloc::vec![Vec::new()];
            for opts in &options {
                let mut next = Vec::with_capacity(combos.len() * opts.len());
                for c in &combos {
                    for o in opts {
                        let mut c2 = c.clone();
                        c2.push(*o);
                        next.push(c2);
                    }
                }
                combos = next;
            }
            for children in combos {
                let id = content_hash(rule, &children);
                self.made.entry(id).or_insert((rid, children));
                out.push(id);
            }
        }
        self.stack.pop();
        if out.is_empty() {
            return Err(ArgError::NoRuleForGoal(g.clone()));
        }
        out.sort();
        out.dedup();
        self.memo.insert(g.clone(), out.clone());
        Ok(out)
    }
}

impl ArgumentStore {
    /// Builds every argument for every goal of `kb`.
    pub fn enumerate(kb: &KnowledgeBase) -> Result<Self, ArgError> {
        let mut b = Builder {
            kb,
            memo: BTreeMap::new(),
            stack: Vec::new(),
            made: BTreeMap::new(),
        };
        for g in kb.goals() {
            b.goal(g)?;
        }
        let made = b.made;

        // `made` is keyed by content id, so ids are already sorted.
        let index: BTreeMap<ArgId, usize> =
            made.keys().enumerate().map(|(i, id)| (*id, i)).collect();
        let mut args: Vec<Argument> = Vec::with_capacity(made.len());
        let mut by_claim: BTreeMap<Literal, Vec<usize>> =
            kb.goals().map(|g| (g.clone(), Vec::new())).collect();

        // Children always hash before use but not necessarily sort before
        // parents, so compute derived sets by memoized recursion.
        let mut derived: BTreeMap<ArgId, Derived> = BTreeMap::new();
        for id in made.keys() {
            derive(*id, kb, &made, &mut derived);
        }
        for (i, (id, (rid, children))) in made.iter().enumerate() {
            let d = derived.remove(id).expect("derived");
            let claim = kb.rule(*rid).head.clone();
            by_claim.get_mut(&claim).expect("goal").push(i);
            args.push(Argument {
                id: *id,
                content: *id,
                claim,
                rule: *rid,
                children: children.iter().map(|c| index[c]).collect(),
                nodes: d.nodes,
                support: d.support,
                rec: d.rec,
                size: d.size,
            });
        }
        Ok(ArgumentStore {
            kb: kb.clone(),
            args,
            index,
            by_claim,
            clones: 0,
        })
    }

    pub fn kb(&self) -> &KnowledgeBase {
        &self.kb
    }

    pub fn len(&self) -> usize {
        self.args.len()
    }

    pub fn is_empty(&self) -> bool {
        self.args.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Argument> {
        self.args.iter()
    }

    pub fn ids(&self) -> impl Iterator<Item = ArgId> + '_ {
        self.args.iter().map(|a| a.id)
    }

    pub fn get(&self, id: ArgId) -> Option<&Argument> {
        self.index.get(&id).map(|i| &self.args[*i])
    }

    pub fn arg(&self, id: ArgId) -> Result<&Argument, ArgError> {
        self.get(id).ok_or(ArgError::UnknownArgument(id))
    }

    pub fn at(&self, i: usize) -> &Argument {
        &self.args[i]
    }

    pub fn position(&self, id: ArgId) -> Option<usize> {
        self.index.get(&id).copied()
    }

    /// ARG(g).
    pub fn arg_for(&self, g: &Literal) -> Result<Vec<&Argument>, ArgError> {
        self.by_claim
            .get(g)
            .map(|v| v.iter().map(|i| &self.args[*i]).collect())
            .ok_or_else(|| ArgError::UnknownGoal(g.clone()))
    }

    /// `x` is a (non-strict) sub-argument of `y`.
    pub fn is_subargument(&self, x: &Argument, y: &Argument) -> bool {
        y.nodes.contains(&x.content)
    }

    /// Some stored argument contains both `x` and `y` as sub-arguments.
    pub fn colocated(&self, x: &Argument, y: &Argument) -> bool {
        self.args
            .iter()
            .any(|a| a.nodes.contains(&x.content) && a.nodes.contains(&y.content))
    }

    pub fn equivalent(&self, x: &Argument, y: &Argument, mode: Equivalence) -> bool {
        let logical = || x.claim == y.claim && x.support == y.support;
        let resource = || x.rec_atoms() == y.rec_atoms();
        match mode {
            Equivalence::Logical => logical(),
            Equivalence::Resource => resource(),
            Equivalence::Whole => logical() && resource(),
        }
    }

    /// A copy of the store with one extra argument structurally identical to
    /// `id` but carrying a fresh id.
    pub fn with_clone(&self, id: ArgId) -> Result<(ArgumentStore, ArgId), ArgError> {
        let orig = self.arg(id)?.clone();
        let mut salt = self.clones;
        let fresh = loop {
            salt += 1;
            let mut h = Sha256::new();
            h.update(b"clone");
            h.update(orig.content.0.to_be_bytes());
            h.update(salt.to_be_bytes());
            let d = h.finalize();
            let mut first = [0u8; 8];
            first.copy_from_slice(&d[..8]);
            let cand = ArgId(u64::from_be_bytes(first));
            if !self.index.contains_key(&cand) {
                break cand;
            }
        };
        let mut args = self.args.clone();
        let mut copy = orig;
        copy.id = fresh;
        // children are store indices of the old order; translate through ids
        let child_ids: Vec<Vec<ArgId>> = args
            .iter()
            .map(|a| a.children.iter().map(|c| self.args[*c].id).collect())
            .collect();
        let copy_children: Vec<ArgId> = copy.children.iter().map(|c| self.args[*c].id).collect();
        args.push(copy);
        let mut all_children = child_ids;
        all_children.push(copy_children);
        let mut order: Vec<usize> = (0..args.len()).collect();
        order.sort_by_key(|i| args[*i].id);
        let mut sorted: Vec<Argument> = Vec::with_capacity(args.len());
        let mut sorted_children: Vec<Vec<ArgId>> = Vec::with_capacity(args.len());
        for i in order {
            sorted.push(args[i].clone());
            sorted_children.push(all_children[i].clone());
        }
        let index: BTreeMap<ArgId, usize> =
            sorted.iter().enumerate().map(|(i, a)| (a.id, i)).collect();
        for (a, ch) in sorted.iter_mut().zip(sorted_children) {
            a.children = ch.iter().map(|c| index[c]).collect();
        }
        let mut by_claim: BTreeMap<Literal, Vec<usize>> =
            self.by_claim.keys().map(|g| (g.clone(), Vec::new())).collect();
        for (i, a) in sorted.iter().enumerate() {
            by_claim.get_mut(&a.claim).expect("goal").push(i);
        }
        Ok((
            ArgumentStore {
                kb: self.kb.clone(),
                args: sorted,
                index,
                by_claim,
                clones: salt,
            },
            fresh,
        ))
    }

    /// Order-independent digest of the stored ids, used to detect relations
    /// computed over different stores.
    pub fn fingerprint(&self) -> u64 {
        let mut h = Sha256::new();
        for a in &self.args {
            h.update(a.id.0.to_be_bytes());
        }
        let d = h.finalize();
        let mut first = [0u8; 8];
        first.copy_from_slice(&d[..8]);
        u64::from_be_bytes(first)
    }
}

struct Derived {
    nodes: BTreeSet<ArgId>,
    support: BTreeSet<PartialPlan>,
    rec: BTreeSet<(ArgId, ResourceAtom)>,
    size: usize,
}

fn derive(
    id: ArgId,
    kb: &KnowledgeBase,
    made: &BTreeMap<ArgId, (RuleId, Vec<ArgId>)>,
    memo: &mut BTreeMap<ArgId, Derived>,
) {
    if memo.contains_key(&id) {
        return;
    }
    let (rid, children) = &made[&id];
    let rule = kb.rule(*rid);
    let mut d = Derived {
        nodes: BTreeSet::new(),
        support: BTreeSet::new(),
        rec: BTreeSet::new(),
        size: 1 + rule.beliefs.len() + rule.actions.len() + rule.resources.len(),
    };
    d.nodes.insert(id);
    d.support.insert(PartialPlan::Rule(*rid));
    d.support
        .extend(rule.beliefs.iter().cloned().map(PartialPlan::Belief));
    d.support
        .extend(rule.actions.iter().cloned().map(PartialPlan::Action));
    d.support
        .extend(rule.resources.iter().cloned().map(PartialPlan::Resource));
    d.rec.extend(rule.resources.iter().map(|r| (id, r.clone())));
    for c in children {
        derive(*c, kb, made, memo);
        let cd = &memo[c];
        d.nodes.extend(cd.nodes.iter().copied());
        d.support.extend(cd.support.iter().cloned());
        d.rec.extend(cd.rec.iter().cloned());
        d.size += cd.size;
    }
    memo.insert(id, d);
}
