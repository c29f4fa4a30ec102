//! The agent's mental state: beliefs, actions, goals with preferences, plan
//! rules, pursuable goals and the resource summary.
//!
//! A [`KnowledgeBase`] can only be obtained through [`KbBuilder::build`],
//! which enforces every structural invariant the rest of the crate relies on.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::literal::{Literal, ResourceAtom};
use crate::rational::Rational;

/// Index of a rule in [`KnowledgeBase::rules`].
pub type RuleId = usize;

/// `b1 ∧ … ∧ g1 ∧ … ∧ a1 ∧ … ∧ res_q(..) ∧ … → head`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlanRule {
    pub head: Literal,
    pub beliefs: BTreeSet<Literal>,
    pub subgoals: BTreeSet<Literal>,
    pub actions: BTreeSet<Literal>,
    pub resources: BTreeSet<ResourceAtom>,
}

impl PlanRule {
    pub fn premise_len(&self) -> usize {
        self.beliefs.len() + self.subgoals.len() + self.actions.len() + self.resources.len()
    }

    pub fn is_fact(&self) -> bool {
        self.premise_len() == 0
    }
}

/// Premises in canonical order (beliefs, subgoals, actions, resources), then `-> head`.
impl fmt::Display for PlanRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| -> fmt::Result {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            Ok(())
        };
        for l in self.beliefs.iter().chain(&self.subgoals).chain(&self.actions) {
            sep(f)?;
            write!(f, "{l}")?;
        }
        for r in &self.resources {
            sep(f)?;
            write!(f, "{r}")?;
        }
        if self.is_fact() {
            write!(f, "-> {}", self.head)
        } else {
            write!(f, " -> {}", self.head)
        }
    }
}

/// ρ: resource name → available units.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ResourceSummary {
    availability: BTreeMap<String, u64>,
}

impl ResourceSummary {
    pub fn get(&self, resource: &str) -> Option<u64> {
        self.availability.get(resource).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.availability.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn contains(&self, resource: &str) -> bool {
        self.availability.contains_key(resource)
    }

    pub fn len(&self) -> usize {
        self.availability.len()
    }

    pub fn is_empty(&self) -> bool {
        self.availability.is_empty()
    }
}

/// Which of the pairwise-disjoint symbol sets a literal was declared in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolKind {
    Belief,
    Action,
    Goal,
    Resource,
}

impl fmt::Display for SymbolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymbolKind::Belief => "beliefs",
            SymbolKind::Action => "actions",
            SymbolKind::Goal => "goals",
            SymbolKind::Resource => "resources",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KbError {
    UndeclaredSymbol(String),
    DisjointnessViolation {
        name: String,
        sets: (SymbolKind, SymbolKind),
    },
    DuplicateResourceDeclaration(String),
    PreferenceOutOfRange {
        goal: Literal,
        value: Rational,
    },
    DuplicateGoalDeclaration(Literal),
    HeadInOwnPremise(String),
    HeadNotGoal(Literal),
    NoRuleForGoal(Literal),
    UnknownResource(String),
    UnknownGoal(Literal),
}

impl fmt::Display for KbError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KbError::UndeclaredSymbol(n) => write!(f, "undeclared symbol `{n}`"),
            KbError::DisjointnessViolation { name, sets } => {
                write!(f, "`{name}` declared in both {} and {}", sets.0, sets.1)
            }
            KbError::DuplicateResourceDeclaration(n) => {
                write!(f, "resource `{n}` declared more than once")
            }
            KbError::PreferenceOutOfRange { goal, value } => {
                write!(f, "preference {value} of goal `{goal}` is outside [0,1]")
            }
            KbError::DuplicateGoalDeclaration(g) => write!(f, "goal `{g}` declared more than once"),
            KbError::HeadInOwnPremise(r) => write!(f, "rule `{r}` has its head among its subgoals"),
            KbError::HeadNotGoal(l) => write!(f, "rule head `{l}` is not a declared goal"),
            KbError::NoRuleForGoal(g) => write!(f, "goal `{g}` is the head of no rule"),
            KbError::UnknownResource(r) => write!(f, "unknown resource `{r}`"),
            KbError::UnknownGoal(g) => write!(f, "unknown goal `{g}`"),
        }
    }
}

impl core::error::Error for KbError {}

/// One premise element as written, before classification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Premise {
    Literal(Literal),
    Resource(ResourceAtom),
}

/// Unvalidated rule: premises in source order plus the head.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawRule {
    pub premises: Vec<Premise>,
    pub head: Literal,
}

/// Collects declarations in any order; [`KbBuilder::build`] validates them.
#[derive(Clone, Debug, Default)]
pub struct KbBuilder {
    beliefs: Vec<Literal>,
    actions: Vec<Literal>,
    goals: Vec<(Literal, Rational)>,
    resources: Vec<(String, u64)>,
    pursuable: Vec<Literal>,
    rules: Vec<RawRule>,
}

impl KbBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn belief(&mut self, l: Literal) -> &mut Self {
        self.beliefs.push(l);
        self
    }

    pub fn action(&mut self, l: Literal) -> &mut Self {
        self.actions.push(l);
        self
    }

    pub fn goal(&mut self, l: Literal, pref: Rational) -> &mut Self {
        self.goals.push((l, pref));
        self
    }

    pub fn resource(&mut self, name: impl Into<String>, available: u64) -> &mut Self {
        self.resources.push((name.into(), available));
        self
    }

    pub fn pursuable(&mut self, l: Literal) -> &mut Self {
        self.pursuable.push(l);
        self
    }

    pub fn rule(&mut self, premises: Vec<Premise>, head: Literal) -> &mut Self {
        self.rules.push(RawRule { premises, head });
        self
    }

    pub fn build(&self) -> Result<KnowledgeBase, KbError> {
        let mut resources = BTreeMap::new();
        for (name, amount) in &self.resources {
            if resources.insert(name.clone(), *amount).is_some() {
                return Err(KbError::DuplicateResourceDeclaration(name.clone()));
            }
        }

        let mut goals: BTreeMap<Literal, Rational> = BTreeMap::new();
        for (g, p) in &self.goals {
            if *p > Rational::ONE {
                return Err(KbError::PreferenceOutOfRange {
                    goal: g.clone(),
                    value: *p,
                });
            }
            if goals.insert(g.clone(), *p).is_some() {
                return Err(KbError::DuplicateGoalDeclaration(g.clone()));
            }
        }
        let beliefs: BTreeSet<Literal> = self.beliefs.iter().cloned().collect();
        let actions: BTreeSet<Literal> = self.actions.iter().cloned().collect();

        // B, G, A are disjoint on atoms; resource names are disjoint from every literal name.
        let mut owner: BTreeMap<&crate::literal::Atom, SymbolKind> = BTreeMap::new();
        let declared = beliefs
            .iter()
            .map(|l| (l, SymbolKind::Belief))
            .chain(actions.iter().map(|l| (l, SymbolKind::Action)))
            .chain(goals.keys().map(|l| (l, SymbolKind::Goal)));
        for (l, kind) in declared {
            if let Some(prev) = owner.insert(&l.atom, kind) {
                if prev != kind {
                    return Err(KbError::DisjointnessViolation {
                        name: l.atom.to_string(),
                        sets: (prev, kind),
                    });
                }
            }
            if resources.contains_key(l.name()) {
                return Err(KbError::DisjointnessViolation {
                    name: String::from(l.name()),
                    sets: (kind, SymbolKind::Resource),
                });
            }
        }

        let mut pursuable = BTreeSet::new();
        for g in &self.pursuable {
            if !goals.contains_key(g) {
                return Err(KbError::UndeclaredSymbol(g.to_string()));
            }
            pursuable.insert(g.clone());
        }

        let mut rules = BTreeSet::new();
        for raw in &self.rules {
            if !goals.contains_key(&raw.head) {
                if beliefs.contains(&raw.head) || actions.contains(&raw.head) {
                    return Err(KbError::HeadNotGoal(raw.head.clone()));
                }
                return Err(KbError::UndeclaredSymbol(raw.head.to_string()));
            }
            let mut rule = PlanRule {
                head: raw.head.clone(),
                beliefs: BTreeSet::new(),
                subgoals: BTreeSet::new(),
                actions: BTreeSet::new(),
                resources: BTreeSet::new(),
            };
            for p in &raw.premises {
                match p {
                    Premise::Resource(r) => {
                        if !resources.contains_key(&r.resource) {
                            return Err(KbError::UndeclaredSymbol(r.resource.clone()));
                        }
                        rule.resources.insert(r.clone());
                    }
                    Premise::Literal(l) => {
                        if beliefs.contains(l) {
                            rule.beliefs.insert(l.clone());
                        } else if actions.contains(l) {
                            rule.actions.insert(l.clone());
                        } else if goals.contains_key(l) {
                            rule.subgoals.insert(l.clone());
                        } else {
                            return Err(KbError::UndeclaredSymbol(l.to_string()));
                        }
                    }
                }
            }
            if rule.subgoals.contains(&rule.head) {
                return Err(KbError::HeadInOwnPremise(rule.to_string()));
            }
            rules.insert(rule);
        }
        let rules: Vec<PlanRule> = rules.into_iter().collect();

        for g in goals.keys() {
            if !rules.iter().any(|r| &r.head == g) {
                return Err(KbError::NoRuleForGoal(g.clone()));
            }
        }

        Ok(KnowledgeBase {
            beliefs,
            actions,
            goals,
            rules,
            pursuable,
            resources: ResourceSummary {
                availability: resources,
            },
        })
    }
}

/// The agent tuple ⟨KB, PR, G_p, PREF, RES_sum⟩. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnowledgeBase {
    beliefs: BTreeSet<Literal>,
    actions: BTreeSet<Literal>,
    goals: BTreeMap<Literal, Rational>,
    rules: Vec<PlanRule>,
    pursuable: BTreeSet<Literal>,
    resources: ResourceSummary,
}

impl KnowledgeBase {
    pub fn beliefs(&self) -> &BTreeSet<Literal> {
        &self.beliefs
    }

    pub fn actions(&self) -> &BTreeSet<Literal> {
        &self.actions
    }

    pub fn goals(&self) -> impl Iterator<Item = &Literal> {
        self.goals.keys()
    }

    pub fn is_goal(&self, l: &Literal) -> bool {
        self.goals.contains_key(l)
    }

    /// PREF restricted to declared goals.
    pub fn preferences(&self) -> &BTreeMap<Literal, Rational> {
        &self.goals
    }

    /// Rules in canonical order; a rule's position is its [`RuleId`].
    pub fn rules(&self) -> &[PlanRule] {
        &self.rules
    }

    pub fn rule(&self, id: RuleId) -> &PlanRule {
        &self.rules[id]
    }

    pub fn pursuable(&self) -> &BTreeSet<Literal> {
        &self.pursuable
    }

    pub fn resources(&self) -> &ResourceSummary {
        &self.resources
    }

    /// ρ(r).
    pub fn availability(&self, resource: &str) -> Result<u64, KbError> {
        self.resources
            .get(resource)
            .ok_or_else(|| KbError::UnknownResource(String::from(resource)))
    }

    /// PREF(g).
    pub fn preference(&self, goal: &Literal) -> Result<Rational, KbError> {
        self.goals
            .get(goal)
            .copied()
            .ok_or_else(|| KbError::UnknownGoal(goal.clone()))
    }

    pub fn kind_of(&self, l: &Literal) -> Option<SymbolKind> {
        if self.beliefs.contains(l) {
            Some(SymbolKind::Belief)
        } else if self.actions.contains(l) {
            Some(SymbolKind::Action)
        } else if self.goals.contains_key(l) {
            Some(SymbolKind::Goal)
        } else {
            None
        }
    }
}
