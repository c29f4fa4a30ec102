//! Justified conclusions and the rationality postulates.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::arguments::{ArgId, Argument, ArgumentStore};
use crate::attacks::{
    joint_formulas, resource_entails, superfluous_attacks, AttackRelation, Category, ResourceFormula,
};
use crate::kb::{KnowledgeBase, ResourceSummary, RuleId};
use crate::literal::Literal;

/// CONCS per extension and their intersection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConclusionSets {
    pub per_extension: Vec<BTreeSet<Literal>>,
    pub output: BTreeSet<Literal>,
}

pub fn concs(extensions: &[Vec<ArgId>], store: &ArgumentStore) -> ConclusionSets {
    let per_extension: Vec<BTreeSet<Literal>> = extensions
        .iter()
        .map(|e| {
            e.iter()
                .filter_map(|id| store.get(*id).map(|a| a.claim.clone()))
                .collect()
        })
        .collect();
    let output = match per_extension.split_first() {
        None => BTreeSet::new(),
        Some((first, rest)) => rest.iter().fold(first.clone(), |acc, s| {
            acc.intersection(s).cloned().collect()
        }),
    };
    ConclusionSets {
        per_extension,
        output,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Postulate {
    DirectConsistency,
    Closure,
    IndirectConsistency,
}

impl fmt::Display for Postulate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Postulate::DirectConsistency => "direct_consistency",
            Postulate::Closure => "closure",
            Postulate::IndirectConsistency => "indirect_consistency",
        })
    }
}

/// Which conclusion set a closure-based violation concerns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Scope {
    Extension(usize),
    Output,
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scope::Extension(i) => write!(f, "extension {i}"),
            Scope::Output => f.write_str("output"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `literal` occurs in `left`, its complement in `right`.
    Complementary {
        category: Category,
        left: ArgId,
        right: ArgId,
        literal: Literal,
    },
    Resource {
        left: ArgId,
        right: ArgId,
        formula: ResourceFormula,
    },
    Superfluous {
        left: ArgId,
        right: ArgId,
        goals: (Literal, Literal),
    },
    NotClosed {
        scope: Scope,
        rule: RuleId,
        derived: Literal,
    },
    InconsistentClosure {
        scope: Scope,
        literal: Literal,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Complementary {
                category,
                left,
                right,
                literal,
            } => write!(
                f,
                "{category} {literal} in {left} and {} in {right}",
                literal.negate()
            ),
            Violation::Resource {
                left,
                right,
                formula,
            } => write!(f, "{left} and {right} need {formula}"),
            Violation::Superfluous { left, right, goals } => {
                write!(f, "{left} and {right} are superfluous for {} and {}", goals.0, goals.1)
            }
            Violation::NotClosed {
                scope,
                rule,
                derived,
            } => write!(f, "{scope}: rule {rule} derives {derived}"),
            Violation::InconsistentClosure { scope, literal } => {
                write!(f, "{scope}: closure holds {literal} and {}", literal.negate())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PostulateReport {
    pub postulate: Postulate,
    pub violations: Vec<Violation>,
}

impl PostulateReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn goal_nodes(store: &ArgumentStore, a: &Argument) -> BTreeSet<Literal> {
    a.rules().map(|r| store.kb().rule(r).head.clone()).collect()
}

fn category_sets(store: &ArgumentStore, a: &Argument) -> [(Category, BTreeSet<Literal>); 3] {
    [
        (Category::Belief, a.beliefs().cloned().collect()),
        (Category::Action, a.actions().cloned().collect()),
        (Category::Goal, goal_nodes(store, a)),
    ]
}

/// Direct consistency of one extension, using a precomputed R_s.
pub fn check_direct_consistency_with(
    extension: &[ArgId],
    store: &ArgumentStore,
    summary: &ResourceSummary,
    superfluous: &AttackRelation,
) -> PostulateReport {
    let members: Vec<&Argument> = extension.iter().filter_map(|id| store.get(*id)).collect();
    let mut violations = Vec::new();
    for (i, x) in members.iter().enumerate() {
        for (j, y) in members.iter().enumerate() {
            let xs = category_sets(store, x);
            let ys = category_sets(store, y);
            for ((cat, xl), (_, yl)) in xs.iter().zip(ys.iter()) {
                for l in xl.iter().filter(|l| !l.negated) {
                    if yl.contains(&l.negate()) {
                        violations.push(Violation::Complementary {
                            category: *cat,
                            left: x.id,
                            right: y.id,
                            literal: l.clone(),
                        });
                    }
                }
            }
            if i <= j {
                for mut f in joint_formulas(store, x, y) {
                    f.available = summary.get(&f.resource).unwrap_or(0);
                    if !resource_entails(summary, &f).unwrap_or(false) {
                        violations.push(Violation::Resource {
                            left: x.id,
                            right: y.id,
                            formula: f,
                        });
                    }
                }
            }
            if i == j {
                continue;
            }
            let same_claim = x.claim == y.claim && x.support() != y.support();
            if same_claim || superfluous.contains(x.id, y.id) {
                violations.push(Violation::Superfluous {
                    left: x.id,
                    right: y.id,
                    goals: (x.claim.clone(), y.claim.clone()),
                });
            }
        }
    }
    PostulateReport {
        postulate: Postulate::DirectConsistency,
        violations,
    }
}

/// Direct consistency: BEL, ACT and GOA free of complementary pairs, the
/// demand of every member and every pair of members within availability, and
/// no superfluous pair.
pub fn check_direct_consistency(
    extension: &[ArgId],
    store: &ArgumentStore,
    summary: &ResourceSummary,
) -> PostulateReport {
    check_direct_consistency_with(extension, store, summary, &superfluous_attacks(store))
}

/// Cl_PR over a set of goals: a rule adds its head once its whole premise is
/// in the set. Returns the closure and the rule that first derived each new goal.
pub fn closure_trace(goals: &BTreeSet<Literal>, kb: &KnowledgeBase) -> (BTreeSet<Literal>, Vec<(RuleId, Literal)>) {
    let mut closed = goals.clone();
    let mut fired = Vec::new();
    loop {
        let mut changed = false;
        for (rid, rule) in kb.rules().iter().enumerate() {
            if closed.contains(&rule.head) {
                continue;
            }
            let premise_in = rule.beliefs.is_empty()
                && rule.actions.is_empty()
                && rule.resources.is_empty()
                && rule.subgoals.iter().all(|g| closed.contains(g));
            if premise_in {
                closed.insert(rule.head.clone());
                fired.push((rid, rule.head.clone()));
                changed = true;
            }
        }
        if !changed {
            return (closed, fired);
        }
    }
}

pub fn closure_pr(goals: &BTreeSet<Literal>, kb: &KnowledgeBase) -> BTreeSet<Literal> {
    closure_trace(goals, kb).0
}

fn scopes(c: &ConclusionSets) -> impl Iterator<Item = (Scope, &BTreeSet<Literal>)> {
    c.per_extension
        .iter()
        .enumerate()
        .map(|(i, s)| (Scope::Extension(i), s))
        .chain(core::iter::once((Scope::Output, &c.output)))
}

/// Every CONCS and the Output equal their own closure.
pub fn check_closure(extensions: &[Vec<ArgId>], store: &ArgumentStore) -> PostulateReport {
    let c = concs(extensions, store);
    let mut violations = Vec::new();
    for (scope, set) in scopes(&c) {
        let (_, fired) = closure_trace(set, store.kb());
        for (rule, derived) in fired {
            violations.push(Violation::NotClosed {
                scope,
                rule,
                derived,
            });
        }
    }
    PostulateReport {
        postulate: Postulate::Closure,
        violations,
    }
}

/// The closures of every CONCS and of the Output hold no complementary pair.
pub fn check_indirect(extensions: &[Vec<ArgId>], store: &ArgumentStore) -> PostulateReport {
    let c = concs(extensions, store);
    let mut violations = Vec::new();
    for (scope, set) in scopes(&c) {
        let closed = closure_pr(set, store.kb());
        for l in &closed {
            if !l.negated && closed.contains(&l.negate()) {
                violations.push(Violation::InconsistentClosure {
                    scope,
                    literal: l.clone(),
                });
            }
        }
    }
    PostulateReport {
        postulate: Postulate::IndirectConsistency,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::{KbBuilder, Premise};
    use crate::rational::Rational;
    use alloc::vec;

    fn p(n: &str) -> Literal {
        Literal::prop(n)
    }

    #[test]
    fn fact_rule_closes_empty_set() {
        let mut b = KbBuilder::new();
        b.goal(p("g"), Rational::ONE).rule(vec![], p("g"));
        let kb = b.build().unwrap();
        let c = closure_pr(&BTreeSet::new(), &kb);
        assert_eq!(c, [p("g")].into_iter().collect());
        assert_eq!(closure_pr(&c, &kb), c);
    }

    #[test]
    fn chained_goal_rule_breaks_closure() {
        let mut b = KbBuilder::new();
        b.belief(p("b"))
            .goal(p("g1"), Rational::ONE)
            .goal(p("g2"), Rational::ONE)
            .rule(vec![Premise::Literal(p("b"))], p("g1"))
            .rule(vec![Premise::Literal(p("g1"))], p("g2"));
        let kb = b.build().unwrap();
        let store = ArgumentStore::enumerate(&kb).unwrap();
        let g1 = store.arg_for(&p("g1")).unwrap()[0].id;
        let report = check_closure(&[vec![g1]], &store);
        assert!(!report.passed());
        assert!(matches!(
            &report.violations[0],
            Violation::NotClosed { derived, .. } if *derived == p("g2")
        ));
    }

    #[test]
    fn empty_extension_is_consistent() {
        let mut b = KbBuilder::new();
        b.goal(p("g"), Rational::ONE).rule(vec![], p("g"));
        let kb = b.build().unwrap();
        let store = ArgumentStore::enumerate(&kb).unwrap();
        assert!(check_direct_consistency(&[], &store, kb.resources()).passed());
        let c = concs(&[vec![]], &store);
        assert!(c.output.is_empty());
    }
}
