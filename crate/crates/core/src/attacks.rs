//! The three attack relations between instrumental arguments.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::arguments::{ArgId, Argument, ArgumentStore};
use crate::kb::{KbError, ResourceSummary};
use crate::literal::Literal;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AttackKind {
    Terminal,
    Resource,
    Superfluous,
    General,
}

impl AttackKind {
    pub fn short(&self) -> &'static str {
        match self {
            AttackKind::Terminal => "t",
            AttackKind::Resource => "r",
            AttackKind::Superfluous => "s",
            AttackKind::General => "g",
        }
    }
}

impl fmt::Display for AttackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AttackKind::Terminal => "terminal",
            AttackKind::Resource => "resource",
            AttackKind::Superfluous => "superfluous",
            AttackKind::General => "general",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    Belief,
    Action,
    Goal,
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Category::Belief => "belief",
            Category::Action => "action",
            Category::Goal => "goal",
        })
    }
}

/// Joint demand of two arguments for one resource.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ResourceFormula {
    pub resource: String,
    /// (argument, goal node, amount), one entry per distinct node.
    pub occurrences: Vec<(ArgId, ArgId, u64)>,
    pub required: u64,
    pub available: u64,
}

impl fmt::Display for ResourceFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.resource)?;
        for (i, (_, _, amt)) in self.occurrences.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{amt}")?;
        }
        write!(f, "={}>{}", self.required, self.available)
    }
}

/// ⊢_r: the summary covers the formula's demand.
pub fn resource_entails(summary: &ResourceSummary, formula: &ResourceFormula) -> Result<bool, KbError> {
    let available = summary
        .get(&formula.resource)
        .ok_or_else(|| KbError::UnknownResource(formula.resource.clone()))?;
    Ok(available >= formula.required)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SuperfluityCase {
    SameClaim = 1,
    SharedAttackers = 2,
    Propagated = 3,
}

impl SuperfluityCase {
    pub fn number(&self) -> u8 {
        *self as u8
    }
}

/// Why an edge is present.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Witness {
    /// The attacker's tree concludes `literal`, the target's its complement.
    Rebuttal { category: Category, literal: Literal },
    Resource(ResourceFormula),
    Superfluous(SuperfluityCase),
}

impl Witness {
    pub fn kind(&self) -> AttackKind {
        match self {
            Witness::Rebuttal { .. } => AttackKind::Terminal,
            Witness::Resource(_) => AttackKind::Resource,
            Witness::Superfluous(_) => AttackKind::Superfluous,
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Rebuttal { category, literal } => {
                write!(f, "t:{category}:{literal}/{}", literal.negate())
            }
            Witness::Resource(r) => write!(f, "r:{r}"),
            Witness::Superfluous(c) => write!(f, "s:case{}", c.number()),
        }
    }
}

/// A typed set of directed edges with per-edge witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttackRelation {
    pub kind: AttackKind,
    pub(crate) store: u64,
    edges: BTreeMap<(ArgId, ArgId), Vec<Witness>>,
}

impl AttackRelation {
    pub fn empty(kind: AttackKind, store: &ArgumentStore) -> Self {
        AttackRelation {
            kind,
            store: store.fingerprint(),
            edges: BTreeMap::new(),
        }
    }

    pub(crate) fn insert(&mut self, a: ArgId, b: ArgId, w: Witness) {
        let ws = self.edges.entry((a, b)).or_default();
        if let Err(pos) = ws.binary_search(&w) {
            ws.insert(pos, w);
        }
    }

    pub(crate) fn insert_edge(&mut self, a: ArgId, b: ArgId, ws: &[Witness]) {
        for w in ws {
            self.insert(a, b, w.clone());
        }
        self.edges.entry((a, b)).or_default();
    }

    pub fn contains(&self, a: ArgId, b: ArgId) -> bool {
        self.edges.contains_key(&(a, b))
    }

    pub fn witnesses(&self, a: ArgId, b: ArgId) -> Option<&[Witness]> {
        self.edges.get(&(a, b)).map(|v| v.as_slice())
    }

    pub fn edges(&self) -> impl Iterator<Item = (ArgId, ArgId)> + '_ {
        self.edges.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(ArgId, ArgId), &Vec<Witness>)> {
        self.edges.iter()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_symmetric(&self) -> bool {
        self.edges.keys().all(|(a, b)| self.edges.contains_key(&(*b, *a)))
    }

    pub fn store_fingerprint(&self) -> u64 {
        self.store
    }

    pub(crate) fn retain(&mut self, mut keep: impl FnMut(ArgId, ArgId) -> bool) {
        self.edges.retain(|(a, b), _| keep(*a, *b));
    }
}

fn goal_heads(store: &ArgumentStore, a: &Argument) -> BTreeSet<Literal> {
    a.rules().map(|r| store.kb().rule(r).head.clone()).collect()
}

fn complementary(
    store: &ArgumentStore,
    x: &Argument,
    y: &Argument,
) -> Option<(Category, Literal)> {
    let pairs: [(Category, BTreeSet<Literal>, BTreeSet<Literal>); 3] = [
        (
            Category::Belief,
            x.beliefs().cloned().collect(),
            y.beliefs().cloned().collect(),
        ),
        (
            Category::Action,
            x.actions().cloned().collect(),
            y.actions().cloned().collect(),
        ),
        (Category::Goal, goal_heads(store, x), goal_heads(store, y)),
    ];
    for (cat, xs, ys) in pairs {
        for l in &xs {
            if ys.contains(&l.negate()) {
                return Some((cat, l.clone()));
            }
        }
    }
    None
}

/// R_t.
pub fn rebuttal_attacks(store: &ArgumentStore) -> AttackRelation {
    let mut rel = AttackRelation::empty(AttackKind::Terminal, store);
    for x in store.iter() {
        for y in store.iter() {
            if x.id == y.id || x.claim == y.claim {
                continue;
            }
            if let Some((category, literal)) = complementary(store, x, y) {
                rel.insert(x.id, y.id, Witness::Rebuttal { category, literal });
            }
        }
    }
    rel
}

/// `x` and `y` sit under two different plans for one goal and never meet in a
/// single tree, so they are never executed together.
fn alternatives(store: &ArgumentStore, x: &Argument, y: &Argument) -> bool {
    if store.colocated(x, y) {
        return false;
    }
    let above_x: Vec<&Argument> = store.iter().filter(|p| store.is_subargument(x, p)).collect();
    store.iter().filter(|q| store.is_subargument(y, q)).any(|q| {
        above_x
            .iter()
            .any(|p| p.claim == q.claim && p.content != q.content)
    })
}

/// Joint, node-deduplicated demand of `x` and `y` for every resource they share.
pub fn joint_formulas(store: &ArgumentStore, x: &Argument, y: &Argument) -> Vec<ResourceFormula> {
    let xs: BTreeSet<&str> = x.rec().iter().map(|(_, r)| r.resource.as_str()).collect();
    let ys: BTreeSet<&str> = y.rec().iter().map(|(_, r)| r.resource.as_str()).collect();
    let mut out = Vec::new();
    for res in xs.intersection(&ys) {
        let mut seen: BTreeMap<ArgId, (ArgId, u64)> = BTreeMap::new();
        for (owner, rec) in [(x.id, x.rec()), (y.id, y.rec())] {
            for (node, atom) in rec {
                if atom.resource == *res {
                    seen.entry(*node).or_insert((owner, atom.amount));
                }
            }
        }
        let occurrences: Vec<(ArgId, ArgId, u64)> =
            seen.into_iter().map(|(n, (o, a))| (o, n, a)).collect();
        let required = occurrences.iter().map(|o| o.2).sum();
        out.push(ResourceFormula {
            resource: String::from(*res),
            occurrences,
            required,
            available: store.kb().resources().get(res).unwrap_or(0),
        });
    }
    out
}

/// R_r. Pairs drawn from two alternative plans are left to R_s when it
/// already relates them.
pub fn resource_attacks(store: &ArgumentStore, summary: &ResourceSummary) -> AttackRelation {
    let mut rel = AttackRelation::empty(AttackKind::Resource, store);
    let superfluous = superfluous_attacks(store);
    for x in store.iter() {
        for y in store.iter() {
            if x.id == y.id || store.is_subargument(x, y) || store.is_subargument(y, x) {
                continue;
            }
            if superfluous.contains(x.id, y.id) && alternatives(store, x, y) {
                continue;
            }
            for mut f in joint_formulas(store, x, y) {
                // resources are validated against the knowledge base, so a
                // missing entry here only arises from a foreign summary
                f.available = summary.get(&f.resource).unwrap_or(0);
                if !resource_entails(summary, &f).unwrap_or(false) {
                    rel.insert(x.id, y.id, Witness::Resource(f));
                }
            }
        }
    }
    rel
}

fn has_node_for(store: &ArgumentStore, a: &Argument, goal: &Literal) -> bool {
    a.rules().any(|r| &store.kb().rule(r).head == goal)
}

fn case2(store: &ArgumentStore, r: &BTreeSet<(usize, usize)>, x: &Argument, y: &Argument) -> bool {
    r.iter().any(|(a, b)| {
        has_node_for(store, store.at(*a), &x.claim) && has_node_for(store, store.at(*b), &y.claim)
    })
}

fn case3(store: &ArgumentStore, r: &BTreeSet<(usize, usize)>, x: &Argument, bi: usize) -> bool {
    let b = store.at(bi);
    r.iter().filter(|(_, t)| *t == bi).any(|(a, _)| {
        store
            .at(*a)
            .rules()
            .any(|rid| store.kb().rule(rid).head == x.claim && !b.support().contains(&crate::arguments::PartialPlan::Rule(rid)))
    })
}

/// R_s, with the number of fixpoint rounds taken.
pub fn superfluous_attacks_counted(store: &ArgumentStore) -> (AttackRelation, usize) {
    let n = store.len();
    let mut r: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut case: BTreeMap<(usize, usize), SuperfluityCase> = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (store.at(i), store.at(j));
            if i != j && x.claim == y.claim && x.support() != y.support() {
                r.insert((i, j));
                case.insert((i, j), SuperfluityCase::SameClaim);
            }
        }
    }
    let mut rounds = 0;
    let limit = n * n;
    loop {
        if rounds >= limit.max(1) {
            break;
        }
        rounds += 1;
        let mut found: BTreeMap<(usize, usize), SuperfluityCase> = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                if i == j || r.contains(&(i, j)) {
                    continue;
                }
                let (x, y) = (store.at(i), store.at(j));
                if x.claim == y.claim || store.colocated(x, y) {
                    continue;
                }
                if case3(store, &r, x, j) {
                    found.insert((i, j), SuperfluityCase::Propagated);
                } else if case2(store, &r, x, y) {
                    found.entry((i, j)).or_insert(SuperfluityCase::SharedAttackers);
                }
            }
        }
        if found.is_empty() {
            break;
        }
        let mut added = BTreeMap::new();
        for ((i, j), c) in &found {
            let rev = found.get(&(*j, *i)).copied();
            let best = match rev {
                Some(SuperfluityCase::Propagated) => SuperfluityCase::Propagated,
                _ => *c,
            };
            added.insert((*i, *j), best);
            added
                .entry((*j, *i))
                .and_modify(|e: &mut SuperfluityCase| {
                    if best == SuperfluityCase::Propagated {
                        *e = best;
                    }
                })
                .or_insert(best);
        }
        for (e, c) in added {
            r.insert(e);
            case.insert(e, c);
        }
    }
    let mut rel = AttackRelation::empty(AttackKind::Superfluous, store);
    for ((i, j), c) in case {
        rel.insert(store.at(i).id, store.at(j).id, Witness::Superfluous(c));
    }
    (rel, rounds)
}

/// R_s.
pub fn superfluous_attacks(store: &ArgumentStore) -> AttackRelation {
    superfluous_attacks_counted(store).0
}

/// Re-checks one R_s edge's case condition against the final relation
/// (Case 2 and 3 may be witnessed by either direction of the pair).
pub fn superfluous_witness_holds(
    store: &ArgumentStore,
    rel: &AttackRelation,
    a: ArgId,
    b: ArgId,
    case: SuperfluityCase,
) -> bool {
    let (Some(i), Some(j)) = (store.position(a), store.position(b)) else {
        return false;
    };
    let (x, y) = (store.at(i), store.at(j));
    if i == j {
        return false;
    }
    let r: BTreeSet<(usize, usize)> = rel
        .edges()
        .filter_map(|(p, q)| Some((store.position(p)?, store.position(q)?)))
        .collect();
    match case {
        SuperfluityCase::SameClaim => x.claim == y.claim && x.support() != y.support(),
        SuperfluityCase::SharedAttackers => {
            x.claim != y.claim
                && !store.colocated(x, y)
                && (case2(store, &r, x, y) || case2(store, &r, y, x))
        }
        SuperfluityCase::Propagated => {
            x.claim != y.claim
                && !store.colocated(x, y)
                && (case3(store, &r, x, j) || case3(store, &r, y, i))
        }
    }
}

/// Finds the rebuttal witness, if any, between two arguments of one store.
pub fn rebuttal_witness(store: &ArgumentStore, x: &Argument, y: &Argument) -> Option<(Category, Literal)> {
    complementary(store, x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::{KbBuilder, Premise};
    use crate::literal::ResourceAtom;
    use crate::rational::Rational;
    use alloc::vec;

    fn p(n: &str) -> Literal {
        Literal::prop(n)
    }

    #[test]
    fn entailment_thresholds() {
        let mut b = KbBuilder::new();
        b.goal(p("g"), Rational::ONE)
            .resource("bat", 90)
            .rule(vec![], p("g"));
        let kb = b.build().unwrap();
        let f = |req| ResourceFormula {
            resource: "bat".into(),
            occurrences: vec![],
            required: req,
            available: 90,
        };
        assert!(resource_entails(kb.resources(), &f(90)).unwrap());
        assert!(!resource_entails(kb.resources(), &f(100)).unwrap());
        assert!(resource_entails(kb.resources(), &f(0)).unwrap());
        let mut w = f(1);
        w.resource = "water".into();
        assert!(resource_entails(kb.resources(), &w).is_err());
    }

    #[test]
    fn same_claim_contradiction_is_not_rebuttal() {
        let mut b = KbBuilder::new();
        b.belief(p("b"))
            .belief(p("b").negate())
            .goal(p("g"), Rational::ONE)
            .rule(vec![Premise::Literal(p("b"))], p("g"))
            .rule(vec![Premise::Literal(p("b").negate())], p("g"));
        let store = ArgumentStore::enumerate(&b.build().unwrap()).unwrap();
        assert_eq!(store.len(), 2);
        assert!(rebuttal_attacks(&store).is_empty());
        let s = superfluous_attacks(&store);
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn disjoint_resources_never_conflict() {
        let mut b = KbBuilder::new();
        b.goal(p("g"), Rational::ONE)
            .goal(p("h"), Rational::ONE)
            .resource("oil", 1)
            .resource("bat", 1)
            .rule(vec![Premise::Resource(ResourceAtom::new("oil", 1))], p("g"))
            .rule(vec![Premise::Resource(ResourceAtom::new("bat", 1))], p("h"));
        let kb = b.build().unwrap();
        let store = ArgumentStore::enumerate(&kb).unwrap();
        assert!(resource_attacks(&store, kb.resources()).is_empty());
    }

    #[test]
    fn equal_atoms_from_two_plans_add_up() {
        let mut b = KbBuilder::new();
        b.goal(p("g"), Rational::ONE)
            .goal(p("h"), Rational::ONE)
            .resource("bat", 90)
            .rule(vec![Premise::Resource(ResourceAtom::new("bat", 50))], p("g"))
            .rule(vec![Premise::Resource(ResourceAtom::new("bat", 50))], p("h"));
        let kb = b.build().unwrap();
        let store = ArgumentStore::enumerate(&kb).unwrap();
        let r = resource_attacks(&store, kb.resources());
        assert_eq!(r.len(), 2);
        let (_, ws) = r.iter().next().unwrap();
        match &ws[0] {
            Witness::Resource(f) => assert_eq!(f.required, 100),
            w => panic!("{w:?}"),
        }
    }

    #[test]
    fn single_argument_has_no_attacks() {
        let mut b = KbBuilder::new();
        b.goal(p("g"), Rational::ONE).rule(vec![], p("g"));
        let kb = b.build().unwrap();
        let store = ArgumentStore::enumerate(&kb).unwrap();
        assert!(rebuttal_attacks(&store).is_empty());
        assert!(resource_attacks(&store, kb.resources()).is_empty());
        assert!(superfluous_attacks(&store).is_empty());
    }
}
