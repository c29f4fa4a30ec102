#![allow(dead_code)]

use std::collections::BTreeMap;

use goal_arbiter::dsl::parse_kb;
use goal_arbiter::pipeline::Analysis;
use goal_arbiter_core::arguments::{ArgId, ArgumentStore};
use goal_arbiter_core::kb::{KbBuilder, KnowledgeBase, Premise};
use goal_arbiter_core::literal::{Literal, ResourceAtom, Term};
use goal_arbiter_core::rational::Rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CLEANER: &str = include_str!("../../fixtures/cleaner.kb");

pub fn lit(name: &str, args: &[&str]) -> Literal {
    let terms = args
        .iter()
        .map(|a| match a.parse::<i64>() {
            Ok(n) => Term::Int(n),
            Err(_) => Term::Ident(a.to_string()),
        })
        .collect();
    Literal::new(name, terms)
}

pub fn clean() -> Literal {
    lit("clean", &["5", "5"])
}
pub fn pickup() -> Literal {
    lit("pickup", &["5", "5"])
}
pub fn mop() -> Literal {
    lit("mop", &["5", "5"])
}
pub fn fixed() -> Literal {
    lit("be", &["fixed"])
}
pub fn workshop() -> Literal {
    lit("be", &["in_workshop"])
}

pub fn cleaner_kb() -> KnowledgeBase {
    parse_kb(CLEANER).expect("fixture parses")
}

/// The fixture's arguments under their usual letters A–H.
pub struct Cleaner {
    pub analysis: Analysis,
    pub ids: BTreeMap<char, ArgId>,
}

impl Cleaner {
    pub fn load() -> Self {
        let analysis = Analysis::run(&cleaner_kb()).expect("pipeline");
        let store = &analysis.store;
        let mut ids = BTreeMap::new();
        for a in store.iter() {
            let rule = store.kb().rule(a.rule);
            let letter = if a.claim == clean() && rule.subgoals.contains(&pickup()) {
                'A'
            } else if a.claim == clean() {
                'C'
            } else if a.claim == fixed() && rule.subgoals.contains(&workshop()) {
                'B'
            } else if a.claim == fixed() {
                'F'
            } else if a.claim == pickup() {
                'E'
            } else if a.claim == mop() {
                'D'
            } else if a.claim == workshop() {
                'H'
            } else {
                panic!("unexpected argument for {}", a.claim)
            };
            assert!(ids.insert(letter, a.id).is_none(), "duplicate {letter}");
        }
        Cleaner { analysis, ids }
    }

    pub fn id(&self, c: char) -> ArgId {
        self.ids[&c]
    }

    pub fn letter(&self, id: ArgId) -> char {
        *self.ids.iter().find(|(_, v)| **v == id).expect("known id").0
    }

    pub fn store(&self) -> &ArgumentStore {
        &self.analysis.store
    }

    /// Pairs written as "AB CD ..." to id pairs.
    pub fn pairs(&self, spec: &str) -> Vec<(ArgId, ArgId)> {
        spec.split_whitespace()
            .map(|p| {
                let cs: Vec<char> = p.chars().collect();
                (self.id(cs[0]), self.id(cs[1]))
            })
            .collect()
    }

    pub fn letters_of(&self, edges: impl Iterator<Item = (ArgId, ArgId)>) -> Vec<String> {
        let mut v: Vec<String> = edges
            .map(|(a, b)| format!("{}{}", self.letter(a), self.letter(b)))
            .collect();
        v.sort();
        v
    }
}

pub fn sorted_pairs(spec: &str) -> Vec<String> {
    let mut v: Vec<String> = spec.split_whitespace().map(String::from).collect();
    v.sort();
    v
}

/// Random acyclic knowledge base: rules for goal `gi` only use subgoals `gj`
/// with `j > i`.
pub fn random_kb(rng: &mut ChaCha8Rng) -> KnowledgeBase {
    let n_goals = rng.gen_range(1..=8);
    let goals: Vec<Literal> = (0..n_goals).map(|i| Literal::prop(format!("g{i}"))).collect();
    let mut b = KbBuilder::new();

    let mut beliefs = Vec::new();
    for i in 0..3 {
        let l = Literal::prop(format!("b{i}"));
        if rng.gen_bool(0.7) {
            beliefs.push(l.clone());
        }
        if rng.gen_bool(0.4) {
            beliefs.push(l.negate());
        }
    }
    let mut actions = Vec::new();
    for i in 0..2 {
        let l = Literal::prop(format!("a{i}"));
        if rng.gen_bool(0.7) {
            actions.push(l.clone());
        }
        if rng.gen_bool(0.3) {
            actions.push(l.negate());
        }
    }
    let resources: Vec<(String, u64)> = (0..rng.gen_range(0..=2))
        .map(|i| (format!("r{i}"), rng.gen_range(1..=10)))
        .collect();
    for l in &beliefs {
        b.belief(l.clone());
    }
    for l in &actions {
        b.action(l.clone());
    }
    for (r, v) in &resources {
        b.resource(r.clone(), *v);
    }
    for g in &goals {
        b.goal(g.clone(), Rational::new(rng.gen_range(0..=20), 20));
    }
    let mut any_pursuable = false;
    for g in &goals {
        if rng.gen_bool(0.5) {
            b.pursuable(g.clone());
            any_pursuable = true;
        }
    }
    if !any_pursuable {
        b.pursuable(goals[0].clone());
    }

    let n_rules = rng.gen_range(n_goals..=12.max(n_goals));
    for r in 0..n_rules {
        let gi = if r < n_goals { r } else { rng.gen_range(0..n_goals) };
        let mut premises = Vec::new();
        for l in &beliefs {
            if rng.gen_bool(0.3) {
                premises.push(Premise::Literal(l.clone()));
            }
        }
        for l in &actions {
            if rng.gen_bool(0.3) {
                premises.push(Premise::Literal(l.clone()));
            }
        }
        for (res, avail) in &resources {
            if rng.gen_bool(0.4) {
                premises.push(Premise::Resource(ResourceAtom::new(res.clone(), rng.gen_range(1..=*avail))));
            }
        }
        for g in goals.iter().skip(gi + 1) {
            if rng.gen_bool(0.25) {
                premises.push(Premise::Literal(g.clone()));
            }
        }
        b.rule(premises, goals[gi].clone());
    }
    b.build().expect("generated KB is valid")
}

pub const MAX_RANDOM_ARGS: usize = 20;

/// `count` random KBs whose stores stay small enough for exhaustive checks.
pub fn random_kbs(seed: u64, count: usize) -> Vec<KnowledgeBase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let kb = random_kb(&mut rng);
        let store = ArgumentStore::enumerate(&kb).expect("acyclic by construction");
        if store.len() <= MAX_RANDOM_ARGS {
            out.push(kb);
        }
    }
    out
}
