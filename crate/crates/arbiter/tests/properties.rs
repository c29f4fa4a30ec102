mod common;

use std::collections::BTreeSet;

use common::random_kb;
use goal_arbiter::dsl::{parse_kb, serialize};
use goal_arbiter::pipeline::Analysis;
use goal_arbiter::report;
use goal_arbiter_core::arguments::{ArgId, ArgumentStore, Equivalence};
use goal_arbiter_core::attacks::{superfluous_attacks_counted, superfluous_witness_holds, Category, Witness};
use goal_arbiter_core::kb::KnowledgeBase;
use goal_arbiter_core::literal::Literal;
use goal_arbiter_core::postulates::{
    check_closure, check_direct_consistency_with, closure_pr, concs, Scope, Violation,
};
use goal_arbiter_core::rational::Rational;
use goal_arbiter_core::semantics::{
    select, Digraph, GoalCounting, NodeSet, Policy, StageName, Valuation, MAX_NODES,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn kb_from(seed: u64) -> KnowledgeBase {
    random_kb(&mut ChaCha8Rng::seed_from_u64(seed))
}

/// Random KB whose store is small enough for exhaustive work.
fn small_kb(seed: u64) -> Option<KnowledgeBase> {
    let kb = kb_from(seed);
    let store = ArgumentStore::enumerate(&kb).ok()?;
    (store.len() <= 14).then_some(kb)
}

fn goal_nodes(store: &ArgumentStore, i: usize, out: &mut Vec<Literal>) {
    let a = store.at(i);
    out.push(a.claim.clone());
    for c in &a.children {
        goal_nodes(store, *c, out);
    }
}

fn digraph_strategy() -> impl Strategy<Value = Digraph> {
    (0usize..=8).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let mut g = Digraph::new(n);
            for a in 0..n {
                for b in 0..n {
                    if a != b && bits[a * n + b] {
                        g.add_edge(a, b);
                    }
                }
            }
            g
        })
    })
}

fn masks(n: usize) -> impl Iterator<Item = u32> {
    0u32..(1 << n)
}

fn cf_oracle(g: &Digraph, m: u32) -> bool {
    g.edges().all(|(a, b)| m & (1 << a) == 0 || m & (1 << b) == 0)
}

fn attackers_of(g: &Digraph, m: u32) -> u32 {
    g.edges().filter(|(_, b)| m & (1 << b) != 0).fold(0, |acc, (a, _)| acc | (1 << a))
}

fn attacked_by(g: &Digraph, m: u32) -> u32 {
    g.edges().filter(|(a, _)| m & (1 << a) != 0).fold(0, |acc, (_, b)| acc | (1 << b))
}

fn maximal_by<F: Fn(u32) -> u32>(cands: &[u32], key: F) -> BTreeSet<u32> {
    cands
        .iter()
        .copied()
        .filter(|m| !cands.iter().any(|o| key(*o) != key(*m) && key(*o) & key(*m) == key(*m)))
        .collect()
}

fn as_masks(v: Vec<NodeSet>) -> BTreeSet<u32> {
    v.into_iter().map(|s| s.0 as u32).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn dsl_round_trip(seed in any::<u64>()) {
        let kb = kb_from(seed);
        let text = serialize(&kb);
        let back = parse_kb(&text).expect("serialized KB parses");
        prop_assert_eq!(&back, &kb);
        prop_assert_eq!(serialize(&back), text);
    }

    #[test]
    fn store_invariants(seed in any::<u64>()) {
        let Some(kb) = small_kb(seed) else { return Ok(()) };
        let store = ArgumentStore::enumerate(&kb).unwrap();
        let again = ArgumentStore::enumerate(&kb).unwrap();
        prop_assert_eq!(store.ids().collect::<Vec<_>>(), again.ids().collect::<Vec<_>>());

        let bound: usize = kb.rules().iter().map(|r| r.premise_len()).sum::<usize>() + 1;
        for (i, a) in store.iter().enumerate() {
            let rule = kb.rule(a.rule);
            let leaves = rule.beliefs.len() + rule.actions.len() + rule.resources.len();
            let below: usize = a.children.iter().map(|c| store.at(*c).size()).sum();
            prop_assert_eq!(a.size(), 1 + leaves + below);
            let mut heads = Vec::new();
            goal_nodes(&store, i, &mut heads);
            let distinct: BTreeSet<&Literal> = heads.iter().collect();
            if distinct.len() == heads.len() {
                prop_assert!(a.size() <= bound, "size {} > {}", a.size(), bound);
            }
            for c in &a.children {
                let child = store.at(*c);
                prop_assert!(store.iter().any(|b| b.content == child.content));
                prop_assert!(store.is_subargument(child, a));
            }
        }

        let args: Vec<_> = store.iter().collect();
        for mode in [Equivalence::Logical, Equivalence::Resource, Equivalence::Whole] {
            for x in &args {
                prop_assert!(store.equivalent(x, x, mode));
                for y in &args {
                    prop_assert_eq!(store.equivalent(x, y, mode), store.equivalent(y, x, mode));
                    for z in &args {
                        if store.equivalent(x, y, mode) && store.equivalent(y, z, mode) {
                            prop_assert!(store.equivalent(x, z, mode));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn superfluity_fixpoint(seed in any::<u64>()) {
        let Some(kb) = small_kb(seed) else { return Ok(()) };
        let store = ArgumentStore::enumerate(&kb).unwrap();
        let (rel, rounds) = superfluous_attacks_counted(&store);
        prop_assert!(rounds <= (store.len() * store.len()).max(1));
        prop_assert!(rel.is_symmetric());
        for ((a, b), ws) in rel.iter() {
            prop_assert_ne!(a, b);
            for w in ws {
                let Witness::Superfluous(case) = w else { panic!("foreign witness") };
                prop_assert!(superfluous_witness_holds(&store, &rel, *a, *b, *case));
            }
        }
    }

    #[test]
    fn frameworks_union_and_filter(seed in any::<u64>()) {
        let Some(kb) = small_kb(seed) else { return Ok(()) };
        let a = Analysis::run(&kb).unwrap();
        let union: BTreeSet<(ArgId, ArgId)> = a
            .terminal
            .edges()
            .chain(a.resource.edges())
            .chain(a.superfluous.edges())
            .collect();
        let general: BTreeSet<(ArgId, ArgId)> = a.general.edges.edges().collect();
        prop_assert_eq!(&general, &union);

        let pref = |id: ArgId| kb.preferences()[&a.store.get(id).unwrap().claim];
        for (x, y) in &general {
            let kept = a.filtered.edges.contains(*x, *y);
            prop_assert_eq!(kept, pref(*x) >= pref(*y));
            if general.contains(&(*y, *x)) {
                prop_assert!(kept || a.filtered.edges.contains(*y, *x));
            }
        }
        prop_assert!(a.filtered.edges.edges().all(|e| general.contains(&e)));

        let gf = a.goal_framework().unwrap();
        for (g, h) in gf.edges.keys() {
            prop_assert!(gf.certificate_holds(&a.filtered, &a.store, g, h));
        }
    }

    #[test]
    fn deterministic_reports(seed in any::<u64>()) {
        let Some(kb) = small_kb(seed) else { return Ok(()) };
        let render = || {
            let a = Analysis::run(&kb).unwrap();
            [
                report::arguments(&a.store),
                report::framework(&a.general, &a.store),
                report::framework(&a.filtered, &a.store),
                report::goal_framework(&a.goal_framework().unwrap()),
            ]
            .join("\n")
        };
        prop_assert_eq!(render(), render());
    }

    #[test]
    fn violation_witnesses_revalidate(seed in any::<u64>()) {
        let Some(kb) = small_kb(seed) else { return Ok(()) };
        let a = Analysis::run(&kb).unwrap();
        let s = &a.store;
        let sets = a.filtered.digraph().conflict_free_sets(MAX_NODES).unwrap();
        let exts: Vec<Vec<ArgId>> = sets
            .iter()
            .map(|m| m.iter().map(|i| a.filtered.nodes[i]).collect())
            .collect();
        for e in &exts {
            for v in check_direct_consistency_with(e, s, kb.resources(), &a.superfluous).violations {
                match v {
                    Violation::Complementary { category, left, right, literal } => {
                        let (l, r) = (s.get(left).unwrap(), s.get(right).unwrap());
                        let pick = |x: &goal_arbiter_core::arguments::Argument| -> BTreeSet<Literal> {
                            match category {
                                Category::Belief => x.beliefs().cloned().collect(),
                                Category::Action => x.actions().cloned().collect(),
                                Category::Goal => x.rules().map(|id| kb.rule(id).head.clone()).collect(),
                            }
                        };
                        prop_assert!(pick(l).contains(&literal) && pick(r).contains(&literal.negate()));
                    }
                    Violation::Resource { left, right, formula } => {
                        let nodes: BTreeSet<(ArgId, u64)> = s
                            .get(left)
                            .unwrap()
                            .rec()
                            .iter()
                            .chain(s.get(right).unwrap().rec().iter())
                            .filter(|(_, atom)| atom.resource == formula.resource)
                            .map(|(n, atom)| (*n, atom.amount))
                            .collect();
                        let demand: u64 = nodes.iter().map(|(_, v)| v).sum();
                        prop_assert_eq!(demand, formula.required);
                        prop_assert!(demand > kb.resources().get(&formula.resource).unwrap());
                    }
                    Violation::Superfluous { left, right, .. } => {
                        let (l, r) = (s.get(left).unwrap(), s.get(right).unwrap());
                        prop_assert!(
                            (l.claim == r.claim && l.support() != r.support())
                                || a.superfluous.contains(left, right)
                        );
                    }
                    other => panic!("unexpected {other:?}"),
                }
            }
        }
        let c = concs(&exts, s);
        for v in check_closure(&exts, s).violations {
            let Violation::NotClosed { scope, rule, derived } = v else { panic!("unexpected {v:?}") };
            let set = match scope {
                Scope::Extension(i) => &c.per_extension[i],
                Scope::Output => &c.output,
            };
            prop_assert!(!set.contains(&derived));
            prop_assert!(closure_pr(set, &kb).contains(&derived));
            prop_assert_eq!(&kb.rule(rule).head, &derived);
        }
    }

    #[test]
    fn closure_is_idempotent(seed in any::<u64>(), pick in any::<u8>()) {
        let kb = kb_from(seed);
        let goals: BTreeSet<Literal> = kb
            .goals()
            .enumerate()
            .filter(|(i, _)| pick & (1 << (i % 8)) != 0)
            .map(|(_, g)| g.clone())
            .collect();
        let once = closure_pr(&goals, &kb);
        prop_assert!(goals.is_subset(&once));
        prop_assert_eq!(closure_pr(&once, &kb), once);
    }

    #[test]
    fn semantics_match_oracles(g in digraph_strategy()) {
        let n = g.len();
        let cf: Vec<u32> = masks(n).filter(|m| cf_oracle(&g, *m)).collect();
        let got_cf = as_masks(g.conflict_free_sets(MAX_NODES).unwrap());
        prop_assert_eq!(&got_cf, &cf.iter().copied().collect::<BTreeSet<_>>());

        let admissible: Vec<u32> = cf
            .iter()
            .copied()
            .filter(|m| attackers_of(&g, *m) & !attacked_by(&g, *m) == 0)
            .collect();
        prop_assert_eq!(
            as_masks(g.admissible_sets(MAX_NODES).unwrap()),
            admissible.iter().copied().collect::<BTreeSet<_>>()
        );
        prop_assert_eq!(as_masks(g.preferred_extensions(MAX_NODES).unwrap()), maximal_by(&admissible, |m| m));

        let best_ranges = maximal_by(&cf, |m| m | attacked_by(&g, m));
        let stage: BTreeSet<u32> = cf
            .iter()
            .copied()
            .filter(|m| best_ranges.iter().any(|b| (b | attacked_by(&g, *b)) == (m | attacked_by(&g, *m))))
            .collect();
        prop_assert_eq!(as_masks(g.stage_extensions(MAX_NODES).unwrap()), stage);
    }

    #[test]
    fn selection_stages_shrink(g in digraph_strategy(), prefs in proptest::collection::vec(0u64..=20, 8), pursuable in any::<u8>()) {
        let n = g.len();
        let goals: Vec<Literal> = (0..n).map(|i| Literal::prop(format!("g{}", i % 4))).collect();
        let prefs = (0..4).map(|i| (Literal::prop(format!("g{i}")), Rational::new(prefs[i], 20))).collect();
        let purs = (0..4).filter(|i| pursuable & (1 << i) != 0).map(|i| Literal::prop(format!("g{i}"))).collect();
        let val = Valuation::new(goals, purs, prefs, GoalCounting::PursuableOnly).unwrap();
        for policy in [Policy::GoalsFirst, Policy::UtilityFirst] {
            let r = select(&g, &val, policy, MAX_NODES).unwrap();
            prop_assert_eq!(r.trace[0].name, StageName::ConflictFree);
            for w in r.trace.windows(2) {
                prop_assert!(!w[1].kept.is_empty());
                prop_assert!(w[1].kept.iter().all(|s| w[0].kept.contains(s)));
            }
            prop_assert_eq!(r.trace.last().map(|s| s.name), Some(StageName::Maximal));
            for (i, s) in r.proper_extensions.iter().enumerate() {
                prop_assert!(g.is_conflict_free(*s));
                prop_assert_eq!(r.metrics[i], (val.goal_count(*s), val.utility(*s)));
                prop_assert_eq!(&r.compatible_goal_sets[i], &val.comp_goals(*s));
            }
        }
    }

    #[test]
    fn metrics_survive_renaming(g in digraph_strategy(), shift in 0usize..8) {
        let n = g.len();
        if n == 0 { return Ok(()) }
        let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
        let moved: Vec<(usize, usize)> = g.edges().map(|(a, b)| (perm[a], perm[b])).collect();
        let h = Digraph::from_edges(n, &moved);
        let goal = |i: usize| Literal::prop(format!("g{i}"));
        let prefs: std::collections::BTreeMap<Literal, Rational> =
            (0..n).map(|i| (goal(i), Rational::new(i as u64 + 1, 10))).collect();
        let pursuable: BTreeSet<Literal> = (0..n).filter(|i| i % 2 == 0).map(goal).collect();
        let mut renamed = vec![goal(0); n];
        for i in 0..n {
            renamed[perm[i]] = goal(i);
        }
        let v1 = Valuation::new((0..n).map(goal).collect(), pursuable.clone(), prefs.clone(), GoalCounting::PursuableOnly).unwrap();
        let v2 = Valuation::new(renamed, pursuable, prefs, GoalCounting::PursuableOnly).unwrap();
        let metrics = |g: &Digraph, v: &Valuation| -> Vec<(BTreeSet<Literal>, usize, Rational)> {
            let r = select(g, v, Policy::GoalsFirst, MAX_NODES).unwrap();
            let mut m: Vec<_> = r.proper_extensions.iter().map(|s| (v.comp_goals(*s), v.goal_count(*s), v.utility(*s))).collect();
            m.sort();
            m
        };
        prop_assert_eq!(metrics(&g, &v1), metrics(&h, &v2));
    }
}

#[test]
fn closed_forms() {
    for n in 0..=6 {
        let edgeless = Digraph::new(n);
        let all = NodeSet::full(n);
        assert_eq!(edgeless.preferred_extensions(MAX_NODES).unwrap(), vec![all]);
        assert_eq!(edgeless.stage_extensions(MAX_NODES).unwrap(), vec![all]);

        let mut clique = Digraph::new(n);
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    clique.add_edge(a, b);
                }
            }
        }
        let singles: BTreeSet<NodeSet> = if n == 0 {
            [NodeSet::EMPTY].into_iter().collect()
        } else {
            (0..n).map(NodeSet::singleton).collect()
        };
        let pref: BTreeSet<NodeSet> = clique.preferred_extensions(MAX_NODES).unwrap().into_iter().collect();
        let stage: BTreeSet<NodeSet> = clique.stage_extensions(MAX_NODES).unwrap().into_iter().collect();
        assert_eq!(pref, singles);
        assert_eq!(stage, singles);
    }
}
