//! Line-oriented `key = value` reports. Every list is sorted, so identical
//! inputs give byte-identical output.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use goal_arbiter_core::arguments::{ArgId, ArgumentStore};
use goal_arbiter_core::attacks::AttackRelation;
use goal_arbiter_core::frameworks::{ArgFramework, GoalFramework};
use goal_arbiter_core::literal::Literal;
use goal_arbiter_core::postulates::PostulateReport;
use goal_arbiter_core::semantics::{NodeSet, SelectionResult, Valuation};

#[derive(Default)]
pub struct Report {
    out: String,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn kv(&mut self, key: impl AsRef<str>, value: impl std::fmt::Display) -> &mut Self {
        let _ = writeln!(self.out, "{} = {value}", key.as_ref());
        self
    }

    pub fn finish(self) -> String {
        self.out
    }
}

fn join<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    let v: Vec<String> = items.into_iter().map(|t| t.to_string()).collect();
    format!("[{}]", v.join(", "))
}

fn sorted_join<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    let mut v: Vec<String> = items.into_iter().map(|t| t.to_string()).collect();
    v.sort();
    format!("[{}]", v.join(", "))
}

pub fn arguments(store: &ArgumentStore) -> String {
    let mut r = Report::new();
    r.kv("arguments.count", store.len());
    for a in store.iter() {
        let k = format!("argument.{}", a.id);
        r.kv(format!("{k}.claim"), &a.claim);
        r.kv(format!("{k}.rule"), store.kb().rule(a.rule));
        r.kv(format!("{k}.resources"), sorted_join(a.rec().iter().map(|(_, atom)| atom)));
        let subs = store
            .iter()
            .filter(|b| b.content != a.content && store.is_subargument(b, a))
            .map(|b| b.id);
        r.kv(format!("{k}.subarguments"), sorted_join(subs));
        r.kv(format!("{k}.size"), a.size());
    }
    r.finish()
}

/// Indented tree, one partial plan per line.
pub fn argument_trees(store: &ArgumentStore) -> String {
    let mut out = String::new();
    for a in store.iter() {
        let _ = writeln!(out, "{} {}", a.id, a.claim);
        tree_node(store, store.position(a.id).expect("stored"), 1, &mut out);
    }
    out
}

fn tree_node(store: &ArgumentStore, idx: usize, depth: usize, out: &mut String) {
    let a = store.at(idx);
    let rule = store.kb().rule(a.rule);
    let pad = "  ".repeat(depth);
    let _ = writeln!(out, "{pad}{} <= {}", a.claim, rule);
    let leaf = "  ".repeat(depth + 1);
    for l in &rule.beliefs {
        let _ = writeln!(out, "{leaf}belief {l}");
    }
    for l in &rule.actions {
        let _ = writeln!(out, "{leaf}action {l}");
    }
    for r in &rule.resources {
        let _ = writeln!(out, "{leaf}resource {r}");
    }
    for c in &a.children {
        tree_node(store, *c, depth + 1, out);
    }
}

pub fn relation(rel: &AttackRelation) -> String {
    let mut r = Report::new();
    r.kv("relation.kind", rel.kind);
    r.kv("relation.edges", rel.len());
    for ((a, b), ws) in rel.iter() {
        r.kv(format!("edge.{a}.{b}"), join(ws.iter()));
    }
    r.finish()
}

pub fn framework(af: &ArgFramework, store: &ArgumentStore) -> String {
    let mut r = Report::new();
    r.kv("framework.level", "arguments");
    r.kv("framework.kind", af.edges.kind);
    r.kv("framework.filtered", af.filtered);
    r.kv("framework.nodes", af.nodes.len());
    for id in &af.nodes {
        let claim = store.get(*id).map(|a| a.claim.to_string()).unwrap_or_default();
        r.kv(format!("node.{id}"), claim);
    }
    r.kv("framework.edges", af.edges.len());
    for ((a, b), ws) in af.edges.iter() {
        let kinds: BTreeSet<&str> = ws.iter().map(|w| w.kind().short()).collect();
        r.kv(
            format!("edge.{a}.{b}"),
            format!("{} {}", kinds.into_iter().collect::<String>(), join(ws.iter())),
        );
    }
    r.finish()
}

pub fn goal_framework(gf: &GoalFramework) -> String {
    let mut r = Report::new();
    r.kv("framework.level", "goals");
    r.kv("framework.nodes", gf.nodes.len());
    for g in &gf.nodes {
        r.kv(format!("node.{g}"), gf.preferences[g]);
    }
    r.kv("framework.edges", gf.edges.len());
    for ((g, h), cert) in &gf.edges {
        let pairs = cert.pairs.iter().map(|(a, b, f, bw)| {
            let arrow = match (f, bw) {
                (true, true) => "<->",
                (true, false) => "->",
                (false, true) => "<-",
                (false, false) => "x",
            };
            format!("{a}{arrow}{b}")
        });
        r.kv(format!("edge.{g}.{h}"), join(pairs));
    }
    r.finish()
}

fn set_text(s: NodeSet, labels: &[String]) -> String {
    sorted_join(s.iter().map(|i| labels[i].clone()))
}

/// `labels[i]` names node `i` of the selection's framework.
pub fn selection(
    result: &SelectionResult,
    val: &Valuation,
    labels: &[String],
    level: &str,
    policy: &str,
) -> String {
    let mut r = Report::new();
    r.kv("selection.level", level);
    r.kv("selection.policy", policy);
    for (i, stage) in result.trace.iter().enumerate() {
        let k = format!("stage.{i}.{}", stage.name);
        r.kv(format!("{k}.count"), stage.kept.len());
        for (j, s) in stage.kept.iter().enumerate() {
            r.kv(
                format!("{k}.set.{j}"),
                format!(
                    "{} goals={} utility={}",
                    set_text(*s, labels),
                    val.goal_count(*s),
                    val.utility(*s)
                ),
            );
        }
    }
    r.kv("selection.extensions", result.proper_extensions.len());
    for (i, (s, goals)) in result
        .proper_extensions
        .iter()
        .zip(&result.compatible_goal_sets)
        .enumerate()
    {
        let (count, util) = result.metrics[i];
        r.kv(format!("extension.{i}.members"), set_text(*s, labels));
        r.kv(format!("extension.{i}.goal_count"), count);
        r.kv(format!("extension.{i}.utility"), util);
        r.kv(format!("extension.{i}.compatible_goals"), sorted_join(goals.iter()));
    }
    r.finish()
}

pub fn postulates(extensions: &[Vec<ArgId>], reports: &[PostulateReport]) -> String {
    let mut r = Report::new();
    r.kv("check.extensions", extensions.len());
    for (i, e) in extensions.iter().enumerate() {
        r.kv(format!("extension.{i}"), sorted_join(e.iter()));
    }
    for rep in reports {
        let k = format!("postulate.{}", rep.postulate);
        r.kv(format!("{k}.verdict"), if rep.passed() { "pass" } else { "fail" });
        for (i, v) in rep.violations.iter().enumerate() {
            r.kv(format!("{k}.violation.{i}"), v);
        }
    }
    let ok = reports.iter().all(|r| r.passed());
    r.kv("check.verdict", if ok { "pass" } else { "fail" });
    r.finish()
}

pub fn goal_set(goals: &BTreeSet<Literal>) -> String {
    sorted_join(goals.iter())
}
