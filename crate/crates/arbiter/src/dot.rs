//! Graphviz output. Mutual attacks are drawn once as solid double-headed
//! edges; one-directional attacks are dashed.

use std::fmt::Write as _;

use goal_arbiter_core::arguments::{ArgId, ArgumentStore};
use goal_arbiter_core::attacks::{AttackRelation, Witness};
use goal_arbiter_core::frameworks::{ArgFramework, GoalFramework};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn short(id: ArgId) -> String {
    id.to_string()[..8].to_string()
}

fn edge_label(ws: &[Witness]) -> String {
    let parts: Vec<String> = ws
        .iter()
        .map(|w| match w {
            Witness::Rebuttal { literal, .. } => format!("t:{literal}"),
            Witness::Resource(f) => format!("r:{}", f.resource),
            Witness::Superfluous(c) => format!("s{}", c.number()),
        })
        .collect();
    parts.join(" ")
}

fn relation_edges(out: &mut String, rel: &AttackRelation, name: impl Fn(ArgId) -> String) {
    for ((a, b), ws) in rel.iter() {
        let mutual = rel.contains(*b, *a);
        if mutual && b < a {
            continue;
        }
        let label = if mutual {
            let mut all: Vec<Witness> = ws.to_vec();
            all.extend(rel.witnesses(*b, *a).unwrap_or(&[]).iter().cloned());
            all.sort();
            all.dedup();
            edge_label(&all)
        } else {
            edge_label(ws)
        };
        let style = if mutual { "dir=both" } else { "style=dashed" };
        let _ = writeln!(out, "  {} -> {} [{style}, label={}];", name(*a), name(*b), quote(&label));
    }
}

pub fn framework(af: &ArgFramework, store: &ArgumentStore) -> String {
    let mut out = String::from("digraph framework {\n  node [shape=box];\n");
    for id in &af.nodes {
        let claim = store.get(*id).map(|a| a.claim.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "  {} [label={}];",
            quote(&id.to_string()),
            quote(&format!("{}\\n{claim}", short(*id)))
        );
    }
    relation_edges(&mut out, &af.edges, |id| quote(&id.to_string()));
    out.push_str("}\n");
    out
}

pub fn relation(rel: &AttackRelation, store: &ArgumentStore) -> String {
    let af = ArgFramework {
        nodes: store.ids().collect(),
        edges: rel.clone(),
        filtered: false,
    };
    framework(&af, store)
}

pub fn goal_framework(gf: &GoalFramework) -> String {
    let mut out = String::from("digraph goals {\n  node [shape=ellipse];\n");
    for g in &gf.nodes {
        let _ = writeln!(
            out,
            "  {} [label={}];",
            quote(&g.to_string()),
            quote(&format!("{g}\\n{}", gf.preferences[g]))
        );
    }
    for (g, h) in gf.edges.keys() {
        let mutual = gf.edges.contains_key(&(h.clone(), g.clone()));
        if mutual && h < g {
            continue;
        }
        let style = if mutual { "dir=both" } else { "style=dashed" };
        let _ = writeln!(out, "  {} -> {} [{style}];", quote(&g.to_string()), quote(&h.to_string()));
    }
    out.push_str("}\n");
    out
}

/// One cluster per argument; a node per partial plan, edges parent to child.
pub fn arguments(store: &ArgumentStore) -> String {
    let mut out = String::from("digraph arguments {\n  node [shape=box];\n");
    for (n, a) in store.iter().enumerate() {
        let _ = writeln!(out, "  subgraph cluster_{n} {{");
        let _ = writeln!(out, "    label={};", quote(&format!("{} {}", a.id, a.claim)));
        let mut counter = 0;
        plan_nodes(store, store.position(a.id).expect("stored"), n, &mut counter, None, &mut out);
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}

fn plan_nodes(
    store: &ArgumentStore,
    idx: usize,
    cluster: usize,
    counter: &mut usize,
    parent: Option<String>,
    out: &mut String,
) {
    let a = store.at(idx);
    let rule = store.kb().rule(a.rule);
    let me = format!("a{cluster}_{counter}");
    *counter += 1;
    let _ = writeln!(out, "    {me} [label={}];", quote(&a.claim.to_string()));
    if let Some(p) = parent {
        let _ = writeln!(out, "    {p} -> {me};");
    }
    let leaves = rule
        .beliefs
        .iter()
        .chain(&rule.actions)
        .map(|l| l.to_string())
        .chain(rule.resources.iter().map(|r| r.to_string()));
    for text in leaves {
        let leaf = format!("a{cluster}_{counter}");
        *counter += 1;
        let _ = writeln!(out, "    {leaf} [shape=plaintext, label={}];", quote(&text));
        let _ = writeln!(out, "    {me} -> {leaf};");
    }
    for c in &a.children {
        plan_nodes(store, *c, cluster, counter, Some(me.clone()), out);
    }
}
