//! Argumentation frameworks over arguments and over goals.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::arguments::{ArgId, ArgumentStore};
use crate::attacks::{AttackKind, AttackRelation};
use crate::literal::Literal;
use crate::rational::Rational;
use crate::semantics::{Digraph, GoalCounting, Valuation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FrameworkError {
    MixedStores,
    MissingPreference(Literal),
}

impl fmt::Display for FrameworkError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrameworkError::MixedStores => f.write_str("attack relations come from different argument stores"),
            FrameworkError::MissingPreference(g) => write!(f, "no preference for goal `{g}`"),
        }
    }
}

impl core::error::Error for FrameworkError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArgFramework {
    pub nodes: Vec<ArgId>,
    pub edges: AttackRelation,
    pub filtered: bool,
}

/// Union of the given relations over every argument of `store`.
pub fn build_af(relations: &[&AttackRelation], store: &ArgumentStore) -> Result<ArgFramework, FrameworkError> {
    let fp = store.fingerprint();
    if relations.iter().any(|r| r.store_fingerprint() != fp) {
        return Err(FrameworkError::MixedStores);
    }
    let kind = match relations {
        [single] => single.kind,
        _ => AttackKind::General,
    };
    let mut edges = AttackRelation::empty(kind, store);
    for r in relations {
        for ((a, b), ws) in r.iter() {
            edges.insert_edge(*a, *b, ws);
        }
    }
    Ok(ArgFramework {
        nodes: store.ids().collect(),
        edges,
        filtered: false,
    })
}

/// Keeps `(A,B)` iff PREF(claim A) ≥ PREF(claim B).
pub fn successful_filter(
    af: &ArgFramework,
    store: &ArgumentStore,
    preferences: &BTreeMap<Literal, Rational>,
) -> Result<ArgFramework, FrameworkError> {
    let pref = |id: ArgId| -> Result<Rational, FrameworkError> {
        let claim = &store.get(id).ok_or(FrameworkError::MixedStores)?.claim;
        preferences
            .get(claim)
            .copied()
            .ok_or_else(|| FrameworkError::MissingPreference(claim.clone()))
    };
    let mut drop = BTreeSet::new();
    for (a, b) in af.edges.edges() {
        if pref(a)? < pref(b)? {
            drop.insert((a, b));
        }
    }
    let mut edges = af.edges.clone();
    edges.retain(|a, b| !drop.contains(&(a, b)));
    Ok(ArgFramework {
        nodes: af.nodes.clone(),
        edges,
        filtered: true,
    })
}

impl ArgFramework {
    pub fn digraph(&self) -> Digraph {
        let pos: BTreeMap<ArgId, usize> = self.nodes.iter().enumerate().map(|(i, a)| (*a, i)).collect();
        let mut g = Digraph::new(self.nodes.len());
        for (a, b) in self.edges.edges() {
            g.add_edge(pos[&a], pos[&b]);
        }
        g
    }

    /// Node `i` of [`ArgFramework::digraph`] valued by its claim.
    pub fn valuation(&self, store: &ArgumentStore) -> Result<Valuation, FrameworkError> {
        let kb = store.kb();
        let goals: Vec<Literal> = self
            .nodes
            .iter()
            .map(|id| store.get(*id).map(|a| a.claim.clone()).ok_or(FrameworkError::MixedStores))
            .collect::<Result<_, _>>()?;
        Valuation::new(goals, kb.pursuable().clone(), kb.preferences().clone(), GoalCounting::PursuableOnly)
            .map_err(FrameworkError::MissingPreference)
    }
}

/// The cross pairs that justify one goal edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoalCertificate {
    /// (argument for the source goal, argument for the target goal, edge source→target, edge target→source)
    pub pairs: Vec<(ArgId, ArgId, bool, bool)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoalFramework {
    pub nodes: BTreeSet<Literal>,
    pub edges: BTreeMap<(Literal, Literal), GoalCertificate>,
    pub preferences: BTreeMap<Literal, Rational>,
    pub pursuable: BTreeSet<Literal>,
}

/// Lifts a filtered argument framework to goals.
pub fn goal_attacks(af: &ArgFramework, store: &ArgumentStore) -> Result<GoalFramework, FrameworkError> {
    let kb = store.kb();
    let mut nodes: BTreeSet<Literal> = kb.pursuable().clone();
    for a in store.iter() {
        for b in store.iter() {
            if a.content != b.content && store.is_subargument(b, a) {
                nodes.insert(b.claim.clone());
            }
        }
    }
    let args_of = |g: &Literal| -> Vec<ArgId> {
        store
            .arg_for(g)
            .map(|v| v.iter().map(|a| a.id).collect())
            .unwrap_or_default()
    };
    nodes.retain(|g| !args_of(g).is_empty());

    let mut preferences = BTreeMap::new();
    for g in &nodes {
        let p = kb
            .preferences()
            .get(g)
            .ok_or_else(|| FrameworkError::MissingPreference(g.clone()))?;
        preferences.insert(g.clone(), *p);
    }

    let list: Vec<&Literal> = nodes.iter().collect();
    let mut edges = BTreeMap::new();
    for (i, g) in list.iter().enumerate() {
        for h in &list[i + 1..] {
            let mut pairs = Vec::new();
            let mut all = true;
            let (mut fwd_any, mut bwd_any) = (false, false);
            for a in args_of(g) {
                for b in args_of(h) {
                    let fwd = af.edges.contains(a, b);
                    let bwd = af.edges.contains(b, a);
                    all &= fwd || bwd;
                    fwd_any |= fwd;
                    bwd_any |= bwd;
                    pairs.push((a, b, fwd, bwd));
                }
            }
            if !all || pairs.is_empty() {
                continue;
            }
            let flipped: Vec<(ArgId, ArgId, bool, bool)> =
                pairs.iter().map(|(a, b, f, r)| (*b, *a, *r, *f)).collect();
            if fwd_any {
                edges.insert(((*g).clone(), (*h).clone()), GoalCertificate { pairs: pairs.clone() });
            }
            if bwd_any {
                edges.insert(((*h).clone(), (*g).clone()), GoalCertificate { pairs: flipped });
            }
        }
    }
    Ok(GoalFramework {
        nodes,
        edges,
        preferences,
        pursuable: kb.pursuable().clone(),
    })
}

impl GoalFramework {
    /// Checks a goal edge's certificate against `af` and the goals' argument sets.
    pub fn certificate_holds(&self, af: &ArgFramework, store: &ArgumentStore, g: &Literal, h: &Literal) -> bool {
        let Some(cert) = self.edges.get(&(g.clone(), h.clone())) else {
            return false;
        };
        let (Ok(ag), Ok(ah)) = (store.arg_for(g), store.arg_for(h)) else {
            return false;
        };
        if cert.pairs.len() != ag.len() * ah.len() {
            return false;
        }
        let mut any_fwd = false;
        for (a, b, f, r) in &cert.pairs {
            let ok_members = ag.iter().any(|x| x.id == *a) && ah.iter().any(|x| x.id == *b);
            if !ok_members || af.edges.contains(*a, *b) != *f || af.edges.contains(*b, *a) != *r || !(*f || *r) {
                return false;
            }
            any_fwd |= *f;
        }
        any_fwd
    }

    pub fn node_list(&self) -> Vec<Literal> {
        self.nodes.iter().cloned().collect()
    }

    pub fn digraph(&self) -> Digraph {
        let pos: BTreeMap<&Literal, usize> = self.nodes.iter().enumerate().map(|(i, g)| (g, i)).collect();
        let mut d = Digraph::new(self.nodes.len());
        for (g, h) in self.edges.keys() {
            d.add_edge(pos[g], pos[h]);
        }
        d
    }

    pub fn valuation(&self) -> Valuation {
        Valuation::new(
            self.node_list(),
            self.pursuable.clone(),
            self.preferences.clone(),
            GoalCounting::AllElements,
        )
        .expect("preferences cover every node")
    }
}
