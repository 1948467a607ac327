//! Bounded exploration of UI action sequences from the empty state.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::engine::{Action, ActionKind};
use crate::model::isomorphism::{are_isomorphic, invariant};
use crate::model::{
    detect_violations, hard_violations, is_valid, ClassName, ConfigurationState, Fact,
    HardViolation,
};
use crate::strategies::ui_actions;

use super::{Scope, VerifierError};

/// An offered UI action whose effects break a hard constraint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnsafeAction {
    /// The sequence from the empty state, ending with the offending action.
    pub actions: Vec<ActionKind>,
    pub violations: Vec<HardViolation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UiSafetyReport {
    pub max_steps: u32,
    /// Distinct states reached within the scope.
    pub states: usize,
    /// States reached at exactly `max_steps` steps.
    pub terminal_states: usize,
    /// Reached states that still have lower-bound violations.
    pub invalid_states: usize,
    /// Invalid states from which no valid state is reachable within the
    /// remaining steps of the scope.
    pub unrepairable_states: usize,
    pub counterexample: Option<UnsafeAction>,
}

impl UiSafetyReport {
    pub fn is_safe(&self) -> bool {
        self.counterexample.is_none()
    }
}

struct Node {
    state: ConfigurationState,
    parent: Option<(usize, ActionKind)>,
    depth: u32,
    children: Vec<usize>,
}

fn path_to(nodes: &[Node], mut idx: usize) -> Vec<ActionKind> {
    let mut out = Vec::new();
    while let Some((parent, kind)) = nodes[idx].parent {
        out.push(kind);
        idx = parent;
    }
    out.reverse();
    out
}

/// Explores every UI action sequence of length at most `scope.max_steps`.
/// Each offered action's effects are added to the raw fact set and checked
/// by the independent hard-constraint checker before the action is taken.
pub fn check_ui_safety(scope: &Scope) -> UiSafetyReport {
    let mut nodes = vec![Node {
        state: ConfigurationState::new(),
        parent: None,
        depth: 0,
        children: vec![],
    }];
    let mut seen: HashMap<Vec<Fact>, usize> = HashMap::new();
    seen.insert(Vec::new(), 0);
    let mut counterexample = None;
    let mut next = 0;
    'bfs: while next < nodes.len() {
        let idx = next;
        next += 1;
        if nodes[idx].depth >= scope.max_steps {
            continue;
        }
        let state = nodes[idx].state.clone();
        let base = state.facts();
        for action in ui_actions(&state, &detect_violations(&state)) {
            let raw = base.iter().copied().chain(action.effects.iter().map(|e| e.fact()));
            let hard = hard_violations(&raw.collect::<Vec<_>>());
            if !hard.is_empty() {
                let mut actions = path_to(&nodes, idx);
                actions.push(action.kind);
                counterexample = Some(UnsafeAction { actions, violations: hard });
                break 'bfs;
            }
            let Ok(child) = action.apply(&state) else { continue };
            let key = child.facts();
            let child_idx = match seen.get(&key) {
                Some(&i) => i,
                None => {
                    nodes.push(Node {
                        state: child,
                        parent: Some((idx, action.kind)),
                        depth: nodes[idx].depth + 1,
                        children: vec![],
                    });
                    seen.insert(key, nodes.len() - 1);
                    nodes.len() - 1
                }
            };
            nodes[idx].children.push(child_idx);
        }
    }

    // distance to the nearest valid state; children always hold more facts
    let mut order: Vec<usize> = (0..nodes.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(nodes[i].state.fact_count()));
    let mut dist = vec![u32::MAX; nodes.len()];
    let mut invalid_states = 0;
    let mut unrepairable_states = 0;
    for &i in &order {
        if is_valid(&nodes[i].state) {
            dist[i] = 0;
        } else {
            invalid_states += 1;
            dist[i] = nodes[i]
                .children
                .iter()
                .map(|&c| dist[c].saturating_add(1))
                .min()
                .unwrap_or(u32::MAX);
        }
        if dist[i] == u32::MAX || nodes[i].depth.saturating_add(dist[i]) > scope.max_steps {
            unrepairable_states += 1;
        }
    }
    UiSafetyReport {
        max_steps: scope.max_steps,
        states: nodes.len(),
        terminal_states: nodes.iter().filter(|n| n.depth == scope.max_steps).count(),
        invalid_states,
        unrepairable_states,
        counterexample,
    }
}

fn class_counts(state: &ConfigurationState) -> [usize; 12] {
    let mut out = [0; 12];
    for (_, c) in state.objects() {
        if let Some(i) = ClassName::LEAVES.iter().position(|&l| l == c) {
            out[i] += 1;
        }
    }
    out
}

/// Searches for a shortest UI action sequence whose final state is
/// isomorphic to `target`.
pub fn check_ui_completeness(
    target: &ConfigurationState,
    scope: &Scope,
) -> Result<Option<Vec<Action>>, VerifierError> {
    let violations = detect_violations(target);
    if !violations.is_empty() {
        return Err(VerifierError::InvalidTarget(violations.into_iter().collect()));
    }
    let want = class_counts(target);
    let want_facts = target.fact_count();
    let mut frontier: Vec<(ConfigurationState, Vec<Action>)> = vec![(ConfigurationState::new(), vec![])];
    let mut seen: HashMap<u64, Vec<ConfigurationState>> = HashMap::new();
    let mut exact: HashSet<Vec<Fact>> = HashSet::new();
    for depth in 0..=scope.max_steps {
        let mut next_frontier = Vec::new();
        for (state, path) in frontier {
            if state.fact_count() == want_facts && are_isomorphic(&state, target) {
                return Ok(Some(path));
            }
            if depth == scope.max_steps {
                continue;
            }
            for action in ui_actions(&state, &detect_violations(&state)) {
                let Ok(child) = action.apply(&state) else { continue };
                if child.fact_count() > want_facts {
                    continue;
                }
                let counts = class_counts(&child);
                if counts.iter().zip(want.iter()).any(|(have, want)| have > want) {
                    continue;
                }
                if !exact.insert(child.facts()) {
                    continue;
                }
                let bucket = seen.entry(invariant(&child)).or_default();
                if bucket.iter().any(|s| are_isomorphic(s, &child)) {
                    continue;
                }
                bucket.push(child.clone());
                let mut p = path.clone();
                p.push(action);
                next_frontier.push((child, p));
            }
        }
        frontier = next_frontier;
    }
    Ok(None)
}
