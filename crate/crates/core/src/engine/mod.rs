//! The incremental solve loop: detect violations, ask the strategy for the
//! possible actions, apply exactly one, repeat until nothing is violated.

mod action;
mod search;
pub mod trace;

use std::collections::BTreeSet;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use action::{Action, ActionError, ActionKind, FrameTarget, RackTarget};
pub use search::{advance, solve, solve_with_goal};
pub use trace::{parse_trace, write_actions, write_trace, ParsedTrace, TraceError};

use crate::model::{
    detect_violations, ConfigurationState, ElementCounts, HardViolation, Violation,
};
use crate::strategies::Strategy;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("initial state violates hard constraints: {0:?}")]
    InvalidInitialState(Vec<HardViolation>),
    #[error("invalid solve options: {0}")]
    InvalidOptions(String),
    #[error("action at step {step} is not applicable: {reason}")]
    InapplicableAction { step: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub max_steps: u32,
    /// Skip states already explored with at least the same remaining step
    /// budget. States are keyed by their sorted fact list.
    pub visited_state_pruning: bool,
    /// Maximum number of search nodes to expand.
    pub node_budget: Option<u64>,
    /// Wall-clock limit for one solve call.
    pub time_limit: Option<Duration>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_steps: 500,
            visited_state_pruning: false,
            node_budget: None,
            time_limit: None,
        }
    }
}

impl SolveOptions {
    pub fn validate(&self) -> Result<(), EngineError> {
        if self.max_steps == 0 {
            return Err(EngineError::InvalidOptions("max_steps must be at least 1".into()));
        }
        if self.node_budget == Some(0) {
            return Err(EngineError::InvalidOptions("node_budget must be positive".into()));
        }
        Ok(())
    }
}

/// What counts as a finished configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Goal {
    /// No violations remain.
    #[default]
    Valid,
    /// No violations remain and at least the given number of elements of
    /// each type exist. Used when a list of elements is an order to be
    /// built from scratch rather than a partial configuration.
    ValidWithElements(ElementCounts),
}

impl Goal {
    pub fn demand(&self) -> Option<&ElementCounts> {
        match self {
            Goal::Valid => None,
            Goal::ValidWithElements(c) => Some(c),
        }
    }

    pub fn is_reached(&self, state: &ConfigurationState, violations: &BTreeSet<Violation>) -> bool {
        violations.is_empty() && self.demand_met(state)
    }

    pub fn demand_met(&self, state: &ConfigurationState) -> bool {
        match self {
            Goal::Valid => true,
            Goal::ValidWithElements(want) => {
                let have = state.element_counts();
                (0..4).all(|i| have.0[i] >= want.0[i])
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SolveStatus {
    Solved,
    /// The search space was explored completely without a solution.
    Exhausted,
    /// Every remaining branch would need more than `max_steps` steps.
    StepBoundReached,
    NodeBudgetExhausted,
    TimedOut,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Solved => "solved",
            SolveStatus::Exhausted => "exhausted",
            SolveStatus::StepBoundReached => "step_bound_reached",
            SolveStatus::NodeBudgetExhausted => "node_budget_exhausted",
            SolveStatus::TimedOut => "timed_out",
        }
    }
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    /// 1-based position in the trace.
    pub index: u32,
    pub action: Action,
    pub state: ConfigurationState,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    /// Number of step horizons tried.
    pub iterations: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveTrace {
    pub initial: ConfigurationState,
    pub steps: Vec<TraceStep>,
    pub result: SolveStatus,
    pub stats: SearchStats,
}

impl SolveTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_solved(&self) -> bool {
        self.result == SolveStatus::Solved
    }

    /// The last state of the trace (the initial state for an empty trace).
    pub fn final_state(&self) -> &ConfigurationState {
        self.steps.last().map(|s| &s.state).unwrap_or(&self.initial)
    }

    pub fn action_kinds(&self) -> Vec<ActionKind> {
        self.steps.iter().map(|s| s.action.kind).collect()
    }
}

/// One engine step: the current violations and the strategy's possible
/// actions for them. A state without violations has no actions here, since
/// the iteration guard has been reached.
pub fn step(state: &ConfigurationState, strategy: Strategy) -> (BTreeSet<Violation>, Vec<Action>) {
    let violations = detect_violations(state);
    if violations.is_empty() {
        return (violations, Vec::new());
    }
    let actions = strategy.generate(state, &violations);
    (violations, actions)
}

/// Result of one deterministic move, see [`advance`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepOutcome {
    Solved(ConfigurationState),
    Continue { state: ConfigurationState, chosen: Action, alternatives_remaining: usize },
    DeadEnd,
}

/// Re-applies `actions` from `initial`, re-expanding each label against the
/// state it is applied to.
pub fn replay<'a, I>(initial: &ConfigurationState, actions: I) -> Result<ConfigurationState, EngineError>
where
    I: IntoIterator<Item = &'a ActionKind>,
{
    let mut state = initial.clone();
    for (i, kind) in actions.into_iter().enumerate() {
        state = Action::new(*kind, &state)
            .map_err(|e| EngineError::InapplicableAction { step: i + 1, reason: e.to_string() })?
            .1;
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ClassName, ObjectId};

    #[test]
    fn options_validation() {
        assert!(SolveOptions::default().validate().is_ok());
        assert_eq!(SolveOptions::default().max_steps, 500);
        let bad = SolveOptions { max_steps: 0, ..Default::default() };
        assert!(matches!(bad.validate(), Err(EngineError::InvalidOptions(_))));
    }

    #[test]
    fn step_on_lone_rack_offers_frames() {
        let (s, _) = ConfigurationState::new().create_object(ClassName::RackSingle).unwrap();
        let (v, actions) = step(&s, Strategy::Ordered);
        assert_eq!(v.len(), 1);
        assert!(actions.iter().any(|a| a.kind == ActionKind::CreateFramesForRack(ObjectId(1))));
    }

    #[test]
    fn step_on_valid_state_is_empty() {
        for strategy in Strategy::ALL {
            let (v, a) = step(&ConfigurationState::new(), strategy);
            assert!(v.is_empty() && a.is_empty());
        }
    }

    #[test]
    fn step_generic_on_element_creates_only() {
        let (s, _) = ConfigurationState::new().create_object(ClassName::ElementA).unwrap();
        let (_, actions) = step(&s, Strategy::Generic);
        assert_eq!(actions.len(), 12);
        assert!(actions.iter().all(|a| matches!(a.kind, ActionKind::CreateObject(_))));
    }

    #[test]
    fn replay_rejects_unknown_ids() {
        let s = ConfigurationState::new();
        let err = replay(&s, &[ActionKind::CreateFramesForRack(ObjectId(4))]).unwrap_err();
        assert!(matches!(err, EngineError::InapplicableAction { step: 1, .. }));
    }

    #[test]
    fn goal_with_demand() {
        let g = Goal::ValidWithElements(ElementCounts::new(1, 0, 0, 0));
        let empty = ConfigurationState::new();
        assert!(!g.is_reached(&empty, &detect_violations(&empty)));
        assert!(Goal::Valid.is_reached(&empty, &detect_violations(&empty)));
    }
}
