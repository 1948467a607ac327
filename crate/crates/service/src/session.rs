use std::time::Instant;

use rackconf_core::engine::{
    parse_trace, solve, write_actions, Action, SolveOptions, SolveStatus,
};
use rackconf_core::model::{
    detect_violations, print_configuration, ConfigurationState, Violation,
};
use rackconf_core::strategies::Strategy;
use serde::{Deserialize, Serialize};

use crate::error::ServiceError;

/// One interactive configuration process: the starting configuration, the
/// actions applied so far and the state they lead to.
#[derive(Debug, Clone)]
pub struct Session {
    pub id: String,
    strategy: Strategy,
    initial: ConfigurationState,
    history: Vec<Action>,
    current: ConfigurationState,
    pub(crate) touched: Instant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationView {
    pub kind: String,
    pub subjects: Vec<u32>,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionView {
    pub index: usize,
    pub label: String,
    /// Facts the action would add.
    pub effects: Vec<String>,
}

/// Immutable view of a session returned by every endpoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snapshot {
    pub id: String,
    pub strategy: String,
    pub step: u32,
    pub facts: Vec<String>,
    pub violations: Vec<ViolationView>,
    pub actions: Vec<ActionView>,
    pub valid: bool,
}

impl From<&Violation> for ViolationView {
    fn from(v: &Violation) -> Self {
        ViolationView {
            kind: v.kind.name().to_string(),
            subjects: vec![v.kind.subject().0],
            text: v.kind.to_string(),
        }
    }
}

impl Session {
    pub fn new(id: String, strategy: Strategy, initial: ConfigurationState) -> Self {
        Session {
            id,
            strategy,
            current: initial.clone(),
            initial,
            history: Vec::new(),
            touched: Instant::now(),
        }
    }

    /// Rebuilds a session from trace text (initial facts plus numbered
    /// actions), checking every recorded effect.
    pub fn from_trace(id: String, strategy: Strategy, text: &str) -> Result<Self, ServiceError> {
        let parsed = parse_trace(text).map_err(|e| ServiceError::MalformedConfiguration(e.to_string()))?;
        parsed.replay().map_err(|e| ServiceError::MalformedConfiguration(e.to_string()))?;
        let mut session = Session::new(id, strategy, parsed.initial.clone());
        for kind in parsed.actions {
            let (action, next) = Action::new(kind, &session.current)
                .map_err(|e| ServiceError::MalformedConfiguration(e.to_string()))?;
            session.history.push(action);
            session.current = next;
        }
        Ok(session)
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn current(&self) -> &ConfigurationState {
        &self.current
    }

    pub fn history(&self) -> &[Action] {
        &self.history
    }

    pub fn possible_actions(&self) -> Vec<Action> {
        let violations = detect_violations(&self.current);
        self.strategy.generate(&self.current, &violations)
    }

    pub fn snapshot(&self) -> Snapshot {
        let violations = detect_violations(&self.current);
        let actions = self.strategy.generate(&self.current, &violations);
        Snapshot {
            id: self.id.clone(),
            strategy: self.strategy.name().to_string(),
            step: self.current.step(),
            facts: self.current.facts().iter().map(|f| f.to_string()).collect(),
            valid: violations.is_empty(),
            violations: violations.iter().map(ViolationView::from).collect(),
            actions: actions
                .iter()
                .enumerate()
                .map(|(index, a)| ActionView {
                    index,
                    label: a.kind.to_string(),
                    effects: a.effects.iter().map(|e| e.fact().to_string()).collect(),
                })
                .collect(),
        }
    }

    /// Applies the action at `index` of the current listing. With
    /// `expected_step` set, the call fails if the session has moved on since
    /// the caller read that step.
    pub fn apply(&mut self, index: usize, expected_step: Option<u32>) -> Result<Snapshot, ServiceError> {
        let step = self.current.step();
        if let Some(expected) = expected_step {
            if expected != step {
                return Err(ServiceError::StaleActionIndex { expected, current: step });
            }
        }
        let mut actions = self.possible_actions();
        if index >= actions.len() {
            return Err(ServiceError::IndexOutOfRange { index, len: actions.len() });
        }
        let action = actions.swap_remove(index);
        self.current = action.apply(&self.current).map_err(|e| ServiceError::Engine(e.to_string()))?;
        self.history.push(action);
        Ok(self.snapshot())
    }

    /// Drops the last action and recomputes the state from the start.
    pub fn undo(&mut self) -> Result<Snapshot, ServiceError> {
        if self.history.pop().is_none() {
            return Err(ServiceError::NothingToUndo);
        }
        let mut state = self.initial.clone();
        for action in &self.history {
            state = action.apply(&state).map_err(|e| ServiceError::Engine(e.to_string()))?;
        }
        self.current = state;
        Ok(self.snapshot())
    }

    /// Solves from the current state with the session's strategy and, if a
    /// solution is found, appends its actions to the history.
    pub fn autocomplete(&mut self, opts: &SolveOptions) -> Result<(SolveStatus, Snapshot), ServiceError> {
        let trace = solve(&self.current, self.strategy, opts).map_err(|e| ServiceError::Engine(e.to_string()))?;
        if trace.is_solved() {
            for step in trace.steps {
                self.history.push(step.action);
                self.current = step.state;
            }
        }
        Ok((trace.result, self.snapshot()))
    }

    /// The current configuration in the text fact format.
    pub fn export(&self) -> String {
        print_configuration(&self.current)
    }

    /// Initial facts plus the applied actions, importable again.
    pub fn trace(&self) -> String {
        write_actions(&self.initial, &self.history)
    }
}
