//! Line-oriented trace files: the initial facts, then for every step
//! `step(T).`, `action(T,<term>).` and the facts the action added.

use std::fmt::Write as _;

use thiserror::Error;

use crate::model::format::{fact_from_term, statements, FormatError};
use crate::model::{ConfigurationState, Fact};

use super::{Action, ActionKind, EngineError, SolveTrace};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TraceError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("step {step}: recorded facts differ from the facts the action adds")]
    FactMismatch { step: usize },
}

pub fn write_trace(trace: &SolveTrace) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "% result: {}, {} steps", trace.result, trace.len());
    for fact in trace.initial.facts() {
        let _ = writeln!(out, "{fact}");
    }
    for step in &trace.steps {
        write_step(&mut out, step.index, &step.action);
    }
    out
}

/// Writes a trace given only the initial state and the applied actions.
pub fn write_actions(initial: &ConfigurationState, actions: &[Action]) -> String {
    let mut out = String::new();
    for fact in initial.facts() {
        let _ = writeln!(out, "{fact}");
    }
    for (i, action) in actions.iter().enumerate() {
        write_step(&mut out, i as u32 + 1, action);
    }
    out
}

fn write_step(out: &mut String, index: u32, action: &Action) {
    let _ = writeln!(out, "step({index}).");
    let _ = writeln!(out, "action({index},{}).", action.kind);
    for effect in &action.effects {
        let _ = writeln!(out, "{}", effect.fact());
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedTrace {
    pub initial: ConfigurationState,
    pub actions: Vec<ActionKind>,
    /// Facts recorded under each step, in file order.
    pub added: Vec<Vec<Fact>>,
}

impl ParsedTrace {
    /// Re-applies the actions and checks that each one adds exactly the
    /// recorded facts. Returns the final state.
    pub fn replay(&self) -> Result<ConfigurationState, TraceError> {
        let mut state = self.initial.clone();
        for (i, kind) in self.actions.iter().enumerate() {
            let (action, next) = Action::new(*kind, &state).map_err(|e| {
                EngineError::InapplicableAction { step: i + 1, reason: e.to_string() }
            })?;
            let mut produced: Vec<Fact> = action.effects.iter().map(|e| e.fact()).collect();
            let mut recorded = self.added[i].clone();
            produced.sort();
            recorded.sort();
            if produced != recorded {
                return Err(TraceError::FactMismatch { step: i + 1 });
            }
            state = next;
        }
        Ok(state)
    }
}

pub fn parse_trace(text: &str) -> Result<ParsedTrace, TraceError> {
    let mut initial = Vec::new();
    let mut actions = Vec::new();
    let mut added: Vec<Vec<Fact>> = Vec::new();
    // step declared by the latest `step(T).`, and whether its action was seen
    let mut current: Option<(usize, bool)> = None;
    for (line, term) in statements(text) {
        let syntax = |message: String| TraceError::Syntax { line, message };
        let term = term.map_err(syntax)?;
        let index = |t: &crate::model::format::Term| {
            t.name.parse::<usize>().map_err(|_| syntax(format!("bad step index '{t}'")))
        };
        match (term.name.as_str(), term.args.as_slice()) {
            ("step", [t]) => {
                let t = index(t)?;
                if t != actions.len() + 1 {
                    return Err(syntax(format!("expected step {}, found {t}", actions.len() + 1)));
                }
                if let Some((_, false)) = current {
                    return Err(syntax("previous step has no action".into()));
                }
                current = Some((t, false));
            }
            ("action", [t, a]) => {
                let t = index(t)?;
                match current {
                    Some((s, false)) if s == t => {}
                    _ => return Err(syntax(format!("action({t},...) without matching step"))),
                }
                let kind = ActionKind::from_term(a).map_err(|e| syntax(e.to_string()))?;
                actions.push(kind);
                added.push(Vec::new());
                current = Some((t, true));
            }
            _ => {
                let fact = fact_from_term(&term).map_err(syntax)?;
                match current {
                    None => initial.push(fact),
                    Some((_, true)) => added.last_mut().expect("action seen").push(fact),
                    Some((_, false)) => return Err(syntax("fact before the step's action".into())),
                }
            }
        }
    }
    if let Some((_, false)) = current {
        return Err(TraceError::Syntax { line: text.lines().count(), message: "last step has no action".into() });
    }
    let initial = ConfigurationState::from_facts(&initial).map_err(FormatError::from)?;
    Ok(ParsedTrace { initial, actions, added })
}
