//! Scope-bounded reasoning about strategies: counterexample search for the
//! deterministic algorithm, and reachability questions about UI actions.

mod algorithm;
mod ui;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use algorithm::{check_algorithm, run_input, Counterexample};
pub use ui::{check_ui_completeness, check_ui_safety, UiSafetyReport, UnsafeAction};

use crate::engine::EngineError;
use crate::model::{detect_violations, ConfigurationState, ElementCounts, ObjectId, Violation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scope {
    /// Upper bound on the count of each element type in an input.
    pub max_per_element_type: u32,
    pub max_steps: u32,
}

impl Scope {
    pub fn new(max_per_element_type: u32, max_steps: u32) -> Self {
        Scope { max_per_element_type, max_steps }
    }

    /// Number of inputs in the scope.
    pub fn input_count(&self) -> u64 {
        (self.max_per_element_type as u64 + 1).pow(4)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifierError {
    #[error("the algorithmic strategy did not solve input {0}")]
    ScopeExhaustedUnsolved(ElementCounts),
    #[error("target configuration is not valid: {0:?}")]
    InvalidTarget(Vec<Violation>),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Objects that together break a property.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Witness {
    pub objects: Vec<ObjectId>,
    pub reason: String,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<String> = self.objects.iter().map(|o| o.to_string()).collect();
        write!(f, "{} [{}]", self.reason, ids.join(","))
    }
}

/// A named property of final states. An empty witness list means it holds.
#[derive(Clone)]
pub struct PropertySpec {
    pub name: String,
    check: fn(&ConfigurationState) -> Vec<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown property '{0}' (expected same-frame or valid)")]
pub struct UnknownProperty(pub String);

impl PropertySpec {
    pub fn new(name: impl Into<String>, check: fn(&ConfigurationState) -> Vec<Witness>) -> Self {
        PropertySpec { name: name.into(), check }
    }

    /// Every element has all of its modules in one frame.
    pub fn same_frame() -> Self {
        PropertySpec::new("same-frame", same_frame_witnesses)
    }

    /// The final state has no violations.
    pub fn valid() -> Self {
        PropertySpec::new("valid", valid_witnesses)
    }

    pub fn check(&self, state: &ConfigurationState) -> Vec<Witness> {
        (self.check)(state)
    }
}

impl fmt::Debug for PropertySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PropertySpec").field("name", &self.name).finish()
    }
}

impl FromStr for PropertySpec {
    type Err = UnknownProperty;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "same-frame" | "same_frame" => Ok(PropertySpec::same_frame()),
            "valid" => Ok(PropertySpec::valid()),
            other => Err(UnknownProperty(other.to_string())),
        }
    }
}

fn same_frame_witnesses(state: &ConfigurationState) -> Vec<Witness> {
    let mut out = Vec::new();
    for e in state.objects_where(|c| c.is_element()) {
        let modules = state.modules_of(e);
        let mut frames: Vec<ObjectId> = modules.iter().filter_map(|&m| state.frame_of(m)).collect();
        frames.sort();
        frames.dedup();
        if frames.len() > 1 {
            let mut objects = vec![e];
            objects.extend(frames.iter().copied());
            out.push(Witness {
                objects,
                reason: format!("modules of element {e} are spread over {} frames", frames.len()),
            });
        }
    }
    out
}

fn valid_witnesses(state: &ConfigurationState) -> Vec<Witness> {
    detect_violations(state)
        .into_iter()
        .map(|v| Witness { objects: vec![v.kind.subject()], reason: v.kind.to_string() })
        .collect()
}
