//! Pluggable action generators. Each strategy turns a state and its
//! violations into an ordered list of applicable actions, and provides an
//! admissible lower bound on the number of its own steps still needed,
//! which the engine uses to cut hopeless branches.

mod algorithmic;
mod generic;
mod ordered;
mod ui;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use algorithmic::{algorithmic_action, first_usable_frame, first_usable_rack};
pub use generic::generic_actions;
pub use ordered::ordered_actions;
pub use ui::ui_actions;

use crate::engine::{Action, Goal};
use crate::model::{ClassName, ConfigurationState, ObjectId, Violation, FRAME_MODULE_CAPACITY};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Generic,
    Ordered,
    Algorithmic,
    Ui,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown strategy '{0}' (expected generic, ordered, algorithmic or ui)")]
pub struct UnknownStrategy(pub String);

impl Strategy {
    pub const ALL: [Strategy; 4] =
        [Strategy::Generic, Strategy::Ordered, Strategy::Algorithmic, Strategy::Ui];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Generic => "generic",
            Strategy::Ordered => "ordered",
            Strategy::Algorithmic => "algorithmic",
            Strategy::Ui => "ui",
        }
    }

    /// True when the strategy offers at most one action per step.
    pub fn is_deterministic(self) -> bool {
        self == Strategy::Algorithmic
    }

    /// The strategy's possible actions in canonical order. The UI strategy
    /// also offers actions on valid states; the others only repair.
    /// Whether every action sequence the strategy offers ends after finitely
    /// many steps: each action repairs a violation without opening
    /// unboundedly many new ones. Generic and UI can always create more.
    pub fn has_finite_depth(self) -> bool {
        matches!(self, Strategy::Ordered | Strategy::Algorithmic)
    }

    pub fn generate(
        self,
        state: &ConfigurationState,
        violations: &BTreeSet<Violation>,
    ) -> Vec<Action> {
        match self {
            Strategy::Ui => ui_actions(state, violations),
            _ if violations.is_empty() => Vec::new(),
            Strategy::Generic => generic_actions(state, violations),
            Strategy::Ordered => ordered_actions(state, violations),
            Strategy::Algorithmic => algorithmic_action(state, violations).into_iter().collect(),
        }
    }

    /// A lower bound on the steps this strategy needs to reach `goal` from
    /// `state`; `None` if the goal is unreachable with its actions.
    pub fn lower_bound(self, state: &ConfigurationState, goal: &Goal) -> Option<u32> {
        match self {
            Strategy::Generic => generic::lower_bound(state, goal),
            Strategy::Ordered => ordered::lower_bound(state, goal),
            Strategy::Algorithmic => ordered::lower_bound(state, goal),
            Strategy::Ui => ui::lower_bound(state, goal),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = UnknownStrategy;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| UnknownStrategy(s.to_string()))
    }
}

/// Whether `frame` can take one more module of class `module`, counting the
/// moduleV that comes along with a moduleII placed into a frame without one.
pub(crate) fn frame_accepts(state: &ConfigurationState, frame: ObjectId, module: ClassName) -> bool {
    let used = state.modules_in(frame).len();
    let has_v = state.frame_count_of(frame, ClassName::ModuleV) > 0;
    match module {
        ClassName::ModuleII => used + 1 + usize::from(!has_v) <= FRAME_MODULE_CAPACITY,
        ClassName::ModuleV => !has_v && used < FRAME_MODULE_CAPACITY,
        _ => used < FRAME_MODULE_CAPACITY,
    }
}

/// Modules without a frame, ascending.
pub(crate) fn unframed_modules(state: &ConfigurationState) -> impl Iterator<Item = ObjectId> + '_ {
    state
        .objects()
        .filter(move |&(id, c)| c.is_module() && state.frame_of(id).is_none())
        .map(|(id, _)| id)
}

/// Frames without a rack, ascending.
pub(crate) fn unracked_frames(state: &ConfigurationState) -> impl Iterator<Item = ObjectId> + '_ {
    state
        .objects()
        .filter(move |&(id, c)| c.is_frame() && state.rack_of(id).is_none())
        .map(|(id, _)| id)
}

/// Elements of each type that the goal demands but the state lacks.
pub(crate) fn missing_elements(state: &ConfigurationState, goal: &Goal) -> [u32; 4] {
    let mut out = [0; 4];
    if let Some(want) = goal.demand() {
        let have = state.element_counts();
        for (slot, (w, h)) in out.iter_mut().zip(want.0.iter().zip(have.0)) {
            *slot = w.saturating_sub(h);
        }
    }
    out
}
