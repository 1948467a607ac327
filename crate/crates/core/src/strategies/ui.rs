//! UI strategy: the coarse actions a person clicks in a configurator.
//! Create an element, create a rack with all its frames, or assign an
//! element to a rack (its modules are created and placed automatically).

use std::collections::BTreeSet;

use crate::engine::{Action, ActionKind, Goal};
use crate::model::{ClassName, ConfigurationState, Violation, FRAME_MODULE_CAPACITY};

use super::{missing_elements, unframed_modules, unracked_frames};

/// Offered on every state, valid or not: users may always extend.
pub fn ui_actions(state: &ConfigurationState, _violations: &BTreeSet<Violation>) -> Vec<Action> {
    let mut kinds: Vec<ActionKind> = ClassName::ELEMENTS
        .into_iter()
        .map(ActionKind::CreateElement)
        .chain(ClassName::RACKS.into_iter().map(ActionKind::CreateRack))
        .collect();
    let racks: Vec<_> = state.objects_where(|c| c.is_rack()).collect();
    for e in state.objects_where(|c| c.is_element()) {
        if !has_unplaced_modules(state, e) {
            continue;
        }
        for &r in &racks {
            kinds.push(ActionKind::AssignElementToRack { element: e, rack: r });
        }
    }
    kinds
        .into_iter()
        .filter_map(|k| Action::new(k, state).ok().map(|(a, _)| a))
        .collect()
}

fn has_unplaced_modules(state: &ConfigurationState, e: crate::model::ObjectId) -> bool {
    state.missing_modules(e) > 0 || state.modules_of(e).iter().any(|&m| state.frame_of(m).is_none())
}

/// One assignment per element with unplaced modules, two actions per
/// demanded element still missing, and one rack creation when no rack has
/// a free slot. Frames outside racks, racks missing frames and modules
/// without element or frame cannot be repaired by these actions.
pub(super) fn lower_bound(state: &ConfigurationState, goal: &Goal) -> Option<u32> {
    if unracked_frames(state).next().is_some() {
        return None;
    }
    if state.objects_where(|c| c.is_rack()).any(|r| state.missing_frames(r) > 0) {
        return None;
    }
    if unframed_modules(state).any(|m| state.element_of(m).is_none()) {
        return None;
    }
    let demanded: u32 = missing_elements(state, goal).iter().sum();
    let assignments = state
        .objects_where(|c| c.is_element())
        .filter(|&e| has_unplaced_modules(state, e))
        .count() as u32;
    let mut h = assignments + 2 * demanded;
    if assignments + demanded > 0 {
        let free_slot = state
            .objects_where(|c| c.is_frame())
            .any(|f| state.modules_in(f).len() < FRAME_MODULE_CAPACITY);
        if !free_slot {
            h += 1;
        }
    }
    Some(h)
}
