//! Algorithmic strategy: the ordered priorities with every choice fixed.
//! Subjects go by ascending id, a module goes into the lowest-id frame that
//! takes it, a frame into the first rack with room, otherwise something new
//! is created (new racks are always rackSingle).

use std::collections::BTreeSet;

use crate::engine::{Action, ActionKind, FrameTarget, RackTarget};
use crate::model::{ClassName, ConfigurationState, ObjectId, Violation};

use super::{frame_accepts, unframed_modules, unracked_frames};

/// Smallest-id rack that can take one more frame.
pub fn first_usable_rack(state: &ConfigurationState) -> Option<ObjectId> {
    state
        .objects_where(|c| c.is_rack())
        .find(|&r| state.missing_frames(r) > 0)
}

/// Smallest-id frame that can take a module of class `module`.
pub fn first_usable_frame(state: &ConfigurationState, module: ClassName) -> Option<ObjectId> {
    state
        .objects_where(|c| c.is_frame())
        .find(|&f| frame_accepts(state, f, module))
}

fn next_kind(state: &ConfigurationState) -> Option<ActionKind> {
    if let Some(e) = state
        .objects_where(|c| c.is_element())
        .find(|&e| state.missing_modules(e) > 0)
    {
        return Some(ActionKind::CreateModulesForElement(e));
    }
    if let Some(m) = unframed_modules(state).next() {
        let class = state.class_of(m)?;
        let target = first_usable_frame(state, class).map_or(FrameTarget::New, FrameTarget::Existing);
        return Some(ActionKind::CreateFrameForModule { module: m, target });
    }
    if let Some(f) = unracked_frames(state).next() {
        let target = first_usable_rack(state)
            .map_or(RackTarget::New(ClassName::RackSingle), RackTarget::Existing);
        return Some(ActionKind::CreateRackForFrame { frame: f, target });
    }
    state
        .objects_where(|c| c.is_rack())
        .find(|&r| state.missing_frames(r) > 0)
        .map(ActionKind::CreateFramesForRack)
}

/// The single action of the algorithmic strategy, if any.
pub fn algorithmic_action(
    state: &ConfigurationState,
    violations: &BTreeSet<Violation>,
) -> Option<Action> {
    if violations.is_empty() {
        return None;
    }
    let kind = next_kind(state)?;
    Action::new(kind, state).ok().map(|(a, _)| a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{detect_violations, AssociationKind};

    fn racks_and_frame() -> ConfigurationState {
        // r1 rackSingle full, r2 rackSingle with 2 frames, pending frame
        let mut s = ConfigurationState::new();
        let (next, r1) = s.create_object(ClassName::RackSingle).unwrap();
        s = next;
        let (next, r2) = s.create_object(ClassName::RackSingle).unwrap();
        s = next;
        for i in 0..6 {
            let (next, f) = s.create_object(ClassName::Frame).unwrap();
            let rack = if i < 4 { r1 } else { r2 };
            s = next.associate(AssociationKind::RackFrame, rack, f).unwrap();
        }
        s.create_object(ClassName::Frame).unwrap().0
    }

    #[test]
    fn picks_first_rack_with_room() {
        let s = racks_and_frame();
        assert_eq!(first_usable_rack(&s), Some(ObjectId(2)));
        let a = algorithmic_action(&s, &detect_violations(&s)).unwrap();
        assert_eq!(
            a.kind,
            ActionKind::CreateRackForFrame { frame: ObjectId(9), target: RackTarget::Existing(ObjectId(2)) }
        );
    }

    #[test]
    fn new_rack_single_when_none_usable() {
        let s = ConfigurationState::new().create_object(ClassName::Frame).unwrap().0;
        assert_eq!(first_usable_rack(&s), None);
        let a = algorithmic_action(&s, &detect_violations(&s)).unwrap();
        assert_eq!(
            a.kind,
            ActionKind::CreateRackForFrame {
                frame: ObjectId(1),
                target: RackTarget::New(ClassName::RackSingle)
            }
        );
    }

    #[test]
    fn full_double_rack_is_not_usable() {
        let (mut s, r) = ConfigurationState::new().create_object(ClassName::RackDouble).unwrap();
        for _ in 0..8 {
            let (next, f) = s.create_object(ClassName::Frame).unwrap();
            s = next.associate(AssociationKind::RackFrame, r, f).unwrap();
        }
        assert_eq!(first_usable_rack(&s), None);
        assert_eq!(first_usable_rack(&ConfigurationState::new()), None);
    }

    #[test]
    fn valid_state_has_no_action() {
        let s = ConfigurationState::new();
        assert!(algorithmic_action(&s, &detect_violations(&s)).is_none());
    }
}
