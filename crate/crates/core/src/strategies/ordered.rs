//! Ordered strategy: four priority levels. Only the lowest level that has
//! an applicable action is offered.
//!
//! 1. create all missing modules of an element,
//! 2. put a module into an existing frame or a new one,
//! 3. put a frame into an existing rack or a new one,
//! 4. create the missing frames of a rack.

use std::collections::BTreeSet;

use crate::engine::{Action, ActionKind, FrameTarget, Goal, RackTarget};
use crate::model::{ClassName, ConfigurationState, Violation};

use super::{frame_accepts, missing_elements, unframed_modules, unracked_frames};

pub fn ordered_actions(state: &ConfigurationState, _violations: &BTreeSet<Violation>) -> Vec<Action> {
    for level in 1..=4 {
        let actions: Vec<Action> = level_kinds(state, level)
            .into_iter()
            .filter_map(|k| Action::new(k, state).ok().map(|(a, _)| a))
            .collect();
        if !actions.is_empty() {
            return actions;
        }
    }
    Vec::new()
}

/// Candidate labels of one priority level in canonical order.
pub(super) fn level_kinds(state: &ConfigurationState, level: u8) -> Vec<ActionKind> {
    let mut out = Vec::new();
    match level {
        1 => {
            for (e, c) in state.objects() {
                if c.is_element() && state.missing_modules(e) > 0 {
                    out.push(ActionKind::CreateModulesForElement(e));
                }
            }
        }
        2 => {
            let frames: Vec<_> = state.objects_where(|c| c.is_frame()).collect();
            for m in unframed_modules(state) {
                let mc = state.class_of(m).expect("listed object");
                for &f in &frames {
                    if frame_accepts(state, f, mc) {
                        out.push(ActionKind::CreateFrameForModule {
                            module: m,
                            target: FrameTarget::Existing(f),
                        });
                    }
                }
                out.push(ActionKind::CreateFrameForModule { module: m, target: FrameTarget::New });
            }
        }
        3 => {
            let racks: Vec<_> = state
                .objects_where(|c| c.is_rack())
                .filter(|&r| state.missing_frames(r) > 0)
                .collect();
            for f in unracked_frames(state) {
                for &r in &racks {
                    out.push(ActionKind::CreateRackForFrame {
                        frame: f,
                        target: RackTarget::Existing(r),
                    });
                }
                for class in ClassName::RACKS {
                    out.push(ActionKind::CreateRackForFrame {
                        frame: f,
                        target: RackTarget::New(class),
                    });
                }
            }
        }
        4 => {
            for r in state.objects_where(|c| c.is_rack()) {
                if state.missing_frames(r) > 0 {
                    out.push(ActionKind::CreateFramesForRack(r));
                }
            }
        }
        _ => {}
    }
    out
}

/// One action per element with missing modules, per module still to be
/// placed, per frame without a rack and per rack missing frames. A module
/// that cannot go into any existing frame also makes a new frame, which
/// later needs its own rack action.
pub(super) fn lower_bound(state: &ConfigurationState, goal: &Goal) -> Option<u32> {
    if missing_elements(state, goal).iter().any(|&n| n > 0) {
        return None;
    }
    let mut h = 0usize;
    let mut pending = 0usize;
    for (id, class) in state.objects() {
        if class.is_element() {
            let missing = state.missing_modules(id);
            if missing > 0 {
                h += 1;
                pending += missing;
            }
        } else if class.is_rack() && state.missing_frames(id) > 0 {
            h += 1;
        }
    }
    let unframed: Vec<_> = unframed_modules(state).collect();
    pending += unframed.len();
    h += pending + unracked_frames(state).count();
    if pending > 0 {
        let any_room = state
            .objects_where(|c| c.is_frame())
            .any(|f| state.modules_in(f).len() < crate::model::FRAME_MODULE_CAPACITY);
        if !any_room {
            h += 1;
        }
    }
    Some(h as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{detect_violations, ObjectId};

    fn kinds(s: &ConfigurationState) -> Vec<ActionKind> {
        ordered_actions(s, &detect_violations(s)).into_iter().map(|a| a.kind).collect()
    }

    #[test]
    fn element_gets_modules_first() {
        let s = ConfigurationState::new().create_object(ClassName::ElementA).unwrap().0;
        assert_eq!(kinds(&s), vec![ActionKind::CreateModulesForElement(ObjectId(1))]);
    }

    #[test]
    fn levels_never_mix() {
        let s = ConfigurationState::new().create_object(ClassName::ElementB).unwrap().0;
        let s = s.create_object(ClassName::Frame).unwrap().0;
        let s = s.create_object(ClassName::RackDouble).unwrap().0;
        let k = kinds(&s);
        assert!(k.iter().all(|k| matches!(k, ActionKind::CreateModulesForElement(_))));
    }

    #[test]
    fn rack_targets_existing_then_new() {
        let s = ConfigurationState::new().create_object(ClassName::RackSingle).unwrap().0;
        let s = s.create_object(ClassName::Frame).unwrap().0;
        assert_eq!(
            kinds(&s),
            vec![
                ActionKind::CreateRackForFrame {
                    frame: ObjectId(2),
                    target: RackTarget::Existing(ObjectId(1))
                },
                ActionKind::CreateRackForFrame {
                    frame: ObjectId(2),
                    target: RackTarget::New(ClassName::RackSingle)
                },
                ActionKind::CreateRackForFrame {
                    frame: ObjectId(2),
                    target: RackTarget::New(ClassName::RackDouble)
                },
            ]
        );
    }

    #[test]
    fn element_d_modules_in_one_step() {
        let s = ConfigurationState::new().create_object(ClassName::ElementD).unwrap().0;
        let a = ordered_actions(&s, &detect_violations(&s));
        let next = a[0].apply(&s).unwrap();
        assert_eq!(next.count_class(ClassName::ModuleIV), 4);
    }
}
