//! Generic strategy: create any leaf object or add any safe link. One fact
//! per step, so every configuration is reachable.

use std::collections::BTreeSet;

use crate::engine::{Action, ActionKind, Goal};
use crate::model::{
    AssociationKind, ClassName, ConfigurationState, Violation, FRAME_MODULE_CAPACITY,
};

use super::{missing_elements, unframed_modules, unracked_frames};

pub fn generic_actions(state: &ConfigurationState, _violations: &BTreeSet<Violation>) -> Vec<Action> {
    let mut out = Vec::new();
    for class in ClassName::LEAVES {
        if let Ok((a, _)) = Action::new(ActionKind::CreateObject(class), state) {
            out.push(a);
        }
    }
    let objects: Vec<_> = state.objects().collect();
    for kind in AssociationKind::ALL {
        for &(a, ca) in &objects {
            for &(b, cb) in &objects {
                if !kind.accepts(ca, cb) || state.check_association(kind, a, b).is_err() {
                    continue;
                }
                if let Ok((action, _)) = Action::new(ActionKind::Associate(kind, a, b), state) {
                    out.push(action);
                }
            }
        }
    }
    out
}

fn div_ceil(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

/// Counts facts that any valid extension must still add; every generic step
/// adds exactly one fact. The fact categories are disjoint.
pub(super) fn lower_bound(state: &ConfigurationState, goal: &Goal) -> Option<u32> {
    let mut h = 0usize;

    // elements still to create, with their element_module links
    let demand = missing_elements(state, goal);
    let mut need = [0usize; 4];
    for (i, class) in ClassName::ELEMENTS.into_iter().enumerate() {
        let (_, per) = class.requirement().expect("element class");
        h += demand[i] as usize * (1 + per);
        need[i] += demand[i] as usize * per;
    }
    for (id, class) in state.objects() {
        if let Some(i) = class.element_index() {
            let missing = state.missing_modules(id);
            h += missing; // element_module links
            need[i] += missing;
        }
    }

    // module objects to create
    let mut new_modules = 0;
    let mut new_ii = 0;
    for (i, class) in ClassName::ELEMENTS.into_iter().enumerate() {
        let (module, _) = class.requirement().expect("element class");
        let free = state
            .objects()
            .filter(|&(id, c)| c == module && state.element_of(id).is_none())
            .count();
        let n = need[i].saturating_sub(free);
        new_modules += n;
        if module == ClassName::ModuleII {
            new_ii = n;
        }
    }

    // moduleV objects to create
    let mut ii_without_v = 0usize;
    let mut v_frame_with_room = false;
    let mut ii_frame_with_room_for_v = false;
    for (frame, class) in state.objects() {
        if !class.is_frame() {
            continue;
        }
        let used = state.modules_in(frame).len();
        let ii = state.frame_count_of(frame, ClassName::ModuleII);
        let v = state.frame_count_of(frame, ClassName::ModuleV);
        if ii > 0 && v == 0 {
            if used >= FRAME_MODULE_CAPACITY {
                return None;
            }
            ii_without_v += 1;
            if used + 2 <= FRAME_MODULE_CAPACITY {
                ii_frame_with_room_for_v = true;
            }
        }
        if v > 0 {
            if ii == 0 && used >= FRAME_MODULE_CAPACITY {
                return None;
            }
            if used < FRAME_MODULE_CAPACITY {
                v_frame_with_room = true;
            }
        }
    }
    let loose_v = unframed_modules(state)
        .filter(|&m| state.class_of(m) == Some(ClassName::ModuleV))
        .count();
    let pending_ii = new_ii
        + unframed_modules(state)
            .filter(|&m| state.class_of(m) == Some(ClassName::ModuleII))
            .count();
    let mut new_v = ii_without_v.saturating_sub(loose_v);
    if pending_ii > 0 && loose_v <= ii_without_v && !v_frame_with_room && !ii_frame_with_room_for_v {
        new_v += 1;
    }
    h += new_modules + new_v;

    // frame_module links
    let unframed = unframed_modules(state).count();
    h += unframed + new_modules + new_v;

    // frames, racks and rack_frame links
    let modules_total = state.objects().filter(|(_, c)| c.is_module()).count() + new_modules + new_v;
    let frames_existing = state.objects().filter(|(_, c)| c.is_frame()).count();
    let rack_capacity: usize = state
        .objects()
        .filter_map(|(_, c)| c.frame_capacity())
        .sum();
    let mut frames_total = div_ceil(modules_total, FRAME_MODULE_CAPACITY)
        .max(frames_existing)
        .max(rack_capacity);
    frames_total = div_ceil(frames_total, 4) * 4;
    let new_frames = frames_total - frames_existing;
    let new_racks = div_ceil(frames_total - rack_capacity, 8);
    h += new_frames * 2 + new_racks + unracked_frames(state).count();

    Some(h as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{detect_violations, ElementCounts, ObjectId};

    fn with(classes: &[ClassName]) -> ConfigurationState {
        let mut s = ConfigurationState::new();
        for &c in classes {
            s = s.create_object(c).unwrap().0;
        }
        s
    }

    #[test]
    fn element_alone_offers_only_creates() {
        let s = with(&[ClassName::ElementA]);
        let a = generic_actions(&s, &detect_violations(&s));
        assert_eq!(a.len(), 12);
        let kinds: Vec<_> = a.iter().map(|a| a.kind).collect();
        for c in ClassName::LEAVES {
            assert!(kinds.contains(&ActionKind::CreateObject(c)));
        }
    }

    #[test]
    fn element_and_module_offer_the_link() {
        let s = with(&[ClassName::ElementA, ClassName::ModuleI]);
        let a = generic_actions(&s, &detect_violations(&s));
        let links: Vec<_> = a
            .iter()
            .filter(|a| matches!(a.kind, ActionKind::Associate(..)))
            .map(|a| a.kind)
            .collect();
        assert_eq!(
            links,
            vec![ActionKind::Associate(AssociationKind::ElementModule, ObjectId(1), ObjectId(2))]
        );
    }

    #[test]
    fn full_rack_offers_no_rack_link() {
        let mut s = with(&[ClassName::RackSingle]);
        for _ in 0..5 {
            s = s.create_object(ClassName::Frame).unwrap().0;
        }
        for f in 2..=5 {
            s = s.associate(AssociationKind::RackFrame, ObjectId(1), ObjectId(f)).unwrap();
        }
        let a = generic_actions(&s, &detect_violations(&s));
        assert!(!a.iter().any(|a| matches!(
            a.kind,
            ActionKind::Associate(AssociationKind::RackFrame, ObjectId(1), _)
        )));
    }

    #[test]
    fn bound_is_exact_for_single_elements() {
        let expected = [12, 17, 18, 21];
        for (i, class) in ClassName::ELEMENTS.into_iter().enumerate() {
            assert_eq!(lower_bound(&with(&[class]), &Goal::Valid), Some(expected[i]));
        }
        assert_eq!(lower_bound(&ConfigurationState::new(), &Goal::Valid), Some(0));
        let demand = Goal::ValidWithElements(ElementCounts::new(1, 0, 0, 0));
        assert_eq!(lower_bound(&ConfigurationState::new(), &demand), Some(13));
    }
}
