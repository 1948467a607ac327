//! Lower-bound constraint violations: defects of a partial configuration
//! that can still be repaired by adding facts.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::class::ClassName;
use super::fact::ObjectId;
use super::state::ConfigurationState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ViolationKind {
    RackNeedsMoreFrames { rack: ObjectId },
    FrameNeedsRack { frame: ObjectId },
    ModuleNeedsFrame { module: ObjectId },
    ElementNeedsModules { element: ObjectId, missing: u32 },
    FrameModuleIIWithoutModuleV { frame: ObjectId },
    FrameModuleVWithoutModuleII { frame: ObjectId },
}

impl ViolationKind {
    /// The object the violation is about.
    pub fn subject(&self) -> ObjectId {
        match *self {
            ViolationKind::RackNeedsMoreFrames { rack } => rack,
            ViolationKind::FrameNeedsRack { frame }
            | ViolationKind::FrameModuleIIWithoutModuleV { frame }
            | ViolationKind::FrameModuleVWithoutModuleII { frame } => frame,
            ViolationKind::ModuleNeedsFrame { module } => module,
            ViolationKind::ElementNeedsModules { element, .. } => element,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ViolationKind::RackNeedsMoreFrames { .. } => "rack_needs_more_frames",
            ViolationKind::FrameNeedsRack { .. } => "frame_needs_rack",
            ViolationKind::ModuleNeedsFrame { .. } => "module_needs_frame",
            ViolationKind::ElementNeedsModules { .. } => "element_needs_modules",
            ViolationKind::FrameModuleIIWithoutModuleV { .. } => "frame_moduleII_without_moduleV",
            ViolationKind::FrameModuleVWithoutModuleII { .. } => "frame_moduleV_without_moduleII",
        }
    }
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolationKind::ElementNeedsModules { element, missing } => {
                write!(f, "{}({element},{missing})", self.name())
            }
            other => write!(f, "{}({})", other.name(), other.subject()),
        }
    }
}

/// A violation observed at a given step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub step: u32,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cv({},{})", self.kind, self.step)
    }
}

/// Which optional lower-bound rules are enforced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationPolicy {
    /// A frame holding a moduleV must also hold a moduleII.
    pub module_v_requires_module_ii: bool,
}

impl Default for ViolationPolicy {
    fn default() -> Self {
        ViolationPolicy { module_v_requires_module_ii: true }
    }
}

pub fn detect_violations(state: &ConfigurationState) -> BTreeSet<Violation> {
    detect_violations_with(state, ViolationPolicy::default())
}

pub fn detect_violations_with(
    state: &ConfigurationState,
    policy: ViolationPolicy,
) -> BTreeSet<Violation> {
    let step = state.step();
    let mut out = BTreeSet::new();
    let mut push = |kind| {
        out.insert(Violation { kind, step });
    };
    for (id, class) in state.objects() {
        if class.is_rack() {
            if state.missing_frames(id) > 0 {
                push(ViolationKind::RackNeedsMoreFrames { rack: id });
            }
        } else if class.is_frame() {
            if state.rack_of(id).is_none() {
                push(ViolationKind::FrameNeedsRack { frame: id });
            }
            let ii = state.frame_count_of(id, ClassName::ModuleII);
            let v = state.frame_count_of(id, ClassName::ModuleV);
            if ii > 0 && v == 0 {
                push(ViolationKind::FrameModuleIIWithoutModuleV { frame: id });
            }
            if policy.module_v_requires_module_ii && v > 0 && ii == 0 {
                push(ViolationKind::FrameModuleVWithoutModuleII { frame: id });
            }
        } else if class.is_module() {
            if state.frame_of(id).is_none() {
                push(ViolationKind::ModuleNeedsFrame { module: id });
            }
        } else if class.is_element() {
            let missing = state.missing_modules(id);
            if missing > 0 {
                push(ViolationKind::ElementNeedsModules { element: id, missing: missing as u32 });
            }
        }
    }
    out
}

pub fn is_valid(state: &ConfigurationState) -> bool {
    detect_violations(state).is_empty()
}
