//! Upper-bound ("hard") constraints.
//!
//! These can never be violated by a [`ConfigurationState`](super::ConfigurationState):
//! the construction API refuses any edit that would break one. The raw
//! checker in this module works on plain fact lists so that callers holding
//! unvalidated facts (file input, simulated action effects) can evaluate
//! them without going through the guarded API.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::class::ClassName;
use super::fact::{Fact, ObjectId};

pub const FRAME_MODULE_CAPACITY: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum HardConstraint {
    RackSingleMaxFrames,
    RackDoubleMaxFrames,
    FrameMaxModules,
    FrameMaxOneRack,
    ModuleMaxOneFrame,
    ModuleMaxOneElement,
    ElementModuleTypeMatch,
    ElementMaxRequiredModules,
    FrameMaxOneModuleV,
}

impl HardConstraint {
    pub const ALL: [HardConstraint; 9] = [
        HardConstraint::RackSingleMaxFrames,
        HardConstraint::RackDoubleMaxFrames,
        HardConstraint::FrameMaxModules,
        HardConstraint::FrameMaxOneRack,
        HardConstraint::ModuleMaxOneFrame,
        HardConstraint::ModuleMaxOneElement,
        HardConstraint::ElementModuleTypeMatch,
        HardConstraint::ElementMaxRequiredModules,
        HardConstraint::FrameMaxOneModuleV,
    ];

    /// The numeric bound, for the constraints that carry one.
    pub fn limit(self) -> Option<usize> {
        match self {
            HardConstraint::RackSingleMaxFrames => Some(4),
            HardConstraint::RackDoubleMaxFrames => Some(8),
            HardConstraint::FrameMaxModules => Some(FRAME_MODULE_CAPACITY),
            HardConstraint::FrameMaxOneRack
            | HardConstraint::ModuleMaxOneFrame
            | HardConstraint::ModuleMaxOneElement
            | HardConstraint::FrameMaxOneModuleV => Some(1),
            HardConstraint::ElementModuleTypeMatch | HardConstraint::ElementMaxRequiredModules => {
                None
            }
        }
    }

    pub fn rack_limit(rack: ClassName) -> Option<HardConstraint> {
        match rack {
            ClassName::RackSingle => Some(HardConstraint::RackSingleMaxFrames),
            ClassName::RackDouble => Some(HardConstraint::RackDoubleMaxFrames),
            _ => None,
        }
    }
}

impl fmt::Display for HardConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            HardConstraint::RackSingleMaxFrames => "a rackSingle holds at most 4 frames",
            HardConstraint::RackDoubleMaxFrames => "a rackDouble holds at most 8 frames",
            HardConstraint::FrameMaxModules => "a frame holds at most 5 modules",
            HardConstraint::FrameMaxOneRack => "a frame belongs to at most one rack",
            HardConstraint::ModuleMaxOneFrame => "a module belongs to at most one frame",
            HardConstraint::ModuleMaxOneElement => "a module serves at most one element",
            HardConstraint::ElementModuleTypeMatch => "an element only takes its required module type",
            HardConstraint::ElementMaxRequiredModules => {
                "an element takes at most its required number of modules"
            }
            HardConstraint::FrameMaxOneModuleV => "a frame holds at most one moduleV",
        };
        f.write_str(s)
    }
}

/// A hard constraint broken by a raw fact list, with the offending objects.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HardViolation {
    pub constraint: HardConstraint,
    pub subjects: Vec<ObjectId>,
}

/// Evaluates every hard constraint over an arbitrary fact list.
///
/// Links whose endpoints are missing or of the wrong class are ignored here;
/// only `ElementModuleTypeMatch` looks at classes of element links.
pub fn hard_violations<'a, I>(facts: I) -> Vec<HardViolation>
where
    I: IntoIterator<Item = &'a Fact>,
{
    let mut class_of: BTreeMap<ObjectId, ClassName> = BTreeMap::new();
    let mut rack_frames: BTreeMap<ObjectId, Vec<ObjectId>> = BTreeMap::new();
    let mut frame_modules: BTreeMap<ObjectId, Vec<ObjectId>> = BTreeMap::new();
    let mut element_modules: BTreeMap<ObjectId, Vec<ObjectId>> = BTreeMap::new();
    let mut racks_of_frame: BTreeMap<ObjectId, Vec<ObjectId>> = BTreeMap::new();
    let mut frames_of_module: BTreeMap<ObjectId, Vec<ObjectId>> = BTreeMap::new();
    let mut elements_of_module: BTreeMap<ObjectId, Vec<ObjectId>> = BTreeMap::new();

    for fact in facts {
        match *fact {
            Fact::IsA(id, class) => {
                class_of.insert(id, class);
            }
            Fact::RackFrame(r, f) => {
                rack_frames.entry(r).or_default().push(f);
                racks_of_frame.entry(f).or_default().push(r);
            }
            Fact::FrameModule(f, m) => {
                frame_modules.entry(f).or_default().push(m);
                frames_of_module.entry(m).or_default().push(f);
            }
            Fact::ElementModule(e, m) => {
                element_modules.entry(e).or_default().push(m);
                elements_of_module.entry(m).or_default().push(e);
            }
        }
    }

    let mut out = Vec::new();
    let mut report = |constraint, mut subjects: Vec<ObjectId>| {
        subjects.sort();
        out.push(HardViolation { constraint, subjects });
    };

    for (rack, frames) in &rack_frames {
        let Some(class) = class_of.get(rack) else { continue };
        if let (Some(cap), Some(c)) = (class.frame_capacity(), HardConstraint::rack_limit(*class)) {
            if frames.len() > cap {
                report(c, vec![*rack]);
            }
        }
    }
    for (frame, modules) in &frame_modules {
        if modules.len() > FRAME_MODULE_CAPACITY {
            report(HardConstraint::FrameMaxModules, vec![*frame]);
        }
        let v = modules
            .iter()
            .filter(|m| class_of.get(m) == Some(&ClassName::ModuleV))
            .count();
        if v > 1 {
            report(HardConstraint::FrameMaxOneModuleV, vec![*frame]);
        }
    }
    for (frame, racks) in &racks_of_frame {
        if racks.len() > 1 {
            report(HardConstraint::FrameMaxOneRack, vec![*frame]);
        }
    }
    for (module, frames) in &frames_of_module {
        if frames.len() > 1 {
            report(HardConstraint::ModuleMaxOneFrame, vec![*module]);
        }
    }
    for (module, elements) in &elements_of_module {
        if elements.len() > 1 {
            report(HardConstraint::ModuleMaxOneElement, vec![*module]);
        }
    }
    for (element, modules) in &element_modules {
        let Some(class) = class_of.get(element) else { continue };
        let Some((required, count)) = class.requirement() else {
            report(HardConstraint::ElementModuleTypeMatch, vec![*element]);
            continue;
        };
        for m in modules {
            if class_of.get(m) != Some(&required) {
                report(HardConstraint::ElementModuleTypeMatch, vec![*element, *m]);
            }
        }
        if modules.len() > count {
            report(HardConstraint::ElementMaxRequiredModules, vec![*element]);
        }
    }
    out.sort();
    out
}
