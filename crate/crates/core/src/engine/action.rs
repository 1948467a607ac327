use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::format::Term;
use crate::model::{
    AssociationKind, ClassName, ConfigurationState, Effect, ModelError, ObjectId,
    FRAME_MODULE_CAPACITY,
};

/// Where a module is placed by `CreateFrameForModule`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FrameTarget {
    Existing(ObjectId),
    New,
}

/// Which rack receives a frame in `CreateRackForFrame`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RackTarget {
    Existing(ObjectId),
    New(ClassName),
}

/// Structured action label. Given the state it is applied to, a label
/// determines its effects completely (see [`ActionKind::expand`]).
///
/// The derived order is the canonical action order: constructor order,
/// then subject ids ascending, then existing targets before new ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ActionKind {
    CreateObject(ClassName),
    Associate(AssociationKind, ObjectId, ObjectId),
    CreateModulesForElement(ObjectId),
    CreateFrameForModule { module: ObjectId, target: FrameTarget },
    CreateRackForFrame { frame: ObjectId, target: RackTarget },
    CreateFramesForRack(ObjectId),
    CreateElement(ClassName),
    CreateRack(ClassName),
    AssignElementToRack { element: ObjectId, rack: ObjectId },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error("action not applicable: {0}")]
    NotApplicable(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("malformed action term '{0}'")]
    Malformed(String),
}

fn not_applicable<T>(msg: impl Into<String>) -> Result<T, ActionError> {
    Err(ActionError::NotApplicable(msg.into()))
}

/// Allocates ids for objects created within one action.
struct Builder {
    next: ObjectId,
    effects: Vec<Effect>,
}

impl Builder {
    fn new(state: &ConfigurationState) -> Self {
        Builder { next: state.next_id(), effects: Vec::new() }
    }

    fn create(&mut self, class: ClassName) -> ObjectId {
        let id = self.next;
        self.effects.push(Effect::Create(id, class));
        self.next = id.next();
        id
    }

    fn link(&mut self, kind: AssociationKind, a: ObjectId, b: ObjectId) {
        self.effects.push(Effect::Link(kind, a, b));
    }
}

impl ActionKind {
    /// Computes the primitive edits of this action on `state`. Does not
    /// check hard constraints; [`Action::new`] does that by applying them.
    pub fn expand(&self, state: &ConfigurationState) -> Result<Vec<Effect>, ActionError> {
        use AssociationKind::*;
        let class = |id: ObjectId| state.class_of(id).ok_or(ModelError::UnknownObject(id));
        let mut b = Builder::new(state);
        match *self {
            ActionKind::CreateObject(c) | ActionKind::CreateElement(c) => {
                if !c.is_leaf() {
                    return Err(ModelError::AbstractClass(c).into());
                }
                if matches!(self, ActionKind::CreateElement(_)) && !c.is_element() {
                    return not_applicable(format!("{c} is not an element class"));
                }
                b.create(c);
            }
            ActionKind::Associate(kind, x, y) => b.link(kind, x, y),
            ActionKind::CreateModulesForElement(e) => {
                let Some((required, _)) = class(e)?.requirement() else {
                    return not_applicable(format!("{e} is not an element"));
                };
                let missing = state.missing_modules(e);
                if missing == 0 {
                    return not_applicable(format!("element {e} has all its modules"));
                }
                for _ in 0..missing {
                    let m = b.create(required);
                    b.link(ElementModule, e, m);
                }
            }
            ActionKind::CreateFrameForModule { module, target } => {
                let mc = class(module)?;
                if !mc.is_module() {
                    return not_applicable(format!("{module} is not a module"));
                }
                if state.frame_of(module).is_some() {
                    return not_applicable(format!("module {module} already has a frame"));
                }
                let (frame, has_v) = match target {
                    FrameTarget::Existing(f) => {
                        if !class(f)?.is_frame() {
                            return not_applicable(format!("{f} is not a frame"));
                        }
                        (f, state.frame_count_of(f, ClassName::ModuleV) > 0)
                    }
                    FrameTarget::New => (b.create(ClassName::Frame), false),
                };
                b.link(FrameModule, frame, module);
                if mc == ClassName::ModuleII && !has_v {
                    let v = b.create(ClassName::ModuleV);
                    b.link(FrameModule, frame, v);
                }
            }
            ActionKind::CreateRackForFrame { frame, target } => {
                if !class(frame)?.is_frame() {
                    return not_applicable(format!("{frame} is not a frame"));
                }
                if state.rack_of(frame).is_some() {
                    return not_applicable(format!("frame {frame} already has a rack"));
                }
                let rack = match target {
                    RackTarget::Existing(r) => r,
                    RackTarget::New(c) => {
                        if !(c.is_rack() && c.is_leaf()) {
                            return not_applicable(format!("{c} is not a rack class"));
                        }
                        b.create(c)
                    }
                };
                b.link(RackFrame, rack, frame);
            }
            ActionKind::CreateFramesForRack(r) => {
                if !class(r)?.is_rack() {
                    return not_applicable(format!("{r} is not a rack"));
                }
                let missing = state.missing_frames(r);
                if missing == 0 {
                    return not_applicable(format!("rack {r} is full"));
                }
                for _ in 0..missing {
                    let f = b.create(ClassName::Frame);
                    b.link(RackFrame, r, f);
                }
            }
            ActionKind::CreateRack(c) => {
                let Some(cap) = c.frame_capacity() else {
                    return not_applicable(format!("{c} is not a rack class"));
                };
                let rack = b.create(c);
                for _ in 0..cap {
                    let f = b.create(ClassName::Frame);
                    b.link(RackFrame, rack, f);
                }
            }
            ActionKind::AssignElementToRack { element, rack } => {
                assign_element_to_rack(state, element, rack, &mut b)?;
            }
        }
        Ok(b.effects)
    }

    /// The ASP-style term of this action, e.g. `create_rack_for_frame(4,new(rackSingle))`.
    pub fn term(&self) -> String {
        match *self {
            ActionKind::CreateObject(c) => format!("create_object({c})"),
            ActionKind::Associate(k, a, b) => format!("associate({k},{a},{b})"),
            ActionKind::CreateModulesForElement(e) => format!("create_modules_for_element({e})"),
            ActionKind::CreateFrameForModule { module, target } => match target {
                FrameTarget::Existing(f) => format!("create_frame_for_module({module},{f})"),
                FrameTarget::New => format!("create_frame_for_module({module},new)"),
            },
            ActionKind::CreateRackForFrame { frame, target } => match target {
                RackTarget::Existing(r) => format!("create_rack_for_frame({frame},{r})"),
                RackTarget::New(c) => format!("create_rack_for_frame({frame},new({c}))"),
            },
            ActionKind::CreateFramesForRack(r) => format!("create_frames_for_rack({r})"),
            ActionKind::CreateElement(c) => format!("create_element({c})"),
            ActionKind::CreateRack(c) => format!("create_rack({c})"),
            ActionKind::AssignElementToRack { element, rack } => {
                format!("assign_element_to_rack({element},{rack})")
            }
        }
    }

    pub fn from_term(term: &Term) -> Result<ActionKind, ActionError> {
        let bad = || ActionError::Malformed(term.to_string());
        let id = |i: usize| term.args.get(i).and_then(Term::as_id).ok_or_else(bad);
        let class = |i: usize| term.args.get(i).and_then(Term::as_class).ok_or_else(bad);
        let arity = |n: usize| if term.args.len() == n { Ok(()) } else { Err(bad()) };
        let kind = match term.name.as_str() {
            "create_object" => {
                arity(1)?;
                ActionKind::CreateObject(class(0)?)
            }
            "associate" => {
                arity(3)?;
                let k = term.args[0].name.parse().map_err(|_| bad())?;
                ActionKind::Associate(k, id(1)?, id(2)?)
            }
            "create_modules_for_element" => {
                arity(1)?;
                ActionKind::CreateModulesForElement(id(0)?)
            }
            "create_frame_for_module" => {
                arity(2)?;
                let target = if term.args[1] == Term::atom("new") {
                    FrameTarget::New
                } else {
                    FrameTarget::Existing(id(1)?)
                };
                ActionKind::CreateFrameForModule { module: id(0)?, target }
            }
            "create_rack_for_frame" => {
                arity(2)?;
                let t = &term.args[1];
                let target = if t.name == "new" && t.args.len() == 1 {
                    RackTarget::New(t.args[0].as_class().ok_or_else(bad)?)
                } else {
                    RackTarget::Existing(id(1)?)
                };
                ActionKind::CreateRackForFrame { frame: id(0)?, target }
            }
            "create_frames_for_rack" => {
                arity(1)?;
                ActionKind::CreateFramesForRack(id(0)?)
            }
            "create_element" => {
                arity(1)?;
                ActionKind::CreateElement(class(0)?)
            }
            "create_rack" => {
                arity(1)?;
                ActionKind::CreateRack(class(0)?)
            }
            "assign_element_to_rack" => {
                arity(2)?;
                ActionKind::AssignElementToRack { element: id(0)?, rack: id(1)? }
            }
            _ => return Err(bad()),
        };
        Ok(kind)
    }
}

impl fmt::Display for ActionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.term())
    }
}

/// Places all unplaced modules of `element` (creating missing ones first)
/// into the frames of `rack`, lowest-id frame with room first. A moduleII
/// goes only into a frame that already has a moduleV or has room for one,
/// which is then created alongside.
fn assign_element_to_rack(
    state: &ConfigurationState,
    element: ObjectId,
    rack: ObjectId,
    b: &mut Builder,
) -> Result<(), ActionError> {
    use AssociationKind::*;
    let ec = state.class_of(element).ok_or(ModelError::UnknownObject(element))?;
    let Some((required, _)) = ec.requirement() else {
        return not_applicable(format!("{element} is not an element"));
    };
    let rc = state.class_of(rack).ok_or(ModelError::UnknownObject(rack))?;
    if !rc.is_rack() {
        return not_applicable(format!("{rack} is not a rack"));
    }
    let mut pending: Vec<ObjectId> = state
        .modules_of(element)
        .iter()
        .copied()
        .filter(|&m| state.frame_of(m).is_none())
        .collect();
    for _ in 0..state.missing_modules(element) {
        let m = b.create(required);
        b.link(ElementModule, element, m);
        pending.push(m);
    }
    if pending.is_empty() {
        return not_applicable(format!("element {element} has no unplaced modules"));
    }

    struct Slot {
        frame: ObjectId,
        used: usize,
        has_v: bool,
    }
    let mut slots: Vec<Slot> = state
        .frames_in(rack)
        .iter()
        .map(|&f| Slot {
            frame: f,
            used: state.modules_in(f).len(),
            has_v: state.frame_count_of(f, ClassName::ModuleV) > 0,
        })
        .collect();

    for m in pending {
        let needs_v = required == ClassName::ModuleII;
        let fits = |s: &Slot| {
            let extra = usize::from(needs_v && !s.has_v);
            s.used + 1 + extra <= FRAME_MODULE_CAPACITY
        };
        let Some(slot) = slots.iter_mut().find(|s| fits(s)) else {
            return not_applicable(format!("rack {rack} has no room for the modules of {element}"));
        };
        b.link(FrameModule, slot.frame, m);
        slot.used += 1;
        if needs_v && !slot.has_v {
            let v = b.create(ClassName::ModuleV);
            b.link(FrameModule, slot.frame, v);
            slot.used += 1;
            slot.has_v = true;
        }
    }
    Ok(())
}

/// An applicable action: its label and the edits it performs on the state
/// it was generated for.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Action {
    pub kind: ActionKind,
    pub effects: Vec<Effect>,
}

impl Action {
    /// Expands `kind` on `state` and verifies the result keeps every hard
    /// constraint. Returns the action and the successor state.
    pub fn new(
        kind: ActionKind,
        state: &ConfigurationState,
    ) -> Result<(Action, ConfigurationState), ActionError> {
        let effects = kind.expand(state)?;
        if effects.is_empty() {
            return not_applicable("action adds no facts");
        }
        let next = state.apply_effects(&effects)?.with_step(state.step() + 1);
        Ok((Action { kind, effects }, next))
    }

    /// Applies this action to the state it was generated for.
    pub fn apply(&self, state: &ConfigurationState) -> Result<ConfigurationState, ActionError> {
        Ok(state.apply_effects(&self.effects)?.with_step(state.step() + 1))
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.kind.fmt(f)
    }
}
