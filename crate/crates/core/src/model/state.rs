use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::class::{AssociationKind, ClassName};
use super::constraints::{HardConstraint, FRAME_MODULE_CAPACITY};
use super::fact::{ElementCounts, Fact, ObjectId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("class '{0}' is abstract and cannot be instantiated")]
    AbstractClass(ClassName),
    #[error("object {0} does not exist")]
    UnknownObject(ObjectId),
    #[error("object {0} already exists")]
    DuplicateObject(ObjectId),
    #[error("{kind} cannot link {first} ({first_class}) with {second} ({second_class})")]
    TypeMismatch {
        kind: AssociationKind,
        first: ObjectId,
        first_class: ClassName,
        second: ObjectId,
        second_class: ClassName,
    },
    #[error("association {0} already present")]
    DuplicateAssociation(Fact),
    #[error("upper bound violated: {0}")]
    UpperBoundViolation(HardConstraint),
    #[error("expected new object id {expected}, got {got}")]
    IdOutOfSequence { expected: ObjectId, got: ObjectId },
}

/// A primitive edit produced by an action. Creations carry the id the new
/// object receives, which is always the state's next free id at that point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Effect {
    Create(ObjectId, ClassName),
    Link(AssociationKind, ObjectId, ObjectId),
}

impl Effect {
    pub fn fact(self) -> Fact {
        match self {
            Effect::Create(id, class) => Fact::IsA(id, class),
            Effect::Link(kind, a, b) => Fact::link(kind, a, b),
        }
    }
}

/// An immutable configuration snapshot.
///
/// Every object has exactly one leaf class, links are type-compatible and
/// no hard constraint is ever violated; all mutating operations return a new
/// value and reject edits that would break these invariants.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConfigurationState {
    objects: BTreeMap<ObjectId, ClassName>,
    rack_of: BTreeMap<ObjectId, ObjectId>,
    frame_of: BTreeMap<ObjectId, ObjectId>,
    element_of: BTreeMap<ObjectId, ObjectId>,
    frames_in: BTreeMap<ObjectId, BTreeSet<ObjectId>>,
    modules_in: BTreeMap<ObjectId, BTreeSet<ObjectId>>,
    modules_of: BTreeMap<ObjectId, BTreeSet<ObjectId>>,
    step: u32,
    next_id: ObjectId,
}

impl Default for ConfigurationState {
    fn default() -> Self {
        ConfigurationState {
            objects: BTreeMap::new(),
            rack_of: BTreeMap::new(),
            frame_of: BTreeMap::new(),
            element_of: BTreeMap::new(),
            frames_in: BTreeMap::new(),
            modules_in: BTreeMap::new(),
            modules_of: BTreeMap::new(),
            step: 0,
            next_id: ObjectId::FIRST,
        }
    }
}

static EMPTY: BTreeSet<ObjectId> = BTreeSet::new();

impl ConfigurationState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Initial configuration holding only the given elements, A-block first.
    pub fn with_elements(counts: &ElementCounts) -> Self {
        let mut state = Self::new();
        for class in counts.classes() {
            state.insert_object(class);
        }
        state
    }

    /// Builds a state from facts, checking every invariant. Object ids are
    /// kept as given; `next_id` becomes one past the largest id.
    pub fn from_facts<'a, I>(facts: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = &'a Fact>,
    {
        let mut links = Vec::new();
        let mut state = Self::new();
        for fact in facts {
            match *fact {
                Fact::IsA(id, class) => {
                    if !class.is_leaf() {
                        return Err(ModelError::AbstractClass(class));
                    }
                    if state.objects.insert(id, class).is_some() {
                        return Err(ModelError::DuplicateObject(id));
                    }
                    if id >= state.next_id {
                        state.next_id = id.next();
                    }
                }
                other => links.push(other),
            }
        }
        for fact in links {
            let (kind, a, b) = fact.as_link().expect("isA handled above");
            state.check_association(kind, a, b)?;
            state.insert_link(kind, a, b);
        }
        Ok(state)
    }

    pub fn step(&self) -> u32 {
        self.step
    }

    pub fn next_id(&self) -> ObjectId {
        self.next_id
    }

    pub fn with_step(mut self, step: u32) -> Self {
        self.step = step;
        self
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn class_of(&self, id: ObjectId) -> Option<ClassName> {
        self.objects.get(&id).copied()
    }

    /// All objects in ascending id order.
    pub fn objects(&self) -> impl Iterator<Item = (ObjectId, ClassName)> + '_ {
        self.objects.iter().map(|(&id, &c)| (id, c))
    }

    pub fn objects_where(
        &self,
        pred: impl Fn(ClassName) -> bool + 'static,
    ) -> impl Iterator<Item = ObjectId> + '_ {
        self.objects().filter(move |&(_, c)| pred(c)).map(|(id, _)| id)
    }

    pub fn count_class(&self, class: ClassName) -> usize {
        self.objects.values().filter(|&&c| c == class).count()
    }

    pub fn rack_of(&self, frame: ObjectId) -> Option<ObjectId> {
        self.rack_of.get(&frame).copied()
    }

    pub fn frame_of(&self, module: ObjectId) -> Option<ObjectId> {
        self.frame_of.get(&module).copied()
    }

    pub fn element_of(&self, module: ObjectId) -> Option<ObjectId> {
        self.element_of.get(&module).copied()
    }

    pub fn frames_in(&self, rack: ObjectId) -> &BTreeSet<ObjectId> {
        self.frames_in.get(&rack).unwrap_or(&EMPTY)
    }

    pub fn modules_in(&self, frame: ObjectId) -> &BTreeSet<ObjectId> {
        self.modules_in.get(&frame).unwrap_or(&EMPTY)
    }

    pub fn modules_of(&self, element: ObjectId) -> &BTreeSet<ObjectId> {
        self.modules_of.get(&element).unwrap_or(&EMPTY)
    }

    /// Number of modules of `class` inside `frame`.
    pub fn frame_count_of(&self, frame: ObjectId, class: ClassName) -> usize {
        self.modules_in(frame)
            .iter()
            .filter(|m| self.class_of(**m) == Some(class))
            .count()
    }

    /// Frames a rack still needs to reach its exact capacity.
    pub fn missing_frames(&self, rack: ObjectId) -> usize {
        self.class_of(rack)
            .and_then(ClassName::frame_capacity)
            .map_or(0, |cap| cap.saturating_sub(self.frames_in(rack).len()))
    }

    /// Modules an element still needs.
    pub fn missing_modules(&self, element: ObjectId) -> usize {
        self.class_of(element)
            .and_then(ClassName::requirement)
            .map_or(0, |(_, n)| n.saturating_sub(self.modules_of(element).len()))
    }

    pub fn element_counts(&self) -> ElementCounts {
        let mut counts = ElementCounts::default();
        for (_, class) in self.objects() {
            if let Some(i) = class.element_index() {
                counts.0[i] += 1;
            }
        }
        counts
    }

    /// All facts in canonical order: (fact kind, first id, second id).
    pub fn facts(&self) -> Vec<Fact> {
        let mut out: Vec<Fact> = self.objects().map(|(id, c)| Fact::IsA(id, c)).collect();
        let mut links: Vec<Fact> = self
            .rack_of
            .iter()
            .map(|(&f, &r)| Fact::RackFrame(r, f))
            .chain(self.frame_of.iter().map(|(&m, &f)| Fact::FrameModule(f, m)))
            .chain(self.element_of.iter().map(|(&m, &e)| Fact::ElementModule(e, m)))
            .collect();
        links.sort();
        out.extend(links);
        out
    }

    pub fn contains(&self, fact: &Fact) -> bool {
        match *fact {
            Fact::IsA(id, class) => self.class_of(id) == Some(class),
            Fact::RackFrame(r, f) => self.rack_of(f) == Some(r),
            Fact::FrameModule(f, m) => self.frame_of(m) == Some(f),
            Fact::ElementModule(e, m) => self.element_of(m) == Some(e),
        }
    }

    pub fn fact_count(&self) -> usize {
        self.objects.len() + self.rack_of.len() + self.frame_of.len() + self.element_of.len()
    }

    /// Adds one object of a leaf class; the id is the current `next_id`.
    pub fn create_object(&self, class: ClassName) -> Result<(Self, ObjectId), ModelError> {
        if !class.is_leaf() {
            return Err(ModelError::AbstractClass(class));
        }
        let mut next = self.clone();
        let id = next.insert_object(class);
        Ok((next, id))
    }

    /// Adds one association if it keeps every invariant.
    pub fn associate(
        &self,
        kind: AssociationKind,
        first: ObjectId,
        second: ObjectId,
    ) -> Result<Self, ModelError> {
        self.check_association(kind, first, second)?;
        let mut next = self.clone();
        next.insert_link(kind, first, second);
        Ok(next)
    }

    /// Reports why `associate(kind, first, second)` would fail, if it would.
    pub fn check_association(
        &self,
        kind: AssociationKind,
        first: ObjectId,
        second: ObjectId,
    ) -> Result<(), ModelError> {
        let first_class = self.class_of(first).ok_or(ModelError::UnknownObject(first))?;
        let second_class = self.class_of(second).ok_or(ModelError::UnknownObject(second))?;
        if !kind.accepts(first_class, second_class) {
            return Err(ModelError::TypeMismatch {
                kind,
                first,
                first_class,
                second,
                second_class,
            });
        }
        let fact = Fact::link(kind, first, second);
        if self.contains(&fact) {
            return Err(ModelError::DuplicateAssociation(fact));
        }
        let bound = |c| Err(ModelError::UpperBoundViolation(c));
        match kind {
            AssociationKind::RackFrame => {
                if self.rack_of.contains_key(&second) {
                    return bound(HardConstraint::FrameMaxOneRack);
                }
                if self.missing_frames(first) == 0 {
                    return bound(HardConstraint::rack_limit(first_class).expect("rack class"));
                }
            }
            AssociationKind::FrameModule => {
                if self.frame_of.contains_key(&second) {
                    return bound(HardConstraint::ModuleMaxOneFrame);
                }
                if self.modules_in(first).len() >= FRAME_MODULE_CAPACITY {
                    return bound(HardConstraint::FrameMaxModules);
                }
                if second_class == ClassName::ModuleV
                    && self.frame_count_of(first, ClassName::ModuleV) > 0
                {
                    return bound(HardConstraint::FrameMaxOneModuleV);
                }
            }
            AssociationKind::ElementModule => {
                if self.element_of.contains_key(&second) {
                    return bound(HardConstraint::ModuleMaxOneElement);
                }
                if self.missing_modules(first) == 0 {
                    return bound(HardConstraint::ElementMaxRequiredModules);
                }
            }
        }
        Ok(())
    }

    /// Applies a sequence of effects atomically.
    pub fn apply_effects(&self, effects: &[Effect]) -> Result<Self, ModelError> {
        let mut next = self.clone();
        for effect in effects {
            match *effect {
                Effect::Create(id, class) => {
                    if !class.is_leaf() {
                        return Err(ModelError::AbstractClass(class));
                    }
                    if id != next.next_id {
                        return Err(ModelError::IdOutOfSequence { expected: next.next_id, got: id });
                    }
                    next.insert_object(class);
                }
                Effect::Link(kind, a, b) => {
                    next.check_association(kind, a, b)?;
                    next.insert_link(kind, a, b);
                }
            }
        }
        Ok(next)
    }

    fn insert_object(&mut self, class: ClassName) -> ObjectId {
        let id = self.next_id;
        self.objects.insert(id, class);
        self.next_id = id.next();
        id
    }

    fn insert_link(&mut self, kind: AssociationKind, a: ObjectId, b: ObjectId) {
        match kind {
            AssociationKind::RackFrame => {
                self.rack_of.insert(b, a);
                self.frames_in.entry(a).or_default().insert(b);
            }
            AssociationKind::FrameModule => {
                self.frame_of.insert(b, a);
                self.modules_in.entry(a).or_default().insert(b);
            }
            AssociationKind::ElementModule => {
                self.element_of.insert(b, a);
                self.modules_of.entry(a).or_default().insert(b);
            }
        }
    }
}
