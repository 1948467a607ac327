use std::fmt;

use serde::{Deserialize, Serialize};

use super::class::{AssociationKind, ClassName};

/// Object identifier, unique within one configuration. Ids start at 1.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct ObjectId(pub u32);

impl ObjectId {
    pub const FIRST: ObjectId = ObjectId(1);

    pub fn next(self) -> ObjectId {
        ObjectId(self.0 + 1)
    }
}

impl fmt::Display for ObjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One configuration fact. The derived ordering (kind, first id, second id)
/// is the canonical print order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Fact {
    IsA(ObjectId, ClassName),
    RackFrame(ObjectId, ObjectId),
    FrameModule(ObjectId, ObjectId),
    ElementModule(ObjectId, ObjectId),
}

impl Fact {
    pub fn link(kind: AssociationKind, first: ObjectId, second: ObjectId) -> Fact {
        match kind {
            AssociationKind::RackFrame => Fact::RackFrame(first, second),
            AssociationKind::FrameModule => Fact::FrameModule(first, second),
            AssociationKind::ElementModule => Fact::ElementModule(first, second),
        }
    }

    /// The association kind and endpoints, or `None` for `IsA`.
    pub fn as_link(&self) -> Option<(AssociationKind, ObjectId, ObjectId)> {
        match *self {
            Fact::IsA(..) => None,
            Fact::RackFrame(a, b) => Some((AssociationKind::RackFrame, a, b)),
            Fact::FrameModule(a, b) => Some((AssociationKind::FrameModule, a, b)),
            Fact::ElementModule(a, b) => Some((AssociationKind::ElementModule, a, b)),
        }
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fact::IsA(id, class) => write!(f, "isA({id},{class})."),
            Fact::RackFrame(a, b) => write!(f, "rack_frame({a},{b})."),
            Fact::FrameModule(a, b) => write!(f, "frame_module({a},{b})."),
            Fact::ElementModule(a, b) => write!(f, "element_module({a},{b})."),
        }
    }
}

/// Number of elements per element class, indexed like `ClassName::ELEMENTS`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct ElementCounts(pub [u32; 4]);

impl ElementCounts {
    pub fn new(a: u32, b: u32, c: u32, d: u32) -> Self {
        ElementCounts([a, b, c, d])
    }

    pub fn uniform(n: u32) -> Self {
        ElementCounts([n; 4])
    }

    pub fn get(&self, class: ClassName) -> u32 {
        class.element_index().map_or(0, |i| self.0[i])
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Total number of modules the elements require.
    pub fn required_modules(&self) -> u32 {
        ClassName::ELEMENTS
            .iter()
            .zip(self.0)
            .map(|(c, n)| n * c.requirement().map_or(0, |(_, k)| k as u32))
            .sum()
    }

    /// Element classes in id order: all A first, then B, C, D.
    pub fn classes(&self) -> impl Iterator<Item = ClassName> + '_ {
        ClassName::ELEMENTS
            .iter()
            .zip(self.0)
            .flat_map(|(&c, n)| std::iter::repeat_n(c, n as usize))
    }

    /// Every mix with at most `max` elements of each type, ordered
    /// lexicographically by (A, B, C, D).
    pub fn enumerate(max: u32) -> impl Iterator<Item = ElementCounts> {
        let side = max + 1;
        (0..side.pow(4)).map(move |mut code| {
            let mut counts = [0; 4];
            for slot in counts.iter_mut().rev() {
                *slot = code % side;
                code /= side;
            }
            ElementCounts(counts)
        })
    }
}

impl fmt::Display for ElementCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "A={a} B={b} C={c} D={d}")
    }
}
