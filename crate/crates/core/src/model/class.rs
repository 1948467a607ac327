use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Classes of the hardware racks domain.
///
/// `Rack`, `Module` and `Element` are abstract groupings; every other
/// variant is a leaf class and can be instantiated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ClassName {
    RackSingle,
    RackDouble,
    Frame,
    ModuleI,
    ModuleII,
    ModuleIII,
    ModuleIV,
    ModuleV,
    ElementA,
    ElementB,
    ElementC,
    ElementD,
    Rack,
    Module,
    Element,
}

impl ClassName {
    /// All leaf classes, in canonical order.
    pub const LEAVES: [ClassName; 12] = [
        ClassName::RackSingle,
        ClassName::RackDouble,
        ClassName::Frame,
        ClassName::ModuleI,
        ClassName::ModuleII,
        ClassName::ModuleIII,
        ClassName::ModuleIV,
        ClassName::ModuleV,
        ClassName::ElementA,
        ClassName::ElementB,
        ClassName::ElementC,
        ClassName::ElementD,
    ];

    pub const RACKS: [ClassName; 2] = [ClassName::RackSingle, ClassName::RackDouble];

    pub const ELEMENTS: [ClassName; 4] = [
        ClassName::ElementA,
        ClassName::ElementB,
        ClassName::ElementC,
        ClassName::ElementD,
    ];

    pub fn is_leaf(self) -> bool {
        !matches!(self, ClassName::Rack | ClassName::Module | ClassName::Element)
    }

    pub fn is_rack(self) -> bool {
        matches!(self, ClassName::RackSingle | ClassName::RackDouble | ClassName::Rack)
    }

    pub fn is_frame(self) -> bool {
        self == ClassName::Frame
    }

    pub fn is_module(self) -> bool {
        matches!(
            self,
            ClassName::ModuleI
                | ClassName::ModuleII
                | ClassName::ModuleIII
                | ClassName::ModuleIV
                | ClassName::ModuleV
                | ClassName::Module
        )
    }

    pub fn is_element(self) -> bool {
        matches!(
            self,
            ClassName::ElementA
                | ClassName::ElementB
                | ClassName::ElementC
                | ClassName::ElementD
                | ClassName::Element
        )
    }

    /// Exact number of frames a rack of this class holds.
    pub fn frame_capacity(self) -> Option<usize> {
        match self {
            ClassName::RackSingle => Some(4),
            ClassName::RackDouble => Some(8),
            _ => None,
        }
    }

    /// The module type an element requires and how many of them.
    pub fn requirement(self) -> Option<(ClassName, usize)> {
        match self {
            ClassName::ElementA => Some((ClassName::ModuleI, 1)),
            ClassName::ElementB => Some((ClassName::ModuleII, 2)),
            ClassName::ElementC => Some((ClassName::ModuleIII, 3)),
            ClassName::ElementD => Some((ClassName::ModuleIV, 4)),
            _ => None,
        }
    }

    /// Index of an element class in `ELEMENTS`.
    pub fn element_index(self) -> Option<usize> {
        ClassName::ELEMENTS.iter().position(|&c| c == self)
    }

    /// Lower-camel-case name used in configuration files.
    pub fn as_str(self) -> &'static str {
        match self {
            ClassName::RackSingle => "rackSingle",
            ClassName::RackDouble => "rackDouble",
            ClassName::Frame => "frame",
            ClassName::ModuleI => "moduleI",
            ClassName::ModuleII => "moduleII",
            ClassName::ModuleIII => "moduleIII",
            ClassName::ModuleIV => "moduleIV",
            ClassName::ModuleV => "moduleV",
            ClassName::ElementA => "elementA",
            ClassName::ElementB => "elementB",
            ClassName::ElementC => "elementC",
            ClassName::ElementD => "elementD",
            ClassName::Rack => "rack",
            ClassName::Module => "module",
            ClassName::Element => "element",
        }
    }
}

impl fmt::Display for ClassName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown class name '{0}'")]
pub struct UnknownClass(pub String);

impl FromStr for ClassName {
    type Err = UnknownClass;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let all = ClassName::LEAVES
            .iter()
            .chain([ClassName::Rack, ClassName::Module, ClassName::Element].iter());
        for &c in all {
            if c.as_str().eq_ignore_ascii_case(s) {
                return Ok(c);
            }
        }
        Err(UnknownClass(s.to_string()))
    }
}

/// The three associations of the domain. The first id of an association
/// is always the container side (rack, frame, element).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AssociationKind {
    RackFrame,
    FrameModule,
    ElementModule,
}

impl AssociationKind {
    pub const ALL: [AssociationKind; 3] = [
        AssociationKind::RackFrame,
        AssociationKind::FrameModule,
        AssociationKind::ElementModule,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AssociationKind::RackFrame => "rack_frame",
            AssociationKind::FrameModule => "frame_module",
            AssociationKind::ElementModule => "element_module",
        }
    }

    /// Whether `first` and `second` have classes this association can link.
    /// Element links are additionally type-matched.
    pub fn accepts(self, first: ClassName, second: ClassName) -> bool {
        match self {
            AssociationKind::RackFrame => first.is_rack() && second.is_frame(),
            AssociationKind::FrameModule => first.is_frame() && second.is_module(),
            AssociationKind::ElementModule => {
                matches!(first.requirement(), Some((required, _)) if required == second)
            }
        }
    }
}

impl fmt::Display for AssociationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AssociationKind {
    type Err = UnknownClass;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AssociationKind::ALL
            .iter()
            .copied()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| UnknownClass(s.to_string()))
    }
}
