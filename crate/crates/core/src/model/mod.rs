//! The hardware racks domain: classes, facts, configuration states and the
//! two kinds of constraints (hard upper bounds, repairable lower bounds).

mod class;
pub mod constraints;
mod fact;
pub mod format;
pub mod isomorphism;
mod state;
mod violation;

pub use class::{AssociationKind, ClassName, UnknownClass};
pub use constraints::{hard_violations, HardConstraint, HardViolation, FRAME_MODULE_CAPACITY};
pub use fact::{ElementCounts, Fact, ObjectId};
pub use format::{parse_configuration, print_configuration, FormatError};
pub use state::{ConfigurationState, Effect, ModelError};
pub use violation::{
    detect_violations, detect_violations_with, is_valid, Violation, ViolationKind,
    ViolationPolicy,
};
