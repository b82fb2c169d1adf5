//! Abstraction operators: extension objects, number objects, abstraction
//! along arbitrary class equivalences, and Scott's trick for sets.

mod classes;
mod equivalence;
mod object;
mod scott;

pub use self::classes::{
    abstraction_of_class, blv_check, class_abstraction, class_number, extension_of, is_extension, BlvReport,
    DecodedExtension, Presentation,
};
pub use self::equivalence::{ClassEquivalence, Comparator, LEFT_CLASS, RIGHT_CLASS};
pub use self::object::{AbstractionJson, AbstractionKind, AbstractionObject};
pub use self::scott::{
    cardinal_of, minimal_stage, scott_abstraction, scott_cardinal, Cardinal, Relater, ScottAbstraction, SetRelation,
    MAX_SCOTT_CARDINALITY,
};
