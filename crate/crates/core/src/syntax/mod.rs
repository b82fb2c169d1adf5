//! Surface and core syntax: parsing, printing, normalization, the frozen
//! enumeration of core formulas, and their structural Gödel codes.

mod ast;
mod code;
mod core;
mod enumerate;
mod parse;

pub use self::ast::{EpsTerm, Formula, Term};
pub use self::code::{code_formula, decode_formula};
pub use self::core::{normalize, CoreFormula, CoreTerm, Token};
pub use self::enumerate::{
    count_of_length, enumerate, enumerate_u64, enumeration_window, index_of, index_of_u64, FormulaStream,
    ENUMERATION_VERSION,
};
pub use self::parse::{parse, SyntaxError};
