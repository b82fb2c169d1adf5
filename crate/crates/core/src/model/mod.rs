//! Finite transitive universes, Tarski evaluation, class extensions and the
//! first-equivalent-formula search.

mod eval;
mod search;
mod universe;

pub(crate) use self::eval::compile_surface;
pub use self::eval::{core_extension, eval, eval_core, surface_extension, Env, OutsidePoint, Point};
pub use self::search::{first_equivalent_search, ClassExtension, SearchResult, DEFAULT_BUDGET, TRANSITIVITY_CAP};
pub use self::universe::{Universe, UniverseLabel, MAX_UNIVERSE};
