//! Types, expressions and unitaries.

pub mod equiv;
pub mod expr;
pub mod types;
pub mod unitary;

pub use equiv::{Equiv, EquivError};
pub use expr::{fresh_name, LinearFn, NameSupply, QExp, Side};
pub use types::{Assignment, Ctx, FinType, FinValue, Name, OpenType, QType, UnboundTypeVar};
pub use unitary::{Primitive, Unitary, UnitaryError};
