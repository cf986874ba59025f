//! Text formats and verification scenarios for the `hktlab` tool.

pub mod ctxfile;
pub mod expr;
pub mod lex;
pub mod scalar;
pub mod scenario;

pub use ctxfile::{parse_context, write_context};
pub use expr::{parse_expr, print_expr, Element};
pub use lex::{ParseError, Pos};
pub use scalar::parse_scalar;
pub use scenario::{run_scenario, InputError, Params};
