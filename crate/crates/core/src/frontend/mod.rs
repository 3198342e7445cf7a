//! A small while-language and its interval constraint systems.
//!
//! ```text
//! x = 1;
//! while (x <= 100) {
//!   if (x >= 50) x = x - 3;
//!   else x = x + 2;
//! }
//! ```
//!
//! Guards compare one variable with an integer literal; expressions use
//! `+`, `-`, `*`, unary minus and parentheses.

mod cfg;
mod gen;
mod syntax;

pub use cfg::{build_cfg, Action, Cfg, Edge};
pub use gen::{gen_constraints, Generated};
pub use syntax::{parse_program, Cond, Expr, Pos, Program, RelOp, Stmt};

#[cfg(test)]
pub(crate) const EXAMPLE: &str = "\
x = 1;
while (x <= 100) {
  if (x >= 50) x = x-3;
  else x = x+2;
}
";
