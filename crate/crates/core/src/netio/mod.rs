//! Text formats: `.abn` network documents, `.tt` truth tables and
//! state-set literals.

mod expr;
mod lexer;
mod network;
mod table;

pub use expr::{BoolExpr, ExprDisplay};
pub use network::{compile, compile_capped, parse_network, NetworkDocument};
pub use table::{parse_state_set, parse_truth_table, parse_truth_table_capped, write_truth_table};
