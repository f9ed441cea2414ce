//! Text form of relations between group-like series: parsing, canonical
//! printing and evaluation.

pub mod ast;
pub mod eval;
pub mod lexer;
pub mod parser;
pub mod printer;

pub use ast::{CatalogueEntry, Expr, LieAtom, LieExpr, LieTerm, Relation, Sep, Span};
pub use eval::{ambient, evaluate, Context, Env, Evaluation};
pub use parser::{parse_catalogue, parse_lie, parse_relation};
pub use printer::{print_catalogue, print_entry, print_expr, print_lie, print_relation};

/// Names parsed as map applications `name(expr)` rather than substitutions.
pub const BUILTIN_MAPS: &[&str] = &[
    "s", "s2", "t", "t2", "t3", "st", "sigma", "theta", "d42", "d41", "d21", "p42", "p41", "p21",
];
