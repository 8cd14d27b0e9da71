//! A small dependently typed language with quantitative binders: multiplicities
//! `0`, `1` and `ω` track how often each variable is used at run time.

pub mod cli;
pub mod core;
pub mod elab;
pub mod erasure;
pub mod error;
pub mod eval;
pub mod multiplicity;
pub mod parser;
pub mod patterns;
pub mod pretty;
pub mod prims;
pub mod runtime;
pub mod session;
pub mod syntax;
