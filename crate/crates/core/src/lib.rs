pub mod ast;
pub mod cli;
pub mod diagnostic;
pub mod elaborate;
pub mod export;
pub mod formula;
pub mod lexer;
pub mod ltlf;
pub mod parser;
pub mod realizability;
pub mod semantics;
