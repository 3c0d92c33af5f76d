pub mod cli;
pub mod decl;
