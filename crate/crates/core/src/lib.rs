//! Trace-zero idempotents and Mathieu subspaces of finite group algebras
//! over finite fields.

pub mod gfq;
pub mod groups;
pub mod algebra;
pub mod structure;
pub mod criteria;
pub mod oracle;
pub mod catalog;
pub mod cli;
