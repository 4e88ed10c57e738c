//! Library side of the `spine` command-line tool: the object-literal DSL.
//!
//! The binary and the integration tests share these parsers and printers;
//! every literal round-trips through parse and print on canonical forms.

pub mod dsl;
