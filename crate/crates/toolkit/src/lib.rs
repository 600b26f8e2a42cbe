pub mod bench;
pub mod cli;
pub mod document;
pub mod generate;
pub mod io;
pub mod oracle;
pub mod svg;
pub mod validate;

pub use document::SolutionDocument;
pub use validate::{validate, ValidationReport, Violation, ViolationCode};
