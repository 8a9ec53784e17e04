//! Command-line front end for the `mrgleu` scoring library.

pub mod app;
pub mod error;
pub mod input;
pub mod report;

pub use app::{main_with, run, Invocation};
pub use error::CliError;
pub use input::{load_corpus, CorpusInput};
pub use report::{emit_report, Format, Report};
