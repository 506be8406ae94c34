//! Library half of the `stick` command line, split out so the commands can
//! be driven in-process by tests.

pub mod app;
pub mod bench;
pub mod document;
pub mod error;
pub mod suite;

pub use app::run;
