//! File formats, driver pipeline, and test harnesses around `tempval-core`.

pub mod bench;
pub mod difftest;
pub mod driver;
pub mod gen;
pub mod parser;
pub mod pretty;
pub mod sexpr;

pub use driver::{check_texts, CheckOptions, RunReport, Verdict};
pub use parser::{parse_domain, parse_plan, parse_problem, FileRole, ParseError};
