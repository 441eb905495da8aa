pub mod formats;
pub mod suites;
