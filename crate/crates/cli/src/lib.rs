pub mod config;
pub mod expect;
pub mod report;
pub mod suite;

pub use config::{Cases, ConfigError, Format, RunConfig};
pub use report::{Check, VerificationReport, Verdict};
pub use suite::run;
