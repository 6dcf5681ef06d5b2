//! Row schema and scenario expansion for the `onebit-mimo` binary; exposed
//! as a library so integration tests can parse emitted results.

pub mod rows;
pub mod scenario;
