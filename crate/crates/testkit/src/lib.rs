//! Independent oracles for the test suites: exact big-integer / rational arithmetic
//! and adaptive quadrature. Nothing in here shares code with the library under test.

pub mod exact;
pub mod quad;
pub mod stats;
