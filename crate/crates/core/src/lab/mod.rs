//! Experiment harness: distortion profiles, lower-bound witness families,
//! exhaustive minimal-conjugator search, closed-form bounds and scans.

pub mod bounds;
pub mod distortion;
pub mod scan;
pub mod search;
pub mod selftest;
pub mod witness;
