//! Fuzzy fusion of per-second audio and video emotion streams, with
//! session analytics on the fused result.
//!
//! The pipeline is: parse streams ([`timeline`]), align them to 1 Hz, fuse
//! each emotion per second with a Mamdani system ([`fuzzy`], [`fusion`]),
//! then summarize the session ([`analytics`]).

pub mod analytics;
pub mod cli;
pub mod emotion;
pub mod fusion;
pub mod fuzzy;
pub mod sim;
pub mod timeline;
