//! Analysis and visualization of hierarchical composite endpoints (HCEs).
//!
//! An HCE ranks every subject by the most severe of several prioritized
//! time-to-event outcomes, breaking ties by event timing, and falls back to a
//! single continuous outcome for subjects without any event. Two arms are
//! compared pairwise ("win statistics"): win probability, win odds, win ratio
//! and net benefit.
//!
//! Modules:
//! - [`model`]: component configuration, subject values, the HCE ordering, CSV ingestion.
//! - [`win`]: win/loss/tie counting, confidence intervals, ordinal dominance graph,
//!   cumulative component analysis.
//! - [`design`]: win-odds landscapes over hazard ratio × mean difference and a
//!   scenario simulator.
//! - [`viz`]: deterministic SVG renderers.
//!
//! The `parallel` feature (on by default) runs the data-parallel loops on rayon;
//! without it every [`Execution`] mode falls back to a sequential loop.

pub mod design;
pub mod error;
pub mod exec;
pub mod model;
pub mod rng;
pub mod viz;
pub mod win;

pub use error::{HceError, Result};
pub use exec::Execution;
