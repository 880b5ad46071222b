//! Seven-layer fairness audits for tabular ML systems.
//!
//! This crate carries everything that touches the outside world: CSV and
//! JSON file formats ([`formats`]), audit configuration ([`config`]),
//! checklist files ([`checklists`]), the full audit pipeline
//! ([`pipeline`]), and report rendering ([`report`]). The numeric core
//! (metrics, mitigation, the reference model, rating, drift) lives in
//! [`fairlayer_core`] and is re-exported as [`core`].

pub use fairlayer_core as core;

pub mod checklists;
pub mod config;
pub mod error;
pub mod formats;
pub mod pipeline;
pub mod report;

pub use error::Error;
