//! Core primitives for lifecycle fairness audits of tabular ML systems.
//!
//! Everything in this crate is a pure function of in-memory data: dataset
//! snapshots and group accounting ([`dataset`]), the five group-fairness
//! metrics ([`metrics`]), reweighing and resampling ([`mitigation`]), a
//! deterministic logistic-regression reference pipeline ([`model`]), the
//! Bias Index / Fairness Score rating ([`rating`]), lifecycle checklists
//! ([`checklist`]), and categorical drift ([`drift`]).
//!
//! File formats, CSV ingestion, report rendering, and the CLI live in the
//! companion `fairlayer` crate; this one is `no_std` (with `alloc`) so the
//! numeric core stays free of IO and platform dependencies.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod checklist;
pub mod dataset;
pub mod drift;
pub mod metrics;
pub mod mitigation;
pub mod model;
pub mod rating;

#[cfg(test)]
pub(crate) mod testutil;
