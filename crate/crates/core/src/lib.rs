//! Exact-arithmetic toolkit for capacitated facility assignment on a line.
//!
//! Servers sit at fixed positions on the rational line, each with a finite
//! capacity. Requests arrive one by one and must be assigned irrevocably; an
//! assignment of request `r` to server `s` costs `|r - s|`. This crate
//! provides:
//!
//! * an incremental offline solver that maintains an optimal assignment of
//!   the prefix seen so far ([`offline`]),
//! * online assignment strategies and trace recording ([`online`]),
//! * generators for adversarial and random request sequences ([`adversary`]),
//! * exact competitive-ratio reports and a brute-force cross-check harness
//!   ([`report`]).
//!
//! All verification-path arithmetic uses arbitrary-precision rationals; the
//! only decimal output is a display string rounded by exact integer division.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the default `std`
//! feature only forwards to the dependencies.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod adversary;
pub mod instance;
pub mod matching;
pub mod offline;
pub mod online;
pub mod rational;
pub mod report;
pub mod trace;

pub use instance::{DomainError, Instance, RequestSequence};
pub use matching::{Matching, MatchingError, MatchingViolation};
pub use offline::{AugmentationResult, OptimalState, SolveError};
pub use online::{Algorithm, OnlineError};
pub use rational::Rational;
pub use report::{RatioReport, RatioValue};
pub use trace::{Trace, TraceStep};
