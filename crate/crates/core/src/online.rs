//! Online assignment strategies.
//!
//! A strategy sees requests one at a time and commits each one irrevocably.
//! `greedy` picks the nearest server with spare capacity. `perm` shadows the
//! offline optimum: it maintains an optimal matching of the prefix seen so
//! far and serves each request with the one server whose request count grows
//! in that optimum, so its server loads equal the optimal loads after every
//! step.

use alloc::boxed::Box;
use alloc::string::{String, ToString};

use core::fmt;
use core::str::FromStr;

use crate::instance::{Instance, RequestSequence};
use crate::offline::{extend_optimal, solve_optimal, OptimalState, SolveError};
use crate::rational::Rational;
use crate::trace::{Trace, TraceStep};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OnlineError {
    /// The sequence holds more requests than the servers can absorb.
    TooManyRequests { n: usize, capacity: u64 },
    /// No server with spare capacity when `request` arrived.
    NoFreeServer { request: usize },
    /// The incremental optimum disagreed with a from-scratch re-solve after
    /// `step` requests. Only produced in crosscheck mode; indicates a bug.
    CrosscheckFailed { step: usize },
    /// Internal solver failure.
    Solve(SolveError),
}

impl fmt::Display for OnlineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OnlineError::TooManyRequests { n, capacity } => {
                write!(f, "{n} requests but total server capacity is {capacity}")
            }
            OnlineError::NoFreeServer { request } => {
                write!(f, "no free server left for request index {request}")
            }
            OnlineError::CrosscheckFailed { step } => write!(
                f,
                "incremental optimum diverged from re-solve after {step} requests"
            ),
            OnlineError::Solve(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for OnlineError {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            OnlineError::Solve(e) => Some(e),
            _ => None,
        }
    }
}

impl From<SolveError> for OnlineError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::NoFreeServer { request } => OnlineError::NoFreeServer { request },
            other => OnlineError::Solve(other),
        }
    }
}

/// The two built-in strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Greedy,
    Perm,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algorithm::Greedy => write!(f, "greedy"),
            Algorithm::Perm => write!(f, "perm"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseAlgorithmError {
    input: String,
}

impl fmt::Display for ParseAlgorithmError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown algorithm `{}`: expected `perm` or `greedy`",
            self.input
        )
    }
}

impl core::error::Error for ParseAlgorithmError {}

impl FromStr for Algorithm {
    type Err = ParseAlgorithmError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "greedy" => Ok(Algorithm::Greedy),
            "perm" => Ok(Algorithm::Perm),
            other => Err(ParseAlgorithmError {
                input: other.to_string(),
            }),
        }
    }
}

/// One-request-at-a-time assignment; implementations own their state.
pub trait Assigner {
    /// Commits the next request and returns the chosen server index.
    fn assign(&mut self, r: &Rational) -> Result<usize, OnlineError>;
}

/// Nearest free server, lowest index on ties.
pub struct GreedyAssigner {
    instance: Instance,
    remaining: alloc::vec::Vec<u32>,
    served: usize,
}

impl GreedyAssigner {
    pub fn new(instance: Instance) -> Self {
        let remaining = instance.capacities().to_vec();
        GreedyAssigner {
            instance,
            remaining,
            served: 0,
        }
    }
}

impl Assigner for GreedyAssigner {
    fn assign(&mut self, r: &Rational) -> Result<usize, OnlineError> {
        let mut pick: Option<(usize, Rational)> = None;
        for t in 0..self.instance.len() {
            if self.remaining[t] == 0 {
                continue;
            }
            let d = self.instance.distance(r, t);
            let closer = match &pick {
                Some((_, best)) => d < *best,
                None => true,
            };
            if closer {
                pick = Some((t, d));
            }
        }
        let (t, _) = pick.ok_or(OnlineError::NoFreeServer {
            request: self.served,
        })?;
        self.remaining[t] -= 1;
        self.served += 1;
        Ok(t)
    }
}

/// Serves each request with the server whose count grows in the optimal
/// matching of the prefix including it. That server is unique because the
/// old and new optima differ by a single relocation chain.
pub struct PermAssigner {
    state: OptimalState,
    crosscheck: bool,
}

impl PermAssigner {
    pub fn new(instance: Instance) -> Self {
        PermAssigner {
            state: OptimalState::new(instance),
            crosscheck: false,
        }
    }

    /// Like [`new`], but re-solves the prefix from scratch after every step
    /// and fails loudly if cost or loads diverge. Debugging aid for the
    /// incremental solver; quadratic, so keep it out of sweeps.
    ///
    /// [`new`]: PermAssigner::new
    pub fn with_crosscheck(instance: Instance) -> Self {
        PermAssigner {
            state: OptimalState::new(instance),
            crosscheck: true,
        }
    }

    /// Optimal state over the requests served so far.
    pub fn state(&self) -> &OptimalState {
        &self.state
    }
}

impl Assigner for PermAssigner {
    fn assign(&mut self, r: &Rational) -> Result<usize, OnlineError> {
        let aug = extend_optimal(&self.state, r)?;
        if self.crosscheck {
            let prefix = RequestSequence::from(aug.state.requests().to_vec());
            let fresh = solve_optimal(aug.state.instance(), &prefix)?;
            if fresh.cost() != aug.state.cost() || fresh.usage() != aug.state.usage() {
                return Err(OnlineError::CrosscheckFailed {
                    step: aug.state.len(),
                });
            }
        }
        self.state = aug.state;
        Ok(aug.saturated)
    }
}

fn assigner_for(instance: &Instance, algorithm: Algorithm, crosscheck: bool) -> Box<dyn Assigner> {
    match algorithm {
        Algorithm::Greedy => Box::new(GreedyAssigner::new(instance.clone())),
        Algorithm::Perm if crosscheck => Box::new(PermAssigner::with_crosscheck(instance.clone())),
        Algorithm::Perm => Box::new(PermAssigner::new(instance.clone())),
    }
}

/// Runs a strategy over a whole sequence and records every step. Fails up
/// front if the sequence cannot fit at all.
pub fn run_online(
    instance: &Instance,
    requests: &RequestSequence,
    algorithm: Algorithm,
) -> Result<Trace, OnlineError> {
    run_with(instance, requests, algorithm, false)
}

/// [`run_online`] with the from-scratch re-solve crosscheck enabled for
/// `perm`.
pub fn run_online_checked(
    instance: &Instance,
    requests: &RequestSequence,
    algorithm: Algorithm,
) -> Result<Trace, OnlineError> {
    run_with(instance, requests, algorithm, true)
}

fn run_with(
    instance: &Instance,
    requests: &RequestSequence,
    algorithm: Algorithm,
    crosscheck: bool,
) -> Result<Trace, OnlineError> {
    if requests.len() as u64 > instance.total_capacity() {
        return Err(OnlineError::TooManyRequests {
            n: requests.len(),
            capacity: instance.total_capacity(),
        });
    }
    let mut assigner = assigner_for(instance, algorithm, crosscheck);
    let mut trace = Trace::new();
    for (i, r) in requests.iter().enumerate() {
        let server = assigner.assign(r)?;
        trace.push(TraceStep {
            request: i,
            server,
            cost: instance.distance(r, server),
        });
    }
    Ok(trace)
}
