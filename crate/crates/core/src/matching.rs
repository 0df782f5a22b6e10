//! Assignments of requests to servers and their validation.

use alloc::vec;
use alloc::vec::Vec;

use core::fmt;

use num_traits::Zero;

use crate::instance::{Instance, RequestSequence};
use crate::rational::Rational;

/// A (partial) assignment as `(request, server)` index pairs, both 0-based.
/// The pair list preserves insertion order; nothing here enforces instance
/// invariants, that is [`validate_matching`]'s job.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Matching {
    pairs: Vec<(usize, usize)>,
}

impl Matching {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: Vec<(usize, usize)>) -> Self {
        Matching { pairs }
    }

    pub fn assign(&mut self, request: usize, server: usize) {
        self.pairs.push((request, server));
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Server assigned to `request`, if any. Scans from the front, so with
    /// duplicate pairs (an invalid matching) the first one wins.
    pub fn server_of(&self, request: usize) -> Option<usize> {
        self.pairs
            .iter()
            .find(|&&(r, _)| r == request)
            .map(|&(_, s)| s)
    }

    /// Requests per server for an instance with `k` servers. Ignores pairs
    /// whose server index is out of range.
    pub fn usage(&self, k: usize) -> Vec<u32> {
        let mut usage = vec![0u32; k];
        for &(_, s) in &self.pairs {
            if s < k {
                usage[s] += 1;
            }
        }
        usage
    }
}

/// One way a matching can disagree with an instance and request sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchingViolation {
    /// Pair references a request index outside the sequence.
    UnknownRequest { request: usize },
    /// Pair references a server index outside the instance.
    UnknownServer { request: usize, server: usize },
    /// The same request is assigned more than once.
    DuplicateRequest { request: usize },
    /// More requests on a server than it can hold.
    CapacityExceeded {
        server: usize,
        used: u32,
        capacity: u32,
    },
}

impl fmt::Display for MatchingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchingViolation::UnknownRequest { request } => {
                write!(f, "pair references request index {request} outside the sequence")
            }
            MatchingViolation::UnknownServer { request, server } => write!(
                f,
                "request {request} is assigned to server index {server} outside the instance"
            ),
            MatchingViolation::DuplicateRequest { request } => {
                write!(f, "request {request} is assigned more than once")
            }
            MatchingViolation::CapacityExceeded {
                server,
                used,
                capacity,
            } => write!(
                f,
                "server {server} holds {used} requests but has capacity {capacity}"
            ),
        }
    }
}

/// Why a cost could not be computed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchingError {
    Invalid(Vec<MatchingViolation>),
}

impl fmt::Display for MatchingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchingError::Invalid(violations) => {
                write!(f, "invalid matching: ")?;
                for (i, v) in violations.iter().enumerate() {
                    if i > 0 {
                        write!(f, "; ")?;
                    }
                    write!(f, "{v}")?;
                }
                Ok(())
            }
        }
    }
}

impl core::error::Error for MatchingError {}

/// Collects every violation instead of stopping at the first, in pair order
/// followed by capacity checks in server order.
pub fn validate_matching(
    instance: &Instance,
    requests: &RequestSequence,
    matching: &Matching,
) -> Vec<MatchingViolation> {
    let mut violations = Vec::new();
    let mut seen = vec![false; requests.len()];
    let mut usage = vec![0u32; instance.len()];
    for &(r, s) in matching.pairs() {
        if r >= requests.len() {
            violations.push(MatchingViolation::UnknownRequest { request: r });
            continue;
        }
        if seen[r] {
            violations.push(MatchingViolation::DuplicateRequest { request: r });
            continue;
        }
        seen[r] = true;
        if s >= instance.len() {
            violations.push(MatchingViolation::UnknownServer {
                request: r,
                server: s,
            });
            continue;
        }
        usage[s] += 1;
    }
    for (server, (&used, &capacity)) in usage.iter().zip(instance.capacities()).enumerate() {
        if used > capacity {
            violations.push(MatchingViolation::CapacityExceeded {
                server,
                used,
                capacity,
            });
        }
    }
    violations
}

/// Total cost `sum |r - s|` over the pairs. Fails with the full violation
/// list if the matching does not fit the instance and sequence.
pub fn assignment_cost(
    instance: &Instance,
    requests: &RequestSequence,
    matching: &Matching,
) -> Result<Rational, MatchingError> {
    let violations = validate_matching(instance, requests, matching);
    if !violations.is_empty() {
        return Err(MatchingError::Invalid(violations));
    }
    let mut total = Rational::zero();
    for &(r, s) in matching.pairs() {
        total += instance.distance(&requests.as_slice()[r], s);
    }
    Ok(total)
}
