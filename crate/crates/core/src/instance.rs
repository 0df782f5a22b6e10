//! Problem instances: servers on the line and the requests thrown at them.
//!
//! Server indices are 0-based everywhere inside this crate; file formats and
//! reports that people read use 1-based indices and the conversion happens at
//! that boundary, not here.

use alloc::vec::Vec;

use core::fmt;

use num_bigint::BigInt;

use crate::rational::Rational;

/// Construction failure for [`Instance`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DomainError {
    /// An instance must have at least one server.
    NoServers,
    /// `servers` and `capacities` differ in length.
    LengthMismatch { servers: usize, capacities: usize },
    /// Server positions must be strictly increasing; `index` is the first
    /// offender (0-based, compared to its predecessor).
    UnorderedServers { index: usize },
    /// Every server must hold at least one request.
    ZeroCapacity { index: usize },
}

impl fmt::Display for DomainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainError::NoServers => write!(f, "instance has no servers"),
            DomainError::LengthMismatch {
                servers,
                capacities,
            } => write!(
                f,
                "{servers} server positions but {capacities} capacities"
            ),
            DomainError::UnorderedServers { index } => write!(
                f,
                "server positions must be strictly increasing (violated at index {index})"
            ),
            DomainError::ZeroCapacity { index } => {
                write!(f, "server at index {index} has capacity 0")
            }
        }
    }
}

impl core::error::Error for DomainError {}

/// Servers on the line: strictly increasing positions, per-server capacities
/// of at least one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    servers: Vec<Rational>,
    capacities: Vec<u32>,
}

impl Instance {
    pub fn new(servers: Vec<Rational>, capacities: Vec<u32>) -> Result<Self, DomainError> {
        if servers.is_empty() {
            return Err(DomainError::NoServers);
        }
        if servers.len() != capacities.len() {
            return Err(DomainError::LengthMismatch {
                servers: servers.len(),
                capacities: capacities.len(),
            });
        }
        for i in 1..servers.len() {
            if servers[i] <= servers[i - 1] {
                return Err(DomainError::UnorderedServers { index: i });
            }
        }
        if let Some(index) = capacities.iter().position(|&c| c == 0) {
            return Err(DomainError::ZeroCapacity { index });
        }
        Ok(Instance {
            servers,
            capacities,
        })
    }

    /// `k` servers at integer positions `0, 1, ..., k-1`, each with capacity
    /// `ell`.
    pub fn equispaced(k: usize, ell: u32) -> Result<Self, DomainError> {
        if k == 0 {
            return Err(DomainError::NoServers);
        }
        if ell == 0 {
            return Err(DomainError::ZeroCapacity { index: 0 });
        }
        let servers = (0..k)
            .map(|i| Rational::from_integer(BigInt::from(i)))
            .collect();
        Ok(Instance {
            servers,
            capacities: alloc::vec![ell; k],
        })
    }

    pub fn len(&self) -> usize {
        self.servers.len()
    }

    pub fn is_empty(&self) -> bool {
        false // at least one server by construction
    }

    pub fn servers(&self) -> &[Rational] {
        &self.servers
    }

    pub fn capacities(&self) -> &[u32] {
        &self.capacities
    }

    pub fn server(&self, index: usize) -> &Rational {
        &self.servers[index]
    }

    pub fn capacity(&self, index: usize) -> u32 {
        self.capacities[index]
    }

    pub fn total_capacity(&self) -> u64 {
        self.capacities.iter().map(|&c| u64::from(c)).sum()
    }

    /// `|r - s_index|`.
    pub fn distance(&self, r: &Rational, index: usize) -> Rational {
        let d = r - &self.servers[index];
        if d < Rational::from_integer(BigInt::from(0)) {
            -d
        } else {
            d
        }
    }
}

/// Requests in arrival order. Any rational positions are allowed; the
/// generators in [`crate::adversary`] just happen to emit a narrower range.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RequestSequence {
    requests: Vec<Rational>,
}

impl RequestSequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.requests.len()
    }

    pub fn is_empty(&self) -> bool {
        self.requests.is_empty()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.requests
    }

    pub fn get(&self, index: usize) -> Option<&Rational> {
        self.requests.get(index)
    }

    pub fn push(&mut self, r: Rational) {
        self.requests.push(r);
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Rational> {
        self.requests.iter()
    }

    /// The first `n` requests.
    pub fn prefix(&self, n: usize) -> RequestSequence {
        RequestSequence {
            requests: self.requests[..n].to_vec(),
        }
    }
}

impl From<Vec<Rational>> for RequestSequence {
    fn from(requests: Vec<Rational>) -> Self {
        RequestSequence { requests }
    }
}

impl FromIterator<Rational> for RequestSequence {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        RequestSequence {
            requests: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a RequestSequence {
    type Item = &'a Rational;
    type IntoIter = core::slice::Iter<'a, Rational>;

    fn into_iter(self) -> Self::IntoIter {
        self.requests.iter()
    }
}
