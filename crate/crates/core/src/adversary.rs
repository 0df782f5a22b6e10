//! Request-sequence generators: hard instances, random probes, local search.
//!
//! The lower-bound generator emits, for `k` equispaced unit-capacity servers,
//! a sequence of `k` requests that forces the optimum-shadowing strategy to
//! pay close to `k + 1` times the optimal cost. Requests alternate around the
//! middle of the line, nudged by a geometric schedule of offsets small enough
//! that every prefix has a unique optimal load profile. `lift_sequence`
//! extends any such sequence to capacity `ell` by first parking `ell - 1`
//! requests directly on every server, which costs nothing and changes no
//! total.

use alloc::vec::Vec;

use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::{Instance, RequestSequence};
use crate::offline::{solve_optimal, SolveError};
use crate::online::{run_online, Algorithm, OnlineError};
use crate::rational::{rat, Rational};
use crate::report::{ratio_value, RatioValue};

/// Denominator of the sampling grid used by [`gen_random`].
pub const RANDOM_GRID: u32 = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenError {
    /// The adversarial construction needs at least two servers.
    TooFewServers { k: usize },
    /// Parity-specific constructor called with the wrong `k`.
    WrongParity { k: usize, expected: &'static str },
    /// Offsets must be positive.
    EpsilonNotPositive,
    /// Offsets above 1/2 would push requests out of the intended window and
    /// break prefix uniqueness.
    EpsilonTooLarge,
    /// Requested capacity zero.
    ZeroCapacity,
    /// `lo > hi` in a random range.
    EmptyRange,
}

impl fmt::Display for GenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenError::TooFewServers { k } => {
                write!(f, "need at least 2 servers, got {k}")
            }
            GenError::WrongParity { k, expected } => {
                write!(f, "k = {k} but this construction needs {expected} k")
            }
            GenError::EpsilonNotPositive => write!(f, "epsilon must be positive"),
            GenError::EpsilonTooLarge => write!(f, "epsilon must be at most 1/2"),
            GenError::ZeroCapacity => write!(f, "capacity must be at least 1"),
            GenError::EmptyRange => write!(f, "empty range: lo > hi"),
        }
    }
}

impl core::error::Error for GenError {}

/// Offsets `eps_1 < eps_2 < ... < eps_{k-1} < eps/8`, then `eps_k = 1/2`.
///
/// The first `k - 1` values form the geometric run `(eps/8) * 2^(i-k)`; they
/// stay below `eps/8` so that all accumulated perturbation is negligible
/// against the half-unit gaps the construction works with, while each one
/// still strictly dominates the sum of its predecessors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonSchedule {
    values: Vec<Rational>,
}

impl EpsilonSchedule {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.values
    }

    /// 1-based accessor matching the construction's subscripts.
    pub fn get(&self, i: usize) -> &Rational {
        &self.values[i - 1]
    }

    /// Sum of the first `k - 1` offsets (everything except the final 1/2).
    pub fn partial_sum(&self) -> Rational {
        self.values[..self.values.len() - 1]
            .iter()
            .fold(Rational::zero(), |acc, e| acc + e)
    }
}

pub fn epsilon_schedule(k: usize, eps: &Rational) -> Result<EpsilonSchedule, GenError> {
    if k < 2 {
        return Err(GenError::TooFewServers { k });
    }
    if !eps.is_positive() {
        return Err(GenError::EpsilonNotPositive);
    }
    let mut values = Vec::with_capacity(k);
    for i in 1..k {
        // eps / (8 * 2^(k-i))
        let shift = BigInt::one() << (k - i);
        values.push(eps / rat(8, 1) / Rational::from_integer(shift));
    }
    values.push(rat(1, 2));
    Ok(EpsilonSchedule { values })
}

fn check_gen_args(k: usize, eps: &Rational) -> Result<(), GenError> {
    if k < 2 {
        return Err(GenError::TooFewServers { k });
    }
    if !eps.is_positive() {
        return Err(GenError::EpsilonNotPositive);
    }
    if *eps > rat(1, 2) {
        return Err(GenError::EpsilonTooLarge);
    }
    Ok(())
}

/// Hard sequence for even `k`: requests pair up around the midpoint, each
/// pair straddling it half a unit from the nearer servers, offset outward by
/// the schedule. Produces exactly `k` requests in `(-1/2, k - 1/2]`.
pub fn gen_lower_bound_even(k: usize, eps: &Rational) -> Result<RequestSequence, GenError> {
    check_gen_args(k, eps)?;
    if k % 2 != 0 {
        return Err(GenError::WrongParity { k, expected: "even" });
    }
    let e = epsilon_schedule(k, eps)?;
    let half = rat(1, 2);
    let mut requests = alloc::vec![Rational::zero(); k];
    for j in 1..=k / 2 {
        let right = Rational::from_integer(BigInt::from(k / 2 + j - 1));
        let left = Rational::from_integer(BigInt::from(k / 2 - j));
        requests[2 * j - 2] = right - &half - e.get(2 * j - 1);
        requests[2 * j - 1] = left - &half + e.get(2 * j);
    }
    Ok(RequestSequence::from(requests))
}

/// Hard sequence for odd `k`; same shape as the even case but shifted half a
/// unit right, with the unpaired last request landing on the rightmost
/// server.
pub fn gen_lower_bound_odd(k: usize, eps: &Rational) -> Result<RequestSequence, GenError> {
    check_gen_args(k, eps)?;
    if k % 2 == 0 {
        return Err(GenError::WrongParity { k, expected: "odd" });
    }
    let e = epsilon_schedule(k, eps)?;
    let half = rat(1, 2);
    let mut requests = alloc::vec![Rational::zero(); k];
    for j in 1..=k.div_ceil(2) {
        let right = Rational::from_integer(BigInt::from((k - 1) / 2 + j - 1));
        requests[2 * j - 2] = right + &half - e.get(2 * j - 1);
        if 2 * j <= k {
            let left = Rational::from_integer(BigInt::from((k - 1) / 2 - j));
            requests[2 * j - 1] = left + &half + e.get(2 * j);
        }
    }
    Ok(RequestSequence::from(requests))
}

/// Parity dispatch over the two constructions.
pub fn gen_lower_bound(k: usize, eps: &Rational) -> Result<RequestSequence, GenError> {
    if k >= 2 && k % 2 == 0 {
        gen_lower_bound_even(k, eps)
    } else {
        gen_lower_bound_odd(k, eps)
    }
}

/// Prepends, for every server in position order, `capacity - 1` requests
/// exactly on it. Those fills cost nothing for any sensible strategy and for
/// the optimum, and afterwards each server has exactly one slot left, so the
/// base sequence plays out as if capacities were 1.
pub fn lift_sequence(instance: &Instance, base: &RequestSequence) -> RequestSequence {
    let mut requests = Vec::new();
    for (pos, &cap) in instance.servers().iter().zip(instance.capacities()) {
        for _ in 1..cap {
            requests.push(pos.clone());
        }
    }
    requests.extend(base.iter().cloned());
    RequestSequence::from(requests)
}

/// `n` positions drawn uniformly from the `RANDOM_GRID + 1` evenly spaced
/// points of `[lo, hi]`. Same seed, same sequence, on every platform.
pub fn gen_random(
    n: usize,
    seed: u64,
    lo: &Rational,
    hi: &Rational,
) -> Result<RequestSequence, GenError> {
    if lo > hi {
        return Err(GenError::EmptyRange);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let step = (hi - lo) / Rational::from_integer(BigInt::from(RANDOM_GRID));
    let requests: Vec<Rational> = (0..n)
        .map(|_| {
            let t = rng.gen_range(0..=RANDOM_GRID);
            lo + &step * Rational::from_integer(BigInt::from(t))
        })
        .collect();
    Ok(RequestSequence::from(requests))
}

/// Outcome of [`search_adversary`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub sequence: RequestSequence,
    pub ratio: RatioValue,
    /// Candidates evaluated (the initial sequence is free).
    pub evaluations: u64,
    /// Accepted strict improvements.
    pub improvements: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchError {
    Gen(GenError),
    Online(OnlineError),
    Solve(SolveError),
}

impl fmt::Display for SearchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchError::Gen(e) => write!(f, "{e}"),
            SearchError::Online(e) => write!(f, "{e}"),
            SearchError::Solve(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for SearchError {}

impl From<GenError> for SearchError {
    fn from(e: GenError) -> Self {
        SearchError::Gen(e)
    }
}

impl From<OnlineError> for SearchError {
    fn from(e: OnlineError) -> Self {
        SearchError::Online(e)
    }
}

impl From<SolveError> for SearchError {
    fn from(e: SolveError) -> Self {
        SearchError::Solve(e)
    }
}

fn ratio_for(
    instance: &Instance,
    requests: &RequestSequence,
    algorithm: Algorithm,
) -> Result<RatioValue, SearchError> {
    let trace = run_online(instance, requests, algorithm)?;
    let opt = solve_optimal(instance, requests)?;
    Ok(ratio_value(trace.total(), opt.cost()))
}

/// Hill-climbs the competitive ratio of `algorithm` on `k` equispaced
/// servers of capacity `ell`, starting from the lifted lower-bound sequence
/// at offset 1/10. One candidate per unit of `budget`: either nudge a single
/// request by a dyadic step or swap two adjacent arrivals, accepting only
/// strict ratio improvements, so the reported ratio never decreases and a
/// zero budget returns the initial sequence untouched. Fully deterministic
/// for a given seed.
pub fn search_adversary(
    k: usize,
    ell: u32,
    algorithm: Algorithm,
    budget: u64,
    seed: u64,
) -> Result<SearchResult, SearchError> {
    if k < 2 {
        return Err(GenError::TooFewServers { k }.into());
    }
    if ell == 0 {
        return Err(GenError::ZeroCapacity.into());
    }
    let instance = Instance::equispaced(k, ell).expect("validated above");
    let base = gen_lower_bound(k, &rat(1, 10))?;
    let mut best = lift_sequence(&instance, &base);
    let mut best_ratio = ratio_for(&instance, &best, algorithm)?;

    // Positions stay inside the window the generators use.
    let floor = rat(-1, 2) + Rational::new(BigInt::one(), BigInt::from(RANDOM_GRID));
    let ceil = Rational::from_integer(BigInt::from(k)) - rat(1, 2);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = best.len();
    let mut improvements = 0;
    for _ in 0..budget {
        let mut candidate: Vec<Rational> = best.as_slice().to_vec();
        if rng.gen_range(0..4u32) == 0 && n >= 2 {
            let i = rng.gen_range(0..n - 1);
            candidate.swap(i, i + 1);
        } else {
            let i = rng.gen_range(0..n);
            let m = rng.gen_range(1..=12u32);
            let step = Rational::new(BigInt::one(), BigInt::one() << m);
            let moved = if rng.gen_range(0..2u32) == 0 {
                &candidate[i] + &step
            } else {
                &candidate[i] - &step
            };
            candidate[i] = moved.clamp(floor.clone(), ceil.clone());
        }
        let candidate = RequestSequence::from(candidate);
        let ratio = ratio_for(&instance, &candidate, algorithm)?;
        if ratio > best_ratio {
            best = candidate;
            best_ratio = ratio;
            improvements += 1;
        }
    }
    Ok(SearchResult {
        sequence: best,
        ratio: best_ratio,
        evaluations: budget,
        improvements,
    })
}

/// How a sequence was produced; carried in files and reports so results stay
/// reproducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorMeta {
    pub kind: GeneratorKind,
    pub k: Option<usize>,
    pub ell: Option<u32>,
    pub eps: Option<Rational>,
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub lo: Option<Rational>,
    pub hi: Option<Rational>,
}

impl GeneratorMeta {
    pub fn lower_bound(k: usize, ell: u32, eps: Rational) -> Self {
        GeneratorMeta {
            kind: GeneratorKind::LowerBound,
            k: Some(k),
            ell: Some(ell),
            eps: Some(eps),
            n: None,
            seed: None,
            lo: None,
            hi: None,
        }
    }

    pub fn random(
        k: usize,
        ell: u32,
        n: usize,
        seed: u64,
        lo: Rational,
        hi: Rational,
    ) -> Self {
        GeneratorMeta {
            kind: GeneratorKind::Random,
            k: Some(k),
            ell: Some(ell),
            eps: None,
            n: Some(n),
            seed: Some(seed),
            lo: Some(lo),
            hi: Some(hi),
        }
    }
}

/// Generator families. The lower-bound family is spelled `thm1` on the
/// command line and in files.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    LowerBound,
    Random,
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorKind::LowerBound => write!(f, "thm1"),
            GeneratorKind::Random => write!(f, "random"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseGeneratorKindError {
    input: alloc::string::String,
}

impl fmt::Display for ParseGeneratorKindError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown generator kind `{}`: expected `thm1` or `random`",
            self.input
        )
    }
}

impl core::error::Error for ParseGeneratorKindError {}

impl core::str::FromStr for GeneratorKind {
    type Err = ParseGeneratorKindError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        use alloc::string::ToString;
        match s {
            "thm1" => Ok(GeneratorKind::LowerBound),
            "random" => Ok(GeneratorKind::Random),
            other => Err(ParseGeneratorKindError {
                input: other.to_string(),
            }),
        }
    }
}
