//! Competitive-ratio reports, parameter sweeps, and the solver cross-check.
//!
//! Ratios are exact rationals with one convention: a run that pays something
//! against a free optimum has infinite ratio, and an all-zero run counts as
//! ratio 1. Decimal strings are derived for display only and never feed back
//! into any comparison.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::adversary::{gen_lower_bound, lift_sequence, GenError, GeneratorMeta};
use crate::instance::{DomainError, Instance, RequestSequence};
use crate::offline::{
    brute_force_optimal_with_limit, extend_optimal, solve_optimal, OptimalState, SolveError,
    BRUTE_FORCE_LIMIT,
};
use crate::online::{run_online, Algorithm, OnlineError};
use crate::rational::{decimal_approx, Rational};

/// Exact ratio, or infinite when cost was incurred against a free optimum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RatioValue {
    Finite(Rational),
    Infinite,
}

impl RatioValue {
    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            RatioValue::Finite(q) => Some(q),
            RatioValue::Infinite => None,
        }
    }

    pub fn at_least(&self, bound: &Rational) -> bool {
        match self {
            RatioValue::Finite(q) => q >= bound,
            RatioValue::Infinite => true,
        }
    }

    /// Display-only decimal rendering; `inf` for the infinite case.
    pub fn decimal(&self, digits: u32) -> String {
        match self {
            RatioValue::Finite(q) => decimal_approx(q, digits),
            RatioValue::Infinite => String::from("inf"),
        }
    }
}

impl fmt::Display for RatioValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RatioValue::Finite(q) => write!(f, "{q}"),
            RatioValue::Infinite => write!(f, "inf"),
        }
    }
}

impl Ord for RatioValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (RatioValue::Infinite, RatioValue::Infinite) => Ordering::Equal,
            (RatioValue::Infinite, RatioValue::Finite(_)) => Ordering::Greater,
            (RatioValue::Finite(_), RatioValue::Infinite) => Ordering::Less,
            (RatioValue::Finite(a), RatioValue::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for RatioValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `alg / opt` under the house convention: positive cost against a zero
/// optimum is infinite, zero against zero is 1.
pub fn ratio_value(alg: &Rational, opt: &Rational) -> RatioValue {
    if opt.is_positive() {
        RatioValue::Finite(alg / opt)
    } else if alg.is_positive() {
        RatioValue::Infinite
    } else {
        RatioValue::Finite(Rational::one())
    }
}

/// A lower-bound test attached to a report: did the ratio reach `bound`?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundCheck {
    pub bound: Rational,
    pub pass: bool,
}

/// Everything one measured run produces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioReport {
    pub k: usize,
    pub ell: u32,
    pub generator: Option<GeneratorMeta>,
    pub algorithm: Algorithm,
    pub alg_total: Rational,
    pub opt_total: Rational,
    pub ratio: RatioValue,
    pub bound: Option<BoundCheck>,
}

impl RatioReport {
    /// Six fractional digits, rounded half away from zero. Display only.
    pub fn ratio_decimal(&self) -> String {
        self.ratio.decimal(6)
    }

    /// True when there is no bound to fail.
    pub fn passed(&self) -> bool {
        self.bound.as_ref().map_or(true, |b| b.pass)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReportError {
    Domain(DomainError),
    Gen(GenError),
    Online(OnlineError),
    Solve(SolveError),
    /// Sweeps need `2 <= k_from <= k_to`.
    BadSweepRange { k_from: usize, k_to: usize },
    /// `max_n` beyond what exhaustive search accepts.
    MaxNTooLarge { max_n: usize, limit: usize },
}

impl fmt::Display for ReportError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReportError::Domain(e) => write!(f, "{e}"),
            ReportError::Gen(e) => write!(f, "{e}"),
            ReportError::Online(e) => write!(f, "{e}"),
            ReportError::Solve(e) => write!(f, "{e}"),
            ReportError::BadSweepRange { k_from, k_to } => {
                write!(f, "sweep needs 2 <= k_from <= k_to, got {k_from}..={k_to}")
            }
            ReportError::MaxNTooLarge { max_n, limit } => {
                write!(f, "max_n = {max_n} exceeds the exhaustive-search limit {limit}")
            }
        }
    }
}

impl core::error::Error for ReportError {}

impl From<DomainError> for ReportError {
    fn from(e: DomainError) -> Self {
        ReportError::Domain(e)
    }
}

impl From<GenError> for ReportError {
    fn from(e: GenError) -> Self {
        ReportError::Gen(e)
    }
}

impl From<OnlineError> for ReportError {
    fn from(e: OnlineError) -> Self {
        ReportError::Online(e)
    }
}

impl From<SolveError> for ReportError {
    fn from(e: SolveError) -> Self {
        ReportError::Solve(e)
    }
}

/// Runs `algorithm` and the offline optimum over the same sequence and
/// reports exact totals, their ratio, and an optional bound check.
pub fn compute_ratio(
    instance: &Instance,
    requests: &RequestSequence,
    algorithm: Algorithm,
    generator: Option<GeneratorMeta>,
    bound: Option<Rational>,
) -> Result<RatioReport, ReportError> {
    let trace = run_online(instance, requests, algorithm)?;
    let opt = solve_optimal(instance, requests)?;
    let ratio = ratio_value(trace.total(), opt.cost());
    let bound = bound.map(|b| BoundCheck {
        pass: ratio.at_least(&b),
        bound: b,
    });
    Ok(RatioReport {
        k: instance.len(),
        ell: instance.capacities().iter().copied().max().unwrap_or(1),
        generator,
        algorithm,
        alg_total: trace.total().clone(),
        opt_total: opt.cost().clone(),
        ratio,
        bound,
    })
}

/// One report per `k` in `k_from..=k_to`: lower-bound sequence (lifted when
/// `ell > 1`) on equispaced servers, checked against the bound `k + 1 - eps`.
pub fn sweep(
    k_from: usize,
    k_to: usize,
    ell: u32,
    eps: &Rational,
    algorithm: Algorithm,
) -> Result<Vec<RatioReport>, ReportError> {
    if k_from < 2 || k_from > k_to {
        return Err(ReportError::BadSweepRange { k_from, k_to });
    }
    let mut reports = Vec::with_capacity(k_to - k_from + 1);
    for k in k_from..=k_to {
        let instance = Instance::equispaced(k, ell)?;
        let base = gen_lower_bound(k, eps)?;
        let requests = if ell > 1 {
            lift_sequence(&instance, &base)
        } else {
            base
        };
        let bound = Rational::from_integer(BigInt::from(k as u64 + 1)) - eps;
        reports.push(compute_ratio(
            &instance,
            &requests,
            algorithm,
            Some(GeneratorMeta::lower_bound(k, ell, eps.clone())),
            Some(bound),
        )?);
    }
    Ok(reports)
}

/// Result of [`oracle_check`]. `first_failure` holds a reproducible
/// description of the earliest mismatch, verbatim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleCheckReport {
    pub trials: u64,
    pub max_n: usize,
    pub seed: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

impl OracleCheckReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

// Per-trial stream: one fixed odd multiplier keeps trials independent while
// everything stays reproducible from (seed, trial).
fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ trial.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Pits the incremental solver against exhaustive search on random small
/// instances: up to 5 servers on a grid of eighths, capacities up to 3, at
/// most `max_n` requests. Checks that final costs agree exactly and that
/// each incremental step raises exactly one server's count by one.
pub fn oracle_check(
    trials: u64,
    max_n: usize,
    seed: u64,
) -> Result<OracleCheckReport, ReportError> {
    if max_n > BRUTE_FORCE_LIMIT {
        return Err(ReportError::MaxNTooLarge {
            max_n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let eighth = Rational::new(BigInt::one(), BigInt::from(8));
    let mut failures = 0u64;
    let mut first_failure = None;
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let k = rng.gen_range(1..=5usize);
        let mut servers = Vec::with_capacity(k);
        let mut pos = Rational::from_integer(BigInt::from(rng.gen_range(-32..=0i32))) * &eighth;
        for _ in 0..k {
            servers.push(pos.clone());
            pos += Rational::from_integer(BigInt::from(rng.gen_range(1..=8u32))) * &eighth;
        }
        let capacities: Vec<u32> = (0..k).map(|_| rng.gen_range(1..=3u32)).collect();
        let instance = Instance::new(servers, capacities)?;

        let cap = instance.total_capacity().min(max_n as u64) as usize;
        let n = if cap == 0 { 0 } else { rng.gen_range(1..=cap) };
        let lo = instance.server(0) - Rational::one();
        let span_steps = ((instance.server(k - 1) + Rational::one() - &lo) / &eighth)
            .to_integer()
            .try_into()
            .unwrap_or(0u64);
        let requests: RequestSequence = (0..n)
            .map(|_| &lo + Rational::from_integer(BigInt::from(rng.gen_range(0..=span_steps))) * &eighth)
            .collect();

        if let Some(problem) = run_trial(&instance, &requests, max_n) {
            failures += 1;
            if first_failure.is_none() {
                first_failure = Some(format!(
                    "trial {trial}: servers {:?}, capacities {:?}, requests {:?}: {problem}",
                    instance
                        .servers()
                        .iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>(),
                    instance.capacities(),
                    requests
                        .iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>(),
                ));
            }
        }
    }
    Ok(OracleCheckReport {
        trials,
        max_n,
        seed,
        failures,
        first_failure,
    })
}

// None on success, otherwise what went wrong. The incremental pass and the
// exhaustive pass must stay independent implementations.
fn run_trial(instance: &Instance, requests: &RequestSequence, max_n: usize) -> Option<String> {
    let mut state = OptimalState::new(instance.clone());
    for (i, r) in requests.iter().enumerate() {
        let before = state.usage().to_vec();
        let aug = match extend_optimal(&state, r) {
            Ok(aug) => aug,
            Err(e) => return Some(format!("solver failed at request {i}: {e}")),
        };
        state = aug.state;
        let mut bumped = Vec::new();
        for (t, (&b, &a)) in before.iter().zip(state.usage()).enumerate() {
            if a != b {
                bumped.push((t, a as i64 - b as i64));
            }
        }
        if bumped != [(aug.saturated, 1)] {
            return Some(format!(
                "step {i} changed counts at {bumped:?} instead of +1 at {}",
                aug.saturated
            ));
        }
    }
    let brute = match brute_force_optimal_with_limit(instance, requests, max_n) {
        Ok(b) => b,
        Err(e) => return Some(format!("exhaustive search failed: {e}")),
    };
    if state.cost() != brute.cost() {
        return Some(format!(
            "cost mismatch: solver {} vs exhaustive {}",
            state.cost().to_string(),
            brute.cost().to_string()
        ));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::GeneratorKind;
    use crate::rational::rat;

    #[test]
    fn ratio_conventions() {
        assert_eq!(
            ratio_value(&rat(3, 2), &rat(1, 2)),
            RatioValue::Finite(rat(3, 1))
        );
        assert_eq!(ratio_value(&rat(1, 2), &rat(0, 1)), RatioValue::Infinite);
        assert_eq!(
            ratio_value(&rat(0, 1), &rat(0, 1)),
            RatioValue::Finite(rat(1, 1))
        );
    }

    #[test]
    fn infinite_dominates_every_finite_ratio() {
        assert!(RatioValue::Infinite > RatioValue::Finite(rat(1_000_000, 1)));
        assert!(RatioValue::Finite(rat(3, 1)) > RatioValue::Finite(rat(239, 81)));
        assert!(RatioValue::Infinite.at_least(&rat(1_000_000, 1)));
        assert!(RatioValue::Finite(rat(3, 1)).at_least(&rat(3, 1)));
        assert!(!RatioValue::Finite(rat(3, 1)).at_least(&rat(4, 1)));
        assert_eq!(RatioValue::Infinite.decimal(6), "inf");
    }

    #[test]
    fn compute_ratio_reports_exact_totals() {
        let instance = Instance::equispaced(2, 1).unwrap();
        let requests = RequestSequence::from(vec![rat(79, 160), rat(0, 1)]);
        let report = compute_ratio(
            &instance,
            &requests,
            Algorithm::Perm,
            None,
            Some(rat(29, 10)),
        )
        .unwrap();
        assert_eq!(report.alg_total, rat(239, 160));
        assert_eq!(report.opt_total, rat(81, 160));
        assert_eq!(report.ratio, RatioValue::Finite(rat(239, 81)));
        assert_eq!(report.ratio_decimal(), "2.950617");
        assert!(report.passed());

        let failing = compute_ratio(
            &instance,
            &requests,
            Algorithm::Perm,
            None,
            Some(rat(3, 1)),
        )
        .unwrap();
        assert!(!failing.passed());
        assert_eq!(failing.bound.unwrap().bound, rat(3, 1));
    }

    #[test]
    fn sweep_produces_one_checked_report_per_k() {
        let reports = sweep(2, 4, 1, &rat(1, 10), Algorithm::Perm).unwrap();
        let ratios: Vec<RatioValue> = reports.iter().map(|r| r.ratio.clone()).collect();
        assert_eq!(
            ratios,
            vec![
                RatioValue::Finite(rat(239, 81)),
                RatioValue::Finite(rat(1277, 321)),
                RatioValue::Finite(rat(4793, 963)),
            ]
        );
        for (report, k) in reports.iter().zip(2usize..) {
            assert_eq!(report.k, k);
            assert_eq!(report.ell, 1);
            assert!(report.passed());
            let meta = report.generator.as_ref().unwrap();
            assert_eq!(meta.kind, GeneratorKind::LowerBound);
            assert_eq!(meta.eps, Some(rat(1, 10)));
            let bound = &report.bound.as_ref().unwrap().bound;
            assert_eq!(*bound, rat(10 * (k as i64 + 1) - 1, 10));
        }
    }

    #[test]
    fn sweep_rejects_bad_ranges() {
        assert_eq!(
            sweep(1, 3, 1, &rat(1, 10), Algorithm::Perm),
            Err(ReportError::BadSweepRange { k_from: 1, k_to: 3 })
        );
        assert_eq!(
            sweep(4, 3, 1, &rat(1, 10), Algorithm::Perm),
            Err(ReportError::BadSweepRange { k_from: 4, k_to: 3 })
        );
    }

    #[test]
    fn oracle_check_agrees_on_a_small_run() {
        let report = oracle_check(25, 6, 1).unwrap();
        assert!(report.passed(), "{:?}", report.first_failure);
        assert_eq!(report.trials, 25);
        assert_eq!(report.failures, 0);
        assert_eq!(report.first_failure, None);
    }

    #[test]
    fn oracle_check_rejects_oversized_max_n() {
        assert_eq!(
            oracle_check(1, 9, 1),
            Err(ReportError::MaxNTooLarge { max_n: 9, limit: 8 })
        );
    }
}
