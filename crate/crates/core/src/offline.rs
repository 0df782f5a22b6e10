//! Optimal offline assignment, maintained incrementally.
//!
//! [`OptimalState`] holds an optimal matching of the requests processed so
//! far. [`extend_optimal`] folds in one more request by augmenting along a
//! cheapest chain of relocations, so the optimum never has to be recomputed
//! from scratch and the cost deltas come out exact. [`brute_force_optimal`]
//! enumerates all assignments and exists to cross-check the solver; the two
//! must never be collapsed into one code path.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use core::fmt;

use num_traits::Zero;

use crate::instance::{Instance, RequestSequence};
use crate::matching::Matching;
use crate::rational::Rational;

/// Default cap on exhaustive search size.
pub const BRUTE_FORCE_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveError {
    /// Every server is at capacity; `request` is the arrival index that could
    /// not be placed.
    NoFreeServer { request: usize },
    /// Too many requests for exhaustive search.
    TooLarge { n: usize, limit: usize },
    /// An internal consistency check failed. This is a bug, not bad input.
    Invariant(&'static str),
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::NoFreeServer { request } => {
                write!(f, "no free server left for request index {request}")
            }
            SolveError::TooLarge { n, limit } => {
                write!(f, "{n} requests exceed the exhaustive-search limit of {limit}")
            }
            SolveError::Invariant(msg) => write!(f, "internal invariant violated: {msg}"),
        }
    }
}

impl core::error::Error for SolveError {}

/// An optimal assignment of a request prefix.
///
/// Invariants: `assigned[j]` is the server of request `j`, `usage` counts
/// requests per server and respects capacities, and `cost` is the exact
/// total distance, which is minimal over all feasible assignments of these
/// requests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimalState {
    instance: Instance,
    requests: Vec<Rational>,
    assigned: Vec<usize>,
    usage: Vec<u32>,
    cost: Rational,
}

impl OptimalState {
    /// Empty state: no requests processed yet.
    pub fn new(instance: Instance) -> Self {
        let k = instance.len();
        OptimalState {
            instance,
            requests: Vec::new(),
            assigned: Vec::new(),
            usage: vec![0; k],
            cost: Rational::zero(),
        }
    }

    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn requests(&self) -> &[Rational] {
        &self.requests
    }

    /// Server index per request, in arrival order.
    pub fn assignments(&self) -> &[usize] {
        &self.assigned
    }

    pub fn usage(&self) -> &[u32] {
        &self.usage
    }

    pub fn cost(&self) -> &Rational {
        &self.cost
    }

    pub fn len(&self) -> usize {
        self.requests.len()
    }

    pub fn is_empty(&self) -> bool {
        self.requests.is_empty()
    }

    pub fn matching(&self) -> Matching {
        Matching::from_pairs(self.assigned.iter().copied().enumerate().collect())
    }
}

/// Outcome of one [`extend_optimal`] step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentationResult {
    /// Optimal state including the new request.
    pub state: OptimalState,
    /// The one server whose request count rose.
    pub saturated: usize,
    /// Exact cost increase, never negative.
    pub delta: Rational,
}

impl AugmentationResult {
    /// One debug log line: arrival index, request position, the server whose
    /// count rose, and the bookkeeping afterwards. 0-based indices, matching
    /// the library's internal convention.
    pub fn log_line(&self, index: usize) -> String {
        format!(
            "aug {index}: r={} -> s{}, delta {}, cost {}, usage {:?}",
            self.state
                .requests()
                .last()
                .expect("augmented state holds the request just added"),
            self.saturated,
            self.delta,
            self.state.cost(),
            self.state.usage(),
        )
    }
}

/// Extends an optimal state by one request, keeping it optimal.
///
/// The new optimum differs from the old one by a chain: the new request goes
/// to some server, which may hand one of its requests to the next server,
/// and so on until a server with spare capacity absorbs the surplus. Only
/// that final server's count changes. The cheapest such chain is found by
/// label-correcting relaxation over server-to-server relocation arcs; since
/// the current state is optimal there is no negative relocation cycle, so
/// `len - 1` rounds converge and deltas are nonnegative.
///
/// Ties are broken deterministically: a free server exactly at the request
/// wins outright, otherwise the cheapest chain ending at the lowest server
/// index, with earlier-found chains kept on equal cost.
pub fn extend_optimal(
    state: &OptimalState,
    r: &Rational,
) -> Result<AugmentationResult, SolveError> {
    let inst = &state.instance;
    let k = inst.len();
    let free = |t: usize| state.usage[t] < inst.capacity(t);
    if !(0..k).any(free) {
        return Err(SolveError::NoFreeServer {
            request: state.requests.len(),
        });
    }

    if let Some(t) = (0..k).find(|&t| free(t) && inst.server(t) == r) {
        let mut next = state.clone();
        next.requests.push(r.clone());
        next.assigned.push(t);
        next.usage[t] += 1;
        return Ok(AugmentationResult {
            state: next,
            saturated: t,
            delta: Rational::zero(),
        });
    }

    // arc[a][b]: cheapest way to move one request off a onto b, i.e. the
    // request j on a minimizing |r_j - s_b| - |r_j - s_a| (can be negative).
    let mut arc: Vec<Vec<Option<(Rational, usize)>>> = vec![vec![None; k]; k];
    for (j, &a) in state.assigned.iter().enumerate() {
        let here = inst.distance(&state.requests[j], a);
        for b in 0..k {
            if b == a {
                continue;
            }
            let w = inst.distance(&state.requests[j], b) - &here;
            let better = match &arc[a][b] {
                Some((best, _)) => w < *best,
                None => true,
            };
            if better {
                arc[a][b] = Some((w, j));
            }
        }
    }

    // dist[t]: cheapest cost of a chain that lands the surplus on t;
    // parent[t] = (a, j) means the chain reaches t by moving j from a.
    let mut dist: Vec<Rational> = (0..k).map(|t| inst.distance(r, t)).collect();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; k];
    for round in 0..k {
        let mut changed = false;
        for a in 0..k {
            for (b, w) in arc[a].iter().enumerate() {
                if let Some((w, j)) = w {
                    let via = &dist[a] + w;
                    if via < dist[b] {
                        dist[b] = via;
                        parent[b] = Some((a, *j));
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
        if round + 1 == k {
            return Err(SolveError::Invariant(
                "relaxation did not converge: negative relocation cycle",
            ));
        }
    }

    let mut end = None;
    for t in (0..k).filter(|&t| free(t)) {
        match end {
            Some(e) if dist[t] >= dist[e] => {}
            _ => end = Some(t),
        }
    }
    let end = end.ok_or(SolveError::Invariant("no reachable free server"))?;
    let delta = dist[end].clone();
    if delta < Rational::zero() {
        return Err(SolveError::Invariant(
            "negative cost delta: previous state was not optimal",
        ));
    }

    let mut next = state.clone();
    next.requests.push(r.clone());
    let mut moves = Vec::new();
    let mut cur = end;
    while let Some((a, j)) = parent[cur] {
        moves.push((j, cur));
        if moves.len() > k {
            return Err(SolveError::Invariant("relocation chain does not terminate"));
        }
        cur = a;
    }
    next.assigned.push(cur);
    for (j, to) in moves {
        next.assigned[j] = to;
    }
    next.usage[end] += 1;
    next.cost += &delta;
    Ok(AugmentationResult {
        state: next,
        saturated: end,
        delta,
    })
}

/// Optimal assignment of a whole sequence, folded one request at a time via
/// [`extend_optimal`].
pub fn solve_optimal(
    instance: &Instance,
    requests: &RequestSequence,
) -> Result<OptimalState, SolveError> {
    let mut state = OptimalState::new(instance.clone());
    for r in requests {
        state = extend_optimal(&state, r)?.state;
    }
    Ok(state)
}

/// [`solve_optimal`], plus one [`log_line`] per augmentation for debugging.
///
/// [`log_line`]: AugmentationResult::log_line
pub fn solve_optimal_logged(
    instance: &Instance,
    requests: &RequestSequence,
) -> Result<(OptimalState, Vec<String>), SolveError> {
    let mut state = OptimalState::new(instance.clone());
    let mut log = Vec::with_capacity(requests.len());
    for (i, r) in requests.iter().enumerate() {
        let aug = extend_optimal(&state, r)?;
        log.push(aug.log_line(i));
        state = aug.state;
    }
    Ok((state, log))
}

/// Exhaustive optimum for small inputs; see [`brute_force_optimal_with_limit`].
pub fn brute_force_optimal(
    instance: &Instance,
    requests: &RequestSequence,
) -> Result<OptimalState, SolveError> {
    brute_force_optimal_with_limit(instance, requests, BRUTE_FORCE_LIMIT)
}

/// Tries every feasible assignment and keeps the lexicographically smallest
/// server vector among the optima. Deliberately independent of
/// [`extend_optimal`]: this is the oracle the solver is checked against.
pub fn brute_force_optimal_with_limit(
    instance: &Instance,
    requests: &RequestSequence,
    limit: usize,
) -> Result<OptimalState, SolveError> {
    let n = requests.len();
    if n > limit {
        return Err(SolveError::TooLarge { n, limit });
    }
    if n as u64 > instance.total_capacity() {
        return Err(SolveError::NoFreeServer {
            request: instance.total_capacity() as usize,
        });
    }
    let k = instance.len();
    let cost: Vec<Vec<Rational>> = requests
        .iter()
        .map(|r| (0..k).map(|t| instance.distance(r, t)).collect())
        .collect();

    struct Search<'a> {
        cost: &'a [Vec<Rational>],
        capacities: &'a [u32],
        n: usize,
        best: Option<(Rational, Vec<usize>)>,
        current: Vec<usize>,
        usage: Vec<u32>,
    }

    impl Search<'_> {
        // Ascending server choice plus strict improvement means the first
        // optimum found is the lexicographically smallest one; partial
        // costs only grow, so pruning at >= best is safe.
        fn go(&mut self, depth: usize, partial: Rational) {
            if let Some((best, _)) = &self.best {
                if partial >= *best {
                    return;
                }
            }
            if depth == self.n {
                self.best = Some((partial, self.current.clone()));
                return;
            }
            for t in 0..self.capacities.len() {
                if self.usage[t] == self.capacities[t] {
                    continue;
                }
                self.usage[t] += 1;
                self.current.push(t);
                let sub = &partial + &self.cost[depth][t];
                self.go(depth + 1, sub);
                self.current.pop();
                self.usage[t] -= 1;
            }
        }
    }

    let mut search = Search {
        cost: &cost,
        capacities: instance.capacities(),
        n,
        best: None,
        current: Vec::with_capacity(n),
        usage: vec![0; k],
    };
    search.go(0, Rational::zero());
    let (cost, assigned) = search
        .best
        .ok_or(SolveError::Invariant("no feasible assignment found"))?;
    let mut usage = vec![0u32; k];
    for &t in &assigned {
        usage[t] += 1;
    }
    Ok(OptimalState {
        instance: instance.clone(),
        requests: requests.as_slice().to_vec(),
        assigned,
        usage,
        cost,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn extend_keeps_the_prefix_optimal() {
        // Three requests on three unit-capacity servers at 0, 1, 2. Each
        // extension was checked against the exhaustive optimum by hand.
        let inst = Instance::equispaced(3, 1).unwrap();
        let s0 = OptimalState::new(inst);

        let a1 = extend_optimal(&s0, &rat(479, 320)).unwrap();
        assert_eq!(a1.state.assignments(), &[1]);
        assert_eq!(a1.state.cost(), &rat(159, 320));
        assert_eq!(a1.saturated, 1);
        assert_eq!(a1.delta, rat(159, 320));

        // r2 lands on server 1 and pushes r1 one server to the right.
        let a2 = extend_optimal(&a1.state, &rat(81, 160)).unwrap();
        assert_eq!(a2.state.assignments(), &[2, 1]);
        assert_eq!(a2.state.cost(), &rat(319, 320));
        assert_eq!(a2.saturated, 2);
        assert_eq!(a2.delta, rat(1, 2));

        // r3 triggers a two-hop chain that frees server 0.
        let a3 = extend_optimal(&a2.state, &rat(2, 1)).unwrap();
        assert_eq!(a3.state.assignments(), &[1, 0, 2]);
        assert_eq!(a3.state.cost(), &rat(321, 320));
        assert_eq!(a3.state.usage(), &[1, 1, 1]);
        assert_eq!(a3.saturated, 0);
        assert_eq!(a3.delta, rat(1, 160));
    }

    #[test]
    fn exact_position_on_a_free_server_costs_nothing() {
        let inst = Instance::equispaced(2, 2).unwrap();
        let s0 = OptimalState::new(inst);
        let a = extend_optimal(&s0, &rat(1, 1)).unwrap();
        assert_eq!(a.saturated, 1);
        assert_eq!(a.delta, rat(0, 1));
        let a = extend_optimal(&a.state, &rat(1, 1)).unwrap();
        assert_eq!(a.saturated, 1);
        assert_eq!(a.state.cost(), &rat(0, 1));
        assert_eq!(a.state.usage(), &[0, 2]);
    }

    #[test]
    fn full_servers_reject_further_requests() {
        let inst = Instance::equispaced(1, 1).unwrap();
        let s0 = OptimalState::new(inst);
        let a = extend_optimal(&s0, &rat(3, 1)).unwrap();
        assert_eq!(
            extend_optimal(&a.state, &rat(0, 1)),
            Err(SolveError::NoFreeServer { request: 1 })
        );
    }

    #[test]
    fn solve_matches_brute_force_on_a_worked_example() {
        let inst = Instance::equispaced(3, 1).unwrap();
        let seq = RequestSequence::from(vec![rat(479, 320), rat(81, 160), rat(2, 1)]);
        let solved = solve_optimal(&inst, &seq).unwrap();
        let brute = brute_force_optimal(&inst, &seq).unwrap();
        assert_eq!(solved.cost(), &rat(321, 320));
        assert_eq!(solved.cost(), brute.cost());
        assert_eq!(solved.usage(), brute.usage());
        assert_eq!(brute.assignments(), &[1, 0, 2]);
    }

    #[test]
    fn brute_force_prefers_the_lexicographically_smallest_optimum() {
        // Request halfway between both servers: either choice costs 1/2.
        let inst = Instance::equispaced(2, 1).unwrap();
        let seq = RequestSequence::from(vec![rat(1, 2)]);
        let brute = brute_force_optimal(&inst, &seq).unwrap();
        assert_eq!(brute.assignments(), &[0]);
        assert_eq!(brute.cost(), &rat(1, 2));
    }

    #[test]
    fn brute_force_guards_its_limits() {
        let inst = Instance::equispaced(2, 5).unwrap();
        let nine = RequestSequence::from(vec![rat(1, 2); 9]);
        assert_eq!(
            brute_force_optimal(&inst, &nine),
            Err(SolveError::TooLarge { n: 9, limit: 8 })
        );
        let brute = brute_force_optimal_with_limit(&inst, &nine, 9).unwrap();
        assert_eq!(brute.cost(), &rat(9, 2));

        let tiny = Instance::equispaced(1, 1).unwrap();
        let two = RequestSequence::from(vec![rat(0, 1), rat(0, 1)]);
        assert_eq!(
            brute_force_optimal(&tiny, &two),
            Err(SolveError::NoFreeServer { request: 1 })
        );
    }

    #[test]
    fn augmentation_log_lines_describe_each_step() {
        let inst = Instance::equispaced(3, 1).unwrap();
        let seq = RequestSequence::from(vec![rat(479, 320), rat(81, 160), rat(2, 1)]);
        let (state, log) = solve_optimal_logged(&inst, &seq).unwrap();
        assert_eq!(state.cost(), &rat(321, 320));
        assert_eq!(
            log,
            vec![
                "aug 0: r=479/320 -> s1, delta 159/320, cost 159/320, usage [0, 1, 0]",
                "aug 1: r=81/160 -> s2, delta 1/2, cost 319/320, usage [0, 1, 1]",
                "aug 2: r=2 -> s0, delta 1/160, cost 321/320, usage [1, 1, 1]",
            ]
        );
    }

    #[test]
    fn empty_sequences_cost_nothing() {
        let inst = Instance::equispaced(2, 1).unwrap();
        let seq = RequestSequence::new();
        let solved = solve_optimal(&inst, &seq).unwrap();
        assert!(solved.is_empty());
        assert_eq!(solved.cost(), &rat(0, 1));
        let brute = brute_force_optimal(&inst, &seq).unwrap();
        assert_eq!(brute.cost(), &rat(0, 1));
    }
}
