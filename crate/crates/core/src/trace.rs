//! Step-by-step records of an online run.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::matching::Matching;
use crate::rational::Rational;

/// One irrevocable assignment: request `request` (0-based arrival index) went
/// to server `server` at cost `cost`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub request: usize,
    pub server: usize,
    pub cost: Rational,
}

/// All steps of a run plus the accumulated total, kept in sync by [`push`].
///
/// [`push`]: Trace::push
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    steps: Vec<TraceStep>,
    total: Rational,
}

impl Trace {
    pub fn new() -> Self {
        Trace {
            steps: Vec::new(),
            total: Rational::zero(),
        }
    }

    pub fn push(&mut self, step: TraceStep) {
        self.total += &step.cost;
        self.steps.push(step);
    }

    pub fn steps(&self) -> &[TraceStep] {
        &self.steps
    }

    pub fn total(&self) -> &Rational {
        &self.total
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The matching induced by the steps, in arrival order.
    pub fn matching(&self) -> Matching {
        let mut m = Matching::new();
        for step in &self.steps {
            m.assign(step.request, step.server);
        }
        m
    }
}

impl Default for Trace {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn total_tracks_pushed_steps() {
        let mut t = Trace::new();
        assert!(t.is_empty());
        t.push(TraceStep {
            request: 0,
            server: 0,
            cost: rat(79, 160),
        });
        t.push(TraceStep {
            request: 1,
            server: 1,
            cost: rat(1, 1),
        });
        assert_eq!(t.total(), &rat(239, 160));
        assert_eq!(t.len(), 2);
        assert_eq!(t.matching().pairs(), &[(0, 0), (1, 1)]);
    }
}
