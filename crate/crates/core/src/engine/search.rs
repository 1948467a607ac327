//! Backtracking search over action choices.
//!
//! Nondeterministic strategies are searched depth-first in canonical action
//! order under a growing step horizon, the way an incremental solver grows
//! its horizon one step at a time. Inside a horizon a branch is cut as soon
//! as the strategy's admissible lower bound shows it cannot finish in time.
//! The next horizon is the smallest bound that was cut, so the first trace
//! found never exceeds a shorter one that exists. Strategies whose every
//! branch ends after finitely many steps skip the deepening and search
//! once with the horizon at `max_steps`, returning the first trace in
//! canonical order.

use std::collections::HashMap;
use std::time::Instant;

use crate::model::{detect_violations, hard_violations, ConfigurationState, Fact};
use crate::strategies::Strategy;

use super::{
    Action, EngineError, Goal, SearchStats, SolveOptions, SolveStatus, SolveTrace, StepOutcome,
    TraceStep,
};

/// Upper limit on memoized states for `visited_state_pruning`.
const MEMO_LIMIT: usize = 2_000_000;
const TIME_CHECK_INTERVAL: u64 = 1024;

pub fn solve(
    initial: &ConfigurationState,
    strategy: Strategy,
    opts: &SolveOptions,
) -> Result<SolveTrace, EngineError> {
    solve_with_goal(initial, strategy, opts, Goal::Valid)
}

/// Makes the deterministic move of `strategy` on `state`: the first
/// generated action.
pub fn advance(state: &ConfigurationState, strategy: Strategy) -> StepOutcome {
    let violations = detect_violations(state);
    if violations.is_empty() {
        return StepOutcome::Solved(state.clone());
    }
    let actions = strategy.generate(state, &violations);
    let Some(chosen) = actions.first().cloned() else {
        return StepOutcome::DeadEnd;
    };
    match chosen.apply(state) {
        Ok(next) => StepOutcome::Continue {
            state: next,
            chosen,
            alternatives_remaining: actions.len() - 1,
        },
        Err(_) => StepOutcome::DeadEnd,
    }
}

pub fn solve_with_goal(
    initial: &ConfigurationState,
    strategy: Strategy,
    opts: &SolveOptions,
    goal: Goal,
) -> Result<SolveTrace, EngineError> {
    opts.validate()?;
    let hard = hard_violations(&initial.facts());
    if !hard.is_empty() {
        return Err(EngineError::InvalidInitialState(hard));
    }
    let mut search = Search {
        strategy,
        goal,
        opts,
        started: Instant::now(),
        stats: SearchStats::default(),
        path: Vec::new(),
        memo: HashMap::new(),
    };
    let result = if strategy.is_deterministic() {
        search.linear(initial)
    } else {
        search.deepening(initial)
    };
    let mut steps = Vec::new();
    if result == SolveStatus::Solved {
        let mut state = initial.clone();
        for (i, action) in search.path.into_iter().enumerate() {
            state = action.apply(&state).expect("actions on the search path are applicable");
            steps.push(TraceStep { index: i as u32 + 1, action, state: state.clone() });
        }
    }
    Ok(SolveTrace { initial: initial.clone(), steps, result, stats: search.stats })
}

enum Outcome {
    Found,
    /// Not found; carries the smallest f-value beyond the horizon, if any
    /// branch was cut.
    Failed(Option<u32>),
    Abort(SolveStatus),
}

struct Search<'a> {
    strategy: Strategy,
    goal: Goal,
    opts: &'a SolveOptions,
    started: Instant,
    stats: SearchStats,
    path: Vec<Action>,
    /// Facts -> (largest remaining budget that failed, smallest overshoot
    /// relative to the state's depth).
    memo: HashMap<Vec<Fact>, (u32, Option<u32>)>,
}

impl Search<'_> {
    fn tick(&mut self) -> Option<SolveStatus> {
        self.stats.nodes += 1;
        if let Some(budget) = self.opts.node_budget {
            if self.stats.nodes > budget {
                return Some(SolveStatus::NodeBudgetExhausted);
            }
        }
        if let Some(limit) = self.opts.time_limit {
            if self.stats.nodes.is_multiple_of(TIME_CHECK_INTERVAL) && self.started.elapsed() >= limit {
                return Some(SolveStatus::TimedOut);
            }
        }
        None
    }

    /// Deterministic strategies: follow the single action until done.
    fn linear(&mut self, initial: &ConfigurationState) -> SolveStatus {
        self.stats.iterations = 1;
        let mut state = initial.clone();
        loop {
            if let Some(stop) = self.tick() {
                return stop;
            }
            let violations = detect_violations(&state);
            if self.goal.is_reached(&state, &violations) {
                return SolveStatus::Solved;
            }
            if self.path.len() >= self.opts.max_steps as usize {
                return SolveStatus::StepBoundReached;
            }
            let Some(action) = self.strategy.generate(&state, &violations).into_iter().next() else {
                return SolveStatus::Exhausted;
            };
            match action.apply(&state) {
                Ok(next) => {
                    self.path.push(action);
                    state = next;
                }
                Err(_) => return SolveStatus::Exhausted,
            }
        }
    }

    fn deepening(&mut self, initial: &ConfigurationState) -> SolveStatus {
        let Some(mut horizon) = self.strategy.lower_bound(initial, &self.goal) else {
            self.stats.nodes = 1;
            return SolveStatus::Exhausted;
        };
        let max = self.opts.max_steps;
        if horizon > max {
            return SolveStatus::StepBoundReached;
        }
        if self.strategy.has_finite_depth() {
            horizon = max;
        }
        loop {
            self.stats.iterations += 1;
            log::debug!("horizon {horizon}, {} nodes so far", self.stats.nodes);
            match self.dfs(initial, 0, horizon) {
                Outcome::Found => return SolveStatus::Solved,
                Outcome::Abort(status) => return status,
                Outcome::Failed(None) => return SolveStatus::Exhausted,
                Outcome::Failed(Some(next)) => {
                    if next > max {
                        return SolveStatus::StepBoundReached;
                    }
                    horizon = next;
                }
            }
        }
    }

    fn dfs(&mut self, state: &ConfigurationState, depth: u32, horizon: u32) -> Outcome {
        if let Some(stop) = self.tick() {
            return Outcome::Abort(stop);
        }
        let violations = detect_violations(state);
        if self.goal.is_reached(state, &violations) {
            return Outcome::Found;
        }
        let Some(h) = self.strategy.lower_bound(state, &self.goal) else {
            return Outcome::Failed(None);
        };
        if depth + h > horizon {
            return Outcome::Failed(Some(depth + h));
        }
        let remaining = horizon - depth;
        let key = if self.opts.visited_state_pruning {
            let key = state.facts();
            if let Some(&(failed, over)) = self.memo.get(&key) {
                if failed >= remaining {
                    return Outcome::Failed(over.map(|o| depth + o));
                }
            }
            Some(key)
        } else {
            None
        };

        let mut best: Option<u32> = None;
        for action in self.strategy.generate(state, &violations) {
            let Ok(next) = action.apply(state) else { continue };
            self.path.push(action);
            match self.dfs(&next, depth + 1, horizon) {
                Outcome::Found => return Outcome::Found,
                Outcome::Abort(s) => return Outcome::Abort(s),
                Outcome::Failed(over) => {
                    best = match (best, over) {
                        (Some(a), Some(b)) => Some(a.min(b)),
                        (a, b) => a.or(b),
                    };
                }
            }
            self.path.pop();
        }
        if let Some(key) = key {
            if self.memo.len() < MEMO_LIMIT {
                let rel = best.map(|b| b - depth);
                let entry = self.memo.entry(key).or_insert((0, rel));
                if remaining >= entry.0 {
                    *entry = (remaining, rel);
                }
            }
        }
        Outcome::Failed(best)
    }
}
