//! Benchmark instances, the worst-case domain size bound, a timed harness
//! and a monolithic generate-and-test baseline.

mod baseline;
mod report;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use baseline::{baseline_generate_and_test, baseline_search, BaselineOutcome};
pub use report::{summary_table, write_csv};

use crate::engine::{solve, SolveOptions, SolveStatus};
use crate::model::{is_valid, ConfigurationState, ElementCounts};
use crate::strategies::Strategy;

pub const MAX_INSTANCE: u32 = 20;
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(600);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BenchError {
    #[error("instance index {0} is outside 1..={MAX_INSTANCE}")]
    IndexOutOfRange(u32),
    #[error("timeout must be positive")]
    InvalidTimeout,
    #[error("unknown approach '{0}' (expected generic, ordered, algorithmic, ui or baseline)")]
    UnknownApproach(String),
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub index: u32,
    pub initial: ConfigurationState,
    pub domainsize: usize,
}

/// Instance `i`: `i` elements of each type, ids grouped by type with the
/// elementA block first.
pub fn generate_instance(i: u32) -> Result<Instance, BenchError> {
    if !(1..=MAX_INSTANCE).contains(&i) {
        return Err(BenchError::IndexOutOfRange(i));
    }
    Ok(Instance {
        index: i,
        initial: ConfigurationState::with_elements(&ElementCounts::uniform(i)),
        domainsize: worst_case_domainsize(i)?,
    })
}

/// Object count of the worst case where no frame or rack is shared: every
/// module in its own frame, every frame in its own rackSingle padded with
/// three empty frames, plus one moduleV per moduleII frame.
pub fn worst_case_domainsize(i: u32) -> Result<usize, BenchError> {
    if i == 0 {
        return Err(BenchError::IndexOutOfRange(i));
    }
    let i = i as usize;
    let elements = 4 * i;
    let modules = 10 * i;
    let module_v = 2 * i;
    let occupied_frames = 12 * i;
    let racks = occupied_frames;
    let frames = 4 * racks;
    Ok(elements + modules + module_v + frames + racks)
}

/// A search approach: one of the strategies or the monolithic baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Approach {
    Strategy(Strategy),
    Baseline,
}

impl Approach {
    pub fn name(self) -> &'static str {
        match self {
            Approach::Strategy(s) => s.name(),
            Approach::Baseline => "baseline",
        }
    }
}

impl fmt::Display for Approach {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Approach {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().eq_ignore_ascii_case("baseline") {
            return Ok(Approach::Baseline);
        }
        s.parse().map(Approach::Strategy).map_err(|_| BenchError::UnknownApproach(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BenchOutcome {
    Solved,
    /// The bounded search space held no solution.
    Exhausted,
    Timeout,
    /// A result that failed the independent validity check.
    Rejected,
}

impl BenchOutcome {
    pub fn as_str(self) -> &'static str {
        match self {
            BenchOutcome::Solved => "solved",
            BenchOutcome::Exhausted => "exhausted",
            BenchOutcome::Timeout => "timeout",
            BenchOutcome::Rejected => "rejected",
        }
    }
}

impl fmt::Display for BenchOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchResult {
    pub instance: u32,
    pub approach: Approach,
    pub outcome: BenchOutcome,
    pub wall_time_s: f64,
    pub steps: usize,
    /// Objects in the final configuration (0 unless solved).
    pub objects: usize,
    /// Peak resident memory of the process, where the platform reports it.
    pub peak_mem_bytes: Option<u64>,
}

/// Resets the kernel's peak-RSS counter so the next reading covers only
/// the following run. Best effort.
fn reset_peak_memory() {
    let _ = std::fs::write("/proc/self/clear_refs", "5");
}

fn peak_memory() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

/// Runs one approach on one instance with a time limit.
pub fn run_one(approach: Approach, instance: &Instance, timeout: Duration) -> BenchResult {
    reset_peak_memory();
    let started = Instant::now();
    let (outcome, steps, final_state) = match approach {
        Approach::Baseline => {
            let deadline = started + timeout;
            match baseline_search(&instance.initial, instance.domainsize, Some(deadline)) {
                BaselineOutcome::Found(state) => (BenchOutcome::Solved, 0, Some(state)),
                BaselineOutcome::Exhausted => (BenchOutcome::Exhausted, 0, None),
                BaselineOutcome::Timeout => (BenchOutcome::Timeout, 0, None),
            }
        }
        Approach::Strategy(strategy) => {
            let opts = SolveOptions { time_limit: Some(timeout), ..Default::default() };
            match solve(&instance.initial, strategy, &opts) {
                Ok(trace) => match trace.result {
                    SolveStatus::Solved => {
                        (BenchOutcome::Solved, trace.len(), Some(trace.final_state().clone()))
                    }
                    SolveStatus::TimedOut | SolveStatus::NodeBudgetExhausted => {
                        (BenchOutcome::Timeout, 0, None)
                    }
                    SolveStatus::Exhausted | SolveStatus::StepBoundReached => {
                        (BenchOutcome::Exhausted, 0, None)
                    }
                },
                Err(e) => {
                    log::warn!("instance {}: {e}", instance.index);
                    (BenchOutcome::Exhausted, 0, None)
                }
            }
        }
    };
    let wall_time_s = started.elapsed().as_secs_f64();
    let (outcome, objects) = match final_state {
        Some(state) if is_valid(&state) => (outcome, state.len()),
        Some(_) => (BenchOutcome::Rejected, 0),
        None => (outcome, 0),
    };
    BenchResult {
        instance: instance.index,
        approach,
        outcome,
        wall_time_s,
        steps,
        objects,
        peak_mem_bytes: peak_memory(),
    }
}

/// One result per (approach, instance), sorted by approach then instance.
/// With `jobs > 1` instances run on a worker pool; approaches still run one
/// after another per instance, and peak memory is then shared by workers.
pub fn run_benchmark(
    approaches: &[Approach],
    instances: &[u32],
    timeout: Duration,
    jobs: usize,
) -> Result<Vec<BenchResult>, BenchError> {
    if timeout.is_zero() {
        return Err(BenchError::InvalidTimeout);
    }
    let generated: Vec<Instance> =
        instances.iter().map(|&i| generate_instance(i)).collect::<Result<_, _>>()?;
    let per_instance = |inst: &Instance| -> Vec<BenchResult> {
        approaches
            .iter()
            .map(|&a| {
                let r = run_one(a, inst, timeout);
                log::info!(
                    "{} instance {}: {} in {:.3}s",
                    r.approach,
                    r.instance,
                    r.outcome,
                    r.wall_time_s
                );
                r
            })
            .collect()
    };
    let mut results: Vec<BenchResult> = if jobs > 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| BenchError::Pool(e.to_string()))?;
        pool.install(|| generated.par_iter().flat_map_iter(per_instance).collect())
    } else {
        generated.iter().flat_map(per_instance).collect()
    };
    results.sort_by_key(|r| (r.approach, r.instance));
    Ok(results)
}

/// Parses `a..b` (inclusive), `a..=b`, a single index, or a comma list.
pub fn parse_instance_range(s: &str) -> Option<Vec<u32>> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let (a, b): (u32, u32) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
        return (a <= b).then(|| (a..=b).collect());
    }
    s.split(',').map(|p| p.trim().parse().ok()).collect()
}
