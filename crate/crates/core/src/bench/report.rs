use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io;

use super::{Approach, BenchOutcome, BenchResult};

/// Writes one row per result:
/// `strategy,instance,outcome,wall_time_s,steps,peak_mem_bytes`.
pub fn write_csv<W: io::Write>(results: &[BenchResult], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["strategy", "instance", "outcome", "wall_time_s", "steps", "peak_mem_bytes"])?;
    for r in results {
        w.write_record([
            r.approach.name().to_string(),
            r.instance.to_string(),
            r.outcome.as_str().to_string(),
            format!("{:.6}", r.wall_time_s),
            r.steps.to_string(),
            r.peak_mem_bytes.map(|b| b.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Per-approach totals: solved instances, summed wall time, mean peak
/// memory.
pub fn summary_table(results: &[BenchResult]) -> String {
    let mut by: BTreeMap<Approach, Vec<&BenchResult>> = BTreeMap::new();
    for r in results {
        by.entry(r.approach).or_default().push(r);
    }
    let mut out = String::new();
    let _ = writeln!(out, "{:<12} {:>8} {:>10} {:>14} {:>14}", "approach", "solved", "runs", "sum time (s)", "avg mem (MB)");
    for (approach, rs) in by {
        let solved = rs.iter().filter(|r| r.outcome == BenchOutcome::Solved).count();
        let time: f64 = rs.iter().map(|r| r.wall_time_s).sum();
        let mems: Vec<u64> = rs.iter().filter_map(|r| r.peak_mem_bytes).collect();
        let mem = if mems.is_empty() {
            "-".to_string()
        } else {
            format!("{:.1}", mems.iter().sum::<u64>() as f64 / mems.len() as f64 / 1_048_576.0)
        };
        let _ = writeln!(out, "{:<12} {:>8} {:>10} {:>14.3} {:>14}", approach.name(), solved, rs.len(), time, mem);
    }
    out
}
