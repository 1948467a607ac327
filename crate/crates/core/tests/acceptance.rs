//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero if
//! any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rackconf_core::bench::{generate_instance, worst_case_domainsize};
use rackconf_core::engine::{
    replay, solve, solve_with_goal, ActionKind, Goal, SolveOptions,
};
use rackconf_core::model::{
    ClassName, ConfigurationState, ElementCounts, Fact, ObjectId,
};
use rackconf_core::strategies::Strategy;
use rackconf_core::verifier::{check_algorithm, PropertySpec, Scope};

use common::*;
use rayon::prelude::*;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn within(started: Instant, limit: Duration) -> Result<(), String> {
    let t = started.elapsed();
    ensure(t < limit, || format!("took {:.2}s, limit {}s", t.as_secs_f64(), limit.as_secs()))
}

fn element_a() -> ConfigurationState {
    ConfigurationState::with_elements(&ElementCounts::new(1, 0, 0, 0))
}

fn generic_step_count() -> Check {
    let started = Instant::now();
    let opts = SolveOptions::default();
    let trace = solve(&element_a(), Strategy::Generic, &opts).map_err(|e| e.to_string())?;
    within(started, Duration::from_secs(5))?;
    let solve_time = started.elapsed().as_secs_f64();
    ensure(trace.is_solved(), || format!("engine result {}", trace.result))?;
    ensure(brute_force_valid(&trace.final_state().facts()), || "final state rejected".into())?;
    let minimum = bfs_min_generic_steps(&element_a(), trace.len())
        .ok_or("breadth-first oracle found no solution")?;
    ensure(minimum == 12, || format!("oracle minimum {minimum}, expected 12"))?;
    ensure(trace.len() >= 12 && trace.len() <= opts.max_steps as usize, || {
        format!("engine trace length {}", trace.len())
    })?;
    Ok(format!("oracle minimum 12, engine trace {} steps, solved in {solve_time:.2}s", trace.len()))
}

fn ui_step_count() -> Check {
    let started = Instant::now();
    let kinds = [
        ActionKind::CreateElement(ClassName::ElementA),
        ActionKind::CreateRack(ClassName::RackSingle),
        ActionKind::AssignElementToRack { element: ObjectId(1), rack: ObjectId(2) },
    ];
    let end = replay(&ConfigurationState::new(), &kinds).map_err(|e| e.to_string())?;
    ensure(brute_force_valid(&end.facts()), || "final state rejected".into())?;
    let goal = Goal::ValidWithElements(ElementCounts::new(1, 0, 0, 0));
    let trace = solve_with_goal(&ConfigurationState::new(), Strategy::Ui, &SolveOptions::default(), goal)
        .map_err(|e| e.to_string())?;
    ensure(trace.is_solved() && trace.len() == 3, || format!("engine found {} steps", trace.len()))?;
    ensure(trace.action_kinds() == kinds, || format!("engine actions {:?}", trace.action_kinds()))?;
    within(started, Duration::from_secs(1))?;
    Ok(format!("3 steps, valid, {:.3}s", started.elapsed().as_secs_f64()))
}

fn ordered_order() -> Check {
    let trace = solve(&element_a(), Strategy::Ordered, &SolveOptions::default()).map_err(|e| e.to_string())?;
    let k = trace.action_kinds();
    ensure(k.len() == 4, || format!("length {}", k.len()))?;
    let order_ok = matches!(k[0], ActionKind::CreateModulesForElement(_))
        && matches!(k[1], ActionKind::CreateFrameForModule { .. })
        && matches!(k[2], ActionKind::CreateRackForFrame { .. })
        && matches!(k[3], ActionKind::CreateFramesForRack(_));
    ensure(order_ok, || format!("order {:?}", k))?;
    ensure(brute_force_valid(&trace.final_state().facts()), || "final state rejected".into())?;
    Ok("modules -> frame -> rack -> frames, 4 steps".into())
}

fn benchmark_pattern() -> Check {
    let started = Instant::now();
    let mut solved = 0;
    for i in 1..=20 {
        let inst = generate_instance(i).map_err(|e| e.to_string())?;
        let trace = solve(&inst.initial, Strategy::Algorithmic, &SolveOptions::default())
            .map_err(|e| e.to_string())?;
        ensure(trace.is_solved(), || format!("instance {i}: {}", trace.result))?;
        ensure(brute_force_valid(&trace.final_state().facts()), || format!("instance {i} rejected"))?;
        solved += 1;
    }
    within(started, Duration::from_secs(600))?;
    Ok(format!("{solved}/20 solved and valid in {:.2}s", started.elapsed().as_secs_f64()))
}

/// Test-local reading of "all modules of an element are in one frame".
fn oracle_same_frame_broken(facts: &[Fact]) -> bool {
    let mut frame_of = std::collections::BTreeMap::new();
    for f in facts {
        if let Fact::FrameModule(fr, m) = f {
            frame_of.insert(*m, *fr);
        }
    }
    let mut frames_per_element: std::collections::BTreeMap<ObjectId, std::collections::BTreeSet<ObjectId>> =
        Default::default();
    for f in facts {
        if let Fact::ElementModule(e, m) = f {
            if let Some(fr) = frame_of.get(m) {
                frames_per_element.entry(*e).or_default().insert(*fr);
            }
        }
    }
    frames_per_element.values().any(|s| s.len() > 1)
}

fn verifier_counterexample() -> Check {
    let started = Instant::now();
    let property = PropertySpec::same_frame();
    for scope_n in [3u32, 4, 5] {
        let scope = Scope::new(scope_n, 500);
        let found = check_algorithm(&property, &scope).map_err(|e| e.to_string())?;
        // brute-force oracle: run every input in order, evaluate directly
        let mut first = None;
        for input in ElementCounts::enumerate(scope_n) {
            let t = solve(&ConfigurationState::with_elements(&input), Strategy::Algorithmic, &SolveOptions::default())
                .map_err(|e| e.to_string())?;
            if oracle_same_frame_broken(&t.final_state().facts()) {
                first = Some(input);
                break;
            }
        }
        match (found, first) {
            (Some(cx), Some(oracle)) => {
                ensure(cx.input == oracle, || format!("verifier {} vs oracle {}", cx.input, oracle))?;
                ensure(oracle_same_frame_broken(&cx.trace.final_state().facts()), || "not confirmed".into())?;
                within(started, Duration::from_secs(60))?;
                return Ok(format!(
                    "scope {scope_n}: counterexample input {} confirmed by oracle, {:.2}s",
                    cx.input,
                    started.elapsed().as_secs_f64()
                ));
            }
            (None, None) => continue,
            (v, o) => return Err(format!("scope {scope_n}: verifier {:?} vs oracle {:?}", v.map(|c| c.input), o)),
        }
    }
    Err("no counterexample up to scope 5".into())
}

fn hard_constraint_impossibility() -> Check {
    let mut steps = 0;
    for strategy in Strategy::ALL {
        for seed in 0..10_000u64 {
            steps += random_walk(strategy, seed ^ ((strategy as u64) << 32), 20)?;
        }
    }
    Ok(format!("40000 random sequences, {steps} actions, no hard violation"))
}

fn oracle_equivalence() -> Check {
    let started = Instant::now();
    let inputs = inputs_up_to(2);
    let checked: Vec<Result<(), String>> = inputs
        .par_iter()
        .map(|input| {
            let initial = ConfigurationState::with_elements(input);
            let trace = solve(&initial, Strategy::Generic, &SolveOptions::default()).map_err(|e| e.to_string())?;
            let (minimum, witness) = constructive_minimum(input);
            ensure(brute_force_valid(&witness.facts()), || format!("{input}: witness rejected"))?;
            let bfs = bfs_min_generic_steps(&initial, trace.len().max(minimum));
            ensure(trace.is_solved() == bfs.is_some(), || {
                format!("{input}: engine {} vs oracle {:?}", trace.result, bfs)
            })?;
            ensure(bfs == Some(minimum), || format!("{input}: bfs {bfs:?} vs constructive {minimum}"))?;
            ensure(trace.len() >= minimum, || format!("{input}: engine shorter than minimum"))?;
            ensure(brute_force_valid(&trace.final_state().facts()), || format!("{input}: rejected"))
        })
        .collect();
    checked.into_iter().collect::<Result<Vec<()>, String>>()?;
    let inputs = inputs.len();
    let mut configurations = 0u64;
    let mut mismatch = None;
    for_each_small_configuration(6, |facts| {
        if mismatch.is_some() {
            return;
        }
        match ConfigurationState::from_facts(facts) {
            Ok(state) => {
                configurations += 1;
                if rackconf_core::model::is_valid(&state) != brute_force_valid(facts) {
                    mismatch = Some(facts.to_vec());
                }
            }
            Err(_) => {
                if rackconf_core::model::hard_violations(facts).is_empty() {
                    mismatch = Some(facts.to_vec());
                }
            }
        }
    });
    if let Some(f) = mismatch {
        return Err(format!("checker disagrees on {f:?}"));
    }
    Ok(format!(
        "{inputs} inputs solved iff breadth-first search solves; {configurations} configurations agree ({:.1}s)",
        started.elapsed().as_secs_f64()
    ))
}

/// The worst case spelled out: every module (moduleV included) alone in a
/// frame, every occupied frame alone in a rackSingle with three fillers.
fn worst_case_objects(i: u32) -> usize {
    let inst = generate_instance(i).expect("instance");
    let mut facts = inst.initial.facts();
    let mut next = inst.initial.next_id().0;
    let mut fresh = |c, facts: &mut Vec<Fact>| {
        let id = ObjectId(next);
        next += 1;
        facts.push(Fact::IsA(id, c));
        id
    };
    let mut modules = Vec::new();
    for (e, c) in inst.initial.objects() {
        let (m, n) = c.requirement().expect("element");
        for _ in 0..n {
            let id = fresh(m, &mut facts);
            facts.push(Fact::ElementModule(e, id));
            if m == ClassName::ModuleII {
                modules.push(fresh(ClassName::ModuleV, &mut facts));
            }
            modules.push(id);
        }
    }
    for m in modules {
        let frame = fresh(ClassName::Frame, &mut facts);
        facts.push(Fact::FrameModule(frame, m));
        let rack = fresh(ClassName::RackSingle, &mut facts);
        facts.push(Fact::RackFrame(rack, frame));
        for _ in 0..3 {
            let filler = fresh(ClassName::Frame, &mut facts);
            facts.push(Fact::RackFrame(rack, filler));
        }
    }
    ConfigurationState::from_facts(&facts).expect("well-formed").len()
}

fn domainsize_sufficiency() -> Check {
    let mut detail = Vec::new();
    for i in 1..=5 {
        let bound = worst_case_domainsize(i).map_err(|e| e.to_string())?;
        let explicit = worst_case_objects(i);
        ensure(bound == explicit, || format!("i={i}: formula {bound}, constructed {explicit}"))?;
        let inst = generate_instance(i).map_err(|e| e.to_string())?;
        let trace = solve(&inst.initial, Strategy::Algorithmic, &SolveOptions::default()).map_err(|e| e.to_string())?;
        let used = trace.final_state().len();
        ensure(trace.is_solved() && used <= bound, || format!("i={i}: {used} objects > {bound}"))?;
        detail.push(format!("{used}<={bound}"));
    }
    Ok(detail.join(", "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("generic-step-count", generic_step_count),
        ("ui-step-count", ui_step_count),
        ("ordered-order", ordered_order),
        ("benchmark-pattern", benchmark_pattern),
        ("verifier-counterexample", verifier_counterexample),
        ("hard-constraint-impossibility", hard_constraint_impossibility),
        ("oracle-equivalence", oracle_equivalence),
        ("domainsize-sufficiency", domainsize_sufficiency),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
