use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use rackconf_core::bench::{
    generate_instance, parse_instance_range, run_benchmark, summary_table, write_csv, Approach,
};
use rackconf_core::engine::{
    parse_trace, solve_with_goal, write_actions, write_trace, Goal, SolveOptions,
};
use rackconf_core::model::{parse_configuration, print_configuration, ConfigurationState, ElementCounts};
use rackconf_core::strategies::Strategy;
use rackconf_core::verifier::{check_algorithm, check_ui_safety, PropertySpec, Scope};
use thiserror::Error;

use crate::{BenchArgs, Command, SolveArgs, VerifyArgs};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
}

type CliResult = Result<ExitCode, CliError>;

const NOT_FOUND: u8 = 1;

pub fn run(command: Command) -> CliResult {
    match command {
        Command::Solve(args) => solve_cmd(args),
        Command::Replay { trace } => replay_cmd(&trace),
        Command::Verify(args) => verify_cmd(args),
        Command::UiCheck { max_steps } => ui_check_cmd(max_steps),
        Command::Bench(args) => bench_cmd(args),
        Command::Generate { instance } => generate_cmd(instance),
        Command::Serve { bind, session_ttl } => serve_cmd(bind, session_ttl),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn seconds(value: f64, flag: &str) -> Result<Duration, CliError> {
    Duration::try_from_secs_f64(value)
        .ok()
        .filter(|d| !d.is_zero())
        .ok_or_else(|| CliError::Usage(format!("{flag} must be a positive number of seconds")))
}

/// A file made only of elements, with no links, is an order: the UI
/// strategy builds it from the empty state, creating the elements itself.
fn element_order(state: &ConfigurationState) -> Option<ElementCounts> {
    let only_elements = state.objects().all(|(_, c)| c.is_element());
    (!state.is_empty() && only_elements && state.fact_count() == state.len()).then(|| state.element_counts())
}

fn solve_cmd(args: SolveArgs) -> CliResult {
    let strategy: Strategy = args.strategy.parse().map_err(|e: rackconf_core::strategies::UnknownStrategy| {
        CliError::Usage(e.to_string())
    })?;
    let opts = SolveOptions {
        max_steps: args.max_steps,
        visited_state_pruning: args.visited_pruning,
        node_budget: args.node_budget,
        time_limit: args.timeout.map(|t| seconds(t, "--timeout")).transpose()?,
    };
    opts.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let input = parse_configuration(&read(&args.input)?)
        .map_err(|e| CliError::Input { path: args.input.clone(), message: e.to_string() })?;
    let (initial, goal) = match element_order(&input) {
        Some(counts) if strategy == Strategy::Ui => (ConfigurationState::new(), Goal::ValidWithElements(counts)),
        _ => (input, Goal::Valid),
    };
    let trace = solve_with_goal(&initial, strategy, &opts, goal).map_err(|e| CliError::Input {
        path: args.input.clone(),
        message: e.to_string(),
    })?;
    if let Some(path) = &args.emit_trace {
        write(path, &write_trace(&trace))?;
    }
    if !trace.is_solved() {
        eprintln!("no solution: {} after {} nodes", trace.result, trace.stats.nodes);
        return Ok(ExitCode::from(NOT_FOUND));
    }
    print!("{}", print_configuration(trace.final_state()));
    println!("steps: {}", trace.len());
    Ok(ExitCode::SUCCESS)
}

fn replay_cmd(path: &Path) -> CliResult {
    let input = |message: String| CliError::Input { path: path.to_path_buf(), message };
    let parsed = parse_trace(&read(path)?).map_err(|e| input(e.to_string()))?;
    let end = parsed.replay().map_err(|e| input(e.to_string()))?;
    print!("{}", print_configuration(&end));
    println!("steps: {}", parsed.actions.len());
    Ok(ExitCode::SUCCESS)
}

fn verify_cmd(args: VerifyArgs) -> CliResult {
    let property: PropertySpec = args.property.parse().map_err(|e: rackconf_core::verifier::UnknownProperty| {
        CliError::Usage(e.to_string())
    })?;
    if args.max_steps == 0 {
        return Err(CliError::Usage("--max-steps must be at least 1".into()));
    }
    let scope = Scope::new(args.scope, args.max_steps);
    match check_algorithm(&property, &scope) {
        Ok(None) => {
            println!(
                "{}: no counterexample in scope {} ({} inputs)",
                property.name,
                args.scope,
                scope.input_count()
            );
            Ok(ExitCode::SUCCESS)
        }
        Ok(Some(cx)) => {
            let mut text = format!("% counterexample to {} for input {}\n", property.name, cx.input);
            for w in &cx.witnesses {
                text.push_str(&format!("% {w}\n"));
            }
            text.push_str(&write_trace(&cx.trace));
            write(&args.out, &text)?;
            println!("{}: counterexample for input {}", property.name, cx.input);
            for w in &cx.witnesses {
                println!("  {w}");
            }
            println!("trace written to {}", args.out.display());
            Ok(ExitCode::from(NOT_FOUND))
        }
        // an unsolved input leaves the scope unchecked
        Err(e) => Err(CliError::Failed(e.to_string())),
    }
}

fn ui_check_cmd(max_steps: u32) -> CliResult {
    let report = check_ui_safety(&Scope::new(0, max_steps));
    println!(
        "explored {} states up to {} steps: {} terminal, {} invalid, {} unrepairable",
        report.states, report.max_steps, report.terminal_states, report.invalid_states, report.unrepairable_states
    );
    match report.counterexample {
        None => {
            println!("no UI action breaks a hard constraint");
            Ok(ExitCode::SUCCESS)
        }
        Some(cx) => {
            let labels: Vec<String> = cx.actions.iter().map(|a| a.to_string()).collect();
            println!("unsafe sequence: {}", labels.join(", "));
            println!("breaks: {:?}", cx.violations);
            Ok(ExitCode::from(NOT_FOUND))
        }
    }
}

fn bench_cmd(args: BenchArgs) -> CliResult {
    let approaches: Vec<Approach> = args
        .strategies
        .split(',')
        .map(|s| s.parse::<Approach>().map_err(|e| CliError::Usage(e.to_string())))
        .collect::<Result<_, _>>()?;
    let instances = parse_instance_range(&args.instances)
        .ok_or_else(|| CliError::Usage(format!("bad instance range '{}'", args.instances)))?;
    let timeout = seconds(args.timeout, "--timeout")?;
    if args.jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let results = run_benchmark(&approaches, &instances, timeout, args.jobs)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    match &args.out {
        Some(path) => {
            let file = fs::File::create(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
            write_csv(&results, file).map_err(|e| CliError::Failed(e.to_string()))?;
            print!("{}", summary_table(&results));
        }
        None => {
            write_csv(&results, io::stdout().lock()).map_err(|e| CliError::Failed(e.to_string()))?;
            eprint!("{}", summary_table(&results));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn generate_cmd(index: u32) -> CliResult {
    let instance = generate_instance(index).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut out = io::stdout().lock();
    let text = format!(
        "% instance {} (domain size {})\n{}",
        instance.index,
        instance.domainsize,
        write_actions(&instance.initial, &[])
    );
    out.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: "<stdout>".into(), source })?;
    Ok(ExitCode::SUCCESS)
}

fn serve_cmd(bind: std::net::SocketAddr, session_ttl: u64) -> CliResult {
    let config = rackconf_service::ServiceConfig {
        bind,
        session_ttl: Duration::from_secs(session_ttl.max(1)),
        ..Default::default()
    };
    let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError::Failed(e.to_string()))?;
    runtime
        .block_on(rackconf_service::serve(config))
        .map_err(|e| CliError::Failed(format!("{bind}: {e}")))?;
    Ok(ExitCode::SUCCESS)
}
