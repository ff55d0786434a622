//! Benchmark CLI: run scenarios, compare algorithms, write CSV/JSON
//! bundles and SVG plots.

use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use proxident::experiments::{
    default_budget, run_scenario, scenario_by_name, scenario_names, AlgoRun, Scenario,
};
use proxident::inertia::InertiaVariant;
use proxident::report::{emit_csv, emit_svg};
use proxident::solvers::{Algorithm, SolverConfig};
use proxident::Error;

#[derive(Parser)]
#[command(name = "proxident", version, about = "Composite optimization benchmarks with structure tracking")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single algorithm on a scenario and write its CSV trace.
    Run(RunArgs),
    /// Run several algorithms on one scenario; write the full bundle.
    Compare(RunArgs),
    /// Reproduce a named experiment (compare with plots enabled).
    Experiment(RunArgs),
    /// Recompute a scenario and write only the SVG plots.
    Plot(RunArgs),
    /// List known scenarios and algorithms.
    List,
}

#[derive(Args, Default, Clone)]
struct RunArgs {
    /// Scenario name (see `list`).
    #[arg(long)]
    scenario: Option<String>,
    /// Algorithm, repeatable; defaults to all five for compare/experiment/plot.
    #[arg(long = "algo")]
    algos: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Budget in cumulative prox-gradient steps.
    #[arg(long)]
    budget: Option<usize>,
    /// Step size, a real or "auto" (= 1/L).
    #[arg(long)]
    gamma: Option<String>,
    /// Inertia schedule: nesterov | cd:<a> | liang:<p>,<q>.
    #[arg(long)]
    schedule: Option<String>,
    /// Z-set threshold, a real or "auto".
    #[arg(long)]
    zeta: Option<String>,
    /// Output directory; falls back to $PROXIDENT_OUT, then ".".
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write SVG plots.
    #[arg(long)]
    svg: bool,
    /// key = value file supplying any of the above; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn parse_algo(s: &str) -> Result<Algorithm, Error> {
    Ok(match s {
        "pg" => Algorithm::Pg,
        "apg" => Algorithm::Apg,
        "mfista" => Algorithm::Mfista,
        "t1" => Algorithm::ProvisionalT1,
        "t2" => Algorithm::ProvisionalT2,
        other => {
            return Err(Error::InvalidConfig(format!(
                "unknown algorithm '{other}' (expected pg|apg|mfista|t1|t2)"
            )))
        }
    })
}

fn parse_schedule(s: &str) -> Result<InertiaVariant, Error> {
    if s == "nesterov" {
        return Ok(InertiaVariant::Nesterov);
    }
    if let Some(a) = s.strip_prefix("cd:") {
        let a: f64 = a
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("bad cd schedule '{s}'")))?;
        if a < 2.0 {
            return Err(Error::InvalidConfig("cd schedule needs a >= 2".into()));
        }
        return Ok(InertiaVariant::ChambolleDossal { a });
    }
    if let Some(pq) = s.strip_prefix("liang:") {
        let parts: Vec<&str> = pq.split(',').collect();
        if parts.len() == 2 {
            if let (Ok(p), Ok(q)) = (parts[0].parse::<f64>(), parts[1].parse::<f64>()) {
                if p > 0.0 && p <= 1.0 && q >= 0.0 {
                    return Ok(InertiaVariant::Liang { p, q });
                }
            }
        }
        return Err(Error::InvalidConfig(format!("bad liang schedule '{s}'")));
    }
    Err(Error::InvalidConfig(format!(
        "unknown schedule '{s}' (expected nesterov | cd:<a> | liang:<p>,<q>)"
    )))
}

fn parse_real_or_auto(key: &str, s: &str) -> Result<Option<f64>, Error> {
    if s == "auto" {
        return Ok(None);
    }
    let v: f64 = s
        .parse()
        .map_err(|_| Error::InvalidConfig(format!("bad {key} value '{s}'")))?;
    if !v.is_finite() || v <= 0.0 {
        return Err(Error::InvalidConfig(format!("{key} must be positive, got {s}")));
    }
    Ok(Some(v))
}

/// Merge a line-oriented `key = value` file underneath the flags.
fn apply_config_file(args: &mut RunArgs) -> Result<(), Error> {
    let Some(path) = args.config.clone() else {
        return Ok(());
    };
    let text = std::fs::read_to_string(&path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    let mut kv = HashMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::InvalidConfig(format!(
                "{}:{}: expected 'key = value'",
                path.display(),
                lineno + 1
            )));
        };
        kv.insert(k.trim().to_string(), v.trim().to_string());
    }
    for (k, v) in kv {
        match k.as_str() {
            "scenario" => {
                args.scenario.get_or_insert(v);
            }
            "algo" => {
                if args.algos.is_empty() {
                    args.algos = v.split(',').map(|s| s.trim().to_string()).collect();
                }
            }
            "seed" => {
                if args.seed.is_none() {
                    args.seed = Some(v.parse().map_err(|_| {
                        Error::InvalidConfig(format!("bad seed '{v}' in config file"))
                    })?);
                }
            }
            "budget" => {
                if args.budget.is_none() {
                    args.budget = Some(v.parse().map_err(|_| {
                        Error::InvalidConfig(format!("bad budget '{v}' in config file"))
                    })?);
                }
            }
            "gamma" => {
                args.gamma.get_or_insert(v);
            }
            "schedule" => {
                args.schedule.get_or_insert(v);
            }
            "zeta" => {
                args.zeta.get_or_insert(v);
            }
            "out" => {
                args.out.get_or_insert(PathBuf::from(v));
            }
            "svg" => {
                args.svg = args.svg || v == "true" || v == "1";
            }
            other => {
                return Err(Error::InvalidConfig(format!(
                    "unknown config key '{other}'"
                )))
            }
        }
    }
    Ok(())
}

fn build_scenario(args: &RunArgs, default_all: bool) -> Result<Scenario, Error> {
    let name = args
        .scenario
        .as_deref()
        .ok_or_else(|| Error::InvalidConfig("--scenario is required".into()))?;
    let seed = args.seed.unwrap_or(42);
    let mut scen = scenario_by_name(name, seed)?;
    scen.name = name.to_string();
    let budget = args.budget.unwrap_or_else(|| default_budget(name));
    let gamma = match &args.gamma {
        Some(s) => parse_real_or_auto("gamma", s)?,
        None => None,
    };
    let zeta = match &args.zeta {
        Some(s) => parse_real_or_auto("zeta", s)?,
        None => None,
    };
    let schedule = match &args.schedule {
        Some(s) => parse_schedule(s)?,
        None => InertiaVariant::Nesterov,
    };
    let algos: Vec<Algorithm> = if args.algos.is_empty() {
        if default_all {
            vec![
                Algorithm::Pg,
                Algorithm::Apg,
                Algorithm::Mfista,
                Algorithm::ProvisionalT1,
                Algorithm::ProvisionalT2,
            ]
        } else {
            return Err(Error::InvalidConfig("--algo is required for run".into()));
        }
    } else {
        args.algos
            .iter()
            .map(|s| parse_algo(s))
            .collect::<Result<_, _>>()?
    };
    // Fail fast on a step size that is too large for the requested method
    // instead of erroring mid-run.
    if let Some(g) = gamma {
        let l = scen.problem.smooth.lipschitz_constant()?;
        for a in &algos {
            let bound = match a {
                Algorithm::ProvisionalT1 | Algorithm::ProvisionalT2 => (1.0 + 1e-12) / l,
                _ => 2.0 / l,
            };
            if g > bound {
                return Err(Error::InvalidConfig(format!(
                    "gamma {g} exceeds the admissible bound {bound:.6e} for {}",
                    a.name()
                )));
            }
        }
    }
    scen.algorithms = algos
        .into_iter()
        .map(|algo| AlgoRun {
            algo,
            config: SolverConfig {
                gamma,
                schedule,
                zeta,
                max_prox_steps: budget,
                ..algo_default_config(algo)
            },
        })
        .collect();
    scen.reference_budget = scen.reference_budget.max(4 * budget);
    Ok(scen)
}

fn algo_default_config(algo: Algorithm) -> SolverConfig {
    let mut c = SolverConfig::default();
    c.test = match algo {
        Algorithm::Pg => proxident::solvers::AccelTest::None,
        Algorithm::Apg => proxident::solvers::AccelTest::AlwaysAccelerate,
        Algorithm::Mfista => proxident::solvers::AccelTest::Monotone,
        Algorithm::ProvisionalT1 => proxident::solvers::AccelTest::T1,
        Algorithm::ProvisionalT2 => proxident::solvers::AccelTest::T2,
    };
    c
}

fn out_dir(args: &RunArgs) -> PathBuf {
    args.out
        .clone()
        .or_else(|| std::env::var_os("PROXIDENT_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn execute(cmd: Command) -> Result<(), Error> {
    match cmd {
        Command::List => {
            println!("scenarios:");
            for name in scenario_names() {
                println!("  {name}  (default budget {})", default_budget(name));
            }
            println!("algorithms: pg apg mfista t1 t2");
            Ok(())
        }
        Command::Run(mut args) => {
            apply_config_file(&mut args)?;
            let scen = build_scenario(&args, false)?;
            let dir = out_dir(&args);
            let bundle = run_scenario(&scen)?;
            let paths = emit_csv(&bundle, &dir)?;
            if args.svg {
                emit_svg(&bundle, &dir)?;
            }
            for p in paths {
                println!("wrote {}", p.display());
            }
            Ok(())
        }
        Command::Compare(mut args) => {
            apply_config_file(&mut args)?;
            let scen = build_scenario(&args, true)?;
            let dir = out_dir(&args);
            let bundle = run_scenario(&scen)?;
            let mut paths = emit_csv(&bundle, &dir)?;
            if args.svg {
                paths.extend(emit_svg(&bundle, &dir)?);
            }
            for p in paths {
                println!("wrote {}", p.display());
            }
            Ok(())
        }
        Command::Experiment(mut args) => {
            // experiment = compare with plots always on
            apply_config_file(&mut args)?;
            let scen = build_scenario(&args, true)?;
            let dir = out_dir(&args);
            let bundle = run_scenario(&scen)?;
            let mut paths = emit_csv(&bundle, &dir)?;
            paths.extend(emit_svg(&bundle, &dir)?);
            for p in paths {
                println!("wrote {}", p.display());
            }
            Ok(())
        }
        Command::Plot(mut args) => {
            apply_config_file(&mut args)?;
            let scen = build_scenario(&args, true)?;
            let dir = out_dir(&args);
            let bundle = run_scenario(&scen)?;
            for p in emit_svg(&bundle, &dir)? {
                println!("wrote {}", p.display());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
