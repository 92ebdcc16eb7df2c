//! `novflow` — command-line front end for the novflow-core pipelines.
//!
//! Subcommands: homology, supp, cupbound, flow, zeros, cycles, verdict.
//! All structured output is JSON with sorted keys (byte-identical for
//! identical configurations); trajectories additionally go to CSV.
//! Exit codes: 0 clean, 2 validation error, 3 numerical failure.

use clap::{Args, Parser, Subcommand};
use novflow_core::cat::{
    apply_rules, homoclinic_prediction, parse_descriptor_json, CatError, ComplexContext, Verdict,
};
use novflow_core::complex::{
    cat_cup_lower_bound, parse_complex_json, supp, twisted_homology, CellComplex, ComplexError,
    CupError, HomologyError, IntegerCocycle,
};
use novflow_core::flow::{
    check_hypotheses, detect_heteroclinics, find_homoclinic_cycles, find_zeros, integrate_flow,
    lyapunov_box, par_map, BoxOptions, Classification, DetectOptions, Direction, FlowError,
    IntegrateOptions, LyapunovBox, Scenario, Trajectory, ZeroPoint, ZeroReport,
};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "novflow", version, about = "Novikov-type invariants and gradient-flow analysis")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Integrator absolute tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol_abs: f64,
    /// Integrator relative tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol_rel: f64,
    /// Integration time horizon.
    #[arg(long, global = true, default_value_t = 1e4)]
    t_max: f64,
    /// Abort orbits once the accumulated integral drops below −N_floor
    /// (default: 3×max|period| + 10).
    #[arg(long, global = true)]
    n_floor: Option<f64>,
    /// Worker threads for independent orbit batches.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Directory for report files (stdout always gets the JSON too).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Random seed for all sampling.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct ZeroArgs {
    /// Newton seeds per axis.
    #[arg(long, default_value_t = 24)]
    grid_density: usize,
    #[arg(long, default_value_t = 1e-9)]
    zero_tol: f64,
    #[arg(long, default_value_t = 1e-3)]
    merge_radius: f64,
}

#[derive(Args)]
struct HypArgs {
    /// Radius of the balls excluded around zeros for the inf estimate.
    #[arg(long, default_value_t = 0.1)]
    eps_excl: f64,
    #[arg(long, default_value_t = 4096)]
    sample_budget: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Twisted homology of every degree of a complex file, plus Supp.
    Homology {
        complex: PathBuf,
        /// Restrict to one degree.
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Support of the twisted homology (roots of the torsion order).
    Supp { complex: PathBuf },
    /// Cup-product lower bound for cat(X,ω) from a simplicial complex.
    Cupbound { complex: PathBuf },
    /// Integrate one negative-gradient orbit; emits summary + CSV.
    Flow {
        /// Built-in scenario name or a scenario JSON path.
        scenario: String,
        /// Initial point, comma-separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x0: Vec<f64>,
    },
    /// Locate and classify the zeros of ω.
    Zeros {
        scenario: String,
        #[command(flatten)]
        zeros: ZeroArgs,
    },
    /// Full pipeline: zeros → Lyapunov boxes → heteroclinic edges →
    /// homoclinic cycles → hypothesis check.
    Cycles {
        scenario: String,
        #[command(flatten)]
        zeros: ZeroArgs,
        #[command(flatten)]
        hyp: HypArgs,
    },
    /// Join the cat-bound prediction with the cycle detector.
    Verdict {
        scenario: String,
        /// Space descriptor JSON path.
        #[arg(long)]
        descriptor: PathBuf,
        /// Complex files resolvable from descriptor refs (name = file stem).
        #[arg(long)]
        complex: Vec<PathBuf>,
        #[command(flatten)]
        zeros: ZeroArgs,
        #[command(flatten)]
        hyp: HypArgs,
    },
}

struct AppError {
    code: u8,
    msg: String,
}

impl AppError {
    fn validation(msg: impl std::fmt::Display) -> Self {
        Self { code: 2, msg: msg.to_string() }
    }
    fn numerical(msg: impl std::fmt::Display) -> Self {
        Self { code: 3, msg: msg.to_string() }
    }
}

impl From<FlowError> for AppError {
    fn from(e: FlowError) -> Self {
        match e {
            FlowError::NoZero(_)
            | FlowError::NoBoxAtResolution(_)
            | FlowError::SampledViolation(_) => AppError::numerical(e),
            _ => AppError::validation(e),
        }
    }
}

impl From<ComplexError> for AppError {
    fn from(e: ComplexError) -> Self {
        AppError::validation(e)
    }
}
impl From<HomologyError> for AppError {
    fn from(e: HomologyError) -> Self {
        AppError::validation(e)
    }
}
impl From<CupError> for AppError {
    fn from(e: CupError) -> Self {
        AppError::validation(e)
    }
}
impl From<CatError> for AppError {
    fn from(e: CatError) -> Self {
        AppError::validation(e)
    }
}
impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::validation(e)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("NOVFLOW_LOG")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, AppError> {
    let report = match &cli.cmd {
        Cmd::Homology { complex, degree } => cmd_homology(complex, *degree)?,
        Cmd::Supp { complex } => cmd_supp(complex)?,
        Cmd::Cupbound { complex } => cmd_cupbound(complex)?,
        Cmd::Flow { scenario, x0 } => cmd_flow(cli, scenario, x0)?,
        Cmd::Zeros { scenario, zeros } => cmd_zeros(cli, scenario, zeros)?,
        Cmd::Cycles { scenario, zeros, hyp } => cmd_cycles(cli, scenario, zeros, hyp)?,
        Cmd::Verdict { scenario, descriptor, complex, zeros, hyp } => {
            cmd_verdict(cli, scenario, descriptor, complex, zeros, hyp)?
        }
    };
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    println!("{text}");
    if let Some(dir) = &cli.out {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.json"), format!("{text}\n"))?;
    }
    let numerical_failure =
        report["trajectory"]["termination"] == json!("step-underflow");
    Ok(if numerical_failure {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    })
}

// ---------------------------------------------------------------- loading

fn load_complex(path: &Path) -> Result<(CellComplex, IntegerCocycle), AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::validation(format!("{}: {e}", path.display())))?;
    Ok(parse_complex_json(&text)?)
}

fn load_scenario(arg: &str, seed: u64) -> Result<Scenario, AppError> {
    let scenario = match Scenario::builtin(arg) {
        Some(s) => s,
        None => {
            let text = std::fs::read_to_string(arg)
                .map_err(|e| AppError::validation(format!("{arg}: {e}")))?;
            novflow_core::flow::parse_scenario_json(&text)?
        }
    };
    scenario.validate(seed)?;
    Ok(scenario)
}

fn tolerance_json(cli: &Cli) -> Value {
    json!({
        "tol_abs": cli.tol_abs,
        "tol_rel": cli.tol_rel,
        "t_max": cli.t_max,
        "n_floor": cli.n_floor,
        "seed": cli.seed,
    })
}

// --------------------------------------------------------------- algebra

fn cmd_homology(path: &Path, degree: Option<usize>) -> Result<Value, AppError> {
    let (x, xi) = load_complex(path)?;
    let top = x.dimension();
    let degrees: Vec<usize> = match degree {
        Some(d) => vec![d],
        None => (0..=top).collect(),
    };
    let mut per_degree = serde_json::Map::new();
    for d in &degrees {
        let h = twisted_homology(&x, &xi, *d)?;
        per_degree.insert(d.to_string(), serde_json::to_value(&h).unwrap());
    }
    let supp_set = supp(&x, &xi)?;
    Ok(json!({
        "complex": path.display().to_string(),
        "cocycle": xi.values,
        "homology": per_degree,
        "supp": supp_set,
    }))
}

fn cmd_supp(path: &Path) -> Result<Value, AppError> {
    let (x, xi) = load_complex(path)?;
    let supp_set = supp(&x, &xi)?;
    Ok(json!({
        "complex": path.display().to_string(),
        "cocycle": xi.values,
        "supp": supp_set,
    }))
}

fn cmd_cupbound(path: &Path) -> Result<Value, AppError> {
    let (x, xi) = load_complex(path)?;
    let bound = cat_cup_lower_bound(&x, &xi)?;
    Ok(json!({
        "complex": path.display().to_string(),
        "cocycle": xi.values,
        "cat_lower_bound": bound,
    }))
}

// ------------------------------------------------------------------ flow

fn integrate_options(cli: &Cli) -> IntegrateOptions {
    IntegrateOptions {
        t_max: cli.t_max,
        tol_abs: cli.tol_abs,
        tol_rel: cli.tol_rel,
        ..IntegrateOptions::default()
    }
}

fn trajectory_json(t: &Trajectory) -> Value {
    json!({
        "termination": t.termination,
        "final_time": t.final_time,
        "final_position": t.final_position,
        "final_integral": t.final_integral,
        "integral_magnitude": t.final_integral.abs(),
        "steps_accepted": t.steps_accepted,
        "steps_rejected": t.steps_rejected,
    })
}

fn write_trajectory_csv(dir: &Path, name: &str, t: &Trajectory) -> Result<(), AppError> {
    std::fs::create_dir_all(dir)?;
    let dim = t.final_position.len();
    let mut csv = String::from("t");
    for i in 1..=dim {
        csv.push_str(&format!(",x{i}"));
    }
    csv.push_str(",integral\n");
    for k in 0..t.times.len() {
        csv.push_str(&format!("{}", t.times[k]));
        for v in &t.positions[k] {
            csv.push_str(&format!(",{v}"));
        }
        csv.push_str(&format!(",{}\n", t.integrals[k]));
    }
    std::fs::write(dir.join(name), csv)?;
    Ok(())
}

fn cmd_flow(cli: &Cli, scenario: &str, x0: &[f64]) -> Result<Value, AppError> {
    let s = load_scenario(scenario, cli.seed)?;
    if x0.len() != s.dim {
        return Err(AppError::validation(format!(
            "--x0 has {} coordinates, scenario `{}` has dimension {}",
            x0.len(),
            s.name,
            s.dim
        )));
    }
    log::info!("integrating `{}` from {:?}", s.name, x0);
    let opts = integrate_options(cli);
    let t = integrate_flow(&s, x0, Direction::Forward, &opts)?;
    if let Some(dir) = &cli.out {
        write_trajectory_csv(dir, "trajectory.csv", &t)?;
    }
    Ok(json!({
        "scenario": s.name,
        "x0": x0,
        "tolerances": tolerance_json(cli),
        "trajectory": trajectory_json(&t),
    }))
}

fn zero_json(z: &ZeroPoint) -> Value {
    let (kind, unstable) = match z.classification {
        Classification::Hyperbolic { unstable } => ("hyperbolic", Some(unstable)),
        Classification::Degenerate => ("degenerate", None),
    };
    json!({
        "position": z.position,
        "classification": kind,
        "unstable_dimension": unstable,
        "unstable_dirs": z.unstable_dirs,
    })
}

fn compute_zeros(s: &Scenario, args: &ZeroArgs) -> Result<ZeroReport, AppError> {
    Ok(find_zeros(s, args.grid_density, args.zero_tol, args.merge_radius)?)
}

fn cmd_zeros(cli: &Cli, scenario: &str, args: &ZeroArgs) -> Result<Value, AppError> {
    let s = load_scenario(scenario, cli.seed)?;
    let report = compute_zeros(&s, args)?;
    Ok(json!({
        "scenario": s.name,
        "tolerances": tolerance_json(cli),
        "zero_tol": args.zero_tol,
        "merge_radius": args.merge_radius,
        "zeros": report.zeros.iter().map(zero_json).collect::<Vec<_>>(),
        "warnings": report.warnings,
    }))
}

struct CyclesOutput {
    value: Value,
    zero_count: usize,
    cycles_found: usize,
    hypothesis: novflow_core::flow::HypothesisReport,
}

fn run_cycles(
    cli: &Cli,
    s: &Scenario,
    zero_args: &ZeroArgs,
    hyp_args: &HypArgs,
) -> Result<CyclesOutput, AppError> {
    let zero_report = compute_zeros(s, zero_args)?;
    let zeros = &zero_report.zeros;
    log::info!("found {} zeros", zeros.len());

    let box_opts = BoxOptions {
        seed: cli.seed,
        tol_abs: cli.tol_abs,
        tol_rel: cli.tol_rel,
        ..BoxOptions::default()
    };
    let boxes: Vec<LyapunovBox> = par_map(
        cli.threads,
        (0..zeros.len()).collect::<Vec<_>>(),
        |i| lyapunov_box(s, zeros, i, &box_opts),
    )
    .into_iter()
    .collect::<Result<_, _>>()?;

    let mut det_opts = DetectOptions::for_scenario(s);
    det_opts.tol_abs = cli.tol_abs;
    det_opts.tol_rel = cli.tol_rel;
    det_opts.t_max = cli.t_max;
    if let Some(n) = cli.n_floor {
        det_opts.n_floor = n;
    }
    let detection = detect_heteroclinics(s, zeros, &boxes, &det_opts)?;
    let pairs: Vec<(usize, usize)> = detection.edges.iter().map(|e| (e.source, e.target)).collect();
    let cycles = find_homoclinic_cycles(&pairs);
    let hyp = check_hypotheses(s, zeros, hyp_args.eps_excl, hyp_args.sample_budget, cli.seed)?;

    let value = json!({
        "scenario": s.name,
        "tolerances": tolerance_json(cli),
        "n_floor": det_opts.n_floor,
        "zeros": zeros.iter().map(zero_json).collect::<Vec<_>>(),
        "zero_warnings": zero_report.warnings,
        "boxes": boxes.iter().map(|b| json!({
            "zero_index": b.zero_index,
            "center": b.center,
            "delta": b.delta,
            "epsilon": b.epsilon,
        })).collect::<Vec<_>>(),
        "edges": detection.edges.iter().map(|e| json!({
            "source": e.source,
            "target": e.target,
            "seed": e.seed,
            "integral_drop": e.integral_drop,
            "orbit": trajectory_json(&e.orbit),
        })).collect::<Vec<_>>(),
        "inconclusive": detection.inconclusive.iter().map(|o| json!({
            "source": o.source,
            "seed": o.seed,
            "termination": o.termination,
            "final_integral": o.final_integral,
        })).collect::<Vec<_>>(),
        "cycles": cycles.iter().map(|c| json!({
            "edge_indices": c.edge_indices,
            "zeros": c.zeros,
            "homoclinic_orbit": c.homoclinic_orbit,
        })).collect::<Vec<_>>(),
        "hypothesis": &hyp,
    });
    Ok(CyclesOutput {
        value,
        zero_count: zeros.len(),
        cycles_found: cycles.len(),
        hypothesis: hyp,
    })
}

fn cmd_cycles(
    cli: &Cli,
    scenario: &str,
    zero_args: &ZeroArgs,
    hyp_args: &HypArgs,
) -> Result<Value, AppError> {
    let s = load_scenario(scenario, cli.seed)?;
    Ok(run_cycles(cli, &s, zero_args, hyp_args)?.value)
}

// ---------------------------------------------------------------- verdict

fn cmd_verdict(
    cli: &Cli,
    scenario: &str,
    descriptor: &Path,
    complexes: &[PathBuf],
    zero_args: &ZeroArgs,
    hyp_args: &HypArgs,
) -> Result<Value, AppError> {
    let s = load_scenario(scenario, cli.seed)?;
    let text = std::fs::read_to_string(descriptor)
        .map_err(|e| AppError::validation(format!("{}: {e}", descriptor.display())))?;
    let desc = parse_descriptor_json(&text)?;
    let mut ctx = ComplexContext::new();
    for path in complexes {
        let name = path
            .file_stem()
            .and_then(|n| n.to_str())
            .ok_or_else(|| AppError::validation("complex path has no stem"))?
            .to_string();
        ctx.insert(name, load_complex(path)?);
    }
    let bound = apply_rules(&desc, &ctx)?;

    let cycles = run_cycles(cli, &s, zero_args, hyp_args)?;
    let prediction = homoclinic_prediction(&bound, cycles.zero_count, &cycles.hypothesis);

    let mut notes: Vec<String> = Vec::new();
    if prediction.verdict == Verdict::Predicted && cycles.cycles_found == 0 {
        notes.push("prediction unmet at current resolution".into());
    }
    if !cycles.hypothesis.positive {
        notes.push("gradient hypotheses not verified; prediction is conditional".into());
    }

    Ok(json!({
        "scenario": s.name,
        "descriptor": descriptor.display().to_string(),
        "tolerances": tolerance_json(cli),
        "cat_bound": bound,
        "prediction": prediction,
        "detector": cycles.value,
        "notes": notes,
    }))
}
