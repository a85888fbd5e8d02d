//! `disc`: check, solve, generate and benchmark discriminating-code
//! instances.
//!
//! Exit codes: 0 success, 1 usage or internal error, 2 infeasible instance,
//! 3 oracle budget exceeded.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use disc_core::codes::{self, DiscCheck};
use disc_core::error::Error as CoreError;
use disc_core::instance::{Coord, Instance, Instance1d, Instance2d};
use disc_core::oracle::{self, OracleBudget};
use disc_core::{cont2d, disc2d, edgecover, lp, ptas, reductions};

#[derive(Parser)]
#[command(
    name = "disc",
    about = "Geometric discriminating-code solvers",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report whether an instance is twin-free.
    Check {
        /// Instance JSON file.
        instance: PathBuf,
    },
    /// Solve an instance and emit a verified solution with a certificate.
    Solve(SolveArgs),
    /// Generate instances from CNF formulas or grid graphs.
    Gen(GenArgs),
    /// Run solvers over a directory of instances and emit a CSV.
    Bench(BenchArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Instance JSON file.
    instance: PathBuf,
    /// One of: exact, approx2, ptas, cont2d, disc2d.
    #[arg(long)]
    algo: String,
    /// Approximation parameter where applicable.
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    /// Local-search swap size for the continuous 2D solver.
    #[arg(long, default_value_t = 3)]
    swap: usize,
    /// For `ptas`: treat the 1D instance as continuous and synthesize the
    /// candidate unit intervals first.
    #[arg(long)]
    continuous: bool,
    /// Include the full certificate in the output JSON.
    #[arg(long)]
    certificate: bool,
    /// Append the tableau of every LP solved during this run to a file.
    #[arg(long, value_name = "PATH")]
    dump_lp: Option<PathBuf>,
    /// Output path (stdout when omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// DIMACS CNF input for the interval-gadget reduction.
    #[arg(long, value_name = "FILE", conflicts_with = "grid")]
    from_cnf: Option<PathBuf>,
    /// Grid-graph JSON input: `{"vertices": [[x,y],...]}`.
    #[arg(long, value_name = "FILE")]
    grid: Option<PathBuf>,
    /// With --grid: also emit the per-edge square set (discrete variant).
    #[arg(long)]
    discrete: bool,
    /// Output path (stdout when omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Directory of instance JSON files.
    #[arg(long)]
    suite: PathBuf,
    /// Comma-separated algorithms to run; default picks all applicable ones.
    #[arg(long, default_value = "auto")]
    algos: String,
    /// Recorded in the CSV; reruns with the same seed are byte-identical.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads for independent instances.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Include wall-clock milliseconds (breaks byte-identical reruns).
    #[arg(long)]
    timings: bool,
    /// Output CSV path (stdout when omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap would exit(2); keep 2 reserved for infeasibility
            let _ = e.print();
            std::process::exit(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    };
    std::process::exit(code);
}

fn exit_code_for(e: &CoreError) -> i32 {
    match e {
        CoreError::Infeasible { .. } => 2,
        CoreError::BudgetExceeded(_) => 3,
        CoreError::Input(_) | CoreError::Internal(_) => 1,
    }
}

fn run(cli: Cli) -> Result<i32, CoreError> {
    match cli.command {
        Command::Check { instance } => cmd_check(&instance),
        Command::Solve(args) => cmd_solve(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn read_instance(path: &Path) -> Result<Instance, CoreError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CoreError::Input(format!("{}: {e}", path.display())))?;
    let (inst, warnings) = Instance::from_json(&text)?;
    for w in warnings {
        eprintln!("warning: {}: {w}", path.display());
    }
    Ok(inst)
}

fn write_output(path: Option<&PathBuf>, text: &str) -> Result<(), CoreError> {
    match path {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| CoreError::Input(format!("{}: {e}", p.display())))
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn cmd_check(path: &Path) -> Result<i32, CoreError> {
    let inst = read_instance(path)?;
    match codes::check_twin_free(&inst) {
        DiscCheck::Valid => {
            println!("twin-free");
            Ok(0)
        }
        check => {
            println!("not twin-free: {}", check.witness().unwrap());
            Ok(2)
        }
    }
}

fn cmd_solve(args: SolveArgs) -> Result<i32, CoreError> {
    lp::set_dump_path(args.dump_lp.clone());
    let inst = read_instance(&args.instance)?;
    let out = solve_to_json(&inst, &args)?;
    lp::set_dump_path(None);
    write_output(
        args.output.as_ref(),
        &serde_json::to_string_pretty(&out).unwrap(),
    )?;
    Ok(0)
}

fn require_1d(inst: &Instance) -> Result<&Instance1d, CoreError> {
    match inst {
        Instance::OneD(i) => Ok(i),
        Instance::TwoD(_) => Err(CoreError::Input(
            "this algorithm needs a 1D instance".to_string(),
        )),
    }
}

fn require_2d(inst: &Instance) -> Result<&Instance2d, CoreError> {
    match inst {
        Instance::TwoD(i) => Ok(i),
        Instance::OneD(_) => Err(CoreError::Input(
            "this algorithm needs a 2D instance".to_string(),
        )),
    }
}

fn solve_to_json(inst: &Instance, args: &SolveArgs) -> Result<serde_json::Value, CoreError> {
    let algo = args.algo.as_str();
    match algo {
        "exact" => {
            if inst.n_objects() == 0 && inst.n_points() > 0 {
                return Err(CoreError::Input(
                    "exact search needs objects to choose from; use cont2d or \
                     ptas --continuous for continuous instances"
                        .to_string(),
                ));
            }
            let chosen = oracle::min_disc_code_exact(inst, &OracleBudget::from_env())?;
            codes::require_disc_code(inst, &chosen)?;
            Ok(json!({
                "format": 1,
                "algo": "exact",
                "size": chosen.len(),
                "chosen": chosen,
            }))
        }
        "approx2" => {
            let inst1 = require_1d(inst)?;
            let sol = edgecover::approx2(inst1)?;
            // the three certificate fields are part of the output contract
            Ok(json!({
                "format": 1,
                "algo": "approx2",
                "size": sol.final_size,
                "chosen": sol.chosen,
                "s_prime": sol.s_prime,
                "lemma3_bound": sol.lemma3_bound,
                "final_size": sol.final_size,
            }))
        }
        "ptas" => {
            let inst1 = require_1d(inst)?;
            if args.continuous {
                if !inst1.intervals.is_empty() {
                    return Err(CoreError::Input(
                        "--continuous expects an instance without intervals".to_string(),
                    ));
                }
                let discrete = ptas::continuous_to_discrete_1d(inst1.scale, &inst1.points);
                let sol = ptas::ptas_solve(&discrete, args.eps)?;
                let intervals: Vec<(Coord, Coord)> =
                    sol.chosen.iter().map(|&i| discrete.intervals[i]).collect();
                Ok(json!({
                    "format": 1,
                    "algo": "ptas",
                    "continuous": true,
                    "scale": discrete.scale,
                    "size": sol.final_size,
                    "intervals": intervals,
                    "path_weight": sol.path_weight,
                    "n_references": sol.n_references,
                }))
            } else {
                let sol = ptas::ptas_solve(inst1, args.eps)?;
                Ok(json!({
                    "format": 1,
                    "algo": "ptas",
                    "size": sol.final_size,
                    "chosen": sol.chosen,
                    "path_weight": sol.path_weight,
                    "n_references": sol.n_references,
                }))
            }
        }
        "cont2d" => {
            let inst2 = require_2d(inst)?;
            let sol =
                cont2d::continuous_disc_code(inst2.scale, &inst2.points, args.eps, args.swap)?;
            let cert = &sol.certificate;
            let ratio = cert
                .lp_lower_bound
                .filter(|&b| b > 0.0)
                .map(|b| cert.final_size as f64 / b);
            let mut out = json!({
                "format": 1,
                "algo": "cont2d",
                "scale": sol.work_scale,
                "size": cert.final_size,
                "centers": sol.centers,
            });
            if args.certificate {
                out["certificate"] = json!({
                    "lp_lower_bound": cert.lp_lower_bound,
                    "z1_objective": cert.z1_objective,
                    "sol_a": cert.sol_a,
                    "sol_b": cert.sol_b,
                    "stab_size": cert.stab_size,
                    "final_size": cert.final_size,
                    "used_fallback": cert.used_fallback,
                    "ratio_vs_lp": ratio,
                });
            }
            Ok(out)
        }
        "disc2d" => {
            let inst2 = require_2d(inst)?;
            let sol = disc2d::discrete_disc_code(inst2, args.eps)?;
            let cert = &sol.certificate;
            let mut out = json!({
                "format": 1,
                "algo": "disc2d",
                "size": cert.final_size.max(sol.chosen.len()),
                "chosen": sol.chosen,
            });
            if args.certificate {
                out["certificate"] = json!({
                    "lp_lower_bound": cert.lp_lower_bound,
                    "z1_objective": cert.z1_objective,
                    "line_sizes": cert.line_sizes,
                    "stab_size": cert.stab_size,
                    "final_size": cert.final_size,
                    "used_fallback": cert.used_fallback,
                });
            }
            Ok(out)
        }
        other => Err(CoreError::Input(format!(
            "unknown algorithm '{other}' (expected exact, approx2, ptas, cont2d, disc2d)"
        ))),
    }
}

fn cmd_gen(args: GenArgs) -> Result<i32, CoreError> {
    let out = match (&args.from_cnf, &args.grid) {
        (Some(cnf_path), None) => {
            let text = std::fs::read_to_string(cnf_path)
                .map_err(|e| CoreError::Input(format!("{}: {e}", cnf_path.display())))?;
            let formula = reductions::parse_cnf(&text)?;
            let (inst, _layout) = reductions::sat_to_1d(&formula)?;
            Instance::OneD(inst).to_json()
        }
        (None, Some(grid_path)) => {
            let text = std::fs::read_to_string(grid_path)
                .map_err(|e| CoreError::Input(format!("{}: {e}", grid_path.display())))?;
            let parsed: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| CoreError::Input(format!("grid JSON: {e}")))?;
            let vertices: Vec<(Coord, Coord)> = serde_json::from_value(parsed["vertices"].clone())
                .map_err(|e| CoreError::Input(format!("grid vertices: {e}")))?;
            let grid = reductions::GridGraph::new(vertices)?;
            let inst = reductions::grid_to_2d(&grid, args.discrete)?;
            Instance::TwoD(inst).to_json()
        }
        _ => {
            return Err(CoreError::Input(
                "use exactly one of --from-cnf or --grid".to_string(),
            ))
        }
    };
    write_output(args.output.as_ref(), &out)?;
    Ok(0)
}

// One bench row. `wall_ms` is filled only with --timings so that seeded
// reruns stay byte-identical.
struct RunRecord {
    instance: String,
    algo: String,
    status: String,
    size: Option<usize>,
    oracle: Option<usize>,
    ratio: Option<f64>,
    bound: Option<f64>,
    wall_ms: Option<u128>,
}

impl RunRecord {
    fn csv(&self, timings: bool, seed: u64) -> String {
        let opt = |v: &Option<usize>| v.map_or(String::new(), |x| x.to_string());
        let optf = |v: &Option<f64>| v.map_or(String::new(), |x| format!("{x:.6}"));
        let mut row = format!(
            "{},{},{},{},{},{},{}",
            self.instance,
            self.algo,
            seed,
            self.status,
            opt(&self.size),
            opt(&self.oracle),
            optf(&self.ratio),
        );
        row.push(',');
        row.push_str(&optf(&self.bound));
        if timings {
            row.push(',');
            row.push_str(&self.wall_ms.map_or(String::new(), |x| x.to_string()));
        }
        row
    }
}

fn applicable_algos(inst: &Instance) -> Vec<&'static str> {
    match inst {
        Instance::OneD(i) => {
            if i.is_unit() {
                vec!["exact", "approx2", "ptas"]
            } else {
                vec!["exact", "approx2"]
            }
        }
        Instance::TwoD(i) => {
            if i.squares.is_some() {
                vec!["exact", "disc2d"]
            } else {
                vec!["cont2d"]
            }
        }
    }
}

fn bench_one(inst: &Instance, name: &str, algo: &str, eps: f64) -> RunRecord {
    let start = Instant::now();
    let budget = OracleBudget::from_env();
    let mut record = RunRecord {
        instance: name.to_string(),
        algo: algo.to_string(),
        status: String::new(),
        size: None,
        oracle: None,
        ratio: None,
        bound: None,
        wall_ms: None,
    };
    let size = match run_algo(inst, algo, eps) {
        Ok(size) => size,
        Err(e) => {
            record.status = match e {
                CoreError::Infeasible { .. } => "infeasible".to_string(),
                CoreError::BudgetExceeded(_) => "budget-exceeded".to_string(),
                _ => "error".to_string(),
            };
            record.wall_ms = Some(start.elapsed().as_millis());
            return record;
        }
    };
    record.size = Some(size);
    record.status = "valid".to_string();
    let oracle_size: Option<usize> = match inst {
        Instance::TwoD(i) if i.squares.is_none() => {
            oracle::min_stab_exact_continuous(i.scale, &i.points, &budget)
                .ok()
                .map(|s| s.centers.len())
        }
        _ => oracle::min_disc_code_exact(inst, &budget)
            .ok()
            .map(|s| s.len()),
    };
    if let Some(opt) = oracle_size {
        record.oracle = Some(opt);
        let opt_f = opt.max(1) as f64;
        record.ratio = Some(size as f64 / opt_f);
        record.bound = Some(match algo {
            "exact" => 1.0,
            "approx2" => 2.0,
            "ptas" => 1.0 + eps,
            "cont2d" => 4.0 + eps + 1.0 / opt_f,
            "disc2d" => 32.0 + eps + 1.0 / opt_f,
            _ => f64::INFINITY,
        });
        if record.ratio > record.bound {
            record.status = "flagged".to_string();
        }
    }
    record.wall_ms = Some(start.elapsed().as_millis());
    record
}

fn run_algo(inst: &Instance, algo: &str, eps: f64) -> Result<usize, CoreError> {
    match (inst, algo) {
        (_, "exact") => {
            let sol = oracle::min_disc_code_exact(inst, &OracleBudget::from_env())?;
            codes::require_disc_code(inst, &sol)?;
            Ok(sol.len())
        }
        (Instance::OneD(i), "approx2") => Ok(edgecover::approx2(i)?.final_size),
        (Instance::OneD(i), "ptas") => Ok(ptas::ptas_solve(i, eps)?.final_size),
        (Instance::TwoD(i), "cont2d") => {
            Ok(cont2d::continuous_disc_code(i.scale, &i.points, eps, 3)?
                .certificate
                .final_size)
        }
        (Instance::TwoD(i), "disc2d") => Ok(disc2d::discrete_disc_code(i, eps)?.chosen.len()),
        _ => Err(CoreError::Input(format!(
            "algorithm '{algo}' does not apply to this instance"
        ))),
    }
}

fn cmd_bench(args: BenchArgs) -> Result<i32, CoreError> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(&args.suite)
        .map_err(|e| CoreError::Input(format!("{}: {e}", args.suite.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    files.sort();
    let mut tasks: Vec<(PathBuf, String)> = Vec::new();
    for path in &files {
        let inst = match read_instance(path) {
            Ok(i) => i,
            Err(e) => {
                eprintln!("skipping {}: {e}", path.display());
                continue;
            }
        };
        let algos: Vec<String> = if args.algos == "auto" {
            applicable_algos(&inst)
                .iter()
                .map(|s| s.to_string())
                .collect()
        } else {
            args.algos
                .split(',')
                .map(|s| s.trim().to_string())
                .collect()
        };
        for algo in algos {
            tasks.push((path.clone(), algo));
        }
    }

    let jobs = args.jobs.max(1);
    let mut records: Vec<Option<RunRecord>> = Vec::new();
    records.resize_with(tasks.len(), || None);
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots: Vec<std::sync::Mutex<Option<RunRecord>>> = (0..tasks.len())
        .map(|_| std::sync::Mutex::new(None))
        .collect();
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let t = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                if t >= tasks.len() {
                    break;
                }
                let (path, algo) = &tasks[t];
                let name = path
                    .file_name()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default();
                let record = match read_instance(path) {
                    Ok(inst) => bench_one(&inst, &name, algo, 0.5),
                    Err(e) => RunRecord {
                        instance: name,
                        algo: algo.clone(),
                        status: format!("read-error: {e}").replace(',', ";"),
                        size: None,
                        oracle: None,
                        ratio: None,
                        bound: None,
                        wall_ms: None,
                    },
                };
                *slots[t].lock().unwrap() = Some(record);
            });
        }
    });
    for (i, slot) in slots.into_iter().enumerate() {
        records[i] = slot.into_inner().unwrap();
    }

    let mut csv = String::from("instance,algo,seed,status,size,oracle,ratio,bound");
    if args.timings {
        csv.push_str(",wall_ms");
    }
    csv.push('\n');
    for record in records.into_iter().flatten() {
        csv.push_str(&record.csv(args.timings, args.seed));
        csv.push('\n');
    }
    write_output(args.output.as_ref(), csv.trim_end())?;
    Ok(0)
}
