//! Command-line front end.
//!
//! Every command prints one machine-readable `summary:` line on stdout
//! followed by optional prose. Solver commands also write a JSON run record
//! on stderr. Exit codes: 0 success, 1 a checked artifact is invalid, 2
//! budget exhausted, 3 infeasible or no solution within the horizon, 4 bad
//! input.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::model::io::{instance_from_json, instance_to_json, plan_from_json, plan_to_json};
use crate::model::{validate_plan, CostVector, MppInstance, Objective, Plan, VertexId};
use crate::pareto::{gen_cycle_tradeoff, gen_npuzzle, gen_twopath_tradeoff, CycleFamilyParams, TwoPathFamilyParams};
use crate::reduce::{
    apply_two_groups, reduce_to_m3pp, reduce_to_mmd, reduce_to_mtat, reduce_to_mtd, synthesize_witness_distance,
    synthesize_witness_time, ReductionOutput, Role, Target,
};
use crate::sat3::Sat3Instance;
use crate::search::{pareto_front, solve, Budget, SearchError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_BUDGET: u8 = 2;
pub const EXIT_NO_SOLUTION: u8 = 3;
pub const EXIT_INPUT: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "mpp", version, about = "Optimal multi-robot path planning on graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve an instance optimally for one objective.
    Solve {
        instance: PathBuf,
        #[arg(long)]
        objective: Objective,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Where to write the plan (stdout prose only if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compile a DIMACS 3SAT formula into an MPP instance plus metadata.
    Reduce {
        cnf: PathBuf,
        #[arg(long)]
        target: Target,
        /// Replace individual goals by variable and clause groups (mtat, m3pp).
        #[arg(long)]
        two_groups: bool,
        /// Instance output path; metadata goes next to it as `<out>.meta.json`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Build the witness plan of a reduction from a satisfying assignment.
    Witness {
        metadata: PathBuf,
        /// DIMACS-style literals, e.g. "1 -2 3 -4".
        #[arg(long, conflicts_with = "auto", required_unless_present = "auto")]
        assignment: Option<String>,
        /// Find an assignment by brute force.
        #[arg(long)]
        auto: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a plan against an instance and report its costs.
    Validate { instance: PathBuf, plan: PathBuf },
    /// Enumerate the Pareto front of two objectives.
    Pareto {
        /// Instance file; omit when using --family.
        instance: Option<PathBuf>,
        #[arg(long, requires = "param", conflicts_with = "instance")]
        family: Option<Family>,
        #[arg(long)]
        param: Option<usize>,
        /// Exactly two objectives, first one listed first in each pair.
        #[arg(long, num_args = 2, required = true)]
        objective: Vec<Objective>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Generate an instance of a built-in family.
    Gen {
        family: Family,
        param: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Npuzzle,
    Cycle,
    Twopath,
}

#[derive(Debug, Clone, Args)]
pub struct BudgetArgs {
    /// Longest plan considered, in steps (default |V|^3).
    #[arg(long)]
    horizon: Option<usize>,
    /// Maximum number of expanded search states.
    #[arg(long)]
    states: Option<usize>,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    time: Option<u64>,
}

impl BudgetArgs {
    fn budget(&self, instance: &MppInstance) -> Budget {
        let mut b = Budget::for_instance(instance, 1);
        if let Some(h) = self.horizon {
            b = b.with_horizon(h);
        }
        if let Some(s) = self.states {
            b = b.with_states(s);
        }
        if let Some(t) = self.time {
            b = b.with_time(Duration::from_secs(t));
        }
        b
    }
}

/// Sidecar written by `reduce` so that `witness` can rebuild the reduction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionMetadata {
    #[serde(rename = "K")]
    pub k: usize,
    pub target: Target,
    pub two_groups: bool,
    pub dimacs: String,
    pub name_map: BTreeMap<String, VertexId>,
    pub role_map: Vec<Role>,
}

impl ReductionMetadata {
    fn new(red: &ReductionOutput) -> Self {
        ReductionMetadata {
            k: red.k,
            target: red.target,
            two_groups: red.grouped,
            dimacs: red.sat.to_dimacs(),
            name_map: red.name_map.clone(),
            role_map: red.role_map.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
struct RunRecord<'a> {
    command: &'a str,
    inputs: Vec<InputDigest>,
    objectives: Vec<Objective>,
    budget: BudgetRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    costs: Option<CostVector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    front: Option<Vec<(usize, usize)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    wall_time_ms: u128,
}

#[derive(Debug, Serialize)]
struct InputDigest {
    path: String,
    sha256: String,
}

#[derive(Debug, Serialize)]
struct BudgetRecord {
    horizon: usize,
    states: usize,
    time_secs: u64,
}

impl From<&Budget> for BudgetRecord {
    fn from(b: &Budget) -> Self {
        BudgetRecord {
            horizon: b.horizon_limit,
            states: b.state_limit,
            time_secs: b.time_limit.as_secs(),
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }

    fn search(e: &SearchError) -> Self {
        let code = match e {
            SearchError::BudgetExhausted { .. } => EXIT_BUDGET,
            SearchError::NoSolutionWithinHorizon { .. } | SearchError::Infeasible => EXIT_NO_SOLUTION,
            SearchError::TooManyRobots(_) | SearchError::TooManyVertices(_) => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<(), Failure>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { EXIT_OK });
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::from(EXIT_OK),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn execute(command: Command) -> Outcome {
    match command {
        Command::Solve {
            instance,
            objective,
            budget,
            out,
        } => cmd_solve(&instance, objective, &budget, out.as_deref()),
        Command::Reduce {
            cnf,
            target,
            two_groups,
            out,
        } => cmd_reduce(&cnf, target, two_groups, &out),
        Command::Witness {
            metadata,
            assignment,
            auto,
            out,
        } => cmd_witness(&metadata, assignment.as_deref(), auto, out.as_deref()),
        Command::Validate { instance, plan } => cmd_validate(&instance, &plan),
        Command::Pareto {
            instance,
            family,
            param,
            objective,
            budget,
        } => cmd_pareto(instance.as_deref(), family.zip(param), &objective, &budget),
        Command::Gen { family, param, out } => cmd_gen(family, param, out.as_deref()),
    }
}

fn read(path: &Path) -> Result<(String, InputDigest), Failure> {
    let bytes = fs::read(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    let digest = InputDigest {
        path: path.display().to_string(),
        sha256: hex::encode(Sha256::digest(&bytes)),
    };
    let text = String::from_utf8(bytes).map_err(|_| Failure::input(format!("{} is not UTF-8", path.display())))?;
    Ok((text, digest))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<(MppInstance, InputDigest), Failure> {
    let (text, digest) = read(path)?;
    let instance = instance_from_json(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Ok((instance, digest))
}

fn emit_record(record: &RunRecord<'_>) {
    eprintln!("{}", serde_json::to_string(record).expect("run record serializes"));
}

fn cost_fields(c: &CostVector) -> String {
    format!(
        "total_arrival={} makespan={} total_distance={} max_distance={}",
        c.total_arrival_time, c.makespan, c.total_distance, c.max_distance
    )
}

fn cmd_solve(path: &Path, objective: Objective, args: &BudgetArgs, out: Option<&Path>) -> Outcome {
    let (instance, digest) = load_instance(path)?;
    let budget = args.budget(&instance);
    let started = Instant::now();
    let result = solve(&instance, objective, &budget);
    let mut record = RunRecord {
        command: "solve",
        inputs: vec![digest],
        objectives: vec![objective],
        budget: BudgetRecord::from(&budget),
        costs: None,
        front: None,
        error: None,
        wall_time_ms: started.elapsed().as_millis(),
    };
    match result {
        Ok(solution) => {
            record.costs = Some(solution.costs);
            emit_record(&record);
            if let Some(out) = out {
                write(out, &plan_to_json(&solution.plan))?;
            }
            println!(
                "summary: objective={} value={} {}",
                objective.name(),
                solution.value(),
                cost_fields(&solution.costs)
            );
            println!(
                "optimal {} plan over {} steps after expanding {} states",
                objective.name(),
                solution.plan.horizon(),
                solution.expanded_states
            );
            Ok(())
        }
        Err(e) => {
            record.error = Some(e.to_string());
            emit_record(&record);
            println!("summary: objective={} status={}", objective.name(), status(&e));
            Err(Failure::search(&e))
        }
    }
}

fn status(e: &SearchError) -> &'static str {
    match e {
        SearchError::BudgetExhausted { .. } => "budget-exhausted",
        SearchError::NoSolutionWithinHorizon { .. } => "no-solution-within-horizon",
        SearchError::Infeasible => "infeasible",
        SearchError::TooManyRobots(_) | SearchError::TooManyVertices(_) => "unsupported",
    }
}

fn build_reduction(sat: &Sat3Instance, target: Target, two_groups: bool) -> Result<ReductionOutput, Failure> {
    let red = match target {
        Target::Mtat => reduce_to_mtat(sat),
        Target::M3pp => reduce_to_m3pp(sat),
        Target::Mtd => reduce_to_mtd(sat),
        Target::Mmd => reduce_to_mmd(sat),
    };
    if two_groups {
        apply_two_groups(&red).map_err(|e| Failure::input(e.to_string()))
    } else {
        Ok(red)
    }
}

fn metadata_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

fn cmd_reduce(cnf: &Path, target: Target, two_groups: bool, out: &Path) -> Outcome {
    let (text, _) = read(cnf)?;
    let sat = Sat3Instance::parse_dimacs(&text).map_err(|e| Failure::input(format!("{}: {e}", cnf.display())))?;
    let red = build_reduction(&sat, target, two_groups)?;
    write(out, &instance_to_json(&red.instance))?;
    let meta = serde_json::to_string_pretty(&ReductionMetadata::new(&red)).expect("metadata serializes");
    let meta_path = metadata_path(out);
    write(&meta_path, &meta)?;
    println!(
        "summary: target={} K={} robots={} vertices={} edges={} grouped={}",
        target,
        red.k,
        red.instance.robot_count(),
        red.instance.graph().vertex_count(),
        red.instance.graph().edge_count(),
        red.grouped
    );
    println!("wrote {} and {}", out.display(), meta_path.display());
    Ok(())
}

fn parse_assignment(text: &str, vars: usize) -> Result<Vec<bool>, Failure> {
    let mut values: Vec<Option<bool>> = vec![None; vars];
    for token in text.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
        let lit: i64 = token
            .parse()
            .map_err(|_| Failure::input(format!("bad literal `{token}` in assignment")))?;
        let var = lit.unsigned_abs() as usize;
        if var == 0 || var > vars {
            return Err(Failure::input(format!("variable {var} out of range 1..={vars}")));
        }
        values[var - 1] = Some(lit > 0);
    }
    values
        .iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| Failure::input(format!("assignment does not set variable {}", i + 1))))
        .collect()
}

fn cmd_witness(meta_path: &Path, assignment: Option<&str>, auto: bool, out: Option<&Path>) -> Outcome {
    let (text, _) = read(meta_path)?;
    let meta: ReductionMetadata =
        serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", meta_path.display())))?;
    let sat = Sat3Instance::parse_dimacs(&meta.dimacs).map_err(|e| Failure::input(e.to_string()))?;
    let red = build_reduction(&sat, meta.target, meta.two_groups)?;
    if red.k != meta.k || red.name_map != meta.name_map {
        return Err(Failure::input("metadata does not match the rebuilt reduction"));
    }
    let values = if auto {
        match sat.solve_brute_force().map_err(|e| Failure::input(e.to_string()))? {
            Some(a) => a,
            None => return Err(Failure::input("formula is unsatisfiable")),
        }
    } else {
        parse_assignment(assignment.unwrap_or_default(), sat.var_count())?
    };
    let plan = match meta.target {
        Target::Mtat | Target::M3pp => synthesize_witness_time(&red, &values),
        Target::Mtd | Target::Mmd => synthesize_witness_distance(&red, &values),
    }
    .map_err(|e| Failure::input(e.to_string()))?;
    let costs = crate::model::evaluate_costs(&red.instance, &plan).map_err(|e| Failure::invalid(e.to_string()))?;
    if let Some(out) = out {
        write(out, &plan_to_json(&plan))?;
    }
    let cost = costs.get(meta.target.objective());
    println!(
        "summary: target={} K={} cost={} {}",
        meta.target,
        red.k,
        cost,
        cost_fields(&costs)
    );
    let literals: Vec<String> = values
        .iter()
        .enumerate()
        .map(|(i, &v)| if v { format!("{}", i + 1) } else { format!("-{}", i + 1) })
        .collect();
    println!("witness for assignment {}", literals.join(" "));
    if cost > red.k {
        println!("cost exceeds K: shortcuts between clause gadgets make K unattainable for this formula");
    }
    Ok(())
}

fn cmd_validate(instance_path: &Path, plan_path: &Path) -> Outcome {
    let (instance, _) = load_instance(instance_path)?;
    let (text, _) = read(plan_path)?;
    let plan: Plan = plan_from_json(&text).map_err(|e| Failure::input(format!("{}: {e}", plan_path.display())))?;
    let report = validate_plan(&instance, &plan).map_err(|e| Failure::input(e.to_string()))?;
    if report.is_ok() {
        let costs = crate::model::evaluate_costs(&instance, &plan).expect("validated plan has costs");
        println!("summary: valid=true {}", cost_fields(&costs));
        Ok(())
    } else {
        println!("summary: valid=false violations={}", report.violations.len());
        for v in &report.violations {
            println!("{v}");
        }
        Err(Failure::invalid("plan is infeasible"))
    }
}

fn generate(family: Family, param: usize) -> Result<MppInstance, Failure> {
    match family {
        Family::Npuzzle => gen_npuzzle(param),
        Family::Cycle => gen_cycle_tradeoff(CycleFamilyParams { x: param }),
        Family::Twopath => gen_twopath_tradeoff(TwoPathFamilyParams { stretch: param }),
    }
    .map_err(|e| Failure::input(e.to_string()))
}

fn cmd_pareto(
    path: Option<&Path>,
    family: Option<(Family, usize)>,
    objectives: &[Objective],
    args: &BudgetArgs,
) -> Outcome {
    let (instance, inputs) = match (path, family) {
        (Some(p), _) => {
            let (inst, d) = load_instance(p)?;
            (inst, vec![d])
        }
        (None, Some((f, p))) => (generate(f, p)?, Vec::new()),
        (None, None) => return Err(Failure::input("give an instance file or --family with --param")),
    };
    let pair = (objectives[0], objectives[1]);
    if pair.0 == pair.1 {
        return Err(Failure::input("the two objectives must differ"));
    }
    let budget = args.budget(&instance);
    let started = Instant::now();
    let result = pareto_front(&instance, pair, &budget);
    let mut record = RunRecord {
        command: "pareto",
        inputs,
        objectives: objectives.to_vec(),
        budget: BudgetRecord::from(&budget),
        costs: None,
        front: None,
        error: None,
        wall_time_ms: started.elapsed().as_millis(),
    };
    match result {
        Ok(front) => {
            let values = front.values();
            record.front = Some(values.clone());
            emit_record(&record);
            let listing: Vec<String> = values.iter().map(|(a, b)| format!("({a},{b})")).collect();
            println!(
                "summary: objectives={},{} exhaustive={} front={}",
                pair.0.name(),
                pair.1.name(),
                front.exhaustive,
                listing.join(" ")
            );
            if !front.exhaustive {
                println!("search budget ran out; the front may be incomplete");
            }
            if front.exhaustive {
                Ok(())
            } else {
                Err(Failure {
                    code: EXIT_BUDGET,
                    message: "front is not exhaustive".into(),
                })
            }
        }
        Err(e) => {
            record.error = Some(e.to_string());
            emit_record(&record);
            println!("summary: objectives={},{} status={}", pair.0.name(), pair.1.name(), status(&e));
            Err(Failure::search(&e))
        }
    }
}

fn cmd_gen(family: Family, param: usize, out: Option<&Path>) -> Outcome {
    let instance = generate(family, param)?;
    let json = instance_to_json(&instance);
    match out {
        Some(path) => write(path, &json)?,
        None => println!("{json}"),
    }
    if out.is_some() {
        println!(
            "summary: robots={} vertices={} edges={}",
            instance.robot_count(),
            instance.graph().vertex_count(),
            instance.graph().edge_count()
        );
    }
    Ok(())
}
