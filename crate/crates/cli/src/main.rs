use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use henselift::check::{tuple_suites, Execution};
use henselift::lift::{compare_strategies, lift_steps, lift_to_precision, LiftOptions};
use henselift::poly::discriminant;
use henselift::problem::{comparison_value, format_comparison, format_table, lift_report_value, polys_value};
use henselift::{Error, ModeRequest, MonicPoly, ProblemSpec};
use serde_json::json;

/// Lift an approximate factorization of a monic polynomial over Z_p.
#[derive(Parser, Debug)]
#[command(name = "henselift", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Resultant, t, t' and the detected mode (JSON).
    Profile(Common),
    /// Lift the factors, one step, N steps or up to a target precision.
    Lift {
        #[command(flatten)]
        common: Common,
        /// Lift until the factors are known modulo p^N.
        #[arg(long, conflicts_with = "steps")]
        target: Option<u64>,
        /// Run exactly N steps.
        #[arg(long)]
        steps: Option<usize>,
        /// Print the step/precision/defect table.
        #[arg(long)]
        table: bool,
        /// Give up after this many steps when lifting to a target.
        #[arg(long, default_value_t = 64)]
        max_steps: usize,
    },
    /// One three-factor step against two nested two-factor steps.
    Compare(Common),
    /// Run the identity suites on the factor tuple.
    Check {
        #[command(flatten)]
        common: Common,
        /// Seed for the random perturbation corpora.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Perturbation cases per suite.
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// Problem file (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Override the mode given in the problem file.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Print machine-readable output.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Auto,
    General,
    Special,
}

impl From<ModeArg> for ModeRequest {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Auto => ModeRequest::Auto,
            ModeArg::General => ModeRequest::General,
            ModeArg::Special => ModeRequest::Special,
        }
    }
}

enum Failure {
    Validation(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::Validation(e.to_string())
        }
    }
}

fn load(common: &Common) -> Result<ProblemSpec, Failure> {
    let text = fs::read_to_string(&common.input)
        .map_err(|e| Failure::Validation(format!("{}: {e}", common.input.display())))?;
    ProblemSpec::from_json_str(&text)
        .map_err(|e| Failure::Validation(format!("{}: {e}", common.input.display())))
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

fn factor_lines(factors: &[MonicPoly]) -> String {
    factors
        .iter()
        .enumerate()
        .map(|(k, g)| format!("  g{} = {g}\n", k + 1))
        .collect()
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Profile(common) => {
            let spec = load(&common)?;
            let sys = spec.system(common.mode.map(Into::into))?;
            let ctx = sys.ctx();
            let disc_val = discriminant(sys.f()).map(|d| ctx.val(&d))?;
            print_json(&json!({
                "p": ctx.p(),
                "degrees": sys.factors().iter().map(MonicPoly::degree).collect::<Vec<_>>(),
                "res": sys.profile().res.to_string(),
                "t": sys.t(),
                "t_prime": sys.t_prime(),
                "mode": sys.mode(),
                "s": sys.s(),
                "required_s": sys.required_precision(),
                "discriminant_valuation": disc_val,
                "factors": polys_value(sys.factors()),
            }));
        }
        Command::Lift {
            common,
            target,
            steps,
            table,
            max_steps,
        } => {
            let spec = load(&common)?;
            let sys = spec.system(common.mode.map(Into::into))?;
            let opts = LiftOptions::default();
            let (factors, report, modulus) = match (steps, target.or(spec.target)) {
                (Some(n), _) => {
                    let (end, report) = lift_steps(&sys, n, &opts)?;
                    (end.factors().to_vec(), report, end.s() - end.t_eff())
                }
                (None, Some(target)) => {
                    let (factors, _, report) = lift_to_precision(&sys, target, max_steps, &opts)?;
                    (factors, report, target)
                }
                (None, None) => {
                    let (end, report) = lift_steps(&sys, 1, &opts)?;
                    (end.factors().to_vec(), report, end.s() - end.t_eff())
                }
            };
            if table || !common.json {
                print!("{}", format_table(&report.steps));
            }
            if common.json {
                print_json(&lift_report_value(&report, &factors, sys.ctx(), modulus));
            } else if !table {
                let balanced = henselift::lift::balanced(&factors, sys.ctx(), modulus);
                println!("factors modulo {}^{modulus}:", sys.ctx().p());
                print!("{}", factor_lines(&balanced));
            }
        }
        Command::Compare(common) => {
            let spec = load(&common)?;
            let sys = spec.system(common.mode.map(Into::into))?;
            let cmp = compare_strategies(&sys, &LiftOptions::default())?;
            if common.json {
                print_json(&comparison_value(&cmp));
            } else {
                print!("{}", format_comparison(&cmp));
            }
        }
        Command::Check { common, seed, cases } => {
            let spec = load(&common)?;
            let ctx = spec.context()?;
            let outcomes = tuple_suites(&spec.factors, &ctx, seed, cases, Execution::Parallel)?;
            if common.json {
                print_json(&serde_json::to_value(&outcomes).expect("outcomes serialize"));
            } else {
                for o in &outcomes {
                    println!("{}", o.summary());
                }
            }
            if let Some(bad) = outcomes.iter().find(|o| !o.ok()) {
                return Err(Failure::Internal(bad.summary()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
    }
}
