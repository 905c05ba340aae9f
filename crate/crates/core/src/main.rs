use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use relkin::acceptance::{self, Options, CRITERIA};
use relkin::frames::Rigidity;
use relkin::precession::{compare_from_report, foucault_precession};
use relkin::report::{self, format_sig, COMPARE_HEADER, DIGITS, THOMAS_HEADER};
use relkin::scenario::{Scenario, Setup};
use relkin::Error;

const EXIT_FAILURE: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_REFUSED: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "relkin", version, about = "Rotating frames, Foucault precession and Thomas rotation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rigidity residuals and profile residuals of the scenario's frame.
    Rigidity(ScenarioArgs),
    /// Thomas rotation over one period of the scenario's orbit.
    Thomas(ScenarioArgs),
    /// Foucault precession of a gyroscope resting in the frame.
    Foucault(ScenarioArgs),
    /// Foucault angle against Thomas angle at the return time.
    Compare(ScenarioArgs),
    /// Comparison rows over a range of speeds.
    Sweep(SweepArgs),
    /// Runs the acceptance criteria.
    Selfcheck(SelfcheckArgs),
}

#[derive(Args)]
struct ScenarioArgs {
    #[arg(long)]
    scenario: PathBuf,
    /// Write CSV output here ("-" for standard output).
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Integration steps per orbit, overriding the scenario.
    #[arg(long)]
    steps: Option<usize>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: ScenarioArgs,
    #[arg(long, default_value = "v")]
    param: String,
    #[arg(long)]
    from: f64,
    #[arg(long)]
    to: f64,
    #[arg(long)]
    count: usize,
}

#[derive(Args)]
struct SelfcheckArgs {
    /// Print the criterion ids without running them.
    #[arg(long)]
    list: bool,
    /// Print every check, not just the tightest one per criterion.
    #[arg(long)]
    verbose: bool,
    /// Scale applied to all tolerances.
    #[arg(long, default_value_t = 1.0)]
    tolerance_scale: f64,
}

enum Failure {
    Usage(String),
    Refused(String),
    Failed(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Refused(_) => EXIT_REFUSED,
            Failure::Failed(_) => EXIT_FAILURE,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Refused(m) | Failure::Failed(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotMeaningful { .. } => Failure::Refused(format!(
                "{e}: the frame is not rigid along this orbit, so there is no Foucault angle to compare"
            )),
            Error::ReturnConditionViolated { .. } | Error::NotIntegralCurve { .. } => Failure::Refused(e.to_string()),
            other => Failure::Failed(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Failed(e.to_string())
    }
}

type CliResult = Result<u8, Failure>;

fn load(args: &ScenarioArgs) -> Result<Scenario, Failure> {
    let mut scenario = Scenario::from_path(&args.scenario).map_err(|e| Failure::Usage(e.to_string()))?;
    if let Some(steps) = args.steps {
        scenario.step_count = steps;
        scenario.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    }
    Ok(scenario)
}

fn build(scenario: &Scenario) -> Result<Setup, Failure> {
    scenario.build().map_err(|e| Failure::Usage(e.to_string()))
}

fn write_csv(target: &Path, header: &str, rows: &[String]) -> io::Result<()> {
    let mut text = String::with_capacity(64 * (rows.len() + 1));
    text.push_str(header);
    text.push('\n');
    for row in rows {
        text.push_str(row);
        text.push('\n');
    }
    if target == Path::new("-") {
        io::stdout().write_all(text.as_bytes())
    } else {
        fs::write(target, text)
    }
}

fn cmd_rigidity(args: &ScenarioArgs) -> CliResult {
    let scenario = load(args)?;
    let setup = build(&scenario)?;
    let survey = report::rigidity_survey(&scenario, &setup)?;
    print!("{}", survey.to_text(&scenario));
    Ok(if survey.verdict == Rigidity::Inconclusive { EXIT_INCONCLUSIVE } else { 0 })
}

fn cmd_thomas(args: &ScenarioArgs) -> CliResult {
    let setup = build(&load(args)?)?;
    let t = report::scenario_thomas(&setup)?;
    print!("{}", report::thomas_text(&setup, &t));
    if let Some(path) = &args.csv {
        write_csv(path, THOMAS_HEADER, &[report::thomas_csv_row(&setup, &t)])?;
    }
    Ok(0)
}

fn cmd_foucault(args: &ScenarioArgs) -> CliResult {
    let setup = build(&load(args)?)?;
    let rep = foucault_precession(setup.frame.as_ref(), setup.orbit.as_ref(), setup.s_t, setup.step)?;
    let g = |x: f64| format_sig(x, DIGITS);
    println!("s_T: {}", g(setup.s_t));
    println!("antisymmetry residual of Ω0: {}", g(rep.antisymmetry_residual));
    println!("rigidity residual along orbit: {}", g(rep.rigidity_residual));
    println!("meaningful: {}", rep.meaningful);
    if !rep.meaningful {
        return Err(Error::NotMeaningful { residual: rep.antisymmetry_residual }.into());
    }
    let deviation = rep
        .omega_samples
        .iter()
        .zip(&rep.frame_angvel_samples)
        .map(|((_, om), (_, w))| (*om + *w).norm())
        .fold(0.0, f64::max);
    let rate = rep.omega_samples.first().map(|(_, om)| om.rotation_rate()).unwrap_or(0.0);
    println!("precession rate at s = 0: {}", g(rate));
    println!("max ‖Ω + frame angular velocity‖: {}", g(deviation));
    if let Ok(c) = compare_from_report(&rep, setup.orbit.as_ref()) {
        println!("foucault angle over s_T: {} (unwrapped {})", g(c.foucault_angle), g(c.foucault_angle_unwrapped.abs()));
    }
    Ok(0)
}

fn cmd_compare(args: &ScenarioArgs) -> CliResult {
    let setup = build(&load(args)?)?;
    let row = report::scenario_compare(&setup)?;
    print!("{}", row.to_text());
    if let Some(path) = &args.csv {
        write_csv(path, COMPARE_HEADER, &[row.to_csv()])?;
    }
    Ok(0)
}

fn cmd_sweep(args: &SweepArgs) -> CliResult {
    if args.param != "v" {
        return Err(Failure::Usage(format!("unsupported sweep parameter '{}' (only v)", args.param)));
    }
    if !(args.from > 0.0 && args.from < args.to && args.to < 1.0) {
        return Err(Failure::Usage("sweep needs 0 < from < to < 1".into()));
    }
    if args.count == 0 {
        return Err(Failure::Usage("sweep needs count >= 1".into()));
    }
    let base = load(&args.common)?;
    let scenarios = report::sweep_speeds(args.from, args.to, args.count)
        .into_iter()
        .map(|v| base.with_speed(v).map_err(|e| Failure::Usage(e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = scenarios
        .par_iter()
        .map(|s| -> Result<String, Failure> {
            let setup = build(s)?;
            Ok(report::scenario_compare(&setup)?.to_csv())
        })
        .collect::<Result<Vec<_>, _>>()?;
    let target = args.common.csv.clone().unwrap_or_else(|| PathBuf::from("-"));
    write_csv(&target, COMPARE_HEADER, &rows)?;
    Ok(0)
}

fn cmd_selfcheck(args: &SelfcheckArgs) -> CliResult {
    if args.list {
        for (id, name) in CRITERIA {
            println!("{id} {name}");
        }
        return Ok(0);
    }
    if args.tolerance_scale.is_nan() || args.tolerance_scale <= 0.0 {
        return Err(Failure::Usage("tolerance scale must be positive".into()));
    }
    let results = acceptance::run_all(&Options { tolerance_scale: args.tolerance_scale });
    let mut failed = 0;
    for r in &results {
        println!("{r}");
        if args.verbose {
            for c in &r.checks {
                let status = if c.passed() { "pass" } else { "fail" };
                println!("  {status} {} measured={:.6e} bound={:?} {:.1e}", c.label, c.measured, c.bound, c.tolerance);
            }
        }
        if !r.passed() {
            failed += 1;
        }
    }
    println!("summary passed={} failed={failed}", results.len() - failed);
    Ok(if failed == 0 { 0 } else { EXIT_FAILURE })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match &cli.command {
        Command::Rigidity(a) => cmd_rigidity(a),
        Command::Thomas(a) => cmd_thomas(a),
        Command::Foucault(a) => cmd_foucault(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Selfcheck(a) => cmd_selfcheck(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
