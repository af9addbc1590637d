use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::Parser;
use eqsing_cli::report::EXIT_ERROR;
use eqsing_cli::{run_cached, Overrides, COMMANDS};

/// Decide or refute (w), Whitney (a), (t^r) and (t^{r-}) for polynomial germs.
#[derive(Parser, Debug)]
#[command(name = "eqs", version)]
struct Cli {
    /// One of: sb, colength, fitting, milnor, mustar, mult, modify, lift, probe, check-w, refute-a,
    /// check-tr, check-tr-minus, check-family, analyze-family, check-ambient, check-mu, replay
    command: String,
    /// Problem file (a report file for `replay`).
    file: PathBuf,
    /// Real closure; accepts r = 0 inputs with Y not in X at Heuristic confidence.
    #[arg(long)]
    real: bool,
    /// Jet order, overriding [transversal] r.
    #[arg(short = 'r')]
    r: Option<u32>,
    /// Parameter value, e.g. `--param t=1/3`.
    #[arg(long = "param", value_parser = key_value)]
    params: Vec<(String, String)>,
    /// Curve truncation order.
    #[arg(short = 'N')]
    n: Option<usize>,
    #[arg(long)]
    guard: Option<usize>,
    /// Maximal exponent of the monomial curve family.
    #[arg(short = 'E')]
    e: Option<u32>,
    /// Number of random samples for generic values.
    #[arg(short = 'K')]
    k: Option<usize>,
    #[arg(long)]
    bound: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    /// Lift tie-break: smallest or largest.
    #[arg(long)]
    tie: Option<String>,
    /// Names of the Grassmann chart coordinates, comma separated.
    #[arg(long, value_delimiter = ',')]
    chart: Vec<String>,
    /// Condition id for `probe`, e.g. w-condition, tr-closure(r=1), closure-membership.
    #[arg(long)]
    condition: Option<String>,
    /// Element h for `--condition closure-membership`.
    #[arg(long)]
    element: Option<String>,
    /// Minor size for `fitting`.
    #[arg(long)]
    minors: Option<usize>,
    /// Reuse reports stored in this directory.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Also write the report here.
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

fn key_value(s: &str) -> Result<(String, String), String> {
    s.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .ok_or_else(|| format!("expected name=value, got `{}`", s))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}

fn execute(cli: &Cli) -> Result<i32> {
    if !COMMANDS.contains(&cli.command.as_str()) {
        return Err(anyhow!("unknown command `{}`; expected one of {}", cli.command, COMMANDS.join(", ")));
    }
    let text = std::fs::read_to_string(&cli.file).with_context(|| format!("reading {}", cli.file.display()))?;
    let ov = Overrides {
        real: cli.real,
        r: cli.r,
        params: cli.params.clone(),
        n: cli.n,
        guard: cli.guard,
        e: cli.e,
        k: cli.k,
        bound: cli.bound,
        seed: cli.seed,
        tie: cli.tie.clone(),
        chart: cli.chart.clone(),
        condition: cli.condition.clone(),
        element: cli.element.clone(),
        minors: cli.minors,
    };
    let report = run_cached(&cli.command, &text, &ov, cli.cache.as_deref())?;
    let json = report.to_json();
    if let Some(out) = &cli.output {
        std::fs::write(out, &json).with_context(|| format!("writing {}", out.display()))?;
    }
    print!("{}", json);
    Ok(report.exit_code())
}
