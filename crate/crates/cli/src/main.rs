use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dualradix::commands::{self, ExpandRequest, Output};
use dualradix::input::{parse_system, resolve, SystemInput, DEFAULT_BUDGET};
use dualradix::render::Format;
use dualradix::CliError;
use dualradix_core::integrality::SearchConfig;
use dualradix_core::orbit::OrbitSpec;
use dualradix_core::Int;

#[derive(Parser)]
#[command(name = "dualradix", version, about = "Dual-radix expansions and integrality tests for periodic orbits")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Worker threads for parallel stages and searches.
    #[arg(long, global = true, env = "DUALRADIX_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

/// A system from `--spec`, or from inline flags. With `--seed`, the orbit is
/// found by forward iteration and `--f` and `--a` take a single value.
#[derive(Args, Clone)]
struct SystemArgs {
    /// JSON system description.
    #[arg(long, conflicts_with_all = ["m", "l", "f", "e", "a", "seed"])]
    spec: Option<PathBuf>,
    #[arg(long)]
    m: Option<Int>,
    #[arg(long)]
    l: Option<Int>,
    /// m-adic grading, comma separated.
    #[arg(long, value_delimiter = ',')]
    f: Vec<u32>,
    /// l-adic exponents, comma separated.
    #[arg(long, value_delimiter = ',')]
    e: Vec<u32>,
    /// Translations, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    a: Vec<Int>,
    /// Start of forward iteration.
    #[arg(long, allow_hyphen_values = true)]
    seed: Option<Int>,
    /// Iteration budget for `--seed`.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
}

impl SystemArgs {
    fn input(&self) -> Result<SystemInput, CliError> {
        if let Some(path) = &self.spec {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
            return parse_system(&text);
        }
        let missing = |name: &str| CliError::Input(format!("`--{name}` is required without `--spec`"));
        let m = self.m.clone().ok_or_else(|| missing("m"))?;
        let l = self.l.clone().ok_or_else(|| missing("l"))?;
        let single = |values: &[Int], name: &str| match values {
            [x] => Ok(x.clone()),
            _ => Err(CliError::Input(format!("`--{name}` takes one value with `--seed`"))),
        };
        if let Some(seed) = &self.seed {
            let f = match self.f.as_slice() {
                [] => 1,
                [x] => *x,
                _ => return Err(CliError::Input("`--f` takes one value with `--seed`".into())),
            };
            let a = single(&self.a, "a")?;
            return Ok(SystemInput::Seed { m, l, f, a, seed: seed.clone(), budget: self.budget });
        }
        let a = if self.a.is_empty() { return Err(missing("a")) } else { self.a.clone() };
        self.exponent_input(m, l, a)
    }

    /// Exponent form; an empty `--f` means grade 1 everywhere.
    fn exponent_input(&self, m: Int, l: Int, a: Vec<Int>) -> Result<SystemInput, CliError> {
        if self.e.is_empty() {
            return Err(CliError::Input("`--e` is required without `--spec`".into()));
        }
        let tau = self.e.len();
        let f = if self.f.is_empty() { vec![1] } else { self.f.clone() };
        let broadcast = |n: usize| n == 1 || n == tau;
        if !broadcast(f.len()) || !broadcast(a.len()) {
            return Err(CliError::Input("`--f` and `--a` need one value or one per entry of `--e`".into()));
        }
        let f = if f.len() == 1 { vec![f[0]; tau] } else { f };
        let a = if a.len() == 1 { vec![a[0].clone(); tau] } else { a };
        Ok(SystemInput::Exponents { m, l, f, e: self.e.clone(), a })
    }

    /// Bases and exponents only; translations are not needed.
    fn exponents(&self) -> Result<(Int, Int, Vec<u32>, Vec<u32>), CliError> {
        let input = match (&self.spec, &self.m, &self.l) {
            (None, Some(m), Some(l)) => self.exponent_input(m.clone(), l.clone(), vec![Int::from(1)])?,
            _ => self.input()?,
        };
        match input {
            SystemInput::Exponents { m, l, f, e, .. } => Ok((m, l, f, e)),
            SystemInput::Seed { .. } => Err(CliError::Input("explicit exponents are required".into())),
        }
    }

    fn orbit(&self) -> Result<OrbitSpec, CliError> {
        resolve(&self.input()?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Iterate values, closed forms and witnesses.
    Analyze {
        #[command(flatten)]
        system: SystemArgs,
    },
    /// The grid of digit differences, rows v and columns u.
    Cylinder {
        #[command(flatten)]
        system: SystemArgs,
        /// Highest stage U; defaults to the period.
        #[arg(long)]
        stages: Option<usize>,
    },
    /// Graded expansion of a fraction by repeated modular division.
    Expand {
        #[arg(long, allow_hyphen_values = true)]
        numerator: Int,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        denominator: Int,
        #[arg(long)]
        radix: Int,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        grading: Vec<u32>,
        #[arg(long)]
        digits: usize,
    },
    /// Prefix and suffix integrality tests for every iterate.
    BsTest {
        #[command(flatten)]
        system: SystemArgs,
        /// Stage budget of the suffix test; defaults to the period.
        #[arg(long)]
        stages: Option<usize>,
    },
    /// Smooth decomposition of the unit-translation numerator.
    Smooth {
        #[command(flatten)]
        system: SystemArgs,
    },
    /// Exhaustive search for integral cycles with f = 1.
    Search {
        #[arg(long, default_value = "3")]
        m: Int,
        #[arg(long, default_value = "2")]
        l: Int,
        #[arg(long, allow_hyphen_values = true, default_value = "-1")]
        a: Int,
        #[arg(long, default_value_t = 1)]
        tau_min: usize,
        #[arg(long)]
        tau_max: usize,
        #[arg(long)]
        esum_max: u32,
    },
    /// Invariant suites over a seeded random corpus.
    Selfcheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
}

fn run(cli: Cli) -> Result<Output, CliError> {
    let format = cli.format;
    match cli.command {
        Command::Analyze { system } => commands::analyze(&system.orbit()?, format),
        Command::Cylinder { system, stages } => {
            let spec = system.orbit()?;
            let stages = stages.unwrap_or(spec.tau());
            commands::cylinder(&spec, stages, format)
        }
        Command::Expand { numerator, denominator, radix, grading, digits } => {
            commands::expand(&ExpandRequest { numerator, denominator, radix, grading, digits }, format)
        }
        Command::BsTest { system, stages } => {
            let spec = system.orbit()?;
            let stages = stages.unwrap_or(spec.tau());
            commands::bs_test(&spec, stages, format)
        }
        Command::Smooth { system } => {
            let (m, l, f, e) = system.exponents()?;
            commands::smooth(&m, &l, &f, &e, format)
        }
        Command::Search { m, l, a, tau_min, tau_max, esum_max } => {
            commands::search(&SearchConfig { m, l, translation: a, tau_min, tau_max, esum_max }, format)
        }
        Command::Selfcheck { seed, count } => commands::selfcheck(seed, count, format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs.filter(|&n| n > 0) {
        // Fails only if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.exit as u8)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
