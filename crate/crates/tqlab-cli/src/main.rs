mod commands;
mod emit;
mod run;
mod scenario;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use tqlab::harness::{HarnessConfig, Sl2Check};

use commands::{CliError, CliResult, ModuleArgs, NumericArgs, Output, Sl2Args, SystemSpec};
use scenario::{parse_complex, Format};

#[derive(Parser)]
#[command(name = "tqlab", version, about = "q-characters, TQ relations, Bethe equations and sl2 transfer-matrix checks")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, env = "TQLAB_SEED", default_value_t = 2024)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct FormatArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Shorthand for `--format json`.
    #[arg(long, conflicts_with_all = ["format", "latex"])]
    json: bool,
    /// Shorthand for `--format latex`.
    #[arg(long, conflicts_with = "format")]
    latex: bool,
}

impl FormatArgs {
    fn get(self, default: Format) -> Format {
        if self.json {
            Format::Json
        } else if self.latex {
            Format::Latex
        } else {
            self.format.unwrap_or(default)
        }
    }
}

#[derive(Args)]
struct ModuleOpts {
    /// Cartan type and rank, e.g. `A2`.
    #[arg(long = "type")]
    cartan_type: String,
    #[arg(long, default_value_t = 1)]
    node: usize,
    /// Name of the spectral anchor; `1` means plain powers of q.
    #[arg(long, default_value = "1")]
    anchor: String,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    shift: i64,
}

impl ModuleOpts {
    fn args(&self) -> ModuleArgs<'_> {
        ModuleArgs { label: &self.cartan_type, node: self.node, anchor: &self.anchor, shift: self.shift }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Cartan data.
    Cartan {
        #[command(subcommand)]
        cmd: CartanCmd,
    },
    /// q-character of a fundamental representation.
    Qchar {
        #[command(flatten)]
        module: ModuleOpts,
        #[command(flatten)]
        fmt: FormatArgs,
        /// Golden file to compare against; a mismatch exits with status 1.
        #[arg(long)]
        expect: Option<PathBuf>,
    },
    /// TQ relation of a fundamental representation.
    Tq {
        #[command(flatten)]
        module: ModuleOpts,
        #[arg(long, default_value = "L+")]
        flavor: String,
        #[command(flatten)]
        fmt: FormatArgs,
        #[arg(long)]
        expect: Option<PathBuf>,
    },
    /// Render a TQ relation stored as JSON in LaTeX.
    TqRender { file: PathBuf },
    /// Eigenvalue templates and the f-series.
    Spectra {
        #[command(subcommand)]
        cmd: SpectraCmd,
    },
    /// Bethe equations.
    Bethe {
        #[command(subcommand)]
        cmd: BetheCmd,
    },
    /// Verification reports.
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
    /// Run a scenario file.
    Run {
        scenario: PathBuf,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Subcommand)]
enum CartanCmd {
    /// Print C, d, C(q) and the inverse of C(q).
    Show {
        label: String,
        #[command(flatten)]
        fmt: FormatArgs,
    },
}

#[derive(Args)]
struct TargetOpts {
    /// Highest monomial of the target module, as `node@shift,...`.
    #[arg(long, allow_hyphen_values = true)]
    target: String,
}

#[derive(Subcommand)]
enum SpectraCmd {
    /// Eigenvalue template of the module at `--node` on the weight space `--lambda`.
    Template {
        #[command(flatten)]
        module: ModuleOpts,
        #[command(flatten)]
        target: TargetOpts,
        /// Weight in fundamental-weight coordinates, e.g. `1,-1`.
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[command(flatten)]
        fmt: FormatArgs,
    },
    /// Rational f-ratios for every monomial, with the telescoping check.
    Fratio {
        #[command(flatten)]
        module: ModuleOpts,
        #[command(flatten)]
        target: TargetOpts,
        #[arg(short = 'K', long = "K", default_value_t = scenario::DEFAULT_K)]
        k: usize,
        #[command(flatten)]
        fmt: FormatArgs,
    },
    /// Power series f_i(z) of the target module.
    Fseries {
        #[arg(long = "type")]
        cartan_type: String,
        #[command(flatten)]
        target: TargetOpts,
        #[arg(long, default_value_t = 1)]
        node: usize,
        #[arg(short = 'K', long = "K", default_value_t = scenario::DEFAULT_K)]
        k: usize,
        #[command(flatten)]
        fmt: FormatArgs,
    },
}

#[derive(Args)]
struct SystemOpts {
    /// sl2 chain of Kirillov-Reshetikhin modules.
    #[arg(long, conflicts_with_all = ["cartan_type", "target", "counts"])]
    sl2: bool,
    /// Number of sites of the sl2 chain.
    #[arg(long = "N", default_value_t = 1)]
    sites: usize,
    /// KR lengths: one value for all sites or one per site.
    #[arg(long = "R", value_delimiter = ',', default_value = "1")]
    lengths: Vec<usize>,
    /// Exponent e with b = q^e; defaults to -R.
    #[arg(long, allow_hyphen_values = true)]
    e: Option<i64>,
    /// Number of Bethe roots for the sl2 chain.
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long = "type")]
    cartan_type: Option<String>,
    /// Target module highest monomials, one per tensor factor.
    #[arg(long, allow_hyphen_values = true)]
    target: Vec<String>,
    /// Bethe roots per node, comma-separated.
    #[arg(long, value_delimiter = ',')]
    counts: Vec<usize>,
}

impl SystemOpts {
    fn spec(&self) -> CliResult<SystemSpec<'_>> {
        if self.sl2 {
            return Ok(SystemSpec::Sl2 { sites: self.sites, lengths: &self.lengths, e: self.e, m: self.m });
        }
        let label = self.cartan_type.as_deref().ok_or_else(|| CliError::Usage("give --sl2 or --type with --target and --counts".into()))?;
        Ok(SystemSpec::General { label, targets: &self.target, counts: &self.counts })
    }
}

#[derive(Subcommand)]
enum BetheCmd {
    /// Print the equations.
    Gen {
        #[command(flatten)]
        system: SystemOpts,
        #[command(flatten)]
        fmt: FormatArgs,
    },
    /// Solve numerically at a point.
    Solve {
        #[command(flatten)]
        system: SystemOpts,
        /// q as `re` or `re,im`; drawn from the seed when absent.
        #[arg(long, allow_hyphen_values = true)]
        q0: Option<String>,
        /// Twist per node (one value for all nodes is allowed).
        #[arg(long, allow_hyphen_values = true)]
        v0: Vec<String>,
        /// `nontwisted` sets v_i = q_i^2.
        #[arg(long)]
        preset: Option<String>,
        /// Number of random Newton starts.
        #[arg(long, default_value_t = 200)]
        seeds: usize,
        #[command(flatten)]
        fmt: FormatArgs,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// sl2 transfer-matrix checks.
    Sl2 {
        #[arg(long, value_delimiter = ',', default_value = "transfer,ti,baxter,degree")]
        what: Vec<String>,
        #[arg(long = "N", default_value_t = 1)]
        n: usize,
        #[arg(long = "Kv", default_value_t = scenario::DEFAULT_KV)]
        kv: usize,
        #[arg(short = 'K', long = "K", default_value_t = 10)]
        k: usize,
        #[arg(long, allow_hyphen_values = true)]
        q0: Option<String>,
        /// Twist u; drawn from the seed when absent.
        #[arg(long, allow_hyphen_values = true)]
        u0: Option<String>,
        #[arg(long)]
        timings: bool,
    },
    /// The full check suite, optionally restricted by id prefix.
    Suite {
        #[arg(long = "check")]
        checks: Vec<String>,
        #[arg(short = 'K', long = "K", default_value_t = scenario::DEFAULT_K)]
        k: usize,
        #[arg(long = "Kv", default_value_t = scenario::DEFAULT_KV)]
        kv: usize,
        #[arg(short = 'M', long = "M", default_value_t = scenario::DEFAULT_M)]
        m: usize,
        #[arg(long)]
        timings: bool,
    },
}

fn complex_opt(s: &Option<String>) -> CliResult<Option<Complex64>> {
    s.as_deref().map(parse_complex).transpose().map_err(CliError::Usage)
}

fn dispatch(cli: Cli) -> CliResult<Output> {
    let seed = cli.seed;
    match cli.command {
        Command::Cartan { cmd: CartanCmd::Show { label, fmt } } => commands::cartan_show(&label, fmt.get(Format::Latex)),
        Command::Qchar { module, fmt, expect } => commands::qchar(&module.args(), fmt.get(Format::Latex), expect.as_deref()),
        Command::Tq { module, flavor, fmt, expect } => {
            commands::tq(&module.args(), commands::parse_flavor(&flavor)?, fmt.get(Format::Latex), expect.as_deref())
        }
        Command::TqRender { file } => commands::tq_render(&file),
        Command::Spectra { cmd } => match cmd {
            SpectraCmd::Template { module, target, lambda, fmt } => {
                commands::spectra_template(&module.args(), &target.target, &lambda, fmt.get(Format::Latex))
            }
            SpectraCmd::Fratio { module, target, k, fmt } => {
                commands::spectra_fratio(&module.args(), &target.target, k, fmt.get(Format::Text))
            }
            SpectraCmd::Fseries { cartan_type, target, node, k, fmt } => {
                commands::spectra_fseries(&cartan_type, &target.target, node, k, fmt.get(Format::Latex))
            }
        },
        Command::Bethe { cmd } => match cmd {
            BetheCmd::Gen { system, fmt } => commands::bethe_gen(&system.spec()?, fmt.get(Format::Latex)),
            BetheCmd::Solve { system, q0, v0, preset, seeds, fmt } => {
                let nontwisted = match preset.as_deref() {
                    None => false,
                    Some("nontwisted") => true,
                    Some(other) => return Err(CliError::Usage(format!("unknown preset `{}`", other))),
                };
                let v0 = v0.iter().map(|s| parse_complex(s)).collect::<Result<Vec<_>, _>>().map_err(CliError::Usage)?;
                let num = NumericArgs { seed, q0: complex_opt(&q0)?, v0, nontwisted };
                commands::bethe_solve(&system.spec()?, &num, seeds, fmt.get(Format::Json))
            }
        },
        Command::Verify { cmd } => match cmd {
            VerifyCmd::Sl2 { what, n, kv, k, q0, u0, timings } => {
                let what = what.iter().map(|w| w.parse::<Sl2Check>()).collect::<Result<Vec<_>, _>>().map_err(CliError::Usage)?;
                let args = Sl2Args { what, n, kv, k, seed, q0: complex_opt(&q0)?, u0: complex_opt(&u0)?, timings };
                Ok(commands::verify_sl2(&args)?.into_output())
            }
            VerifyCmd::Suite { checks, k, kv, m, timings } => {
                let cfg = HarnessConfig { seed, k, kv, m, timings };
                Ok(commands::verify_suite(&cfg, &checks)?.into_output())
            }
        },
        Command::Run { scenario, out, timings } => run::run_file(&scenario, out.as_deref(), seed, timings),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(out) => {
            // a closed pipe downstream is not an error worth reporting
            let _ = writeln!(std::io::stdout().lock(), "{}", out.text);
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(e.exit_code())
        }
    }
}
