//! `cheb` — command-line driver for the arithmetic-topology laboratory.
//!
//! Seven subcommands: `orbits` (enumerate a knot family), `density` and
//! `zeta` (Frobenius-class statistics), `split` (decomposition data in a
//! chosen cover), `sweep` (split-class rigidity over the group library),
//! `lgp` (seeded restriction-map experiments), and `verify` (the whole
//! acceptance suite).
//!
//! Every parameter can come from a flat `key = value` config file
//! (`--config`); explicit flags win over the file, the file wins over
//! built-in defaults.  Exit codes: 0 success, 1 usage or config problem,
//! 2 library invariant violation (with a machine-readable JSON line on
//! stderr), 3 missed statistical tolerance.

pub mod acceptance;
pub mod commands;
pub mod config;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use commands::{CommandOutput, FamilySpec};
use config::{parse_grid, parse_matrix, resolve, resolve_required, CliError, Settings};

use std::ffi::OsString;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "cheb", version, about = "knot family statistics and covering arithmetic")]
struct Cli {
    /// Flat key=value config file; explicit flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory to write report files into (created if missing).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Enumerate a knot family and write it as JSON-lines.
    Orbits {
        /// Which family: "cat" or "modular".
        #[arg(long)]
        family: Option<String>,
        /// Period bound for the cat family.
        #[arg(long)]
        numax: Option<u32>,
        /// Word-length bound for the modular family.
        #[arg(long)]
        maxlen: Option<u32>,
        /// Acting matrix, row-major "a,b,c,d".
        #[arg(long)]
        matrix: Option<String>,
        /// Keep the degenerate orbit through the origin.
        #[arg(long)]
        include_origin: bool,
    },
    /// Frobenius class frequencies against the uniform prediction.
    Density {
        #[arg(long)]
        family: Option<String>,
        /// Quotient modulus.
        #[arg(long = "mod")]
        modulus: Option<i64>,
        #[arg(long)]
        numax: Option<u32>,
        #[arg(long)]
        maxlen: Option<u32>,
        /// Length scheme: "geometric" or "prime-number".
        #[arg(long)]
        scheme: Option<String>,
        /// Comma-separated s grid for the Dirichlet extrapolation.
        #[arg(long)]
        s_grid: Option<String>,
        /// Gate: fail (exit 3) if any class frequency deviates more than
        /// this from its uniform prediction.
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long)]
        matrix: Option<String>,
    },
    /// Partial zeta products and their per-class factorization.
    Zeta {
        #[arg(long)]
        family: Option<String>,
        #[arg(long = "mod")]
        modulus: Option<i64>,
        #[arg(long)]
        numax: Option<u32>,
        #[arg(long)]
        maxlen: Option<u32>,
        #[arg(long)]
        scheme: Option<String>,
        /// Comma-separated s values.
        #[arg(long)]
        s: Option<String>,
        /// Keep only the first this-many knots.
        #[arg(long)]
        truncation: Option<usize>,
        #[arg(long)]
        matrix: Option<String>,
    },
    /// Splitting data of one peripheral pair in a library group.
    Split {
        /// Group label from the library, e.g. "S4" or "SL(2,3)".
        #[arg(long)]
        group: Option<String>,
        /// Meridian image (element index).
        #[arg(long)]
        mu: Option<u16>,
        /// Longitude image (element index).
        #[arg(long)]
        lambda: Option<u16>,
        /// Optional subgroup (comma-separated element indices) for the
        /// intermediate cover.
        #[arg(long)]
        subgroup: Option<String>,
    },
    /// Split-class rigidity sweep over the whole group library.
    Sweep {
        #[arg(long)]
        order_bound: Option<usize>,
    },
    /// Seeded restriction-map experiments on synthetic linking matrices.
    Lgp {
        /// Number of knots.
        #[arg(long)]
        n: Option<usize>,
        /// Linking numbers are drawn uniformly from [-bound, bound].
        #[arg(long)]
        bound: Option<i64>,
        /// Field characteristic.
        #[arg(long)]
        p: Option<u64>,
        /// Size of the random restriction subset per trial.
        #[arg(long)]
        s_size: Option<usize>,
        #[arg(long)]
        trials: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
        /// Use the zero linking matrix (the unlink control) instead of the
        /// synthetic model.
        #[arg(long)]
        unlink: bool,
    },
    /// Run the acceptance suite and print one verdict per criterion.
    Verify {
        #[arg(long)]
        numax: Option<u32>,
        #[arg(long)]
        maxlen: Option<u32>,
        /// Absolute tolerance for the statistical criteria.
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long)]
        trials: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Parse arguments, run, print, and map every outcome to an exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // --help/--version are successful outcomes; everything else is
            // a usage error and must exit 1 (not clap's default 2).
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            if matches!(e, CliError::Invariant(_)) {
                eprintln!("{}", e.violation_json());
            }
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let settings = match &cli.config {
        Some(path) => Settings::from_file(path)?,
        None => Settings::empty(),
    };
    let out_dir = match cli.out {
        Some(dir) => dir,
        None => PathBuf::from(settings.raw("out_dir").unwrap_or(".")),
    };

    let output = match cli.command {
        Command::Orbits { family, numax, maxlen, matrix, include_origin } => {
            let spec =
                family_spec(family, numax, maxlen, matrix, include_origin, &settings)?;
            commands::orbits(spec)?
        }
        Command::Density { family, modulus, numax, maxlen, scheme, s_grid, tolerance, matrix } => {
            let spec = family_spec(family, numax, maxlen, matrix, false, &settings)?;
            let modulus = resolve(modulus, &settings, "modulus", 2)?;
            let scheme =
                commands::parse_scheme(&resolve(scheme, &settings, "scheme", "geometric".into())?)?;
            let grid = match optional(s_grid, &settings, "s_grid")? {
                Some(text) => parse_grid(&text)?,
                None => cheblab::density::DEFAULT_S_GRID.to_vec(),
            };
            let tolerance = optional(tolerance, &settings, "tolerance")?;
            commands::density_command(spec, modulus, scheme, &grid, tolerance)?
        }
        Command::Zeta { family, modulus, numax, maxlen, scheme, s, truncation, matrix } => {
            let spec = family_spec(family, numax, maxlen, matrix, false, &settings)?;
            let modulus = resolve(modulus, &settings, "modulus", 2)?;
            let scheme =
                commands::parse_scheme(&resolve(scheme, &settings, "scheme", "geometric".into())?)?;
            let s_values = match optional(s, &settings, "s")? {
                Some(text) => parse_grid(&text)?,
                None => vec![1.05, 1.1, 1.2],
            };
            let truncation = optional(truncation, &settings, "truncation")?;
            commands::zeta_command(spec, modulus, scheme, &s_values, truncation)?
        }
        Command::Split { group, mu, lambda, subgroup } => {
            let group: String = resolve_required(group, &settings, "group")?;
            let mu = resolve_required(mu, &settings, "mu")?;
            let lambda = resolve_required(lambda, &settings, "lambda")?;
            let subgroup = optional(subgroup, &settings, "subgroup")?;
            commands::split_command(&group, mu, lambda, subgroup.as_deref())?
        }
        Command::Sweep { order_bound } => {
            let bound = resolve(order_bound, &settings, "order_bound", 16)?;
            commands::sweep_command(bound)?
        }
        Command::Lgp { n, bound, p, s_size, trials, seed, unlink } => {
            let n = resolve(n, &settings, "n", 20)?;
            let bound = resolve(bound, &settings, "bound", 10)?;
            let p = resolve(p, &settings, "p", 3)?;
            let s_size = resolve(s_size, &settings, "s_size", 3)?;
            let trials = resolve(trials, &settings, "trials", 100)?;
            let seed = resolve(seed, &settings, "seed", 2026)?;
            let unlink = unlink || settings.get("unlink")?.unwrap_or(false);
            commands::lgp_command(n, bound, p, s_size, trials, seed, unlink)?
        }
        Command::Verify { numax, maxlen, tolerance, trials, seed } => {
            let defaults = acceptance::VerifyConfig::default();
            let cfg = acceptance::VerifyConfig {
                nu_max: resolve(numax, &settings, "numax", defaults.nu_max)?,
                max_word_length: resolve(maxlen, &settings, "maxlen", defaults.max_word_length)?,
                tolerance: resolve(tolerance, &settings, "tolerance", defaults.tolerance)?,
                trials: resolve(trials, &settings, "trials", defaults.trials)?,
                seed: resolve(seed, &settings, "seed", defaults.seed)?,
            };
            let criteria = acceptance::run_all(&cfg)?;
            for c in &criteria {
                println!("{}", c.render());
            }
            let failed = criteria.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                return Err(CliError::Tolerance(format!(
                    "{failed} of {} criteria failed",
                    criteria.len()
                )));
            }
            println!("verify: all {} criteria passed", criteria.len());
            return Ok(());
        }
    };
    emit(&out_dir, output)
}

/// Flag if present, else config value, both optional.
fn optional<T: std::str::FromStr>(
    flag: Option<T>,
    settings: &Settings,
    key: &str,
) -> Result<Option<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    match flag {
        Some(v) => Ok(Some(v)),
        None => settings.get(key),
    }
}

fn family_spec(
    family: Option<String>,
    numax: Option<u32>,
    maxlen: Option<u32>,
    matrix: Option<String>,
    include_origin_flag: bool,
    settings: &Settings,
) -> Result<FamilySpec, CliError> {
    let family: String = resolve_required(family, settings, "family")?;
    match family.as_str() {
        "cat" => {
            let matrix_text =
                resolve(matrix, settings, "matrix", "2,1,1,1".to_string())?;
            let matrix = parse_matrix(&matrix_text)?;
            let nu_max = resolve(numax, settings, "numax", 12)?;
            let include_origin =
                include_origin_flag || settings.get("include_origin")?.unwrap_or(false);
            Ok(FamilySpec::Cat { matrix, nu_max, include_origin })
        }
        "modular" => {
            let max_word_length = resolve(maxlen, settings, "maxlen", 14)?;
            Ok(FamilySpec::Modular { max_word_length })
        }
        other => Err(CliError::Usage(format!(
            "unknown family {other:?} (want cat or modular)"
        ))),
    }
}

/// Write the artifacts, print the summary, and only then surface a missed
/// tolerance, so the report is on disk before the nonzero exit.
fn emit(out_dir: &std::path::Path, output: CommandOutput) -> Result<(), CliError> {
    std::fs::create_dir_all(out_dir)?;
    println!("{}", output.summary);
    for (name, contents) in &output.files {
        let path = out_dir.join(name);
        std::fs::write(&path, contents)?;
        println!("wrote {}", path.display());
    }
    match output.tolerance_failure {
        Some(msg) => Err(CliError::Tolerance(msg)),
        None => Ok(()),
    }
}
