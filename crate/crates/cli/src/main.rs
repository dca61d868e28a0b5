use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fsing_core::model::IntegerModel;
use fsing_core::{
    check_key_proposition, emit_report, fedder_root, frobenius_matrix, frobenius_root, multiplier_profile,
    parse_model_file, scan, test_ideal, ChainStatus, Error, FrobeniusLevel, GeneralCombinationConfig, Ideal,
    Limits, Polynomial, PrimeField, RationalExponent, ReportFormat, Result, ScanOptions, TestIdealOptions,
};

#[derive(Parser)]
#[command(name = "fsing", version, about = "F-singularity invariants over prime fields")]
struct Cli {
    /// Number of variables x0..x{n-1}; inferred from the input when omitted.
    #[arg(long, global = true)]
    nvars: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generators of f^[1/p^e].
    FrobRoot {
        #[arg(short)]
        p: u64,
        #[arg(short, default_value_t = 1)]
        e: u32,
        poly: String,
    },
    /// tau(f^lambda) by the ascending chain.
    TestIdeal {
        #[arg(short)]
        p: u64,
        #[arg(long)]
        lambda: RationalExponent,
        #[arg(long, default_value_t = 3)]
        e_max: u32,
        #[arg(long, default_value_t = 1)]
        equalities: u32,
        poly: String,
    },
    /// (h^(p-1))^[1/p].
    Fedder {
        #[arg(short)]
        p: u64,
        poly: String,
    },
    /// Frobenius matrix on top cohomology of a hypersurface, or of the
    /// generators of a model file.
    HasseWitt {
        #[arg(short)]
        p: u64,
        #[arg(long)]
        json: bool,
        input: String,
    },
    /// Containment hypothesis against Frobenius bijectivity for one form.
    CheckProp {
        #[arg(short)]
        p: u64,
        #[arg(long)]
        json: bool,
        poly: String,
    },
    /// Reduce a model mod every prime up to a bound.
    Scan {
        #[arg(long = "primes")]
        bound: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value = "table")]
        format: ReportFormat,
        /// Overrides the seed in the model file.
        #[arg(long)]
        seed: Option<u64>,
        /// Coefficient bound for the general combinations.
        #[arg(long, default_value_t = 5)]
        bound_coeff: u64,
        /// Also compare tau(h^mu) with the prediction.
        #[arg(long)]
        mu: Option<RationalExponent>,
        #[arg(long, default_value_t = 3)]
        e_max: u32,
        #[arg(long)]
        timing: bool,
        model: PathBuf,
    },
    /// Multiplier ideals of a quadric-generated subvariety as a table.
    Profile {
        #[arg(short = 'N')]
        n: u32,
        #[arg(short)]
        r: u32,
        #[arg(long)]
        json: bool,
    },
}

fn field(p: u64) -> Result<PrimeField> {
    PrimeField::new(p)
}

fn poly(p: u64, text: &str, nvars: Option<usize>) -> Result<Polynomial<PrimeField>> {
    Polynomial::parse(field(p)?, text, nvars)
}

fn print_ideal(i: &Ideal<PrimeField>) {
    for g in i.generators() {
        println!("{g}");
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

/// Forms given directly or through a file: a model file contributes its
/// generators, any other file holds one form per line.
fn forms(p: u64, input: &str, nvars: Option<usize>) -> Result<Vec<Polynomial<PrimeField>>> {
    if !Path::new(input).is_file() {
        return Ok(vec![poly(p, input, nvars)?]);
    }
    let text = std::fs::read_to_string(input).map_err(|e| Error::Invalid(format!("{input}: {e}")))?;
    let f = field(p)?;
    if text.lines().any(|l| l.trim_start().starts_with("vars:")) {
        let file = parse_model_file(&text)?;
        return Ok(file.gens.iter().map(|g| g.reduce_mod_p(f)).collect());
    }
    let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
    let parsed: Vec<_> = lines.iter().map(|l| poly(p, l, nvars)).collect::<Result<_>>()?;
    let n = parsed.iter().map(Polynomial::nvars).max().unwrap_or(1);
    parsed.into_iter().map(|g| g.with_nvars(n)).collect()
}

fn run(cli: Cli) -> Result<()> {
    let nvars = cli.nvars;
    match cli.command {
        Command::FrobRoot { p, e, poly: text } => {
            let f = poly(p, &text, nvars)?;
            print_ideal(&frobenius_root(&f, FrobeniusLevel::new(p, e)?)?);
        }
        Command::TestIdeal { p, lambda, e_max, equalities, poly: text } => {
            let f = poly(p, &text, nvars)?;
            let opts = TestIdealOptions {
                e_max,
                required_equalities: equalities,
                limits: Limits::default(),
            };
            let res = test_ideal(&Ideal::principal(f), lambda, &opts)?;
            match res.status {
                ChainStatus::Stabilized => println!("# stabilized at e = {}", res.stabilized_at),
                ChainStatus::CapReached => println!("# cap e_max = {e_max} reached; last member shown"),
            }
            print_ideal(&res.ideal);
        }
        Command::Fedder { p, poly: text } => {
            print_ideal(&fedder_root(&poly(p, &text, nvars)?)?);
        }
        Command::HasseWitt { p, json, input } => {
            let m = frobenius_matrix(&forms(p, &input, nvars)?, &Limits::default())?;
            if json {
                println!("{}", to_json(&m));
            } else {
                println!("p = {}, N = {}, size {}", m.p, m.ambient_dim, m.dim());
                for row in &m.matrix {
                    println!("{}", row.iter().map(u64::to_string).collect::<Vec<_>>().join(" "));
                }
                println!("det = {}", m.determinant);
                println!("bijective = {}", m.bijective);
            }
        }
        Command::CheckProp { p, json, poly: text } => {
            let c = check_key_proposition(&poly(p, &text, nvars)?, &Limits::default())?;
            if json {
                println!("{}", to_json(&c));
            } else {
                println!("hypothesis = {}", c.hypothesis);
                println!("conclusion = {}", c.conclusion);
                println!("consistent = {}", c.consistent);
                println!("matrix size = {}", c.matrix_dim);
            }
            if !c.consistent {
                return Err(Error::TheoremViolation(format!("containment holds but Frobenius is not bijective for {text} mod {p}")));
            }
        }
        Command::Scan { bound, jobs, format, seed, bound_coeff, mu, e_max, timing, model } => {
            let text = std::fs::read_to_string(&model)
                .map_err(|e| Error::Invalid(format!("{}: {e}", model.display())))?;
            let file = parse_model_file(&text)?;
            let cfg = GeneralCombinationConfig {
                seed: seed.unwrap_or(GeneralCombinationConfig::default().seed),
                coefficient_bound: bound_coeff,
                ..GeneralCombinationConfig::default()
            };
            let limits = Limits::default();
            let model = IntegerModel::build(file, cfg, seed.is_none(), &limits)?;
            for w in &model.product.warnings {
                eprintln!("warning: {w}");
            }
            let opts = ScanOptions { jobs, mu, timing, limits, e_max };
            let reports = scan(&model, bound, &opts)?;
            print!("{}", emit_report(&reports, format));
        }
        Command::Profile { n, r, json } => {
            let profile = multiplier_profile(n, r)?;
            if json {
                println!("{}", to_json(&profile));
            } else {
                print!("{}", profile.to_table());
            }
        }
    }
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. }
        | Error::Invalid(_)
        | Error::DimensionMismatch { .. }
        | Error::MixedDomain(_)
        | Error::CharacteristicMismatch { .. }
        | Error::NotHomogeneous(_)
        | Error::Precondition(_)
        | Error::OutOfRange(_)
        | Error::Zero(_) => 2,
        Error::ResourceLimit(_) => 3,
        Error::TheoremViolation(_) | Error::StabilityViolation(_) | Error::ChainInclusion { .. } => 4,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
