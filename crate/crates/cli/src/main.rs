use std::io::{self, Write};
use std::process::ExitCode;

use arcirc::census::write_csv;
use arcirc::decompose::{CheckResult, DecompositionJson, NormalityCheck};
use arcirc::permgroup::{arc_orbit_size, normality_evidence};
use arcirc::suite;
use arcirc::{
    aut_order, automorphism_group, census_constructive, census_exhaustive, ci_isomorphic, decompose_with,
    verify_decomposition, Circulant, Error, Limits,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

#[derive(Parser)]
#[command(name = "arcirc", version, about = "Decomposition, isomorphism and census of arc-transitive circulant digraphs")]
struct Cli {
    /// Largest digraph order handed to the automorphism search.
    #[arg(long, global = true, env = "ARCIRC_AUT_BOUND", default_value_t = Limits::DEFAULT_AUT_BOUND)]
    aut_bound: usize,
    /// Largest group order whose elements may be enumerated.
    #[arg(long, global = true, env = "ARCIRC_GROUP_BUDGET", default_value_t = Limits::DEFAULT_GROUP_BUDGET)]
    group_budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tensor-lexicographic decomposition of a connected arc-transitive circulant.
    Decompose {
        /// "n:s1,s2,..." or {"n":..,"s":[..]}
        circulant: Circulant,
        /// Re-check the result by brute force.
        #[arg(long)]
        verify: bool,
    },
    /// Multiplier isomorphism test; exits 0 when isomorphic, 1 otherwise.
    Iso { first: Circulant, second: Circulant },
    /// Brute-force automorphism group, with the decomposition formula when it applies.
    Aut { circulant: Circulant },
    /// Whether the automorphism group is transitive on arcs.
    ArcTransitive { circulant: Circulant },
    /// Whether the translations are normal in the automorphism group.
    Normal { circulant: Circulant },
    /// All connected arc-transitive circulants of order n, one per isomorphism class.
    Census {
        n: usize,
        #[arg(long, value_enum, default_value_t = Method::Exhaustive)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Worker threads (defaults to all cores).
        #[arg(long, env = "ARCIRC_THREADS")]
        threads: Option<usize>,
        /// Largest order accepted by the exhaustive method.
        #[arg(long, env = "ARCIRC_CENSUS_BOUND", default_value_t = Limits::DEFAULT_CENSUS_BOUND)]
        census_bound: usize,
    },
    /// Tensor product of two circulants or lexicographic product with an edgeless digraph.
    Product {
        #[arg(long, num_args = 2, value_names = ["C1", "C2"], required_unless_present = "lex", conflicts_with = "lex")]
        tensor: Option<Vec<String>>,
        #[arg(long, num_args = 2, value_names = ["C", "B"])]
        lex: Option<Vec<String>>,
    },
    /// Brute-force self-check of every structural fact the library relies on.
    VerifyPaper {
        #[arg(long, default_value_t = 12)]
        max_n: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Exhaustive,
    Constructive,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Serialize)]
struct Verified {
    #[serde(flatten)]
    decomposition: DecompositionJson,
    arc_transitivity_verified: bool,
    normality: NormalityCheck,
    #[serde(skip_serializing_if = "Option::is_none")]
    verification: Option<Vec<CheckResult>>,
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Error> {
    let text = serde_json::to_string(value).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn parse_circulant(text: &str) -> Result<Circulant, Error> {
    text.parse()
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let mut limits = Limits { aut_bound: cli.aut_bound, group_budget: cli.group_budget, ..Limits::default() };
    match cli.command {
        Command::Decompose { circulant, verify } => {
            let out = decompose_with(&circulant, &limits)?;
            let verification = verify.then(|| verify_decomposition(&circulant, &out.decomposition, &limits));
            let passed = verification.as_ref().is_none_or(|r| r.passed());
            print_json(&Verified {
                decomposition: out.decomposition.to_json(),
                arc_transitivity_verified: out.arc_transitivity_verified,
                normality: out.normality,
                verification: verification.map(|r| r.checks),
            })?;
            Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Iso { first, second } => {
            let report = ci_isomorphic(&first, &second, &limits)?;
            print_json(&report)?;
            Ok(if report.isomorphic { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Aut { circulant } => {
            let dense = circulant.to_dense();
            let group = automorphism_group(&dense, limits.aut_bound)?;
            let arc_transitive =
                dense.arc_count() > 0 && arc_orbit_size(&dense, &group)? == dense.arc_count();
            let formula = if arc_transitive && circulant.is_connected() {
                Some(aut_order(&decompose_with(&circulant, &limits)?.decomposition).to_string())
            } else {
                None
            };
            let (base, orbits) = group.base();
            print_json(&json!({
                "order": group.order().to_string(),
                "generators": group.generators(),
                "base": base,
                "basic_orbit_sizes": orbits,
                "arc_transitive": arc_transitive,
                "formula_order": formula,
            }))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::ArcTransitive { circulant } => {
            let dense = circulant.to_dense();
            let group = automorphism_group(&dense, limits.aut_bound)?;
            let orbit = arc_orbit_size(&dense, &group)?;
            print_json(&json!({
                "arc_transitive": orbit == dense.arc_count(),
                "arc_orbit_size": orbit,
                "arc_count": dense.arc_count(),
            }))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Normal { circulant } => {
            let evidence = normality_evidence(&circulant, &limits)?;
            print_json(&json!({
                "normal": evidence.is_normal(),
                "regular_cyclic_subgroups": evidence.regular_cyclic_subgroups,
                "aut_order": evidence.aut_order.to_string(),
                "normalizer_order": evidence.normalizer_order.to_string(),
            }))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Census { n, method, format, threads, census_bound } => {
            limits.census_bound = census_bound;
            let mut builder = rayon::ThreadPoolBuilder::new();
            if let Some(t) = threads {
                builder = builder.num_threads(t);
            }
            let pool = builder.build().map_err(|e| Error::InvalidParameter(e.to_string()))?;
            let entries = pool.install(|| match method {
                Method::Exhaustive => census_exhaustive(n, &limits),
                Method::Constructive => census_constructive(n, &limits),
                Method::Both => {
                    let exhaustive = census_exhaustive(n, &limits)?;
                    let constructive = census_constructive(n, &limits)?;
                    if exhaustive != constructive {
                        return Err(Error::InvariantViolation(format!(
                            "exhaustive census has {} entries, constructive census {}; they disagree",
                            exhaustive.len(),
                            constructive.len()
                        )));
                    }
                    Ok(exhaustive)
                }
            })?;
            match format {
                Format::Csv => write_csv(&entries, io::stdout().lock())?,
                Format::Json => print_json(&entries)?,
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Product { tensor, lex } => {
            if let Some(args) = tensor {
                let (a, b) = (parse_circulant(&args[0])?, parse_circulant(&args[1])?);
                match a.tensor_coprime(&b) {
                    Ok(c) => print_json(&c)?,
                    Err(_) => print_json(&a.to_dense().tensor_product(&b.to_dense()).to_json())?,
                }
            } else if let Some(args) = lex {
                let c = parse_circulant(&args[0])?;
                let b: usize = args[1].parse().map_err(|_| Error::Parse(format!("bad multiplicity {:?}", args[1])))?;
                match c.inflate(b) {
                    Ok(inflated) => print_json(&inflated)?,
                    Err(Error::InvalidParameter(msg)) => return Err(Error::InvalidParameter(msg)),
                    Err(_) => print_json(&c.to_dense().lex_product(b)?.to_json())?,
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyPaper { max_n } => {
            let report = suite::run(max_n, &limits);
            let mut out = io::stdout().lock();
            let width = report.rows.iter().map(|r| r.check.len()).max().unwrap_or(0);
            let io_err = |e: io::Error| Error::InvalidParameter(e.to_string());
            writeln!(out, "{:width$}  {:>7}  result", "check", "cases").map_err(io_err)?;
            for row in &report.rows {
                let verdict = if row.passed { "PASS" } else { "FAIL" };
                let line = format!("{:width$}  {:>7}  {verdict}  {}", row.check, row.cases, row.detail);
                writeln!(out, "{}", line.trim_end()).map_err(io_err)?;
            }
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn report_error(kind: &str, message: &str) -> ExitCode {
    eprintln!("{}", json!({ "error": kind, "message": message }));
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return report_error("usage", e.to_string().trim_end()),
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => report_error(e.kind(), &e.to_string()),
    }
}
