//! Command-line front end: membership queries, composition, closure
//! runs, oracle-vs-predicate comparison, witness search/verification,
//! and the named check suites.
//!
//! Exit codes: 0 pass/true, 1 fail/false, 2 usage or configuration error.

use std::process::ExitCode;
use std::rc::Rc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nearring::checks;
use nearring::closure::{compare_closure_vs_predicate, saturate, ClosureConfig};
use nearring::predicates::{member, GeneratorBasis};
use nearring::witness::{
    eval_term, parse_term, search_witness, Environment, SearchBounds, Term,
};
use nearring::IntPoly;

#[derive(Parser)]
#[command(name = "nearring", version, about = "The composition nearring of integer polynomials")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Args)]
struct ClosureOpts {
    #[arg(long, default_value_t = 16)]
    degree_cap: usize,
    #[arg(long)]
    working_degree: Option<usize>,
    #[arg(long, default_value_t = 3)]
    coeff_cap: i64,
    #[arg(long, default_value_t = 3)]
    combo_width: usize,
    #[arg(long, default_value_t = 16)]
    max_rounds: usize,
}

impl ClosureOpts {
    fn config(&self) -> ClosureConfig {
        let mut cfg = ClosureConfig::new(self.degree_cap);
        cfg.working_degree = self.working_degree;
        cfg.coeff_cap = self.coeff_cap;
        cfg.combo_width = self.combo_width;
        cfg.max_rounds = self.max_rounds;
        cfg
    }
}

#[derive(Subcommand)]
enum Command {
    /// Membership of a polynomial in the subnearring generated by a basis
    Member {
        #[arg(long)]
        basis: GeneratorBasis,
        poly: String,
    },
    /// Compose two polynomials (left then right)
    Compose { left: String, right: String },
    /// Saturate a generator list and dump the HNF lattice
    Closure {
        #[arg(long = "gen", required = true)]
        gens: Vec<String>,
        #[command(flatten)]
        opts: ClosureOpts,
    },
    /// Differential test: saturation oracle vs membership predicate
    Compare {
        #[arg(long)]
        basis: GeneratorBasis,
        #[command(flatten)]
        opts: ClosureOpts,
    },
    /// Search for a derivation term certifying target membership
    Witness {
        #[arg(long = "gen", required = true)]
        gens: Vec<String>,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, default_value_t = 3)]
        coeff_cap: i64,
        target: String,
    },
    /// Verify a derivation term against a claimed value
    Verify {
        #[arg(long = "gen", required = true)]
        gens: Vec<String>,
        #[arg(long)]
        claim: String,
        /// Bind the 'id' leaf to the left identity x
        #[arg(long)]
        identity: bool,
        term: String,
    },
    /// Run a named check suite
    Check {
        suite: String,
        #[arg(long, default_value_t = 2)]
        j: u32,
        #[arg(long, default_value_t = 30)]
        degree_cap: usize,
    },
}

fn parse_poly(src: &str) -> Result<IntPoly, String> {
    src.parse().map_err(|e| {
        format!(
            "{e}\ngrammar: poly := term (('+'|'-') term)*, term := [integer]['x'['^' natural]]"
        )
    })
}

fn parse_polys(srcs: &[String]) -> Result<Vec<IntPoly>, String> {
    srcs.iter().map(|s| parse_poly(s)).collect()
}

fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Member { basis, poly } => {
            let q = parse_poly(&poly)?;
            let verdict = member(basis, &q);
            if cli.format == Format::Machine {
                println!("MEMBER {}", verdict.member);
            } else {
                println!("{}", verdict.report());
            }
            Ok(verdict.member)
        }
        Command::Compose { left, right } => {
            let l = parse_poly(&left)?;
            let r = parse_poly(&right)?;
            println!("{}", l.compose(&r));
            Ok(true)
        }
        Command::Closure { gens, opts } => {
            let gens = parse_polys(&gens)?;
            let lat = saturate(&gens, &opts.config()).map_err(|e| e.to_string())?;
            print!("{lat}");
            Ok(true)
        }
        Command::Compare { basis, opts } => {
            let report = compare_closure_vs_predicate(basis, &opts.config())
                .map_err(|e| e.to_string())?;
            if cli.format == Format::Machine {
                let line = report.to_string();
                println!("{}", line.lines().last().unwrap());
            } else {
                println!("{report}");
            }
            Ok(report.passed())
        }
        Command::Witness { gens, depth, coeff_cap, target } => {
            let gens = parse_polys(&gens)?;
            let target = parse_poly(&target)?;
            let bounds = SearchBounds { max_depth: depth, coeff_cap };
            match search_witness(&target, &gens, bounds) {
                Some(t) => {
                    println!("WITNESS {t}");
                    Ok(true)
                }
                None => {
                    println!("WITNESS absent");
                    Ok(false)
                }
            }
        }
        Command::Verify { gens, claim, identity, term } => {
            let gens = parse_polys(&gens)?;
            let claim = parse_poly(&claim)?;
            let term: Rc<Term> = parse_term(&term).map_err(|e| e.to_string())?;
            let env = if identity {
                Environment::with_identity(gens)
            } else {
                Environment::new(gens)
            };
            let value = eval_term(&term, &env).map_err(|e| e.to_string())?;
            let ok = value == claim;
            if cli.format == Format::Text {
                println!("evaluates to {value}");
            }
            println!("VERIFY {ok}");
            Ok(ok)
        }
        Command::Check { suite, j, degree_cap } => {
            let outcomes = match suite.as_str() {
                "separation" => checks::check_separation(),
                "compare" => {
                    let mut v = checks::check_compare_equalities();
                    v.extend(checks::check_compare_containment());
                    v
                }
                "x3-fixtures" => checks::check_x3_fixtures(),
                "theorem-4.1" => vec![checks::check_theorem_41(j, degree_cap)],
                "lemmas" => checks::check_lemma_sweeps(),
                "pullback" => checks::check_pullback(1000, 7),
                "witnesses" => checks::check_witnesses(),
                "properties" => checks::check_properties(10_000, 11),
                "chain" => checks::check_chain(),
                "all" => checks::check_all(),
                other => {
                    return Err(format!(
                        "unknown suite '{other}' (expected separation, compare, x3-fixtures, \
                         theorem-4.1, lemmas, pullback, witnesses, properties, chain, all)"
                    ))
                }
            };
            let mut all_pass = true;
            for o in &outcomes {
                println!("{o}");
                all_pass &= o.passed;
            }
            println!(
                "RESULT check {} {}",
                suite,
                if all_pass { "PASS" } else { "FAIL" }
            );
            Ok(all_pass)
        }
    }
}

fn main() -> ExitCode {
    if let Ok(n) = std::env::var("NEARRING_THREADS") {
        if let Ok(n) = n.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
