use std::error::Error;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::Rng;
use sat3n::assignments::{
    check_equivalent_composite, derive_pi, eval_aggressive, eval_alg1, eval_composition, AggressiveComposite,
    GeneralizedAssignment,
};
use sat3n::classifier::classify;
use sat3n::dimacs::{emit_dimacs, parse_dimacs};
use sat3n::formula::{Formula, Sign};
use sat3n::generate::{random_assignment, seeded};
use sat3n::metric::{cauchy_bound, diagonalize, distance_composite, regular_cauchy, RegularCauchySeq, SignRule};
use sat3n::normalizer::{format_certificate, normalize};
use sat3n::occurrence::{format_split_certificate, reduce_to_34};
use sat3n::solvers::{brute_force_sat, solve_2sat};

type CliResult = Result<(), Box<dyn Error>>;

#[derive(Parser)]
#[command(name = "sat3n", version, about = "Normal-form 3SAT transformations, traced evaluation and assignment metrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rewrite a width-≤3 formula as an equisatisfiable normal 3-CNF
    Normalize(Transform),
    /// Split variables occurring more than four times
    Reduce34(Transform),
    /// Print the occurrence class of a normal 3-CNF formula
    Classify(Input),
    /// Evaluate a generalized assignment literal by literal
    Eval(Evaluate),
    /// Evaluate, then run the occurrence check when evaluation fails
    Aggressive(Evaluate),
    /// Evaluate a composition of assignments, rightmost first
    Compose(ComposeArgs),
    /// Exact distance between two assignments or compositions
    Distance(Pair),
    /// Check whether two compositions are equivalent under one sign-flip map
    Equiv(Pair),
    /// Decide a formula of width at most 2
    Solve2sat(Input),
    /// Decide a formula by exhaustive enumeration
    Brute(Input),
    /// Tabulate consecutive distances of a regular Cauchy sequence
    Cauchy(CauchyArgs),
    /// Diagonalize a seeded list of regular Cauchy sequences
    Diagonal(DiagonalArgs),
}

#[derive(Args)]
struct Input {
    /// DIMACS file; standard input when absent
    input: Option<PathBuf>,
}

#[derive(Args)]
struct Transform {
    #[command(flatten)]
    input: Input,
    /// Output DIMACS file; standard output when absent
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Write the transformation certificate here
    #[arg(long)]
    cert: Option<PathBuf>,
}

#[derive(Args)]
struct Evaluate {
    #[command(flatten)]
    input: Input,
    /// Signed prefix, e.g. "1 -2 -3 4"
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    assign: String,
    /// Extension beyond the prefix: neg, pos or word:<+->
    #[arg(long, default_value = "neg")]
    tail: String,
    /// Loop bound; the declared variable count when absent
    #[arg(long)]
    n: Option<u32>,
    /// Write the step trace here
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct ComposeArgs {
    #[command(flatten)]
    input: Input,
    /// One part per flag, leftmost first, e.g. --part "1 -2 tail=pos"
    #[arg(long = "part", required = true, allow_hyphen_values = true)]
    parts: Vec<String>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct Pair {
    /// Parts of the first composition, e.g. --a "1 -2" --a "tail=pos"
    #[arg(long = "a", required = true, allow_hyphen_values = true)]
    a: Vec<String>,
    /// Parts of the second composition
    #[arg(long = "b", required = true, allow_hyphen_values = true)]
    b: Vec<String>,
}

#[derive(Args)]
struct CauchyArgs {
    /// Starting assignment
    #[arg(long, default_value = "tail=neg", allow_hyphen_values = true)]
    a0: String,
    /// Sign rule for new positions: neg, pos, word:<+-> or random
    #[arg(long, default_value = "neg")]
    rule: String,
    /// Rows to print
    #[arg(long, default_value_t = 30)]
    count: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct DiagonalArgs {
    /// Number of listed sequences
    #[arg(long, default_value_t = 5)]
    lists: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Normalize(t) => {
            let f = read_formula(&t.input)?;
            let out = normalize(&f)?;
            write_output(t.output.as_deref(), &emit_dimacs(&out.formula))?;
            write_optional(t.cert.as_deref(), &format_certificate(&out.records))
        }
        Command::Reduce34(t) => {
            let f = read_formula(&t.input)?;
            let (g, records) = reduce_to_34(&f)?;
            write_output(t.output.as_deref(), &emit_dimacs(&g))?;
            write_optional(t.cert.as_deref(), &format_split_certificate(&records))
        }
        Command::Classify(i) => {
            let label = classify(&read_formula(&i)?)?;
            write_output(None, &format!("{label}\n"))
        }
        Command::Eval(e) => {
            let (f, a, n) = evaluation_inputs(&e)?;
            let (value, trace) = eval_alg1(&a, &f, n)?;
            write_optional(e.trace.as_deref(), &trace.to_text())?;
            write_output(None, &format!("{value}\n"))
        }
        Command::Aggressive(e) => {
            let (f, a, n) = evaluation_inputs(&e)?;
            let (value, trace) = eval_aggressive(&a, &f, n)?;
            write_optional(e.trace.as_deref(), &trace.to_text())?;
            write_output(None, &format!("{value}\n"))
        }
        Command::Compose(c) => {
            let f = read_formula(&c.input)?;
            let composite = AggressiveComposite::new(parse_parts(&c.parts)?);
            let (value, trace) = eval_composition(&composite, &f, loop_bound(&f, c.n))?;
            write_optional(c.trace.as_deref(), &trace.to_text())?;
            write_output(None, &format!("{value}\n"))
        }
        Command::Distance(p) => {
            let d = distance_composite(&parse_parts(&p.a)?, &parse_parts(&p.b)?);
            write_output(None, &format!("{d}\n"))
        }
        Command::Equiv(p) => {
            let (a, b) = (parse_parts(&p.a)?, parse_parts(&p.b)?);
            let equivalent =
                check_equivalent_composite(&AggressiveComposite::new(a.clone()), &AggressiveComposite::new(b.clone()))?;
            let mut out = format!("{equivalent}\n");
            for (i, (x, y)) in a.iter().zip(&b).enumerate() {
                out.push_str(&format!("pi{}\t{}\n", i + 1, derive_pi(x, y)));
            }
            write_output(None, &out)
        }
        Command::Solve2sat(i) => write_output(None, &format!("{}\n", solve_2sat(&read_formula(&i)?)?)),
        Command::Brute(i) => write_output(None, &format!("{}\n", brute_force_sat(&read_formula(&i)?)?)),
        Command::Cauchy(c) => {
            let seq = regular_cauchy(c.a0.parse()?, sign_rule(&c.rule, c.seed)?);
            let rows: String = (1..=c.count)
                .map(|n| format!("{n}\t{}\t{}\n", seq.distance(n, n + 1), cauchy_bound(n)))
                .collect();
            write_output(None, &rows)
        }
        Command::Diagonal(d) => {
            let mut rng = seeded(d.seed);
            let listed: Vec<RegularCauchySeq> = (0..d.lists)
                .map(|_| {
                    let signs = (0..d.lists + 2).map(|_| Sign::from_bool(rng.gen())).collect();
                    regular_cauchy(random_assignment(&mut rng, 4, 2), SignRule::listed(signs))
                })
                .collect();
            let diagonal = diagonalize(&listed)?;
            let mut out = String::new();
            for (s, k) in listed.iter().zip(1u32..) {
                let mine = AggressiveComposite::new(vec![diagonal.a0().clone(), diagonal.term(k)]);
                let equivalent = check_equivalent_composite(&mine, &s.element(k))?;
                out.push_str(&format!("{k}\t{}\t{}\t{equivalent}\n", diagonal.term(k), s.term(k)));
            }
            write_output(None, &out)
        }
    }
}

fn read_formula(input: &Input) -> Result<Formula, Box<dyn Error>> {
    let text = match &input.input {
        Some(path) => fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?,
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    Ok(parse_dimacs(&text)?)
}

fn loop_bound(f: &Formula, n: Option<u32>) -> u32 {
    n.unwrap_or_else(|| f.num_vars().max(1))
}

fn evaluation_inputs(e: &Evaluate) -> Result<(Formula, GeneralizedAssignment, u32), Box<dyn Error>> {
    let f = read_formula(&e.input)?;
    let a = GeneralizedAssignment::parse(&e.assign, &e.tail)?;
    let n = loop_bound(&f, e.n);
    Ok((f, a, n))
}

fn parse_parts(parts: &[String]) -> Result<Vec<GeneralizedAssignment>, Box<dyn Error>> {
    Ok(parts.iter().map(|p| p.parse()).collect::<Result<_, _>>()?)
}

fn sign_rule(rule: &str, seed: u64) -> Result<SignRule, Box<dyn Error>> {
    if rule == "random" {
        let mut rng = seeded(seed);
        let signs = (0..256).map(|_| Sign::from_bool(rng.gen())).collect();
        return Ok(SignRule::listed(signs));
    }
    // Reuse the tail grammar: a periodic word repeated from position 1.
    let word = GeneralizedAssignment::parse("", rule)?;
    Ok(SignRule::Custom(std::sync::Arc::new(move |p| word.sign(p))))
}

fn write_output(path: Option<&Path>, text: &str) -> CliResult {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display()).into()),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(out.flush()?)
        }
    }
}

fn write_optional(path: Option<&Path>, text: &str) -> CliResult {
    match path {
        Some(_) => write_output(path, text),
        None => Ok(()),
    }
}
