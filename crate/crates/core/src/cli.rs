//! Command-line front end. Every command writes a human-readable report
//! ending in one `RESULT:` line; the exit code is 0 for success or a true
//! verdict, 1 for a false verdict and 2 for unreadable or ill-typed input.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::algebraic::{check_alg, to_alg, to_qexp};
use crate::linalg::{ComplexMatrix, DEFAULT_TOL, PSD_TOL};
use crate::opentype::{decide_equiv, equiv_basis_bijection, normalize_type};
use crate::rewrite::{prove_equiv_with, SearchLimits};
use crate::semantics::{denote_in, equiv_report};
use crate::sexp::{parse_open_type, parse_source, print_ctx, ParseError, Source};
use crate::suites::{run_suite, Suite};
use crate::syntax::{Assignment, Ctx, FinType, QExp};
use crate::typecheck::infer;

#[derive(Debug, Parser)]
#[command(name = "qeq", version, about = "Linear quantum expressions: typing, semantics and equations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Infer the type of a term file.
    Typecheck { file: PathBuf },
    /// Apply a term's superoperator to a density matrix.
    Eval {
        file: PathBuf,
        /// Density matrix over the term's context, as JSON. Defaults to the
        /// 1x1 identity for closed terms.
        input: Option<PathBuf>,
    },
    /// Compare two terms under the density-matrix semantics.
    Equiv {
        file1: PathBuf,
        file2: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Search for a rewrite derivation between two terms.
    Prove {
        file1: PathBuf,
        file2: PathBuf,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Normal form of an open type, with the witnessing equivalence.
    NormalizeType { ty: String },
    /// Decide whether two open types are equivalent.
    DecideEquiv { ty1: String, ty2: String },
    /// Translate between expressions and algebraic terms.
    Translate {
        #[command(flatten)]
        direction: Direction,
        file: PathBuf,
        /// Continuation name used for `--to-alg`.
        #[arg(long, default_value = "k")]
        cont: String,
    },
    /// Run a randomised equation suite.
    AxiomsCheck {
        /// One of the suite names, or `all`.
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Direction {
    #[arg(long)]
    pub to_alg: bool,
    #[arg(long)]
    pub to_qexp: bool,
}

/// Exit code and report text.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub report: String,
}

/// Input that could not be read, parsed or typed.
struct Rejected(String);

impl From<std::fmt::Error> for Rejected {
    fn from(e: std::fmt::Error) -> Self {
        Rejected(e.to_string())
    }
}

type CmdResult = Result<(bool, String, String), Rejected>;

fn read(path: &Path) -> Result<String, Rejected> {
    fs::read_to_string(path).map_err(|e| Rejected(format!("{}: {e}", path.display())))
}

fn located(path: &Path, e: ParseError) -> Rejected {
    Rejected(format!("{}:{e}", path.display()))
}

fn source(path: &Path) -> Result<Source, Rejected> {
    parse_source(&read(path)?).map_err(|e| located(path, e))
}

fn term_file(path: &Path) -> Result<(Ctx, QExp), Rejected> {
    let src = source(path)?;
    let e = src.qexp().map_err(|e| located(path, e))?;
    Ok((src.ctx, e))
}

/// Both files must agree on the context when both give one.
fn term_pair(p1: &Path, p2: &Path) -> Result<(Ctx, QExp, QExp), Rejected> {
    let (c1, e1) = term_file(p1)?;
    let (c2, e2) = term_file(p2)?;
    let ctx = match (c1.is_empty(), c2.is_empty()) {
        (_, true) => c1,
        (true, false) => c2,
        _ if c1 == c2 => c1,
        _ => return Err(Rejected(format!("contexts differ: {c1} vs {c2}"))),
    };
    Ok((ctx, e1, e2))
}

fn typed(ctx: &Ctx, e: &QExp) -> Result<crate::syntax::QType, Rejected> {
    infer(ctx, e).map_err(|err| Rejected(format!("{}: {}", err.kind, err.detail)))
}

pub fn run(cli: Cli) -> Outcome {
    let result = match cli.command {
        Command::Typecheck { file } => typecheck(&file),
        Command::Eval { file, input } => eval(&file, input.as_deref()),
        Command::Equiv { file1, file2, tol } => equiv(&file1, &file2, tol),
        Command::Prove { file1, file2, depth, tol } => prove(&file1, &file2, depth, tol),
        Command::NormalizeType { ty } => normalize(&ty),
        Command::DecideEquiv { ty1, ty2 } => decide(&ty1, &ty2),
        Command::Translate { direction, file, cont } => translate(direction.to_alg, &file, &cont),
        Command::AxiomsCheck { suite, seed, count, tol } => axioms_check(&suite, seed, count, tol),
    };
    match result {
        Ok((ok, mut report, verdict)) => {
            report.push_str(&format!("RESULT: {verdict}\n"));
            Outcome { code: if ok { 0 } else { 1 }, report }
        }
        Err(Rejected(msg)) => Outcome { code: 2, report: format!("error: {msg}\nRESULT: error\n") },
    }
}

fn typecheck(file: &Path) -> CmdResult {
    let (ctx, e) = term_file(file)?;
    let ty = typed(&ctx, &e)?;
    Ok((true, format!("{} ⊢ {e}\n  : {ty}\n", print_ctx(&ctx)), format!("ok {ty}")))
}

fn eval(file: &Path, input: Option<&Path>) -> CmdResult {
    let (ctx, e) = term_file(file)?;
    let ty = typed(&ctx, &e)?;
    let rho = match input {
        Some(p) => {
            let json: serde_json::Value = serde_json::from_str(&read(p)?).map_err(|err| Rejected(format!("{}: {err}", p.display())))?;
            ComplexMatrix::from_json(&json).map_err(|err| Rejected(format!("{}: {err}", p.display())))?
        }
        None => ComplexMatrix::identity(1),
    };
    if !rho.is_density(DEFAULT_TOL, PSD_TOL) {
        return Err(Rejected("input is not a density matrix".into()));
    }
    let f = denote_in(&ctx, &e, &ty).map_err(|err| Rejected(err.to_string()))?;
    if rho.rows() != f.src_dim() {
        return Err(Rejected(format!("input has dimension {}, the context has {}", rho.rows(), f.src_dim())));
    }
    let out = f.apply(&rho).map_err(|err| Rejected(err.to_string()))?;
    let trace = out.trace().re;
    Ok((true, format!("type: {ty}\noutput: {}\n", out.to_json()), format!("ok trace {trace:.9}")))
}

fn equiv(p1: &Path, p2: &Path, tol: f64) -> CmdResult {
    let (ctx, e1, e2) = term_pair(p1, p2)?;
    let t1 = typed(&ctx, &e1)?;
    let t2 = typed(&ctx, &e2)?;
    if t1 != t2 {
        return Err(Rejected(format!("types differ: {t1} vs {t2}")));
    }
    let v = equiv_report(&e1, &e2, &ctx, tol).map_err(|err| Rejected(err.to_string()))?;
    let mut report = format!("type: {}\n", v.ty);
    if let Some(d) = &v.discrepancy {
        writeln!(report, "max discrepancy: {:.3e}", d.magnitude)?;
        if !v.equal {
            writeln!(report, "counterexample:\n  ctx: {}\n  lhs: {e1}\n  rhs: {e2}", print_ctx(&ctx))?;
            writeln!(
                report,
                "  input E_{}{} entry ({}, {}): {} vs {}",
                d.input.0, d.input.1, d.output.0, d.output.1, d.left, d.right
            )?;
        }
    }
    Ok((v.equal, report, if v.equal { "equal".into() } else { "different".into() }))
}

fn prove(p1: &Path, p2: &Path, depth: usize, tol: f64) -> CmdResult {
    let (ctx, e1, e2) = term_pair(p1, p2)?;
    typed(&ctx, &e1)?;
    typed(&ctx, &e2)?;
    let limits = SearchLimits { tol, ..SearchLimits::with_depth(depth) };
    match prove_equiv_with(&e1, &e2, &ctx, &limits).map_err(|err| Rejected(err.to_string()))? {
        Some(d) => Ok((true, format!("derivation in {} steps:\n{d}", d.len()), format!("proved {}", d.len()))),
        None => Ok((false, format!("no derivation within {depth} steps\n"), "not-found".into())),
    }
}

/// Cardinalities tried when checking that a witness is a bijection.
const WITNESS_CARDS: [FinType; 3] = [FinType::Unit, FinType::Bool, FinType::Fin(3)];

fn normalize(text: &str) -> CmdResult {
    let ty = parse_open_type(text).map_err(|e| Rejected(e.to_string()))?;
    let (nf, witness) = normalize_type(&ty);
    let mut report = format!("type: {ty}\nnormal form: {nf}\nas a type: {}\nwitness: {witness}\n", nf.to_type());
    for card in WITNESS_CARDS {
        let m = ty.vars().into_iter().fold(Assignment::new(), |m, x| m.with(&x, card.clone()));
        let perm = equiv_basis_bijection(&witness, &m).map_err(|e| Rejected(e.to_string()))?;
        writeln!(report, "bijection at every variable = {card}: {perm:?}")?;
    }
    Ok((true, report, format!("normalized {nf}")))
}

fn decide(t1: &str, t2: &str) -> CmdResult {
    let a = parse_open_type(t1).map_err(|e| Rejected(e.to_string()))?;
    let b = parse_open_type(t2).map_err(|e| Rejected(e.to_string()))?;
    match decide_equiv(&a, &b) {
        Some(f) => Ok((true, format!("witness: {f}\n"), "equivalent".into())),
        None => {
            let (na, _) = normalize_type(&a);
            let (nb, _) = normalize_type(&b);
            Ok((false, format!("normal forms differ:\n  {na}\n  {nb}\n"), "not-equivalent".into()))
        }
    }
}

fn translate(to_alg_dir: bool, file: &Path, cont: &str) -> CmdResult {
    let src = source(file)?;
    if to_alg_dir {
        let e = src.qexp().map_err(|err| located(file, err))?;
        let ty = typed(&src.ctx, &e)?;
        let t = to_alg(&src.ctx, &e, cont).map_err(|err| Rejected(err.to_string()))?;
        let report = format!("{}\n(cont {cont} {ty})\n{t}\n", print_ctx(&src.ctx));
        Ok((true, report, "translated".into()))
    } else {
        let Some((k, goal)) = src.cont.clone() else {
            return Err(Rejected(format!("{}: an algebraic term needs a (cont k T) form", file.display())));
        };
        let t = src.alg().map_err(|err| located(file, err))?;
        check_alg(&Ctx::singleton(&k, goal), &src.ctx, &t).map_err(|err| Rejected(err.to_string()))?;
        let e = to_qexp(&t, &k).map_err(|err| Rejected(err.to_string()))?;
        Ok((true, format!("{}\n{e}\n", print_ctx(&src.ctx)), "translated".into()))
    }
}

fn axioms_check(name: &str, seed: u64, count: usize, tol: f64) -> CmdResult {
    let suites: Vec<Suite> = if name.eq_ignore_ascii_case("all") {
        Suite::ALL.to_vec()
    } else {
        let known = Suite::ALL.map(Suite::name).join(", ");
        vec![Suite::from_name(name).ok_or_else(|| Rejected(format!("unknown suite {name}; known: {known}, all")))?]
    };
    let mut report = String::new();
    let mut ok = true;
    let mut instances = 0;
    let mut failures = 0;
    for suite in suites {
        let r = run_suite(suite, seed, count, tol);
        write!(report, "{r}")?;
        ok &= r.passed();
        instances += r.instances();
        failures += r.failures() + r.hygiene_failures.len();
    }
    let verdict = if ok { format!("pass {instances} instances") } else { format!("fail {failures} of {instances}") };
    Ok((ok, report, verdict))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        run(Cli::try_parse_from(std::iter::once("qeq").chain(args.iter().copied())).expect("arguments parse"))
    }

    #[test]
    fn decide_equiv_verdicts() {
        let yes = run_args(&["decide-equiv", "(tensor (tvar X) (tvar Y))", "(tensor (tvar Y) (tvar X))"]);
        assert_eq!(yes.code, 0, "{}", yes.report);
        assert!(yes.report.ends_with("RESULT: equivalent\n"));
        let no = run_args(&["decide-equiv", "(tvar X)", "(tensor (tvar X) (tvar X))"]);
        assert_eq!(no.code, 1, "{}", no.report);
    }

    #[test]
    fn bad_types_exit_with_two() {
        let out = run_args(&["normalize-type", "(tensor (tvar X)"]);
        assert_eq!(out.code, 2);
        assert!(out.report.contains("RESULT: error"));
    }

    #[test]
    fn unknown_suite_is_rejected() {
        let out = run_args(&["axioms-check", "nope", "--count", "1"]);
        assert_eq!(out.code, 2);
    }
}
