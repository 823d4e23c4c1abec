//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use qeq_core::gen::TermGen;
use qeq_core::linalg::DEFAULT_TOL;
use qeq_core::opentype::{basis_card, decide_equiv, equiv_basis_bijection, normalize_type};
use qeq_core::rewrite::{derived_rule_suite, prove_equiv_with, SearchLimits};
use qeq_core::semantics::equiv_report;
use qeq_core::sexp::parse_qtype;
use qeq_core::suites::{run_suite, Suite, SuiteReport};
use qeq_core::syntax::{Assignment, Ctx, Equiv, FinType, OpenType, QExp, QType};
use qeq_core::typecheck::infer;
use rand::Rng;

const SEED: u64 = 20_241;
const SUITE_BUDGET: Duration = Duration::from_secs(60);

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn new(ok: bool, detail: impl Into<String>) -> Self {
        Outcome { ok, detail: detail.into() }
    }
}

/// Suite reports, run once and shared by the criteria that read them.
struct Runs {
    reports: BTreeMap<&'static str, (SuiteReport, Duration)>,
}

impl Runs {
    fn new() -> Self {
        Runs { reports: BTreeMap::new() }
    }

    fn get(&mut self, suite: Suite, count: usize) -> &(SuiteReport, Duration) {
        self.reports.entry(suite.name()).or_insert_with(|| {
            let start = Instant::now();
            let r = run_suite(suite, SEED, count, DEFAULT_TOL);
            (r, start.elapsed())
        })
    }
}

/// All cases hold, every non-vacuous case saw at least `min` instances and
/// the suite finished within budget.
fn suites_hold(runs: &mut Runs, suites: &[Suite], min: usize) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for &s in suites {
        let (r, took) = runs.get(s, min);
        let good = r.equations_hold() && r.min_checked() >= min && *took < SUITE_BUDGET;
        ok &= good;
        parts.push(format!("{s}: {} instances, {} failed, {:.1}s", r.instances(), r.failures(), took.as_secs_f64()));
        if !good {
            eprintln!("{r}");
        }
    }
    Outcome::new(ok, parts.join("; "))
}

fn measurement_is_not_identity() -> Outcome {
    let ctx = Ctx::singleton("q", QType::qubit());
    let id = QExp::var("q");
    let reput = QExp::letbang(QExp::var("q"), vec![QExp::put_bool(false), QExp::put_bool(true)]);
    let v = match equiv_report(&id, &reput, &ctx, DEFAULT_TOL) {
        Ok(v) => v,
        Err(e) => return Outcome::new(false, e.to_string()),
    };
    let Some(d) = v.discrepancy else {
        return Outcome::new(false, "no discrepancy reported");
    };
    let off_diagonal = d.input.0 != d.input.1;
    let ok = !v.equal && off_diagonal && (d.magnitude - 1.0).abs() <= 1e-9;
    Outcome::new(
        ok,
        format!("verdict {}, discrepancy {:.12} on input E_{}{}", if v.equal { "equal" } else { "different" }, d.magnitude, d.input.0, d.input.1),
    )
}

/// Occurrences of each variable; a basis cardinality is a polynomial whose
/// degree in a variable is at most its number of occurrences.
fn occurrences(ty: &OpenType, acc: &mut BTreeMap<String, usize>) {
    match ty {
        OpenType::Var(x) => *acc.entry(x.clone()).or_default() += 1,
        OpenType::Lower(_) => {}
        OpenType::Tensor(a, b) | OpenType::Oplus(a, b) => {
            occurrences(a, acc);
            occurrences(b, acc);
        }
    }
}

fn grid(vars: &[String], degree: usize) -> Vec<Assignment> {
    let mut out = vec![Assignment::new()];
    for x in vars {
        out = out
            .into_iter()
            .flat_map(|m| (0..=degree).map(move |n| m.clone().with(x, FinType::Fin(n))))
            .collect();
    }
    out
}

/// Two rig types are equivalent exactly when their cardinality polynomials
/// agree, and polynomials of bounded degree agree when they agree on a grid
/// one wider than the degree.
fn brute_force_equivalent(a: &OpenType, b: &OpenType) -> bool {
    let mut occ = BTreeMap::new();
    occurrences(a, &mut occ);
    occurrences(b, &mut occ);
    let degree = occ.values().copied().max().unwrap_or(0);
    let vars: Vec<String> = occ.into_keys().collect();
    grid(&vars, degree).iter().all(|m| basis_card(a, m).ok() == basis_card(b, m).ok())
}

/// `f` runs from `src` to `dst` and is a bijection on basis values at every
/// assignment in the grid.
fn witness_valid(f: &Equiv, src: &OpenType, dst: &OpenType) -> Result<(), String> {
    let (s, d) = f.endpoints().map_err(|e| e.to_string())?;
    if &s != src || &d != dst {
        return Err(format!("witness runs {s} -> {d}"));
    }
    let vars: Vec<String> = src.vars().union(&dst.vars()).cloned().collect();
    for m in grid(&vars, 3) {
        let n = basis_card(src, &m).map_err(|e| e.to_string())?;
        let perm = equiv_basis_bijection(f, &m).map_err(|e| e.to_string())?;
        let mut seen = vec![false; n];
        if perm.len() != n || basis_card(dst, &m).ok() != Some(n) {
            return Err(format!("sizes differ at {m:?}"));
        }
        for &i in &perm {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(format!("not a bijection at {m:?}: {perm:?}"));
            }
        }
    }
    Ok(())
}

const PAIRS: usize = 500;
const MAX_CARD: usize = 6;

fn normal_forms_and_decision() -> Outcome {
    let mut g = TermGen::new(SEED);
    let vars = ["X", "Y"];
    let bools = Assignment::new().with("X", FinType::Bool).with("Y", FinType::Bool);
    let small = |g: &mut TermGen| loop {
        let t = g.open_type(&vars, 3);
        if basis_card(&t, &bools).is_ok_and(|n| n <= MAX_CARD) {
            return t;
        }
    };
    let (mut equivalent, mut disagreements, mut bad_witnesses) = (0, Vec::new(), Vec::new());
    for i in 0..PAIRS {
        let a = small(&mut g);
        let b = if i % 2 == 0 {
            let n = g.rng().gen_range(1..=6);
            let f = g.equiv_from(&a, n);
            f.endpoints().expect("generated chains are well formed").1
        } else {
            small(&mut g)
        };
        for t in [&a, &b] {
            let (nf, w) = normalize_type(t);
            if let Err(e) = witness_valid(&w, t, &nf.to_type()) {
                bad_witnesses.push(format!("normalize {t}: {e}"));
            }
        }
        let decided = decide_equiv(&a, &b);
        if let Some(f) = &decided {
            if let Err(e) = witness_valid(f, &a, &b) {
                bad_witnesses.push(format!("decide {a} ~ {b}: {e}"));
            }
        }
        let truth = brute_force_equivalent(&a, &b);
        equivalent += usize::from(truth);
        if decided.is_some() != truth {
            disagreements.push(format!("{a} vs {b}: decided {}, brute force {truth}", decided.is_some()));
        }
    }
    for d in disagreements.iter().chain(&bad_witnesses).take(5) {
        eprintln!("  {d}");
    }
    Outcome::new(
        disagreements.is_empty() && bad_witnesses.is_empty(),
        format!(
            "{PAIRS} pairs ({equivalent} equivalent), {} disagreements, {} invalid witnesses",
            disagreements.len(),
            bad_witnesses.len()
        ),
    )
}

const DERIVED_DEPTH: usize = 8;

fn derived_rules_close() -> Outcome {
    let suite = derived_rule_suite();
    let mut failed = Vec::new();
    for r in &suite {
        let depth = r.depth.min(DERIVED_DEPTH);
        let limits = SearchLimits::with_depth(depth).without(&r.excluded);
        match prove_equiv_with(&r.lhs, &r.rhs, &r.ctx, &limits) {
            Ok(Some(d)) => match d.replay(&r.ctx) {
                Ok(end) if end.alpha_eq(&r.rhs) => {}
                Ok(_) => failed.push(format!("{}: replay ends elsewhere", r.name)),
                Err(e) => failed.push(format!("{}: {e}", r.name)),
            },
            Ok(None) => failed.push(format!("{}: no derivation within {depth}", r.name)),
            Err(e) => failed.push(format!("{}: {e}", r.name)),
        }
    }
    for f in &failed {
        eprintln!("  {f}");
    }
    Outcome::new(failed.is_empty(), format!("{} derived rules, {} not closed", suite.len(), failed.len()))
}

fn linear_typing() -> Outcome {
    let mut wrong = Vec::new();
    for (text, kind) in common::NON_LINEAR {
        let (ctx, e) = common::term(text);
        match infer(&ctx, &e) {
            Err(err) if err.kind == kind => {}
            other => wrong.push(format!("{text}: expected {kind}, got {other:?}")),
        }
    }
    for (text, ty) in common::LINEAR {
        let (ctx, e) = common::term(text);
        let want = parse_qtype(ty).expect("expected type parses");
        match infer(&ctx, &e) {
            Ok(t) if t == want => {}
            other => wrong.push(format!("{text}: expected {want}, got {other:?}")),
        }
    }
    for w in &wrong {
        eprintln!("  {w}");
    }
    Outcome::new(
        wrong.is_empty(),
        format!("{} rejected and {} accepted terms, {} wrong", common::NON_LINEAR.len(), common::LINEAR.len(), wrong.len()),
    )
}

fn hygiene(runs: &Runs) -> Outcome {
    let superops: usize = runs.reports.values().map(|(r, _)| r.superops).sum();
    let bad: Vec<&String> = runs.reports.values().flat_map(|(r, _)| &r.hygiene_failures).collect();
    for b in bad.iter().take(5) {
        eprintln!("  {b}");
    }
    Outcome::new(
        bad.is_empty() && superops > 0,
        format!("{superops} superoperators from {} suites, {} violations", runs.reports.len(), bad.len()),
    )
}

fn main() {
    let mut runs = Runs::new();
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    let mut record = |n: usize, what: &'static str, o: Outcome| {
        println!("{} criterion {n:>2} ({what}): {}", if o.ok { "PASS" } else { "FAIL" }, o.detail);
        results.push((n, what, o));
    };

    use Suite::*;
    record(1, "beta, eta and commuting conversions", suites_hold(&mut runs, &[Beta, Eta, CommutingConversions], 100));
    record(2, "structural and groupoid equations", suites_hold(&mut runs, &[Structural, Groupoid], 100));
    record(3, "gate equations and lifted equivalences", suites_hold(&mut runs, &[Gates, Axiom20], 100));
    record(4, "lifted generator catalog", suites_hold(&mut runs, &[LiftedSemantics], 100));
    record(5, "measurement is not the identity", measurement_is_not_identity());
    record(6, "normal forms and equivalence decision", normal_forms_and_decision());
    let algebraic = suites_hold(&mut runs, &[Algebraic], 50);
    let trips = suites_hold(&mut runs, &[RoundTrip], 200);
    record(7, "algebraic axioms and round trips", Outcome::new(algebraic.ok && trips.ok, format!("{}; {}", algebraic.detail, trips.detail)));
    record(8, "derived rules close by search", derived_rules_close());
    record(9, "linear typing corpus", linear_typing());
    record(10, "numerical hygiene", hygiene(&runs));

    let failed = results.iter().filter(|(_, _, o)| !o.ok).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
