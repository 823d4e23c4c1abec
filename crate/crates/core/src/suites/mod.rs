//! Randomised sweeps that instantiate families of equations and compare both
//! sides under the density-matrix semantics. Every superoperator computed on
//! the way is also checked for complete positivity and trace bounds.

mod algebraic;
mod catalog;
mod gates;
mod lifted;

use std::fmt;

use crate::gen::{GenConfig, TermGen};
use crate::linalg::{Superoperator, PSD_TOL};
use crate::semantics::denote_in;
use crate::syntax::{Ctx, QExp, QType};
use crate::typecheck::infer;

/// Both sides of one equation instance.
#[derive(Clone, Debug)]
pub struct Instance {
    pub ctx: Ctx,
    pub lhs: QExp,
    pub rhs: QExp,
}

impl Instance {
    pub fn new(ctx: Ctx, lhs: QExp, rhs: QExp) -> Self {
        Instance { ctx, lhs, rhs }
    }
}

type Make = Box<dyn Fn(&mut TermGen) -> Result<Instance, String>>;

enum CaseKind {
    Random(Make),
    /// Holds because the relevant space is empty; the check confirms that.
    Vacuous(Box<dyn Fn() -> Result<(), String>>),
}

pub(crate) struct Case {
    name: String,
    kind: CaseKind,
}

impl Case {
    fn random(name: impl Into<String>, make: impl Fn(&mut TermGen) -> Result<Instance, String> + 'static) -> Self {
        Case { name: name.into(), kind: CaseKind::Random(Box::new(make)) }
    }

    fn vacuous(name: impl Into<String>, check: impl Fn() -> Result<(), String> + 'static) -> Self {
        Case { name: name.into(), kind: CaseKind::Vacuous(Box::new(check)) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Beta,
    CommutingConversions,
    Eta,
    Structural,
    Groupoid,
    Gates,
    LiftedSemantics,
    Axiom20,
    Algebraic,
    RoundTrip,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Beta,
        Suite::CommutingConversions,
        Suite::Eta,
        Suite::Structural,
        Suite::Groupoid,
        Suite::Gates,
        Suite::LiftedSemantics,
        Suite::Axiom20,
        Suite::Algebraic,
        Suite::RoundTrip,
    ];

    /// Command-line name.
    pub fn name(self) -> &'static str {
        match self {
            Suite::Beta => "fig2-beta",
            Suite::CommutingConversions => "fig3-cc",
            Suite::Eta => "eta",
            Suite::Structural => "fig4-structural",
            Suite::Groupoid => "fig5-groupoid",
            Suite::Gates => "fig6-unitary",
            Suite::LiftedSemantics => "fig10-semantic",
            Suite::Axiom20 => "axiom20",
            Suite::Algebraic => "staton-AO",
            Suite::RoundTrip => "roundtrip-bexp",
        }
    }

    pub fn from_name(s: &str) -> Option<Suite> {
        let s = s.to_ascii_lowercase();
        if s == "staton" {
            return Some(Suite::Algebraic);
        }
        Suite::ALL.into_iter().find(|x| x.name().to_ascii_lowercase() == s)
    }

    pub fn description(self) -> &'static str {
        match self {
            Suite::Beta => "β rules for let, pairs, sums and put",
            Suite::CommutingConversions => "commuting conversions of the four eliminations",
            Suite::Eta => "η for pairs and for Lower ()",
            Suite::Structural => "unitaries commuting with introductions and eliminations",
            Suite::Groupoid => "identity, composition and inverse laws of unitaries",
            Suite::Gates => "NOT, SWAP, DISTR and CNOT introduced and eliminated",
            Suite::LiftedSemantics => "each rig generator against init and match",
            Suite::Axiom20 => "random lifted equivalences against partial init and match",
            Suite::Algebraic => "the fifteen algebraic axioms through the translation",
            Suite::RoundTrip => "translations to and from the algebraic calculus",
        }
    }

    fn cases(self) -> Vec<Case> {
        match self {
            Suite::Beta => catalog::beta(),
            Suite::CommutingConversions => catalog::commuting(),
            Suite::Eta => catalog::eta(),
            Suite::Structural => catalog::structural(),
            Suite::Groupoid => catalog::groupoid(),
            Suite::Gates => gates::gates(),
            Suite::LiftedSemantics => lifted::generators(),
            Suite::Axiom20 => gates::axiom20(),
            Suite::Algebraic => algebraic::axioms(),
            Suite::RoundTrip => algebraic::round_trips(),
        }
    }

    fn config(self) -> GenConfig {
        match self {
            Suite::Algebraic | Suite::RoundTrip => GenConfig { binary_only: true, max_ctx_dim: 8, max_type_dim: 4 },
            _ => GenConfig { binary_only: false, max_ctx_dim: 8, max_type_dim: 4 },
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct CaseReport {
    pub name: String,
    pub checked: usize,
    pub vacuous: bool,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cases: Vec<CaseReport>,
    /// Superoperators checked for positivity and trace bounds.
    pub superops: usize,
    pub hygiene_failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.equations_hold() && self.hygiene_failures.is_empty()
    }

    pub fn equations_hold(&self) -> bool {
        self.cases.iter().all(|c| c.failures.is_empty())
    }

    pub fn instances(&self) -> usize {
        self.cases.iter().map(|c| c.checked).sum()
    }

    pub fn failures(&self) -> usize {
        self.cases.iter().map(|c| c.failures.len()).sum()
    }

    pub fn min_checked(&self) -> usize {
        self.cases.iter().filter(|c| !c.vacuous).map(|c| c.checked).min().unwrap_or(0)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {}: {}", self.suite, self.suite.description())?;
        for c in &self.cases {
            let status = if !c.failures.is_empty() {
                "FAIL"
            } else if c.vacuous {
                "vacuous"
            } else {
                "ok"
            };
            writeln!(f, "  {:<28} {:>5} checked  {:>3} failed  {status}", c.name, c.checked, c.failures.len())?;
        }
        writeln!(f, "  superoperators checked for positivity and trace: {}", self.superops)?;
        for c in &self.cases {
            if let Some(first) = c.failures.first() {
                writeln!(f, "counterexample for {}:\n{first}", c.name)?;
            }
        }
        for h in self.hygiene_failures.iter().take(3) {
            writeln!(f, "hygiene: {h}")?;
        }
        Ok(())
    }
}

/// Compares instances and audits every superoperator it builds.
pub struct Checker {
    pub tol: f64,
    pub superops: usize,
    pub hygiene_failures: Vec<String>,
}

impl Checker {
    pub fn new(tol: f64) -> Self {
        Checker { tol, superops: 0, hygiene_failures: Vec::new() }
    }

    /// Trace at most one on density inputs, and a positive Choi matrix.
    pub fn audit(&mut self, f: &Superoperator, what: &dyn fmt::Display) {
        self.superops += 1;
        if !f.is_trace_nonincreasing(crate::linalg::DEFAULT_TOL) {
            self.hygiene_failures.push(format!("{what}: output trace {} exceeds 1", f.max_output_trace()));
        }
        if !f.is_completely_positive(PSD_TOL) {
            self.hygiene_failures.push(format!("{what}: Choi matrix has eigenvalue {}", f.choi_min_eigenvalue()));
        }
    }

    pub fn compare(&mut self, inst: &Instance) -> Result<(), String> {
        let dump = |msg: String| format!("  ctx: {}\n  lhs: {}\n  rhs: {}\n  {msg}", inst.ctx, inst.lhs, inst.rhs);
        let t1 = infer(&inst.ctx, &inst.lhs).map_err(|e| dump(format!("lhs ill-typed: {e}")))?;
        let t2 = infer(&inst.ctx, &inst.rhs).map_err(|e| dump(format!("rhs ill-typed: {e}")))?;
        if t1 != t2 {
            return Err(dump(format!("types differ: {t1} vs {t2}")));
        }
        let f = denote_in(&inst.ctx, &inst.lhs, &t1).map_err(|e| dump(e.to_string()))?;
        let g = denote_in(&inst.ctx, &inst.rhs, &t1).map_err(|e| dump(e.to_string()))?;
        self.audit(&f, &inst.lhs);
        self.audit(&g, &inst.rhs);
        match f.max_discrepancy(&g).map_err(|e| dump(e.to_string()))? {
            Some(d) if d.magnitude > self.tol => Err(dump(format!(
                "differ by {:.3e} on input E_{}{} at entry ({}, {}): {} vs {}",
                d.magnitude, d.input.0, d.input.1, d.output.0, d.output.1, d.left, d.right
            ))),
            _ => Ok(()),
        }
    }
}

/// Independent seed for attempt `a` at instance `i` of case `case`.
fn instance_seed(seed: u64, case: usize, i: usize, a: usize) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ ((case as u64) << 32) ^ ((a as u64) << 48) ^ i as u64
}

/// Largest context dimension of any subterm. Denotations are built over
/// these contexts, so this bounds the size of every transfer table.
pub fn peak_dim(ctx: &Ctx, e: &QExp) -> usize {
    let local = ctx.restrict(&e.free_vars());
    let here = local.dim();
    let type_of = |t: &QExp| infer(&ctx.restrict(&t.free_vars()), t).ok();
    let with = |binders: &[(&String, Option<QType>)]| {
        binders.iter().fold(ctx.clone(), |c, (x, t)| match t {
            Some(t) => c.with(x, t.clone()),
            None => c,
        })
    };
    let inner = match e {
        QExp::Var(_) | QExp::Put(..) => 0,
        QExp::Pair(a, b) => peak_dim(ctx, a).max(peak_dim(ctx, b)),
        QExp::Inj(_, _, a) | QExp::UApp(_, a) => peak_dim(ctx, a),
        QExp::Let(x, a, body) => peak_dim(ctx, a).max(peak_dim(&with(&[(x, type_of(a))]), body)),
        QExp::LetPair(x, y, a, body) => {
            let (t1, t2) = match type_of(a) {
                Some(QType::Tensor(t1, t2)) => (Some(*t1), Some(*t2)),
                _ => (None, None),
            };
            peak_dim(ctx, a).max(peak_dim(&with(&[(x, t1), (y, t2)]), body))
        }
        QExp::Case(a, x1, e1, x2, e2) => {
            let (t1, t2) = match type_of(a) {
                Some(QType::Oplus(t1, t2)) => (Some(*t1), Some(*t2)),
                _ => (None, None),
            };
            let left = peak_dim(&with(&[(x1, t1)]), e1);
            peak_dim(ctx, a).max(left).max(peak_dim(&with(&[(x2, t2)]), e2))
        }
        QExp::LetBang(a, bs) => bs.iter().map(|b| peak_dim(ctx, b)).fold(peak_dim(ctx, a), usize::max),
    };
    here.max(inner)
}

/// Instances whose subterms need a larger context are drawn again.
pub const LIVE_BUDGET: usize = 32;
const ATTEMPTS: usize = 64;

fn draw(make: &Make, seed: u64, ci: usize, i: usize, cfg: GenConfig) -> Result<Instance, String> {
    for a in 0..ATTEMPTS {
        let mut g = TermGen::with_config(instance_seed(seed, ci, i, a), cfg);
        let inst = make(&mut g)?;
        if peak_dim(&inst.ctx, &inst.lhs).max(peak_dim(&inst.ctx, &inst.rhs)) <= LIVE_BUDGET {
            return Ok(inst);
        }
    }
    Err(format!("no instance within context dimension {LIVE_BUDGET} in {ATTEMPTS} draws"))
}

/// Run `count` random instances of every case of `suite`.
pub fn run_suite(suite: Suite, seed: u64, count: usize, tol: f64) -> SuiteReport {
    let mut checker = Checker::new(tol);
    let mut cases = Vec::new();
    for (ci, case) in suite.cases().into_iter().enumerate() {
        let mut report = CaseReport { name: case.name.clone(), checked: 0, vacuous: false, failures: Vec::new() };
        match &case.kind {
            CaseKind::Vacuous(check) => {
                report.vacuous = true;
                if let Err(e) = check() {
                    report.failures.push(e);
                }
            }
            CaseKind::Random(make) => {
                for i in 0..count {
                    let outcome = draw(make, seed, ci, i, suite.config()).and_then(|inst| {
                        log::trace!("{} instance {i}: {} ⊢ {}", case.name, inst.ctx, inst.lhs);
                        checker.compare(&inst)
                    });
                    report.checked += 1;
                    if let Err(e) = outcome {
                        log::debug!("{} instance {i}: {e}", case.name);
                        report.failures.push(e);
                    }
                }
            }
        }
        log::info!("{suite}/{}: {} checked, {} failed", report.name, report.checked, report.failures.len());
        cases.push(report);
    }
    SuiteReport { suite, cases, superops: checker.superops, hygiene_failures: checker.hygiene_failures }
}
