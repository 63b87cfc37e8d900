//! Command dispatch and report emission.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::arith::{fmt_q, IVec, Q};
use crate::divisors::{anticanonical, picard_rank, prime_divisors, principal_dimension, BDivisor, DivisorError};
use crate::fan::{fmt_cone, validate_fan, ColouredFan, FanError};
use crate::io::{parse_divisor, parse_orbit, IoError, Problem};
use crate::ledger::{Check, Rel};
use crate::mmp::{find_approximation_curve, run_reduction, CurveCertificate, MmpError, MmpStatus, MmpTrace};
use crate::mori::{contract, flip, flip_tower, mori_generators_with, CurveKind, MoriCone, MoriError};
use crate::par::Execution;
use crate::rootsys::{verify_root_inequality, RootError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Validate,
    Picard,
    Anticanonical,
    MoriCone,
    Contract,
    Flip,
    FlipTower,
    RunMmp,
    FindCurve,
    VerifyRootInequality,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Picard => "picard",
            Command::Anticanonical => "anticanonical",
            Command::MoriCone => "mori-cone",
            Command::Contract => "contract",
            Command::Flip => "flip",
            Command::FlipTower => "flip-tower",
            Command::RunMmp => "run-mmp",
            Command::FindCurve => "find-curve",
            Command::VerifyRootInequality => "verify-root-inequality",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Options {
    pub divisor: Option<String>,
    pub orbit: Option<String>,
    pub ray: Option<usize>,
    pub max_rank: usize,
    pub cap: usize,
    pub exec: Execution,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            divisor: None,
            orbit: None,
            ray: None,
            max_rank: 8,
            cap: crate::mmp::DEFAULT_CAP,
            exec: Execution::best(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Divisor(#[from] DivisorError),
    #[error(transparent)]
    Mori(#[from] MoriError),
    #[error(transparent)]
    Mmp(#[from] MmpError),
    #[error("usage: {0}")]
    Usage(String),
    #[error("invariant violated: {0}")]
    Violation(String),
}

impl AppError {
    /// 1 for domain errors, 2 for suspected bugs.
    pub fn exit_code(&self) -> i32 {
        let bug = match self {
            AppError::Violation(_) => true,
            AppError::Root(RootError::InternalInvariantViolation(_))
            | AppError::Root(RootError::InequalityViolated { .. }) => true,
            AppError::Fan(FanError::Internal(_)) => true,
            AppError::Mori(e) => {
                matches!(e, MoriError::Internal(_) | MoriError::IdentityViolated(_) | MoriError::NonIntegralMultiple(_))
            }
            AppError::Mmp(e) => e.is_invariant_violation(),
            _ => false,
        };
        if bug {
            2
        } else {
            1
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LedgerEntry {
    pub label: String,
    pub lhs: String,
    pub rel: String,
    pub rhs: String,
    pub holds: bool,
}

impl From<&Check> for LedgerEntry {
    fn from(c: &Check) -> Self {
        LedgerEntry {
            label: c.label.clone(),
            lhs: fmt_q(&c.lhs),
            rel: c.rel.to_string(),
            rhs: fmt_q(&c.rhs),
            holds: c.holds(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub input_digest: Option<String>,
    pub result: Value,
    pub ledger: Vec<LedgerEntry>,
}

impl Report {
    pub fn all_hold(&self) -> bool {
        self.ledger.iter().all(|e| e.holds)
    }

    pub fn to_json(&self) -> String {
        crate::io::to_canonical_json(self)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "command: {}", self.command).unwrap();
        if let Some(d) = &self.input_digest {
            writeln!(s, "input: sha256:{d}").unwrap();
        }
        render_value(&mut s, &self.result, 0);
        if !self.ledger.is_empty() {
            writeln!(s, "checks:").unwrap();
            for e in &self.ledger {
                let tag = if e.holds { "ok" } else { "FAILED" };
                writeln!(s, "  {}: {} {} {} [{tag}]", e.label, e.lhs, e.rel, e.rhs).unwrap();
            }
        }
        s
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(x) => Some(x.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(format!("[{}]", a.iter().map(|x| scalar(x).unwrap_or_default()).collect::<Vec<_>>().join(", ")))
        }
        Value::Array(_) | Value::Object(_) => None,
        other => Some(other.to_string()),
    }
}

fn render_value(s: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match scalar(x) {
                    Some(t) => writeln!(s, "{pad}{k}: {t}").unwrap(),
                    None => {
                        writeln!(s, "{pad}{k}:").unwrap();
                        render_value(s, x, depth + 1);
                    }
                }
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                match scalar(x) {
                    Some(t) => writeln!(s, "{pad}- {t}").unwrap(),
                    None => {
                        writeln!(s, "{pad}- [{i}]").unwrap();
                        render_value(s, x, depth + 1);
                    }
                }
            }
        }
        other => writeln!(s, "{pad}{}", scalar(other).unwrap_or_default()).unwrap(),
    }
}

fn qs(x: &Q) -> Value {
    Value::String(fmt_q(x))
}

fn qv(v: &[Q]) -> Value {
    Value::Array(v.iter().map(qs).collect())
}

fn iv(v: &[IVec]) -> Value {
    json!(v)
}

pub fn fan_json(fan: &ColouredFan) -> Value {
    json!({
        "lattice_rank": fan.rank(),
        "root_system": fan.lattice.roots.label,
        "colours": fan.lattice.colours.iter().map(|c| json!({"name": c.name, "node": c.node, "u": c.u})).collect::<Vec<_>>(),
        "cones": fan.cones.iter().map(|c| json!({"generators": c.gens, "colours": c.colours})).collect::<Vec<_>>(),
    })
}

pub fn divisor_json(d: &BDivisor) -> Value {
    let mut m = Map::new();
    for (v, c) in &d.rays {
        m.insert(crate::divisors::Prime::Ray(v.clone()).to_string(), qs(c));
    }
    for (a, c) in &d.colours {
        m.insert(crate::divisors::Prime::Colour(a.clone()).to_string(), qs(c));
    }
    Value::Object(m)
}

fn kind_json(k: &CurveKind) -> Value {
    match k {
        CurveKind::Wall { gens, .. } => json!({"wall": gens}),
        CurveKind::Colour { colour, cone } => json!({"colour": colour, "cone": cone}),
    }
}

fn mori_json(fan: &ColouredFan, m: &MoriCone) -> Value {
    json!({
        "primes": prime_divisors(fan).iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "generators": m.generators.iter().map(|g| json!({"class": kind_json(&g.kind), "pairing": qv(&g.pairing)})).collect::<Vec<_>>(),
        "extremal_rays": m.rays.iter().enumerate().map(|(i, r)| json!({
            "index": i,
            "direction": qv(&r.direction),
            "tag": kind_json(&m.generators[r.tag].kind),
            "minus_k": qs(&r.minus_k),
            "k_negative": r.k_negative,
            "mixed": r.mixed,
        })).collect::<Vec<_>>(),
    })
}

fn trace_json(t: &MmpTrace) -> Value {
    json!({
        "status": match t.status {
            MmpStatus::OrbitInExceptional => "orbit-in-exceptional",
            MmpStatus::MinimalReached => "minimal-reached",
            MmpStatus::IterationCap => "iteration-cap",
        },
        "steps": t.steps.iter().enumerate().map(|(i, s)| json!({
            "step": i + 1,
            "threshold": qs(&s.threshold),
            "ray": s.ray,
            "class": kind_json(&s.class),
            "kind": s.kind.to_string(),
            "orbit": fmt_cone(&s.orbit),
            "exceptional": s.exceptional,
            "divisor": divisor_json(&s.divisor),
            "cones": s.fan.cones.len(),
        })).collect::<Vec<_>>(),
        "final_fan": fan_json(&t.final_fan),
    })
}

fn certificate_json(c: &CurveCertificate) -> Value {
    json!({
        "case": format!("{:?}", c.case),
        "fan": fan_json(&c.fan),
        "pairings": c.primes.iter().zip(&c.pairing).map(|(p, v)| (p.to_string(), qs(v))).collect::<Map<_, _>>(),
        "minus_k": qs(&c.minus_k),
        "dim": c.dim,
        "relation": c.relation.iter().map(|(v, a)| json!({"ray": v, "a": a})).collect::<Vec<_>>(),
        "index0": c.index0,
        "path": c.path,
        "projective_space": c.projective_space,
        "product_of_projective_spaces": c.product_flag,
        "strengthened": c.strengthened,
    })
}

fn need(problem: Option<&Problem>, cmd: Command) -> Result<&Problem, AppError> {
    problem.ok_or_else(|| AppError::Usage(format!("{} needs --input", cmd.name())))
}

fn need_ray(opts: &Options, m: &MoriCone) -> Result<usize, AppError> {
    let r = opts.ray.ok_or_else(|| AppError::Usage("--ray is required".into()))?;
    if r >= m.rays.len() {
        return Err(AppError::Usage(format!("--ray {r} out of range (0..{})", m.rays.len())));
    }
    Ok(r)
}

fn need_divisor(p: &Problem, opts: &Options) -> Result<BDivisor, AppError> {
    let e = opts.divisor.as_deref().ok_or_else(|| AppError::Usage("--divisor is required".into()))?;
    Ok(parse_divisor(p, e)?)
}

fn need_terminal(p: &Problem) -> Result<(), AppError> {
    if p.file.terminal {
        Ok(())
    } else {
        Err(AppError::Usage("the problem file is not flagged terminal".into()))
    }
}

pub fn dispatch(cmd: Command, problem: Option<&Problem>, opts: &Options) -> Result<Report, AppError> {
    let mut ledger: Vec<Check> = Vec::new();
    let result = match cmd {
        Command::VerifyRootInequality => {
            let r = verify_root_inequality(opts.max_rank, opts.exec)?;
            ledger.push(Check::new("violations", Q::from_integer((r.violations as i64).into()), Rel::Eq, Q::default()));
            serde_json::to_value(&r).expect("serializable")
        }
        Command::Validate => {
            let p = need(problem, cmd)?;
            let d = validate_fan(&p.fan);
            json!({
                "valid": d.valid,
                "complete": d.complete,
                "simplicial": d.simplicial,
                "q_factorial": d.q_factorial,
                "issues": d.issues.iter().map(|i| json!({"check": i.check, "witness": i.witness})).collect::<Vec<_>>(),
                "rays": p.fan.rays().len(),
                "cones": p.fan.cones.len(),
                "colours": p.fan.lattice.colours.len(),
                "terminal_flag": p.file.terminal,
            })
        }
        Command::Picard => {
            let p = need(problem, cmd)?;
            let rho = picard_rank(&p.fan)?;
            let principal = principal_dimension(&p.fan)?;
            let primes = prime_divisors(&p.fan).len();
            ledger.push(Check::new(
                "#D(X) - rank N = #D(X) - dim principal",
                Q::from_integer((rho as i64).into()),
                Rel::Eq,
                Q::from_integer(((primes - principal) as i64).into()),
            ));
            json!({"picard_rank": rho, "prime_divisors": primes, "lattice_rank": p.fan.rank(), "principal_dimension": principal})
        }
        Command::Anticanonical => {
            let p = need(problem, cmd)?;
            json!({"minus_k": divisor_json(&anticanonical(&p.fan)), "b": p.fan.lattice.b_coefficients()})
        }
        Command::MoriCone => {
            let p = need(problem, cmd)?;
            let m = mori_generators_with(&p.fan, opts.exec)?;
            mori_json(&p.fan, &m)
        }
        Command::Contract => {
            let p = need(problem, cmd)?;
            let m = mori_generators_with(&p.fan, opts.exec)?;
            let c = contract(&p.fan, &m, need_ray(opts, &m)?)?;
            json!({
                "kind": c.kind.to_string(),
                "class": kind_json(&c.class),
                "target": fan_json(&c.target),
                "projection": iv(&c.projection),
                "removed_colours": c.removed_colours,
                "supporting": divisor_json(&c.supporting),
            })
        }
        Command::Flip => {
            let p = need(problem, cmd)?;
            let m = mori_generators_with(&p.fan, opts.exec)?;
            let f = flip(&p.fan, &m, need_ray(opts, &m)?)?;
            json!({"fan": fan_json(&f.fan)})
        }
        Command::FlipTower => {
            let p = need(problem, cmd)?;
            let m = mori_generators_with(&p.fan, opts.exec)?;
            let delta = need_divisor(p, opts)?;
            let t = flip_tower(&p.fan, &m, need_ray(opts, &m)?, &delta)?;
            let primes = prime_divisors(&t.star);
            for ((pr, l), r) in primes.iter().zip(&t.lhs).zip(&t.rhs) {
                ledger.push(Check::new(format!("pullback difference at {pr}"), l.clone(), Rel::Eq, r.clone()));
            }
            json!({
                "u_star": t.u_star,
                "d": qs(&t.d),
                "delta_dot_c": qs(&t.delta_dot_c),
                "pullback": divisor_json(&t.pullback),
                "pullback_plus": divisor_json(&t.pullback_plus),
                "flipped": fan_json(&t.flip.fan),
            })
        }
        Command::RunMmp => {
            let p = need(problem, cmd)?;
            need_terminal(p)?;
            let delta = need_divisor(p, opts)?;
            let orbit = parse_orbit(p, opts.orbit.as_deref().unwrap_or("dense"))?;
            let t = run_reduction(&p.fan, &delta, &orbit, opts.cap)?;
            for s in &t.steps {
                ledger.extend(s.checks.iter().cloned());
            }
            trace_json(&t)
        }
        Command::FindCurve => {
            let p = need(problem, cmd)?;
            need_terminal(p)?;
            let delta = need_divisor(p, opts)?;
            let orbit = parse_orbit(p, opts.orbit.as_deref().unwrap_or("dense"))?;
            let a = find_approximation_curve(&p.fan, &delta, &orbit, opts.cap)?;
            ledger.extend(a.checks.iter().cloned());
            json!({
                "trace": trace_json(&a.trace),
                "contraction": a.contraction.kind.to_string(),
                "fibre": certificate_json(&a.fibre_certificate),
                "pairings": a.primes.iter().zip(&a.pairing).map(|(p, v)| (p.to_string(), qs(v))).collect::<Map<_, _>>(),
                "minus_k": qs(&a.minus_k),
                "dim_x": a.dim_x,
                "dim_f": a.dim_f,
                "strengthened": a.strengthened,
            })
        }
    };
    let report = Report {
        command: cmd.name().to_string(),
        input_digest: problem.map(|p| p.digest.clone()),
        result,
        ledger: ledger.iter().map(LedgerEntry::from).collect(),
    };
    Ok(report)
}
