//! Problem files: JSON schema, cross-validation and canonical serialization.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arith::{fmt_q, parse_q, IVec, Q};
use crate::divisors::{anticanonical, BDivisor, DivisorError, Prime};
use crate::fan::{trivial_roots, Colour, ColouredCone, ColouredFan, ColouredLattice, FanError};
use crate::rootsys::{build_root_system, DynkinComponent, DynkinDiagram, RootError, RootType};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),
    #[error("reference error: {0}")]
    Reference(String),
    #[error("bad expression `{expr}`: {message}")]
    Expression { expr: String, message: String },
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Divisor(#[from] DivisorError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    #[serde(rename = "type")]
    pub kind: String,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColourSpec {
    pub name: String,
    pub node: usize,
    pub u: IVec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeSpec {
    pub generators: Vec<IVec>,
    #[serde(default)]
    pub colours: Vec<String>,
}

/// A rational written as a JSON integer or a `"p/q"` string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeff {
    Int(i64),
    Text(String),
}

impl Coeff {
    pub fn value(&self) -> Result<Q, IoError> {
        match self {
            Coeff::Int(n) => Ok(Q::from_integer((*n).into())),
            Coeff::Text(s) => parse_q(s).map_err(|e| IoError::Expression { expr: s.clone(), message: e.to_string() }),
        }
    }

    pub fn from_q(x: &Q) -> Self {
        if x.is_integer() {
            if let Ok(n) = i64::try_from(x.numer()) {
                return Coeff::Int(n);
            }
        }
        Coeff::Text(fmt_q(x))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RayCoeff {
    pub ray: IVec,
    pub coeff: Coeff,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorSpec {
    #[serde(default)]
    pub rays: Vec<RayCoeff>,
    #[serde(default)]
    pub colours: BTreeMap<String, Coeff>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub schema_version: u32,
    pub lattice_rank: usize,
    #[serde(default)]
    pub root_system: Vec<ComponentSpec>,
    #[serde(default)]
    pub colours: Vec<ColourSpec>,
    pub cones: Vec<ConeSpec>,
    #[serde(default)]
    pub divisors: BTreeMap<String, DivisorSpec>,
    #[serde(default)]
    pub orbits: BTreeMap<String, Vec<IVec>>,
    #[serde(default)]
    pub terminal: bool,
}

/// A loaded and cross-validated problem.
#[derive(Debug, Clone)]
pub struct Problem {
    pub file: ProblemFile,
    pub fan: ColouredFan,
    pub divisors: BTreeMap<String, BDivisor>,
    pub orbits: BTreeMap<String, Vec<IVec>>,
    /// sha256 of the raw input bytes.
    pub digest: String,
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn load_problem(path: &Path) -> Result<Problem, IoError> {
    let text =
        std::fs::read_to_string(path).map_err(|source| IoError::Read { path: path.display().to_string(), source })?;
    parse_problem(&text)
}

pub fn parse_problem(text: &str) -> Result<Problem, IoError> {
    let file: ProblemFile = serde_json::from_str(text).map_err(|e| IoError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut p = build_problem(file)?;
    p.digest = digest(text.as_bytes());
    Ok(p)
}

fn diagram(spec: &[ComponentSpec]) -> Result<DynkinDiagram, IoError> {
    let mut comps = Vec::new();
    for c in spec {
        let kind = RootType::from_letter(&c.kind)
            .ok_or_else(|| IoError::SchemaMismatch(format!("unknown root system type {}", c.kind)))?;
        comps.push(DynkinComponent::new(kind, c.rank)?);
    }
    Ok(DynkinDiagram::new(comps))
}

fn check_len(v: &[i64], n: usize, what: &str) -> Result<(), IoError> {
    if v.len() != n {
        return Err(IoError::SchemaMismatch(format!("{what} has length {}, expected {n}", v.len())));
    }
    Ok(())
}

/// Cross-validate a parsed file: every reference is checked before the fan is
/// built.
pub fn build_problem(file: ProblemFile) -> Result<Problem, IoError> {
    if file.schema_version != SCHEMA_VERSION {
        return Err(IoError::SchemaMismatch(format!(
            "schema_version {} (supported: {SCHEMA_VERSION})",
            file.schema_version
        )));
    }
    let n = file.lattice_rank;
    let d = diagram(&file.root_system)?;
    let roots = if d.components.is_empty() { trivial_roots() } else { build_root_system(&d)? };
    let names: BTreeSet<&str> = file.colours.iter().map(|c| c.name.as_str()).collect();
    for c in &file.colours {
        check_len(&c.u, n, &format!("colour {}", c.name))?;
        if c.node == 0 || c.node > d.rank() {
            return Err(IoError::Reference(format!("colour {} bound to node {} outside S", c.name, c.node)));
        }
    }
    for (i, cone) in file.cones.iter().enumerate() {
        for g in &cone.generators {
            check_len(g, n, &format!("generator of cone {i}"))?;
        }
        for a in &cone.colours {
            if !names.contains(a.as_str()) {
                return Err(IoError::Reference(format!("cone {i} names unknown colour {a}")));
            }
        }
    }
    for (name, spec) in &file.divisors {
        for r in &spec.rays {
            check_len(&r.ray, n, &format!("ray of divisor {name}"))?;
        }
        for a in spec.colours.keys() {
            if !names.contains(a.as_str()) {
                return Err(IoError::Reference(format!("divisor {name} names unknown colour {a}")));
            }
        }
    }
    for (name, gens) in &file.orbits {
        for g in gens {
            check_len(g, n, &format!("orbit {name}"))?;
        }
    }
    let colours: Vec<Colour> =
        file.colours.iter().map(|c| Colour { name: c.name.clone(), node: c.node, u: c.u.clone() }).collect();
    let lattice = ColouredLattice::new(n, colours, roots)?;
    let cones: Vec<ColouredCone> = file
        .cones
        .iter()
        .map(|c| ColouredCone::new(c.generators.clone(), c.colours.iter().cloned().collect()))
        .collect();
    let fan = ColouredFan::new(lattice, cones)?;
    let mut divisors = BTreeMap::new();
    for (name, spec) in &file.divisors {
        let mut d = BDivisor::zero(&fan);
        for r in &spec.rays {
            d.set(&Prime::Ray(r.ray.clone()), r.coeff.value()?).map_err(|_| {
                IoError::Reference(format!("divisor {name}: {} is not a non-coloured ray", fmt_v(&r.ray)))
            })?;
        }
        for (a, c) in &spec.colours {
            d.set(&Prime::Colour(a.clone()), c.value()?)?;
        }
        divisors.insert(name.clone(), d);
    }
    let mut orbits = BTreeMap::new();
    for (name, gens) in &file.orbits {
        let mut g = gens.clone();
        g.sort();
        if !fan.has_cone(&g) {
            return Err(IoError::Reference(format!("orbit {name} is not a cone of the fan")));
        }
        orbits.insert(name.clone(), g);
    }
    Ok(Problem { file, fan, divisors, orbits, digest: String::new() })
}

fn fmt_v(v: &[i64]) -> String {
    crate::arith::fmt_ivec(v)
}

/// Problem file describing `fan`, with divisors and orbits attached.
pub fn problem_from_fan(
    fan: &ColouredFan,
    divisors: &BTreeMap<String, BDivisor>,
    orbits: &BTreeMap<String, Vec<IVec>>,
    terminal: bool,
) -> Result<ProblemFile, IoError> {
    let d = if fan.lattice.roots.rank() == 0 {
        DynkinDiagram::default()
    } else {
        DynkinDiagram::parse(&fan.lattice.roots.label)?
    };
    Ok(ProblemFile {
        schema_version: SCHEMA_VERSION,
        lattice_rank: fan.rank(),
        root_system: d.components.iter().map(|c| ComponentSpec { kind: c.kind.to_string(), rank: c.rank }).collect(),
        colours: fan
            .lattice
            .colours
            .iter()
            .map(|c| ColourSpec { name: c.name.clone(), node: c.node, u: c.u.clone() })
            .collect(),
        cones: fan
            .cones
            .iter()
            .map(|c| ConeSpec { generators: c.gens.clone(), colours: c.colours.iter().cloned().collect() })
            .collect(),
        divisors: divisors.iter().map(|(k, v)| (k.clone(), divisor_spec(v))).collect(),
        orbits: orbits.clone(),
        terminal,
    })
}

pub fn divisor_spec(d: &BDivisor) -> DivisorSpec {
    DivisorSpec {
        rays: d.rays.iter().map(|(v, c)| RayCoeff { ray: v.clone(), coeff: Coeff::from_q(c) }).collect(),
        colours: d.colours.iter().map(|(a, c)| (a.clone(), Coeff::from_q(c))).collect(),
    }
}

/// Canonical JSON: sorted keys, two-space indentation.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable");
    serde_json::to_string_pretty(&v).expect("serializable")
}

fn expr_err(expr: &str, message: impl Into<String>) -> IoError {
    IoError::Expression { expr: expr.to_string(), message: message.into() }
}

fn parse_vector(expr: &str, s: &str) -> Result<IVec, IoError> {
    let inner = s
        .trim()
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| expr_err(expr, format!("expected (x,y,..), got {s}")))?;
    if inner.trim().is_empty() {
        return Ok(vec![]);
    }
    inner
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| expr_err(expr, format!("non-integer entry {t}"))))
        .collect()
}

/// A divisor given as `-K`, `anticanonical`, the name of a divisor in the
/// problem, or an inline list `name=(1,0):1;a1:1/2` (the `name=` part is
/// optional).
pub fn parse_divisor(problem: &Problem, expr: &str) -> Result<BDivisor, IoError> {
    let e = expr.trim();
    if e == "-K" || e == "anticanonical" {
        return Ok(anticanonical(&problem.fan));
    }
    if let Some(d) = problem.divisors.get(e) {
        return Ok(d.clone());
    }
    let body = match e.split_once('=') {
        Some((_, b)) => b,
        None if e.contains(':') => e,
        None => return Err(IoError::Reference(format!("unknown divisor {e}"))),
    };
    let mut d = BDivisor::zero(&problem.fan);
    for term in body.split(';').map(str::trim).filter(|t| !t.is_empty()) {
        let (lhs, c) = term.rsplit_once(':').ok_or_else(|| expr_err(expr, format!("term {term} lacks `:coeff`")))?;
        let c = parse_q(c.trim()).map_err(|err| expr_err(expr, err.to_string()))?;
        let p = if lhs.trim_start().starts_with('(') {
            let v = parse_vector(expr, lhs)?;
            check_len(&v, problem.fan.rank(), "ray")?;
            Prime::Ray(v)
        } else {
            Prime::Colour(lhs.trim().to_string())
        };
        d.set(&p, c).map_err(|err| expr_err(expr, err.to_string()))?;
    }
    Ok(d)
}

/// An orbit given as a name from the problem, `dense`, or an inline list of
/// generators `(1,0)(0,1)`.
pub fn parse_orbit(problem: &Problem, expr: &str) -> Result<Vec<IVec>, IoError> {
    let e = expr.trim();
    if e == "dense" || e.is_empty() {
        return Ok(vec![]);
    }
    if let Some(o) = problem.orbits.get(e) {
        return Ok(o.clone());
    }
    if !e.starts_with('(') {
        return Err(IoError::Reference(format!("unknown orbit {e}")));
    }
    let mut gens = Vec::new();
    for piece in e.split_inclusive(')') {
        let piece = piece.trim().trim_start_matches(',').trim();
        if piece.is_empty() {
            continue;
        }
        let v = parse_vector(expr, piece)?;
        check_len(&v, problem.fan.rank(), "orbit generator")?;
        gens.push(v);
    }
    gens.sort();
    if !problem.fan.has_cone(&gens) {
        return Err(IoError::Reference(format!("orbit {e} is not a cone of the fan")));
    }
    Ok(gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qr};

    const PLANE: &str = r#"{
        "schema_version": 1,
        "lattice_rank": 2,
        "cones": [
            {"generators": [[1,0],[0,1]]},
            {"generators": [[0,1],[-1,-1]]},
            {"generators": [[-1,-1],[1,0]]}
        ],
        "divisors": {"H": {"rays": [{"ray": [1,0], "coeff": 1}]}},
        "orbits": {"pt": [[1,0],[0,1]]},
        "terminal": true
    }"#;

    #[test]
    fn loads_plane() {
        let p = parse_problem(PLANE).unwrap();
        assert_eq!(p.fan.cones.len(), 3);
        assert!(p.fan.lattice.colours.is_empty());
        assert_eq!(p.digest.len(), 64);
        let h = parse_divisor(&p, "H").unwrap();
        assert_eq!(h.coeff(&Prime::Ray(vec![1, 0])), q(1));
        let e = parse_divisor(&p, "E=(0,1):1/2;(-1,-1):-3").unwrap();
        assert_eq!(e.coeff(&Prime::Ray(vec![0, 1])), qr(1, 2));
        assert_eq!(e.coeff(&Prime::Ray(vec![-1, -1])), q(-3));
        assert_eq!(parse_orbit(&p, "pt").unwrap(), parse_orbit(&p, "(0,1)(1,0)").unwrap());
        assert!(parse_orbit(&p, "(1,0)(-1,-1)").is_ok());
        assert!(matches!(parse_orbit(&p, "(1,1)"), Err(IoError::Reference(_))));
    }

    #[test]
    fn round_trip() {
        let p = parse_problem(PLANE).unwrap();
        let file = problem_from_fan(&p.fan, &p.divisors, &p.orbits, true).unwrap();
        let again = parse_problem(&to_canonical_json(&file)).unwrap();
        assert_eq!(again.fan, p.fan);
        assert_eq!(again.divisors, p.divisors);
        assert_eq!(again.orbits, p.orbits);
        assert_eq!(to_canonical_json(&again.file), to_canonical_json(&file));
    }

    #[test]
    fn rejections() {
        let bad_node = PLANE.replace(
            "\"cones\"",
            "\"root_system\": [{\"type\": \"A\", \"rank\": 1}], \"colours\": [{\"name\": \"a\", \"node\": 2, \"u\": [1,0]}], \"cones\"",
        );
        assert!(matches!(parse_problem(&bad_node), Err(IoError::Reference(_))));
        let non_int = PLANE.replace("[[1,0],[0,1]]}", "[[1.5,0],[0,1]]}");
        assert!(matches!(parse_problem(&non_int), Err(IoError::Parse { .. })));
        let unknown = PLANE.replace("\"terminal\"", "\"extra\": 1, \"terminal\"");
        assert!(matches!(parse_problem(&unknown), Err(IoError::Parse { .. })));
        let version = PLANE.replace("\"schema_version\": 1", "\"schema_version\": 2");
        assert!(matches!(parse_problem(&version), Err(IoError::SchemaMismatch(_))));
    }
}
