//! Nef thresholds, the reduction loop, Picard-rank-one curves and the final
//! curve certificate.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::arith::{dot_q, fmt_ivec, positive_multiple, primitive, primitive_from_q, q, to_q, IVec, Q};
use crate::divisors::{anticanonical, picard_rank, prime_divisors, BDivisor, DivisorError, Prime};
use crate::fan::{fmt_cone, orbit_closure_fan, ColouredFan, FanError};
use crate::ledger::{Check, Rel};
use crate::linalg::{det, nullspace};
use crate::mori::{
    contract, fibre_fan, flip, mori_generators, ContractionKind, ContractionResult, CurveKind, Fibre, MoriCone,
    MoriError,
};

pub const DEFAULT_CAP: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MmpError {
    #[error(transparent)]
    Mori(#[from] MoriError),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Divisor(#[from] DivisorError),
    #[error("no K-negative extremal ray: the minimal model is reached")]
    NoKNegativeRay,
    #[error("divisor is not nef: {0}")]
    NotNef(String),
    #[error("Picard rank is {0}, not 1")]
    NotPicardOne(usize),
    #[error("no positive relation among the ray generators")]
    NoRelation,
    #[error("orbit cone {0} is not a cone of the fan")]
    InvalidOrbit(String),
    #[error("the run reached a minimal model before the orbit met an exceptional locus")]
    MinimalReached,
    #[error("iteration cap {0} reached")]
    IterationCap(usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invariant violated: {0}")]
    Violated(String),
}

impl MmpError {
    /// Errors that indicate a bug rather than bad input.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(
            self,
            MmpError::Violated(_)
                | MmpError::IterationCap(_)
                | MmpError::Mori(MoriError::Internal(_))
                | MmpError::Mori(MoriError::IdentityViolated(_))
                | MmpError::Mori(MoriError::NonIntegralMultiple(_))
                | MmpError::Fan(FanError::Internal(_))
        )
    }
}

fn pair_vec(fan: &ColouredFan, delta: &BDivisor, pairing: &[Q]) -> Q {
    dot_q(&delta.to_vec(fan), pairing)
}

fn require_nef(fan: &ColouredFan, mori: &MoriCone, delta: &BDivisor) -> Result<(), MmpError> {
    for g in &mori.generators {
        let v = pair_vec(fan, delta, &g.pairing);
        if v.is_negative() {
            return Err(MmpError::NotNef(format!("pairs to {} with {:?}", crate::arith::fmt_q(&v), g.kind)));
        }
    }
    Ok(())
}

/// `a = min D.C / (-K.C)` over K-negative extremal rays, with the first
/// ray achieving it.
pub fn nef_threshold(fan: &ColouredFan, mori: &MoriCone, delta: &BDivisor) -> Result<(Q, usize), MmpError> {
    require_nef(fan, mori, delta)?;
    let mut best: Option<(Q, usize)> = None;
    for r in mori.k_negative() {
        let g = mori.tag(r)?;
        let ratio = pair_vec(fan, delta, &g.pairing) / &mori.rays[r].minus_k;
        if best.as_ref().is_none_or(|(a, _)| ratio < *a) {
            best = Some((ratio, r));
        }
    }
    best.ok_or(MmpError::NoKNegativeRay)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmpStatus {
    OrbitInExceptional,
    MinimalReached,
    IterationCap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MmpStep {
    pub fan: ColouredFan,
    pub divisor: BDivisor,
    pub threshold: Q,
    pub ray: usize,
    pub class: CurveKind,
    pub kind: ContractionKind,
    pub orbit: Vec<IVec>,
    /// `D + a K`.
    pub scaled: BDivisor,
    pub exceptional: bool,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MmpTrace {
    pub steps: Vec<MmpStep>,
    pub status: MmpStatus,
    pub final_fan: ColouredFan,
    pub final_divisor: BDivisor,
    pub final_orbit: Vec<IVec>,
}

fn sorted(v: &[IVec]) -> Vec<IVec> {
    let mut v = v.to_vec();
    v.sort();
    v
}

pub fn run_reduction(fan: &ColouredFan, delta: &BDivisor, orbit: &[IVec], cap: usize) -> Result<MmpTrace, MmpError> {
    let mut fan = fan.clone();
    let mut delta = delta.clone();
    let mut orbit = sorted(orbit);
    delta.check(&fan)?;
    if !fan.has_cone(&orbit) {
        return Err(MmpError::InvalidOrbit(fmt_cone(&orbit)));
    }
    let mut steps = Vec::new();
    for _ in 0..cap {
        let mori = mori_generators(&fan)?;
        let (a, ray) = match nef_threshold(&fan, &mori, &delta) {
            Ok(x) => x,
            Err(MmpError::NoKNegativeRay) => {
                return Ok(MmpTrace {
                    steps,
                    status: MmpStatus::MinimalReached,
                    final_fan: fan,
                    final_divisor: delta,
                    final_orbit: orbit,
                })
            }
            Err(e) => return Err(e),
        };
        let minus_k = anticanonical(&fan);
        let scaled = delta.add_scaled(&minus_k, &-a.clone());
        let g = mori.tag(ray)?;
        let mut checks =
            vec![Check::new("D + aK on contracted ray", pair_vec(&fan, &scaled, &g.pairing), Rel::Eq, q(0))];
        let worst = mori.generators.iter().map(|c| pair_vec(&fan, &scaled, &c.pairing)).min().unwrap_or_default();
        checks.push(Check::new("min (D + aK).C over generators", worst, Rel::Ge, q(0)));
        if let Some(c) = checks.iter().find(|c| !c.holds()) {
            return Err(MmpError::Violated(c.to_string()));
        }
        let contraction = contract(&fan, &mori, ray)?;
        let exceptional = contraction.is_exceptional(&fan, &orbit);
        let step = MmpStep {
            fan: fan.clone(),
            divisor: delta.clone(),
            threshold: a,
            ray,
            class: contraction.class.clone(),
            kind: contraction.kind,
            orbit: orbit.clone(),
            scaled: scaled.clone(),
            exceptional,
            checks,
        };
        steps.push(step);
        if exceptional {
            return Ok(MmpTrace {
                steps,
                status: MmpStatus::OrbitInExceptional,
                final_fan: fan,
                final_divisor: scaled,
                final_orbit: orbit,
            });
        }
        let next = match contraction.kind {
            ContractionKind::Divisorial => contraction.target.clone(),
            ContractionKind::Flipping => flip(&fan, &mori, ray)?.fan,
            ContractionKind::MoriFibreSpace => {
                return Err(MmpError::Violated("fibre space with a non-exceptional orbit".into()))
            }
        };
        if !next.has_cone(&orbit) {
            return Err(MmpError::Violated(format!("orbit {} lost after step", fmt_cone(&orbit))));
        }
        delta = scaled.restrict_to(&next);
        fan = next;
        orbit = sorted(&orbit);
    }
    Err(MmpError::IterationCap(cap))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Picard1Case {
    FlagOneColour,
    PositiveRankFull,
}

pub fn picard1_classify(fan: &ColouredFan) -> Result<Picard1Case, MmpError> {
    let p = picard_rank(fan)?;
    if p != 1 {
        return Err(MmpError::NotPicardOne(p));
    }
    let n = fan.rank();
    let all: BTreeSet<String> = fan.lattice.colour_names().into_iter().collect();
    if n == 0 && all.len() == 1 {
        return Ok(Picard1Case::FlagOneColour);
    }
    if n > 0 && fan.coloured_set() == all && fan.rays().len() == n + 1 {
        return Ok(Picard1Case::PositiveRankFull);
    }
    Err(MmpError::Violated("Picard rank one fan matches neither case".into()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveCertificate {
    pub fan: ColouredFan,
    pub case: Picard1Case,
    pub primes: Vec<Prime>,
    pub pairing: Vec<Q>,
    pub minus_k: Q,
    pub dim: usize,
    /// Rays `v_i` with the primitive positive relation `sum a_i w_i = 0`.
    pub relation: Vec<(IVec, i64)>,
    pub index0: Option<IVec>,
    /// Cones of successive orbit closures entered while building the curve.
    pub path: Vec<Vec<IVec>>,
    /// Smooth toric with unit relation weights, or a flag variety with `omega = 0`.
    pub projective_space: bool,
    pub product_flag: bool,
    /// Whether `-K.C <= dim` is asserted.
    pub strengthened: bool,
    pub checks: Vec<Check>,
}

impl CurveCertificate {
    pub fn dot(&self, p: &Prime) -> Q {
        self.primes.iter().position(|x| x == p).map(|i| self.pairing[i].clone()).unwrap_or_default()
    }
}

fn bound_checks(
    primes: &[Prime],
    pairing: &[Q],
    minus_k: &Q,
    dim: usize,
    strengthened: bool,
    unit: bool,
) -> Vec<Check> {
    let mut checks = Vec::new();
    if unit {
        for (p, v) in primes.iter().zip(pairing) {
            checks.push(Check::new(format!("{p}.C <= 1"), v.clone(), Rel::Le, q(1)));
        }
    }
    checks.push(Check::new("-K.C <= dim + 1", minus_k.clone(), Rel::Le, q(dim as i64 + 1)));
    if strengthened {
        checks.push(Check::new("-K.C <= dim", minus_k.clone(), Rel::Le, q(dim as i64)));
    }
    checks
}

/// Dual Schubert curve on a flag variety with one colour.
pub fn flag_curve(fan: &ColouredFan) -> Result<CurveCertificate, MmpError> {
    if picard1_classify(fan)? != Picard1Case::FlagOneColour {
        return Err(MmpError::Precondition("flag_curve needs a rank-0 fan with one colour".into()));
    }
    let primes = prime_divisors(fan);
    let pairing = vec![q(1)];
    let minus_k = dot_q(&anticanonical(fan).to_vec(fan), &pairing);
    let dim = fan.dimension();
    let omega = fan.lattice.omega();
    let strengthened = omega > 0;
    let checks = bound_checks(&primes, &pairing, &minus_k, dim, strengthened, true);
    Ok(CurveCertificate {
        fan: fan.clone(),
        case: Picard1Case::FlagOneColour,
        primes,
        pairing,
        minus_k,
        dim,
        relation: vec![],
        index0: None,
        path: vec![],
        projective_space: omega == 0,
        product_flag: omega == 0,
        strengthened,
        checks,
    })
}

/// `w_i` and `c_i` with `w_i = c_i v_i` for each ray.
fn weighted_rays(fan: &ColouredFan) -> Vec<(IVec, IVec, Q, Prime)> {
    fan.rays()
        .into_iter()
        .map(|v| match fan.ray_colours(&v).into_iter().next() {
            Some(a) => {
                let u = fan.lattice.colour(&a).expect("known colour").u.clone();
                let c = positive_multiple(&u, &v).expect("colour point on its ray");
                (v, u, c, Prime::Colour(a))
            }
            None => (v.clone(), v.clone(), q(1), Prime::Ray(v)),
        })
        .collect()
}

fn is_smooth(fan: &ColouredFan) -> bool {
    fan.cones.iter().all(|c| {
        let d = det(&c.gens.iter().map(|g| to_q(g)).collect::<Vec<_>>());
        d == q(1) || d == q(-1)
    })
}

/// Curve through the given orbit on a Picard-rank-one fan with `rank > 0`.
pub fn picard1_curve(fan: &ColouredFan, orbit: &[IVec]) -> Result<CurveCertificate, MmpError> {
    if picard1_classify(fan)? != Picard1Case::PositiveRankFull {
        return Err(MmpError::Precondition("picard1_curve needs a positive-rank fan".into()));
    }
    let orbit = sorted(orbit);
    if !fan.has_cone(&orbit) {
        return Err(MmpError::InvalidOrbit(fmt_cone(&orbit)));
    }
    let n = fan.rank();
    let wr = weighted_rays(fan);
    let cols: Vec<Vec<Q>> = (0..n).map(|i| wr.iter().map(|(_, w, _, _)| q(w[i])).collect()).collect();
    let ns = nullspace(&cols, wr.len());
    if ns.len() != 1 {
        return Err(MmpError::NoRelation);
    }
    let mut a = primitive_from_q(&ns[0]).ok_or(MmpError::NoRelation)?;
    if a.iter().all(|&x| x <= 0) {
        a.iter_mut().for_each(|x| *x = -*x);
    }
    if a.iter().any(|&x| x <= 0) {
        return Err(MmpError::NoRelation);
    }
    let amax = *a.iter().max().unwrap();
    let cmax = wr.iter().zip(&a).filter(|(_, &x)| x == amax).map(|(r, _)| &r.2).max().unwrap().clone();
    let i0 = wr.iter().zip(&a).position(|(r, &x)| x == amax && r.2 == cmax).unwrap();
    let v0 = wr[i0].0.clone();
    let opposite: Vec<IVec> = sorted(&wr.iter().filter(|r| r.0 != v0).map(|r| r.0.clone()).collect::<Vec<_>>());
    let primes = prime_divisors(fan);
    let index = |p: &Prime| primes.iter().position(|x| x == p).expect("prime of the fan");

    let mut path = Vec::new();
    let mut values = vec![Q::zero(); primes.len()];
    if orbit.is_empty() || orbit == vec![v0.clone()] || orbit == opposite {
        let t = Q::one() / (q(a[i0]) * &wr[i0].2);
        for ((_, _, _, p), ai) in wr.iter().zip(&a) {
            values[index(p)] = q(*ai) * &t;
        }
    } else {
        let j = orbit.iter().find(|v| **v != v0).expect("orbit has a ray other than v_0").clone();
        let oc = orbit_closure_fan(fan, std::slice::from_ref(&j))?;
        let sub_orbit: Vec<IVec> =
            orbit.iter().filter(|v| **v != j).map(|v| primitive(&crate::fan::apply(&oc.projection, v))).collect();
        let sub = picard1_curve(&oc.fan, &sub_orbit)?;
        path.push(vec![j.clone()]);
        path.extend(sub.path.iter().cloned());
        for (v, _, _, p) in &wr {
            if *v == j {
                continue;
            }
            let val = match p {
                Prime::Ray(_) => {
                    let img = oc
                        .image_of(v)
                        .ok_or_else(|| MmpError::Violated(format!("ray {} missing from star", fmt_ivec(v))))?;
                    sub.dot(&Prime::Ray(img.image.clone())) / q(img.d)
                }
                Prime::Colour(_) => sub.dot(p),
            };
            values[index(p)] = val;
        }
        let k = wr.iter().position(|r| r.0 != j).unwrap();
        let jpos = wr.iter().position(|r| r.0 == j).unwrap();
        values[index(&wr[jpos].3)] = q(a[jpos]) / q(a[k]) * &values[index(&wr[k].3)];
        // the lifted class must still be proportional to the relation
        for (r, ar) in wr.iter().zip(&a) {
            if &values[index(&r.3)] * q(a[k]) != q(*ar) * &values[index(&wr[k].3)] {
                return Err(MmpError::Violated(format!("lifted pairing at {} is not proportional", fmt_ivec(&r.0))));
            }
        }
    }
    let minus_k = dot_q(&anticanonical(fan).to_vec(fan), &values);
    let dim = fan.dimension();
    let toric = fan.lattice.colours.is_empty();
    let product_flag = fan.lattice.roots.is_product_of_projective_spaces(fan.lattice.parabolic());
    let unit_weights = a.iter().all(|&x| x == 1);
    let projective_space = (toric || product_flag) && is_smooth(fan) && unit_weights;
    let strengthened = if toric || product_flag { !unit_weights || wr[i0].2 > q(1) } else { true };
    let checks = bound_checks(&primes, &values, &minus_k, dim, strengthened, true);
    Ok(CurveCertificate {
        fan: fan.clone(),
        case: Picard1Case::PositiveRankFull,
        primes,
        pairing: values,
        minus_k,
        dim,
        relation: wr.iter().zip(&a).map(|(r, x)| (r.0.clone(), *x)).collect(),
        index0: Some(v0),
        path,
        projective_space,
        product_flag,
        strengthened,
        checks,
    })
}

/// Curve on any Picard-rank-one fan.
pub fn picard1_certificate(fan: &ColouredFan, orbit: &[IVec]) -> Result<CurveCertificate, MmpError> {
    match picard1_classify(fan)? {
        Picard1Case::FlagOneColour => flag_curve(fan),
        Picard1Case::PositiveRankFull => picard1_curve(fan, orbit),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Approximation {
    pub trace: MmpTrace,
    pub contraction: ContractionResult,
    pub fibre: Fibre,
    pub fibre_certificate: CurveCertificate,
    pub primes: Vec<Prime>,
    /// `C = t * g` for the class `g` tagging the contracted ray.
    pub scale: Q,
    pub pairing: Vec<Q>,
    pub minus_k: Q,
    pub dim_x: usize,
    pub dim_f: usize,
    pub strengthened: bool,
    pub checks: Vec<Check>,
}

pub fn find_approximation_curve(
    fan: &ColouredFan,
    delta: &BDivisor,
    orbit: &[IVec],
    cap: usize,
) -> Result<Approximation, MmpError> {
    let trace = run_reduction(fan, delta, orbit, cap)?;
    match trace.status {
        MmpStatus::OrbitInExceptional => {}
        MmpStatus::MinimalReached => return Err(MmpError::MinimalReached),
        MmpStatus::IterationCap => return Err(MmpError::IterationCap(cap)),
    }
    let last = trace.steps.last().expect("exceptional status has a step");
    let x = &last.fan;
    let mori = mori_generators(x)?;
    let contraction = contract(x, &mori, last.ray)?;
    let fibre = fibre_fan(x, &mori, &contraction, &last.orbit)?;
    let fcert = picard1_certificate(&fibre.fan, &fibre.orbit)?;
    let g = mori.tag(last.ray)?;
    let primes = prime_divisors(x);
    let gi = |p: &Prime| -> Q { primes.iter().position(|y| y == p).map(|i| g.pairing[i].clone()).unwrap_or_default() };

    // exactly known pairings D.C on X, from the fibre curve
    let mut known: Vec<(Prime, Q)> = Vec::new();
    if let Some(a) = contraction.colour() {
        known.push((Prime::Colour(a.to_string()), fcert.dot(&Prime::Colour(a.to_string()))));
    } else {
        let oc = fibre.closure.as_ref().expect("wall fibre has an orbit closure");
        let rel = fibre.relation.as_ref().expect("wall fibre has a relation");
        for v in &rel.plus {
            match x.ray_colours(v).into_iter().next() {
                Some(a) => known.push((Prime::Colour(a.clone()), fcert.dot(&Prime::Colour(a)))),
                None => {
                    let img = oc.image_of(v).ok_or_else(|| MmpError::Violated("fibre ray without image".into()))?;
                    known.push((Prime::Ray(v.clone()), fcert.dot(&Prime::Ray(img.image.clone())) / q(img.d)));
                }
            }
        }
    }
    let (p0, v0) = known
        .iter()
        .find(|(p, _)| !gi(p).is_zero())
        .ok_or_else(|| MmpError::Violated("no nonzero pairing to scale the fibre curve".into()))?;
    let scale = v0 / gi(p0);
    let pairing: Vec<Q> = g.pairing.iter().map(|x| x * &scale).collect();
    let minus_k = dot_q(&anticanonical(x).to_vec(x), &pairing);
    let dim_x = x.dimension();
    let dim_f = fibre.fan.dimension();

    let mut checks = Vec::new();
    checks.push(Check::new("scale of the fibre curve", scale.clone(), Rel::Ge, q(0)));
    for (p, v) in &known {
        checks.push(Check::new(format!("{p}.C matches the fibre"), &scale * gi(p), Rel::Eq, v.clone()));
    }
    for v in &fibre.tau {
        let p = match x.ray_colours(v).into_iter().next() {
            Some(a) => Prime::Colour(a),
            None => Prime::Ray(v.clone()),
        };
        checks.push(Check::new(format!("{p}.C on the fibre cone"), &scale * gi(&p), Rel::Le, q(0)));
    }
    checks.push(Check::new("-K_X.C <= -K_F.C", minus_k.clone(), Rel::Le, fcert.minus_k.clone()));
    checks.push(Check::new("-K_F.C <= dim F + 1", fcert.minus_k.clone(), Rel::Le, q(dim_f as i64 + 1)));
    checks.push(Check::new("dim F + 1 <= dim X + 1", q(dim_f as i64 + 1), Rel::Le, q(dim_x as i64 + 1)));
    checks.push(Check::new("-K_X.C <= dim X + 1", minus_k.clone(), Rel::Le, q(dim_x as i64 + 1)));
    let strengthened = dim_f < dim_x || fcert.strengthened;
    if strengthened {
        checks.push(Check::new("-K_X.C <= dim X", minus_k.clone(), Rel::Le, q(dim_x as i64)));
    }
    checks.extend(fcert.checks.iter().cloned());
    for s in &trace.steps {
        checks.extend(s.checks.iter().cloned());
    }
    Ok(Approximation {
        trace,
        contraction,
        fibre,
        fibre_certificate: fcert,
        primes,
        scale,
        pairing,
        minus_k,
        dim_x,
        dim_f,
        strengthened,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{Colour, ColouredLattice};
    use crate::ledger::first_failure;
    use crate::rootsys::{build_root_system, DynkinDiagram};

    fn plane() -> ColouredFan {
        ColouredFan::with_global_colours(
            ColouredLattice::toric(2),
            vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![-1, -1]], vec![vec![-1, -1], vec![1, 0]]],
            &BTreeSet::new(),
        )
        .unwrap()
    }

    fn rank_one(diagram: &str, node: usize, u: i64) -> ColouredFan {
        let roots = build_root_system(&DynkinDiagram::parse(diagram).unwrap()).unwrap();
        let lat = ColouredLattice::new(1, vec![Colour { name: "a".into(), node, u: vec![u] }], roots).unwrap();
        ColouredFan::with_global_colours(lat, vec![vec![vec![1]], vec![vec![-1]]], &["a".to_string()].into()).unwrap()
    }

    #[test]
    fn thresholds_on_plane() {
        let fan = plane();
        let m = mori_generators(&fan).unwrap();
        let k = anticanonical(&fan);
        assert_eq!(nef_threshold(&fan, &m, &k).unwrap().0, q(1));
        assert_eq!(nef_threshold(&fan, &m, &BDivisor::zero(&fan)).unwrap().0, q(0));
        let h = BDivisor::prime(&fan, &Prime::Ray(vec![1, 0])).unwrap();
        assert_eq!(nef_threshold(&fan, &m, &h).unwrap().0, crate::arith::qr(1, 3));
    }

    #[test]
    fn plane_pipeline() {
        let fan = plane();
        let h = BDivisor::prime(&fan, &Prime::Ray(vec![1, 0])).unwrap();
        let ap = find_approximation_curve(&fan, &h, &[], DEFAULT_CAP).unwrap();
        assert_eq!(ap.trace.steps.len(), 1);
        assert_eq!(ap.minus_k, q(3));
        assert!(!ap.strengthened);
        assert!(first_failure(&ap.checks).is_none());
    }

    #[test]
    fn rank_one_a1_pipeline() {
        let fan = rank_one("A1", 1, 1);
        let k = anticanonical(&fan);
        let ap = find_approximation_curve(&fan, &k, &[], DEFAULT_CAP).unwrap();
        assert_eq!(ap.minus_k, q(3));
        assert!(first_failure(&ap.checks).is_none(), "{:?}", ap.checks);
        let c = picard1_curve(&fan, &[]).unwrap();
        assert_eq!(c.pairing, vec![q(1), q(1)]);
        assert!(!c.strengthened);
    }

    #[test]
    fn rank_one_c2_is_strengthened() {
        // the long node of C2 gives omega = 1
        let fan = rank_one("C2", 2, 1);
        let k = anticanonical(&fan);
        let ap = find_approximation_curve(&fan, &k, &[], DEFAULT_CAP).unwrap();
        assert!(ap.strengthened);
        assert!(ap.minus_k <= q(ap.dim_x as i64));
        assert!(first_failure(&ap.checks).is_none(), "{:?}", ap.checks);
    }

    #[test]
    fn fake_plane_is_not_strengthened() {
        let rays: Vec<IVec> = vec![vec![-1, -1], vec![2, -1], vec![-1, 2]];
        let gens = (0..3)
            .map(|i| rays.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| v.clone()).collect())
            .collect();
        let fan = ColouredFan::with_global_colours(ColouredLattice::toric(2), gens, &BTreeSet::new()).unwrap();
        let c = picard1_curve(&fan, &[]).unwrap();
        assert!(!c.projective_space);
        assert!(!c.strengthened);
        assert_eq!(c.minus_k, q(3));
        assert!(first_failure(&c.checks).is_none());
    }

    #[test]
    fn flag_curves() {
        let roots = build_root_system(&DynkinDiagram::parse("A2").unwrap()).unwrap();
        let lat = ColouredLattice::new(0, vec![Colour { name: "a".into(), node: 1, u: vec![] }], roots).unwrap();
        let fan = ColouredFan::with_global_colours(lat, vec![vec![]], &BTreeSet::new()).unwrap();
        let c = flag_curve(&fan).unwrap();
        assert_eq!(c.minus_k, q(3));
        assert_eq!(c.dim, 2);
        assert!(!c.strengthened);

        let roots = build_root_system(&DynkinDiagram::parse("C2").unwrap()).unwrap();
        let lat = ColouredLattice::new(0, vec![Colour { name: "a".into(), node: 2, u: vec![] }], roots).unwrap();
        let fan = ColouredFan::with_global_colours(lat, vec![vec![]], &BTreeSet::new()).unwrap();
        let c = flag_curve(&fan).unwrap();
        assert_eq!(c.minus_k, q(3));
        assert_eq!(c.dim, 3);
        assert!(c.strengthened);
    }

    #[test]
    fn two_colour_flag_is_not_picard_one() {
        let roots = build_root_system(&DynkinDiagram::parse("A2").unwrap()).unwrap();
        let lat = ColouredLattice::new(
            0,
            vec![Colour { name: "a".into(), node: 1, u: vec![] }, Colour { name: "b".into(), node: 2, u: vec![] }],
            roots,
        )
        .unwrap();
        let fan = ColouredFan::with_global_colours(lat, vec![vec![]], &BTreeSet::new()).unwrap();
        assert!(matches!(picard1_classify(&fan), Err(MmpError::NotPicardOne(2))));
    }
}
