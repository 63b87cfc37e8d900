//! Curve classes, the Mori cone, contractions of extremal rays, flips and
//! the flip tower.
//!
//! A curve class is stored as its vector of intersection numbers with the
//! ordered prime divisors `D(X)` of the fan.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::arith::{dot_q, fmt_ivec, is_zero_i, positive_multiple, primitive, primitive_from_q, q, to_q, IVec, Q};
use crate::cone::PolyCone;
use crate::divisors::{
    anticanonical, cartier_data, evaluate_pl, prime_divisors, BDivisor, CartierData, DivisorError, Prime,
};
use crate::fan::{
    apply, fmt_cone, orbit_closure_fan, star_subdivision, validate_fan, walls, Colour, ColourRule, ColouredFan,
    ColouredLattice, FanError, OrbitClosure, Wall,
};
use crate::linalg::{integer_kernel, nullspace, rank};
use crate::par::{self, Execution};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MoriError {
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Divisor(#[from] DivisorError),
    #[error("colour {colour} belongs to cone {cone}")]
    ColourInCone { colour: String, cone: String },
    #[error("wall {0}: Cartier difference is not a multiple of the wall normal")]
    NonIntegralMultiple(String),
    #[error("ray index {0} is not an extremal ray")]
    NotExtremal(usize),
    #[error("extremal ray {0} does not give a flipping contraction")]
    NotFlipping(usize),
    #[error("the Mori cone contains a line")]
    NotPointed,
    #[error("flip tower identity violated: {0}")]
    IdentityViolated(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum CurveKind {
    Wall { wall: usize, gens: Vec<IVec> },
    Colour { colour: String, cone: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveClass {
    pub kind: CurveKind,
    /// `D . C` for each `D` in `D(X)`.
    pub pairing: Vec<Q>,
}

impl CurveClass {
    pub fn dot(&self, fan: &ColouredFan, delta: &BDivisor) -> Q {
        dot_q(&delta.to_vec(fan), &self.pairing)
    }

    pub fn is_wall(&self) -> bool {
        matches!(self.kind, CurveKind::Wall { .. })
    }
}

/// Cartier data of every basis divisor, computed once per fan.
#[derive(Debug, Clone)]
pub struct PairingTable {
    pub primes: Vec<Prime>,
    pub data: Vec<CartierData>,
    pub walls: Vec<Wall>,
}

impl PairingTable {
    pub fn new(fan: &ColouredFan) -> Result<Self, MoriError> {
        let walls = walls(fan)?;
        let primes = prime_divisors(fan);
        let data =
            primes.iter().map(|p| cartier_data(fan, &BDivisor::prime(fan, p)?)).collect::<Result<Vec<_>, _>>()?;
        Ok(PairingTable { primes, data, walls })
    }

    pub fn wall_class(&self, k: usize) -> Result<CurveClass, MoriError> {
        let wall = &self.walls[k];
        let pairing = self.data.iter().map(|d| wall_pairing(wall, d)).collect::<Result<Vec<_>, _>>()?;
        Ok(CurveClass { kind: CurveKind::Wall { wall: k, gens: wall.gens.clone() }, pairing })
    }

    pub fn colour_class(&self, fan: &ColouredFan, colour: &str, cone: usize) -> Result<CurveClass, MoriError> {
        let sigma = &fan.cones[cone];
        if sigma.colours.contains(colour) {
            return Err(MoriError::ColourInCone { colour: colour.into(), cone: fmt_cone(&sigma.gens) });
        }
        let u = &fan.lattice.colour(colour)?.u;
        let pairing = self
            .primes
            .iter()
            .zip(&self.data)
            .map(|(p, d)| {
                let a = if *p == Prime::Colour(colour.to_string()) { q(1) } else { q(0) };
                a - crate::arith::pair(&d.m[cone], u)
            })
            .collect();
        Ok(CurveClass { kind: CurveKind::Colour { colour: colour.into(), cone }, pairing })
    }
}

/// `(m_+ - m_-) / m^mu`.
pub fn wall_pairing(wall: &Wall, data: &CartierData) -> Result<Q, MoriError> {
    let diff: Vec<Q> = data.m[wall.plus].iter().zip(&data.m[wall.minus]).map(|(a, b)| a - b).collect();
    let k = wall.normal.iter().position(|&x| x != 0).expect("normal is nonzero");
    let lambda = &diff[k] / Q::from_integer(wall.normal[k].into());
    let ok = diff.iter().zip(&wall.normal).all(|(d, &nv)| *d == &lambda * Q::from_integer(nv.into()));
    if !ok {
        return Err(MoriError::NonIntegralMultiple(fmt_cone(&wall.gens)));
    }
    Ok(lambda)
}

pub fn wall_curve_class(fan: &ColouredFan, wall: usize) -> Result<CurveClass, MoriError> {
    PairingTable::new(fan)?.wall_class(wall)
}

pub fn colour_curve_class(fan: &ColouredFan, colour: &str, cone: usize) -> Result<CurveClass, MoriError> {
    PairingTable::new(fan)?.colour_class(fan, colour, cone)
}

/// All wall classes followed by all colour classes `(alpha, sigma)` with
/// `alpha` not in `F(sigma)`.
pub fn curve_generators(
    fan: &ColouredFan,
    table: &PairingTable,
    exec: Execution,
) -> Result<Vec<CurveClass>, MoriError> {
    let mut jobs: Vec<CurveKind> =
        (0..table.walls.len()).map(|k| CurveKind::Wall { wall: k, gens: table.walls[k].gens.clone() }).collect();
    for (i, c) in fan.cones.iter().enumerate() {
        for col in &fan.lattice.colours {
            if !c.colours.contains(&col.name) {
                jobs.push(CurveKind::Colour { colour: col.name.clone(), cone: i });
            }
        }
    }
    par::map(exec, &jobs, |job| match job {
        CurveKind::Wall { wall, .. } => table.wall_class(*wall),
        CurveKind::Colour { colour, cone } => table.colour_class(fan, colour, *cone),
    })
    .into_iter()
    .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalRay {
    /// Primitive integer direction in pairing coordinates.
    pub direction: Vec<Q>,
    /// Generators lying on this ray.
    pub members: Vec<usize>,
    /// The generator chosen to represent the ray.
    pub tag: usize,
    pub minus_k: Q,
    pub k_negative: bool,
    /// The ray contains both a wall class and a colour class.
    pub mixed: bool,
    /// A nef divisor vanishing exactly on this ray.
    pub supporting: Vec<Q>,
}

#[derive(Debug, Clone)]
pub struct MoriCone {
    pub table: PairingTable,
    pub generators: Vec<CurveClass>,
    pub rays: Vec<ExtremalRay>,
    pub anticanonical: BDivisor,
}

impl MoriCone {
    pub fn tag(&self, ray: usize) -> Result<&CurveClass, MoriError> {
        let r = self.rays.get(ray).ok_or(MoriError::NotExtremal(ray))?;
        Ok(&self.generators[r.tag])
    }

    pub fn k_negative(&self) -> Vec<usize> {
        (0..self.rays.len()).filter(|&i| self.rays[i].k_negative).collect()
    }
}

pub fn mori_generators(fan: &ColouredFan) -> Result<MoriCone, MoriError> {
    mori_generators_with(fan, Execution::best())
}

pub fn mori_generators_with(fan: &ColouredFan, exec: Execution) -> Result<MoriCone, MoriError> {
    validate_fan(fan).require_q_factorial()?;
    let table = PairingTable::new(fan)?;
    let generators = curve_generators(fan, &table, exec)?;
    let dim = table.primes.len();
    let minus_k = anticanonical(fan);
    let kvec = minus_k.to_vec(fan);
    let f = fan.coloured_set();
    let vecs: Vec<Vec<Q>> = generators.iter().map(|g| g.pairing.clone()).collect();
    let cone = PolyCone::from_gens(vecs, dim);
    if !cone.is_pointed() {
        return Err(MoriError::NotPointed);
    }
    let mut rays = Vec::new();
    for dir in cone.extreme_rays() {
        let members: Vec<usize> = (0..generators.len())
            .filter(|&i| primitive_from_q(&generators[i].pairing).map(|p| to_q(&p)) == Some(dir.clone()))
            .collect();
        let wall = members.iter().copied().find(|&i| generators[i].is_wall());
        let colour_ok = |i: usize| match &generators[i].kind {
            CurveKind::Colour { colour, cone } => {
                !f.contains(colour) && fan.cones[*cone].contains(&fan.lattice.colour(colour).unwrap().u)
            }
            CurveKind::Wall { .. } => false,
        };
        let tag = wall
            .or_else(|| members.iter().copied().find(|&i| colour_ok(i)))
            .or_else(|| members.first().copied())
            .ok_or_else(|| MoriError::Internal("extremal ray without generator".into()))?;
        let mixed = wall.is_some() && members.iter().any(|&i| !generators[i].is_wall());
        let mk = dot_q(&kvec, &generators[tag].pairing);
        let mut supporting = vec![Q::zero(); dim];
        for facet in &cone.facets {
            if dot_q(facet, &dir).is_zero() {
                for (s, x) in supporting.iter_mut().zip(facet) {
                    *s += x;
                }
            }
        }
        rays.push(ExtremalRay {
            direction: dir,
            members,
            tag,
            k_negative: mk.is_positive(),
            minus_k: mk,
            mixed,
            supporting,
        });
    }
    Ok(MoriCone { table, generators, rays, anticanonical: minus_k })
}

/// `delta . g >= 0` for every Mori cone generator.
pub fn is_nef(fan: &ColouredFan, delta: &BDivisor) -> Result<bool, MoriError> {
    validate_fan(fan).require_q_factorial()?;
    let table = PairingTable::new(fan)?;
    let gens = curve_generators(fan, &table, Execution::best())?;
    let v = delta.to_vec(fan);
    Ok(gens.iter().all(|g| !dot_q(&v, &g.pairing).is_negative()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ContractionKind {
    MoriFibreSpace,
    Divisorial,
    Flipping,
}

impl std::fmt::Display for ContractionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ContractionKind::MoriFibreSpace => "mori-fibre-space",
            ContractionKind::Divisorial => "divisorial",
            ContractionKind::Flipping => "flipping",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionResult {
    pub kind: ContractionKind,
    pub ray: usize,
    pub class: CurveKind,
    pub target: ColouredFan,
    /// Rows of `Phi: N -> N_R`.
    pub projection: Vec<IVec>,
    /// Wall case: maximal cones of the source grouped by target cone.
    pub components: Vec<Vec<usize>>,
    /// Colours deleted from the universal set.
    pub removed_colours: BTreeSet<String>,
    pub supporting: BDivisor,
}

impl ContractionResult {
    pub fn colour(&self) -> Option<&str> {
        match &self.class {
            CurveKind::Colour { colour, .. } => Some(colour),
            CurveKind::Wall { .. } => None,
        }
    }

    /// Whether the orbit of the cone `tau` of the source lies in the
    /// exceptional (or fibred) locus.
    pub fn is_exceptional(&self, fan: &ColouredFan, tau: &[IVec]) -> bool {
        if self.kind == ContractionKind::MoriFibreSpace {
            return true;
        }
        if let Some(a) = self.colour() {
            let u = &fan.lattice.colour(a).expect("colour of the source").u;
            return crate::fan::in_cone(tau, u);
        }
        if !is_face_of_fan(&self.target, tau) {
            return true;
        }
        fan.face_colours(tau) != self.target.face_colours(tau)
    }
}

/// Whether `Cone(gens)` is a cone of a (possibly non-simplicial) fan with
/// exactly these generators.
pub fn is_face_of_fan(fan: &ColouredFan, gens: &[IVec]) -> bool {
    if gens.is_empty() {
        return true;
    }
    let n = fan.rank();
    let mut mid = vec![Q::zero(); n];
    for g in gens {
        for (m, x) in mid.iter_mut().zip(g) {
            *m += q(*x);
        }
    }
    fan.cones.iter().any(|c| {
        if !gens.iter().all(|g| c.gens.contains(g)) {
            return false;
        }
        let p = PolyCone::from_int_gens(&c.gens, n);
        p.face_gens_at(&mid).len() == gens.len()
    })
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, i: usize) -> usize {
        if self.0[i] != i {
            let r = self.find(self.0[i]);
            self.0[i] = r;
        }
        self.0[i]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

pub fn contract(fan: &ColouredFan, mori: &MoriCone, ray: usize) -> Result<ContractionResult, MoriError> {
    let r = mori.rays.get(ray).ok_or(MoriError::NotExtremal(ray))?;
    let class = mori.generators[r.tag].kind.clone();
    let supporting = BDivisor::from_vec(fan, &r.supporting);
    let n = fan.rank();
    let identity: Vec<IVec> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let f = fan.coloured_set();

    if let CurveKind::Colour { colour, .. } = &class {
        let u = fan.lattice.colour(colour)?.u.clone();
        if is_zero_i(&u) {
            let removed: BTreeSet<String> = [colour.clone()].into();
            let target = ColouredFan::new(fan.lattice.without(&removed), fan.cones.clone())?;
            return Ok(ContractionResult {
                kind: ContractionKind::MoriFibreSpace,
                ray,
                class,
                target,
                projection: identity,
                components: vec![],
                removed_colours: removed,
                supporting,
            });
        }
        let mut f2 = f.clone();
        f2.insert(colour.clone());
        let target = fan.recolour(&f2)?;
        let on_plain_ray =
            fan.rays().iter().any(|v| positive_multiple(&u, v).is_some() && fan.ray_colours(v).is_empty());
        let kind = if on_plain_ray { ContractionKind::Divisorial } else { ContractionKind::Flipping };
        return Ok(ContractionResult {
            kind,
            ray,
            class,
            target,
            projection: identity,
            components: vec![],
            removed_colours: BTreeSet::new(),
            supporting,
        });
    }

    let data = cartier_data(fan, &supporting)?;
    let mut uf = UnionFind((0..fan.cones.len()).collect());
    for w in &mori.table.walls {
        if wall_pairing(w, &data)?.is_zero() {
            uf.union(w.plus, w.minus);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..fan.cones.len() {
        groups.entry(uf.find(i)).or_default().push(i);
    }
    let components: Vec<Vec<usize>> = groups.into_values().collect();
    let cells: Vec<Vec<IVec>> = components
        .iter()
        .map(|comp| {
            let set: BTreeSet<IVec> = comp.iter().flat_map(|&i| fan.cones[i].gens.iter().cloned()).collect();
            set.into_iter().collect()
        })
        .collect();
    let polys: Vec<PolyCone> = cells.iter().map(|c| PolyCone::from_int_gens(c, n)).collect();
    let lin = polys[0].lineality();
    for p in &polys[1..] {
        let l = p.lineality();
        let mut both = lin.clone();
        both.extend(l.iter().cloned());
        if l.len() != lin.len() || rank(&both) != lin.len() {
            return Err(MoriError::Internal("merged cells have different lineality".into()));
        }
    }
    let projection: Vec<IVec> = if lin.is_empty() {
        identity
    } else {
        let rows: Vec<IVec> = lin.iter().map(|v| primitive_from_q(v).expect("nonzero")).collect();
        integer_kernel(&rows, n)
    };
    let nr = projection.len();
    let mut target_gens = Vec::new();
    for cell in &cells {
        let imgs: Vec<IVec> =
            cell.iter().map(|v| apply(&projection, v)).filter(|v| !is_zero_i(v)).map(|v| primitive(&v)).collect();
        let p = PolyCone::from_int_gens(&imgs, nr);
        let ext: Vec<IVec> = p.extreme_rays().iter().map(|v| primitive_from_q(v).unwrap()).collect();
        if ext.is_empty() && !imgs.is_empty() {
            return Err(MoriError::Internal("target cell is not strictly convex".into()));
        }
        target_gens.push(ext);
    }
    let removed: BTreeSet<String> =
        f.iter().filter(|a| is_zero_i(&apply(&projection, &fan.lattice.colour(a).unwrap().u))).cloned().collect();
    let lattice = fan.lattice.project(&projection, |c| !removed.contains(&c.name));
    let f_r: BTreeSet<String> = f.difference(&removed).cloned().collect();
    let target = ColouredFan::with_global_colours(lattice, target_gens, &f_r)?;
    let kind = if !lin.is_empty() {
        ContractionKind::MoriFibreSpace
    } else if target.rays().len() < fan.rays().len() {
        // a lost coloured ray carries no G-stable divisor, so the contraction is small
        let kept = target.rays();
        let lost_coloured = fan.rays().iter().any(|v| !kept.contains(v) && !fan.ray_colours(v).is_empty());
        if lost_coloured {
            ContractionKind::Flipping
        } else {
            ContractionKind::Divisorial
        }
    } else {
        ContractionKind::Flipping
    };
    Ok(ContractionResult { kind, ray, class, target, projection, components, removed_colours: removed, supporting })
}

/// The circuit of the rays of `sigma_+ cup sigma_-` for a wall.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallRelation {
    pub wall: Wall,
    /// Coefficients `b'` with `sum b'_i v_i = 0`, normalised by
    /// `b'_+ <m^mu, v_+> = 1`.
    pub coeffs: BTreeMap<IVec, Q>,
    pub plus: Vec<IVec>,
    pub minus: Vec<IVec>,
    pub zero: Vec<IVec>,
}

impl WallRelation {
    pub fn new(fan: &ColouredFan, wall: &Wall) -> Result<Self, MoriError> {
        let n = fan.rank();
        let vp = wall.off_vertex(fan, wall.plus);
        let vm = wall.off_vertex(fan, wall.minus);
        let mut rays = wall.gens.clone();
        rays.push(vp.clone());
        rays.push(vm);
        let cols: Vec<Vec<Q>> = (0..n).map(|i| rays.iter().map(|v| q(v[i])).collect()).collect();
        let ns = if n == 0 { vec![] } else { nullspace(&cols, rays.len()) };
        if ns.len() != 1 {
            return Err(MoriError::Internal(format!("wall {} has no unique relation", fmt_cone(&wall.gens))));
        }
        let b = &ns[0];
        let kp = rays.len() - 2;
        let scale = Q::one() / (&b[kp] * q(crate::arith::dot_i(&wall.normal, &vp)));
        let coeffs: BTreeMap<IVec, Q> = rays.iter().cloned().zip(b.iter().map(|x| x * &scale)).collect();
        let pick = |pred: fn(&Q) -> bool| -> Vec<IVec> {
            coeffs.iter().filter(|(_, c)| pred(c)).map(|(v, _)| v.clone()).collect()
        };
        Ok(WallRelation {
            wall: wall.clone(),
            plus: pick(|c| c.is_positive()),
            minus: pick(|c| c.is_negative()),
            zero: pick(|c| c.is_zero()),
            coeffs,
        })
    }

    /// `sum_{J+} b'_i v_i`.
    pub fn positive_point(&self) -> Vec<Q> {
        let n = self.plus.first().map_or(0, |v| v.len());
        let mut w = vec![Q::zero(); n];
        for v in &self.plus {
            let c = &self.coeffs[v];
            for (wi, x) in w.iter_mut().zip(v) {
                *wi += c * q(*x);
            }
        }
        w
    }

    /// `J- cup J0`, the cone whose orbit closure is the fibre.
    pub fn fibre_cone(&self) -> Vec<IVec> {
        let mut t: Vec<IVec> = self.minus.iter().chain(&self.zero).cloned().collect();
        t.sort();
        t
    }
}

/// The wall generators on a ray, with the tag first.
fn ray_walls(mori: &MoriCone, ray: usize) -> Vec<usize> {
    let r = &mori.rays[ray];
    let mut out: Vec<usize> = Vec::new();
    for &i in std::iter::once(&r.tag).chain(&r.members) {
        if let CurveKind::Wall { wall, .. } = mori.generators[i].kind {
            if !out.contains(&wall) {
                out.push(wall);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipResult {
    pub fan: ColouredFan,
    pub contraction: ContractionResult,
    /// Wall case: the relation used for each flipped component.
    pub relations: Vec<WallRelation>,
}

pub fn flip(fan: &ColouredFan, mori: &MoriCone, ray: usize) -> Result<FlipResult, MoriError> {
    let contraction = contract(fan, mori, ray)?;
    if contraction.kind != ContractionKind::Flipping {
        return Err(MoriError::NotFlipping(ray));
    }
    let result = if let Some(a) = contraction.colour() {
        let u = fan.lattice.colour(a)?.u.clone();
        let rule = match fan.rays().iter().find(|v| positive_multiple(&u, v).is_some()) {
            Some(v) => {
                let old = fan.ray_colours(v);
                let old = old.iter().next().ok_or(MoriError::NotFlipping(ray))?;
                ColourRule::Replace { add: a.to_string(), remove: old.clone() }
            }
            None => ColourRule::Add(a.to_string()),
        };
        FlipResult { fan: star_subdivision(fan, &u, &rule)?, contraction, relations: vec![] }
    } else {
        let mut cones: Vec<Vec<IVec>> = Vec::new();
        let mut relations = Vec::new();
        let mut signature: Option<(Vec<IVec>, Vec<IVec>)> = None;
        for comp in &contraction.components {
            if comp.len() == 1 {
                cones.push(fan.cones[comp[0]].gens.clone());
                continue;
            }
            let w = mori
                .table
                .walls
                .iter()
                .find(|w| comp.contains(&w.plus) && comp.contains(&w.minus))
                .ok_or_else(|| MoriError::Internal("merged component without an interior wall".into()))?;
            let rel = WallRelation::new(fan, w)?;
            let sig = (rel.plus.clone(), rel.minus.clone());
            match &signature {
                Some(s) if *s != sig => {
                    return Err(MoriError::Internal("flipping walls with different circuits".into()));
                }
                _ => signature = Some(sig),
            }
            let circuit: Vec<IVec> = rel.plus.iter().chain(&rel.minus).cloned().collect();
            let build = |drop: &IVec| -> Vec<IVec> {
                let mut g: Vec<IVec> = circuit.iter().filter(|v| *v != drop).chain(&rel.zero).cloned().collect();
                g.sort();
                g
            };
            let mut expected: Vec<Vec<IVec>> = rel.plus.iter().map(build).collect();
            expected.sort();
            let mut actual: Vec<Vec<IVec>> = comp.iter().map(|&i| fan.cones[i].gens.clone()).collect();
            actual.sort();
            if expected != actual {
                return Err(MoriError::Internal(format!(
                    "component around wall {} is not a circuit triangulation",
                    fmt_cone(&w.gens)
                )));
            }
            cones.extend(rel.minus.iter().map(build));
            relations.push(rel);
        }
        let rays: BTreeSet<IVec> = cones.iter().flatten().cloned().collect();
        let f: BTreeSet<String> = fan
            .coloured_set()
            .into_iter()
            .filter(|a| {
                let u = &fan.lattice.colour(a).unwrap().u;
                rays.iter().any(|v| positive_multiple(u, v).is_some())
            })
            .collect();
        let new = ColouredFan::with_global_colours(fan.lattice.clone(), cones, &f)?;
        FlipResult { fan: new, contraction, relations }
    };
    let d = validate_fan(&result.fan);
    if !(d.complete && d.q_factorial) {
        return Err(MoriError::Internal(format!("flipped fan is not Q-factorial: {}", d.summary())));
    }
    Ok(result)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipTower {
    pub flip: FlipResult,
    /// `Sigma_*`.
    pub star: ColouredFan,
    pub u_star: IVec,
    /// `w = d * u_*` for the subdivision point `w`.
    pub d: Q,
    pub delta_dot_c: Q,
    /// `theta^* delta` on `Sigma_*`.
    pub pullback: BDivisor,
    /// `theta_+^* delta_+` on `Sigma_*`.
    pub pullback_plus: BDivisor,
    /// `theta^* delta - theta_+^* delta_+`, in the order of `D(X_*)`.
    pub lhs: Vec<Q>,
    /// `-(delta . C / d) D_*`.
    pub rhs: Vec<Q>,
}

/// The divisor-independent part of a flip tower.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerBase {
    pub source: ColouredFan,
    pub class: CurveClass,
    pub flip: FlipResult,
    pub star: ColouredFan,
    pub u_star: IVec,
    pub d: Q,
}

pub fn flip_tower(fan: &ColouredFan, mori: &MoriCone, ray: usize, delta: &BDivisor) -> Result<FlipTower, MoriError> {
    tower_base(fan, mori, ray)?.apply(delta)
}

pub fn tower_base(fan: &ColouredFan, mori: &MoriCone, ray: usize) -> Result<TowerBase, MoriError> {
    let flip = flip(fan, mori, ray)?;
    let plus = &flip.fan;
    let class = mori.tag(ray)?;
    let (u_star, d, star) = if let Some(a) = flip.contraction.colour() {
        if let CurveKind::Colour { cone, .. } = class.kind {
            if !fan.cones[cone].contains(&fan.lattice.colour(a)?.u) {
                return Err(MoriError::Internal("colour class with u outside its cone".into()));
            }
        }
        let u = fan.lattice.colour(a)?.u.clone();
        let u_star = primitive(&u);
        let d = q(crate::arith::content(&u));
        let mut f = plus.coloured_set();
        f.remove(a);
        let star = plus.recolour(&f)?;
        let from_sigma = match fan.rays().iter().find(|v| **v == u_star) {
            Some(v) => {
                let old = fan.ray_colours(v).into_iter().next().ok_or(MoriError::NotFlipping(ray))?;
                star_subdivision(fan, &u_star, &ColourRule::Strip(old))?
            }
            None => star_subdivision(fan, &u_star, &ColourRule::Keep)?,
        };
        let from_plus = star_subdivision(plus, &u_star, &ColourRule::Strip(a.to_string()))?;
        if from_sigma != star || from_plus != star {
            return Err(MoriError::IdentityViolated("Sigma_* is not a common star subdivision".into()));
        }
        (u_star, d, star)
    } else {
        let rel = match &class.kind {
            CurveKind::Wall { wall, .. } => WallRelation::new(fan, &mori.table.walls[*wall])?,
            CurveKind::Colour { .. } => return Err(MoriError::Internal("wall contraction without wall".into())),
        };
        let w = rel.positive_point();
        let u_star = primitive_from_q(&w).ok_or_else(|| MoriError::Internal("zero subdivision point".into()))?;
        let k = u_star.iter().position(|&x| x != 0).unwrap();
        let d = &w[k] / q(u_star[k]);
        let strip = |x: &ColouredFan| match x.ray_colours(&u_star).into_iter().next() {
            Some(a) => ColourRule::Strip(a),
            None => ColourRule::Keep,
        };
        let star = star_subdivision(fan, &u_star, &strip(fan))?;
        let from_plus = star_subdivision(plus, &u_star, &strip(plus))?;
        if from_plus != star {
            return Err(MoriError::IdentityViolated("Sigma_* is not a common star subdivision".into()));
        }
        (u_star, d, star)
    };
    Ok(TowerBase { source: fan.clone(), class: class.clone(), flip, star, u_star, d })
}

impl TowerBase {
    /// Pull `delta` and its flip back to `Sigma_*` and compare.
    pub fn apply(&self, delta: &BDivisor) -> Result<FlipTower, MoriError> {
        let TowerBase { source: fan, class, flip, star, u_star, d } = self;
        let plus = &flip.fan;
        let delta_dot_c = class.dot(fan, delta);
        let data = cartier_data(fan, delta)?;
        let delta_plus = delta.restrict_to(plus);
        let data_plus = cartier_data(plus, &delta_plus)?;
        let primes = prime_divisors(star);
        let mut pb = Vec::new();
        let mut pb_plus = Vec::new();
        for p in &primes {
            match p {
                Prime::Ray(v) => {
                    pb.push(evaluate_pl(fan, &data, v)?);
                    pb_plus.push(evaluate_pl(plus, &data_plus, v)?);
                }
                Prime::Colour(_) => {
                    pb.push(delta.coeff(p));
                    pb_plus.push(delta_plus.coeff(p));
                }
            }
        }
        let lhs: Vec<Q> = pb.iter().zip(&pb_plus).map(|(a, b)| a - b).collect();
        let corr = -(&delta_dot_c / d);
        let rhs: Vec<Q> =
            primes.iter().map(|p| if *p == Prime::Ray(u_star.clone()) { corr.clone() } else { Q::zero() }).collect();
        if lhs != rhs {
            return Err(MoriError::IdentityViolated(format!("at u_* = {}", fmt_ivec(u_star))));
        }
        Ok(FlipTower {
            pullback: BDivisor::from_vec(star, &pb),
            pullback_plus: BDivisor::from_vec(star, &pb_plus),
            flip: flip.clone(),
            star: star.clone(),
            u_star: u_star.clone(),
            d: d.clone(),
            delta_dot_c,
            lhs,
            rhs,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fibre {
    pub fan: ColouredFan,
    /// Cone of the source whose orbit closure contains the fibre.
    pub tau: Vec<IVec>,
    pub closure: Option<OrbitClosure>,
    pub relation: Option<WallRelation>,
    /// Cone of the fibre fan for the orbit of the tracked point.
    pub orbit: Vec<IVec>,
}

/// Fibre of a contraction over a point of the exceptional (or fibred) locus.
/// When `orbit` is given, the fibre is chosen to meet that orbit.
pub fn fibre_fan(
    fan: &ColouredFan,
    mori: &MoriCone,
    contraction: &ContractionResult,
    orbit: &[IVec],
) -> Result<Fibre, MoriError> {
    let roots = &fan.lattice.roots;
    let levi = fan.lattice.parabolic().levi;
    let node_of = |name: &str| -> Result<usize, MoriError> {
        let c = fan.lattice.colour(name)?;
        Ok(roots.local(c.node).expect("bound colour"))
    };
    let (lattice, tau, cones, f, closure, relation, fibre_orbit) = if let Some(a) = contraction.colour() {
        let u = &fan.lattice.colour(a)?.u;
        let tau = if is_zero_i(u) {
            vec![]
        } else {
            fan.locate(u).map(|(_, t)| t).ok_or_else(|| FanError::PointOutsideSupport(fmt_ivec(u)))?
        };
        let mut nodes = levi;
        for b in fan.face_colours(&tau) {
            nodes.insert(node_of(&b)?);
        }
        nodes.insert(node_of(a)?);
        let c = fan.lattice.colour(a)?;
        let lattice = ColouredLattice::new(
            0,
            vec![Colour { name: c.name.clone(), node: c.node, u: vec![] }],
            roots.restrict(nodes),
        )?;
        (lattice, tau, vec![vec![]], BTreeSet::new(), None, None, vec![])
    } else {
        let candidates = ray_walls(mori, contraction.ray);
        let comp_of = |cone: usize| contraction.components.iter().find(|c| c.contains(&cone));
        let wall = candidates
            .iter()
            .copied()
            .find(|&k| {
                let w = &mori.table.walls[k];
                comp_of(w.plus)
                    .is_some_and(|comp| comp.iter().any(|&i| orbit.iter().all(|g| fan.cones[i].gens.contains(g))))
            })
            .or_else(|| candidates.first().copied())
            .ok_or_else(|| MoriError::Internal("wall contraction without a wall class".into()))?;
        let rel = WallRelation::new(fan, &mori.table.walls[wall])?;
        let tau = rel.fibre_cone();
        let oc = orbit_closure_fan(fan, &tau)?;
        let c0 = oc.fan.coloured_set();
        let mut nodes = levi;
        for b in fan.face_colours(&tau).iter().chain(&c0) {
            nodes.insert(node_of(b)?);
        }
        let colours: Vec<Colour> = oc.fan.lattice.colours.iter().filter(|c| c0.contains(&c.name)).cloned().collect();
        let lattice = ColouredLattice::new(oc.fan.rank(), colours, roots.restrict(nodes))?;
        let fibre_orbit = if tau.iter().all(|g| orbit.contains(g)) {
            let mut img: Vec<IVec> =
                orbit.iter().filter(|g| !tau.contains(g)).map(|g| primitive(&apply(&oc.projection, g))).collect();
            img.sort();
            img
        } else {
            vec![]
        };
        let cones = oc.fan.underlying();
        (lattice, tau, cones, c0, Some(oc), Some(rel), fibre_orbit)
    };
    let fibre = ColouredFan::with_global_colours(lattice, cones, &f)?;
    let p = crate::divisors::picard_rank(&fibre)?;
    if p != 1 {
        return Err(MoriError::Internal(format!("fibre has Picard rank {p}")));
    }
    Ok(Fibre { fan: fibre, tau, closure, relation, orbit: fibre_orbit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::ColouredLattice;
    use crate::rootsys::{build_root_system, DynkinDiagram};

    fn toric(cones: Vec<Vec<IVec>>, n: usize) -> ColouredFan {
        ColouredFan::with_global_colours(ColouredLattice::toric(n), cones, &BTreeSet::new()).unwrap()
    }

    fn plane() -> ColouredFan {
        toric(vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![-1, -1]], vec![vec![-1, -1], vec![1, 0]]], 2)
    }

    fn square() -> ColouredFan {
        toric(
            vec![
                vec![vec![1, 0], vec![0, 1]],
                vec![vec![0, 1], vec![-1, 0]],
                vec![vec![-1, 0], vec![0, -1]],
                vec![vec![0, -1], vec![1, 0]],
            ],
            2,
        )
    }

    fn rank_one(u: i64) -> ColouredFan {
        let roots = build_root_system(&DynkinDiagram::parse("A1").unwrap()).unwrap();
        let lat = ColouredLattice::new(1, vec![Colour { name: "a".into(), node: 1, u: vec![u] }], roots).unwrap();
        let f: BTreeSet<String> = if u != 0 { ["a".to_string()].into() } else { BTreeSet::new() };
        ColouredFan::with_global_colours(lat, vec![vec![vec![1]], vec![vec![-1]]], &f).unwrap()
    }

    #[test]
    fn plane_walls_pair_to_one() {
        let fan = plane();
        let d = BDivisor::prime(&fan, &Prime::Ray(vec![0, 1])).unwrap();
        let k = anticanonical(&fan);
        for w in 0..3 {
            let c = wall_curve_class(&fan, w).unwrap();
            assert_eq!(c.dot(&fan, &d), q(1));
            assert_eq!(c.dot(&fan, &k), q(3));
        }
        let m = mori_generators(&fan).unwrap();
        assert_eq!(m.rays.len(), 1);
        assert!(m.rays[0].k_negative);
    }

    #[test]
    fn square_has_two_rays() {
        let m = mori_generators(&square()).unwrap();
        assert_eq!(m.rays.len(), 2);
        for r in 0..2 {
            let c = contract(&square(), &m, r).unwrap();
            assert_eq!(c.kind, ContractionKind::MoriFibreSpace);
            assert_eq!(c.target.rank(), 1);
        }
    }

    #[test]
    fn colour_class_on_rank_one() {
        let fan = rank_one(1);
        let lower = fan.cones.iter().position(|c| c.gens == vec![vec![-1]]).unwrap();
        let c = colour_curve_class(&fan, "a", lower).unwrap();
        assert_eq!(c.pairing, vec![q(1), q(1)]);
        let upper = 1 - lower;
        assert!(matches!(colour_curve_class(&fan, "a", upper), Err(MoriError::ColourInCone { .. })));
        let m = mori_generators(&fan).unwrap();
        assert_eq!(m.rays.len(), 1);
        assert!(m.rays[0].mixed);
    }

    #[test]
    fn plane_contracts_to_point() {
        let fan = plane();
        let m = mori_generators(&fan).unwrap();
        let c = contract(&fan, &m, 0).unwrap();
        assert_eq!(c.kind, ContractionKind::MoriFibreSpace);
        assert_eq!(c.target.rank(), 0);
        let fib = fibre_fan(&fan, &m, &c, &[]).unwrap();
        assert_eq!(fib.fan.underlying(), fan.underlying());
    }

    #[test]
    fn zero_colour_is_fibre_space() {
        let fan = rank_one(0);
        let m = mori_generators(&fan).unwrap();
        assert_eq!(m.rays.len(), 2);
        let colour_ray = (0..2).find(|&r| !m.tag(r).unwrap().is_wall()).unwrap();
        let c = contract(&fan, &m, colour_ray).unwrap();
        assert_eq!(c.kind, ContractionKind::MoriFibreSpace);
        assert!(c.target.lattice.colours.is_empty());
        let fib = fibre_fan(&fan, &m, &c, &[]).unwrap();
        assert_eq!(fib.fan.rank(), 0);
        assert_eq!(fib.fan.lattice.colours.len(), 1);
    }

    #[test]
    fn blow_up_is_divisorial() {
        let fan = toric(
            vec![
                vec![vec![1, 0], vec![1, 1]],
                vec![vec![1, 1], vec![0, 1]],
                vec![vec![0, 1], vec![-1, -1]],
                vec![vec![-1, -1], vec![1, 0]],
            ],
            2,
        );
        let m = mori_generators(&fan).unwrap();
        let kinds: Vec<ContractionKind> = (0..m.rays.len()).map(|r| contract(&fan, &m, r).unwrap().kind).collect();
        assert!(kinds.contains(&ContractionKind::Divisorial));
        let r = kinds.iter().position(|k| *k == ContractionKind::Divisorial).unwrap();
        let c = contract(&fan, &m, r).unwrap();
        assert_eq!(c.target.rays().len(), 3);
        let fib = fibre_fan(&fan, &m, &c, &[]).unwrap();
        assert_eq!(fib.fan.rank(), 1);
        assert_eq!(fib.fan.rays().len(), 2);
    }
}
