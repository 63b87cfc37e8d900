//! Coloured lattices, coloured cones and fans.
//!
//! A fan is stored by its maximal cones; every cone carries its colour set.
//! Faces of simplicial cones are generator subsets, and a face inherits the
//! colours of the cone whose colour points it contains.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, Zero};

use crate::arith::{content, dot_i, fmt_ivec, is_zero_i, primitive, to_q, IVec, Q};
use crate::cone::{intersection_rays, PolyCone};
use crate::linalg::{coordinates, integer_kernel, rank_i};
use crate::rootsys::{NodeSet, ParabolicChoice, RootSystem};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FanError {
    #[error("malformed fan data: {0}")]
    Shape(String),
    #[error("invalid coloured lattice: {0}")]
    InvalidLattice(String),
    #[error("unknown colour {0:?}")]
    UnknownColour(String),
    #[error("fan is not complete: {0}")]
    NotComplete(String),
    #[error("fan is not simplicial: cone {0}")]
    NotSimplicial(String),
    #[error("fan is not Q-factorial: {0}")]
    NotQFactorial(String),
    #[error("fan is not valid: {0}")]
    Invalid(String),
    #[error("point {0} is outside the support of the fan")]
    PointOutsideSupport(String),
    #[error("cone {0} is not in the fan")]
    ConeNotInFan(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Colour {
    pub name: String,
    /// Global (1-based) simple root node this colour is bound to.
    pub node: usize,
    pub u: IVec,
}

/// Lattice `N = Z^rank` with its universal colour set and root data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColouredLattice {
    pub rank: usize,
    /// Sorted by node.
    pub colours: Vec<Colour>,
    pub roots: RootSystem,
}

pub fn trivial_roots() -> RootSystem {
    RootSystem::from_cartan("trivial".into(), vec![], vec![]).expect("empty Cartan matrix")
}

impl ColouredLattice {
    pub fn new(rank: usize, mut colours: Vec<Colour>, roots: RootSystem) -> Result<Self, FanError> {
        colours.sort_by_key(|c| c.node);
        let mut names = BTreeSet::new();
        for (i, c) in colours.iter().enumerate() {
            if c.u.len() != rank {
                return Err(FanError::Shape(format!("colour {} has point of length {}", c.name, c.u.len())));
            }
            if !names.insert(c.name.clone()) {
                return Err(FanError::InvalidLattice(format!("duplicate colour name {}", c.name)));
            }
            if roots.local(c.node).is_err() {
                return Err(FanError::InvalidLattice(format!("colour {} bound to unknown node {}", c.name, c.node)));
            }
            if i > 0 && colours[i - 1].node == c.node {
                return Err(FanError::InvalidLattice(format!("node {} carries two colours", c.node)));
            }
        }
        Ok(ColouredLattice { rank, colours, roots })
    }

    pub fn toric(rank: usize) -> Self {
        ColouredLattice { rank, colours: vec![], roots: trivial_roots() }
    }

    pub fn colour(&self, name: &str) -> Result<&Colour, FanError> {
        self.colours.iter().find(|c| c.name == name).ok_or_else(|| FanError::UnknownColour(name.to_string()))
    }

    pub fn colour_names(&self) -> Vec<String> {
        self.colours.iter().map(|c| c.name.clone()).collect()
    }

    /// The parabolic `I = S \ C`.
    pub fn parabolic(&self) -> ParabolicChoice {
        let colour_nodes = NodeSet::from_indices(
            self.colours.iter().map(|c| self.roots.local(c.node).expect("checked at construction")),
        );
        ParabolicChoice::new(NodeSet::full(self.roots.rank()).minus(colour_nodes))
    }

    pub fn flag_dimension(&self) -> usize {
        self.roots.flag_dimension(self.parabolic())
    }

    /// `b_alpha` for every colour, keyed by name.
    pub fn b_coefficients(&self) -> BTreeMap<String, i64> {
        let b = self.roots.b_coefficients(self.parabolic()).expect("b coefficients of a valid parabolic are positive");
        self.colours.iter().map(|c| (c.name.clone(), b[&self.roots.local(c.node).unwrap()])).collect()
    }

    pub fn omega(&self) -> i64 {
        self.roots.omega(self.parabolic())
    }

    pub fn without(&self, drop: &BTreeSet<String>) -> ColouredLattice {
        ColouredLattice {
            rank: self.rank,
            colours: self.colours.iter().filter(|c| !drop.contains(&c.name)).cloned().collect(),
            roots: self.roots.clone(),
        }
    }

    /// Push the colour points through an integer map with the given rows.
    pub fn project(&self, rows: &[IVec], keep: impl Fn(&Colour) -> bool) -> ColouredLattice {
        ColouredLattice {
            rank: rows.len(),
            colours: self
                .colours
                .iter()
                .filter(|c| keep(c))
                .map(|c| Colour { name: c.name.clone(), node: c.node, u: apply(rows, &c.u) })
                .collect(),
            roots: self.roots.clone(),
        }
    }
}

pub fn apply(rows: &[IVec], x: &[i64]) -> IVec {
    rows.iter().map(|r| dot_i(r, x)).collect()
}

/// Coordinates of `x` in linearly independent generators, if `x` is in their span.
pub fn simplicial_coords(gens: &[IVec], x: &[i64]) -> Option<Vec<Q>> {
    let basis: Vec<Vec<Q>> = gens.iter().map(|g| to_q(g)).collect();
    let xq = to_q(x);
    let c = coordinates(&basis, &xq)?;
    // coordinates() only solves; confirm x really is in the span
    let mut back = vec![Q::zero(); x.len()];
    for (ci, g) in c.iter().zip(&basis) {
        for (b, gi) in back.iter_mut().zip(g) {
            *b += ci * gi;
        }
    }
    (back == xq).then_some(c)
}

/// Membership of an integer point in `Cone(gens)`.
pub fn in_cone(gens: &[IVec], x: &[i64]) -> bool {
    if is_zero_i(x) {
        return true;
    }
    if gens.is_empty() {
        return false;
    }
    if rank_i(gens) == gens.len() {
        return simplicial_coords(gens, x).is_some_and(|c| c.iter().all(|v| !v.is_negative()));
    }
    PolyCone::from_int_gens(gens, x.len()).contains_int(x)
}

/// Generators of the smallest face of the simplicial cone `gens` containing `x`.
pub fn carrier(gens: &[IVec], x: &[i64]) -> Option<Vec<IVec>> {
    let c = simplicial_coords(gens, x)?;
    if c.iter().any(|v| v.is_negative()) {
        return None;
    }
    Some(gens.iter().zip(&c).filter(|(_, v)| v.is_positive()).map(|(g, _)| g.clone()).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ColouredCone {
    /// Primitive generators, sorted.
    pub gens: Vec<IVec>,
    pub colours: BTreeSet<String>,
}

impl ColouredCone {
    pub fn new(mut gens: Vec<IVec>, colours: BTreeSet<String>) -> Self {
        gens.sort();
        gens.dedup();
        ColouredCone { gens, colours }
    }

    pub fn is_simplicial(&self) -> bool {
        rank_i(&self.gens) == self.gens.len()
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        in_cone(&self.gens, x)
    }
}

pub fn fmt_cone(gens: &[IVec]) -> String {
    let parts: Vec<String> = gens.iter().map(|g| fmt_ivec(g)).collect();
    format!("<{}>", parts.join(","))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColouredFan {
    pub lattice: ColouredLattice,
    /// Maximal cones, sorted by generator list.
    pub cones: Vec<ColouredCone>,
}

impl ColouredFan {
    /// Shape checks only; use [`validate_fan`] for the fan axioms.
    pub fn new(lattice: ColouredLattice, mut cones: Vec<ColouredCone>) -> Result<Self, FanError> {
        if cones.is_empty() {
            return Err(FanError::Shape("fan has no cones".into()));
        }
        for c in &cones {
            for g in &c.gens {
                if g.len() != lattice.rank {
                    return Err(FanError::Shape(format!("generator {} has wrong length", fmt_ivec(g))));
                }
                if is_zero_i(g) || content(g) != 1 {
                    return Err(FanError::Shape(format!("generator {} is not primitive", fmt_ivec(g))));
                }
            }
            for a in &c.colours {
                lattice.colour(a)?;
            }
        }
        cones.sort();
        cones.dedup();
        Ok(ColouredFan { lattice, cones })
    }

    /// Build a fan whose colour sets are forced by a global colour set `f`:
    /// each cone carries every `alpha` in `f` with `u_alpha` in the cone.
    pub fn with_global_colours(
        lattice: ColouredLattice,
        gens: Vec<Vec<IVec>>,
        f: &BTreeSet<String>,
    ) -> Result<Self, FanError> {
        let mut cones = Vec::new();
        for g in gens {
            let mut colours = BTreeSet::new();
            for a in f {
                let c = lattice.colour(a)?;
                if !is_zero_i(&c.u) && in_cone(&g, &c.u) {
                    colours.insert(a.clone());
                }
            }
            cones.push(ColouredCone::new(g, colours));
        }
        ColouredFan::new(lattice, cones)
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank
    }

    pub fn rays(&self) -> Vec<IVec> {
        let set: BTreeSet<IVec> = self.cones.iter().flat_map(|c| c.gens.iter().cloned()).collect();
        set.into_iter().collect()
    }

    /// `F(Sigma)`.
    pub fn coloured_set(&self) -> BTreeSet<String> {
        self.cones.iter().flat_map(|c| c.colours.iter().cloned()).collect()
    }

    /// Colours carried by the ray `Cone(v)`.
    pub fn ray_colours(&self, v: &[i64]) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for c in &self.cones {
            if !c.gens.iter().any(|g| g == v) {
                continue;
            }
            for a in &c.colours {
                let u = &self.lattice.colour(a).expect("checked").u;
                if crate::arith::positive_multiple(u, v).is_some() {
                    out.insert(a.clone());
                }
            }
        }
        out
    }

    pub fn non_coloured_rays(&self) -> Vec<IVec> {
        self.rays().into_iter().filter(|r| self.ray_colours(r).is_empty()).collect()
    }

    pub fn is_simplicial(&self) -> bool {
        self.cones.iter().all(|c| c.is_simplicial())
    }

    pub fn require_simplicial(&self) -> Result<(), FanError> {
        match self.cones.iter().find(|c| !c.is_simplicial()) {
            Some(c) => Err(FanError::NotSimplicial(fmt_cone(&c.gens))),
            None => Ok(()),
        }
    }

    /// Simplicial, full-dimensional maximal cones, and every facet on two of them.
    pub fn require_complete_simplicial(&self) -> Result<(), FanError> {
        self.require_simplicial()?;
        if let Some(c) = self.cones.iter().find(|c| c.gens.len() != self.rank()) {
            return Err(FanError::NotComplete(format!("maximal cone {} is not full-dimensional", fmt_cone(&c.gens))));
        }
        for (facet, owners) in self.facet_owners() {
            if owners.len() != 2 {
                return Err(FanError::NotComplete(format!(
                    "facet {} borders {} maximal cones",
                    fmt_cone(&facet),
                    owners.len()
                )));
            }
        }
        Ok(())
    }

    fn facet_owners(&self) -> BTreeMap<Vec<IVec>, Vec<usize>> {
        let mut owners: BTreeMap<Vec<IVec>, Vec<usize>> = BTreeMap::new();
        if self.rank() == 0 {
            return owners;
        }
        for (i, c) in self.cones.iter().enumerate() {
            for skip in 0..c.gens.len() {
                let facet: Vec<IVec> =
                    c.gens.iter().enumerate().filter(|(k, _)| *k != skip).map(|(_, g)| g.clone()).collect();
                owners.entry(facet).or_default().push(i);
            }
        }
        owners
    }

    /// Index of a maximal cone containing every generator in `gens`.
    pub fn cone_over(&self, gens: &[IVec]) -> Option<usize> {
        self.cones.iter().position(|c| gens.iter().all(|g| c.gens.contains(g)))
    }

    /// Whether `Cone(gens)` (sorted generators) is a cone of this simplicial fan.
    pub fn has_cone(&self, gens: &[IVec]) -> bool {
        self.cone_over(gens).is_some()
    }

    /// Maximal cones having `Cone(gens)` as a face.
    pub fn star(&self, gens: &[IVec]) -> Vec<usize> {
        (0..self.cones.len()).filter(|&i| gens.iter().all(|g| self.cones[i].gens.contains(g))).collect()
    }

    /// Colours of the face `Cone(gens)`.
    pub fn face_colours(&self, gens: &[IVec]) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for i in self.star(gens) {
            for a in &self.cones[i].colours {
                if in_cone(gens, &self.lattice.colour(a).unwrap().u) {
                    out.insert(a.clone());
                }
            }
        }
        out
    }

    /// Smallest cone of the (simplicial) fan containing `x`, with the index of
    /// a maximal cone containing it.
    pub fn locate(&self, x: &[i64]) -> Option<(usize, Vec<IVec>)> {
        self.cones.iter().enumerate().find_map(|(i, c)| carrier(&c.gens, x).map(|t| (i, t)))
    }

    pub fn dimension(&self) -> usize {
        self.rank() + self.lattice.flag_dimension()
    }

    /// Same lattice and cones, colours recomputed from a new `F`.
    pub fn recolour(&self, f: &BTreeSet<String>) -> Result<ColouredFan, FanError> {
        ColouredFan::with_global_colours(self.lattice.clone(), self.cones.iter().map(|c| c.gens.clone()).collect(), f)
    }

    pub fn underlying(&self) -> Vec<Vec<IVec>> {
        self.cones.iter().map(|c| c.gens.clone()).collect()
    }
}

impl fmt::Display for ColouredFan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .cones
            .iter()
            .map(|c| {
                if c.colours.is_empty() {
                    fmt_cone(&c.gens)
                } else {
                    let cs: Vec<&str> = c.colours.iter().map(|s| s.as_str()).collect();
                    format!("{}{{{}}}", fmt_cone(&c.gens), cs.join(","))
                }
            })
            .collect();
        write!(f, "rank {} [{}]", self.rank(), parts.join(" "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Issue {
    pub check: &'static str,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FanDiagnostics {
    pub valid: bool,
    pub complete: bool,
    pub simplicial: bool,
    pub q_factorial: bool,
    pub issues: Vec<Issue>,
}

impl FanDiagnostics {
    pub fn require_q_factorial(&self) -> Result<(), FanError> {
        if !self.valid {
            return Err(FanError::Invalid(self.summary()));
        }
        if !self.complete {
            return Err(FanError::NotComplete(self.summary()));
        }
        if !self.q_factorial {
            return Err(FanError::NotQFactorial(self.summary()));
        }
        Ok(())
    }

    pub fn summary(&self) -> String {
        let parts: Vec<String> = self.issues.iter().map(|i| format!("{}: {}", i.check, i.witness)).collect();
        if parts.is_empty() {
            "no issues".into()
        } else {
            parts.join("; ")
        }
    }
}

/// Check the fan axioms and report completeness, simpliciality and
/// Q-factoriality with witnesses.
pub fn validate_fan(fan: &ColouredFan) -> FanDiagnostics {
    let n = fan.rank();
    let mut issues = Vec::new();
    let mut push = |check: &'static str, witness: String| issues.push(Issue { check, witness });
    let polys: Vec<PolyCone> = fan.cones.iter().map(|c| PolyCone::from_int_gens(&c.gens, n)).collect();

    for (c, p) in fan.cones.iter().zip(&polys) {
        if !p.is_pointed() {
            push("strictly convex", fmt_cone(&c.gens));
        } else if p.extreme_rays().len() != c.gens.len() {
            push("irredundant generators", fmt_cone(&c.gens));
        }
        for a in &c.colours {
            let u = &fan.lattice.colour(a).unwrap().u;
            if is_zero_i(u) {
                push("coloured cone: u nonzero", format!("{a} in {}", fmt_cone(&c.gens)));
            } else if !p.contains_int(u) {
                push("coloured cone: u in cone", format!("{a} in {}", fmt_cone(&c.gens)));
            }
        }
    }

    // pairwise intersections are common faces
    for i in 0..fan.cones.len() {
        for j in i + 1..fan.cones.len() {
            let common: Vec<IVec> =
                fan.cones[i].gens.iter().filter(|g| fan.cones[j].gens.contains(g)).cloned().collect();
            let meet = intersection_rays(&polys[i], &polys[j]);
            let common_q: Vec<Vec<Q>> = {
                let mut v: Vec<Vec<Q>> = common.iter().map(|g| to_q(g)).collect();
                v.sort();
                v
            };
            let face_ok = |p: &PolyCone, c: &ColouredCone| -> bool {
                if common.is_empty() {
                    return true;
                }
                let mut mid = vec![Q::zero(); n];
                for g in &common {
                    for (m, x) in mid.iter_mut().zip(g) {
                        *m += Q::from_integer((*x).into());
                    }
                }
                let on_face: Vec<IVec> = p.face_gens_at(&mid).into_iter().map(|k| c.gens[k].clone()).collect();
                on_face.len() == common.len()
            };
            if !meet.lineality.is_empty()
                || meet.rays != common_q
                || !face_ok(&polys[i], &fan.cones[i])
                || !face_ok(&polys[j], &fan.cones[j])
            {
                push(
                    "intersection is a common face",
                    format!("{} and {}", fmt_cone(&fan.cones[i].gens), fmt_cone(&fan.cones[j].gens)),
                );
            }
        }
    }

    // colour inheritance: each cone carries exactly the colours of F(Sigma) it contains
    let f = fan.coloured_set();
    for c in &fan.cones {
        let forced: BTreeSet<String> = f
            .iter()
            .filter(|a| {
                let u = &fan.lattice.colour(a).unwrap().u;
                !is_zero_i(u) && c.contains(u)
            })
            .cloned()
            .collect();
        if forced != c.colours {
            push("face colour inheritance", fmt_cone(&c.gens));
        }
    }

    let valid = issues.is_empty();
    let simplicial = fan.is_simplicial();
    let complete = valid && completeness(fan, &polys);
    let mut q_factorial = valid && simplicial;
    if q_factorial {
        let rays = fan.rays();
        for a in &f {
            let u = &fan.lattice.colour(a).unwrap().u;
            let on_ray = rays.iter().find(|r| crate::arith::positive_multiple(u, r).is_some());
            match on_ray {
                Some(r) if fan.ray_colours(r).len() == 1 => {}
                Some(r) => {
                    q_factorial = false;
                    issues.push(Issue { check: "Q-factorial: one colour per ray", witness: fmt_ivec(r) });
                }
                None => {
                    q_factorial = false;
                    issues.push(Issue { check: "Q-factorial: colour point on a ray", witness: a.clone() });
                }
            }
        }
    }
    if !simplicial {
        for c in fan.cones.iter().filter(|c| !c.is_simplicial()) {
            issues.push(Issue { check: "simplicial", witness: fmt_cone(&c.gens) });
        }
    }
    if valid && !complete {
        issues.push(Issue { check: "complete", witness: "support is not the whole space".into() });
    }
    FanDiagnostics { valid, complete, simplicial, q_factorial, issues }
}

fn completeness(fan: &ColouredFan, polys: &[PolyCone]) -> bool {
    let n = fan.rank();
    if n == 0 {
        return true;
    }
    if polys.iter().any(|p| p.cone_dim() != n) {
        return false;
    }
    // every facet of every maximal cone lies on exactly two maximal cones
    let mut count: BTreeMap<Vec<IVec>, usize> = BTreeMap::new();
    for (c, p) in fan.cones.iter().zip(polys) {
        for set in p.facet_gen_sets() {
            let facet: Vec<IVec> = set.into_iter().map(|k| c.gens[k].clone()).collect();
            *count.entry(facet).or_default() += 1;
        }
    }
    count.values().all(|&k| k == 2)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wall {
    pub gens: Vec<IVec>,
    /// Index of `sigma_+` (the lexicographically smaller cone).
    pub plus: usize,
    pub minus: usize,
    /// Primitive functional, positive on `sigma_+` and zero on the wall.
    pub normal: IVec,
}

impl Wall {
    pub fn off_vertex(&self, fan: &ColouredFan, side: usize) -> IVec {
        fan.cones[side]
            .gens
            .iter()
            .find(|g| !self.gens.contains(g))
            .expect("maximal cone has a vertex off the wall")
            .clone()
    }
}

pub fn walls(fan: &ColouredFan) -> Result<Vec<Wall>, FanError> {
    fan.require_complete_simplicial()?;
    let n = fan.rank();
    let mut out = Vec::new();
    for (facet, owners) in fan.facet_owners() {
        let (plus, minus) = (owners[0].min(owners[1]), owners[0].max(owners[1]));
        let ker = integer_kernel(&facet, n);
        if ker.len() != 1 {
            return Err(FanError::Internal(format!("wall {} has no unique normal", fmt_cone(&facet))));
        }
        let mut normal = ker[0].clone();
        let mut wall = Wall { gens: facet, plus, minus, normal: normal.clone() };
        let vp = wall.off_vertex(fan, plus);
        if dot_i(&normal, &vp) < 0 {
            normal.iter_mut().for_each(|x| *x = -*x);
        }
        wall.normal = normal;
        let vm = wall.off_vertex(fan, minus);
        if dot_i(&wall.normal, &vm) >= 0 {
            return Err(FanError::Internal(format!("wall {} does not separate", fmt_cone(&wall.gens))));
        }
        out.push(wall);
    }
    Ok(out)
}

/// How the colour set changes under a star subdivision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColourRule {
    Keep,
    Strip(String),
    Add(String),
    Replace { add: String, remove: String },
}

impl ColourRule {
    fn apply(&self, f: &BTreeSet<String>) -> BTreeSet<String> {
        let mut out = f.clone();
        match self {
            ColourRule::Keep => {}
            ColourRule::Strip(a) => {
                out.remove(a);
            }
            ColourRule::Add(a) => {
                out.insert(a.clone());
            }
            ColourRule::Replace { add, remove } => {
                out.remove(remove);
                out.insert(add.clone());
            }
        }
        out
    }
}

/// Star subdivision of a simplicial fan through the primitive point `u`.
pub fn star_subdivision(fan: &ColouredFan, u: &[i64], rule: &ColourRule) -> Result<ColouredFan, FanError> {
    fan.require_simplicial()?;
    let u = primitive(u);
    if is_zero_i(&u) {
        return Err(FanError::PointOutsideSupport(fmt_ivec(&u)));
    }
    let (_, t) = fan.locate(&u).ok_or_else(|| FanError::PointOutsideSupport(fmt_ivec(&u)))?;
    let mut gens: Vec<Vec<IVec>> = Vec::new();
    if t.len() == 1 {
        gens = fan.underlying();
    } else {
        for c in &fan.cones {
            if t.iter().all(|g| c.gens.contains(g)) {
                for drop in &t {
                    let mut g: Vec<IVec> = c.gens.iter().filter(|x| *x != drop).cloned().collect();
                    g.push(u.clone());
                    gens.push(g);
                }
            } else {
                gens.push(c.gens.clone());
            }
        }
    }
    let f = rule.apply(&fan.coloured_set());
    ColouredFan::with_global_colours(fan.lattice.clone(), gens, &f)
}

/// Image of a ray of `Star(tau)` in the quotient lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RayImage {
    pub source: IVec,
    pub image: IVec,
    /// `phi(source) = d * image`.
    pub d: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitClosure {
    pub tau: Vec<IVec>,
    pub fan: ColouredFan,
    /// Rows of the projection `N -> N / (N cap span tau)`.
    pub projection: Vec<IVec>,
    pub rays: Vec<RayImage>,
    /// Colours of `tau`, removed from the universal set.
    pub tau_colours: BTreeSet<String>,
}

impl OrbitClosure {
    pub fn image_of(&self, v: &[i64]) -> Option<&RayImage> {
        self.rays.iter().find(|r| r.source == v)
    }
}

/// Coloured fan of the orbit closure attached to the cone `tau` of a
/// simplicial fan.
pub fn orbit_closure_fan(fan: &ColouredFan, tau: &[IVec]) -> Result<OrbitClosure, FanError> {
    fan.require_simplicial()?;
    let mut tau = tau.to_vec();
    tau.sort();
    let star = fan.star(&tau);
    if star.is_empty() {
        return Err(FanError::ConeNotInFan(fmt_cone(&tau)));
    }
    let n = fan.rank();
    let projection: Vec<IVec> = if tau.is_empty() {
        (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
    } else {
        integer_kernel(&tau, n)
    };
    let tau_colours = fan.face_colours(&tau);
    let star_colours: BTreeSet<String> = star.iter().flat_map(|&i| fan.cones[i].colours.iter().cloned()).collect();
    let f: BTreeSet<String> = star_colours.difference(&tau_colours).cloned().collect();
    let lattice = fan.lattice.project(&projection, |c| !tau_colours.contains(&c.name));

    let mut rays: BTreeMap<IVec, RayImage> = BTreeMap::new();
    let mut gens = Vec::new();
    for &i in &star {
        let mut g = Vec::new();
        for v in fan.cones[i].gens.iter().filter(|v| !tau.contains(v)) {
            let img = apply(&projection, v);
            let d = content(&img);
            if d == 0 {
                return Err(FanError::Internal(format!("ray {} collapses in the quotient", fmt_ivec(v))));
            }
            let p = primitive(&img);
            rays.insert(v.clone(), RayImage { source: v.clone(), image: p.clone(), d });
            g.push(p);
        }
        gens.push(g);
    }
    let qfan = ColouredFan::with_global_colours(lattice, gens, &f)?;
    Ok(OrbitClosure { tau, fan: qfan, projection, rays: rays.into_values().collect(), tau_colours })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{build_root_system, DynkinDiagram};

    pub fn plane() -> ColouredFan {
        ColouredFan::with_global_colours(
            ColouredLattice::toric(2),
            vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![-1, -1]], vec![vec![-1, -1], vec![1, 0]]],
            &BTreeSet::new(),
        )
        .unwrap()
    }

    fn rank_one(u: i64) -> ColouredFan {
        let roots = build_root_system(&DynkinDiagram::parse("A1").unwrap()).unwrap();
        let lat = ColouredLattice::new(1, vec![Colour { name: "a".into(), node: 1, u: vec![u] }], roots).unwrap();
        let f: BTreeSet<String> = if u != 0 { ["a".to_string()].into() } else { BTreeSet::new() };
        ColouredFan::with_global_colours(lat, vec![vec![vec![1]], vec![vec![-1]]], &f).unwrap()
    }

    #[test]
    fn plane_diagnostics() {
        let d = validate_fan(&plane());
        assert!(d.valid && d.complete && d.simplicial && d.q_factorial, "{d:?}");
        assert_eq!(walls(&plane()).unwrap().len(), 3);
    }

    #[test]
    fn rank_one_coloured() {
        let fan = rank_one(1);
        let d = validate_fan(&fan);
        assert!(d.complete && d.q_factorial, "{d:?}");
        let w = walls(&fan).unwrap();
        assert_eq!(w.len(), 1);
        assert!(w[0].gens.is_empty());
        assert_eq!(fan.dimension(), 2);
        assert_eq!(fan.non_coloured_rays(), vec![vec![-1]]);
    }

    #[test]
    fn overlapping_cones_are_reported() {
        let fan = ColouredFan::with_global_colours(
            ColouredLattice::toric(2),
            vec![vec![vec![1, 0], vec![1, 2]], vec![vec![0, 1], vec![1, 1]]],
            &BTreeSet::new(),
        )
        .unwrap();
        let d = validate_fan(&fan);
        assert!(!d.valid);
        assert_eq!(d.issues[0].check, "intersection is a common face");
    }

    #[test]
    fn subdivide_plane() {
        let s = star_subdivision(&plane(), &[1, 1], &ColourRule::Keep).unwrap();
        assert_eq!(s.cones.len(), 4);
        assert_eq!(s.rays().len(), 4);
        assert!(validate_fan(&s).q_factorial);
        let same = star_subdivision(&plane(), &[0, 1], &ColourRule::Keep).unwrap();
        assert_eq!(same, plane());
    }

    #[test]
    fn strip_colour_on_ray() {
        let s = star_subdivision(&rank_one(1), &[1], &ColourRule::Strip("a".into())).unwrap();
        assert!(s.coloured_set().is_empty());
        assert_eq!(s.underlying(), rank_one(1).underlying());
    }

    #[test]
    fn orbit_closure_of_plane_ray() {
        let oc = orbit_closure_fan(&plane(), &[vec![1, 0]]).unwrap();
        assert_eq!(oc.fan.rank(), 1);
        assert_eq!(oc.fan.rays().len(), 2);
        assert!(validate_fan(&oc.fan).complete);
        let pt = orbit_closure_fan(&plane(), &[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(pt.fan.rank(), 0);
        assert_eq!(pt.fan.cones.len(), 1);
        assert!(orbit_closure_fan(&plane(), &[vec![1, 1]]).is_err());
    }

    #[test]
    fn flag_only_dimension() {
        let roots = build_root_system(&DynkinDiagram::parse("A2").unwrap()).unwrap();
        let lat = ColouredLattice::new(0, vec![Colour { name: "a".into(), node: 1, u: vec![] }], roots).unwrap();
        let fan = ColouredFan::with_global_colours(lat, vec![vec![]], &BTreeSet::new()).unwrap();
        assert_eq!(fan.dimension(), 2);
        assert!(validate_fan(&fan).q_factorial);
        assert!(walls(&fan).unwrap().is_empty());
    }
}
