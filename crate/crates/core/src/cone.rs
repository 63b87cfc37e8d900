//! Exact polyhedral cones: double description, membership, faces.
//!
//! Every cone here is rational and given either by generators
//! (`cone(V)`) or by inequalities (`{x : A x >= 0}`). Conversion in both
//! directions goes through [`dual_cone`], which runs the double description
//! method on the pointed part of the cone.

use num_traits::{Signed, Zero};

use crate::arith::{dot_q, normalize_ray, to_q, IVec, Q};
use crate::linalg::{nullspace, rank, rowspace, solve};

/// Generators of `{y : rows * y >= 0}`: extreme rays of the pointed part plus
/// a basis of the lineality space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VRep {
    pub rays: Vec<Vec<Q>>,
    pub lineality: Vec<Vec<Q>>,
}

pub fn dual_cone(rows: &[Vec<Q>], dim: usize) -> VRep {
    let rows: Vec<Vec<Q>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let lineality = nullspace(&rows, dim);
    if rows.is_empty() {
        return VRep { rays: vec![], lineality };
    }
    let basis = rowspace(&rows);
    let r = basis.len();
    // constraint matrix in coordinates of the row space
    let b: Vec<Vec<Q>> = rows.iter().map(|a| basis.iter().map(|w| dot_q(a, w)).collect()).collect();
    let pointed = double_description(&b, r);
    let mut rays: Vec<Vec<Q>> = pointed
        .iter()
        .map(|s| {
            let mut y = vec![Q::zero(); dim];
            for (si, w) in s.iter().zip(&basis) {
                for (yj, wj) in y.iter_mut().zip(w) {
                    *yj += si * wj;
                }
            }
            normalize_ray(&y)
        })
        .collect();
    rays.sort();
    rays.dedup();
    VRep { rays, lineality }
}

/// Extreme rays of `{s : b * s >= 0}` where `b` has full column rank `r`.
fn double_description(b: &[Vec<Q>], r: usize) -> Vec<Vec<Q>> {
    // greedy choice of r independent rows
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..b.len() {
        let mut trial: Vec<Vec<Q>> = chosen.iter().map(|&j| b[j].clone()).collect();
        trial.push(b[i].clone());
        if rank(&trial) == trial.len() {
            chosen.push(i);
            if chosen.len() == r {
                break;
            }
        }
    }
    debug_assert_eq!(chosen.len(), r);
    let sub: Vec<Vec<Q>> = chosen.iter().map(|&j| b[j].clone()).collect();
    let mut rays: Vec<Vec<Q>> = (0..r)
        .map(|i| {
            let e: Vec<Q> = (0..r).map(|k| if k == i { Q::from_integer(1.into()) } else { Q::zero() }).collect();
            normalize_ray(&solve(&sub, &e, r).expect("basis rows are independent"))
        })
        .collect();
    let mut processed: Vec<usize> = chosen.clone();
    for i in 0..b.len() {
        if chosen.contains(&i) {
            continue;
        }
        let row = &b[i];
        let vals: Vec<Q> = rays.iter().map(|s| dot_q(row, s)).collect();
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        let mut next: Vec<Vec<Q>> = Vec::new();
        for (k, v) in vals.iter().enumerate() {
            if v.is_positive() {
                pos.push(k);
                next.push(rays[k].clone());
            } else if v.is_negative() {
                neg.push(k);
            } else {
                next.push(rays[k].clone());
            }
        }
        let zero_set =
            |s: &Vec<Q>| -> Vec<usize> { processed.iter().copied().filter(|&j| dot_q(&b[j], s).is_zero()).collect() };
        let zsets: Vec<Vec<usize>> = rays.iter().map(zero_set).collect();
        for &p in &pos {
            for &n in &neg {
                let common: Vec<usize> = zsets[p].iter().copied().filter(|j| zsets[n].contains(j)).collect();
                if r >= 2 {
                    let m: Vec<Vec<Q>> = common.iter().map(|&j| b[j].clone()).collect();
                    if rank(&m) != r - 2 {
                        continue;
                    }
                }
                let new: Vec<Q> = rays[n].iter().zip(&rays[p]).map(|(sn, sp)| &vals[p] * sn - &vals[n] * sp).collect();
                next.push(normalize_ray(&new));
            }
        }
        next.sort();
        next.dedup();
        rays = next;
        processed.push(i);
    }
    rays
}

/// A finitely generated cone with its inequality description.
#[derive(Debug, Clone)]
pub struct PolyCone {
    pub dim: usize,
    pub gens: Vec<Vec<Q>>,
    /// Facet normals `f` with `f . x >= 0` on the cone.
    pub facets: Vec<Vec<Q>>,
    /// Functionals vanishing on the cone.
    pub equations: Vec<Vec<Q>>,
}

impl PolyCone {
    pub fn from_gens(gens: Vec<Vec<Q>>, dim: usize) -> Self {
        let v = dual_cone(&gens, dim);
        PolyCone { dim, gens, facets: v.rays, equations: v.lineality }
    }

    pub fn from_int_gens(gens: &[IVec], dim: usize) -> Self {
        Self::from_gens(gens.iter().map(|g| to_q(g)).collect(), dim)
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        self.equations.iter().all(|e| dot_q(e, x).is_zero()) && self.facets.iter().all(|f| !dot_q(f, x).is_negative())
    }

    pub fn contains_int(&self, x: &[i64]) -> bool {
        self.contains(&to_q(x))
    }

    /// Strict interior of the cone relative to its span.
    pub fn contains_relint(&self, x: &[Q]) -> bool {
        self.equations.iter().all(|e| dot_q(e, x).is_zero()) && self.facets.iter().all(|f| dot_q(f, x).is_positive())
    }

    /// Dimension of the linear span.
    pub fn cone_dim(&self) -> usize {
        self.dim - self.equations.len()
    }

    /// Basis of the largest linear subspace inside the cone.
    pub fn lineality(&self) -> Vec<Vec<Q>> {
        let mut rows = self.facets.clone();
        rows.extend(self.equations.iter().cloned());
        nullspace(&rows, self.dim)
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality().is_empty()
    }

    /// Facets tight at `x` together with the equations.
    fn tight_rows(&self, x: &[Q]) -> Vec<Vec<Q>> {
        let mut rows: Vec<Vec<Q>> = self.facets.iter().filter(|f| dot_q(f, x).is_zero()).cloned().collect();
        rows.extend(self.equations.iter().cloned());
        rows
    }

    /// Dimension of the smallest face containing `x` (assumed in the cone).
    pub fn face_dim_at(&self, x: &[Q]) -> usize {
        self.dim - rank(&self.tight_rows(x))
    }

    /// Generators lying on the smallest face containing `x`.
    pub fn face_gens_at(&self, x: &[Q]) -> Vec<usize> {
        let tight = self.tight_rows(x);
        (0..self.gens.len()).filter(|&i| tight.iter().all(|t| dot_q(t, &self.gens[i]).is_zero())).collect()
    }

    /// Extreme rays, normalized and sorted; empty when the cone has lineality.
    pub fn extreme_rays(&self) -> Vec<Vec<Q>> {
        if !self.is_pointed() {
            return vec![];
        }
        let mut out: Vec<Vec<Q>> = self
            .gens
            .iter()
            .filter(|g| g.iter().any(|x| !x.is_zero()))
            .filter(|g| self.face_dim_at(g) == 1)
            .map(|g| normalize_ray(g))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Index sets of generators on each facet.
    pub fn facet_gen_sets(&self) -> Vec<Vec<usize>> {
        self.facets
            .iter()
            .map(|f| (0..self.gens.len()).filter(|&i| dot_q(f, &self.gens[i]).is_zero()).collect())
            .collect()
    }
}

/// Extreme rays of `cone(gens) ∩ cone(other)` computed from the joint
/// inequality description.
pub fn intersection_rays(a: &PolyCone, b: &PolyCone) -> VRep {
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for f in a.facets.iter().chain(&b.facets) {
        rows.push(f.clone());
    }
    for e in a.equations.iter().chain(&b.equations) {
        rows.push(e.clone());
        rows.push(e.iter().map(|x| -x).collect());
    }
    dual_cone(&rows, a.dim)
}
