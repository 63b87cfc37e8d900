//! B-stable divisors, their piecewise-linear functions and Picard data.
//!
//! The prime divisors `D(X)` are ordered as the non-coloured rays
//! (lexicographically) followed by every universal colour (lattice order).
//! A divisor `sum a_rho D_rho + sum a_alpha D_alpha` has the piecewise-linear
//! function with `phi(v_rho) = a_rho` and `phi(u_alpha) = a_alpha` for
//! `alpha` in `F(sigma)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::{fmt_ivec, fmt_q, pair, positive_multiple, q, IVec, Q};
use crate::fan::{fmt_cone, simplicial_coords, validate_fan, ColouredFan, FanError};
use crate::linalg::{rank, solve};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DivisorError {
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error("divisor is not Q-Cartier: {0}")]
    NotQCartier(String),
    #[error("unknown prime divisor {0}")]
    UnknownPrime(String),
    #[error("point {0} is outside the support")]
    OutsideSupport(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Prime {
    Ray(IVec),
    Colour(String),
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prime::Ray(v) => write!(f, "D{}", fmt_ivec(v)),
            Prime::Colour(a) => write!(f, "D_{a}"),
        }
    }
}

pub fn prime_divisors(fan: &ColouredFan) -> Vec<Prime> {
    let mut out: Vec<Prime> = fan.non_coloured_rays().into_iter().map(Prime::Ray).collect();
    out.extend(fan.lattice.colours.iter().map(|c| Prime::Colour(c.name.clone())));
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BDivisor {
    pub rays: BTreeMap<IVec, Q>,
    pub colours: BTreeMap<String, Q>,
}

impl BDivisor {
    pub fn zero(fan: &ColouredFan) -> Self {
        Self::from_vec(fan, &vec![Q::zero(); prime_divisors(fan).len()])
    }

    pub fn prime(fan: &ColouredFan, p: &Prime) -> Result<Self, DivisorError> {
        let mut d = Self::zero(fan);
        d.set(p, q(1))?;
        Ok(d)
    }

    pub fn from_vec(fan: &ColouredFan, coeffs: &[Q]) -> Self {
        let mut d = BDivisor::default();
        for (p, c) in prime_divisors(fan).into_iter().zip(coeffs) {
            match p {
                Prime::Ray(v) => {
                    d.rays.insert(v, c.clone());
                }
                Prime::Colour(a) => {
                    d.colours.insert(a, c.clone());
                }
            }
        }
        d
    }

    pub fn coeff(&self, p: &Prime) -> Q {
        match p {
            Prime::Ray(v) => self.rays.get(v).cloned().unwrap_or_default(),
            Prime::Colour(a) => self.colours.get(a).cloned().unwrap_or_default(),
        }
    }

    pub fn set(&mut self, p: &Prime, c: Q) -> Result<(), DivisorError> {
        match p {
            Prime::Ray(v) => match self.rays.get_mut(v) {
                Some(x) => *x = c,
                None => return Err(DivisorError::UnknownPrime(p.to_string())),
            },
            Prime::Colour(a) => match self.colours.get_mut(a) {
                Some(x) => *x = c,
                None => return Err(DivisorError::UnknownPrime(p.to_string())),
            },
        }
        Ok(())
    }

    /// Coefficients in the order of [`prime_divisors`]; missing entries are zero.
    pub fn to_vec(&self, fan: &ColouredFan) -> Vec<Q> {
        prime_divisors(fan).iter().map(|p| self.coeff(p)).collect()
    }

    /// Reject coefficients on anything that is not a prime divisor of `fan`.
    pub fn check(&self, fan: &ColouredFan) -> Result<(), DivisorError> {
        let primes: BTreeSet<Prime> = prime_divisors(fan).into_iter().collect();
        for v in self.rays.keys() {
            if !primes.contains(&Prime::Ray(v.clone())) {
                return Err(DivisorError::UnknownPrime(format!("ray {}", fmt_ivec(v))));
            }
        }
        for a in self.colours.keys() {
            if !primes.contains(&Prime::Colour(a.clone())) {
                return Err(DivisorError::UnknownPrime(format!("colour {a}")));
            }
        }
        Ok(())
    }

    pub fn add_scaled(&self, other: &BDivisor, t: &Q) -> BDivisor {
        let mut out = self.clone();
        for (k, v) in &other.rays {
            *out.rays.entry(k.clone()).or_default() += t * v;
        }
        for (k, v) in &other.colours {
            *out.colours.entry(k.clone()).or_default() += t * v;
        }
        out
    }

    /// Keep only coefficients on prime divisors of `fan`, adding zeros for new ones.
    pub fn restrict_to(&self, fan: &ColouredFan) -> BDivisor {
        let coeffs: Vec<Q> = prime_divisors(fan).iter().map(|p| self.coeff(p)).collect();
        BDivisor::from_vec(fan, &coeffs)
    }

    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        for (v, c) in &self.rays {
            parts.push(format!("{}*D{}", fmt_q(c), fmt_ivec(v)));
        }
        for (a, c) in &self.colours {
            parts.push(format!("{}*D_{a}", fmt_q(c)));
        }
        parts.join(" + ")
    }
}

/// Linear function on each maximal cone, in the order of `fan.cones`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartierData {
    pub m: Vec<Vec<Q>>,
}

pub fn cartier_data(fan: &ColouredFan, delta: &BDivisor) -> Result<CartierData, DivisorError> {
    fan.require_complete_simplicial()?;
    let n = fan.rank();
    let mut m = Vec::with_capacity(fan.cones.len());
    for cone in &fan.cones {
        let mut rows: Vec<Vec<Q>> = Vec::new();
        let mut rhs: Vec<Q> = Vec::new();
        let mut covered: BTreeSet<&IVec> = BTreeSet::new();
        for a in &cone.colours {
            let u = &fan.lattice.colour(a)?.u;
            rows.push(crate::arith::to_q(u));
            rhs.push(delta.coeff(&Prime::Colour(a.clone())));
            for g in &cone.gens {
                if positive_multiple(u, g).is_some() {
                    covered.insert(g);
                }
            }
        }
        for g in cone.gens.iter().filter(|g| !covered.contains(g)) {
            rows.push(crate::arith::to_q(g));
            rhs.push(delta.coeff(&Prime::Ray(g.clone())));
        }
        if rank(&rows) < n {
            return Err(DivisorError::NotQCartier(format!(
                "cone {} does not determine a linear function",
                fmt_cone(&cone.gens)
            )));
        }
        let x = solve(&rows, &rhs, n)
            .ok_or_else(|| DivisorError::NotQCartier(format!("inconsistent data on cone {}", fmt_cone(&cone.gens))))?;
        m.push(x);
    }
    Ok(CartierData { m })
}

/// `phi(x)` for an integer point `x`.
pub fn evaluate_pl(fan: &ColouredFan, data: &CartierData, x: &[i64]) -> Result<Q, DivisorError> {
    for (cone, m) in fan.cones.iter().zip(&data.m) {
        if let Some(c) = simplicial_coords(&cone.gens, x) {
            if c.iter().all(|v| !v.is_negative()) {
                return Ok(pair(m, x));
            }
        }
    }
    Err(DivisorError::OutsideSupport(fmt_ivec(x)))
}

/// `phi(x)` for a rational point, by clearing denominators.
pub fn evaluate_pl_q(fan: &ColouredFan, data: &CartierData, x: &[Q]) -> Result<Q, DivisorError> {
    let den = x.iter().fold(BigInt::from(1), |acc, v| num_integer::Integer::lcm(&acc, v.denom()));
    let y: Option<IVec> = x.iter().map(|v| num_traits::ToPrimitive::to_i64(&(v * &den).to_integer())).collect();
    let y = y.ok_or_else(|| DivisorError::OutsideSupport("coordinate overflow".into()))?;
    Ok(evaluate_pl(fan, data, &y)? / Q::from_integer(den))
}

/// `#D(X) - rank N` for a complete Q-factorial fan.
pub fn picard_rank(fan: &ColouredFan) -> Result<usize, DivisorError> {
    validate_fan(fan).require_q_factorial()?;
    let f = fan.coloured_set();
    let uncoloured = fan.lattice.colours.iter().filter(|c| !f.contains(&c.name)).count();
    Ok(fan.rays().len() + uncoloured - fan.rank())
}

/// Dimension of the space of divisors whose Cartier data is one global
/// linear function `m` that also computes every colour coefficient outside
/// `F`. Computed from the Cartier data of the basis divisors.
pub fn principal_dimension(fan: &ColouredFan) -> Result<usize, DivisorError> {
    let primes = prime_divisors(fan);
    let f = fan.coloured_set();
    let mut columns: Vec<Vec<Q>> = Vec::new();
    for p in &primes {
        let d = BDivisor::prime(fan, p)?;
        let data = cartier_data(fan, &d)?;
        let m0 = &data.m[0];
        let mut col: Vec<Q> = Vec::new();
        for m in &data.m[1..] {
            col.extend(m.iter().zip(m0).map(|(a, b)| a - b));
        }
        for c in fan.lattice.colours.iter().filter(|c| !f.contains(&c.name)) {
            col.push(d.coeff(&Prime::Colour(c.name.clone())) - pair(m0, &c.u));
        }
        columns.push(col);
    }
    let rows = columns.first().map_or(0, |c| c.len());
    let matrix: Vec<Vec<Q>> = (0..rows).map(|i| columns.iter().map(|c| c[i].clone()).collect()).collect();
    Ok(primes.len() - rank(&matrix))
}

pub fn anticanonical(fan: &ColouredFan) -> BDivisor {
    let b = fan.lattice.b_coefficients();
    let mut d = BDivisor::zero(fan);
    for v in d.rays.values_mut() {
        *v = q(1);
    }
    for (a, v) in d.colours.iter_mut() {
        *v = q(b[a]);
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::to_q;
    use crate::fan::{Colour, ColouredLattice};
    use crate::rootsys::{build_root_system, DynkinDiagram};

    fn plane() -> ColouredFan {
        ColouredFan::with_global_colours(
            ColouredLattice::toric(2),
            vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![-1, -1]], vec![vec![-1, -1], vec![1, 0]]],
            &BTreeSet::new(),
        )
        .unwrap()
    }

    fn rank_one() -> ColouredFan {
        let roots = build_root_system(&DynkinDiagram::parse("A1").unwrap()).unwrap();
        let lat = ColouredLattice::new(1, vec![Colour { name: "a".into(), node: 1, u: vec![1] }], roots).unwrap();
        ColouredFan::with_global_colours(lat, vec![vec![vec![1]], vec![vec![-1]]], &["a".to_string()].into()).unwrap()
    }

    #[test]
    fn plane_cartier() {
        let fan = plane();
        let d = BDivisor::prime(&fan, &Prime::Ray(vec![0, 1])).unwrap();
        let data = cartier_data(&fan, &d).unwrap();
        let idx = |g: Vec<IVec>| fan.cones.iter().position(|c| c.gens == g).unwrap();
        assert_eq!(data.m[idx(vec![vec![0, 1], vec![1, 0]])], to_q(&[0, 1]));
        assert_eq!(data.m[idx(vec![vec![-1, -1], vec![1, 0]])], to_q(&[0, 0]));
        assert_eq!(evaluate_pl(&fan, &data, &[0, 1]).unwrap(), q(1));
        assert_eq!(evaluate_pl(&fan, &data, &[0, 0]).unwrap(), q(0));
    }

    #[test]
    fn rank_one_cartier() {
        let fan = rank_one();
        let d = BDivisor::prime(&fan, &Prime::Colour("a".into())).unwrap();
        let data = cartier_data(&fan, &d).unwrap();
        assert_eq!(data.m, vec![to_q(&[0]), to_q(&[1])]);
        assert_eq!(evaluate_pl(&fan, &data, &[1]).unwrap(), q(1));
    }

    #[test]
    fn picard_and_principal() {
        for fan in [plane(), rank_one()] {
            let p = picard_rank(&fan).unwrap();
            assert_eq!(p, 1);
            assert_eq!(principal_dimension(&fan).unwrap(), fan.rank());
        }
    }

    #[test]
    fn anticanonical_coefficients() {
        let k = anticanonical(&rank_one());
        assert_eq!(k.to_vec(&rank_one()), vec![q(1), q(2)]);
        assert!(anticanonical(&plane()).to_vec(&plane()).iter().all(|c| *c == q(1)));
    }
}
