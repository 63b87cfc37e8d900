//! Exact scalars and integer lattice vectors.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar used for every divisor coefficient and pairing.
pub type Q = BigRational;

/// Integer lattice vector. Coordinates in the examples we handle stay tiny,
/// so plain `i64` is enough; all products go through `Q`.
pub type IVec = Vec<i64>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_q(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

pub fn dot_q(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

/// `<m, v>` for a rational covector and an integer vector.
pub fn pair(m: &[Q], v: &[i64]) -> Q {
    m.iter().zip(v).fold(Q::zero(), |acc, (x, &y)| acc + x * BigInt::from(y))
}

pub fn dot_i(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn is_zero_i(v: &[i64]) -> bool {
    v.iter().all(|&x| x == 0)
}

pub fn gcd_slice(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Divide by the content. The zero vector is returned unchanged.
pub fn primitive(v: &[i64]) -> IVec {
    let g = gcd_slice(v);
    if g == 0 {
        return v.to_vec();
    }
    v.iter().map(|x| x / g).collect()
}

/// Content `c` with `v = c * primitive(v)`.
pub fn content(v: &[i64]) -> i64 {
    gcd_slice(v)
}

/// Clear denominators and divide by the content, keeping the direction.
/// Returns `None` for the zero vector.
pub fn primitive_from_q(v: &[Q]) -> Option<IVec> {
    if v.iter().all(|x| x.is_zero()) {
        return None;
    }
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    Some(ints.iter().map(|x| (x / &g).to_i64().expect("lattice coordinate overflow")).collect())
}

/// Scale a rational vector to a primitive integer vector, as rationals.
pub fn normalize_ray(v: &[Q]) -> Vec<Q> {
    match primitive_from_q(v) {
        Some(p) => to_q(&p),
        None => v.to_vec(),
    }
}

/// If `v = lambda * w` with `lambda > 0`, return `lambda`.
pub fn positive_multiple(v: &[i64], w: &[i64]) -> Option<Q> {
    let k = w.iter().position(|&x| x != 0)?;
    let lambda = qr(v[k], w[k]);
    if !lambda.is_positive() {
        return None;
    }
    let ok = v.iter().zip(w).all(|(&a, &b)| q(a) == &lambda * q(b));
    ok.then_some(lambda)
}

/// Render as `p/q` or an integer.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn fmt_ivec(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

pub fn fmt_qvec(v: &[Q]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_q).collect();
    format!("({})", parts.join(","))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not a rational literal: {0:?}")]
pub struct ParseQError(pub String);

/// Parse `p`, `-p`, or `p/q`.
pub fn parse_q(s: &str) -> Result<Q, ParseQError> {
    let err = || ParseQError(s.to_string());
    let t = s.trim();
    match t.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(BigInt::from_str(t).map_err(|_| err())?)),
    }
}

/// Wrapper that prints a rational the way reports do.
pub struct Show<'a>(pub &'a Q);

impl fmt::Display for Show<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_q(self.0))
    }
}
