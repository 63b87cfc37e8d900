//! Exact linear algebra over Q and over Z.

use num_traits::{One, Zero};

use crate::arith::{IVec, Q};

pub type QMat = Vec<Vec<Q>>;

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut QMat) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Q::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

pub fn rank_i(rows: &[IVec]) -> usize {
    let m: QMat = rows.iter().map(|r| crate::arith::to_q(r)).collect();
    rank(&m)
}

/// Basis of `{x : rows * x = 0}` in `Q^dim`.
pub fn nullspace(rows: &[Vec<Q>], dim: usize) -> Vec<Vec<Q>> {
    if rows.is_empty() {
        return (0..dim).map(|i| (0..dim).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect();
    }
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); dim];
            v[f] = Q::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -m[i][f].clone();
            }
            v
        })
        .collect()
}

/// A basis of the row space, taken from the reduced echelon form.
pub fn rowspace(rows: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let mut m = rows.to_vec();
    let k = rref(&mut m).len();
    m.truncate(k);
    m
}

/// Determinant of a square matrix.
pub fn det(rows: &[Vec<Q>]) -> Q {
    let n = rows.len();
    let mut m = rows.to_vec();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= &m[c][c];
        for i in c + 1..n {
            if !m[i][c].is_zero() {
                let f = &m[i][c] / &m[c][c];
                for j in c..n {
                    let t = &f * &m[c][j];
                    m[i][j] -= t;
                }
            }
        }
    }
    d
}

/// Solve `a * x = b`. Returns a particular solution (free variables zero),
/// or `None` when inconsistent.
pub fn solve(a: &[Vec<Q>], b: &[Q], dim: usize) -> Option<Vec<Q>> {
    if a.is_empty() {
        return Some(vec![Q::zero(); dim]);
    }
    let mut m: QMat = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.last() == Some(&dim) {
        return None;
    }
    let mut x = vec![Q::zero(); dim];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = m[i][dim].clone();
    }
    Some(x)
}

/// Coordinates of `v` in the (linearly independent) vectors `basis`.
pub fn coordinates(basis: &[Vec<Q>], v: &[Q]) -> Option<Vec<Q>> {
    let dim = v.len();
    // columns are basis vectors
    let a: QMat = (0..dim).map(|i| basis.iter().map(|b| b[i].clone()).collect()).collect();
    solve(&a, v, basis.len())
}

/// Basis of the integer kernel `{x in Z^n : rows * x = 0}` via unimodular
/// column operations. The result spans a saturated sublattice.
pub fn integer_kernel(rows: &[IVec], n: usize) -> Vec<IVec> {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut u: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect();
    let col_op = |m: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, dst: usize, src: usize, f: i128| {
        // column dst -= f * column src
        for row in m.iter_mut() {
            row[dst] -= f * row[src];
        }
        for row in u.iter_mut() {
            row[dst] -= f * row[src];
        }
    };
    let swap_cols = |m: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, a: usize, b: usize| {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
        for row in u.iter_mut() {
            row.swap(a, b);
        }
    };
    let mut p = 0;
    for r in 0..m.len() {
        if p == n {
            break;
        }
        loop {
            let nz: Vec<usize> = (p..n).filter(|&c| m[r][c] != 0).collect();
            if nz.is_empty() {
                break;
            }
            let piv = *nz.iter().min_by_key(|&&c| m[r][c].abs()).unwrap();
            swap_cols(&mut m, &mut u, p, piv);
            let mut done = true;
            for c in p + 1..n {
                if m[r][c] != 0 {
                    let f = m[r][c].div_euclid(m[r][p]);
                    col_op(&mut m, &mut u, c, p, f);
                    if m[r][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                p += 1;
                break;
            }
        }
    }
    (p..n).map(|c| (0..n).map(|i| i64::try_from(u[i][c]).expect("kernel entry overflow")).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, to_q};

    #[test]
    fn solve_square() {
        let a = vec![to_q(&[1, 0]), to_q(&[-1, -1])];
        let x = solve(&a, &[q(0), q(1)], 2).unwrap();
        assert_eq!(x, vec![q(0), q(-1)]);
    }

    #[test]
    fn determinant() {
        assert_eq!(det(&[to_q(&[1, 2]), to_q(&[3, 4])]), q(-2));
        assert_eq!(det(&[to_q(&[0, 1]), to_q(&[1, 0])]), q(-1));
        assert_eq!(det(&[]), q(1));
    }

    #[test]
    fn solve_inconsistent() {
        let a = vec![to_q(&[1, 0]), to_q(&[2, 0])];
        assert!(solve(&a, &[q(1), q(1)], 2).is_none());
    }

    #[test]
    fn nullspace_dimension() {
        let a = vec![to_q(&[1, 1, 1])];
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert_eq!(crate::arith::dot_q(&a[0], &v), q(0));
        }
    }

    #[test]
    fn integer_kernel_is_saturated() {
        // kernel of (2, 4): spanned by (2,-1), and (1,0) must not be needed
        let k = integer_kernel(&[vec![2, 4]], 2);
        assert_eq!(k.len(), 1);
        assert_eq!(crate::arith::dot_i(&k[0], &[2, 4]), 0);
        assert_eq!(crate::arith::gcd_slice(&k[0]), 1);

        let k = integer_kernel(&[vec![1, 2, 3]], 3);
        assert_eq!(k.len(), 2);
        // together with a lattice complement the basis must be unimodular:
        // check the 2x2 minors have gcd 1
        let (a, b) = (&k[0], &k[1]);
        let minors = [a[0] * b[1] - a[1] * b[0], a[0] * b[2] - a[2] * b[0], a[1] * b[2] - a[2] * b[1]];
        assert_eq!(crate::arith::gcd_slice(&minors), 1);
    }

    #[test]
    fn integer_kernel_empty_rows() {
        assert_eq!(integer_kernel(&[], 2).len(), 2);
    }
}
