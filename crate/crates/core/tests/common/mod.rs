//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

/// Simple roots in doubled Euclidean coordinates (Bourbaki realizations).
pub fn simple_roots(kind: char, l: usize) -> Vec<Vec<i64>> {
    let e = |n: usize, i: usize| -> Vec<i64> {
        let mut v = vec![0; n];
        v[i] = 2;
        v
    };
    let sub = |a: &[i64], b: &[i64]| -> Vec<i64> { a.iter().zip(b).map(|(x, y)| x - y).collect() };
    let add = |a: &[i64], b: &[i64]| -> Vec<i64> { a.iter().zip(b).map(|(x, y)| x + y).collect() };
    match kind {
        'A' => (0..l).map(|i| sub(&e(l + 1, i), &e(l + 1, i + 1))).collect(),
        'B' => {
            let mut r: Vec<Vec<i64>> = (0..l - 1).map(|i| sub(&e(l, i), &e(l, i + 1))).collect();
            r.push(e(l, l - 1));
            r
        }
        'C' => {
            let mut r: Vec<Vec<i64>> = (0..l - 1).map(|i| sub(&e(l, i), &e(l, i + 1))).collect();
            r.push(e(l, l - 1).iter().map(|x| 2 * x).collect());
            r
        }
        'D' => {
            let mut r: Vec<Vec<i64>> = (0..l - 1).map(|i| sub(&e(l, i), &e(l, i + 1))).collect();
            r.push(add(&e(l, l - 2), &e(l, l - 1)));
            r
        }
        'G' => vec![
            sub(&e(3, 0), &e(3, 1)),
            add(&sub(&e(3, 1), &e(3, 0).iter().map(|x| 2 * x).collect::<Vec<_>>()), &e(3, 2)),
        ],
        'F' => vec![sub(&e(4, 1), &e(4, 2)), sub(&e(4, 2), &e(4, 3)), e(4, 3), vec![1, -1, -1, -1]],
        'E' => {
            let mut r = vec![vec![1, -1, -1, -1, -1, -1, -1, 1], add(&e(8, 0), &e(8, 1))];
            for i in 0..6 {
                r.push(sub(&e(8, i + 1), &e(8, i)));
            }
            r.truncate(l);
            r
        }
        _ => panic!("unknown type {kind}"),
    }
}

fn ip(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Root data from a Weyl-group orbit of the simple roots.
pub struct Oracle {
    pub rank: usize,
    pub gram: Vec<Vec<i64>>,
    /// Positive roots in simple-root coordinates.
    pub positive: Vec<Vec<i64>>,
}

impl Oracle {
    pub fn new(kind: char, l: usize) -> Self {
        let s = simple_roots(kind, l);
        let gram: Vec<Vec<i64>> = s.iter().map(|a| s.iter().map(|b| ip(a, b)).collect()).collect();
        let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut stack: Vec<Vec<i64>> = (0..l).map(|i| (0..l).map(|j| i64::from(i == j)).collect()).collect();
        while let Some(b) = stack.pop() {
            if !seen.insert(b.clone()) {
                continue;
            }
            for i in 0..l {
                let c = Self::coroot_pairing(&gram, &b, i);
                let mut r = b.clone();
                r[i] -= c;
                if !seen.contains(&r) {
                    stack.push(r);
                }
            }
        }
        let positive = seen.into_iter().filter(|b| b.iter().all(|&x| x >= 0)).collect();
        Oracle { rank: l, gram, positive }
    }

    /// `<beta, alpha_i^vee>`.
    pub fn coroot_pairing(gram: &[Vec<i64>], beta: &[i64], i: usize) -> i64 {
        let num: i64 = beta.iter().enumerate().map(|(k, b)| b * gram[k][i]).sum();
        2 * num / gram[i][i]
    }

    fn outside<'a>(&'a self, levi: &'a [usize]) -> impl Iterator<Item = &'a Vec<i64>> + 'a {
        self.positive.iter().filter(move |b| b.iter().enumerate().any(|(k, &x)| x != 0 && !levi.contains(&k)))
    }

    /// `b_alpha` for each colour node (0-based) outside `levi`.
    pub fn b(&self, levi: &[usize]) -> Vec<(usize, i64)> {
        (0..self.rank)
            .filter(|i| !levi.contains(i))
            .map(|i| (i, self.outside(levi).map(|b| Self::coroot_pairing(&self.gram, b, i)).sum()))
            .collect()
    }

    pub fn dim(&self, levi: &[usize]) -> i64 {
        self.outside(levi).count() as i64
    }

    pub fn omega(&self, levi: &[usize]) -> i64 {
        let b = self.b(levi);
        b.len() as i64 + self.dim(levi) - b.iter().map(|(_, x)| x).sum::<i64>()
    }
}

/// Connected diagrams of rank at most `max_rank`.
pub fn connected(max_rank: usize) -> Vec<(char, usize)> {
    let mut out = Vec::new();
    for l in 1..=max_rank {
        out.push(('A', l));
    }
    for l in 2..=max_rank {
        out.push(('B', l));
    }
    for l in 2..=max_rank {
        out.push(('C', l));
    }
    for l in 4..=max_rank {
        out.push(('D', l));
    }
    for l in 6..=max_rank.min(8) {
        out.push(('E', l));
    }
    if max_rank >= 4 {
        out.push(('F', 4));
    }
    if max_rank >= 2 {
        out.push(('G', 2));
    }
    out
}
