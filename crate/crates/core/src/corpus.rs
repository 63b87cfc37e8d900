//! Seeded test corpora: terminal toric threefolds, coloured variants and
//! Picard-rank-one fans.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{gcd_slice, q, IVec, Q};
use crate::divisors::{anticanonical, prime_divisors, BDivisor};
use crate::fan::{simplicial_coords, star_subdivision, Colour, ColourRule, ColouredFan, ColouredLattice};
use crate::mori::{mori_generators, ContractionKind, MoriCone};
use crate::rootsys::{build_root_system, DynkinDiagram};

#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub fan: ColouredFan,
    pub divisor: BDivisor,
    pub orbit: Vec<IVec>,
}

#[derive(Debug, Clone)]
pub struct FlipInstance {
    pub name: String,
    pub fan: ColouredFan,
    pub mori: MoriCone,
    pub ray: usize,
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn cross(a: &[i64], b: &[i64]) -> IVec {
    vec![a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn sub(a: &[i64], b: &[i64]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Facets of the convex hull of `pts`, if the hull is simplicial and
/// contains the origin in its interior.
pub fn simplicial_hull(pts: &[IVec]) -> Option<Vec<[usize; 3]>> {
    let n = pts.len();
    let mut facets = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let nrm = cross(&sub(&pts[j], &pts[i]), &sub(&pts[k], &pts[i]));
                if nrm.iter().all(|&x| x == 0) {
                    continue;
                }
                let side: Vec<i64> = pts.iter().map(|p| dot(&nrm, &sub(p, &pts[i])).signum()).collect();
                let pos = side.iter().any(|&s| s > 0);
                let neg = side.iter().any(|&s| s < 0);
                if pos && neg {
                    continue;
                }
                if side.iter().filter(|&&s| s == 0).count() > 3 || dot(&nrm, &pts[i]) == 0 {
                    return None;
                }
                facets.push([i, j, k]);
            }
        }
    }
    (!facets.is_empty()).then_some(facets)
}

/// Only the origin and the generators are lattice points of
/// `conv(0, v_1, .., v_k)` for every cone.
pub fn is_terminal(fan: &ColouredFan) -> bool {
    let n = fan.rank();
    fan.cones.iter().all(|c| {
        if c.gens.len() != n {
            return true;
        }
        let lo: Vec<i64> = (0..n).map(|i| c.gens.iter().map(|g| g[i]).min().unwrap().min(0)).collect();
        let hi: Vec<i64> = (0..n).map(|i| c.gens.iter().map(|g| g[i]).max().unwrap().max(0)).collect();
        let mut x = lo.clone();
        loop {
            if x.iter().any(|&t| t != 0) && !c.gens.contains(&x) {
                if let Some(co) = simplicial_coords(&c.gens, &x) {
                    let s: Q = co.iter().sum();
                    if co.iter().all(|t| !t.is_negative()) && s <= q(1) {
                        return false;
                    }
                }
            }
            let mut i = 0;
            while i < n {
                if x[i] < hi[i] {
                    x[i] += 1;
                    break;
                }
                x[i] = lo[i];
                i += 1;
            }
            if i == n {
                return true;
            }
        }
    })
}

fn primitive_point(r: &mut ChaCha8Rng, bound: i64) -> IVec {
    loop {
        let v: IVec = (0..3).map(|_| r.gen_range(-bound..=bound)).collect();
        if gcd_slice(&v) == 1 {
            return v;
        }
    }
}

/// Face fans of random simplicial lattice polytopes around the octahedron,
/// kept only when terminal.
pub fn toric_threefolds(seed: u64, count: usize) -> Vec<ColouredFan> {
    let mut r = rng(seed);
    let mut out: Vec<ColouredFan> = Vec::new();
    let mut tries = 0;
    while out.len() < count && tries < 50 * count {
        tries += 1;
        let mut pts: Vec<IVec> =
            vec![vec![1, 0, 0], vec![-1, 0, 0], vec![0, 1, 0], vec![0, -1, 0], vec![0, 0, 1], vec![0, 0, -1]];
        for _ in 0..r.gen_range(1..=4) {
            let p = primitive_point(&mut r, 2);
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
        let Some(facets) = simplicial_hull(&pts) else { continue };
        let gens: Vec<Vec<IVec>> = facets.iter().map(|f| f.iter().map(|&i| pts[i].clone()).collect()).collect();
        let Ok(fan) = ColouredFan::with_global_colours(ColouredLattice::toric(3), gens, &BTreeSet::new()) else {
            continue;
        };
        if is_terminal(&fan) && !out.contains(&fan) {
            out.push(fan);
        }
    }
    out
}

pub fn projective_space(n: usize) -> ColouredFan {
    let mut rays: Vec<IVec> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    rays.push(vec![-1; n]);
    let gens = (0..=n)
        .map(|skip| rays.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, v)| v.clone()).collect())
        .collect();
    ColouredFan::with_global_colours(ColouredLattice::toric(n), gens, &BTreeSet::new()).expect("projective space")
}

/// Blow-ups of projective space and other small smooth fans.
pub fn toric_blowups() -> Vec<(String, ColouredFan)> {
    let mut out = Vec::new();
    let p2 = projective_space(2);
    let p3 = projective_space(3);
    out.push(("P2".into(), p2.clone()));
    out.push(("P3".into(), p3.clone()));
    let bl = star_subdivision(&p2, &[1, 1], &ColourRule::Keep).unwrap();
    out.push(("Bl_pt P2".into(), bl.clone()));
    out.push(("Bl_2pt P2".into(), star_subdivision(&bl, &[-1, 0], &ColourRule::Keep).unwrap()));
    for a in 0..=3 {
        let gens = vec![
            vec![vec![1, 0], vec![0, 1]],
            vec![vec![0, 1], vec![-1, a]],
            vec![vec![-1, a], vec![0, -1]],
            vec![vec![0, -1], vec![1, 0]],
        ];
        out.push((
            format!("F{a}"),
            ColouredFan::with_global_colours(ColouredLattice::toric(2), gens, &BTreeSet::new()).unwrap(),
        ));
    }
    let pt = star_subdivision(&p3, &[1, 1, 1], &ColourRule::Keep).unwrap();
    out.push(("Bl_pt P3".into(), pt.clone()));
    let line = star_subdivision(&p3, &[1, 1, 0], &ColourRule::Keep).unwrap();
    out.push(("Bl_line P3".into(), line.clone()));
    out.push(("Bl_line Bl_pt P3".into(), star_subdivision(&pt, &[1, 0, 1], &ColourRule::Keep).unwrap()));
    out.push(("Bl_2pt P3".into(), star_subdivision(&pt, &[-1, -1, -1], &ColourRule::Keep).unwrap()));
    out
}

fn lattice_with(rank: usize, diagram: &str, colours: Vec<Colour>) -> ColouredLattice {
    let roots = build_root_system(&DynkinDiagram::parse(diagram).expect("diagram")).expect("root system");
    ColouredLattice::new(rank, colours, roots).expect("lattice")
}

fn regrade(fan: &ColouredFan, lattice: ColouredLattice, f: &BTreeSet<String>) -> Option<ColouredFan> {
    ColouredFan::with_global_colours(lattice, fan.underlying(), f).ok()
}

/// Coloured variants of toric fans: one colour left out of the fan with its
/// point inside a cone, or one colour sitting on a ray.
pub fn coloured_variants(seed: u64, fans: &[ColouredFan]) -> Vec<(String, ColouredFan)> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    let diagrams = [("A1", 1), ("A2", 2), ("B2", 2), ("C2", 1), ("G2", 2)];
    for (k, fan) in fans.iter().enumerate() {
        let (d, node) = diagrams[r.gen_range(0..diagrams.len())];
        let rays = fan.rays();
        let cone = &fan.cones[r.gen_range(0..fan.cones.len())].gens;
        let inner: IVec = (0..fan.rank()).map(|i| cone.iter().map(|g| g[i]).sum()).collect();
        let u = if r.gen_bool(0.5) { inner } else { rays[r.gen_range(0..rays.len())].iter().map(|x| -x).collect() };
        let lat = lattice_with(fan.rank(), d, vec![Colour { name: "a".into(), node, u }]);
        if let Some(f) = regrade(fan, lat, &BTreeSet::new()) {
            out.push((format!("free colour {d} on fan {k}"), f));
        }
        let v = rays[r.gen_range(0..rays.len())].clone();
        let c = r.gen_range(1..=2);
        let lat =
            lattice_with(fan.rank(), d, vec![Colour { name: "a".into(), node, u: v.iter().map(|x| c * x).collect() }]);
        if let Some(f) = regrade(fan, lat, &["a".to_string()].into()) {
            out.push((format!("ray colour {d} on fan {k}"), f));
        }
    }
    out
}

/// Flipping extremal rays found in the given fans.
pub fn flipping_instances(fans: &[(String, ColouredFan)]) -> Vec<FlipInstance> {
    let mut out = Vec::new();
    for (name, fan) in fans {
        let Ok(mori) = mori_generators(fan) else { continue };
        for ray in mori.k_negative().into_iter().chain(0..mori.rays.len()) {
            if out.iter().any(|f: &FlipInstance| f.name == *name && f.ray == ray) {
                continue;
            }
            if let Ok(c) = crate::mori::contract(fan, &mori, ray) {
                if c.kind == ContractionKind::Flipping {
                    out.push(FlipInstance { name: name.clone(), fan: fan.clone(), mori: mori.clone(), ray });
                }
            }
        }
    }
    out
}

/// Fans with Picard rank one: flag varieties with one colour and simplices
/// with every colour on a ray.
pub fn picard_one_fans(seed: u64) -> Vec<(String, ColouredFan)> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    let diagrams = ["A1", "A2", "A3", "B2", "B3", "C3", "D4", "G2", "F4", "E6", "A1xA1", "A2xB2"];
    for d in diagrams {
        let n = DynkinDiagram::parse(d).unwrap().rank();
        for node in 1..=n {
            let lat = lattice_with(0, d, vec![Colour { name: "a".into(), node, u: vec![] }]);
            let fan = ColouredFan::with_global_colours(lat, vec![vec![]], &BTreeSet::new()).unwrap();
            out.push((format!("flag {d} node {node}"), fan));
        }
    }
    out.push(("P1".into(), projective_space(1)));
    out.push(("P2".into(), projective_space(2)));
    out.push(("P3".into(), projective_space(3)));
    let wps = |w: &[i64]| -> Vec<IVec> {
        // rays of P(w) for weights with w_0 = 1
        let n = w.len() - 1;
        let mut rays: Vec<IVec> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        rays.insert(0, (0..n).map(|j| -w[j + 1]).collect());
        rays
    };
    for w in [vec![1, 1, 2], vec![1, 2, 3], vec![1, 1, 1, 2], vec![1, 1, 2, 3]] {
        let rays = wps(&w);
        out.push((format!("P{w:?}"), simplex_fan(ColouredLattice::toric(rays[0].len()), &rays, &BTreeSet::new())));
    }
    let small = ["A1", "A2", "B2", "C2", "G2", "A1xA1", "A3", "B3", "C3"];
    let mut tries = 0;
    while out.len() < 80 && tries < 2000 {
        tries += 1;
        let n = r.gen_range(1..=3usize);
        let rays = random_simplex(&mut r, n);
        let d = small[r.gen_range(0..small.len())];
        let nodes = DynkinDiagram::parse(d).unwrap().rank();
        let k = r.gen_range(1..=nodes.min(n + 1));
        let mut ns: Vec<usize> = (1..=nodes).collect();
        ns.shuffle(&mut r);
        let mut idx: Vec<usize> = (0..=n).collect();
        idx.shuffle(&mut r);
        let colours: Vec<Colour> = (0..k)
            .map(|i| {
                let c = r.gen_range(1..=2);
                Colour { name: format!("c{}", ns[i]), node: ns[i], u: rays[idx[i]].iter().map(|x| c * x).collect() }
            })
            .collect();
        let f: BTreeSet<String> = colours.iter().map(|c| c.name.clone()).collect();
        let lat = lattice_with(n, d, colours);
        out.push((format!("simplex rank {n} {d} with {k} colours"), simplex_fan(lat, &rays, &f)));
    }
    out
}

fn simplex_fan(lattice: ColouredLattice, rays: &[IVec], f: &BTreeSet<String>) -> ColouredFan {
    let gens = (0..rays.len())
        .map(|skip| rays.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, v)| v.clone()).collect())
        .collect();
    ColouredFan::with_global_colours(lattice, gens, f).expect("simplex fan")
}

/// `n + 1` primitive vectors in `Z^n` with a strictly positive relation.
fn random_simplex(r: &mut ChaCha8Rng, n: usize) -> Vec<IVec> {
    let mut rays: Vec<IVec> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    if n >= 2 && r.gen_bool(0.5) {
        rays[1][0] = r.gen_range(-1..=1);
    }
    let w: Vec<i64> = (0..n).map(|_| r.gen_range(1..=3)).collect();
    let last: IVec = (0..n).map(|j| -(0..n).map(|i| w[i] * rays[i][j]).sum::<i64>()).collect();
    let g = gcd_slice(&last);
    rays.push(last.iter().map(|x| x / g).collect());
    rays
}

/// Random integer divisor with coefficients in `-bound..=bound`.
pub fn random_divisor(fan: &ColouredFan, r: &mut impl Rng, bound: i64) -> BDivisor {
    let coeffs: Vec<Q> = prime_divisors(fan).iter().map(|_| q(r.gen_range(-bound..=bound))).collect();
    BDivisor::from_vec(fan, &coeffs)
}

/// A nef divisor: a random divisor shifted by a multiple of `-K` when `-K`
/// is ample, otherwise zero.
pub fn nef_divisor(fan: &ColouredFan, mori: &MoriCone, r: &mut impl Rng) -> BDivisor {
    let mk = anticanonical(fan);
    let mkv = mk.to_vec(fan);
    let pos = |v: &[Q]| crate::arith::dot_q(&mkv, v);
    if !mori.generators.iter().all(|g| pos(&g.pairing).is_positive()) {
        return BDivisor::zero(fan);
    }
    let d = random_divisor(fan, r, 3);
    let dv = d.to_vec(fan);
    let mut t = Q::zero();
    for g in &mori.generators {
        let need = -crate::arith::dot_q(&dv, &g.pairing) / pos(&g.pairing);
        if need > t {
            t = need;
        }
    }
    let t = t.ceil() + Q::from_integer(r.gen_range(0..=1).into());
    d.add_scaled(&mk, &t)
}

/// Every fan of the corpus with a short name.
pub fn corpus_fans(seed: u64) -> Vec<(String, ColouredFan)> {
    let three = toric_threefolds(seed, 40);
    let mut out: Vec<(String, ColouredFan)> = toric_blowups();
    out.extend(three.iter().enumerate().map(|(i, f)| (format!("threefold {i}"), f.clone())));
    let small: Vec<ColouredFan> = out.iter().map(|(_, f)| f.clone()).collect();
    out.extend(coloured_variants(seed ^ 0x5eed, &small));
    out.extend(picard_one_fans(seed ^ 0xf1a9));
    out
}

/// Pipeline instances: each fan with a nef divisor and a few orbits.
pub fn pipeline_instances(seed: u64, fans: &[(String, ColouredFan)]) -> Vec<Instance> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    for (name, fan) in fans {
        let Ok(mori) = mori_generators(fan) else { continue };
        let divisor = nef_divisor(fan, &mori, &mut r);
        let mut orbits: Vec<Vec<IVec>> = vec![vec![]];
        for _ in 0..2 {
            let c = &fan.cones[r.gen_range(0..fan.cones.len())].gens;
            let k = r.gen_range(0..=c.len());
            let mut o: Vec<IVec> = c.clone();
            o.shuffle(&mut r);
            o.truncate(k);
            o.sort();
            if !orbits.contains(&o) {
                orbits.push(o);
            }
        }
        for orbit in orbits {
            out.push(Instance { name: name.clone(), fan: fan.clone(), divisor: divisor.clone(), orbit });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisors::picard_rank;
    use crate::fan::validate_fan;

    #[test]
    fn octahedron_hull() {
        let pts: Vec<IVec> =
            vec![vec![1, 0, 0], vec![-1, 0, 0], vec![0, 1, 0], vec![0, -1, 0], vec![0, 0, 1], vec![0, 0, -1]];
        assert_eq!(simplicial_hull(&pts).unwrap().len(), 8);
    }

    #[test]
    fn terminality() {
        assert!(is_terminal(&projective_space(3)));
        let gens = vec![vec![vec![1, 0], vec![1, 2]], vec![vec![1, 2], vec![-1, -1]], vec![vec![-1, -1], vec![1, 0]]];
        let f = ColouredFan::with_global_colours(ColouredLattice::toric(2), gens, &BTreeSet::new()).unwrap();
        assert!(!is_terminal(&f));
    }

    #[test]
    fn corpus_is_valid() {
        for (name, fan) in corpus_fans(7) {
            assert!(validate_fan(&fan).valid, "{name}");
        }
        for (name, fan) in picard_one_fans(3) {
            assert_eq!(picard_rank(&fan).unwrap(), 1, "{name}");
        }
    }
}
