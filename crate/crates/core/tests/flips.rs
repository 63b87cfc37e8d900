use std::collections::BTreeSet;

use horomori::arith::IVec;
use horomori::corpus::{coloured_variants, flipping_instances, toric_blowups, toric_threefolds};
use horomori::divisors::{picard_rank, prime_divisors};
use horomori::fan::{validate_fan, ColouredFan};
use horomori::mori::{flip, mori_generators, ContractionKind};

fn cone_set(fan: &ColouredFan) -> BTreeSet<Vec<IVec>> {
    fan.underlying().into_iter().collect()
}

fn toric_corpus() -> Vec<(String, ColouredFan)> {
    let mut fans = toric_blowups();
    fans.extend(toric_threefolds(1, 30).into_iter().enumerate().map(|(i, f)| (format!("fan {i}"), f)));
    fans
}

#[test]
fn toric_flips_are_small_and_invertible() {
    let instances = flipping_instances(&toric_corpus());
    assert!(!instances.is_empty());
    for inst in instances.iter().take(20) {
        let out = flip(&inst.fan, &inst.mori, inst.ray).unwrap();
        let d = validate_fan(&out.fan);
        assert!(d.complete && d.q_factorial, "{}: {}", inst.name, d.summary());
        assert_eq!(prime_divisors(&out.fan), prime_divisors(&inst.fan), "{}", inst.name);
        assert_eq!(picard_rank(&out.fan).unwrap(), picard_rank(&inst.fan).unwrap());
        assert_ne!(cone_set(&out.fan), cone_set(&inst.fan));

        let dir: Vec<_> = inst.mori.rays[inst.ray].direction.iter().map(|x| -x).collect();
        let back = mori_generators(&out.fan).unwrap();
        let opposite = back
            .rays
            .iter()
            .position(|r| r.direction == dir)
            .unwrap_or_else(|| panic!("{}: no opposite ray after the flip", inst.name));
        assert!(!back.rays[opposite].k_negative, "{}", inst.name);
        let again = flip(&out.fan, &back, opposite).unwrap();
        assert_eq!(cone_set(&again.fan), cone_set(&inst.fan), "{}", inst.name);
    }
}

#[test]
fn coloured_flips_keep_colours_on_rays() {
    let fans: Vec<ColouredFan> = toric_threefolds(1, 20);
    let coloured = coloured_variants(3, &fans);
    let instances = flipping_instances(&coloured);
    assert!(!instances.is_empty());
    for inst in instances.iter().take(20) {
        let out = flip(&inst.fan, &inst.mori, inst.ray).unwrap();
        assert_eq!(out.contraction.kind, ContractionKind::Flipping);
        let rays = out.fan.rays();
        for a in out.fan.coloured_set() {
            let u = &out.fan.lattice.colour(&a).unwrap().u;
            assert!(
                rays.iter().any(|v| out.fan.ray_colours(v).contains(&a) && parallel(u, v)),
                "{}: colour {a}",
                inst.name
            );
        }
        assert_eq!(picard_rank(&out.fan).unwrap(), picard_rank(&inst.fan).unwrap(), "{}", inst.name);
    }
}

fn parallel(u: &[i64], v: &[i64]) -> bool {
    let k = u.iter().zip(v).find(|(_, y)| **y != 0).map(|(x, y)| x / y).unwrap_or(0);
    k > 0 && u.iter().zip(v).all(|(x, y)| *x == k * y)
}
