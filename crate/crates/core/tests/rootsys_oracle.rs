mod common;

use common::{connected, Oracle};
use horomori::rootsys::{build_root_system, DynkinDiagram, NodeSet, ParabolicChoice};

fn expected_positive(kind: char, l: usize) -> usize {
    match (kind, l) {
        ('A', l) => l * (l + 1) / 2,
        ('B', l) | ('C', l) => l * l,
        ('D', l) => l * (l - 1),
        ('E', 6) => 36,
        ('E', 7) => 63,
        ('E', 8) => 120,
        ('F', 4) => 24,
        ('G', 2) => 6,
        _ => unreachable!(),
    }
}

#[test]
fn positive_root_counts() {
    for (k, l) in connected(8) {
        let o = Oracle::new(k, l);
        assert_eq!(o.positive.len(), expected_positive(k, l), "{k}{l} oracle");
        let rs = build_root_system(&DynkinDiagram::parse(&format!("{k}{l}")).unwrap()).unwrap();
        assert_eq!(rs.positive_roots.len(), o.positive.len(), "{k}{l}");
        let mut a: Vec<Vec<i64>> = rs.positive_roots.clone();
        let mut b = o.positive.clone();
        a.sort();
        b.sort();
        assert_eq!(a, b, "{k}{l} roots");
    }
}

#[test]
fn cartan_matches_gram() {
    for (k, l) in connected(8) {
        let o = Oracle::new(k, l);
        let c = DynkinDiagram::parse(&format!("{k}{l}")).unwrap().cartan();
        for i in 0..l {
            for j in 0..l {
                let simple: Vec<i64> = (0..l).map(|t| i64::from(t == j)).collect();
                assert_eq!(c[i][j], Oracle::coroot_pairing(&o.gram, &simple, i), "{k}{l} ({i},{j})");
            }
        }
    }
}

#[test]
fn omega_and_b_agree_on_every_subset_up_to_rank_6() {
    for (k, l) in connected(6) {
        let o = Oracle::new(k, l);
        let rs = build_root_system(&DynkinDiagram::parse(&format!("{k}{l}")).unwrap()).unwrap();
        for mask in 0..(1u64 << l) - 1 {
            let levi: Vec<usize> = (0..l).filter(|i| mask >> i & 1 == 1).collect();
            let p = ParabolicChoice::new(NodeSet(mask));
            assert_eq!(rs.omega(p), o.omega(&levi), "{k}{l} {levi:?}");
            let b = rs.b_coefficients(p).unwrap();
            for (i, v) in o.b(&levi) {
                assert_eq!(b[&i], v, "{k}{l} {levi:?} node {i}");
            }
            assert_eq!(rs.flag_dimension(p) as i64, o.dim(&levi));
        }
    }
}

#[test]
fn c_series_short_end_node_is_projective_space() {
    for l in 2..=8 {
        let o = Oracle::new('C', l);
        let all: Vec<usize> = (0..l).collect();
        let first: Vec<usize> = all.iter().copied().filter(|&i| i != 0).collect();
        let last: Vec<usize> = all.iter().copied().filter(|&i| i != l - 1).collect();
        assert_eq!(o.omega(&first), 0);
        assert_eq!(o.dim(&first), 2 * l as i64 - 1);
        assert!(o.omega(&last) > 0);
    }
}
