use horomori::arith::q;
use horomori::corpus::{coloured_variants, pipeline_instances, toric_blowups, toric_threefolds};
use horomori::divisors::{anticanonical, BDivisor, Prime};
use horomori::fan::ColouredFan;
use horomori::ledger::first_failure;
use horomori::mmp::{find_approximation_curve, run_reduction, MmpStatus, DEFAULT_CAP};
use horomori::mori::{is_nef, mori_generators, ContractionKind};

fn small_corpus() -> Vec<(String, ColouredFan)> {
    let mut fans = toric_blowups();
    let threefolds = toric_threefolds(3, 8);
    fans.extend(coloured_variants(3, &threefolds));
    fans.extend(threefolds.into_iter().enumerate().map(|(i, f)| (format!("threefold {i}"), f)));
    fans
}

#[test]
fn anticanonical_run_on_the_plane_stops_at_once() {
    let fan = horomori::corpus::projective_space(2);
    let k = anticanonical(&fan);
    let trace = run_reduction(&fan, &k, &[], DEFAULT_CAP).unwrap();
    assert_eq!(trace.status, MmpStatus::OrbitInExceptional);
    assert_eq!(trace.steps.len(), 1);
    assert_eq!(trace.steps[0].threshold, q(1));
    assert_eq!(trace.steps[0].kind, ContractionKind::MoriFibreSpace);
}

#[test]
fn point_orbit_on_the_plane() {
    let fan = horomori::corpus::projective_space(2);
    let h = BDivisor::prime(&fan, &Prime::Ray(fan.rays()[0].clone())).unwrap();
    let point = fan.cones[0].gens.clone();
    let a = find_approximation_curve(&fan, &h, &point, DEFAULT_CAP).unwrap();
    assert_eq!(a.trace.steps[0].threshold, q(1) / q(3));
    assert_eq!(a.minus_k, q(3));
    assert!(first_failure(&a.checks).is_none());
}

#[test]
fn traces_keep_nefness_and_kill_the_contracted_ray() {
    let mut kinds = std::collections::BTreeSet::new();
    for inst in pipeline_instances(4, &small_corpus()) {
        let a = find_approximation_curve(&inst.fan, &inst.divisor, &inst.orbit, DEFAULT_CAP)
            .unwrap_or_else(|e| panic!("{}: {e}", inst.name));
        assert_eq!(a.trace.status, MmpStatus::OrbitInExceptional, "{}", inst.name);
        assert!(first_failure(&a.checks).is_none(), "{}", inst.name);
        for s in &a.trace.steps {
            assert!(is_nef(&s.fan, &s.scaled).unwrap(), "{}", inst.name);
            let mori = mori_generators(&s.fan).unwrap();
            assert!(mori.generators[mori.rays[s.ray].tag].dot(&s.fan, &s.scaled) == q(0), "{}", inst.name);
        }
        kinds.insert(a.trace.steps.last().unwrap().kind);
        assert!(a.minus_k <= q(a.dim_x as i64 + 1), "{}", inst.name);
    }
    assert!(kinds.contains(&ContractionKind::MoriFibreSpace));
    assert!(kinds.len() > 1, "{kinds:?}");
}
