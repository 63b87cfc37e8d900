use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use horomori::arith::{pair, q};
use horomori::corpus::{coloured_variants, nef_divisor, random_divisor, toric_blowups, toric_threefolds};
use horomori::divisors::{anticanonical, cartier_data, evaluate_pl, BDivisor, Prime};
use horomori::fan::ColouredFan;
use horomori::mmp::nef_threshold;
use horomori::mori::{is_nef, mori_generators, MoriCone};

type Q = BigRational;

fn corpus() -> &'static [(ColouredFan, MoriCone)] {
    static CORPUS: OnceLock<Vec<(ColouredFan, MoriCone)>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let mut fans: Vec<ColouredFan> = toric_blowups().into_iter().map(|(_, f)| f).collect();
        let threefolds = toric_threefolds(7, 6);
        fans.extend(coloured_variants(7, &threefolds).into_iter().map(|(_, f)| f).take(10));
        fans.extend(threefolds);
        fans.into_iter().map(|f| (f.clone(), mori_generators(&f).unwrap())).collect()
    })
}

fn pick(i: usize) -> &'static (ColouredFan, MoriCone) {
    let c = corpus();
    &c[i % c.len()]
}

/// Nef test by convexity of the piecewise linear function and the colour conditions.
fn nef_oracle(fan: &ColouredFan, delta: &BDivisor) -> bool {
    let data = cartier_data(fan, delta).unwrap();
    let rays = fan.rays();
    data.m.iter().all(|m| {
        rays.iter().all(|v| pair(m, v) <= evaluate_pl(fan, &data, v).unwrap())
            && fan.lattice.colours.iter().all(|c| pair(m, &c.u) <= delta.coeff(&Prime::Colour(c.name.clone())))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pairing_is_linear(i in 0usize..64, seed in any::<u64>(), s in -3i64..4, t in -3i64..4) {
        let (fan, mori) = pick(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_divisor(fan, &mut rng, 4);
        let b = random_divisor(fan, &mut rng, 4);
        let c = BDivisor::zero(fan).add_scaled(&a, &q(s)).add_scaled(&b, &q(t));
        for g in &mori.generators {
            prop_assert_eq!(g.dot(fan, &c), g.dot(fan, &a) * q(s) + g.dot(fan, &b) * q(t));
        }
    }

    #[test]
    fn nef_matches_convexity(i in 0usize..64, seed in any::<u64>()) {
        let (fan, _) = pick(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_divisor(fan, &mut rng, 3);
        prop_assert_eq!(is_nef(fan, &d).unwrap(), nef_oracle(fan, &d));
    }

    #[test]
    fn threshold_lands_on_the_boundary(i in 0usize..64, seed in any::<u64>()) {
        let (fan, mori) = pick(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = nef_divisor(fan, mori, &mut rng);
        prop_assert!(nef_oracle(fan, &d));
        let (a, ray) = nef_threshold(fan, mori, &d).unwrap();
        prop_assert!(!a.is_negative());
        let k = anticanonical(fan);
        let scaled = d.add_scaled(&k, &-a.clone());
        prop_assert!(nef_oracle(fan, &scaled));
        prop_assert!(mori.generators[mori.rays[ray].tag].dot(fan, &scaled).is_zero());
        let past = d.add_scaled(&k, &-(a + Q::new(1.into(), 64.into())));
        prop_assert!(!nef_oracle(fan, &past));
    }
}
