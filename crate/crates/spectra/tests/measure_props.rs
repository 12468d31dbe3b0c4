mod common;

use num_traits::{One, Zero};
use proptest::prelude::*;

use common::positive_measure;
use spectra::arith::rat::{int, rat};
use spectra::arith::Rat;
use spectra::measure::{generate_lacunary, is_completely_lacunary, lacunarity_params, small_space_constant, DiscreteMeasure, LacunarityParams};

fn nudge() -> Rat {
    rat(1, 1_000_000)
}

/// Direct double sum, one `n` at a time.
fn small_space_brute(nu: &DiscreteMeasure) -> Rat {
    let a = nu.atoms();
    let mut best = Rat::zero();
    for n in 0..a.len() {
        let mut v = Rat::zero();
        for (k, b) in a.iter().enumerate() {
            if k < n {
                v += &b.m;
            } else if k > n {
                v += &a[n].t * &a[n].t * &b.m / (&b.t * &b.t);
            }
        }
        v /= &a[n].m;
        if v > best {
            best = v;
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn extremal_parameters_are_sharp(mu in positive_measure(2, 6)) {
        let ex = lacunarity_params(&mu).unwrap();
        let inside = LacunarityParams::new(&ex.lambda - nudge(), &ex.kappa - nudge(), &ex.theta + nudge());
        prop_assert!(is_completely_lacunary(&mu, &inside).unwrap());
        let wrong = [
            LacunarityParams::new(ex.lambda.clone(), inside.kappa.clone(), inside.theta.clone()),
            LacunarityParams::new(inside.lambda.clone(), ex.kappa.clone(), inside.theta.clone()),
            LacunarityParams::new(inside.lambda.clone(), inside.kappa.clone(), ex.theta.clone()),
            LacunarityParams::new(&ex.lambda + nudge(), inside.kappa.clone(), inside.theta.clone()),
        ];
        for p in wrong {
            prop_assert!(!is_completely_lacunary(&mu, &p).unwrap());
        }
    }

    #[test]
    fn small_space_constant_matches_brute_force_and_scales(nu in positive_measure(1, 6), c in 1i64..1000, d in 1i64..50) {
        let base = small_space_constant(&nu).unwrap();
        prop_assert_eq!(&base, &small_space_brute(&nu));
        let scaled = DiscreteMeasure::from_pairs(
            &nu.atoms().iter().map(|a| (a.t.clone(), &a.m * rat(c, d))).collect::<Vec<_>>(),
        ).unwrap();
        prop_assert_eq!(&small_space_constant(&scaled).unwrap(), &base);
        if nu.len() >= 2 {
            // the top atom sees every lower mass
            let a = nu.atoms();
            let n = a.len() - 1;
            let lower: Rat = a[..n].iter().map(|x| x.m.clone()).sum();
            prop_assert!(base >= lower / &a[n].m);
        } else {
            prop_assert!(base.is_zero());
        }
    }

    #[test]
    fn normalize_is_idempotent(mu in positive_measure(1, 6), s in 1i64..100) {
        let raw = DiscreteMeasure::from_pairs(
            &mu.atoms().iter().map(|a| (a.t.clone(), &a.m * int(s))).collect::<Vec<_>>(),
        ).unwrap();
        let once = raw.normalize();
        prop_assert!(once.total_mass().is_one());
        prop_assert_eq!(once.normalize(), once);
    }

    #[test]
    fn generator_is_deterministic(n in 1usize..7, seed in 0u64..1000) {
        let a = generate_lacunary(n, &int(10_000), &int(600_000), &int(1), seed).unwrap();
        let b = generate_lacunary(n, &int(10_000), &int(600_000), &int(1), seed).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.is_normalized());
        prop_assert_eq!(a.len(), n);
    }
}

#[test]
fn unseeded_generator_is_exactly_geometric() {
    let mu = generate_lacunary(3, &int(100), &int(7), &int(2), 0).unwrap();
    let t = mu.positions();
    let m = mu.weights();
    assert_eq!(t, vec![int(2), int(200), int(20_000)]);
    assert_eq!(&m[1] / &m[0], int(7));
    assert_eq!(&m[2] / &m[1], int(7));
}

#[test]
fn measures_reject_bad_input() {
    assert!(DiscreteMeasure::from_pairs(&[]).is_err());
    assert!(DiscreteMeasure::from_pairs(&[(int(1), int(1)), (int(1), int(1))]).is_err());
    assert!(DiscreteMeasure::from_pairs(&[(int(1), int(0))]).is_err());
    let mu = DiscreteMeasure::from_pairs(&[(int(-1), int(1)), (int(2), int(1))]).unwrap();
    assert!(lacunarity_params(&mu).is_err());
}

#[test]
fn json_roundtrip_is_exact() {
    let mu = DiscreteMeasure::from_pairs(&[(rat(1, 3), rat(2, 7)), (rat(5, 2), rat(5, 7))]).unwrap();
    let text = serde_json::to_string(&mu).unwrap();
    assert!(text.contains("\"1/3\""));
    let back: DiscreteMeasure = serde_json::from_str(&text).unwrap();
    assert_eq!(back, mu);
}
