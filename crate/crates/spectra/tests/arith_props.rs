mod common;

use num_traits::{Signed, Zero};
use proptest::prelude::*;

use common::{is_reduced, small_rat};
use spectra::arith::rat::{format_rat, parse_rat, rat};
use spectra::arith::{isolate_real_roots, refine_root, Dyadic, Interval, Rat, RatPoly};

fn interval() -> impl Strategy<Value = (Rat, Rat)> {
    (small_rat(), 0i64..=40, 1i64..=9).prop_map(|(a, w, d)| {
        let b = &a + rat(w, d);
        (a, b)
    })
}

fn samples(lo: &Rat, hi: &Rat) -> Vec<Rat> {
    vec![lo.clone(), hi.clone(), (lo + hi) / Rat::from_integer(2.into()), (lo * rat(3, 1) + hi) / Rat::from_integer(4.into())]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn outward_rounding_contains_exact_results((a, b) in interval(), (c, d) in interval(), prec in 8u32..80) {
        let x = Interval::from_rats(&a, &b, prec);
        let y = Interval::from_rats(&c, &d, prec);
        let (sum, diff, prod, sq) = (x.add(&y), x.sub(&y), x.mul(&y), x.sqr());
        let quot = y.div(&x).ok();
        let cube = x.powi(3);
        for u in samples(&a, &b) {
            prop_assert!(sq.contains_rat(&(&u * &u)));
            prop_assert!(cube.contains_rat(&(&u * &u * &u)));
            for v in samples(&c, &d) {
                prop_assert!(sum.contains_rat(&(&u + &v)));
                prop_assert!(diff.contains_rat(&(&u - &v)));
                prop_assert!(prod.contains_rat(&(&u * &v)));
                if let Some(q) = &quot {
                    prop_assert!(!u.is_zero());
                    prop_assert!(q.contains_rat(&(&v / &u)));
                }
            }
        }
    }

    #[test]
    fn rounding_brackets_the_rational(r in small_rat(), s in 1i64..1000, prec in 4u32..100) {
        let v = r / Rat::from_integer(s.into());
        let (lo, hi) = (Dyadic::floor_rat(&v, prec), Dyadic::ceil_rat(&v, prec));
        prop_assert!(lo.to_rat() <= v && v <= hi.to_rat());
    }

    #[test]
    fn root_enclosures_change_sign(roots in prop::collection::btree_set(-40i64..40, 1..6), den in 1i64..6) {
        let rs: Vec<Rat> = roots.iter().map(|&r| rat(r, den)).collect();
        // the factor z^2 + 1 contributes two nonreal roots
        let p = RatPoly::from_roots_reversed(&rs).mul(&RatPoly::new(vec![rat(1, 1), rat(0, 1), rat(1, 1)]));
        let enc = isolate_real_roots(&p).unwrap();
        prop_assert_eq!(enc.len(), rs.len());
        for (iv, r) in enc.iter().zip(&rs) {
            prop_assert!(iv.contains_rat(r));
            if iv.is_point() {
                prop_assert!(p.eval(&iv.lo_rat()).is_zero());
            } else {
                let (a, b) = (p.eval(&iv.lo_rat()), p.eval(&iv.hi_rat()));
                prop_assert!(a.signum() * b.signum() == -Rat::from_integer(1.into()));
            }
        }
    }

    #[test]
    fn refinement_is_monotone(c in 2i64..50, bits in 10u32..120) {
        // x^2 - c has irrational roots unless c is square
        let p = RatPoly::new(vec![rat(-c, 1), rat(0, 1), rat(1, 1)]);
        for iv in isolate_real_roots(&p).unwrap() {
            let fine = refine_root(&p, &iv, bits).unwrap();
            prop_assert!(iv.contains(&fine));
            if !fine.is_point() {
                prop_assert!(p.eval(&fine.lo_rat()).signum() != p.eval(&fine.hi_rat()).signum());
            }
        }
    }

    #[test]
    fn rational_arithmetic_stays_reduced(a in small_rat(), b in small_rat(), c in 1i64..50) {
        let b = b + rat(1, c);
        for v in [&a + &b, &a - &b, &a * &b] {
            prop_assert!(is_reduced(&v));
        }
        if !b.is_zero() {
            prop_assert!(is_reduced(&(&a / &b)));
        }
    }

    #[test]
    fn rational_strings_roundtrip(a in small_rat(), k in 0u32..30) {
        let v = a * Rat::from_integer(num_bigint::BigInt::from(3).pow(k));
        prop_assert_eq!(parse_rat(&format_rat(&v)).unwrap(), v);
    }
}

#[test]
fn scientific_notation_is_exact() {
    assert_eq!(parse_rat("6e-3").unwrap(), rat(3, 500));
    assert_eq!(parse_rat("1E+3").unwrap(), rat(1000, 1));
    assert_eq!(parse_rat("-2.5").unwrap(), rat(-5, 2));
    assert!(parse_rat("1/0").is_err());
    assert!(parse_rat("abc").is_err());
}

#[test]
fn division_by_a_zero_straddling_interval_fails() {
    let x = Interval::from_rats(&rat(-1, 2), &rat(1, 3), 32);
    assert!(Interval::from_rat(&rat(1, 1), 32).div(&x).is_err());
    assert!(x.recip().is_err());
}
