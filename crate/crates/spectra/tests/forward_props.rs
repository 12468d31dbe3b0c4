mod common;

use num_traits::{Signed, Zero};
use proptest::prelude::*;

use common::{charpoly, eval, fast_decay_matrix, jacobi};
use spectra::arith::rat::{int, pow10, rat};
use spectra::arith::Rat;
use spectra::forward::{assemble_herglotz, spectral_measure, statement41_certify, theorem13_check};
use spectra::measure::LacunarityParams;
use spectra::report::Verdict;
use spectra::stieltjes::{interval_chain, interval_entries, JacobiMatrix};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn denominator_is_the_characteristic_polynomial(j in jacobi(7)) {
        let den = assemble_herglotz(&j).den;
        let cp = charpoly(&j);
        let neg: Vec<Rat> = cp.iter().map(|c| -c).collect();
        prop_assert!(den.coeffs() == cp.as_slice() || den.coeffs() == neg.as_slice());
    }

    #[test]
    fn poles_bracket_eigenvalues(j in jacobi(7)) {
        let cp = charpoly(&j);
        let fr = spectral_measure(&j, 96).unwrap();
        prop_assert_eq!(fr.measure.len(), j.size());
        for a in &fr.measure.atoms {
            let (lo, hi) = (a.t.lo(), a.t.hi());
            if lo == hi {
                prop_assert!(eval(&cp, &lo).is_zero());
            } else {
                prop_assert!(eval(&cp, &lo).signum() * eval(&cp, &hi).signum() == -Rat::from_integer(1.into()));
            }
            prop_assert!(a.m.is_positive());
        }
    }

    #[test]
    fn entries_survive_a_roundtrip(j in jacobi(8)) {
        let fr = spectral_measure(&j, 128).unwrap();
        let (levels, steps) = interval_chain(&fr.measure, None, 128).unwrap();
        let (q, rho) = interval_entries(&levels, &steps).unwrap();
        for (enc, exact) in q.iter().zip(&j.q) {
            prop_assert!(enc.contains(exact));
        }
        for (enc, exact) in rho.iter().zip(&j.rho_sq) {
            prop_assert!(enc.contains(exact));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn rescaled_fast_decay_is_certified_lacunary(c in 1i64..50, n in 2usize..=4) {
        let q: Vec<Rat> = (1..=n).map(|j| pow10(9 * (n - j) as i64) * int(c)).collect();
        let rho = (0..n - 1).map(|j| pow10(5) * &q[j + 1] * &q[j + 1]).collect();
        let j = JacobiMatrix::new(q, rho).unwrap();
        let p = LacunarityParams::new(pow10(5), int(200), rat(5, 10_000));
        let r = theorem13_check(&j, &p, 128).unwrap();
        let concl = r.select("thm1.3.t.").all(|c| c.verdict == Verdict::Pass);
        prop_assert!(concl);
        prop_assert!(r.all_pass("thm1.3.lacunary"));
    }
}

#[test]
fn fast_decay_fixture_localizes_every_step() {
    let p = LacunarityParams::new(pow10(5), int(200), rat(5, 10_000));
    let r = statement41_certify(&fast_decay_matrix(), &p, 128).unwrap();
    assert!(r.checks.iter().all(|c| c.verdict == Verdict::Pass));
    assert!(r.all_pass("stmt4.1.gap") && r.all_pass("stmt4.1.top") && r.all_pass("cor4.2"));
}

#[test]
fn jacobi_json_roundtrip() {
    let j = JacobiMatrix::new(vec![rat(1, 2), int(-3)], vec![rat(7, 3)]).unwrap();
    let text = serde_json::to_string(&j).unwrap();
    let back: JacobiMatrix = serde_json::from_str(&text).unwrap();
    assert_eq!(back, j);
    assert!(serde_json::from_str::<JacobiMatrix>(r#"{"q":["1","2"],"rho_sq":["-1"]}"#).is_err());
}
