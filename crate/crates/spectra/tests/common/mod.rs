#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use spectra::arith::rat::{int, pow, pow10, rat};
use spectra::arith::Rat;
use spectra::measure::{generate_lacunary, DiscreteMeasure, LacunarityParams};
use spectra::stieltjes::JacobiMatrix;

// ---- fixtures -------------------------------------------------------------

/// t_k = 10^{4(k-1)}, mu_k proportional to (6*10^5)^{k-1}, five atoms.
pub fn geometric_five() -> DiscreteMeasure {
    generate_lacunary(5, &pow10(4), &(int(6) * pow10(5)), &int(1), 0).unwrap()
}

/// q_j = 10^{9(N-j)}, rho_j^2 = 10^5 q_{j+1}^2, N = 4.
pub fn fast_decay_matrix() -> JacobiMatrix {
    let q: Vec<Rat> = (1..=4).map(|j| pow10(9 * (4 - j))).collect();
    let rho = (0..3).map(|j| pow10(5) * &q[j + 1] * &q[j + 1]).collect();
    JacobiMatrix::new(q, rho).unwrap()
}

/// Positions 10^{7(k-1)}, weights (5*10^6)^{k-1}, seven atoms.
pub fn fock_nu() -> DiscreteMeasure {
    let pairs: Vec<_> = (0..7).map(|k| (pow10(7 * k), pow(&(int(5) * pow10(6)), k))).collect();
    DiscreteMeasure::from_pairs(&pairs).unwrap()
}

pub fn fock_params() -> LacunarityParams {
    LacunarityParams::new(int(2) * pow10(6), int(2) * pow10(6), pow10(-7))
}

pub fn params(l: Rat, k: Rat, t: Rat) -> LacunarityParams {
    LacunarityParams::new(l, k, t)
}

/// Two geometric measures steep enough for the Hamiltonian ratio bounds.
pub fn canonical_fixture_a() -> (DiscreteMeasure, LacunarityParams) {
    let mu = generate_lacunary(5, &pow10(6), &(int(2) * pow10(8)), &int(1), 0).unwrap();
    (mu, params(int(5) * pow10(5), int(150), rat(3, 10_000)))
}

pub fn canonical_fixture_b() -> (DiscreteMeasure, LacunarityParams) {
    let mu = generate_lacunary(4, &pow10(10), &(int(2) * pow10(14)), &int(1), 0).unwrap();
    (mu, params(pow10(7), int(150), pow10(-3)))
}

// ---- oracles --------------------------------------------------------------

fn dot(m: &[Rat], f: &[Rat], g: &[Rat]) -> Rat {
    m.iter().zip(f).zip(g).map(|((w, a), b)| w * a * b).sum()
}

/// Three-term recurrence coefficients by Gram-Schmidt on `1, x, x^2, ..` in `L^2(mu)`.
///
/// Polynomials are carried as their values on the support, so the inner product is a
/// finite weighted sum and nothing is shared with the library's continued fractions.
pub fn gram_schmidt(mu: &DiscreteMeasure) -> (Vec<Rat>, Vec<Rat>) {
    let t = mu.positions();
    let m: Vec<Rat> = mu.weights().iter().map(|w| w / mu.total_mass()).collect();
    let n = t.len();
    let mut basis: Vec<Vec<Rat>> = Vec::with_capacity(n);
    let mut norms: Vec<Rat> = Vec::with_capacity(n);
    let mut mono = vec![Rat::one(); n];
    for _ in 0..n {
        let mut p = mono.clone();
        for (b, nb) in basis.iter().zip(&norms) {
            let c = dot(&m, &mono, b) / nb;
            for (pi, bi) in p.iter_mut().zip(b) {
                *pi -= &c * bi;
            }
        }
        norms.push(dot(&m, &p, &p));
        basis.push(p);
        mono = mono.iter().zip(&t).map(|(a, x)| a * x).collect();
    }
    let q = (0..n)
        .map(|k| {
            let xp: Vec<Rat> = basis[k].iter().zip(&t).map(|(a, x)| a * x).collect();
            dot(&m, &xp, &basis[k]) / &norms[k]
        })
        .collect();
    let rho = (0..n - 1).map(|k| &norms[k + 1] / &norms[k]).collect();
    (q, rho)
}

/// Coefficients (constant first) of `det(J - z)` by expansion along the last row.
pub fn charpoly(j: &JacobiMatrix) -> Vec<Rat> {
    fn lin_mul(p: &[Rat], c: &Rat) -> Vec<Rat> {
        // (c - z) p(z)
        let mut out = vec![Rat::zero(); p.len() + 1];
        for (i, a) in p.iter().enumerate() {
            out[i] += c * a;
            out[i + 1] -= a;
        }
        out
    }
    let mut prev: Vec<Rat> = vec![Rat::one()];
    let mut cur = lin_mul(&prev, &j.q[0]);
    for k in 1..j.q.len() {
        let mut next = lin_mul(&cur, &j.q[k]);
        for (i, a) in prev.iter().enumerate() {
            next[i] -= &j.rho_sq[k - 1] * a;
        }
        prev = cur;
        cur = next;
    }
    cur
}

pub fn eval(p: &[Rat], x: &Rat) -> Rat {
    p.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
}

pub fn is_reduced(r: &Rat) -> bool {
    num_integer::Integer::gcd(r.numer(), r.denom()) == BigInt::one() && r.denom() > &BigInt::zero()
}

// ---- strategies -----------------------------------------------------------

pub fn small_rat() -> impl Strategy<Value = Rat> {
    (-60i64..=60, 1i64..=7).prop_map(|(p, q)| rat(p, q))
}

pub fn pos_rat() -> impl Strategy<Value = Rat> {
    (1i64..=40, 1i64..=9).prop_map(|(p, q)| rat(p, q))
}

/// Normalized measure with `1..=max` atoms at distinct small rationals.
pub fn measure(max: usize) -> impl Strategy<Value = DiscreteMeasure> {
    prop::collection::btree_set(-80i64..=80, 1..=max)
        .prop_flat_map(|ts| {
            let n = ts.len();
            (Just(ts), 1i64..=5, prop::collection::vec(pos_rat(), n))
        })
        .prop_map(|(ts, den, ms)| {
            let pairs: Vec<_> = ts.into_iter().zip(ms).map(|(t, m)| (rat(t, den), m)).collect();
            DiscreteMeasure::from_pairs(&pairs).unwrap().normalize()
        })
}

pub fn measure_at_least(min: usize, max: usize) -> impl Strategy<Value = DiscreteMeasure> {
    measure(max).prop_filter("too few atoms", move |m| m.len() >= min)
}

/// Positive-support measure.
pub fn positive_measure(min: usize, max: usize) -> impl Strategy<Value = DiscreteMeasure> {
    prop::collection::btree_set(1i64..=500, min..=max)
        .prop_flat_map(|ts| {
            let n = ts.len();
            (Just(ts), prop::collection::vec(pos_rat(), n))
        })
        .prop_map(|(ts, ms)| {
            let pairs: Vec<_> = ts.into_iter().zip(ms).map(|(t, m)| (int(t), m)).collect();
            DiscreteMeasure::from_pairs(&pairs).unwrap().normalize()
        })
}

pub fn jacobi(max: usize) -> impl Strategy<Value = JacobiMatrix> {
    (1..=max)
        .prop_flat_map(|n| (prop::collection::vec(small_rat(), n), prop::collection::vec(pos_rat(), n - 1)))
        .prop_map(|(q, r)| JacobiMatrix::new(q, r).unwrap())
}
