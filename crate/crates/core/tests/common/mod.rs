//! Shared randomized invariant suites, exercised by both the property test
//! target and the acceptance suite. Every suite runs a given number of
//! seeded instances and panics with context on the first violation.

#![allow(dead_code)]

use num_traits::{One, Signed};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use quadspec::cf::{CfStream, ConvergentState, PeriodicCf};
use quadspec::interval::enclose;
use quadspec::spectrum::insertion_floor;
use quadspec::{Int, Rat, Surd};

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

fn int_pow(base: &Int, exp: usize) -> Int {
    let mut r = Int::one();
    for _ in 0..exp {
        r *= base;
    }
    r
}

fn random_digits(rng: &mut ChaCha8Rng, len: usize, max: i64) -> Vec<i64> {
    let mut v: Vec<i64> = (0..len).map(|_| rng.gen_range(1..=max)).collect();
    if let Some(last) = v.last_mut() {
        // Keep the canonical finite form unique: no trailing 1.
        if *last == 1 {
            *last = 2;
        }
    }
    v
}

fn exact_value(digits: &[i64]) -> Rat {
    let mut st = ConvergentState::new();
    for &d in digits {
        st.push(d);
    }
    st.convergent().expect("nonempty expansion")
}

fn flip_digit(rng: &mut ChaCha8Rng, d: i64, max: i64) -> i64 {
    loop {
        let cand = rng.gen_range(1..=max);
        if cand != d {
            return cand;
        }
    }
}

/// Convergent recurrence determinant: `p_n q_{n-1} - p_{n-1} q_n` alternates
/// between -1 and +1 starting from -1 at depth zero.
pub fn determinant_identity_suite(instances: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(0xD_E_7);
    for case in 0..instances {
        let len = rng.gen_range(2..=40);
        let digits = random_digits(&mut rng, len, 12);
        let mut st = ConvergentState::new();
        for (n, &d) in digits.iter().enumerate() {
            st.push(d);
            let det = st.numer() * st.denom_prev() - st.numer_prev() * st.denom();
            let expect = if n % 2 == 1 { Int::one() } else { -Int::one() };
            assert_eq!(det, expect, "determinant identity failed at case {case}, depth {n}");
        }
    }
}

/// Convergents approximate the value to better than `1/(q_n q_{n+1})`.
pub fn convergent_distance_suite(instances: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0_1);
    for case in 0..instances {
        let len = rng.gen_range(4..=24);
        let digits = random_digits(&mut rng, len, 9);
        let a = exact_value(&digits);
        let mut st = ConvergentState::new();
        let mut snaps: Vec<(Rat, Int)> = Vec::new();
        for &d in &digits {
            st.push(d);
            snaps.push((st.convergent().unwrap(), st.denom().clone()));
        }
        // Strictness needs the expansion to continue past n + 1; on the
        // final pair of a finite expansion the distance is exactly
        // 1 / (q_n q_(n+1)).
        for n in 0..len - 2 {
            let (ref pn_qn, ref qn) = snaps[n];
            let qn1 = &snaps[n + 1].1;
            let lhs = (a.clone() - pn_qn.clone()).abs();
            let rhs = Rat::new(Int::one(), qn * qn1);
            assert!(
                lhs < rhs,
                "convergent distance bound failed at case {case}, depth {n}: {lhs} >= {rhs}"
            );
        }
    }
}

/// Denominator growth: `q_(m+n)^2 >= 2^(m-1) q_n^2` for `m, n >= 1`.
pub fn denominator_growth_suite(instances: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9_0_9);
    for case in 0..instances {
        let len = rng.gen_range(4..=40);
        let digits = random_digits(&mut rng, len, 9);
        let mut st = ConvergentState::new();
        let mut dens: Vec<Int> = Vec::new();
        for &d in &digits {
            st.push(d);
            dens.push(st.denom().clone());
        }
        let n = rng.gen_range(1..len - 1);
        let m = rng.gen_range(1..len - n);
        let lhs = &dens[m + n] * &dens[m + n];
        let rhs = int_pow(&Int::from(2), m - 1) * (&dens[n] * &dens[n]);
        assert!(
            lhs >= rhs,
            "growth bound failed at case {case}: m = {m}, n = {n}"
        );
    }
}

/// First-disagreement gap: expansions sharing digits up to `n-1` and
/// differing at `n` are at least `1/(72 q_n^2 a_(n+1) a_(n+2))` apart, which
/// itself dominates `1/(72 q_n q_(n+2))` and the capped-digit floor
/// `1/(72 (C+1)^(2n+2))`.
pub fn disagreement_gap_suite(instances: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6_A_1);
    for case in 0..instances {
        let n = rng.gen_range(1..=8usize);
        let shared = random_digits(&mut rng, n, 9);
        let x = rng.gen_range(1..=9);
        let y = flip_digit(&mut rng, x, 9);

        let ext_a = rng.gen_range(2..=6);
        let ext_b = rng.gen_range(2..=6);
        let mut a_digits = shared.clone();
        a_digits.push(x);
        a_digits.extend(random_digits(&mut rng, ext_a, 9));
        let mut b_digits = shared;
        b_digits.push(y);
        b_digits.extend(random_digits(&mut rng, ext_b, 9));

        let alpha = exact_value(&a_digits);
        let beta = exact_value(&b_digits);
        let diff = (alpha - beta).abs();

        let mut st = ConvergentState::new();
        let mut dens: Vec<Int> = Vec::new();
        for &d in &a_digits {
            st.push(d);
            dens.push(st.denom().clone());
        }
        let qn = &dens[n];
        let a1 = Int::from(a_digits[n + 1]);
        let a2 = Int::from(a_digits[n + 2]);
        let tight = Rat::new(Int::one(), Int::from(72) * (qn * qn) * a1 * a2);
        let loose = Rat::new(Int::one(), Int::from(72) * (qn * &dens[n + 2]));
        let cap = a_digits.iter().copied().max().unwrap();
        let floor = Rat::new(Int::one(), Int::from(72) * int_pow(&Int::from(cap + 1), 2 * n + 2));

        assert!(loose <= tight, "bound ordering failed at case {case}");
        assert!(floor <= tight, "capped floor ordering failed at case {case}");
        assert!(
            diff >= tight,
            "disagreement gap failed at case {case}: diff {diff} < bound {tight}"
        );
    }
}

/// Proximity transfer: a later disagreement is exponentially closer, and a
/// disagreement within two indices is closer up to a fixed power of the
/// local digit cap.
pub fn proximity_suite(instances: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9_1_3);
    for case in 0..instances {
        let deep = case % 2 == 0;
        let len = rng.gen_range(14..=22usize);
        let a_digits = random_digits(&mut rng, len, 9);
        let (n, m) = if deep {
            let n = rng.gen_range(1..=4usize);
            let m = rng.gen_range(n + 3..=(n + 8).min(len - 4));
            (n, m)
        } else {
            let n = rng.gen_range(2..=6usize);
            let m = n + rng.gen_range(0..=2usize);
            (n, m)
        };

        let mut b_digits = a_digits[..=m].to_vec();
        b_digits[m] = flip_digit(&mut rng, a_digits[m], 9);
        b_digits.extend(random_digits(&mut rng, 3, 9));
        let mut c_digits = a_digits[..=n].to_vec();
        c_digits[n] = flip_digit(&mut rng, a_digits[n], 9);
        c_digits.extend(random_digits(&mut rng, 3, 9));

        let alpha = exact_value(&a_digits);
        let ab = (alpha.clone() - exact_value(&b_digits)).abs();
        let ac = (alpha - exact_value(&c_digits)).abs();

        if deep {
            let factor = Rat::new(Int::from(72), int_pow(&Int::from(2), m - n - 3));
            assert!(
                ab <= factor.clone() * ac.clone(),
                "deep proximity failed at case {case}: m = {m}, n = {n}"
            );
        } else {
            let d = a_digits[m..=m + 2].iter().copied().max().unwrap();
            let d4 = int_pow(&Int::from(d), 4);
            let factor = Rat::new(Int::from(4 * 72) * d4, Int::one());
            assert!(
                ab <= factor * ac,
                "near proximity failed at case {case}: m = {m}, n = {n}, cap = {d}"
            );
        }
    }
}

/// Mirror invariance: for two doubly infinite expansions agreeing on a
/// window, the two-sided comparison quantity is constant across the window.
/// Tails on both ends are periodic with the same cycle, so every quantity
/// is an exact field element.
pub fn mirror_invariance_suite(instances: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1_3_5);
    for case in 0..instances {
        let s = rng.gen_range(1..=3usize);
        let cycle: Vec<i64> = (0..s).map(|_| rng.gen_range(1..=5)).collect();
        let mut rev_cycle = cycle.clone();
        rev_cycle.reverse();

        let core_len = rng.gen_range(1..=5usize);
        let core = random_digits(&mut rng, core_len, 6);
        let l1 = rng.gen_range(1..=6);
        let l2 = flip_digit(&mut rng, l1, 6);
        let r1 = rng.gen_range(1..=6);
        let r2 = flip_digit(&mut rng, r1, 6);

        let mut e_a = vec![l1];
        e_a.extend_from_slice(&core);
        e_a.push(r1);
        let mut e_b = vec![l2];
        e_b.extend_from_slice(&core);
        e_b.push(r2);
        let len_e = e_a.len();

        // Value of the forward tail starting at explicit index `start`.
        let fwd = |e: &[i64], start: usize| -> Surd {
            PeriodicCf::new(e[start], e[start + 1..].to_vec(), cycle.clone())
                .expect("valid digits")
                .value()
        };
        // Value of the backward tail anchored at explicit index `i`.
        let bwd = |e: &[i64], i: usize| -> Surd {
            let pre: Vec<i64> = e[..i].iter().rev().copied().collect();
            PeriodicCf::new(e[i], pre, rev_cycle.clone()).expect("valid digits").value()
        };

        let quantity = |i: usize| -> Surd {
            let fa = fwd(&e_a, i + 1);
            let fb = fwd(&e_b, i + 1);
            let ga = bwd(&e_a, i).recip();
            let gb = bwd(&e_b, i).recip();
            (fa.clone() - fb.clone()) * (ga.clone() - gb.clone())
                / ((fa + ga) * (fb + gb))
        };

        let first = quantity(0);
        assert!(!first.is_zero(), "window quantity degenerated at case {case}");
        for i in 1..=len_e - 2 {
            assert!(
                quantity(i) == first,
                "mirror invariance failed at case {case}, window index {i}"
            );
        }
    }
}

/// Insertion floor: attaching any eventually periodic value through a
/// genuine insertion (nonempty, mismatched on both ends) keeps the
/// normalized distance ratio above `1/(96 B^3 (B+1)^2)`.
pub fn insertion_floor_suite(instances: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(0xF_0_0);
    for case in 0..instances {
        let s = rng.gen_range(1..=3usize);
        let cycle: Vec<i64> = (0..s).map(|_| rng.gen_range(1..=6)).collect();
        let b_cap = 2 + cycle.iter().copied().max().unwrap();

        let r = rng.gen_range(1..=8usize);
        let t = rng.gen_range(1..=4usize);
        let xi_digits = random_digits(&mut rng, r + t + 45, b_cap);

        // Rotation of the cycle for the periodic tail.
        let o = rng.gen_range(0..s);
        let rot: Vec<i64> = cycle[o..].iter().chain(cycle[..o].iter()).copied().collect();

        // Insertion word mismatching the expansion ahead and the cycle behind.
        let mut ins = Vec::with_capacity(t);
        ins.push(flip_digit(&mut rng, xi_digits[r + 1], b_cap + 1));
        for _ in 1..t {
            ins.push(rng.gen_range(1..=b_cap + 1));
        }
        let last = ins.last_mut().unwrap();
        if *last == rot[s - 1] {
            *last = flip_digit(&mut rng, rot[s - 1], b_cap + 1);
        }
        if t == 1 && (ins[0] == xi_digits[r + 1] || ins[0] == rot[s - 1]) {
            loop {
                let cand = rng.gen_range(1..=b_cap + 1);
                if cand != xi_digits[r + 1] && cand != rot[s - 1] {
                    ins[0] = cand;
                    break;
                }
            }
        }

        let mut pre = xi_digits[1..=r].to_vec();
        pre.extend_from_slice(&ins);
        let beta = PeriodicCf::new(xi_digits[0], pre, rot).expect("valid digits").value();
        let gap = (beta.clone() - beta.conjugate()).abs();

        let mut stream = CfStream::from_open_prefix(&xi_digits).expect("valid digits");
        let xi_iv = stream.bracket(xi_digits.len()).expect("bracket");
        let tiny = Rat::new(Int::one(), int_pow(&Int::from(10), 60));
        let beta_iv = enclose(&beta, &tiny);
        let gap_iv = enclose(&gap, &tiny);

        let ratio = xi_iv
            .sub(&beta_iv)
            .abs()
            .scale(&rat(2, 1))
            .div(&gap_iv)
            .expect("gap is nonzero");
        let floor = insertion_floor(b_cap);
        assert!(
            ratio.lo() >= &floor,
            "insertion floor failed at case {case}: lo {} < floor {floor}",
            ratio.lo()
        );
    }
}

/// Runs all seven suites, returning the per-suite instance count used.
pub fn run_all_suites(instances: usize) -> [(&'static str, usize); 7] {
    determinant_identity_suite(instances);
    convergent_distance_suite(instances);
    denominator_growth_suite(instances);
    disagreement_gap_suite(instances);
    proximity_suite(instances);
    mirror_invariance_suite(instances);
    insertion_floor_suite(instances);
    [
        ("determinant identity", instances),
        ("convergent distance", instances),
        ("denominator growth", instances),
        ("disagreement gap", instances),
        ("proximity transfer", instances),
        ("mirror invariance", instances),
        ("insertion floor", instances),
    ]
}
