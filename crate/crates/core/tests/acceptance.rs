//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line with the measured quantity next to its required bound.

mod common;

use std::time::Instant;

use num_traits::{One, ToPrimitive};

use quadspec::cf::{CfStream, PeriodicCf};
use quadspec::halls_ray::{build_xi, construct_xy, params, rounds_for_blocks, verify_witness};
use quadspec::hurwitz::{
    c_phi_closed_with, high_quotient_limit_exact, hurwitz_constant, hurwitz_constant_with,
    pejkovic_limit_exact, quadratic_form_scan_with, scan_candidates, TauChoice,
};
use quadspec::interval::{enclose, CertifiedInterval};
use quadspec::spectrum::c_alpha_estimate;
use quadspec::{Int, Rat, Surd};

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

fn pow10_neg(k: usize) -> Rat {
    let mut d = Int::one();
    for _ in 0..k {
        d *= Int::from(10);
    }
    Rat::new(Int::one(), d)
}

fn approx(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn report(criterion: &str, pass: bool, detail: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("[{tag}] {criterion}: {detail}");
    assert!(pass, "{criterion}: {detail}");
}

#[test]
fn criterion_1_large_v_limit_of_the_family_constant() {
    let start = Instant::now();
    let tol = pow10_neg(5);
    let mut worst = Rat::from(Int::from(0));
    for u in 9..=20 {
        let k = hurwitz_constant(u, 1_000_000).expect("closed form in range");
        let p = enclose(&pejkovic_limit_exact(u).expect("limit value"), &pow10_neg(12));
        let dist = CertifiedInterval::point(k.hi().clone()).sub(&p).abs();
        let dist_lo = CertifiedInterval::point(k.lo().clone()).sub(&p).abs();
        let d = if dist.hi() > dist_lo.hi() { dist.hi().clone() } else { dist_lo.hi().clone() };
        if d > worst {
            worst = d;
        }
    }
    let elapsed = start.elapsed();

    // The u = 9 instance has the exact symbolic value (5 sqrt5 - 9) / 9.
    let exact = pejkovic_limit_exact(9).expect("limit value");
    let oracle =
        Surd::new(Int::from(-9), Int::from(5), Int::from(9), Int::from(5)).expect("surd");
    let symbolic_ok = exact == oracle;

    let pass = worst < tol && symbolic_ok && elapsed.as_secs_f64() < 1.0;
    report(
        "criterion 1 (large-v limit, u in 9..=20, v = 10^6)",
        pass,
        &format!(
            "max |K - limit| = {:.3e} (< 1e-5), u = 9 value equals (5 sqrt5 - 9)/9: {}, elapsed {:.3}s (< 1s)",
            approx(&worst),
            symbolic_ok,
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_2_golden_ratio_cap_over_the_range() {
    let start = Instant::now();
    let cap_exact =
        Surd::new(Int::from(-5), Int::from(3), Int::from(5), Int::from(5)).expect("surd");
    let cap = enclose(&cap_exact, &pow10_neg(30));
    let tol = pow10_neg(20);
    let gate = cap.lo().clone() + tol;

    // Enclosure width 1e-6 suffices: the closest pair still clears the cap
    // by more than 2e-4, and the comparison against `gate` is unchanged.
    let scan_width = pow10_neg(6);
    let mut worst_margin: Option<(Rat, i64, i64)> = None;
    for u in 9..=100 {
        for v in u..=100 {
            let k = hurwitz_constant_with(u, v, &scan_width).expect("closed form in range");
            let margin = gate.clone() - k.hi().clone();
            if worst_margin.as_ref().map_or(true, |(m, _, _)| margin < *m) {
                worst_margin = Some((margin, u, v));
            }
        }
    }
    let elapsed = start.elapsed();
    let (margin, wu, wv) = worst_margin.expect("nonempty range");

    let pass = margin >= Rat::from(Int::from(0)) && elapsed.as_secs_f64() < 10.0;
    report(
        "criterion 2 (constant stays below 3/sqrt5 - 1 for 9 <= u <= v <= 100)",
        pass,
        &format!(
            "4278 pairs, tightest margin {:.3e} at (u, v) = ({wu}, {wv}), elapsed {:.2}s (< 10s)",
            approx(&margin),
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_3_golden_ratio_estimate_brackets_the_closed_form() {
    let start = Instant::now();
    let phi_cf = PeriodicCf::purely(&[1]).expect("cycle");
    let mut xi = CfStream::from_periodic(&phi_cf);
    let est = c_alpha_estimate(&mut xi, &[9, 9], 60, 30).expect("estimate");
    // The oracle enclosure must be tighter than the estimate's class-limit
    // enclosures, or the containment test compares grid offsets of the two
    // enclosures rather than the values themselves.
    let c = c_phi_closed_with(9, 9, &pow10_neg(50)).expect("closed form");
    let elapsed = start.elapsed();

    let brackets = est.lower <= *c.lo() && *c.hi() <= est.upper;
    let width = est.upper.clone() - est.lower.clone();
    let narrow = width < pow10_neg(6);
    let pass = brackets && narrow && elapsed.as_secs_f64() < 30.0;
    report(
        "criterion 3 (estimate of the golden ratio against the (9,9) family)",
        pass,
        &format!(
            "bracket [{:.9}, {:.9}] contains {:.9}: {brackets}, width {:.3e} (< 1e-6), elapsed {:.2}s (< 30s)",
            approx(&est.lower),
            approx(&est.upper),
            approx(c.lo()),
            approx(&width),
            elapsed.as_secs_f64(),
        ),
    );
}

#[test]
fn criterion_4_large_digit_inputs_approach_the_high_quotient_limit() {
    let start = Instant::now();
    let limit = enclose(
        &high_quotient_limit_exact(9, 9).expect("limit value"),
        &pow10_neg(30),
    );
    let mut details = Vec::new();
    let mut pass = true;
    for n in [1_000i64, 10_000] {
        let cf = PeriodicCf::purely(&[n]).expect("cycle");
        let mut xi = CfStream::from_periodic(&cf);
        let est = c_alpha_estimate(&mut xi, &[9, 9], 60, 30).expect("estimate");
        let dist = CertifiedInterval::point(est.upper.clone()).sub(&limit).abs();
        let tol = Rat::new(Int::from(5), Int::from(n));
        let ok = *dist.hi() <= tol;
        pass &= ok;
        details.push(format!(
            "N = {n}: |upper - limit| = {:.3e} (<= {:.1e})",
            approx(dist.hi()),
            approx(&tol)
        ));
    }
    let elapsed = start.elapsed();
    pass &= elapsed.as_secs_f64() < 30.0;
    report(
        "criterion 4 (constant-digit inputs against the (9,9) family)",
        pass,
        &format!("{}, elapsed {:.2}s (< 30s)", details.join("; "), elapsed.as_secs_f64()),
    );
}

#[test]
fn criterion_5_brute_force_scan_reproduces_the_closed_form() {
    let start = Instant::now();
    let width = pow10_neg(25);
    let tol = pow10_neg(20);
    let mut pairs = 0usize;
    let mut pass = true;
    let mut first_fail = String::new();
    for u in 2..=30 {
        for v in u..=30 {
            if u == 1 && v == 1 {
                continue;
            }
            pairs += 1;
            let s1 = quadratic_form_scan_with(u, v, TauChoice::Tau1, &width).expect("scan");
            let s2 = quadratic_form_scan_with(u, v, TauChoice::Tau2, &width).expect("scan");
            let c = c_phi_closed_with(u, v, &width).expect("closed form");

            let brute_lo = s1.minimum.lo().min(s2.minimum.lo()).clone();
            let brute_hi = s1.minimum.hi().min(s2.minimum.hi()).clone();
            let value_ok = brute_hi <= c.lo().clone() + tol.clone()
                && brute_lo >= c.hi().clone() - tol.clone();

            let mut sites_ok = true;
            for s in [&s1, &s2] {
                let cand = scan_candidates(u, v, s.tau);
                sites_ok &= cand.contains(&s.minimizer);
                sites_ok &= s.tied.iter().all(|p1| cand.contains(p1));
            }

            if !(value_ok && sites_ok) && first_fail.is_empty() {
                first_fail = format!(" first failure at (u, v) = ({u}, {v})");
            }
            pass &= value_ok && sites_ok;
        }
    }
    let elapsed = start.elapsed();
    pass &= elapsed.as_secs_f64() < 30.0;
    report(
        "criterion 5 (brute-force form scan, 2 <= u <= v <= 30, both fixed points)",
        pass,
        &format!(
            "{pairs} pairs agree within 1e-20 and minimize on the candidate sets{first_fail}, elapsed {:.2}s (< 30s)",
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_6_constructive_witness() {
    let start = Instant::now();
    let p = params(&[2]).expect("cycle parameters");
    let eps = p.psi.clone() * rat(1, 2);
    let rounds = rounds_for_blocks(&p, 3);
    let xy = construct_xy(&eps, &p, rounds).expect("construction");
    let (xi, runs) = build_xi(&xy.x_digits, &xy.y_digits, xy.k, &p, 3).expect("assembly");
    let report_data = verify_witness(&xi, &runs, &[2], &eps, xi.len()).expect("verification");
    let elapsed = start.elapsed();

    let k_ok = report_data.k > 3 * p.n;
    let runs_ok = report_data.run_records.len() == 3;
    let min_ok = report_data.min_other_lo >= eps.clone() * (Rat::one() - rat(1, 1000));
    let time_ok = elapsed.as_secs_f64() < 600.0;
    report(
        "criterion 6 (constructive witness, cycle [2], eps = psi/2, 3 blocks)",
        k_ok && runs_ok && min_ok && time_ok,
        &format!(
            "k = {} (> {}), run records = {}, {} ratio records swept to r = {}, case counts {:?}, elapsed {:.1}s (< 600s)",
            report_data.k,
            3 * p.n,
            report_data.run_records.len(),
            report_data.records.len(),
            report_data.swept_to,
            report_data.case_counts,
            elapsed.as_secs_f64(),
        ),
    );
}

#[test]
fn criterion_7_randomized_invariant_suites() {
    let start = Instant::now();
    let summary = common::run_all_suites(1000);
    let elapsed = start.elapsed();
    let names: Vec<String> =
        summary.iter().map(|(name, n)| format!("{name} x{n}")).collect();
    let pass = elapsed.as_secs_f64() < 60.0;
    report(
        "criterion 7 (seven randomized exact invariant suites)",
        pass,
        &format!(
            "zero violations across {}, elapsed {:.2}s (< 60s)",
            names.join(", "),
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_8_documented_exclusions() {
    // Set equality of a full spectrum segment and true liminf values are
    // infinite-precision statements with no finite check; the suite
    // substitutes finite-depth two-sided brackets and certified witness
    // ratios (criteria 3 through 6) and records that substitution here.
    report(
        "criterion 8 (documented exclusions)",
        true,
        "set equality and exact liminf values are excluded by design; finite-depth brackets stand in",
    );
}
