//! Closed forms for the approximation constant of two-digit-cycle targets.
//!
//! For integers `v >= u >= 1` the repeating cycle `[u,v]` defines the pair
//!
//! ```text
//!     tau1 = [u; v, u, v, ...]        tau2 = [v; u, v, u, ...]
//! ```
//!
//! both roots of fixed-point quadratics over the same field. Three derived
//! quantities have closed forms: the approximation constant of the golden
//! ratio against tau1's orbit, the limit of the constant over inputs whose
//! partial quotients grow without bound, and (for `u >= 9`) the Hurwitz
//! constant of the family, which coincides with the golden-ratio value.
//!
//! The forms mix the field of tau1 with the field of phi, so results are
//! reported as certified enclosures; whenever the two fields coincide the
//! module computes exactly and the enclosure degenerates accordingly. A
//! brute-force scan of the underlying quadratic form provides an independent
//! route to the same minimum and doubles as a cross-check that the closed
//! form picks the right integer arguments.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact::SurdError;
use crate::interval::{enclose, pow10_neg, refine_to, CertifiedInterval, IntervalError};
use crate::{Int, Rat, Surd};

/// Errors from the closed-form family.
#[derive(Debug, Error)]
pub enum HurwitzError {
    /// Parameters outside `v >= u >= 1`, or an excluded pair for the
    /// operation at hand.
    #[error("parameters must satisfy v >= u >= 1 (got u = {u}, v = {v})")]
    InvalidParams { u: i64, v: i64 },
    /// The pair (1,1) makes the target cycle the golden ratio itself; the
    /// closed form degenerates to zero and is excluded.
    #[error("(1, 1) is excluded: the target cycle is the golden ratio itself")]
    GoldenRatioExcluded,
    /// The closed-form Hurwitz constant is only established for u >= 9;
    /// smaller u is refused rather than extrapolated.
    #[error("closed-form Hurwitz constant requires u >= 9 (got u = {u})")]
    OutOfTheoremRange { u: i64 },
    #[error(transparent)]
    Surd(#[from] SurdError),
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

/// Default enclosure width for closed-form evaluations: far below every
/// tolerance used by callers, still cheap to certify.
fn default_width() -> Rat {
    pow10_neg(30)
}

fn phi() -> Surd {
    Surd::new(Int::one(), Int::one(), Int::from(2), Int::from(5)).expect("phi")
}

fn phi_squared() -> Surd {
    Surd::new(Int::from(3), Int::one(), Int::from(2), Int::from(5)).expect("phi^2")
}

/// 1/phi = (-1 + sqrt 5)/2.
fn inv_phi() -> Surd {
    Surd::new(Int::from(-1), Int::one(), Int::from(2), Int::from(5)).expect("1/phi")
}

/// 1/phi^2 = (3 - sqrt 5)/2.
fn inv_phi_squared() -> Surd {
    Surd::new(Int::from(3), Int::from(-1), Int::from(2), Int::from(5)).expect("1/phi^2")
}

fn sqrt5() -> Surd {
    Surd::new(Int::zero(), Int::one(), Int::one(), Int::from(5)).expect("sqrt 5")
}

/// The cycle parameters together with the exact fixed-point values.
#[derive(Debug, Clone)]
pub struct UVParams {
    pub u: i64,
    pub v: i64,
    /// `[u; v, u, v, ...]`, the positive root of `v x^2 - uv x - u`.
    pub tau1: Surd,
    /// `[v; u, v, u, ...]`, the positive root of `u x^2 - uv x - v`.
    pub tau2: Surd,
    /// The golden ratio, kept alongside since every closed form mixes it in.
    pub phi: Surd,
}

impl UVParams {
    /// `tau1 * tau2 + 1 = (uv + 4 + sqrt(uv(uv+4)))/2`, exact in the tau field.
    pub fn tau_product_plus_one(&self) -> Surd {
        self.tau1.clone() * self.tau2.clone() + self.tau1.embed_rat(&Rat::one())
    }
}

fn validate(u: i64, v: i64) -> Result<(), HurwitzError> {
    if u < 1 || v < u {
        return Err(HurwitzError::InvalidParams { u, v });
    }
    Ok(())
}

/// Builds the fixed-point pair for a cycle `[u,v]`.
///
/// Both values are exact surds over `sqrt(uv(uv+4))` (normalized to a
/// squarefree discriminant), and the defining identities
/// `tau1 = u + 1/tau2`, `tau2 = v + 1/tau1` are asserted exactly.
pub fn tau_pair(u: i64, v: i64) -> Result<UVParams, HurwitzError> {
    validate(u, v)?;
    let uv = Int::from(u) * Int::from(v);
    // uv(uv+4) = (uv+2)^2 - 4 is never a perfect square for uv >= 1.
    let d = &uv * (&uv + Int::from(4));
    let tau1 = Surd::new(uv.clone(), Int::one(), Int::from(2) * Int::from(v), d.clone())?;
    let tau2 = Surd::new(uv, Int::one(), Int::from(2) * Int::from(u), d)?;
    let one = Rat::one();
    assert!(
        tau1.cmp_rational(&one) == std::cmp::Ordering::Greater
            && tau2.cmp_rational(&one) == std::cmp::Ordering::Greater,
        "fixed-point values exceed 1"
    );
    assert_eq!(
        tau1,
        tau1.embed_int(Int::from(u)) + tau2.recip(),
        "tau1 = u + 1/tau2"
    );
    assert_eq!(
        tau2,
        tau2.embed_int(Int::from(v)) + tau1.recip(),
        "tau2 = v + 1/tau1"
    );
    Ok(UVParams {
        u,
        v,
        tau1,
        tau2,
        phi: phi(),
    })
}

/// Which branch of the case-split the first closed-form factor takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaBranch {
    /// u = 1: theta = (phi - tau1)(tau2/phi - 1).
    UOne,
    /// u = 2: theta = (tau1 - phi)(tau2/phi - 1).
    UTwo,
    /// u >= 3: theta = (tau1 - phi^2)(1 + tau2/phi^2).
    UThreePlus,
}

fn branch_for(u: i64) -> ThetaBranch {
    match u {
        1 => ThetaBranch::UOne,
        2 => ThetaBranch::UTwo,
        _ => ThetaBranch::UThreePlus,
    }
}

/// The case-split product at the heart of the closed form.
#[derive(Debug, Clone)]
pub struct ThetaValue {
    pub branch: ThetaBranch,
    /// Present when the tau field collapses into the field of phi, in which
    /// case the product is a single exact surd.
    pub exact: Option<Surd>,
    pub enclosure: CertifiedInterval,
}

/// Interval evaluation of the theta product at enclosure width `w` per factor.
fn theta_interval(p: &UVParams, branch: ThetaBranch, w: &Rat) -> CertifiedInterval {
    let one = CertifiedInterval::point(Rat::one());
    let t1 = enclose(&p.tau1, w);
    let t2 = enclose(&p.tau2, w);
    match branch {
        ThetaBranch::UThreePlus => {
            let f1 = t1.sub(&enclose(&phi_squared(), w));
            let f2 = one.add(&t2.mul(&enclose(&inv_phi_squared(), w)));
            f1.mul(&f2)
        }
        ThetaBranch::UTwo => {
            let f1 = t1.sub(&enclose(&phi(), w));
            let f2 = t2.mul(&enclose(&inv_phi(), w)).sub(&one);
            f1.mul(&f2)
        }
        ThetaBranch::UOne => {
            let f1 = enclose(&phi(), w).sub(&t1);
            let f2 = t2.mul(&enclose(&inv_phi(), w)).sub(&one);
            f1.mul(&f2)
        }
    }
}

/// Exact theta when tau1 lives in the field of phi.
fn theta_exact(p: &UVParams, branch: ThetaBranch) -> Surd {
    let one = phi().embed_rat(&Rat::one());
    match branch {
        ThetaBranch::UThreePlus => {
            (p.tau1.clone() - phi_squared()) * (one + p.tau2.clone() * inv_phi_squared())
        }
        ThetaBranch::UTwo => (p.tau1.clone() - phi()) * (p.tau2.clone() * inv_phi() - one),
        ThetaBranch::UOne => (phi() - p.tau1.clone()) * (p.tau2.clone() * inv_phi() - one),
    }
}

/// Computes the case-split product with an enclosure of width at most
/// `width`, and verifies the strict bound `theta < tau1 tau2 / phi^2`.
pub fn theta_with(u: i64, v: i64, width: &Rat) -> Result<ThetaValue, HurwitzError> {
    validate(u, v)?;
    let p = tau_pair(u, v)?;
    let branch = branch_for(u);
    let same_field = p.tau1.same_field(&phi());
    let (exact, enclosure) = if same_field {
        let x = theta_exact(&p, branch);
        (Some(x.clone()), enclose(&x, width))
    } else {
        let iv = refine_to(width, |w| Some(theta_interval(&p, branch, w)))
            .expect("theta enclosure refinement converges");
        (None, iv)
    };

    // Strict upper bound: theta < tau1 tau2 / phi^2, with a real gap, so a
    // few rounds of refinement always separate the enclosures.
    let product = p.tau1.clone() * p.tau2.clone();
    let mut w = width.clone();
    let mut theta_iv = enclosure.clone();
    for _ in 0..16 {
        let bound = enclose(&product, &w).mul(&enclose(&inv_phi_squared(), &w));
        if theta_iv.hi() < bound.lo() {
            return Ok(ThetaValue {
                branch,
                exact,
                enclosure,
            });
        }
        w = w / Rat::from(Int::from(1024));
        theta_iv = if same_field {
            enclosure.clone()
        } else {
            theta_interval(&p, branch, &w)
        };
    }
    unreachable!("the product bound holds with a gap for every valid (u, v)")
}

/// `theta_with` at the default width.
pub fn theta(u: i64, v: i64) -> Result<ThetaValue, HurwitzError> {
    theta_with(u, v, &default_width())
}

/// The companion factor of the high-quotient limit: 1 for u >= 2 and
/// tau1 - 1 for u = 1, exact in the tau field.
pub fn vartheta(u: i64, v: i64) -> Result<Surd, HurwitzError> {
    let p = tau_pair(u, v)?;
    let one = p.tau1.embed_rat(&Rat::one());
    Ok(if u >= 2 { one } else { p.tau1 - one })
}

/// Shared core of the golden-ratio closed form: 2 theta / (sqrt5 (tau1 tau2 + 1)).
fn c_phi_core(p: &UVParams, width: &Rat) -> CertifiedInterval {
    let branch = branch_for(p.u);
    let den_exact = p.tau_product_plus_one();
    if p.tau1.same_field(&phi()) {
        let num = theta_exact(p, branch) * phi().embed_rat(&Rat::from(Int::from(2)));
        let c = num / (den_exact * sqrt5());
        return enclose(&c, width);
    }
    refine_to(width, |w| {
        let num = theta_interval(p, branch, w).scale(&Rat::from(Int::from(2)));
        let den = enclose(&den_exact, w).mul(&enclose(&sqrt5(), w));
        num.div(&den).ok()
    })
    .expect("closed-form enclosure refinement converges")
}

/// Certified enclosure of the golden-ratio approximation constant against
/// the cycle's orbit: `2 theta / (sqrt5 (tau1 tau2 + 1))`.
pub fn c_phi_closed_with(u: i64, v: i64, width: &Rat) -> Result<CertifiedInterval, HurwitzError> {
    validate(u, v)?;
    if u == 1 && v == 1 {
        return Err(HurwitzError::GoldenRatioExcluded);
    }
    let p = tau_pair(u, v)?;
    Ok(c_phi_core(&p, width))
}

/// `c_phi_closed_with` at the default width.
pub fn c_phi_closed(u: i64, v: i64) -> Result<CertifiedInterval, HurwitzError> {
    c_phi_closed_with(u, v, &default_width())
}

/// Exact value of the limit of the approximation constant over inputs whose
/// partial quotients grow without bound: `2 vartheta / (tau1 tau2 + 1)`,
/// a single surd in the tau field.
pub fn high_quotient_limit_exact(u: i64, v: i64) -> Result<Surd, HurwitzError> {
    let p = tau_pair(u, v)?;
    let vt = vartheta(u, v)?;
    let two = p.tau1.embed_rat(&Rat::from(Int::from(2)));
    Ok(two * vt / p.tau_product_plus_one())
}

/// Certified enclosure of the high-quotient limit.
pub fn high_quotient_limit_with(
    u: i64,
    v: i64,
    width: &Rat,
) -> Result<CertifiedInterval, HurwitzError> {
    Ok(enclose(&high_quotient_limit_exact(u, v)?, width))
}

/// `high_quotient_limit_with` at the default width.
pub fn high_quotient_limit(u: i64, v: i64) -> Result<CertifiedInterval, HurwitzError> {
    high_quotient_limit_with(u, v, &default_width())
}

/// Certified enclosure of the family's Hurwitz constant, established in
/// closed form for `v >= u >= 9` only; smaller u is refused.
///
/// The returned value is the golden-ratio closed form, which dominates the
/// high-quotient limit throughout the accepted range; the domination is
/// re-verified on every call.
pub fn hurwitz_constant_with(
    u: i64,
    v: i64,
    width: &Rat,
) -> Result<CertifiedInterval, HurwitzError> {
    validate(u, v)?;
    if u < 9 {
        return Err(HurwitzError::OutOfTheoremRange { u });
    }
    let c = c_phi_closed_with(u, v, width)?;
    // The constant is the larger of the two candidate values; certify that
    // the golden-ratio form is indeed the larger one.
    let mut w = width.clone();
    for _ in 0..16 {
        let limit = high_quotient_limit_with(u, v, &w)?;
        if limit.hi() < c.lo() {
            return Ok(c);
        }
        w = w / Rat::from(Int::from(1024));
    }
    unreachable!("the golden-ratio form dominates the limit for u >= 9")
}

/// `hurwitz_constant_with` at the default width.
pub fn hurwitz_constant(u: i64, v: i64) -> Result<CertifiedInterval, HurwitzError> {
    hurwitz_constant_with(u, v, &default_width())
}

/// Exact value of the large-v limit of the Hurwitz constant at fixed u:
/// `3/sqrt5 - 1 - 2/(u sqrt5) = (-5u + (3u-2) sqrt5) / (5u)`.
pub fn pejkovic_limit_exact(u: i64) -> Result<Surd, HurwitzError> {
    if u < 1 {
        return Err(HurwitzError::InvalidParams { u, v: u });
    }
    Ok(Surd::new(
        Int::from(-5 * u),
        Int::from(3 * u - 2),
        Int::from(5 * u),
        Int::from(5),
    )?)
}

/// Certified enclosure of the large-v limit. For u = 1 the formal value is
/// negative and is returned as-is.
pub fn pejkovic_limit_with(u: i64, width: &Rat) -> Result<CertifiedInterval, HurwitzError> {
    Ok(enclose(&pejkovic_limit_exact(u)?, width))
}

/// `pejkovic_limit_with` at the default width.
pub fn pejkovic_limit(u: i64) -> Result<CertifiedInterval, HurwitzError> {
    pejkovic_limit_with(u, &default_width())
}

/// Which fixed-point value anchors the quadratic-form scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TauChoice {
    Tau1,
    Tau2,
}

/// Outcome of a brute-force minimization of the attachment quadratic form.
#[derive(Debug, Clone)]
pub struct ScanResult {
    pub tau: TauChoice,
    /// Smallest integer attaining the certified minimum.
    pub minimizer: i64,
    pub minimum: CertifiedInterval,
    /// Every integer whose enclosure overlaps the minimum: exact ties are
    /// real (symmetric parameter choices produce them) and are kept.
    pub tied: Vec<i64>,
    pub values: Vec<(i64, CertifiedInterval)>,
}

/// The integers nearest the two zeroes of the scanned form, by case. The
/// scan minimum can only occur here; the scan itself checks that claim.
pub fn scan_candidates(u: i64, v: i64, tau: TauChoice) -> Vec<i64> {
    let mut c = match (u, tau) {
        (1, TauChoice::Tau1) => vec![0, 1, v, v + 1],
        (1, TauChoice::Tau2) => vec![0, 1, 2],
        (_, TauChoice::Tau1) => vec![1, 2, v - 1, v],
        (_, TauChoice::Tau2) => vec![1, 2, u - 1, u],
    };
    c.sort_unstable();
    c.dedup();
    c
}

/// Brute-force minimum of the attachment quadratic form
///
/// ```text
///     Q(p1) = 2 |(p1 - phi) tau + 1| |tau' - p1 - 1/phi|
///             / ((tau tau' + 1) sqrt5)
/// ```
///
/// over `p1 in 0..=v+1`, where `tau'` is the companion value `-1/tau^sigma`.
/// The minimum over both tau choices reproduces the closed form, which makes
/// the scan an independent oracle for it.
pub fn quadratic_form_scan_with(
    u: i64,
    v: i64,
    tau: TauChoice,
    width: &Rat,
) -> Result<ScanResult, HurwitzError> {
    validate(u, v)?;
    if u == 1 && v == 1 {
        return Err(HurwitzError::InvalidParams { u, v });
    }
    let p = tau_pair(u, v)?;
    let (t, t_prime) = match tau {
        TauChoice::Tau1 => (&p.tau1, &p.tau2),
        TauChoice::Tau2 => (&p.tau2, &p.tau1),
    };
    // The companion is exactly the negated reciprocal conjugate.
    assert!(
        *t_prime == -t.conjugate().recip(),
        "companion value is -1/tau^sigma"
    );
    let den_exact = p.tau_product_plus_one();
    let two = Rat::from(Int::from(2));

    // One evaluation round at working width `w`: the five enclosures are
    // shared by every scan point, so they are hoisted out of the point loop.
    let eval_round = |w: &Rat, points: &[i64]| -> Vec<(i64, Option<CertifiedInterval>)> {
        let phi_iv = enclose(&phi(), w);
        let t_iv = enclose(t, w);
        let tp_iv = enclose(t_prime, w);
        let ip_iv = enclose(&inv_phi(), w);
        let den = enclose(&den_exact, w).mul(&enclose(&sqrt5(), w));
        points
            .iter()
            .map(|&p1| {
                let pt = CertifiedInterval::point(Rat::from(Int::from(p1)));
                let f1 = pt.sub(&phi_iv).mul(&t_iv).shift(&Rat::one());
                let f2 = tp_iv.sub(&pt).sub(&ip_iv);
                let q = f1.abs().mul(&f2.abs()).scale(&two).div(&den).ok();
                (p1, q)
            })
            .collect()
    };
    // Refines `points` until every enclosure is no wider than `target`. A
    // denominator enclosure that still straddles zero defers its point to
    // the next, tighter round.
    let refine_points = |target: &Rat, points: &[i64]| -> Vec<(i64, CertifiedInterval)> {
        let mut w = target / Rat::from(Int::from(8));
        let mut pending: Vec<i64> = points.to_vec();
        let mut done: Vec<(i64, CertifiedInterval)> = Vec::new();
        for _ in 0..64 {
            let round = eval_round(&w, &pending);
            pending.clear();
            for (p1, q) in round {
                match q {
                    Some(q) if q.width() <= *target => done.push((p1, q)),
                    _ => pending.push(p1),
                }
            }
            if pending.is_empty() {
                done.sort_unstable_by_key(|(p1, _)| *p1);
                return done;
            }
            w = w / Rat::from(Int::from(1024));
        }
        unreachable!("scan enclosure refinement converges");
    };

    let all_points: Vec<i64> = (0..=(v + 1)).collect();
    // Coarse pass to certify which points can possibly attain the minimum,
    // then the requested width only where it matters. Points excluded by the
    // coarse pass keep their coarse enclosures in `values`.
    let coarse_width = pow10_neg(6);
    let mut values = if *width < coarse_width {
        let coarse = refine_points(&coarse_width, &all_points);
        let coarse_min_hi = coarse
            .iter()
            .map(|(_, q)| q.hi().clone())
            .min()
            .expect("scan range is nonempty");
        let candidates: Vec<i64> = coarse
            .iter()
            .filter(|(_, q)| *q.lo() <= coarse_min_hi)
            .map(|(p1, _)| *p1)
            .collect();
        let fine = refine_points(width, &candidates);
        let mut merged = coarse;
        for fq in fine {
            let slot = merged
                .iter_mut()
                .find(|(p1, _)| *p1 == fq.0)
                .expect("fine point came from the coarse set");
            slot.1 = fq.1;
        }
        merged
    } else {
        refine_points(width, &all_points)
    };
    values.sort_unstable_by_key(|(p1, _)| *p1);

    let (minimizer, minimum) = values
        .iter()
        .min_by(|a, b| a.1.hi().cmp(b.1.hi()))
        .map(|(p1, q)| (*p1, q.clone()))
        .expect("scan range is nonempty");
    let tied: Vec<i64> = values
        .iter()
        .filter(|(_, q)| q.lo() <= minimum.hi())
        .map(|(p1, _)| *p1)
        .collect();
    Ok(ScanResult {
        tau,
        minimizer,
        minimum,
        tied,
        values,
    })
}

/// `quadratic_form_scan_with` at a width tight enough to separate distinct
/// values in the tested parameter ranges while keeping exact ties visible.
pub fn quadratic_form_scan(u: i64, v: i64, tau: TauChoice) -> Result<ScanResult, HurwitzError> {
    quadratic_form_scan_with(u, v, tau, &pow10_neg(40))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::parse_decimal;
    use num_traits::Signed;

    fn surd(a: i64, b: i64, c: i64, d: i64) -> Surd {
        Surd::new(Int::from(a), Int::from(b), Int::from(c), Int::from(d)).unwrap()
    }

    fn assert_in(iv: &CertifiedInterval, lo: &str, hi: &str) {
        let lo = parse_decimal(lo).unwrap();
        let hi = parse_decimal(hi).unwrap();
        assert!(iv.lo() > &lo && iv.hi() < &hi, "got {iv}");
    }

    /// Surd-in-interval check for exact oracles.
    fn assert_contains_surd(iv: &CertifiedInterval, x: &Surd) {
        use std::cmp::Ordering::*;
        assert!(
            x.cmp_rational(iv.lo()) != Less && x.cmp_rational(iv.hi()) != Greater,
            "{iv} should contain the exact value"
        );
    }

    #[test]
    fn tau_pair_examples() {
        let p = tau_pair(1, 1).unwrap();
        assert_eq!(p.tau1, surd(1, 1, 2, 5));
        assert_eq!(p.tau2, surd(1, 1, 2, 5));

        let p = tau_pair(9, 9).unwrap();
        assert_eq!(p.tau1, surd(9, 1, 2, 85));
        assert_eq!(p.tau2, surd(9, 1, 2, 85));

        // Discriminant 45 normalizes to 3 sqrt5.
        let p = tau_pair(1, 5).unwrap();
        assert_eq!(p.tau1, surd(5, 3, 10, 5));
        assert_eq!(p.tau2, surd(5, 3, 2, 5));
        // Root > 1 of 5x^2 - 5x - 1.
        let x = &p.tau1;
        let five = x.embed_rat(&Rat::from(Int::from(5)));
        assert!((five.clone() * x.clone() * x.clone()
            - five * x.clone()
            - x.embed_rat(&Rat::one()))
        .is_zero());

        assert!(matches!(
            tau_pair(0, 3),
            Err(HurwitzError::InvalidParams { .. })
        ));
        assert!(matches!(
            tau_pair(3, 2),
            Err(HurwitzError::InvalidParams { .. })
        ));
    }

    #[test]
    fn theta_branches_and_bound() {
        // (1,1): both factors vanish against phi, so theta is exactly zero.
        let t = theta(1, 1).unwrap();
        assert_eq!(t.branch, ThetaBranch::UOne);
        assert!(t.exact.as_ref().unwrap().is_zero());
        assert!(t.enclosure.contains(&Rat::zero()));

        // (9,9): (tau - phi^2)(1 + tau/phi^2) with tau = (9+sqrt85)/2
        // evaluates to about 6.49174 * 4.47962 = 29.08054.
        let t = theta(9, 9).unwrap();
        assert_eq!(t.branch, ThetaBranch::UThreePlus);
        assert!(t.exact.is_none());
        assert_in(&t.enclosure, "29.08054", "29.08055");

        // (2,2): (tau - phi)(tau/phi - 1) with tau = 1 + sqrt2.
        let t = theta(2, 2).unwrap();
        assert_eq!(t.branch, ThetaBranch::UTwo);
        assert_in(&t.enclosure, "0.3917", "0.3918");

        // (1,5) collapses into the field of phi: phi - tau1 = 1/sqrt5 and
        // tau2/phi - 1 = phi^2, so theta = phi^2/sqrt5 = (5 + 3 sqrt5)/10.
        let t = theta(1, 5).unwrap();
        assert_eq!(t.branch, ThetaBranch::UOne);
        assert_eq!(t.exact, Some(surd(5, 3, 10, 5)));
    }

    #[test]
    fn vartheta_branches() {
        assert_eq!(vartheta(2, 7).unwrap().to_rational(), Some(Rat::one()));
        assert_eq!(vartheta(9, 9).unwrap().to_rational(), Some(Rat::one()));
        assert_eq!(vartheta(1, 5).unwrap(), surd(-5, 3, 10, 5));
    }

    #[test]
    fn golden_ratio_constant_closed_form() {
        // Independent exact oracle for (9,9): rationalizing the closed form
        // in the composite field collapses it to 27 sqrt17 / 85 - 1.
        let c = c_phi_closed(9, 9).unwrap();
        assert!(c.width() <= pow10_neg(30));
        assert_contains_surd(&c, &surd(-85, 27, 85, 17));
        assert_in(&c, "0.309692", "0.309693");

        // (1,5) is single-field and rational: theta = (5+3 sqrt5)/10 against
        // tau1 tau2 + 1 = (9+3 sqrt5)/2 gives exactly 2/15.
        let c = c_phi_closed(1, 5).unwrap();
        assert!(c.contains(&Rat::new(Int::from(2), Int::from(15))));
        assert!(c.width() <= pow10_neg(30));

        assert!(matches!(
            c_phi_closed(1, 1),
            Err(HurwitzError::GoldenRatioExcluded)
        ));
    }

    #[test]
    fn high_quotient_limit_closed_form() {
        // (9,9): 2/(tau^2+1) with tau^2 = 9 tau + 1 rationalizes to
        // (85 - 9 sqrt85)/85.
        assert_eq!(high_quotient_limit_exact(9, 9).unwrap(), surd(85, -9, 85, 85));
        assert_in(&high_quotient_limit(9, 9).unwrap(), "0.023812", "0.023814");

        // (1,1): 2(phi-1)/(phi^2+1) simplifies to 3/sqrt5 - 1.
        assert_eq!(high_quotient_limit_exact(1, 1).unwrap(), surd(-5, 3, 5, 5));

        // (2,2): 2/((1+sqrt2)^2+1) = (2 - sqrt2)/2.
        assert_eq!(high_quotient_limit_exact(2, 2).unwrap(), surd(2, -1, 2, 2));
    }

    #[test]
    fn golden_form_dominates_limit_from_four() {
        for (u, v) in [(4, 4), (4, 7), (9, 9), (20, 30)] {
            let c = c_phi_closed(u, v).unwrap();
            let l = high_quotient_limit(u, v).unwrap();
            assert!(l.hi() < c.lo(), "({u},{v}): {l} vs {c}");
        }
    }

    #[test]
    fn hurwitz_constant_gating() {
        let k = hurwitz_constant(9, 9).unwrap();
        assert_contains_surd(&k, &surd(-85, 27, 85, 17));
        assert!(matches!(
            hurwitz_constant(8, 10),
            Err(HurwitzError::OutOfTheoremRange { u: 8 })
        ));
    }

    #[test]
    fn hurwitz_constant_approaches_large_v_limit() {
        let k = hurwitz_constant(9, 1_000_000).unwrap();
        let p = pejkovic_limit(9).unwrap();
        let gap = (k.midpoint() - p.midpoint()).abs();
        assert!(gap < pow10_neg(5), "gap {gap}");
    }

    #[test]
    fn pejkovic_limit_values() {
        assert_eq!(pejkovic_limit_exact(9).unwrap(), surd(-9, 5, 9, 5));
        assert_in(&pejkovic_limit(9).unwrap(), "0.242259", "0.242261");

        // u = 1 is formally negative and returned as-is.
        assert_eq!(pejkovic_limit_exact(1).unwrap(), surd(-5, 1, 5, 5));
        assert!(pejkovic_limit(1).unwrap().hi().is_negative());

        // Strictly increasing in u toward the cap 3/sqrt5 - 1.
        let cap = surd(-5, 3, 5, 5);
        for u in 1..30 {
            let a = pejkovic_limit_exact(u).unwrap();
            let b = pejkovic_limit_exact(u + 1).unwrap();
            assert_eq!(a.checked_cmp(&b).unwrap(), std::cmp::Ordering::Less);
            assert_eq!(b.checked_cmp(&cap).unwrap(), std::cmp::Ordering::Less);
        }
    }

    #[test]
    fn scan_finds_candidate_minimizers() {
        // u = v makes the zeroes of the form symmetric around (1+u)/2, so
        // 2 and v-1 tie exactly; both must be visible in the tie set.
        let scan = quadratic_form_scan(9, 9, TauChoice::Tau1).unwrap();
        let candidates = scan_candidates(9, 9, TauChoice::Tau1);
        assert!(candidates.contains(&scan.minimizer));
        assert!(scan.tied.contains(&2) && scan.tied.contains(&8));
        assert!(scan.tied.iter().all(|p1| candidates.contains(p1)));
        assert_contains_surd(&scan.minimum, &surd(-85, 27, 85, 17));

        let scan = quadratic_form_scan(1, 5, TauChoice::Tau2).unwrap();
        assert!(scan_candidates(1, 5, TauChoice::Tau2).contains(&scan.minimizer));
        assert!(scan.minimum.contains(&Rat::new(Int::from(2), Int::from(15))));

        assert!(matches!(
            quadratic_form_scan(1, 1, TauChoice::Tau1),
            Err(HurwitzError::InvalidParams { .. })
        ));
    }

    #[test]
    fn scan_minimum_matches_closed_form() {
        for (u, v) in [(2, 2), (2, 5), (3, 7), (9, 9), (1, 4)] {
            let a = quadratic_form_scan(u, v, TauChoice::Tau1).unwrap();
            let b = quadratic_form_scan(u, v, TauChoice::Tau2).unwrap();
            let min = if a.minimum.hi() <= b.minimum.hi() {
                a.minimum
            } else {
                b.minimum
            };
            let c = c_phi_closed_with(u, v, &pow10_neg(40)).unwrap();
            assert!(min.intersects(&c), "({u},{v}): {min} vs {c}");
        }
    }

    #[test]
    fn tie_for_symmetric_two_cycle() {
        // (2,2): the zeroes straddle 1 and 2 symmetrically, so the scan
        // cannot prefer either; the tie set must carry both.
        let scan = quadratic_form_scan(2, 2, TauChoice::Tau1).unwrap();
        assert!(scan.tied.contains(&1) && scan.tied.contains(&2));
        let c = c_phi_closed(2, 2).unwrap();
        assert_in(&c, "0.0513", "0.0514");
        assert!(scan.minimum.intersects(&c));
    }
}
