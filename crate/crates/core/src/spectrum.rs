//! Finite-depth estimation of the quadratic approximation constant
//!
//! For a purely periodic target value alpha and an irrational input xi, the
//! quantity of interest is the smallest liminf, over the attachment set Phi
//! derived from alpha's cycle, of the normalized approximation ratio
//!
//! ```text
//!     2 |xi - beta| / |beta - beta^sigma|
//! ```
//!
//! where beta runs over quadratic approximants that follow xi's expansion for
//! r digits and then continue with an attachment value. Writing D_r for the
//! tail value `[a_{r+1}; a_{r+2}, ...]` and d_r for the mirror ratio
//! `[a_r; a_{r-1}, ..., a_1]`, the ratio for attachment value `w` expands
//! exactly to
//!
//! ```text
//!     2 |D_r - w| |1/d_r + w^sigma|  /  ( |w - w^sigma| |D_r + 1/d_r| )
//! ```
//!
//! This module evaluates that expansion in certified interval arithmetic:
//! d_r is an exact rational, D_r is a convergent bracket of the stream tail,
//! and the attachment value is enclosed at a width that adapts to the tail
//! bracket. A liminf is not observable at finite depth, so estimates are
//! reported as a two-sided pair: a windowed lower bound and a windowed upper
//! bound, plus the global minimum upper bound as a monotone diagnostic.
//!
//! For periodic inputs the record family has computable limits: along depths
//! in one residue class mod the input period, D_r is exactly constant and
//! d_r converges to a purely periodic value, so each record carries the
//! certified limit of its class and the windowed bounds take the hull of the
//! measured interval with that limit. The window then brackets the limiting
//! minimum itself rather than a one-sided finite-depth approach to it.

use std::collections::HashMap;

use num_traits::{One, Signed};
use thiserror::Error;

use crate::cf::{reversed_tail, CfError, CfStream, PeriodicCf, TailKind};
use crate::interval::{decimal_str, enclose, pow10_neg, CertifiedInterval, IntervalError};
use crate::{Int, Rat, Surd};

/// Errors from the estimator family.
#[derive(Debug, Error)]
pub enum SpectrumError {
    /// The input stream is an exact finite expansion, hence rational; the
    /// approximation constant is not defined for rational inputs.
    #[error("input is rational: the approximation constant is undefined")]
    RationalXi,
    /// The input provably shares a tail with the target cycle (up to rotation
    /// or reversal), so it is excluded from the estimator's domain.
    #[error("input lies in the orbit of the target cycle")]
    XiInOrbit,
    /// depth >= window >= period length is required.
    #[error("invalid estimator window: depth {depth}, window {window}, period length {s}")]
    InvalidWindow { depth: usize, window: usize, s: usize },
    /// A direct-ratio denominator degenerates when beta is rational.
    #[error("beta is rational: |beta - beta^sigma| vanishes")]
    DegenerateBeta,
    #[error(transparent)]
    Cf(#[from] CfError),
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

/// One attachment value from the set Phi: a rotation of the target cycle or
/// of its reversal, with its exact value and conjugate.
#[derive(Debug, Clone)]
pub struct PhiMember {
    /// "a_i" for forward rotations, "a'_i" for reversed ones (1-based i).
    pub label: String,
    /// 1-based rotation index.
    pub index: usize,
    /// True for members built from the reversed cycle.
    pub reversed: bool,
    /// The purely periodic cycle this member evaluates.
    pub cycle: Vec<i64>,
    /// Exact value, always > 1.
    pub value: Surd,
    /// Exact algebraic conjugate, always in (-1, 0).
    pub conjugate: Surd,
    /// Position of an earlier member with the same value, if any.
    pub duplicate_of: Option<usize>,
}

/// The full attachment set for a cycle `b_1..b_s`: the s forward rotations
/// `a_i = [b_i, ..., b_{i+s-1} repeating]` and the s reversed rotations
/// `a'_i = [b_{i+s-1}, ..., b_i repeating]`, kept as 2s entries with exact
/// duplicates flagged rather than dropped.
#[derive(Debug, Clone)]
pub struct PhiSet {
    /// Primitivized cycle.
    pub period: Vec<i64>,
    /// Digit cap `B = 2 + max(b_i)`.
    pub b_cap: i64,
    /// 2s members: forward rotations first, then reversed.
    pub members: Vec<PhiMember>,
    /// True when every reversed member duplicates a forward one, i.e. the
    /// reversed cycle is a rotation of the cycle.
    pub palindromic: bool,
}

impl PhiSet {
    /// Members with distinct values (duplicates filtered).
    pub fn distinct(&self) -> impl Iterator<Item = &PhiMember> {
        self.members.iter().filter(|m| m.duplicate_of.is_none())
    }
}

/// Builds the attachment set for a cycle. The cycle is primitivized first:
/// rotations of a repeated block duplicate rotations of the block itself.
pub fn phi_set(period: &[i64]) -> Result<PhiSet, SpectrumError> {
    if period.is_empty() {
        return Err(CfError::EmptyPeriod.into());
    }
    for (i, &d) in period.iter().enumerate() {
        if d < 1 {
            return Err(CfError::InvalidDigit { index: i, digit: d }.into());
        }
    }
    // Primitivize without rotating: take the shortest prefix whose repetition
    // reproduces the input, so member labels stay aligned with input digits.
    let s_full = period.len();
    let mut cycle: Vec<i64> = period.to_vec();
    for d in 1..s_full {
        if s_full % d == 0 && (0..s_full).all(|i| period[i] == period[i % d]) {
            cycle = period[..d].to_vec();
            break;
        }
    }
    let s = cycle.len();
    let b_cap = 2 + cycle.iter().copied().max().expect("nonempty cycle");

    let mut members: Vec<PhiMember> = Vec::with_capacity(2 * s);
    for pass in 0..2 {
        let reversed = pass == 1;
        for i in 0..s {
            let mut rot: Vec<i64> = cycle[i..].iter().chain(cycle[..i].iter()).copied().collect();
            if reversed {
                rot.reverse();
            }
            let value = PeriodicCf::purely(&rot)?.value();
            let conjugate = value.conjugate();
            // Purely periodic values are reduced: value > 1, conjugate in (-1, 0).
            debug_assert!(value.cmp_rational(&Rat::one()) == std::cmp::Ordering::Greater);
            debug_assert!(conjugate.is_negative());
            let duplicate_of = members.iter().position(|m: &PhiMember| m.value == value);
            members.push(PhiMember {
                label: format!("{}{}", if reversed { "a'_" } else { "a_" }, i + 1),
                index: i + 1,
                reversed,
                cycle: rot,
                value,
                conjugate,
                duplicate_of,
            });
        }
    }

    // Reversal identity: a'_i is exactly -1/(a_i^sigma).
    for i in 0..s {
        let expected = -members[i].conjugate.recip();
        assert_eq!(
            members[s + i].value, expected,
            "reversed rotation must equal the negated reciprocal conjugate"
        );
    }

    let palindromic = members[s..].iter().all(|m| m.duplicate_of.is_some());
    Ok(PhiSet {
        period: cycle,
        b_cap,
        members,
        palindromic,
    })
}

/// Threshold below which the direct-attachment family is known to capture
/// the minimum: `1 / (48 B^3 (B+1)^2)`.
pub fn direct_threshold(b_cap: i64) -> Rat {
    let b = Int::from(b_cap);
    let b1 = Int::from(b_cap + 1);
    Rat::new(Int::one(), Int::from(48) * b.pow(3) * b1.pow(2))
}

/// Unconditional floor for approximants that insert extra digits before the
/// periodic tail: `1 / (96 B^3 (B+1)^2)`.
pub fn insertion_floor(b_cap: i64) -> Rat {
    let b = Int::from(b_cap);
    let b1 = Int::from(b_cap + 1);
    Rat::new(Int::one(), Int::from(96) * b.pow(3) * b1.pow(2))
}

/// Evaluates the expanded ratio for an arbitrary attachment value (> 1).
/// Returns the ratio interval together with the exact mirror ratio d_r and
/// the tail bracket used for D_r.
///
/// With `resolution: None` every exact endpoint is carried through the
/// arithmetic untouched, so distances are resolved down to the full tail
/// precision. A caller that only certifies quantities above some scale can
/// pass that scale instead: the working width is then floored there and the
/// long exact endpoints (deep convergents, the mirror ratio) are snapped
/// outward onto a grid four decades finer, trading certified slack below the
/// scale for small operands. The output still never widens when the tail
/// deepens: once the floor pins the width, the enclosures are identical
/// across depths and nesting follows from the shrinking tail bracket alone.
pub(crate) fn ratio_for_value(
    xi: &mut CfStream,
    r: usize,
    value: &Surd,
    tail_depth: usize,
    resolution: Option<&Rat>,
) -> Result<(CertifiedInterval, Rat, CertifiedInterval), SpectrumError> {
    assert!(r >= 1, "attachment index must be >= 1");
    // Digits a_0..a_r; the mirror ratio needs a_1..a_r.
    let prefix = xi.prefix(r + 1);
    let d_mirror = reversed_tail(&prefix, r)?;
    let d_tail = xi.tail_bracket(r + 1, tail_depth)?;

    // Enclosure width for the attachment value: track the tail bracket so
    // that refining the tail always refines the output (dyadic nesting).
    let base = pow10_neg(30);
    let dw = d_tail.width();
    let mut w = if dw.is_positive() {
        let scaled = dw / Rat::from(Int::from(1024));
        if scaled < base {
            scaled
        } else {
            base
        }
    } else {
        base
    };
    let grid = match resolution {
        Some(res) => {
            if w < *res {
                w = res.clone();
            }
            Some(res / Rat::from(Int::from(10_000)))
        }
        None => None,
    };

    let phi_iv = enclose(value, &w);
    let sig_iv = enclose(&value.conjugate(), &w);
    let gap_iv = enclose(&(value.clone() - value.conjugate()), &w);
    let (d_tail, inv_d) = match &grid {
        Some(g) => (
            d_tail.coarsen(g),
            CertifiedInterval::point(d_mirror.recip()).coarsen(g),
        ),
        None => (d_tail, CertifiedInterval::point(d_mirror.recip())),
    };

    let num = d_tail.sub(&phi_iv).abs().mul(&inv_d.add(&sig_iv).abs());
    let den = gap_iv.abs().mul(&d_tail.add(&inv_d).abs());
    let two = Rat::from(Int::from(2));
    let ratio = num.scale(&two).div(&den)?;
    Ok((ratio, d_mirror, d_tail))
}

/// Certified interval for the approximation ratio of the depth-r approximant
/// with attachment `phi`, using `tail_depth` digits beyond a_r to bracket the
/// tail value D_r. Deepening the tail never widens the output.
pub fn approx_ratio(
    xi: &mut CfStream,
    r: usize,
    phi: &PhiMember,
    tail_depth: usize,
) -> Result<CertifiedInterval, SpectrumError> {
    ratio_for_value(xi, r, &phi.value, tail_depth, None).map(|(ratio, _, _)| ratio)
}

/// Direct-distance oracle: `2 |xi - beta| / |beta - beta^sigma|` from an
/// enclosure of xi and an exact quadratic beta. Cross-checks the expanded
/// formula without sharing any of its machinery.
pub fn approx_ratio_direct(
    xi: &CertifiedInterval,
    beta: &Surd,
) -> Result<CertifiedInterval, SpectrumError> {
    if beta.is_rational() {
        return Err(SpectrumError::DegenerateBeta);
    }
    let base = pow10_neg(30);
    let xw = xi.width();
    let w = if xw.is_positive() {
        let scaled = xw / Rat::from(Int::from(1024));
        if scaled < base {
            scaled
        } else {
            base
        }
    } else {
        base
    };
    let beta_iv = enclose(beta, &w);
    let gap_iv = enclose(&(beta.clone() - beta.conjugate()), &w).abs();
    let num = xi.sub(&beta_iv).abs();
    let two = Rat::from(Int::from(2));
    Ok(num.scale(&two).div(&gap_iv)?)
}

/// Limiting ratio along a depth class of a periodic input: the forward tail
/// value and the limiting mirror value are both purely periodic surds, so the
/// limit of the depth-r ratio along r, r+P, r+2P, ... is the fixed quantity
///
/// ```text
///     2 |D - phi| (1/d + phi^sigma) / ((phi - phi^sigma) (D + 1/d))
/// ```
///
/// with D the forward cycle value and d the reversed cycle value at the
/// class's phase. Enclosed by interval arithmetic since D, d and phi live in
/// different fields in general.
fn class_limit_ratio(
    forward: &Surd,
    backward: &Surd,
    value: &Surd,
) -> Result<CertifiedInterval, SpectrumError> {
    let w = pow10_neg(40);
    let fwd_iv = enclose(forward, &w);
    let inv_bwd_iv = enclose(&backward.recip(), &w);
    let phi_iv = enclose(value, &w);
    let sig_iv = enclose(&value.conjugate(), &w);
    let gap_iv = enclose(&(value.clone() - value.conjugate()), &w);
    let num = fwd_iv.sub(&phi_iv).abs().mul(&inv_bwd_iv.add(&sig_iv).abs());
    let den = gap_iv.abs().mul(&fwd_iv.add(&inv_bwd_iv).abs());
    let two = Rat::from(Int::from(2));
    Ok(num.scale(&two).div(&den)?)
}

/// How an approximant attaches to the input expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Attachment {
    /// The attachment value continues the expansion directly after a_r.
    Direct,
    /// One extra digit j is inserted before the periodic tail.
    Insert(i64),
}

/// One transcript row: the ratio interval for a (depth, attachment) pair.
#[derive(Debug, Clone)]
pub struct RatioRecord {
    /// Attachment depth r >= 1.
    pub r: usize,
    /// Index into `PhiSet::members`.
    pub member: usize,
    /// Member label, e.g. "a_1".
    pub label: String,
    pub attach: Attachment,
    /// Measured ratio interval (unclamped).
    pub ratio: CertifiedInterval,
    /// Exact mirror ratio d_r.
    pub d_mirror: Rat,
    /// Tail bracket for D_r.
    pub d_tail: CertifiedInterval,
    /// Limiting ratio of this record's depth class, present for periodic
    /// inputs once the backward window at r clears the preperiod: along
    /// r, r+P, r+2P, ... the forward tail is exactly periodic and the
    /// mirror converges to a purely periodic value, so the limit is a
    /// fixed cross-field quantity with a certified enclosure.
    pub class_limit: Option<CertifiedInterval>,
}

/// Two-sided finite-depth estimate with the full evaluation transcript.
#[derive(Debug, Clone)]
pub struct SpectrumEstimate {
    pub period: Vec<i64>,
    pub b_cap: i64,
    pub depth: usize,
    pub window: usize,
    /// Windowed lower bound: the minimum, over records in the last `window`
    /// depths, of the record lower endpoint, where each record is the hull
    /// of its measured interval with its class limit when one exists
    /// (insertion records are clamped up to the unconditional insertion
    /// floor first).
    pub lower: Rat,
    /// Windowed upper bound: the minimum upper endpoint over the same
    /// hulled records.
    pub upper: Rat,
    /// Minimum upper endpoint over all depths (diagnostic; monotone in depth,
    /// but biased low whenever early depths undershoot the limiting values).
    pub global_min_upper: Rat,
    /// `1 / (48 B^3 (B+1)^2)`.
    pub threshold: Rat,
    /// True when the windowed upper bound is certified below the threshold,
    /// the regime in which the direct family alone determines the constant.
    pub below_threshold: bool,
    /// `1 / (96 B^3 (B+1)^2)`.
    pub insertion_floor: Rat,
    pub palindromic: bool,
    pub records: Vec<RatioRecord>,
}

/// Extra tail digits consumed beyond the deepest attachment index, so every
/// record at depth <= R sees the stream through a_{R + TAIL_PAD}.
const TAIL_PAD: usize = 40;

/// Finite-depth two-sided estimate of the approximation constant of `xi`
/// relative to the cycle `alpha_period`.
///
/// For each r in 1..=depth and each distinct attachment value, a direct
/// record is evaluated; additionally every single-digit insertion `j + 1/phi`
/// with j in 1..=B is swept, skipping j equal to the next input digit (that
/// is a direct continuation, not an insertion) and attachment values that
/// collapse into the direct set. Insertion records are clamped from below by
/// the unconditional insertion floor, which also covers the multi-digit
/// insertions the sweep does not enumerate.
pub fn c_alpha_estimate(
    xi: &mut CfStream,
    alpha_period: &[i64],
    depth: usize,
    window: usize,
) -> Result<SpectrumEstimate, SpectrumError> {
    let phi = phi_set(alpha_period)?;
    let s = phi.period.len();
    if depth < window || window < s || window == 0 {
        return Err(SpectrumError::InvalidWindow { depth, window, s });
    }

    match xi.tail_kind() {
        TailKind::Exact => return Err(SpectrumError::RationalXi),
        TailKind::Open | TailKind::Infinite => {}
    }
    if let Some(meta) = xi.periodic_meta() {
        let alpha_cf = PeriodicCf::purely(&phi.period)?;
        if meta.same_orbit(&alpha_cf) {
            return Err(SpectrumError::XiInOrbit);
        }
    }

    let floor = insertion_floor(phi.b_cap);
    let threshold = direct_threshold(phi.b_cap);

    // Distinct members, with precomputed insertion values j + 1/phi and the
    // exact collapse test (j + 1/phi equals another member's value exactly
    // when j matches the cycle digit preceding phi's rotation).
    let distinct: Vec<usize> = phi
        .members
        .iter()
        .enumerate()
        .filter(|(_, m)| m.duplicate_of.is_none())
        .map(|(i, _)| i)
        .collect();
    let mut insertions: Vec<(usize, i64, Surd)> = Vec::new();
    for &mi in &distinct {
        let m = &phi.members[mi];
        for j in 1..=phi.b_cap {
            let omega = m.value.recip() + m.value.embed_int(Int::from(j));
            if phi.members.iter().any(|other| other.value == omega) {
                continue;
            }
            insertions.push((mi, j, omega));
        }
    }

    // Periodic inputs admit exact class limits: at depth r past the
    // preperiod, the forward tail is the cycle rotated by the phase of r and
    // the mirror converges to the reversed rotation. Cycle values are cached
    // per phase, limits per (phase, attachment).
    let xi_cycle: Option<(usize, Vec<i64>)> = xi
        .periodic_meta()
        .map(|meta| (meta.preperiod().len(), meta.period().to_vec()));
    let mut phase_values: HashMap<usize, (Surd, Surd)> = HashMap::new();
    let mut limits: HashMap<(usize, usize, Option<i64>), CertifiedInterval> = HashMap::new();
    let mut class_limit = |r: usize,
                           mi: usize,
                           insert: Option<i64>,
                           value: &Surd|
     -> Result<Option<CertifiedInterval>, SpectrumError> {
        let Some((q, cycle)) = &xi_cycle else {
            return Ok(None);
        };
        let sx = cycle.len();
        // The backward window [r-sx+1, r] must sit past a_0 and the
        // preperiod, i.e. r - sx + 1 >= q + 1.
        if r < q + sx {
            return Ok(None);
        }
        let phase = (r - q - 1) % sx;
        if let Some(iv) = limits.get(&(phase, mi, insert)) {
            return Ok(Some(iv.clone()));
        }
        if !phase_values.contains_key(&phase) {
            let fwd: Vec<i64> = (0..sx).map(|j| cycle[(phase + 1 + j) % sx]).collect();
            let bwd: Vec<i64> = (0..sx).map(|j| cycle[(phase + sx - j) % sx]).collect();
            let pair = (
                PeriodicCf::purely(&fwd)?.value(),
                PeriodicCf::purely(&bwd)?.value(),
            );
            phase_values.insert(phase, pair);
        }
        let (fwd_v, bwd_v) = &phase_values[&phase];
        let iv = class_limit_ratio(fwd_v, bwd_v, value)?;
        limits.insert((phase, mi, insert), iv.clone());
        Ok(Some(iv))
    };

    // The estimator certifies bounds at scales far above 1e-60; resolving
    // the records more finely than that buys nothing, and telling the ratio
    // evaluation so keeps its operands short for large-digit inputs.
    let resolution = pow10_neg(60);
    let mut records: Vec<RatioRecord> = Vec::new();
    for r in 1..=depth {
        let tail_depth = depth + TAIL_PAD + 1 - r;
        let next_digit = xi.digit(r + 1);
        for &mi in &distinct {
            let m = &phi.members[mi];
            let (ratio, d_mirror, d_tail) =
                ratio_for_value(xi, r, &m.value, tail_depth, Some(&resolution))?;
            let climit = class_limit(r, mi, None, &m.value)?;
            records.push(RatioRecord {
                r,
                member: mi,
                label: m.label.clone(),
                attach: Attachment::Direct,
                ratio,
                d_mirror,
                d_tail,
                class_limit: climit,
            });
        }
        for (mi, j, omega) in &insertions {
            if Some(*j) == next_digit {
                continue;
            }
            let (ratio, d_mirror, d_tail) =
                ratio_for_value(xi, r, omega, tail_depth, Some(&resolution))?;
            assert!(
                ratio.hi() >= &floor,
                "insertion record upper endpoint fell below the unconditional floor"
            );
            let climit = class_limit(r, *mi, Some(*j), omega)?;
            records.push(RatioRecord {
                r,
                member: *mi,
                label: phi.members[*mi].label.clone(),
                attach: Attachment::Insert(*j),
                ratio,
                d_mirror,
                d_tail,
                class_limit: climit,
            });
        }
    }

    // Windowed bounds see each record through the hull of its measured
    // interval and its class limit (when one exists): the hull covers both
    // the finite-depth value and every value of the class's tail, so the
    // window straddles the limiting minimum instead of chasing it from one
    // side. The global minimum stays raw: it diagnoses observed dips.
    let effective = |rec: &RatioRecord| -> CertifiedInterval {
        match &rec.class_limit {
            Some(l) => rec.ratio.hull(l),
            None => rec.ratio.clone(),
        }
    };
    let effective_lo = |rec: &RatioRecord| -> Rat {
        let lo = effective(rec).lo().clone();
        match rec.attach {
            Attachment::Direct => lo,
            Attachment::Insert(_) => {
                if lo < floor {
                    floor.clone()
                } else {
                    lo
                }
            }
        }
    };

    let window_start = depth - window + 1;
    let mut lower: Option<Rat> = None;
    let mut upper: Option<Rat> = None;
    let mut global_min_upper: Option<Rat> = None;
    for rec in &records {
        let raw_hi = rec.ratio.hi().clone();
        if global_min_upper.as_ref().map_or(true, |g| raw_hi < *g) {
            global_min_upper = Some(raw_hi);
        }
        if rec.r >= window_start {
            let lo = effective_lo(rec);
            let hi = effective(rec).hi().clone();
            if lower.as_ref().map_or(true, |l| lo < *l) {
                lower = Some(lo);
            }
            if upper.as_ref().map_or(true, |u| hi < *u) {
                upper = Some(hi);
            }
        }
    }
    let lower = lower.expect("window contains at least one record");
    let upper = upper.expect("window contains at least one record");
    let global_min_upper = global_min_upper.expect("records nonempty");
    assert!(lower <= upper, "two-sided estimate must be ordered");
    let below_threshold = upper < threshold;

    Ok(SpectrumEstimate {
        period: phi.period.clone(),
        b_cap: phi.b_cap,
        depth,
        window,
        lower,
        upper,
        global_min_upper,
        threshold,
        below_threshold,
        insertion_floor: floor,
        palindromic: phi.palindromic,
        records,
    })
}

/// Minimum partial quotient over the inspected window (last half of the
/// depth range, a finite-depth proxy for the liminf of the digits). Falls
/// back to the full range when the stream is shorter than the window, and
/// returns 0 for streams with no digits beyond a_0.
pub fn min_liminf_quotient(xi: &mut CfStream, depth: usize) -> i64 {
    assert!(depth >= 1);
    let from = depth / 2 + 1;
    let window_min = (from..=depth).filter_map(|r| xi.digit(r)).min();
    match window_min {
        Some(m) => m,
        None => (1..=depth).filter_map(|r| xi.digit(r)).min().unwrap_or(0),
    }
}

impl Attachment {
    fn as_string(&self) -> String {
        match self {
            Attachment::Direct => "direct".to_string(),
            Attachment::Insert(j) => format!("insert:{j}"),
        }
    }
}

impl SpectrumEstimate {
    /// Deterministic JSON transcript. Decimal endpoints are directed (lower
    /// endpoints round down, upper endpoints round up) so the printed strings
    /// still bracket the true values; exact rationals ride alongside.
    pub fn to_json(&self, digits: usize) -> String {
        use serde_json::{json, Value};
        let dec = |r: &Rat, up: bool| Value::String(decimal_str(r, digits, up));
        let rat = |r: &Rat| Value::String(r.to_string());
        let records: Vec<Value> = self
            .records
            .iter()
            .map(|rec| {
                let mut row = json!({
                    "r": rec.r,
                    "phi": rec.label,
                    "attach": rec.attach.as_string(),
                    "lo": dec(rec.ratio.lo(), false),
                    "hi": dec(rec.ratio.hi(), true),
                    "lo_rat": rat(rec.ratio.lo()),
                    "hi_rat": rat(rec.ratio.hi()),
                });
                if let Some(l) = &rec.class_limit {
                    row["limit_lo"] = dec(l.lo(), false);
                    row["limit_hi"] = dec(l.hi(), true);
                    row["limit_lo_rat"] = rat(l.lo());
                    row["limit_hi_rat"] = rat(l.hi());
                }
                row
            })
            .collect();
        let v = json!({
            "period": self.period,
            "b_cap": self.b_cap,
            "depth": self.depth,
            "window": self.window,
            "digits": digits,
            "lower": dec(&self.lower, false),
            "lower_rat": rat(&self.lower),
            "upper": dec(&self.upper, true),
            "upper_rat": rat(&self.upper),
            "global_min_upper": dec(&self.global_min_upper, true),
            "global_min_upper_rat": rat(&self.global_min_upper),
            "threshold": dec(&self.threshold, false),
            "threshold_rat": rat(&self.threshold),
            "below_threshold": self.below_threshold,
            "insertion_floor": dec(&self.insertion_floor, false),
            "insertion_floor_rat": rat(&self.insertion_floor),
            "palindromic": self.palindromic,
            "records": records,
        });
        serde_json::to_string_pretty(&v).expect("JSON serialization cannot fail")
    }
}
