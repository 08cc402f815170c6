//! Constructive witnesses for prescribed approximation constants.
//!
//! Given a primitive cycle with value `alpha` and a small rational target
//! `eps`, this module selects certified construction parameters, builds a
//! pair of expansions `x` and `y` by alternating refinement through an
//! interval map, assembles them into a single expansion `xi` whose
//! designated run records all realise ratio `eps`, and verifies the
//! assembled expansion record by record with exact interval arithmetic.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::cf::{CfError, CfStream, LftMap, LftSession, LftStep, PeriodicCf};
use crate::exact::SurdError;
use crate::interval::{enclose, CertifiedInterval, IntervalError};
use crate::spectrum::{phi_set, ratio_for_value, SpectrumError};
use crate::{Int, Rat, Surd};

#[derive(Debug, Error)]
pub enum HallsRayError {
    #[error("epsilon must lie in (0, psi]: got {eps}, psi = {psi}")]
    EpsilonOutOfRange { eps: Rat, psi: Rat },
    #[error("input to the interval map must be positive")]
    NonpositiveInput,
    #[error("value lies outside the image of the interval map")]
    OutOfImage,
    #[error("word choice degenerated in round {round}: {detail}")]
    DegenerateChoice { round: usize, detail: String },
    #[error("need {needed} digits on the {side} side but only {available} are available")]
    InsufficientDigits { side: &'static str, needed: usize, available: usize },
    #[error("witness structure mismatch: {0}")]
    StructureMismatch(String),
    #[error(transparent)]
    Cf(#[from] CfError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Surd(#[from] SurdError),
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

/// Everything the construction needs about the target cycle: the primitive
/// cycle itself, the digit cap `B`, the block depth `n`, the admissible
/// ceiling `psi` for the target ratio, and the two cycle values.
#[derive(Debug, Clone)]
pub struct ConstructionParams {
    /// Primitive cycle actually used (the input with any whole-cycle
    /// repetition removed).
    pub period: Vec<i64>,
    /// Length of the primitive cycle.
    pub s: usize,
    /// Free-letter base: two more than the largest cycle digit, so the free
    /// letters `B` and `B+1` never occur inside a cycle match.
    pub b_cap: i64,
    /// Block depth; frozen stretches have length `n*s`.
    pub n: usize,
    /// Largest admissible target ratio for this cycle.
    pub psi: Rat,
    /// Value of the purely periodic expansion of the cycle.
    pub alpha: Surd,
    /// Value of the reversed cycle; equals `-1 / alpha.conjugate()`.
    pub alpha_prime: Surd,
}

fn int_pow(base: i64, exp: usize) -> Int {
    let b = Int::from(base);
    let mut r = Int::one();
    for _ in 0..exp {
        r *= &b;
    }
    r
}

fn primitive_cycle(period: &[i64]) -> Result<Vec<i64>, HallsRayError> {
    if period.is_empty() {
        return Err(CfError::EmptyPeriod.into());
    }
    for (index, &digit) in period.iter().enumerate() {
        if digit < 1 {
            return Err(CfError::InvalidDigit { index, digit }.into());
        }
    }
    let full = period.len();
    for d in 1..full {
        if full % d == 0 && (0..full).all(|i| period[i] == period[i % d]) {
            return Ok(period[..d].to_vec());
        }
    }
    Ok(period.to_vec())
}

/// Chooses the certified construction parameters for a cycle.
///
/// The block depth `n` is the least depth at which a fresh free block
/// outweighs every boundary effect: the smallest `n` with
/// `2^((n-1)s) > 1327104 * B^(2s+8)` (the constant aggregates the fixed
/// factors of the depth threshold). `psi = 1 / (5184 * B^(s(6n+6)+4))`,
/// with `5184 = 72^2`.
pub fn params(period: &[i64]) -> Result<ConstructionParams, HallsRayError> {
    let cycle = primitive_cycle(period)?;
    let s = cycle.len();
    let b_cap = 2 + cycle.iter().copied().max().expect("nonempty cycle");

    let rhs = Int::from(1327104) * int_pow(b_cap, 2 * s + 8);
    let mut n = 2usize;
    while int_pow(2, (n - 1) * s) <= rhs {
        n += 1;
    }
    // Both sides of minimality, then the depth floor used downstream.
    assert!(int_pow(2, (n - 1) * s) > rhs, "depth must clear the threshold");
    assert!(int_pow(2, (n - 2) * s) <= rhs, "depth must be minimal");
    assert!(n >= 3, "the threshold forces a depth of at least three");

    let psi = Rat::new(Int::one(), Int::from(5184) * int_pow(b_cap, s * (6 * n + 6) + 4));

    let alpha = PeriodicCf::purely(&cycle)?.value();
    let mut reversed = cycle.clone();
    reversed.reverse();
    let alpha_prime = PeriodicCf::purely(&reversed)?.value();
    // The reversed value is the negative reciprocal of the conjugate.
    assert!(
        alpha_prime == -alpha.conjugate().recip(),
        "reversed-cycle value must match -1/conjugate"
    );
    assert_eq!(alpha.signum(), 1);
    assert_eq!(alpha_prime.signum(), 1);

    Ok(ConstructionParams { period: cycle, s, b_cap, n, psi, alpha, alpha_prime })
}

fn check_eps(eps: &Rat, p: &ConstructionParams) -> Result<(), HallsRayError> {
    if eps <= &Rat::zero() || eps > &p.psi {
        return Err(HallsRayError::EpsilonOutOfRange { eps: eps.clone(), psi: p.psi.clone() });
    }
    Ok(())
}

/// The interval map `f_eps` as an exact linear fractional transformation.
///
/// With `a = alpha`, `a' = alpha_prime`, `t = a a' + 1` and `B = b_cap`,
/// the map sends `x` to
/// `((2a(B - a') + eps t) x + 2a) / ((2(B - a') - eps B t) x + 2 - eps t)`.
/// It is increasing on `(0, oo)` and its image there is a subinterval of
/// `(alpha - 1/2, alpha + 1/2)`.
pub fn f_eps_map(eps: &Rat, p: &ConstructionParams) -> Result<LftMap, HallsRayError> {
    check_eps(eps, p)?;
    let a = &p.alpha;
    let ap = &p.alpha_prime;
    let e = a.embed_rat(eps);
    let b = a.embed_int(Int::from(p.b_cap));
    let two = a.embed_rat(&Rat::new(Int::from(2), Int::one()));
    let one = a.embed_rat(&Rat::one());

    let t = a.clone() * ap.clone() + one;
    let gap = b.clone() - ap.clone();
    assert_eq!(t.signum(), 1, "cycle values keep a a' + 1 positive");
    assert_eq!(gap.signum(), 1, "the free-letter base exceeds the reversed value");

    let m11 = two.clone() * a.clone() * gap.clone() + e.clone() * t.clone();
    let m12 = two.clone() * a.clone();
    let m21 = two.clone() * gap - e.clone() * b * t.clone();
    let m22 = two.clone() - e.clone() * t.clone();
    let map = LftMap::new(m11, m12, m21, m22)?;

    // det = eps (a a' + 1)^2 (2 - eps), positive throughout (0, psi].
    let det = e.clone() * t.clone() * t * (two - e);
    assert!(map.determinant() == det, "determinant identity must hold exactly");
    assert_eq!(map.determinant().signum(), 1);
    Ok(map)
}

fn embed_into_field(x: &Surd, like: &Surd) -> Surd {
    match x.to_rational() {
        Some(q) => like.embed_rat(&q),
        None => x.clone(),
    }
}

/// Applies the interval map to a positive value.
pub fn f_eps(x: &Surd, eps: &Rat, p: &ConstructionParams) -> Result<Surd, HallsRayError> {
    let xx = embed_into_field(x, &p.alpha);
    if xx.signum() != 1 {
        return Err(HallsRayError::NonpositiveInput);
    }
    let map = f_eps_map(eps, p)?;
    let y = map.eval(&xx)?;
    let off = (y.clone() - p.alpha.clone()).abs();
    assert!(
        off.cmp_rational(&Rat::new(Int::one(), Int::from(2))) == std::cmp::Ordering::Less,
        "images stay within a half-unit of the cycle value"
    );
    Ok(y)
}

/// Image of an interval of positive values under the map, as a certified
/// enclosure obtained from the exact images of the endpoints.
pub fn f_eps_enclosure(
    x: &CertifiedInterval,
    eps: &Rat,
    p: &ConstructionParams,
) -> Result<CertifiedInterval, HallsRayError> {
    if x.lo() <= &Rat::zero() {
        return Err(HallsRayError::NonpositiveInput);
    }
    let map = f_eps_map(eps, p)?;
    let y_lo = map.eval(&p.alpha.embed_rat(x.lo()))?;
    let y_hi = map.eval(&p.alpha.embed_rat(x.hi()))?;
    assert!(y_lo.checked_cmp(&y_hi)? != std::cmp::Ordering::Greater, "the map is increasing");
    let width = if x.width().is_zero() {
        Rat::new(Int::one(), int_pow(10, 40))
    } else {
        x.width() * Rat::new(Int::one(), Int::from(8))
    };
    Ok(enclose(&y_lo, &width).hull(&enclose(&y_hi, &width)))
}

/// Inverts the interval map on its image; values at or outside the image
/// boundary report `OutOfImage`.
pub fn f_eps_inv(y: &Surd, eps: &Rat, p: &ConstructionParams) -> Result<Surd, HallsRayError> {
    let yy = embed_into_field(y, &p.alpha);
    let map = f_eps_map(eps, p)?;
    let x = match map.inverse().eval(&yy) {
        Ok(x) => x,
        Err(CfError::MapPole) => return Err(HallsRayError::OutOfImage),
        Err(e) => return Err(e.into()),
    };
    if x.signum() != 1 {
        return Err(HallsRayError::OutOfImage);
    }
    assert!(map.eval(&x)? == yy, "round trip through the map must be exact");
    Ok(x)
}

/// Exact derivative bound for the interval map on `[B, B+2]`.
#[derive(Debug, Clone)]
pub struct DerivativeBound {
    /// The derivative at the midpoint `B + 1`, an exact field element.
    pub m: Surd,
    /// A tight rational enclosure of `m`.
    pub enclosure: CertifiedInterval,
}

/// Derivative of the map at `B + 1`, certified to bound every finite
/// difference slope on `[B, B+2]` within a factor of two.
pub fn derivative_bound(eps: &Rat, p: &ConstructionParams) -> Result<DerivativeBound, HallsRayError> {
    let map = f_eps_map(eps, p)?;
    let (_, _, m21, m22) = map.entries();
    let at = p.alpha.embed_rat(&Rat::new(Int::from(p.b_cap + 1), Int::one()));
    let den = m21.clone() * at + m22.clone();
    assert_eq!(den.signum(), 1);
    let m = map.determinant() / (den.clone() * den);
    assert_eq!(m.signum(), 1);

    // 64 finite-difference slopes across [B, B+2] against [m/2, 2m].
    let half_m = m.clone() * p.alpha.embed_rat(&Rat::new(Int::one(), Int::from(2)));
    let twice_m = m.clone() * p.alpha.embed_rat(&Rat::new(Int::from(2), Int::one()));
    let step = Rat::new(Int::one(), Int::from(32));
    let mut prev = map.eval(&p.alpha.embed_rat(&Rat::new(Int::from(p.b_cap), Int::one())))?;
    for i in 1..=64i64 {
        let xi = Rat::new(Int::from(p.b_cap), Int::one()) + Rat::new(Int::from(i), Int::one()) * step.clone();
        let yi = map.eval(&p.alpha.embed_rat(&xi))?;
        let slope = (yi.clone() - prev) * p.alpha.embed_rat(&Rat::new(Int::from(32), Int::one()));
        assert!(slope.checked_cmp(&half_m)? == std::cmp::Ordering::Greater, "slope below bound");
        assert!(slope.checked_cmp(&twice_m)? == std::cmp::Ordering::Less, "slope above bound");
        prev = yi;
    }

    let width = Rat::new(Int::one(), int_pow(10, 40));
    let enclosure = enclose(&m, &width);
    Ok(DerivativeBound { m, enclosure })
}

fn word_digit(b_cap: i64, phase: usize, complement: bool, i: usize) -> i64 {
    let bit = ((i.wrapping_add(phase)).count_ones() & 1) as i64;
    b_cap + if complement { 1 - bit } else { bit }
}

/// A candidate input expansion: a frozen prefix followed by an aperiodic
/// free word over `{B, B+1}`. Free letters never equal a cycle digit, so
/// the free stretches cannot extend any cycle match.
#[derive(Clone)]
struct CandidateWord {
    prefix: Vec<i64>,
    b_cap: i64,
    phase: usize,
    complement: bool,
}

impl CandidateWord {
    fn new(prefix: Vec<i64>, b_cap: i64, phase: usize, forbidden: Option<i64>) -> Self {
        let first = word_digit(b_cap, phase, false, 0);
        let complement = forbidden == Some(first);
        let w = CandidateWord { prefix, b_cap, phase, complement };
        if let Some(f) = forbidden {
            assert_ne!(w.digit(w.prefix.len()), f, "first free letter must differ");
        }
        w
    }

    fn digit(&self, i: usize) -> i64 {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            word_digit(self.b_cap, self.phase, self.complement, i - self.prefix.len())
        }
    }

    fn stream(&self) -> CfStream {
        let w = self.clone();
        CfStream::from_fn(w.digit(0), move |i| w.digit(i))
    }
}

/// One refinement round of the alternating construction.
#[derive(Debug, Clone)]
pub struct RoundRecord {
    pub round: usize,
    /// Whether the round mapped the x side forward onto the y side.
    pub forward: bool,
    /// Length of the initial agreement between the round's output and the
    /// previous expansion on the output side.
    pub agreement: usize,
    /// Digits retained on the output side afterwards (for the y side, not
    /// counting the `k` leading cycle blocks).
    pub frozen_len: usize,
    /// Free-word retries consumed by the round.
    pub retries: usize,
}

/// Result of the alternating construction: conjugate digit prefixes for the
/// two sides, the certified run length `k`, and a per-round transcript.
#[derive(Debug, Clone)]
pub struct XyConstruction {
    pub x_digits: Vec<i64>,
    /// Digits of the y side after its `k` leading cycle blocks.
    pub y_digits: Vec<i64>,
    pub k: usize,
    /// Certified enclosure of the distance from the first image to the
    /// cycle value.
    pub nu0_gap: CertifiedInterval,
    pub transcript: Vec<RoundRecord>,
}

/// Rounds needed before both sides hold at least `blocks * n` digits.
/// Every round past the first freezes at least `n*s + 1` fresh digits on
/// its side.
pub fn rounds_for_blocks(p: &ConstructionParams, blocks: usize) -> usize {
    let need = blocks * p.n;
    let gain = p.n * p.s + 1;
    2 * need.div_ceil(gain) + 1
}

fn emit_past_mismatch(
    map: LftMap,
    input: &mut CfStream,
    target: &dyn Fn(usize) -> i64,
    agree_cap: usize,
    extra: usize,
    round: usize,
) -> Result<(Vec<i64>, usize), HallsRayError> {
    let mut session = LftSession::new(map, input);
    let mut out: Vec<i64> = Vec::new();
    let mut agree: Option<usize> = None;
    loop {
        let d = match session.next_digit()? {
            LftStep::Digit(d) => d,
            LftStep::Finished => {
                return Err(HallsRayError::DegenerateChoice {
                    round,
                    detail: "image value is rational".into(),
                })
            }
        };
        let i = out.len();
        out.push(d);
        if agree.is_none() {
            if d != target(i) {
                agree = Some(i);
            } else if i + 1 > agree_cap {
                return Err(HallsRayError::DegenerateChoice {
                    round,
                    detail: format!("agreement exceeded the cap of {agree_cap} digits"),
                });
            }
        }
        if let Some(a) = agree {
            if out.len() == a + extra + 1 {
                return Ok((out, a));
            }
        }
    }
}

fn word_phase(round: usize, retries: usize) -> usize {
    (round + 1) * 1009 + retries * 8191
}

fn run_round(
    map: &LftMap,
    prefix: Vec<i64>,
    forbidden: Option<i64>,
    target: &dyn Fn(usize) -> i64,
    agree_cap: usize,
    extra: usize,
    round: usize,
    b_cap: i64,
) -> Result<(CandidateWord, Vec<i64>, usize, usize), HallsRayError> {
    let mut retries = 0usize;
    loop {
        let word = CandidateWord::new(prefix.clone(), b_cap, word_phase(round, retries), forbidden);
        let mut input = word.stream();
        match emit_past_mismatch(map.clone(), &mut input, target, agree_cap, extra, round) {
            Ok((out, agree)) => return Ok((word, out, agree, retries)),
            Err(HallsRayError::Cf(CfError::UndecidableDigit { .. })) if retries < 4 => {
                retries += 1;
            }
            Err(e) => return Err(e),
        }
    }
}

fn longest_cyclic_run(digits: &[i64], cycle: &[i64]) -> usize {
    let s = cycle.len();
    let mut best = 0usize;
    for j in 0..digits.len() {
        for o in 0..s {
            let mut t = 0usize;
            while j + t < digits.len() && digits[j + t] == cycle[(o + t) % s] {
                t += 1;
            }
            best = best.max(t);
        }
    }
    best
}

/// Builds the two conjugate digit prefixes by alternating refinement.
///
/// Round 0 maps a fresh free word forward and reads off the run length `k`
/// from the initial agreement of the image with the cycle. Each later round
/// replays the opposite side's expansion through the map (inverse on odd
/// rounds), keeps the agreement plus one frozen stretch of `n*s` digits,
/// and records the first digit it must avoid next time on that side.
pub fn construct_xy(
    eps: &Rat,
    p: &ConstructionParams,
    rounds: usize,
) -> Result<XyConstruction, HallsRayError> {
    check_eps(eps, p)?;
    if rounds == 0 {
        return Err(HallsRayError::StructureMismatch("at least one round is required".into()));
    }
    let forward = f_eps_map(eps, p)?;
    let backward = forward.inverse();
    let s = p.s;
    let ns = p.n * s;

    // Round 0: a free word through the forward map; the image must open
    // with a long run of cycle blocks whose count is the run length k.
    let period = p.period.clone();
    let cap0 = {
        // Upper estimate of the run length from the size of eps.
        let bits = eps.denom().bits() as usize + 1;
        4 * ns + 96 + bits / (2 * s)
    };
    let target0 = move |i: usize| period[i % s];
    let (word0, out0, agree0, retries0) =
        run_round(&forward, Vec::new(), None, &target0, cap0, ns, 0, p.b_cap)?;
    let k = agree0 / s;
    assert!(k > 3 * p.n, "the run length must exceed three block depths");
    let ks = k * s;

    // Certify the gap to the cycle value on both sides: at least
    // 1/(72 B^(2s(k+3))), and less than eps B^4.
    let lower = Rat::new(Int::one(), Int::from(72) * int_pow(p.b_cap, 2 * s * (k + 3)));
    let upper = eps.clone() * Rat::new(int_pow(p.b_cap, 4), Int::one());
    let mut nu_stream = CfStream::from_open_prefix(&out0)?;
    let nu_iv = nu_stream.bracket(out0.len())?;
    let alpha_iv = enclose(&p.alpha, &(lower.clone() * Rat::new(Int::one(), Int::from(1024))));
    let nu0_gap = nu_iv.sub(&alpha_iv).abs();
    assert!(nu0_gap.lo() >= &lower, "gap to the cycle value is too small");
    assert!(nu0_gap.hi() < &upper, "gap to the cycle value is too large");

    let mut x_frozen: Vec<i64> = Vec::new();
    let mut y_frozen: Vec<i64> = out0[ks..ks + ns].to_vec();
    let mut forbidden_x: Option<i64> = None;
    let mut forbidden_y: Option<i64> = Some(out0[ks + ns]);
    let mut x_known = word0;
    let mut y_known: Option<CandidateWord> = None;
    let mut transcript = vec![RoundRecord {
        round: 0,
        forward: true,
        agreement: agree0,
        frozen_len: ns,
        retries: retries0,
    }];

    for round in 1..rounds {
        if round % 2 == 1 {
            // Backward: explicit y-side input, refine the x side.
            let mut prefix = Vec::with_capacity(ks + y_frozen.len());
            for _ in 0..k {
                prefix.extend_from_slice(&p.period);
            }
            prefix.extend_from_slice(&y_frozen);
            let known = x_known.clone();
            let target = move |i: usize| known.digit(i);
            let cap = x_frozen.len() + 4 * ns + 64;
            let (word, out, agree, retries) =
                run_round(&backward, prefix, forbidden_y, &target, cap, ns, round, p.b_cap)?;
            assert!(agree >= x_frozen.len() + 1, "each round must refine past the frozen digits");
            y_known = Some(word);
            x_frozen = out[..agree + ns].to_vec();
            forbidden_x = Some(out[agree + ns]);
            transcript.push(RoundRecord {
                round,
                forward: false,
                agreement: agree,
                frozen_len: x_frozen.len(),
                retries,
            });
        } else {
            // Forward: explicit x-side input, refine the y side.
            let known = y_known.clone().expect("a backward round precedes every later forward round");
            let target = move |i: usize| known.digit(i);
            let cap = ks + y_frozen.len() + 4 * ns + 64;
            let (word, out, agree, retries) = run_round(
                &forward,
                x_frozen.clone(),
                forbidden_x,
                &target,
                cap,
                ns,
                round,
                p.b_cap,
            )?;
            assert!(agree >= ks + y_frozen.len() + 1, "each round must refine past the frozen digits");
            for (i, &d) in out[..ks].iter().enumerate() {
                assert_eq!(d, p.period[i % s], "the image must keep its leading cycle blocks");
            }
            x_known = word;
            y_frozen = out[ks..agree + ns].to_vec();
            forbidden_y = Some(out[agree + ns]);
            transcript.push(RoundRecord {
                round,
                forward: true,
                agreement: agree,
                frozen_len: y_frozen.len(),
                retries,
            });
        }
    }

    // Frozen stretches alternate with free letters, so no cycle match can
    // cross a stretch boundary on either side.
    assert!(longest_cyclic_run(&x_frozen, &p.period) <= ns, "x side holds a long cycle match");
    assert!(longest_cyclic_run(&y_frozen, &p.period) <= ns, "y side holds a long cycle match");

    Ok(XyConstruction { x_digits: x_frozen, y_digits: y_frozen, k, nu0_gap, transcript })
}

/// Assembles the witness expansion from the two sides.
///
/// Super-block `l` contributes the first `l*n` x digits reversed, one
/// separator letter `B`, `k` cycle blocks, and the first `l*n` y digits.
/// Returns the digits and the start index of every run.
pub fn build_xi(
    x: &[i64],
    y: &[i64],
    k: usize,
    p: &ConstructionParams,
    blocks: usize,
) -> Result<(Vec<i64>, Vec<usize>), HallsRayError> {
    if blocks == 0 {
        return Err(HallsRayError::StructureMismatch("at least one super-block is required".into()));
    }
    let need = blocks * p.n;
    if x.len() < need {
        return Err(HallsRayError::InsufficientDigits { side: "x", needed: need, available: x.len() });
    }
    if y.len() < need {
        return Err(HallsRayError::InsufficientDigits { side: "y", needed: need, available: y.len() });
    }
    let mut xi = Vec::new();
    let mut runs = Vec::new();
    for l in 1..=blocks {
        xi.extend(x[..l * p.n].iter().rev());
        xi.push(p.b_cap);
        runs.push(xi.len());
        for _ in 0..k {
            xi.extend_from_slice(&p.period);
        }
        xi.extend_from_slice(&y[..l * p.n]);
    }
    Ok((xi, runs))
}

/// How far a record's neighbourhood matches some rotation of the cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchCase {
    /// Combined match length at most `3s`: the ratio clears a fixed floor.
    Short,
    /// Match length in `(3s, 2ns]`: the ratio clears the target from above.
    Mixed,
    /// Match length beyond `2ns`: the record sits on a designated run and
    /// its ratio is transported from the run's own record.
    RunAligned,
}

/// One certified ratio record of the verification sweep.
#[derive(Debug, Clone)]
pub struct ProfileRecord {
    /// Digit-count index of the record: the attachment sits between digits
    /// `r` and `r+1` of the expansion.
    pub r: usize,
    /// Label of the cycle member the ratio was taken against.
    pub label: String,
    pub case: MatchCase,
    /// Backward match length at the record.
    pub m: usize,
    /// Forward match length at the record.
    pub l: usize,
    /// Whether this is a designated run record for the base member.
    pub at_run: bool,
    pub ratio: CertifiedInterval,
    /// Certified lower bound for the record: its own interval bound, or the
    /// anchor run's bound when the record transports to a run.
    pub certified_lo: Rat,
}

/// Outcome of a full witness verification.
#[derive(Debug, Clone)]
pub struct WitnessReport {
    pub epsilon: Rat,
    pub psi: Rat,
    pub k: usize,
    pub blocks: usize,
    pub runs: Vec<usize>,
    pub records: Vec<ProfileRecord>,
    /// Indices into `records` of the designated run records.
    pub run_records: Vec<usize>,
    /// Smallest certified lower bound among records away from the runs;
    /// run-aligned records contribute their anchor run's bound.
    pub min_other_lo: Rat,
    /// Record counts per match case (short, mixed, run-aligned).
    pub case_counts: [usize; 3],
    /// Last digit-count index the sweep evaluated.
    pub swept_to: usize,
}

fn cyclic_match_at(digits: &[i64], start: usize, cycle: &[i64]) -> usize {
    let s = cycle.len();
    let mut t = 0usize;
    while start + t < digits.len() && digits[start + t] == cycle[t % s] {
        t += 1;
    }
    t
}

fn window_is_cyclic(digits: &[i64], start: usize, span: usize, cycle: &[i64]) -> bool {
    let s = cycle.len();
    (0..s).any(|o| (0..span).all(|t| digits[start + t] == cycle[(o + t) % s]))
}

fn match_lengths(digits: &[i64], r: usize, cycle: &[i64]) -> (usize, usize) {
    let s = cycle.len();
    let mut l = 0usize;
    while r + l < digits.len() && digits[r + l] == cycle[l % s] {
        l += 1;
    }
    let mut m = 0usize;
    while m < r && digits[r - 1 - m] == cycle[(s - 1 - (m % s)) % s] {
        m += 1;
    }
    (m, l)
}

/// Verifies an assembled witness record by record.
///
/// Structural checks first: the run starts must be exactly the claimed
/// ones, each run must follow a separator letter and consist of exactly
/// `k` cycle blocks, and no window of `2ns + 1` digits outside the runs
/// may match the cycle. Then every attachment index up to `depth` is
/// checked against every distinct cycle member: run records must enclose
/// the target ratio within a relative `10^-3`, short matches must clear a
/// fixed floor, mixed matches must clear the target, and run-aligned
/// records must transport back to the run they match.
pub fn verify_witness(
    xi: &[i64],
    runs: &[usize],
    period: &[i64],
    eps: &Rat,
    depth: usize,
) -> Result<WitnessReport, HallsRayError> {
    let p = params(period)?;
    check_eps(eps, &p)?;
    let s = p.s;
    let ns = p.n * s;

    if runs.len() < 2 {
        return Err(HallsRayError::StructureMismatch(
            "need at least two run blocks to certify".into(),
        ));
    }
    if runs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(HallsRayError::StructureMismatch("run starts must increase".into()));
    }
    CfStream::from_open_prefix(xi)?;

    // Recover the run length from the first run, then hold every run to it.
    let k = cyclic_match_at(xi, runs[0], &p.period) / s;
    if k <= 3 * p.n {
        return Err(HallsRayError::StructureMismatch(format!(
            "run length {k} does not exceed three block depths ({})",
            3 * p.n
        )));
    }
    let ks = k * s;
    for &i in runs {
        if i == 0 || xi[i - 1] != p.b_cap {
            return Err(HallsRayError::StructureMismatch(format!(
                "run at {i} must follow the separator letter {}",
                p.b_cap
            )));
        }
        if i + ks + s > xi.len() {
            return Err(HallsRayError::StructureMismatch(format!(
                "expansion ends inside or just after the run at {i}"
            )));
        }
        let t = cyclic_match_at(xi, i, &p.period);
        if !(ks..ks + s).contains(&t) {
            return Err(HallsRayError::StructureMismatch(format!(
                "run at {i} matches {t} digits, expected at least {ks} and fewer than {}",
                ks + s
            )));
        }
    }
    for j in 0..=xi.len().saturating_sub(ks) {
        let exact = (0..ks).all(|t| xi[j + t] == p.period[t % s]);
        if exact && runs.binary_search(&j).is_err() {
            // A full-length block run may only appear where claimed.
            let inside = runs.iter().any(|&i| i <= j && j + ks <= i + ks);
            if !inside {
                return Err(HallsRayError::StructureMismatch(format!(
                    "unexpected full run at {j}"
                )));
            }
        }
    }
    let span = 2 * ns + 1;
    for j in 0..=xi.len().saturating_sub(span) {
        if window_is_cyclic(xi, j, span, &p.period) {
            let inside = runs.iter().any(|&i| i <= j && j + span <= i + ks);
            if !inside {
                return Err(HallsRayError::StructureMismatch(format!(
                    "cycle window of {span} digits at {j} lies outside every run"
                )));
            }
        }
    }

    // Sweep bound: leave enough forward digits that no record can be
    // misread as a short match purely by running out of expansion.
    let r_max = depth.min(xi.len().saturating_sub(3 * s + 1));
    if r_max < runs[1] {
        return Err(HallsRayError::StructureMismatch(
            "depth must cover at least the second run record".into(),
        ));
    }

    let phi = phi_set(&p.period)?;
    let members: Vec<_> = phi.distinct().collect();
    let mut stream = CfStream::from_open_prefix(xi)?;

    let tol = Rat::new(Int::one(), Int::from(1000));
    let lo_gate = eps.clone() * (Rat::one() - tol.clone());
    let hi_gate = eps.clone() * (Rat::one() + tol);
    let short_floor = Rat::new(Int::one(), Int::from(2 * 5184) * int_pow(p.b_cap, 12 * s + 8));

    let mut records: Vec<ProfileRecord> = Vec::new();
    let mut run_records: Vec<usize> = Vec::new();
    let mut run_ratios: BTreeMap<usize, CertifiedInterval> = BTreeMap::new();
    let mut case_counts = [0usize; 3];

    for r in 2..=r_max {
        for mem in &members {
            let (m, l) = match_lengths(xi, r, &mem.cycle);
            let case = if m + l > 2 * ns {
                MatchCase::RunAligned
            } else if m + l > 3 * s {
                MatchCase::Mixed
            } else {
                MatchCase::Short
            };
            let at_run = mem.index == 1 && !mem.reversed && runs.binary_search(&r).is_ok();
            let tail_depth = l + 2 * ns + 16;
            let (ratio, _, _) = ratio_for_value(&mut stream, r - 1, &mem.value, tail_depth, None)?;
            let mut certified_lo = ratio.lo().clone();

            if at_run {
                if ratio.lo() < &lo_gate || ratio.hi() > &hi_gate {
                    return Err(HallsRayError::StructureMismatch(format!(
                        "run record at {r} is not within the relative tolerance of the target: [{}, {}]",
                        ratio.lo(),
                        ratio.hi()
                    )));
                }
                run_ratios.insert(r, ratio.clone());
                run_records.push(records.len());
            } else {
                match case {
                    MatchCase::Short => {
                        if ratio.lo() < &short_floor {
                            return Err(HallsRayError::StructureMismatch(format!(
                                "short record at {r} ({}) falls below the fixed floor",
                                mem.label
                            )));
                        }
                    }
                    MatchCase::Mixed => {
                        if ratio.lo() < &lo_gate {
                            return Err(HallsRayError::StructureMismatch(format!(
                                "mixed record at {r} ({}) falls below the target",
                                mem.label
                            )));
                        }
                    }
                    MatchCase::RunAligned => {
                        let anchor = r - m;
                        if runs.binary_search(&anchor).is_err() {
                            return Err(HallsRayError::StructureMismatch(format!(
                                "run-aligned record at {r} ({}) does not anchor on a run",
                                mem.label
                            )));
                        }
                        let base = run_ratios.get(&anchor).ok_or_else(|| {
                            HallsRayError::StructureMismatch(format!(
                                "run-aligned record at {r} anchors on an unswept run at {anchor}"
                            ))
                        })?;
                        if !ratio.intersects(base) {
                            return Err(HallsRayError::StructureMismatch(format!(
                                "run-aligned record at {r} ({}) does not transport to the run at {anchor}",
                                mem.label
                            )));
                        }
                        // The ratio here equals the run's ratio exactly, so
                        // the run record's bound is the certified one.
                        certified_lo = base.lo().clone();
                    }
                }
            }

            case_counts[case as usize] += 1;
            records.push(ProfileRecord {
                r,
                label: mem.label.clone(),
                case,
                m,
                l,
                at_run,
                ratio,
                certified_lo,
            });
        }
    }

    let swept_runs = runs.iter().filter(|&&i| i <= r_max).count();
    assert_eq!(run_ratios.len(), swept_runs, "every swept run must yield a run record");

    let min_other_lo = records
        .iter()
        .filter(|rec| !rec.at_run)
        .map(|rec| rec.certified_lo.clone())
        .min()
        .expect("the sweep covers records away from the runs");

    Ok(WitnessReport {
        epsilon: eps.clone(),
        psi: p.psi.clone(),
        k,
        blocks: runs.len(),
        runs: runs.to_vec(),
        records,
        run_records,
        min_other_lo,
        case_counts,
        swept_to: r_max,
    })
}
