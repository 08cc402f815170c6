//! Closed rational intervals used as computation certificates.
//!
//! Every approximate quantity this crate reports is wrapped in a
//! [`CertifiedInterval`]: a pair of exact rationals `[lo, hi]` that provably
//! brackets the exact value. Interval arithmetic here is outward in the
//! trivial sense that all endpoint arithmetic is exact rational arithmetic,
//! so no rounding step can lose containment.
//!
//! Irrational surds enter the interval world through [`enclose`], which
//! brackets `sqrt(d)` between consecutive dyadic rationals `k/2^m` and
//! `(k+1)/2^m` with `k = isqrt(d * 4^m)`, for `m` large enough to meet a
//! requested width.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exact::QuadraticSurd;
use crate::{Int, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("interval endpoints out of order: lo {0} > hi {1}")]
    EmptyInterval(String, String),
    #[error("division by an interval containing zero")]
    DivisionThroughZero,
}

/// A closed interval with exact rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifiedInterval {
    lo: Rat,
    hi: Rat,
}

impl CertifiedInterval {
    pub fn new(lo: Rat, hi: Rat) -> Result<Self, IntervalError> {
        if lo > hi {
            return Err(IntervalError::EmptyInterval(
                lo.to_string(),
                hi.to_string(),
            ));
        }
        Ok(CertifiedInterval { lo, hi })
    }

    pub fn point(v: Rat) -> Self {
        CertifiedInterval {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn from_unordered(x: Rat, y: Rat) -> Self {
        if x <= y {
            CertifiedInterval { lo: x, hi: y }
        } else {
            CertifiedInterval { lo: y, hi: x }
        }
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rat {
        (&self.hi + &self.lo) / Rat::from(Int::from(2))
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, v: &Rat) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_interval(&self, other: &Self) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let lo = if self.lo >= other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi <= other.hi { &self.hi } else { &other.hi };
        if lo <= hi {
            Some(CertifiedInterval {
                lo: lo.clone(),
                hi: hi.clone(),
            })
        } else {
            None
        }
    }

    /// Smallest interval containing both operands.
    pub fn hull(&self, other: &Self) -> Self {
        CertifiedInterval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        CertifiedInterval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        CertifiedInterval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn neg(&self) -> Self {
        CertifiedInterval {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let c1 = &self.lo * &other.lo;
        let c2 = &self.lo * &other.hi;
        let c3 = &self.hi * &other.lo;
        let c4 = &self.hi * &other.hi;
        let lo = c1.clone().min(c2.clone()).min(c3.clone()).min(c4.clone());
        let hi = c1.max(c2).max(c3).max(c4);
        CertifiedInterval { lo, hi }
    }

    /// Reciprocal; the interval must not contain zero.
    pub fn recip(&self) -> Result<Self, IntervalError> {
        if self.lo.is_positive() || self.hi.is_negative() {
            Ok(CertifiedInterval {
                lo: self.hi.recip(),
                hi: self.lo.recip(),
            })
        } else {
            Err(IntervalError::DivisionThroughZero)
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self, IntervalError> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            CertifiedInterval {
                lo: Rat::zero(),
                hi: (-self.lo.clone()).max(self.hi.clone()),
            }
        }
    }

    pub fn shift(&self, by: &Rat) -> Self {
        CertifiedInterval {
            lo: &self.lo + by,
            hi: &self.hi + by,
        }
    }

    pub fn scale(&self, by: &Rat) -> Self {
        let a = &self.lo * by;
        let b = &self.hi * by;
        Self::from_unordered(a, b)
    }

    /// Renders `[lo, hi]` with `digits` decimal places, rounding outward so
    /// the printed interval still contains the exact one.
    pub fn display_decimal(&self, digits: usize) -> String {
        format!(
            "[{}, {}]",
            decimal_str(&self.lo, digits, false),
            decimal_str(&self.hi, digits, true)
        )
    }
}

impl CertifiedInterval {
    /// Outward-rounds both endpoints onto the dyadic grid of spacing at most
    /// `width / 2`. The result contains `self` and is at most `width` wider;
    /// its endpoints have denominators bounded by the grid scale. Exact
    /// endpoints of deep convergents carry thousands of bits, and snapping
    /// them outward costs far less than dragging them through arithmetic.
    pub fn coarsen(&self, width: &Rat) -> Self {
        assert!(width.is_positive(), "coarsen width must be positive");
        let t = Rat::from(Int::from(2)) / width;
        let m = t.ceil().to_integer().max(Int::one()).bits();
        let scale = Rat::from(Int::one() << (m as usize));
        let lo = (&self.lo * &scale).floor() / &scale;
        let hi = (&self.hi * &scale).ceil() / &scale;
        CertifiedInterval { lo, hi }
    }
}

impl fmt::Display for CertifiedInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Brackets a surd in a rational interval no wider than `width`.
///
/// Rational surds become point intervals. `width` must be positive.
pub fn enclose(x: &QuadraticSurd<Int>, width: &Rat) -> CertifiedInterval {
    assert!(width.is_positive(), "enclosure width must be positive");
    if let Some(r) = x.to_rational() {
        return CertifiedInterval::point(r);
    }
    let (a, b, c, d) = (x.coeff_a(), x.coeff_b(), x.coeff_c(), x.disc());
    // Need |b| / (c * 2^m) <= width, i.e. 2^m >= |b| / (c * width).
    let t = Rat::new(b.abs(), c.clone()) / width;
    let m = t.ceil().to_integer().max(Int::one()).bits();
    let scale = Int::one() << (m as usize);
    let arg = d * (&scale * &scale);
    // Machine-word square roots when the scaled radicand fits.
    let k = match arg.to_u128() {
        Some(small) => Int::from(small.isqrt()),
        None => arg.sqrt(),
    };
    let root_lo = Rat::new(k.clone(), scale.clone());
    let root_hi = Rat::new(k + Int::one(), scale);
    let av = Rat::from(a.clone());
    let bv = Rat::from(b.clone());
    let cv = Rat::from(c.clone());
    let e1 = (&av + &bv * root_lo) / &cv;
    let e2 = (&av + &bv * root_hi) / &cv;
    CertifiedInterval::from_unordered(e1, e2)
}

/// Exact comparison of two surds that may live in distinct quadratic fields.
///
/// Same-field pairs (and rationals) compare exactly; otherwise the values
/// are provably unequal and interval refinement separates them.
pub fn compare_via_intervals(x: &QuadraticSurd<Int>, y: &QuadraticSurd<Int>) -> Ordering {
    if x.same_field(y) {
        return x.checked_cmp(y).expect("same field");
    }
    let mut width = Rat::new(Int::one(), Int::from(16));
    for _ in 0..1024 {
        let ix = enclose(x, &width);
        let iy = enclose(y, &width);
        if ix.hi < iy.lo {
            return Ordering::Less;
        }
        if iy.hi < ix.lo {
            return Ordering::Greater;
        }
        width = width / Rat::from(Int::from(1 << 16));
    }
    unreachable!("distinct quadratic fields share no irrational values")
}

/// Shrinks a working precision until `f` produces an interval of width at
/// most `target`. `f` may return `None` to ask for more precision (e.g. when
/// an intermediate enclosure is not yet sign-definite). Returns `None` only
/// if the cap on refinement rounds is exhausted, which for the closed-form
/// quantities in this crate would indicate a logic error rather than a hard
/// input.
pub fn refine_to(
    target: &Rat,
    mut f: impl FnMut(&Rat) -> Option<CertifiedInterval>,
) -> Option<CertifiedInterval> {
    assert!(target.is_positive(), "target width must be positive");
    let mut w = target / Rat::from(Int::from(8));
    for _ in 0..64 {
        if let Some(iv) = f(&w) {
            if iv.width() <= *target {
                return Some(iv);
            }
        }
        w = w / Rat::from(Int::from(1024));
    }
    None
}

/// Directed decimal rendering: the returned string, read back as a decimal,
/// is `>= r` when `round_up` and `<= r` otherwise. Always prints exactly
/// `digits` fractional digits.
pub fn decimal_str(r: &Rat, digits: usize, round_up: bool) -> String {
    let scale = num_traits::pow(Rat::from(Int::from(10)), digits);
    let scaled = r * &scale;
    let q = if round_up {
        scaled.ceil().to_integer()
    } else {
        scaled.floor().to_integer()
    };
    let neg = q.is_negative();
    let body = q.abs().to_string();
    let body = if body.len() <= digits {
        format!("{}{}", "0".repeat(digits + 1 - body.len()), body)
    } else {
        body
    };
    let (ip, fp) = body.split_at(body.len() - digits);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{ip}")
    } else {
        format!("{sign}{ip}.{fp}")
    }
}

/// Parses a decimal or scientific literal (`"0.125"`, `"1e-30"`, `"2.5e-8"`)
/// or a fraction (`"3/1000"`) into an exact rational.
pub fn parse_decimal(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let num: Int = n.trim().parse().ok()?;
        let den: Int = d.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(Rat::new(num, den));
    }
    let (mant, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (mant, neg) = match mant.strip_prefix('-') {
        Some(rest) => (rest, true),
        None => (mant.strip_prefix('+').unwrap_or(mant), false),
    };
    let (int_part, frac_part) = match mant.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mant, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit())
        || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let num: Int = if digits.is_empty() {
        Int::zero()
    } else {
        digits.parse().ok()?
    };
    let mut r = Rat::from(num);
    let shift = exp - frac_part.len() as i32;
    let ten = Rat::from(Int::from(10));
    if shift >= 0 {
        r = r * num_traits::pow(ten, shift as usize);
    } else {
        r = r / num_traits::pow(ten, (-shift) as usize);
    }
    if neg {
        r = -r;
    }
    Some(r)
}

/// Convenience: `10^-k` as an exact rational.
pub fn pow10_neg(k: usize) -> Rat {
    Rat::new(Int::one(), num_traits::pow(Int::from(10), k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Surd;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(Int::from(n), Int::from(d))
    }

    fn iv(lo: Rat, hi: Rat) -> CertifiedInterval {
        CertifiedInterval::new(lo, hi).unwrap()
    }

    fn sqrt2() -> Surd {
        Surd::new(Int::from(0), Int::from(1), Int::from(1), Int::from(2)).unwrap()
    }

    fn phi() -> Surd {
        Surd::new(Int::from(1), Int::from(1), Int::from(2), Int::from(5)).unwrap()
    }

    #[test]
    fn construction_and_ops() {
        assert!(CertifiedInterval::new(rat(1, 1), rat(0, 1)).is_err());
        let a = iv(rat(1, 2), rat(3, 4));
        let b = iv(rat(-2, 1), rat(1, 3));
        assert_eq!(a.add(&b), iv(rat(-3, 2), rat(13, 12)));
        assert_eq!(a.sub(&b), iv(rat(1, 6), rat(11, 4)));
        let m = a.mul(&b);
        assert_eq!(m, iv(rat(-3, 2), rat(1, 4)));
        assert!(m.contains(&rat(0, 1)));
        assert_eq!(b.abs(), iv(rat(0, 1), rat(2, 1)));
        assert!(b.recip().is_err());
        assert_eq!(a.recip().unwrap(), iv(rat(4, 3), rat(2, 1)));
    }

    #[test]
    fn division_through_zero_is_rejected() {
        let a = iv(rat(1, 1), rat(2, 1));
        let z = iv(rat(-1, 1), rat(1, 1));
        assert_eq!(a.div(&z), Err(IntervalError::DivisionThroughZero));
        assert_eq!(a.div(&iv(rat(1, 2), rat(1, 1))).unwrap(), iv(rat(1, 1), rat(4, 1)));
    }

    #[test]
    fn set_operations() {
        let a = iv(rat(0, 1), rat(2, 1));
        let b = iv(rat(1, 1), rat(3, 1));
        let c = iv(rat(5, 2), rat(3, 1));
        assert!(a.intersects(&b));
        assert!(!a.intersects(&c));
        assert_eq!(a.intersect(&b).unwrap(), iv(rat(1, 1), rat(2, 1)));
        assert_eq!(a.hull(&c), iv(rat(0, 1), rat(3, 1)));
        assert!(a.hull(&c).contains_interval(&b));
    }

    #[test]
    fn enclose_meets_width_and_brackets_known_digits() {
        let w = pow10_neg(30);
        // sqrt(2) = 1.41421356237309504880168872420969...; the interval must
        // meet the 30-digit truncation bracket from either side.
        let iv2 = enclose(&sqrt2(), &w);
        assert!(iv2.width() <= w);
        let t_lo = parse_decimal("1.414213562373095048801688724209").unwrap();
        let t_hi = parse_decimal("1.414213562373095048801688724210").unwrap();
        assert!(iv2.hi() >= &t_lo && iv2.lo() <= &t_hi);

        // phi = 1.61803398874989484820458683436563...
        let ivp = enclose(&phi(), &w);
        assert!(ivp.width() <= w);
        let p_lo = parse_decimal("1.618033988749894848204586834365").unwrap();
        let p_hi = parse_decimal("1.618033988749894848204586834366").unwrap();
        assert!(ivp.hi() >= &p_lo && ivp.lo() <= &p_hi);

        let point = enclose(&phi().embed_rat(&rat(7, 3)), &w);
        assert!(point.is_point());
        assert_eq!(point.lo(), &rat(7, 3));
    }

    #[test]
    fn enclose_handles_negative_coefficients() {
        let w = pow10_neg(20);
        let x = Surd::new(Int::from(1), Int::from(-3), Int::from(7), Int::from(2)).unwrap();
        let ivx = enclose(&x, &w);
        assert!(ivx.width() <= w);
        // (1 - 3 sqrt(2))/7 = -0.463234383874183592...
        let v_lo = parse_decimal("-0.46323438387419").unwrap();
        let v_hi = parse_decimal("-0.46323438387418").unwrap();
        assert!(ivx.hi() >= &v_lo && ivx.lo() <= &v_hi);
    }

    #[test]
    fn cross_field_comparison() {
        assert_eq!(compare_via_intervals(&sqrt2(), &phi()), Ordering::Less);
        assert_eq!(compare_via_intervals(&phi(), &sqrt2()), Ordering::Greater);
        assert_eq!(compare_via_intervals(&phi(), &phi()), Ordering::Equal);
        let r = phi().embed_rat(&parse_decimal("1.4142135623").unwrap());
        assert_eq!(compare_via_intervals(&sqrt2(), &r), Ordering::Greater);
    }

    #[test]
    fn refine_to_tightens() {
        let target = pow10_neg(25);
        let got = refine_to(&target, |w| {
            let i2 = enclose(&sqrt2(), w);
            let ip = enclose(&phi(), w);
            Some(i2.mul(&ip))
        })
        .unwrap();
        assert!(got.width() <= target);
        // sqrt(2) * phi = (sqrt(2) + sqrt(10))/2 = 2.288245611270737190400...
        let v_lo = parse_decimal("2.288245611270737190").unwrap();
        let v_hi = parse_decimal("2.288245611270737191").unwrap();
        assert!(got.hi() >= &v_lo && got.lo() <= &v_hi);
    }

    #[test]
    fn directed_decimal_strings() {
        let third = rat(1, 3);
        assert_eq!(decimal_str(&third, 5, false), "0.33333");
        assert_eq!(decimal_str(&third, 5, true), "0.33334");
        assert_eq!(decimal_str(&-third.clone(), 5, false), "-0.33334");
        assert_eq!(decimal_str(&-third, 5, true), "-0.33333");
        assert_eq!(decimal_str(&rat(5, 4), 2, false), "1.25");
        assert_eq!(decimal_str(&rat(5, 4), 2, true), "1.25");
        assert_eq!(decimal_str(&rat(-7, 2), 0, false), "-4");
        assert_eq!(decimal_str(&rat(2, 1), 3, true), "2.000");
        assert_eq!(decimal_str(&rat(1, 1000), 2, true), "0.01");
        assert_eq!(decimal_str(&rat(1, 1000), 2, false), "0.00");
    }

    #[test]
    fn parse_decimal_forms() {
        assert_eq!(parse_decimal("0.125"), Some(rat(1, 8)));
        assert_eq!(parse_decimal("1e-3"), Some(rat(1, 1000)));
        assert_eq!(parse_decimal("2.5e-1"), Some(rat(1, 4)));
        assert_eq!(parse_decimal("-0.5"), Some(rat(-1, 2)));
        assert_eq!(parse_decimal("3/1000"), Some(rat(3, 1000)));
        assert_eq!(parse_decimal("1E2"), Some(rat(100, 1)));
        assert_eq!(parse_decimal("17"), Some(rat(17, 1)));
        assert_eq!(parse_decimal(""), None);
        assert_eq!(parse_decimal("abc"), None);
        assert_eq!(parse_decimal("1/0"), None);
        assert_eq!(parse_decimal("1.2.3"), None);
    }

    #[test]
    fn interval_decimal_display_rounds_outward() {
        let i = iv(rat(1, 3), rat(2, 3));
        assert_eq!(i.display_decimal(4), "[0.3333, 0.6667]");
    }
}
