//! Continued fractions over exact arithmetic.
//!
//! Digit conventions: a continued fraction `[a_0; a_1, a_2, ...]` has an
//! arbitrary integer `a_0` and digits `a_i >= 1` for `i >= 1`. Convergents
//! `p_n / q_n` follow the standard recurrence with seeds `p_{-2} = 0`,
//! `p_{-1} = 1`, `q_{-2} = 1`, `q_{-1} = 0`, so successive convergents
//! alternate around the value and `p_n q_{n-1} - p_{n-1} q_n = (-1)^{n-1}`.
//!
//! Submodules: [`periodic`] for eventually periodic expansions and their
//! quadratic values, [`stream`] for lazily forced digit streams with
//! certified value brackets, [`lft`] for exact digit-wise images under
//! fractional linear maps, and [`mirror`] for two-sided mirror ratios.

pub mod lft;
pub mod mirror;
pub mod periodic;
pub mod stream;

pub use lft::{lft_digits, LftMap, LftOutput, LftSession, LftStep};
pub use mirror::{mirror_ratio, mirror_ratio_exact, ratio_from_parts, PeriodicWord, TwoSidedWord, WindowWord};
pub use periodic::{format_finite, parse_cf, surd_to_periodic, ParsedCf, PeriodicCf};
pub use stream::{CfStream, TailKind};

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::exact::SurdError;
use crate::interval::{CertifiedInterval, IntervalError};
use crate::{Int, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CfError {
    #[error("cannot parse continued fraction: {0}")]
    Parse(String),
    #[error("digit {digit} at index {index} is invalid: digits after the first must be >= 1")]
    InvalidDigit { index: usize, digit: i64 },
    #[error("empty digit sequence")]
    Empty,
    #[error("period must be nonempty")]
    EmptyPeriod,
    #[error("the value is rational, its expansion is finite and not periodic")]
    RationalInput,
    #[error("a digit exceeds the i64 range")]
    DigitOverflow,
    #[error("expansion did not become periodic within {cap} steps")]
    ExpansionTooLong { cap: usize },
    #[error("need {needed} digits but only {available} are available")]
    InsufficientDigits { needed: usize, available: usize },
    #[error("cannot certify the next output digit from an open-ended input ({emitted} digits emitted)")]
    UndecidableDigit { emitted: usize },
    #[error("fractional linear map is singular")]
    SingularMap,
    #[error("the input value is a pole of the map")]
    MapPole,
    #[error("surd arithmetic: {0}")]
    Surd(#[from] SurdError),
    #[error("interval arithmetic: {0}")]
    Interval(#[from] IntervalError),
}

/// Convergent recurrence state. After pushing `a_0, ..., a_n` the current
/// pair is `(p_n, q_n)` and the previous pair `(p_{n-1}, q_{n-1})`.
#[derive(Debug, Clone)]
pub struct ConvergentState {
    p_prev: Int,
    q_prev: Int,
    p: Int,
    q: Int,
    len: usize,
}

impl ConvergentState {
    pub fn new() -> Self {
        ConvergentState {
            p_prev: Int::from(0),
            q_prev: Int::from(1),
            p: Int::from(1),
            q: Int::from(0),
            len: 0,
        }
    }

    pub fn push(&mut self, digit: i64) {
        let a = Int::from(digit);
        let p_next = &a * &self.p + &self.p_prev;
        let q_next = &a * &self.q + &self.q_prev;
        self.p_prev = std::mem::replace(&mut self.p, p_next);
        self.q_prev = std::mem::replace(&mut self.q, q_next);
        self.len += 1;
    }

    /// Number of digits pushed.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn numer(&self) -> &Int {
        &self.p
    }

    pub fn denom(&self) -> &Int {
        &self.q
    }

    pub fn numer_prev(&self) -> &Int {
        &self.p_prev
    }

    pub fn denom_prev(&self) -> &Int {
        &self.q_prev
    }

    /// Current convergent `p_n / q_n`; `None` before the first digit.
    pub fn convergent(&self) -> Option<Rat> {
        if self.len == 0 {
            None
        } else {
            Some(Rat::new(self.p.clone(), self.q.clone()))
        }
    }

    /// Previous convergent `p_{n-1} / q_{n-1}`; needs two digits.
    pub fn convergent_prev(&self) -> Option<Rat> {
        if self.len < 2 {
            None
        } else {
            Some(Rat::new(self.p_prev.clone(), self.q_prev.clone()))
        }
    }

    /// `p_n q_{n-1} - p_{n-1} q_n`, always `(-1)^{n-1}`.
    pub fn determinant(&self) -> Int {
        &self.p * &self.q_prev - &self.p_prev * &self.q
    }
}

impl Default for ConvergentState {
    fn default() -> Self {
        Self::new()
    }
}

/// Validates digit positivity: `digits[0]` is unrestricted, later entries
/// must be `>= 1`.
pub(crate) fn validate_digits(digits: &[i64]) -> Result<(), CfError> {
    for (i, &d) in digits.iter().enumerate().skip(1) {
        if d < 1 {
            return Err(CfError::InvalidDigit { index: i, digit: d });
        }
    }
    Ok(())
}

/// All convergents `p_0/q_0, ..., p_n/q_n` of a digit prefix.
pub fn convergents(digits: &[i64]) -> Result<Vec<Rat>, CfError> {
    validate_digits(digits)?;
    let mut st = ConvergentState::new();
    let mut out = Vec::with_capacity(digits.len());
    for &d in digits {
        st.push(d);
        out.push(st.convergent().expect("pushed at least one digit"));
    }
    Ok(out)
}

/// Exact value of a finite continued fraction.
pub fn eval_finite(digits: &[i64]) -> Result<Rat, CfError> {
    if digits.is_empty() {
        return Err(CfError::Empty);
    }
    validate_digits(digits)?;
    let mut st = ConvergentState::new();
    for &d in digits {
        st.push(d);
    }
    Ok(st.convergent().expect("nonempty"))
}

/// Canonical finite expansion of a rational: digits after the first are
/// `>= 1` and the last digit is never 1 unless the expansion is just
/// `[a_0]`.
pub fn rational_to_cf(r: &Rat) -> Result<Vec<i64>, CfError> {
    let mut digits = Vec::new();
    let mut num = r.numer().clone();
    let mut den = r.denom().clone();
    while !den.is_zero() {
        let q = num.div_floor(&den);
        digits.push(q.to_i64().ok_or(CfError::DigitOverflow)?);
        let rem = &num - &q * &den;
        num = std::mem::replace(&mut den, rem);
    }
    if digits.len() > 1 && digits[digits.len() - 1] == 1 {
        digits.pop();
        let last = digits.len() - 1;
        digits[last] += 1;
    }
    Ok(digits)
}

/// Value of the reversed digit block `[a_r; a_{r-1}, ..., a_1]` for a digit
/// sequence starting at `a_0`. Requires `1 <= r < digits.len()`.
pub fn reversed_tail(digits: &[i64], r: usize) -> Result<Rat, CfError> {
    if r < 1 || r >= digits.len() {
        return Err(CfError::InsufficientDigits {
            needed: r + 1,
            available: digits.len(),
        });
    }
    let rev: Vec<i64> = digits[1..=r].iter().rev().copied().collect();
    eval_finite(&rev)
}

/// Certified bracket for the value of a digit prefix: a point for an exact
/// finite expansion, otherwise the hull of the last two convergents (or
/// `[a_0, a_0 + 1]` when only one digit is known).
pub(crate) fn convergent_bracket(
    digits: &[i64],
    exact_end: bool,
) -> Result<CertifiedInterval, CfError> {
    if digits.is_empty() {
        return Err(CfError::InsufficientDigits {
            needed: 1,
            available: 0,
        });
    }
    validate_digits(digits)?;
    if exact_end {
        return Ok(CertifiedInterval::point(eval_finite(digits)?));
    }
    if digits.len() == 1 {
        let a = Rat::from(Int::from(digits[0]));
        let b = &a + Rat::from(Int::from(1));
        return Ok(CertifiedInterval::new(a, b).expect("ordered"));
    }
    let mut st = ConvergentState::new();
    for &d in digits {
        st.push(d);
    }
    let last = st.convergent().expect("nonempty");
    let prev = st.convergent_prev().expect("len >= 2");
    Ok(CertifiedInterval::from_unordered(prev, last))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(Int::from(n), Int::from(d))
    }

    #[test]
    fn convergents_of_golden_prefix() {
        // [1;1,1,1,1] -> 1, 2, 3/2, 5/3, 8/5
        let cs = convergents(&[1, 1, 1, 1, 1]).unwrap();
        let expected = [rat(1, 1), rat(2, 1), rat(3, 2), rat(5, 3), rat(8, 5)];
        assert_eq!(cs, expected);
    }

    #[test]
    fn eval_finite_oracle_values() {
        // Nested evaluation oracle: [9;9,9] = 9 + 1/(9 + 1/9) = 747/82.
        assert_eq!(eval_finite(&[9, 9, 9]).unwrap(), rat(747, 82));
        assert_eq!(eval_finite(&[1, 2, 3]).unwrap(), rat(10, 7));
        assert_eq!(eval_finite(&[-3, 2]).unwrap(), rat(-5, 2));
        assert_eq!(eval_finite(&[4]).unwrap(), rat(4, 1));
        assert_eq!(eval_finite(&[]), Err(CfError::Empty));
        assert_eq!(
            eval_finite(&[1, 0, 3]),
            Err(CfError::InvalidDigit { index: 1, digit: 0 })
        );
    }

    #[test]
    fn determinant_alternates() {
        let mut st = ConvergentState::new();
        for (i, &d) in [3i64, 7, 15, 1, 292].iter().enumerate() {
            st.push(d);
            let expect = if i % 2 == 0 { -1 } else { 1 };
            assert_eq!(st.determinant(), Int::from(expect), "at index {i}");
        }
    }

    #[test]
    fn denominator_mirror_identity() {
        // q_r / q_{r-1} = [a_r; a_{r-1}, ..., a_1]
        let digits = [2i64, 1, 4, 1, 6, 2, 3];
        let mut st = ConvergentState::new();
        for &d in &digits {
            st.push(d);
        }
        let lhs = Rat::new(st.denom().clone(), st.denom_prev().clone());
        let rhs = reversed_tail(&digits, digits.len() - 1).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn rational_to_cf_round_trips_canonically() {
        let cases = [rat(10, 7), rat(-5, 2), rat(747, 82), rat(3, 1), rat(0, 1), rat(-1, 3)];
        for r in cases {
            let digits = rational_to_cf(&r).unwrap();
            assert_eq!(eval_finite(&digits).unwrap(), r, "round trip {r}");
            if digits.len() > 1 {
                assert!(
                    digits[digits.len() - 1] >= 2,
                    "canonical form must not end in 1: {digits:?}"
                );
            }
        }
        // 3/2 = [1;2], not [1;1,1]
        assert_eq!(rational_to_cf(&rat(3, 2)).unwrap(), vec![1, 2]);
    }

    #[test]
    fn reversed_tail_drops_leading_digit() {
        // [_, 2, 3] with r = 2: [3; 2] = 7/2 regardless of a_0.
        assert_eq!(reversed_tail(&[5, 2, 3], 2).unwrap(), rat(7, 2));
        assert_eq!(reversed_tail(&[-1, 2, 3], 2).unwrap(), rat(7, 2));
        assert_eq!(reversed_tail(&[5, 2, 3], 1).unwrap(), rat(2, 1));
        assert!(reversed_tail(&[5, 2, 3], 3).is_err());
        assert!(reversed_tail(&[5], 1).is_err());
    }

    #[test]
    fn brackets_contain_the_value() {
        // Open prefix of the golden ratio.
        let b = convergent_bracket(&[1, 1, 1, 1, 1], false).unwrap();
        assert_eq!(b.lo(), &rat(8, 5));
        assert_eq!(b.hi(), &rat(5, 3));
        // Exact end gives a point.
        let p = convergent_bracket(&[1, 2, 3], true).unwrap();
        assert!(p.is_point());
        assert_eq!(p.lo(), &rat(10, 7));
        // Single open digit.
        let s = convergent_bracket(&[7], false).unwrap();
        assert_eq!((s.lo(), s.hi()), (&rat(7, 1), &rat(8, 1)));
    }
}
