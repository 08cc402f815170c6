//! Digit streams: finite, open-ended, or generated continued fractions.
//!
//! A [`CfStream`] hands out digits `a_0, a_1, ...` on demand. Three tail
//! behaviours exist: `Exact` (a finite expansion, the value is exactly the
//! finite fraction), `Open` (only a prefix is known; the value is any
//! continuation, so queries beyond the prefix return `None`), and an
//! infinite generator (every digit is eventually available). Brackets
//! returned by [`CfStream::bracket`] are closed intervals certified to
//! contain every value consistent with the digits seen.

use super::{convergent_bracket, validate_digits, CfError, PeriodicCf};
use crate::CertifiedInterval;

/// How the stream behaves past the digits already materialised.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailKind {
    /// Finite expansion: no digits past the prefix, value is exact.
    Exact,
    /// Unknown continuation: the prefix is all the information there is.
    Open,
    /// A generator produces arbitrarily many further digits.
    Infinite,
}

enum Tail {
    Exact,
    Open,
    Gen(Box<dyn FnMut() -> i64 + Send>),
}

/// A continued fraction expansion consumed digit by digit.
pub struct CfStream {
    known: Vec<i64>,
    tail: Tail,
    periodic: Option<PeriodicCf>,
}

impl CfStream {
    /// A finite expansion whose value is exactly `[a_0; a_1, ..., a_k]`.
    pub fn from_finite(digits: &[i64]) -> Result<Self, CfError> {
        validate_digits(digits)?;
        Ok(CfStream { known: digits.to_vec(), tail: Tail::Exact, periodic: None })
    }

    /// A known prefix of some longer (possibly infinite) expansion.
    pub fn from_open_prefix(digits: &[i64]) -> Result<Self, CfError> {
        validate_digits(digits)?;
        Ok(CfStream { known: digits.to_vec(), tail: Tail::Open, periodic: None })
    }

    /// The infinite expansion of an eventually periodic continued fraction.
    pub fn from_periodic(cf: &PeriodicCf) -> Self {
        let mut known = vec![cf.a0()];
        known.extend_from_slice(cf.preperiod());
        let cycle = cf.period().to_vec();
        let mut at = 0usize;
        let gen = move || {
            let d = cycle[at % cycle.len()];
            at += 1;
            d
        };
        CfStream { known, tail: Tail::Gen(Box::new(gen)), periodic: Some(cf.clone()) }
    }

    /// An infinite expansion `[a_0; f(1), f(2), ...]`. The generator is
    /// called once per digit, in order, and must return values `>= 1`.
    pub fn from_fn(a0: i64, mut f: impl FnMut(usize) -> i64 + Send + 'static) -> Self {
        let mut i = 0usize;
        let gen = move || {
            i += 1;
            f(i)
        };
        CfStream { known: vec![a0], tail: Tail::Gen(Box::new(gen)), periodic: None }
    }

    /// Digit `a_i`, materialising generator output as needed. `None` means
    /// the expansion has no digit `i` (finite) or it is unknown (open).
    pub fn digit(&mut self, i: usize) -> Option<i64> {
        while i >= self.known.len() {
            match &mut self.tail {
                Tail::Exact | Tail::Open => return None,
                Tail::Gen(f) => {
                    let d = f();
                    assert!(d >= 1, "generated digit {d} at index {} must be >= 1", self.known.len());
                    self.known.push(d);
                }
            }
        }
        Some(self.known[i])
    }

    /// Number of digits materialised so far.
    pub fn known_len(&self) -> usize {
        self.known.len()
    }

    pub fn tail_kind(&self) -> TailKind {
        match self.tail {
            Tail::Exact => TailKind::Exact,
            Tail::Open => TailKind::Open,
            Tail::Gen(_) => TailKind::Infinite,
        }
    }

    /// Periodicity metadata, when the stream was built from a periodic
    /// expansion.
    pub fn periodic_meta(&self) -> Option<&PeriodicCf> {
        self.periodic.as_ref()
    }

    /// The first `min(n, available)` digits.
    pub fn prefix(&mut self, n: usize) -> Vec<i64> {
        if n > 0 {
            self.digit(n - 1);
        }
        self.known[..n.min(self.known.len())].to_vec()
    }

    /// A closed interval certified to contain the stream's value, computed
    /// from the first `depth` digits. For an exact stream consumed in full
    /// the interval is a point.
    pub fn bracket(&mut self, depth: usize) -> Result<CertifiedInterval, CfError> {
        let depth = depth.max(1);
        self.digit(depth - 1);
        let take = depth.min(self.known.len());
        let exact = matches!(self.tail, Tail::Exact) && take == self.known.len();
        convergent_bracket(&self.known[..take], exact)
    }

    /// Bracket for the tail value `[a_start; a_{start+1}, ...]`.
    pub fn tail_bracket(&mut self, start: usize, depth: usize) -> Result<CertifiedInterval, CfError> {
        let depth = depth.max(1);
        self.digit(start + depth - 1);
        if start >= self.known.len() {
            return Err(CfError::InsufficientDigits {
                needed: start + 1,
                available: self.known.len(),
            });
        }
        let end = (start + depth).min(self.known.len());
        let exact = matches!(self.tail, Tail::Exact) && end == self.known.len();
        convergent_bracket(&self.known[start..end], exact)
    }
}

impl std::fmt::Debug for CfStream {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CfStream")
            .field("known", &self.known)
            .field("tail", &self.tail_kind())
            .finish()
    }
}
