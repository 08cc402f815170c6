//! Eventually periodic continued fractions and their quadratic values.
//!
//! A [`PeriodicCf`] stores `[a_0; pre_1, ..., pre_m, (c_1, ..., c_s)]` in a
//! canonical form: the period is primitive (not a repetition of a shorter
//! block) and the preperiod is minimal (no trailing preperiod digit equal to
//! the last period digit, which would admit an earlier period start). Text
//! form follows the grammar
//!
//! ```text
//! cf := "[" int ( ";" intlist )? ( "," "(" intlist ")" )? "]"
//! ```
//!
//! so `[1;2,3]` is finite, `[1,(2)]` is `sqrt(2)`, and `[0;1,(9,9)]` has
//! preperiod `1` and period `9,9`. Parsing and printing round-trip exactly.

use std::collections::HashMap;
use std::fmt;

use num_traits::ToPrimitive;

use super::{validate_digits, CfError, ConvergentState};
use crate::{Int, Surd};

/// An eventually periodic continued fraction in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PeriodicCf {
    a0: i64,
    preperiod: Vec<i64>,
    period: Vec<i64>,
}

/// Result of parsing the continued fraction grammar: either a finite
/// expansion or a periodic one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedCf {
    Finite(Vec<i64>),
    Periodic(PeriodicCf),
}

impl PeriodicCf {
    /// Builds and canonicalises `[a_0; preperiod, (period)]`.
    pub fn new(a0: i64, preperiod: Vec<i64>, period: Vec<i64>) -> Result<Self, CfError> {
        if period.is_empty() {
            return Err(CfError::EmptyPeriod);
        }
        for (i, &d) in preperiod.iter().enumerate() {
            if d < 1 {
                return Err(CfError::InvalidDigit { index: i + 1, digit: d });
            }
        }
        for (i, &d) in period.iter().enumerate() {
            if d < 1 {
                return Err(CfError::InvalidDigit {
                    index: preperiod.len() + i + 1,
                    digit: d,
                });
            }
        }
        let mut cf = PeriodicCf { a0, preperiod, period };
        cf.primitivize();
        cf.absorb();
        Ok(cf)
    }

    /// The purely periodic value `[c_1, c_2, ..., c_s]` repeating from the
    /// very first digit (so `c_1` is also `a_0` and must be `>= 1`).
    pub fn purely(cycle: &[i64]) -> Result<Self, CfError> {
        if cycle.is_empty() {
            return Err(CfError::EmptyPeriod);
        }
        if cycle[0] < 1 {
            return Err(CfError::InvalidDigit { index: 0, digit: cycle[0] });
        }
        let mut period: Vec<i64> = cycle[1..].to_vec();
        period.push(cycle[0]);
        Self::new(cycle[0], Vec::new(), period)
    }

    /// Truncates the period to its primitive block.
    fn primitivize(&mut self) {
        let s = self.period.len();
        for u in 1..s {
            if s % u != 0 {
                continue;
            }
            if (u..s).all(|i| self.period[i] == self.period[i % u]) {
                self.period.truncate(u);
                return;
            }
        }
    }

    /// Minimises the preperiod by rotating the period over trailing digits.
    fn absorb(&mut self) {
        while let Some(&last) = self.preperiod.last() {
            if last == *self.period.last().expect("nonempty period") {
                self.preperiod.pop();
                self.period.rotate_right(1);
            } else {
                break;
            }
        }
    }

    pub fn a0(&self) -> i64 {
        self.a0
    }

    pub fn preperiod(&self) -> &[i64] {
        &self.preperiod
    }

    pub fn period(&self) -> &[i64] {
        &self.period
    }

    pub fn period_len(&self) -> usize {
        self.period.len()
    }

    /// Digit `a_i` of the infinite expansion.
    pub fn digit(&self, i: usize) -> i64 {
        if i == 0 {
            return self.a0;
        }
        let m = self.preperiod.len();
        if i <= m {
            self.preperiod[i - 1]
        } else {
            self.period[(i - 1 - m) % self.period.len()]
        }
    }

    /// True when the whole expansion is one repeating cycle from `a_0` on.
    pub fn is_purely_periodic(&self) -> bool {
        self.preperiod.is_empty()
            && self.a0 >= 1
            && self.a0 == *self.period.last().expect("nonempty period")
    }

    /// The repeating digit cycle as it appears in the expansion: starting
    /// from the first digit after the preperiod.
    pub fn cycle(&self) -> &[i64] {
        &self.period
    }

    /// Exact quadratic value of the expansion.
    ///
    /// The purely periodic tail `y = [c_1; c_2, ..., c_s, y]` solves
    /// `Q y^2 + (Q' - P) y - P' = 0` with `P/Q` the cycle's last convergent
    /// and `P'/Q'` the one before, and the preperiod folds in from the back.
    pub fn value(&self) -> Surd {
        let mut st = ConvergentState::new();
        for &d in &self.period {
            st.push(d);
        }
        let p = st.numer().clone();
        let q = st.denom().clone();
        let pp = st.numer_prev().clone();
        let qp = st.denom_prev().clone();
        // y = ((P - Q') + sqrt((Q' - P)^2 + 4 Q P')) / (2 Q), positive root.
        let t = &qp - &p;
        let disc = &t * &t + Int::from(4) * &q * &pp;
        let y = Surd::new(-t, Int::from(1), Int::from(2) * q, disc)
            .expect("periodic discriminant is positive and non-square");
        let mut x = y;
        for &g in self.preperiod.iter().rev() {
            let gs = x.embed_int(Int::from(g));
            x = gs + x.recip();
        }
        let a0s = x.embed_int(Int::from(self.a0));
        a0s + x.recip()
    }

    /// True when `other`'s primitive cycle is a rotation of this one's, or
    /// of its reversal. Preperiods are ignored: this is the equivalence that
    /// matters for tails of expansions.
    pub fn same_orbit(&self, other: &PeriodicCf) -> bool {
        let a = &self.period;
        let b = &other.period;
        if a.len() != b.len() {
            return false;
        }
        is_rotation(a, b) || {
            let rev: Vec<i64> = b.iter().rev().copied().collect();
            is_rotation(a, &rev)
        }
    }
}

fn is_rotation(a: &[i64], b: &[i64]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let doubled: Vec<i64> = a.iter().chain(a.iter()).copied().collect();
    doubled.windows(b.len()).any(|w| w == b)
}

impl fmt::Display for PeriodicCf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.a0)?;
        if !self.preperiod.is_empty() {
            write!(f, ";")?;
            for (i, d) in self.preperiod.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{d}")?;
            }
        }
        write!(f, ",(")?;
        for (i, d) in self.period.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")]")
    }
}

/// Formats a finite expansion, `[a_0]` or `[a_0;a_1,...]`.
pub fn format_finite(digits: &[i64]) -> String {
    let mut s = String::from("[");
    for (i, d) in digits.iter().enumerate() {
        if i == 1 {
            s.push(';');
        } else if i > 1 {
            s.push(',');
        }
        s.push_str(&d.to_string());
    }
    s.push(']');
    s
}

/// Parses the continued fraction grammar (strict: no whitespace).
pub fn parse_cf(input: &str) -> Result<ParsedCf, CfError> {
    let err = |msg: &str| CfError::Parse(format!("{msg} in {input:?}"));
    let inner = input
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| err("expected [...]"))?;
    if inner.is_empty() {
        return Err(err("empty brackets"));
    }
    // Split off the optional parenthesised period, which must be last.
    let (head, period) = match inner.find('(') {
        Some(pos) => {
            let par = &inner[pos..];
            let body = par
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| err("malformed period group"))?;
            if body.is_empty() {
                return Err(err("empty period"));
            }
            let head = inner[..pos]
                .strip_suffix(',')
                .ok_or_else(|| err("period must be preceded by a comma"))?;
            (head, Some(body))
        }
        None => (inner, None),
    };
    if head.is_empty() {
        return Err(err("missing leading integer"));
    }
    let (a0_str, rest) = match head.find(';') {
        Some(pos) => (&head[..pos], Some(&head[pos + 1..])),
        None => (head, None),
    };
    let a0: i64 = parse_int(a0_str).ok_or_else(|| err("bad leading integer"))?;
    let mut mid = Vec::new();
    if let Some(rest) = rest {
        if rest.is_empty() {
            return Err(err("empty digit list after ';'"));
        }
        for part in rest.split(',') {
            mid.push(parse_int(part).ok_or_else(|| err("bad digit"))?);
        }
    }
    match period {
        None => {
            let mut digits = vec![a0];
            digits.extend_from_slice(&mid);
            validate_digits(&digits)?;
            Ok(ParsedCf::Finite(digits))
        }
        Some(body) => {
            let mut per = Vec::new();
            for part in body.split(',') {
                per.push(parse_int(part).ok_or_else(|| err("bad period digit"))?);
            }
            Ok(ParsedCf::Periodic(PeriodicCf::new(a0, mid, per)?))
        }
    }
}

fn parse_int(s: &str) -> Option<i64> {
    if s.is_empty() {
        return None;
    }
    // Strict integers only: optional minus then digits, no '+', no spaces.
    let body = s.strip_prefix('-').unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Canonical periodic expansion of a quadratic irrational.
///
/// Iterates `a_i = floor(x_i)`, `x_{i+1} = 1/(x_i - a_i)` and detects the
/// first repeated remainder state, which gives the minimal preperiod and a
/// primitive period. Rational inputs are rejected.
pub fn surd_to_periodic(x: &Surd) -> Result<PeriodicCf, CfError> {
    if x.is_rational() {
        return Err(CfError::RationalInput);
    }
    const CAP: usize = 1_000_000;
    let mut digits: Vec<i64> = Vec::new();
    let mut seen: HashMap<Surd, usize> = HashMap::new();
    let mut cur = x.clone();
    loop {
        if digits.len() > CAP {
            return Err(CfError::ExpansionTooLong { cap: CAP });
        }
        if let Some(&j) = seen.get(&cur) {
            let period = digits[j..].to_vec();
            return if j == 0 {
                PeriodicCf::purely(&period)
            } else {
                PeriodicCf::new(digits[0], digits[1..j].to_vec(), period)
            };
        }
        seen.insert(cur.clone(), digits.len());
        let a = cur.floor();
        digits.push(a.to_i64().ok_or(CfError::DigitOverflow)?);
        // x is irrational, so every remainder is irrational and nonzero.
        cur = cur.fract().recip();
    }
}
