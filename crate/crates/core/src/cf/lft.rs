//! Linear fractional transformations applied to continued fraction streams.
//!
//! An [`LftMap`] is an invertible map `x -> (m11 x + m12) / (m21 x + m22)`
//! with entries in one real quadratic field. [`LftSession`] drives such a
//! map over a [`CfStream`]: it alternately absorbs input digits and emits
//! output digits, emitting only when the image of every possible tail value
//! has a provably fixed floor. Digits emitted this way are certified: they
//! are the true digits of `f(x)`, no floating point involved.
//!
//! Digit absorption and emission are the usual matrix moves: absorbing `a`
//! sends `(m11, m12, m21, m22)` to `(a m11 + m12, m11, a m21 + m22, m21)`,
//! and emitting `n` sends it to `(m21, m22, m11 - n m21, m12 - n m22)`.

use num_traits::ToPrimitive;

use super::{convergent_bracket, CfError, CfStream, TailKind};
use crate::{CertifiedInterval, Int, Rat, Surd};

/// Invertible linear fractional transformation with quadratic-surd entries.
#[derive(Debug, Clone, PartialEq)]
pub struct LftMap {
    m11: Surd,
    m12: Surd,
    m21: Surd,
    m22: Surd,
}

impl LftMap {
    /// Builds the map, rejecting entries from distinct fields and singular
    /// matrices.
    pub fn new(m11: Surd, m12: Surd, m21: Surd, m22: Surd) -> Result<Self, CfError> {
        let ad = m11.checked_mul(&m22)?;
        let bc = m12.checked_mul(&m21)?;
        let det = ad.checked_sub(&bc)?;
        if det.is_zero() {
            return Err(CfError::SingularMap);
        }
        Ok(LftMap { m11, m12, m21, m22 })
    }

    /// A map with rational entries, tagged with the quadratic field of
    /// `like` so it can be applied to values there.
    pub fn from_rationals(m11: &Rat, m12: &Rat, m21: &Rat, m22: &Rat, like: &Surd) -> Result<Self, CfError> {
        Self::new(
            like.embed_rat(m11),
            like.embed_rat(m12),
            like.embed_rat(m21),
            like.embed_rat(m22),
        )
    }

    /// The identity map in the field of `like`.
    pub fn identity(like: &Surd) -> Self {
        let one = Rat::from_integer(Int::from(1));
        let zero = Rat::from_integer(Int::from(0));
        Self::from_rationals(&one, &zero, &zero, &one, like).expect("identity is invertible")
    }

    pub fn entries(&self) -> (&Surd, &Surd, &Surd, &Surd) {
        (&self.m11, &self.m12, &self.m21, &self.m22)
    }

    pub fn determinant(&self) -> Surd {
        let ad = self.m11.checked_mul(&self.m22).expect("entries share a field");
        let bc = self.m12.checked_mul(&self.m21).expect("entries share a field");
        ad.checked_sub(&bc).expect("entries share a field")
    }

    /// Applies the map to a finite value.
    pub fn eval(&self, x: &Surd) -> Result<Surd, CfError> {
        let num = self.m11.checked_mul(x)?.checked_add(&self.m12)?;
        let den = self.m21.checked_mul(x)?.checked_add(&self.m22)?;
        if den.is_zero() {
            return Err(CfError::MapPole);
        }
        Ok(num.checked_div(&den)?)
    }

    /// The limit of the map at infinity, `m11 / m21`.
    pub fn eval_at_infinity(&self) -> Result<Surd, CfError> {
        if self.m21.is_zero() {
            return Err(CfError::MapPole);
        }
        Ok(self.m11.checked_div(&self.m21)?)
    }

    /// Absorbs one input digit `a`: the map now acts on the tail past `a`.
    fn ingest(&mut self, a: i64) {
        let a = self.m11.embed_int(Int::from(a));
        let n11 = a.checked_mul(&self.m11).unwrap().checked_add(&self.m12).unwrap();
        let n21 = a.checked_mul(&self.m21).unwrap().checked_add(&self.m22).unwrap();
        self.m12 = std::mem::replace(&mut self.m11, n11);
        self.m22 = std::mem::replace(&mut self.m21, n21);
    }

    /// Emits one output digit `n`: the map now computes `1/(f - n)`.
    fn emit(&mut self, n: i64) {
        let n = self.m11.embed_int(Int::from(n));
        let d1 = self.m11.checked_sub(&n.checked_mul(&self.m21).unwrap()).unwrap();
        let d2 = self.m12.checked_sub(&n.checked_mul(&self.m22).unwrap()).unwrap();
        self.m11 = std::mem::replace(&mut self.m21, d1);
        self.m12 = std::mem::replace(&mut self.m22, d2);
    }

    /// The inverse map (as a projective matrix, the adjugate).
    pub fn inverse(&self) -> Self {
        LftMap {
            m11: self.m22.clone(),
            m12: -&self.m12,
            m21: -&self.m21,
            m22: self.m11.clone(),
        }
    }

    /// The composition `self . other`, mapping `x` to `self(other(x))`.
    pub fn compose(&self, other: &Self) -> Result<Self, CfError> {
        let mul = |p: &Surd, q: &Surd| p.checked_mul(q);
        let m11 = mul(&self.m11, &other.m11)?.checked_add(&mul(&self.m12, &other.m21)?)?;
        let m12 = mul(&self.m11, &other.m12)?.checked_add(&mul(&self.m12, &other.m22)?)?;
        let m21 = mul(&self.m21, &other.m11)?.checked_add(&mul(&self.m22, &other.m21)?)?;
        let m22 = mul(&self.m21, &other.m12)?.checked_add(&mul(&self.m22, &other.m22)?)?;
        LftMap::new(m11, m12, m21, m22)
    }
}

/// One step of a digit-emitting session.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LftStep {
    /// The next certified digit of the output expansion.
    Digit(i64),
    /// The output expansion is complete (the value is exactly rational in
    /// the emitted digits).
    Finished,
}

enum SessionState {
    /// Still consuming input digits; tail value ranges over `(1, oo)`.
    Streaming,
    /// Input exhausted exactly; the residual value is known in closed form.
    ExactTail(Surd),
    Finished,
}

/// Incremental evaluation of `map(stream value)` as a continued fraction.
pub struct LftSession<'a> {
    map: LftMap,
    input: &'a mut CfStream,
    ingested: usize,
    emitted: usize,
    state: SessionState,
}

/// Ingests this many digits without an emission before giving up. Reaching
/// it means astronomically large output digits, not a plausible workload.
const STALL_CAP: usize = 200_000;

impl<'a> LftSession<'a> {
    pub fn new(map: LftMap, input: &'a mut CfStream) -> Self {
        LftSession { map, input, ingested: 0, emitted: 0, state: SessionState::Streaming }
    }

    pub fn emitted(&self) -> usize {
        self.emitted
    }

    /// Produces the next output digit, absorbing as much input as needed.
    pub fn next_digit(&mut self) -> Result<LftStep, CfError> {
        loop {
            match &mut self.state {
                SessionState::Finished => return Ok(LftStep::Finished),
                SessionState::ExactTail(y) => {
                    // Canonical expansion of the exact residual value.
                    let n = y.floor();
                    let digit = n.to_i64().ok_or(CfError::DigitOverflow)?;
                    let rem = y.fract();
                    self.state = if rem.is_zero() {
                        SessionState::Finished
                    } else {
                        SessionState::ExactTail(rem.recip())
                    };
                    self.emitted += 1;
                    return Ok(LftStep::Digit(digit));
                }
                SessionState::Streaming => {
                    if let Some(step) = self.try_emit()? {
                        return Ok(step);
                    }
                }
            }
        }
    }

    /// Attempts one emission; on `None` a digit was ingested instead and the
    /// caller should retry.
    fn try_emit(&mut self) -> Result<Option<LftStep>, CfError> {
        // The first input digit must be absorbed before anything is known.
        if self.ingested > 0 {
            let den_one = self.map.m21.checked_add(&self.map.m22).expect("shared field");
            let s1 = den_one.signum();
            let s_inf = self.map.m21.signum();
            if s1 != 0 && s1 == s_inf {
                // No pole for tail values in (1, oo): the image floor is
                // decided once both endpoint floors agree.
                let num_one = self.map.m11.checked_add(&self.map.m12).expect("shared field");
                let f_one = num_one.checked_div(&den_one).expect("nonzero denominator");
                let f_inf = self.map.eval_at_infinity().expect("nonzero m21");
                let n1 = f_one.floor();
                if n1 == f_inf.floor() {
                    let digit = n1.to_i64().ok_or(CfError::DigitOverflow)?;
                    self.map.emit(digit);
                    self.emitted += 1;
                    return Ok(Some(LftStep::Digit(digit)));
                }
            }
        }
        match self.input.digit(self.ingested) {
            Some(a) => {
                self.map.ingest(a);
                self.ingested += 1;
                if self.ingested > self.emitted.saturating_add(1) * STALL_CAP {
                    return Err(CfError::ExpansionTooLong { cap: STALL_CAP });
                }
                Ok(None)
            }
            None => match self.input.tail_kind() {
                TailKind::Exact => {
                    // Finite input consumed in full: the tail is at infinity.
                    let value = self.map.eval_at_infinity()?;
                    self.state = SessionState::ExactTail(value);
                    Ok(None)
                }
                TailKind::Open => Err(CfError::UndecidableDigit { emitted: self.emitted }),
                TailKind::Infinite => unreachable!("infinite streams always produce digits"),
            },
        }
    }
}

/// The first `count` digits of `map(stream value)`, with a certified
/// enclosure of the full output value.
#[derive(Debug, Clone)]
pub struct LftOutput {
    pub digits: Vec<i64>,
    pub enclosure: CertifiedInterval,
    pub finished: bool,
}

/// Runs a session for up to `count` digits and encloses the output value.
pub fn lft_digits(map: LftMap, input: &mut CfStream, count: usize) -> Result<LftOutput, CfError> {
    assert!(count >= 1, "requested digit count must be positive");
    let mut session = LftSession::new(map, input);
    let mut digits = Vec::new();
    let mut finished = false;
    while digits.len() < count {
        match session.next_digit()? {
            LftStep::Digit(d) => digits.push(d),
            LftStep::Finished => {
                finished = true;
                break;
            }
        }
    }
    let enclosure = convergent_bracket(&digits, finished)?;
    Ok(LftOutput { digits, enclosure, finished })
}
