//! Quadratic surds `(a + b*sqrt(d))/c` with exact integer coefficients.
//!
//! Values are kept in a canonical form so that structural equality is value
//! equality: `c > 0`, `gcd(a, b, c) = 1`, and `d > 1` squarefree. Square
//! factors of a requested discriminant are folded into `b` on construction,
//! so `new(0, 1, 1, 8)` and `new(0, 2, 1, 2)` denote the same number and
//! compare equal. A surd with `b = 0` is an embedded rational; it still
//! carries a field tag `d` so that in-field arithmetic never has to invent
//! one, but the tag is ignored by equality, hashing and ordering.
//!
//! Arithmetic between two genuinely irrational surds requires a common `d`
//! (sums of square roots of distinct squarefree integers leave the quadratic
//! world). The binary operators panic on a field mismatch; code that cannot
//! rule a mismatch out up front should compare through certified intervals
//! instead (see `interval::compare_via_intervals`).
//!
//! Construction cost: making the discriminant squarefree runs trial division
//! up to `d^(1/3)`, so `new` is cheap for `d` up to ~1e15 and grows from
//! there. All in-field arithmetic preserves `d` and never re-factors it.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_integer::{Integer, Roots};
use num_rational::Ratio;
use num_traits::{FromPrimitive, NumRef, RefNum, Signed, ToPrimitive};
use thiserror::Error;

/// Integer scalars a [`QuadraticSurd`] can be built over.
///
/// Satisfied by `num_bigint::BigInt` (the default everywhere in this crate)
/// and by the primitive signed integers, which are useful in tests but
/// overflow quickly under convergent growth.
pub trait SurdInt:
    Integer
    + Roots
    + Signed
    + NumRef
    + Clone
    + Hash
    + fmt::Debug
    + fmt::Display
    + From<i32>
    + ToPrimitive
    + FromPrimitive
where
    for<'a> &'a Self: RefNum<Self>,
{
}

// Implemented per type rather than as a blanket impl, and with the `RefNum`
// HRTB carried on the trait itself rather than on every impl: both choices
// keep `QuadraticSurd<_>` from becoming a trait-resolution candidate for its
// own scalar position, which would overflow the solver.
impl SurdInt for num_bigint::BigInt {}
impl SurdInt for i32 {}
impl SurdInt for i64 {}
impl SurdInt for i128 {}

/// Errors from surd construction and checked arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurdError {
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("discriminant {0} is negative, the value would not be real")]
    NegativeDiscriminant(String),
    #[error("discriminant {0} is a perfect square, the value is rational")]
    SquareDiscriminant(String),
    #[error("operands lie in distinct quadratic fields: sqrt({0}) vs sqrt({1})")]
    FieldMismatch(String, String),
    #[error("division by zero")]
    DivisionByZero,
}

/// A real quadratic surd `(a + b*sqrt(d))/c` in canonical form.
///
/// See the module docs for the exact invariants. Cloning is cheap relative
/// to arithmetic; all operators are implemented for references so chained
/// expressions do not have to clone explicitly.
#[derive(Debug, Clone)]
pub struct QuadraticSurd<T> {
    a: T,
    b: T,
    c: T,
    d: T,
}

/// Splits `n > 0` as `square * squarefree` and returns `(sqrt(square),
/// squarefree)`.
///
/// Trial division extracts every prime power up to `n^(1/3)`; whatever
/// remains has at most two prime factors, so it is either squarefree or a
/// perfect square, and one integer square root decides which.
fn split_square_part<T: SurdInt>(n: &T) -> (T, T)
where
    for<'a> &'a T: RefNum<T>,
{
    let mut m = n.clone();
    let mut out = T::one();
    let mut rest = T::one();
    let mut f: T = T::from(2);
    while &(&f * &f) * &f <= m {
        if (&m % &f).is_zero() {
            let mut count: u32 = 0;
            while (&m % &f).is_zero() {
                m = &m / &f;
                count += 1;
            }
            out = out * num_traits::pow(f.clone(), (count / 2) as usize);
            if count % 2 == 1 {
                rest = rest * &f;
            }
        }
        f = f + T::one();
    }
    let s = m.sqrt();
    if &s * &s == m {
        out = out * s;
    } else {
        rest = rest * m;
    }
    (out, rest)
}

impl<T: SurdInt> QuadraticSurd<T>
where
    for<'a> &'a T: RefNum<T>,
{
    /// Builds `(a + b*sqrt(d))/c` in canonical form.
    ///
    /// Square factors of `d` are folded into `b`. Rejects `c = 0`, `d < 0`,
    /// and `d` a perfect square (including 0 and 1): a rational value must be
    /// carried as `b = 0` over some genuine discriminant, or as a plain
    /// rational outside this type.
    pub fn new(a: T, b: T, c: T, d: T) -> Result<Self, SurdError> {
        if c.is_zero() {
            return Err(SurdError::ZeroDenominator);
        }
        if d.is_negative() {
            return Err(SurdError::NegativeDiscriminant(d.to_string()));
        }
        let (out, rest) = if d.is_zero() {
            (T::zero(), T::one())
        } else {
            split_square_part(&d)
        };
        if rest.is_one() {
            return Err(SurdError::SquareDiscriminant(d.to_string()));
        }
        Ok(Self::normalized(a, b * out, c, rest))
    }

    /// Canonicalises sign and content. `d` must already be squarefree.
    fn normalized(mut a: T, mut b: T, mut c: T, d: T) -> Self {
        debug_assert!(!c.is_zero());
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.abs().gcd(&b.abs()).gcd(&c.abs());
        if !g.is_zero() && !g.is_one() {
            a = &a / &g;
            b = &b / &g;
            c = &c / &g;
        }
        QuadraticSurd { a, b, c, d }
    }

    /// The rational `r` embedded in the field `Q(sqrt(d))` of `self`.
    pub fn embed_rat(&self, r: &Ratio<T>) -> Self {
        Self::normalized(
            r.numer().clone(),
            T::zero(),
            r.denom().clone(),
            self.d.clone(),
        )
    }

    /// The integer `n` embedded in the field of `self`.
    pub fn embed_int(&self, n: T) -> Self {
        QuadraticSurd {
            a: n,
            b: T::zero(),
            c: T::one(),
            d: self.d.clone(),
        }
    }

    /// `sqrt(d)` itself, the fundamental surd of the field of `self`.
    pub fn field_sqrt(&self) -> Self {
        QuadraticSurd {
            a: T::zero(),
            b: T::one(),
            c: T::one(),
            d: self.d.clone(),
        }
    }

    /// Coefficient accessors: the value is `(a + b*sqrt(d)) / c`.
    pub fn coeff_a(&self) -> &T {
        &self.a
    }

    pub fn coeff_b(&self) -> &T {
        &self.b
    }

    pub fn coeff_c(&self) -> &T {
        &self.c
    }

    /// The squarefree discriminant tag.
    pub fn disc(&self) -> &T {
        &self.d
    }

    /// True when the value is rational (`b = 0`).
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// The value as an exact rational, when it is one.
    pub fn to_rational(&self) -> Option<Ratio<T>> {
        if self.is_rational() {
            Some(Ratio::new(self.a.clone(), self.c.clone()))
        } else {
            None
        }
    }

    /// Galois conjugate `(a - b*sqrt(d))/c`.
    pub fn conjugate(&self) -> Self {
        QuadraticSurd {
            a: self.a.clone(),
            b: -self.b.clone(),
            c: self.c.clone(),
            d: self.d.clone(),
        }
    }

    /// Field norm `x * conj(x) = (a^2 - b^2 d) / c^2` as an exact rational.
    ///
    /// Zero exactly when `x = 0`: for irrational `x` the numerator cannot
    /// vanish because `d` is squarefree.
    pub fn norm(&self) -> Ratio<T> {
        let num = &self.a * &self.a - &(&self.b * &self.b) * &self.d;
        Ratio::new(num, &self.c * &self.c)
    }

    /// Rational trace `x + conj(x) = 2a/c`.
    pub fn trace(&self) -> Ratio<T> {
        Ratio::new(T::from(2) * &self.a, self.c.clone())
    }

    /// Sign of the value: -1, 0 or +1.
    pub fn signum(&self) -> i32 {
        // Sign of a + b*sqrt(d) (c > 0). When a and b disagree in sign the
        // comparison a^2 vs b^2 d decides; equality would force d square.
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        match (sa, sb) {
            (0, 0) => 0,
            (s, 0) => s,
            (0, s) => s,
            (1, 1) => 1,
            (-1, -1) => -1,
            _ => {
                let lhs = &self.a * &self.a;
                let rhs = &(&self.b * &self.b) * &self.d;
                match lhs.cmp(&rhs) {
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                    Ordering::Equal => unreachable!("d is squarefree"),
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Exact floor of the value.
    pub fn floor(&self) -> T {
        // floor((a + b sqrt(d))/c) = (a + floor(b sqrt(d))) div_floor c for
        // integer a and c > 0.
        Integer::div_floor(&(&self.a + self.sqrt_term_floor()), &self.c)
    }

    /// `floor(b * sqrt(d))`.
    fn sqrt_term_floor(&self) -> T {
        if self.b.is_zero() {
            return T::zero();
        }
        let sq = &(&self.b * &self.b) * &self.d;
        let root = sq.sqrt();
        if self.b.is_positive() {
            root
        } else {
            // b^2 d is never a perfect square for b != 0, so b*sqrt(d) is
            // strictly between -(root+1) and -root.
            -root - T::one()
        }
    }

    /// Fractional part `x - floor(x)`, in `[0, 1)`.
    pub fn fract(&self) -> Self {
        let f = self.floor();
        let fl = self.embed_int(f);
        self.checked_sub(&fl).expect("rational embeds in any field")
    }

    /// Multiplicative inverse.
    ///
    /// Panics on zero; use [`QuadraticSurd::checked_recip`] when the operand
    /// may be zero.
    pub fn recip(&self) -> Self {
        self.checked_recip().expect("reciprocal of zero")
    }

    pub fn checked_recip(&self) -> Result<Self, SurdError> {
        if self.is_zero() {
            return Err(SurdError::DivisionByZero);
        }
        // 1/x = c (a - b sqrt(d)) / (a^2 - b^2 d).
        let n = &self.a * &self.a - &(&self.b * &self.b) * &self.d;
        Ok(Self::normalized(
            &self.c * &self.a,
            -(&self.c * &self.b),
            n,
            self.d.clone(),
        ))
    }

    /// Integer power, with negative exponents through the inverse.
    pub fn powi(&self, e: i32) -> Self {
        if e < 0 {
            return self.recip().powi(-e);
        }
        let mut acc = self.embed_int(T::one());
        let mut base = self.clone();
        let mut k = e as u32;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.checked_mul(&base).expect("same field");
            }
            k >>= 1;
            if k > 0 {
                base = base.checked_mul(&base.clone()).expect("same field");
            }
        }
        acc
    }

    /// True when both operands can meet in one field: at least one of them
    /// is rational, or their discriminants agree.
    pub fn same_field(&self, other: &Self) -> bool {
        self.b.is_zero() || other.b.is_zero() || self.d == other.d
    }

    /// The discriminant tag the result of a binary op will carry.
    fn join_field<'x>(&'x self, other: &'x Self) -> Result<&'x T, SurdError> {
        if self.b.is_zero() && !other.b.is_zero() {
            Ok(&other.d)
        } else if other.b.is_zero() || self.d == other.d {
            Ok(&self.d)
        } else {
            Err(SurdError::FieldMismatch(
                self.d.to_string(),
                other.d.to_string(),
            ))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, SurdError> {
        let d = self.join_field(other)?.clone();
        Ok(Self::normalized(
            &(&self.a * &other.c) + &(&other.a * &self.c),
            &(&self.b * &other.c) + &(&other.b * &self.c),
            &self.c * &other.c,
            d,
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, SurdError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, SurdError> {
        let d = self.join_field(other)?.clone();
        // (a1 + b1 r)(a2 + b2 r) with r^2 = d. A rational operand has b = 0,
        // so its tag never reaches the cross terms.
        let a = &(&self.a * &other.a) + &(&(&self.b * &other.b) * &d);
        let b = &(&self.a * &other.b) + &(&self.b * &other.a);
        Ok(Self::normalized(a, b, &self.c * &other.c, d))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, SurdError> {
        if other.is_zero() {
            return Err(SurdError::DivisionByZero);
        }
        let inv = other.checked_recip()?;
        self.checked_mul(&inv)
    }

    /// Total order within one field (or against rationals).
    pub fn checked_cmp(&self, other: &Self) -> Result<Ordering, SurdError> {
        let diff = self.checked_sub(other)?;
        Ok(match diff.signum() {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        })
    }

    /// Comparison against an exact rational.
    pub fn cmp_rational(&self, r: &Ratio<T>) -> Ordering {
        let rs = self.embed_rat(r);
        self.checked_cmp(&rs).expect("rational embeds in any field")
    }

    /// Rounds to `f64`, for display and diagnostics only.
    pub fn to_f64(&self) -> Option<f64> {
        let a = self.a.to_f64()?;
        let b = self.b.to_f64()?;
        let c = self.c.to_f64()?;
        let d = self.d.to_f64()?;
        Some((a + b * d.sqrt()) / c)
    }
}

fn sign_of<T: Signed>(x: &T) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl<T: SurdInt> PartialEq for QuadraticSurd<T>
where
    for<'a> &'a T: RefNum<T>,
{
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a
            && self.b == other.b
            && self.c == other.c
            && (self.b.is_zero() || self.d == other.d)
    }
}

impl<T: SurdInt> Eq for QuadraticSurd<T> where for<'a> &'a T: RefNum<T> {}

impl<T: SurdInt> Hash for QuadraticSurd<T>
where
    for<'a> &'a T: RefNum<T>,
{
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.a.hash(state);
        self.b.hash(state);
        self.c.hash(state);
        if !self.b.is_zero() {
            self.d.hash(state);
        }
    }
}

/// Ordering is defined within a single field and against rationals;
/// `partial_cmp` returns `None` for two irrationals with distinct
/// discriminants (compare through intervals in that case).
impl<T: SurdInt> PartialOrd for QuadraticSurd<T>
where
    for<'a> &'a T: RefNum<T>,
{
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.checked_cmp(other).ok()
    }
}

macro_rules! surd_binop {
    ($trait:ident, $method:ident, $checked:ident, $what:expr) => {
        impl<T: SurdInt> $trait<QuadraticSurd<T>> for QuadraticSurd<T>
        where
            for<'r> &'r T: RefNum<T>,
        {
            type Output = QuadraticSurd<T>;
            fn $method(self, rhs: QuadraticSurd<T>) -> QuadraticSurd<T> {
                self.$checked(&rhs).unwrap_or_else(|e| panic!("{}: {e}", $what))
            }
        }
    };
}

// Operators exist only for owned operands: any impl on `&QuadraticSurd<T>`
// becomes a `RefNum` resolution candidate whose own where-clause mentions
// `RefNum` again, and the trait solver overflows chasing nested surd types.
// Borrow-friendly arithmetic goes through the `checked_*` methods instead.

surd_binop!(Add, add, checked_add, "surd addition");
surd_binop!(Sub, sub, checked_sub, "surd subtraction");
surd_binop!(Mul, mul, checked_mul, "surd multiplication");
surd_binop!(Div, div, checked_div, "surd division");

impl<'a, T: SurdInt> Neg for &'a QuadraticSurd<T>
where
    for<'r> &'r T: RefNum<T>,
{
    type Output = QuadraticSurd<T>;
    fn neg(self) -> QuadraticSurd<T> {
        QuadraticSurd {
            a: -self.a.clone(),
            b: -self.b.clone(),
            c: self.c.clone(),
            d: self.d.clone(),
        }
    }
}

impl<T: SurdInt> Neg for QuadraticSurd<T>
where
    for<'r> &'r T: RefNum<T>,
{
    type Output = QuadraticSurd<T>;
    fn neg(self) -> QuadraticSurd<T> {
        -&self
    }
}

impl<T: SurdInt> fmt::Display for QuadraticSurd<T>
where
    for<'a> &'a T: RefNum<T>,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return if self.c.is_one() {
                write!(f, "{}", self.a)
            } else {
                write!(f, "{}/{}", self.a, self.c)
            };
        }
        let mut num = String::new();
        if !self.a.is_zero() {
            num.push_str(&self.a.to_string());
        }
        let babs = self.b.abs();
        if self.b.is_negative() {
            num.push('-');
        } else if !self.a.is_zero() {
            num.push('+');
        }
        if !babs.is_one() {
            num.push_str(&babs.to_string());
            num.push('*');
        }
        num.push_str(&format!("sqrt({})", self.d));
        if self.c.is_one() {
            write!(f, "{num}")
        } else {
            write!(f, "({num})/{}", self.c)
        }
    }
}
