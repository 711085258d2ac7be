//! Exact scalars: the rationals and prime fields `F_p` with `p < 2^31`.
//!
//! Rational values are kept as reduced fractions with a positive
//! denominator; prime-field values as canonical residues in `[0, p)`.
//! Arithmetic operators panic if the two operands live in different
//! fields. Use [`FieldElement::checked`] where that cannot be ruled out by
//! construction.

use alloc::format;
use alloc::string::ToString;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// One of the two supported coefficient fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Prime(u32),
}

impl Field {
    /// The prime field `F_p`. Rejects composite moduli and `p >= 2^31`.
    pub fn prime(p: u64) -> Result<Field> {
        if !(2..1 << 31).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidModulus(p));
        }
        Ok(Field::Prime(p as u32))
    }

    pub fn zero(self) -> FieldElement {
        self.from_i64(0)
    }

    pub fn one(self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> FieldElement {
        match self {
            Field::Rational => FieldElement::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => FieldElement::Prime {
                residue: v.rem_euclid(p as i64) as u32,
                modulus: p,
            },
        }
    }

    /// Maps `num / den` into the field. Fails when `den` vanishes in the field.
    pub fn from_fraction(self, num: &BigInt, den: &BigInt) -> Result<FieldElement> {
        match self {
            Field::Rational => {
                if den.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(FieldElement::Rational(BigRational::new(num.clone(), den.clone())))
            }
            Field::Prime(p) => {
                let pb = BigInt::from(p);
                let n = num.mod_floor(&pb).to_u32().unwrap_or(0);
                let d = den.mod_floor(&pb).to_u32().unwrap_or(0);
                let n = FieldElement::Prime { residue: n, modulus: p };
                let d = FieldElement::Prime { residue: d, modulus: p };
                n.checked(Op::Div, &d)
            }
        }
    }

    pub fn is_prime_field(self) -> bool {
        matches!(self, Field::Prime(_))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 4 {
        return p >= 2;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// A binary field operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

/// An exact element of `Q` or of some `F_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Rational(BigRational),
    Prime { residue: u32, modulus: u32 },
}

impl FieldElement {
    pub fn field(&self) -> Field {
        match self {
            FieldElement::Rational(_) => Field::Rational,
            FieldElement::Prime { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn rational(num: i64, den: i64) -> Result<FieldElement> {
        Field::Rational.from_fraction(&BigInt::from(num), &BigInt::from(den))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_zero(),
            FieldElement::Prime { residue, .. } => *residue == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_one(),
            FieldElement::Prime { residue, .. } => *residue == 1,
        }
    }

    /// Applies `op` after checking that both operands share a field.
    pub fn checked(&self, op: Op, rhs: &FieldElement) -> Result<FieldElement> {
        if self.field() != rhs.field() {
            return Err(Error::FieldMismatch(self.field().to_string(), rhs.field().to_string()));
        }
        Ok(match op {
            Op::Add => self + rhs,
            Op::Sub => self - rhs,
            Op::Mul => self * rhs,
            Op::Div => return self.checked_div(rhs),
        })
    }

    pub fn checked_div(&self, rhs: &FieldElement) -> Result<FieldElement> {
        let inv = rhs.inverse()?;
        if self.field() != rhs.field() {
            return Err(Error::FieldMismatch(self.field().to_string(), rhs.field().to_string()));
        }
        Ok(self * &inv)
    }

    pub fn inverse(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            FieldElement::Rational(r) => FieldElement::Rational(r.recip()),
            FieldElement::Prime { residue, modulus } => FieldElement::Prime {
                residue: inv_mod(*residue, *modulus),
                modulus: *modulus,
            },
        })
    }

    /// Re-establishes canonical form. A no-op on values built through this API.
    pub fn normalized(&self) -> FieldElement {
        match self {
            FieldElement::Rational(r) => {
                FieldElement::Rational(BigRational::new(r.numer().clone(), r.denom().clone()))
            }
            FieldElement::Prime { residue, modulus } => FieldElement::Prime {
                residue: residue % modulus,
                modulus: *modulus,
            },
        }
    }

    /// Numerator and denominator of a rational value, or the residue over `1`.
    pub fn as_fraction(&self) -> (BigInt, BigInt) {
        match self {
            FieldElement::Rational(r) => (r.numer().clone(), r.denom().clone()),
            FieldElement::Prime { residue, .. } => (BigInt::from(*residue), BigInt::one()),
        }
    }

    /// True for values printed with a leading minus sign (negative rationals).
    pub fn is_negative(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_negative(),
            FieldElement::Prime { .. } => false,
        }
    }

    pub fn residue(&self) -> Option<u32> {
        match self {
            FieldElement::Prime { residue, .. } => Some(*residue),
            FieldElement::Rational(_) => None,
        }
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(a: u32, mut e: u32, p: u32) -> u32 {
    let p64 = p as u64;
    let mut base = a as u64 % p64;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p64;
        }
        base = base * base % p64;
        e >>= 1;
    }
    acc as u32
}

fn mismatch(a: &FieldElement, b: &FieldElement) -> ! {
    panic!("field mismatch: {} vs {}", a.field(), b.field())
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        match (self, rhs) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a + b),
            (
                FieldElement::Prime { residue: a, modulus: p },
                FieldElement::Prime { residue: b, modulus: q },
            ) if p == q => FieldElement::Prime {
                residue: ((*a as u64 + *b as u64) % *p as u64) as u32,
                modulus: *p,
            },
            _ => mismatch(self, rhs),
        }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        match (self, rhs) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a - b),
            (
                FieldElement::Prime { residue: a, modulus: p },
                FieldElement::Prime { residue: b, modulus: q },
            ) if p == q => FieldElement::Prime {
                residue: ((*a as u64 + *p as u64 - *b as u64) % *p as u64) as u32,
                modulus: *p,
            },
            _ => mismatch(self, rhs),
        }
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        match (self, rhs) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a * b),
            (
                FieldElement::Prime { residue: a, modulus: p },
                FieldElement::Prime { residue: b, modulus: q },
            ) if p == q => FieldElement::Prime {
                residue: ((*a as u64 * *b as u64) % *p as u64) as u32,
                modulus: *p,
            },
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        match self {
            FieldElement::Rational(a) => FieldElement::Rational(-a),
            FieldElement::Prime { residue, modulus } => FieldElement::Prime {
                residue: (modulus - residue) % modulus,
                modulus: *modulus,
            },
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => a.partial_cmp(b),
            (
                FieldElement::Prime { residue: a, modulus: p },
                FieldElement::Prime { residue: b, modulus: q },
            ) if p == q => a.partial_cmp(b),
            _ => None,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldElement::Prime { residue, .. } => write!(f, "{residue}"),
        }
    }
}

/// Parses a rational literal: optional sign, digits, optional `/digits`.
/// The value is then mapped into `field`.
pub fn parse_literal(s: &str, field: Field) -> Result<FieldElement> {
    let s = s.trim();
    let bad = || Error::OutOfRange(format!("bad literal {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let digits_ok = |t: &str| {
        let t = t.strip_prefix(['+', '-']).unwrap_or(t);
        !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit())
    };
    if !digits_ok(num) || !den.bytes().all(|b| b.is_ascii_digit()) || den.is_empty() {
        return Err(bad());
    }
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    field.from_fraction(&num, &den)
}
