//! Arithmetic in GF(2^m) for small m.
//!
//! Elements carry their extension degree so that mixing fields is caught at
//! the point of use. Every structure constant of the block algebras lies in
//! the prime field, so `m = 1` is enough for presentations; larger `m` only
//! matters when sampling scalars for automorphism tests.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported extension degree.
pub const MAX_DEGREE: u8 = 8;

/// Irreducible polynomials x^m + ..., indexed by m (bit i = coefficient of x^i).
const MODULI: [u32; 9] = [0, 0b11, 0b111, 0b1011, 0x13, 0x25, 0x43, 0x83, 0x11B];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("unsupported field GF(2^{0}); m must be in 1..={MAX_DEGREE}")]
    UnsupportedDegree(u32),
    #[error("integer {value} does not encode an element of GF(2^{m})")]
    OutOfRange { value: u64, m: u8 },
    #[error("cannot parse field spec `{0}` (expected gf2, gf4, gf2^m)")]
    BadSpec(String),
}

/// The field GF(2^m).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Field {
    m: u8,
}

impl Field {
    pub const GF2: Field = Field { m: 1 };
    pub const GF4: Field = Field { m: 2 };

    pub fn new(m: u32) -> Result<Self, FieldError> {
        if m == 0 || m > MAX_DEGREE as u32 {
            return Err(FieldError::UnsupportedDegree(m));
        }
        Ok(Field { m: m as u8 })
    }

    /// Parses `gf2`, `gf4`, `gf8`, ... or `gf2^m`.
    pub fn parse(spec: &str) -> Result<Self, FieldError> {
        let s = spec.trim().to_ascii_lowercase();
        let bad = || FieldError::BadSpec(spec.to_string());
        let rest = s.strip_prefix("gf").ok_or_else(bad)?;
        let m = if let Some(exp) = rest.strip_prefix("2^") {
            exp.parse::<u32>().map_err(|_| bad())?
        } else {
            let q = rest.parse::<u32>().map_err(|_| bad())?;
            if !q.is_power_of_two() || q < 2 {
                return Err(bad());
            }
            q.trailing_zeros()
        };
        Field::new(m)
    }

    pub fn degree(self) -> u8 {
        self.m
    }

    pub fn order(self) -> u32 {
        1u32 << self.m
    }

    pub fn zero(self) -> Gf {
        Gf { bits: 0, m: self.m }
    }

    pub fn one(self) -> Gf {
        Gf { bits: 1, m: self.m }
    }

    /// Interprets the bits of `value` as polynomial coefficients.
    pub fn element(self, value: u64) -> Result<Gf, FieldError> {
        if value >= self.order() as u64 {
            return Err(FieldError::OutOfRange { value, m: self.m });
        }
        Ok(Gf { bits: value as u16, m: self.m })
    }

    /// Reduces an integer modulo 2 coefficientwise; used for literals in
    /// relations, where only the parity of each coefficient matters.
    pub fn from_bits_truncated(self, value: u64) -> Gf {
        Gf { bits: (value & (self.order() as u64 - 1)) as u16, m: self.m }
    }

    pub fn elements(self) -> impl Iterator<Item = Gf> {
        let m = self.m;
        (0..(1u32 << m)).map(move |b| Gf { bits: b as u16, m })
    }

    pub fn random<R: Rng + ?Sized>(self, rng: &mut R) -> Gf {
        Gf { bits: rng.gen_range(0..self.order()) as u16, m: self.m }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(self, rng: &mut R) -> Gf {
        Gf { bits: rng.gen_range(1..self.order()) as u16, m: self.m }
    }
}

impl Default for Field {
    fn default() -> Self {
        Field::GF2
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gf2^{}", self.m)
    }
}

/// An element of GF(2^m).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf {
    bits: u16,
    m: u8,
}

impl Gf {
    pub fn field(self) -> Field {
        Field { m: self.m }
    }

    pub fn bits(self) -> u16 {
        self.bits
    }

    pub fn is_zero(self) -> bool {
        self.bits == 0
    }

    pub fn is_one(self) -> bool {
        self.bits == 1
    }

    pub fn pow(self, mut e: u64) -> Gf {
        let mut base = self;
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(self) -> Option<Gf> {
        if self.is_zero() {
            None
        } else {
            Some(self.pow((1u64 << self.m) - 2))
        }
    }

    /// The unique square root (Frobenius is bijective in characteristic 2).
    pub fn sqrt(self) -> Gf {
        self.pow(1u64 << (self.m - 1))
    }

    fn check(self, other: Gf) {
        assert_eq!(self.m, other.m, "mixed fields GF(2^{}) and GF(2^{})", self.m, other.m);
    }
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bits)
    }
}

impl fmt::Display for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bits)
    }
}

impl Add for Gf {
    type Output = Gf;
    fn add(self, rhs: Gf) -> Gf {
        self.check(rhs);
        Gf { bits: self.bits ^ rhs.bits, m: self.m }
    }
}

impl Sub for Gf {
    type Output = Gf;
    fn sub(self, rhs: Gf) -> Gf {
        self + rhs
    }
}

impl Neg for Gf {
    type Output = Gf;
    fn neg(self) -> Gf {
        self
    }
}

impl AddAssign for Gf {
    fn add_assign(&mut self, rhs: Gf) {
        *self = *self + rhs;
    }
}

impl SubAssign for Gf {
    fn sub_assign(&mut self, rhs: Gf) {
        *self = *self + rhs;
    }
}

impl Mul for Gf {
    type Output = Gf;
    fn mul(self, rhs: Gf) -> Gf {
        self.check(rhs);
        let mut prod: u32 = 0;
        let (a, b) = (self.bits as u32, rhs.bits as u32);
        for i in 0..self.m {
            if (b >> i) & 1 == 1 {
                prod ^= a << i;
            }
        }
        let modulus = MODULI[self.m as usize];
        for i in (self.m as u32..2 * self.m as u32).rev() {
            if (prod >> i) & 1 == 1 {
                prod ^= modulus << (i - self.m as u32);
            }
        }
        Gf { bits: prod as u16, m: self.m }
    }
}

impl MulAssign for Gf {
    fn mul_assign(&mut self, rhs: Gf) {
        *self = *self * rhs;
    }
}

impl Div for Gf {
    type Output = Gf;
    fn div(self, rhs: Gf) -> Gf {
        self * rhs.inverse().expect("division by zero in GF(2^m)")
    }
}
