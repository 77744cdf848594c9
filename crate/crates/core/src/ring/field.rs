//! Exact coefficient fields.
//!
//! Everything in the crate is generic over [`Field`]. Two families are
//! provided: the rationals ([`Rational`], arbitrary precision, always in
//! lowest terms) and prime fields [`Fp`] with the modulus fixed at compile
//! time.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Inv, One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Serializable tag naming a coefficient field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldDescriptor {
    #[serde(rename = "Q")]
    Rationals,
    #[serde(rename = "Fp")]
    Prime(u64),
}

impl Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rationals => write!(f, "QQ"),
            FieldDescriptor::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

/// An exact field of coefficients.
pub trait Field:
    Clone
    + PartialEq
    + Eq
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Inv<Output = Self>
{
    fn descriptor() -> FieldDescriptor;

    fn from_i64(v: i64) -> Self;

    /// `num / den`, or `None` when `den` vanishes in the field.
    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self>;

    /// A uniformly drawn nonzero element; over the rationals an integer in `1..=bound`.
    fn random_nonzero<R: Rng + ?Sized>(rng: &mut R, bound: u64) -> Self;

    /// Sign and magnitude as printed in canonical form.
    fn split_sign(&self) -> (bool, String);
}

/// Arbitrary-precision rational numbers.
pub type Rational = BigRational;

impl Field for BigRational {
    fn descriptor() -> FieldDescriptor {
        FieldDescriptor::Rationals
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self> {
        if den.is_zero() {
            None
        } else {
            Some(BigRational::new(num.clone(), den.clone()))
        }
    }

    fn random_nonzero<R: Rng + ?Sized>(rng: &mut R, bound: u64) -> Self {
        let v = rng.gen_range(1..=bound.max(1));
        BigRational::from_integer(BigInt::from(v))
    }

    fn split_sign(&self) -> (bool, String) {
        (self.is_negative(), self.abs().to_string())
    }
}

/// Residues modulo the prime `P`, stored in `[0, P)`.
///
/// `P` must be a prime below 2^32 so that products fit in a `u64`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub const MODULUS: u64 = P;

    pub fn new(v: u64) -> Self {
        Fp(v % P)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self.0;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % P;
            }
            base = base * base % P;
            e >>= 1;
        }
        Fp(acc)
    }

    fn from_bigint(v: &BigInt) -> Self {
        let r = v.mod_floor(&BigInt::from(P));
        Fp(r.to_u64().expect("residue fits in u64"))
    }
}

impl<const P: u64> Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.0, P)
    }
}

impl<const P: u64> Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let s = self.0 + rhs.0;
        Fp(if s >= P { s - P } else { s })
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp(if self.0 >= rhs.0 { self.0 - rhs.0 } else { self.0 + P - rhs.0 })
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(self.0 * rhs.0 % P)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
}

impl<const P: u64> Inv for Fp<P> {
    type Output = Self;
    fn inv(self) -> Self {
        assert!(self.0 != 0, "inverse of zero in GF({P})");
        self.pow(P - 2)
    }
}

impl<const P: u64> Div for Fp<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.inv()
    }
}

impl<const P: u64> Field for Fp<P> {
    fn descriptor() -> FieldDescriptor {
        FieldDescriptor::Prime(P)
    }

    fn from_i64(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u64)
    }

    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self> {
        let d = Self::from_bigint(den);
        if d.is_zero() {
            None
        } else {
            Some(Self::from_bigint(num) / d)
        }
    }

    fn random_nonzero<R: Rng + ?Sized>(rng: &mut R, _bound: u64) -> Self {
        Fp(rng.gen_range(1..P))
    }

    fn split_sign(&self) -> (bool, String) {
        if self.0 > P / 2 {
            (true, (P - self.0).to_string())
        } else {
            (false, self.0.to_string())
        }
    }
}

/// Prime moduli for which the runtime dispatch instantiates [`Fp`].
pub const SUPPORTED_PRIMES: [u64; 4] = [32003, 65521, 1_000_003, 2_147_483_647];

/// The 𝔽ₚ used by the built-in three-variable corpus entry.
pub type F32003 = Fp<32003>;
