//! Exact scalar fields: the rationals and prime fields GF(p).

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{EngineError, Result};

/// Which field a computation runs over, as recorded in files and reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldKind {
    Rational,
    Prime { p: u64 },
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Rational => write!(f, "rational"),
            FieldKind::Prime { p } => write!(f, "prime:{p}"),
        }
    }
}

/// An exact field scalar.
///
/// Everything above `linalg` is generic over this trait.
pub trait Field:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Eq
    + Hash
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self;

    fn from_i64(v: i64) -> Self;

    /// Image of the fraction `num/den`; fails if `den` vanishes in the field.
    fn from_fraction(num: &BigInt, den: &BigInt) -> Result<Self>;

    fn kind() -> FieldKind;

    /// `self -= a * b`, the inner step of elimination.
    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        let t = a.clone() * b.clone();
        *self = self.clone() - t;
    }

    /// Parse a coefficient written as `a` or `a/b`.
    fn parse_coeff(s: &str) -> Result<Self> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num = BigInt::from_str(n)
            .map_err(|_| EngineError::Parse(format!("bad coefficient numerator {n:?}")))?;
        let den = BigInt::from_str(d)
            .map_err(|_| EngineError::Parse(format!("bad coefficient denominator {d:?}")))?;
        Self::from_fraction(&num, &den)
    }
}

// ---------------------------------------------------------------------------
// Rationals

/// Arbitrary-precision rational with an inline fast path for values whose
/// numerator and denominator fit in `i64`.
///
/// Values are always normalized: lowest terms, positive denominator, and the
/// inline form is used whenever it fits, so structural equality is value
/// equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Rational {
    Small(i64, i64),
    Big(Box<BigRational>),
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        if num == 0 {
            return Rational::Small(0, 1);
        }
        let g = gcd_u128(num.unsigned_abs(), den.unsigned_abs()) as i128;
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rational::Small(n, d),
            _ => Rational::Big(Box::new(BigRational::new_raw(BigInt::from(n), BigInt::from(d)))),
        }
    }

    fn from_big(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Rational::Small(n, d),
            _ => Rational::Big(Box::new(r)),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rational::Big(b) => (**b).clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Rational::Small(n, _) => BigInt::from(*n),
            Rational::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Rational::Small(_, d) => BigInt::from(*d),
            Rational::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rational::Small(_, d) => *d == 1,
            Rational::Big(b) => b.is_integer(),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small(n, 1) => write!(f, "{n}"),
            Rational::Small(n, d) => write!(f, "{n}/{d}"),
            Rational::Big(b) if b.is_integer() => write!(f, "{}", b.numer()),
            Rational::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational::Small(0, 1)
    }
    fn is_zero(&self) -> bool {
        matches!(self, Rational::Small(0, _))
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational::Small(1, 1)
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        match (&self, &rhs) {
            (Rational::Small(a, 1), Rational::Small(c, 1)) => {
                match a.checked_add(*c) {
                    Some(s) => Rational::Small(s, 1),
                    None => Rational::from_i128(*a as i128 + *c as i128, 1),
                }
            }
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                Rational::from_i128(a * d + c * b, b * d)
            }
            _ => Rational::from_big(self.to_big() + rhs.to_big()),
        }
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        self + (-rhs)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match self {
            Rational::Small(n, d) => match n.checked_neg() {
                Some(m) => Rational::Small(m, d),
                None => Rational::from_i128(-(n as i128), d as i128),
            },
            Rational::Big(b) => Rational::from_big(-*b),
        }
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        match (&self, &rhs) {
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                if *a == 0 || *c == 0 {
                    return Rational::zero();
                }
                Rational::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Rational::from_big(self.to_big() * rhs.to_big()),
        }
    }
}

impl Div for Rational {
    type Output = Rational;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Rational) -> Rational {
        self * rhs.inv()
    }
}

impl Field for Rational {
    fn inv(&self) -> Self {
        match self {
            Rational::Small(0, _) => panic!("inverse of zero"),
            Rational::Small(n, d) => Rational::from_i128(*d as i128, *n as i128),
            Rational::Big(b) => Rational::from_big(b.recip()),
        }
    }

    fn from_i64(v: i64) -> Self {
        Rational::Small(v, 1)
    }

    fn from_fraction(num: &BigInt, den: &BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(EngineError::Parse("zero denominator".into()));
        }
        Ok(Rational::from_big(BigRational::new(num.clone(), den.clone())))
    }

    fn kind() -> FieldKind {
        FieldKind::Rational
    }

    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        if let (Rational::Small(x, 1), Rational::Small(y, 1), Rational::Small(z, 1)) = (&*self, a, b) {
            if let Some(p) = y.checked_mul(*z) {
                if let Some(s) = x.checked_sub(p) {
                    *self = Rational::Small(s, 1);
                    return;
                }
            }
        }
        let t = a.clone() * b.clone();
        *self = std::mem::replace(self, Rational::zero()) - t;
    }
}

// ---------------------------------------------------------------------------
// Prime fields

/// Element of GF(P), stored as a representative in `[0, P)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Fp<const P: u32>(u32);

impl<const P: u32> Fp<P> {
    pub fn new(v: u64) -> Self {
        Fp((v % P as u64) as u32)
    }

    pub fn value(self) -> u32 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp::<P>(1 % P);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl<const P: u32> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u32> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u32> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let s = self.0 as u64 + rhs.0 as u64;
        Fp(if s >= P as u64 { s - P as u64 } else { s } as u32)
    }
}

impl<const P: u32> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        if self.0 >= rhs.0 {
            Fp(self.0 - rhs.0)
        } else {
            Fp((self.0 as u64 + P as u64 - rhs.0 as u64) as u32)
        }
    }
}

impl<const P: u32> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        if self.0 == 0 {
            self
        } else {
            Fp(P - self.0)
        }
    }
}

impl<const P: u32> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u64 * rhs.0 as u64) % P as u64) as u32)
    }
}

impl<const P: u32> Div for Fp<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.inv()
    }
}

impl<const P: u32> Field for Fp<P> {
    fn inv(&self) -> Self {
        assert!(self.0 != 0, "inverse of zero");
        self.pow(P as u64 - 2)
    }

    fn from_i64(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u32)
    }

    fn from_fraction(num: &BigInt, den: &BigInt) -> Result<Self> {
        let p = BigInt::from(P);
        let n = num.mod_floor(&p).to_u64().unwrap_or(0);
        let d = den.mod_floor(&p).to_u64().unwrap_or(0);
        if d == 0 {
            return Err(EngineError::Parse(format!(
                "denominator {den} vanishes modulo {P}"
            )));
        }
        Ok(Fp::<P>::new(n) / Fp::<P>::new(d))
    }

    fn kind() -> FieldKind {
        FieldKind::Prime { p: P as u64 }
    }

    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        *self = *self - *a * *b;
    }
}

/// Primes for which a `Fp<P>` instantiation is compiled in.
pub const SUPPORTED_PRIMES: &[u64] = &[
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 101, 997, 7919, 32003, 65521,
    1_000_003, 2_147_483_647,
];

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Dispatch a generic body over the field named by a [`FieldKind`].
///
/// `$body` is a generic function item `fn<F: Field>() -> R`; the macro
/// expands to a `Result<R>` that errors for primes without an instantiation.
#[macro_export]
macro_rules! with_field {
    ($kind:expr, $f:ident => $body:expr) => {{
        use $crate::field::FieldKind;
        match $kind {
            FieldKind::Rational => {
                type $f = $crate::field::Rational;
                Ok($body)
            }
            FieldKind::Prime { p } => $crate::with_field!(@primes p, $f, $body,
                2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 101, 997, 7919,
                32003, 65521, 1000003, 2147483647),
        }
    }};
    (@primes $p:ident, $f:ident, $body:expr, $($q:literal),*) => {
        match $p {
            $( $q => { type $f = $crate::field::Fp<$q>; Ok($body) } )*
            other => Err($crate::error::EngineError::Config(format!(
                "prime {} is not supported; supported primes: {:?}",
                other, $crate::field::SUPPORTED_PRIMES
            ))),
        }
    };
}

/// Rational from a `BigRational`, normalizing to the inline form when possible.
impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational::from_big(r)
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::Small(v, 1)
    }
}

impl Rational {
    pub fn abs(&self) -> Rational {
        match self {
            Rational::Small(n, d) if *n >= 0 => Rational::Small(*n, *d),
            _ => Rational::from_big(self.to_big().abs()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type F7 = Fp<7>;

    #[test]
    fn rational_normalizes() {
        assert_eq!(Rational::new(2, 4), Rational::new(1, 2));
        assert_eq!(Rational::new(3, -6), Rational::new(-1, 2));
        assert_eq!(Rational::new(0, -5), Rational::zero());
        assert_eq!(Rational::new(6, 3).to_string(), "2");
        assert_eq!(Rational::new(-3, 9).to_string(), "-1/3");
    }

    #[test]
    fn rational_overflow_promotes_and_demotes() {
        let big = Rational::from_i64(i64::MAX);
        let s = big.clone() + big.clone();
        assert!(matches!(s, Rational::Big(_)));
        let back = s - big.clone();
        assert_eq!(back, big);
        assert!(matches!(back, Rational::Small(..)));
        let sq = big.clone() * big.clone();
        assert_eq!(sq.clone() / big.clone(), big);
        let min = Rational::from_i64(i64::MIN);
        assert_eq!((-min.clone()).to_big(), -min.to_big());
        assert!(matches!(-min, Rational::Big(_)));
    }

    #[test]
    fn rational_field_laws() {
        let a = Rational::new(3, 7);
        let b = Rational::new(-5, 11);
        assert_eq!(a.clone() * a.inv(), Rational::one());
        assert_eq!((a.clone() + b.clone()) - b.clone(), a);
        let mut c = Rational::from_i64(10);
        c.sub_mul_assign(&Rational::from_i64(3), &Rational::from_i64(4));
        assert_eq!(c, Rational::from_i64(-2));
    }

    #[test]
    fn prime_field_basics() {
        assert_eq!(F7::from_i64(-1), F7::new(6));
        assert_eq!(F7::new(3) * F7::new(5), F7::new(1));
        assert_eq!(F7::new(3).inv(), F7::new(5));
        assert_eq!(F7::new(2) - F7::new(5), F7::new(4));
        assert_eq!(F7::parse_coeff("1/2").unwrap(), F7::new(4));
        assert!(F7::parse_coeff("1/7").is_err());
    }

    #[test]
    fn parse_rational_coeffs() {
        assert_eq!(Rational::parse_coeff("-6/4").unwrap(), Rational::new(-3, 2));
        assert_eq!(Rational::parse_coeff(" 5 ").unwrap(), Rational::from_i64(5));
        assert!(Rational::parse_coeff("1/0").is_err());
        assert!(Rational::parse_coeff("x").is_err());
    }

    #[test]
    fn dispatch_macro() {
        fn name<F: Field>() -> String {
            F::kind().to_string()
        }
        let k = FieldKind::Prime { p: 32003 };
        let r: Result<String> = with_field!(k, F => name::<F>());
        assert_eq!(r.unwrap(), "prime:32003");
        let r: Result<String> = with_field!(FieldKind::Prime { p: 9973 }, F => name::<F>());
        assert!(r.is_err());
        assert!(SUPPORTED_PRIMES.iter().all(|&p| is_prime(p)));
    }
}
