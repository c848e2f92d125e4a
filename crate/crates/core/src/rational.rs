//! Exact rationals for E(s²), bounds and wordlength patterns.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// Significant digits used by [`Rational::decimal`] in reports.
pub const DISPLAY_DIGITS: usize = 12;

/// An exact rational number, always held in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Panics if `den` is zero.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Rational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(value.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// Decimal rendering with [`DISPLAY_DIGITS`] significant digits.
    pub fn decimal(&self) -> String {
        self.to_significant(DISPLAY_DIGITS)
    }

    /// Renders with `digits` significant digits, rounding half away from
    /// zero and trimming trailing zeros.
    pub fn to_significant(&self, digits: usize) -> String {
        assert!(digits > 0);
        if self.is_zero() {
            return "0".to_string();
        }
        let a = self.numer().abs();
        let b = self.denom().clone();
        let ten = BigInt::from(10u32);

        // exponent e with 10^e <= a/b < 10^(e+1)
        let mut e = a.to_string().len() as i64 - b.to_string().len() as i64;
        loop {
            let (lhs, rhs) = scaled(&a, &b, -e, &ten);
            if lhs < rhs {
                e -= 1;
                continue;
            }
            let (lhs, rhs) = scaled(&a, &b, -(e + 1), &ten);
            if lhs >= rhs {
                e += 1;
                continue;
            }
            break;
        }

        let shift = digits as i64 - 1 - e;
        let (num, den) = scaled(&a, &b, shift, &ten);
        // round half away from zero
        let mut mantissa = (num * 2u32 + &den).div_floor(&(den * 2u32));
        if mantissa == ten.pow(digits as u32) {
            mantissa /= 10u32;
            e += 1;
        }
        let s = mantissa.to_string();

        let mut out = String::new();
        if self.is_negative() {
            out.push('-');
        }
        if e >= digits as i64 - 1 {
            out.push_str(&s);
            out.push_str(&"0".repeat((e - (digits as i64 - 1)) as usize));
            return out;
        }
        let body = if e >= 0 {
            let split = (e + 1) as usize;
            format!("{}.{}", &s[..split], &s[split..])
        } else {
            format!("0.{}{}", "0".repeat((-e - 1) as usize), s)
        };
        let body = body.trim_end_matches('0').trim_end_matches('.');
        out.push_str(body);
        out
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

/// Returns `(a * 10^k, b)` for `k >= 0` or `(a, b * 10^-k)` otherwise.
fn scaled(a: &BigInt, b: &BigInt, k: i64, ten: &BigInt) -> (BigInt, BigInt) {
    if k >= 0 {
        (a * ten.pow(k as u32), b.clone())
    } else {
        (a.clone(), b * ten.pow((-k) as u32))
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_integer(v)
    }
}

impl From<BigInt> for Rational {
    fn from(v: BigInt) -> Self {
        Rational::from_integer(v)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom().is_one() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

fn json_int(v: &BigInt) -> serde_json::Value {
    match v.to_i64() {
        Some(x) => serde_json::Value::from(x),
        None => serde_json::Value::from(v.to_string()),
    }
}

/// Serialized as `{num, den, decimal}`. Integers that do not fit an `i64`
/// are emitted as strings.
impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Rational", 3)?;
        s.serialize_field("num", &json_int(self.numer()))?;
        s.serialize_field("den", &json_int(self.denom()))?;
        s.serialize_field("decimal", &self.decimal())?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn lowest_terms() {
        let x = r(144, 21);
        assert_eq!(x.numer(), &BigInt::from(48));
        assert_eq!(x.denom(), &BigInt::from(7));
        let y = r(3, -6);
        assert_eq!(y.to_string(), "-1/2");
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(r(144, 13).decimal(), "11.0769230769");
        assert_eq!(r(8, 105).decimal(), "0.0761904761905");
        assert_eq!(r(16, 1).decimal(), "16");
        assert_eq!(r(1, 2).decimal(), "0.5");
        assert_eq!(r(-2, 3).decimal(), "-0.666666666667");
        assert_eq!(Rational::zero().decimal(), "0");
        assert_eq!(r(2, 3).to_significant(1), "0.7");
        assert_eq!(r(999_999, 1).to_significant(3), "1000000");
        assert_eq!(r(1, 1000).decimal(), "0.001");
        assert_eq!(Rational::from_integer(123_456_789_012_345_i64).decimal(), "123456789012000");
    }

    #[test]
    fn serializes_num_den_decimal() {
        let v = serde_json::to_value(r(32, 3)).unwrap();
        assert_eq!(v["num"], 32);
        assert_eq!(v["den"], 3);
        assert_eq!(v["decimal"], "10.6666666667");
    }

    #[test]
    fn arithmetic() {
        assert_eq!(&r(1, 2) + &r(1, 3), r(5, 6));
        assert_eq!(r(1, 2) - r(1, 3), r(1, 6));
        assert_eq!(&r(2, 3) * &r(3, 4), r(1, 2));
        assert_eq!(r(2, 3) / r(4, 3), r(1, 2));
        assert!(r(1, 3) < r(1, 2));
    }
}
