//! Numeric abstraction shared by every computation in the crate.
//!
//! All time functions, domains and distances are generic over [`Scalar`], so
//! a knowledge base can be evaluated in `f64` for everyday use or in
//! [`Rational64`] when results must be exact.

use std::fmt::Debug;

use num_rational::Rational64;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// A real-number stand-in: `f32`, `f64` or an exact rational.
pub trait Scalar:
    Clone + Debug + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Parses `-?DIGITS(.DIGITS)?`. No exponent form.
    fn parse_decimal(text: &str) -> Option<Self>;

    /// Shortest decimal text that parses back to the same value.
    fn to_decimal(&self) -> String;

    fn floor(&self) -> Self;

    /// Fixed-point rendering with `digits` fraction digits, rounding half away
    /// from zero.
    fn to_fixed(&self, digits: u32) -> String;

    fn from_int(value: i64) -> Self {
        Self::from_i64(value).expect("integer fits every scalar type")
    }

    fn hundred() -> Self {
        Self::from_int(100)
    }
}

/// Clamps `value` into `[lo, hi]`.
pub fn clamp<S: Scalar>(value: S, lo: &S, hi: &S) -> S {
    if value < *lo {
        lo.clone()
    } else if value > *hi {
        hi.clone()
    } else {
        value
    }
}

/// Clamps into the percentage range `[0, 100]`.
pub fn clamp_percent<S: Scalar>(value: S) -> S {
    clamp(value, &S::zero(), &S::hundred())
}

/// Euclidean remainder: the result is always in `[0, period)` for `period > 0`.
pub fn wrap<S: Scalar>(t: &S, period: &S) -> S {
    let quotient = (t.clone() / period.clone()).floor();
    let r = t.clone() - quotient * period.clone();
    // guard against rounding pushing a float result onto `period` itself
    if r >= *period || r < S::zero() {
        S::zero()
    } else {
        r
    }
}

pub fn max_of<S: Scalar>(a: S, b: S) -> S {
    if b > a {
        b
    } else {
        a
    }
}

pub fn min_of<S: Scalar>(a: S, b: S) -> S {
    if b < a {
        b
    } else {
        a
    }
}

fn split_decimal(text: &str) -> Option<(bool, &str, &str)> {
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    let all_digits = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
    if int_part.is_empty() || !all_digits(int_part) || !all_digits(frac_part) {
        return None;
    }
    if body.contains('.') && frac_part.is_empty() {
        return None;
    }
    Some((negative, int_part, frac_part))
}

/// Rounds a plain decimal string half away from zero.
fn round_decimal_text(text: &str, digits: u32) -> String {
    let digits = digits as usize;
    let (negative, int_part, frac_part) =
        split_decimal(text).expect("scalar decimal rendering is always well-formed");
    let mut all: Vec<u8> = int_part.bytes().map(|b| b - b'0').collect();
    let mut frac: Vec<u8> = frac_part.bytes().map(|b| b - b'0').collect();
    let round_up = frac.len() > digits && frac[digits] >= 5;
    frac.resize(digits, 0);
    all.extend(frac);
    if round_up {
        let mut i = all.len();
        loop {
            if i == 0 {
                all.insert(0, 1);
                break;
            }
            i -= 1;
            if all[i] == 9 {
                all[i] = 0;
            } else {
                all[i] += 1;
                break;
            }
        }
    }
    let split = all.len() - digits;
    let int_text: String = all[..split].iter().map(|d| (d + b'0') as char).collect();
    let frac_text: String = all[split..].iter().map(|d| (d + b'0') as char).collect();
    let is_zero = all.iter().all(|d| *d == 0);
    let sign = if negative && !is_zero { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_text}")
    } else {
        format!("{sign}{int_text}.{frac_text}")
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn parse_decimal(text: &str) -> Option<Self> {
                split_decimal(text)?;
                text.parse().ok()
            }

            fn to_decimal(&self) -> String {
                if *self == 0.0 {
                    return "0".to_string();
                }
                format!("{}", self)
            }

            fn floor(&self) -> Self {
                <$t>::floor(*self)
            }

            fn to_fixed(&self, digits: u32) -> String {
                round_decimal_text(&self.to_decimal(), digits)
            }
        }
    };
}

float_scalar!(f32);
float_scalar!(f64);

fn pow10(exp: u32) -> Option<i64> {
    10i64.checked_pow(exp)
}

impl Scalar for Rational64 {
    fn parse_decimal(text: &str) -> Option<Self> {
        let (negative, int_part, frac_part) = split_decimal(text)?;
        let digits = format!("{int_part}{frac_part}");
        let magnitude: i64 = digits.parse().ok()?;
        let denom = pow10(frac_part.len() as u32)?;
        let numer = if negative { -magnitude } else { magnitude };
        Some(Rational64::new(numer, denom))
    }

    fn to_decimal(&self) -> String {
        let numer = *self.numer();
        let denom = *self.denom();
        let mut rest = denom;
        let (mut twos, mut fives) = (0u32, 0u32);
        while rest % 2 == 0 {
            rest /= 2;
            twos += 1;
        }
        while rest % 5 == 0 {
            rest /= 5;
            fives += 1;
        }
        if rest != 1 {
            // non-terminating expansion: the nearest float is the best a
            // decimal can do
            return (numer as f64 / denom as f64).to_decimal();
        }
        let scale = twos.max(fives);
        let factor = pow10(scale).expect("reduced denominator fits i64") / denom;
        let scaled = numer
            .checked_mul(factor)
            .expect("decimal expansion overflow");
        let negative = scaled < 0;
        let digits = scaled.unsigned_abs().to_string();
        let scale = scale as usize;
        let padded = if digits.len() <= scale {
            format!("{}{}", "0".repeat(scale + 1 - digits.len()), digits)
        } else {
            digits
        };
        let (int_text, frac_text) = padded.split_at(padded.len() - scale);
        let sign = if negative { "-" } else { "" };
        if frac_text.is_empty() {
            format!("{sign}{int_text}")
        } else {
            format!("{sign}{int_text}.{frac_text}")
        }
    }

    fn floor(&self) -> Self {
        Rational64::floor(self)
    }

    fn to_fixed(&self, digits: u32) -> String {
        let factor = Rational64::from_integer(pow10(digits).expect("display precision"));
        let scaled = *self * factor;
        let half = Rational64::new(1, 2);
        let rounded = if scaled < Rational64::from_integer(0) {
            -((-scaled) + half).floor()
        } else {
            (scaled + half).floor()
        };
        let as_decimal = (rounded / factor).to_decimal();
        round_decimal_text(&as_decimal, digits)
    }
}
