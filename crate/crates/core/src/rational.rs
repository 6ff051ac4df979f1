//! Exact rational helpers shared by every module.
//!
//! All coordinates and slopes are [`Rational`]s (reduced, positive
//! denominator). Nothing in the crate touches floating point except the
//! display-only decimal rendering used by the SVG backend.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// `p/q` as a reduced rational. Panics if `q == 0`.
pub fn r(p: i64, q: i64) -> Rational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn half() -> Rational {
    r(1, 2)
}

/// `true` when `0 <= x <= 1`.
pub fn in_unit(x: &Rational) -> bool {
    !x.is_negative() && *x <= Rational::one()
}

/// Parses `p/q`, `p` or `-p/q` (surrounding whitespace ignored).
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Canonical text form: `p/q`, or `p` for integers.
pub fn fmt_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Decimal rendering rounded half-away-from-zero to `places` digits, with
/// trailing zeros trimmed.
pub fn to_decimal(x: &Rational, places: u32) -> String {
    let scale = BigInt::from(10u32).pow(places);
    let scaled = x * BigRational::from_integer(scale.clone());
    let neg = scaled.is_negative();
    let abs = scaled.abs();
    let (q, rem) = abs.numer().div_rem(abs.denom());
    let rounded = if rem * BigInt::from(2) >= *abs.denom() { q + BigInt::one() } else { q };
    let (int_part, frac_part) = rounded.div_rem(&scale);
    let mut out = String::new();
    if neg && !rounded.is_zero() {
        out.push('-');
    }
    out.push_str(&int_part.to_string());
    if places > 0 && !frac_part.is_zero() {
        let digits = format!("{:0>width$}", frac_part.to_string(), width = places as usize);
        out.push('.');
        out.push_str(digits.trim_end_matches('0'));
    }
    out
}

/// Serde adapters that write rationals as `"p/q"` strings.
pub mod ser {
    use super::{fmt_rational, Rational};
    use serde::ser::{SerializeSeq, SerializeTuple};
    use serde::Serializer;

    pub fn rat<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(x))
    }

    pub fn opt_rat<S: Serializer>(x: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_str(&fmt_rational(v)),
            None => s.serialize_none(),
        }
    }

    pub fn rat_vec<S: Serializer>(xs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&fmt_rational(x))?;
        }
        seq.end()
    }

    pub fn point_vec<S: Serializer>(pts: &[(Rational, Rational)], s: S) -> Result<S::Ok, S::Error> {
        struct Pt<'a>(&'a Rational, &'a Rational);
        impl serde::Serialize for Pt<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut t = s.serialize_tuple(2)?;
                t.serialize_element(&fmt_rational(self.0))?;
                t.serialize_element(&fmt_rational(self.1))?;
                t.end()
            }
        }
        let mut seq = s.serialize_seq(Some(pts.len()))?;
        for (x, y) in pts {
            seq.serialize_element(&Pt(x, y))?;
        }
        seq.end()
    }
}
