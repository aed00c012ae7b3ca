//! Scalar field abstraction: exact rationals or binary floats.
//!
//! A computation is generic over one [`Scalar`] type, so exact and float
//! values never mix inside a single evaluation. Conversion to `f64` is
//! explicit and one-way.

use std::fmt;

use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;
use num::traits::{Signed, ToPrimitive};

/// Arbitrary-precision rational, always gcd-reduced with the sign on the numerator.
pub type Exact = RBig;

pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialOrd
    + Signed
    + std::ops::AddAssign
    + std::ops::SubAssign
    + Send
    + Sync
    + 'static
{
    /// `true` for exact rational arithmetic.
    const EXACT: bool;

    fn from_int(v: i64) -> Self;

    /// `num / den`; `den` must be nonzero.
    fn from_frac(num: i64, den: i64) -> Self;

    fn from_exact(v: &Exact) -> Self;

    /// Float-to-scalar conversion. Exact mode represents the binary value exactly.
    fn from_f64(v: f64) -> Self;

    fn to_f64(&self) -> f64;

    /// `"p/q"` (or `"p"`) in exact mode, shortest round-trip decimal in float mode.
    fn render(&self) -> String;

    /// `C(n, k) * a^pa * b^pb` for `a, b > 0`.
    ///
    /// Float mode works in log space so that large binomials do not overflow.
    fn binomial_term(n: u64, k: u64, a: &Self, pa: u64, b: &Self, pb: u64) -> Self;

    fn from_usize(v: usize) -> Self {
        Self::from_int(v as i64)
    }

    fn recip(&self) -> Self {
        Self::one() / self.clone()
    }

    /// Integer power; negative exponents invert.
    fn pow_int(&self, e: i64) -> Self {
        let p = num::pow(self.clone(), e.unsigned_abs() as usize);
        if e < 0 {
            p.recip()
        } else {
            p
        }
    }
}

impl Scalar for Exact {
    const EXACT: bool = true;

    fn from_int(v: i64) -> Self {
        RBig::from(v)
    }

    fn from_frac(num: i64, den: i64) -> Self {
        RBig::from_parts_signed(IBig::from(num), IBig::from(den))
    }

    fn from_exact(v: &Exact) -> Self {
        v.clone()
    }

    fn from_f64(v: f64) -> Self {
        RBig::try_from(v).unwrap_or(RBig::ZERO)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn render(&self) -> String {
        self.to_string()
    }

    fn binomial_term(n: u64, k: u64, a: &Self, pa: u64, b: &Self, pb: u64) -> Self {
        if k > n {
            return RBig::ZERO;
        }
        let k = k.min(n - k);
        let c = (0..k).fold(UBig::ONE, |c, i| c * UBig::from(n - i) / UBig::from(i + 1));
        RBig::from(c)
            * num::pow(a.clone(), pa as usize)
            * num::pow(b.clone(), pb as usize)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn from_frac(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_exact(v: &Exact) -> Self {
        ToPrimitive::to_f64(v).unwrap_or(f64::NAN)
    }

    fn from_f64(v: f64) -> Self {
        v
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn render(&self) -> String {
        format!("{self:?}")
    }

    fn binomial_term(n: u64, k: u64, a: &Self, pa: u64, b: &Self, pb: u64) -> Self {
        if k > n {
            return 0.0;
        }
        let mut log = statrs::function::factorial::ln_binomial(n, k);
        if pa > 0 {
            log += pa as f64 * a.ln();
        }
        if pb > 0 {
            log += pb as f64 * b.ln();
        }
        log.exp()
    }
}

/// Exact rational from a literal such as `"3"`, `"-2/7"` or `"0.125"`.
pub fn parse_exact(s: &str) -> Option<Exact> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: IBig = p.trim().parse().ok()?;
        let q: IBig = q.trim().parse().ok()?;
        if q == IBig::ZERO {
            return None;
        }
        return Some(RBig::from_parts_signed(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.trim_start().starts_with('-');
        let int_part: IBig = if int.is_empty() || int == "-" || int == "+" {
            IBig::ZERO
        } else {
            int.parse().ok()?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let scale = UBig::from(10u8).pow(frac.len());
        let frac_part: IBig = frac.parse().ok()?;
        let mag = int_part.abs() * IBig::from(scale.clone()) + frac_part;
        let num = if negative { -mag } else { mag };
        return Some(RBig::from_parts(num, scale));
    }
    let v: IBig = s.parse().ok()?;
    Some(RBig::from(v))
}

/// Full decimal expansion when the denominator has no prime factors besides 2 and 5.
pub fn terminating_decimal(v: &Exact) -> Option<String> {
    let mut den = v.denominator().clone();
    let (mut twos, mut fives) = (0usize, 0usize);
    let (two, five) = (UBig::from(2u8), UBig::from(5u8));
    while (&den % &two) == UBig::ZERO {
        den /= &two;
        twos += 1;
    }
    while (&den % &five) == UBig::ZERO {
        den /= &five;
        fives += 1;
    }
    if den != UBig::ONE {
        return None;
    }
    let places = twos.max(fives);
    let scaled = v.numerator().clone() * IBig::from(UBig::from(10u8).pow(places)) / IBig::from(v.denominator().clone());
    let digits = scaled.abs().to_string();
    let sign = if v.is_negative() { "-" } else { "" };
    if places == 0 {
        return Some(format!("{sign}{digits}"));
    }
    let padded = format!("{digits:0>width$}", width = places + 1);
    let (int, frac) = padded.split_at(padded.len() - places);
    Some(format!("{sign}{int}.{frac}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_is_canonical() {
        let v = Exact::from_frac(6, -8);
        assert_eq!(v.render(), "-3/4");
        assert_eq!(Exact::from_frac(4, 2).render(), "2");
    }

    #[test]
    fn parses_literals() {
        assert_eq!(parse_exact("-2/7").unwrap(), Exact::from_frac(-2, 7));
        assert_eq!(parse_exact("0.125").unwrap(), Exact::from_frac(1, 8));
        assert_eq!(parse_exact("-1.5").unwrap(), Exact::from_frac(-3, 2));
        assert_eq!(parse_exact("17").unwrap(), Exact::from_int(17));
        assert!(parse_exact("1/0").is_none());
        assert!(parse_exact("abc").is_none());
    }

    #[test]
    fn terminating_expansions() {
        assert_eq!(terminating_decimal(&Exact::from_frac(-3, 8)).unwrap(), "-0.375");
        assert_eq!(terminating_decimal(&Exact::from_frac(1, 50)).unwrap(), "0.02");
        assert_eq!(terminating_decimal(&Exact::from_int(-12)).unwrap(), "-12");
        assert!(terminating_decimal(&Exact::from_frac(1, 3)).is_none());
    }

    #[test]
    fn binomial_term_modes_agree() {
        let half = Exact::from_frac(1, 2);
        let e = Exact::binomial_term(10, 3, &half, 7, &half, 3);
        assert_eq!(e, Exact::from_frac(120, 1024));
        let f = f64::binomial_term(10, 3, &0.5, 7, &0.5, 3);
        assert!((f - 120.0 / 1024.0).abs() < 1e-14);
    }

    #[test]
    fn powi_negative() {
        assert_eq!(Exact::from_int(2).pow_int(-3), Exact::from_frac(1, 8));
        assert_eq!(Scalar::pow_int(&3.0f64, 2), 9.0);
    }
}
