//! Exact non-negative rationals for preferences and utilities.

use core::fmt;
use core::iter::Sum;
use core::ops::Add;
use core::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;

/// Non-negative exact rational. Preferences are parsed from decimal literals
/// and utilities are sums of preferences, so comparisons never depend on
/// floating-point rounding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(Ratio<u64>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseRationalError;

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("expected a decimal number such as 0.75")
    }
}

impl core::error::Error for ParseRationalError {}

impl Rational {
    pub const ZERO: Rational = Rational(Ratio::new_raw(0, 1));
    pub const ONE: Rational = Rational(Ratio::new_raw(1, 1));

    pub fn new(numer: u64, denom: u64) -> Self {
        Rational(Ratio::new(numer, denom))
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    /// Parses `digits[.digits]`.
    pub fn parse_decimal(s: &str) -> Result<Self, ParseRationalError> {
        let (int, frac) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        if int.is_empty() && frac.is_empty() {
            return Err(ParseRationalError);
        }
        let all_digits = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
        if !all_digits(int) || !all_digits(frac) || (s.contains('.') && frac.is_empty()) {
            return Err(ParseRationalError);
        }
        // at most 18 fractional digits keeps 10^k inside u64
        if frac.len() > 18 {
            return Err(ParseRationalError);
        }
        let int_val: u64 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| ParseRationalError)?
        };
        let denom = 10u64.pow(frac.len() as u32);
        let frac_val: u64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| ParseRationalError)?
        };
        let numer = int_val
            .checked_mul(denom)
            .and_then(|v| v.checked_add(frac_val))
            .ok_or(ParseRationalError)?;
        Ok(Rational(Ratio::new(numer, denom)))
    }

    fn is_finite_decimal(&self) -> bool {
        let mut d = self.denom();
        while d.is_multiple_of(2) {
            d /= 2;
        }
        while d.is_multiple_of(5) {
            d /= 5;
        }
        d == 1
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational(self.0 + rhs.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::ZERO, Add::add)
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Rational::parse_decimal(s)
    }
}

/// Shortest exact decimal when one exists (`2.15`, `0`, `1`), `p/q` otherwise.
impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.is_finite_decimal() {
            return write!(f, "{}/{}", self.numer(), self.denom());
        }
        let (int, mut rem) = self.numer().div_rem(&self.denom());
        write!(f, "{int}")?;
        if rem == 0 {
            return Ok(());
        }
        f.write_str(".")?;
        let d = self.denom();
        while rem != 0 {
            // rem < d, and d divides some power of ten, so this terminates
            let scaled = rem as u128 * 10;
            let digit = scaled / d as u128;
            rem = (scaled % d as u128) as u64;
            write!(f, "{digit}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn parses_and_sums_exactly() {
        let a = Rational::parse_decimal("0.75").unwrap();
        let b = Rational::parse_decimal("0.8").unwrap();
        let c = Rational::parse_decimal("0.6").unwrap();
        let s = a + b + c;
        assert_eq!(s, Rational::parse_decimal("2.15").unwrap());
        assert_eq!(s.to_string(), "2.15");
        assert_eq!(Rational::parse_decimal("1.0").unwrap(), Rational::ONE);
        assert_eq!(Rational::parse_decimal("1").unwrap().to_string(), "1");
        assert_eq!(Rational::ZERO.to_string(), "0");
        assert_eq!(Rational::new(1, 3).to_string(), "1/3");
        assert_eq!(Rational::parse_decimal(".5").unwrap(), Rational::new(1, 2));
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", ".", "1.", "a", "-1", "0.7.5", "1e3"] {
            assert!(Rational::parse_decimal(bad).is_err(), "{bad}");
        }
    }
}
