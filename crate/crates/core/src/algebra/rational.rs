//! The exact scalar: an arbitrary-precision fraction kept in lowest terms.
//!
//! `num_rational::BigRational` already maintains the invariants we need
//! (positive denominator, reduced, zero as `0/1`), and its `Display` and
//! `FromStr` produce exactly the `"p/q"` / `"p"` text form used in reports.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::AlgebraError;

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Decimal text form: `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn parse_rational(text: &str) -> Result<Rational, AlgebraError> {
    let trimmed = text.trim();
    let parsed: Rational = trimmed
        .parse()
        .map_err(|_| AlgebraError::Parse(format!("not a rational number: {trimmed:?}")))?;
    Ok(parsed)
}

/// `n!` as an exact rational.
pub fn factorial(n: u32) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    Rational::from_integer(acc)
}

pub fn binomial(n: u32, k: u32) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    Rational::from_integer(acc)
}

pub fn pow_rational(base: &Rational, exp: u32) -> Rational {
    num_traits::pow(base.clone(), exp as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_form_drops_unit_denominator() {
        assert_eq!(format_rational(&rat(4876875, 8)), "4876875/8");
        assert_eq!(format_rational(&int(2875)), "2875");
        assert_eq!(format_rational(&rat(-45, 8)), "-45/8");
        assert_eq!(format_rational(&rat(6, 4)), "3/2");
    }

    #[test]
    fn zero_is_canonical() {
        let z = rat(0, -7);
        assert_eq!(z, Rational::zero());
        assert_eq!(format_rational(&z), "0");
        assert_eq!(z.denom(), &BigInt::one());
    }

    #[test]
    fn parse_round_trips() {
        for text in ["0", "2875", "-12333/64", "46028387589557254161275/314928"] {
            let r = parse_rational(text).unwrap();
            assert_eq!(format_rational(&r), text);
        }
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn combinatorics() {
        assert_eq!(factorial(5), int(120));
        assert_eq!(binomial(5, 2), int(10));
        assert_eq!(binomial(3, 4), int(0));
    }
}
