//! Exact rational scalars, parsing and decimal rendering.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Arbitrary-precision fraction, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

/// Parses `"12"`, `"-0.25"`, `"1e-3"`, `"3/7"` exactly. Never goes through
/// binary floating point.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Invalid(format!("not an exact number: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole
        .bytes()
        .chain(frac.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return Err(bad());
    }
    let num: BigInt = format!("0{whole}{frac}").parse().map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10u32);
    let mut q = if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        q = -q;
    }
    Ok(q)
}

/// `p/q`, or just `p` for integers.
pub fn fraction_string(q: &Rational) -> String {
    if is_integer(q) {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Exact decimal expansion when the reduced denominator has only the prime
/// factors 2 and 5 and the result needs at most `max_digits` digits.
pub fn terminating_decimal(q: &Rational, max_digits: usize) -> Option<String> {
    let mut den = q.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut twos, mut fives) = (0usize, 0usize);
    while den.is_even() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return None;
    }
    let places = twos.max(fives);
    let scaled = q.numer().abs() * num_traits::pow(BigInt::from(10), places) / q.denom();
    let mut digits = scaled.to_string();
    if digits.len() <= places {
        digits = format!("{}{}", "0".repeat(places + 1 - digits.len()), digits);
    }
    let int_len = digits.len() - places;
    let significant = digits.trim_start_matches('0').len().max(1);
    if significant.max(int_len) > max_digits {
        return None;
    }
    let mut out = String::new();
    if q.is_negative() {
        out.push('-');
    }
    out.push_str(&digits[..int_len]);
    if places > 0 {
        out.push('.');
        out.push_str(&digits[int_len..]);
    }
    Some(out)
}

/// Renders `q` rounded half away from zero to `sig` significant digits.
pub fn rounded_decimal(q: &Rational, sig: usize) -> String {
    if q.is_zero() {
        return "0".to_string();
    }
    let ten = BigInt::from(10);
    let a = q.abs();
    // exponent e with 10^e <= a < 10^(e+1)
    let mut e: i64 = (a.numer().to_string().len() as i64) - (a.denom().to_string().len() as i64);
    loop {
        let lower = pow10(e);
        if a < lower {
            e -= 1;
            continue;
        }
        if a >= pow10(e + 1) {
            e += 1;
            continue;
        }
        break;
    }
    let shift = sig as i64 - 1 - e;
    let scaled = &a * pow10(shift);
    let half = rat(1, 2);
    let mut m = (scaled + half).floor().to_integer();
    let mut exp = e;
    if m.to_string().len() > sig {
        m /= &ten;
        exp += 1;
    }
    let digits = m.to_string();
    let sign = if q.is_negative() { "-" } else { "" };
    // value = 0.d1d2... * 10^(exp + 1)
    let point = exp + 1;
    let body = if (-5..=sig as i64).contains(&point) {
        if point <= 0 {
            format!("0.{}{}", "0".repeat((-point) as usize), digits)
        } else if point as usize >= digits.len() {
            format!("{}{}", digits, "0".repeat(point as usize - digits.len()))
        } else {
            format!(
                "{}.{}",
                &digits[..point as usize],
                &digits[point as usize..]
            )
        }
    } else {
        let mut mant = digits[..1].to_string();
        if digits.len() > 1 {
            mant.push('.');
            mant.push_str(&digits[1..]);
        }
        format!("{mant}e{exp}")
    };
    let body = if body.contains('.') && !body.contains('e') {
        body.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        body
    };
    format!("{sign}{body}")
}

fn pow10(e: i64) -> Rational {
    let p = num_traits::pow(BigInt::from(10), e.unsigned_abs() as usize);
    if e >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

/// Number rendering used by the file writers: exact when the value is a
/// terminating decimal of at most 18 digits, otherwise 17 significant digits.
/// The boolean is `true` when the rendering is exact.
pub fn file_number(q: &Rational) -> (String, bool) {
    match terminating_decimal(q, 18) {
        Some(s) => (s, true),
        None => (rounded_decimal(q, 17), false),
    }
}

/// `p/q` followed by the decimal form when it terminates, e.g. `11/2 (5.5)`.
pub fn pretty(q: &Rational) -> String {
    if is_integer(q) {
        return q.numer().to_string();
    }
    match terminating_decimal(q, 18) {
        Some(d) => format!("{} ({d})", fraction_string(q)),
        None => fraction_string(q),
    }
}

/// Lowest common multiple of the denominators.
pub(crate) fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Scales a rational vector to the primitive integer vector with the same
/// direction (positive multiple). The zero vector maps to zeros.
pub(crate) fn primitive_integer(values: &[Rational]) -> Vec<BigInt> {
    let l = common_denominator(values);
    let ints: Vec<BigInt> = values.iter().map(|q| (q * &l).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

pub(crate) fn to_i64(q: &Rational) -> Option<i64> {
    if is_integer(q) {
        q.numer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_exact_decimals() {
        assert_eq!(parse_rational("0.5").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-12.25").unwrap(), rat(-49, 4));
        assert_eq!(parse_rational("1e-3").unwrap(), rat(1, 1000));
        assert_eq!(parse_rational("2.5E2").unwrap(), int(250));
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational(".75").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("0.1").unwrap(), rat(1, 10));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("-").is_err());
    }

    #[test]
    fn renders_terminating_decimals() {
        assert_eq!(file_number(&rat(1, 2)), ("0.5".to_string(), true));
        assert_eq!(file_number(&rat(-7, 4)), ("-1.75".to_string(), true));
        assert_eq!(file_number(&int(36)), ("36".to_string(), true));
        assert_eq!(file_number(&rat(1, 1000)), ("0.001".to_string(), true));
        assert_eq!(file_number(&int(0)), ("0".to_string(), true));
    }

    #[test]
    fn rounds_non_terminating_to_17_digits() {
        assert_eq!(
            file_number(&rat(1, 3)),
            ("0.33333333333333333".to_string(), false)
        );
        assert_eq!(
            file_number(&rat(2, 3)),
            ("0.66666666666666667".to_string(), false)
        );
        assert_eq!(
            file_number(&rat(-10, 3)),
            ("-3.3333333333333333".to_string(), false)
        );
        assert_eq!(file_number(&rat(1, 7000)).0, "0.00014285714285714286");
    }

    #[test]
    fn long_terminating_values_are_rounded() {
        let q = Rational::new(BigInt::one(), num_traits::pow(BigInt::from(2), 70));
        let (_, exact) = file_number(&q);
        assert!(!exact);
    }

    #[test]
    fn pretty_shows_both_forms() {
        assert_eq!(pretty(&rat(11, 2)), "11/2 (5.5)");
        assert_eq!(pretty(&rat(1, 3)), "1/3");
        assert_eq!(pretty(&int(6)), "6");
    }
}
