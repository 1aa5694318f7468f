//! Exact rational scalars and small helpers used across the crate.
//!
//! `Rational` is an arbitrary-precision fraction kept in lowest terms with a
//! positive denominator (both invariants are maintained by the underlying
//! implementation).

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use num_rational::BigRational as Rational;

/// Shorthand for a rational from an integer pair.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"` with optional sign.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let num: BigInt = a.trim().parse().ok()?;
            let den: BigInt = b.trim().parse().ok()?;
            if den.is_zero() {
                return None;
            }
            Some(Rational::new(num, den))
        }
        None => {
            let num: BigInt = s.parse().ok()?;
            Some(Rational::from_integer(num))
        }
    }
}

/// Renders a rational as `"p"` or `"p/q"`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    // Direct conversion can overflow for huge numerators; go through a scaled
    // quotient when it does.
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let bits = r.numer().bits().max(r.denom().bits()) as i64;
    let shift = bits - 60;
    if shift <= 0 {
        return 0.0;
    }
    let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

pub fn floor_int(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

pub fn ceil_int(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}

/// Lexicographic order on rational vectors.
pub fn lex_cmp(a: &[Rational], b: &[Rational]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b.iter()) {
        acc += x * y;
    }
    acc
}

/// Clears denominators and divides by the content, giving a primitive integer
/// vector with the same direction. Returns `None` for the zero vector.
pub fn primitive_direction(v: &[Rational]) -> Option<Vec<BigInt>> {
    if v.iter().all(|x| x.is_zero()) {
        return None;
    }
    let mut lcm = BigInt::one();
    for x in v {
        lcm = num_integer::lcm(lcm, x.denom().clone());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = num_integer::gcd(g, x.abs());
    }
    Some(ints.into_iter().map(|x| x / &g).collect())
}

pub fn bigint_sign(x: &BigInt) -> i32 {
    match x.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3/4", "-7/5", "12", "0", "-1"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(format_rational(&r), s);
        }
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
        // non-canonical input is reduced
        assert_eq!(format_rational(&parse_rational("4/8").unwrap()), "1/2");
    }

    #[test]
    fn primitive_direction_basics() {
        let v = vec![rat(1, 2), rat(-3, 2)];
        assert_eq!(
            primitive_direction(&v).unwrap(),
            vec![BigInt::from(1), BigInt::from(-3)]
        );
        assert!(primitive_direction(&[Rational::zero()]).is_none());
    }
}
