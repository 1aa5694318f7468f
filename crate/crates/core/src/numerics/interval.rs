//! Certified interval arithmetic on arbitrary-precision floats.
//!
//! Every endpoint operation uses directed rounding, so `[lo, hi]` always
//! encloses the exact value. Logarithms of primes are correctly rounded by
//! the backend; results are cached per (prime, precision, direction).

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::BigInt;
use num_traits::Signed;

use super::rational::Rational;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
    static LN_CACHE: RefCell<HashMap<(u64, usize, bool), BigFloat>> = RefCell::new(HashMap::new());
}

#[derive(Clone, Debug)]
pub struct CertifiedInterval {
    lo: BigFloat,
    hi: BigFloat,
    precision: usize,
}

fn bigint_to_bigfloat(n: &BigInt) -> BigFloat {
    // Exact: mantissa words hold every bit of |n|.
    let (sign, digits) = n.clone().into_parts();
    let words = digits.to_u64_digits();
    if words.is_empty() {
        return BigFloat::from_i8(0, 64);
    }
    let s = if sign == num_bigint::Sign::Minus {
        Sign::Neg
    } else {
        Sign::Pos
    };
    // from_words represents W * 2^(e - 64*len) for word-slice value W
    let e = (64 * words.len()) as astro_float::Exponent;
    BigFloat::from_words(&words, s, e)
}

fn bigfloat_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let Some((words, _n, sign, e, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    let mut frac = 0.0f64;
    // most significant word last
    for (i, w) in words.iter().rev().take(2).enumerate() {
        frac += (*w as f64) * (2f64).powi(-64 * (i as i32 + 1));
    }
    let v = frac * (2f64).powi(e);
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

/// Steps an f64 a few ulps in the chosen direction; used to keep the f64
/// view of an interval an outward enclosure.
fn nudge(v: f64, up: bool) -> f64 {
    let mut x = v;
    for _ in 0..2 {
        let bits = x.to_bits();
        x = if x == 0.0 {
            if up { f64::MIN_POSITIVE } else { -f64::MIN_POSITIVE }
        } else if (x > 0.0) == up {
            f64::from_bits(bits + 1)
        } else {
            f64::from_bits(bits - 1)
        };
    }
    x
}

impl CertifiedInterval {
    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn point_zero(precision: usize) -> Self {
        let z = BigFloat::from_i8(0, 64);
        CertifiedInterval {
            lo: z.clone(),
            hi: z,
            precision,
        }
    }

    /// Exact-endpoint enclosure of a rational.
    pub fn from_rational(r: &Rational, precision: usize) -> Self {
        let num = bigint_to_bigfloat(r.numer());
        let den = bigint_to_bigfloat(r.denom());
        let lo = num.div(&den, precision, RoundingMode::Down);
        let hi = num.div(&den, precision, RoundingMode::Up);
        CertifiedInterval { lo, hi, precision }
    }

    /// Correctly rounded enclosure of `log(n)` for a positive integer.
    pub fn log_of_u64(n: u64, precision: usize) -> Self {
        let lo = cached_ln(n, precision, false);
        let hi = cached_ln(n, precision, true);
        CertifiedInterval { lo, hi, precision }
    }

    pub fn add(&self, other: &CertifiedInterval, precision: usize) -> Self {
        CertifiedInterval {
            lo: self.lo.add(&other.lo, precision, RoundingMode::Down),
            hi: self.hi.add(&other.hi, precision, RoundingMode::Up),
            precision,
        }
    }

    pub fn sub(&self, other: &CertifiedInterval, precision: usize) -> Self {
        CertifiedInterval {
            lo: self.lo.sub(&other.hi, precision, RoundingMode::Down),
            hi: self.hi.sub(&other.lo, precision, RoundingMode::Up),
            precision,
        }
    }

    pub fn scale_rational(&self, q: &Rational, precision: usize) -> Self {
        if q.is_negative() {
            let neg = self.neg();
            return neg.scale_rational(&(-q), precision);
        }
        let num = bigint_to_bigfloat(q.numer());
        let den = bigint_to_bigfloat(q.denom());
        let lo = self
            .lo
            .mul(&num, precision, RoundingMode::Down)
            .div(&den, precision, RoundingMode::Down);
        let hi = self
            .hi
            .mul(&num, precision, RoundingMode::Up)
            .div(&den, precision, RoundingMode::Up);
        CertifiedInterval { lo, hi, precision }
    }

    pub fn mul(&self, other: &CertifiedInterval, precision: usize) -> Self {
        let mut lo: Option<BigFloat> = None;
        let mut hi: Option<BigFloat> = None;
        for (a, b) in [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ] {
            let d = a.mul(b, precision, RoundingMode::Down);
            let u = a.mul(b, precision, RoundingMode::Up);
            lo = Some(match lo {
                None => d,
                Some(x) =>

                    if d.partial_cmp(&x) == Some(Ordering::Less) { d } else { x },
            });
            hi = Some(match hi {
                None => u,
                Some(x) =>
                    if u.partial_cmp(&x) == Some(Ordering::Greater) { u } else { x },
            });
        }
        CertifiedInterval {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
            precision,
        }
    }

    pub fn neg(&self) -> Self {
        CertifiedInterval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            precision: self.precision,
        }
    }

    pub fn contains_zero(&self) -> bool {
        let z = BigFloat::from_i8(0, 64);
        self.lo.partial_cmp(&z) != Some(Ordering::Greater)
            && self.hi.partial_cmp(&z) != Some(Ordering::Less)
    }

    /// `Some(sign)` when the interval excludes zero.
    pub fn sign(&self) -> Option<i32> {
        let z = BigFloat::from_i8(0, 64);
        if self.lo.partial_cmp(&z) == Some(Ordering::Greater) {
            Some(1)
        } else if self.hi.partial_cmp(&z) == Some(Ordering::Less) {
            Some(-1)
        } else {
            None
        }
    }

    /// f64 lower bound, outward-rounded so it never exceeds the true value.
    pub fn lo_f64(&self) -> f64 {
        nudge(bigfloat_to_f64(&self.lo), false)
    }

    /// f64 upper bound, outward-rounded so it never undercuts the true value.
    pub fn hi_f64(&self) -> f64 {
        nudge(bigfloat_to_f64(&self.hi), true)
    }

    pub fn midpoint_f64(&self) -> f64 {
        0.5 * (self.lo_f64() + self.hi_f64())
    }

    pub fn width_f64(&self) -> f64 {
        self.hi_f64() - self.lo_f64()
    }
}

fn cached_ln(n: u64, precision: usize, upper: bool) -> BigFloat {
    LN_CACHE.with(|cache| {
        let key = (n, precision, upper);
        if let Some(v) = cache.borrow().get(&key) {
            return v.clone();
        }
        let rm = if upper {
            RoundingMode::Up
        } else {
            RoundingMode::Down
        };
        let x = BigFloat::from_u64(n, precision.max(64));
        let v = CONSTS.with(|cc| x.ln(precision, rm, &mut cc.borrow_mut()));
        cache.borrow_mut().insert(key, v.clone());
        v
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::rat;

    #[test]
    fn rational_enclosure_is_tight() {
        let iv = CertifiedInterval::from_rational(&rat(1, 3), 128);
        assert!(iv.lo_f64() <= 1.0 / 3.0 && 1.0 / 3.0 <= iv.hi_f64());
        // the f64 view is ulp-limited; the underlying enclosure separates
        // from a rational 2^-100 away
        assert!(iv.width_f64() < 1e-14);
        let off = CertifiedInterval::from_rational(
            &(rat(1, 3) + Rational::new(BigInt::from(1), BigInt::from(2u128).pow(100))),
            128,
        );
        assert_eq!(off.sub(&iv, 128).sign(), Some(1));
    }

    #[test]
    fn log_enclosures_nest_by_precision() {
        let coarse = CertifiedInterval::log_of_u64(2, 64);
        let fine = CertifiedInterval::log_of_u64(2, 256);
        assert!(coarse.lo_f64() <= fine.lo_f64());
        assert!(fine.hi_f64() <= coarse.hi_f64());
        assert!((fine.midpoint_f64() - std::f64::consts::LN_2).abs() < 1e-14);
    }

    #[test]
    fn signed_separation() {
        // log 4 - log 3 > 0
        let l4 = CertifiedInterval::log_of_u64(2, 128).scale_rational(&rat(2, 1), 128);
        let l3 = CertifiedInterval::log_of_u64(3, 128);
        assert_eq!(l4.sub(&l3, 128).sign(), Some(1));
        // symmetric interval around zero is undecided
        let sym = l3.sub(&l3, 128);
        assert_eq!(sym.sign(), None);
        assert!(sym.contains_zero());
    }

    #[test]
    fn interval_product_encloses() {
        let a = CertifiedInterval::from_rational(&rat(-3, 2), 128);
        let b = CertifiedInterval::log_of_u64(5, 128);
        let p = a.mul(&b, 128);
        let expect = -1.5 * 5f64.ln();
        assert!(p.lo_f64() <= expect && expect <= p.hi_f64());
    }
}

