//! The log-rational scalar tower: values of the form
//!
//! ```text
//!     q0 + sum_p q_p * log(p)        (q0, q_p rational, p prime)
//! ```
//!
//! closed under addition, subtraction and multiplication by rationals.
//! Because {1, log 2, log 3, log 5, ...} are linearly independent over the
//! rationals, a value here is zero exactly when all its coefficients vanish,
//! so equality is decidable symbolically and any nonzero value can be
//! sign-separated by interval refinement. There is no division and no
//! product of two log terms; every algorithm in the crate is arranged to
//! need only the module operations.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::interval::CertifiedInterval;
use super::primes::factor_bigint;
use super::rational::{format_rational, rational_to_f64, Rational};

/// Default interval precision (bits of mantissa) for certified comparisons.
pub const DEFAULT_PRECISION: usize = 128;
/// Precision threshold past which a still-undecided comparison is considered
/// an internal error: the symbolic zero test has already run, so a nonzero
/// difference must separate long before this.
pub const PRECISION_CAP: usize = 4096;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LogRational {
    rat: Rational,
    /// prime -> coefficient of log(prime); never stores zero coefficients.
    logs: BTreeMap<u64, Rational>,
}

impl LogRational {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_rational(rat: Rational) -> Self {
        LogRational {
            rat,
            logs: BTreeMap::new(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// `coeff * log(prime)`; `prime` must be prime.
    pub fn log_term(prime: u64, coeff: Rational) -> Self {
        assert!(
            super::primes::is_prime_u64(prime),
            "log_term requires a prime, got {prime}"
        );
        let mut logs = BTreeMap::new();
        if !coeff.is_zero() {
            logs.insert(prime, coeff);
        }
        LogRational {
            rat: Rational::zero(),
            logs,
        }
    }

    /// Exact `log(q)` of a positive rational, by factoring numerator and
    /// denominator. Returns `None` when a factor exceeds the supported
    /// factoring range or `q <= 0`.
    pub fn log_of_rational(q: &Rational) -> Option<Self> {
        if !q.is_positive() {
            return None;
        }
        let num = factor_bigint(q.numer())?;
        let den = factor_bigint(q.denom())?;
        let mut logs: BTreeMap<u64, Rational> = BTreeMap::new();
        for (p, e) in num {
            *logs.entry(p).or_insert_with(Rational::zero) +=
                Rational::from_integer(BigInt::from(e));
        }
        for (p, e) in den {
            *logs.entry(p).or_insert_with(Rational::zero) -=
                Rational::from_integer(BigInt::from(e));
        }
        logs.retain(|_, c| !c.is_zero());
        Some(LogRational {
            rat: Rational::zero(),
            logs,
        })
    }

    pub fn rational_part(&self) -> &Rational {
        &self.rat
    }

    pub fn log_coefficients(&self) -> &BTreeMap<u64, Rational> {
        &self.logs
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.logs.is_empty()
    }

    /// The exact rational value, when the log part is empty.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.logs.is_empty() {
            Some(&self.rat)
        } else {
            None
        }
    }

    pub fn is_rational(&self) -> bool {
        self.logs.is_empty()
    }

    /// True when `self = q * other` for some rational `q`; returns the ratio.
    /// Both values must be nonzero.
    pub fn rational_ratio_to(&self, other: &LogRational) -> Option<Rational> {
        if self.is_zero() || other.is_zero() {
            return None;
        }
        // Candidate ratio from the first nonzero coefficient of `other`.
        let q = if !other.rat.is_zero() {
            if other.rat.is_zero() {
                return None;
            }
            &self.rat / &other.rat
        } else {
            let (p, c) = other.logs.iter().next()?;
            let mine = self.logs.get(p)?;
            mine / c
        };
        let scaled = other.scale(&q);
        if &scaled == self {
            Some(q)
        } else {
            None
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        LogRational {
            rat: &self.rat * q,
            logs: self.logs.iter().map(|(p, c)| (*p, c * q)).collect(),
        }
    }

    /// Certified enclosure at the given mantissa precision.
    pub fn interval(&self, precision: usize) -> CertifiedInterval {
        let mut acc = CertifiedInterval::from_rational(&self.rat, precision);
        for (p, c) in &self.logs {
            let term = CertifiedInterval::log_of_u64(*p, precision).scale_rational(c, precision);
            acc = acc.add(&term, precision);
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        if let Some(r) = self.as_rational() {
            return rational_to_f64(r);
        }
        let mut acc = rational_to_f64(&self.rat);
        for (p, c) in &self.logs {
            acc += rational_to_f64(c) * (*p as f64).ln();
        }
        acc
    }

    /// Sign of the value: -1, 0, or 1. Zero is decided symbolically;
    /// otherwise the interval precision is doubled until the sign separates,
    /// which linear independence of prime logarithms guarantees.
    pub fn sign(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        if self.logs.is_empty() {
            return if self.rat.is_positive() { 1 } else { -1 };
        }
        let mut prec = DEFAULT_PRECISION;
        loop {
            let iv = self.interval(prec);
            if let Some(s) = iv.sign() {
                return s;
            }
            prec *= 2;
            // Past the cap the value is already known to be symbolically
            // nonzero; keep refining but flag an implementation bug if the
            // width fails to shrink to separation at absurd precision.
            assert!(
                prec <= (PRECISION_CAP << 8),
                "certified comparison failed to separate a symbolically nonzero value"
            );
        }
    }

    pub fn certified_cmp(&self, other: &LogRational) -> Ordering {
        let d = self.clone() - other.clone();
        match d.sign() {
            0 => Ordering::Equal,
            s if s < 0 => Ordering::Less,
            _ => Ordering::Greater,
        }
    }

    pub fn min_of(a: LogRational, b: LogRational) -> LogRational {
        if a.certified_cmp(&b) == Ordering::Greater {
            b
        } else {
            a
        }
    }

    pub fn max_of(a: LogRational, b: LogRational) -> LogRational {
        if a.certified_cmp(&b) == Ordering::Less {
            b
        } else {
            a
        }
    }

    pub fn abs(&self) -> LogRational {
        if self.sign() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

impl From<Rational> for LogRational {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

impl Add for LogRational {
    type Output = LogRational;
    fn add(self, rhs: LogRational) -> LogRational {
        let mut logs = self.logs;
        for (p, c) in rhs.logs {
            let e = logs.entry(p).or_insert_with(Rational::zero);
            *e += c;
            if e.is_zero() {
                logs.remove(&p);
            }
        }
        LogRational {
            rat: self.rat + rhs.rat,
            logs,
        }
    }
}

impl AddAssign for LogRational {
    fn add_assign(&mut self, rhs: LogRational) {
        *self = self.clone() + rhs;
    }
}

impl Sub for LogRational {
    type Output = LogRational;
    fn sub(self, rhs: LogRational) -> LogRational {
        self + (-rhs)
    }
}

impl SubAssign for LogRational {
    fn sub_assign(&mut self, rhs: LogRational) {
        *self = self.clone() - rhs;
    }
}

impl Neg for LogRational {
    type Output = LogRational;
    fn neg(self) -> LogRational {
        LogRational {
            rat: -self.rat,
            logs: self.logs.into_iter().map(|(p, c)| (p, -c)).collect(),
        }
    }
}

impl Mul<&Rational> for &LogRational {
    type Output = LogRational;
    fn mul(self, rhs: &Rational) -> LogRational {
        self.scale(rhs)
    }
}

impl PartialOrd for LogRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.certified_cmp(other))
    }
}

impl Ord for LogRational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.certified_cmp(other)
    }
}

impl fmt::Debug for LogRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for LogRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.logs.is_empty() {
            return write!(f, "{}", format_rational(&self.rat));
        }
        let mut first = self.rat.is_zero();
        if !first {
            write!(f, "{}", format_rational(&self.rat))?;
        }
        for (p, c) in &self.logs {
            if first {
                write!(f, "{}*log({})", format_rational(c), p)?;
                first = false;
            } else {
                write!(f, " + {}*log({})", format_rational(c), p)?;
            }
        }
        Ok(())
    }
}

/// Three-way certified comparison, the public entry point.
pub fn certified_compare(a: &LogRational, b: &LogRational) -> Ordering {
    a.certified_cmp(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::rat;

    fn lr_rat(n: i64, d: i64) -> LogRational {
        LogRational::from_rational(rat(n, d))
    }

    #[test]
    fn identical_terms_compare_equal() {
        // (1/2 + log 2) vs itself
        let a = lr_rat(1, 2) + LogRational::log_term(2, rat(1, 1));
        let b = lr_rat(1, 2) + LogRational::log_term(2, rat(1, 1));
        assert_eq!(certified_compare(&a, &b), Ordering::Equal);
    }

    #[test]
    fn log6_splits_symbolically() {
        // log 2 + log 3 vs log 6 - 1e-9: the log parts cancel exactly and the
        // rational gap decides.
        let a = LogRational::log_term(2, rat(1, 1)) + LogRational::log_term(3, rat(1, 1));
        let log6 = LogRational::log_of_rational(&rat(6, 1)).unwrap();
        let b = log6 - lr_rat(1, 1_000_000_000);
        assert_eq!(certified_compare(&a, &b), Ordering::Greater);
        let d = a - b;
        assert_eq!(d.as_rational().unwrap(), &rat(1, 1_000_000_000));
    }

    #[test]
    fn interval_separation_log4_vs_log3() {
        let a = LogRational::log_term(2, rat(2, 1));
        let b = LogRational::log_term(3, rat(1, 1));
        assert_eq!(certified_compare(&a, &b), Ordering::Greater);
    }

    #[test]
    fn tiny_gaps_separate() {
        // log 2 vs a 64-bit rational approximation of it: forces precision
        // doubling before the sign separates.
        let approx = Rational::new(
            BigInt::from(0x_b172_17f7_d1cf_79abu64),
            BigInt::from(1u128 << 64),
        );
        let a = LogRational::log_term(2, rat(1, 1));
        let b = LogRational::from_rational(approx.clone());
        let cmp = certified_compare(&a, &b);
        // whichever side it lands on, the reverse comparison must agree
        assert_eq!(certified_compare(&b, &a), cmp.reverse());
        assert_ne!(cmp, Ordering::Equal);
    }

    #[test]
    fn module_ops() {
        let x = lr_rat(3, 4) + LogRational::log_term(5, rat(2, 3));
        let y = x.scale(&rat(3, 2));
        assert_eq!(y.rational_part(), &rat(9, 8));
        assert_eq!(y.log_coefficients()[&5], rat(1, 1));
        let z = y.clone() - y.clone();
        assert!(z.is_zero());
        assert_eq!(x.rational_ratio_to(&y).unwrap(), rat(2, 3));
    }

    #[test]
    fn display_reads_naturally() {
        let x = lr_rat(1, 2) + LogRational::log_term(2, rat(-1, 3));
        assert_eq!(format!("{x}"), "1/2 + -1/3*log(2)");
    }

    #[test]
    fn float_agreement() {
        let x = lr_rat(1, 7) + LogRational::log_term(3, rat(5, 2));
        let expect = 1.0 / 7.0 + 2.5 * 3f64.ln();
        assert!((x.to_f64() - expect).abs() < 1e-12);
    }
}
