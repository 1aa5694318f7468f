//! Scalar kernel: exact rationals, the log-rational tower with certified
//! comparison, interval arithmetic, adaptive cubature and deterministic
//! derivative-free minimizers.

pub mod cubature;
pub mod interval;
pub mod logrational;
pub mod minimize;
pub mod primes;
pub mod rational;

pub use cubature::{adaptive_integrate, CubatureError, CubatureOptions, Simplex};
pub use interval::CertifiedInterval;
pub use logrational::{certified_compare, LogRational, DEFAULT_PRECISION};
pub use rational::Rational;
