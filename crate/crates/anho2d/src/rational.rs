//! Exact scalar arithmetic: arbitrary-precision rationals and complex rationals.
//!
//! `Rat` and `CRat` form the coefficient field for the whole crate.
//! `num_rational::BigRational` keeps every value in lowest terms with a
//! positive denominator, so structural equality is canonical equality.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rat = BigRational;
pub type CRat = Complex<Rat>;
pub type C64 = Complex<f64>;

/// Error parsing a `"num/den"` string.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum RatParseError {
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// The rational `n/d`. Panics if `d == 0`; use [`parse_rat`] for untrusted input.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a rational.
pub fn rat_i(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn crat(re: Rat, im: Rat) -> CRat {
    Complex::new(re, im)
}

/// Complex rational with integer parts.
pub fn crat_i(re: i64, im: i64) -> CRat {
    Complex::new(rat_i(re), rat_i(im))
}

/// Purely real complex rational.
pub fn crat_re(re: Rat) -> CRat {
    Complex::new(re, Rat::zero())
}

/// Parse `"n"`, `"-n"`, or `"n/d"` (whitespace-trimmed) into a rational.
pub fn parse_rat(s: &str) -> Result<Rat, RatParseError> {
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| RatParseError::Malformed(s.to_string()))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| RatParseError::Malformed(s.to_string()))?;
    if d.is_zero() {
        return Err(RatParseError::ZeroDenominator(s.to_string()));
    }
    Ok(Rat::new(n, d))
}

/// Format a rational as `"n"` when integral, `"n/d"` otherwise.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Integer power of a rational, with negative exponents allowed for nonzero base.
pub fn rat_pow(base: &Rat, exp: i32) -> Rat {
    if exp >= 0 {
        let mut acc = Rat::one();
        for _ in 0..exp {
            acc *= base;
        }
        acc
    } else {
        assert!(!base.is_zero(), "rat_pow: zero base with negative exponent");
        rat_pow(base, -exp).recip()
    }
}

/// `n!` as a big integer.
pub fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

/// Lossy conversion for numeric cross-checks. All values reachable from the
/// engine fit comfortably in f64 range.
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().expect("rational magnitude exceeds f64 range")
}

pub fn crat_to_c64(c: &CRat) -> C64 {
    Complex::new(rat_to_f64(&c.re), rat_to_f64(&c.im))
}

/// Split a positive integer as `x = s^2 * m` with `m` squarefree.
///
/// Trial division; the integers seen here come from user-supplied coupling
/// constants raised to small powers, so factoring is cheap in practice.
pub fn squarefree_split(x: &BigInt) -> (BigInt, BigInt) {
    assert!(x.is_positive(), "squarefree_split needs a positive integer");
    let mut rem = x.clone();
    let mut s = BigInt::one();
    let mut m = BigInt::one();
    let mut p = BigInt::from(2u32);
    while &p * &p <= rem {
        let mut e = 0u32;
        while (&rem % &p).is_zero() {
            rem /= &p;
            e += 1;
        }
        if e > 0 {
            for _ in 0..e / 2 {
                s *= &p;
            }
            if e % 2 == 1 {
                m *= &p;
            }
        }
        p += 1;
    }
    if !rem.is_one() {
        m *= rem;
    }
    (s, m)
}

/// Split a positive rational as `q = r^2 * m` with `m` a squarefree positive
/// integer. Used to pick the largest exactly-representable normalization.
pub fn rat_squarefree_split(q: &Rat) -> (Rat, BigInt) {
    assert!(q.is_positive(), "rat_squarefree_split needs a positive value");
    let uv = q.numer() * q.denom();
    let (s, m) = squarefree_split(&uv);
    let r = Rat::new(s, q.denom().clone());
    (r, m)
}
