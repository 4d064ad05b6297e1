//! Bivariate Laurent polynomials in `z` and `zb` over complex rationals.
//!
//! `z` carries non-negative powers only; `zb` powers are integers and may go
//! negative transiently inside the chain solver. The two variables are
//! independent formal symbols: nothing here conjugates `z` into `zb`.
//! Physical evaluation binds `zb := conj(z)` at the call site.
//!
//! Terms live in a `BTreeMap` keyed by exponent pairs, ordered
//! lexicographically on `(z, zb)`. That order is the canonical term order
//! used for equality, display, and serialization.

use crate::rational::{crat_to_c64, fmt_rat, parse_rat, CRat, Rat, C64};
use num_traits::{One, Signed, Zero};
use serde::de::Error as DeError;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

/// Exponent pair of a monomial `z^z * zb^zbar`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct Exponents {
    pub z: u32,
    pub zbar: i32,
}

impl Exponents {
    pub fn new(z: u32, zbar: i32) -> Self {
        Exponents { z, zbar }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum PolyError {
    /// A `zb^-1` term blocks the antiderivative: integrating it would produce
    /// a logarithm, i.e. a function that is not single-valued on the plane.
    /// Carries the full `z`-dependent coefficient of `zb^-1`.
    #[error("antiderivative would produce a logarithm; zb^-1 coefficient: {coefficient}")]
    LogObstruction { coefficient: LaurentBiPoly },
    #[error("evaluation at zb = 0 with negative zb powers present")]
    DivisionByZero,
}

/// Sparse bivariate Laurent polynomial. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentBiPoly {
    terms: BTreeMap<Exponents, CRat>,
}

impl LaurentBiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(CRat::one())
    }

    pub fn constant(c: CRat) -> Self {
        Self::monomial(0, 0, c)
    }

    /// The monomial `c * z^z * zb^zbar`; zero coefficient gives the zero polynomial.
    pub fn monomial(z: u32, zbar: i32, c: CRat) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(Exponents::new(z, zbar), c);
        }
        p
    }

    /// The variable `z`.
    pub fn var_z() -> Self {
        Self::monomial(1, 0, CRat::one())
    }

    /// The variable `zb`.
    pub fn var_zbar() -> Self {
        Self::monomial(0, 1, CRat::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, i32, CRat)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (z, zbar, c) in it {
            p.insert_add(Exponents::new(z, zbar), c);
        }
        p
    }

    fn insert_add(&mut self, e: Exponents, c: CRat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical (lexicographic) order.
    pub fn terms(&self) -> impl Iterator<Item = (Exponents, &CRat)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    /// Coefficient of `z^z * zb^zbar` (zero when absent).
    pub fn coeff(&self, z: u32, zbar: i32) -> CRat {
        self.terms
            .get(&Exponents::new(z, zbar))
            .cloned()
            .unwrap_or_else(CRat::zero)
    }

    /// Highest `z` power, or `None` for the zero polynomial.
    pub fn z_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.z).max()
    }

    pub fn zbar_max(&self) -> Option<i32> {
        self.terms.keys().map(|e| e.zbar).max()
    }

    pub fn zbar_min(&self) -> Option<i32> {
        self.terms.keys().map(|e| e.zbar).min()
    }

    pub fn has_negative_zbar(&self) -> bool {
        self.zbar_min().map_or(false, |m| m < 0)
    }

    pub fn scale(&self, c: &CRat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut p = Self::zero();
        for (e, v) in &self.terms {
            p.terms.insert(*e, v.clone() * c.clone());
        }
        p
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        self.scale(&CRat::new(r.clone(), Rat::zero()))
    }

    /// Multiply by `zb^shift` (shift may be negative).
    pub fn mul_zbar_pow(&self, shift: i32) -> Self {
        let mut p = Self::zero();
        for (e, v) in &self.terms {
            p.terms.insert(Exponents::new(e.z, e.zbar + shift), v.clone());
        }
        p
    }

    /// Multiply by `z^shift`.
    pub fn mul_z_pow(&self, shift: u32) -> Self {
        let mut p = Self::zero();
        for (e, v) in &self.terms {
            p.terms.insert(Exponents::new(e.z + shift, e.zbar), v.clone());
        }
        p
    }

    /// Formal partial derivative in `z`.
    pub fn d_z(&self) -> Self {
        let mut p = Self::zero();
        for (e, v) in &self.terms {
            if e.z > 0 {
                let c = v.clone() * CRat::new(Rat::from_integer(e.z.into()), Rat::zero());
                p.insert_add(Exponents::new(e.z - 1, e.zbar), c);
            }
        }
        p
    }

    /// Formal partial derivative in `zb`; `zb^0` terms are killed, negative
    /// powers follow the usual Laurent rule.
    pub fn d_zbar(&self) -> Self {
        let mut p = Self::zero();
        for (e, v) in &self.terms {
            if e.zbar != 0 {
                let c = v.clone() * CRat::new(Rat::from_integer(e.zbar.into()), Rat::zero());
                p.insert_add(Exponents::new(e.z, e.zbar - 1), c);
            }
        }
        p
    }

    /// Termwise antiderivative in `zb` with zero integration constant.
    ///
    /// A `zb^-1` term has no Laurent antiderivative; its presence means a
    /// single-valuedness constraint upstream was not enforced, and the full
    /// offending coefficient is reported back to the caller.
    pub fn antiderivative_zbar(&self) -> Result<Self, PolyError> {
        let mut obstruction = Self::zero();
        for (e, v) in &self.terms {
            if e.zbar == -1 {
                obstruction.insert_add(Exponents::new(e.z, 0), v.clone());
            }
        }
        if !obstruction.is_zero() {
            return Err(PolyError::LogObstruction {
                coefficient: obstruction,
            });
        }
        let mut p = Self::zero();
        for (e, v) in &self.terms {
            let k = e.zbar + 1;
            let c = v.clone() / CRat::new(Rat::from_integer(k.into()), Rat::zero());
            p.insert_add(Exponents::new(e.z, k), c);
        }
        Ok(p)
    }

    /// Drop every `zb^-1` term, returning the removed `z`-coefficient.
    /// The chain solver uses this to collect a constraint instead of failing.
    pub fn split_zbar_inverse(&self) -> (Self, Self) {
        let mut rest = Self::zero();
        let mut inv = Self::zero();
        for (e, v) in &self.terms {
            if e.zbar == -1 {
                inv.insert_add(Exponents::new(e.z, 0), v.clone());
            } else {
                rest.terms.insert(*e, v.clone());
            }
        }
        (rest, inv)
    }

    /// Swap the roles of `z` and `zb` and conjugate every coefficient.
    /// Requires all `zb` powers non-negative (they become `z` powers).
    pub fn conjugate_swap(&self) -> Option<Self> {
        let mut p = Self::zero();
        for (e, v) in &self.terms {
            if e.zbar < 0 {
                return None;
            }
            p.terms
                .insert(Exponents::new(e.zbar as u32, e.z as i32), v.conj());
        }
        Some(p)
    }

    /// Floating evaluation, Horner per variable. `zbar` is an independent
    /// argument; pass `z.conj()` for physical points.
    pub fn eval(&self, z: C64, zbar: C64) -> Result<C64, PolyError> {
        if self.has_negative_zbar() && zbar.norm_sqr() == 0.0 {
            return Err(PolyError::DivisionByZero);
        }
        // Group by z power, Horner in zb inside each group, then Horner in z.
        let mut groups: BTreeMap<u32, Vec<(i32, C64)>> = BTreeMap::new();
        for (e, v) in &self.terms {
            groups
                .entry(e.z)
                .or_default()
                .push((e.zbar, crat_to_c64(v)));
        }
        let mut acc = C64::new(0.0, 0.0);
        let mut prev_zpow: Option<u32> = None;
        for (&zp, terms) in groups.iter().rev() {
            // terms are ascending in zb; run Horner from the top exponent down
            let mut inner = C64::new(0.0, 0.0);
            let mut prev_k: Option<i32> = None;
            for (k, c) in terms.iter().rev() {
                if let Some(pk) = prev_k {
                    inner *= zbar.powi(pk - k);
                }
                inner += c;
                prev_k = Some(*k);
            }
            let group_val = inner * zbar.powi(prev_k.unwrap());
            if let Some(pz) = prev_zpow {
                acc *= z.powi((pz - zp) as i32);
            }
            acc += group_val;
            prev_zpow = Some(zp);
        }
        if let Some(pz) = prev_zpow {
            acc *= z.powi(pz as i32);
        }
        Ok(acc)
    }
}

impl Add for &LaurentBiPoly {
    type Output = LaurentBiPoly;
    fn add(self, rhs: &LaurentBiPoly) -> LaurentBiPoly {
        let mut out = self.clone();
        for (e, v) in &rhs.terms {
            out.insert_add(*e, v.clone());
        }
        out
    }
}

impl Sub for &LaurentBiPoly {
    type Output = LaurentBiPoly;
    fn sub(self, rhs: &LaurentBiPoly) -> LaurentBiPoly {
        let mut out = self.clone();
        for (e, v) in &rhs.terms {
            out.insert_add(*e, -v.clone());
        }
        out
    }
}

impl Neg for &LaurentBiPoly {
    type Output = LaurentBiPoly;
    fn neg(self) -> LaurentBiPoly {
        let mut out = LaurentBiPoly::zero();
        for (e, v) in &self.terms {
            out.terms.insert(*e, -v.clone());
        }
        out
    }
}

impl Mul for &LaurentBiPoly {
    type Output = LaurentBiPoly;
    fn mul(self, rhs: &LaurentBiPoly) -> LaurentBiPoly {
        let mut out = LaurentBiPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.insert_add(
                    Exponents::new(e1.z + e2.z, e1.zbar + e2.zbar),
                    c1.clone() * c2.clone(),
                );
            }
        }
        out
    }
}

impl fmt::Display for LaurentBiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}", fmt_rat(&c.re))?;
            if !c.im.is_zero() {
                write!(f, "{}{}i", if c.im.is_negative() { "" } else { "+" }, fmt_rat(&c.im))?;
            }
            write!(f, ")")?;
            if e.z > 0 {
                write!(f, "*z^{}", e.z)?;
            }
            if e.zbar != 0 {
                write!(f, "*zb^{}", e.zbar)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentBiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentBiPoly({})", self)
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    #[serde(rename = "zPow")]
    z_pow: u32,
    #[serde(rename = "zbarPow")]
    zbar_pow: i32,
    re: String,
    im: String,
}

impl Serialize for LaurentBiPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            seq.serialize_element(&TermRepr {
                z_pow: e.z,
                zbar_pow: e.zbar,
                re: fmt_rat(&c.re),
                im: fmt_rat(&c.im),
            })?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for LaurentBiPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw: Vec<TermRepr> = Vec::deserialize(deserializer)?;
        let mut p = LaurentBiPoly::zero();
        for t in raw {
            let re = parse_rat(&t.re).map_err(D::Error::custom)?;
            let im = parse_rat(&t.im).map_err(D::Error::custom)?;
            p.insert_add(Exponents::new(t.z_pow, t.zbar_pow), CRat::new(re, im));
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{crat, crat_i, rat};

    fn z() -> LaurentBiPoly {
        LaurentBiPoly::var_z()
    }
    fn zb() -> LaurentBiPoly {
        LaurentBiPoly::var_zbar()
    }

    #[test]
    fn test_add_inverse_and_merge() {
        let p = &z() + &z().scale(&crat_i(-1, 0));
        assert!(p.is_zero());

        let zzb = &z() * &zb();
        let sum = &zzb + &zzb;
        assert_eq!(sum, zzb.scale(&crat_i(2, 0)));

        // (zb^2 + 1) + (z - 1) = z + zb^2
        let a = &LaurentBiPoly::monomial(0, 2, crat_i(1, 0)) + &LaurentBiPoly::one();
        let b = &z() - &LaurentBiPoly::one();
        let s = &a + &b;
        assert_eq!(s, &z() + &LaurentBiPoly::monomial(0, 2, crat_i(1, 0)));
    }

    #[test]
    fn test_mul() {
        // zb * zb^-1 = 1
        let p = &zb() * &LaurentBiPoly::monomial(0, -1, crat_i(1, 0));
        assert_eq!(p, LaurentBiPoly::one());

        // (z + zb)^2 = z^2 + 2 z zb + zb^2
        let s = &z() + &zb();
        let sq = &s * &s;
        let expected = LaurentBiPoly::from_terms([
            (2, 0, crat_i(1, 0)),
            (1, 1, crat_i(2, 0)),
            (0, 2, crat_i(1, 0)),
        ]);
        assert_eq!(sq, expected);

        // zb^n * zb^m = zb^(n+m)
        let p = &LaurentBiPoly::monomial(0, 3, crat_i(1, 0))
            * &LaurentBiPoly::monomial(0, -5, crat_i(1, 0));
        assert_eq!(p, LaurentBiPoly::monomial(0, -2, crat_i(1, 0)));
    }

    #[test]
    fn test_derivatives() {
        // d_z(z^2 zb) = 2 z zb
        let p = LaurentBiPoly::monomial(2, 1, crat_i(1, 0));
        assert_eq!(p.d_z(), LaurentBiPoly::monomial(1, 1, crat_i(2, 0)));

        // d_zbar(zb^-1) = -zb^-2
        let p = LaurentBiPoly::monomial(0, -1, crat_i(1, 0));
        assert_eq!(p.d_zbar(), LaurentBiPoly::monomial(0, -2, crat_i(-1, 0)));

        // d_z(zb^3) = 0
        let p = LaurentBiPoly::monomial(0, 3, crat_i(1, 0));
        assert!(p.d_z().is_zero());
    }

    #[test]
    fn test_antiderivative() {
        // zb^3 -> zb^4/4
        let p = LaurentBiPoly::monomial(0, 3, crat_i(1, 0));
        assert_eq!(
            p.antiderivative_zbar().unwrap(),
            LaurentBiPoly::monomial(0, 4, crat(rat(1, 4), rat(0, 1)))
        );

        // zb^-3 -> -zb^-2/2
        let p = LaurentBiPoly::monomial(0, -3, crat_i(1, 0));
        assert_eq!(
            p.antiderivative_zbar().unwrap(),
            LaurentBiPoly::monomial(0, -2, crat(rat(-1, 2), rat(0, 1)))
        );

        // zb^-1 -> LogObstruction(1)
        let p = LaurentBiPoly::monomial(0, -1, crat_i(1, 0));
        match p.antiderivative_zbar() {
            Err(PolyError::LogObstruction { coefficient }) => {
                assert_eq!(coefficient, LaurentBiPoly::one());
            }
            other => panic!("expected LogObstruction, got {:?}", other),
        }
    }

    #[test]
    fn test_antiderivative_then_derivative_is_identity() {
        let p = LaurentBiPoly::from_terms([
            (1, -3, crat_i(2, 0)),
            (0, 0, crat_i(5, 0)),
            (2, 4, crat(rat(1, 3), rat(1, 2))),
        ]);
        assert_eq!(p.antiderivative_zbar().unwrap().d_zbar(), p);
    }

    #[test]
    fn test_eval() {
        // p = z*zb at z = 1+i, zb = 1-i -> 2
        let p = &z() * &zb();
        let v = p
            .eval(C64::new(1.0, 1.0), C64::new(1.0, -1.0))
            .unwrap();
        assert!((v - C64::new(2.0, 0.0)).norm() < 1e-14);

        // p = zb^2 at zb = i -> -1
        let p = LaurentBiPoly::monomial(0, 2, crat_i(1, 0));
        let v = p.eval(C64::new(0.3, 0.7), C64::new(0.0, 1.0)).unwrap();
        assert!((v - C64::new(-1.0, 0.0)).norm() < 1e-14);

        // zero polynomial evaluates to zero anywhere
        let v = LaurentBiPoly::zero()
            .eval(C64::new(2.0, 3.0), C64::new(-1.0, 0.5))
            .unwrap();
        assert_eq!(v, C64::new(0.0, 0.0));

        // negative power at zb = 0 is rejected
        let p = LaurentBiPoly::monomial(0, -2, crat_i(1, 0));
        assert_eq!(
            p.eval(C64::new(1.0, 0.0), C64::new(0.0, 0.0)),
            Err(PolyError::DivisionByZero)
        );
    }

    #[test]
    fn test_eval_mixed_laurent() {
        // p = 3 z^2 zb^-1 + (1/2) zb^3 - z
        let p = LaurentBiPoly::from_terms([
            (2, -1, crat_i(3, 0)),
            (0, 3, crat(rat(1, 2), rat(0, 1))),
            (1, 0, crat_i(-1, 0)),
        ]);
        let zv = C64::new(0.7, -0.4);
        let zbv = C64::new(-1.3, 0.2);
        let direct = 3.0 * zv.powi(2) / zbv + 0.5 * zbv.powi(3) - zv;
        let v = p.eval(zv, zbv).unwrap();
        assert!((v - direct).norm() < 1e-13);
    }

    #[test]
    fn test_conjugate_swap() {
        let p = LaurentBiPoly::from_terms([(2, 1, crat_i(0, 1)), (0, 3, crat_i(2, 0))]);
        let q = p.conjugate_swap().unwrap();
        let expected =
            LaurentBiPoly::from_terms([(1, 2, crat_i(0, -1)), (3, 0, crat_i(2, 0))]);
        assert_eq!(q, expected);
        assert_eq!(q.conjugate_swap().unwrap(), p);

        let neg = LaurentBiPoly::monomial(0, -1, crat_i(1, 0));
        assert!(neg.conjugate_swap().is_none());
    }

    #[test]
    fn test_serde_round_trip_canonical() {
        let p = LaurentBiPoly::from_terms([
            (0, 2, crat(rat(1, 3), rat(-2, 7))),
            (3, -1, crat_i(4, 0)),
        ]);
        let json = serde_json::to_string(&p).unwrap();
        let back: LaurentBiPoly = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
        // canonical order: ascending lexicographic on (zPow, zbarPow)
        assert!(json.find("\"zPow\":0").unwrap() < json.find("\"zPow\":3").unwrap());
    }
}
