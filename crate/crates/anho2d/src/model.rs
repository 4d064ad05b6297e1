//! The model family and its operator algebra on weighted polynomials.
//!
//! Every state handled by this crate has the form `P(z, zb) * W` with
//! `W = exp(-lambda/2 * z*zb - F(zb))` and `P` a polynomial. The weight is
//! never materialized: each operator is conjugated onto the polynomial part,
//! using `dW/dz = -(lambda/2) zb W` and `dW/dzb = -((lambda/2) z + F'(zb)) W`.
//!
//! Conjugated actions (derived from the product rule and verified in tests):
//!
//! - raising  `A+ = d/dz - (lambda/2) zb`:  `P -> dP/dz - lambda zb P`
//! - lowering `A- = d/dz + (lambda/2) zb`:  `P -> dP/dz`
//! - Hamiltonian `H = -4 d2/dzdzb + lambda^2 z zb + 2 lambda zb F'(zb)`:
//!   `P -> -4 Pzzb + 2 lambda zb Pzb + 2 lambda z Pz + 4 F' Pz + 2 lambda P`

use crate::poly::LaurentBiPoly;
use crate::rational::{fmt_rat, parse_rat, CRat, Rat};
use num_traits::{Signed, Zero};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("lambda must be positive, got {0}")]
    NonPositiveLambda(String),
    #[error("omega must be non-negative, got {0}")]
    NegativeOmega(String),
    #[error("ansatz polynomial has negative zb powers")]
    NegativeZbarPower,
    #[error("zero constant is not a valid state normalization")]
    ZeroConstant,
}

/// Quartic interaction data: `F(zb) = b/2 zb^2 + omega/2 zb^4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuarticCoeffs {
    pub b: Rat,
    pub omega: Rat,
}

/// Coupling constants of one model: the oscillator coupling `lambda` and the
/// interaction polynomial `F(zb)` stored by ascending `zb` power.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelParams {
    lambda: Rat,
    f: Vec<Rat>,
}

impl ModelParams {
    /// General polynomial interaction. `f[k]` is the coefficient of `zb^k`.
    pub fn new(lambda: Rat, mut f: Vec<Rat>) -> Result<Self, ModelError> {
        if !lambda.is_positive() {
            return Err(ModelError::NonPositiveLambda(fmt_rat(&lambda)));
        }
        while f.last().map_or(false, |c| c.is_zero()) {
            f.pop();
        }
        Ok(ModelParams { lambda, f })
    }

    /// The quartic model `F = b/2 zb^2 + omega/2 zb^4`.
    pub fn quartic(lambda: Rat, b: Rat, omega: Rat) -> Result<Self, ModelError> {
        if omega.is_negative() {
            return Err(ModelError::NegativeOmega(fmt_rat(&omega)));
        }
        let two = Rat::from_integer(2.into());
        Self::new(
            lambda,
            vec![
                Rat::zero(),
                Rat::zero(),
                b / &two,
                Rat::zero(),
                omega / &two,
            ],
        )
    }

    pub fn lambda(&self) -> &Rat {
        &self.lambda
    }

    /// Coefficients of `F` by ascending `zb` power (trailing zeros trimmed).
    pub fn f_coeffs(&self) -> &[Rat] {
        &self.f
    }

    /// `(b, omega)` when `F` matches the quartic pattern, `None` otherwise.
    pub fn quartic_coeffs(&self) -> Option<QuarticCoeffs> {
        if self.f.len() > 5 {
            return None;
        }
        let coeff = |k: usize| self.f.get(k).cloned().unwrap_or_else(Rat::zero);
        if !coeff(0).is_zero() || !coeff(1).is_zero() || !coeff(3).is_zero() {
            return None;
        }
        let two = Rat::from_integer(2.into());
        Some(QuarticCoeffs {
            b: coeff(2) * &two,
            omega: coeff(4) * &two,
        })
    }

    /// `F'(zb)` as a polynomial in `zb`.
    pub fn f_prime(&self) -> LaurentBiPoly {
        let mut p = LaurentBiPoly::zero();
        for (k, c) in self.f.iter().enumerate().skip(1) {
            let d = c * Rat::from_integer(k.into());
            p = &p + &LaurentBiPoly::monomial(0, (k - 1) as i32, CRat::new(d, Rat::zero()));
        }
        p
    }

    /// Energy of level `n`: `2 lambda (n + 1)`.
    pub fn energy(&self, n: u32) -> Rat {
        &self.lambda * Rat::from_integer((2 * (n as i64 + 1)).into())
    }
}

impl Serialize for ModelParams {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let quartic = self.quartic_coeffs();
        let n = if quartic.is_some() { 4 } else { 2 };
        let mut st = serializer.serialize_struct("ModelParams", n)?;
        st.serialize_field("lambda", &fmt_rat(&self.lambda))?;
        let f: Vec<String> = self.f.iter().map(fmt_rat).collect();
        st.serialize_field("F", &f)?;
        if let Some(q) = quartic {
            st.serialize_field("b", &fmt_rat(&q.b))?;
            st.serialize_field("omega", &fmt_rat(&q.omega))?;
        }
        st.end()
    }
}

#[derive(Deserialize)]
struct ParamsRepr {
    lambda: String,
    #[serde(rename = "F")]
    f: Option<Vec<String>>,
    b: Option<String>,
    omega: Option<String>,
}

impl<'de> Deserialize<'de> for ModelParams {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = ParamsRepr::deserialize(deserializer)?;
        let lambda = parse_rat(&raw.lambda).map_err(D::Error::custom)?;
        if let Some(f) = raw.f {
            let coeffs = f
                .iter()
                .map(|s| parse_rat(s))
                .collect::<Result<Vec<_>, _>>()
                .map_err(D::Error::custom)?;
            ModelParams::new(lambda, coeffs).map_err(D::Error::custom)
        } else {
            let b = raw
                .b
                .as_deref()
                .map(parse_rat)
                .transpose()
                .map_err(D::Error::custom)?
                .unwrap_or_else(Rat::zero);
            let omega = raw
                .omega
                .as_deref()
                .map(parse_rat)
                .transpose()
                .map_err(D::Error::custom)?
                .unwrap_or_else(Rat::zero);
            ModelParams::quartic(lambda, b, omega).map_err(D::Error::custom)
        }
    }
}

/// A function `poly * W` in the fixed weight `W` of its model.
///
/// The polynomial part never carries negative `zb` powers; solver-internal
/// intermediates that do are plain [`LaurentBiPoly`] values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnsatzFn {
    params: ModelParams,
    poly: LaurentBiPoly,
}

impl AnsatzFn {
    pub fn new(params: ModelParams, poly: LaurentBiPoly) -> Result<Self, ModelError> {
        if poly.has_negative_zbar() {
            return Err(ModelError::NegativeZbarPower);
        }
        Ok(AnsatzFn { params, poly })
    }

    pub fn zero(params: ModelParams) -> Self {
        AnsatzFn {
            params,
            poly: LaurentBiPoly::zero(),
        }
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn poly(&self) -> &LaurentBiPoly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn scaled(&self, c: &CRat) -> Self {
        AnsatzFn {
            params: self.params.clone(),
            poly: self.poly.scale(c),
        }
    }

    fn with_poly(&self, poly: LaurentBiPoly) -> Self {
        AnsatzFn {
            params: self.params.clone(),
            poly,
        }
    }

    /// Raising operator: polynomial part `dP/dz - lambda zb P`.
    pub fn apply_a_plus(&self) -> Self {
        let lam = CRat::new(self.params.lambda.clone(), Rat::zero());
        let shifted = self.poly.mul_zbar_pow(1).scale(&lam);
        self.with_poly(&self.poly.d_z() - &shifted)
    }

    /// Lowering operator: polynomial part `dP/dz`.
    pub fn apply_a_minus(&self) -> Self {
        self.with_poly(self.poly.d_z())
    }

    /// Full Hamiltonian conjugated onto the polynomial part.
    pub fn apply_h(&self) -> Self {
        let lam = self.params.lambda.clone();
        let two_lam = CRat::new(&lam * Rat::from_integer(2.into()), Rat::zero());
        let p = &self.poly;
        let pz = p.d_z();
        let mixed = pz.d_zbar().scale(&CRat::new(Rat::from_integer((-4).into()), Rat::zero()));
        let zbar_pzb = p.d_zbar().mul_zbar_pow(1).scale(&two_lam);
        let z_pz = pz.mul_z_pow(1).scale(&two_lam);
        let fprime_pz = (&self.params.f_prime() * &pz)
            .scale(&CRat::new(Rat::from_integer(4.into()), Rat::zero()));
        let shift = p.scale(&two_lam);
        self.with_poly(&(&(&mixed + &zbar_pzb) + &z_pz) + &(&fprime_pz + &shift))
    }

    /// `(H - E_n)` conjugated onto the polynomial part, as the first-order
    /// system the chain solver integrates:
    /// `P -> 2(-2 Pzzb + lambda zb Pzb + lambda z Pz + 2 F' Pz - lambda n P)`.
    pub fn apply_h_conjugated(&self, n: u32) -> Self {
        let poly = h_minus_energy(&self.poly, &self.params, n);
        self.with_poly(poly)
    }

    /// The dual-family representative: swaps the roles of `z` and `zb` in the
    /// polynomial part and conjugates coefficients. An involution.
    pub fn conjugate(&self) -> Self {
        let poly = self
            .poly
            .conjugate_swap()
            .expect("ansatz polynomials have no negative zb powers");
        self.with_poly(poly)
    }
}

/// `(H - E_n) (P W) = W * h_minus_energy(P)`, applied directly to a bare
/// polynomial. The solver uses this form on intermediates that are not yet
/// valid ansatz functions.
pub fn h_minus_energy(p: &LaurentBiPoly, params: &ModelParams, n: u32) -> LaurentBiPoly {
    let lam = params.lambda().clone();
    let c = |r: Rat| CRat::new(r, Rat::zero());
    let pz = p.d_z();
    let mixed = pz
        .d_zbar()
        .scale(&c(Rat::from_integer((-4).into())));
    let zbar_pzb = p
        .d_zbar()
        .mul_zbar_pow(1)
        .scale(&c(&lam * Rat::from_integer(2.into())));
    let z_pz = pz
        .mul_z_pow(1)
        .scale(&c(&lam * Rat::from_integer(2.into())));
    let fprime_pz = (&params.f_prime() * &pz).scale(&c(Rat::from_integer(4.into())));
    let level = p.scale(&c(-(&lam * Rat::from_integer((2 * n as i64).into()))));
    &(&(&mixed + &zbar_pzb) + &z_pz) + &(&fprime_pz + &level)
}
