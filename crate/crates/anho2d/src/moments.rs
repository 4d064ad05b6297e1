//! The exact bilinear scalar product and its Gaussian moment table.
//!
//! The physical pairing of two states is the bilinear integral of their plain
//! product (no complex conjugation) over the plane, with the `d^2x`
//! normalization. For quartic interactions every such integral reduces to the
//! moment table
//!
//! `moment(N, M) = integral of z^N zb^M exp(-(lambda z zb + b zb^2)) d^2x`,
//!
//! which vanishes unless `N - M` is an even non-negative integer and
//! otherwise equals `pi * (-b)^((N-M)/2) * N! / (((N-M)/2)! lambda^(N+1))`.
//! The closed form is obtained by differentiating the generating Gaussian
//! `I(lambda, b, c)` and is cross-checked in the test suite against an
//! independent series-expansion oracle and against numerical quadrature.
//!
//! The quartic `exp(-omega zb^4)` factor of the squared weight is expanded as
//! a finite sum: the selection rule `M <= N` truncates it exactly, so the
//! pairing is a finite rational combination of table entries. All values are
//! rational multiples of pi and stay exact.

use crate::jordan::JordanCell;
use crate::model::{AnsatzFn, ModelParams};
use crate::rational::{fmt_rat, rat_pow, rat_to_f64, CRat, Rat};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MomentError {
    #[error("this operation requires quartic interaction parameters")]
    NonQuartic,
    #[error("the two functions carry different model parameters")]
    ParamMismatch,
    #[error("matrix entry has a nonzero imaginary part")]
    NonRealEntry,
}

/// A rational multiple of pi.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiRational {
    coeff: Rat,
}

impl PiRational {
    pub fn new(coeff: Rat) -> Self {
        PiRational { coeff }
    }

    pub fn zero() -> Self {
        PiRational { coeff: Rat::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// The rational coefficient of pi.
    pub fn coeff(&self) -> &Rat {
        &self.coeff
    }

    pub fn scale(&self, r: &Rat) -> Self {
        PiRational::new(&self.coeff * r)
    }

    pub fn add(&self, other: &Self) -> Self {
        PiRational::new(&self.coeff + &other.coeff)
    }

    pub fn to_f64(&self) -> f64 {
        rat_to_f64(&self.coeff) * std::f64::consts::PI
    }
}

impl fmt::Display for PiRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})*pi", fmt_rat(&self.coeff))
    }
}

impl Serialize for PiRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("PiRational", 2)?;
        st.serialize_field("value", &fmt_rat(&self.coeff))?;
        st.serialize_field("unit", "pi")?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for PiRational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            value: String,
            #[allow(dead_code)]
            unit: String,
        }
        let r = Repr::deserialize(d)?;
        let coeff = crate::rational::parse_rat(&r.value).map_err(serde::de::Error::custom)?;
        Ok(PiRational::new(coeff))
    }
}

/// A complex-rational multiple of pi; the general pairing value.
#[derive(Clone, Debug, PartialEq)]
pub struct PiComplex {
    coeff: CRat,
}

impl PiComplex {
    pub fn new(coeff: CRat) -> Self {
        PiComplex { coeff }
    }

    pub fn zero() -> Self {
        PiComplex {
            coeff: CRat::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn coeff(&self) -> &CRat {
        &self.coeff
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.coeff = self.coeff.clone() + other.coeff.clone();
    }

    /// Real part as a [`PiRational`] when the imaginary part vanishes.
    pub fn as_real(&self) -> Result<PiRational, MomentError> {
        if !self.coeff.im.is_zero() {
            return Err(MomentError::NonRealEntry);
        }
        Ok(PiRational::new(self.coeff.re.clone()))
    }
}

impl fmt::Display for PiComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}+{}i)*pi", fmt_rat(&self.coeff.re), fmt_rat(&self.coeff.im))
    }
}

/// Closed-form moment for explicit `lambda`, `b`.
///
/// Defined for every rational `b`; the condition `lambda > |b|` only gates
/// absolute convergence of the defining integral, which matters for the
/// numerical cross-check, not for the formal table.
pub fn moment_lb(n_pow: u32, m_pow: u32, lambda: &Rat, b: &Rat) -> PiRational {
    if n_pow < m_pow || (n_pow - m_pow) % 2 == 1 {
        return PiRational::zero();
    }
    let k = (n_pow - m_pow) / 2;
    let num = Rat::from_integer(crate::rational::factorial(n_pow));
    let den = Rat::from_integer(crate::rational::factorial(k));
    let sign_b = rat_pow(&-b.clone(), k as i32);
    let lam_pow = rat_pow(lambda, n_pow as i32 + 1);
    PiRational::new(sign_b * num / (den * lam_pow))
}

/// Closed-form moment for quartic model parameters.
pub fn moment(n_pow: u32, m_pow: u32, params: &ModelParams) -> Result<PiRational, MomentError> {
    let q = params.quartic_coeffs().ok_or(MomentError::NonQuartic)?;
    Ok(moment_lb(n_pow, m_pow, params.lambda(), &q.b))
}

/// Pairing of two bare polynomials against the squared quartic weight
/// `exp(-(lambda z zb + b zb^2 + omega zb^4))`, in `d^2x` normalization.
///
/// The `exp(-omega zb^4)` factor is expanded termwise; for a product monomial
/// `z^N zb^M` only orders `j` with `M + 4j <= N` contribute, so the sum is
/// finite and exact.
pub fn pairing_polys(
    p: &crate::poly::LaurentBiPoly,
    q: &crate::poly::LaurentBiPoly,
    lambda: &Rat,
    b: &Rat,
    omega: &Rat,
) -> PiComplex {
    let prod = p * q;
    let mut acc = PiComplex::zero();
    for (e, c) in prod.terms() {
        debug_assert!(e.zbar >= 0, "pairing operands must be ansatz polynomials");
        let n_pow = e.z;
        let m_pow = e.zbar as u32;
        // sum_j (-omega)^j / j! * moment(N, M + 4j)
        let mut weight_sum = Rat::zero();
        let mut j = 0u32;
        while m_pow + 4 * j <= n_pow {
            let m = moment_lb(n_pow, m_pow + 4 * j, lambda, b);
            if !m.is_zero() {
                let term = rat_pow(&-omega.clone(), j as i32)
                    / Rat::from_integer(crate::rational::factorial(j));
                weight_sum += term * m.coeff();
            }
            j += 1;
        }
        if !weight_sum.is_zero() {
            let w = CRat::new(weight_sum, Rat::zero());
            acc.add_assign(&PiComplex::new(c.clone() * w));
        }
    }
    acc
}

/// The bilinear scalar product of two states of the same quartic model.
pub fn pairing(f: &AnsatzFn, g: &AnsatzFn) -> Result<PiComplex, MomentError> {
    if f.params() != g.params() {
        return Err(MomentError::ParamMismatch);
    }
    let q = f.params().quartic_coeffs().ok_or(MomentError::NonQuartic)?;
    Ok(pairing_polys(
        f.poly(),
        g.poly(),
        f.params().lambda(),
        &q.b,
        &q.omega,
    ))
}

/// Symmetry of `H` under the bilinear pairing: checks
/// `<<H f | g>> == <<f | H g>>` exactly.
pub fn pseudo_symmetry_check(f: &AnsatzFn, g: &AnsatzFn) -> Result<bool, MomentError> {
    let lhs = pairing(&f.apply_h(), g)?;
    let rhs = pairing(f, &g.apply_h())?;
    Ok(lhs == rhs)
}

/// Full pairing matrix over the chain members of a set of cells.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GramMatrix {
    /// Row/column labels `(n, k)` in build order.
    pub indices: Vec<(u32, u32)>,
    /// Symmetric matrix of pairings, entries in units of pi.
    pub entries: Vec<Vec<PiRational>>,
}

impl GramMatrix {
    /// Entry lookup by position.
    pub fn entry(&self, row: usize, col: usize) -> &PiRational {
        &self.entries[row][col]
    }

    /// True when the matrix is block anti-diagonal: within each cell `n` the
    /// pairing of `(n,k)` with `(n,l)` equals the cell's recorded
    /// anti-diagonal value iff `k + l = n`, and every cross-cell entry is
    /// zero. `diag` maps `n` to the expected anti-diagonal coefficient.
    pub fn matches_block_pattern(&self, diag: &dyn Fn(u32) -> Rat) -> bool {
        for (i, &(n, k)) in self.indices.iter().enumerate() {
            for (j, &(m, l)) in self.indices.iter().enumerate() {
                let expect = if n == m && k + l == n {
                    diag(n)
                } else {
                    Rat::zero()
                };
                if *self.entries[i][j].coeff() != expect {
                    return false;
                }
            }
        }
        true
    }
}

/// Compute the Gram matrix of a list of cells (all sharing parameters).
pub fn gram(cells: &[JordanCell]) -> Result<GramMatrix, MomentError> {
    let mut indices = Vec::new();
    let mut funcs: Vec<&AnsatzFn> = Vec::new();
    for cell in cells {
        for (k, f) in cell.chain().iter().enumerate() {
            indices.push((cell.n(), k as u32));
            funcs.push(f);
        }
    }
    let mut entries = Vec::with_capacity(funcs.len());
    for f in &funcs {
        let mut row = Vec::with_capacity(funcs.len());
        for g in &funcs {
            row.push(pairing(f, g)?.as_real()?);
        }
        entries.push(row);
    }
    Ok(GramMatrix { indices, entries })
}

/// Matrix elements `<<Psi_{n, p_n-1-k} | H | Psi_{m, l}>>`.
///
/// With cells normalized to anti-diagonal value `d_n * pi`, the block for
/// level `n` equals `d_n * pi * (E_n on the diagonal, 1 on the
/// superdiagonal)` -- the Jordan normal form of `H` up to the pi unit.
pub fn jordan_matrix(cells: &[JordanCell]) -> Result<GramMatrix, MomentError> {
    let mut indices = Vec::new();
    let mut bras: Vec<&AnsatzFn> = Vec::new();
    let mut kets: Vec<&AnsatzFn> = Vec::new();
    for cell in cells {
        let p = cell.chain().len();
        for k in 0..p {
            indices.push((cell.n(), k as u32));
            bras.push(&cell.chain()[p - 1 - k]);
            kets.push(&cell.chain()[k]);
        }
    }
    let mut entries = Vec::with_capacity(bras.len());
    for bra in &bras {
        let mut row = Vec::with_capacity(kets.len());
        for ket in &kets {
            row.push(pairing(bra, &ket.apply_h())?.as_real()?);
        }
        entries.push(row);
    }
    Ok(GramMatrix { indices, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::LaurentBiPoly;
    use crate::rational::{crat_i, crat_re, rat, rat_i};

    fn params() -> ModelParams {
        ModelParams::quartic(rat_i(2), rat(1, 2), rat(1, 3)).unwrap()
    }

    #[test]
    fn test_moment_basic_values() {
        let lam = rat_i(2);
        let b = rat(1, 2);
        // moment(0,0) = pi/lambda
        assert_eq!(*moment_lb(0, 0, &lam, &b).coeff(), rat(1, 2));
        // moment(1,1) = pi/lambda^2
        assert_eq!(*moment_lb(1, 1, &lam, &b).coeff(), rat(1, 4));
        // moment(0,2) = 0: more zb than z powers
        assert!(moment_lb(0, 2, &lam, &b).is_zero());
        // moment(2,0) = -2 pi b / lambda^3 = -pi/8 here
        assert_eq!(*moment_lb(2, 0, &lam, &b).coeff(), rat(-1, 8));
    }

    #[test]
    fn test_moment_selection_rules_exhaustive() {
        let lam = rat_i(2);
        let b = rat(1, 2);
        for n in 0..=10u32 {
            for m in 0..=10u32 {
                let v = moment_lb(n, m, &lam, &b);
                if (n + m) % 2 == 1 || m > n {
                    assert!(v.is_zero(), "moment({n},{m}) should vanish");
                } else {
                    assert!(!v.is_zero(), "moment({n},{m}) should not vanish");
                }
            }
        }
    }

    #[test]
    fn test_ground_state_norm() {
        // <<Psi00|Psi00>> = pi c^2 / lambda (quartic F has F(0) = 0)
        let p = params();
        let c = rat(3, 5);
        let f = AnsatzFn::new(p.clone(), LaurentBiPoly::constant(crat_re(c.clone()))).unwrap();
        let v = pairing(&f, &f).unwrap().as_real().unwrap();
        assert_eq!(*v.coeff(), &c * &c / rat_i(2));
    }

    #[test]
    fn test_excited_states_self_orthogonal() {
        let p = params();
        for n in 1..=6i32 {
            let f = AnsatzFn::new(p.clone(), LaurentBiPoly::monomial(0, n, crat_i(1, 0))).unwrap();
            assert!(pairing(&f, &f).unwrap().is_zero(), "n = {n}");
        }
    }

    #[test]
    fn test_first_cell_cross_pairing() {
        // With unit constants, <z W, zb W>-type pairing gives pi/lambda^2.
        let p = params();
        let psi10 = AnsatzFn::new(p.clone(), LaurentBiPoly::var_zbar()).unwrap();
        // alpha = -b fixed first associated function: z + (b zb - 2 w zb^3)/lambda
        let q = p.quartic_coeffs().unwrap();
        let lam = p.lambda().clone();
        let poly = LaurentBiPoly::from_terms([
            (1, 0, crat_i(1, 0)),
            (0, 1, crat_re(&q.b / &lam)),
            (0, 3, crat_re(-(&q.omega * rat_i(2)) / &lam)),
        ]);
        let psi11 = AnsatzFn::new(p.clone(), poly).unwrap();
        let v = pairing(&psi10, &psi11).unwrap().as_real().unwrap();
        // = moment(1,1) = pi / lambda^2 = pi/4
        assert_eq!(*v.coeff(), rat(1, 4));
        // and the self product vanishes exactly at alpha = -b
        assert!(pairing(&psi11, &psi11).unwrap().is_zero());
    }

    #[test]
    fn test_self_product_alpha_dependence() {
        // Before fixing the constant, <<Psi11|Psi11>> = -2 pi (b + alpha)/lambda^3.
        let p = params();
        let q = p.quartic_coeffs().unwrap();
        let lam = p.lambda().clone();
        for alpha_num in [-3i64, 0, 2, 5] {
            let alpha = rat(alpha_num, 4);
            let poly = LaurentBiPoly::from_terms([
                (1, 0, crat_i(1, 0)),
                (0, 1, crat_re(-&alpha / &lam)),
                (0, 3, crat_re(-(&q.omega * rat_i(2)) / &lam)),
            ]);
            let f = AnsatzFn::new(p.clone(), poly).unwrap();
            let v = pairing(&f, &f).unwrap().as_real().unwrap();
            let expected = -rat_i(2) * (&q.b + &alpha) / rat_pow(&lam, 3);
            assert_eq!(*v.coeff(), expected);
        }
    }

    #[test]
    fn test_pairing_symmetry_random() {
        use crate::testkit::{random_ansatz, SplitMix64};
        let p = params();
        let mut rng = SplitMix64::new(41);
        for _ in 0..100 {
            let f = random_ansatz(&mut rng, &p, 4, 5);
            let g = random_ansatz(&mut rng, &p, 4, 5);
            assert_eq!(pairing(&f, &g).unwrap(), pairing(&g, &f).unwrap());
        }
    }

    #[test]
    fn test_pseudo_symmetry_random() {
        use crate::testkit::{random_ansatz, SplitMix64};
        let p = params();
        let mut rng = SplitMix64::new(42);
        for _ in 0..50 {
            let f = random_ansatz(&mut rng, &p, 4, 5);
            let g = random_ansatz(&mut rng, &p, 4, 5);
            assert!(pseudo_symmetry_check(&f, &g).unwrap());
        }
    }

    #[test]
    fn test_omega_truncation_soundness() {
        // Adding one more expansion order past the cutoff changes nothing:
        // every skipped moment vanishes by the M > N rule.
        let p = params();
        let q = p.quartic_coeffs().unwrap();
        let lam = p.lambda();
        let poly = LaurentBiPoly::from_terms([(3, 0, crat_i(2, 0)), (1, 2, crat_i(1, 0))]);
        let prod = &poly * &poly;
        for (e, _) in prod.terms() {
            let n_pow = e.z;
            let m_pow = e.zbar as u32;
            let j_past = (n_pow.saturating_sub(m_pow)) / 4 + 1;
            let extra = moment_lb(n_pow, m_pow + 4 * j_past, lam, &q.b);
            assert!(extra.is_zero());
        }
    }

    #[test]
    fn test_param_mismatch_rejected() {
        let p1 = params();
        let p2 = ModelParams::quartic(rat_i(2), rat(1, 4), rat(1, 3)).unwrap();
        let f = AnsatzFn::new(p1, LaurentBiPoly::one()).unwrap();
        let g = AnsatzFn::new(p2, LaurentBiPoly::one()).unwrap();
        assert_eq!(pairing(&f, &g), Err(MomentError::ParamMismatch));
    }
}
