//! Deterministic random generators shared by the unit, property, and
//! acceptance test suites. Not part of the stable API.

use crate::model::{AnsatzFn, ModelParams};
use crate::poly::LaurentBiPoly;
use crate::rational::{CRat, Rat};
use num_traits::Zero;

/// Minimal xorshift generator so the crate's test corpus does not depend on
/// an RNG crate at run time. Deterministic for a given seed.
#[derive(Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `0..bound`.
    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }

    /// Small signed rational with numerator and denominator below `bound`.
    pub fn rat(&mut self, bound: u64) -> Rat {
        let n = self.below(2 * bound + 1) as i64 - bound as i64;
        let d = self.below(bound) as i64 + 1;
        Rat::new(n.into(), d.into())
    }

    pub fn crat(&mut self, bound: u64) -> CRat {
        CRat::new(self.rat(bound), self.rat(bound))
    }
}

/// Random polynomial with `z` degree at most `max_z`, `zb` degree at most
/// `max_zbar`, around `terms` nonzero terms, coefficients bounded by `bound`.
pub fn random_poly(
    rng: &mut SplitMix64,
    max_z: u32,
    max_zbar: u32,
    terms: usize,
    bound: u64,
) -> LaurentBiPoly {
    let mut p = LaurentBiPoly::zero();
    for _ in 0..terms {
        let z = rng.below(max_z as u64 + 1) as u32;
        let zb = rng.below(max_zbar as u64 + 1) as i32;
        let c = rng.crat(bound);
        if !c.is_zero() {
            p = &p + &LaurentBiPoly::monomial(z, zb, c);
        }
    }
    p
}

/// Random ansatz function over the given parameters.
pub fn random_ansatz(
    rng: &mut SplitMix64,
    params: &ModelParams,
    max_z: u32,
    max_zbar: u32,
) -> AnsatzFn {
    let poly = random_poly(rng, max_z, max_zbar, 6, 9);
    AnsatzFn::new(params.clone(), poly).expect("generated polynomial has no negative zb powers")
}

/// Random general (non-quartic) interaction of degree at most `deg`.
pub fn random_params(rng: &mut SplitMix64, deg: usize) -> ModelParams {
    let lambda = Rat::new((rng.below(5) as i64 + 1).into(), (rng.below(3) as i64 + 1).into());
    let mut f = vec![Rat::zero()];
    for _ in 1..=deg {
        f.push(rng.rat(4));
    }
    ModelParams::new(lambda, f).expect("lambda is positive by construction")
}
