//! Deterministic random generation of small-height test data.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use crate::context::VarContext;
use crate::gaussian::GaussianRational;
use crate::monomial::Monomial;
use crate::poly::Polynomial;

/// Rational with numerator in `[-h, h]` and denominator in `[1, h]`.
pub fn small_rational<R: Rng>(rng: &mut R, h: i64) -> BigRational {
    let n = rng.gen_range(-h..=h);
    let d = rng.gen_range(1..=h.max(1));
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Gaussian rational of small height; purely real about half of the time.
pub fn small_gaussian<R: Rng>(rng: &mut R, h: i64) -> GaussianRational {
    let re = small_rational(rng, h);
    let im = if rng.gen_bool(0.5) {
        small_rational(rng, h)
    } else {
        BigRational::from_integer(0.into())
    };
    GaussianRational::new(re, im)
}

pub fn nonzero_gaussian<R: Rng>(rng: &mut R, h: i64) -> GaussianRational {
    loop {
        let c = small_gaussian(rng, h);
        if c != GaussianRational::from(0) {
            return c;
        }
    }
}

pub fn random_monomial<R: Rng>(rng: &mut R, nvars: usize, max_deg: u32) -> Monomial {
    let mut m = Monomial::one(nvars);
    if nvars == 0 {
        return m;
    }
    let deg = rng.gen_range(0..=max_deg);
    for _ in 0..deg {
        let v = rng.gen_range(0..nvars);
        m.set(v, m.get(v) + 1);
    }
    m
}

/// Random polynomial with at most `max_terms` terms of degree `≤ max_deg`.
pub fn random_poly<R: Rng>(
    rng: &mut R,
    ctx: &Arc<VarContext>,
    max_deg: u32,
    max_terms: usize,
) -> Polynomial {
    let k = rng.gen_range(0..=max_terms);
    Polynomial::from_terms(
        ctx,
        (0..k).map(|_| (random_monomial(rng, ctx.len(), max_deg), small_gaussian(rng, 5))),
    )
}

/// Random polynomial in the z-block only.
pub fn random_z_poly<R: Rng>(
    rng: &mut R,
    ctx: &Arc<VarContext>,
    max_deg: u32,
    max_terms: usize,
) -> Polynomial {
    let k = rng.gen_range(1..=max_terms.max(1));
    Polynomial::from_terms(
        ctx,
        (0..k).map(|_| {
            let zm = random_monomial(rng, ctx.n_z(), max_deg);
            let mut m = Monomial::one(ctx.len());
            for i in 0..ctx.n_z() {
                m.set(i, zm.get(i));
            }
            (m, small_gaussian(rng, 5))
        }),
    )
}

/// Random point with small-height coordinates.
pub fn random_point<R: Rng>(rng: &mut R, n: usize, h: i64) -> Vec<GaussianRational> {
    (0..n).map(|_| small_gaussian(rng, h)).collect()
}
