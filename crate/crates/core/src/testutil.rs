//! Test-only oracles, kept independent of the code paths they check.

use std::collections::HashMap;

use num_traits::Zero;

use crate::gaussian::GaussianRational;
use crate::poly::Polynomial;

pub use crate::sample::random_poly;

/// Term-by-term convolution through a hash map, no ordering involved.
pub fn naive_mul(p: &Polynomial, q: &Polynomial) -> Polynomial {
    let mut acc: HashMap<Vec<u32>, GaussianRational> = HashMap::new();
    for (ma, ca) in p.terms() {
        for (mb, cb) in q.terms() {
            let key: Vec<u32> = ma
                .exponents()
                .iter()
                .zip(mb.exponents())
                .map(|(a, b)| a + b)
                .collect();
            let e = acc.entry(key).or_insert_with(GaussianRational::zero);
            *e += &(ca * cb);
        }
    }
    Polynomial::from_terms(
        p.context(),
        acc.into_iter()
            .map(|(k, c)| (crate::monomial::Monomial::from_exponents(&k), c)),
    )
}
