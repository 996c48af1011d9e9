use std::collections::HashMap;
use std::sync::Arc;

use leviflat::sample::{random_point, random_poly, small_gaussian};
use leviflat::univariate::UniPoly;
use leviflat::{
    groebner_basis, parse_poly, print_poly, Budget, Dimension, GaussianRational, Ideal, Monomial, Polynomial,
    TermOrder, VarContext,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Product by plain convolution into a hash map.
fn naive_mul(p: &Polynomial, q: &Polynomial) -> Polynomial {
    let mut acc: HashMap<Vec<u32>, GaussianRational> = HashMap::new();
    for (ma, ca) in p.terms() {
        for (mb, cb) in q.terms() {
            let key: Vec<u32> = ma.exponents().iter().zip(mb.exponents()).map(|(a, b)| a + b).collect();
            *acc.entry(key).or_insert_with(GaussianRational::zero) += &(ca * cb);
        }
    }
    Polynomial::from_terms(p.context(), acc.into_iter().map(|(k, c)| (Monomial::from_exponents(&k), c)))
}

/// Bihomogeneous polynomial of bidegree `(a, b)` in `zw(n)`.
fn bihomogeneous(r: &mut ChaCha8Rng, ctx: &Arc<VarContext>, a: u32, b: u32) -> Polynomial {
    let n = ctx.n_z();
    let terms: Vec<_> = (0..3)
        .map(|_| {
            let mut m = Monomial::one(ctx.len());
            for _ in 0..a {
                let v = r.gen_range(0..n);
                m.set(v, m.get(v) + 1);
            }
            for _ in 0..b {
                let v = n + r.gen_range(0..n);
                m.set(v, m.get(v) + 1);
            }
            (m, small_gaussian(r, 4))
        })
        .collect();
    Polynomial::from_terms(ctx, terms)
}

/// Newton interpolation through `(t_k, y_k)`, differentiated at `t = 0`.
fn derivative_at_zero(ts: &[GaussianRational], ys: &[GaussianRational]) -> GaussianRational {
    let n = ts.len();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = &(&coef[i] - &coef[i - 1]) / &(&ts[i] - &ts[i - j]);
        }
    }
    // p(t) = Σ coef[k] Π_{m<k} (t - t_m); differentiate the products at 0
    let mut d = GaussianRational::zero();
    for k in 1..n {
        let mut s = GaussianRational::zero();
        for skip in 0..k {
            let mut prod = GaussianRational::one();
            for m in 0..k {
                if m != skip {
                    prod *= &(-&ts[m]);
                }
            }
            s += &prod;
        }
        d += &(&coef[k] * &s);
    }
    d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ctx = VarContext::zw(2);
        let (p, q, s) = (random_poly(&mut r, &ctx, 3, 5), random_poly(&mut r, &ctx, 3, 5), random_poly(&mut r, &ctx, 3, 5));
        prop_assert_eq!(&(&p + &q) + &s, &p + &(&q + &s));
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&(&p * &q) * &s, &p * &(&q * &s));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&p * &(&q + &s), &(&p * &q) + &(&p * &s));
        prop_assert_eq!(&p * &q, naive_mul(&p, &q));
        prop_assert!((&p - &p).is_zero());
        prop_assert!(p.terms().iter().all(|(_, c)| !c.is_zero()));
    }

    #[test]
    fn conjugation_is_a_ring_automorphism(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ctx = VarContext::zw(2);
        let (p, q) = (random_poly(&mut r, &ctx, 3, 5), random_poly(&mut r, &ctx, 3, 5));
        prop_assert_eq!((&p * &q).conj_coefficients(), &p.conj_coefficients() * &q.conj_coefficients());
        prop_assert_eq!((&p + &q).conj_coefficients(), &p.conj_coefficients() + &q.conj_coefficients());
        prop_assert_eq!(p.conj_coefficients().conj_coefficients(), p);
    }

    #[test]
    fn bidegrees_add(seed in any::<u64>(), a in 0u32..3, b in 0u32..3, c in 0u32..3, d in 0u32..3) {
        let mut r = rng(seed);
        let ctx = VarContext::zw(3);
        let p = bihomogeneous(&mut r, &ctx, a, b);
        let q = bihomogeneous(&mut r, &ctx, c, d);
        let pq = &p * &q;
        prop_assume!(!pq.is_zero());
        prop_assert_eq!(pq.bidegrees(), vec![(u64::from(a + c), u64::from(b + d))]);
    }

    #[test]
    fn evaluation_is_a_homomorphism(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ctx = VarContext::zw(2);
        let (p, q) = (random_poly(&mut r, &ctx, 3, 4), random_poly(&mut r, &ctx, 3, 4));
        let x = random_point(&mut r, 4, 5);
        let (ep, eq) = (p.evaluate(&x).unwrap(), q.evaluate(&x).unwrap());
        prop_assert_eq!((&p * &q).evaluate(&x).unwrap(), &ep * &eq);
        prop_assert_eq!((&p + &q).evaluate(&x).unwrap(), &ep + &eq);
    }

    #[test]
    fn derivative_matches_interpolation(seed in any::<u64>(), var in 0usize..3) {
        let mut r = rng(seed);
        let ctx = VarContext::z_only(3);
        let p = random_poly(&mut r, &ctx, 5, 6);
        let base = random_point(&mut r, 3, 5);
        // p restricted to the line base + t e_var has degree ≤ 5
        let ts: Vec<GaussianRational> = (0..6).map(|k| GaussianRational::from(k as i64 - 2)).collect();
        let ys: Vec<GaussianRational> = ts
            .iter()
            .map(|t| {
                let mut x = base.clone();
                x[var] = &x[var] + t;
                p.evaluate(&x).unwrap()
            })
            .collect();
        let dp = p.partial_derivative(var).unwrap().evaluate(&base).unwrap();
        prop_assert_eq!(dp, derivative_at_zero(&ts, &ys));
    }

    #[test]
    fn print_parse_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ctx = VarContext::zw(3);
        let p = random_poly(&mut r, &ctx, 4, 6);
        prop_assert_eq!(parse_poly(&print_poly(&p), &ctx).unwrap(), p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reduced_bases_are_canonical(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ctx = VarContext::z_only(3);
        let gens: Vec<Polynomial> = (0..3).map(|_| random_poly(&mut r, &ctx, 2, 3)).collect();
        let b = Budget::default();
        for order in [TermOrder::Grevlex, TermOrder::Lex] {
            let gb = groebner_basis(&ctx, &gens, &order, &b).unwrap();
            prop_assert!(gb.satisfies_buchberger_criterion());
            prop_assert!(gb.is_reduced());
            for g in &gens {
                prop_assert!(gb.normal_form(g).unwrap().is_zero());
            }
            // the reduced basis depends on the ideal, not on its presentation
            let mut other = gens.clone();
            other.reverse();
            other.push(&(&gens[0] * &gens[1]) + &gens[2]);
            let gb2 = groebner_basis(&ctx, &other, &order, &b).unwrap();
            prop_assert_eq!(gb.polys(), gb2.polys());

            let f = random_poly(&mut r, &ctx, 3, 4);
            let nf = gb.normal_form(&f).unwrap();
            prop_assert_eq!(gb.normal_form(&nf).unwrap(), nf.clone());
            prop_assert!(gb.contains(&(&f - &nf)).unwrap());
        }
    }

    #[test]
    fn linear_ideals_have_expected_dimension(seed in any::<u64>(), k in 0usize..4) {
        let mut r = rng(seed);
        let n = 4;
        let ctx = VarContext::z_only(n);
        // homogeneous linear forms: the dimension is n minus their rank
        let rows: Vec<Vec<GaussianRational>> = (0..k)
            .map(|_| (0..n).map(|_| GaussianRational::from(r.gen_range(-2..=2i64))).collect())
            .collect();
        let gens: Vec<Polynomial> = rows
            .iter()
            .map(|row| {
                Polynomial::from_terms(&ctx, row.iter().enumerate().map(|(i, c)| (Monomial::var(n, i, 1), c.clone())))
            })
            .collect();
        let rank = {
            let mut m = rows.clone();
            let mut rank = 0;
            for col in 0..n {
                if let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) {
                    m.swap(rank, p);
                    for i in 0..m.len() {
                        if i != rank && !m[i][col].is_zero() {
                            let f = &m[i][col] / &m[rank][col];
                            let pivot = m[rank].clone();
                            for (x, y) in m[i].iter_mut().zip(&pivot) {
                                *x -= &(&f * y);
                            }
                        }
                    }
                    rank += 1;
                }
            }
            rank
        };
        let ideal = Ideal::new(&ctx, gens).unwrap();
        prop_assert_eq!(ideal.krull_dimension(&Budget::default()).unwrap(), Dimension::Dim(n - rank));
    }

    #[test]
    fn sturm_counts_distinct_real_roots(roots in proptest::collection::vec((-6i64..6, 1i64..4), 0..5), extra in 0usize..3) {
        // Π (x - a/b) times (x^2 + 1)^extra
        let mut p = UniPoly::from_ints(&[1]);
        let mut distinct: Vec<BigRational> = Vec::new();
        for &(a, b) in &roots {
            let r = BigRational::new(BigInt::from(a), BigInt::from(b));
            p = mul(&p, &UniPoly::new(vec![-r.clone(), BigRational::one()]));
            if !distinct.contains(&r) {
                distinct.push(r);
            }
        }
        for _ in 0..extra {
            p = mul(&p, &UniPoly::from_ints(&[1, 0, 1]));
        }
        prop_assert_eq!(p.count_real_roots(), distinct.len());
        let mut found = p.rational_roots().unwrap();
        found.sort();
        distinct.sort();
        prop_assert_eq!(found, distinct);
    }
}

fn mul(a: &UniPoly, b: &UniPoly) -> UniPoly {
    let (x, y) = (a.coeffs(), b.coeffs());
    let mut out = vec![BigRational::zero(); x.len() + y.len() - 1];
    for (i, u) in x.iter().enumerate() {
        for (j, v) in y.iter().enumerate() {
            out[i + j] += u * v;
        }
    }
    UniPoly::new(out)
}
