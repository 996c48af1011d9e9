//! Sparse multivariate polynomials over ℚ(i).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::context::{Block, VarContext};
use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::monomial::{canonical_cmp, Exponent, Monomial, TermOrder};

/// Arithmetic selector for [`poly_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// A polynomial tied to a variable context. Terms are stored without zero
/// coefficients, sorted decreasingly by the context's canonical order
/// (grevlex with the w-block ahead of the z-block).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    ctx: Arc<VarContext>,
    terms: Vec<(Monomial, GaussianRational)>,
}

impl Polynomial {
    pub fn zero(ctx: &Arc<VarContext>) -> Self {
        Polynomial {
            ctx: ctx.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ctx: &Arc<VarContext>, c: GaussianRational) -> Self {
        Self::from_terms(ctx, [(Monomial::one(ctx.len()), c)])
    }

    pub fn one(ctx: &Arc<VarContext>) -> Self {
        Self::constant(ctx, GaussianRational::one())
    }

    pub fn var(ctx: &Arc<VarContext>, idx: usize) -> Result<Self> {
        if idx >= ctx.len() {
            return Err(Error::InvalidVariable {
                index: idx,
                len: ctx.len(),
            });
        }
        Ok(Self::from_terms(
            ctx,
            [(Monomial::var(ctx.len(), idx, 1), GaussianRational::one())],
        ))
    }

    /// `z_{k+1}` (0-based `k`).
    pub fn z(ctx: &Arc<VarContext>, k: usize) -> Self {
        Self::var(ctx, ctx.z_index(k)).expect("z index in range")
    }

    /// `w_{k+1}` (0-based `k`).
    pub fn w(ctx: &Arc<VarContext>, k: usize) -> Self {
        assert!(ctx.has_w(), "context has no w-block");
        Self::var(ctx, ctx.w_index(k)).expect("w index in range")
    }

    /// Builds a polynomial from arbitrary (possibly repeated or zero) terms.
    pub fn from_terms<I>(ctx: &Arc<VarContext>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, GaussianRational)>,
    {
        let mut acc: BTreeMap<Monomial, GaussianRational> = BTreeMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), ctx.len());
            match acc.get_mut(&m) {
                Some(e) => *e += &c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Self::from_map(ctx, acc)
    }

    fn from_map(ctx: &Arc<VarContext>, acc: BTreeMap<Monomial, GaussianRational>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| canonical_cmp(ctx, &b.0, &a.0));
        Polynomial {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn terms(&self) -> &[(Monomial, GaussianRational)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, GaussianRational)> {
        self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// The value of a constant polynomial.
    pub fn constant_value(&self) -> Option<GaussianRational> {
        match self.terms.as_slice() {
            [] => Some(GaussianRational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> GaussianRational {
        self.terms
            .iter()
            .find(|(t, _)| t == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(GaussianRational::zero)
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn degree_in(&self, idx: usize) -> Exponent {
        self.terms.iter().map(|(m, _)| m.get(idx)).max().unwrap_or(0)
    }

    pub fn uses_var(&self, idx: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.get(idx) > 0)
    }

    pub fn uses_block(&self, block: Block) -> bool {
        self.ctx.indices_of(block).any(|i| self.uses_var(i))
    }

    /// Distinct bidegrees (z-degree, w-degree) occurring in the polynomial.
    pub fn bidegrees(&self) -> Vec<(u64, u64)> {
        let mut v: Vec<_> = self.terms.iter().map(|(m, _)| m.bidegree(&self.ctx)).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn leading_term(&self, order: &TermOrder) -> Option<(&Monomial, &GaussianRational)> {
        let ord = order.compile(&self.ctx);
        self.terms
            .iter()
            .max_by(|a, b| ord.cmp(&a.0, &b.0))
            .map(|(m, c)| (m, c))
    }

    pub fn scale(&self, c: &GaussianRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ctx);
        }
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_term(&self, mono: &Monomial, c: &GaussianRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ctx);
        }
        // multiplication by a monomial preserves the order of the terms
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.mul(mono), a * c))
                .collect(),
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.ctx.check_same(&other.ctx)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.ctx.check_same(&other.ctx)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.ctx.check_same(&other.ctx)?;
        let mut acc: BTreeMap<Monomial, GaussianRational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.get_mut(&m) {
                    Some(e) => *e += &c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Ok(Self::from_map(&self.ctx, acc))
    }

    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let ctx = &*self.ctx;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() || j < b.len() {
            let pick = if i == a.len() {
                std::cmp::Ordering::Less
            } else if j == b.len() {
                std::cmp::Ordering::Greater
            } else {
                canonical_cmp(ctx, &a[i].0, &b[j].0)
            };
            match pick {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Polynomial {
            ctx: self.ctx.clone(),
            terms: out,
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.ctx);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to variable `idx`.
    pub fn partial_derivative(&self, idx: usize) -> Result<Polynomial> {
        if idx >= self.ctx.len() {
            return Err(Error::InvalidVariable {
                index: idx,
                len: self.ctx.len(),
            });
        }
        Ok(Self::from_terms(
            &self.ctx,
            self.terms.iter().filter(|(m, _)| m.get(idx) > 0).map(|(m, c)| {
                let e = m.get(idx);
                let mut m2 = m.clone();
                m2.set(idx, e - 1);
                (m2, c * &GaussianRational::from(e as i64))
            }),
        ))
    }

    /// Exact evaluation at a point with one coordinate per variable.
    pub fn evaluate(&self, point: &[GaussianRational]) -> Result<GaussianRational> {
        if point.len() != self.ctx.len() {
            return Err(Error::LengthMismatch {
                expected: self.ctx.len(),
                got: point.len(),
            });
        }
        let mut total = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for i in m.support() {
                v *= &point[i].pow(m.get(i));
            }
            total += &v;
        }
        Ok(total)
    }

    /// Substitutes the listed variables by constants, leaving the others.
    pub fn substitute_values(&self, values: &[(usize, GaussianRational)]) -> Polynomial {
        Self::from_terms(
            &self.ctx,
            self.terms.iter().map(|(m, c)| {
                let mut m2 = m.clone();
                let mut c2 = c.clone();
                for (idx, v) in values {
                    let e = m.get(*idx);
                    if e > 0 {
                        c2 *= &v.pow(e);
                        m2.set(*idx, 0);
                    }
                }
                (m2, c2)
            }),
        )
    }

    /// Replaces variable `idx` by the polynomial `by` (same context).
    pub fn substitute(&self, idx: usize, by: &Polynomial) -> Result<Polynomial> {
        self.ctx.check_same(&by.ctx)?;
        let max_e = self.degree_in(idx) as usize;
        let mut powers = vec![Polynomial::one(&self.ctx)];
        for k in 1..=max_e {
            let next = &powers[k - 1] * by;
            powers.push(next);
        }
        let mut acc: BTreeMap<Monomial, GaussianRational> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.get(idx) as usize;
            let mut rest = m.clone();
            rest.set(idx, 0);
            for (pm, pc) in powers[e].terms() {
                let mm = rest.mul(pm);
                let cc = c * pc;
                match acc.get_mut(&mm) {
                    Some(x) => *x += &cc,
                    None => {
                        acc.insert(mm, cc);
                    }
                }
            }
        }
        Ok(Self::from_map(&self.ctx, acc))
    }

    /// Coefficient-wise complex conjugation.
    pub fn conj_coefficients(&self) -> Polynomial {
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect(),
        }
    }

    /// Exchanges the z- and w-blocks (identity when there is no w-block).
    pub fn swap_blocks(&self) -> Polynomial {
        Self::from_terms(
            &self.ctx,
            self.terms
                .iter()
                .map(|(m, c)| (m.swap_blocks(&self.ctx), c.clone())),
        )
    }

    /// Moves the polynomial to another context through a variable map
    /// (`map[i]` is the target index of source variable `i`). Returns `None`
    /// if a used variable has no image.
    pub fn remap(&self, target: &Arc<VarContext>, map: &[Option<usize>]) -> Option<Polynomial> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            terms.push((m.remap(target.len(), map)?, c.clone()));
        }
        Some(Self::from_terms(target, terms))
    }

    /// Embeds into a context that shares the z-block layout (and w-block,
    /// when present in the source) and whose extras are a superset.
    pub fn embed(&self, target: &Arc<VarContext>) -> Result<Polynomial> {
        let map = embedding_map(&self.ctx, target)?;
        self.remap(target, &map).ok_or(Error::ContextMismatch)
    }

    /// Moves to a related context (same z-block size), matching w-variables
    /// and extras by position and name. `None` if a used variable is missing
    /// from the target.
    pub fn project(&self, target: &Arc<VarContext>) -> Option<Polynomial> {
        if self.ctx.n_z() != target.n_z() {
            return None;
        }
        let map: Vec<Option<usize>> = (0..self.ctx.len())
            .map(|i| match self.ctx.block_of(i) {
                Block::Z => Some(i),
                Block::W => target.has_w().then(|| target.w_index(i - self.ctx.n_z())),
                Block::Extra => target.extra_index(&self.ctx.extras()[i - self.ctx.n_z() - self.ctx.n_w()]),
            })
            .collect();
        self.remap(target, &map)
    }

    /// Groups terms by their exponents on `vars`; the values are the
    /// coefficient polynomials in the remaining variables.
    pub fn collect_by(&self, vars: &[usize]) -> BTreeMap<Vec<Exponent>, Polynomial> {
        let mut groups: BTreeMap<Vec<Exponent>, Vec<(Monomial, GaussianRational)>> =
            BTreeMap::new();
        for (m, c) in &self.terms {
            let key: Vec<Exponent> = vars.iter().map(|&v| m.get(v)).collect();
            let mut rest = m.clone();
            for &v in vars {
                rest.set(v, 0);
            }
            groups.entry(key).or_default().push((rest, c.clone()));
        }
        groups
            .into_iter()
            .map(|(k, t)| (k, Self::from_terms(&self.ctx, t)))
            .collect()
    }

    /// Divides every coefficient by the leading (canonical-order) coefficient.
    pub fn monic(&self) -> Polynomial {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero")),
        }
    }
}

/// Variable map from `src` into `dst`: z to z, w to w, extras by name.
pub(crate) fn embedding_map(src: &VarContext, dst: &VarContext) -> Result<Vec<Option<usize>>> {
    if src.n_z() != dst.n_z() || (src.has_w() && !dst.has_w()) {
        return Err(Error::ContextMismatch);
    }
    let mut map = Vec::with_capacity(src.len());
    for i in 0..src.len() {
        map.push(Some(match src.block_of(i) {
            Block::Z => i,
            Block::W => dst.w_index(i - src.n_z()),
            Block::Extra => {
                let name = &src.extras()[i - src.n_z() - src.n_w()];
                dst.extra_index(name).ok_or(Error::ContextMismatch)?
            }
        }));
    }
    Ok(map)
}

/// Exact ring operation with context checking.
pub fn poly_arith(p: &Polynomial, q: &Polynomial, op: ArithOp) -> Result<Polynomial> {
    match op {
        ArithOp::Add => p.checked_add(q),
        ArithOp::Sub => p.checked_sub(q),
        ArithOp::Mul => p.checked_mul(q),
    }
}

// Operator sugar. These panic on a context mismatch; use `poly_arith` or the
// `checked_*` methods where contexts are not known to agree.
impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("context mismatch")
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("context mismatch")
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("context mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::print_poly(self))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::print_poly(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{naive_mul, random_poly};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn g(a: i64, b: i64) -> GaussianRational {
        GaussianRational::from_ints(a, b)
    }

    #[test]
    fn difference_of_squares_with_i() {
        let ctx = VarContext::z_only(2);
        let z1 = Polynomial::z(&ctx, 0);
        let i = Polynomial::constant(&ctx, g(0, 1));
        let p = &(&z1 + &i) * &(&z1 - &i);
        let expect = &(&z1 * &z1) + &Polynomial::one(&ctx);
        assert_eq!(p, expect);
    }

    #[test]
    fn additive_identity() {
        let ctx = VarContext::zw(2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = random_poly(&mut rng, &ctx, 3, 5);
        assert_eq!(&p + &Polynomial::zero(&ctx), p);
    }

    #[test]
    fn cube_matches_naive_convolution() {
        let ctx = VarContext::z_only(2);
        let s = &Polynomial::z(&ctx, 0) + &Polynomial::z(&ctx, 1);
        let cube = &(&s * &s) * &s;
        let naive = naive_mul(&naive_mul(&s, &s), &s);
        assert_eq!(cube, naive);
        assert_eq!(s.pow(3), cube);
        assert_eq!(cube.num_terms(), 4);
        let m = Monomial::from_exponents(&[2, 1]);
        assert_eq!(cube.coefficient(&m), g(3, 0));
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let a = Polynomial::z(&VarContext::z_only(2), 0);
        let b = Polynomial::z(&VarContext::zw(2), 0);
        assert_eq!(poly_arith(&a, &b, ArithOp::Add), Err(Error::ContextMismatch));
        assert_eq!(poly_arith(&a, &b, ArithOp::Mul), Err(Error::ContextMismatch));
    }

    #[test]
    fn partial_derivatives() {
        let ctx = VarContext::z_only(2);
        let z1 = Polynomial::z(&ctx, 0);
        let z2 = Polynomial::z(&ctx, 1);
        let p = &(&z1 * &z1) * &z2;
        assert_eq!(
            p.partial_derivative(0).unwrap(),
            (&z1 * &z2).scale(&g(2, 0))
        );
        assert!(z1.partial_derivative(1).unwrap().is_zero());
        assert!(matches!(
            z1.partial_derivative(2),
            Err(Error::InvalidVariable { .. })
        ));
    }

    #[test]
    fn evaluation() {
        let ctx = VarContext::z_only(2);
        let p = &(&Polynomial::z(&ctx, 0) * &Polynomial::z(&ctx, 1)) - &Polynomial::one(&ctx);
        assert!(p.evaluate(&[g(1, 0), g(1, 0)]).unwrap().is_zero());
        let c = Polynomial::constant(&ctx, g(3, -7));
        assert_eq!(c.evaluate(&[g(5, 1), g(0, 2)]).unwrap(), g(3, -7));
        assert!(matches!(
            p.evaluate(&[g(1, 0)]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn substitution() {
        let ctx = VarContext::z_only(3);
        let z = |k| Polynomial::z(&ctx, k);
        let p = &(&z(0) * &z(0)) + &z(1);
        let q = p.substitute(0, &(&z(1) + &z(2))).unwrap();
        let expect = &(&(&z(1) + &z(2)) * &(&z(1) + &z(2))) + &z(1);
        assert_eq!(q, expect);
    }
}
