//! Exponent vectors and monomial orders.

use std::cmp::Ordering;

use smallvec::SmallVec;

use crate::context::{Block, VarContext};

pub type Exponent = u32;

/// Exponent vector over all variables of a context.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(SmallVec<[Exponent; 10]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn from_exponents(exps: &[Exponent]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn var(nvars: usize, idx: usize, exp: Exponent) -> Self {
        let mut m = Monomial::one(nvars);
        m.0[idx] = exp;
        m
    }

    pub fn exponents(&self) -> &[Exponent] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, idx: usize) -> Exponent {
        self.0[idx]
    }

    pub fn set(&mut self, idx: usize, e: Exponent) {
        self.0[idx] = e;
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// (z-degree, w-degree).
    pub fn bidegree(&self, ctx: &VarContext) -> (u64, u64) {
        let part = |b| ctx.indices_of(b).map(|i| self.0[i] as u64).sum();
        (part(Block::Z), part(Block::W))
    }

    pub fn degree_in(&self, vars: impl IntoIterator<Item = usize>) -> u64 {
        vars.into_iter().map(|i| self.0[i] as u64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        self.divides(other)
            .then(|| Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect()))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }

    /// Exchanges the z- and w-blocks.
    pub fn swap_blocks(&self, ctx: &VarContext) -> Monomial {
        let mut m = self.clone();
        let n = ctx.n_z();
        if ctx.has_w() {
            for k in 0..n {
                m.0.swap(k, n + k);
            }
        }
        m
    }

    pub(crate) fn remap(&self, target_len: usize, map: &[Option<usize>]) -> Option<Monomial> {
        let mut out = Monomial::one(target_len);
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            out.0[map[i]?] += e;
        }
        Some(out)
    }
}

/// A monomial order. Lex and block orders compare variables by index:
/// `z1 ≻ z2 ≻ … ≻ w1 ≻ … ≻ extras`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TermOrder {
    Grevlex,
    Lex,
    /// z-block ≻ everything else, grevlex within blocks.
    BlockZ,
    /// w-block ≻ everything else, grevlex within blocks.
    BlockW,
    /// Listed variables ≻ the rest, grevlex within both groups. An
    /// elimination order for the listed variables.
    Eliminate(Vec<usize>),
}

impl Default for TermOrder {
    fn default() -> Self {
        TermOrder::Grevlex
    }
}

impl TermOrder {
    pub(crate) fn compile(&self, ctx: &VarContext) -> CompiledOrder {
        match self {
            TermOrder::Grevlex => CompiledOrder::Grevlex,
            TermOrder::Lex => CompiledOrder::Lex,
            TermOrder::BlockZ => CompiledOrder::elim(ctx.len(), ctx.indices_of(Block::Z)),
            TermOrder::BlockW => CompiledOrder::elim(ctx.len(), ctx.indices_of(Block::W)),
            TermOrder::Eliminate(vars) => CompiledOrder::elim(ctx.len(), vars.iter().copied()),
        }
    }

    pub fn parse(s: &str) -> Option<TermOrder> {
        match s {
            "grevlex" => Some(TermOrder::Grevlex),
            "lex" => Some(TermOrder::Lex),
            "block-z" => Some(TermOrder::BlockZ),
            "block-w" => Some(TermOrder::BlockW),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) enum CompiledOrder {
    Grevlex,
    Lex,
    Elim { first: Vec<usize>, rest: Vec<usize> },
}

impl CompiledOrder {
    fn elim(n: usize, vars: impl IntoIterator<Item = usize>) -> Self {
        let mut mask = vec![false; n];
        for v in vars {
            mask[v] = true;
        }
        let (first, rest) = (0..n).partition(|&i| mask[i]);
        CompiledOrder::Elim { first, rest }
    }

    pub(crate) fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            CompiledOrder::Grevlex => grevlex_on(a, b, 0..a.nvars()),
            CompiledOrder::Lex => a.0.cmp(&b.0),
            CompiledOrder::Elim { first, rest } => grevlex_on(a, b, first.iter().copied())
                .then_with(|| grevlex_on(a, b, rest.iter().copied())),
        }
    }
}

/// Canonical storage order of a context: grevlex with variable priority
/// `w-block ≻ z-block ≻ extras`.
pub(crate) fn canonical_cmp(ctx: &VarContext, a: &Monomial, b: &Monomial) -> Ordering {
    grevlex_on(a, b, ctx.canonical_priority().iter().copied())
}

/// Graded reverse lexicographic comparison restricted to `vars` (listed in
/// decreasing variable priority).
fn grevlex_on<I>(a: &Monomial, b: &Monomial, vars: I) -> Ordering
where
    I: IntoIterator<Item = usize>,
    I::IntoIter: DoubleEndedIterator + Clone,
{
    let vars = vars.into_iter();
    let da: u64 = vars.clone().map(|i| a.0[i] as u64).sum();
    let db: u64 = vars.clone().map(|i| b.0[i] as u64).sum();
    da.cmp(&db).then_with(|| {
        for i in vars.rev() {
            match a.0[i].cmp(&b.0[i]) {
                Ordering::Equal => continue,
                o => return o.reverse(),
            }
        }
        Ordering::Equal
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn grevlex_basics() {
        let o = CompiledOrder::Grevlex;
        // x1 > x2 > x3
        assert_eq!(o.cmp(&m(&[1, 0, 0]), &m(&[0, 1, 0])), Ordering::Greater);
        // x1 x3 < x2^2 in grevlex
        assert_eq!(o.cmp(&m(&[1, 0, 1]), &m(&[0, 2, 0])), Ordering::Less);
        assert_eq!(o.cmp(&m(&[0, 0, 2]), &m(&[1, 0, 0])), Ordering::Greater);
    }

    #[test]
    fn block_order_eliminates() {
        let ctx = VarContext::zw(2);
        let o = TermOrder::BlockW.compile(&ctx);
        // any monomial containing w beats any pure z monomial
        assert_eq!(o.cmp(&m(&[0, 0, 1, 0]), &m(&[5, 5, 0, 0])), Ordering::Greater);
    }

    fn mono(n: usize) -> impl Strategy<Value = Monomial> {
        proptest::collection::vec(0u32..4, n).prop_map(|v| Monomial::from_exponents(&v))
    }

    proptest! {
        #[test]
        fn orders_are_multiplicative(a in mono(4), b in mono(4), c in mono(4)) {
            let ctx = VarContext::zw(2);
            for ord in [TermOrder::Grevlex, TermOrder::Lex, TermOrder::BlockZ, TermOrder::BlockW, TermOrder::Eliminate(vec![3])] {
                let o = ord.compile(&ctx);
                prop_assert_eq!(o.cmp(&a, &b), o.cmp(&a.mul(&c), &b.mul(&c)));
                prop_assert_ne!(o.cmp(&a.mul(&c), &a), Ordering::Less);
                if a != b { prop_assert_ne!(o.cmp(&a, &b), Ordering::Equal); }
            }
        }
    }
}
