//! Ideals with cached Gröbner bases, elimination, dimension and saturation.

use std::sync::{Arc, Mutex};

use crate::context::{Block, VarContext};
use crate::error::{Error, Result};
use crate::groebner::{groebner_basis, Budget, GroebnerBasis};
use crate::monomial::{Monomial, TermOrder};
use crate::poly::Polynomial;

/// Krull dimension of `V(I)`; the empty variety is `Empty`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dimension {
    Empty,
    Dim(usize),
}

impl Dimension {
    /// `-1` for the empty set.
    pub fn as_i64(self) -> i64 {
        match self {
            Dimension::Empty => -1,
            Dimension::Dim(d) => d as i64,
        }
    }

    pub fn is_empty(self) -> bool {
        self == Dimension::Empty
    }
}

impl std::fmt::Display for Dimension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Dimension::Empty => write!(f, "empty"),
            Dimension::Dim(d) => write!(f, "{d}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Ideal {
    ctx: Arc<VarContext>,
    gens: Vec<Polynomial>,
    cache: Arc<Mutex<Vec<Arc<GroebnerBasis>>>>,
}

impl Ideal {
    /// Zero generators are dropped.
    pub fn new(ctx: &Arc<VarContext>, gens: Vec<Polynomial>) -> Result<Self> {
        for g in &gens {
            ctx.check_same(g.context())?;
        }
        Ok(Ideal {
            ctx: ctx.clone(),
            gens: gens.into_iter().filter(|g| !g.is_zero()).collect(),
            cache: Arc::default(),
        })
    }

    pub fn zero(ctx: &Arc<VarContext>) -> Self {
        Ideal {
            ctx: ctx.clone(),
            gens: Vec::new(),
            cache: Arc::default(),
        }
    }

    pub fn unit(ctx: &Arc<VarContext>) -> Self {
        Ideal {
            ctx: ctx.clone(),
            gens: vec![Polynomial::one(ctx)],
            cache: Arc::default(),
        }
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn groebner_basis(&self, order: &TermOrder, budget: &Budget) -> Result<Arc<GroebnerBasis>> {
        if let Some(b) = self.cached(order) {
            return Ok(b);
        }
        let b = Arc::new(groebner_basis(&self.ctx, &self.gens, order, budget)?);
        self.remember(b.clone());
        Ok(b)
    }

    fn cached(&self, order: &TermOrder) -> Option<Arc<GroebnerBasis>> {
        let cache = self.cache.lock().expect("cache lock");
        cache.iter().find(|b| b.order() == order).cloned()
    }

    fn remember(&self, b: Arc<GroebnerBasis>) {
        let mut cache = self.cache.lock().expect("cache lock");
        if !cache.iter().any(|c| c.order() == b.order()) {
            cache.push(b);
        }
    }

    /// A basis under any order already computed, else grevlex.
    fn any_basis(&self, budget: &Budget) -> Result<Arc<GroebnerBasis>> {
        if let Some(b) = self.cache.lock().expect("cache lock").first().cloned() {
            return Ok(b);
        }
        self.groebner_basis(&TermOrder::Grevlex, budget)
    }

    pub fn normal_form(&self, f: &Polynomial, budget: &Budget) -> Result<Polynomial> {
        self.groebner_basis(&TermOrder::Grevlex, budget)?.normal_form(f)
    }

    pub fn contains(&self, f: &Polynomial, budget: &Budget) -> Result<bool> {
        self.ctx.check_same(f.context())?;
        if f.is_zero() {
            return Ok(true);
        }
        self.any_basis(budget)?.contains(f)
    }

    pub fn contains_ideal(&self, other: &Ideal, budget: &Budget) -> Result<bool> {
        self.ctx.check_same(&other.ctx)?;
        let b = self.any_basis(budget)?;
        for g in &other.gens {
            if !b.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality as ideals.
    pub fn same_ideal(&self, other: &Ideal, budget: &Budget) -> Result<bool> {
        Ok(self.contains_ideal(other, budget)? && other.contains_ideal(self, budget)?)
    }

    pub fn is_unit(&self, budget: &Budget) -> Result<bool> {
        Ok(self.any_basis(budget)?.is_unit())
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.ctx.check_same(&other.ctx)?;
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal::new(&self.ctx, gens)
    }

    pub fn with_generators(&self, more: impl IntoIterator<Item = Polynomial>) -> Result<Ideal> {
        let mut gens = self.gens.clone();
        gens.extend(more);
        Ideal::new(&self.ctx, gens)
    }

    /// Moves the generators to `target` (see [`Polynomial::embed`]).
    pub fn embed(&self, target: &Arc<VarContext>) -> Result<Ideal> {
        let gens = self.gens.iter().map(|g| g.embed(target)).collect::<Result<_>>()?;
        Ideal::new(target, gens)
    }

    /// `I ∩ k[rest]` for `rest` the variables outside `block`, still stored in
    /// the original context.
    pub fn eliminate(&self, block: Block, budget: &Budget) -> Result<Ideal> {
        let order = match block {
            Block::Z => TermOrder::BlockZ,
            Block::W => TermOrder::BlockW,
            Block::Extra => TermOrder::Eliminate(self.ctx.indices_of(Block::Extra).collect()),
        };
        let vars: Vec<usize> = self.ctx.indices_of(block).collect();
        self.eliminate_with(&vars, &order, budget)
    }

    /// `I ∩ k[variables not in vars]`.
    pub fn eliminate_vars(&self, vars: &[usize], budget: &Budget) -> Result<Ideal> {
        for &v in vars {
            if v >= self.ctx.len() {
                return Err(Error::InvalidVariable {
                    index: v,
                    len: self.ctx.len(),
                });
            }
        }
        self.eliminate_with(vars, &TermOrder::Eliminate(vars.to_vec()), budget)
    }

    fn eliminate_with(&self, vars: &[usize], order: &TermOrder, budget: &Budget) -> Result<Ideal> {
        let b = self.groebner_basis(order, budget)?;
        let kept: Vec<Polynomial> = b
            .polys()
            .into_iter()
            .filter(|p| vars.iter().all(|&v| !p.uses_var(v)))
            .collect();
        let out = Ideal::new(&self.ctx, kept.clone())?;
        // the surviving elements are a reduced grevlex basis of the elimination
        // ideal whenever the order restricts to grevlex on the remaining variables
        if !matches!(order, TermOrder::Lex) {
            out.remember(Arc::new(GroebnerBasis::from_reduced_subset(
                &self.ctx,
                TermOrder::Grevlex,
                kept,
            )));
        }
        Ok(out)
    }

    /// Krull dimension of `V(I)` in the ambient space of the whole context.
    pub fn krull_dimension(&self, budget: &Budget) -> Result<Dimension> {
        let b = self.groebner_basis(&TermOrder::Grevlex, budget)?;
        if b.is_unit() {
            return Ok(Dimension::Empty);
        }
        Ok(Dimension::Dim(dimension_from_leading(&b.leading_monomials(), self.ctx.len())))
    }

    /// Dimension counted only in the variables `vars`, for ideals whose
    /// generators do not involve the other variables.
    pub fn krull_dimension_in(&self, vars: &[usize], budget: &Budget) -> Result<Dimension> {
        match self.krull_dimension(budget)? {
            Dimension::Empty => Ok(Dimension::Empty),
            Dimension::Dim(d) => {
                let free = self.ctx.len() - vars.len();
                Ok(Dimension::Dim(d.saturating_sub(free)))
            }
        }
    }

    /// `I : f^∞`, via `I + ⟨1 - t f⟩ ∩ k[x]`.
    pub fn saturate(&self, f: &Polynomial, budget: &Budget) -> Result<Ideal> {
        self.ctx.check_same(f.context())?;
        if f.is_zero() {
            return Err(Error::InvalidInput("cannot saturate by the zero polynomial".into()));
        }
        if f.is_constant() {
            return Ok(self.clone());
        }
        let mut name = String::from("_sat");
        while self.ctx.lookup(&name, false).is_some() {
            name.push('_');
        }
        let big = self.ctx.with_extras(&[name.as_str()])?;
        let t = big.len() - 1;
        let tp = Polynomial::var(&big, t)?;
        let fe = f.embed(&big)?;
        let mut gens: Vec<Polynomial> = self.gens.iter().map(|g| g.embed(&big)).collect::<Result<_>>()?;
        gens.push(&Polynomial::one(&big) - &(&tp * &fe));
        let b = groebner_basis(&big, &gens, &TermOrder::Eliminate(vec![t]), budget)?;
        let back: Vec<Option<usize>> = (0..big.len()).map(|i| (i < t).then_some(i)).collect();
        let kept = b
            .polys()
            .into_iter()
            .filter(|p| !p.uses_var(t))
            .map(|p| p.remap(&self.ctx, &back).expect("no t"))
            .collect();
        Ideal::new(&self.ctx, kept)
    }
}

/// Largest `|S|` such that no leading monomial is supported inside `S`.
fn dimension_from_leading(leads: &[Monomial], n: usize) -> usize {
    let supports: Vec<u64> = leads
        .iter()
        .map(|m| m.support().fold(0u64, |acc, i| acc | (1 << i)))
        .collect();
    let mut best = 0;
    // depth-first over independent sets, extending by increasing index
    fn go(start: usize, set: u64, size: usize, n: usize, supports: &[u64], best: &mut usize) {
        *best = (*best).max(size);
        if size + (n - start) <= *best {
            return;
        }
        for v in start..n {
            let s = set | (1 << v);
            if supports.iter().all(|&m| m & !s != 0) {
                go(v + 1, s, size + 1, n, supports, best);
            }
        }
    }
    assert!(n <= 64, "dimension computation supports at most 64 variables");
    go(0, 0, 0, n, &supports, &mut best);
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_poly;

    fn ideal(ctx: &Arc<VarContext>, gens: &[&str]) -> Ideal {
        Ideal::new(ctx, gens.iter().map(|s| parse_poly(s, ctx).unwrap()).collect()).unwrap()
    }

    #[test]
    fn eliminate_w_from_cone() {
        let ctx = VarContext::zw(4);
        let i = ideal(&ctx, &["w3*z2 - w2*z3", "z4", "w4"]);
        let e = i.eliminate(Block::W, &Budget::default()).unwrap();
        let z4 = ideal(&ctx, &["z4"]);
        assert!(e.same_ideal(&z4, &Budget::default()).unwrap());
    }

    #[test]
    fn eliminate_diagonal_is_zero() {
        let ctx = VarContext::zw(1);
        let i = ideal(&ctx, &["z1 - w1"]);
        assert!(i.eliminate(Block::W, &Budget::default()).unwrap().is_zero_ideal());
    }

    #[test]
    fn dimensions() {
        let b = Budget::default();
        let c3 = VarContext::z_only(3);
        assert_eq!(ideal(&c3, &["z1*z2 - z3^2", "z1"]).krull_dimension(&b).unwrap(), Dimension::Dim(1));
        assert_eq!(ideal(&c3, &["z1^2 - z2", "z1^3 - z3"]).krull_dimension(&b).unwrap(), Dimension::Dim(1));
        let c4 = VarContext::z_only(4);
        assert_eq!(ideal(&c4, &["z4"]).krull_dimension(&b).unwrap(), Dimension::Dim(3));
        assert_eq!(ideal(&c4, &["z4", "z4 + 1"]).krull_dimension(&b).unwrap(), Dimension::Empty);
        assert_eq!(Ideal::zero(&c4).krull_dimension(&b).unwrap(), Dimension::Dim(4));
    }

    #[test]
    fn saturation() {
        let b = Budget::default();
        let ctx = VarContext::z_only(2);
        let z1 = parse_poly("z1", &ctx).unwrap();
        let s = ideal(&ctx, &["z1*z2"]).saturate(&z1, &b).unwrap();
        assert!(s.same_ideal(&ideal(&ctx, &["z2"]), &b).unwrap());
        let i = ideal(&ctx, &["z1*z2"]);
        let same = i.saturate(&Polynomial::one(&ctx), &b).unwrap();
        assert!(same.same_ideal(&i, &b).unwrap());
        let u = ideal(&ctx, &["z1^2", "z1*z2"]).saturate(&z1, &b).unwrap();
        assert!(u.is_unit(&b).unwrap());
    }

    #[test]
    fn cached_bases_are_reused() {
        let ctx = VarContext::z_only(2);
        let i = ideal(&ctx, &["z1^2 - z2"]);
        let a = i.groebner_basis(&TermOrder::Lex, &Budget::default()).unwrap();
        let b = i.clone().groebner_basis(&TermOrder::Lex, &Budget::new(0)).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }
}
