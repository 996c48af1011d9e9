//! Buchberger's algorithm with the Gebauer–Möller pair criteria.
//!
//! Bases are returned reduced (monic, pairwise non-divisible leading terms,
//! fully reduced tails) and sorted by decreasing leading monomial, so the
//! output is deterministic for a fixed order and generator sequence.

use std::cmp::Ordering;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::context::VarContext;
use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::monomial::{CompiledOrder, Monomial, TermOrder};
use crate::poly::Polynomial;

pub const DEFAULT_BUDGET: u64 = 200_000;

/// Cap on elementary reduction steps (and S-pairs) for one basis computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_reductions: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_reductions: DEFAULT_BUDGET,
        }
    }
}

impl Budget {
    pub fn new(max_reductions: u64) -> Self {
        Budget { max_reductions }
    }
}

type Terms = Vec<(Monomial, GaussianRational)>;

/// A reduced Gröbner basis together with the order it was computed for.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ctx: Arc<VarContext>,
    order: TermOrder,
    compiled: CompiledOrder,
    // each sorted by decreasing monomial under `compiled`
    polys: Vec<Terms>,
}

impl GroebnerBasis {
    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn polys(&self) -> Vec<Polynomial> {
        self.polys
            .iter()
            .map(|t| Polynomial::from_terms(&self.ctx, t.iter().cloned()))
            .collect()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.polys.iter().map(|t| t[0].0.clone()).collect()
    }

    /// The basis is `{1}`.
    pub fn is_unit(&self) -> bool {
        self.polys.len() == 1 && self.polys[0][0].0.is_one()
    }

    /// Remainder of full multivariate division by the basis.
    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        self.ctx.check_same(f.context())?;
        let mut eng = Engine::new(self.compiled.clone(), u64::MAX);
        let rem = eng.reduce(to_terms(&self.compiled, f), &self.polys.iter().collect::<Vec<_>>())?;
        Ok(Polynomial::from_terms(&self.ctx, rem))
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    /// Every S-polynomial of the basis reduces to zero.
    pub fn satisfies_buchberger_criterion(&self) -> bool {
        let mut eng = Engine::new(self.compiled.clone(), u64::MAX);
        let refs: Vec<&Terms> = self.polys.iter().collect();
        for i in 0..self.polys.len() {
            for j in i + 1..self.polys.len() {
                let s = eng.s_poly(&self.polys[i], &self.polys[j]);
                match eng.reduce(s, &refs) {
                    Ok(r) if r.is_empty() => {}
                    _ => return false,
                }
            }
        }
        true
    }

    /// Leading terms pairwise non-divisible, monic, tails reduced.
    pub fn is_reduced(&self) -> bool {
        for (i, p) in self.polys.iter().enumerate() {
            if !p[0].1.is_one() {
                return false;
            }
            for (j, q) in self.polys.iter().enumerate() {
                if i == j {
                    continue;
                }
                if p.iter().any(|(m, _)| q[0].0.divides(m)) {
                    return false;
                }
            }
        }
        true
    }

    pub(crate) fn from_reduced_subset(
        ctx: &Arc<VarContext>,
        order: TermOrder,
        polys: Vec<Polynomial>,
    ) -> Self {
        let compiled = order.compile(ctx);
        let polys = polys.iter().map(|p| to_terms(&compiled, p)).collect();
        GroebnerBasis {
            ctx: ctx.clone(),
            order,
            compiled,
            polys,
        }
    }
}

fn to_terms(ord: &CompiledOrder, p: &Polynomial) -> Terms {
    let mut t: Terms = p.terms().to_vec();
    t.sort_by(|a, b| ord.cmp(&b.0, &a.0));
    t
}

struct Engine {
    ord: CompiledOrder,
    limit: u64,
    used: u64,
}

impl Engine {
    fn new(ord: CompiledOrder, limit: u64) -> Self {
        Engine {
            ord,
            limit,
            used: 0,
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            return Err(Error::BudgetExceeded { limit: self.limit });
        }
        Ok(())
    }

    /// `f - c·m·g`, all sorted by the engine order.
    fn sub_scaled(&self, f: &[(Monomial, GaussianRational)], c: &GaussianRational, m: &Monomial, g: &Terms) -> Terms {
        let mut out = Vec::with_capacity(f.len() + g.len());
        let (mut i, mut j) = (0, 0);
        let mut gj: Option<(Monomial, GaussianRational)> = g.first().map(|(gm, gc)| (gm.mul(m), gc * c));
        while i < f.len() || gj.is_some() {
            let pick = match (&gj, f.get(i)) {
                (None, _) => Ordering::Greater,
                (Some(_), None) => Ordering::Less,
                (Some((gm, _)), Some((fm, _))) => self.ord.cmp(fm, gm),
            };
            match pick {
                Ordering::Greater => {
                    out.push(f[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (gm, gc) = gj.take().expect("some");
                    out.push((gm, -gc));
                    j += 1;
                    gj = g.get(j).map(|(gm, gc)| (gm.mul(m), gc * c));
                }
                Ordering::Equal => {
                    let (gm, gc) = gj.take().expect("some");
                    let v = &f[i].1 - &gc;
                    if !v.is_zero() {
                        out.push((gm, v));
                    }
                    i += 1;
                    j += 1;
                    gj = g.get(j).map(|(gm, gc)| (gm.mul(m), gc * c));
                }
            }
        }
        out
    }

    /// Full reduction of `f` by `basis` (basis elements need not be monic).
    fn reduce(&mut self, f: Terms, basis: &[&Terms]) -> Result<Terms> {
        let mut rem: Terms = Vec::new();
        let mut f = f;
        let mut pos = 0;
        while pos < f.len() {
            let (lm, lc) = (&f[pos].0, &f[pos].1);
            let divisor = basis.iter().find(|g| g[0].0.divides(lm));
            match divisor {
                Some(g) => {
                    self.tick()?;
                    let q = g[0].0.quotient_of(lm).expect("divides");
                    let c = lc / &g[0].1;
                    f = self.sub_scaled(&f[pos..], &c, &q, g);
                    pos = 0;
                }
                None => {
                    rem.push(f[pos].clone());
                    pos += 1;
                }
            }
        }
        Ok(rem)
    }

    fn s_poly(&self, f: &Terms, g: &Terms) -> Terms {
        let lcm = f[0].0.lcm(&g[0].0);
        let mf = f[0].0.quotient_of(&lcm).expect("lcm");
        let mg = g[0].0.quotient_of(&lcm).expect("lcm");
        // (lcm/lt f)·f/lc f − (lcm/lt g)·g/lc g
        let cf = f[0].1.inv().expect("nonzero");
        let cg = g[0].1.inv().expect("nonzero");
        let scaled_f: Terms = f.iter().map(|(m, c)| (m.mul(&mf), c * &cf)).collect();
        self.sub_scaled(&scaled_f, &cg, &mg, g)
    }
}

fn monic(mut t: Terms) -> Terms {
    if let Some(lc) = t.first().map(|x| x.1.clone()) {
        if !lc.is_one() {
            let inv = lc.inv().expect("nonzero");
            for (_, c) in t.iter_mut() {
                *c *= &inv;
            }
        }
    }
    t
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Reduced Gröbner basis of the ideal generated by `gens` under `order`.
pub fn groebner_basis(
    ctx: &Arc<VarContext>,
    gens: &[Polynomial],
    order: &TermOrder,
    budget: &Budget,
) -> Result<GroebnerBasis> {
    for g in gens {
        ctx.check_same(g.context())?;
    }
    let compiled = order.compile(ctx);
    let mut eng = Engine::new(compiled.clone(), budget.max_reductions);
    let mut polys: Vec<Terms> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let unit = |ctx: &Arc<VarContext>| GroebnerBasis {
        ctx: ctx.clone(),
        order: order.clone(),
        compiled: compiled.clone(),
        polys: vec![vec![(Monomial::one(ctx.len()), GaussianRational::one())]],
    };

    for g in gens {
        let refs: Vec<&Terms> = active.iter().map(|&k| &polys[k]).collect();
        let h = eng.reduce(to_terms(&compiled, g), &refs)?;
        if h.is_empty() {
            continue;
        }
        let h = monic(h);
        if h[0].0.is_one() {
            return Ok(unit(ctx));
        }
        polys.push(h);
        update(&polys, &mut active, &mut pairs);
    }

    while !pairs.is_empty() {
        eng.tick()?;
        // normal selection strategy: smallest lcm first
        let (best, _) = pairs
            .iter()
            .enumerate()
            .min_by(|a, b| compiled.cmp(&a.1.lcm, &b.1.lcm).then((a.1.i, a.1.j).cmp(&(b.1.i, b.1.j))))
            .expect("nonempty");
        let pair = pairs.swap_remove(best);
        let s = eng.s_poly(&polys[pair.i], &polys[pair.j]);
        let refs: Vec<&Terms> = active.iter().map(|&k| &polys[k]).collect();
        let h = eng.reduce(s, &refs)?;
        if h.is_empty() {
            continue;
        }
        let h = monic(h);
        if h[0].0.is_one() {
            return Ok(unit(ctx));
        }
        polys.push(h);
        update(&polys, &mut active, &mut pairs);
    }

    // interreduce the (already minimal) active set
    let mut basis: Vec<Terms> = Vec::with_capacity(active.len());
    for (pos, &k) in active.iter().enumerate() {
        let others: Vec<&Terms> = active
            .iter()
            .enumerate()
            .filter(|(p, _)| *p != pos)
            .map(|(_, &o)| &polys[o])
            .collect();
        let head = polys[k][0].clone();
        let tail = eng.reduce(polys[k][1..].to_vec(), &others)?;
        let mut t = vec![head];
        t.extend(tail);
        basis.push(monic(t));
    }
    basis.sort_by(|a, b| compiled.cmp(&b[0].0, &a[0].0));
    Ok(GroebnerBasis {
        ctx: ctx.clone(),
        order: order.clone(),
        compiled,
        polys: basis,
    })
}

/// Gebauer–Möller update for the newest polynomial `polys.last()`.
fn update(polys: &[Terms], active: &mut Vec<usize>, pairs: &mut Vec<Pair>) {
    let h = polys.len() - 1;
    let lt_h = polys[h][0].0.clone();
    let lt = |k: usize| &polys[k][0].0;

    let mut cands: Vec<(usize, Monomial)> = active.iter().map(|&g| (g, lt(g).lcm(&lt_h))).collect();
    // chain criterion among new pairs: keep (h,g) unless another new pair's
    // lcm properly divides it; coprime pairs are kept here and dropped below.
    let mut kept: Vec<(usize, Monomial)> = Vec::new();
    while let Some((g1, l1)) = cands.pop() {
        let coprime = lt(g1).is_coprime(&lt_h);
        let dominated = cands.iter().any(|(_, l2)| l2.divides(&l1)) || kept.iter().any(|(_, l2)| l2.divides(&l1));
        if coprime || !dominated {
            kept.push((g1, l1));
        }
    }
    let new_pairs: Vec<Pair> = kept
        .into_iter()
        .filter(|(g, _)| !lt(*g).is_coprime(&lt_h))
        .map(|(g, l)| Pair { i: g, j: h, lcm: l })
        .collect();

    pairs.retain(|p| {
        !(lt_h.divides(&p.lcm)
            && lt(p.i).lcm(&lt_h) != p.lcm
            && lt(p.j).lcm(&lt_h) != p.lcm)
    });
    pairs.extend(new_pairs);

    active.retain(|&g| !lt_h.divides(lt(g)));
    active.push(h);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_poly;

    fn gb(ctx: &Arc<VarContext>, gens: &[&str], order: TermOrder) -> GroebnerBasis {
        let gens: Vec<_> = gens.iter().map(|s| parse_poly(s, ctx).unwrap()).collect();
        groebner_basis(ctx, &gens, &order, &Budget::default()).unwrap()
    }

    #[test]
    fn already_a_basis() {
        let ctx = VarContext::z_only(2);
        let b = gb(&ctx, &["z1", "z2"], TermOrder::Grevlex);
        let text: Vec<String> = b.polys().iter().map(|p| p.to_string()).collect();
        assert_eq!(text, vec!["z1", "z2"]);
    }

    #[test]
    fn twisted_cubic_lex() {
        let ctx = VarContext::z_only(3);
        let b = gb(&ctx, &["z1^2 - z2", "z1^3 - z3"], TermOrder::Lex);
        let rel = parse_poly("z2^3 - z3^2", &ctx).unwrap();
        assert!(b.polys().iter().any(|p| *p == rel || *p == -&rel));
        assert!(b.satisfies_buchberger_criterion());
        assert!(b.is_reduced());
        // oracle: the relation vanishes on (t, t^2, t^3)
        for t in -5..5 {
            let t = GaussianRational::from(t);
            let pt = [t.clone(), t.pow(2), t.pow(3)];
            assert!(rel.evaluate(&pt).unwrap().is_zero());
        }
    }

    #[test]
    fn unit_ideal() {
        let ctx = VarContext::z_only(2);
        let b = gb(&ctx, &["z1*z2 - 1", "z1"], TermOrder::Grevlex);
        assert!(b.is_unit());
    }

    #[test]
    fn normal_forms() {
        let ctx = VarContext::z_only(3);
        let b = gb(&ctx, &["z1^2 - z2", "z1^3 - z3"], TermOrder::Grevlex);
        assert!(b.contains(&parse_poly("z2^3 - z3^2", &ctx).unwrap()).unwrap());
        let single = gb(&ctx, &["z1"], TermOrder::Grevlex);
        assert_eq!(single.normal_form(&Polynomial::one(&ctx)).unwrap(), Polynomial::one(&ctx));
        let g = parse_poly("z1*z2 - z3^2 + 2", &ctx).unwrap();
        let bg = groebner_basis(&ctx, &[g.clone()], &TermOrder::Grevlex, &Budget::default()).unwrap();
        assert!(bg.normal_form(&g).unwrap().is_zero());
        let other = Polynomial::z(&VarContext::z_only(2), 0);
        assert_eq!(bg.normal_form(&other), Err(Error::ContextMismatch));
    }

    #[test]
    fn budget_is_enforced() {
        let ctx = VarContext::z_only(3);
        let gens: Vec<_> = ["z1^3 - z2*z3 + 1", "z2^3 - z1*z3 + 2", "z3^3 - z1*z2 + 3"]
            .iter()
            .map(|s| parse_poly(s, &ctx).unwrap())
            .collect();
        let r = groebner_basis(&ctx, &gens, &TermOrder::Lex, &Budget::new(5));
        assert_eq!(r.unwrap_err(), Error::BudgetExceeded { limit: 5 });
    }

    #[test]
    fn deterministic() {
        let ctx = VarContext::zw(2);
        let gens = ["z1*w2 - z2*w1 + z1", "z1^2 - w1*w2", "z2*w2 - 1"];
        let a = gb(&ctx, &gens, TermOrder::Grevlex).polys();
        let b = gb(&ctx, &gens, TermOrder::Grevlex).polys();
        assert_eq!(a, b);
    }
}
