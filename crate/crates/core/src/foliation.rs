//! Polynomial foliations given by vector fields or 1-forms, and the
//! verification procedures built on them.

use std::sync::Arc;

use once_cell::sync::OnceCell;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::context::{Block, VarContext};
use crate::error::{Error, Result};
use crate::forms::{DifferentialForm, VectorField};
use crate::groebner::Budget;
use crate::hermitian::{mirror_poly, HermitianPoly, LeviFlatModel};
use crate::ideal::{Dimension, Ideal};
use crate::linalg::{det_poly, rank, subsets};
use crate::poly::Polynomial;
use crate::sample::random_point;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Presentation {
    Fields(Vec<VectorField>),
    /// 1-forms generating the conormal module.
    Forms(Vec<DifferentialForm>),
}

#[derive(Clone, Debug)]
pub struct SingularLocus {
    pub ideal: Ideal,
    pub dimension: Dimension,
    /// Codimension in the ambient space; `None` when the locus is empty.
    pub codim: Option<usize>,
}

impl SingularLocus {
    /// Empty or of codimension at least two.
    pub fn codim_ok(&self) -> bool {
        self.codim.map_or(true, |c| c >= 2)
    }
}

#[derive(Clone, Debug)]
pub struct Foliation {
    ctx: Arc<VarContext>,
    presentation: Presentation,
    singular: OnceCell<SingularLocus>,
}

/// Generic rank of a list of polynomial vectors (rows).
pub fn generic_rank(ctx: &Arc<VarContext>, rows: &[Vec<Polynomial>]) -> usize {
    let mut kept: Vec<Vec<Polynomial>> = Vec::new();
    for r in rows {
        let mut trial = kept.clone();
        trial.push(r.clone());
        if full_row_rank(ctx, &trial) {
            kept = trial;
        }
    }
    kept.len()
}

/// Indices of a maximal generically independent subfamily, greedily.
fn independent_subfamily(ctx: &Arc<VarContext>, rows: &[Vec<Polynomial>]) -> Vec<usize> {
    let mut kept: Vec<usize> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let mut trial: Vec<Vec<Polynomial>> = kept.iter().map(|&k| rows[k].clone()).collect();
        trial.push(r.clone());
        if full_row_rank(ctx, &trial) {
            kept.push(i);
        }
    }
    kept
}

/// Whether the rows are independent over the function field: a random
/// evaluation settles it when it already has full rank, otherwise some
/// maximal minor must be a nonzero polynomial.
fn full_row_rank(ctx: &Arc<VarContext>, rows: &[Vec<Polynomial>]) -> bool {
    let m = rows.len();
    let n = rows.first().map_or(0, |r| r.len());
    if m == 0 {
        return true;
    }
    if m > n {
        return false;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ (m as u64));
    for _ in 0..2 {
        let pt = random_point(&mut rng, ctx.len(), 97);
        let vals: Vec<Vec<_>> = rows
            .iter()
            .map(|r| r.iter().map(|p| p.evaluate(&pt).expect("point size")).collect())
            .collect();
        if rank(&vals) == m {
            return true;
        }
    }
    maximal_minors(ctx, rows).iter().any(|d| !d.is_zero())
}

/// All `m × m` minors of an `m × n` polynomial matrix, columns in
/// lexicographic subset order.
fn maximal_minors(ctx: &Arc<VarContext>, rows: &[Vec<Polynomial>]) -> Vec<Polynomial> {
    let m = rows.len();
    let n = rows.first().map_or(0, |r| r.len());
    subsets(n, m)
        .into_iter()
        .map(|cols| {
            let sub: Vec<Vec<Polynomial>> = rows
                .iter()
                .map(|r| cols.iter().map(|&c| r[c].clone()).collect())
                .collect();
            det_poly(ctx, &sub)
        })
        .collect()
}

impl Foliation {
    /// Dependent fields are dropped; at least one nonzero field is needed.
    pub fn from_fields(ctx: &Arc<VarContext>, fields: Vec<VectorField>) -> Result<Self> {
        for v in &fields {
            ctx.check_same(v.context())?;
        }
        let rows: Vec<Vec<Polynomial>> = fields.iter().map(|v| v.components().to_vec()).collect();
        let keep = independent_subfamily(ctx, &rows);
        if keep.is_empty() {
            return Err(Error::Degenerate("no nonzero vector field".into()));
        }
        Ok(Foliation {
            ctx: ctx.clone(),
            presentation: Presentation::Fields(keep.into_iter().map(|i| fields[i].clone()).collect()),
            singular: OnceCell::new(),
        })
    }

    /// Dependent forms are dropped; at least one nonzero 1-form is needed.
    pub fn from_forms(ctx: &Arc<VarContext>, forms: Vec<DifferentialForm>) -> Result<Self> {
        for w in &forms {
            ctx.check_same(w.context())?;
            if w.degree() != 1 {
                return Err(Error::InvalidInput("foliations are presented by 1-forms".into()));
            }
        }
        let rows: Vec<Vec<Polynomial>> = forms.iter().map(|w| w.row()).collect();
        let keep = independent_subfamily(ctx, &rows);
        if keep.is_empty() {
            return Err(Error::Degenerate("no nonzero 1-form".into()));
        }
        Ok(Foliation {
            ctx: ctx.clone(),
            presentation: Presentation::Forms(keep.into_iter().map(|i| forms[i].clone()).collect()),
            singular: OnceCell::new(),
        })
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    /// Generic dimension of the leaves.
    pub fn rank(&self) -> usize {
        match &self.presentation {
            Presentation::Fields(v) => v.len(),
            Presentation::Forms(w) => self.ctx.len() - w.len(),
        }
    }

    /// Fields spanning the distribution generically. For a form
    /// presentation these are the Cramer fields `Σ ± det(A_{S∖j}) ∂_j` over
    /// `(p+1)`-subsets `S`, pruned to a generically independent family.
    pub fn fields(&self) -> Vec<VectorField> {
        match &self.presentation {
            Presentation::Fields(v) => v.clone(),
            Presentation::Forms(forms) => {
                let a: Vec<Vec<Polynomial>> = forms.iter().map(|w| w.row()).collect();
                let p = a.len();
                let n = self.ctx.len();
                let mut cands = Vec::new();
                for s in subsets(n, p + 1) {
                    let mut comps = vec![Polynomial::zero(&self.ctx); n];
                    for (t, &j) in s.iter().enumerate() {
                        let cols: Vec<usize> = s.iter().copied().filter(|&c| c != j).collect();
                        let sub: Vec<Vec<Polynomial>> =
                            a.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
                        let d = det_poly(&self.ctx, &sub);
                        comps[j] = if t % 2 == 0 { d } else { -&d };
                    }
                    let v = VectorField::new(&self.ctx, comps).expect("sizes match");
                    if !v.is_zero() {
                        cands.push(v);
                    }
                }
                let rows: Vec<Vec<Polynomial>> = cands.iter().map(|v| v.components().to_vec()).collect();
                independent_subfamily(&self.ctx, &rows)
                    .into_iter()
                    .map(|i| cands[i].clone())
                    .collect()
            }
        }
    }

    /// Frobenius integrability. Fields: every bracket stays in the generic
    /// span. Forms: `dω_i ∧ ω_1 ∧ … ∧ ω_p = 0` for all `i`.
    pub fn is_integrable(&self) -> bool {
        match &self.presentation {
            Presentation::Fields(fields) => {
                let base: Vec<Vec<Polynomial>> = fields.iter().map(|v| v.components().to_vec()).collect();
                for i in 0..fields.len() {
                    for j in i + 1..fields.len() {
                        let b = fields[i].bracket(&fields[j]).expect("same context");
                        let mut rows = base.clone();
                        rows.push(b.components().to_vec());
                        if rows.len() <= self.ctx.len() && full_row_rank(&self.ctx, &rows) {
                            return false;
                        }
                    }
                }
                true
            }
            Presentation::Forms(forms) => {
                let mut top = forms[0].clone();
                for w in &forms[1..] {
                    top = top.wedge(w).expect("same context");
                }
                forms
                    .iter()
                    .all(|w| w.d().wedge(&top).expect("same context").is_zero())
            }
        }
    }

    /// Fields: maximal minors of the component matrix. Forms: coefficients of
    /// `ω_1 ∧ … ∧ ω_p`.
    pub fn singular_locus(&self, budget: &Budget) -> Result<&SingularLocus> {
        self.singular.get_or_try_init(|| {
            let gens = match &self.presentation {
                Presentation::Fields(fields) => {
                    let rows: Vec<Vec<Polynomial>> = fields.iter().map(|v| v.components().to_vec()).collect();
                    maximal_minors(&self.ctx, &rows)
                }
                Presentation::Forms(forms) => {
                    let mut top = forms[0].clone();
                    for w in &forms[1..] {
                        top = top.wedge(w)?;
                    }
                    top.coefficients().values().cloned().collect()
                }
            };
            let ideal = Ideal::new(&self.ctx, gens)?;
            let dimension = ideal.krull_dimension(budget)?;
            let codim = match dimension {
                Dimension::Empty => None,
                Dimension::Dim(d) => Some(self.ctx.len() - d),
            };
            Ok(SingularLocus {
                ideal,
                dimension,
                codim,
            })
        })
    }

    /// `v(g) ∈ I` for every field `v` and generator `g`.
    pub fn is_invariant(&self, ideal: &Ideal, budget: &Budget) -> Result<bool> {
        self.ctx.check_same(ideal.context())?;
        for v in self.fields() {
            for g in ideal.generators() {
                if !ideal.contains(&v.apply(g)?, budget)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The mirror foliation on the conjugate coordinates.
    pub fn mirror(&self) -> Foliation {
        let presentation = match &self.presentation {
            Presentation::Fields(v) => Presentation::Fields(v.iter().map(|x| x.mirror()).collect()),
            Presentation::Forms(w) => Presentation::Forms(w.iter().map(|x| x.mirror()).collect()),
        };
        let ctx = match &presentation {
            Presentation::Fields(v) => v[0].context().clone(),
            Presentation::Forms(w) => w[0].context().clone(),
        };
        Foliation {
            ctx,
            presentation,
            singular: OnceCell::new(),
        }
    }
}

/// Outcome of the `F × F*` tangency test.
#[derive(Clone, Debug)]
pub struct TangencyReport {
    pub tangent: bool,
    /// `(field index, generator index, normal form)` of the first failure.
    pub witness: Option<(usize, usize, Polynomial)>,
}

/// `F` is tangent to `H` when every `v ⊕ v*` maps every generator of
/// `I(H^C)` back into `I(H^C)`.
pub fn tangent_to_leviflat(f: &Foliation, model: &LeviFlatModel) -> Result<TangencyReport> {
    model.z_context().check_same(f.context())?;
    let hc = model.complexified();
    let b = model.budget();
    for (i, v) in f.fields().iter().enumerate() {
        let u = v.with_mirror()?;
        for (j, g) in hc.generators().iter().enumerate() {
            let nf = hc.normal_form(&u.apply(g)?, b)?;
            if !nf.is_zero() {
                return Ok(TangencyReport {
                    tangent: false,
                    witness: Some((i, j, nf)),
                });
            }
        }
    }
    Ok(TangencyReport {
        tangent: true,
        witness: None,
    })
}

#[derive(Clone, Debug)]
pub struct FirstIntegralReport {
    pub is_first_integral: bool,
    /// `num / den` is constant.
    pub constant: bool,
    /// Per field, the normal form of `den·v(num) - num·v(den)` when nonzero.
    pub failures: Vec<(usize, Polynomial)>,
}

/// `v(num/den) = 0` on `V(ambient)` for every field.
pub fn verify_first_integral(
    num: &Polynomial,
    den: &Polynomial,
    f: &Foliation,
    ambient: &Ideal,
    budget: &Budget,
) -> Result<FirstIntegralReport> {
    let ctx = f.context();
    ctx.check_same(num.context())?;
    ctx.check_same(den.context())?;
    ctx.check_same(ambient.context())?;
    if den.is_zero() {
        return Err(Error::InvalidInput("zero denominator".into()));
    }
    let mut constant = true;
    for i in 0..ctx.len() {
        let w = &(den * &num.partial_derivative(i)?) - &(num * &den.partial_derivative(i)?);
        if !w.is_zero() {
            constant = false;
            break;
        }
    }
    let mut failures = Vec::new();
    for (k, v) in f.fields().iter().enumerate() {
        let w = &(den * &v.apply(num)?) - &(num * &v.apply(den)?);
        let nf = if ambient.is_zero_ideal() {
            w
        } else {
            ambient.normal_form(&w, budget)?
        };
        if !nf.is_zero() {
            failures.push((k, nf));
        }
    }
    Ok(FirstIntegralReport {
        is_first_integral: failures.is_empty(),
        constant,
        failures,
    })
}

/// Pulls the curve `S(u, ū) = 0` back through `u = num/den`, clears
/// denominators and tests membership of the result in `I(H^C)`.
pub fn verify_level_set_containment(
    model: &LeviFlatModel,
    num: &Polynomial,
    den: &Polynomial,
    s: &HermitianPoly,
) -> Result<bool> {
    Ok(level_set_pullback(model, num, den, s)?.1)
}

/// The cleared pullback (a complexified hermitian polynomial) and whether it
/// lies in `I(H^C)`.
pub fn level_set_pullback(
    model: &LeviFlatModel,
    num: &Polynomial,
    den: &Polynomial,
    s: &HermitianPoly,
) -> Result<(Polynomial, bool)> {
    let zc = model.z_context();
    zc.check_same(num.context())?;
    zc.check_same(den.context())?;
    let sc = s.context();
    if sc.n_z() != 1 || !sc.extras().is_empty() {
        return Err(Error::InvalidInput("the level curve must be in one variable u and its conjugate".into()));
    }
    if !s.is_real() && !s.is_imaginary() {
        return Err(Error::InvalidInput("the level curve equation is not real".into()));
    }
    let b = model.budget();
    if den.is_zero() || model.intrinsic_complexification()?.contains(den, b)? {
        return Err(Error::Degenerate(
            "denominator vanishes identically on the intrinsic complexification".into(),
        ));
    }
    let ctx = model.context();
    let n = num.embed(ctx)?;
    let d = den.embed(ctx)?;
    let ns = mirror_poly(&n);
    let ds = mirror_poly(&d);
    let (d1, d2) = s
        .body()
        .terms()
        .iter()
        .fold((0, 0), |(a, b), (m, _)| (a.max(m.get(0)), b.max(m.get(1))));
    let mut acc = Polynomial::zero(ctx);
    for (m, c) in s.body().terms() {
        let (j, k) = (m.get(0), m.get(1));
        let t = &(&(&n.pow(j) * &d.pow(d1 - j)) * &ns.pow(k)) * &ds.pow(d2 - k);
        acc = &acc + &t.scale(c);
    }
    let inside = model.complexified().contains(&acc, b)?;
    Ok((acc, inside))
}

/// Implicit equation of the web swept by a one-parameter family of
/// hypersurfaces.
#[derive(Clone, Debug)]
pub struct Web {
    /// Polynomial in the z-variables and the formal symbols `dz1..dzN`.
    pub equation: Polynomial,
    /// Degree of the family in its parameter.
    pub order: usize,
}

/// Resultant in `param` of the family and its z-differential.
pub fn web_from_family(family: &Polynomial, param: &str) -> Result<Web> {
    let ctx = family.context();
    if ctx.has_w() {
        return Err(Error::InvalidInput("the family must be holomorphic".into()));
    }
    let c = ctx
        .extra_index(param)
        .ok_or_else(|| Error::InvalidInput(format!("unknown parameter `{param}`")))?;
    if ctx.extras().len() != 1 {
        return Err(Error::InvalidInput("the family must have exactly one parameter".into()));
    }
    let n = ctx.n_z();
    let dnames: Vec<String> = (0..n).map(|k| format!("d{}", ctx.z_display()[k])).collect();
    let dref: Vec<&str> = dnames.iter().map(|s| s.as_str()).collect();
    let big = ctx.with_extras(&dref)?;
    let f = family.embed(&big)?;
    let mut df = Polynomial::zero(&big);
    for k in 0..n {
        let dz = Polynomial::var(&big, big.extra_index(&dnames[k]).expect("added"))?;
        df = &df + &(&f.partial_derivative(k)? * &dz);
    }
    if df.is_zero() {
        return Err(Error::Degenerate("the family does not depend on z".into()));
    }
    let a = coefficients_in(&f, c);
    let bcoef = coefficients_in(&df, c);
    let order = a.len() - 1;
    if order == 0 {
        return Err(Error::Degenerate(format!("the family does not depend on `{param}`")));
    }
    let res = sylvester_resultant(&big, &a, &bcoef);
    if res.is_zero() {
        return Err(Error::Degenerate("the resultant vanishes identically".into()));
    }
    let out_ctx = ctx.without_extras().with_extras(&dref)?;
    let equation = res.project(&out_ctx).expect("parameter eliminated");
    Ok(Web { equation, order })
}

/// Coefficients of `p` in powers of variable `v`, constant term first, with
/// no trailing zeros (a zero polynomial gives `[0]`).
fn coefficients_in(p: &Polynomial, v: usize) -> Vec<Polynomial> {
    let groups = p.collect_by(&[v]);
    let deg = groups.keys().map(|k| k[0] as usize).max().unwrap_or(0);
    let mut out = vec![Polynomial::zero(p.context()); deg + 1];
    for (k, c) in groups {
        out[k[0] as usize] = c;
    }
    out
}

/// Determinant of the Sylvester matrix of `Σ a_i c^i` and `Σ b_i c^i`.
fn sylvester_resultant(ctx: &Arc<VarContext>, a: &[Polynomial], b: &[Polynomial]) -> Polynomial {
    let da = a.len() - 1;
    let db = b.len() - 1;
    let size = da + db;
    if size == 0 {
        return Polynomial::one(ctx);
    }
    let mut m = vec![vec![Polynomial::zero(ctx); size]; size];
    for r in 0..db {
        for (i, c) in a.iter().rev().enumerate() {
            m[r][r + i] = c.clone();
        }
    }
    for r in 0..da {
        for (i, c) in b.iter().rev().enumerate() {
            m[db + r][r + i] = c.clone();
        }
    }
    det_poly(ctx, &m)
}

/// Substitution data for restricting to a hyperplane `h = 0`.
#[derive(Clone, Debug)]
pub struct HyperplaneSection {
    source: Arc<VarContext>,
    target: Arc<VarContext>,
    /// Eliminated variable.
    pub var: usize,
    /// `x_var` as a polynomial in the other variables (source context).
    solved: Polynomial,
}

impl HyperplaneSection {
    /// Solves the linear equation for its lowest-index variable.
    pub fn new(h: &Polynomial) -> Result<Self> {
        let ctx = h.context();
        if ctx.has_w() || !ctx.extras().is_empty() {
            return Err(Error::InvalidInput("hyperplanes live in the holomorphic coordinates".into()));
        }
        if h.total_degree().map_or(true, |d| d != 1) {
            return Err(Error::InvalidInput("the hyperplane equation must be linear and nonconstant".into()));
        }
        let var = (0..ctx.len()).find(|&i| h.uses_var(i)).expect("nonconstant");
        let a = h.coefficient(&crate::monomial::Monomial::var(ctx.len(), var, 1));
        let rest = h - &Polynomial::var(ctx, var)?.scale(&a);
        let solved = rest.scale(&-(a.inv().expect("nonzero coefficient")));
        let names: Vec<String> = (0..ctx.n_z()).filter(|&k| k != var).map(|k| ctx.z_display()[k].clone()).collect();
        let target = VarContext::new(ctx.n_z() - 1, false, names, Vec::new())?;
        Ok(HyperplaneSection {
            source: ctx.clone(),
            target,
            var,
            solved,
        })
    }

    pub fn target(&self) -> &Arc<VarContext> {
        &self.target
    }

    fn shift(&self) -> Vec<Option<usize>> {
        (0..self.source.len())
            .map(|i| match i.cmp(&self.var) {
                std::cmp::Ordering::Less => Some(i),
                std::cmp::Ordering::Equal => None,
                std::cmp::Ordering::Greater => Some(i - 1),
            })
            .collect()
    }

    pub fn restrict_poly(&self, p: &Polynomial) -> Result<Polynomial> {
        let s = p.substitute(self.var, &self.solved)?;
        Ok(s.remap(&self.target, &self.shift()).expect("variable substituted"))
    }

    /// Pullback of a form along the inclusion of the hyperplane.
    pub fn restrict_form(&self, w: &DifferentialForm) -> Result<DifferentialForm> {
        self.source.check_same(w.context())?;
        // dx_var = Σ ∂(solved)/∂x_k dx_k
        let mut dvar = DifferentialForm::zero(&self.source, 1);
        for k in 0..self.source.len() {
            if k != self.var {
                dvar.add_term(&[k], self.solved.partial_derivative(k)?);
            }
        }
        let mut pulled = DifferentialForm::zero(&self.source, w.degree());
        for (idx, c) in w.coefficients() {
            let c = c.substitute(self.var, &self.solved)?;
            let mut term = DifferentialForm::function(&c);
            for &i in idx {
                let factor = if i == self.var {
                    dvar.clone()
                } else {
                    DifferentialForm::dx(&self.source, i)
                };
                term = term.wedge(&factor)?;
            }
            pulled = pulled.add(&term)?;
        }
        let map = self.shift();
        let mut out = DifferentialForm::zero(&self.target, w.degree());
        for (idx, c) in pulled.coefficients() {
            let idx: Vec<usize> = idx.iter().map(|&i| map[i].expect("no dx_var left")).collect();
            out.add_term(&idx, c.remap(&self.target, &map).expect("variable substituted"));
        }
        Ok(out)
    }

    /// A tangent field restricted to the hyperplane (its `var` component is
    /// dropped).
    fn restrict_tangent_field(&self, v: &VectorField) -> Result<VectorField> {
        let map = self.shift();
        let mut comps = vec![Polynomial::zero(&self.target); self.target.len()];
        for (i, c) in v.components().iter().enumerate() {
            if let Some(t) = map[i] {
                comps[t] = self.restrict_poly(c)?;
            }
        }
        VectorField::new(&self.target, comps)
    }
}

/// Restricts an ideal to `h = 0`. Fails when the whole hyperplane lies in
/// the variety.
pub fn restrict_ideal(ideal: &Ideal, h: &Polynomial) -> Result<Ideal> {
    ideal.context().check_same(h.context())?;
    let sec = HyperplaneSection::new(h)?;
    let gens: Vec<Polynomial> = ideal
        .generators()
        .iter()
        .map(|g| sec.restrict_poly(g))
        .collect::<Result<_>>()?;
    let out = Ideal::new(sec.target(), gens)?;
    if out.is_zero_ideal() && !ideal.is_zero_ideal() {
        return Err(Error::Degenerate("the hyperplane is contained in the variety".into()));
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct RestrictedFoliation {
    pub foliation: Foliation,
    pub singular: SingularLocus,
    /// The restricted singular locus still has codimension at least two.
    pub generic: bool,
}

pub fn restrict_foliation(f: &Foliation, h: &Polynomial, budget: &Budget) -> Result<RestrictedFoliation> {
    f.context().check_same(h.context())?;
    let sec = HyperplaneSection::new(h)?;
    let restricted = match f.presentation() {
        Presentation::Forms(forms) => {
            let pulled: Vec<DifferentialForm> = forms
                .iter()
                .map(|w| sec.restrict_form(w))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .filter(|w| !w.is_zero())
                .collect();
            Foliation::from_forms(sec.target(), pulled)?
        }
        Presentation::Fields(fields) => {
            // intersect the distribution with ker dh
            let vals: Vec<Polynomial> = fields.iter().map(|v| v.apply(h)).collect::<Result<_>>()?;
            let mut tangent = Vec::new();
            for (i, v) in fields.iter().enumerate() {
                if vals[i].is_zero() {
                    tangent.push(v.clone());
                }
                for j in i + 1..fields.len() {
                    let w = fields[j].scale(&vals[i]).add(&v.scale(&-&vals[j]))?;
                    if !w.is_zero() {
                        tangent.push(w);
                    }
                }
            }
            let restricted: Vec<VectorField> = tangent
                .iter()
                .map(|v| sec.restrict_tangent_field(v))
                .collect::<Result<_>>()?;
            Foliation::from_fields(sec.target(), restricted)?
        }
    };
    let singular = restricted.singular_locus(budget)?.clone();
    let generic = singular.codim_ok();
    Ok(RestrictedFoliation {
        foliation: restricted,
        singular,
        generic,
    })
}

/// The z-variables of a context as a list of indices.
pub fn z_vars(ctx: &VarContext) -> Vec<usize> {
    ctx.indices_of(Block::Z).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_poly;

    fn p(ctx: &Arc<VarContext>, s: &str) -> Polynomial {
        parse_poly(s, ctx).unwrap()
    }

    fn omega(ctx: &Arc<VarContext>) -> DifferentialForm {
        let mut w = DifferentialForm::zero(ctx, 1);
        w.add_term(&[2], p(ctx, "z2"));
        w.add_term(&[1], p(ctx, "-z3"));
        w
    }

    fn ex1_fields(ctx: &Arc<VarContext>) -> Foliation {
        let d1 = VectorField::coordinate(ctx, 0).unwrap();
        let e = VectorField::from_z_components(ctx, vec![p(ctx, "0"), p(ctx, "z2"), p(ctx, "z3"), p(ctx, "0")]).unwrap();
        Foliation::from_fields(ctx, vec![d1, e]).unwrap()
    }

    fn ex1() -> LeviFlatModel {
        LeviFlatModel::from_equations(&VarContext::zw(4), &["~z3*z2 - ~z2*z3"], &["z4"], 2).unwrap()
    }

    #[test]
    fn integrability() {
        let c4 = VarContext::z_only(4);
        let f = Foliation::from_forms(&c4, vec![omega(&c4)]).unwrap();
        assert!(f.is_integrable());
        assert!(ex1_fields(&c4).is_integrable());
        let c3 = VarContext::z_only(3);
        let bad = DifferentialForm::one_form(&c3, vec![p(&c3, "z2"), p(&c3, "0"), p(&c3, "1")]).unwrap();
        assert!(!Foliation::from_forms(&c3, vec![bad]).unwrap().is_integrable());
        // ∂1 and z1∂2 + ∂3 bracket to ∂2, outside the span
        let u = VectorField::coordinate(&c3, 0).unwrap();
        let v = VectorField::from_z_components(&c3, vec![p(&c3, "0"), p(&c3, "z1"), p(&c3, "1")]).unwrap();
        assert!(!Foliation::from_fields(&c3, vec![u, v]).unwrap().is_integrable());
    }

    #[test]
    fn singular_loci() {
        let b = Budget::default();
        let c4 = VarContext::z_only(4);
        let f = Foliation::from_forms(&c4, vec![omega(&c4)]).unwrap();
        let s = f.singular_locus(&b).unwrap();
        assert_eq!(s.codim, Some(2));
        let expect = Ideal::new(&c4, vec![p(&c4, "z2"), p(&c4, "z3")]).unwrap();
        assert!(s.ideal.same_ideal(&expect, &b).unwrap());

        let d1 = Foliation::from_fields(&c4, vec![VectorField::coordinate(&c4, 0).unwrap()]).unwrap();
        assert_eq!(d1.singular_locus(&b).unwrap().codim, None);
        let radial = VectorField::from_z_components(&c4, vec![p(&c4, "z1"), p(&c4, "0"), p(&c4, "0"), p(&c4, "0")]).unwrap();
        let r = Foliation::from_fields(&c4, vec![radial]).unwrap();
        let s = r.singular_locus(&b).unwrap();
        assert_eq!(s.codim, Some(1));
        assert!(!s.codim_ok());
    }

    #[test]
    fn invariance() {
        let b = Budget::default();
        let c4 = VarContext::z_only(4);
        let f = ex1_fields(&c4);
        assert!(f.is_invariant(&Ideal::new(&c4, vec![p(&c4, "z4")]).unwrap(), &b).unwrap());
        assert!(!f.is_invariant(&Ideal::new(&c4, vec![p(&c4, "z1")]).unwrap(), &b).unwrap());
        let leaf = Ideal::new(&c4, vec![p(&c4, "z3 - 2*z2"), p(&c4, "z4")]).unwrap();
        assert!(f.is_invariant(&leaf, &b).unwrap());
    }

    #[test]
    fn tangency_to_example_one() {
        let m = ex1();
        let c4 = m.z_context();
        assert!(tangent_to_leviflat(&ex1_fields(&c4), &m).unwrap().tangent);
        let d2 = Foliation::from_fields(&c4, vec![VectorField::coordinate(&c4, 1).unwrap()]).unwrap();
        let r = tangent_to_leviflat(&d2, &m).unwrap();
        assert!(!r.tangent);
        assert!(r.witness.is_some());
        // the form presentation {ω, dz4} gives the same distribution
        let forms = Foliation::from_forms(&c4, vec![omega(&c4), DifferentialForm::dx(&c4, 3)]).unwrap();
        assert!(forms.is_integrable());
        assert_eq!(forms.rank(), 2);
        assert!(tangent_to_leviflat(&forms, &m).unwrap().tangent);
    }

    #[test]
    fn trivial_model_is_tangent_to_coordinate_foliation() {
        let ctx = VarContext::zw(3);
        let h = HermitianPoly::parse("(z2 - ~z2)*(-1/2*i)", &ctx).unwrap();
        let mut gens = vec![h];
        let (re, im) = crate::hermitian::split_complex(&p(&ctx, "z3")).unwrap();
        gens.extend([re, im]);
        let m = LeviFlatModel::new(&ctx, gens, 1).unwrap();
        let zc = m.z_context();
        let f = Foliation::from_fields(&zc, vec![VectorField::coordinate(&zc, 0).unwrap()]).unwrap();
        assert!(tangent_to_leviflat(&f, &m).unwrap().tangent);
    }

    #[test]
    fn first_integrals() {
        let b = Budget::default();
        let c4 = VarContext::z_only(4);
        let f = ex1_fields(&c4);
        let amb = Ideal::new(&c4, vec![p(&c4, "z4")]).unwrap();
        let r = verify_first_integral(&p(&c4, "z3"), &p(&c4, "z2"), &f, &amb, &b).unwrap();
        assert!(r.is_first_integral && !r.constant);
        let d3 = Foliation::from_fields(&c4, vec![VectorField::coordinate(&c4, 2).unwrap()]).unwrap();
        assert!(!verify_first_integral(&p(&c4, "z3"), &p(&c4, "z2"), &d3, &amb, &b).unwrap().is_first_integral);
        let one = verify_first_integral(&p(&c4, "1"), &p(&c4, "1"), &d3, &amb, &b).unwrap();
        assert!(one.is_first_integral && one.constant);
    }

    #[test]
    fn level_sets() {
        let m = ex1();
        let c4 = m.z_context();
        let uctx = VarContext::new(1, true, vec!["u".into()], Vec::new()).unwrap();
        let im = HermitianPoly::parse("u - ~u", &uctx).unwrap();
        assert!(verify_level_set_containment(&m, &p(&c4, "z3"), &p(&c4, "z2"), &im).unwrap());
        let zero = HermitianPoly::parse("u*~u", &uctx).unwrap();
        assert!(!verify_level_set_containment(&m, &p(&c4, "z3"), &p(&c4, "z2"), &zero).unwrap());
        let leaf = LeviFlatModel::from_equations(&VarContext::zw(4), &[], &["z3 - 2*z2", "z4"], 1).unwrap();
        let s = HermitianPoly::parse("(u - 2)*(~u - 2)", &uctx).unwrap();
        assert!(verify_level_set_containment(&leaf, &p(&c4, "z3"), &p(&c4, "z2"), &s).unwrap());
        assert!(verify_level_set_containment(&m, &p(&c4, "z3"), &p(&c4, "z4"), &im).is_err());
    }

    #[test]
    fn webs() {
        let ctx = VarContext::z_only(3).with_extras(&["c"]).unwrap();
        let w = web_from_family(&p(&ctx, "z1 + c*z2 + c^2*z3"), "c").unwrap();
        assert_eq!(w.order, 2);
        let dz: Vec<usize> = (0..3).map(|k| w.equation.context().extra_index(&format!("dz{}", k + 1)).unwrap()).collect();
        for (m, _) in w.equation.terms() {
            assert_eq!(m.degree_in(dz.iter().copied()), 2);
        }
        let c2 = VarContext::z_only(2).with_extras(&["c"]).unwrap();
        let lin = web_from_family(&p(&c2, "z1 + c*z2"), "c").unwrap();
        assert_eq!(lin.order, 1);
        let ectx = lin.equation.context().clone();
        let expect = parse_poly("z2*dz1 - z1*dz2", &ectx).unwrap();
        assert!(lin.equation == expect || lin.equation == -&expect);
        assert!(matches!(web_from_family(&p(&c2, "c"), "c"), Err(Error::Degenerate(_))));
    }

    #[test]
    fn restrictions() {
        let b = Budget::default();
        let c4 = VarContext::z_only(4);
        let i = Ideal::new(&c4, vec![p(&c4, "z4")]).unwrap();
        let r = restrict_ideal(&i, &p(&c4, "z1")).unwrap();
        assert_eq!(r.context().len(), 3);
        assert_eq!(crate::parser::print_poly_auto(&r.generators()[0]), "z4");
        assert!(matches!(restrict_ideal(&i, &p(&c4, "z4")), Err(Error::Degenerate(_))));

        let f = Foliation::from_forms(&c4, vec![omega(&c4), DifferentialForm::dx(&c4, 3)]).unwrap();
        let rf = restrict_foliation(&f, &p(&c4, "z1 - z2 - z3"), &b).unwrap();
        assert!(rf.generic);
        assert_eq!(rf.singular.codim, Some(2));
        let fields = restrict_foliation(&ex1_fields(&c4), &p(&c4, "z1 - z2 - z3"), &b).unwrap();
        assert_eq!(fields.foliation.rank(), 1);
    }
}
