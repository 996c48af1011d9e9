//! Polynomial vector fields and differential forms.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::context::{Block, VarContext};
use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::hermitian::mirror_poly;
use crate::parser::print_poly_auto;
use crate::poly::Polynomial;

fn var_label(ctx: &VarContext, i: usize) -> String {
    if ctx.has_custom_names() {
        ctx.display_name(i)
    } else {
        ctx.name(i)
    }
}

fn wrap(p: &Polynomial) -> String {
    let s = print_poly_auto(p);
    if p.num_terms() > 1 {
        format!("({s})")
    } else {
        s
    }
}

/// Index of the variable exchanged with `i` by the z/w swap.
fn swapped(ctx: &VarContext, i: usize) -> usize {
    match ctx.block_of(i) {
        Block::Z if ctx.has_w() => ctx.w_index(i),
        Block::W => i - ctx.n_z(),
        _ => i,
    }
}

fn with_w_context(ctx: &Arc<VarContext>) -> Arc<VarContext> {
    if ctx.has_w() {
        ctx.clone()
    } else {
        ctx.with_w()
    }
}

/// `Σ a_i ∂/∂x_i`, one component per context variable.
#[derive(Clone, PartialEq, Eq)]
pub struct VectorField {
    ctx: Arc<VarContext>,
    components: Vec<Polynomial>,
}

impl VectorField {
    pub fn new(ctx: &Arc<VarContext>, components: Vec<Polynomial>) -> Result<Self> {
        if components.len() != ctx.len() {
            return Err(Error::LengthMismatch {
                expected: ctx.len(),
                got: components.len(),
            });
        }
        for c in &components {
            ctx.check_same(c.context())?;
        }
        Ok(VectorField {
            ctx: ctx.clone(),
            components,
        })
    }

    /// Components given for the z-block only; the rest are zero.
    pub fn from_z_components(ctx: &Arc<VarContext>, z: Vec<Polynomial>) -> Result<Self> {
        if z.len() != ctx.n_z() {
            return Err(Error::LengthMismatch {
                expected: ctx.n_z(),
                got: z.len(),
            });
        }
        let mut comps = z;
        comps.resize(ctx.len(), Polynomial::zero(ctx));
        VectorField::new(ctx, comps)
    }

    pub fn zero(ctx: &Arc<VarContext>) -> Self {
        VectorField {
            ctx: ctx.clone(),
            components: vec![Polynomial::zero(ctx); ctx.len()],
        }
    }

    /// `∂/∂x_idx`.
    pub fn coordinate(ctx: &Arc<VarContext>, idx: usize) -> Result<Self> {
        let mut v = VectorField::zero(ctx);
        if idx >= ctx.len() {
            return Err(Error::InvalidVariable {
                index: idx,
                len: ctx.len(),
            });
        }
        v.components[idx] = Polynomial::one(ctx);
        Ok(v)
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    /// `v(f) = Σ a_i ∂f/∂x_i`.
    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial> {
        self.ctx.check_same(f.context())?;
        let mut acc = Polynomial::zero(&self.ctx);
        for (i, a) in self.components.iter().enumerate() {
            if a.is_zero() || !f.uses_var(i) {
                continue;
            }
            acc = &acc + &(a * &f.partial_derivative(i)?);
        }
        Ok(acc)
    }

    /// `[u, v]_k = u(v_k) - v(u_k)`.
    pub fn bracket(&self, other: &VectorField) -> Result<VectorField> {
        self.ctx.check_same(&other.ctx)?;
        let mut comps = Vec::with_capacity(self.components.len());
        for k in 0..self.components.len() {
            comps.push(&self.apply(&other.components[k])? - &other.apply(&self.components[k])?);
        }
        Ok(VectorField {
            ctx: self.ctx.clone(),
            components: comps,
        })
    }

    pub fn add(&self, other: &VectorField) -> Result<VectorField> {
        self.ctx.check_same(&other.ctx)?;
        Ok(VectorField {
            ctx: self.ctx.clone(),
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, f: &Polynomial) -> VectorField {
        VectorField {
            ctx: self.ctx.clone(),
            components: self.components.iter().map(|a| a * f).collect(),
        }
    }

    pub fn embed(&self, target: &Arc<VarContext>) -> Result<VectorField> {
        let map = crate::poly::embedding_map(&self.ctx, target)?;
        let mut comps = vec![Polynomial::zero(target); target.len()];
        for (i, c) in self.components.iter().enumerate() {
            comps[map[i].expect("embedding map is total")] = c.embed(target)?;
        }
        VectorField::new(target, comps)
    }

    /// Conjugated coefficients with z- and w-roles exchanged; lands in the
    /// (z, w) context.
    pub fn mirror(&self) -> VectorField {
        let zw = with_w_context(&self.ctx);
        let src = if self.ctx.has_w() {
            self.clone()
        } else {
            self.embed(&zw).expect("same z-block")
        };
        let mut comps = vec![Polynomial::zero(&zw); zw.len()];
        for (i, c) in src.components.iter().enumerate() {
            comps[swapped(&zw, i)] = mirror_poly(c);
        }
        VectorField {
            ctx: zw,
            components: comps,
        }
    }

    /// `v ⊕ v*` on the (z, w) context.
    pub fn with_mirror(&self) -> Result<VectorField> {
        let zw = with_w_context(&self.ctx);
        self.embed(&zw)?.add(&self.mirror())
    }

    pub fn evaluate(&self, point: &[GaussianRational]) -> Result<Vec<GaussianRational>> {
        self.components.iter().map(|c| c.evaluate(point)).collect()
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .components
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("{}*d/d{}", wrap(c), var_label(&self.ctx, i)))
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Sorts an index list, returning the permutation sign, or `None` on a
/// repeated index.
fn normalize(idx: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut v = idx.to_vec();
    let mut positive = true;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                positive = !positive;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, positive))
}

/// A polynomial differential form, stored by sorted index tuples.
#[derive(Clone, PartialEq, Eq)]
pub struct DifferentialForm {
    ctx: Arc<VarContext>,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, Polynomial>,
}

impl DifferentialForm {
    pub fn zero(ctx: &Arc<VarContext>, degree: usize) -> Self {
        DifferentialForm {
            ctx: ctx.clone(),
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// The 0-form `f`.
    pub fn function(f: &Polynomial) -> Self {
        let mut w = DifferentialForm::zero(f.context(), 0);
        w.add_term(&[], f.clone());
        w
    }

    /// `Σ a_i dx_i` for the first `coeffs.len()` variables.
    pub fn one_form(ctx: &Arc<VarContext>, coeffs: Vec<Polynomial>) -> Result<Self> {
        if coeffs.len() > ctx.len() {
            return Err(Error::LengthMismatch {
                expected: ctx.len(),
                got: coeffs.len(),
            });
        }
        let mut w = DifferentialForm::zero(ctx, 1);
        for (i, c) in coeffs.into_iter().enumerate() {
            ctx.check_same(c.context())?;
            w.add_term(&[i], c);
        }
        Ok(w)
    }

    /// `dx_idx`.
    pub fn dx(ctx: &Arc<VarContext>, idx: usize) -> Self {
        let mut w = DifferentialForm::zero(ctx, 1);
        w.add_term(&[idx], Polynomial::one(ctx));
        w
    }

    /// Adds `c · dx_{i1} ∧ … ∧ dx_{ik}` (indices in any order).
    pub fn add_term(&mut self, idx: &[usize], c: Polynomial) {
        assert_eq!(idx.len(), self.degree, "form degree mismatch");
        let Some((key, positive)) = normalize(idx) else {
            return;
        };
        let c = if positive { c } else { -&c };
        let entry = self
            .coeffs
            .entry(key.clone())
            .or_insert_with(|| Polynomial::zero(&self.ctx));
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficients(&self) -> &BTreeMap<Vec<usize>, Polynomial> {
        &self.coeffs
    }

    pub fn coefficient(&self, idx: &[usize]) -> Polynomial {
        self.coeffs
            .get(idx)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(&self.ctx))
    }

    /// Coefficients of a 1-form as a dense row.
    pub fn row(&self) -> Vec<Polynomial> {
        (0..self.ctx.len()).map(|i| self.coefficient(&[i])).collect()
    }

    pub fn d(&self) -> DifferentialForm {
        let mut out = DifferentialForm::zero(&self.ctx, self.degree + 1);
        for (idx, c) in &self.coeffs {
            for j in 0..self.ctx.len() {
                if !c.uses_var(j) || idx.contains(&j) {
                    continue;
                }
                let mut full = vec![j];
                full.extend(idx);
                out.add_term(&full, c.partial_derivative(j).expect("index in range"));
            }
        }
        out
    }

    pub fn wedge(&self, other: &DifferentialForm) -> Result<DifferentialForm> {
        self.ctx.check_same(&other.ctx)?;
        let mut out = DifferentialForm::zero(&self.ctx, self.degree + other.degree);
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                let mut full = a.clone();
                full.extend(b);
                out.add_term(&full, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, f: &Polynomial) -> DifferentialForm {
        let mut out = DifferentialForm::zero(&self.ctx, self.degree);
        for (idx, c) in &self.coeffs {
            out.add_term(idx, c * f);
        }
        out
    }

    pub fn add(&self, other: &DifferentialForm) -> Result<DifferentialForm> {
        self.ctx.check_same(&other.ctx)?;
        if self.degree != other.degree {
            return Err(Error::InvalidInput("adding forms of different degrees".into()));
        }
        let mut out = self.clone();
        for (idx, c) in &other.coeffs {
            out.add_term(idx, c.clone());
        }
        Ok(out)
    }

    /// Contraction of a 1-form with a vector field.
    pub fn pair(&self, v: &VectorField) -> Result<Polynomial> {
        if self.degree != 1 {
            return Err(Error::InvalidInput("pairing needs a 1-form".into()));
        }
        self.ctx.check_same(v.context())?;
        let mut acc = Polynomial::zero(&self.ctx);
        for (idx, c) in &self.coeffs {
            acc = &acc + &(c * &v.components()[idx[0]]);
        }
        Ok(acc)
    }

    /// Applies `f` to every coefficient (same context and indices).
    pub fn map_coefficients(&self, f: impl Fn(&Polynomial) -> Polynomial) -> DifferentialForm {
        let mut out = DifferentialForm::zero(&self.ctx, self.degree);
        for (idx, c) in &self.coeffs {
            out.add_term(idx, f(c));
        }
        out
    }

    pub fn embed(&self, target: &Arc<VarContext>) -> Result<DifferentialForm> {
        let map = crate::poly::embedding_map(&self.ctx, target)?;
        let mut out = DifferentialForm::zero(target, self.degree);
        for (idx, c) in &self.coeffs {
            let idx: Vec<usize> = idx.iter().map(|&i| map[i].expect("total")).collect();
            out.add_term(&idx, c.embed(target)?);
        }
        Ok(out)
    }

    /// Conjugated coefficients, `dz_k ↔ dw_k`.
    pub fn mirror(&self) -> DifferentialForm {
        let zw = with_w_context(&self.ctx);
        let src = if self.ctx.has_w() {
            self.clone()
        } else {
            self.embed(&zw).expect("same z-block")
        };
        let mut out = DifferentialForm::zero(&zw, self.degree);
        for (idx, c) in &src.coeffs {
            let idx: Vec<usize> = idx.iter().map(|&i| swapped(&zw, i)).collect();
            out.add_term(&idx, mirror_poly(c));
        }
        out
    }
}

impl fmt::Display for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(idx, c)| {
                if idx.is_empty() {
                    return print_poly_auto(c);
                }
                let d: Vec<String> = idx.iter().map(|&i| format!("d{}", var_label(&self.ctx, i))).collect();
                let d = d.join("^");
                if c.is_constant() && c.constant_value() == Some(GaussianRational::from(1)) {
                    d
                } else {
                    format!("{}*{}", wrap(c), d)
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_poly;
    use crate::sample::random_poly;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(ctx: &Arc<VarContext>, s: &str) -> Polynomial {
        parse_poly(s, ctx).unwrap()
    }

    #[test]
    fn brackets() {
        let ctx = VarContext::z_only(2);
        let d1 = VectorField::coordinate(&ctx, 0).unwrap();
        let d2 = VectorField::coordinate(&ctx, 1).unwrap();
        assert!(d1.bracket(&d2).unwrap().is_zero());
        let e = VectorField::from_z_components(&ctx, vec![p(&ctx, "z1"), p(&ctx, "0")]).unwrap();
        let neg = VectorField::from_z_components(&ctx, vec![p(&ctx, "-1"), p(&ctx, "0")]).unwrap();
        assert_eq!(e.bracket(&d1).unwrap(), neg);
    }

    #[test]
    fn jacobi_and_leibniz() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ctx = VarContext::z_only(3);
        for _ in 0..10 {
            let mut field = || {
                VectorField::from_z_components(&ctx, (0..3).map(|_| random_poly(&mut rng, &ctx, 2, 3)).collect()).unwrap()
            };
            let (a, b, c) = (field(), field(), field());
            let j = a
                .bracket(&b.bracket(&c).unwrap())
                .unwrap()
                .add(&b.bracket(&c.bracket(&a).unwrap()).unwrap())
                .unwrap()
                .add(&c.bracket(&a.bracket(&b).unwrap()).unwrap())
                .unwrap();
            assert!(j.is_zero());
            let f = random_poly(&mut rng, &ctx, 2, 3);
            let g = random_poly(&mut rng, &ctx, 2, 3);
            let lhs = a.apply(&(&f * &g)).unwrap();
            let rhs = &(&a.apply(&f).unwrap() * &g) + &(&f * &a.apply(&g).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn exterior_derivative() {
        let ctx = VarContext::z_only(3);
        let w = DifferentialForm::one_form(&ctx, vec![p(&ctx, "z2"), p(&ctx, "0"), p(&ctx, "1")]).unwrap();
        let t = w.wedge(&w.d()).unwrap();
        // z2 dz1 + dz3: ω ∧ dω = dz3 ∧ dz2 ∧ dz1 = -dz1∧dz2∧dz3
        assert_eq!(t.coefficient(&[0, 1, 2]), p(&ctx, "-1"));
        let omega = DifferentialForm::one_form(&ctx, vec![p(&ctx, "0"), p(&ctx, "-z3"), p(&ctx, "z2")]).unwrap();
        assert!(omega.wedge(&omega.d()).unwrap().is_zero());
        assert_eq!(omega.to_string(), "-z3*dz2 + z2*dz3");

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c4 = VarContext::z_only(4);
        for deg in 0..3 {
            let mut f = DifferentialForm::zero(&c4, deg);
            for idx in crate::linalg::subsets(4, deg) {
                f.add_term(&idx, random_poly(&mut rng, &c4, 3, 3));
            }
            assert!(f.d().d().is_zero());
        }
    }

    #[test]
    fn mirrors() {
        let ctx = VarContext::z_only(3);
        let omega = DifferentialForm::one_form(&ctx, vec![p(&ctx, "0"), p(&ctx, "-z3"), p(&ctx, "z2")]).unwrap();
        let m = omega.mirror();
        assert_eq!(m.to_string(), "-w3*dw2 + w2*dw3");
        assert_eq!(m.mirror(), omega.embed(m.context()).unwrap());
        let v = VectorField::from_z_components(&ctx, vec![p(&ctx, "0"), p(&ctx, "i*z1"), p(&ctx, "0")]).unwrap();
        assert_eq!(v.mirror().to_string(), "-i*w1*d/dw2");
    }
}
