//! Pointwise CR and Levi-foliation verification, and detection of points
//! crossed by several leaves of a family.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::context::{Block, VarContext};
use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::groebner::Budget;
use crate::hermitian::{diagonal_point, LeviFlatModel};
use crate::ideal::{Dimension, Ideal};
use crate::linalg::{kernel, rank, same_span, subsets, Row};
use crate::monomial::{Monomial, TermOrder};
use crate::parser::parse_poly;
use crate::poly::Polynomial;
use crate::sample::small_rational;
use crate::segre::verify_leaf;
use crate::univariate::UniPoly;

#[derive(Clone, Debug)]
pub struct CrReport {
    pub point: Vec<GaussianRational>,
    /// `dim_ℂ (T_pH ∩ J T_pH)`, the kernel of the holomorphic differentials.
    pub cr_dimension: usize,
    /// Rank of `[∂φ_j/∂z_k](p)`.
    pub jacobian_rank: usize,
    /// Rank of the real differentials of the generators.
    pub real_rank: usize,
    /// The real rank is `2N - 2n - 1`, as for a smooth point of a set of
    /// real dimension `2n + 1`.
    pub regular: bool,
    pub kernel: Vec<Row>,
}

fn require_on_h(model: &LeviFlatModel, p: &[GaussianRational]) -> Result<()> {
    if p.len() != model.ambient_dim() {
        return Err(Error::LengthMismatch {
            expected: model.ambient_dim(),
            got: p.len(),
        });
    }
    if !model.contains_point(p)? {
        return Err(Error::PointNotOnVariety("the Levi-flat set".into()));
    }
    Ok(())
}

pub fn cr_tangent(model: &LeviFlatModel, p: &[GaussianRational]) -> Result<CrReport> {
    require_on_h(model, p)?;
    let ctx = model.context();
    let n = model.ambient_dim();
    let at = diagonal_point(ctx, p)?;
    let mut hol: Vec<Row> = Vec::new();
    let mut real: Vec<Row> = Vec::new();
    for g in model.complexified_generators() {
        let mut row = Vec::with_capacity(2 * n);
        for i in 0..2 * n {
            row.push(g.partial_derivative(i)?.evaluate(&at)?);
        }
        hol.push(row[..n].to_vec());
        real.push(row);
    }
    let jacobian_rank = rank(&hol);
    // a real function's row (∂f, ∂̄f) is fixed by the conjugation swap, so
    // its complex rank equals the real rank
    let real_rank = rank(&real);
    let expected = 2 * n - 2 * model.levi_dim() - 1;
    Ok(CrReport {
        point: p.to_vec(),
        cr_dimension: n - jacobian_rank,
        jacobian_rank,
        real_rank,
        regular: real_rank == expected,
        kernel: kernel(&hol, n),
    })
}

/// Tangent space at `p` of the variety of `ideal`'s generators (kernel of
/// their Jacobian).
fn tangent_space(ideal: &Ideal, p: &[GaussianRational]) -> Result<Vec<Row>> {
    let n = ideal.context().len();
    let mut rows = Vec::new();
    for g in ideal.generators() {
        let mut row = Vec::with_capacity(n);
        for i in 0..n {
            row.push(g.partial_derivative(i)?.evaluate(p)?);
        }
        rows.push(row);
    }
    Ok(kernel(&rows, n))
}

/// A family of complex leaves: polynomials in z and real parameters, plus
/// constraints on the parameters alone.
#[derive(Clone, Debug)]
pub struct LeafFamily {
    ctx: Arc<VarContext>,
    params: Vec<String>,
    leaf: Vec<Polynomial>,
    constraints: Vec<Polynomial>,
}

impl LeafFamily {
    /// `z_ctx` is the holomorphic context of the model.
    pub fn new(z_ctx: &Arc<VarContext>, params: &[&str], leaf: &[&str], constraints: &[&str]) -> Result<Self> {
        if z_ctx.has_w() || !z_ctx.extras().is_empty() {
            return Err(Error::InvalidInput("leaf families live over the holomorphic coordinates".into()));
        }
        if params.is_empty() {
            return Err(Error::InvalidInput("a leaf family needs a parameter".into()));
        }
        let ctx = z_ctx.with_extras(params)?;
        let leaf = leaf.iter().map(|s| parse_poly(s, &ctx)).collect::<std::result::Result<Vec<_>, _>>()?;
        let constraints = constraints
            .iter()
            .map(|s| parse_poly(s, &ctx))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        if constraints.iter().any(|c| c.uses_block(Block::Z)) {
            return Err(Error::InvalidInput("constraints may only involve the parameters".into()));
        }
        LeafFamily::from_parts(ctx, leaf, constraints)
    }

    pub fn from_parts(ctx: Arc<VarContext>, leaf: Vec<Polynomial>, constraints: Vec<Polynomial>) -> Result<Self> {
        for p in leaf.iter().chain(&constraints) {
            ctx.check_same(p.context())?;
        }
        if leaf.is_empty() {
            return Err(Error::InvalidInput("a leaf family needs at least one equation".into()));
        }
        Ok(LeafFamily {
            params: ctx.extras().to_vec(),
            ctx,
            leaf,
            constraints,
        })
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn leaf_equations(&self) -> &[Polynomial] {
        &self.leaf
    }

    pub fn constraints(&self) -> &[Polynomial] {
        &self.constraints
    }

    pub fn z_context(&self) -> Arc<VarContext> {
        self.ctx.without_extras()
    }

    fn param_values(&self, values: &[GaussianRational]) -> Result<Vec<(usize, GaussianRational)>> {
        if values.len() != self.params.len() {
            return Err(Error::LengthMismatch {
                expected: self.params.len(),
                got: values.len(),
            });
        }
        Ok(self
            .params
            .iter()
            .zip(values)
            .map(|(name, v)| (self.ctx.extra_index(name).expect("own parameter"), v.clone()))
            .collect())
    }

    /// The leaf ideal at the given parameter values.
    pub fn leaf_at(&self, values: &[GaussianRational]) -> Result<Ideal> {
        let subs = self.param_values(values)?;
        let zc = self.z_context();
        let gens = self
            .leaf
            .iter()
            .map(|g| g.substitute_values(&subs).project(&zc).expect("parameters substituted"))
            .collect();
        Ideal::new(&zc, gens)
    }

    pub fn constraints_hold(&self, values: &[GaussianRational]) -> Result<bool> {
        let subs = self.param_values(values)?;
        Ok(self
            .constraints
            .iter()
            .all(|c| c.substitute_values(&subs).is_zero()))
    }
}

#[derive(Clone, Debug)]
pub struct SampleReport {
    pub params: Vec<GaussianRational>,
    pub point: Vec<GaussianRational>,
    pub leaf_dimension: Option<Dimension>,
    pub cr_dimension: Option<usize>,
    pub failures: Vec<String>,
}

impl SampleReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct LeviCheckReport {
    pub samples: Vec<SampleReport>,
}

impl LeviCheckReport {
    pub fn passed(&self) -> bool {
        self.samples.iter().all(|s| s.passed())
    }
}

/// Checks a claimed Levi foliation at sample `(parameters, point)` pairs:
/// the leaf has dimension `n`, lies in `H` and in `Σ_p`, and its tangent
/// space at the point is the CR tangent space.
pub fn check_levi_foliation(
    model: &LeviFlatModel,
    family: &LeafFamily,
    samples: &[(Vec<GaussianRational>, Vec<GaussianRational>)],
) -> Result<LeviCheckReport> {
    model.z_context().check_same(&family.z_context())?;
    let b = model.budget();
    let mut out = Vec::new();
    for (params, point) in samples {
        let mut rep = SampleReport {
            params: params.clone(),
            point: point.clone(),
            leaf_dimension: None,
            cr_dimension: None,
            failures: Vec::new(),
        };
        if point.len() != model.ambient_dim() {
            rep.failures.push(format!("point has {} coordinates", point.len()));
            out.push(rep);
            continue;
        }
        if !family.constraints_hold(params)? {
            rep.failures.push("parameter constraints violated".into());
        }
        let leaf = family.leaf_at(params)?;
        let on_leaf = leaf
            .generators()
            .iter()
            .map(|g| g.evaluate(point))
            .collect::<Result<Vec<_>>>()?
            .iter()
            .all(|v| v.is_zero());
        if !on_leaf {
            rep.failures.push("point is not on the leaf".into());
        }
        if !model.contains_point(point)? {
            rep.failures.push("point is not on H".into());
        }
        if !rep.failures.is_empty() {
            out.push(rep);
            continue;
        }
        let dim = leaf.krull_dimension(b)?;
        rep.leaf_dimension = Some(dim);
        if dim != Dimension::Dim(model.levi_dim()) {
            rep.failures.push(format!("leaf has dimension {dim}, expected {}", model.levi_dim()));
        }
        let lr = verify_leaf(model, &leaf, point)?;
        if !lr.in_levi_flat {
            rep.failures.push(match &lr.witness {
                Some(w) => format!("leaf is not contained in H (residue {w})"),
                None => "leaf is not contained in H".into(),
            });
        }
        if !lr.in_segre {
            rep.failures.push("leaf is not contained in the Segre variety".into());
        }
        let cr = cr_tangent(model, point)?;
        rep.cr_dimension = Some(cr.cr_dimension);
        if !cr.regular {
            rep.failures.push("point is a singular point of H".into());
        }
        let leaf_tangent = tangent_space(&leaf, point)?;
        if !same_span(&leaf_tangent, &cr.kernel) {
            rep.failures.push("leaf tangent space differs from the CR tangent space".into());
        }
        out.push(rep);
    }
    Ok(LeviCheckReport { samples: out })
}

/// A real parameter value solving `p ∈ leaf(param)`.
#[derive(Clone, Debug)]
pub struct LeafWitness {
    pub params: Vec<GaussianRational>,
    pub leaf: Ideal,
    /// `verify_leaf` passes for this leaf at the point.
    pub verified: bool,
}

#[derive(Clone, Debug)]
pub struct MultiLeafReport {
    /// Number of distinct real parameter solutions.
    pub count: usize,
    /// Solutions with rational coordinates, with their leaves.
    pub rational: Vec<LeafWitness>,
    /// Isolating intervals `(a, b]` of the last parameter for irrational
    /// solutions.
    pub irrational: Vec<(BigRational, BigRational)>,
}

/// Real part and imaginary part of a polynomial read with real variables.
fn real_imag(p: &Polynomial) -> (Polynomial, Polynomial) {
    let re = Polynomial::from_terms(
        p.context(),
        p.terms().iter().map(|(m, c)| (m.clone(), GaussianRational::real(c.re().clone()))),
    );
    let im = Polynomial::from_terms(
        p.context(),
        p.terms().iter().map(|(m, c)| (m.clone(), GaussianRational::real(c.im().clone()))),
    );
    (re, im)
}

/// Counts the leaves of `family` through `p`. The real parameter system is
/// solved through a lexicographic basis in shape position: real solutions
/// are the real roots of the last eliminant (Sturm), and rational ones are
/// recovered exactly.
pub fn multi_leaf_detector(model: &LeviFlatModel, family: &LeafFamily, p: &[GaussianRational]) -> Result<MultiLeafReport> {
    require_on_h(model, p)?;
    model.z_context().check_same(&family.z_context())?;
    let fctx = family.context();
    let k = family.params().len();
    let pctx = VarContext::new(k, false, family.params().to_vec(), Vec::new())?;
    let zsubs: Vec<(usize, GaussianRational)> = p.iter().cloned().enumerate().collect();
    let map: Vec<Option<usize>> = (0..fctx.len())
        .map(|i| match fctx.block_of(i) {
            Block::Extra => Some(i - fctx.n_z()),
            _ => None,
        })
        .collect();
    let mut system = Vec::new();
    for g in family.leaf_equations().iter().chain(family.constraints()) {
        let at = g.substitute_values(&zsubs).remap(&pctx, &map).expect("z substituted");
        let (re, im) = real_imag(&at);
        system.push(re);
        system.push(im);
    }
    let budget: &Budget = model.budget();
    let ideal = Ideal::new(&pctx, system)?;
    let gb = ideal.groebner_basis(&TermOrder::Lex, budget)?;
    if gb.is_unit() {
        return Ok(MultiLeafReport {
            count: 0,
            rational: Vec::new(),
            irrational: Vec::new(),
        });
    }
    if ideal.krull_dimension(budget)? != Dimension::Dim(0) {
        return Err(Error::Degenerate(
            "infinitely many leaves of the family pass through the point".into(),
        ));
    }
    let polys = gb.polys();
    let last = k - 1;
    // shape position: x_i - g_i(x_last) for i < last, then h(x_last)
    let shape = polys.len() == k
        && polys[k - 1].terms().iter().all(|(m, _)| m.support().all(|v| v == last))
        && (0..last).all(|i| {
            let q = &polys[i];
            let lead = q.leading_term(&TermOrder::Lex).expect("nonzero").0;
            lead.support().eq([i]) && lead.get(i) == 1 && q.terms().iter().all(|(m, _)| m == lead || m.support().all(|v| v == last))
        });
    if !shape {
        return Err(Error::Degenerate("the parameter system is not in shape position".into()));
    }
    let h = UniPoly::from_polynomial(&polys[k - 1], last)
        .ok_or_else(|| Error::Degenerate("eliminant has non-real coefficients".into()))?;
    let count = h.count_real_roots();
    let roots = h.rational_roots().unwrap_or_default();
    let mut rational = Vec::new();
    for r in &roots {
        let rv = GaussianRational::real(r.clone());
        let mut vals = vec![GaussianRational::zero(); k];
        vals[last] = rv.clone();
        for i in 0..last {
            // x_i = x_i - (polys[i]) evaluated with x_i = 0
            let mut pt = vec![GaussianRational::zero(); k];
            pt[last] = rv.clone();
            vals[i] = -polys[i].evaluate(&pt)?;
        }
        let leaf = family.leaf_at(&vals)?;
        let verified = verify_leaf(model, &leaf, p)?.passed();
        rational.push(LeafWitness {
            params: vals,
            leaf,
            verified,
        });
    }
    let irrational = h
        .isolate_real_roots()
        .into_iter()
        .filter(|(a, b)| !roots.iter().any(|r| r > a && r <= b))
        .collect();
    Ok(MultiLeafReport {
        count,
        rational,
        irrational,
    })
}

/// One rational solution of `eqs` in the variables `unknown`, found by
/// lexicographic elimination and rational roots of the eliminants. Gives
/// `None` when there is none or when the system is not zero-dimensional in
/// the unknowns.
pub fn rational_solution(
    ctx: &Arc<VarContext>,
    eqs: &[Polynomial],
    unknown: &[usize],
    budget: &Budget,
) -> Result<Option<Vec<(usize, GaussianRational)>>> {
    let eqs: Vec<Polynomial> = eqs.iter().filter(|e| !e.is_zero()).cloned().collect();
    if eqs.iter().any(|e| e.is_constant()) {
        return Ok(None);
    }
    if unknown.is_empty() {
        return Ok(eqs.is_empty().then(Vec::new));
    }
    if eqs.is_empty() {
        return Ok(None);
    }
    let gb = Ideal::new(ctx, eqs.clone())?.groebner_basis(&TermOrder::Lex, budget)?;
    if gb.is_unit() {
        return Ok(None);
    }
    let polys = gb.polys();
    let Some((v, uni)) = unknown.iter().rev().find_map(|&v| {
        polys
            .iter()
            .find(|p| p.terms().iter().all(|(m, _)| m.support().all(|u| u == v)))
            .map(|p| (v, p))
    }) else {
        return Ok(None);
    };
    let roots: Vec<GaussianRational> = if uni.total_degree() == Some(1) {
        // linear: exact root whatever the coefficients
        let a = uni.coefficient(&Monomial::var(ctx.len(), v, 1));
        let b = uni.coefficient(&Monomial::one(ctx.len()));
        vec![&(-b) / &a]
    } else {
        match UniPoly::from_polynomial(uni, v) {
            Some(u) => u.rational_roots().unwrap_or_default().into_iter().map(GaussianRational::real).collect(),
            None => Vec::new(),
        }
    };
    for val in roots {
        let sub: Vec<Polynomial> = polys.iter().map(|p| p.substitute_values(&[(v, val.clone())])).collect();
        let rest: Vec<usize> = unknown.iter().copied().filter(|&u| u != v).collect();
        if let Some(mut sol) = rational_solution(ctx, &sub, &rest, budget)? {
            sol.push((v, val));
            return Ok(Some(sol));
        }
    }
    Ok(None)
}

/// Random rational parameter values satisfying the family's constraints:
/// all but the last `#constraints` parameters are drawn at random and the
/// rest are solved for.
pub fn sample_family_params<R: Rng>(family: &LeafFamily, rng: &mut R, budget: &Budget) -> Result<Option<Vec<GaussianRational>>> {
    let ctx = family.context();
    let k = family.params().len();
    let solved = family.constraints().len().min(k);
    let idx: Vec<usize> = family.params().iter().map(|p| ctx.extra_index(p).expect("own parameter")).collect();
    for _ in 0..400 {
        let free: Vec<(usize, GaussianRational)> = idx[..k - solved]
            .iter()
            .map(|&i| (i, GaussianRational::real(small_rational(rng, 13))))
            .collect();
        let eqs: Vec<Polynomial> = family.constraints().iter().map(|c| c.substitute_values(&free)).collect();
        if let Some(sol) = rational_solution(ctx, &eqs, &idx[k - solved..], budget)? {
            let mut vals = vec![GaussianRational::zero(); k];
            for (i, v) in free.into_iter().chain(sol) {
                vals[idx.iter().position(|&j| j == i).expect("parameter")] = v;
            }
            return Ok(Some(vals));
        }
    }
    Ok(None)
}

/// A rational point of the leaf: `dim` coordinates are drawn at random and
/// the others solved for.
pub fn sample_leaf_point<R: Rng>(leaf: &Ideal, dim: usize, rng: &mut R, budget: &Budget) -> Result<Option<Vec<GaussianRational>>> {
    let ctx = leaf.context();
    let n = ctx.len();
    for set in subsets(n, dim) {
        for _ in 0..8 {
            let free: Vec<(usize, GaussianRational)> = set
                .iter()
                .map(|&i| (i, GaussianRational::new(small_rational(rng, 6), small_rational(rng, 6))))
                .collect();
            let eqs: Vec<Polynomial> = leaf.generators().iter().map(|g| g.substitute_values(&free)).collect();
            let rest: Vec<usize> = (0..n).filter(|i| !set.contains(i)).collect();
            if let Some(sol) = rational_solution(ctx, &eqs, &rest, budget)? {
                let mut p = vec![GaussianRational::zero(); n];
                for (i, v) in free.into_iter().chain(sol) {
                    p[i] = v;
                }
                return Ok(Some(p));
            }
        }
    }
    Ok(None)
}

/// `count` reproducible `(parameters, point)` samples for
/// [`check_levi_foliation`].
pub fn sample_leaves(
    model: &LeviFlatModel,
    family: &LeafFamily,
    count: usize,
    seed: u64,
) -> Result<Vec<(Vec<GaussianRational>, Vec<GaussianRational>)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = model.budget();
    let mut out = Vec::new();
    for _ in 0..count * 20 {
        if out.len() == count {
            break;
        }
        let Some(params) = sample_family_params(family, &mut rng, b)? else {
            return Err(Error::Degenerate("no rational parameter values found".into()));
        };
        let leaf = family.leaf_at(&params)?;
        if let Some(p) = sample_leaf_point(&leaf, model.levi_dim(), &mut rng, b)? {
            // the leaf and CR comparison only makes sense at regular points
            if model.contains_point(&p)? && cr_tangent(model, &p)?.regular {
                out.push((params, p));
            }
        }
    }
    if out.len() < count {
        return Err(Error::Degenerate("could not find rational points on the leaves".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(v: &[i64]) -> Vec<GaussianRational> {
        v.iter().map(|&x| GaussianRational::from(x)).collect()
    }

    fn ex1() -> LeviFlatModel {
        LeviFlatModel::from_equations(&VarContext::zw(4), &["~z3*z2 - ~z2*z3"], &["z4"], 2).unwrap()
    }

    #[test]
    fn cr_dimension_example_one() {
        let m = ex1();
        let r = cr_tangent(&m, &pt(&[0, 1, 1, 0])).unwrap();
        assert_eq!(r.cr_dimension, 2);
        assert_eq!(r.real_rank, 3);
        assert!(r.regular);
        assert!(!cr_tangent(&m, &pt(&[1, 0, 0, 0])).unwrap().regular);
        assert!(matches!(cr_tangent(&m, &pt(&[0, 0, 0, 1])), Err(Error::PointNotOnVariety(_))));
    }

    #[test]
    fn trivial_model_cr_dimension() {
        let ctx = VarContext::zw(3);
        let m = LeviFlatModel::from_equations(&ctx, &["(z2 - ~z2)*(-1/2*i)"], &["z3"], 1).unwrap();
        let r = cr_tangent(&m, &pt(&[1, 0, 0])).unwrap();
        assert_eq!(r.cr_dimension, 1);
        assert!(r.regular);
    }

    #[test]
    fn levi_check_example_one() {
        let m = ex1();
        let fam = LeafFamily::new(&m.z_context(), &["c"], &["z3 - c*z2", "z4"], &[]).unwrap();
        let samples: Vec<_> = [(0, 1), (1, 1), (-2, 1), (1, 3)]
            .iter()
            .map(|&(n, d)| {
                let c = GaussianRational::from_ratio(n, d);
                (vec![c.clone()], vec![GaussianRational::from(7), GaussianRational::from(1), c, GaussianRational::from(0)])
            })
            .collect();
        let r = check_levi_foliation(&m, &fam, &samples).unwrap();
        assert!(r.passed(), "{:?}", r.samples);

        let i = GaussianRational::i();
        let bad = check_levi_foliation(&m, &fam, &[(vec![i.clone()], vec![pt(&[0])[0].clone(), pt(&[1])[0].clone(), i, pt(&[0])[0].clone()])])
            .unwrap();
        assert!(!bad.passed());
    }

    #[test]
    fn unique_leaf() {
        let m = ex1();
        let fam = LeafFamily::new(&m.z_context(), &["c"], &["z3 - c*z2", "z4"], &[]).unwrap();
        let r = multi_leaf_detector(&m, &fam, &pt(&[0, 1, 5, 0])).unwrap();
        assert_eq!(r.count, 1);
        assert_eq!(r.rational[0].params, pt(&[5]));
        assert!(r.rational[0].verified);
        // the z1-axis lies on every leaf
        assert!(matches!(multi_leaf_detector(&m, &fam, &pt(&[1, 0, 0, 0])), Err(Error::Degenerate(_))));
    }

    #[test]
    fn sampled_leaves_pass() {
        let m = ex1();
        let fam = LeafFamily::new(&m.z_context(), &["c"], &["z3 - c*z2", "z4"], &[]).unwrap();
        let s = sample_leaves(&m, &fam, 5, 3).unwrap();
        assert_eq!(s, sample_leaves(&m, &fam, 5, 3).unwrap());
        assert!(check_levi_foliation(&m, &fam, &s).unwrap().passed());
    }

    #[test]
    fn circle_parameters() {
        let zc = VarContext::z_only(2);
        let fam = LeafFamily::new(&zc, &["x", "y"], &["z1 - x*z2"], &["x^2 + y^2 - 1"]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let v = sample_family_params(&fam, &mut rng, &Budget::default()).unwrap().unwrap();
        assert!(fam.constraints_hold(&v).unwrap());
    }
}
