//! Real-analytic polynomial data on ℂᴺ: hermitian polynomials, mirrors,
//! complexification and the intrinsic complexification of a Levi-flat model.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use once_cell::sync::OnceCell;

use crate::context::{Block, VarContext};
use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::groebner::Budget;
use crate::ideal::{Dimension, Ideal};
use crate::parser::{parse_poly, print_poly_with};
use crate::poly::Polynomial;
use crate::segre::DegenerateLocus;

/// A polynomial in `z` and `z̄`, stored with `w` standing for `z̄`.
#[derive(Clone, PartialEq, Eq)]
pub struct HermitianPoly {
    body: Polynomial,
    mirrored: bool,
}

impl HermitianPoly {
    pub fn new(body: Polynomial) -> Result<Self> {
        if !body.context().has_w() {
            return Err(Error::InvalidInput(
                "hermitian polynomials need a context with conjugate variables".into(),
            ));
        }
        Ok(HermitianPoly {
            body,
            mirrored: false,
        })
    }

    /// Parses an expression where `~zk` denotes the conjugate of `zk`.
    pub fn parse(src: &str, ctx: &Arc<VarContext>) -> Result<Self> {
        HermitianPoly::new(parse_poly(src, ctx)?)
    }

    pub fn body(&self) -> &Polynomial {
        &self.body
    }

    pub fn context(&self) -> &Arc<VarContext> {
        self.body.context()
    }

    /// Set on mirror images (functions on the conjugate space).
    pub fn is_mirrored(&self) -> bool {
        self.mirrored
    }

    /// `a_{μν} = conj(a_{νμ})` for all coefficients.
    pub fn is_real(&self) -> bool {
        conjugate_function(&self.body) == self.body
    }

    /// `i` times a real polynomial.
    pub fn is_imaginary(&self) -> bool {
        conjugate_function(&self.body) == -&self.body
    }

    /// The pointwise complex conjugate.
    pub fn conjugate(&self) -> HermitianPoly {
        HermitianPoly {
            body: conjugate_function(&self.body),
            mirrored: self.mirrored,
        }
    }

    /// `(p + p̄) / 2`.
    pub fn real_part(&self) -> HermitianPoly {
        let half = GaussianRational::from_ratio(1, 2);
        HermitianPoly {
            body: (&self.body + &self.conjugate().body).scale(&half),
            mirrored: self.mirrored,
        }
    }

    /// `(p - p̄) / 2i`.
    pub fn imag_part(&self) -> HermitianPoly {
        let f = GaussianRational::from_ints(0, 2).inv().expect("nonzero");
        HermitianPoly {
            body: (&self.body - &self.conjugate().body).scale(&f),
            mirrored: self.mirrored,
        }
    }

    /// `φ*(w) = Σ conj(a_{μν}) w^μ w̄^ν`: conjugated coefficients, same
    /// exponent pattern, read on the conjugate space.
    pub fn mirror(&self) -> HermitianPoly {
        HermitianPoly {
            body: self.body.conj_coefficients(),
            mirrored: !self.mirrored,
        }
    }

    /// Formal substitution `z̄ ↦ w`.
    pub fn complexify(&self) -> Polynomial {
        self.body.clone()
    }

    /// Value at `z` (with `z̄` the conjugate point).
    pub fn evaluate_diagonal(&self, z: &[GaussianRational]) -> Result<GaussianRational> {
        let ctx = self.context();
        if z.len() != ctx.n_z() {
            return Err(Error::LengthMismatch {
                expected: ctx.n_z(),
                got: z.len(),
            });
        }
        self.body.evaluate(&diagonal_point(ctx, z)?)
    }

    /// Components by `(z-degree, z̄-degree)`, in increasing bidegree.
    pub fn bihomogeneous_components(&self) -> Vec<((u64, u64), HermitianPoly)> {
        let ctx = self.context();
        let mut groups: BTreeMap<(u64, u64), Vec<_>> = BTreeMap::new();
        for (m, c) in self.body.terms() {
            groups
                .entry(m.bidegree(ctx))
                .or_default()
                .push((m.clone(), c.clone()));
        }
        groups
            .into_iter()
            .map(|(bd, terms)| {
                (
                    bd,
                    HermitianPoly {
                        body: Polynomial::from_terms(ctx, terms),
                        mirrored: self.mirrored,
                    },
                )
            })
            .collect()
    }
}

impl fmt::Display for HermitianPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ctx = self.context().clone();
        let mirrored = self.mirrored;
        let s = print_poly_with(&self.body, |v| {
            let name = ctx.display_name(v);
            if !mirrored {
                return name;
            }
            let (tilde, base) = match name.strip_prefix('~') {
                Some(b) => ("~", b.to_string()),
                None => ("", name.clone()),
            };
            match ctx.block_of(v) {
                Block::Extra => name,
                _ => match base.strip_prefix('z') {
                    Some(rest) => format!("{tilde}w{rest}"),
                    None => format!("{tilde}w_{base}"),
                },
            }
        });
        f.write_str(&s)
    }
}

impl fmt::Debug for HermitianPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `(z, z̄)` as a point of the (z, w)-context; extras must be absent.
pub fn diagonal_point(ctx: &VarContext, z: &[GaussianRational]) -> Result<Vec<GaussianRational>> {
    if !ctx.extras().is_empty() {
        return Err(Error::InvalidInput("diagonal points need a context without parameters".into()));
    }
    let mut pt: Vec<GaussianRational> = z.to_vec();
    pt.extend(z.iter().map(|c| c.conj()));
    Ok(pt)
}

fn conjugate_function(p: &Polynomial) -> Polynomial {
    p.conj_coefficients().swap_blocks()
}

/// Mirror of a polynomial: conjugated coefficients with the z- and w-blocks
/// exchanged. A z-only polynomial `f` becomes `f*` in the w-block (the
/// context gains a w-block if it has none).
pub fn mirror_poly(p: &Polynomial) -> Polynomial {
    let q = if p.context().has_w() {
        p.clone()
    } else {
        p.embed(&p.context().with_w()).expect("same z-block")
    };
    q.conj_coefficients().swap_blocks()
}

/// Substitutes `w := z̄`, read back as a hermitian polynomial.
pub fn diagonal_restrict(p: &Polynomial) -> Result<HermitianPoly> {
    HermitianPoly::new(p.clone())
}

/// Real and imaginary parts of a holomorphic equation `f = 0`.
pub fn split_complex(f: &Polynomial) -> Result<(HermitianPoly, HermitianPoly)> {
    let body = if f.context().has_w() {
        f.clone()
    } else {
        f.embed(&f.context().with_w())?
    };
    let h = HermitianPoly::new(body)?;
    Ok((h.real_part(), h.imag_part()))
}

/// The ideal of `H^C` generated by the complexified generators.
pub fn complexify_variety(ctx: &Arc<VarContext>, gens: &[HermitianPoly]) -> Result<Ideal> {
    let polys = gens.iter().map(|g| g.complexify()).collect();
    Ideal::new(ctx, polys)
}

/// Complexification of a complex variety `X = V(I)` given by holomorphic
/// generators: the ideal of `X × X*`.
pub fn complexify_complex_ideal(ideal: &Ideal) -> Result<Ideal> {
    let zw = if ideal.context().has_w() {
        ideal.context().clone()
    } else {
        ideal.context().with_w()
    };
    let mut gens = Vec::new();
    for f in ideal.generators() {
        if f.uses_block(Block::W) {
            return Err(Error::InvalidInput("generator is not holomorphic".into()));
        }
        let (re, im) = split_complex(&f.embed(&zw)?)?;
        gens.push(re.complexify());
        gens.push(im.complexify());
    }
    Ideal::new(&zw, gens)
}

/// A real-algebraic Levi-flat model: the generating map plus cached
/// complexification, intrinsic complexification and degenerate locus.
#[derive(Clone, Debug)]
pub struct LeviFlatModel {
    ctx: Arc<VarContext>,
    generators: Vec<HermitianPoly>,
    levi_dim: usize,
    budget: Budget,
    complexified: OnceCell<Ideal>,
    icomp: OnceCell<Ideal>,
    degenerate: OnceCell<DegenerateLocus>,
}

impl LeviFlatModel {
    /// Generators must be real, or real up to a factor `i`.
    pub fn new(ctx: &Arc<VarContext>, generators: Vec<HermitianPoly>, levi_dim: usize) -> Result<Self> {
        if !ctx.has_w() || !ctx.extras().is_empty() {
            return Err(Error::InvalidInput(
                "a model needs a (z, w) context without parameters".into(),
            ));
        }
        let n = ctx.n_z();
        if n < 2 || levi_dim == 0 || levi_dim >= n {
            return Err(Error::InvalidInput(format!(
                "Levi dimension {levi_dim} out of range for ambient dimension {n}"
            )));
        }
        for (k, g) in generators.iter().enumerate() {
            ctx.check_same(g.context())?;
            if !g.is_real() && !g.is_imaginary() {
                return Err(Error::InvalidInput(format!("generator {} is not real: {g}", k + 1)));
            }
        }
        Ok(LeviFlatModel {
            ctx: ctx.clone(),
            generators,
            levi_dim,
            budget: Budget::default(),
            complexified: OnceCell::new(),
            icomp: OnceCell::new(),
            degenerate: OnceCell::new(),
        })
    }

    /// Builds a model from hermitian generators and holomorphic equations
    /// (each split into real and imaginary parts).
    pub fn from_equations(ctx: &Arc<VarContext>, hermitian: &[&str], complex: &[&str], levi_dim: usize) -> Result<Self> {
        let mut gens = Vec::new();
        for s in hermitian {
            gens.push(HermitianPoly::parse(s, ctx)?);
        }
        for s in complex {
            let f = parse_poly(s, ctx)?;
            if f.uses_block(Block::W) {
                return Err(Error::InvalidInput(format!("`{s}` is not holomorphic")));
            }
            let (re, im) = split_complex(&f)?;
            gens.push(re);
            gens.push(im);
        }
        LeviFlatModel::new(ctx, gens, levi_dim)
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    /// The (z, w) context.
    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    /// The holomorphic coordinates alone.
    pub fn z_context(&self) -> Arc<VarContext> {
        self.ctx.without_w()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ctx.n_z()
    }

    pub fn levi_dim(&self) -> usize {
        self.levi_dim
    }

    pub fn generators(&self) -> &[HermitianPoly] {
        &self.generators
    }

    pub fn complexified_generators(&self) -> Vec<Polynomial> {
        self.generators.iter().map(|g| g.complexify()).collect()
    }

    /// `I(H^C)`.
    pub fn complexified(&self) -> &Ideal {
        self.complexified.get_or_init(|| {
            complexify_variety(&self.ctx, &self.generators).expect("generators share the context")
        })
    }

    /// `I(H^ι)`: the w-block eliminated from `I(H^C)`, in the z-context.
    pub fn intrinsic_complexification(&self) -> Result<&Ideal> {
        self.icomp.get_or_try_init(|| {
            let elim = self.complexified().eliminate(Block::W, &self.budget)?;
            let zc = self.z_context();
            let gens = elim
                .generators()
                .iter()
                .map(|g| g.project(&zc).expect("w eliminated"))
                .collect();
            Ideal::new(&zc, gens)
        })
    }

    pub fn icomp_dimension(&self) -> Result<Dimension> {
        self.intrinsic_complexification()?.krull_dimension(&self.budget)
    }

    /// `I(H^ι)` with its mirror, as an ideal of the (z, w) context.
    pub fn icomp_with_mirror(&self) -> Result<Ideal> {
        let icomp = self.intrinsic_complexification()?;
        let mut gens = Vec::new();
        for g in icomp.generators() {
            let e = g.embed(&self.ctx)?;
            gens.push(mirror_poly(&e));
            gens.push(e);
        }
        Ideal::new(&self.ctx, gens)
    }

    /// Whether `I(H^ι) + I(H^ι)* ⊆ I(H^C)` holds, and whether it is strict.
    pub fn mirror_sum_inclusion(&self) -> Result<(bool, bool)> {
        let sum = self.icomp_with_mirror()?;
        let hc = self.complexified();
        let included = hc.contains_ideal(&sum, &self.budget)?;
        let strict = included && !sum.contains_ideal(hc, &self.budget)?;
        Ok((included, strict))
    }

    /// All generators vanish at `(p, p̄)`.
    pub fn contains_point(&self, p: &[GaussianRational]) -> Result<bool> {
        for g in &self.generators {
            if !g.evaluate_diagonal(p)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn on_icomp(&self, p: &[GaussianRational]) -> Result<bool> {
        for g in self.intrinsic_complexification()?.generators() {
            if !g.evaluate(p)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub(crate) fn degenerate_cache(&self) -> &OnceCell<DegenerateLocus> {
        &self.degenerate
    }
}

/// How a generator is compatible with the cone structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConeDegree {
    /// Bihomogeneous of bidegree `(d, d)`.
    Balanced(u64),
    /// Real or imaginary part of a homogeneous holomorphic polynomial of
    /// degree `d`: components `(d, 0)` and `(0, d)` only.
    Holomorphic(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeCertificate {
    pub degrees: Vec<ConeDegree>,
}

/// Checks that every generator is invariant (up to a nonvanishing factor)
/// under `z ↦ λz`, `λ ∈ ℂ*`.
pub fn cone_certificate(gens: &[HermitianPoly]) -> Result<ConeCertificate> {
    let mut degrees = Vec::new();
    for (k, g) in gens.iter().enumerate() {
        let bds: Vec<(u64, u64)> = g.bihomogeneous_components().into_iter().map(|(b, _)| b).collect();
        let reject = || {
            Error::InvalidInput(format!(
                "generator {} is not a cone equation: bidegrees {:?}",
                k + 1,
                bds
            ))
        };
        let Some(&(j0, k0)) = bds.first() else {
            return Err(reject());
        };
        if bds.iter().all(|&(j, k)| j == k && j == j0) {
            degrees.push(ConeDegree::Balanced(j0));
            continue;
        }
        let d = j0.max(k0);
        if d > 0 && bds.iter().all(|&b| b == (d, 0) || b == (0, d)) {
            degrees.push(ConeDegree::Holomorphic(d));
            continue;
        }
        return Err(reject());
    }
    Ok(ConeCertificate { degrees })
}

/// Certifies the cone condition and, unless `check_only`, builds the
/// affine-cone model.
pub fn projective_cone(
    ctx: &Arc<VarContext>,
    gens: Vec<HermitianPoly>,
    levi_dim: usize,
    check_only: bool,
) -> Result<(ConeCertificate, Option<LeviFlatModel>)> {
    let cert = cone_certificate(&gens)?;
    if check_only {
        return Ok((cert, None));
    }
    let model = LeviFlatModel::new(ctx, gens, levi_dim)?;
    Ok((cert, Some(model)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{random_point, random_poly};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn example_generator_complexifies() {
        let ctx = VarContext::zw(4);
        let h = HermitianPoly::parse("~z3*z2 - ~z2*z3", &ctx).unwrap();
        assert_eq!(h.complexify().to_string(), "w3*z2-w2*z3");
        assert!(h.is_imaginary());
        assert_eq!(h.bihomogeneous_components().len(), 1);
        assert_eq!(h.bihomogeneous_components()[0].0, (1, 1));
    }

    #[test]
    fn mirror_examples() {
        let ctx = VarContext::zw(2);
        let h = HermitianPoly::parse("i*z1*~z2", &ctx).unwrap();
        assert_eq!(h.mirror().to_string(), "-i*~w2*w1");
        assert_eq!(h.mirror().mirror(), h);
        let z1 = parse_poly("z1", &VarContext::z_only(2)).unwrap();
        assert_eq!(mirror_poly(&z1).to_string(), "w1");
    }

    #[test]
    fn diagonal_restriction() {
        let ctx = VarContext::zw(1);
        let d = diagonal_restrict(&parse_poly("z1 - w1", &ctx).unwrap()).unwrap();
        assert!(!d.is_real());
        assert!(d.is_imaginary());
        let n = diagonal_restrict(&parse_poly("z1*w1", &ctx).unwrap()).unwrap();
        assert!(n.is_real());
        assert_eq!(n.to_string(), "~z1*z1");
    }

    #[test]
    fn real_values_on_the_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let ctx = VarContext::zw(2);
        for _ in 0..50 {
            let p = HermitianPoly::new(random_poly(&mut rng, &ctx, 3, 4)).unwrap().real_part();
            assert!(p.is_real());
            let z = random_point(&mut rng, 2, 4);
            assert!(p.evaluate_diagonal(&z).unwrap().im().is_zero());
        }
    }

    #[test]
    fn cone_checks() {
        let ctx = VarContext::zw(2);
        let bad = HermitianPoly::parse("z1 + ~z1^2", &ctx).unwrap();
        assert!(cone_certificate(&[bad]).is_err());
        let (re, im) = split_complex(&parse_poly("z2", &ctx).unwrap()).unwrap();
        let c = cone_certificate(&[re, im]).unwrap();
        assert_eq!(c.degrees, vec![ConeDegree::Holomorphic(1); 2]);
    }

    #[test]
    fn complex_hyperplane_icomp() {
        let ctx = VarContext::zw(2);
        let m = LeviFlatModel::from_equations(&ctx, &[], &["z1"], 1).unwrap();
        let ic = m.intrinsic_complexification().unwrap();
        let z1 = Ideal::new(ic.context(), vec![parse_poly("z1", ic.context()).unwrap()]).unwrap();
        assert!(ic.same_ideal(&z1, m.budget()).unwrap());
    }
}
