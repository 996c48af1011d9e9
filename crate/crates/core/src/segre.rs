//! Segre varieties of a Levi-flat model and its Segre-degenerate locus.

use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use crate::context::{Block, VarContext};
use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::hermitian::{mirror_poly, LeviFlatModel};
use crate::ideal::{Dimension, Ideal};
use crate::poly::Polynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SegreClass {
    Ordinary,
    Degenerate,
}

impl std::fmt::Display for SegreClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SegreClass::Ordinary => "ordinary",
            SegreClass::Degenerate => "degenerate",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SegreResult {
    pub point: Vec<GaussianRational>,
    /// `I(H^ι) + ⟨φ^C(z, p̄)⟩` in the z-context.
    pub ideal: Ideal,
    pub dimension: Dimension,
    /// `dim H^ι - dim Σ_p`, the empty set counting as dimension -1.
    pub codim_in_icomp: i64,
    pub classification: SegreClass,
    /// `p ∈ Σ_p`, which happens exactly when `p ∈ H`.
    pub contains_point: bool,
}

fn require_on_icomp(model: &LeviFlatModel, p: &[GaussianRational]) -> Result<()> {
    if p.len() != model.ambient_dim() {
        return Err(Error::LengthMismatch {
            expected: model.ambient_dim(),
            got: p.len(),
        });
    }
    if !model.on_icomp(p)? {
        return Err(Error::PointNotOnVariety("the intrinsic complexification".into()));
    }
    Ok(())
}

/// `φ^C(z, p̄)` for each generator, in the z-context.
pub fn segre_equations(model: &LeviFlatModel, p: &[GaussianRational]) -> Vec<Polynomial> {
    let ctx = model.context();
    let zc = model.z_context();
    let values: Vec<(usize, GaussianRational)> =
        p.iter().enumerate().map(|(k, c)| (ctx.w_index(k), c.conj())).collect();
    model
        .complexified_generators()
        .iter()
        .map(|g| g.substitute_values(&values).project(&zc).expect("w substituted"))
        .collect()
}

pub fn segre_variety(model: &LeviFlatModel, p: &[GaussianRational]) -> Result<SegreResult> {
    require_on_icomp(model, p)?;
    let icomp = model.intrinsic_complexification()?;
    let ideal = icomp.with_generators(segre_equations(model, p))?;
    let b = model.budget();
    let dim_h = icomp.krull_dimension(b)?;
    let dimension = ideal.krull_dimension(b)?;
    let codim = dim_h.as_i64() - dimension.as_i64();
    let contains_point = ideal
        .generators()
        .iter()
        .map(|g| g.evaluate(p))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .all(|v| v.is_zero());
    Ok(SegreResult {
        point: p.to_vec(),
        ideal,
        dimension,
        codim_in_icomp: codim,
        classification: if codim == 0 {
            SegreClass::Degenerate
        } else {
            SegreClass::Ordinary
        },
        contains_point,
    })
}

pub fn classify_point(model: &LeviFlatModel, p: &[GaussianRational]) -> Result<(SegreClass, i64)> {
    let s = segre_variety(model, p)?;
    Ok((s.classification, s.codim_in_icomp))
}

/// The Segre-degenerate locus `S_d`.
#[derive(Clone, Debug)]
pub struct DegenerateLocus {
    /// `I(S_d)` in the z-context.
    pub ideal: Ideal,
    pub dimension: Dimension,
    /// `dim H^ι - dim S_d` (empty counts as -1).
    pub codim_in_icomp: i64,
    /// The codimension is at least two.
    pub codim_ok: bool,
}

/// `S_d = {p ∈ H^ι : φ^C(z, p̄) ∈ I(H^ι)}`. Each complexified generator is
/// reduced modulo `I(H^ι)` with the w-variables as coefficients; the mirrors
/// of the coefficient polynomials cut out `S_d` inside `H^ι`.
pub fn degenerate_locus(model: &LeviFlatModel) -> Result<&DegenerateLocus> {
    model.degenerate_cache().get_or_try_init(|| {
        let ctx = model.context();
        let zc = model.z_context();
        let b = model.budget();
        let icomp = model.intrinsic_complexification()?;
        let icomp_zw = icomp.embed(ctx)?;
        let zvars: Vec<usize> = ctx.indices_of(Block::Z).collect();
        let mut extra = Vec::new();
        for g in model.complexified_generators() {
            let nf = icomp_zw.normal_form(&g, b)?;
            for coeff in nf.collect_by(&zvars).into_values() {
                // coeff lives in the w-block; its mirror is a z-polynomial
                let m = mirror_poly(&coeff).project(&zc).expect("z-only after mirror");
                extra.push(m);
            }
        }
        let ideal = icomp.with_generators(extra)?;
        let dimension = ideal.krull_dimension(b)?;
        let dim_h = icomp.krull_dimension(b)?;
        let codim = dim_h.as_i64() - dimension.as_i64();
        Ok(DegenerateLocus {
            ideal,
            dimension,
            codim_in_icomp: codim,
            codim_ok: codim >= 2,
        })
    })
}

/// `q ∈ Σ_p ⟺ p ∈ Σ_q`, checked by exact evaluation.
pub fn segre_symmetry_check(model: &LeviFlatModel, p: &[GaussianRational], q: &[GaussianRational]) -> Result<bool> {
    require_on_icomp(model, p)?;
    require_on_icomp(model, q)?;
    let vanishes = |eqs: Vec<Polynomial>, at: &[GaussianRational]| -> Result<bool> {
        for e in eqs {
            if !e.evaluate(at)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let q_in_p = vanishes(segre_equations(model, p), q)?;
    let p_in_q = vanishes(segre_equations(model, q), p)?;
    Ok(q_in_p == p_in_q)
}

/// Outcome of the three leaf checks.
#[derive(Clone, Debug)]
pub struct LeafReport {
    /// The leaf lies in `H`: every complexified generator belongs to
    /// `I(L) + I(L)*`.
    pub in_levi_flat: bool,
    /// `L ⊆ Σ_p`: every generator of `I(Σ_p)` lies in `I(L)`.
    pub in_segre: bool,
    pub leaf_dimension: Dimension,
    pub expected_dimension: Dimension,
    /// A complexified generator with nonzero normal form, when (a) fails.
    pub witness: Option<Polynomial>,
}

impl LeafReport {
    pub fn dimension_ok(&self) -> bool {
        self.leaf_dimension == self.expected_dimension
    }

    pub fn passed(&self) -> bool {
        self.in_levi_flat && self.in_segre && self.dimension_ok()
    }
}

pub fn verify_leaf(model: &LeviFlatModel, leaf: &Ideal, p: &[GaussianRational]) -> Result<LeafReport> {
    let zc = model.z_context();
    zc.check_same(leaf.context())?;
    for g in leaf.generators() {
        if !g.evaluate(p)?.is_zero() {
            return Err(Error::PointNotOnVariety("the leaf".into()));
        }
    }
    let b = model.budget();
    let ctx = model.context();

    let mut both = Vec::new();
    for g in leaf.generators() {
        let e = g.embed(ctx)?;
        both.push(mirror_poly(&e));
        both.push(e);
    }
    let doubled = Ideal::new(ctx, both)?;
    let mut witness = None;
    for g in model.complexified_generators() {
        let nf = doubled.normal_form(&g, b)?;
        if !nf.is_zero() {
            witness = Some(nf);
            break;
        }
    }

    let in_segre = match segre_variety(model, p) {
        Ok(s) => leaf.contains_ideal(&s.ideal, b)?,
        Err(Error::PointNotOnVariety(_)) => false,
        Err(e) => return Err(e),
    };
    let leaf_dimension = leaf.krull_dimension(b)?;
    let expected_dimension = match model.icomp_dimension()? {
        Dimension::Dim(d) if d > 0 => Dimension::Dim(d - 1),
        _ => Dimension::Empty,
    };
    Ok(LeafReport {
        in_levi_flat: witness.is_none(),
        in_segre,
        leaf_dimension,
        expected_dimension,
        witness,
    })
}

/// Parses a point such as `0,1,1/2,i` or `(3/5, 1, 0, 0)`.
pub fn parse_point(src: &str, n: usize) -> Result<Vec<GaussianRational>> {
    let inner = src.trim().trim_start_matches('(').trim_end_matches(')');
    let ctx = VarContext::z_only(1);
    let mut out = Vec::new();
    for part in inner.split(',') {
        let p = crate::parser::parse_poly(part.trim(), &Arc::clone(&ctx))?;
        match p.constant_value() {
            Some(c) => out.push(c),
            None if p.is_zero() => out.push(GaussianRational::zero()),
            None => {
                return Err(Error::InvalidInput(format!("`{}` is not a constant", part.trim())));
            }
        }
    }
    if out.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: out.len(),
        });
    }
    Ok(out)
}
