//! Text format for Levi-flat models and their optional attachments.
//!
//! ```text
//! levi-flat N=4 n=2
//! names: z0 z1 z2 z3          (optional)
//!
//! [generators]
//! hermitian: <real or imaginary polynomial in z and ~z>
//! complex: <holomorphic polynomial, split into real and imaginary parts>
//!
//! [foliation]
//! form: z2*dz3 - z3*dz2      (or)   field: a1, a2, ..., aN
//!
//! [family]
//! params: c
//! leaf: z3 - c*z2
//! constraint: <polynomial in the parameters>
//!
//! [first-integral]
//! num: z3
//! den: z2
//!
//! [level-curve]
//! curve: <real polynomial in u and ~u>
//! ```
//!
//! `#` starts a comment. The full grammar is in `docs/grammar.bnf`.

use std::sync::Arc;

use crate::context::{Block, VarContext};
use crate::error::{Error, Result};
use crate::forms::{DifferentialForm, VectorField};
use crate::foliation::Foliation;
use crate::hermitian::{split_complex, HermitianPoly, LeviFlatModel};
use crate::levicheck::LeafFamily;
use crate::parser::parse_poly;
use crate::poly::Polynomial;

pub const FIXTURES: &[(&str, &str)] = &[
    ("ex1", include_str!("../fixtures/ex1.lf")),
    ("ex2", include_str!("../fixtures/ex2.lf")),
    ("ex3-circle", include_str!("../fixtures/ex3-circle.lf")),
];

/// Source text of a built-in fixture, by name with or without `.lf`.
pub fn fixture(name: &str) -> Option<&'static str> {
    let stem = name.strip_suffix(".lf").unwrap_or(name);
    FIXTURES.iter().find(|(n, _)| *n == stem).map(|(_, s)| *s)
}

#[derive(Clone, Debug)]
pub struct ModelFile {
    pub model: LeviFlatModel,
    pub foliation: Option<Foliation>,
    pub family: Option<LeafFamily>,
    /// `(num, den)` over the holomorphic coordinates.
    pub first_integral: Option<(Polynomial, Polynomial)>,
    /// Real curve in one variable `u` and its conjugate.
    pub level_curve: Option<HermitianPoly>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Section {
    Generators,
    Foliation,
    Family,
    FirstIntegral,
    LevelCurve,
}

impl Section {
    fn from_name(s: &str) -> Option<Section> {
        Some(match s {
            "generators" => Section::Generators,
            "foliation" => Section::Foliation,
            "family" => Section::Family,
            "first-integral" => Section::FirstIntegral,
            "level-curve" => Section::LevelCurve,
            _ => return None,
        })
    }
}

fn at(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::InvalidInput(format!("line {line}: {msg}"))
}

/// Context of one variable `u` with its conjugate, for level curves.
pub fn curve_context() -> Arc<VarContext> {
    VarContext::new(1, true, vec!["u".into()], Vec::new()).expect("valid context")
}

/// Parses a holomorphic 1-form written with differentials `d<name>`, e.g.
/// `z2*dz3 - z3*dz2`.
pub fn parse_form(src: &str, ctx: &Arc<VarContext>) -> Result<DifferentialForm> {
    if ctx.has_w() || !ctx.extras().is_empty() {
        return Err(Error::InvalidInput("forms are written over the holomorphic coordinates".into()));
    }
    let n = ctx.n_z();
    let dnames: Vec<String> = ctx.z_display().iter().map(|s| format!("d{s}")).collect();
    let dref: Vec<&str> = dnames.iter().map(|s| s.as_str()).collect();
    let big = ctx.with_extras(&dref)?;
    let p = parse_poly(src, &big)?;
    let mut coeffs = vec![Polynomial::zero(ctx); n];
    for (m, c) in p.terms() {
        let ds: Vec<usize> = (n..n + n).filter(|&i| m.get(i) > 0).collect();
        if ds.len() != 1 || m.get(ds[0]) != 1 {
            return Err(Error::InvalidInput(format!(
                "`{src}` is not linear in the differentials"
            )));
        }
        let mut base = m.clone();
        base.set(ds[0], 0);
        let t = Polynomial::from_terms(&big, [(base, c.clone())]).project(ctx).expect("z only");
        coeffs[ds[0] - n] = &coeffs[ds[0] - n] + &t;
    }
    DifferentialForm::one_form(ctx, coeffs)
}

/// Parses `a1, a2, ..., aN` as the components of a holomorphic vector field.
pub fn parse_field(src: &str, ctx: &Arc<VarContext>) -> Result<VectorField> {
    let comps = src
        .split(',')
        .map(|s| parse_poly(s.trim(), ctx))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    VectorField::new(ctx, comps)
}

fn parse_header(line: &str, ln: usize) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    if it.next() != Some("levi-flat") {
        return Err(at(ln, "expected header `levi-flat N=<ambient> n=<levi>`"));
    }
    let (mut big, mut small) = (None, None);
    for tok in it {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| at(ln, format!("malformed header field `{tok}`")))?;
        let v: usize = v.parse().map_err(|_| at(ln, format!("`{v}` is not a dimension")))?;
        match k {
            "N" => big = Some(v),
            "n" => small = Some(v),
            _ => return Err(at(ln, format!("unknown header field `{k}`"))),
        }
    }
    match (big, small) {
        (Some(b), Some(s)) => Ok((b, s)),
        _ => Err(at(ln, "header needs both N and n")),
    }
}

impl ModelFile {
    pub fn parse(src: &str) -> Result<ModelFile> {
        let mut lines = src
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .peekable();
        let (ln, head) = lines.next().ok_or_else(|| Error::InvalidInput("empty model file".into()))?;
        let (n_amb, levi) = parse_header(head, ln)?;
        let mut names = Vec::new();
        if let Some((ln, l)) = lines.peek().copied() {
            if let Some(rest) = l.strip_prefix("names:") {
                names = rest.split_whitespace().map(String::from).collect();
                if names.len() != n_amb {
                    return Err(at(ln, format!("expected {n_amb} names, got {}", names.len())));
                }
                lines.next();
            }
        }
        let ctx = VarContext::new(n_amb, true, names, Vec::new())?;
        let zc = ctx.without_w();

        let mut section: Option<Section> = None;
        let mut seen: Vec<Section> = Vec::new();
        let mut hermitian: Vec<HermitianPoly> = Vec::new();
        let mut forms = Vec::new();
        let mut fields = Vec::new();
        let mut params: Option<Vec<String>> = None;
        let mut leaf_src: Vec<(usize, String)> = Vec::new();
        let mut cons_src: Vec<(usize, String)> = Vec::new();
        let (mut num, mut den) = (None, None);
        let mut curve = None;

        for (ln, l) in lines {
            if let Some(name) = l.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                let s = Section::from_name(name.trim()).ok_or_else(|| at(ln, format!("unknown section `[{name}]`")))?;
                if seen.contains(&s) {
                    return Err(at(ln, format!("section `[{name}]` repeated")));
                }
                seen.push(s);
                section = Some(s);
                continue;
            }
            let (key, val) = l
                .split_once(':')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| at(ln, "expected `key: value`"))?;
            let poly = |c: &Arc<VarContext>| parse_poly(val, c).map_err(|e| at(ln, e));
            match (section, key) {
                (None, _) => return Err(at(ln, "entry outside of a section")),
                (Some(Section::Generators), "hermitian") => {
                    hermitian.push(HermitianPoly::new(poly(&ctx)?).map_err(|e| at(ln, e))?);
                }
                (Some(Section::Generators), "complex") => {
                    let f = poly(&zc)?;
                    let (re, im) = split_complex(&f).map_err(|e| at(ln, e))?;
                    hermitian.extend([re, im].into_iter().filter(|h| !h.body().is_zero()));
                }
                (Some(Section::Foliation), "form") => forms.push(parse_form(val, &zc).map_err(|e| at(ln, e))?),
                (Some(Section::Foliation), "field") => fields.push(parse_field(val, &zc).map_err(|e| at(ln, e))?),
                (Some(Section::Family), "params") => {
                    params = Some(val.split_whitespace().map(String::from).collect());
                }
                (Some(Section::Family), "leaf") => leaf_src.push((ln, val.to_string())),
                (Some(Section::Family), "constraint") => cons_src.push((ln, val.to_string())),
                (Some(Section::FirstIntegral), "num") => num = Some(poly(&zc)?),
                (Some(Section::FirstIntegral), "den") => den = Some(poly(&zc)?),
                (Some(Section::LevelCurve), "curve") => {
                    curve = Some(HermitianPoly::new(poly(&curve_context())?).map_err(|e| at(ln, e))?);
                }
                (Some(_), k) => return Err(at(ln, format!("unexpected key `{k}` in this section"))),
            }
        }

        if hermitian.is_empty() {
            return Err(Error::InvalidInput("model has no generators".into()));
        }
        let model = LeviFlatModel::new(&ctx, hermitian, levi)?;
        let foliation = match (forms.is_empty(), fields.is_empty()) {
            (true, true) => None,
            (false, true) => Some(Foliation::from_forms(&zc, forms)?),
            (true, false) => Some(Foliation::from_fields(&zc, fields)?),
            (false, false) => {
                return Err(Error::InvalidInput("a foliation is given by fields or by forms, not both".into()))
            }
        };
        let family = if seen.contains(&Section::Family) {
            let params = params.ok_or_else(|| Error::InvalidInput("family needs a `params:` line".into()))?;
            let pref: Vec<&str> = params.iter().map(|s| s.as_str()).collect();
            let fctx = zc.with_extras(&pref)?;
            let parse_all = |src: &[(usize, String)]| -> Result<Vec<Polynomial>> {
                src.iter().map(|(ln, s)| parse_poly(s, &fctx).map_err(|e| at(*ln, e))).collect()
            };
            let leaf = parse_all(&leaf_src)?;
            let cons = parse_all(&cons_src)?;
            if let Some(i) = cons.iter().position(|c| c.uses_block(Block::Z)) {
                return Err(at(cons_src[i].0, "constraints may only involve the parameters"));
            }
            Some(LeafFamily::from_parts(fctx, leaf, cons)?)
        } else {
            None
        };
        let first_integral = match (num, den) {
            (None, None) => None,
            (Some(n), Some(d)) => Some((n, d)),
            _ => return Err(Error::InvalidInput("first integral needs both `num:` and `den:`".into())),
        };
        if seen.contains(&Section::LevelCurve) && curve.is_none() {
            return Err(Error::InvalidInput("level-curve section needs a `curve:` line".into()));
        }
        Ok(ModelFile {
            model,
            foliation,
            family,
            first_integral,
            level_curve: curve,
        })
    }

    /// A built-in fixture name, or a path on disk.
    pub fn load(name_or_path: &str) -> Result<ModelFile> {
        if let Some(src) = fixture(name_or_path) {
            if !std::path::Path::new(name_or_path).exists() {
                return ModelFile::parse(src);
            }
        }
        let src = std::fs::read_to_string(name_or_path)
            .map_err(|e| Error::InvalidInput(format!("cannot read `{name_or_path}`: {e}")))?;
        ModelFile::parse(&src)
    }
}
