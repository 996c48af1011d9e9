//! The built-in example pipelines behind `leviflat example`.

use leviflat::foliation::{
    restrict_foliation, tangent_to_leviflat, verify_first_integral, verify_level_set_containment, web_from_family,
};
use leviflat::levicheck::{check_levi_foliation, cr_tangent, multi_leaf_detector, sample_leaves};
use leviflat::model::ModelFile;
use leviflat::segre::{classify_point, degenerate_locus, verify_leaf, SegreClass};
use leviflat::{parse_poly, print_poly, Dimension, GaussianRational, Ideal, Result};

type Checks = Vec<(String, bool)>;

fn pt(v: &[(i64, i64)]) -> Vec<GaussianRational> {
    v.iter().map(|&(n, d)| GaussianRational::from_ratio(n, d)).collect()
}

fn ideal_is(i: &Ideal, gens: &[&str], mf: &ModelFile) -> Result<bool> {
    let zc = mf.model.z_context();
    let want = Ideal::new(&zc, gens.iter().map(|s| parse_poly(s, &zc)).collect::<std::result::Result<_, _>>()?)?;
    i.same_ideal(&want, mf.model.budget())
}

pub fn run(name: &str, mf: &ModelFile) -> Result<Checks> {
    let m = &mf.model;
    let b = m.budget();
    let mut c = Checks::new();
    let icomp = m.intrinsic_complexification()?;
    c.push(("icomp_dimension".into(), m.icomp_dimension()? == Dimension::Dim(m.levi_dim() + 1)));
    let sd = degenerate_locus(m)?;
    c.push(("sd_codim_at_least_2".into(), sd.codim_ok));
    let (incl, strict) = m.mirror_sum_inclusion()?;
    c.push(("mirror_sum_strict".into(), incl && strict));

    match name.trim_end_matches(".lf") {
        "ex1" => {
            let g = &m.generators()[0];
            c.push(("complexified_generator".into(), print_poly(&g.complexify()) == "w3*z2-w2*z3"));
            c.push(("icomp_is_z4".into(), ideal_is(icomp, &["z4"], mf)?));
            c.push(("sd_is_z1_axis".into(), ideal_is(&sd.ideal, &["z2", "z3", "z4"], mf)?));
            let f = mf.foliation.as_ref().expect("ex1 has a foliation");
            c.push(("foliation_integrable".into(), f.is_integrable()));
            let sing = f.singular_locus(b)?;
            c.push(("singular_locus".into(), ideal_is(&sing.ideal, &["z2", "z3"], mf)? && sing.codim == Some(2)));
            c.push(("tangent".into(), tangent_to_leviflat(f, m)?.tangent));
            let (num, den) = mf.first_integral.as_ref().expect("ex1 has a first integral");
            let fi = verify_first_integral(num, den, f, icomp, b)?;
            c.push(("first_integral".into(), fi.is_first_integral && !fi.constant));
            let s = mf.level_curve.as_ref().expect("ex1 has a level curve");
            c.push(("level_set".into(), verify_level_set_containment(m, num, den, s)?));
            let p = pt(&[(0, 1), (1, 1), (1, 1), (0, 1)]);
            c.push(("ordinary_point".into(), classify_point(m, &p)? == (SegreClass::Ordinary, 1)));
            c.push(("cr_dimension".into(), cr_tangent(m, &p)?.cr_dimension == 2));
            let h = parse_poly("z1 - z2 - z3", &m.z_context())?;
            c.push(("generic_restriction".into(), restrict_foliation(f, &h, b)?.generic));
        }
        "ex2" => {
            c.push(("icomp_is_z4".into(), ideal_is(icomp, &["z4"], mf)?));
            let fam = mf.family.as_ref().expect("ex2 has a family");
            for (n, d) in [(0, 1), (1, 1), (-2, 1), (1, 3)] {
                let cv = GaussianRational::from_ratio(n, d);
                let leaf = fam.leaf_at(&[cv.clone()])?;
                let z1 = -(&cv + &(&(&cv * &cv) * &GaussianRational::from(2)));
                let p = vec![z1, GaussianRational::from(1), GaussianRational::from(2), GaussianRational::from(0)];
                c.push((format!("leaf_c={cv}"), verify_leaf(m, &leaf, &p)?.passed()));
            }
            let web = web_from_family(&fam.leaf_equations()[0], &fam.params()[0])?;
            c.push(("web_order_2".into(), web.order == 2));
            let ml = multi_leaf_detector(m, fam, &pt(&[(-2, 1), (1, 1), (1, 1), (0, 1)]))?;
            c.push(("two_leaves".into(), ml.count == 2 && ml.rational.iter().all(|w| w.verified)));
        }
        _ => {
            let fam = mf.family.as_ref().expect("ex3 has a family");
            let p = pt(&[(3, 5), (1, 1), (0, 1), (0, 1)]);
            for y in [(4, 5), (-4, 5)] {
                let leaf = fam.leaf_at(&pt(&[(3, 5), y]))?;
                c.push((format!("leaf_y={}/{}", y.0, y.1), verify_leaf(m, &leaf, &p)?.passed()));
            }
            let ml = multi_leaf_detector(m, fam, &p)?;
            c.push(("at_least_two_leaves".into(), ml.count >= 2));
        }
    }
    if let Some(fam) = &mf.family {
        let samples = sample_leaves(m, fam, 3, 0)?;
        c.push(("levi_family_samples".into(), check_levi_foliation(m, fam, &samples)?.passed()));
    }
    Ok(c)
}
