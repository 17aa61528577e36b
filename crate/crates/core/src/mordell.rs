//! Sections above the lattice layer: intersection with the zero section, the height
//! pairing, torsion orders, 2-torsion and the Néron–Severi discriminant identity.

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::algebra::{Field, RatFunc, P9};
use crate::error::{Error, Result};
use crate::lattice::{contribution, trivial_lattice};
use crate::model::{add_points, negate, ModelMap, SurfacePoint, WeierstrassModel};
use crate::tate::{classify_all, component_of_section, FiberConfiguration};

/// Euler characteristic of the structure sheaf of a K3 surface.
pub const CHI: i64 = 2;
/// Picard number of the supersingular K3 surface.
pub const RHO: u32 = 22;
/// Artin invariant.
pub const SIGMA: u32 = 1;
/// `disc NS = −p^{2σ}` with `p = 3`.
pub const NS_DISC: i64 = -9;

/// A model together with its classified fibers.
#[derive(Clone, Debug)]
pub struct HeightContext {
    pub model: WeierstrassModel,
    pub config: FiberConfiguration,
}

impl HeightContext {
    pub fn new(model: WeierstrassModel) -> Result<HeightContext> {
        let config = classify_all(&model)?;
        Ok(HeightContext { model, config })
    }

    fn check(&self, p: &SurfacePoint) -> Result<()> {
        if crate::model::is_on_curve(&self.model, p) {
            Ok(())
        } else {
            Err(Error::NotOnCurve)
        }
    }
}

/// `P·O`: half the pole order of `x` summed over all places, on the chart at each place.
/// At ∞ the chart is `x′ = s⁴x`.
pub fn intersect_with_zero(ctx: &HeightContext, p: &SurfacePoint) -> Result<i64> {
    ctx.check(p)?;
    let Some((x, _)) = p.coords() else {
        return Err(Error::Inconsistent("P·O is undefined for P = O".into()));
    };
    Ok(pole_half(x))
}

fn pole_half(x: &RatFunc) -> i64 {
    let (dn, dd) = (x.num().deg(), x.den().deg());
    // a pole of x at a finite place of degree f and order 2e contributes f·e
    let finite = (dd + 1) / 2;
    let v_inf = 4 + dd - dn;
    let infinite = if v_inf < 0 { (-v_inf + 1) / 2 } else { 0 };
    finite + infinite
}

fn correction(ctx: &HeightContext, p: &SurfacePoint, q: &SurfacePoint) -> Result<Rational64> {
    let mut sum = Rational64::zero();
    for f in &ctx.config.fibers {
        let Some(label) = f.lattice_label() else { continue };
        let i = component_of_section(p, f)?;
        let j = if p == q { i } else { component_of_section(q, f)? };
        sum += contribution(label, i, j)?;
    }
    Ok(sum)
}

/// `h(P) = 2χ + 2P·O − Σ contr_ν(P, P)`.
pub fn height(ctx: &HeightContext, p: &SurfacePoint) -> Result<Rational64> {
    if p.is_zero() {
        return Ok(Rational64::zero());
    }
    let po = intersect_with_zero(ctx, p)?;
    Ok(Rational64::from_integer(2 * CHI + 2 * po) - correction(ctx, p, p)?)
}

/// `⟨P, Q⟩ = χ + P·O + Q·O − P·Q − Σ contr_ν(P, Q)`, with `P·Q = (P ⊖ Q)·O`
/// (translation by a section is an automorphism of the surface).
pub fn height_pairing(ctx: &HeightContext, p: &SurfacePoint, q: &SurfacePoint) -> Result<Rational64> {
    if p.is_zero() || q.is_zero() {
        return Ok(Rational64::zero());
    }
    if p == q {
        return height(ctx, p);
    }
    let po = intersect_with_zero(ctx, p)?;
    let qo = intersect_with_zero(ctx, q)?;
    let diff = add_points(&ctx.model, p, &negate(q))?;
    let pq = if diff.is_zero() { -2 } else { intersect_with_zero(ctx, &diff)? };
    Ok(Rational64::from_integer(CHI + po + qo - pq) - correction(ctx, p, q)?)
}

/// Gram matrix of the height pairing on a list of sections.
pub fn height_gram(ctx: &HeightContext, sections: &[SurfacePoint]) -> Result<Vec<Vec<Rational64>>> {
    let n = sections.len();
    let mut g = vec![vec![Rational64::zero(); n]; n];
    for a in 0..n {
        for b in a..n {
            let v = height_pairing(ctx, &sections[a], &sections[b])?;
            g[a][b] = v;
            g[b][a] = v;
        }
    }
    Ok(g)
}

/// Least `n ≤ bound` with `nP = O`, or `None`.
pub fn torsion_order(ctx: &HeightContext, p: &SurfacePoint, bound: u32) -> Result<Option<u32>> {
    ctx.check(p)?;
    let mut acc = p.clone();
    for n in 1..=bound {
        if acc.is_zero() {
            return Ok(Some(n));
        }
        acc = add_points(&ctx.model, &acc, p)?;
    }
    Ok(None)
}

/// Sections `(x, y)` with `x` a polynomial of degree at most `max_deg` (all of them, one
/// sign of `y` each), in the order of the coefficient enumeration. Sections with
/// `P·O = 0` have `deg x ≤ 4`.
pub fn search_polynomial_sections(model: &WeierstrassModel, max_deg: usize) -> Vec<SurfacePoint> {
    let elems = crate::algebra::FieldKind::F9.elements();
    let mut out = Vec::new();
    let mut digits = vec![0usize; max_deg + 1];
    loop {
        let x = P9::from_coeffs(digits.iter().map(|&k| elems[k]).collect());
        let xr: RatFunc = x.clone().into();
        let rhs = model.rhs(&xr);
        if let Some(r) = rhs.as_poly() {
            if !r.is_zero() {
                if let Some(y) = r.sqrt() {
                    out.push(SurfacePoint::from_polys(x, y));
                }
            }
        }
        // next coefficient vector
        let mut k = 0;
        loop {
            if k == digits.len() {
                return out;
            }
            digits[k] += 1;
            if digits[k] < elems.len() {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

/// All sections `(x₀(t), 0)`.
pub fn find_two_torsion(model: &WeierstrassModel) -> Vec<SurfacePoint> {
    crate::model::cubic_polynomial_roots(model).into_iter().map(|x| SurfacePoint::from_polys(x, P9::zero())).collect()
}

/// Sections `Q` with polynomial coordinates and `2Q = T`, for a 2-torsion section `T`.
///
/// With `T` moved to the origin the curve is `y² = x(x² + a₂x + a₄)` and
/// `x(2Q) = (x² − a₄)²/(4y²)`, so `x(Q)² = a₄`.
pub fn halve_two_torsion(model: &WeierstrassModel, t: &SurfacePoint) -> Result<Vec<SurfacePoint>> {
    let Some((x0, y0)) = t.coords() else {
        return Err(Error::Inconsistent("cannot halve O this way".into()));
    };
    if !y0.is_zero() {
        return Err(Error::Inconsistent("the section to halve is not 2-torsion".into()));
    }
    let shift = ModelMap::shift(x0.clone());
    let moved = model.to_curve().apply_map(&shift)?.to_polynomial_model()?;
    let mut out = Vec::new();
    let Some(r) = moved.a4.sqrt() else { return Ok(out) };
    for x in [r.clone(), -&r] {
        let xr: RatFunc = x.clone().into();
        let Some(y) = moved.rhs(&xr).as_poly().and_then(|p| p.sqrt()) else { continue };
        for y in [y.clone(), -&y] {
            let q = shift.inverse().map_point(&SurfacePoint::from_polys(x.clone(), y));
            if add_points(model, &q, &q)? == *t && !out.contains(&q) {
                out.push(q);
            }
        }
    }
    Ok(out)
}

/// Outcome of the discriminant identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscCheck {
    /// Signed discriminant of the trivial lattice.
    pub disc_trivial: i64,
    pub disc_mwl: String,
    pub torsion: u32,
    pub disc_ns: String,
    pub pass: bool,
}

/// `disc NS = (−1)^r · disc T · disc MWL / |tor|²`; passes iff it equals −9.
pub fn ns_disc_check(config: &FiberConfiguration, torsion: u32, mwl_gram: &[Vec<Rational64>]) -> Result<DiscCheck> {
    if torsion == 0 {
        return Err(Error::Inconsistent("torsion order must be positive".into()));
    }
    let (_, disc_t) = trivial_lattice(config);
    let rank = mwl_gram.len();
    let disc_mwl = rational_det(mwl_gram);
    let sign = if rank.is_multiple_of(2) { 1 } else { -1 };
    let tor2 = (torsion as i64) * (torsion as i64);
    let value = Rational64::from_integer(sign * disc_t) * disc_mwl / Rational64::from_integer(tor2);
    if !value.is_integer() {
        return Err(Error::Inconsistent(format!("disc NS = {value} is not an integer")));
    }
    Ok(DiscCheck {
        disc_trivial: disc_t,
        disc_mwl: disc_mwl.to_string(),
        torsion,
        disc_ns: value.to_string(),
        pass: value == Rational64::from_integer(NS_DISC),
    })
}

/// Determinant over the rationals by Gaussian elimination (1 for the empty matrix).
pub fn rational_det(m: &[Vec<Rational64>]) -> Rational64 {
    let n = m.len();
    let mut a: Vec<Vec<Rational64>> = m.to_vec();
    let mut det = Rational64::one();
    for k in 0..n {
        let Some(piv) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return Rational64::zero();
        };
        if piv != k {
            a.swap(piv, k);
            det = -det;
        }
        det *= a[k][k];
        for r in k + 1..n {
            let f = a[r][k] / a[k][k];
            let pivot_row = a[k].clone();
            for (x, p) in a[r][k..].iter_mut().zip(&pivot_row[k..]) {
                *x -= f * *p;
            }
        }
    }
    det
}

/// Leading principal minors are all positive.
pub fn is_positive_definite(m: &[Vec<Rational64>]) -> bool {
    (1..=m.len()).all(|k| {
        let minor: Vec<Vec<Rational64>> = m[..k].iter().map(|r| r[..k].to_vec()).collect();
        rational_det(&minor).is_positive()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    fn ctx(a2: &str, a4: &str, a6: &str) -> HeightContext {
        HeightContext::new(WeierstrassModel::new(
            parse_poly(a2).unwrap(),
            parse_poly(a4).unwrap(),
            parse_poly(a6).unwrap(),
        ))
        .unwrap()
    }

    fn pt(x: &str, y: &str) -> SurfacePoint {
        SurfacePoint::from_polys(parse_poly(x).unwrap(), parse_poly(y).unwrap())
    }

    #[test]
    fn fibration_five_heights() {
        let c = ctx("-t^3", "t^3", "0");
        let p = pt("1", "1");
        assert_eq!(intersect_with_zero(&c, &p).unwrap(), 0);
        assert_eq!(height(&c, &pt("0", "0")).unwrap(), Rational64::zero());
        let h = height(&c, &p).unwrap();
        assert_eq!(h, Rational64::new(3, 2));
        assert_eq!(torsion_order(&c, &p, 12).unwrap(), None);
        let d = ns_disc_check(&c.config, 2, &[vec![h]]).unwrap();
        assert!(d.pass, "{d:?}");
        // translating by the torsion section keeps the height
        let pt2 = add_points(&c.model, &p, &pt("0", "0")).unwrap();
        assert_eq!(height(&c, &pt2).unwrap(), h);
        assert_eq!(height(&c, &negate(&p)).unwrap(), h);
    }

    #[test]
    fn torsion_orders() {
        let c19 = ctx("t^4+1", "-t^2(t^2-1)", "t^4");
        assert_eq!(torsion_order(&c19, &pt("0", "t^2"), 12).unwrap(), Some(5));
        let c12 = ctx("1", "t^4", "t^8");
        assert_eq!(torsion_order(&c12, &pt("0", "t^4"), 12).unwrap(), Some(3));
        assert_eq!(height(&c12, &pt("0", "t^4")).unwrap(), Rational64::zero());
    }

    #[test]
    fn fibration_one_halving() {
        let c = ctx("2(t^3+1)", "t^6", "0");
        assert!(!crate::model::is_on_curve(&c.model, &pt("t^3", "0")));
        assert_eq!(find_two_torsion(&c.model), vec![pt("0", "0")]);
        let halves = halve_two_torsion(&c.model, &pt("0", "0")).unwrap();
        assert_eq!(halves.len(), 2);
        assert!(halves.contains(&pt("-t^3", "i*t^3")));
        for q in &halves {
            assert_eq!(torsion_order(&c, q, 12).unwrap(), Some(4));
            assert_eq!(height(&c, q).unwrap(), Rational64::zero());
        }
        let d = ns_disc_check(&c.config, 4, &[]).unwrap();
        assert_eq!(d.disc_trivial, -144);
        assert!(d.pass);
    }

    #[test]
    fn full_two_torsion() {
        let m = WeierstrassModel::new(P9::zero(), parse_poly("-t^2(t-1)^2(t+1)^2").unwrap(), P9::zero());
        let t = find_two_torsion(&m);
        assert_eq!(t.len(), 3);
        assert!(t.contains(&pt("t^3-t", "0")));
    }

    #[test]
    fn rational_determinants() {
        let r = |a, b| Rational64::new(a, b);
        let g = vec![vec![r(3, 2), r(1, 2)], vec![r(1, 2), r(3, 2)]];
        assert_eq!(rational_det(&g), r(2, 1));
        assert!(is_positive_definite(&g));
        assert!(!is_positive_definite(&[vec![r(-1, 1)]]));
    }
}
