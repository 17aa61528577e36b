//! Weierstrass models `y² = x³ + a₂x² + a₄x + a₆` in characteristic 3.

mod io;
mod quartic;

use std::fmt;

use crate::algebra::{Field, FieldKind, Place, RatFunc, F9, P9};
use crate::error::{Error, Result};

pub use io::{format_model, format_point, parse_model, parse_point};
pub use quartic::{absorb_squares, quartic_to_weierstrass, Absorbed, CurveK, QuarticMaps, QuarticPoint};

/// Degree bounds `deg a₂ ≤ 4`, `deg a₄ ≤ 8`, `deg a₆ ≤ 12` for K3 models.
pub const K3_BOUNDS: [usize; 3] = [4, 8, 12];

/// A model over `k[t]`; `field` records where the printed coefficients live.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WeierstrassModel {
    pub a2: P9,
    pub a4: P9,
    pub a6: P9,
    pub field: FieldKind,
}

/// A section: the zero section or an affine point over `k(t)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum SurfacePoint {
    Zero,
    Affine { x: RatFunc, y: RatFunc },
}

/// The coordinate change `x = u²x′ + r`, `y = u³y′`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModelMap {
    pub u: RatFunc,
    pub r: RatFunc,
}

/// Outcome of [`validate_k3`].
#[derive(Clone, PartialEq, Eq, Debug, serde::Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict", content = "reason")]
pub enum K3Verdict {
    Elliptic,
    QuasiElliptic,
    RationalSurface,
    Invalid(String),
}

impl SurfacePoint {
    pub fn affine(x: RatFunc, y: RatFunc) -> SurfacePoint {
        SurfacePoint::Affine { x, y }
    }

    pub fn from_polys(x: P9, y: P9) -> SurfacePoint {
        SurfacePoint::Affine { x: x.into(), y: y.into() }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, SurfacePoint::Zero)
    }

    pub fn coords(&self) -> Option<(&RatFunc, &RatFunc)> {
        match self {
            SurfacePoint::Zero => None,
            SurfacePoint::Affine { x, y } => Some((x, y)),
        }
    }
}

impl fmt::Display for SurfacePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_point(self))
    }
}

impl ModelMap {
    pub fn identity() -> ModelMap {
        ModelMap { u: RatFunc::one(), r: RatFunc::zero() }
    }

    pub fn scaling(u: RatFunc) -> ModelMap {
        ModelMap { u, r: RatFunc::zero() }
    }

    pub fn shift(r: RatFunc) -> ModelMap {
        ModelMap { u: RatFunc::one(), r }
    }

    /// `self` followed by `next`: `x = u₁²(u₂²x″ + r₂) + r₁`.
    pub fn then(&self, next: &ModelMap) -> ModelMap {
        let u1sq = &self.u * &self.u;
        ModelMap { u: &self.u * &next.u, r: &(&u1sq * &next.r) + &self.r }
    }

    pub fn inverse(&self) -> ModelMap {
        let uinv = self.u.inv().expect("map with u = 0");
        let uinv2 = &uinv * &uinv;
        ModelMap { u: uinv, r: -(&uinv2 * &self.r) }
    }

    /// Image of a point of the source model in the target coordinates.
    pub fn map_point(&self, p: &SurfacePoint) -> SurfacePoint {
        match p {
            SurfacePoint::Zero => SurfacePoint::Zero,
            SurfacePoint::Affine { x, y } => {
                let u2 = &self.u * &self.u;
                let u3 = &u2 * &self.u;
                SurfacePoint::Affine { x: &(x - &self.r) / &u2, y: y / &u3 }
            }
        }
    }
}

impl fmt::Display for ModelMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u = {}, r = {}", self.u, self.r)
    }
}

impl WeierstrassModel {
    pub fn new(a2: P9, a4: P9, a6: P9) -> WeierstrassModel {
        let field = if a2.is_over_f3() && a4.is_over_f3() && a6.is_over_f3() { FieldKind::F3 } else { FieldKind::F9 };
        WeierstrassModel { a2, a4, a6, field }
    }

    pub fn coeffs(&self) -> [&P9; 3] {
        [&self.a2, &self.a4, &self.a6]
    }

    /// `x³ + a₂x² + a₄x + a₆` evaluated at a rational function.
    pub fn rhs(&self, x: &RatFunc) -> RatFunc {
        let a2: RatFunc = self.a2.clone().into();
        let a4: RatFunc = self.a4.clone().into();
        let a6: RatFunc = self.a6.clone().into();
        &(&(&(&(x + &a2) * x) + &a4) * x) + &a6
    }

    pub fn within_k3_bounds(&self) -> bool {
        self.coeffs().iter().zip(K3_BOUNDS).all(|(a, b)| a.deg() <= b as i64)
    }

    pub fn is_quasi_elliptic(&self) -> bool {
        discriminant(self).is_zero()
    }

    /// The coefficients as elements of `k(t)`.
    pub fn to_curve(&self) -> CurveK {
        CurveK { a2: self.a2.clone().into(), a4: self.a4.clone().into(), a6: self.a6.clone().into() }
    }
}

impl fmt::Display for WeierstrassModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 + ({})*x^2 + ({})*x + ({})", self.a2, self.a4, self.a6)
    }
}

/// Δ = −a₂³a₆ + a₂²a₄² − a₄³, the reduction mod 3 of the integral discriminant with
/// `a₁ = a₃ = 0` (checked against [`discriminant_via_b_invariants`] in the tests).
pub fn discriminant(m: &WeierstrassModel) -> P9 {
    let (a2, a4, a6) = (&m.a2, &m.a4, &m.a6);
    let a2sq = a2 * a2;
    let a4sq = a4 * a4;
    let t1 = &(&a2sq * a2) * a6;
    let t2 = &a2sq * &a4sq;
    let t3 = &a4sq * a4;
    &(&t2 - &t1) - &t3
}

/// Δ from the universal formulas over ℤ, with every integer reduced mod 3:
/// `b₂ = a₁² + 4a₂`, `b₄ = 2a₄ + a₁a₃`, `b₆ = a₃² + 4a₆`,
/// `b₈ = a₁²a₆ + 4a₂a₆ − a₁a₃a₄ + a₂a₃² − a₄²`,
/// `Δ = −b₂²b₈ − 8b₄³ − 27b₆² + 9b₂b₄b₆`.
pub fn discriminant_via_b_invariants<K: Field>(a1: &K, a2: &K, a3: &K, a4: &K, a6: &K) -> K {
    let n = |k: i64| K::from_int(k);
    let b2 = a1.clone() * a1.clone() + n(4) * a2.clone();
    let b4 = n(2) * a4.clone() + a1.clone() * a3.clone();
    let b6 = a3.clone() * a3.clone() + n(4) * a6.clone();
    let b8 = a1.clone() * a1.clone() * a6.clone() + n(4) * a2.clone() * a6.clone()
        - a1.clone() * a3.clone() * a4.clone()
        + a2.clone() * a3.clone() * a3.clone()
        - a4.clone() * a4.clone();
    -(b2.clone() * b2.clone() * b8) - n(8) * b4.clone() * b4.clone() * b4.clone() - n(27) * b6.clone() * b6.clone()
        + n(9) * b2 * b4 * b6
}

pub fn is_on_curve(m: &WeierstrassModel, p: &SurfacePoint) -> bool {
    m.to_curve().contains(p)
}

/// Chord-and-tangent addition over `k(t)`.
pub fn add_points(m: &WeierstrassModel, p: &SurfacePoint, q: &SurfacePoint) -> Result<SurfacePoint> {
    m.to_curve().add(p, q)
}

pub fn negate(p: &SurfacePoint) -> SurfacePoint {
    match p {
        SurfacePoint::Zero => SurfacePoint::Zero,
        SurfacePoint::Affine { x, y } => SurfacePoint::Affine { x: x.clone(), y: -y },
    }
}

/// `n·P` by double-and-add (`n` may be negative).
pub fn multiply_point(m: &WeierstrassModel, p: &SurfacePoint, n: i64) -> Result<SurfacePoint> {
    m.to_curve().multiply(p, n)
}

/// Transform the coefficients under `x = u²x′ + r`, `y = u³y′`; the result must be
/// polynomial within the K3 bounds.
pub fn apply_map(m: &WeierstrassModel, phi: &ModelMap) -> Result<WeierstrassModel> {
    let c = m.to_curve().apply_map(phi)?;
    let out = c.to_polynomial_model()?;
    if !out.within_k3_bounds() {
        return Err(Error::InvalidModel(format!("coefficients exceed the K3 degree bounds after {phi}")));
    }
    Ok(out)
}

/// `a_i′(s) = s^{2i} a_i(1/s)`: the chart at `t = ∞` in the local parameter `s = 1/t`.
///
/// Points transform by `x′ = s⁴x`, `y′ = s⁶y`.
pub fn model_at_infinity(m: &WeierstrassModel) -> Result<WeierstrassModel> {
    if !m.within_k3_bounds() {
        return Err(Error::InvalidModel("degree bounds violated".into()));
    }
    Ok(WeierstrassModel { a2: m.a2.reverse(4), a4: m.a4.reverse(8), a6: m.a6.reverse(12), field: m.field })
}

/// A section in the coordinates of [`model_at_infinity`], as functions of `s`.
pub fn point_at_infinity(p: &SurfacePoint) -> Result<SurfacePoint> {
    match p {
        SurfacePoint::Zero => Ok(SurfacePoint::Zero),
        SurfacePoint::Affine { x, y } => {
            let inv = RatFunc::var().inv().expect("t ≠ 0");
            let s = RatFunc::var();
            let x1 = x.compose(&inv)?;
            let y1 = y.compose(&inv)?;
            Ok(SurfacePoint::Affine { x: &x1 * &s.pow(4), y: &y1 * &s.pow(6) })
        }
    }
}

/// Classify a model as an elliptic K3, quasi-elliptic K3, rational surface, or invalid.
pub fn validate_k3(m: &WeierstrassModel) -> K3Verdict {
    if !m.within_k3_bounds() {
        return K3Verdict::Invalid("degree bounds deg a2 <= 4, deg a4 <= 8, deg a6 <= 12 violated".into());
    }
    let delta = discriminant(m);
    if delta.is_zero() {
        if !(m.a2.is_zero() && m.a4.is_zero()) {
            return K3Verdict::Invalid("zero discriminant with a2 or a4 nonzero is unsupported".into());
        }
        if crate::tate::is_cube(&m.a6) {
            return K3Verdict::Invalid("a6 is a cube: the generic fiber is not regular".into());
        }
        return K3Verdict::QuasiElliptic;
    }
    if delta.is_constant() {
        return K3Verdict::Invalid("no singular fiber".into());
    }
    let rational = m.coeffs().iter().zip([2, 4, 6]).all(|(a, i)| a.deg() <= i);
    if rational {
        return K3Verdict::RationalSurface;
    }
    if let Some(v) = crate::tate::non_minimal_place(m) {
        return K3Verdict::Invalid(format!("model is not minimal at {v}"));
    }
    K3Verdict::Elliptic
}

/// The places of ℙ¹ where the discriminant vanishes, with the remainder of Δ that
/// has no roots over F₉.
pub fn discriminant_places(m: &WeierstrassModel) -> Result<(Vec<(Place, usize)>, P9)> {
    let delta = discriminant(m);
    let (roots, rest) = crate::algebra::roots_with_multiplicity(&delta, FieldKind::F9)?;
    let mut places: Vec<(Place, usize)> = roots.into_iter().map(|(a, k)| (Place::point(a), k)).collect();
    let at_inf = 24 - delta.deg();
    if at_inf > 0 {
        places.push((Place::Infinity, at_inf as usize));
    }
    Ok((places, rest))
}

/// All polynomial roots `x₀(t)` of `x³ + a₂x² + a₄x + a₆`, in canonical order.
///
/// A root has degree at most `d = max(deg a₂, deg a₄/2, deg a₆/3)`, so it is fixed by
/// its values at `d + 1 ≤ 9` points of F₉. Every combination of pointwise roots is
/// interpolated and the candidates are verified exactly.
pub fn cubic_polynomial_roots(m: &WeierstrassModel) -> Vec<P9> {
    let bound =
        [m.a2.deg(), m.a4.deg().div_euclid(2), m.a6.deg().div_euclid(3)].into_iter().max().unwrap_or(0).max(0) as usize;
    let samples: Vec<F9> = F9::all().take(bound + 1).collect();
    if samples.len() < bound + 1 {
        return Vec::new();
    }
    let mut per_point: Vec<Vec<F9>> = Vec::new();
    for tau in &samples {
        let (b2, b4, b6) = (m.a2.eval(tau), m.a4.eval(tau), m.a6.eval(tau));
        let roots: Vec<F9> = F9::all().filter(|x| (((*x + b2) * *x + b4) * *x + b6).is_zero()).collect();
        if roots.is_empty() {
            return Vec::new();
        }
        per_point.push(roots);
    }
    let mut found: Vec<P9> = Vec::new();
    let mut idx = vec![0usize; samples.len()];
    loop {
        let values: Vec<F9> = idx.iter().zip(&per_point).map(|(k, r)| r[*k]).collect();
        let cand = interpolate(&samples, &values);
        let x: RatFunc = cand.clone().into();
        if m.rhs(&x).is_zero() && !found.contains(&cand) {
            found.push(cand);
        }
        // odometer over the per-point root choices
        let mut k = 0;
        loop {
            if k == idx.len() {
                found.sort_by_key(|a| (a.deg(), a.to_string()));
                return found;
            }
            idx[k] += 1;
            if idx[k] < per_point[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Lagrange interpolation over F₉ at distinct nodes.
pub fn interpolate(nodes: &[F9], values: &[F9]) -> P9 {
    let mut acc = P9::zero();
    for (j, (xj, yj)) in nodes.iter().zip(values).enumerate() {
        if yj.is_zero() {
            continue;
        }
        let mut basis = P9::constant(*yj);
        for (k, xk) in nodes.iter().enumerate() {
            if k != j {
                let lin = P9::from_coeffs(vec![-*xk, F9::ONE]);
                basis = (&basis * &lin).scale(&(*xj - *xk).inv().expect("distinct nodes"));
            }
        }
        acc = &acc + &basis;
    }
    acc
}

/// Constant scalars `c` with `c²` equal to a given element; used when matching models.
pub fn square_roots(a: F9) -> Vec<F9> {
    F9::all().filter(|r| *r * *r == a).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    fn model(a2: &str, a4: &str, a6: &str) -> WeierstrassModel {
        WeierstrassModel::new(parse_poly(a2).unwrap(), parse_poly(a4).unwrap(), parse_poly(a6).unwrap())
    }

    fn pt(x: &str, y: &str) -> SurfacePoint {
        SurfacePoint::from_polys(parse_poly(x).unwrap(), parse_poly(y).unwrap())
    }

    #[test]
    fn discriminant_examples() {
        let m1 = model("2(t^3+1)", "t^6", "0");
        let d = discriminant(&m1);
        let expected = parse_poly("t^12(1-t)^3").unwrap();
        assert!(d == expected || d == -&expected);
        assert!(discriminant(&model("0", "0", "t^10+t^2")).is_zero());
        assert!(discriminant(&model("1", "0", "0")).is_zero());
    }

    #[test]
    fn on_curve_examples() {
        let m41 = model("0", "0", "t^10+t^2");
        assert!(is_on_curve(&m41, &pt("t^2", "t(t^4-1)")));
        let m1 = model("2(t^3+1)", "t^6", "0");
        assert!(!is_on_curve(&m1, &pt("t^3", "0")));
        assert!(is_on_curve(&m1, &SurfacePoint::Zero));
    }

    #[test]
    fn two_torsion_doubles_to_zero() {
        let m2 = model("0", "-t^2(t-1)^2(t+1)^2", "0");
        let p = pt("0", "0");
        assert_eq!(add_points(&m2, &p, &p).unwrap(), SurfacePoint::Zero);
        assert_eq!(add_points(&m2, &p, &SurfacePoint::Zero).unwrap(), p);
    }

    #[test]
    fn quasi_elliptic_doubling_is_negation() {
        let m41 = model("0", "0", "t^10+t^2");
        let p = pt("t^2", "t(t^4-1)");
        assert_eq!(add_points(&m41, &p, &p).unwrap(), negate(&p));
    }

    #[test]
    fn map_examples() {
        let m1 = model("2(t^3+1)", "t^6", "0");
        assert_eq!(apply_map(&m1, &ModelMap::identity()).unwrap(), m1);
        let shifted = m1.to_curve().apply_map(&ModelMap::shift(RatFunc::one())).unwrap().to_polynomial_model().unwrap();
        assert!(shifted.a6.eval(&F9::ONE).is_zero());
    }

    #[test]
    fn infinity_chart() {
        let m5 = model("-t^3", "t^3", "0");
        let inf = model_at_infinity(&m5).unwrap();
        assert_eq!(inf.a2, parse_poly("-t").unwrap());
        assert_eq!(inf.a4, parse_poly("t^5").unwrap());
        assert_eq!(model_at_infinity(&inf).unwrap(), m5);
        let c = model("0", "0", "1");
        assert_eq!(model_at_infinity(&c).unwrap().a6, parse_poly("t^12").unwrap());
    }

    #[test]
    fn polynomial_two_torsion() {
        let m2 = model("0", "-t^2(t-1)^2(t+1)^2", "0");
        let roots = cubic_polynomial_roots(&m2);
        assert_eq!(roots.len(), 3);
        assert!(roots.contains(&P9::zero()));
        assert!(roots.contains(&parse_poly("t^3-t").unwrap()));
        assert_eq!(cubic_polynomial_roots(&model("2(t^3+1)", "t^6", "0")), vec![P9::zero()]);
    }

    #[test]
    fn discriminant_matches_b_invariants() {
        // Symbolic oracle: expand the universal formula in Z/3[a2, a4, a6] by evaluating
        // at every point of F9^3 (degree < 9 in each variable makes this conclusive).
        for a2 in F9::all() {
            for a4 in F9::all() {
                for a6 in F9::all() {
                    let m = WeierstrassModel::new(P9::constant(a2), P9::constant(a4), P9::constant(a6));
                    let oracle = discriminant_via_b_invariants(&F9::ZERO, &a2, &F9::ZERO, &a4, &a6);
                    assert_eq!(discriminant(&m).coeff(0), oracle);
                }
            }
        }
    }

    #[test]
    fn verdicts() {
        assert_eq!(validate_k3(&model("2(t^3+1)", "t^6", "0")), K3Verdict::Elliptic);
        assert_eq!(validate_k3(&model("0", "0", "t^10+t^2")), K3Verdict::QuasiElliptic);
        assert!(matches!(validate_k3(&model("0", "1", "0")), K3Verdict::Invalid(_)));
        assert_eq!(validate_k3(&model("t", "0", "t^3+1")), K3Verdict::RationalSurface);
    }
}
