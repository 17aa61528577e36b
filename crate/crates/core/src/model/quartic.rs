//! Curves with coefficients in a rational function field, and the conversion of
//! `y² = g(t)` (g cubic or quartic) to Weierstrass form.

use std::fmt;

use super::{ModelMap, SurfacePoint, WeierstrassModel};
use crate::algebra::{ratfunc_string, Field, Poly, RatFunc, F9, P9};
use crate::error::{Error, Result};

/// `y² = x³ + a₂x² + a₄x + a₆` with coefficients in `k(w)` (or `k(t)`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CurveK {
    pub a2: RatFunc,
    pub a4: RatFunc,
    pub a6: RatFunc,
}

impl CurveK {
    pub fn rhs(&self, x: &RatFunc) -> RatFunc {
        &(&(&(&(x + &self.a2) * x) + &self.a4) * x) + &self.a6
    }

    pub fn contains(&self, p: &SurfacePoint) -> bool {
        match p {
            SurfacePoint::Zero => true,
            SurfacePoint::Affine { x, y } => y * y == self.rhs(x),
        }
    }

    pub fn add(&self, p: &SurfacePoint, q: &SurfacePoint) -> Result<SurfacePoint> {
        let (x1, y1, x2, y2) = match (p, q) {
            (SurfacePoint::Zero, _) => return Ok(q.clone()),
            (_, SurfacePoint::Zero) => return Ok(p.clone()),
            (SurfacePoint::Affine { x: x1, y: y1 }, SurfacePoint::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let lambda = if x1 == x2 {
            if (y1 + y2).is_zero() {
                return Ok(SurfacePoint::Zero);
            }
            // 2yλ = 3x² + 2a₂x + a₄, and 3 = 0.
            let two = RatFunc::from_int(2);
            let num = &(&(&two * &self.a2) * x1) + &self.a4;
            num.checked_div(&(&two * y1))?
        } else {
            (y2 - y1).checked_div(&(x2 - x1))?
        };
        let x3 = &(&(&(&lambda * &lambda) - &self.a2) - x1) - x2;
        let y3 = &(&lambda * &(x1 - &x3)) - y1;
        Ok(SurfacePoint::Affine { x: x3, y: y3 })
    }

    pub fn multiply(&self, p: &SurfacePoint, n: i64) -> Result<SurfacePoint> {
        let mut base = if n < 0 { super::negate(p) } else { p.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = SurfacePoint::Zero;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base)?;
            }
            base = self.add(&base, &base)?;
            k >>= 1;
        }
        Ok(acc)
    }

    pub fn discriminant(&self) -> RatFunc {
        let (a2, a4, a6) = (&self.a2, &self.a4, &self.a6);
        let a2sq = a2 * a2;
        let a4sq = a4 * a4;
        &(&(&a2sq * &a4sq) - &(&(&a2sq * a2) * a6)) - &(&a4sq * a4)
    }

    /// The curve in the coordinates `x′, y′` with `x = u²x′ + r`, `y = u³y′`.
    pub fn apply_map(&self, phi: &ModelMap) -> Result<CurveK> {
        let (u, r) = (&phi.u, &phi.r);
        if u.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let u2 = u * u;
        let u4 = &u2 * &u2;
        let u6 = &u4 * &u2;
        let two = RatFunc::from_int(2);
        let a4 = &(&(&two * &self.a2) * r) + &self.a4;
        let a6 = self.rhs(r);
        Ok(CurveK { a2: &self.a2 / &u2, a4: &a4 / &u4, a6: &a6 / &u6 })
    }

    pub fn to_polynomial_model(&self) -> Result<WeierstrassModel> {
        let get = |r: &RatFunc, name: &str| {
            r.as_poly().cloned().ok_or_else(|| Error::InvalidModel(format!("{name} = {r} is not a polynomial")))
        };
        Ok(WeierstrassModel::new(get(&self.a2, "a2")?, get(&self.a4, "a4")?, get(&self.a6, "a6")?))
    }

    /// Display with the base variable named `var`.
    pub fn display_in(&self, var: &str) -> String {
        format!(
            "y^2 = x^3 + ({})*x^2 + ({})*x + ({})",
            ratfunc_string(&self.a2, var),
            ratfunc_string(&self.a4, var),
            ratfunc_string(&self.a6, var)
        )
    }
}

impl fmt::Display for CurveK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("t"))
    }
}

/// A point on `y² = g(t)`: affine, or one of the two points over `t = ∞` when
/// `deg g = 4` (identified by the square root of the leading coefficient it uses).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum QuarticPoint {
    Affine { t: RatFunc, y: RatFunc },
    Infinity { root: RatFunc },
}

/// How a quartic was brought to Weierstrass form; maps points in both directions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuarticMaps {
    /// The chosen point `t₀` moved to `u = 0` by `t = t₀ + u` (ignored when `inverted`).
    t0: RatFunc,
    /// Whether the point at infinity was used (`u = 1/t`).
    inverted: bool,
    kind: MapKind,
}

#[derive(Clone, PartialEq, Eq, Debug)]
#[allow(clippy::large_enum_variant)]
enum MapKind {
    /// `X = c·T`, `Y = c·Y_T` on a cubic in `T`; `T = 1/u` when the point was a root.
    Cubic { c: RatFunc, reciprocal: bool },
    /// `v² = a u⁴ + b u³ + c u² + d u + q²` with `q ≠ 0`.
    Connell { q: RatFunc, b: RatFunc, c: RatFunc, d: RatFunc, a1: RatFunc, a3: RatFunc },
}

fn two() -> RatFunc {
    RatFunc::from_int(2)
}

impl QuarticMaps {
    /// The local coordinate `u` and ordinate `v` of a quartic point, if affine in the chart.
    fn to_chart(&self, p: &QuarticPoint) -> Option<(RatFunc, RatFunc)> {
        match (p, self.inverted) {
            (QuarticPoint::Affine { t, y }, false) => Some((t - &self.t0, y.clone())),
            (QuarticPoint::Affine { t, y }, true) => {
                let u = t.inv()?;
                Some((u.clone(), y * &(&u * &u)))
            }
            (QuarticPoint::Infinity { root }, true) => Some((RatFunc::zero(), root.clone())),
            (QuarticPoint::Infinity { .. }, false) => None,
        }
    }

    fn chart_point(&self, u: RatFunc, v: RatFunc) -> QuarticPoint {
        if self.inverted {
            match u.inv() {
                None => QuarticPoint::Infinity { root: v },
                Some(t) => {
                    let y = &v * &(&t * &t);
                    QuarticPoint::Affine { t, y }
                }
            }
        } else {
            QuarticPoint::Affine { t: &u + &self.t0, y: v }
        }
    }

    /// Image on the Weierstrass model.
    pub fn forward(&self, p: &QuarticPoint) -> Result<SurfacePoint> {
        let chart = self.to_chart(p);
        match &self.kind {
            MapKind::Cubic { c, reciprocal } => {
                let (u, v) = match chart {
                    Some(uv) => uv,
                    None => return Ok(SurfacePoint::Zero),
                };
                let (tt, yt) = if *reciprocal {
                    match u.inv() {
                        None => return Ok(SurfacePoint::Zero),
                        Some(tt) => {
                            let yt = &v * &(&tt * &tt);
                            (tt, yt)
                        }
                    }
                } else {
                    (u, v)
                };
                Ok(SurfacePoint::Affine { x: c * &tt, y: c * &yt })
            }
            MapKind::Connell { q, c, d, a1, a3, .. } => {
                let (u, v) = chart.ok_or_else(|| Error::Neighbor("point outside the chart".into()))?;
                if u.is_zero() {
                    if v == *q {
                        return Ok(SurfacePoint::Zero);
                    }
                    return Err(Error::Neighbor("the conjugate of the base point is not mapped".into()));
                }
                let u2 = &u * &u;
                let u3 = &u2 * &u;
                let qq = q * q;
                let x = (&(&(&two() * q) * &(&v + q)) + &(d * &u)) / u2.clone();
                let y = &(&(&(&RatFunc::from_int(4) * &qq) * &(&v + q)) + &(&(&two() * q) * &(&(d * &u) + &(c * &u2))))
                    - &(&(&(d * d) * &u2) / &(&two() * q));
                let y = &y / &u3;
                // Complete the square: Y = y + (a₁x + a₃)/2.
                let yy = &y + &(&(&(a1 * &x) + a3) / &two());
                Ok(SurfacePoint::Affine { x, y: yy })
            }
        }
    }

    /// Preimage on the quartic of a point of the Weierstrass model.
    pub fn backward(&self, p: &SurfacePoint) -> Result<QuarticPoint> {
        match &self.kind {
            MapKind::Cubic { c, reciprocal } => {
                let (x, y) = match p.coords() {
                    None => {
                        return if *reciprocal {
                            Ok(self.chart_point(RatFunc::zero(), RatFunc::zero()))
                        } else {
                            Err(Error::Neighbor("O has no affine preimage on a cubic".into()))
                        }
                    }
                    Some(xy) => xy,
                };
                let tt = x / c;
                let yt = y / c;
                if *reciprocal {
                    let u = tt.inv().ok_or_else(|| Error::Neighbor("point maps to infinity".into()))?;
                    let v = &yt * &(&u * &u);
                    Ok(self.chart_point(u, v))
                } else {
                    Ok(self.chart_point(tt, yt))
                }
            }
            MapKind::Connell { q, c, d, a1, a3, .. } => {
                let (x, yy) = match p.coords() {
                    None => return Ok(self.chart_point(RatFunc::zero(), q.clone())),
                    Some(xy) => xy,
                };
                let y = yy - &(&(&(a1 * x) + a3) / &two());
                // u = (2q(x + c) − d²/(2q)) / y,  v = −q + u(ux − d)/(2q)
                let num = &(&(&two() * q) * &(x + c)) - &(&(d * d) / &(&two() * q));
                let u = num.checked_div(&y)?;
                let v = &(-q.clone()) + &(&(&u * &(&(&u * x) - d)) / &(&two() * q));
                Ok(self.chart_point(u, v))
            }
        }
    }
}

/// Evaluate `g(t₀ + u)` as a polynomial in `u`.
fn shifted(g: &Poly<RatFunc>, t0: &RatFunc) -> Poly<RatFunc> {
    g.compose(&Poly::from_coeffs(vec![t0.clone(), RatFunc::one()]))
}

/// Weierstrass form of `y² = g(t)` for `g` of degree 3 or 4 over `k(w)`.
///
/// Degree 3 needs no point. Degree 4 needs a rational point: a root of `g` is sent
/// to `O` by inversion, any other point by Connell's transformation. The returned
/// maps are checked on the supplied point.
pub fn quartic_to_weierstrass(g: &Poly<RatFunc>, pt: Option<&QuarticPoint>) -> Result<(CurveK, QuarticMaps)> {
    let deg = g.deg();
    if deg != 3 && deg != 4 {
        return Err(Error::Neighbor(format!("expected a cubic or quartic, got degree {deg}")));
    }
    let dg = g.derivative();
    if gcd_degree(g, &dg) > 0 {
        return Err(Error::Neighbor("the quartic is not squarefree".into()));
    }
    if deg == 3 {
        let c = g.coeff(3);
        let curve = CurveK { a2: g.coeff(2), a4: &g.coeff(1) * &c, a6: &g.coeff(0) * &(&c * &c) };
        let maps = QuarticMaps { t0: RatFunc::zero(), inverted: false, kind: MapKind::Cubic { c, reciprocal: false } };
        return Ok((curve, maps));
    }
    let pt = pt.ok_or_else(|| Error::Neighbor("a quartic needs a rational point".into()))?;
    let (h, t0, inverted, v0) = match pt {
        QuarticPoint::Affine { t, y } => (shifted(g, t), t.clone(), false, y.clone()),
        QuarticPoint::Infinity { root } => {
            if root * root != g.coeff(4) {
                return Err(Error::Neighbor("point at infinity does not match the leading coefficient".into()));
            }
            let rev = Poly::from_coeffs((0..=4).map(|k| g.coeff(4 - k)).collect());
            (rev, RatFunc::zero(), true, root.clone())
        }
    };
    if &v0 * &v0 != h.coeff(0) {
        return Err(Error::Neighbor("supplied point is not on the quartic".into()));
    }
    let (curve, kind) = if v0.is_zero() {
        // h = b₁u + b₂u² + b₃u³ + b₄u⁴; with T = 1/u, (vT²)² = b₁T³ + b₂T² + b₃T + b₄.
        let b1 = h.coeff(1);
        let curve = CurveK { a2: h.coeff(2), a4: &h.coeff(3) * &b1, a6: &h.coeff(4) * &(&b1 * &b1) };
        (curve, MapKind::Cubic { c: b1, reciprocal: true })
    } else {
        let (q, d, c, b, a) = (v0, h.coeff(1), h.coeff(2), h.coeff(3), h.coeff(4));
        let four = RatFunc::from_int(4);
        let qq = &q * &q;
        let a1 = &d / &q;
        let a2 = &c - &(&(&d * &d) / &(&four * &qq));
        let a3 = &(&two() * &q) * &b;
        let a4 = -(&(&four * &qq) * &a);
        let a6 = &a2 * &a4;
        // y ↦ y − (a₁x + a₃)/2
        let curve = CurveK {
            a2: &a2 + &(&(&a1 * &a1) / &four),
            a4: &a4 + &(&(&a1 * &a3) / &two()),
            a6: &a6 + &(&(&a3 * &a3) / &four),
        };
        (curve, MapKind::Connell { q, b, c, d, a1, a3 })
    };
    let maps = QuarticMaps { t0, inverted, kind };
    let img = maps.forward(pt)?;
    if !curve.contains(&img) {
        return Err(Error::Inconsistent("quartic map sends the base point off the curve".into()));
    }
    Ok((curve, maps))
}

fn gcd_degree(a: &Poly<RatFunc>, b: &Poly<RatFunc>) -> i64 {
    if b.is_zero() {
        return a.deg();
    }
    a.gcd(b).deg()
}

/// Result of [`absorb_squares`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Absorbed {
    pub model: WeierstrassModel,
    /// The squarefree part `q` of `c`, absorbed by `X = q·x`.
    pub q: P9,
    /// The square root `s` of `c/q`, absorbed by `y = s·y₁`.
    pub s: P9,
    /// The map from the absorbed model to `model` (minimization and normalization).
    pub map: ModelMap,
}

/// Clean up `y² = c(t)·(x³ + a₂x² + a₄x + a₆)`.
///
/// The square part `s²` of `c` goes into `y`, the squarefree rest `q` is absorbed by
/// `X = qx`, `Y = q y/s`; the result is then minimized at every place and, when a
/// polynomial 2-torsion point exists, translated so that it sits at `x = 0`.
pub fn absorb_squares(c: &P9, cubic: &WeierstrassModel) -> Result<Absorbed> {
    if c.is_zero() {
        return Err(Error::InvalidModel("c = 0".into()));
    }
    let (s, q) = square_decomposition(c)?;
    let q2 = &q * &q;
    let raw = WeierstrassModel::new(&q * &cubic.a2, &q2 * &cubic.a4, &(&q2 * &q) * &cubic.a6);
    let (model, map) = crate::tate::minimal_model(&raw)?;
    let (model, map) = normalize_two_torsion(&model, map)?;
    Ok(Absorbed { model, q, s, map })
}

/// `c = s²·q` with `q` having no repeated F₉-linear factor and no square constant
/// factor beyond a unit; errors if a repeated factor without F₉ roots remains.
fn square_decomposition(c: &P9) -> Result<(P9, P9)> {
    let (roots, rest) = crate::algebra::roots_with_multiplicity(c, crate::algebra::FieldKind::F9)?;
    let mut s = P9::one();
    let mut q = rest.clone();
    if rest.deg() > 0 && rest.gcd(&rest.derivative()).deg() > 0 {
        return Err(Error::InvalidModel(format!("cannot absorb the repeated factor of {rest}")));
    }
    for (a, m) in roots {
        let lin = P9::from_coeffs(vec![-a, F9::ONE]);
        s = &s * &lin.pow((m / 2) as u32);
        if m % 2 == 1 {
            q = &q * &lin;
        }
    }
    // Constants are squares in F₉.
    let lc = q.leading();
    let root = lc.sqrt().expect("every element of F3 is a square in F9");
    Ok((s.scale(&root), q.scale(&lc.inv().expect("nonzero"))))
}

/// Translate a polynomial root of the cubic to `x = 0`, choosing the one that gives
/// the smallest `deg a₄` (then the smallest in canonical order).
fn normalize_two_torsion(m: &WeierstrassModel, map: ModelMap) -> Result<(WeierstrassModel, ModelMap)> {
    let roots = super::cubic_polynomial_roots(m);
    let mut best: Option<(WeierstrassModel, ModelMap)> = None;
    for r in roots {
        let shift = ModelMap::shift(r.into());
        let cand = m.to_curve().apply_map(&shift)?.to_polynomial_model()?;
        let better = match &best {
            None => true,
            Some((b, _)) => normal_form_key(&cand) < normal_form_key(b),
        };
        if better {
            best = Some((cand, map.then(&shift)));
        }
    }
    Ok(best.unwrap_or_else(|| (m.clone(), map)))
}

/// Smallest `deg a₄`, then fewest terms in `a₄`, then the printed form.
fn normal_form_key(m: &WeierstrassModel) -> (i64, usize, String) {
    let terms = m.a4.coeffs().iter().filter(|c| !c.is_zero()).count();
    (m.a4.deg(), terms, m.a4.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, parse_ratfunc_in};

    fn k(s: &str) -> RatFunc {
        parse_ratfunc_in(s, 'w').unwrap()
    }

    fn quartic(c: &[&str]) -> Poly<RatFunc> {
        Poly::from_coeffs(c.iter().map(|s| k(s)).collect())
    }

    #[test]
    fn cubic_leading_absorption() {
        // y² = wt³ + t² + 1; X = wT, Y = wy
        let g = quartic(&["1", "0", "1", "w"]);
        let (curve, maps) = quartic_to_weierstrass(&g, None).unwrap();
        assert_eq!(curve, CurveK { a2: RatFunc::one(), a4: RatFunc::zero(), a6: k("w^2") });
        let p = QuarticPoint::Affine { t: RatFunc::zero(), y: RatFunc::one() };
        let img = maps.forward(&p).unwrap();
        assert!(curve.contains(&img));
        assert_eq!(maps.backward(&img).unwrap(), p);
        // t³ + (w + 1) is inseparable in characteristic 3
        assert!(quartic_to_weierstrass(&quartic(&["w+1", "0", "0", "1"]), None).is_err());
    }

    #[test]
    fn quartic_with_root_round_trip() {
        // y² = t(t − 1)(t − w)(t + 1)
        let g = quartic(&["0", "w", "-1", "-w", "1"]);
        let p = QuarticPoint::Affine { t: RatFunc::zero(), y: RatFunc::zero() };
        let (curve, maps) = quartic_to_weierstrass(&g, Some(&p)).unwrap();
        assert_eq!(maps.forward(&p).unwrap(), SurfacePoint::Zero);
        let other = QuarticPoint::Affine { t: RatFunc::one(), y: RatFunc::zero() };
        let img = maps.forward(&other).unwrap();
        assert!(curve.contains(&img));
        assert_eq!(maps.backward(&img).unwrap(), other);
    }

    #[test]
    fn connell_round_trip() {
        // y² = t⁴ − (w + 1)t² + wt + 1 has the points (0, ±1) and (1, ±1).
        let g = quartic(&["1", "w", "-w-1", "0", "1"]);
        let p = QuarticPoint::Affine { t: RatFunc::zero(), y: RatFunc::one() };
        let (curve, maps) = quartic_to_weierstrass(&g, Some(&p)).unwrap();
        assert_eq!(maps.forward(&p).unwrap(), SurfacePoint::Zero);
        assert_eq!(maps.backward(&SurfacePoint::Zero).unwrap(), p);
        for y in [RatFunc::one(), -RatFunc::one()] {
            let q = QuarticPoint::Affine { t: RatFunc::one(), y };
            let img = maps.forward(&q).unwrap();
            assert!(curve.contains(&img));
            assert_eq!(maps.backward(&img).unwrap(), q);
        }
        assert!(!curve.discriminant().is_zero());
    }

    #[test]
    fn point_at_infinity_as_base() {
        let g = quartic(&["1", "w", "-w-1", "0", "1"]);
        let p = QuarticPoint::Infinity { root: RatFunc::one() };
        let (curve, maps) = quartic_to_weierstrass(&g, Some(&p)).unwrap();
        let q = QuarticPoint::Affine { t: RatFunc::one(), y: RatFunc::one() };
        let img = maps.forward(&q).unwrap();
        assert!(curve.contains(&img));
        assert_eq!(maps.backward(&img).unwrap(), q);
    }

    #[test]
    fn absorb_examples() {
        let m7 = WeierstrassModel::new(
            parse_poly("t(t^2+1)").unwrap(),
            parse_poly("-t^3(t+1)^2").unwrap(),
            parse_poly("t^5(t+1)^2").unwrap(),
        );
        let out = absorb_squares(&P9::one(), &m7).unwrap();
        assert_eq!(out.model.a2, parse_poly("t^3+t").unwrap());
        assert_eq!(out.model.a4, parse_poly("t^4").unwrap());
        assert!(out.model.a6.is_zero());
        let sq = absorb_squares(&parse_poly("t^2").unwrap(), &m7).unwrap();
        assert_eq!(sq.s, parse_poly("t").unwrap());
        assert!(sq.q.is_one());
    }
}
