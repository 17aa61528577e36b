//! 2-neighbor steps: from a divisor `F = 2O + Σ n_Θ Θ` of fiber shape, compute the
//! elliptic parameter `w = (x + A(t))/d(t)` and the Weierstrass model over `k(w)`.
//!
//! The pole conditions are read off the component data recorded by the Tate machine:
//! along a component `Θ` of multiplicity `m` in a fiber where `d` vanishes to order
//! `e`, `w` has a pole of order at most `n_Θ` iff `x + A` vanishes to order at least
//! `e·m − n_Θ`, which is a linear condition on the coefficients of `A`.
//!
//! Divisor files hold one term per line:
//!
//! ```text
//! 2 O                 # the zero section
//! 2 comp 0 a0         # multiplicity, place, component (any letters, then the index)
//! 1 comp inf c6
//! 1 sect (0;0)        # a section; parsed, but only the 2O ansatz is solved
//! ```
//!
//! Component indices follow the numbering of [`crate::tate`]: `I_n` cyclic from the
//! identity component, `I_n*` with near leaf 1, chain `2..=n+2`, far leaves `n+3, n+4`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::algebra::{poly_string, Field, FieldKind, Place, Poly, RatFunc, F9, P9};
use crate::error::{Error, Result};
use crate::lattice::RootSystem;
use crate::model::{
    apply_map, format_model, parse_point, quartic_to_weierstrass, validate_k3, K3Verdict, ModelMap, QuarticPoint,
    SurfacePoint, WeierstrassModel,
};
use crate::tate::{classify_all, classify_place, FiberConfiguration, FiberData, KodairaType};

/// What a term of `F` sits on.
#[derive(Clone, Debug, PartialEq)]
pub enum Carrier {
    ZeroSection,
    Section(SurfacePoint),
    Component { place: Place, index: u32 },
}

impl fmt::Display for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Carrier::ZeroSection => f.write_str("O"),
            Carrier::Section(p) => write!(f, "sect {p}"),
            Carrier::Component { place, index } => write!(f, "comp {place} {index}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DivisorSpec {
    pub terms: Vec<(Carrier, u32)>,
}

impl DivisorSpec {
    pub fn parse(text: &str) -> Result<DivisorSpec> {
        let mut terms = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |why: &str| Error::Parse(format!("divisor line {}: {why}", k + 1));
            let mut parts = line.splitn(2, char::is_whitespace);
            let mult: u32 = parts.next().and_then(|m| m.parse().ok()).ok_or_else(|| bad("expected a multiplicity"))?;
            if mult == 0 {
                return Err(bad("multiplicity 0"));
            }
            let rest = parts.next().unwrap_or("").trim();
            let carrier = if rest == "O" {
                Carrier::ZeroSection
            } else if let Some(p) = rest.strip_prefix("sect ") {
                Carrier::Section(parse_point(p.trim()).map_err(|e| bad(&e.to_string()))?)
            } else if let Some(c) = rest.strip_prefix("comp ") {
                let mut w = c.split_whitespace();
                let (place, label) = match (w.next(), w.next(), w.next()) {
                    (Some(p), Some(l), None) => (p, l),
                    _ => return Err(bad("expected `comp <place> <label>`")),
                };
                let place = Place::parse(place).map_err(|e| bad(&e.to_string()))?;
                let digits = label.trim_start_matches(|ch: char| ch.is_ascii_alphabetic());
                let index = digits.parse().map_err(|_| bad("component label must end in its index"))?;
                Carrier::Component { place, index }
            } else {
                return Err(bad("unknown term"));
            };
            terms.push((carrier, mult));
        }
        if terms.is_empty() {
            return Err(Error::Parse("empty divisor".into()));
        }
        Ok(DivisorSpec { terms })
    }

    pub fn zero_multiplicity(&self) -> u32 {
        self.terms.iter().filter(|(c, _)| *c == Carrier::ZeroSection).map(|(_, m)| m).sum()
    }

    /// `n_Θ` for every component term, keyed by place.
    pub fn component_multiplicities(&self) -> BTreeMap<Place, BTreeMap<u32, u32>> {
        let mut out: BTreeMap<Place, BTreeMap<u32, u32>> = BTreeMap::new();
        for (c, m) in &self.terms {
            if let Carrier::Component { place, index } = c {
                *out.entry(place.clone()).or_default().entry(*index).or_default() += m;
            }
        }
        out
    }
}

impl fmt::Display for DivisorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(c, m)| format!("{m}·({c})")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Intersection numbers between the components of a fiber of the given type, in the
/// numbering of [`crate::tate`]. Only the off-diagonal entries are listed.
pub fn fiber_edges(kodaira: KodairaType) -> Vec<(u32, u32, i64)> {
    use KodairaType::*;
    match kodaira {
        I(0) | I(1) | II => vec![],
        I(2) | III => vec![(0, 1, 2)],
        I(n) => (0..n).map(|j| (j, (j + 1) % n, 1)).collect(),
        IV => vec![(0, 1, 1), (0, 2, 1), (1, 2, 1)],
        IStar(n) => {
            let mut e = vec![(0, 2, 1), (1, 2, 1)];
            for j in 2..n + 2 {
                e.push((j, j + 1, 1));
            }
            e.push((n + 2, n + 3, 1));
            e.push((n + 2, n + 4, 1));
            e
        }
        IVStar => vec![(0, 1, 1), (1, 2, 1), (2, 3, 1), (2, 4, 1), (3, 5, 1), (4, 6, 1)],
        IIIStar => vec![(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 5, 1), (5, 6, 1), (3, 7, 1)],
        IIStar => vec![(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 5, 1), (5, 6, 1), (5, 7, 1), (7, 8, 1)],
    }
}

fn component_pairing(kodaira: KodairaType, i: u32, j: u32) -> i64 {
    if i == j {
        return if kodaira.component_count() == 1 { 0 } else { -2 };
    }
    fiber_edges(kodaira).iter().filter(|(a, b, _)| (*a, *b) == (i, j) || (*a, *b) == (j, i)).map(|(_, _, k)| k).sum()
}

/// `w = (b·x + A(t))/d(t)` with `deg A ≤ 4`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParameterAnsatz {
    pub denominator: P9,
    /// Unknowns `b, a₀, …, a₄`, in that order.
    pub unknowns: Vec<String>,
    /// Index of the coefficient removed by subtracting multiples of `d`.
    pub absorbed: Option<usize>,
    /// Per place: the order `e` of the pole of `1/d` there and the fiber.
    pub fibers: Vec<(Place, u32, FiberData)>,
    pub multiplicities: BTreeMap<Place, BTreeMap<u32, u32>>,
}

/// The elliptic parameter found by [`solve_pole_conditions`].
#[derive(Clone, Debug, PartialEq)]
pub struct EllipticParameter {
    pub numerator_a: P9,
    pub denominator: P9,
    /// Dimension of the solution space modulo constants.
    pub dimension: usize,
    pub constraint_rank: usize,
}

impl EllipticParameter {
    pub fn as_ratfunc(&self) -> Result<(RatFunc, RatFunc)> {
        // w = (x + A)/d as (1/d, A/d)
        let d: RatFunc = self.denominator.clone().into();
        Ok((d.inv().ok_or(Error::DivisionByZero)?, RatFunc::from(self.numerator_a.clone()).checked_div(&d)?))
    }
}

impl fmt::Display for EllipticParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = if self.numerator_a.is_zero() { "x".to_string() } else { format!("x + {}", self.numerator_a) };
        if self.denominator.is_one() {
            write!(f, "w = {num}")
        } else {
            write!(f, "w = ({num})/({})", self.denominator)
        }
    }
}

fn fiber_at(m: &WeierstrassModel, config: &FiberConfiguration, v: &Place) -> Result<FiberData> {
    match config.fiber_at(v) {
        Some(f) => Ok(f.clone()),
        None => classify_place(m, v),
    }
}

/// Check that `F` has fiber shape and set up `w = (a(t) + x)/d(t)`.
pub fn build_ansatz(m: &WeierstrassModel, f: &DivisorSpec) -> Result<ParameterAnsatz> {
    if f.terms.iter().any(|(c, _)| matches!(c, Carrier::Section(_))) {
        return Err(Error::Neighbor("only the 2O ansatz is supported: F must not contain other sections".into()));
    }
    if f.zero_multiplicity() != 2 {
        return Err(Error::Neighbor(format!("F contains {}O; the 2-neighbor ansatz needs 2O", f.zero_multiplicity())));
    }
    let config = classify_all(m)?;
    if config.quasi_elliptic {
        return Err(Error::Neighbor("neighbor steps start from elliptic models".into()));
    }
    let mults = f.component_multiplicities();
    let mut fibers = Vec::new();
    let mut denominator = P9::one();
    for (v, comps) in &mults {
        let fd = fiber_at(m, &config, v)?;
        for idx in comps.keys() {
            if *idx >= fd.component_count() {
                return Err(Error::Neighbor(format!("{} has no component {idx} at {v}", fd.kodaira)));
            }
        }
        if comps.len() as u32 == fd.component_count() {
            return Err(Error::Neighbor(format!("F contains the whole fiber at {v}")));
        }
        let e = comps.get(&0).copied().unwrap_or(0);
        if let Some(a) = v.rational_point() {
            denominator = &denominator * &P9::from_coeffs(vec![-a, F9::ONE]).pow(e);
        }
        fibers.push((v.clone(), e, fd));
    }
    // F·O = 0 and F·Θ = 0 along the support
    let zero_sum: u32 = fibers.iter().map(|(_, e, _)| e).sum();
    if zero_sum != 4 {
        return Err(Error::Neighbor(format!("F·O = {} ≠ 0", zero_sum as i64 - 4)));
    }
    for (v, e, fd) in &fibers {
        let comps = &mults[v];
        for i in comps.keys() {
            let mut dot: i64 = if *i == 0 { 2 } else { 0 };
            for (j, n) in comps {
                dot += *n as i64 * component_pairing(fd.kodaira, *i, *j);
            }
            if dot != 0 {
                return Err(Error::Neighbor(format!("F·Θ = {dot} for component {i} at {v}: not a fiber class")));
            }
        }
        let _ = e;
    }
    if !fibers.iter().any(|(v, _, _)| v.is_infinity()) {
        let fd = fiber_at(m, &config, &Place::Infinity)?;
        fibers.push((Place::Infinity, 0, fd));
    }
    let deg = denominator.deg() as usize;
    let absorbed = (deg <= 4).then_some(deg);
    let unknowns = std::iter::once("b".to_string()).chain((0..=4).map(|j| format!("a{j}"))).collect();
    Ok(ParameterAnsatz { denominator, unknowns, absorbed, fibers, multiplicities: mults })
}

/// Row-reduce in place; returns the pivot columns.
fn row_reduce(rows: &mut Vec<Vec<F9>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&k| !rows[k][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x *= inv;
        }
        for k in 0..rows.len() {
            if k != r && !rows[k][c].is_zero() {
                let f = rows[k][c];
                let pivot_row = rows[r].clone();
                for (x, p) in rows[k].iter_mut().zip(&pivot_row) {
                    *x -= f * *p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Local expansion of `Σ aⱼ tʲ` at `v` as linear forms: entry `[k][j]` is the
/// coefficient of `aⱼ` in the coefficient of `sᵏ`.
fn local_basis(v: &Place, order: usize) -> Vec<[F9; 5]> {
    let mut out = vec![[F9::ZERO; 5]; order];
    for j in 0..=4usize {
        let local = match v.rational_point() {
            Some(a) => P9::monomial(F9::ONE, j).taylor_shift(a),
            // s⁴·(1/s)ʲ
            None => P9::monomial(F9::ONE, 4 - j),
        };
        for (k, row) in out.iter_mut().enumerate() {
            row[j] = local.coeff(k);
        }
    }
    out
}

/// The linear constraints, as rows over the unknowns `b, a₀, …, a₄`.
pub fn pole_constraints(a: &ParameterAnsatz) -> Vec<Vec<F9>> {
    let mut rows = Vec::new();
    for (v, e, fd) in &a.fibers {
        let n_of = a.multiplicities.get(v);
        for c in &fd.components {
            let n = n_of.and_then(|mm| mm.get(&c.index)).copied().unwrap_or(0) as i64;
            let need = *e as i64 * c.mult as i64 - n;
            if need <= 0 {
                continue;
            }
            let m = c.mult as i64;
            let depth = ((need + m - 1) / m) as usize;
            if need > c.kappa as i64 {
                let mut row = vec![F9::ZERO; 6];
                row[0] = F9::ONE;
                rows.push(row);
            }
            for (k, lin) in local_basis(v, depth).iter().enumerate() {
                let mut row = vec![c.center.coeff(k)];
                row.extend_from_slice(lin);
                rows.push(row);
            }
        }
    }
    rows
}

/// Solve the pole conditions; the solution space must be 1-dimensional modulo constants.
pub fn solve_pole_conditions(a: &ParameterAnsatz) -> Result<EllipticParameter> {
    let mut rows = pole_constraints(a);
    let pivots = row_reduce(&mut rows, 6);
    let rank = pivots.len();
    let kernel_dim = 6 - rank;
    if kernel_dim != 2 {
        return Err(Error::Neighbor(format!(
            "solution space has dimension {} modulo constants (constraint rank {rank}); expected 1",
            kernel_dim as i64 - 1
        )));
    }
    // normalize: b = 1 and the absorbed coefficient 0
    let mut norm = rows.clone();
    let mut b_row = vec![F9::ZERO; 7];
    b_row[0] = F9::ONE;
    b_row[6] = F9::ONE;
    let mut full: Vec<Vec<F9>> = norm
        .drain(..)
        .map(|mut r| {
            r.push(F9::ZERO);
            r
        })
        .collect();
    full.push(b_row);
    if let Some(j) = a.absorbed {
        let mut r = vec![F9::ZERO; 7];
        r[1 + j] = F9::ONE;
        full.push(r);
    }
    let piv = row_reduce(&mut full, 7);
    if piv.contains(&6) || piv.len() != 6 {
        return Err(Error::Neighbor("no parameter with x-coefficient 1 after normalization".into()));
    }
    let mut coeffs = vec![F9::ZERO; 5];
    for (row, &c) in full.iter().zip(&piv) {
        if c >= 1 {
            coeffs[c - 1] = row[6];
        }
    }
    Ok(EllipticParameter {
        numerator_a: P9::from_coeffs(coeffs),
        denominator: a.denominator.clone(),
        dimension: kernel_dim - 1,
        constraint_rank: rank,
    })
}

/// Pole order of `w` along a component, for the check that the divisor of poles is `F`.
pub fn pole_order(w: &EllipticParameter, v: &Place, e: u32, c: &crate::tate::Component) -> i64 {
    let local = match v.rational_point() {
        Some(a) => w.numerator_a.taylor_shift(a),
        None => w.numerator_a.reverse(4),
    };
    e as i64 * c.mult as i64 - c.order_of(&local) as i64
}

/// Step result.
#[derive(Clone, Debug)]
pub struct NeighborResult {
    pub parameter: EllipticParameter,
    /// Coefficients (constant first) of `y² = g(t)` over `k(w)` after removing square factors.
    pub quartic: Vec<RatFunc>,
    pub model: WeierstrassModel,
    pub config: FiberConfiguration,
    /// Pole orders of `w` that differ from the multiplicity in `F`, if any.
    pub pole_mismatches: Vec<String>,
    pub comparison: Option<Comparison>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub target: String,
    pub computed_fibers: String,
    pub target_fibers: String,
    /// Change of base parameter applied to the derived model before the coordinate change.
    pub base_change: Option<String>,
    pub map: Option<String>,
    pub identified: bool,
}

fn to_k_of_w(p: &P9) -> Poly<RatFunc> {
    Poly::from_coeffs(p.coeffs().iter().map(|c| RatFunc::constant(*c)).collect())
}

/// `y² = x³ + a₂x² + a₄x + a₆` with `x = w·d(t) − A(t)`, as a polynomial in `t` over `k(w)`.
pub fn substituted_quartic(m: &WeierstrassModel, w: &EllipticParameter) -> Result<Poly<RatFunc>> {
    let wvar = RatFunc::var();
    let d = to_k_of_w(&w.denominator);
    let x = &Poly::from_coeffs(d.coeffs().iter().map(|c| c * &wvar).collect()) - &to_k_of_w(&w.numerator_a);
    let (a2, a4, a6) = (to_k_of_w(&m.a2), to_k_of_w(&m.a4), to_k_of_w(&m.a6));
    let g = &(&(&(&(&x + &a2) * &x) + &a4) * &x) + &a6;
    strip_squares(g)
}

/// Divide out repeated factors in `t`: even powers of `t − α` for `α ∈ F₉` first (the
/// derivative test misses cubes in characteristic 3), then any squared factor left.
fn strip_squares(mut g: Poly<RatFunc>) -> Result<Poly<RatFunc>> {
    for a in FieldKind::F9.elements() {
        let lin = Poly::from_coeffs(vec![RatFunc::constant(-a), RatFunc::one()]);
        let mut k = 0;
        let mut rest = g.clone();
        loop {
            let (q, r) = rest.divrem(&lin)?;
            if !r.is_zero() || q.is_zero() {
                break;
            }
            rest = q;
            k += 1;
        }
        if k >= 2 {
            let strip = lin.pow(2 * (k / 2));
            g = g.div_exact(&strip)?;
        }
    }
    loop {
        let dg = g.derivative();
        if dg.is_zero() {
            return Err(Error::Neighbor("inseparable curve".into()));
        }
        let h = g.gcd(&dg);
        if h.deg() < 1 {
            break;
        }
        let h2 = &h * &h;
        let (q, r) = g.divrem(&h2)?;
        if !r.is_zero() {
            return Err(Error::Neighbor(format!("a repeated factor of degree {} does not occur squared", h.deg())));
        }
        g = q;
    }
    if g.deg() > 4 {
        return Err(Error::Neighbor(format!("curve over k(w) has degree {} in t", g.deg())));
    }
    Ok(g)
}

/// Square root in `k(w)`, if any.
pub fn ratfunc_sqrt(r: &RatFunc) -> Option<RatFunc> {
    if r.is_zero() {
        return Some(RatFunc::zero());
    }
    let (n, d) = (r.num(), r.den());
    let sd = d.sqrt()?;
    let sn = n.sqrt()?;
    let s = RatFunc::new(sn, sd).ok()?;
    (&s * &s == *r).then_some(s)
}

/// A rational point on `y² = g(t)`: `t ∈ F₉` in the order of [`FieldKind::elements`],
/// then the points at infinity.
pub fn find_quartic_point(g: &Poly<RatFunc>) -> Option<QuarticPoint> {
    for a in FieldKind::F9.elements() {
        let t = RatFunc::constant(a);
        let val = g.eval(&t);
        if let Some(y) = ratfunc_sqrt(&val) {
            return Some(QuarticPoint::Affine { t, y });
        }
    }
    if g.deg() == 4 {
        if let Some(root) = ratfunc_sqrt(&g.coeff(4)) {
            return Some(QuarticPoint::Infinity { root });
        }
    }
    None
}

/// Compute `w`, the new model over `k(w)` (renamed `t`), and its fibers.
pub fn neighbor_step(m: &WeierstrassModel, f: &DivisorSpec) -> Result<NeighborResult> {
    let ansatz = build_ansatz(m, f)?;
    let w = solve_pole_conditions(&ansatz)?;
    let mut pole_mismatches = Vec::new();
    for (v, e, fd) in &ansatz.fibers {
        for c in &fd.components {
            let n = ansatz.multiplicities.get(v).and_then(|mm| mm.get(&c.index)).copied().unwrap_or(0) as i64;
            let p = pole_order(&w, v, *e, c).max(0);
            if p != n {
                pole_mismatches.push(format!("component {} at {v}: pole order {p}, multiplicity {n}", c.index));
            }
        }
    }
    derive_new_model(m, w, pole_mismatches)
}

/// Substitute, convert to Weierstrass form and minimize.
pub fn derive_new_model(
    m: &WeierstrassModel,
    w: EllipticParameter,
    pole_mismatches: Vec<String>,
) -> Result<NeighborResult> {
    let g = substituted_quartic(m, &w)?;
    let point = if g.deg() == 4 {
        Some(
            find_quartic_point(&g)
                .ok_or_else(|| Error::Neighbor("no rational point found for the conversion".into()))?,
        )
    } else {
        None
    };
    let (curve, _) = quartic_to_weierstrass(&g, point.as_ref())?;
    // clear denominators with x = x′/D², then minimize
    let mut den = P9::one();
    for c in [&curve.a2, &curve.a4, &curve.a6] {
        let cd = c.den();
        den = (&den * cd).div_exact(&den.gcd(cd))?;
    }
    let scale = RatFunc::from(den).inv().ok_or(Error::DivisionByZero)?;
    let integral = curve.apply_map(&ModelMap::scaling(scale))?.to_polynomial_model()?;
    let (model, _) = crate::tate::minimal_model(&integral)?;
    match validate_k3(&model) {
        K3Verdict::Elliptic | K3Verdict::QuasiElliptic => {}
        other => return Err(Error::Neighbor(format!("derived model is not a K3 fibration: {other:?}"))),
    }
    let config = classify_all(&model)?;
    Ok(NeighborResult { parameter: w, quartic: g.coeffs().to_vec(), model, config, pole_mismatches, comparison: None })
}

/// The model with `t ↦ αt + β`.
pub fn base_change(m: &WeierstrassModel, alpha: F9, beta: F9) -> WeierstrassModel {
    let sub = P9::from_coeffs(vec![beta, alpha]);
    WeierstrassModel::new(m.a2.compose(&sub), m.a4.compose(&sub), m.a6.compose(&sub))
}

/// A coordinate change `x = u²x′ + r`, `y = u³y′` taking `from` to `to`, if one exists.
pub fn identify(from: &WeierstrassModel, to: &WeierstrassModel) -> Option<ModelMap> {
    let r2 = |p: &P9| RatFunc::from(p.clone());
    let candidates_u: Vec<RatFunc> = if !from.a2.is_zero() && !to.a2.is_zero() {
        let u2 = r2(&from.a2).checked_div(&r2(&to.a2)).ok()?;
        let u = ratfunc_sqrt(&u2)?;
        vec![u.clone(), -u]
    } else if from.a2.is_zero() && to.a2.is_zero() && !from.a4.is_zero() && !to.a4.is_zero() {
        let u4 = r2(&from.a4).checked_div(&r2(&to.a4)).ok()?;
        let u2 = ratfunc_sqrt(&u4)?;
        let mut out = Vec::new();
        for s in [u2.clone(), -u2] {
            if let Some(u) = ratfunc_sqrt(&s) {
                out.push(u.clone());
                out.push(-u);
            }
        }
        out
    } else {
        return None;
    };
    for u in candidates_u {
        let rs: Vec<RatFunc> = if !from.a2.is_zero() {
            // a₄′u⁴ = a₄ + 2a₂r
            let u4 = &(&u * &u) * &(&u * &u);
            let num = &(&r2(&to.a4) * &u4) - &r2(&from.a4);
            vec![num.checked_div(&(&r2(&from.a2) * &RatFunc::from_int(2))).ok()?]
        } else {
            // r³ + a₄r + a₆ − a₆′u⁶ = 0 over k[t]
            let u6 = (&u * &u).pow(3);
            let c = &r2(&from.a6) - &(&r2(&to.a6) * &u6);
            let Some(cp) = c.as_poly() else { continue };
            let aux = WeierstrassModel::new(P9::zero(), from.a4.clone(), cp.clone());
            crate::model::cubic_polynomial_roots(&aux).into_iter().map(RatFunc::from).collect()
        };
        for r in rs {
            let phi = ModelMap { u: u.clone(), r };
            if apply_map(from, &phi).ok().as_ref() == Some(to) {
                return Some(phi);
            }
        }
    }
    None
}

/// The model with `t ↦ 1/t` (weight 2).
pub fn invert_base(m: &WeierstrassModel) -> WeierstrassModel {
    WeierstrassModel::new(m.a2.reverse(4), m.a4.reverse(8), m.a6.reverse(12))
}

/// Compare a derived model with an expected one: first directly, then after
/// `t ↦ αt + β`, then after `t ↦ 1/(αt + β)`.
pub fn compare_models(derived: &WeierstrassModel, target: &WeierstrassModel) -> Result<Comparison> {
    let c1 = classify_all(derived)?;
    let c2 = classify_all(target)?;
    let computed_fibers = RootSystem::new(c1.root_labels()).to_string();
    let target_fibers = RootSystem::new(c2.root_labels()).to_string();
    let mut out = Comparison {
        target: format_model(target),
        computed_fibers,
        target_fibers,
        base_change: None,
        map: None,
        identified: false,
    };
    if out.computed_fibers != out.target_fibers {
        return Ok(out);
    }
    if let Some(phi) = identify(derived, target) {
        out.map = Some(phi.to_string());
        out.identified = true;
        return Ok(out);
    }
    let inverted = invert_base(derived);
    for (base, label) in [(derived, ""), (&inverted, "1/")] {
        for alpha in FieldKind::F9.elements().into_iter().filter(|a| !a.is_zero()) {
            for beta in FieldKind::F9.elements() {
                let moved = base_change(base, alpha, beta);
                if let Some(phi) = identify(&moved, target) {
                    let lin = poly_string(&P9::from_coeffs(vec![beta, alpha]), "t");
                    out.base_change =
                        Some(if label.is_empty() { format!("t -> {lin}") } else { format!("t -> 1/({lin})") });
                    out.map = Some(phi.to_string());
                    out.identified = true;
                    return Ok(out);
                }
            }
        }
    }
    Ok(out)
}
