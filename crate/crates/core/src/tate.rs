//! Local classification of singular fibers.
//!
//! Elliptic models go through Tate's algorithm in the form valid in every residue
//! characteristic (no `c₄`/`c₆` shortcuts). With `a₁ = a₃ = 0` only `x`-translations are
//! ever needed, and instead of rescaling we track valuations directly, so the shift
//! `R(s)` accumulated by the run is a polynomial in the local parameter `s`.
//!
//! Every component that a section or an elliptic parameter can see is recorded with
//! its fiber multiplicity `m`, a cap `κ` and a center `R_C`: for a local function
//! `A(s) + x`, its order along the component is `min(m · v_s(A + R_C), κ)`. A section
//! with regular `x` meets the simple component of largest `κ` with `v_s(x − R_C) ≥ κ`
//! (and matching branch, where two components share a center).

use std::fmt;

use serde::Serialize;

use crate::algebra::{roots_with_multiplicity, series_inverse, valuation, Field, FieldKind, Place, RatFunc, F9, P9};
use crate::error::{Error, Result};
use crate::lattice::RootLabel;
use crate::model::{discriminant, SurfacePoint, WeierstrassModel};

/// Kodaira symbol of a fiber.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum KodairaType {
    I(u32),
    IStar(u32),
    II,
    III,
    IV,
    IVStar,
    IIIStar,
    IIStar,
}

impl KodairaType {
    /// Number of irreducible components.
    pub fn component_count(self) -> u32 {
        match self {
            KodairaType::I(0) => 1,
            KodairaType::I(n) => n,
            KodairaType::IStar(n) => n + 5,
            KodairaType::II => 1,
            KodairaType::III => 2,
            KodairaType::IV => 3,
            KodairaType::IVStar => 7,
            KodairaType::IIIStar => 8,
            KodairaType::IIStar => 9,
        }
    }

    /// The root lattice spanned by the non-identity components.
    pub fn lattice_label(self) -> Option<RootLabel> {
        match self {
            KodairaType::I(n) if n >= 2 => Some(RootLabel::A(n - 1)),
            KodairaType::IStar(n) => Some(RootLabel::D(n + 4)),
            KodairaType::III => Some(RootLabel::A(1)),
            KodairaType::IV => Some(RootLabel::A(2)),
            KodairaType::IVStar => Some(RootLabel::E(6)),
            KodairaType::IIIStar => Some(RootLabel::E(7)),
            KodairaType::IIStar => Some(RootLabel::E(8)),
            _ => None,
        }
    }

    /// `v(Δ)` of a tame fiber; wild fibers in characteristic 3 can exceed it.
    pub fn tame_v_delta(self) -> u32 {
        match self {
            KodairaType::I(n) => n,
            KodairaType::IStar(n) => n + 6,
            KodairaType::II => 2,
            KodairaType::III => 3,
            KodairaType::IV => 4,
            KodairaType::IVStar => 8,
            KodairaType::IIIStar => 9,
            KodairaType::IIStar => 10,
        }
    }

    pub fn parse(s: &str) -> Result<KodairaType> {
        let s = s.trim();
        let t = match s {
            "II" => KodairaType::II,
            "III" => KodairaType::III,
            "IV" => KodairaType::IV,
            "IV*" => KodairaType::IVStar,
            "III*" => KodairaType::IIIStar,
            "II*" => KodairaType::IIStar,
            _ => {
                let body = s.strip_prefix('I').ok_or_else(|| Error::Parse(format!("unknown Kodaira symbol `{s}`")))?;
                let (num, star) = match body.strip_suffix('*') {
                    Some(b) => (b, true),
                    None => (body, false),
                };
                let n: u32 = num.parse().map_err(|_| Error::Parse(format!("unknown Kodaira symbol `{s}`")))?;
                if star {
                    KodairaType::IStar(n)
                } else {
                    KodairaType::I(n)
                }
            }
        };
        Ok(t)
    }
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::I(n) => write!(f, "I{n}"),
            KodairaType::IStar(n) => write!(f, "I{n}*"),
            KodairaType::II => f.write_str("II"),
            KodairaType::III => f.write_str("III"),
            KodairaType::IV => f.write_str("IV"),
            KodairaType::IVStar => f.write_str("IV*"),
            KodairaType::IIIStar => f.write_str("III*"),
            KodairaType::IIStar => f.write_str("II*"),
        }
    }
}

impl Serialize for KodairaType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// How two components with the same center are told apart by a section.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Branch {
    /// Limit of `y / (x − R_C)` at `s = 0`.
    Slope(F9),
    /// Coefficient of `s^e` in `y`.
    Power { e: u32, value: F9 },
}

/// A fiber component with its valuation data.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Component {
    /// Index in the fixed numbering of the type; 0 is the identity component.
    pub index: u32,
    pub mult: u32,
    pub kappa: u32,
    /// Center in the local `x` coordinate, a polynomial in `s`.
    pub center: P9,
    pub branch: Option<Branch>,
}

impl Component {
    /// Order of vanishing of the local function `A(s) + x` along the component.
    pub fn order_of(&self, a: &P9) -> u32 {
        let sum = a + &self.center;
        match sum.low_order() {
            None => self.kappa,
            Some(v) => (self.mult * v as u32).min(self.kappa),
        }
    }
}

/// A classified fiber.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiberData {
    pub place: Place,
    pub kodaira: KodairaType,
    /// `v(Δ)`; absent for quasi-elliptic fibers.
    pub v_delta: Option<u32>,
    /// Components defined over F₉ (always including the identity component).
    pub components: Vec<Component>,
}

impl FiberData {
    pub fn component_count(&self) -> u32 {
        self.kodaira.component_count()
    }

    pub fn lattice_label(&self) -> Option<RootLabel> {
        self.kodaira.lattice_label()
    }

    pub fn component(&self, index: u32) -> Option<&Component> {
        self.components.iter().find(|c| c.index == index)
    }

    /// `place=0 kodaira=I12 lattice=A11 v_delta=12 m=12`
    pub fn report_line(&self) -> String {
        let lattice = self.lattice_label().map_or("-".to_string(), |l| l.to_string());
        let vd = self.v_delta.map_or("-".to_string(), |v| v.to_string());
        format!(
            "place={} kodaira={} lattice={} v_delta={} m={}",
            self.place,
            self.kodaira,
            lattice,
            vd,
            self.component_count()
        )
    }
}

/// All singular fibers of a model.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiberConfiguration {
    /// Singular fibers over F₉-rational places.
    pub fibers: Vec<FiberData>,
    pub quasi_elliptic: bool,
    /// Total degree of the places without F₉-points where `Δ` vanishes; every such
    /// fiber is `I₁`.
    pub nonrational_i1: u32,
}

impl FiberConfiguration {
    /// The root lattices of the reducible fibers, sorted.
    pub fn root_labels(&self) -> Vec<RootLabel> {
        let mut v: Vec<RootLabel> = self.fibers.iter().filter_map(|f| f.lattice_label()).collect();
        v.sort();
        v
    }

    pub fn sum_v_delta(&self) -> u32 {
        self.fibers.iter().filter_map(|f| f.v_delta).sum::<u32>() + self.nonrational_i1
    }

    pub fn fiber_at(&self, place: &Place) -> Option<&FiberData> {
        self.fibers.iter().find(|f| &f.place == place)
    }
}

/// `y² = x³ + a₂x² + a₄x + a₆` with coefficients in `F₉[s]`, `s` a local parameter.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LocalModel {
    pub a2: P9,
    pub a4: P9,
    pub a6: P9,
}

impl LocalModel {
    /// `x ↦ x + r`.
    pub fn shift(&self, r: &P9) -> LocalModel {
        let two = F9::TWO;
        let a4 = &self.a4 + &(&self.a2 * r).scale(&two);
        let a6 = &(&(&(&(r + &self.a2) * r) + &self.a4) * r) + &self.a6;
        LocalModel { a2: self.a2.clone(), a4, a6 }
    }

    pub fn discriminant(&self) -> P9 {
        discriminant(&WeierstrassModel::new(self.a2.clone(), self.a4.clone(), self.a6.clone()))
    }
}

/// Order of vanishing at `s = 0`, with `u32::MAX` standing for `+∞`.
fn ord(p: &P9) -> u32 {
    p.low_order().map_or(u32::MAX, |v| v as u32)
}

/// The model in the local parameter at `v`: `a_i(α + s)` or `s^{k·i} a_i(1/s)` at ∞
/// for a model of weight `k` (K3 models have `k = 2`).
pub fn local_model(m: &WeierstrassModel, v: &Place, weight: usize) -> Result<LocalModel> {
    match v {
        Place::Infinity => {
            let bounds = [2 * weight, 4 * weight, 6 * weight];
            for (a, b) in m.coeffs().iter().zip(bounds) {
                if a.deg() > b as i64 {
                    return Err(Error::InvalidModel(format!("degree exceeds {b} for weight {weight}")));
                }
            }
            Ok(LocalModel { a2: m.a2.reverse(bounds[0]), a4: m.a4.reverse(bounds[1]), a6: m.a6.reverse(bounds[2]) })
        }
        _ => {
            let a = v.rational_point().ok_or_else(|| Error::UnsupportedPlace(v.to_string()))?;
            Ok(LocalModel { a2: m.a2.taylor_shift(a), a4: m.a4.taylor_shift(a), a6: m.a6.taylor_shift(a) })
        }
    }
}

/// Result of the local machine.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LocalOutcome {
    Fiber {
        kodaira: KodairaType,
        v_delta: u32,
        components: Vec<Component>,
    },
    /// `x ↦ x + R` makes `v(a_i) ≥ i`; the model can be divided by `s^{2·3}`.
    NonMinimal {
        shift: P9,
    },
}

fn comp(index: u32, mult: u32, kappa: u32, center: &P9, branch: Option<Branch>) -> Component {
    Component { index, mult, kappa, center: center.clone(), branch }
}

fn identity() -> Component {
    comp(0, 1, 0, &P9::zero(), None)
}

fn monomial(c: F9, k: usize) -> P9 {
    P9::monomial(c, k)
}

/// Tate's algorithm at `s = 0`.
pub fn classify_local(local: &LocalModel) -> Result<LocalOutcome> {
    let delta = local.discriminant();
    if delta.is_zero() {
        return Err(Error::Classification("zero discriminant: use the quasi-elliptic path".into()));
    }
    run_local(local, ord(&delta))
}

/// The additive branch of the machine on `y² = x³ + f(s)`: the translations strip the
/// cube part of `f`, which leaves the components of the quasi-elliptic fiber.
pub fn classify_quasi_local(f: &P9) -> Result<(KodairaType, Vec<Component>)> {
    let local = LocalModel { a2: P9::zero(), a4: P9::zero(), a6: f.clone() };
    match run_local(&local, u32::MAX)? {
        LocalOutcome::Fiber { kodaira, components, .. } => Ok((kodaira, components)),
        LocalOutcome::NonMinimal { .. } => Err(Error::Classification("quasi-elliptic model is not minimal".into())),
    }
}

fn run_local(local: &LocalModel, vd: u32) -> Result<LocalOutcome> {
    if vd == 0 {
        return Ok(LocalOutcome::Fiber { kodaira: KodairaType::I(0), v_delta: 0, components: vec![identity()] });
    }
    // Move the singular point of the reduction to x = 0.
    let (b2, b4, b6) = (local.a2.coeff(0), local.a4.coeff(0), local.a6.coeff(0));
    let x0 = if !b2.is_zero() { b4 / b2 } else { -b6.cube_root() };
    let mut r = P9::constant(x0);
    let mut loc = local.shift(&r);
    debug_assert!(ord(&loc.a4) >= 1 && ord(&loc.a6) >= 1);

    if ord(&loc.a2) == 0 {
        return Ok(multiplicative(&loc, &r, vd));
    }
    let fiber = |kodaira, components| Ok(LocalOutcome::Fiber { kodaira, v_delta: vd, components });
    if ord(&loc.a6) < 2 {
        return fiber(KodairaType::II, vec![identity()]);
    }
    if ord(&loc.a4) == 1 {
        return fiber(KodairaType::III, vec![identity(), comp(1, 1, 1, &r, None)]);
    }
    if ord(&loc.a6) == 2 {
        let mut comps = vec![identity()];
        if let Some(root) = loc.a6.coeff(2).sqrt() {
            comps.push(comp(1, 1, 1, &r, Some(Branch::Power { e: 1, value: root })));
            comps.push(comp(2, 1, 1, &r, Some(Branch::Power { e: 1, value: -root })));
        }
        return fiber(KodairaType::IV, comps);
    }
    // v(a₂) ≥ 1, v(a₄) ≥ 2, v(a₆) ≥ 3: look at T³ + a₂,₁T² + a₄,₂T + a₆,₃.
    let cubic = P9::from_coeffs(vec![loc.a6.coeff(3), loc.a4.coeff(2), loc.a2.coeff(1), F9::ONE]);
    let (roots, _) = roots_with_multiplicity(&cubic, FieldKind::F9)?;
    let max_mult = roots.iter().map(|(_, m)| *m).max().unwrap_or(1);
    match max_mult {
        1 => {
            let mut comps = vec![identity(), comp(2, 2, 2, &r, None)];
            let leaf_index = [1u32, 3, 4];
            for ((rho, _), idx) in roots.iter().zip(leaf_index) {
                comps.push(comp(idx, 1, 2, &(&r + &monomial(*rho, 1)), None));
            }
            comps.sort_by_key(|c| c.index);
            fiber(KodairaType::IStar(0), comps)
        }
        2 => {
            let double = roots.iter().find(|(_, m)| *m == 2).expect("double root").0;
            let step = monomial(double, 1);
            loc = loc.shift(&step);
            r = &r + &step;
            star_chain(loc, r, vd)
        }
        _ => {
            let triple = roots[0].0;
            let step = monomial(triple, 1);
            loc = loc.shift(&step);
            r = &r + &step;
            if !loc.a6.coeff(4).is_zero() {
                let mut comps = vec![identity(), comp(1, 2, 2, &r, None), comp(2, 3, 4, &r, None)];
                if let Some(root) = loc.a6.coeff(4).sqrt() {
                    comps.push(comp(3, 2, 3, &r, Some(Branch::Power { e: 2, value: root })));
                    comps.push(comp(4, 2, 3, &r, Some(Branch::Power { e: 2, value: -root })));
                    comps.push(comp(5, 1, 2, &r, Some(Branch::Power { e: 2, value: root })));
                    comps.push(comp(6, 1, 2, &r, Some(Branch::Power { e: 2, value: -root })));
                }
                return fiber(KodairaType::IVStar, comps);
            }
            if ord(&loc.a4) == 3 {
                let rho = -(loc.a6.coeff(5) / loc.a4.coeff(3));
                let leaf = &r + &monomial(rho, 2);
                let comps = vec![
                    identity(),
                    comp(1, 2, 2, &r, None),
                    comp(2, 3, 4, &r, None),
                    comp(3, 4, 6, &r, None),
                    comp(4, 3, 5, &r, None),
                    comp(5, 2, 4, &r, None),
                    comp(6, 1, 3, &leaf, None),
                    comp(7, 2, 3, &r, None),
                ];
                return fiber(KodairaType::IIIStar, comps);
            }
            if ord(&loc.a6) == 5 {
                let comps = vec![
                    identity(),
                    comp(1, 2, 2, &r, None),
                    comp(2, 3, 4, &r, None),
                    comp(3, 4, 6, &r, None),
                    comp(4, 5, 8, &r, None),
                    comp(5, 6, 10, &r, None),
                    comp(6, 3, 5, &r, None),
                    comp(7, 4, 7, &r, None),
                    comp(8, 2, 4, &r, None),
                ];
                return fiber(KodairaType::IIStar, comps);
            }
            Ok(LocalOutcome::NonMinimal { shift: r })
        }
    }
}

/// `I_n`: the nodes' center is `x₀ + a₄/a₂` as a power series.
fn multiplicative(loc: &LocalModel, r: &P9, n: u32) -> LocalOutcome {
    let prec = n as usize + 1;
    let inv = series_inverse(&loc.a2, prec).expect("unit a2");
    let center = &(&loc.a4 * &inv).truncate(prec) + r;
    let mut comps = vec![identity()];
    let c = loc.a2.coeff(0).sqrt();
    for j in 1..n {
        let kappa = j.min(n - j);
        let branch = if 2 * j == n {
            None
        } else {
            match c {
                None => continue,
                Some(c) => Some(Branch::Slope(if 2 * j < n { -c } else { c })),
            }
        };
        comps.push(comp(j, 1, kappa, &center, branch));
    }
    LocalOutcome::Fiber { kodaira: KodairaType::I(n), v_delta: n, components: comps }
}

/// The `I_n*` sub-loop, entered with the double root of the cubic moved to 0.
fn star_chain(mut loc: LocalModel, mut r: P9, vd: u32) -> Result<LocalOutcome> {
    let a21 = loc.a2.coeff(1);
    let near = &r - &monomial(a21, 1);
    let mut comps = vec![identity(), comp(1, 1, 2, &near, None), comp(2, 2, 2, &r, None)];
    let mut k: u32 = 1;
    loop {
        if k > vd {
            return Err(Error::Classification(format!("I_n* loop did not terminate within v(Δ) = {vd}")));
        }
        comps.push(comp(2 + k, 2, 2 + k, &r, None));
        let far = [k + 3, k + 4];
        if k % 2 == 1 {
            let j = k.div_ceil(2);
            let c = loc.a6.coeff((2 * j + 2) as usize);
            if !c.is_zero() {
                if let Some(root) = c.sqrt() {
                    comps.push(comp(far[0], 1, j + 1, &r, Some(Branch::Power { e: j + 1, value: root })));
                    comps.push(comp(far[1], 1, j + 1, &r, Some(Branch::Power { e: j + 1, value: -root })));
                }
                return Ok(LocalOutcome::Fiber { kodaira: KodairaType::IStar(k), v_delta: vd, components: comps });
            }
        } else {
            let j = k / 2;
            let (qa, qb, qc) = (a21, loc.a4.coeff((j + 2) as usize), loc.a6.coeff((2 * j + 3) as usize));
            let disc = qb * qb - qa * qc;
            if !disc.is_zero() {
                let quad = P9::from_coeffs(vec![qc, qb, qa]);
                let (roots, _) = roots_with_multiplicity(&quad, FieldKind::F9)?;
                for ((rho, _), idx) in roots.iter().zip(far) {
                    comps.push(comp(idx, 1, j + 2, &(&r + &monomial(*rho, (j + 1) as usize)), None));
                }
                return Ok(LocalOutcome::Fiber { kodaira: KodairaType::IStar(k), v_delta: vd, components: comps });
            }
            let rho = qb / qa;
            let step = monomial(rho, (j + 1) as usize);
            loc = loc.shift(&step);
            r = &r + &step;
        }
        k += 1;
    }
}

/// Classify the fiber of an elliptic K3 model at a place.
pub fn classify_place(m: &WeierstrassModel, v: &Place) -> Result<FiberData> {
    let local = local_model(m, v, 2)?;
    match classify_local(&local)? {
        LocalOutcome::Fiber { kodaira, v_delta, components } => {
            Ok(FiberData { place: v.clone(), kodaira, v_delta: Some(v_delta), components })
        }
        LocalOutcome::NonMinimal { .. } => Err(Error::Classification(format!("model is not minimal at {v}"))),
    }
}

/// The singular fibers, ordered by place.
pub fn classify_all(m: &WeierstrassModel) -> Result<FiberConfiguration> {
    if m.is_quasi_elliptic() {
        return quasi_classify_all(m);
    }
    let (places, rest) = crate::model::discriminant_places(m)?;
    // a simple zero of Δ is always I₁; repeated factors without F₉-roots are out of reach
    if rest.deg() > 0 && rest.gcd(&rest.derivative()).deg() > 0 {
        return Err(Error::UnsupportedPlace(format!(
            "discriminant factor {rest} has repeated factors without roots over F9"
        )));
    }
    let nonrational_i1 = rest.deg().max(0) as u32;
    let mut fibers = Vec::new();
    for (v, k) in places {
        if k == 1 {
            fibers.push(FiberData {
                place: v,
                kodaira: KodairaType::I(1),
                v_delta: Some(1),
                components: vec![identity()],
            });
            continue;
        }
        fibers.push(classify_place(m, &v)?);
    }
    fibers.sort_by(|a, b| a.place.cmp(&b.place));
    let config = FiberConfiguration { fibers, quasi_elliptic: false, nonrational_i1 };
    let total = config.sum_v_delta();
    if total != 24 {
        return Err(Error::Inconsistent(format!("sum of v(Delta) is {total}, expected 24")));
    }
    Ok(config)
}

/// Whether `f` is a cube in `F₉[t]` (every exponent divisible by 3).
pub fn is_cube(f: &P9) -> bool {
    f.coeffs().iter().enumerate().all(|(k, c)| k % 3 == 0 || c.is_zero())
}

/// The least exponent `e ≢ 0 (mod 3)` with a nonzero coefficient in the local
/// expansion of `f` at `v` (at ∞ the expansion of `s¹²f(1/s)`).
pub fn quasi_mu(f: &P9, v: &Place) -> Result<u32> {
    let local = match v {
        Place::Infinity => {
            if f.deg() > 12 {
                return Err(Error::InvalidModel("deg a6 > 12".into()));
            }
            f.reverse(12)
        }
        _ => f.taylor_shift(v.rational_point().ok_or_else(|| Error::UnsupportedPlace(v.to_string()))?),
    };
    local
        .coeffs()
        .iter()
        .enumerate()
        .find(|(k, c)| k % 3 != 0 && !c.is_zero())
        .map(|(k, _)| k as u32)
        .ok_or_else(|| Error::Classification(format!("a6 is locally a cube at {v}")))
}

/// Fiber type of `y² = x³ + f` at a place from the cube-reduced valuation `μ`.
pub fn quasi_fiber_type(f: &P9, v: &Place) -> Result<KodairaType> {
    let mu = quasi_mu(f, v)?;
    match mu % 6 {
        1 => Ok(KodairaType::II),
        2 => Ok(KodairaType::IV),
        4 => Ok(KodairaType::IVStar),
        5 => Ok(KodairaType::IIStar),
        _ => Err(Error::Classification(format!("unexpected mu = {mu}"))),
    }
}

/// Reducible fibers of a quasi-elliptic model: the places where `μ ≥ 2`, i.e. the
/// zeros of `f′` and possibly ∞.
pub fn quasi_classify_all(m: &WeierstrassModel) -> Result<FiberConfiguration> {
    if !(m.a2.is_zero() && m.a4.is_zero()) {
        return Err(Error::Classification("quasi-elliptic models need a2 = a4 = 0".into()));
    }
    let f = &m.a6;
    let df = f.derivative();
    if df.is_zero() {
        return Err(Error::Classification("a6 is a cube".into()));
    }
    let (roots, rest) = roots_with_multiplicity(&df, FieldKind::F9)?;
    if rest.deg() > 0 {
        return Err(Error::UnsupportedPlace(format!("f' factor {rest} has no roots over F9")));
    }
    let mut places: Vec<Place> = roots.into_iter().map(|(a, _)| Place::point(a)).collect();
    places.push(Place::Infinity);
    let mut fibers = Vec::new();
    for v in places {
        let kodaira = quasi_fiber_type(f, &v)?;
        if kodaira == KodairaType::II {
            continue;
        }
        let local = local_model(m, &v, 2)?;
        let (run_type, components) = classify_quasi_local(&local.a6)?;
        if run_type != kodaira {
            return Err(Error::Inconsistent(format!("at {v}: mu gives {kodaira}, the local run gives {run_type}")));
        }
        fibers.push(FiberData { place: v, kodaira, v_delta: None, components });
    }
    fibers.sort_by(|a, b| a.place.cmp(&b.place));
    Ok(FiberConfiguration { fibers, quasi_elliptic: true, nonrational_i1: 0 })
}

/// A place where the model is not minimal, if any.
pub fn non_minimal_place(m: &WeierstrassModel) -> Option<Place> {
    let (places, _) = crate::model::discriminant_places(m).ok()?;
    for (v, k) in places {
        if k < 12 {
            continue;
        }
        if let Ok(local) = local_model(m, &v, 2) {
            if let Ok(LocalOutcome::NonMinimal { .. }) = classify_local(&local) {
                return Some(v);
            }
        }
    }
    None
}

/// Remove non-minimality at the finite places: at `t = α` with shift `R(s)`, apply
/// `x = (t − α)²x′ + R(t − α)`. Non-minimality at ∞ is an error (the surface is not K3).
pub fn minimal_model(m: &WeierstrassModel) -> Result<(WeierstrassModel, crate::model::ModelMap)> {
    use crate::model::ModelMap;
    let mut cur = m.clone();
    let mut map = ModelMap::identity();
    'outer: loop {
        let delta = discriminant(&cur);
        if delta.is_zero() {
            return Ok((cur, map));
        }
        let (roots, _) = roots_with_multiplicity(&delta, FieldKind::F9)?;
        for (a, k) in roots {
            if k < 12 {
                continue;
            }
            let local =
                LocalModel { a2: cur.a2.taylor_shift(a), a4: cur.a4.taylor_shift(a), a6: cur.a6.taylor_shift(a) };
            if let LocalOutcome::NonMinimal { shift } = classify_local(&local)? {
                let lin = P9::from_coeffs(vec![-a, F9::ONE]);
                let r = shift.compose(&lin);
                let step = ModelMap { u: lin.into(), r: r.into() };
                cur = cur.to_curve().apply_map(&step)?.to_polynomial_model()?;
                map = map.then(&step);
                continue 'outer;
            }
        }
        if cur.within_k3_bounds() {
            if let Ok(local) = local_model(&cur, &Place::Infinity, 2) {
                if ord(&local.discriminant()) >= 12 {
                    if let LocalOutcome::NonMinimal { .. } = classify_local(&local)? {
                        return Err(Error::InvalidModel("model is not minimal at inf".into()));
                    }
                }
            }
        }
        return Ok((cur, map));
    }
}

/// A section in the local coordinates at `v` (`x′ = s⁴x`, `y′ = s⁶y` at ∞).
pub fn section_local(p: &SurfacePoint, v: &Place) -> Result<Option<(RatFunc, RatFunc)>> {
    let (x, y) = match p.coords() {
        None => return Ok(None),
        Some(c) => c,
    };
    let s = RatFunc::var();
    match v {
        Place::Infinity => {
            let inv = s.inv().expect("s != 0");
            let xs = &x.compose(&inv)? * &s.pow(4);
            let ys = &y.compose(&inv)? * &s.pow(6);
            Ok(Some((xs, ys)))
        }
        _ => {
            let a = v.rational_point().ok_or_else(|| Error::UnsupportedPlace(v.to_string()))?;
            let shift = &s + &RatFunc::constant(a);
            Ok(Some((x.compose(&shift)?, y.compose(&shift)?)))
        }
    }
}

fn branch_matches(b: &Branch, xs: &RatFunc, ys: &RatFunc, center: &P9) -> Result<bool> {
    let origin = Place::point(F9::ZERO);
    match b {
        Branch::Slope(c) => {
            let dx = xs - &RatFunc::from(center.clone());
            if dx.is_zero() || ys.is_zero() {
                return Ok(false);
            }
            let ratio = ys / &dx;
            let (e, coeffs) = crate::algebra::laurent_expand(&ratio, &origin, 1)?;
            Ok(e == 0 && coeffs[0] == *c)
        }
        Branch::Power { e, value } => {
            let coeffs = crate::algebra::local_expand(ys, &origin, *e as usize + 1)?;
            Ok(coeffs[*e as usize] == *value && coeffs[..*e as usize].iter().all(|c| c.is_zero()))
        }
    }
}

/// The index of the fiber component met by a section (0 for the identity component).
pub fn component_of_section(p: &SurfacePoint, fd: &FiberData) -> Result<u32> {
    let (xs, ys) = match section_local(p, &fd.place)? {
        None => return Ok(0),
        Some(c) => c,
    };
    let origin = Place::point(F9::ZERO);
    if !xs.is_zero() && valuation(&xs, &origin)? < 0 {
        return Ok(0);
    }
    let mut best: Option<&Component> = None;
    for c in fd.components.iter().filter(|c| c.mult == 1 && c.index != 0) {
        let diff = &xs - &RatFunc::from(c.center.clone());
        let close = diff.is_zero() || valuation(&diff, &origin)? >= c.kappa as i64;
        if !close {
            continue;
        }
        if let Some(b) = &c.branch {
            if !branch_matches(b, &xs, &ys, &c.center)? {
                continue;
            }
        }
        if best.is_none_or(|bc| c.kappa > bc.kappa) {
            best = Some(c);
        }
    }
    Ok(best.map_or(0, |c| c.index))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    fn model(a2: &str, a4: &str, a6: &str) -> WeierstrassModel {
        WeierstrassModel::new(parse_poly(a2).unwrap(), parse_poly(a4).unwrap(), parse_poly(a6).unwrap())
    }

    #[test]
    fn fibration_one() {
        let m = model("2(t^3+1)", "t^6", "0");
        let cfg = classify_all(&m).unwrap();
        let lines: Vec<String> = cfg.fibers.iter().map(|f| f.report_line()).collect();
        assert_eq!(
            lines,
            [
                "place=0 kodaira=I12 lattice=A11 v_delta=12 m=12",
                "place=1 kodaira=I3 lattice=A2 v_delta=3 m=3",
                "place=inf kodaira=I3* lattice=D7 v_delta=9 m=8",
            ]
        );
    }

    #[test]
    fn fibration_five_types() {
        let m = model("-t^3", "t^3", "0");
        let cfg = classify_all(&m).unwrap();
        let labels: Vec<String> = cfg.fibers.iter().map(|f| format!("{}:{}", f.place, f.kodaira)).collect();
        assert!(labels.contains(&"0:III*".to_string()), "{labels:?}");
        let p = SurfacePoint::from_polys(P9::one(), P9::one());
        for f in &cfg.fibers {
            let c = component_of_section(&p, f).unwrap();
            if f.place.is_infinity() {
                assert_ne!(c, 0);
            } else {
                assert_eq!(c, 0, "{}", f.place);
            }
        }
    }

    #[test]
    fn quasi_examples() {
        let f = parse_poly("t^3(t+1)^4").unwrap();
        assert_eq!(quasi_fiber_type(&f, &Place::point(F9::ZERO)).unwrap(), KodairaType::IVStar);
        assert_eq!(quasi_fiber_type(&f, &Place::Infinity).unwrap(), KodairaType::IIStar);
        let g = parse_poly("t^10+t^2").unwrap();
        assert_eq!(quasi_fiber_type(&g, &Place::point(F9::ZERO)).unwrap(), KodairaType::IV);
        let cfg = classify_all(&model("0", "0", "t^10+t^2")).unwrap();
        assert_eq!(cfg.fibers.len(), 10);
        assert!(cfg.fibers.iter().all(|f| f.kodaira == KodairaType::IV));
    }

    #[test]
    fn kodaira_symbols_round_trip() {
        for k in
            [KodairaType::I(12), KodairaType::IStar(0), KodairaType::IStar(3), KodairaType::IIStar, KodairaType::IV]
        {
            assert_eq!(KodairaType::parse(&k.to_string()).unwrap(), k);
        }
    }

    #[test]
    fn non_minimal_detected() {
        // every a_i divisible by t^i: the scaling x = t²x', y = t³y' is a smaller model
        let local = LocalModel {
            a2: parse_poly("t^2 + t^3").unwrap(),
            a4: parse_poly("t^4").unwrap(),
            a6: parse_poly("t^6").unwrap(),
        };
        assert!(matches!(classify_local(&local).unwrap(), LocalOutcome::NonMinimal { .. }));
    }
}
