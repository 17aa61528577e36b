//! Places of the projective line, valuations, local expansions and root finding.

use std::cmp::Ordering;
use std::fmt;

use super::field::{Field, FieldKind, F9};
use super::poly::P9;
use super::rational::RatFunc;
use crate::error::{Error, Result};

/// A point of ℙ¹ over the working field: a monic irreducible polynomial or ∞.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Place {
    Finite(P9),
    Infinity,
}

impl Place {
    /// The degree-one place `t = a`.
    pub fn point(a: F9) -> Place {
        Place::Finite(P9::from_coeffs(vec![-a, F9::ONE]))
    }

    /// The coordinate `a` of a degree-one place.
    pub fn rational_point(&self) -> Option<F9> {
        match self {
            Place::Finite(p) if p.degree() == Some(1) => Some(-p.coeff(0)),
            _ => None,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Place::Infinity)
    }

    /// Parse `0`, `1+i`, `inf` and so on.
    pub fn parse(s: &str) -> Result<Place> {
        let s = s.trim();
        if s == "inf" || s == "∞" || s == "infinity" {
            return Ok(Place::Infinity);
        }
        let r = crate::algebra::parse::parse_ratfunc(s)?;
        match r.as_poly() {
            Some(p) if p.is_constant() => Ok(Place::point(p.coeff(0))),
            _ => Err(Error::Parse(format!("`{s}` is not a field element or `inf`"))),
        }
    }

    /// Sort key: finite rational places by element order, then ∞, then the rest.
    fn key(&self) -> (u8, Vec<F9>) {
        match self {
            Place::Finite(p) if p.degree() == Some(1) => (0, vec![-p.coeff(0)]),
            Place::Infinity => (1, Vec::new()),
            Place::Finite(p) => (2, p.coeffs().to_vec()),
        }
    }

    /// All rational places of ℙ¹ over the given field, ∞ last.
    pub fn all_rational(field: FieldKind) -> Vec<Place> {
        let mut v: Vec<Place> = field.elements().into_iter().map(Place::point).collect();
        v.push(Place::Infinity);
        v
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Place {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => f.write_str("inf"),
            Place::Finite(p) => match self.rational_point() {
                Some(a) => write!(f, "{a}"),
                None => write!(f, "[{p}]"),
            },
        }
    }
}

/// Order of vanishing of a nonzero polynomial at a place.
pub fn poly_valuation(p: &P9, v: &Place) -> Result<i64> {
    if p.is_zero() {
        return Err(Error::ZeroValuation);
    }
    match v {
        Place::Infinity => Ok(-p.deg()),
        Place::Finite(q) => {
            let mut n = 0;
            let mut cur = p.clone();
            loop {
                let (quot, r) = cur.divrem(q)?;
                if !r.is_zero() {
                    return Ok(n);
                }
                cur = quot;
                n += 1;
            }
        }
    }
}

/// Order of vanishing of a nonzero rational function (negative for poles).
pub fn valuation(r: &RatFunc, v: &Place) -> Result<i64> {
    Ok(poly_valuation(r.num(), v)? - poly_valuation(r.den(), v)?)
}

/// Valuation of a polynomial read as a section of weight `homogeneous_degree`:
/// at ∞ this is `homogeneous_degree − deg p` (so `a_i` has weight `2i`, Δ weight 24).
pub fn weighted_valuation(p: &P9, v: &Place, homogeneous_degree: i64) -> Result<i64> {
    match v {
        Place::Infinity => {
            if p.is_zero() {
                return Err(Error::ZeroValuation);
            }
            Ok(homogeneous_degree - p.deg())
        }
        _ => poly_valuation(p, v),
    }
}

/// Inverse of a power series with nonzero constant term, modulo `s^n`.
pub fn series_inverse(d: &P9, n: usize) -> Result<P9> {
    let d0inv = d.coeff(0).inv().ok_or(Error::DivisionByZero)?;
    let mut out = vec![F9::ZERO; n];
    for k in 0..n {
        let mut acc = if k == 0 { F9::ONE } else { F9::ZERO };
        for j in 1..=k {
            acc -= d.coeff(j) * out[k - j];
        }
        out[k] = acc * d0inv;
    }
    Ok(P9::from_coeffs(out))
}

/// Rewrite a polynomial in the local parameter `s` at a rational place:
/// `p(a + s)` at `t = a`, and `s^deg_bound · p(1/s)` at ∞.
pub fn local_poly(p: &P9, v: &Place, deg_bound: usize) -> Result<P9> {
    match v {
        Place::Infinity => Ok(p.reverse(deg_bound)),
        _ => {
            let a = v.rational_point().ok_or(Error::UnsupportedPlace(v.to_string()))?;
            Ok(p.taylor_shift(a))
        }
    }
}

/// Laurent expansion `(e, c)` with `f = Σ c_k s^{e+k}`, `order` coefficients.
pub fn laurent_expand(f: &RatFunc, v: &Place, order: usize) -> Result<(i64, Vec<F9>)> {
    if f.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let (num, den, shift) = match v {
        Place::Infinity => {
            let dn = f.num().deg().max(0) as usize;
            let dd = f.den().deg().max(0) as usize;
            // f(1/s) = s^{dd - dn} · rev(num) / rev(den)
            (f.num().reverse(dn), f.den().reverse(dd), dd as i64 - dn as i64)
        }
        _ => {
            let a = v.rational_point().ok_or(Error::UnsupportedPlace(v.to_string()))?;
            (f.num().taylor_shift(a), f.den().taylor_shift(a), 0)
        }
    };
    let vn = num.low_order().expect("nonzero") as i64;
    let vd = den.low_order().expect("nonzero") as i64;
    let num = num.shift_down(vn as usize);
    let den = den.shift_down(vd as usize);
    let inv = series_inverse(&den, order)?;
    let prod = (&num * &inv).truncate(order);
    let mut c: Vec<F9> = prod.coeffs().to_vec();
    c.resize(order, F9::ZERO);
    Ok((shift + vn - vd, c))
}

/// Coefficients of `s^0, …, s^{order−1}` in the expansion of `f` at `v`.
///
/// Errors if `f` has a pole at `v` or `v` is not a rational place.
pub fn local_expand(f: &RatFunc, v: &Place, order: usize) -> Result<Vec<F9>> {
    if f.is_zero() {
        return Ok(vec![F9::ZERO; order]);
    }
    let (e, c) = laurent_expand(f, v, order)?;
    if e < 0 {
        return Err(Error::Pole(v.to_string()));
    }
    let e = e as usize;
    let mut out = vec![F9::ZERO; order];
    if e < order {
        out[e..].copy_from_slice(&c[..order - e]);
    }
    Ok(out)
}

/// Roots in the given field with multiplicities, plus the factor without roots.
///
/// Roots are listed in canonical element order; `Π (t − a)^m · rest = p`.
pub fn roots_with_multiplicity(p: &P9, field: FieldKind) -> Result<(Vec<(F9, usize)>, P9)> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut rest = p.clone();
    let mut roots = Vec::new();
    for a in field.elements() {
        let lin = P9::from_coeffs(vec![-a, F9::ONE]);
        let mut m = 0;
        while rest.deg() > 0 && rest.eval(&a).is_zero() {
            rest = rest.div_exact(&lin)?;
            m += 1;
        }
        if m > 0 {
            roots.push((a, m));
        }
    }
    Ok((roots, rest))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> P9 {
        P9::from_coeffs(c.iter().map(|&a| F9::new(a, 0)).collect())
    }

    #[test]
    fn valuations() {
        let t = RatFunc::var();
        let f = &t.pow(3) / &(&t - &RatFunc::one());
        assert_eq!(valuation(&f, &Place::point(F9::ZERO)).unwrap(), 3);
        assert_eq!(valuation(&f, &Place::Infinity).unwrap(), -2);
        assert_eq!(valuation(&f, &Place::point(F9::ONE)).unwrap(), -1);
        assert!(valuation(&RatFunc::zero(), &Place::Infinity).is_err());
    }

    #[test]
    fn expansions() {
        let f = RatFunc::from_poly(&P9::monomial(F9::ONE, 10) + &P9::monomial(F9::ONE, 2));
        assert_eq!(local_expand(&f, &Place::point(F9::ZERO), 4).unwrap(), vec![F9::ZERO, F9::ZERO, F9::ONE, F9::ZERO]);
        let g = RatFunc::from_poly(p(&[1, 0, 1]));
        assert_eq!(local_expand(&g, &Place::point(F9::I), 2).unwrap(), vec![F9::ZERO, F9::new(0, 2)]);
        let h = RatFunc::new(P9::one(), p(&[1, -1])).unwrap();
        assert_eq!(local_expand(&h, &Place::point(F9::ZERO), 3).unwrap(), vec![F9::ONE; 3]);
        assert!(local_expand(&h, &Place::point(F9::ONE), 3).is_err());
    }

    #[test]
    fn roots_split_and_nonsplit() {
        let (r, rest) = roots_with_multiplicity(&p(&[1, 0, 1]), FieldKind::F9).unwrap();
        assert_eq!(r, vec![(F9::I, 1), (F9::new(0, 2), 1)]);
        assert!(rest.is_constant());
        let (r, rest) = roots_with_multiplicity(&p(&[1, 0, 1]), FieldKind::F3).unwrap();
        assert!(r.is_empty());
        assert_eq!(rest, p(&[1, 0, 1]));
    }

    #[test]
    fn place_order_and_display() {
        let mut v = [Place::Infinity, Place::point(F9::I), Place::point(F9::ONE), Place::point(F9::ZERO)];
        v.sort();
        let shown: Vec<String> = v.iter().map(|p| p.to_string()).collect();
        assert_eq!(shown, ["0", "1", "i", "inf"]);
    }
}
