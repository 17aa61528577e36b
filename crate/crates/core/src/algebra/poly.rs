//! Dense univariate polynomials over a [`Field`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{Field, F9};
use crate::error::{Error, Result};

/// Coefficients lowest degree first; the zero polynomial has no coefficients and
/// every other polynomial has a nonzero leading coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly<K> {
    c: Vec<K>,
}

/// Polynomials over F₉, the workhorse type.
pub type P9 = Poly<F9>;

impl<K: Field> Poly<K> {
    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(K::one())
    }

    pub fn constant(a: K) -> Self {
        Poly::from_coeffs(vec![a])
    }

    /// The variable `t`.
    pub fn var() -> Self {
        Poly::monomial(K::one(), 1)
    }

    pub fn monomial(a: K, k: usize) -> Self {
        let mut c = vec![K::zero(); k + 1];
        c[k] = a;
        Poly::from_coeffs(c)
    }

    pub fn from_coeffs(mut c: Vec<K>) -> Self {
        while c.last().is_some_and(|a| a.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn coeffs(&self) -> &[K] {
        &self.c
    }

    /// Coefficient of `t^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> K {
        self.c.get(k).cloned().unwrap_or_else(K::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with the convention `deg 0 = -1`.
    pub fn deg(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn leading(&self) -> K {
        self.c.last().cloned().unwrap_or_else(K::zero)
    }

    /// Order of vanishing at `t = 0`, `None` for zero.
    pub fn low_order(&self) -> Option<usize> {
        self.c.iter().position(|a| !a.is_zero())
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn scale(&self, a: &K) -> Self {
        Poly::from_coeffs(self.c.iter().map(|x| x.clone() * a.clone()).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading().inv() {
            Some(inv) => self.scale(&inv),
            None => Poly::zero(),
        }
    }

    /// Multiply by `t^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![K::zero(); k];
        c.extend(self.c.iter().cloned());
        Poly { c }
    }

    /// Divide by `t^k`, dropping lower terms.
    pub fn shift_down(&self, k: usize) -> Self {
        Poly::from_coeffs(self.c.iter().skip(k).cloned().collect())
    }

    /// Reduce modulo `t^n`.
    pub fn truncate(&self, n: usize) -> Self {
        Poly::from_coeffs(self.c.iter().take(n).cloned().collect())
    }

    pub fn eval(&self, x: &K) -> K {
        let mut acc = K::zero();
        for a in self.c.iter().rev() {
            acc = acc * x.clone() + a.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Poly::from_coeffs(self.c.iter().enumerate().skip(1).map(|(k, a)| a.clone() * K::from_int(k as i64)).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Substitute a polynomial for the variable: `self(q)`.
    pub fn compose(&self, q: &Self) -> Self {
        let mut acc = Poly::zero();
        for a in self.c.iter().rev() {
            acc = &(&acc * q) + &Poly::constant(a.clone());
        }
        acc
    }

    /// `t^n · self(1/t)`; requires `n ≥ deg`.
    pub fn reverse(&self, n: usize) -> Self {
        assert!(self.deg() <= n as i64, "reverse: degree exceeds bound");
        let mut c = vec![K::zero(); n + 1];
        for (k, a) in self.c.iter().enumerate() {
            c[n - k] = a.clone();
        }
        Poly::from_coeffs(c)
    }

    /// Quotient and remainder; errors on division by zero.
    pub fn divrem(&self, q: &Self) -> Result<(Self, Self)> {
        let lead_inv = q.leading().inv().ok_or(Error::DivisionByZero)?;
        let dq = q.c.len() - 1;
        let mut r = self.c.clone();
        if r.len() < q.c.len() {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![K::zero(); r.len() - dq];
        for k in (0..quot.len()).rev() {
            let coef = r[k + dq].clone() * lead_inv.clone();
            if coef.is_zero() {
                continue;
            }
            for (j, b) in q.c.iter().enumerate() {
                r[k + j] = r[k + j].clone() - coef.clone() * b.clone();
            }
            quot[k] = coef;
        }
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(r)))
    }

    pub fn rem(&self, q: &Self) -> Result<Self> {
        Ok(self.divrem(q)?.1)
    }

    /// Exact quotient; errors if `q` does not divide `self`.
    pub fn div_exact(&self, q: &Self) -> Result<Self> {
        let (quot, r) = self.divrem(q)?;
        if r.is_zero() {
            Ok(quot)
        } else {
            Err(Error::NotDivisible)
        }
    }

    pub fn divides(&self, other: &Self) -> bool {
        !self.is_zero() && other.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Map coefficients into another field.
    pub fn map<L: Field>(&self, f: impl Fn(&K) -> L) -> Poly<L> {
        Poly::from_coeffs(self.c.iter().map(f).collect())
    }
}

impl P9 {
    /// Taylor shift `self(t + a)`.
    pub fn taylor_shift(&self, a: F9) -> P9 {
        self.compose(&P9::from_coeffs(vec![a, F9::ONE]))
    }

    /// Frobenius twist: cube every coefficient.
    pub fn frobenius_coeffs(&self) -> P9 {
        self.map(|a| a.frobenius())
    }

    /// True if every coefficient lies in F₃.
    pub fn is_over_f3(&self) -> bool {
        self.c.iter().all(|a| a.im() == 0)
    }

    /// A polynomial `q` with `q² = self`, if one exists (the other is `−q`).
    pub fn sqrt(&self) -> Option<P9> {
        if self.is_zero() {
            return Some(P9::zero());
        }
        let d = self.degree()?;
        if d % 2 == 1 {
            return None;
        }
        let h = d / 2;
        let lead = self.leading().sqrt()?;
        let two_lead_inv = (lead + lead).inv()?;
        // coefficients of q from the top down: the t^{h+k} coefficient of q² is linear in q_k
        let mut q = vec![F9::ZERO; h + 1];
        q[h] = lead;
        for k in (0..h).rev() {
            let mut acc = self.coeff(h + k);
            for a in k + 1..=h {
                let b = h + k - a;
                if b > k && b <= h {
                    acc -= q[a] * q[b];
                }
            }
            q[k] = acc * two_lead_inv;
        }
        let q = P9::from_coeffs(q);
        (&q * &q == *self).then_some(q)
    }
}

impl<K: Field> Add for &Poly<K> {
    type Output = Poly<K>;
    fn add(self, o: &Poly<K>) -> Poly<K> {
        let n = self.c.len().max(o.c.len());
        Poly::from_coeffs((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl<K: Field> Sub for &Poly<K> {
    type Output = Poly<K>;
    fn sub(self, o: &Poly<K>) -> Poly<K> {
        let n = self.c.len().max(o.c.len());
        Poly::from_coeffs((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl<K: Field> Mul for &Poly<K> {
    type Output = Poly<K>;
    fn mul(self, o: &Poly<K>) -> Poly<K> {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![K::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = c[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::from_coeffs(c)
    }
}

impl<K: Field> Neg for &Poly<K> {
    type Output = Poly<K>;
    fn neg(self) -> Poly<K> {
        Poly { c: self.c.iter().map(|a| -a.clone()).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<K: Field> $tr for Poly<K> {
            type Output = Poly<K>;
            fn $m(self, o: Poly<K>) -> Poly<K> {
                (&self).$m(&o)
            }
        }
        impl<K: Field> $tr<&Poly<K>> for Poly<K> {
            type Output = Poly<K>;
            fn $m(self, o: &Poly<K>) -> Poly<K> {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<K: Field> Neg for Poly<K> {
    type Output = Poly<K>;
    fn neg(self) -> Poly<K> {
        -&self
    }
}

impl fmt::Display for P9 {
    /// Canonical form: descending powers, `c*t^k` terms joined by ` + `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self, "t")
    }
}

impl fmt::Debug for P9 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Write `p` in canonical form using `var` as the variable name.
pub fn write_poly(f: &mut impl fmt::Write, p: &P9, var: &str) -> fmt::Result {
    if p.is_zero() {
        return f.write_str("0");
    }
    let mut first = true;
    for k in (0..p.c.len()).rev() {
        let a = p.c[k];
        if a.is_zero() {
            continue;
        }
        if !first {
            f.write_str(" + ")?;
        }
        first = false;
        let compound = a.re() != 0 && a.im() != 0;
        let coef = if compound { format!("({a})") } else { a.to_string() };
        match (k, a == F9::ONE) {
            (0, _) => write!(f, "{a}")?,
            (1, true) => f.write_str(var)?,
            (1, false) => write!(f, "{coef}*{var}")?,
            (_, true) => write!(f, "{var}^{k}")?,
            (_, false) => write!(f, "{coef}*{var}^{k}")?,
        }
    }
    Ok(())
}

/// Render with a custom variable name.
pub fn poly_string(p: &P9, var: &str) -> String {
    let mut s = String::new();
    write_poly(&mut s, p, var).expect("writing to a string");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> P9 {
        P9::from_coeffs(c.iter().map(|&a| F9::new(a, 0)).collect())
    }

    #[test]
    fn frobenius_on_binomial() {
        let t1 = p(&[1, 1]);
        assert_eq!(t1.pow(3), p(&[1, 0, 0, 1]));
    }

    #[test]
    fn one_minus_t_cubed() {
        // (t^6 + 2t^3 + 1) - t^6 = 2t^3 + 1 = (1 - t)^3
        let a = p(&[1, 0, 0, 2, 0, 0, 1]);
        let b = P9::monomial(F9::ONE, 6);
        assert_eq!(&a - &b, p(&[1, -1]).pow(3));
        assert_eq!((&a - &b).to_string(), "2*t^3 + 1");
    }

    #[test]
    fn gcd_is_monic() {
        let f = &P9::monomial(F9::ONE, 12) * &p(&[1, -1]).pow(3);
        assert_eq!(f.gcd(&P9::var()), P9::var());
        assert_eq!(p(&[2, 2]).gcd(&p(&[1, 1]).pow(2)), p(&[1, 1]));
    }

    #[test]
    fn divrem_degree_bound() {
        let a = p(&[1, 2, 0, 1, 1]);
        let b = p(&[2, 0, 1]);
        let (q, r) = a.divrem(&b).unwrap();
        assert!(r.deg() < b.deg());
        assert_eq!(&(&q * &b) + &r, a);
        assert!(a.divrem(&P9::zero()).is_err());
    }

    #[test]
    fn display_forms() {
        let q = P9::from_coeffs(vec![F9::new(1, 1), F9::ONE, F9::I, F9::TWO]);
        assert_eq!(q.to_string(), "2*t^3 + i*t^2 + t + 1+i");
        assert_eq!(P9::zero().to_string(), "0");
        let r = P9::from_coeffs(vec![F9::ZERO, F9::new(2, 1)]);
        assert_eq!(r.to_string(), "(2+i)*t");
    }

    #[test]
    fn polynomial_square_roots() {
        let q = crate::algebra::parse_poly("i*t^3 + t + 2").unwrap();
        let sq = &q * &q;
        let r = sq.sqrt().unwrap();
        assert!(r == q || r == -&q);
        assert!(crate::algebra::parse_poly("t^3").unwrap().sqrt().is_none());
        assert!(crate::algebra::parse_poly("t^2 + t").unwrap().sqrt().is_none());
    }
}
