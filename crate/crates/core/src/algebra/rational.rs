//! Rational functions over F₉.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::field::{Field, F9};
use super::poly::{write_poly, P9};
use crate::error::{Error, Result};

/// `num / den` with `den` monic and `gcd(num, den) = 1`; zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: P9,
    den: P9,
}

impl RatFunc {
    pub fn new(num: P9, den: P9) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc::from_poly(P9::zero()));
        }
        let g = num.gcd(&den);
        let num = num.div_exact(&g)?;
        let den = den.div_exact(&g)?;
        let lc = den.leading();
        let inv = lc.inv().expect("nonzero leading coefficient");
        Ok(RatFunc { num: num.scale(&inv), den: den.scale(&inv) })
    }

    pub fn from_poly(p: P9) -> Self {
        RatFunc { num: p, den: P9::one() }
    }

    pub fn constant(a: F9) -> Self {
        RatFunc::from_poly(P9::constant(a))
    }

    pub fn var() -> Self {
        RatFunc::from_poly(P9::var())
    }

    pub fn num(&self) -> &P9 {
        &self.num
    }

    pub fn den(&self) -> &P9 {
        &self.den
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    /// The polynomial, if the denominator is trivial.
    pub fn as_poly(&self) -> Option<&P9> {
        self.is_poly().then_some(&self.num)
    }

    pub fn is_constant(&self) -> bool {
        self.is_poly() && self.num.is_constant()
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inv().expect("negative power of zero") } else { self.clone() };
        let e = e.unsigned_abs() as u32;
        RatFunc { num: base.num.pow(e), den: base.den.pow(e) }
    }

    pub fn checked_div(&self, o: &RatFunc) -> Result<RatFunc> {
        let inv = o.inv().ok_or(Error::DivisionByZero)?;
        Ok(self * &inv)
    }

    /// `deg num - deg den`; minus the valuation at infinity.
    pub fn degree(&self) -> i64 {
        self.num.deg() - self.den.deg()
    }

    /// Evaluate at a point of F₉, `None` at a pole.
    pub fn eval(&self, x: F9) -> Option<F9> {
        let d = self.den.eval(&x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(&x) / d)
        }
    }

    /// Substitute a rational function for the variable.
    pub fn compose(&self, q: &RatFunc) -> Result<RatFunc> {
        let eval = |p: &P9| {
            let mut acc = RatFunc::zero();
            for a in p.coeffs().iter().rev() {
                acc = &(&acc * q) + &RatFunc::constant(*a);
            }
            acc
        };
        eval(&self.num).checked_div(&eval(&self.den))
    }
}

impl Field for RatFunc {
    fn zero() -> Self {
        RatFunc::from_poly(P9::zero())
    }
    fn one() -> Self {
        RatFunc::from_poly(P9::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(RatFunc::new(self.den.clone(), self.num.clone()).expect("nonzero"))
        }
    }
    fn from_int(n: i64) -> Self {
        RatFunc::constant(F9::new(n, 0))
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc::new(&self.num + &o.num, self.den.clone()).expect("nonzero den");
        }
        RatFunc::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den).expect("nonzero den")
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self + &(-o)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        if self.is_poly() && o.is_poly() {
            return RatFunc::from_poly(&self.num * &o.num);
        }
        RatFunc::new(&self.num * &o.num, &self.den * &o.den).expect("nonzero den")
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    /// Panics on division by zero; use [`RatFunc::checked_div`] otherwise.
    fn div(self, o: &RatFunc) -> RatFunc {
        self.checked_div(o).expect("division by zero rational function")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $m(self, o: RatFunc) -> RatFunc {
                (&self).$m(&o)
            }
        }
        impl $tr<&RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, o: &RatFunc) -> RatFunc {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl From<P9> for RatFunc {
    fn from(p: P9) -> Self {
        RatFunc::from_poly(p)
    }
}

impl From<F9> for RatFunc {
    fn from(a: F9) -> Self {
        RatFunc::constant(a)
    }
}

/// Canonical text: a polynomial, or `(num)/(den)`.
pub fn ratfunc_string(r: &RatFunc, var: &str) -> String {
    let mut s = String::new();
    let wrap = |p: &P9| {
        p.coeffs().iter().filter(|a| !a.is_zero()).count() > 1
            || p.coeffs().last().is_some_and(|a| a.re() != 0 && a.im() != 0)
    };
    if r.is_poly() {
        write_poly(&mut s, &r.num, var).expect("string write");
        return s;
    }
    let part = |p: &P9| {
        let mut t = String::new();
        write_poly(&mut t, p, var).expect("string write");
        if wrap(p) {
            format!("({t})")
        } else {
            t
        }
    };
    s.push_str(&part(&r.num));
    s.push('/');
    s.push_str(&part(&r.den));
    s
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&ratfunc_string(self, "t"))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> RatFunc {
        RatFunc::var()
    }

    #[test]
    fn normal_form() {
        let r =
            RatFunc::new(P9::from_coeffs(vec![F9::ZERO, F9::TWO]), P9::from_coeffs(vec![F9::ZERO, F9::TWO, F9::TWO]))
                .unwrap();
        // 2t / (2t^2 + 2t) = 1/(t + 1)
        assert_eq!(r.num(), &P9::one());
        assert_eq!(r.den(), &P9::from_coeffs(vec![F9::ONE, F9::ONE]));
        assert!(RatFunc::new(P9::one(), P9::zero()).is_err());
    }

    #[test]
    fn field_ops() {
        let a = &t().pow(3) / &(&t() - &RatFunc::one());
        let b = &a * &a.inv().unwrap();
        assert_eq!(b, RatFunc::one());
        assert_eq!(&(&a + &a) + &a, RatFunc::zero());
        assert_eq!(a.to_string(), "t^3/(t + 2)");
    }
}
