//! The fields F₃ and F₉ = F₃[i]/(i² + 1).

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// Arithmetic needed by [`Poly`](super::Poly) coefficients.
pub trait Field:
    Clone + PartialEq + fmt::Debug + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// Image of a prime-field element `n mod 3`.
    fn from_int(n: i64) -> Self {
        let r = n.rem_euclid(3);
        let mut acc = Self::zero();
        for _ in 0..r {
            acc = acc + Self::one();
        }
        acc
    }
}

/// Which finite field the scalars of a model live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum FieldKind {
    F3,
    F9,
}

impl FieldKind {
    /// All elements of the field, in canonical order (`0, 1, 2` first).
    pub fn elements(self) -> Vec<F9> {
        match self {
            FieldKind::F3 => (0..3).map(|a| F9::new(a, 0)).collect(),
            FieldKind::F9 => F9::all().collect(),
        }
    }

    pub fn contains(self, a: F9) -> bool {
        match self {
            FieldKind::F3 => a.im() == 0,
            FieldKind::F9 => true,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "F3" | "f3" => Ok(FieldKind::F3),
            "F9" | "f9" => Ok(FieldKind::F9),
            other => Err(Error::Parse(format!("unknown field `{other}` (expected F3 or F9)"))),
        }
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::F3 => f.write_str("F3"),
            FieldKind::F9 => f.write_str("F9"),
        }
    }
}

/// An element `a + b·i` of F₉, components reduced to `{0, 1, 2}`.
///
/// Elements of F₃ are the ones with `b = 0`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct F9 {
    re: u8,
    im: u8,
}

impl F9 {
    pub const ZERO: F9 = F9 { re: 0, im: 0 };
    pub const ONE: F9 = F9 { re: 1, im: 0 };
    pub const TWO: F9 = F9 { re: 2, im: 0 };
    pub const I: F9 = F9 { re: 0, im: 1 };

    pub fn new(re: i64, im: i64) -> F9 {
        F9 { re: re.rem_euclid(3) as u8, im: im.rem_euclid(3) as u8 }
    }

    pub fn re(self) -> u8 {
        self.re
    }

    pub fn im(self) -> u8 {
        self.im
    }

    /// The nine elements, ordered by `(im, re)` so F₃ comes first.
    pub fn all() -> impl Iterator<Item = F9> {
        (0..3).flat_map(|b| (0..3).map(move |a| F9::new(a, b)))
    }

    pub fn pow(self, mut e: u64) -> F9 {
        let mut base = self;
        let mut acc = F9::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Frobenius `a ↦ a³`, which is also the inverse of cubing on F₉.
    pub fn frobenius(self) -> F9 {
        F9 { re: self.re, im: (3 - self.im) % 3 }
    }

    /// The unique cube root (cubing is a field automorphism of order 2).
    pub fn cube_root(self) -> F9 {
        self.frobenius()
    }

    pub fn is_square(self) -> bool {
        self.is_zero() || self.pow(4) == F9::ONE
    }

    /// A square root, if one exists in F₉. Deterministic: the smaller of the two in
    /// the canonical order.
    pub fn sqrt(self) -> Option<F9> {
        F9::all().find(|r| *r * *r == self)
    }

    pub fn checked_div(self, rhs: F9) -> Result<F9> {
        rhs.inv().map(|r| self * r).ok_or(Error::DivisionByZero)
    }
}

impl PartialOrd for F9 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for F9 {
    /// The order of [`F9::all`]: by imaginary part, then real part.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.im, self.re).cmp(&(other.im, other.re))
    }
}

impl Field for F9 {
    fn zero() -> Self {
        F9::ZERO
    }
    fn one() -> Self {
        F9::ONE
    }
    fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            // The multiplicative group has order 8.
            Some(self.pow(7))
        }
    }
    fn from_int(n: i64) -> Self {
        F9::new(n, 0)
    }
}

impl Add for F9 {
    type Output = F9;
    fn add(self, o: F9) -> F9 {
        F9 { re: (self.re + o.re) % 3, im: (self.im + o.im) % 3 }
    }
}

impl Sub for F9 {
    type Output = F9;
    fn sub(self, o: F9) -> F9 {
        F9 { re: (self.re + 3 - o.re) % 3, im: (self.im + 3 - o.im) % 3 }
    }
}

impl Neg for F9 {
    type Output = F9;
    fn neg(self) -> F9 {
        F9 { re: (3 - self.re) % 3, im: (3 - self.im) % 3 }
    }
}

impl Mul for F9 {
    type Output = F9;
    fn mul(self, o: F9) -> F9 {
        let (a, b, c, d) = (self.re as u32, self.im as u32, o.re as u32, o.im as u32);
        // (a + bi)(c + di) = (ac - bd) + (ad + bc)i
        let re = (a * c + 2 * b * d) % 3;
        let im = (a * d + b * c) % 3;
        F9 { re: re as u8, im: im as u8 }
    }
}

impl Div for F9 {
    type Output = F9;
    /// Panics on division by zero; use [`F9::checked_div`] for a fallible version.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: F9) -> F9 {
        self * o.inv().expect("division by zero in F9")
    }
}

impl AddAssign for F9 {
    fn add_assign(&mut self, o: F9) {
        *self = *self + o;
    }
}

impl SubAssign for F9 {
    fn sub_assign(&mut self, o: F9) {
        *self = *self - o;
    }
}

impl MulAssign for F9 {
    fn mul_assign(&mut self, o: F9) {
        *self = *self * o;
    }
}

impl fmt::Display for F9 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re, self.im) {
            (a, 0) => write!(f, "{a}"),
            (0, 1) => f.write_str("i"),
            (0, b) => write!(f, "{b}*i"),
            (a, 1) => write!(f, "{a}+i"),
            (a, b) => write!(f, "{a}+{b}*i"),
        }
    }
}

impl fmt::Debug for F9 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_identities() {
        assert_eq!(F9::ONE + F9::TWO, F9::ZERO);
        assert_eq!(F9::I * F9::I, F9::TWO);
        assert_eq!(F9::TWO.inv(), Some(F9::TWO));
        assert_eq!(F9::ZERO.inv(), None);
        assert!(F9::ONE.checked_div(F9::ZERO).is_err());
    }

    #[test]
    fn field_axioms_by_exhaustion() {
        for a in F9::all() {
            assert_eq!(a + (-a), F9::ZERO);
            if !a.is_zero() {
                assert_eq!(a * a.inv().unwrap(), F9::ONE);
            }
            for b in F9::all() {
                assert_eq!(a + b, b + a);
                assert_eq!(a * b, b * a);
                assert_eq!((a - b) + b, a);
                for c in F9::all() {
                    assert_eq!((a + b) + c, a + (b + c));
                    assert_eq!((a * b) * c, a * (b * c));
                    assert_eq!(a * (b + c), a * b + a * c);
                }
            }
        }
    }

    #[test]
    fn frobenius_and_roots() {
        for a in F9::all() {
            assert_eq!(a.pow(3), a.frobenius());
            assert_eq!(a.cube_root().pow(3), a);
            assert_eq!(a.is_square(), a.sqrt().is_some());
            if let Some(r) = a.sqrt() {
                assert_eq!(r * r, a);
            }
        }
        // Exactly half of the nonzero elements are squares.
        assert_eq!(F9::all().filter(|a| !a.is_zero() && a.is_square()).count(), 4);
        // Every element of F3 is a square in F9.
        assert!((0..3).all(|a| F9::new(a, 0).is_square()));
    }

    #[test]
    fn display() {
        let shown: Vec<String> = F9::all().map(|a| a.to_string()).collect();
        assert_eq!(shown, ["0", "1", "2", "i", "1+i", "2+i", "2*i", "1+2*i", "2+2*i"]);
    }
}
