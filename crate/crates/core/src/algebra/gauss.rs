//! Gaussian rationals `Q(i)` and polynomials over them.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::mpoly::{MPoly, Mono, MonoMap};
use super::rational::Rational;
use crate::error::{Error, Result};

/// `re + i im` with rational parts.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::real(Rational::one())
    }

    pub fn i() -> Self {
        Self::new(Rational::zero(), Rational::one())
    }

    pub fn real(re: Rational) -> Self {
        Self::new(re, Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    pub fn norm(&self) -> Rational {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn recip(&self) -> Self {
        let n = self.norm();
        assert!(!n.is_zero(), "reciprocal of zero");
        let c = self.conj();
        Self::new(&c.re / &n, &c.im / &n)
    }

    /// `i^k`.
    pub fn i_pow(k: i32) -> Self {
        match k.rem_euclid(4) {
            0 => Self::one(),
            1 => Self::i(),
            2 => -&Self::one(),
            _ => -&Self::i(),
        }
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}*i", self.im),
            _ => write!(f, "{} + {}*i", self.re, self.im),
        }
    }
}

impl fmt::Debug for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> Add<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn add(self, r: &GaussRational) -> GaussRational {
        GaussRational::new(&self.re + &r.re, &self.im + &r.im)
    }
}

impl<'a> Sub<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn sub(self, r: &GaussRational) -> GaussRational {
        GaussRational::new(&self.re - &r.re, &self.im - &r.im)
    }
}

impl Neg for &GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational::new(-&self.re, -&self.im)
    }
}

impl<'a> Mul<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn mul(self, r: &GaussRational) -> GaussRational {
        GaussRational::new(
            &(&self.re * &r.re) - &(&self.im * &r.im),
            &(&self.re * &r.im) + &(&self.im * &r.re),
        )
    }
}

impl<'a> Div<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn div(self, r: &GaussRational) -> GaussRational {
        self * &r.recip()
    }
}

/// A polynomial over `Q(i)` stored as `re + i im`, with `re`, `im` free of `q`.
#[derive(Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct GaussPoly {
    pub re: MPoly,
    pub im: MPoly,
}

impl GaussPoly {
    pub fn zero(nx: usize, nz: usize) -> Self {
        Self {
            re: MPoly::zero(nx, nz),
            im: MPoly::zero(nx, nz),
        }
    }

    /// Specialises `q = i` in a polynomial with Laurent dependence on `q`.
    pub fn from_mpoly(p: &MPoly) -> Self {
        let (nx, nz) = (p.nx(), p.nz());
        let mut re = Vec::new();
        let mut im = Vec::new();
        for (m, c) in p.terms() {
            let base = m.with_q(0);
            match m.q.rem_euclid(4) {
                0 => re.push((base, c.clone())),
                1 => im.push((base, c.clone())),
                2 => re.push((base, -c)),
                _ => im.push((base, -c)),
            }
        }
        Self {
            re: MPoly::from_terms(nx, nz, re),
            im: MPoly::from_terms(nx, nz, im),
        }
    }

    /// Embeds a rational polynomial (any `q` is specialised first).
    pub fn from_real(p: &MPoly) -> Self {
        Self::from_mpoly(p)
    }

    pub fn nx(&self) -> usize {
        self.re.nx()
    }

    pub fn nz(&self) -> usize {
        self.re.nz()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        Self {
            re: &self.re.scale(&c.re) - &self.im.scale(&c.im),
            im: &self.re.scale(&c.im) + &self.im.scale(&c.re),
        }
    }

    pub fn mul_real(&self, p: &MPoly) -> Self {
        Self {
            re: &self.re * p,
            im: &self.im * p,
        }
    }

    /// Exact division by a polynomial with rational coefficients.
    pub fn exact_div_real(&self, d: &MPoly) -> Result<Self> {
        Ok(Self {
            re: self.re.exact_div(d)?,
            im: self.im.exact_div(d)?,
        })
    }

    /// Applies a monomial substitution whose images carry rational coefficients.
    pub fn substitute(&self, map: &MonoMap) -> Self {
        Self {
            re: self.re.substitute(map),
            im: self.im.substitute(map),
        }
    }

    pub fn swap_x(&self, a: usize, b: usize) -> Self {
        Self {
            re: self.re.swap_x(a, b),
            im: self.im.swap_x(a, b),
        }
    }

    pub fn is_skew_x(&self) -> bool {
        self.re.is_skew_x() && self.im.is_skew_x()
    }

    pub fn is_symmetric_x(&self) -> bool {
        self.re.is_symmetric_x() && self.im.is_symmetric_x()
    }

    pub fn is_symmetric_z(&self) -> bool {
        self.re.is_symmetric_z() && self.im.is_symmetric_z()
    }

    pub fn max_x_exponent(&self) -> Option<i32> {
        match (self.re.max_x_exponent(), self.im.max_x_exponent()) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        }
    }

    /// Coefficient of a monomial.
    pub fn coeff(&self, m: &Mono) -> GaussRational {
        let find = |p: &MPoly| {
            p.terms()
                .binary_search_by(|t| t.0.cmp(m))
                .map(|i| p.terms()[i].1.clone())
                .unwrap_or_else(|_| Rational::zero())
        };
        GaussRational::new(find(&self.re), find(&self.im))
    }

    /// All monomials appearing in either part.
    pub fn monomials(&self) -> Vec<Mono> {
        let mut v: Vec<Mono> = self.re.terms().iter().chain(self.im.terms()).map(|t| t.0).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn from_parts(re: MPoly, im: MPoly) -> Result<Self> {
        if re.nx() != im.nx() || re.nz() != im.nz() {
            return Err(Error::InvalidArgument("layout mismatch".into()));
        }
        Ok(Self { re, im })
    }
}

impl<'a> Add<&'a GaussPoly> for &'a GaussPoly {
    type Output = GaussPoly;
    fn add(self, r: &GaussPoly) -> GaussPoly {
        GaussPoly {
            re: &self.re + &r.re,
            im: &self.im + &r.im,
        }
    }
}

impl<'a> Sub<&'a GaussPoly> for &'a GaussPoly {
    type Output = GaussPoly;
    fn sub(self, r: &GaussPoly) -> GaussPoly {
        GaussPoly {
            re: &self.re - &r.re,
            im: &self.im - &r.im,
        }
    }
}

impl Neg for &GaussPoly {
    type Output = GaussPoly;
    fn neg(self) -> GaussPoly {
        GaussPoly {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl<'a> Mul<&'a GaussPoly> for &'a GaussPoly {
    type Output = GaussPoly;
    fn mul(self, r: &GaussPoly) -> GaussPoly {
        GaussPoly {
            re: &(&self.re * &r.re) - &(&self.im * &r.im),
            im: &(&self.re * &r.im) + &(&self.im * &r.re),
        }
    }
}

impl fmt::Display for GaussPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "i*({})", self.im),
            _ => write!(f, "{} + i*({})", self.re, self.im),
        }
    }
}

impl fmt::Debug for GaussPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_ops() {
        let a = GaussRational::new(Rational::from_int(1), Rational::from_int(2));
        let b = GaussRational::new(Rational::from_int(3), Rational::from_int(-1));
        assert_eq!(&(&a / &b) * &b, a);
        assert_eq!(GaussRational::i_pow(3), -&GaussRational::i());
    }

    #[test]
    fn specialisation_folds_q_squared() {
        let p = MPoly::parse("q^2 * X1 + q^3 + q^-1", 1, 0).unwrap();
        let g = p.specialize_qi();
        assert_eq!(g.re, MPoly::parse("-X1", 1, 0).unwrap());
        assert_eq!(g.im, MPoly::parse("-2", 1, 0).unwrap());
    }
}
