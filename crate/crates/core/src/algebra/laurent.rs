//! Univariate Laurent polynomials in `q` with rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::gauss::GaussRational;
use super::rational::Rational;
use crate::error::{Error, Result};

/// A Laurent polynomial `sum c_k q^k`, stored sparse and sorted by exponent.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct QLaurent {
    terms: Vec<(i32, Rational)>,
}

impl QLaurent {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn int(n: i64) -> Self {
        Self::constant(Rational::from_int(n))
    }

    pub fn monomial(c: Rational, e: i32) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Self { terms: vec![(e, c)] }
        }
    }

    /// `q^e`.
    pub fn q_pow(e: i32) -> Self {
        Self::monomial(Rational::one(), e)
    }

    /// Builds from unsorted pairs, combining repeated exponents.
    pub fn from_terms(mut pairs: Vec<(i32, Rational)>) -> Self {
        pairs.sort_by_key(|p| p.0);
        let mut out: Vec<(i32, Rational)> = Vec::with_capacity(pairs.len());
        for (e, c) in pairs {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc += &c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Self { terms: out }
    }

    pub fn terms(&self) -> &[(i32, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    /// Lowest and highest exponent, or `None` for zero.
    pub fn exponent_range(&self) -> Option<(i32, i32)> {
        Some((self.terms.first()?.0, self.terms.last()?.0))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: i32) -> Rational {
        match self.terms.binary_search_by_key(&e, |p| p.0) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn leading(&self) -> Option<&(i32, Rational)> {
        self.terms.last()
    }

    /// Returns `(c, k)` if this is a single monomial `c q^k`.
    pub fn as_monomial(&self) -> Option<(Rational, i32)> {
        match self.terms.as_slice() {
            [(e, c)] => Some((c.clone(), *e)),
            _ => None,
        }
    }

    /// Returns `(sign, k)` if this equals `sign * q^k` with `sign = ±1`.
    pub fn as_signed_qpow(&self) -> Option<(i32, i32)> {
        let (c, k) = self.as_monomial()?;
        if c.is_one() {
            Some((1, k))
        } else if (-&c).is_one() {
            Some((-1, k))
        } else {
            None
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    pub fn shift(&self, k: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes `q -> q^{-1}`.
    pub fn bar(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (-e, c.clone())).collect())
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            acc += &(c * &x.pow(*e));
        }
        acc
    }

    /// Evaluates at `q = i`.
    pub fn eval_i(&self) -> GaussRational {
        let mut re = Rational::zero();
        let mut im = Rational::zero();
        for (e, c) in &self.terms {
            match e.rem_euclid(4) {
                0 => re += c,
                1 => im += c,
                2 => re -= c,
                _ => im -= c,
            }
        }
        GaussRational::new(re, im)
    }

    /// Polynomial division with remainder after clearing negative powers.
    /// Both operands are treated as polynomials in `q` shifted to start at degree 0;
    /// the quotient carries the exponent offset.
    fn poly_divrem(num: &[(i32, Rational)], den: &[(i32, Rational)]) -> (Vec<Rational>, Vec<Rational>) {
        let n0 = num[0].0;
        let d0 = den[0].0;
        let nd = (num.last().unwrap().0 - n0) as usize;
        let dd = (den.last().unwrap().0 - d0) as usize;
        let mut r = vec![Rational::zero(); nd + 1];
        for (e, c) in num {
            r[(e - n0) as usize] = c.clone();
        }
        let mut d = vec![Rational::zero(); dd + 1];
        for (e, c) in den {
            d[(e - d0) as usize] = c.clone();
        }
        if nd < dd {
            return (Vec::new(), r);
        }
        let lead_inv = d[dd].recip();
        let mut quo = vec![Rational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &r[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.iter().enumerate() {
                if !dj.is_zero() {
                    let t = &c * dj;
                    r[k + j] -= &t;
                }
            }
            quo[k] = c;
        }
        r.truncate(dd);
        (quo, r)
    }

    /// Exact division in the Laurent ring.
    pub fn exact_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::NotDivisible("division by zero".into()));
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let (quo, rem) = Self::poly_divrem(&self.terms, &other.terms);
        if rem.iter().any(|c| !c.is_zero()) || quo.is_empty() {
            return Err(Error::NotDivisible(format!("{self} by {other}")));
        }
        let off = self.terms[0].0 - other.terms[0].0;
        Ok(Self::from_terms(
            quo.into_iter().enumerate().map(|(k, c)| (k as i32 + off, c)).collect(),
        ))
    }

    /// Normalises a nonzero polynomial to be monic with lowest exponent zero.
    pub fn normalized(&self) -> Self {
        match (self.terms.first(), self.terms.last()) {
            (Some((lo, _)), Some((_, lc))) => self.scale(&lc.recip()).shift(-lo),
            _ => Self::zero(),
        }
    }

    /// Monic greatest common divisor, with lowest exponent zero.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.normalized();
        }
        if other.is_zero() {
            return self.normalized();
        }
        let mut a = self.normalized();
        let mut b = other.normalized();
        if a.degree_span() < b.degree_span() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let (_, rem) = Self::poly_divrem(&a.terms, &b.terms);
            let r = Self::from_terms(rem.into_iter().enumerate().map(|(k, c)| (k as i32, c)).collect());
            a = b;
            b = r.normalized();
        }
        a.normalized()
    }

    /// Highest minus lowest exponent.
    pub fn degree_span(&self) -> i32 {
        self.exponent_range().map(|(a, b)| b - a).unwrap_or(-1)
    }
}

impl fmt::Display for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            match (*e, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => write!(f, "{}", fmt_qpow(*e))?,
                (_, false) => write!(f, "{a}*{}", fmt_qpow(*e))?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn fmt_qpow(e: i32) -> String {
    if e == 1 {
        "q".to_string()
    } else {
        format!("q^{e}")
    }
}

impl<'a> Add<&'a QLaurent> for &'a QLaurent {
    type Output = QLaurent;
    fn add(self, rhs: &QLaurent) -> QLaurent {
        let mut out = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &rhs.terms);
        while i < a.len() || j < b.len() {
            if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i >= a.len() || b[j].0 < a[i].0 {
                out.push(b[j].clone());
                j += 1;
            } else {
                let s = &a[i].1 + &b[j].1;
                if !s.is_zero() {
                    out.push((a[i].0, s));
                }
                i += 1;
                j += 1;
            }
        }
        QLaurent { terms: out }
    }
}

impl Neg for &QLaurent {
    type Output = QLaurent;
    fn neg(self) -> QLaurent {
        QLaurent {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl<'a> Sub<&'a QLaurent> for &'a QLaurent {
    type Output = QLaurent;
    fn sub(self, rhs: &QLaurent) -> QLaurent {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a QLaurent> for &'a QLaurent {
    type Output = QLaurent;
    fn mul(self, rhs: &QLaurent) -> QLaurent {
        if self.is_zero() || rhs.is_zero() {
            return QLaurent::zero();
        }
        let lo = self.terms[0].0 + rhs.terms[0].0;
        let hi = self.terms.last().unwrap().0 + rhs.terms.last().unwrap().0;
        let mut acc = vec![Rational::zero(); (hi - lo + 1) as usize];
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let t = c1 * c2;
                acc[(e1 + e2 - lo) as usize] += &t;
            }
        }
        QLaurent {
            terms: acc
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k as i32 + lo, c))
                .collect(),
        }
    }
}

impl Neg for QLaurent {
    type Output = QLaurent;
    fn neg(self) -> QLaurent {
        -&self
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                &self + &rhs
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                &self - &rhs
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                &self * &rhs
            }
        }
    };
}
pub(crate) use owned_ops;
owned_ops!(QLaurent);

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ql(pairs: &[(i32, i64)]) -> QLaurent {
        QLaurent::from_terms(pairs.iter().map(|&(e, c)| (e, Rational::from_int(c))).collect())
    }

    #[test]
    fn exact_division_and_failure() {
        let a = ql(&[(-1, 1), (1, -1)]);
        let b = ql(&[(0, 1), (2, 1)]);
        let p = &a * &b;
        assert_eq!(p.exact_div(&b).unwrap(), a);
        assert!(ql(&[(0, 1), (1, 1)]).exact_div(&ql(&[(0, 1), (1, -1)])).is_err());
    }

    #[test]
    fn gcd_is_monic() {
        let x = ql(&[(0, -1), (1, 1)]);
        let y = ql(&[(0, 1), (1, 1)]);
        let z = ql(&[(0, 2), (1, 3)]);
        let g = (&x * &y).shift(-3).gcd(&(&x * &z).scale(&Rational::new(5, 7)));
        assert_eq!(g, x);
    }

    #[test]
    fn display() {
        assert_eq!(ql(&[(-3, 1)]).to_string(), "q^-3");
        assert_eq!(ql(&[(1, 1), (-1, -1)]).to_string(), "q - q^-1");
        assert_eq!(ql(&[(0, 2), (2, -3)]).to_string(), "-3*q^2 + 2");
    }

    fn arb() -> impl Strategy<Value = QLaurent> {
        proptest::collection::vec((-4i32..4, -3i64..4), 0..5).prop_map(|v| ql(&v))
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb(), b in arb(), c in arb()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            if !b.is_zero() {
                prop_assert_eq!((&a * &b).exact_div(&b).unwrap(), a.clone());
            }
        }

        #[test]
        fn gcd_divides(a in arb(), b in arb(), c in arb()) {
            prop_assume!(!c.is_zero() && !(a.is_zero() && b.is_zero()));
            let g = (&a * &c).gcd(&(&b * &c));
            prop_assert!((&a * &c).exact_div(&g).is_ok());
            prop_assert!((&b * &c).exact_div(&g).is_ok());
            prop_assert!(g.exact_div(&c.normalized()).is_ok());
        }
    }
}
