//! Rational functions in `q` kept in lowest terms.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::gauss::GaussRational;
use super::laurent::QLaurent;
use super::rational::Rational;
use crate::error::{Error, Result};

/// An element of `Q(q)` as `num / den`, with `den` monic, coprime to `num`
/// and of lowest exponent zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QScalar {
    num: QLaurent,
    den: QLaurent,
}

impl QScalar {
    pub fn zero() -> Self {
        Self {
            num: QLaurent::zero(),
            den: QLaurent::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_laurent(QLaurent::one())
    }

    pub fn from_laurent(num: QLaurent) -> Self {
        Self {
            num,
            den: QLaurent::one(),
        }
    }

    pub fn from_rational(c: Rational) -> Self {
        Self::from_laurent(QLaurent::constant(c))
    }

    pub fn q_pow(k: i32) -> Self {
        Self::from_laurent(QLaurent::q_pow(k))
    }

    pub fn new(num: QLaurent, den: QLaurent) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: QLaurent, den: QLaurent) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.is_one() {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides"),
                den.exact_div(&g).expect("gcd divides"),
            )
        };
        let (lo, _) = d.exponent_range().expect("nonzero denominator");
        let lc = d.leading().expect("nonzero").1.clone();
        let inv = lc.recip();
        n = n.scale(&inv).shift(-lo);
        d = d.scale(&inv).shift(-lo);
        Self { num: n, den: d }
    }

    pub fn numer(&self) -> &QLaurent {
        &self.num
    }

    pub fn denom(&self) -> &QLaurent {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// Returns the Laurent polynomial if the denominator is trivial.
    pub fn as_laurent(&self) -> Option<&QLaurent> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InvalidArgument("reciprocal of zero".into()));
        }
        Ok(Self::canonical(self.den.clone(), self.num.clone()))
    }

    /// Specialises at `q = i`.
    pub fn specialize_qi(&self) -> Result<GaussRational> {
        let d = self.den.eval_i();
        if d.is_zero() {
            return Err(Error::PoleAtI(format!("{self}")));
        }
        Ok(&self.num.eval_i() / &d)
    }
}

impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> Add<&'a QScalar> for &'a QScalar {
    type Output = QScalar;
    fn add(self, rhs: &QScalar) -> QScalar {
        if self.den == rhs.den {
            return QScalar::canonical(&self.num + &rhs.num, self.den.clone());
        }
        QScalar::canonical(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl Neg for &QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        QScalar {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl<'a> Sub<&'a QScalar> for &'a QScalar {
    type Output = QScalar;
    fn sub(self, rhs: &QScalar) -> QScalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a QScalar> for &'a QScalar {
    type Output = QScalar;
    fn mul(self, rhs: &QScalar) -> QScalar {
        QScalar::canonical(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<'a> Div<&'a QScalar> for &'a QScalar {
    type Output = QScalar;
    fn div(self, rhs: &QScalar) -> QScalar {
        assert!(!rhs.is_zero(), "division by zero");
        QScalar::canonical(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ql(pairs: &[(i32, i64)]) -> QLaurent {
        QLaurent::from_terms(pairs.iter().map(|&(e, c)| (e, Rational::from_int(c))).collect())
    }

    #[test]
    fn canonical_form_cancels() {
        let a = ql(&[(0, 1), (2, -1)]);
        let b = ql(&[(0, 1), (1, 1)]);
        let s = QScalar::new(a.clone(), b.clone()).unwrap();
        assert!(s.denom().is_one());
        assert_eq!(s.numer(), &ql(&[(0, 1), (1, -1)]));
    }

    #[test]
    fn specialisation_at_i() {
        let s = QScalar::new(ql(&[(0, 1)]), ql(&[(0, 1), (2, 1)])).unwrap();
        assert!(matches!(s.specialize_qi(), Err(Error::PoleAtI(_))));
        let t = QScalar::new(ql(&[(1, 1), (-1, -1)]), ql(&[(0, 1)])).unwrap();
        assert_eq!(
            t.specialize_qi().unwrap(),
            GaussRational::new(Rational::zero(), Rational::from_int(2))
        );
    }

    fn arb() -> impl Strategy<Value = QScalar> {
        (
            proptest::collection::vec((-3i32..3, -3i64..4), 0..4),
            proptest::collection::vec((-3i32..3, -3i64..4), 1..4),
        )
            .prop_filter_map("zero den", |(n, d)| QScalar::new(ql(&n), ql(&d)).ok())
    }

    proptest! {
        #[test]
        fn field_laws(a in arb(), b in arb(), c in arb()) {
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
            if !b.is_zero() {
                prop_assert_eq!(&(&a / &b) * &b, a.clone());
            }
        }
    }
}
