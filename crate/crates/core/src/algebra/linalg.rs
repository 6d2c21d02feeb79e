//! Exact rank computations and linear solves.

use super::gauss::GaussRational;
use super::laurent::QLaurent;
use super::mpoly::MPoly;
use super::rational::Rational;
use super::scalar::QScalar;
use crate::error::{Error, Result};

/// Minimal field interface for Gaussian elimination.
pub trait Field: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
}

impl Field for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
}

impl Field for GaussRational {
    fn zero() -> Self {
        GaussRational::zero()
    }
    fn one() -> Self {
        GaussRational::one()
    }
    fn is_zero(&self) -> bool {
        GaussRational::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
}

impl Field for QScalar {
    fn zero() -> Self {
        QScalar::zero()
    }
    fn one() -> Self {
        QScalar::one()
    }
    fn is_zero(&self) -> bool {
        QScalar::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
}

/// Reduces `m` to reduced row echelon form in place and returns the pivot columns.
pub fn rref<F: Field>(m: &mut [Vec<F>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = F::one().div(&m[r][c]);
        for j in c..cols {
            m[r][j] = m[r][j].mul(&inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    if !m[r][j].is_zero() {
                        let t = f.mul(&m[r][j]);
                        m[i][j] = m[i][j].sub(&t);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_field<F: Field>(mut m: Vec<Vec<F>>) -> usize {
    rref(&mut m).len()
}

/// Outcome of solving `A x = b`.
#[derive(Clone, Debug, PartialEq)]
pub enum Solution<F> {
    Unique(Vec<F>),
    Inconsistent,
    /// Solutions exist; the kernel has the given dimension.
    NotUnique {
        particular: Vec<F>,
        kernel_dim: usize,
    },
}

pub fn solve<F: Field>(a: &[Vec<F>], b: &[F]) -> Solution<F> {
    let cols = a.first().map(|r| r.len()).unwrap_or(0);
    let mut m: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.last() == Some(&cols) {
        return Solution::Inconsistent;
    }
    let mut x = vec![F::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][cols].clone();
    }
    if pivots.len() == cols {
        Solution::Unique(x)
    } else {
        Solution::NotUnique {
            particular: x,
            kernel_dim: cols - pivots.len(),
        }
    }
}

/// Incremental echelon basis for vectors over `Q[q, q^-1]`, computing rank over `Q(q)`.
///
/// Reduction is fraction-free; every stored row is divided by the gcd of its entries.
#[derive(Clone, Debug, Default)]
pub struct LaurentEchelon {
    rows: Vec<(usize, Vec<QLaurent>)>,
    width: usize,
}

impl LaurentEchelon {
    pub fn new(width: usize) -> Self {
        Self {
            rows: Vec::new(),
            width,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    fn primitive(v: &mut [QLaurent]) {
        let mut g = QLaurent::zero();
        for e in v.iter() {
            if !e.is_zero() {
                g = if g.is_zero() { e.normalized() } else { g.gcd(e) };
                if g.is_one() {
                    break;
                }
            }
        }
        if g.is_zero() {
            return;
        }
        if !g.is_one() {
            for e in v.iter_mut() {
                if !e.is_zero() {
                    *e = e.exact_div(&g).expect("gcd divides");
                }
            }
        }
        // scale so the first nonzero entry has leading coefficient one and lowest exponent zero
        if let Some(first) = v.iter().find(|e| !e.is_zero()) {
            let lo = first.exponent_range().unwrap().0;
            let lc = first.leading().unwrap().1.recip();
            for e in v.iter_mut() {
                if !e.is_zero() {
                    *e = e.scale(&lc).shift(-lo);
                }
            }
        }
    }

    /// Reduces `v` against the basis; returns the residue.
    pub fn reduce(&self, mut v: Vec<QLaurent>) -> Vec<QLaurent> {
        assert_eq!(v.len(), self.width);
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            let piv = &row[*p];
            for j in 0..self.width {
                let a = if v[j].is_zero() { QLaurent::zero() } else { &v[j] * piv };
                let b = if row[j].is_zero() {
                    QLaurent::zero()
                } else {
                    &row[j] * &f
                };
                v[j] = &a - &b;
            }
            Self::primitive(&mut v);
        }
        v
    }

    /// Inserts `v`; returns true if it was independent of the current span.
    pub fn insert(&mut self, v: Vec<QLaurent>) -> bool {
        let mut r = self.reduce(v);
        match r.iter().position(|e| !e.is_zero()) {
            None => false,
            Some(p) => {
                Self::primitive(&mut r);
                self.rows.push((p, r));
                true
            }
        }
    }

    pub fn contains(&self, v: Vec<QLaurent>) -> bool {
        self.reduce(v).iter().all(|e| e.is_zero())
    }
}

/// Rank over `Q(q)` of a matrix with Laurent entries.
pub fn rank_laurent(rows: Vec<Vec<QLaurent>>) -> usize {
    let width = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut ech = LaurentEchelon::new(width);
    for r in rows {
        ech.insert(r);
    }
    ech.rank()
}

/// Rank over the fraction field of a matrix with polynomial entries (Bareiss elimination).
pub fn rank_bareiss(mut m: Vec<Vec<MPoly>>) -> Result<usize> {
    let rows = m.len();
    if rows == 0 {
        return Ok(0);
    }
    let cols = m[0].len();
    let (nx, nz) = (
        m[0].first().map(|p| p.nx()).unwrap_or(0),
        m[0].first().map(|p| p.nz()).unwrap_or(0),
    );
    let mut prev = MPoly::one(nx, nz);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).filter(|&i| !m[i][c].is_zero()).min_by_key(|&i| m[i][c].len()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let num = &(&m[r][c] * &m[i][j]) - &(&m[i][c] * &m[r][j]);
                m[i][j] = num
                    .exact_div(&prev)
                    .map_err(|e| Error::NotDivisible(format!("Bareiss step failed: {e}")))?;
            }
            m[i][c] = MPoly::zero(nx, nz);
        }
        prev = m[r][c].clone();
        r += 1;
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ql(s: &str) -> QLaurent {
        MPoly::parse(s, 0, 0).unwrap().to_qlaurent().unwrap()
    }

    #[test]
    fn rank_over_function_field() {
        // rows (1, q), (q, q^2) are dependent; (1, q^-1) is not
        let m = vec![
            vec![ql("1"), ql("q")],
            vec![ql("q"), ql("q^2")],
            vec![ql("1"), ql("q^-1")],
        ];
        assert_eq!(rank_laurent(m), 2);
        let mq: Vec<Vec<QScalar>> = vec![
            vec![QScalar::from_laurent(ql("1")), QScalar::from_laurent(ql("q"))],
            vec![QScalar::from_laurent(ql("q")), QScalar::from_laurent(ql("q^2"))],
        ];
        assert_eq!(rank_field(mq), 1);
    }

    #[test]
    fn bareiss_matches_field_rank() {
        let p = |s: &str| MPoly::parse(s, 0, 2).unwrap();
        let m = vec![
            vec![p("z1"), p("z2"), p("z1 + z2")],
            vec![p("z1^2"), p("z1*z2"), p("z1^2 + z1*z2")],
            vec![p("1"), p("q"), p("z2")],
        ];
        assert_eq!(rank_bareiss(m).unwrap(), 2);
    }

    #[test]
    fn solve_detects_kernel() {
        let r = |n: i64| Rational::from_int(n);
        let a = vec![vec![r(1), r(1)], vec![r(2), r(2)]];
        assert!(matches!(
            solve(&a, &[r(1), r(2)]),
            Solution::NotUnique { kernel_dim: 1, .. }
        ));
        assert_eq!(solve(&a, &[r(1), r(3)]), Solution::Inconsistent);
        let b = vec![vec![r(1), r(1)], vec![r(1), r(-1)]];
        assert_eq!(solve(&b, &[r(2), r(0)]), Solution::Unique(vec![r(1), r(1)]));
    }
}
