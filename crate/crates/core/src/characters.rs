//! Truncated characters in two variables: `v` tracks the degree and `z` the weight.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::qnumber::gauss_binomial_v;
use crate::algebra::Rational;
use crate::error::{Error, Result};
use crate::funcspace::GradedTable;

/// A power series in `v`, Laurent in `z`, kept up to `v^{v_max}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiSeries {
    pub v_max: u32,
    terms: BTreeMap<(u32, i32), Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiSeriesRow {
    pub vdeg: u32,
    pub zweight: i32,
    pub coeff: String,
}

impl BiSeries {
    pub fn zero(v_max: u32) -> Self {
        BiSeries {
            v_max,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(v_max: u32) -> Self {
        Self::monomial(v_max, 0, 0, Rational::one())
    }

    /// `c v^vdeg z^zweight`, or zero beyond the window.
    pub fn monomial(v_max: u32, vdeg: u32, zweight: i32, c: Rational) -> Self {
        let mut s = Self::zero(v_max);
        s.add_term(vdeg, zweight, c);
        s
    }

    fn add_term(&mut self, vdeg: u32, zweight: i32, c: Rational) {
        if vdeg > self.v_max || c.is_zero() {
            return;
        }
        let e = self.terms.entry((vdeg, zweight)).or_insert_with(Rational::zero);
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&(vdeg, zweight));
        }
    }

    pub fn coeff(&self, vdeg: u32, zweight: i32) -> Rational {
        self.terms.get(&(vdeg, zweight)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> &BTreeMap<(u32, i32), Rational> {
        &self.terms
    }

    /// Coefficients of `v^0 .. v^{v_max}` at a fixed `z` weight.
    pub fn z_column(&self, zweight: i32) -> Vec<Rational> {
        (0..=self.v_max).map(|d| self.coeff(d, zweight)).collect()
    }

    pub fn add(&self, other: &BiSeries) -> BiSeries {
        let mut out = BiSeries::zero(self.v_max.min(other.v_max));
        for ((d, w), c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(*d, *w, c.clone());
        }
        out
    }

    pub fn mul(&self, other: &BiSeries) -> BiSeries {
        let mut out = BiSeries::zero(self.v_max.min(other.v_max));
        for ((d1, w1), c1) in &self.terms {
            for ((d2, w2), c2) in &other.terms {
                if d1 + d2 <= out.v_max {
                    out.add_term(d1 + d2, w1 + w2, c1 * c2);
                }
            }
        }
        out
    }

    /// Multiplies by `v^vdeg z^zweight`.
    pub fn shift(&self, vdeg: u32, zweight: i32) -> BiSeries {
        let mut out = BiSeries::zero(self.v_max);
        for ((d, w), c) in &self.terms {
            out.add_term(d + vdeg, w + zweight, c.clone());
        }
        out
    }

    pub fn is_nonnegative_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer() && !c.is_negative())
    }

    pub fn rows(&self) -> Vec<BiSeriesRow> {
        self.terms
            .iter()
            .map(|((d, w), c)| BiSeriesRow {
                vdeg: *d,
                zweight: *w,
                coeff: c.to_string(),
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("vdeg,zweight,coeff\n");
        for r in self.rows() {
            s.push_str(&format!("{},{},{}\n", r.vdeg, r.zweight, r.coeff));
        }
        s
    }

    /// Reads a table of `(degree, weight) -> dimension`, dropping negative degrees.
    pub fn from_graded_table(table: &GradedTable, v_max: u32) -> BiSeries {
        let mut out = BiSeries::zero(v_max);
        for (&(d, w), &dim) in table {
            if d >= 0 {
                out.add_term(d as u32, w, Rational::from_int(dim as i64));
            }
        }
        out
    }
}

impl Serialize for BiSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            v_max: u32,
            rows: Vec<BiSeriesRow>,
        }
        Repr {
            v_max: self.v_max,
            rows: self.rows(),
        }
        .serialize(s)
    }
}

/// `(v)_n = prod_{j=1}^n (1 - v^j)`.
pub fn pochhammer(n: u32, v_max: u32) -> BiSeries {
    let mut acc = BiSeries::one(v_max);
    for j in 1..=n {
        let f = BiSeries::one(v_max).add(&BiSeries::monomial(v_max, j, 0, Rational::from_int(-1)));
        acc = acc.mul(&f);
    }
    acc
}

/// `1 / (v)_n`, or `1 / (v)_infinity` for `None`.
pub fn pochhammer_inv(n: Option<u32>, v_max: u32) -> BiSeries {
    let top = n.unwrap_or(v_max).min(v_max);
    // coefficients of partitions with parts at most `top`
    let mut c = vec![0i64; v_max as usize + 1];
    c[0] = 1;
    for j in 1..=top as usize {
        for d in j..=v_max as usize {
            c[d] += c[d - j];
        }
    }
    let mut out = BiSeries::zero(v_max);
    for (d, x) in c.into_iter().enumerate() {
        out.add_term(d as u32, 0, Rational::from_int(x));
    }
    out
}

/// `sum_l [n choose l]_v z^{n-2l}`.
pub fn fusion_char(n: u32, v_max: u32) -> BiSeries {
    let mut out = BiSeries::zero(v_max);
    for l in 0..=n {
        for (d, c) in gauss_binomial_v(n as i64, l as i64).into_iter().enumerate() {
            out.add_term(d as u32, n as i32 - 2 * l as i32, Rational::from_int(c));
        }
    }
    out
}

/// `sum_l z^{n-2l} / ((v)_l (v)_{n-l})`.
pub fn fermionic_w(n: u32, v_max: u32) -> BiSeries {
    let mut out = BiSeries::zero(v_max);
    for l in 0..=n {
        let t = pochhammer_inv(Some(l), v_max).mul(&pochhammer_inv(Some(n - l), v_max));
        out = out.add(&t.shift(0, n as i32 - 2 * l as i32));
    }
    out
}

fn check_j(j: u8) -> Result<()> {
    if j > 1 {
        return Err(Error::InvalidArgument(format!("j must be 0 or 1, got {j}")));
    }
    Ok(())
}

/// `sum_{n = j mod 2, n <= n_max} v^{(n^2 - j)/4} fusion(n) / (v)_n`.
pub fn melzer_rhs(j: u8, v_max: u32, n_max: u32) -> Result<BiSeries> {
    check_j(j)?;
    let lead = |n: u32| (n * n - j as u32) / 4;
    let first_omitted = if n_max % 2 == j as u32 % 2 {
        n_max + 2
    } else {
        n_max + 1
    };
    if lead(first_omitted) <= v_max {
        return Err(Error::WindowTooSmall(format!(
            "n = {first_omitted} contributes at v^{} <= v^{v_max}",
            lead(first_omitted)
        )));
    }
    let terms: Vec<BiSeries> = (j as u32..=n_max)
        .step_by(2)
        .collect::<Vec<_>>()
        .into_par_iter()
        .filter(|&n| lead(n) <= v_max)
        .map(|n| {
            fusion_char(n, v_max)
                .mul(&pochhammer_inv(Some(n), v_max))
                .shift(lead(n), 0)
        })
        .collect();
    Ok(terms.into_iter().fold(BiSeries::zero(v_max), |a, b| a.add(&b)))
}

/// Smallest `n_max` for which [`melzer_rhs`] is complete up to `v^{v_max}`.
pub fn melzer_n_max(j: u8, v_max: u32) -> u32 {
    let mut n = j as u32;
    while ((n + 2) * (n + 2) - j as u32) / 4 <= v_max {
        n += 2;
    }
    n
}

/// `(1 / (v)_infinity) sum_{|m| <= m_max} v^{m^2 + jm} z^{-2m-j}`.
pub fn bosonic_level_minus_one(j: u8, v_max: u32, m_max: u32) -> Result<BiSeries> {
    check_j(j)?;
    let ji = j as i64;
    let lead = |m: i64| m * m + ji * m;
    let next = m_max as i64 + 1;
    let omitted = lead(next).min(lead(-next));
    if omitted <= v_max as i64 {
        return Err(Error::WindowTooSmall(format!(
            "|m| = {next} contributes at v^{omitted} <= v^{v_max}"
        )));
    }
    let mut lattice = BiSeries::zero(v_max);
    for m in -(m_max as i64)..=m_max as i64 {
        if lead(m) <= v_max as i64 {
            lattice.add_term(lead(m) as u32, (-2 * m - ji) as i32, Rational::one());
        }
    }
    Ok(pochhammer_inv(None, v_max).mul(&lattice))
}

/// Smallest `m_max` for which [`bosonic_level_minus_one`] is complete up to `v^{v_max}`.
pub fn bosonic_m_max(j: u8, v_max: u32) -> u32 {
    let ji = j as i64;
    let mut m = 0i64;
    while ((m + 1) * (m + 1) - ji * (m + 1)).min((m + 1) * (m + 1) + ji * (m + 1)) <= v_max as i64 {
        m += 1;
    }
    m as u32
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub vdeg: u32,
    pub zweight: i32,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharComparison {
    pub equal: bool,
    pub v_max: u32,
    pub first_mismatch: Option<Mismatch>,
}

/// Exact comparison up to the smaller `v_max`, optionally restricted to `|z| <= z_max`.
pub fn compare_char(a: &BiSeries, b: &BiSeries, z_max: Option<i32>) -> CharComparison {
    let v_max = a.v_max.min(b.v_max);
    let keys: std::collections::BTreeSet<(u32, i32)> = a
        .terms
        .keys()
        .chain(b.terms.keys())
        .copied()
        .filter(|(d, w)| *d <= v_max && z_max.map_or(true, |zm| w.abs() <= zm))
        .collect();
    let first_mismatch = keys.into_iter().find_map(|(d, w)| {
        let (x, y) = (a.coeff(d, w), b.coeff(d, w));
        (x != y).then(|| Mismatch {
            vdeg: d,
            zweight: w,
            left: x.to_string(),
            right: y.to_string(),
        })
    });
    CharComparison {
        equal: first_mismatch.is_none(),
        v_max,
        first_mismatch,
    }
}
