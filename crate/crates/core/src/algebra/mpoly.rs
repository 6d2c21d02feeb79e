//! Sparse polynomials in `X_1..X_l`, Laurent in `z_1..z_n` and `q`, over the rationals.
//!
//! Powers of `q` live in the monomial so that every coefficient is a plain rational.
//! Terms are kept sorted by monomial (lexicographic on `X`, then `z`, then `q`)
//! with no zero coefficients, which makes equality structural.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use super::gauss::GaussPoly;
use super::laurent::{fmt_qpow, QLaurent};
use super::rational::Rational;
use crate::error::{Error, Result};

/// Maximum number of `X` plus `z` variables in one polynomial.
pub const MAX_VARS: usize = 28;

/// An exponent vector: `X` exponents first, then `z`, then the power of `q`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Mono {
    pub v: [i8; MAX_VARS],
    pub q: i32,
}

impl Hash for Mono {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let mut words = [0u64; 4];
        for (i, chunk) in self.v.chunks(8).enumerate() {
            let mut w = 0u64;
            for (j, b) in chunk.iter().enumerate() {
                w |= (*b as u8 as u64) << (8 * j);
            }
            words[i] = w;
        }
        words[3] ^= (self.q as u32 as u64) << 32;
        state.write_u64(words[0]);
        state.write_u64(words[1]);
        state.write_u64(words[2]);
        state.write_u64(words[3]);
    }
}

impl Default for Mono {
    fn default() -> Self {
        Self::ONE
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mono({:?}, q^{})", self.v, self.q)
    }
}

impl Mono {
    pub const ONE: Mono = Mono { v: [0; MAX_VARS], q: 0 };

    pub fn q_pow(k: i32) -> Self {
        Mono { v: [0; MAX_VARS], q: k }
    }

    /// Builds a monomial from separate `X` and `z` exponent slices.
    pub fn from_parts(nx: usize, x: &[i32], z: &[i32], q: i32) -> Self {
        let mut m = Mono::q_pow(q);
        for (a, e) in x.iter().enumerate() {
            m.v[a] = to_i8(*e);
        }
        for (k, e) in z.iter().enumerate() {
            m.v[nx + k] = to_i8(*e);
        }
        m
    }

    #[inline]
    pub fn mul(&self, o: &Mono) -> Mono {
        let mut out = Mono {
            v: [0; MAX_VARS],
            q: self.q + o.q,
        };
        let mut ok = true;
        for i in 0..MAX_VARS {
            let s = self.v[i] as i16 + o.v[i] as i16;
            ok &= (-128..=127).contains(&s);
            out.v[i] = s as i8;
        }
        assert!(ok, "exponent overflow");
        out
    }

    #[inline]
    pub fn div(&self, o: &Mono) -> Mono {
        let mut out = Mono {
            v: [0; MAX_VARS],
            q: self.q - o.q,
        };
        let mut ok = true;
        for i in 0..MAX_VARS {
            let s = self.v[i] as i16 - o.v[i] as i16;
            ok &= (-128..=127).contains(&s);
            out.v[i] = s as i8;
        }
        assert!(ok, "exponent overflow");
        out
    }

    /// Exponent-wise minimum.
    pub fn gcd_min(&self, o: &Mono) -> Mono {
        let mut out = *self;
        for i in 0..MAX_VARS {
            out.v[i] = out.v[i].min(o.v[i]);
        }
        out.q = out.q.min(o.q);
        out
    }

    fn all_nonneg(&self) -> bool {
        self.q >= 0 && self.v.iter().all(|e| *e >= 0)
    }

    pub fn x(&self, nx: usize) -> &[i8] {
        &self.v[..nx]
    }

    pub fn z(&self, nx: usize, nz: usize) -> &[i8] {
        &self.v[nx..nx + nz]
    }

    pub fn with_q(mut self, q: i32) -> Self {
        self.q = q;
        self
    }

    /// Total `X` degree.
    pub fn x_degree(&self, nx: usize) -> i32 {
        self.v[..nx].iter().map(|e| *e as i32).sum()
    }

    /// Total `z` degree.
    pub fn z_degree(&self, nx: usize, nz: usize) -> i32 {
        self.v[nx..nx + nz].iter().map(|e| *e as i32).sum()
    }
}

fn to_i8(e: i32) -> i8 {
    i8::try_from(e).expect("exponent out of range")
}

/// A polynomial in `nx` variables `X`, Laurent in `nz` variables `z` and in `q`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    nx: u8,
    nz: u8,
    terms: Vec<(Mono, Rational)>,
}

/// Image of one variable under a monomial substitution.
#[derive(Clone, Debug)]
pub struct VarImage {
    pub coeff: Rational,
    pub mono: Mono,
}

/// A substitution sending every variable (and `q`) to a scaled monomial.
#[derive(Clone, Debug)]
pub struct MonoMap {
    nx_in: usize,
    nz_in: usize,
    nx_out: usize,
    nz_out: usize,
    images: Vec<VarImage>,
    q_image: VarImage,
}

impl MonoMap {
    /// Maps `X_a -> X_a`, `z_k -> z_k` into a layout with at least as many variables.
    pub fn embed(nx_in: usize, nz_in: usize, nx_out: usize, nz_out: usize) -> Self {
        assert!(nx_out >= nx_in && nz_out >= nz_in && nx_out + nz_out <= MAX_VARS);
        let mut images = Vec::with_capacity(nx_in + nz_in);
        for a in 0..nx_in {
            let mut m = Mono::ONE;
            m.v[a] = 1;
            images.push(VarImage {
                coeff: Rational::one(),
                mono: m,
            });
        }
        for k in 0..nz_in {
            let mut m = Mono::ONE;
            m.v[nx_out + k] = 1;
            images.push(VarImage {
                coeff: Rational::one(),
                mono: m,
            });
        }
        MonoMap {
            nx_in,
            nz_in,
            nx_out,
            nz_out,
            images,
            q_image: VarImage {
                coeff: Rational::one(),
                mono: Mono::q_pow(1),
            },
        }
    }

    /// Maps `X_a -> X_a`, `z_k -> z_k` where the target has those variables, and every
    /// other variable to `1`; callers override the dropped ones with `set_x` / `set_z`.
    pub fn between(nx_in: usize, nz_in: usize, nx_out: usize, nz_out: usize) -> Self {
        assert!(nx_out + nz_out <= MAX_VARS);
        let mut images = Vec::with_capacity(nx_in + nz_in);
        for a in 0..nx_in {
            let mut m = Mono::ONE;
            if a < nx_out {
                m.v[a] = 1;
            }
            images.push(VarImage {
                coeff: Rational::one(),
                mono: m,
            });
        }
        for k in 0..nz_in {
            let mut m = Mono::ONE;
            if k < nz_out {
                m.v[nx_out + k] = 1;
            }
            images.push(VarImage {
                coeff: Rational::one(),
                mono: m,
            });
        }
        MonoMap {
            nx_in,
            nz_in,
            nx_out,
            nz_out,
            images,
            q_image: VarImage {
                coeff: Rational::one(),
                mono: Mono::q_pow(1),
            },
        }
    }

    pub fn identity(nx: usize, nz: usize) -> Self {
        Self::embed(nx, nz, nx, nz)
    }

    /// Output monomial builder in the target layout.
    pub fn out_mono(&self, x: &[(usize, i32)], z: &[(usize, i32)], q: i32) -> Mono {
        let mut m = Mono::q_pow(q);
        for (a, e) in x {
            m.v[*a] = to_i8(*e);
        }
        for (k, e) in z {
            m.v[self.nx_out + k] = to_i8(*e);
        }
        m
    }

    pub fn set_x(mut self, a: usize, coeff: Rational, mono: Mono) -> Self {
        self.images[a] = VarImage { coeff, mono };
        self
    }

    pub fn set_z(mut self, k: usize, coeff: Rational, mono: Mono) -> Self {
        self.images[self.nx_in + k] = VarImage { coeff, mono };
        self
    }

    pub fn set_q(mut self, coeff: Rational, mono: Mono) -> Self {
        self.q_image = VarImage { coeff, mono };
        self
    }

    pub fn nx_out(&self) -> usize {
        self.nx_out
    }

    pub fn nz_out(&self) -> usize {
        self.nz_out
    }
}

impl MPoly {
    pub fn zero(nx: usize, nz: usize) -> Self {
        assert!(nx + nz <= MAX_VARS, "too many variables");
        MPoly {
            nx: nx as u8,
            nz: nz as u8,
            terms: Vec::new(),
        }
    }

    pub fn constant(nx: usize, nz: usize, c: Rational) -> Self {
        Self::term(nx, nz, c, Mono::ONE)
    }

    pub fn one(nx: usize, nz: usize) -> Self {
        Self::constant(nx, nz, Rational::one())
    }

    pub fn term(nx: usize, nz: usize, c: Rational, m: Mono) -> Self {
        let mut p = Self::zero(nx, nz);
        if !c.is_zero() {
            p.terms.push((m, c));
        }
        p
    }

    pub fn q_pow(nx: usize, nz: usize, k: i32) -> Self {
        Self::term(nx, nz, Rational::one(), Mono::q_pow(k))
    }

    /// The variable `X_a` (0-based).
    pub fn x(nx: usize, nz: usize, a: usize) -> Self {
        assert!(a < nx);
        let mut m = Mono::ONE;
        m.v[a] = 1;
        Self::term(nx, nz, Rational::one(), m)
    }

    /// The variable `z_k` (0-based).
    pub fn z(nx: usize, nz: usize, k: usize) -> Self {
        assert!(k < nz);
        let mut m = Mono::ONE;
        m.v[nx + k] = 1;
        Self::term(nx, nz, Rational::one(), m)
    }

    /// `c q^qe prod X^x prod z^z`.
    pub fn monomial(nx: usize, nz: usize, c: Rational, x: &[i32], z: &[i32], qe: i32) -> Self {
        assert!(x.len() <= nx && z.len() <= nz);
        Self::term(nx, nz, c, Mono::from_parts(nx, x, z, qe))
    }

    pub fn from_qlaurent(nx: usize, nz: usize, p: &QLaurent) -> Self {
        let mut out = Self::zero(nx, nz);
        out.terms = p.terms().iter().map(|(e, c)| (Mono::q_pow(*e), c.clone())).collect();
        out
    }

    /// Builds from arbitrary terms, combining repeats and dropping zeros.
    pub fn from_terms(nx: usize, nz: usize, terms: Vec<(Mono, Rational)>) -> Self {
        let mut map: FxHashMap<Mono, Rational> = FxHashMap::default();
        map.reserve(terms.len());
        for (m, c) in terms {
            match map.entry(m) {
                std::collections::hash_map::Entry::Occupied(mut o) => *o.get_mut() += &c,
                std::collections::hash_map::Entry::Vacant(v) => {
                    v.insert(c);
                }
            }
        }
        Self::from_map(nx, nz, map)
    }

    pub fn from_map(nx: usize, nz: usize, map: FxHashMap<Mono, Rational>) -> Self {
        let mut terms: Vec<(Mono, Rational)> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by_key(|a| a.0);
        let mut p = Self::zero(nx, nz);
        p.terms = terms;
        p
    }

    pub(crate) fn from_sorted_unchecked(nx: usize, nz: usize, terms: Vec<(Mono, Rational)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(terms.iter().all(|t| !t.1.is_zero()));
        MPoly {
            nx: nx as u8,
            nz: nz as u8,
            terms,
        }
    }

    pub fn nx(&self) -> usize {
        self.nx as usize
    }

    pub fn nz(&self) -> usize {
        self.nz as usize
    }

    pub fn terms(&self) -> &[(Mono, Rational)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Mono, Rational)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_layout(&self, o: &MPoly) {
        assert!(
            self.nx == o.nx && self.nz == o.nz,
            "layout mismatch: ({}, {}) vs ({}, {})",
            self.nx,
            self.nz,
            o.nx,
            o.nz
        );
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nx(), self.nz());
        }
        let mut p = self.clone();
        for t in &mut p.terms {
            t.1 *= c;
        }
        p
    }

    /// Multiplies by a single scaled monomial.
    pub fn mul_term(&self, c: &Rational, m: &Mono) -> Self {
        if c.is_zero() {
            return Self::zero(self.nx(), self.nz());
        }
        let terms = self.terms.iter().map(|(mm, cc)| (mm.mul(m), cc * c)).collect();
        MPoly {
            nx: self.nx,
            nz: self.nz,
            terms,
        }
    }

    pub fn mul_qpow(&self, k: i32) -> Self {
        self.mul_term(&Rational::one(), &Mono::q_pow(k))
    }

    pub fn mul_qlaurent(&self, c: &QLaurent) -> Self {
        self * &MPoly::from_qlaurent(self.nx(), self.nz(), c)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = MPoly::one(self.nx(), self.nz());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Returns `(c, m)` if this is a single term.
    pub fn as_term(&self) -> Option<(&Rational, &Mono)> {
        match self.terms.as_slice() {
            [(m, c)] => Some((c, m)),
            _ => None,
        }
    }

    /// Returns the polynomial in `q` alone if no `X` or `z` appears.
    pub fn to_qlaurent(&self) -> Option<QLaurent> {
        let mut pairs = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            if m.v.iter().any(|e| *e != 0) {
                return None;
            }
            pairs.push((m.q, c.clone()));
        }
        Some(QLaurent::from_terms(pairs))
    }

    /// Groups terms by their `X,z` exponents, giving a `q`-Laurent coefficient each.
    pub fn grouped(&self) -> BTreeMap<Vec<i8>, QLaurent> {
        let n = self.nx() + self.nz();
        let mut raw: BTreeMap<Vec<i8>, Vec<(i32, Rational)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            raw.entry(m.v[..n].to_vec()).or_default().push((m.q, c.clone()));
        }
        raw.into_iter().map(|(k, v)| (k, QLaurent::from_terms(v))).collect()
    }

    /// Rebuilds a polynomial from the output of [`MPoly::grouped`].
    pub fn from_grouped(nx: usize, nz: usize, g: &BTreeMap<Vec<i8>, QLaurent>) -> Self {
        let mut terms = Vec::new();
        for (k, c) in g {
            for (e, r) in c.terms() {
                let mut m = Mono::q_pow(*e);
                m.v[..k.len()].copy_from_slice(k);
                terms.push((m, r.clone()));
            }
        }
        Self::from_terms(nx, nz, terms)
    }

    /// Applies a monomial substitution.
    pub fn substitute(&self, map: &MonoMap) -> Self {
        assert!(
            map.nx_in == self.nx() && map.nz_in == self.nz(),
            "substitution layout mismatch"
        );
        let nvars = map.nx_in + map.nz_in;
        let trivial: Vec<bool> = map.images.iter().map(|im| im.coeff.is_one()).collect();
        let q_trivial = map.q_image.coeff.is_one();
        let mut pow_cache: FxHashMap<(usize, i32), Rational> = FxHashMap::default();
        let mut out: FxHashMap<Mono, Rational> = FxHashMap::default();
        out.reserve(self.terms.len());
        for (m, c) in &self.terms {
            let mut acc = Mono { v: [0; MAX_VARS], q: 0 };
            let mut coeff = c.clone();
            for i in 0..nvars {
                let e = m.v[i] as i32;
                if e == 0 {
                    continue;
                }
                let im = &map.images[i];
                for j in 0..MAX_VARS {
                    if im.mono.v[j] != 0 {
                        acc.v[j] = to_i8(acc.v[j] as i32 + e * im.mono.v[j] as i32);
                    }
                }
                acc.q += e * im.mono.q;
                if !trivial[i] {
                    let p = pow_cache.entry((i, e)).or_insert_with(|| im.coeff.pow(e));
                    coeff *= &*p;
                }
            }
            if m.q != 0 {
                let im = &map.q_image;
                for j in 0..MAX_VARS {
                    if im.mono.v[j] != 0 {
                        acc.v[j] = to_i8(acc.v[j] as i32 + m.q * im.mono.v[j] as i32);
                    }
                }
                acc.q += m.q * im.mono.q;
                if !q_trivial {
                    let p = pow_cache.entry((usize::MAX, m.q)).or_insert_with(|| im.coeff.pow(m.q));
                    coeff *= &*p;
                }
            }
            if coeff.is_zero() {
                continue;
            }
            match out.entry(acc) {
                std::collections::hash_map::Entry::Occupied(mut o) => *o.get_mut() += &coeff,
                std::collections::hash_map::Entry::Vacant(v) => {
                    v.insert(coeff);
                }
            }
        }
        Self::from_map(map.nx_out, map.nz_out, out)
    }

    /// Reorders the `X` variables: `X_a` becomes `X_{perm[a]}`.
    pub fn permute_x(&self, perm: &[usize]) -> Self {
        let nx = self.nx();
        assert_eq!(perm.len(), nx);
        let mut terms: Vec<(Mono, Rational)> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut o = *m;
                for a in 0..nx {
                    o.v[perm[a]] = m.v[a];
                }
                (o, c.clone())
            })
            .collect();
        terms.sort_unstable_by_key(|a| a.0);
        MPoly {
            nx: self.nx,
            nz: self.nz,
            terms,
        }
    }

    /// Reorders the `z` variables: `z_k` becomes `z_{perm[k]}`.
    pub fn permute_z(&self, perm: &[usize]) -> Self {
        let (nx, nz) = (self.nx(), self.nz());
        assert_eq!(perm.len(), nz);
        let mut terms: Vec<(Mono, Rational)> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut o = *m;
                for k in 0..nz {
                    o.v[nx + perm[k]] = m.v[nx + k];
                }
                (o, c.clone())
            })
            .collect();
        terms.sort_unstable_by_key(|a| a.0);
        MPoly {
            nx: self.nx,
            nz: self.nz,
            terms,
        }
    }

    pub fn swap_x(&self, a: usize, b: usize) -> Self {
        let mut p: Vec<usize> = (0..self.nx()).collect();
        p.swap(a, b);
        self.permute_x(&p)
    }

    pub fn swap_z(&self, j: usize, k: usize) -> Self {
        let mut p: Vec<usize> = (0..self.nz()).collect();
        p.swap(j, k);
        self.permute_z(&p)
    }

    /// True if invariant under every permutation of the `X` variables.
    pub fn is_symmetric_x(&self) -> bool {
        (0..self.nx().saturating_sub(1)).all(|a| self.swap_x(a, a + 1) == *self)
    }

    /// True if every transposition of `X` variables changes the sign.
    pub fn is_skew_x(&self) -> bool {
        (0..self.nx().saturating_sub(1)).all(|a| self.swap_x(a, a + 1) == -self)
    }

    pub fn is_symmetric_z(&self) -> bool {
        (0..self.nz().saturating_sub(1)).all(|k| self.swap_z(k, k + 1) == *self)
    }

    /// Largest exponent of any single `X` variable, or `None` for zero.
    pub fn max_x_exponent(&self) -> Option<i32> {
        let nx = self.nx();
        self.terms
            .iter()
            .map(|(m, _)| m.v[..nx].iter().map(|e| *e as i32).max().unwrap_or(0))
            .max()
    }

    pub fn min_x_exponent(&self) -> Option<i32> {
        let nx = self.nx();
        self.terms
            .iter()
            .map(|(m, _)| m.v[..nx].iter().map(|e| *e as i32).min().unwrap_or(0))
            .min()
    }

    /// Smallest exponent of any `z` variable, or `None` for zero.
    pub fn min_z_exponent(&self) -> Option<i32> {
        let (nx, nz) = (self.nx(), self.nz());
        self.terms
            .iter()
            .map(|(m, _)| m.v[nx..nx + nz].iter().map(|e| *e as i32).min().unwrap_or(0))
            .min()
    }

    /// Splits into homogeneous components for `deg X = -1`, `deg z = +1`.
    pub fn degree_components(&self) -> BTreeMap<i32, MPoly> {
        let (nx, nz) = (self.nx(), self.nz());
        let mut out: BTreeMap<i32, Vec<(Mono, Rational)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let d = m.z_degree(nx, nz) - m.x_degree(nx);
            out.entry(d).or_default().push((*m, c.clone()));
        }
        out.into_iter()
            .map(|(d, t)| (d, MPoly::from_sorted_unchecked(nx, nz, t)))
            .collect()
    }

    /// The common degree if the polynomial is homogeneous.
    pub fn homogeneous_degree(&self) -> Option<i32> {
        let comps = self.degree_components();
        match comps.len() {
            1 => comps.keys().next().copied(),
            _ => None,
        }
    }

    /// Sum over all permutations of the `X` variables.
    pub fn symmetrize_x(&self) -> Self {
        let mut acc: FxHashMap<Mono, Rational> = FxHashMap::default();
        for perm in permutations(self.nx()) {
            for (m, c) in self.permute_x(&perm).terms {
                *acc.entry(m).or_insert_with(Rational::zero) += &c;
            }
        }
        Self::from_map(self.nx(), self.nz(), acc)
    }

    /// Signed sum over all permutations of the `X` variables.
    pub fn skew_symmetrize_x(&self) -> Self {
        let mut acc: FxHashMap<Mono, Rational> = FxHashMap::default();
        for perm in permutations(self.nx()) {
            let neg = perm_sign(&perm) < 0;
            for (m, c) in self.permute_x(&perm).terms {
                let e = acc.entry(m).or_insert_with(Rational::zero);
                if neg {
                    *e -= &c;
                } else {
                    *e += &c;
                }
            }
        }
        Self::from_map(self.nx(), self.nz(), acc)
    }

    /// Normalised skew product `Skew(P1(X_1..X_l1) P2(X_{l1+1}..X_{l1+l2})) / (l1! l2!)`.
    pub fn wedge(&self, other: &MPoly) -> Self {
        assert_eq!(self.nz(), other.nz(), "wedge of polynomials with different z layouts");
        let (l1, l2, nz) = (self.nx(), other.nx(), self.nz());
        let zmap: Vec<usize> = (0..nz).collect();
        let a = self.relayout(l1 + l2, nz, &(0..l1).collect::<Vec<_>>(), &zmap);
        let b = other.relayout(l1 + l2, nz, &(l1..l1 + l2).collect::<Vec<_>>(), &zmap);
        let fact = |k: usize| (1..=k as i64).product::<i64>();
        (&a * &b)
            .skew_symmetrize_x()
            .scale(&Rational::new(1, fact(l1) * fact(l2)))
    }

    /// The leading (largest) term.
    pub fn leading(&self) -> Option<&(Mono, Rational)> {
        self.terms.last()
    }

    fn content_mono(&self) -> Mono {
        let mut it = self.terms.iter();
        let first = it.next().map(|t| t.0).unwrap_or(Mono::ONE);
        it.fold(first, |acc, (m, _)| acc.gcd_min(m))
    }

    /// Exact division. Laurent variables (`z`, `q`) may shift freely; the quotient
    /// must stay polynomial in `X`.
    pub fn exact_div(&self, d: &MPoly) -> Result<MPoly> {
        self.check_layout(d);
        if d.is_zero() {
            return Err(Error::NotDivisible("division by zero".into()));
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let nx = self.nx();
        if let Some((c, m)) = d.as_term() {
            let inv = c.recip();
            let q = self.mul_term(&inv, &Mono::ONE.div(m));
            if q.min_x_exponent().unwrap_or(0) < 0 {
                return Err(Error::NotDivisible(
                    "monomial divisor leaves negative X exponent".into(),
                ));
            }
            return Ok(q);
        }
        let ca = self.content_mono();
        let cd = d.content_mono();
        let a = self.mul_term(&Rational::one(), &Mono::ONE.div(&ca));
        let b = d.mul_term(&Rational::one(), &Mono::ONE.div(&cd));
        let (lm, lc) = b.terms.last().cloned().expect("nonzero");
        let lc_inv = lc.recip();
        let mut rem: BTreeMap<Mono, Rational> = a.terms.into_iter().collect();
        let mut quo: Vec<(Mono, Rational)> = Vec::new();
        while let Some((m, c)) = rem.pop_last() {
            let qm = m.div(&lm);
            if !qm.all_nonneg() {
                return Err(Error::NotDivisible(format!(
                    "leading term does not divide ({} terms left)",
                    rem.len() + 1
                )));
            }
            let qc = &c * &lc_inv;
            for (bm, bc) in b.terms.iter().rev().skip(1) {
                let t = qm.mul(bm);
                let v = &qc * bc;
                match rem.entry(t) {
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        *o.get_mut() -= &v;
                        if o.get().is_zero() {
                            o.remove();
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(-v);
                    }
                }
            }
            quo.push((qm, qc));
        }
        let shift = ca.div(&cd);
        let q = MPoly::from_terms(self.nx(), self.nz(), quo).mul_term(&Rational::one(), &shift);
        if q.terms.iter().any(|(m, _)| m.v[..nx].iter().any(|e| *e < 0)) {
            return Err(Error::NotDivisible("quotient is not polynomial in X".into()));
        }
        Ok(q)
    }

    /// Re-embeds into a different layout, mapping `X_a -> X_{xmap[a]}` and `z_k -> z_{zmap[k]}`.
    pub fn relayout(&self, nx_out: usize, nz_out: usize, xmap: &[usize], zmap: &[usize]) -> Self {
        let (nx, nz) = (self.nx(), self.nz());
        assert_eq!(xmap.len(), nx);
        assert_eq!(zmap.len(), nz);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut o = Mono::q_pow(m.q);
                for a in 0..nx {
                    o.v[xmap[a]] = m.v[a];
                }
                for k in 0..nz {
                    o.v[nx_out + zmap[k]] = m.v[nx + k];
                }
                (o, c.clone())
            })
            .collect();
        Self::from_terms(nx_out, nz_out, terms)
    }

    /// Specialises `q = i`.
    pub fn specialize_qi(&self) -> GaussPoly {
        GaussPoly::from_mpoly(self)
    }

    /// Substitutes `q -> q^{-1}`.
    pub fn bar_q(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (m.with_q(-m.q), c.clone())).collect();
        Self::from_terms(self.nx(), self.nz(), terms)
    }

    /// Parses the text form, e.g. `"-q^-3 * X1^2 * z2 + 1/2"`.
    pub fn parse(text: &str, nx: usize, nz: usize) -> Result<Self> {
        parse::parse(text, nx, nz)
    }

    pub fn to_json(&self) -> MPolyJson {
        let (nx, nz) = (self.nx(), self.nz());
        let terms = self
            .grouped()
            .into_iter()
            .rev()
            .map(|(k, c)| MPolyTermJson {
                coeff_num: c.terms().iter().rev().map(|(e, r)| (*e, r.to_string())).collect(),
                coeff_den: vec![(0, "1".to_string())],
                xexp: k[..nx].iter().map(|e| *e as i32).collect(),
                zexp: k[nx..nx + nz].iter().map(|e| *e as i32).collect(),
            })
            .collect();
        MPolyJson { nx, nz, terms }
    }

    pub fn from_json(j: &MPolyJson) -> Result<Self> {
        if j.nx + j.nz > MAX_VARS {
            return Err(Error::Parse("too many variables".into()));
        }
        let mut terms = Vec::new();
        let parse_q = |pairs: &[(i32, String)]| -> Result<QLaurent> {
            let mut v = Vec::new();
            for (e, s) in pairs {
                v.push((*e, s.parse::<Rational>()?));
            }
            Ok(QLaurent::from_terms(v))
        };
        for t in &j.terms {
            if t.xexp.len() != j.nx || t.zexp.len() != j.nz {
                return Err(Error::Parse("exponent vector length mismatch".into()));
            }
            if t.xexp.iter().any(|e| *e < 0) {
                return Err(Error::Parse("negative X exponent".into()));
            }
            let num = parse_q(&t.coeff_num)?;
            let den = parse_q(&t.coeff_den)?;
            let c = num.exact_div(&den)?;
            for (e, r) in c.terms() {
                let m = Mono::from_parts(j.nx, &t.xexp, &t.zexp, *e);
                terms.push((m, r.clone()));
            }
        }
        Ok(Self::from_terms(j.nx, j.nz, terms))
    }
}

/// JSON form of one `X,z` monomial with its `q`-Laurent coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MPolyTermJson {
    pub coeff_num: Vec<(i32, String)>,
    pub coeff_den: Vec<(i32, String)>,
    pub xexp: Vec<i32>,
    pub zexp: Vec<i32>,
}

/// JSON form of a polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MPolyJson {
    pub nx: usize,
    pub nz: usize,
    pub terms: Vec<MPolyTermJson>,
}

impl Serialize for MPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for MPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MPolyJson::deserialize(d)?;
        MPoly::from_json(&j).map_err(serde::de::Error::custom)
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

/// Sign of a permutation.
pub fn perm_sign(p: &[usize]) -> i32 {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        self.check_layout(rhs);
        let (a, b) = (&self.terms, &rhs.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let s = &a[i].1 + &b[j].1;
                    if !s.is_zero() {
                        out.push((a[i].0, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        MPoly {
            nx: self.nx,
            nz: self.nz,
            terms: out,
        }
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            nx: self.nx,
            nz: self.nz,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(mut self) -> MPoly {
        for t in &mut self.terms {
            t.1 = -&t.1;
        }
        self
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        self.check_layout(rhs);
        if self.is_zero() || rhs.is_zero() {
            return MPoly::zero(self.nx(), self.nz());
        }
        if let Some((c, m)) = rhs.as_term() {
            return self.mul_term(c, m);
        }
        if let Some((c, m)) = self.as_term() {
            return rhs.mul_term(c, m);
        }
        let (big, small) = if self.len() >= rhs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut acc: FxHashMap<Mono, Rational> = FxHashMap::default();
        acc.reserve(big.len() * small.len().min(8));
        for (m2, c2) in &small.terms {
            for (m1, c1) in &big.terms {
                let m = m1.mul(m2);
                let v = c1 * c2;
                match acc.entry(m) {
                    std::collections::hash_map::Entry::Occupied(mut o) => *o.get_mut() += &v,
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(v);
                    }
                }
            }
        }
        MPoly::from_map(self.nx(), self.nz(), acc)
    }
}

crate::algebra::laurent::owned_ops!(MPoly);

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let (nx, nz) = (self.nx(), self.nz());
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mut parts: Vec<String> = Vec::new();
            let a = c.abs();
            if !a.is_one() {
                parts.push(a.to_string());
            }
            if m.q != 0 {
                parts.push(fmt_qpow(m.q));
            }
            for (idx, e) in m.v[..nx].iter().enumerate() {
                match *e {
                    0 => {}
                    1 => parts.push(format!("X{}", idx + 1)),
                    e => parts.push(format!("X{}^{}", idx + 1, e)),
                }
            }
            for (idx, e) in m.v[nx..nx + nz].iter().enumerate() {
                match *e {
                    0 => {}
                    1 => parts.push(format!("z{}", idx + 1)),
                    e => parts.push(format!("z{}^{}", idx + 1, e)),
                }
            }
            if parts.is_empty() {
                parts.push("1".into());
            }
            write!(f, "{}", parts.join(" * "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly[{}x{}]({})", self.nx, self.nz, self)
    }
}

mod parse {
    use super::*;

    struct Lexer<'a> {
        s: &'a [u8],
        pos: usize,
    }

    impl<'a> Lexer<'a> {
        fn skip_ws(&mut self) {
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
        }

        fn peek(&mut self) -> Option<u8> {
            self.skip_ws();
            self.s.get(self.pos).copied()
        }

        fn bump(&mut self) -> Option<u8> {
            let c = self.peek()?;
            self.pos += 1;
            Some(c)
        }

        fn err(&self, msg: &str) -> Error {
            Error::Parse(format!("{msg} at byte {}", self.pos))
        }

        fn int(&mut self) -> Result<i64> {
            self.skip_ws();
            let start = self.pos;
            if self.s.get(self.pos) == Some(&b'-') {
                self.pos += 1;
            }
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            std::str::from_utf8(&self.s[start..self.pos])
                .ok()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| self.err("expected integer"))
        }

        fn digits(&mut self) -> &'a str {
            let start = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            std::str::from_utf8(&self.s[start..self.pos]).unwrap_or("")
        }
    }

    pub(super) fn parse(text: &str, nx: usize, nz: usize) -> Result<MPoly> {
        let mut lx = Lexer {
            s: text.as_bytes(),
            pos: 0,
        };
        let mut terms = Vec::new();
        let mut sign = Rational::one();
        if lx.peek() == Some(b'-') {
            lx.bump();
            sign = -sign;
        } else if lx.peek() == Some(b'+') {
            lx.bump();
        }
        loop {
            let (m, c) = term(&mut lx, nx, nz)?;
            terms.push((m, &c * &sign));
            match lx.bump() {
                None => break,
                Some(b'+') => sign = Rational::one(),
                Some(b'-') => sign = -Rational::one(),
                Some(_) => return Err(lx.err("expected + or -")),
            }
        }
        Ok(MPoly::from_terms(nx, nz, terms))
    }

    fn term(lx: &mut Lexer, nx: usize, nz: usize) -> Result<(Mono, Rational)> {
        let mut m = Mono::ONE;
        let mut c = Rational::one();
        loop {
            match lx.peek() {
                Some(d) if d.is_ascii_digit() => {
                    let n = lx.digits().to_string();
                    let mut r: Rational = n.parse()?;
                    if lx.peek() == Some(b'/') {
                        lx.bump();
                        lx.skip_ws();
                        let d = lx.digits().to_string();
                        let den: Rational = d.parse()?;
                        if den.is_zero() {
                            return Err(lx.err("zero denominator"));
                        }
                        r = &r / &den;
                    }
                    c = &c * &r;
                }
                Some(v @ (b'q' | b'X' | b'z')) => {
                    lx.bump();
                    let idx = if v == b'q' {
                        0
                    } else {
                        let d = lx.digits();
                        d.parse::<usize>().map_err(|_| lx.err("expected variable index"))?
                    };
                    let mut e = 1i64;
                    if lx.peek() == Some(b'^') {
                        lx.bump();
                        e = lx.int()?;
                    }
                    let e = i32::try_from(e).map_err(|_| lx.err("exponent too large"))?;
                    match v {
                        b'q' => m.q += e,
                        b'X' => {
                            if idx == 0 || idx > nx {
                                return Err(lx.err("X index out of range"));
                            }
                            if e < 0 {
                                return Err(lx.err("negative X exponent"));
                            }
                            m.v[idx - 1] = to_i8_checked(m.v[idx - 1] as i32 + e).ok_or_else(|| lx.err("exponent"))?;
                        }
                        _ => {
                            if idx == 0 || idx > nz {
                                return Err(lx.err("z index out of range"));
                            }
                            let p = nx + idx - 1;
                            m.v[p] = to_i8_checked(m.v[p] as i32 + e).ok_or_else(|| lx.err("exponent"))?;
                        }
                    }
                }
                _ => return Err(lx.err("expected factor")),
            }
            if lx.peek() == Some(b'*') {
                lx.bump();
            } else {
                return Ok((m, c));
            }
        }
    }

    fn to_i8_checked(e: i32) -> Option<i8> {
        i8::try_from(e).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str, nx: usize, nz: usize) -> MPoly {
        MPoly::parse(s, nx, nz).unwrap()
    }

    #[test]
    fn display_and_parse() {
        let a = p("q^-3 * X1", 1, 0);
        assert_eq!(a.to_string(), "q^-3 * X1");
        let b = p("-2/3 * q * X1^2 * z2^-1 + X2 - 1", 2, 2);
        assert_eq!(MPoly::parse(&b.to_string(), 2, 2).unwrap(), b);
        assert!(MPoly::parse("X3", 2, 0).is_err());
        assert!(MPoly::parse("X1^-1", 2, 0).is_err());
    }

    #[test]
    fn exact_division_examples() {
        let f = p("X1 - X2", 2, 1);
        let g = p("X1^2 + X1*X2 + q*z1", 2, 1);
        assert_eq!((&f * &g).exact_div(&f).unwrap(), g);
        assert!(p("X1 + X2", 2, 1).exact_div(&f).is_err());
        let h = p("z1 - q^2*z2", 0, 2);
        let k = p("z1^-2 + q", 0, 2);
        assert_eq!((&h * &k).exact_div(&k).unwrap(), h);
        assert!(p("1", 1, 0).exact_div(&p("X1", 1, 0)).is_err());
    }

    #[test]
    fn substitution() {
        let f = p("X1 * z1 - q^2 * X2", 2, 2);
        let map = MonoMap::identity(2, 2);
        let zinv = map.out_mono(&[], &[(0, -1)], 0);
        let map = map.set_x(0, Rational::one(), zinv);
        assert_eq!(f.substitute(&map), p("1 - q^2 * X2", 2, 2));
    }

    #[test]
    fn json_round_trip() {
        let f = p("-2/3 * q * X1^2 * z2^-1 + q^-1 * X1^2 * z2^-1 + X2 - 1", 2, 2);
        let s = serde_json::to_string(&f).unwrap();
        let g: MPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn skew_symmetrisation() {
        let f = p("X1^2 * X2", 2, 0);
        assert_eq!(f.skew_symmetrize_x(), p("X1^2*X2 - X1*X2^2", 2, 0));
        assert!(f.skew_symmetrize_x().is_skew_x());
        assert!(f.symmetrize_x().is_symmetric_x());
    }

    fn arb(nx: usize, nz: usize) -> impl Strategy<Value = MPoly> {
        proptest::collection::vec(
            (
                -3i64..4,
                -2i32..3,
                proptest::collection::vec(0i32..3, nx),
                proptest::collection::vec(-2i32..3, nz),
            ),
            0..6,
        )
        .prop_map(move |ts| {
            MPoly::from_terms(
                nx,
                nz,
                ts.into_iter()
                    .map(|(c, qe, x, z)| (Mono::from_parts(nx, &x, &z, qe), Rational::from_int(c)))
                    .collect(),
            )
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb(2, 2), b in arb(2, 2), c in arb(2, 2)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a - &a), &MPoly::zero(2, 2));
        }

        #[test]
        fn division_inverts_multiplication(a in arb(2, 2), b in arb(2, 2)) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).exact_div(&b).unwrap(), a);
        }

        #[test]
        fn text_and_json_round_trip(a in arb(3, 2)) {
            prop_assert_eq!(MPoly::parse(&a.to_string(), 3, 2).unwrap(), a.clone());
            let s = serde_json::to_string(&a).unwrap();
            let back: MPoly = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
