//! The function-space realization of `V_{z_1} ⊗ ... ⊗ V_{z_n}`.
//!
//! An element of weight `n - 2l` is a polynomial `P(X_1..X_l | z_1..z_n)`,
//! symmetric in `X`, of degree at most `n-1` in each `X_a`, and Laurent in `z`.
//! The images of the tensor basis are the symmetrized products
//!
//! ```text
//! w_M = Sym( prod_a G_{m_a}(X_a) prod_{a<b} (q^{-1} X_a - q X_b) / (X_a - X_b) )
//! G_m(X) = q^{m-n} prod_{k<m} (1 - q^{-2} z_k X) prod_{k>m} (1 - z_k X)
//! ```
//!
//! [`w_basis`] never forms the symmetrization explicitly. It antisymmetrizes the
//! numerator into alternants `a_kappa`, rewrites `a_kappa / a_delta` as a Schur
//! polynomial and expands that in monomial symmetric functions through Kostka
//! numbers. [`w_basis_naive`] is the literal definition and serves as an oracle.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::algebra::laurent::QLaurent;
use crate::algebra::linalg::{rank_bareiss, rank_field, LaurentEchelon};
use crate::algebra::mpoly::{Mono, MonoMap};
use crate::algebra::{GaussPoly, MPoly, Rational};
use crate::combinat::{
    all_partitions_in_box, compositions, multiset_permutations, partitions_in_box, strict_sequences, subsets, Kostka,
};
use crate::error::{Error, Result};
use crate::evalmodule::{act_generator, ActionTable, Generator, SignString, TensorVec};

/// An element of `F_{n,l}`: a polynomial in `l` variables `X` and `n` variables `z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FElement {
    pub n: usize,
    pub l: usize,
    pub poly: MPoly,
}

impl FElement {
    pub fn new(n: usize, l: usize, poly: MPoly) -> Result<Self> {
        if poly.nx() != l || poly.nz() != n {
            return Err(Error::InvalidArgument(format!(
                "polynomial layout ({}, {}) does not match (l, n) = ({l}, {n})",
                poly.nx(),
                poly.nz()
            )));
        }
        Ok(Self { n, l, poly })
    }

    pub fn zero(n: usize, l: usize) -> Self {
        Self {
            n,
            l,
            poly: MPoly::zero(l, n),
        }
    }

    pub fn weight(&self) -> i32 {
        self.n as i32 - 2 * self.l as i32
    }
}

/// Coefficients of `G^{(n)}_m(X)` in powers of `X`, as polynomials in `z`, `q`.
/// `m` is 1-based.
pub fn g_coefficients(n: usize, m: usize) -> Vec<MPoly> {
    assert!(m >= 1 && m <= n);
    let mut coeffs = vec![MPoly::q_pow(0, n, m as i32 - n as i32)];
    for k in 1..=n {
        if k == m {
            continue;
        }
        let mut zm = Mono::ONE;
        zm.v[k - 1] = 1;
        let lin = if k < m {
            MPoly::term(0, n, Rational::from_int(-1), zm.with_q(-2))
        } else {
            MPoly::term(0, n, Rational::from_int(-1), zm)
        };
        let mut next = vec![MPoly::zero(0, n); coeffs.len() + 1];
        for (d, c) in coeffs.iter().enumerate() {
            next[d] = &next[d] + c;
            next[d + 1] = &next[d + 1] + &(c * &lin);
        }
        coeffs = next;
    }
    coeffs
}

/// `G^{(n)}_m(X_a)` as an element of the `(l, n)` layout.
pub fn g_poly(n: usize, m: usize, l: usize, a: usize) -> MPoly {
    let mut out = MPoly::zero(l, n);
    for (d, c) in g_coefficients(n, m).into_iter().enumerate() {
        let mut xm = Mono::ONE;
        xm.v[a] = d as i8;
        out = &out
            + &c.relayout(l, n, &[], &(0..n).collect::<Vec<_>>())
                .mul_term(&Rational::one(), &xm);
    }
    out
}

/// `prod_{a<b} (q^{-1} X_a - q X_b)` keyed by `X` exponent, with `q`-Laurent coefficients.
fn cross_factor(l: usize) -> Vec<(Vec<usize>, QLaurent)> {
    let mut cur: BTreeMap<Vec<usize>, QLaurent> = BTreeMap::new();
    cur.insert(vec![0; l], QLaurent::one());
    for a in 0..l {
        for b in a + 1..l {
            let mut next: BTreeMap<Vec<usize>, QLaurent> = BTreeMap::new();
            for (g, c) in &cur {
                let mut ga = g.clone();
                ga[a] += 1;
                let ta = c.shift(-1);
                let e = next.entry(ga).or_insert_with(QLaurent::zero);
                *e = &*e + &ta;
                let mut gb = g.clone();
                gb[b] += 1;
                let tb = -&c.shift(1);
                let e = next.entry(gb).or_insert_with(QLaurent::zero);
                *e = &*e + &tb;
            }
            cur = next.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        }
    }
    cur.into_iter().collect()
}

type WKey = (usize, Vec<usize>);

fn w_cache() -> &'static Mutex<HashMap<WKey, Arc<MPoly>>> {
    static CACHE: OnceLock<Mutex<HashMap<WKey, Arc<MPoly>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn check_subset(n: usize, m: &[usize]) -> Result<()> {
    if m.windows(2).any(|w| w[0] >= w[1]) || m.iter().any(|&x| x == 0 || x > n) {
        return Err(Error::InvalidArgument(format!(
            "{m:?} is not an increasing subset of 1..={n}"
        )));
    }
    if n + m.len() > crate::algebra::mpoly::MAX_VARS {
        return Err(Error::InvalidArgument("too many variables".into()));
    }
    Ok(())
}

/// The basis element `w^{(n)}_M` for an increasing 1-based subset `M`. Results are cached.
pub fn w_basis(n: usize, m: &[usize]) -> Result<FElement> {
    check_subset(n, m)?;
    let key = (n, m.to_vec());
    if let Some(p) = w_cache().lock().expect("cache lock").get(&key) {
        return Ok(FElement {
            n,
            l: m.len(),
            poly: (**p).clone(),
        });
    }
    let poly = w_basis_uncached(n, m);
    w_cache()
        .lock()
        .expect("cache lock")
        .insert(key, Arc::new(poly.clone()));
    Ok(FElement { n, l: m.len(), poly })
}

/// The basis element for a sign string (minus positions give `M`).
pub fn w_of_signs(eps: &SignString) -> Result<FElement> {
    let m: Vec<usize> = eps.minus_positions().into_iter().map(|k| k + 1).collect();
    w_basis(eps.len(), &m)
}

fn w_basis_uncached(n: usize, m: &[usize]) -> MPoly {
    let l = m.len();
    if l == 0 {
        return MPoly::one(0, n);
    }
    let g: Vec<Vec<MPoly>> = m.iter().map(|&mm| g_coefficients(n, mm)).collect();
    let cross = cross_factor(l);
    let delta: Vec<usize> = (0..l).rev().collect();
    let lambdas_by_size: Vec<Vec<Vec<usize>>> = (0..=l * (n - 1)).map(|s| partitions_in_box(s, l, n - 1)).collect();
    let lambda_index: HashMap<Vec<usize>, usize> = lambdas_by_size
        .iter()
        .flatten()
        .cloned()
        .enumerate()
        .map(|(i, p)| (p, i))
        .collect();
    let n_lambda = lambda_index.len();

    // d[mu][lambda] = sum over gamma of sign * T_gamma * K_{sort(mu+gamma) - delta, lambda}
    let kostka = Mutex::new(Kostka::new());
    let first: Vec<usize> = (0..n).collect();
    let partials: Vec<Vec<FxHashMap<Mono, Rational>>> = first
        .par_iter()
        .map(|&mu0| {
            let mut acc: Vec<FxHashMap<Mono, Rational>> = vec![FxHashMap::default(); n_lambda];
            for rest in compositions(l - 1, n - 1) {
                let mut mu = vec![mu0];
                mu.extend(rest);
                let mut dvec: BTreeMap<usize, QLaurent> = BTreeMap::new();
                for (gamma, t) in &cross {
                    let alpha: Vec<usize> = mu.iter().zip(gamma).map(|(a, b)| a + b).collect();
                    let mut sorted = alpha.clone();
                    sorted.sort_unstable_by(|a, b| b.cmp(a));
                    if sorted.windows(2).any(|w| w[0] == w[1]) {
                        continue;
                    }
                    let inversions = (0..l)
                        .flat_map(|i| (i + 1..l).map(move |j| (i, j)))
                        .filter(|&(i, j)| alpha[i] < alpha[j])
                        .count();
                    let shape: Vec<usize> = sorted.iter().zip(&delta).map(|(k, d)| k - d).collect();
                    let size: usize = shape.iter().sum();
                    let tt = if inversions % 2 == 1 { -t } else { t.clone() };
                    for lam in &lambdas_by_size[size] {
                        let kv = kostka.lock().expect("kostka lock").get(&shape, lam);
                        if kv == 0 {
                            continue;
                        }
                        let idx = lambda_index[lam];
                        let e = dvec.entry(idx).or_insert_with(QLaurent::zero);
                        *e = &*e + &tt.scale(&Rational::from_int(kv as i64));
                    }
                }
                if dvec.values().all(|c| c.is_zero()) {
                    continue;
                }
                let mut f = MPoly::one(0, n);
                for (a, &e) in mu.iter().enumerate() {
                    f = &f * &g[a][e];
                }
                for (idx, c) in dvec {
                    for (qe, qc) in c.terms() {
                        for (fm, fc) in f.terms() {
                            let mono = fm.mul(&Mono::q_pow(*qe));
                            let v = fc * qc;
                            let slot = acc[idx].entry(mono).or_insert_with(Rational::zero);
                            *slot += &v;
                        }
                    }
                }
            }
            acc
        })
        .collect();
    let mut dl: Vec<FxHashMap<Mono, Rational>> = vec![FxHashMap::default(); n_lambda];
    for part in partials {
        for (idx, map) in part.into_iter().enumerate() {
            for (mono, c) in map {
                let slot = dl[idx].entry(mono).or_insert_with(Rational::zero);
                *slot += &c;
            }
        }
    }
    let lambdas: Vec<Vec<usize>> = {
        let mut v: Vec<(usize, Vec<usize>)> = lambda_index.iter().map(|(p, i)| (*i, p.clone())).collect();
        v.sort();
        v.into_iter().map(|(_, p)| p).collect()
    };
    let mut terms: Vec<(Mono, Rational)> = Vec::new();
    for (idx, map) in dl.into_iter().enumerate() {
        let coeffs: Vec<(Mono, Rational)> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if coeffs.is_empty() {
            continue;
        }
        for alpha in multiset_permutations(&lambdas[idx]) {
            for (zm, c) in &coeffs {
                let mut mono = Mono::q_pow(zm.q);
                for (a, e) in alpha.iter().enumerate() {
                    mono.v[a] = *e as i8;
                }
                for k in 0..n {
                    mono.v[l + k] = zm.v[k];
                }
                terms.push((mono, c.clone()));
            }
        }
    }
    terms.sort_unstable_by_key(|a| a.0);
    MPoly::from_sorted_unchecked(l, n, terms)
}

/// `w_M` computed by symmetrizing the numerator and dividing by the Vandermonde product.
pub fn w_basis_naive(n: usize, m: &[usize]) -> Result<FElement> {
    check_subset(n, m)?;
    let l = m.len();
    let mut num = MPoly::one(l, n);
    for (a, &mm) in m.iter().enumerate() {
        num = &num * &g_poly(n, mm, l, a);
    }
    let mut vdm = MPoly::one(l, n);
    for a in 0..l {
        for b in a + 1..l {
            let xa = MPoly::x(l, n, a);
            let xb = MPoly::x(l, n, b);
            num = &num * &(&xa.mul_qpow(-1) - &xb.mul_qpow(1));
            vdm = &vdm * &(&xa - &xb);
        }
    }
    let poly = num.skew_symmetrize_x().exact_div(&vdm)?;
    Ok(FElement { n, l, poly })
}

/// Which subspace of `F_{n,l}` to test against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpaceKind {
    /// Symmetric in `X`, degree at most `n-1`, wheel condition.
    F,
    /// `F` plus symmetry in `z` and the extra vanishing condition.
    W,
    /// `W` restricted to polynomial dependence on `z`.
    Wgeq0,
    /// Skew-symmetric counterpart at `q = i`.
    WskewC,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub which: SpaceKind,
    pub n: usize,
    /// Number of `X` variables; `None` leaves it open (all `l` for graded dimensions).
    pub l: Option<usize>,
    /// Also require invariance under permutations of `z` (implied for the `W` kinds).
    pub symmetric_in_z: bool,
}

impl SpaceSpec {
    pub fn new(which: SpaceKind, n: usize) -> Self {
        Self {
            which,
            n,
            l: None,
            symmetric_in_z: false,
        }
    }

    pub fn with_l(mut self, l: usize) -> Self {
        self.l = Some(l);
        self
    }
}

/// Outcome of a membership test; `failures` names each violated condition.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MembershipReport {
    pub checked: Vec<String>,
    pub failures: Vec<String>,
}

impl MembershipReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, name: String, ok: bool) {
        if !ok {
            self.failures.push(name.clone());
        }
        self.checked.push(name);
    }
}

/// Substitution `X_1 -> z_k^{-1}`, `X_2 -> q^2 z_k^{-1}` (0-based `k`).
pub fn xxz_wheel_map(l: usize, n: usize, k: usize) -> MonoMap {
    let map = MonoMap::identity(l, n);
    let a = map.out_mono(&[], &[(k, -1)], 0);
    let b = map.out_mono(&[], &[(k, -1)], 2);
    map.set_x(0, Rational::one(), a).set_x(1, Rational::one(), b)
}

/// Substitution `X_1 -> z_1^{-1}`, `z_2 -> q^2 z_1`.
pub fn w_condition_map(l: usize, n: usize) -> MonoMap {
    let map = MonoMap::identity(l, n);
    let a = map.out_mono(&[], &[(0, -1)], 0);
    let b = map.out_mono(&[], &[(0, 1)], 2);
    map.set_x(0, Rational::one(), a).set_z(1, Rational::one(), b)
}

/// Substitution `X_1 -> z_1^{-1}`, `z_2 -> -z_1`.
pub fn skew_condition_map(l: usize, n: usize) -> MonoMap {
    let map = MonoMap::identity(l, n);
    let a = map.out_mono(&[], &[(0, -1)], 0);
    let b = map.out_mono(&[], &[(0, 1)], 0);
    map.set_x(0, Rational::one(), a).set_z(1, Rational::from_int(-1), b)
}

/// Tests membership of `f` in the given space.
pub fn membership(f: &FElement, spec: &SpaceSpec) -> Result<MembershipReport> {
    if f.n != spec.n || spec.l.is_some_and(|l| l != f.l) {
        return Err(Error::InvalidArgument(format!(
            "element has (n, l) = ({}, {}), space has n = {} and l = {:?}",
            f.n, f.l, spec.n, spec.l
        )));
    }
    let (n, l) = (f.n, f.l);
    let p = &f.poly;
    let mut rep = MembershipReport::default();
    if spec.which == SpaceKind::WskewC {
        let g = p.specialize_qi();
        return Ok(skew_membership(&g, n, l));
    }
    if l >= 2 {
        rep.record("symmetric in X".into(), p.is_symmetric_x());
    }
    if l > 0 {
        rep.record(
            format!("degree in each X at most {}", n as i32 - 1),
            p.max_x_exponent().unwrap_or(0) < n as i32,
        );
    }
    if l >= 2 {
        let ok = (0..n).all(|k| p.substitute(&xxz_wheel_map(l, n, k)).is_zero());
        rep.record("wheel condition X1 = 1/z_k, X2 = q^2/z_k".into(), ok);
    }
    if spec.symmetric_in_z && spec.which == SpaceKind::F {
        rep.record("symmetric in z".into(), p.is_symmetric_z());
    }
    if matches!(spec.which, SpaceKind::W | SpaceKind::Wgeq0) {
        rep.record("symmetric in z".into(), p.is_symmetric_z());
        if n >= 2 && l >= 1 {
            rep.record(
                "vanishing at X1 = 1/z1, z2 = q^2 z1".into(),
                p.substitute(&w_condition_map(l, n)).is_zero(),
            );
        }
    }
    if spec.which == SpaceKind::Wgeq0 {
        rep.record("polynomial in z".into(), p.min_z_exponent().unwrap_or(0) >= 0);
    }
    Ok(rep)
}

/// Membership in the skew space over `Q(i)`.
pub fn skew_membership(g: &GaussPoly, n: usize, l: usize) -> MembershipReport {
    let mut rep = MembershipReport::default();
    if l >= 2 {
        rep.record("skew-symmetric in X".into(), g.is_skew_x());
    }
    if l > 0 {
        rep.record(
            format!("degree in each X at most {}", n as i32 - 1),
            g.max_x_exponent().unwrap_or(0) < n as i32,
        );
    }
    rep.record("symmetric in z".into(), g.is_symmetric_z());
    if n >= 2 && l >= 1 {
        rep.record(
            "vanishing at X1 = 1/z1, z2 = -z1".into(),
            g.substitute(&skew_condition_map(l, n)).is_zero(),
        );
    }
    rep
}

/// Evaluates at `X_a = z_{j_a}^{-1}` for a 1-based subset `J`.
pub fn eval_at_point(f: &FElement, j: &[usize]) -> Result<MPoly> {
    if j.len() != f.l {
        return Err(Error::InvalidArgument("point has wrong length".into()));
    }
    let mut map = MonoMap::embed(f.l, f.n, f.l, f.n);
    for (a, &jj) in j.iter().enumerate() {
        let m = map.out_mono(&[], &[(jj - 1, -1)], 0);
        map = map.set_x(a, Rational::one(), m);
    }
    drop_x(&f.poly.substitute(&map))
}

/// Reinterprets a polynomial with no `X` dependence in the `(0, n)` layout.
fn drop_x(p: &MPoly) -> Result<MPoly> {
    let (l, n) = (p.nx(), p.nz());
    let mut terms = Vec::with_capacity(p.len());
    for (m, c) in p.terms() {
        if m.v[..l].iter().any(|e| *e != 0) {
            return Err(Error::InvalidArgument("evaluation left an X variable".into()));
        }
        let mut o = Mono::q_pow(m.q);
        o.v[..n].copy_from_slice(&m.v[l..l + n]);
        terms.push((o, c.clone()));
    }
    Ok(MPoly::from_terms(0, n, terms))
}

/// A rational function: polynomial numerator over a product of polynomial factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc {
    pub num: MPoly,
    pub den: Vec<MPoly>,
}

impl RatFunc {
    pub fn poly(num: MPoly) -> Self {
        Self { num, den: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn den_product(&self) -> MPoly {
        self.den
            .iter()
            .fold(MPoly::one(self.num.nx(), self.num.nz()), |a, b| &a * b)
    }

    /// Cancels denominator factors that divide the numerator.
    pub fn reduce(mut self) -> Self {
        let mut kept = Vec::new();
        for f in std::mem::take(&mut self.den) {
            match self.num.exact_div(&f) {
                Ok(q) => self.num = q,
                Err(_) => kept.push(f),
            }
        }
        self.den = kept;
        self
    }
}

/// Normalises a denominator factor: strips its monomial content and makes the
/// leading coefficient one. Returns `(unit, factor)` with `original = unit * factor`.
fn normalize_factor(f: &MPoly) -> (MPoly, MPoly) {
    let terms = f.terms();
    let mut content = terms[0].0;
    for (m, _) in terms {
        content = content.gcd_min(m);
    }
    let (lm, lc) = f.leading().cloned().expect("nonzero factor");
    let _ = lm;
    let unit = MPoly::term(f.nx(), f.nz(), lc.clone(), content);
    let normalized = f.mul_term(&lc.recip(), &Mono::ONE.div(&content));
    (unit, normalized)
}

/// Diagonal value `w_J(z_J^{-1})` as numerator and denominator factor list.
pub fn triangular_value(n: usize, j: &[usize]) -> (MPoly, Vec<MPoly>) {
    let z = |k: usize| MPoly::z(0, n, k - 1);
    let one = MPoly::one(0, n);
    let mut num = one.clone();
    let mut den = Vec::new();
    for &ja in j {
        num = num.mul_qpow(ja as i32 - n as i32);
        for k in 1..=n {
            if k == ja {
                continue;
            }
            let ratio = z(k).mul_term(&Rational::one(), &Mono::ONE.div(&z(ja).terms()[0].0));
            let f = if k < ja {
                &one - &ratio.mul_qpow(-2)
            } else {
                &one - &ratio
            };
            num = &num * &f;
        }
    }
    for a in 0..j.len() {
        for b in a + 1..j.len() {
            num = &num * &(&z(j[b]).mul_qpow(-1) - &z(j[a]).mul_qpow(1));
            den.push(&z(j[b]) - &z(j[a]));
        }
    }
    (num, den)
}

/// Expands `f` in the basis `w_J`, returning coefficients keyed by 1-based `J`.
pub fn expand_in_w_basis(f: &FElement) -> Result<BTreeMap<Vec<usize>, RatFunc>> {
    let (n, l) = (f.n, f.l);
    let mut js = subsets(n, l)
        .into_iter()
        .map(|s| s.into_iter().map(|x| x + 1).collect::<Vec<_>>())
        .collect::<Vec<_>>();
    js.sort_by(|a, b| {
        let (sa, sb) = (a.iter().sum::<usize>(), b.iter().sum::<usize>());
        sb.cmp(&sa).then_with(|| b.cmp(a))
    });
    let mut rem = f.poly.clone();
    let mut rem_den: Vec<MPoly> = Vec::new();
    let mut out = BTreeMap::new();
    for j in &js {
        let w = w_basis(n, j)?;
        let val = eval_at_point(
            &FElement {
                n,
                l,
                poly: rem.clone(),
            },
            j,
        )?;
        if val.is_zero() {
            out.insert(j.clone(), RatFunc::poly(MPoly::zero(0, n)));
            continue;
        }
        let (dnum, dden) = triangular_value(n, j);
        if dnum.is_zero() {
            return Err(Error::SingularEvaluation(format!("diagonal value vanishes at {j:?}")));
        }
        // c_J = val * prod(dden) / (prod(rem_den) * dnum)
        let mut num = val;
        for d in &dden {
            num = &num * d;
        }
        let mut den: Vec<MPoly> = rem_den.clone();
        let mut unit = MPoly::one(0, n);
        for factor in split_factors(&dnum) {
            let (u, nf) = normalize_factor(&factor);
            unit = &unit * &u;
            if nf.len() > 1 {
                den.push(nf);
            }
        }
        num = num.exact_div(&unit)?;
        let c = RatFunc { num, den }.reduce();
        for d in &c.den {
            check_permitted(d)?;
        }
        // rem <- rem/rem_den - c * w, over the merged denominator
        let merged = merge_dens(&rem_den, &c.den);
        let lift_rem = remove_factors(&merged, &rem_den);
        let lift_c = remove_factors(&merged, &c.den);
        let embed = |p: &MPoly| p.relayout(l, n, &[], &(0..n).collect::<Vec<_>>());
        let mut new_rem = rem.clone();
        for d in &lift_rem {
            new_rem = &new_rem * &embed(d);
        }
        let mut cw = &w.poly * &embed(&c.num);
        for d in &lift_c {
            cw = &cw * &embed(d);
        }
        new_rem = &new_rem - &cw;
        let mut reduced_den = Vec::new();
        for d in merged {
            if new_rem.is_zero() {
                continue;
            }
            match new_rem.exact_div(&embed(&d)) {
                Ok(q) => new_rem = q,
                Err(_) => reduced_den.push(d),
            }
        }
        rem = new_rem;
        rem_den = reduced_den;
        out.insert(j.clone(), c);
    }
    if !rem.is_zero() {
        return Err(Error::NotInSpace(
            "nonzero remainder after triangular elimination".into(),
        ));
    }
    out.retain(|_, c| !c.is_zero());
    // reconstruction over a common denominator
    let mut common: Vec<MPoly> = Vec::new();
    for c in out.values() {
        common = merge_dens(&common, &c.den);
    }
    let embed = |p: &MPoly| p.relayout(l, n, &[], &(0..n).collect::<Vec<_>>());
    let mut lhs = f.poly.clone();
    for d in &common {
        lhs = &lhs * &embed(d);
    }
    let mut rhs = MPoly::zero(l, n);
    for (j, c) in &out {
        let mut t = &w_basis(n, j)?.poly * &embed(&c.num);
        for d in remove_factors(&common, &c.den) {
            t = &t * &embed(&d);
        }
        rhs = &rhs + &t;
    }
    if lhs != rhs {
        return Err(Error::NotInSpace("reconstruction mismatch".into()));
    }
    Ok(out)
}

/// Splits a product built by [`triangular_value`] into its binomial factors by trial.
fn split_factors(p: &MPoly) -> Vec<MPoly> {
    let n = p.nz();
    let mut rest = p.clone();
    let mut out = Vec::new();
    let cands = candidate_factors(n);
    for c in &cands {
        while rest.len() > 1 {
            match rest.exact_div(c) {
                Ok(q) => {
                    out.push(c.clone());
                    rest = q;
                }
                Err(_) => break,
            }
        }
    }
    out.push(rest);
    out
}

/// `z_j - q^{2s} z_k` for `s` in `-1, 0, 1` and `j != k`, normalised.
fn candidate_factors(n: usize) -> Vec<MPoly> {
    let mut out = Vec::new();
    for j in 0..n {
        for k in 0..n {
            if j == k {
                continue;
            }
            for s in [-1, 0, 1] {
                if s == 0 && j > k {
                    continue;
                }
                let f = &MPoly::z(0, n, j) - &MPoly::z(0, n, k).mul_qpow(2 * s);
                out.push(normalize_factor(&f).1);
            }
        }
    }
    out
}

fn check_permitted(d: &MPoly) -> Result<()> {
    let n = d.nz();
    if candidate_factors(n).iter().any(|c| c == d) {
        Ok(())
    } else {
        Err(Error::SingularEvaluation(format!("unexpected denominator {d}")))
    }
}

fn merge_dens(a: &[MPoly], b: &[MPoly]) -> Vec<MPoly> {
    let mut out = a.to_vec();
    let mut pool = a.to_vec();
    for f in b {
        if let Some(i) = pool.iter().position(|g| g == f) {
            pool.remove(i);
        } else {
            out.push(f.clone());
        }
    }
    out
}

fn remove_factors(all: &[MPoly], sub: &[MPoly]) -> Vec<MPoly> {
    let mut out = all.to_vec();
    for f in sub {
        let i = out.iter().position(|g| g == f).expect("factor present");
        out.remove(i);
    }
    out
}

/// The R-matrix variant used by the exchange check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RMatrixVariant {
    /// Both diagonal entries of the middle block carry `(1 - z) q`.
    Symmetric,
    /// Lower diagonal entry `(1 - z)` without the factor `q`.
    Asymmetric,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExchangeReport {
    pub n: usize,
    pub l: usize,
    pub position: usize,
    pub checked: usize,
}

/// Verifies the exchange relation of the basis `w` at positions `(j, j+1)` (0-based `j`):
/// `w_{eps''}(z) = sum_{eps'} w_{s(eps')}(s z) R(z_j / z_{j+1})_{eps', eps''}`,
/// after clearing the denominator `1 - q^2 z_j / z_{j+1}`.
pub fn exchange_check(n: usize, l: usize, j: usize, variant: RMatrixVariant) -> Result<ExchangeReport> {
    if j + 1 >= n {
        return Err(Error::InvalidArgument("position out of range".into()));
    }
    let one = MPoly::one(l, n);
    let zj = MPoly::z(l, n, j);
    let zk = MPoly::z(l, n, j + 1);
    let x = zj.mul_term(&Rational::one(), &Mono::ONE.div(&zk.terms()[0].0));
    let qq = MPoly::q_pow(l, n, 2);
    let den = &one - &(&qq * &x);
    let diag_hi = (&one - &x).mul_qpow(1);
    let diag_lo = match variant {
        RMatrixVariant::Symmetric => diag_hi.clone(),
        RMatrixVariant::Asymmetric => &one - &x,
    };
    let off_up = &one - &qq;
    let off_dn = &(&one - &qq) * &x;
    let mut checked = 0;
    let lhs_of = |eps: &SignString| -> Result<MPoly> { Ok(w_of_signs(&eps.swapped(j, j + 1))?.poly.swap_z(j, j + 1)) };
    for eps in SignString::with_minus_count(n, l) {
        let w = w_of_signs(&eps)?.poly;
        let (a, b) = (eps.0[j], eps.0[j + 1]);
        let ok = if a == b {
            lhs_of(&eps)? == w
        } else {
            let mut pm = eps.clone();
            pm.0[j] = crate::evalmodule::Sign::Plus;
            pm.0[j + 1] = crate::evalmodule::Sign::Minus;
            let mp = pm.swapped(j, j + 1);
            let (r_pm, r_mp) = if a == crate::evalmodule::Sign::Plus {
                (&diag_hi, &off_dn)
            } else {
                (&off_up, &diag_lo)
            };
            let rhs = &(&lhs_of(&pm)? * r_pm) + &(&lhs_of(&mp)? * r_mp);
            rhs == &w * &den
        };
        if !ok {
            return Err(Error::ExchangeViolated {
                position: j,
                witness: eps.to_string(),
            });
        }
        checked += 1;
    }
    Ok(ExchangeReport {
        n,
        l,
        position: j,
        checked,
    })
}

/// Result of the triangularity check for fixed `(n, l)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangularityReport {
    pub n: usize,
    pub l: usize,
    pub zeros_checked: usize,
    pub diagonal_checked: usize,
}

/// `w_J(z_M^{-1}) = 0` unless `M <= J` componentwise, and the diagonal matches
/// [`triangular_value`].
pub fn triangularity_check(n: usize, l: usize) -> Result<TriangularityReport> {
    let sets: Vec<Vec<usize>> = subsets(n, l)
        .into_iter()
        .map(|s| s.into_iter().map(|x| x + 1).collect())
        .collect();
    let mut rep = TriangularityReport {
        n,
        l,
        zeros_checked: 0,
        diagonal_checked: 0,
    };
    for j in &sets {
        let w = w_basis(n, j)?;
        for m in &sets {
            let v = eval_at_point(&w, m)?;
            let below = m.iter().zip(j).all(|(a, b)| a <= b);
            if m == j {
                let (num, den) = triangular_value(n, j);
                let lhs = den.iter().fold(v.clone(), |acc, d| &acc * d);
                if lhs != num || v.is_zero() {
                    return Err(Error::SingularEvaluation(format!("diagonal value mismatch at {j:?}")));
                }
                rep.diagonal_checked += 1;
            } else if !below {
                if !v.is_zero() {
                    return Err(Error::NotInSpace(format!("w_{j:?} does not vanish at point {m:?}")));
                }
                rep.zeros_checked += 1;
            }
        }
    }
    Ok(rep)
}

/// Image of a tensor vector, one element per number of minus signs present:
/// `v_eps -> w_eps`, extended linearly over Laurent polynomials in `z`.
pub fn coordinate_map(v: &TensorVec) -> Result<Vec<FElement>> {
    let n = v.n();
    let zmap: Vec<usize> = (0..n).collect();
    let mut parts: BTreeMap<usize, MPoly> = BTreeMap::new();
    for (eps, c) in v.components() {
        let l = eps.minus_count();
        let wp = w_of_signs(eps)?.poly;
        let term = &wp * &c.relayout(l, n, &[], &zmap);
        let slot = parts.entry(l).or_insert_with(|| MPoly::zero(l, n));
        *slot = &*slot + &term;
    }
    Ok(parts.into_iter().map(|(l, poly)| FElement { n, l, poly }).collect())
}

/// Inclusive range of `v`-degrees requested from [`graded_dimension`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub vmin: i32,
    pub vmax: i32,
}

/// Dimensions keyed by `(degree, weight)` with `weight = n - 2l`.
pub type GradedTable = BTreeMap<(i32, i32), usize>;

/// Graded dimensions of a space by exact linear algebra.
///
/// * `Wgeq0`: rank over `Q(q)` of the vanishing conditions on the ansatz
///   `sum c m_lambda(X) m_rho(z)`, graded by `deg z - deg X`.
/// * `WskewC`: the same with alternants `a_kappa(X)` and the skew condition.
/// * `F`: dimension over the field of rational functions in `z`, reported at degree 0.
pub fn graded_dimension(spec: &SpaceSpec, window: &Window) -> Result<GradedTable> {
    let n = spec.n;
    let ls: Vec<usize> = match spec.l {
        Some(l) => vec![l],
        None => (0..=n).collect(),
    };
    let mut out = GradedTable::new();
    match spec.which {
        SpaceKind::F => {
            for l in ls {
                out.insert((0, n as i32 - 2 * l as i32), f_generic_dimension(n, l)?);
            }
        }
        SpaceKind::W => {
            return Err(Error::InvalidArgument(
                "graded pieces of W are infinite-dimensional; use Wgeq0".into(),
            ));
        }
        SpaceKind::Wgeq0 | SpaceKind::WskewC => {
            let skew = spec.which == SpaceKind::WskewC;
            let jobs: Vec<(usize, i32)> = ls
                .iter()
                .flat_map(|&l| (window.vmin..=window.vmax).map(move |d| (l, d)))
                .collect();
            let dims: Vec<Result<((i32, i32), usize)>> = jobs
                .par_iter()
                .map(|&(l, d)| {
                    let dim = if skew {
                        skew_piece_dimension(n, l, d)?
                    } else {
                        wgeq0_piece_dimension(n, l, d)?
                    };
                    Ok(((d, n as i32 - 2 * l as i32), dim))
                })
                .collect();
            for r in dims {
                let (k, v) = r?;
                out.insert(k, v);
            }
        }
    }
    Ok(out)
}

fn monomial_symmetric(vals: &[usize], offset: usize, nx: usize, nz: usize) -> Vec<Mono> {
    multiset_permutations(vals)
        .into_iter()
        .map(|p| {
            let mut m = Mono::ONE;
            for (i, e) in p.iter().enumerate() {
                m.v[offset + i] = *e as i8;
            }
            let _ = (nx, nz);
            m
        })
        .collect()
}

/// Ansatz columns `m_lambda(X) m_rho(z)` of degree `d`.
fn wgeq0_columns(n: usize, l: usize, d: i32) -> Vec<MPoly> {
    let mut cols = Vec::new();
    for lam in all_partitions_in_box(l, n.saturating_sub(1)) {
        let size = lam.iter().sum::<usize>() as i32 + d;
        if size < 0 {
            continue;
        }
        let xs = monomial_symmetric(&lam, 0, l, n);
        for rho in partitions_in_box(size as usize, n, size as usize) {
            let zs = monomial_symmetric(&rho, l, l, n);
            let mut terms = Vec::with_capacity(xs.len() * zs.len());
            for a in &xs {
                for b in &zs {
                    terms.push((a.mul(b), Rational::one()));
                }
            }
            cols.push(MPoly::from_terms(l, n, terms));
        }
    }
    cols
}

fn condition_rows(cols: &[MPoly], maps: &[MonoMap]) -> Vec<Vec<QLaurent>> {
    let width = cols.len();
    let mut rows: BTreeMap<(usize, Vec<i8>), Vec<QLaurent>> = BTreeMap::new();
    for (ci, col) in cols.iter().enumerate() {
        for (mi, map) in maps.iter().enumerate() {
            for (key, c) in col.substitute(map).grouped() {
                rows.entry((mi, key)).or_insert_with(|| vec![QLaurent::zero(); width])[ci] = c;
            }
        }
    }
    rows.into_values().collect()
}

fn wgeq0_piece_dimension(n: usize, l: usize, d: i32) -> Result<usize> {
    let cols = wgeq0_columns(n, l, d);
    let mut maps = Vec::new();
    if l >= 2 {
        maps.push(xxz_wheel_map(l, n, 0));
    }
    if n >= 2 && l >= 1 {
        maps.push(w_condition_map(l, n));
    }
    let rows = condition_rows(&cols, &maps);
    let mut ech = LaurentEchelon::new(cols.len());
    for r in rows {
        ech.insert(r);
        if ech.rank() == cols.len() {
            break;
        }
    }
    Ok(cols.len() - ech.rank())
}

fn skew_piece_dimension(n: usize, l: usize, d: i32) -> Result<usize> {
    let mut cols = Vec::new();
    for kappa in strict_sequences(l, n.saturating_sub(1)) {
        let size = kappa.iter().sum::<usize>() as i32 + d;
        if size < 0 {
            continue;
        }
        let alt = MPoly::monomial(
            l,
            n,
            Rational::one(),
            &kappa.iter().map(|&e| e as i32).collect::<Vec<_>>(),
            &[],
            0,
        )
        .skew_symmetrize_x();
        for rho in partitions_in_box(size as usize, n, size as usize) {
            let zs = monomial_symmetric(&rho, l, l, n);
            let zpoly = MPoly::from_terms(l, n, zs.into_iter().map(|m| (m, Rational::one())).collect());
            cols.push(&alt * &zpoly);
        }
    }
    let mut maps = Vec::new();
    if n >= 2 && l >= 1 {
        maps.push(skew_condition_map(l, n));
    }
    let rows = condition_rows(&cols, &maps);
    let rat_rows: Vec<Vec<Rational>> = rows
        .into_iter()
        .map(|r| r.into_iter().map(|c| c.to_owned_constant()).collect())
        .collect();
    Ok(cols.len() - rank_field(rat_rows))
}

trait ConstantPart {
    fn to_owned_constant(self) -> Rational;
}

impl ConstantPart for QLaurent {
    fn to_owned_constant(self) -> Rational {
        debug_assert!(self.terms().iter().all(|(e, _)| *e == 0));
        self.coeff(0)
    }
}

/// Dimension of `F_{n,l}` over the field of rational functions in `z`.
pub fn f_generic_dimension(n: usize, l: usize) -> Result<usize> {
    let lams = all_partitions_in_box(l, n.saturating_sub(1));
    let cols: Vec<MPoly> = lams
        .iter()
        .map(|lam| {
            MPoly::from_terms(
                l,
                n,
                monomial_symmetric(lam, 0, l, n)
                    .into_iter()
                    .map(|m| (m, Rational::one()))
                    .collect(),
            )
        })
        .collect();
    if l < 2 {
        return Ok(cols.len());
    }
    let mut rows: BTreeMap<(usize, Vec<i8>), Vec<MPoly>> = BTreeMap::new();
    for (ci, col) in cols.iter().enumerate() {
        for k in 0..n {
            let s = col.substitute(&xxz_wheel_map(l, n, k));
            // group by remaining X exponents; coefficients are polynomials in z and q
            let mut by_x: BTreeMap<Vec<i8>, Vec<(Mono, Rational)>> = BTreeMap::new();
            for (m, c) in s.terms() {
                let key = m.v[..l].to_vec();
                let mut zm = Mono::q_pow(m.q);
                for kk in 0..n {
                    zm.v[kk] = m.v[l + kk];
                }
                by_x.entry(key).or_default().push((zm, c.clone()));
            }
            for (key, terms) in by_x {
                rows.entry((k, key))
                    .or_insert_with(|| vec![MPoly::zero(0, n); cols.len()])[ci] = MPoly::from_terms(0, n, terms);
            }
        }
    }
    let rank = rank_bareiss(rows.into_values().collect())?;
    Ok(cols.len() - rank)
}

/// Generators used by [`span_graded_dim`]; the torus acts diagonally and adds nothing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GeneratorSet {
    /// `e0` and `e1`.
    ESide,
    /// `e0`, `e1` and `f1`, which generate `U_q^{>=0}`.
    Full,
}

/// Graded dimensions of `U_q^{>=0} (v_+ ⊗ ... ⊗ v_+)`, generated by `e0`, `e1`, `f1`
/// and the torus, keyed by `(z-degree, weight)` for degrees `0..=vmax`.
pub fn span_graded_dim(n: usize, gens: GeneratorSet, vmax: i32, table: &ActionTable) -> Result<GradedTable> {
    let mut out = GradedTable::new();
    // per degree: one echelon basis and one list of spanning vectors per number of minus signs
    let mut prev: Vec<Vec<TensorVec>> = vec![Vec::new(); n + 1];
    for d in 0..=vmax.max(0) {
        let coords = SpanCoords::new(n, d as usize);
        let mut ech: Vec<LaurentEchelon> = (0..=n).map(|l| LaurentEchelon::new(coords.width(l))).collect();
        let mut basis: Vec<Vec<TensorVec>> = vec![Vec::new(); n + 1];
        let mut queue: Vec<(usize, TensorVec)> = Vec::new();
        if d == 0 {
            queue.push((0, TensorVec::highest(n)));
        } else {
            for (l, vs) in prev.iter().enumerate() {
                for v in vs {
                    let w = act_generator(Generator::E0, v, table)?;
                    if !w.is_zero() && l < n {
                        queue.push((l + 1, w));
                    }
                }
            }
        }
        while let Some((l, v)) = queue.pop() {
            if v.is_zero() {
                continue;
            }
            if !ech[l].insert(coords.vector(l, &v)?) {
                continue;
            }
            basis[l].push(v.clone());
            if l >= 1 {
                queue.push((l - 1, act_generator(Generator::E1, &v, table)?));
            }
            if l < n && gens == GeneratorSet::Full {
                queue.push((l + 1, act_generator(Generator::F1, &v, table)?));
            }
        }
        for l in 0..=n {
            out.insert((d, n as i32 - 2 * l as i32), ech[l].rank());
        }
        prev = basis;
    }
    Ok(out)
}

/// Coordinates of homogeneous tensor vectors of fixed `z`-degree.
struct SpanCoords {
    n: usize,
    d: usize,
    signs: Vec<Vec<SignString>>,
    zmonos: Vec<Vec<i8>>,
}

impl SpanCoords {
    fn new(n: usize, d: usize) -> Self {
        let signs = (0..=n).map(|l| SignString::with_minus_count(n, l)).collect();
        let mut zmonos: Vec<Vec<i8>> = compositions(n, d)
            .into_iter()
            .filter(|c| c.iter().sum::<usize>() == d)
            .map(|c| c.into_iter().map(|e| e as i8).collect())
            .collect();
        zmonos.sort();
        Self { n, d, signs, zmonos }
    }

    fn width(&self, l: usize) -> usize {
        self.signs[l].len() * self.zmonos.len()
    }

    fn vector(&self, l: usize, v: &TensorVec) -> Result<Vec<QLaurent>> {
        let mut out = vec![QLaurent::zero(); self.width(l)];
        for (eps, c) in v.components() {
            let si = self.signs[l]
                .iter()
                .position(|s| s == eps)
                .ok_or_else(|| Error::MixedWeight(format!("{eps}")))?;
            for (key, coeff) in c.grouped() {
                if key.iter().map(|e| *e as i32).sum::<i32>() != self.d as i32 || key.iter().any(|e| *e < 0) {
                    return Err(Error::InvalidArgument(format!(
                        "vector not homogeneous of degree {} in n = {}",
                        self.d, self.n
                    )));
                }
                let zi = self.zmonos.binary_search(&key).expect("monomial present");
                out[si * self.zmonos.len() + zi] = coeff;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, l: usize, n: usize) -> MPoly {
        MPoly::parse(s, l, n).unwrap()
    }

    #[test]
    fn small_basis_elements() {
        assert_eq!(w_basis(2, &[1]).unwrap().poly, p("q^-1 - q^-1 * X1 * z2", 1, 2));
        assert_eq!(w_basis(2, &[2]).unwrap().poly, p("1 - q^-2 * X1 * z1", 1, 2));
        assert_eq!(w_basis(3, &[]).unwrap().poly, MPoly::one(0, 3));
    }

    #[test]
    fn fast_basis_matches_naive() {
        for n in 1..=4 {
            for l in 0..=n.min(3) {
                for s in subsets(n, l) {
                    let m: Vec<usize> = s.into_iter().map(|x| x + 1).collect();
                    assert_eq!(w_basis(n, &m).unwrap(), w_basis_naive(n, &m).unwrap(), "n={n} M={m:?}");
                }
            }
        }
    }

    #[test]
    fn basis_elements_are_members() {
        for n in 1..=4 {
            for l in 0..=n {
                for s in subsets(n, l) {
                    let m: Vec<usize> = s.into_iter().map(|x| x + 1).collect();
                    let w = w_basis(n, &m).unwrap();
                    let r = membership(&w, &SpaceSpec::new(SpaceKind::F, n)).unwrap();
                    assert!(r.passed(), "n={n} M={m:?}: {:?}", r.failures);
                }
            }
        }
    }

    #[test]
    fn wheel_violation_is_reported() {
        let f = w_basis(2, &[1, 2]).unwrap();
        let r = membership(&f, &SpaceSpec::new(SpaceKind::F, 2)).unwrap();
        assert!(r.passed());
        let g = FElement::new(2, 2, p("X1 + X2", 2, 2)).unwrap();
        let r = membership(&g, &SpaceSpec::new(SpaceKind::F, 2)).unwrap();
        assert_eq!(r.failures.len(), 1);
        assert!(r.failures[0].starts_with("wheel"));
    }

    #[test]
    fn triangularity_small() {
        for n in 1..=4 {
            for l in 0..=n {
                triangularity_check(n, l).unwrap();
            }
        }
    }

    #[test]
    fn exchange_small() {
        for n in 2..=3 {
            for l in 0..=n {
                for j in 0..n - 1 {
                    exchange_check(n, l, j, RMatrixVariant::Symmetric).unwrap();
                }
            }
        }
        assert!(matches!(
            exchange_check(2, 1, 0, RMatrixVariant::Asymmetric),
            Err(Error::ExchangeViolated { .. })
        ));
    }

    #[test]
    fn expansion_round_trip() {
        let w = w_basis(3, &[1, 3]).unwrap();
        let c = expand_in_w_basis(&w).unwrap();
        assert_eq!(c.len(), 1);
        let v = &c[&vec![1, 3]];
        assert!(v.den.is_empty() && v.num == MPoly::one(0, 3));
    }

    #[test]
    fn coordinate_map_examples() {
        let parts = coordinate_map(&TensorVec::highest(3)).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].poly, MPoly::one(0, 3));
        let v = TensorVec::basis("-+".parse().unwrap());
        assert_eq!(coordinate_map(&v).unwrap()[0].poly, p("q^-1 - q^-1 * X1 * z2", 1, 2));
    }

    #[test]
    fn transported_action_stays_in_f() {
        let table = ActionTable::standard();
        for n in 1..=3 {
            for eps in SignString::enumerate(n) {
                let v = TensorVec::basis(eps);
                for g in [
                    Generator::E0,
                    Generator::E1,
                    Generator::F0,
                    Generator::F1,
                    Generator::T0,
                    Generator::T1,
                ] {
                    for f in coordinate_map(&act_generator(g, &v, &table).unwrap()).unwrap() {
                        assert!(membership(&f, &SpaceSpec::new(SpaceKind::F, n)).unwrap().passed());
                    }
                }
            }
        }
    }

    #[test]
    fn coordinate_map_is_injective_on_a_window() {
        // images of v_eps * z^a for all eps with l minus signs and z-monomials with exponents in {-1, 0, 1}
        for n in 1..=3 {
            for l in 0..=n {
                let mut rows = Vec::new();
                let mut keys = std::collections::BTreeSet::new();
                for eps in SignString::with_minus_count(n, l) {
                    for a in compositions(n, 2) {
                        let z: Vec<i32> = a.iter().map(|e| *e as i32 - 1).collect();
                        let c = MPoly::monomial(0, n, Rational::one(), &[], &z, 0);
                        let f = &coordinate_map(&TensorVec::from_component(eps.clone(), c)).unwrap()[0];
                        let g = f.poly.grouped();
                        keys.extend(g.keys().cloned());
                        rows.push(g);
                    }
                }
                let keys: Vec<_> = keys.into_iter().collect();
                let mut ech = LaurentEchelon::new(keys.len());
                for g in &rows {
                    let row = keys
                        .iter()
                        .map(|k| g.get(k).cloned().unwrap_or_else(QLaurent::zero))
                        .collect();
                    ech.insert(row);
                }
                assert_eq!(ech.rank(), rows.len(), "n={n} l={l}");
            }
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]
        #[test]
        fn expansion_recovers_random_combinations(
            n in 1usize..=4,
            l in 0usize..=4,
            seed in proptest::collection::vec((-2i32..=2, -3i64..=3, 0usize..4), 1..4),
        ) {
            proptest::prop_assume!(l <= n);
            let sets: Vec<Vec<usize>> = subsets(n, l).into_iter().map(|s| s.into_iter().map(|x| x + 1).collect()).collect();
            let mut expected: BTreeMap<Vec<usize>, MPoly> = BTreeMap::new();
            for (k, (qe, c, zi)) in seed.iter().enumerate() {
                let j = sets[k % sets.len()].clone();
                let mut z = vec![0; n];
                z[zi % n] = 1;
                let coeff = MPoly::monomial(0, n, Rational::from_int(*c), &[], &z, *qe);
                let e = expected.entry(j).or_insert_with(|| MPoly::zero(0, n));
                *e = &*e + &coeff;
            }
            expected.retain(|_, c| !c.is_zero());
            let zmap: Vec<usize> = (0..n).collect();
            let mut f = MPoly::zero(l, n);
            for (j, c) in &expected {
                f = &f + &(&w_basis(n, j).unwrap().poly * &c.relayout(l, n, &[], &zmap));
            }
            let got = expand_in_w_basis(&FElement { n, l, poly: f }).unwrap();
            let got: BTreeMap<Vec<usize>, MPoly> = got.into_iter().map(|(j, c)| {
                assert!(c.den.is_empty());
                (j, c.num)
            }).collect();
            proptest::prop_assert_eq!(got, expected);
        }
    }

    #[test]
    fn generic_dimension_of_f() {
        assert_eq!(f_generic_dimension(2, 2).unwrap(), 1);
        assert_eq!(f_generic_dimension(3, 2).unwrap(), 3);
        assert_eq!(f_generic_dimension(4, 2).unwrap(), 6);
    }

    #[test]
    fn graded_pieces_small() {
        let t = graded_dimension(
            &SpaceSpec::new(SpaceKind::Wgeq0, 2).with_l(1),
            &Window { vmin: 0, vmax: 2 },
        )
        .unwrap();
        assert_eq!(t.values().copied().collect::<Vec<_>>(), vec![1, 2, 3]);
        let t = graded_dimension(
            &SpaceSpec::new(SpaceKind::Wgeq0, 1).with_l(0),
            &Window { vmin: 0, vmax: 3 },
        )
        .unwrap();
        assert_eq!(t.values().copied().collect::<Vec<_>>(), vec![1, 1, 1, 1]);
        let s = span_graded_dim(2, GeneratorSet::Full, 2, &ActionTable::standard()).unwrap();
        assert_eq!(s[&(0, 0)], 1);
        assert_eq!(s[&(1, 0)], 2);
        assert_eq!(s[&(2, 0)], 3);
    }
}
