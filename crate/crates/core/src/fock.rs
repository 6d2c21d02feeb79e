//! Level `+1` and `-1` Fock modules: a Heisenberg polynomial algebra tensored with a rank-one
//! lattice, with `x^{+-}(z)` acting by normal-ordered exponentials.
//!
//! Basis kets are `b_{-lambda} (x) v'_m` at level `+1` and `b_{lambda} (x) vbar'_m` at level `-1`,
//! where `lambda` is a partition and `m = <h_1, beta>` is the weight of the lattice point.
//! Modes are extracted degree by degree, so every output coefficient is exact.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::qnumber::{q_factorial, q_int, q_minus_qinv};
use crate::algebra::{MPoly, QLaurent, Rational};
use crate::combinat::partitions_in_box;
use crate::error::{Error, Result};
use crate::evalmodule::Sign;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Plus,
    Minus,
}

impl Level {
    pub fn value(self) -> i32 {
        match self {
            Level::Plus => 1,
            Level::Minus => -1,
        }
    }

    pub fn from_value(v: i32) -> Result<Level> {
        match v {
            1 => Ok(Level::Plus),
            -1 => Ok(Level::Minus),
            _ => Err(Error::InvalidArgument(format!("level must be 1 or -1, got {v}"))),
        }
    }

    /// Eigenvalue of the central element `C`.
    pub fn central(self) -> QLaurent {
        QLaurent::q_pow(self.value())
    }
}

/// A basis ket. `partition` is weakly decreasing with positive parts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ket {
    pub partition: Vec<u32>,
    pub m: i32,
    pub i: u8,
}

impl Ket {
    pub fn new(mut partition: Vec<u32>, m: i32) -> Self {
        partition.retain(|&p| p > 0);
        partition.sort_unstable_by(|a, b| b.cmp(a));
        Ket {
            partition,
            m,
            i: m.rem_euclid(2) as u8,
        }
    }

    pub fn size(&self) -> i64 {
        self.partition.iter().map(|&p| p as i64).sum()
    }

    pub fn degree(&self, level: Level) -> i64 {
        let m = self.m as i64;
        let lattice = (m * m - self.i as i64) / 4;
        -(level.value() as i64) * (self.size() + lattice)
    }

    fn multiplicity(&self, part: u32) -> usize {
        self.partition.iter().filter(|&&p| p == part).count()
    }

    fn with_parts(&self, extra: &[u32]) -> Ket {
        let mut p = self.partition.clone();
        p.extend_from_slice(extra);
        Ket::new(p, self.m)
    }

    fn without_part(&self, part: u32, count: usize) -> Ket {
        let mut p = self.partition.clone();
        for _ in 0..count {
            let pos = p.iter().position(|&x| x == part).expect("part present");
            p.remove(pos);
        }
        Ket {
            partition: p,
            m: self.m,
            i: self.i,
        }
    }
}

impl fmt::Display for Ket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b{:?}|m={}>", self.partition, self.m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockState {
    pub level: Level,
    pub kets: BTreeMap<Ket, QLaurent>,
}

impl FockState {
    pub fn zero(level: Level) -> Self {
        FockState {
            level,
            kets: BTreeMap::new(),
        }
    }

    pub fn basis(level: Level, ket: Ket) -> Self {
        let mut s = Self::zero(level);
        s.kets.insert(ket, QLaurent::one());
        s
    }

    /// `v'_m` at level `+1`, `vbar'_m` at level `-1`.
    pub fn extremal(level: Level, m: i32) -> Self {
        Self::basis(level, Ket::new(Vec::new(), m))
    }

    pub fn is_zero(&self) -> bool {
        self.kets.is_empty()
    }

    pub fn add_term(&mut self, ket: Ket, c: &QLaurent) {
        if c.is_zero() {
            return;
        }
        let e = self.kets.entry(ket.clone()).or_default();
        *e = &*e + c;
        if e.is_zero() {
            self.kets.remove(&ket);
        }
    }

    pub fn add(&self, other: &FockState) -> FockState {
        let mut out = self.clone();
        for (k, c) in &other.kets {
            out.add_term(k.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &FockState) -> FockState {
        self.add(&other.scale(&QLaurent::int(-1)))
    }

    pub fn scale(&self, c: &QLaurent) -> FockState {
        let mut out = Self::zero(self.level);
        if c.is_zero() {
            return out;
        }
        for (k, x) in &self.kets {
            out.add_term(k.clone(), &(x * c));
        }
        out
    }

    /// The common degree of all kets, if there is one.
    pub fn degree(&self) -> Option<i64> {
        let mut it = self.kets.keys().map(|k| k.degree(self.level));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    fn map_kets(&self, f: impl Fn(&Ket) -> Result<FockState>) -> Result<FockState> {
        let mut out = Self::zero(self.level);
        for (k, c) in &self.kets {
            for (k2, c2) in f(k)?.kets {
                out.add_term(k2, &(c * &c2));
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> FockStateJson {
        FockStateJson {
            level: self.level.value(),
            kets: self
                .kets
                .iter()
                .map(|(k, c)| KetJson {
                    partition: k.partition.clone(),
                    m: k.m,
                    i: k.i,
                    coeff: c.to_string(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &FockStateJson) -> Result<Self> {
        let mut s = Self::zero(Level::from_value(j.level)?);
        for k in &j.kets {
            let ket = Ket::new(k.partition.clone(), k.m);
            if ket.i != k.i {
                return Err(Error::Parse(format!("sector {} does not match m = {}", k.i, k.m)));
            }
            let c = MPoly::parse(&k.coeff, 0, 0)?
                .to_qlaurent()
                .ok_or_else(|| Error::Parse(format!("coefficient {} is not a Laurent polynomial in q", k.coeff)))?;
            s.add_term(ket, &c);
        }
        Ok(s)
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kets.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.kets.iter().map(|(k, c)| format!("({c}) {k}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KetJson {
    pub partition: Vec<u32>,
    pub m: i32,
    pub i: u8,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FockStateJson {
    pub level: i32,
    pub kets: Vec<KetJson>,
}

impl Serialize for FockState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FockState {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = FockStateJson::deserialize(d)?;
        FockState::from_json(&j).map_err(serde::de::Error::custom)
    }
}

fn rat_q(num: i64, den: i64, e: i32) -> QLaurent {
    QLaurent::monomial(Rational::new(num, den), e)
}

fn signed_qpow(sign: i64, e: i32) -> QLaurent {
    QLaurent::monomial(Rational::from_int(sign), e)
}

/// `[b_n, b_{-n}]` contraction constant `n [2n] / [n]`, the same at both levels.
fn contraction(n: u32) -> QLaurent {
    let n = n as i32;
    QLaurent::from_terms(vec![
        (n, Rational::from_int(n as i64)),
        (-n, Rational::from_int(n as i64)),
    ])
}

fn partitions_of(a: u32) -> Vec<Vec<u32>> {
    let a = a as usize;
    partitions_in_box(a, a, a)
        .into_iter()
        .map(|p| p.into_iter().filter(|&x| x > 0).map(|x| x as u32).collect())
        .collect()
}

fn multiplicities(p: &[u32]) -> BTreeMap<u32, u32> {
    let mut m = BTreeMap::new();
    for &x in p {
        *m.entry(x).or_insert(0) += 1;
    }
    m
}

/// Coefficient of `prod_k y_k^{n_k}` in `exp(sum_k coef(k) y_k)`.
fn exp_coefficient(nu: &[u32], coef: &impl Fn(u32) -> QLaurent) -> QLaurent {
    multiplicities(nu).into_iter().fold(QLaurent::one(), |acc, (k, n)| {
        let fact = (1..=n as i64).product::<i64>();
        &acc * &coef(k).pow(n).scale(&Rational::new(1, fact))
    })
}

/// `b_n`. Creation operators are `b_{-k}` at level `+1` and `b_k` at level `-1`.
pub fn heis_apply(n: i32, s: &FockState) -> Result<FockState> {
    if n == 0 {
        return Err(Error::InvalidArgument("b_0 is not a generator".into()));
    }
    let creates = (n < 0) == (s.level == Level::Plus);
    let k = n.unsigned_abs();
    s.map_kets(|ket| {
        if creates {
            return Ok(FockState::basis(s.level, ket.with_parts(&[k])));
        }
        let mult = ket.multiplicity(k);
        if mult == 0 {
            return Ok(FockState::zero(s.level));
        }
        let mut out = FockState::zero(s.level);
        out.add_term(
            ket.without_part(k, 1),
            &contraction(k).scale(&Rational::from_int(mult as i64)),
        );
        Ok(out)
    })
}

/// `t_1 = q^{partial}`, raised to the power `e`.
pub fn t1_apply(e: i32, s: &FockState) -> FockState {
    let mut out = FockState::zero(s.level);
    for (k, c) in &s.kets {
        out.add_term(k.clone(), &c.shift(e * k.m));
    }
    out
}

/// `C^e`.
pub fn central_apply(e: i32, s: &FockState) -> FockState {
    s.scale(&QLaurent::q_pow(e * s.level.value()))
}

/// A single mode `x^{sign}_k`; `truncation` bounds the absolute output degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeRequest {
    pub sign: Sign,
    pub k: i32,
    pub truncation: u64,
}

impl ModeRequest {
    pub fn new(sign: Sign, k: i32) -> Self {
        ModeRequest {
            sign,
            k,
            truncation: u64::MAX,
        }
    }
}

/// Data of one vertex operator: creation and annihilation coefficients of the two
/// exponentials, lattice shift and the power of `z` produced by `z^{+-partial}`.
struct VertexData {
    creation: fn(u32) -> QLaurent,
    annihilation: fn(u32) -> QLaurent,
    shift: i32,
    lattice_z: fn(i32) -> i32,
}

fn vertex_data(level: Level, sign: Sign) -> VertexData {
    match (level, sign) {
        (Level::Plus, Sign::Plus) => VertexData {
            creation: |k| rat_q(1, k as i64, 0),
            annihilation: |k| rat_q(-1, k as i64, -(k as i32)),
            shift: 2,
            lattice_z: |m| m,
        },
        (Level::Plus, Sign::Minus) => VertexData {
            creation: |k| rat_q(-1, k as i64, k as i32),
            annihilation: |k| rat_q(1, k as i64, 0),
            shift: -2,
            lattice_z: |m| -m,
        },
        (Level::Minus, Sign::Plus) => VertexData {
            creation: |k| rat_q(1, k as i64, k as i32),
            annihilation: |k| rat_q(-1, k as i64, 0),
            shift: 2,
            lattice_z: |m| -(m + 2),
        },
        (Level::Minus, Sign::Minus) => VertexData {
            creation: |k| rat_q(-1, k as i64, 0),
            annihilation: |k| rat_q(1, k as i64, -(k as i32)),
            shift: -2,
            lattice_z: |m| m - 2,
        },
    }
}

fn x_mode_ket(level: Level, req: &ModeRequest, ket: &Ket) -> Result<FockState> {
    let in_deg = ket.degree(level);
    let out_deg = in_deg + req.k as i64;
    if out_deg.unsigned_abs() > req.truncation {
        return Err(Error::TruncationTooSmall(format!(
            "x^{}_{} on {ket} reaches degree {out_deg}, truncation {}",
            req.sign.as_char(),
            req.k,
            req.truncation
        )));
    }
    let vd = vertex_data(level, req.sign);
    // creation terms carry z^{+k} at level +1 and z^{-k} at level -1
    let zc: i64 = level.value() as i64;
    let target = -(req.k as i64) - 1 - (vd.lattice_z)(ket.m) as i64;
    let mut out = FockState::zero(level);

    // annihilation: choose how many copies of each part to contract
    let mults: Vec<(u32, usize)> = multiplicities(&ket.partition)
        .into_iter()
        .map(|(k, n)| (k, n as usize))
        .collect();
    let mut choice = vec![0usize; mults.len()];
    loop {
        let mut coeff = QLaurent::one();
        let mut removed = 0i64;
        let mut rest = ket.clone();
        for ((part, total), &p) in mults.iter().zip(&choice) {
            if p == 0 {
                continue;
            }
            let c = &(vd.annihilation)(*part) * &contraction(*part);
            coeff = &coeff
                * &c.pow(p as u32)
                    .scale(&Rational::from_int(crate::combinat::binomial(*total, p) as i64));
            removed += (*part as i64) * p as i64;
            rest = rest.without_part(*part, p);
        }
        // annihilated z-power is -zc * removed
        let a = zc * (target + zc * removed);
        if a >= 0 {
            let moved = Ket::new(rest.partition.clone(), ket.m + vd.shift);
            for nu in partitions_of(a as u32) {
                let c = &coeff * &exp_coefficient(&nu, &vd.creation);
                out.add_term(moved.with_parts(&nu), &c);
            }
        }
        let mut idx = 0;
        loop {
            if idx == choice.len() {
                break;
            }
            if choice[idx] < mults[idx].1 {
                choice[idx] += 1;
                break;
            }
            choice[idx] = 0;
            idx += 1;
        }
        if idx == choice.len() {
            break;
        }
    }
    if let Some(bad) = out.kets.keys().find(|k| k.degree(level) != out_deg) {
        return Err(Error::RelationViolated {
            relation: "degree".into(),
            witness: bad.to_string(),
        });
    }
    Ok(out)
}

/// The mode `x^{sign}_k`, i.e. the coefficient of `z^{-k-1}` in `x^{sign}(z)`.
pub fn x_mode_apply(req: &ModeRequest, s: &FockState) -> Result<FockState> {
    s.map_kets(|ket| x_mode_ket(s.level, req, ket))
}

/// `(x^{sign}_k)^r / [r]!`.
pub fn divided_mode_apply(sign: Sign, k: i32, r: u32, s: &FockState, truncation: u64) -> Result<FockState> {
    let req = ModeRequest { sign, k, truncation };
    let mut cur = s.clone();
    for _ in 0..r {
        cur = x_mode_apply(&req, &cur)?;
    }
    let f = q_factorial(r);
    let mut out = FockState::zero(s.level);
    for (ket, c) in cur.kets {
        out.add_term(ket, &c.exact_div(&f)?);
    }
    Ok(out)
}

/// `phi^{+}_j` (`j >= 0`) or `phi^{-}_j` (`j <= 0`); zero outside those ranges.
pub fn phi_apply(sign: Sign, j: i32, s: &FockState) -> Result<FockState> {
    let (t1, deg, bsign) = match sign {
        Sign::Plus if j >= 0 => (1, j, 1),
        Sign::Minus if j <= 0 => (-1, -j, -1),
        _ => return Ok(FockState::zero(s.level)),
    };
    let coef = |a: u32| -> QLaurent { (&q_minus_qinv() * &q_int(a as i64)).scale(&Rational::new(bsign, a as i64)) };
    let mut out = FockState::zero(s.level);
    for nu in partitions_of(deg as u32) {
        let mut cur = s.clone();
        for &a in &nu {
            cur = heis_apply(bsign as i32 * a as i32, &cur)?;
        }
        out = out.add(&cur.scale(&exp_coefficient(&nu, &coef)));
    }
    Ok(t1_apply(t1, &out))
}

/// Relations among Drinfeld generators that are checked on Fock states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DrinfeldRelation {
    Dr3,
    Dr4,
    Dr6,
}

impl std::str::FromStr for DrinfeldRelation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dr3" => Ok(Self::Dr3),
            "dr4" => Ok(Self::Dr4),
            "dr6" => Ok(Self::Dr6),
            _ => Err(Error::Parse(format!("unknown relation {s}"))),
        }
    }
}

/// Modes `kmin..=kmax` (the zero mode is skipped for `b`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeWindow {
    pub kmin: i32,
    pub kmax: i32,
}

impl ModeWindow {
    pub fn symmetric(k: i32) -> Self {
        ModeWindow { kmin: -k, kmax: k }
    }

    fn modes(&self) -> impl Iterator<Item = i32> {
        self.kmin..=self.kmax
    }

    fn heis_modes(&self) -> impl Iterator<Item = i32> {
        self.modes().filter(|&n| n != 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DrinfeldReport {
    pub relation: DrinfeldRelation,
    pub level: i32,
    pub states: usize,
    pub checks: usize,
    pub pass: bool,
}

/// All basis kets of both sectors with `|degree| <= max_degree`.
pub fn sample_kets(level: Level, max_degree: u32) -> Vec<FockState> {
    let mut out = Vec::new();
    let d = max_degree as i64;
    let mut m: i32 = 0;
    loop {
        let lattice = ((m as i64) * (m as i64) - (m.rem_euclid(2) as i64)) / 4;
        if lattice > d {
            break;
        }
        for mm in if m == 0 { vec![0] } else { vec![m, -m] } {
            for size in 0..=(d - lattice) as u32 {
                for p in partitions_of(size) {
                    out.push(FockState::basis(level, Ket::new(p, mm)));
                }
            }
        }
        m += 1;
    }
    out
}

fn x(sign: Sign, k: i32, s: &FockState) -> Result<FockState> {
    x_mode_apply(&ModeRequest::new(sign, k), s)
}

fn dr_violation(relation: &str, params: String, s: &FockState) -> Error {
    Error::RelationViolated {
        relation: relation.into(),
        witness: format!("{params} on {s}"),
    }
}

fn check_dr3(s: &FockState, w: &ModeWindow) -> Result<usize> {
    let mut n_checks = 0;
    let c = s.level.central();
    for m in w.heis_modes() {
        for n in w.heis_modes() {
            let lhs = heis_apply(m, &heis_apply(n, s)?)?.sub(&heis_apply(n, &heis_apply(m, s)?)?);
            let rhs = if m + n == 0 {
                let cm = c.pow(m.unsigned_abs());
                let diff = if m > 0 { &cm - &cm.bar() } else { &cm.bar() - &cm };
                let scalar = (&q_int(2 * m as i64) * &diff).scale(&Rational::from_int(m as i64))
                    .exact_div(&(&q_int(m as i64).pow(2) * &q_minus_qinv()))?;
                s.scale(&scalar)
            } else {
                FockState::zero(s.level)
            };
            if lhs != rhs {
                return Err(dr_violation("Dr3", format!("(m,n)=({m},{n})"), s));
            }
            n_checks += 1;
        }
    }
    Ok(n_checks)
}

fn check_dr4(s: &FockState, w: &ModeWindow) -> Result<usize> {
    let mut n_checks = 0;
    for n in w.heis_modes() {
        let ratio = q_int(2 * n as i64).exact_div(&q_int(n as i64))?;
        for k in w.modes() {
            for sign in [Sign::Plus, Sign::Minus] {
                let lhs = heis_apply(n, &x(sign, k, s)?)?.sub(&x(sign, k, &heis_apply(n, s)?)?);
                let cpow = (n - sign.value() * n.abs()) / 2;
                let rhs = central_apply(cpow, &x(sign, k + n, s)?)
                    .scale(&ratio.scale(&Rational::from_int(sign.value() as i64)));
                if lhs != rhs {
                    return Err(dr_violation("Dr4", format!("n={n}, k={k}, sign {}", sign.as_char()), s));
                }
                n_checks += 1;
            }
        }
    }
    Ok(n_checks)
}

fn check_dr6(s: &FockState, w: &ModeWindow) -> Result<usize> {
    let mut n_checks = 0;
    for k in w.modes() {
        for l in w.modes() {
            let lhs = x(Sign::Plus, k, &x(Sign::Minus, l, s)?)?.sub(&x(Sign::Minus, l, &x(Sign::Plus, k, s)?)?);
            let num = central_apply(-l, &phi_apply(Sign::Plus, k + l, s)?)
                .sub(&central_apply(-k, &phi_apply(Sign::Minus, k + l, s)?));
            let mut rhs = FockState::zero(s.level);
            for (ket, c) in num.kets {
                rhs.add_term(ket, &c.exact_div(&q_minus_qinv())?);
            }
            if lhs != rhs {
                return Err(dr_violation("Dr6", format!("(k,l)=({k},{l})"), s));
            }
            n_checks += 1;
        }
    }
    Ok(n_checks)
}

/// Applies both sides of a relation to every sample state for all modes in the window.
pub fn drinfeld_check(relation: DrinfeldRelation, states: &[FockState], window: &ModeWindow) -> Result<DrinfeldReport> {
    let level = states.first().map(|s| s.level.value()).unwrap_or(1);
    let counts: Vec<usize> = states
        .par_iter()
        .map(|s| match relation {
            DrinfeldRelation::Dr3 => check_dr3(s, window),
            DrinfeldRelation::Dr4 => check_dr4(s, window),
            DrinfeldRelation::Dr6 => check_dr6(s, window),
        })
        .collect::<Result<_>>()?;
    Ok(DrinfeldReport {
        relation,
        level,
        states: states.len(),
        checks: counts.iter().sum(),
        pass: true,
    })
}

/// `(-q)^e`.
fn minus_q_pow(e: i64) -> QLaurent {
    signed_qpow(if e.rem_euclid(2) == 1 { -1 } else { 1 }, e as i32)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BraidReport {
    pub display: u8,
    pub m: u32,
    pub pass: bool,
    pub computed: FockState,
    pub expected: FockState,
}

/// The four extremal-vector identities, numbered 1 to 4:
/// `(x^-_0)^{(m)} v'_m`, `(x^-_0)^{(m)} vbar'_m`, `(x^+_{-1})^{(m+1)} v'_{-m}` and
/// `(x^+_{-1})^{(m+1)} vbar'_{-m-2}`.
pub fn braid_check(display: u8, m: u32) -> Result<BraidReport> {
    let mi = m as i32;
    let me = m as i64;
    let (level, sign, k, r, start, end, e) = match display {
        1 => (Level::Plus, Sign::Minus, 0, m, mi, -mi, me * (me - 1) / 2),
        2 => (Level::Minus, Sign::Minus, 0, m, mi, -mi, -me * (me - 1) / 2),
        3 => (Level::Plus, Sign::Plus, -1, m + 1, -mi, mi + 2, -me * (me + 1) / 2),
        4 => (Level::Minus, Sign::Plus, -1, m + 1, -mi - 2, mi, me * (me + 1) / 2),
        _ => return Err(Error::InvalidArgument(format!("display must be 1..=4, got {display}"))),
    };
    let computed = divided_mode_apply(sign, k, r, &FockState::extremal(level, start), u64::MAX)?;
    let expected = FockState::extremal(level, end).scale(&minus_q_pow(e));
    Ok(BraidReport {
        display,
        m,
        pass: computed == expected,
        computed,
        expected,
    })
}

/// States of `V(Lambda_i) (x) V(-Lambda_j)`, a level `+1` ket tensored with a level `-1` ket.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TensorState {
    pub terms: BTreeMap<(Ket, Ket), QLaurent>,
}

impl TensorState {
    pub fn pure(left: Ket, right: Ket) -> Self {
        let mut t = TensorState::default();
        t.terms.insert((left, right), QLaurent::one());
        t
    }

    fn add_term(&mut self, key: (Ket, Ket), c: &QLaurent) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key.clone()).or_default();
        *e = &*e + c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &TensorState) -> TensorState {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &TensorState) -> TensorState {
        self.add(&other.scale(&QLaurent::int(-1)))
    }

    pub fn scale(&self, c: &QLaurent) -> TensorState {
        let mut out = TensorState::default();
        for (k, x) in &self.terms {
            out.add_term(k.clone(), &(x * c));
        }
        out
    }

    fn exact_div(&self, d: &QLaurent) -> Result<TensorState> {
        let mut out = TensorState::default();
        for (k, x) in &self.terms {
            out.add_term(k.clone(), &x.exact_div(d)?);
        }
        Ok(out)
    }

    fn on_left(&self, f: impl Fn(&FockState) -> Result<FockState>) -> Result<TensorState> {
        let mut out = TensorState::default();
        for ((a, b), c) in &self.terms {
            for (a2, c2) in f(&FockState::basis(Level::Plus, a.clone()))?.kets {
                out.add_term((a2, b.clone()), &(c * &c2));
            }
        }
        Ok(out)
    }

    fn on_right(&self, f: impl Fn(&FockState) -> Result<FockState>) -> Result<TensorState> {
        let mut out = TensorState::default();
        for ((a, b), c) in &self.terms {
            for (b2, c2) in f(&FockState::basis(Level::Minus, b.clone()))?.kets {
                out.add_term((a.clone(), b2), &(c * &c2));
            }
        }
        Ok(out)
    }
}

impl fmt::Display for TensorState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((a, b), c)| format!("({c}) {a} (x) {b}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Chevalley generators on a single Fock module, through the Drinfeld identification.
struct Chevalley {
    truncation: u64,
}

impl Chevalley {
    fn mode(&self, sign: Sign, k: i32, s: &FockState) -> Result<FockState> {
        x_mode_apply(
            &ModeRequest {
                sign,
                k,
                truncation: self.truncation,
            },
            s,
        )
    }

    /// `e_1 = x^+_0 t_1^{-1}`.
    fn e1(&self, s: &FockState) -> Result<FockState> {
        self.mode(Sign::Plus, 0, &t1_apply(-1, s))
    }

    /// `e_0 = x^-_1 C^{-1}`.
    fn e0(&self, s: &FockState) -> Result<FockState> {
        self.mode(Sign::Minus, 1, &central_apply(-1, s))
    }

    /// `t_0 = C t_1^{-1}`, raised to the power `e`.
    fn t0(&self, e: i32, s: &FockState) -> FockState {
        central_apply(e, &t1_apply(-e, s))
    }

    /// `Delta(e_1) = e_1 (x) t_1^{-1} + 1 (x) e_1`.
    fn delta_e1(&self, t: &TensorState) -> Result<TensorState> {
        let a = t.on_left(|s| self.e1(s))?.on_right(|s| Ok(t1_apply(-1, s)))?;
        Ok(a.add(&t.on_right(|s| self.e1(s))?))
    }

    /// `Delta(e_0) = e_0 (x) t_0^{-1} + 1 (x) e_0`.
    fn delta_e0(&self, t: &TensorState) -> Result<TensorState> {
        let a = t.on_left(|s| self.e0(s))?.on_right(|s| Ok(self.t0(-1, s)))?;
        Ok(a.add(&t.on_right(|s| self.e0(s))?))
    }

    fn delta_t1(&self, e: i32, t: &TensorState) -> Result<TensorState> {
        t.on_left(|s| Ok(t1_apply(e, s)))?.on_right(|s| Ok(t1_apply(e, s)))
    }

    fn delta_c(&self, e: i32, t: &TensorState) -> Result<TensorState> {
        t.on_left(|s| Ok(central_apply(e, s)))?
            .on_right(|s| Ok(central_apply(e, s)))
    }
}

/// Drinfeld generators on the tensor product, generated from the Chevalley coproduct.
struct TensorDrinfeld {
    ch: Chevalley,
}

impl TensorDrinfeld {
    fn x_plus(&self, n: u32, t: &TensorState) -> Result<TensorState> {
        if n == 0 {
            return self.ch.delta_e1(&self.ch.delta_t1(1, t)?);
        }
        // [b_1, x^+_k] = [2] x^+_{k+1}
        let a = self.b1(&self.x_plus(n - 1, t)?)?;
        let b = self.x_plus(n - 1, &self.b1(t)?)?;
        a.sub(&b).exact_div(&q_int(2))
    }

    fn x_minus(&self, n: u32, t: &TensorState) -> Result<TensorState> {
        if n == 0 {
            return Err(Error::InvalidArgument("x^-_0 is not needed here".into()));
        }
        if n == 1 {
            return self.ch.delta_e0(&self.ch.delta_c(1, t)?);
        }
        // [b_1, x^-_k] = -[2] C x^-_{k+1}
        let a = self.b1(&self.x_minus(n - 1, t)?)?;
        let b = self.x_minus(n - 1, &self.b1(t)?)?;
        self.ch.delta_c(-1, &b.sub(&a))?.exact_div(&q_int(2))
    }

    /// `b_1 = C t_1^{-1} [x^+_0, x^-_1]`.
    fn b1(&self, t: &TensorState) -> Result<TensorState> {
        let a = self.x_plus(0, &self.x_minus(1, t)?)?;
        let b = self.x_minus(1, &self.x_plus(0, t)?)?;
        self.ch.delta_c(1, &self.ch.delta_t1(-1, &a.sub(&b))?)
    }

    /// `t_1^{-1} phi^+_j = (q - q^{-1}) C^j t_1^{-1} [x^+_0, x^-_j]` for `j >= 1`.
    fn big_phi(&self, j: u32, t: &TensorState) -> Result<TensorState> {
        if j == 0 {
            return Ok(t.clone());
        }
        let a = self.x_plus(0, &self.x_minus(j, t)?)?;
        let b = self.x_minus(j, &self.x_plus(0, t)?)?;
        Ok(self
            .ch
            .delta_c(j as i32, &self.ch.delta_t1(-1, &a.sub(&b))?)?
            .scale(&q_minus_qinv()))
    }

    /// `b_j` from `j Phi_j = sum_{k=1}^{j} (q^k - q^{-k}) b_k Phi_{j-k}`.
    fn b(&self, j: u32, t: &TensorState) -> Result<TensorState> {
        if j == 1 {
            return self.b1(t);
        }
        let mut acc = self.big_phi(j, t)?.scale(&QLaurent::int(j as i64));
        for k in 1..j {
            let term = self.b(k, &self.big_phi(j - k, t)?)?;
            acc = acc.sub(&term.scale(&(&q_minus_qinv() * &q_int(k as i64))));
        }
        acc.exact_div(&(&q_minus_qinv() * &q_int(j as i64)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct XvmModeResult {
    pub n: u32,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
    /// Agreement with `v'_i (x) q^{2n+i} x^+_n u`.
    pub first_factor_inert: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct XvmReport {
    pub i: u8,
    pub m: u32,
    pub modes: Vec<XvmModeResult>,
    pub pass: bool,
}

/// Checks, mode by mode for `n = 0..=n_max`, that the nonnegative modes of `x^+(z)` act on
/// `v'_i (x) vbar'_m` as `q^{2m+i+2} z^{-m-2} exp(sum_k b_k/k (q^{-1}z)^{-k}) (v'_i (x) vbar'_{m+2})`.
pub fn xvm_check(i: u8, m: u32, n_max: u32, truncation: u64) -> Result<XvmReport> {
    if i > 1 {
        return Err(Error::InvalidArgument(format!("i must be 0 or 1, got {i}")));
    }
    let td = TensorDrinfeld {
        ch: Chevalley { truncation },
    };
    let mi = m as i32;
    let start = TensorState::pure(Ket::new(Vec::new(), i as i32), Ket::new(Vec::new(), mi));
    let target = TensorState::pure(Ket::new(Vec::new(), i as i32), Ket::new(Vec::new(), mi + 2));
    let prefactor = QLaurent::q_pow(2 * mi + i as i32 + 2);
    let mut modes = Vec::new();
    for n in 0..=n_max {
        let lhs = td.x_plus(n, &start)?;
        let a = n as i64 - m as i64 - 1;
        let mut rhs = TensorState::default();
        if a >= 0 {
            for nu in partitions_of(a as u32) {
                let mut cur = target.clone();
                for &k in &nu {
                    cur = td.b(k, &cur)?;
                }
                let c = exp_coefficient(&nu, &|k| rat_q(1, k as i64, k as i32));
                rhs = rhs.add(&cur.scale(&c));
            }
        }
        let rhs = rhs.scale(&prefactor);
        let shortcut = TensorState::pure(Ket::new(Vec::new(), i as i32), Ket::new(Vec::new(), mi)).on_right(|s| {
            Ok(x_mode_apply(
                &ModeRequest {
                    sign: Sign::Plus,
                    k: n as i32,
                    truncation,
                },
                s,
            )?
            .scale(&QLaurent::q_pow(2 * n as i32 + i as i32)))
        })?;
        modes.push(XvmModeResult {
            n,
            pass: lhs == rhs,
            first_factor_inert: lhs == shortcut,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        });
    }
    let pass = modes.iter().all(|r| r.pass);
    Ok(XvmReport { i, m, modes, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vac(level: Level, m: i32) -> FockState {
        FockState::extremal(level, m)
    }

    #[test]
    fn heisenberg_examples() {
        let v = vac(Level::Plus, 0);
        let s = heis_apply(1, &heis_apply(-1, &v).unwrap()).unwrap();
        assert_eq!(s, v.scale(&q_int(2)));
        let s = heis_apply(-2, &v).unwrap();
        assert_eq!(s, FockState::basis(Level::Plus, Ket::new(vec![2], 0)));
        assert!(heis_apply(3, &v).unwrap().is_zero());
        let w = vac(Level::Minus, 0);
        assert!(heis_apply(-3, &w).unwrap().is_zero());
        assert_eq!(heis_apply(-1, &heis_apply(1, &w).unwrap()).unwrap(), w.scale(&q_int(2)));
    }

    #[test]
    fn lowering_extremal_vectors() {
        let s = x_mode_apply(&ModeRequest::new(Sign::Minus, 0), &vac(Level::Plus, 1)).unwrap();
        assert_eq!(s, vac(Level::Plus, -1));
        let s = divided_mode_apply(Sign::Minus, 0, 2, &vac(Level::Plus, 2), u64::MAX).unwrap();
        assert_eq!(s, vac(Level::Plus, -2).scale(&signed_qpow(-1, 1)));
        let s = x_mode_apply(&ModeRequest::new(Sign::Plus, 1), &vac(Level::Plus, 0)).unwrap();
        assert!(s.is_zero());
    }

    #[test]
    fn degree_shifts_by_mode() {
        for level in [Level::Plus, Level::Minus] {
            for s in sample_kets(level, 3) {
                let d = s.degree().unwrap();
                for k in -2..=2 {
                    for sign in [Sign::Plus, Sign::Minus] {
                        let out = x_mode_apply(&ModeRequest::new(sign, k), &s).unwrap();
                        if let Some(e) = out.degree() {
                            assert_eq!(e, d + k as i64);
                        }
                        for ket in out.kets.keys() {
                            let m0 = s.kets.keys().next().unwrap().m;
                            assert_eq!(ket.m, m0 + 2 * sign.value());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn truncation_guard() {
        let req = ModeRequest {
            sign: Sign::Minus,
            k: -3,
            truncation: 2,
        };
        assert!(matches!(
            x_mode_apply(&req, &vac(Level::Plus, 0)),
            Err(Error::TruncationTooSmall(_))
        ));
    }

    #[test]
    fn braid_displays() {
        for display in 1..=4u8 {
            let mmax = if display <= 2 { 3 } else { 2 };
            for m in 0..=mmax {
                let r = braid_check(display, m).unwrap();
                assert!(
                    r.pass,
                    "display {display}, m = {m}: got {}, expected {}",
                    r.computed, r.expected
                );
            }
        }
    }

    #[test]
    fn drinfeld_relations_small() {
        let w = ModeWindow::symmetric(2);
        for level in [Level::Plus, Level::Minus] {
            let states = sample_kets(level, 2);
            for rel in [DrinfeldRelation::Dr3, DrinfeldRelation::Dr4, DrinfeldRelation::Dr6] {
                let r = drinfeld_check(rel, &states, &w).unwrap();
                assert!(r.pass && r.checks > 0);
            }
        }
    }

    #[test]
    fn dr6_vacuum_leading_term() {
        let s = vac(Level::Plus, 1);
        let lhs = x(Sign::Plus, 0, &x(Sign::Minus, 0, &s).unwrap()).unwrap();
        assert_eq!(lhs, s);
    }

    #[test]
    fn xvm_small() {
        for i in 0..=1 {
            for m in 0..=1 {
                let r = xvm_check(i, m, 2, 64).unwrap();
                assert!(r.pass, "{r:?}");
                assert!(r.modes.iter().all(|x| x.first_factor_inert));
            }
        }
        assert!(matches!(xvm_check(0, 0, 1, 0), Err(Error::TruncationTooSmall(_))));
    }

    #[test]
    fn json_round_trip() {
        let s = heis_apply(-2, &vac(Level::Plus, 1)).unwrap().scale(&signed_qpow(-1, 3));
        let j = serde_json::to_string(&s).unwrap();
        let back: FockState = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
    }
}
