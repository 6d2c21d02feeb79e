//! Tensor products of two-dimensional evaluation modules `V_{z_1} ⊗ ... ⊗ V_{z_n}`.
//!
//! A vector is a finite sum `sum_eps c_eps(z) v_eps` where `eps` is a string of
//! signs and `c_eps` is Laurent in `z` and `q`. Generators act through the
//! coproduct `Δ(e) = e ⊗ t^{-1} + 1 ⊗ e`, `Δ(f) = f ⊗ 1 + t ⊗ f`, `Δ(t) = t ⊗ t`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use crate::algebra::mpoly::Mono;
use crate::algebra::qnumber::{q_factorial, q_int, q_minus_qinv};
use crate::algebra::{MPoly, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// `+1` or `-1`.
    pub fn value(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// A basis label `v_{eps_1} ⊗ ... ⊗ v_{eps_n}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignString(pub Vec<Sign>);

impl SignString {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn all(n: usize, s: Sign) -> Self {
        SignString(vec![s; n])
    }

    /// The string with minus signs exactly at the (0-based) positions in `minus`.
    pub fn from_minus_positions(n: usize, minus: &[usize]) -> Self {
        let mut v = vec![Sign::Plus; n];
        for &k in minus {
            v[k] = Sign::Minus;
        }
        SignString(v)
    }

    /// 0-based positions of the minus signs.
    pub fn minus_positions(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == Sign::Minus)
            .map(|(k, _)| k)
            .collect()
    }

    pub fn minus_count(&self) -> usize {
        self.0.iter().filter(|s| **s == Sign::Minus).count()
    }

    /// `h_1` weight: number of plus signs minus number of minus signs.
    pub fn weight(&self) -> i32 {
        self.0.iter().map(|s| s.value()).sum()
    }

    /// All `2^n` strings, in lexicographic order.
    pub fn enumerate(n: usize) -> Vec<SignString> {
        (0..1usize << n)
            .map(|bits| {
                SignString(
                    (0..n)
                        .map(|k| {
                            if bits >> (n - 1 - k) & 1 == 1 {
                                Sign::Minus
                            } else {
                                Sign::Plus
                            }
                        })
                        .collect(),
                )
            })
            .collect()
    }

    /// All strings with exactly `l` minus signs.
    pub fn with_minus_count(n: usize, l: usize) -> Vec<SignString> {
        Self::enumerate(n)
            .into_iter()
            .filter(|s| s.minus_count() == l)
            .collect()
    }

    pub fn swapped(&self, j: usize, k: usize) -> Self {
        let mut v = self.0.clone();
        v.swap(j, k);
        SignString(v)
    }
}

impl fmt::Display for SignString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for SignString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl std::str::FromStr for SignString {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '+' => Ok(Sign::Plus),
                '-' => Ok(Sign::Minus),
                _ => Err(Error::Parse(format!("bad sign `{c}`"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(SignString)
    }
}

/// Chevalley generators of `U'_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    E0,
    E1,
    F0,
    F1,
    T0,
    T1,
    T0Inv,
    T1Inv,
}

impl Generator {
    pub const ALL: [Generator; 8] = [
        Generator::E0,
        Generator::E1,
        Generator::F0,
        Generator::F1,
        Generator::T0,
        Generator::T1,
        Generator::T0Inv,
        Generator::T1Inv,
    ];

    pub fn e(i: usize) -> Self {
        [Generator::E0, Generator::E1][i]
    }

    pub fn f(i: usize) -> Self {
        [Generator::F0, Generator::F1][i]
    }

    pub fn t(i: usize) -> Self {
        [Generator::T0, Generator::T1][i]
    }

    pub fn t_inv(i: usize) -> Self {
        [Generator::T0Inv, Generator::T1Inv][i]
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// Image of a basis vector under one generator: `coeff * q^qpow * z^zpow * v_out`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionEntry {
    pub out: Sign,
    pub coeff: Rational,
    pub qpow: i32,
    pub zpow: i32,
}

impl ActionEntry {
    fn new(out: Sign, qpow: i32, zpow: i32) -> Self {
        Self {
            out,
            coeff: Rational::one(),
            qpow,
            zpow,
        }
    }
}

/// Action of the generators on `V_z`, indexed by generator and input sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionTable {
    entries: [[Option<ActionEntry>; 2]; 8],
}

impl Default for ActionTable {
    fn default() -> Self {
        Self::standard()
    }
}

impl ActionTable {
    /// The action used throughout:
    /// `e0 v+ = z v-`, `f0 v- = z^{-1} v+`, `e1 v- = v+`, `f1 v+ = v-`,
    /// `t0 v± = q^{∓1} v±`, `t1 v± = q^{±1} v±`.
    pub fn standard() -> Self {
        use Sign::*;
        let mut entries: [[Option<ActionEntry>; 2]; 8] = Default::default();
        let set = |e: &mut [[Option<ActionEntry>; 2]; 8], g: Generator, s: Sign, a: ActionEntry| {
            e[g.index()][(s == Minus) as usize] = Some(a);
        };
        set(&mut entries, Generator::E0, Plus, ActionEntry::new(Minus, 0, 1));
        set(&mut entries, Generator::F0, Minus, ActionEntry::new(Plus, 0, -1));
        set(&mut entries, Generator::E1, Minus, ActionEntry::new(Plus, 0, 0));
        set(&mut entries, Generator::F1, Plus, ActionEntry::new(Minus, 0, 0));
        for s in [Plus, Minus] {
            let w = s.value();
            set(&mut entries, Generator::T0, s, ActionEntry::new(s, -w, 0));
            set(&mut entries, Generator::T0Inv, s, ActionEntry::new(s, w, 0));
            set(&mut entries, Generator::T1, s, ActionEntry::new(s, w, 0));
            set(&mut entries, Generator::T1Inv, s, ActionEntry::new(s, -w, 0));
        }
        Self { entries }
    }

    pub fn entry(&self, g: Generator, s: Sign) -> Option<&ActionEntry> {
        self.entries[g.index()][(s == Sign::Minus) as usize].as_ref()
    }

    /// Returns a copy with one entry replaced, for negative controls.
    pub fn with_entry(mut self, g: Generator, s: Sign, e: Option<ActionEntry>) -> Self {
        self.entries[g.index()][(s == Sign::Minus) as usize] = e;
        self
    }

    /// `q`-exponent of a diagonal generator on `v_s`.
    fn diag_qpow(&self, g: Generator, s: Sign) -> Result<(Rational, i32)> {
        match self.entry(g, s) {
            Some(e) if e.out == s && e.zpow == 0 => Ok((e.coeff.clone(), e.qpow)),
            _ => Err(Error::InvalidArgument(format!("{g:?} must act diagonally"))),
        }
    }
}

/// A vector in the `n`-fold tensor product with Laurent coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct TensorVec {
    n: usize,
    comps: BTreeMap<SignString, MPoly>,
}

impl TensorVec {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            comps: BTreeMap::new(),
        }
    }

    pub fn basis(eps: SignString) -> Self {
        let n = eps.len();
        Self::from_component(eps, MPoly::one(0, n))
    }

    /// `v_+ ⊗ ... ⊗ v_+`.
    pub fn highest(n: usize) -> Self {
        Self::basis(SignString::all(n, Sign::Plus))
    }

    /// `(z_1 ... z_n)^{-m} v_s^{⊗n}`.
    pub fn extremal(n: usize, m: i32, s: Sign) -> Self {
        let z = vec![-m; n];
        Self::from_component(
            SignString::all(n, s),
            MPoly::monomial(0, n, Rational::one(), &[], &z, 0),
        )
    }

    pub fn from_component(eps: SignString, c: MPoly) -> Self {
        let n = eps.len();
        assert!(c.nx() == 0 && c.nz() == n, "coefficient layout must be (0, n)");
        let mut v = Self::zero(n);
        v.add_component(eps, c);
        v
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &BTreeMap<SignString, MPoly> {
        &self.comps
    }

    pub fn component(&self, eps: &SignString) -> MPoly {
        self.comps.get(eps).cloned().unwrap_or_else(|| MPoly::zero(0, self.n))
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn add_component(&mut self, eps: SignString, c: MPoly) {
        if c.is_zero() {
            return;
        }
        match self.comps.remove(&eps) {
            Some(old) => {
                let s = &old + &c;
                if !s.is_zero() {
                    self.comps.insert(eps, s);
                }
            }
            None => {
                self.comps.insert(eps, c);
            }
        }
    }

    /// Multiplies every coefficient by `c` (layout `(0, n)`).
    pub fn scale(&self, c: &MPoly) -> Self {
        let mut out = Self::zero(self.n);
        for (e, p) in &self.comps {
            out.add_component(e.clone(), p * c);
        }
        out
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        self.scale(&MPoly::constant(0, self.n, c.clone()))
    }

    pub fn mul_qpow(&self, k: i32) -> Self {
        self.scale(&MPoly::q_pow(0, self.n, k))
    }

    /// Exact division of every coefficient.
    pub fn exact_div(&self, d: &MPoly) -> Result<Self> {
        let mut out = Self::zero(self.n);
        for (e, p) in &self.comps {
            out.add_component(e.clone(), p.exact_div(d)?);
        }
        Ok(out)
    }

    /// The common `h_1` weight of all components.
    pub fn weight(&self) -> Result<i32> {
        let mut ws = self.comps.keys().map(|e| e.weight());
        let Some(w) = ws.next() else {
            return Err(Error::MixedWeight("zero vector has no weight".into()));
        };
        if ws.all(|x| x == w) {
            Ok(w)
        } else {
            Err(Error::MixedWeight(format!("{self}")))
        }
    }

    pub fn swap_z(&self, j: usize, k: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (e, p) in &self.comps {
            out.add_component(e.clone(), p.swap_z(j, k));
        }
        out
    }

    pub fn to_json(&self) -> TensorVecJson {
        TensorVecJson {
            n: self.n,
            components: self
                .comps
                .iter()
                .map(|(e, p)| TensorComponentJson {
                    signs: e.to_string(),
                    poly: p.to_json(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &TensorVecJson) -> Result<Self> {
        let mut v = Self::zero(j.n);
        for c in &j.components {
            let eps: SignString = c.signs.parse()?;
            if eps.len() != j.n {
                return Err(Error::Parse("sign string length mismatch".into()));
            }
            let p = MPoly::from_json(&c.poly)?;
            if p.nx() != 0 || p.nz() != j.n {
                return Err(Error::Parse("coefficient layout mismatch".into()));
            }
            v.add_component(eps, p);
        }
        Ok(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorComponentJson {
    pub signs: String,
    pub poly: crate::algebra::MPolyJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorVecJson {
    pub n: usize,
    pub components: Vec<TensorComponentJson>,
}

impl Serialize for TensorVec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for TensorVec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = TensorVecJson::deserialize(d)?;
        Self::from_json(&j).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for TensorVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.comps.iter().map(|(e, p)| format!("({p}) v[{e}]")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for TensorVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> Add<&'a TensorVec> for &'a TensorVec {
    type Output = TensorVec;
    fn add(self, r: &TensorVec) -> TensorVec {
        let mut out = self.clone();
        for (e, p) in &r.comps {
            out.add_component(e.clone(), p.clone());
        }
        out
    }
}

impl<'a> Sub<&'a TensorVec> for &'a TensorVec {
    type Output = TensorVec;
    fn sub(self, r: &TensorVec) -> TensorVec {
        let mut out = self.clone();
        for (e, p) in &r.comps {
            out.add_component(e.clone(), -p);
        }
        out
    }
}

/// Applies one generator through the iterated coproduct.
pub fn act_generator(g: Generator, v: &TensorVec, table: &ActionTable) -> Result<TensorVec> {
    let n = v.n;
    let mut out = TensorVec::zero(n);
    for (eps, c) in &v.comps {
        match g {
            Generator::T0 | Generator::T1 | Generator::T0Inv | Generator::T1Inv => {
                let mut coeff = Rational::one();
                let mut qp = 0;
                for s in &eps.0 {
                    let (a, b) = table.diag_qpow(g, *s)?;
                    coeff *= &a;
                    qp += b;
                }
                out.add_component(eps.clone(), c.mul_term(&coeff, &Mono::q_pow(qp)));
            }
            Generator::E0 | Generator::E1 | Generator::F0 | Generator::F1 => {
                let (i, is_e) = match g {
                    Generator::E0 => (0, true),
                    Generator::E1 => (1, true),
                    Generator::F0 => (0, false),
                    _ => (1, false),
                };
                // e: t_i^{-1} on every later factor; f: t_i on every earlier factor
                let tg = if is_e { Generator::t_inv(i) } else { Generator::t(i) };
                for k in 0..n {
                    let Some(entry) = table.entry(g, eps.0[k]) else {
                        continue;
                    };
                    let mut coeff = entry.coeff.clone();
                    let mut qp = entry.qpow;
                    let others: Box<dyn Iterator<Item = usize>> =
                        if is_e { Box::new(k + 1..n) } else { Box::new(0..k) };
                    for j in others {
                        let (a, b) = table.diag_qpow(tg, eps.0[j])?;
                        coeff *= &a;
                        qp += b;
                    }
                    let mut m = Mono::q_pow(qp);
                    m.v[k] = entry.zpow as i8;
                    let mut e2 = eps.clone();
                    e2.0[k] = entry.out;
                    out.add_component(e2, c.mul_term(&coeff, &m));
                }
            }
        }
    }
    Ok(out)
}

/// Applies a word of generators, rightmost first.
pub fn act_word(word: &[Generator], v: &TensorVec, table: &ActionTable) -> Result<TensorVec> {
    let mut cur = v.clone();
    for g in word.iter().rev() {
        cur = act_generator(*g, &cur, table)?;
    }
    Ok(cur)
}

/// Divided power `x^{(r)} = x^r / [r]!` of `e_i` or `f_i`.
pub fn divided_power(g: Generator, r: u32, v: &TensorVec, table: &ActionTable) -> Result<TensorVec> {
    if !matches!(g, Generator::E0 | Generator::E1 | Generator::F0 | Generator::F1) {
        return Err(Error::InvalidArgument("divided powers need e_i or f_i".into()));
    }
    let mut cur = v.clone();
    for _ in 0..r {
        cur = act_generator(g, &cur, table)?;
    }
    cur.exact_div(&MPoly::from_qlaurent(0, v.n, &q_factorial(r)))
}

/// Summary of a relation check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationsReport {
    pub n: usize,
    pub vectors_checked: usize,
    pub relations: BTreeMap<String, usize>,
}

const CARTAN: [[i32; 2]; 2] = [[2, -2], [-2, 2]];

/// Checks every defining relation of `U'_q` on basis vectors (times `z_1^s`,
/// `|s| <= max_z_spread`) of the `n`-fold tensor product.
pub fn verify_defining_relations(n: usize, table: &ActionTable, max_z_spread: i32) -> Result<RelationsReport> {
    let mut report = RelationsReport {
        n,
        vectors_checked: 0,
        relations: BTreeMap::new(),
    };
    let qq = MPoly::from_qlaurent(0, n, &q_minus_qinv());
    let mut vectors = Vec::new();
    for eps in SignString::enumerate(n) {
        for s in -max_z_spread..=max_z_spread {
            let mut m = Mono::ONE;
            if n > 0 {
                m.v[0] = s as i8;
            }
            vectors.push(TensorVec::from_component(
                eps.clone(),
                MPoly::term(0, n, Rational::one(), m),
            ));
        }
    }
    let act = |g: Generator, v: &TensorVec| act_generator(g, v, table);
    let word = |w: &[Generator], v: &TensorVec| act_word(w, v, table);
    for v in &vectors {
        report.vectors_checked += 1;
        let mut check = |name: String, lhs: TensorVec, rhs: TensorVec| -> Result<()> {
            if lhs != rhs {
                return Err(Error::RelationViolated {
                    relation: name,
                    witness: format!("{v}"),
                });
            }
            *report.relations.entry(name).or_default() += 1;
            Ok(())
        };
        for i in 0..2 {
            let (t, ti) = (Generator::t(i), Generator::t_inv(i));
            check(format!("t{i} t{i}^-1 = 1"), word(&[t, ti], v)?, v.clone())?;
            check(format!("t{i}^-1 t{i} = 1"), word(&[ti, t], v)?, v.clone())?;
        }
        check(
            "t0 t1 = t1 t0".into(),
            word(&[Generator::T0, Generator::T1], v)?,
            word(&[Generator::T1, Generator::T0], v)?,
        )?;
        check("t0 t1 = 1".into(), word(&[Generator::T0, Generator::T1], v)?, v.clone())?;
        for i in 0..2 {
            for j in 0..2 {
                let a = CARTAN[i][j];
                let (t, ti) = (Generator::t(i), Generator::t_inv(i));
                let (e, f) = (Generator::e(j), Generator::f(j));
                check(
                    format!("t{i} e{j} t{i}^-1 = q^{a} e{j}"),
                    word(&[t, e, ti], v)?,
                    act(e, v)?.mul_qpow(a),
                )?;
                check(
                    format!("t{i} f{j} t{i}^-1 = q^{} f{j}", -a),
                    word(&[t, f, ti], v)?,
                    act(f, v)?.mul_qpow(-a),
                )?;
                let comm = &word(&[Generator::e(i), f], v)? - &word(&[f, Generator::e(i)], v)?;
                let rhs = if i == j {
                    &act(t, v)? - &act(ti, v)?
                } else {
                    TensorVec::zero(n)
                };
                check(
                    format!("[e{i}, f{j}] = delta (t{i} - t{i}^-1)/(q - q^-1)"),
                    comm.scale(&qq),
                    rhs,
                )?;
            }
        }
        for (i, j) in [(0usize, 1usize), (1, 0)] {
            for (kind, gi, gj) in [
                ("e", Generator::e(i), Generator::e(j)),
                ("f", Generator::f(i), Generator::f(j)),
            ] {
                let mut acc = TensorVec::zero(n);
                for r in 0..=3u32 {
                    let inner = divided_power(gi, r, v, table)?;
                    let mid = act(gj, &inner)?;
                    let outer = divided_power(gi, 3 - r, &mid, table)?;
                    acc = if r % 2 == 0 { &acc + &outer } else { &acc - &outer };
                }
                check(format!("Serre {kind}{i}{j}"), acc, TensorVec::zero(n))?;
            }
        }
    }
    Ok(report)
}

/// `[r]_q` as a constant coefficient polynomial in the `(0, n)` layout.
pub fn q_int_poly(n: usize, r: i64) -> MPoly {
    MPoly::from_qlaurent(0, n, &q_int(r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> MPoly {
        MPoly::parse(s, 0, n).unwrap()
    }

    #[test]
    fn single_factor_actions() {
        let t = ActionTable::standard();
        let vp = TensorVec::basis("+".parse().unwrap());
        let vm = TensorVec::basis("-".parse().unwrap());
        assert_eq!(
            act_generator(Generator::E0, &vp, &t).unwrap(),
            TensorVec::from_component("-".parse().unwrap(), p("z1", 1))
        );
        assert!(act_generator(Generator::E0, &vm, &t).unwrap().is_zero());
        assert_eq!(
            act_generator(Generator::F0, &vm, &t).unwrap(),
            TensorVec::from_component("+".parse().unwrap(), p("z1^-1", 1))
        );
        assert_eq!(act_generator(Generator::T1, &vp, &t).unwrap(), vp.mul_qpow(1));
        assert_eq!(act_generator(Generator::T0, &vp, &t).unwrap(), vp.mul_qpow(-1));
    }

    #[test]
    fn coproduct_on_two_factors() {
        let t = ActionTable::standard();
        let v = TensorVec::highest(2);
        // f1 (v+ v+) = v- v+ + q v+ v-
        let w = act_generator(Generator::F1, &v, &t).unwrap();
        let expect = &TensorVec::basis("-+".parse().unwrap()) + &TensorVec::basis("+-".parse().unwrap()).mul_qpow(1);
        assert_eq!(w, expect);
        // e0 (v+ v+) = z1 q v- v+ + z2 v+ v-
        let w = act_generator(Generator::E0, &v, &t).unwrap();
        let expect = &TensorVec::from_component("-+".parse().unwrap(), p("q*z1", 2))
            + &TensorVec::from_component("+-".parse().unwrap(), p("z2", 2));
        assert_eq!(w, expect);
    }

    #[test]
    fn relations_hold_for_small_n() {
        for n in 1..=3 {
            let r = verify_defining_relations(n, &ActionTable::standard(), 1).unwrap();
            assert!(r.relations.len() >= 16);
        }
    }

    #[test]
    fn corrupted_table_is_detected() {
        let bad = ActionTable::standard().with_entry(
            Generator::E1,
            Sign::Minus,
            Some(ActionEntry {
                out: Sign::Plus,
                coeff: Rational::from_int(2),
                qpow: 0,
                zpow: 0,
            }),
        );
        match verify_defining_relations(2, &bad, 0) {
            Err(Error::RelationViolated { relation, .. }) => assert!(relation.contains("[e1, f1]")),
            other => panic!("expected violation, got {other:?}"),
        }
    }

    #[test]
    fn divided_powers_compose() {
        let t = ActionTable::standard();
        let v = TensorVec::highest(3);
        let a = divided_power(Generator::F1, 1, &divided_power(Generator::F1, 2, &v, &t).unwrap(), &t).unwrap();
        let b = divided_power(Generator::F1, 3, &v, &t)
            .unwrap()
            .scale(&MPoly::from_qlaurent(0, 3, &crate::algebra::gauss_binomial(3, 1)));
        assert_eq!(a, b);
        assert!(matches!(TensorVec::zero(2).weight(), Err(Error::MixedWeight(_))));
        assert!(matches!(
            (&v + &act_generator(Generator::F1, &v, &t).unwrap()).weight(),
            Err(Error::MixedWeight(_))
        ));
    }
}
