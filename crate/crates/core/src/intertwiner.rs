//! Matrix elements `a_eps(z)` of products of level-1 vertex operators, built from the
//! base entry by the two-term exchange recursion, and the polynomial they assemble to.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::algebra::mpoly::Mono;
use crate::algebra::{MPoly, Rational};
use crate::cycles::{measure_unit, top_arity, top_cycle_component};
use crate::error::{Error, Result};
use crate::evalmodule::{Sign, SignString, TensorVec};
use crate::funcspace::{membership, w_of_signs, FElement, SpaceKind, SpaceSpec};
use crate::ledger::Unit;

/// Placement of the factor `(z_k / z_{k+1})^t` in the exchange recursion.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TConvention {
    /// `t = 0` when the left-hand side carries `(+, -)`, `t = 1` for `(-, +)`.
    #[default]
    Standard,
    /// The two exponents swapped.
    Transposed,
}

/// Matrix elements for fixed `(n, l, i, j)`, keyed by sign strings with `l` minus signs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct METable {
    pub n: usize,
    pub l: usize,
    pub i: u8,
    pub j: u8,
    pub entries: TensorVec,
}

fn zmono(n: usize, e: &[(usize, i32)]) -> Mono {
    let mut z = vec![0; n];
    for (k, x) in e {
        z[*k] += x;
    }
    Mono::from_parts(0, &[], &z, 0)
}

/// `1 - q^{-2} z_r / z_s` (0-based indices).
fn pair_factor(n: usize, r: usize, s: usize) -> MPoly {
    &MPoly::one(0, n) - &MPoly::term(0, n, Rational::one(), zmono(n, &[(r, 1), (s, -1)]).with_q(-2))
}

/// The entry for `(-^l, +^{n-l})`.
pub fn a_base(n: usize, l: usize, i: u8) -> MPoly {
    let ll = l as i32;
    let sign = if (l * l.saturating_sub(1) / 2) % 2 == 1 { -1 } else { 1 };
    let z: Vec<(usize, i32)> = (0..n).map(|r| (r, if r < l { i as i32 } else { -ll })).collect();
    let mut p = MPoly::term(0, n, Rational::from_int(sign), zmono(n, &z).with_q(ll * (ll - 1) / 2));
    for r in 0..n {
        for s in r + 1..n {
            if (s < l) || (r >= l) {
                p = &p * &pair_factor(n, r, s);
            }
        }
    }
    p
}

/// One exchange step at 0-based position `k`: given the entry `src` for a sign string
/// with `(s, s')` at `(k, k+1)`, returns the entry for the string with `(s', s)` there.
/// `target_is_plus_minus` says whether the result carries `(+, -)`.
pub fn a_exchange(src: &MPoly, k: usize, target_is_plus_minus: bool, conv: TConvention) -> Result<MPoly> {
    let n = src.nz();
    let x = MPoly::term(0, n, Rational::one(), zmono(n, &[(k, 1), (k + 1, -1)]));
    let one = MPoly::one(0, n);
    let qq = MPoly::q_pow(0, n, 2);
    let t = match (target_is_plus_minus, conv) {
        (true, TConvention::Standard) | (false, TConvention::Transposed) => 0,
        _ => 1,
    };
    let xt = if t == 0 { one.clone() } else { x.clone() };
    let swapped = src.swap_z(k, k + 1);
    let num = &(&(&(&x - &qq) * &x) * &swapped) - &(&(&one - &qq) * &(&xt * src));
    let den = (&one - &x).mul_qpow(1);
    num.exact_div(&den)
        .map_err(|_| Error::NotDivisible(format!("exchange at position {k} leaves a pole at z_k = z_(k+1)")))
}

/// Builds all entries from the base by moving `+` signs to the left, and checks that every
/// route to an entry gives the same polynomial.
pub fn a_table(n: usize, l: usize, i: u8, j: u8, conv: TConvention) -> Result<METable> {
    if top_arity(i, j, l)? != n {
        return Err(Error::InvalidArgument(format!("n = {n} is not 2l + i - j")));
    }
    let base = SignString::from_minus_positions(n, &(0..l).collect::<Vec<_>>());
    let mut entries: BTreeMap<SignString, MPoly> = BTreeMap::new();
    entries.insert(base.clone(), a_base(n, l, i));
    let mut queue = VecDeque::from([base]);
    while let Some(eps) = queue.pop_front() {
        let src = entries[&eps].clone();
        for k in 0..n.saturating_sub(1) {
            if eps.0[k] == Sign::Minus && eps.0[k + 1] == Sign::Plus {
                let next = eps.swapped(k, k + 1);
                let val = a_exchange(&src, k, true, conv)?;
                match entries.get(&next) {
                    Some(old) if *old != val => {
                        return Err(Error::ExchangeViolated {
                            position: k,
                            witness: next.to_string(),
                        });
                    }
                    Some(_) => {}
                    None => {
                        entries.insert(next.clone(), val);
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    let mut tv = TensorVec::zero(n);
    for (eps, p) in entries {
        tv.add_component(eps, p);
    }
    Ok(METable {
        n,
        l,
        i,
        j,
        entries: tv,
    })
}

impl METable {
    pub fn entry(&self, eps: &SignString) -> MPoly {
        self.entries.component(eps)
    }

    /// Applies the exchange in both directions at every position and checks that the
    /// table reproduces itself.
    pub fn check_round_trips(&self, conv: TConvention) -> Result<usize> {
        let mut checked = 0;
        for eps in SignString::with_minus_count(self.n, self.l) {
            for k in 0..self.n.saturating_sub(1) {
                if eps.0[k] == eps.0[k + 1] {
                    continue;
                }
                let other = eps.swapped(k, k + 1);
                let to_pm = eps.0[k] == Sign::Minus;
                let there = a_exchange(&self.entry(&eps), k, to_pm, conv)?;
                if there != self.entry(&other) {
                    return Err(Error::ExchangeViolated {
                        position: k,
                        witness: other.to_string(),
                    });
                }
                let back = a_exchange(&there, k, !to_pm, conv)?;
                if back != self.entry(&eps) {
                    return Err(Error::ExchangeViolated {
                        position: k,
                        witness: eps.to_string(),
                    });
                }
                checked += 1;
            }
        }
        Ok(checked)
    }
}

/// `sum_eps a_eps w_eps / prod_{r<s} (1 - q^{-2} z_r / z_s)`.
pub fn assemble_top_p(n: usize, l: usize, i: u8, j: u8, conv: TConvention) -> Result<FElement> {
    let table = a_table(n, l, i, j, conv)?;
    let zmap: Vec<usize> = (0..n).collect();
    let mut acc = MPoly::zero(l, n);
    for (eps, a) in table.entries.components() {
        acc = &acc + &(&w_of_signs(eps)?.poly * &a.relayout(l, n, &[], &zmap));
    }
    let mut den = MPoly::one(l, n);
    for r in 0..n {
        for s in r + 1..n {
            den = &den * &pair_factor(n, r, s).relayout(l, n, &[], &zmap);
        }
    }
    FElement::new(n, l, acc.exact_div(&den)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TopComparison {
    pub n: usize,
    pub l: usize,
    pub i: u8,
    pub j: u8,
    /// `assembled = unit * top`.
    pub unit: Unit,
    pub symmetric_in_z: bool,
    pub in_f: bool,
    pub assembled: String,
}

/// Compares the assembled polynomial with the top component.
pub fn compare_with_top(n: usize, l: usize, i: u8, j: u8, conv: TConvention) -> Result<TopComparison> {
    let p = assemble_top_p(n, l, i, j, conv)?;
    let top = top_cycle_component(i, j, l)?;
    let unit = measure_unit(&p.poly, &top.poly)?;
    let spec = SpaceSpec {
        symmetric_in_z: true,
        ..SpaceSpec::new(SpaceKind::F, n)
    };
    let rep = membership(&p, &spec)?;
    Ok(TopComparison {
        n,
        l,
        i,
        j,
        unit,
        symmetric_in_z: p.poly.is_symmetric_z(),
        in_f: rep.passed(),
        assembled: p.poly.to_string(),
    })
}

/// `(-q)^{-l(l-j)}`.
pub fn rho_prefactor(l: usize, j: u8) -> Unit {
    let e = l as i32 * (l as i32 - j as i32);
    Unit::new(if e.rem_euclid(2) == 1 { -1 } else { 1 }, -e)
}

/// Ledger context for the assembly unit at a given `l`.
pub fn assembly_context(l: usize) -> String {
    format!("assemble-top/l={l}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(s: &str, n: usize) -> MPoly {
        MPoly::parse(s, 0, n).unwrap()
    }

    #[test]
    fn base_entries() {
        assert_eq!(a_base(1, 0, 0), MPoly::one(0, 1));
        assert_eq!(a_base(2, 1, 0), z("z2^-1", 2));
        assert_eq!(a_base(2, 1, 1), z("z1 * z2^-1", 2));
    }

    #[test]
    fn first_exchange() {
        let t = a_table(2, 1, 0, 0, TConvention::Standard).unwrap();
        assert_eq!(t.entry(&"+-".parse().unwrap()), z("-q^-1 * z2^-1", 2));
        let t = a_table(2, 1, 1, 1, TConvention::Standard).unwrap();
        assert_eq!(t.entry(&"+-".parse().unwrap()), z("-q", 2));
    }

    #[test]
    fn tables_are_consistent_and_reversible() {
        for (i, j) in [(0u8, 0u8), (0, 1), (1, 0), (1, 1)] {
            for l in 0..=2 {
                let Ok(n) = top_arity(i, j, l) else { continue };
                if n > 4 {
                    continue;
                }
                let t = a_table(n, l, i, j, TConvention::Standard).unwrap();
                assert_eq!(t.entries.components().len(), crate::combinat::binomial(n, l) as usize);
                t.check_round_trips(TConvention::Standard).unwrap();
            }
        }
    }

    #[test]
    fn assembled_examples() {
        assert_eq!(
            assemble_top_p(0, 0, 0, 0, TConvention::Standard).unwrap().poly,
            MPoly::one(0, 0)
        );
        let p = assemble_top_p(2, 1, 0, 0, TConvention::Standard).unwrap();
        assert_eq!(p.poly, MPoly::parse("-q^-1 * X1", 1, 2).unwrap());
        let c = compare_with_top(2, 1, 0, 0, TConvention::Standard).unwrap();
        assert_eq!(c.unit, Unit::new(-1, 2));
        assert!(c.symmetric_in_z && c.in_f);
    }

    #[test]
    fn transposed_convention_is_detected() {
        let bad = (|| -> Result<()> {
            for (i, j) in [(0u8, 0u8), (1, 1)] {
                let t = a_table(4, 2, i, j, TConvention::Transposed)?;
                t.check_round_trips(TConvention::Transposed)?;
                compare_with_top(4, 2, i, j, TConvention::Transposed)?;
            }
            Ok(())
        })();
        assert!(bad.is_err());
    }
}
