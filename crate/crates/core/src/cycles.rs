//! Cycle sequences `(P_{n,l})` of fixed weight `m = n - 2l`: the top component,
//! the specialization recursion linking `P_{n+2,l+1}` to `P_{n,l}`, and the
//! skew-symmetric counterpart at `q = i`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::linalg::{solve, Solution};
use crate::algebra::mpoly::{Mono, MonoMap};
use crate::algebra::{GaussPoly, GaussRational, MPoly, Rational};
use crate::combinat::strict_sequences;
use crate::error::{Error, Result};
use crate::funcspace::FElement;
use crate::ledger::Unit;

fn check_ij(i: u8, j: u8) -> Result<()> {
    if i > 1 || j > 1 {
        return Err(Error::InvalidArgument(format!(
            "(i, j) = ({i}, {j}) must lie in {{0, 1}}"
        )));
    }
    Ok(())
}

/// `n = 2l + i - j`, rejected when negative.
pub fn top_arity(i: u8, j: u8, l: usize) -> Result<usize> {
    check_ij(i, j)?;
    let n = 2 * l as i64 + i as i64 - j as i64;
    usize::try_from(n).map_err(|_| Error::InvalidArgument(format!("n = 2l + i - j = {n} is negative")))
}

/// The top component
/// `(-1)^{l(l-1)/2} q^gamma prod_a X_a^{1-j} prod_{a != b} (X_a - q^{-2} X_b)`
/// with `gamma = l(l-1)/2 - 2l(1-j) - l(n-1)`.
pub fn top_cycle_component(i: u8, j: u8, l: usize) -> Result<FElement> {
    let n = top_arity(i, j, l)?;
    let (li, ni, ji) = (l as i32, n as i32, j as i32);
    let gamma = li * (li - 1) / 2 - 2 * li * (1 - ji) - li * (ni - 1);
    let sign = if (l * l.saturating_sub(1) / 2) % 2 == 1 { -1 } else { 1 };
    let mut p = MPoly::monomial(l, n, Rational::from_int(sign), &vec![1 - ji; l], &[], gamma);
    for a in 0..l {
        for b in 0..l {
            if a != b {
                p = &p * &(&MPoly::x(l, n, a) - &MPoly::x(l, n, b).mul_qpow(-2));
            }
        }
    }
    FElement::new(n, l, p)
}

/// The printed exponent `nu` of the recursion for the current arity `n = 2l + i - j`.
pub fn printed_nu(i: u8, j: u8, l: usize) -> i32 {
    let n = 2 * l as i32 + i as i32 - j as i32;
    let base = -5 * l as i32 + i as i32 + j as i32;
    if n % 2 == 0 {
        base - 2
    } else {
        base - 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkMode {
    /// The scalar must equal the printed `q^nu`.
    Strict,
    /// Any unit `±q^k` is accepted and reported.
    UpToUnit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkReport {
    pub pass: bool,
    /// `LHS = unit * z^{-n-1+i} prod(...) P_{n,l}`.
    pub unit: Unit,
    /// `unit / q^nu`.
    pub offset: Unit,
    pub nu: i32,
    pub strict_match: bool,
}

/// Substitutes `X_{l+1} = z^{-1}`, `z_{n+1} = z`, `z_{n+2} = c z` in an element of
/// layout `(l+1, n+2)`, giving layout `(l, n+1)` with `z` as the last `z` variable.
fn link_specialize(p: &MPoly, l: usize, n: usize, zmult: (Rational, i32)) -> MPoly {
    let map = MonoMap::between(l + 1, n + 2, l, n + 1);
    let xz = map.out_mono(&[], &[(n, -1)], 0);
    let zz = map.out_mono(&[], &[(n, 1)], zmult.1);
    p.substitute(&map.set_x(l, Rational::one(), xz).set_z(n + 1, zmult.0, zz))
}

fn link_rhs_shape(pcur: &MPoly, l: usize, n: usize, i: u8, factor: impl Fn(&MPoly, &MPoly) -> MPoly) -> MPoly {
    let zmap: Vec<usize> = (0..n).collect();
    let xmap: Vec<usize> = (0..l).collect();
    let mut rhs = pcur.relayout(l, n + 1, &xmap, &zmap);
    let mut zpow = vec![0; n + 1];
    zpow[n] = -(n as i32) - 1 + i as i32;
    rhs = rhs.mul_term(&Rational::one(), &Mono::from_parts(l, &[], &zpow, 0));
    let z = MPoly::z(l, n + 1, n);
    for a in 0..l {
        rhs = &rhs * &factor(&MPoly::x(l, n + 1, a), &z);
    }
    rhs
}

/// Checks `P_{n+2,l+1}(X, z^{-1} | z_1..z_n, z, q^2 z) = q^nu z^{-n-1+i} prod_a (1 - q^{-2} z X_a)(1 - q^2 z X_a) P_{n,l}`.
pub fn link_verify(pnext: &FElement, pcur: &FElement, i: u8, mode: LinkMode) -> Result<LinkReport> {
    let (n, l) = (pcur.n, pcur.l);
    if pnext.n != n + 2 || pnext.l != l + 1 {
        return Err(Error::InvalidArgument(
            "arities of the two components do not match".into(),
        ));
    }
    let j = 2 * l as i64 + i as i64 - n as i64;
    if !(0..=1).contains(&j) || i > 1 {
        return Err(Error::InvalidArgument(format!(
            "n = {n}, l = {l}, i = {i} give no valid j"
        )));
    }
    let j = j as u8;
    let nu = printed_nu(i, j, l);
    let lhs = link_specialize(&pnext.poly, l, n, (Rational::one(), 2));
    let one = MPoly::one(l, n + 1);
    let shape = link_rhs_shape(&pcur.poly, l, n, i, |x, z| {
        let zx = z * x;
        &(&one - &zx.mul_qpow(-2)) * &(&one - &zx.mul_qpow(2))
    });
    let unit = match (lhs.is_zero(), shape.is_zero()) {
        (true, true) => Unit::ONE,
        (false, false) => measure_unit(&lhs, &shape)?,
        _ => return Err(Error::ShapeMismatch("exactly one side vanishes".into())),
    };
    let offset = Unit::new(unit.sign, unit.qpow - nu);
    let strict_match = offset == Unit::ONE || (lhs.is_zero() && shape.is_zero());
    let pass = match mode {
        LinkMode::Strict => strict_match,
        LinkMode::UpToUnit => true,
    };
    Ok(LinkReport {
        pass,
        unit,
        offset,
        nu,
        strict_match,
    })
}

/// Finds `u = ±q^k` with `a = u b`, else `ShapeMismatch`.
pub fn measure_unit(a: &MPoly, b: &MPoly) -> Result<Unit> {
    let ratio = a
        .exact_div(b)
        .map_err(|_| Error::ShapeMismatch("sides are not proportional".into()))?;
    let Some((c, m)) = ratio.as_term() else {
        return Err(Error::ShapeMismatch(format!("ratio {ratio} is not a monomial")));
    };
    if m.with_q(0) != Mono::ONE {
        return Err(Error::ShapeMismatch(format!("ratio {ratio} depends on X or z")));
    }
    let sign = if c.is_one() {
        1
    } else if (-c).is_one() {
        -1
    } else {
        return Err(Error::ShapeMismatch(format!("ratio {ratio} is not a unit")));
    };
    Ok(Unit::new(sign, m.q))
}

/// `((n - i)^2 - j) / 4`, requiring `n ≡ i - j (mod 2)`.
pub fn degree_shift(i: u8, j: u8, n: i64) -> Result<Rational> {
    check_ij(i, j)?;
    if (n - i as i64 + j as i64).rem_euclid(2) != 0 {
        return Err(Error::ParityError(format!(
            "n = {n} is not congruent to i - j = {} mod 2",
            i as i64 - j as i64
        )));
    }
    let num = (n - i as i64).pow(2) - j as i64;
    assert_eq!(
        num.rem_euclid(4),
        0,
        "degree shift is integral under the parity condition"
    );
    Ok(Rational::from_int(num / 4))
}

/// A sequence of elements `P_{n,l}` with `n - 2l = m` over a finite window of `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleSeq {
    pub i: u8,
    pub j: u8,
    pub m: i32,
    pub components: BTreeMap<usize, FElement>,
}

impl CycleSeq {
    /// The top cycle with components `l = 0..=lmax` (starting at the first valid `l`).
    pub fn top(i: u8, j: u8, lmax: usize) -> Result<Self> {
        check_ij(i, j)?;
        let mut components = BTreeMap::new();
        for l in 0..=lmax {
            if let Ok(f) = top_cycle_component(i, j, l) {
                components.insert(f.n, f);
            }
        }
        Ok(Self {
            i,
            j,
            m: i as i32 - j as i32,
            components,
        })
    }

    /// Links between consecutive components.
    pub fn verify_links(&self, mode: LinkMode) -> Result<Vec<(usize, LinkReport)>> {
        let comps: Vec<&FElement> = self.components.values().collect();
        comps
            .windows(2)
            .map(|w| Ok((w[0].n, link_verify(w[1], w[0], self.i, mode)?)))
            .collect()
    }
}

/// `c * p(q = i) * prod_{a<b} (X_a - X_b) / (X_a + X_b)`.
pub fn skew_embed(p: &FElement, c: &GaussRational) -> Result<GaussPoly> {
    let (n, l) = (p.n, p.l);
    let g = p.poly.specialize_qi().scale(c);
    if l <= 1 {
        return Ok(g);
    }
    let mut num = MPoly::one(l, n);
    let mut den = MPoly::one(l, n);
    for a in 0..l {
        for b in a + 1..l {
            num = &num * &(&MPoly::x(l, n, a) - &MPoly::x(l, n, b));
            den = &den * &(&MPoly::x(l, n, a) + &MPoly::x(l, n, b));
        }
    }
    g.mul_real(&num).exact_div_real(&den)
}

/// A skew component at `q = i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkewComponent {
    pub n: usize,
    pub l: usize,
    pub poly: GaussPoly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkewCycleSeq {
    pub i: u8,
    pub j: u8,
    pub m: i32,
    pub components: BTreeMap<usize, SkewComponent>,
}

/// Outcome of the skew recursion check; `witness` is `LHS - RHS` when it fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SkewLinkReport {
    pub pass: bool,
    pub witness: Option<String>,
}

fn skew_lhs(pnext: &GaussPoly, l: usize, n: usize) -> GaussPoly {
    let map = MonoMap::between(l + 1, n + 2, l, n + 1);
    let xz = map.out_mono(&[], &[(n, -1)], 0);
    let zz = map.out_mono(&[], &[(n, 1)], 0);
    pnext.substitute(
        &map.set_x(l, Rational::one(), xz)
            .set_z(n + 1, Rational::from_int(-1), zz),
    )
}

fn skew_rhs_factor(l: usize, n: usize, i: u8) -> MPoly {
    let one = MPoly::one(l, n + 1);
    link_rhs_shape(&MPoly::one(l, n), l, n, i, |x, z| {
        let xz = x * z;
        &one - &(&xz * &xz)
    })
}

/// Checks `P_{n+2,l+1}(X, z^{-1} | z_1..z_n, z, -z) = z^{-n-1+i} prod_a (1 - X_a^2 z^2) P_{n,l}`.
pub fn skew_link_verify(pnext: &SkewComponent, pcur: &SkewComponent, i: u8) -> Result<SkewLinkReport> {
    let (n, l) = (pcur.n, pcur.l);
    if pnext.n != n + 2 || pnext.l != l + 1 || pnext.poly.nx() != l + 1 || pnext.poly.nz() != n + 2 {
        return Err(Error::InvalidArgument(
            "arities of the two components do not match".into(),
        ));
    }
    let lhs = skew_lhs(&pnext.poly, l, n);
    let zmap: Vec<usize> = (0..n).collect();
    let xmap: Vec<usize> = (0..l).collect();
    let cur = GaussPoly::from_parts(
        pcur.poly.re.relayout(l, n + 1, &xmap, &zmap),
        pcur.poly.im.relayout(l, n + 1, &xmap, &zmap),
    )?;
    let rhs = cur.mul_real(&skew_rhs_factor(l, n, i));
    let diff = &lhs - &rhs;
    Ok(SkewLinkReport {
        pass: diff.is_zero(),
        witness: (!diff.is_zero()).then(|| diff.to_string()),
    })
}

/// Conditions (skew symmetry, symmetry in `z`, degree bound) on one component.
pub fn skew_component_conditions(c: &SkewComponent) -> Vec<String> {
    let mut bad = Vec::new();
    if c.l > 1 && !c.poly.is_skew_x() {
        bad.push(format!("n={}: not skew-symmetric in X", c.n));
    }
    if !c.poly.is_symmetric_z() {
        bad.push(format!("n={}: not symmetric in z", c.n));
    }
    if c.l > 0 && c.poly.max_x_exponent().unwrap_or(0) > c.n as i32 - 1 {
        bad.push(format!("n={}: degree in X exceeds n-1", c.n));
    }
    bad
}

/// All four conditions on every component and every consecutive pair; returns the failures.
pub fn check_skew_sequence(seq: &SkewCycleSeq) -> Result<Vec<String>> {
    let mut bad: Vec<String> = seq.components.values().flat_map(skew_component_conditions).collect();
    let comps: Vec<&SkewComponent> = seq.components.values().collect();
    for w in comps.windows(2) {
        let r = skew_link_verify(w[1], w[0], seq.i)?;
        if !r.pass {
            bad.push(format!(
                "link {} -> {} fails: {}",
                w[0].n,
                w[1].n,
                r.witness.unwrap_or_default()
            ));
        }
    }
    Ok(bad)
}

fn monomial_x(l: usize, n: usize, x: &[i32]) -> MPoly {
    MPoly::monomial(l, n, Rational::one(), x, &[], 0)
}

/// The printed components of the reference sequence, as `(l, polynomial in l variables)`.
fn printed_reference(i: u8, j: u8) -> Vec<MPoly> {
    let p = |x: &[i32]| monomial_x(x.len(), 0, x);
    match (i, j) {
        (0, 0) | (1, 0) => vec![p(&[]), p(&[1]), p(&[1]).wedge(&p(&[3]))],
        (0, 1) => vec![p(&[]), p(&[2]), p(&[2]).wedge(&p(&[4]))],
        _ => vec![p(&[]), p(&[0]), p(&[0]).wedge(&p(&[2]))],
    }
}

fn with_z_layout(p: &MPoly, n: usize) -> MPoly {
    let l = p.nx();
    p.relayout(l, n, &(0..l).collect::<Vec<_>>(), &[])
}

/// The reference sequence for `(i, j)` through arity `n_max`: the printed components,
/// then extensions solved from the recursion.
pub fn reference_skew_seq(i: u8, j: u8, n_max: usize) -> Result<SkewCycleSeq> {
    check_ij(i, j)?;
    let m = i as i32 - j as i32;
    let m_abs = m.unsigned_abs() as usize;
    let mut components = BTreeMap::new();
    let printed = printed_reference(i, j);
    let mut n = m_abs;
    let mut l = 0;
    while n <= n_max {
        let poly = if l < printed.len() {
            GaussPoly::from_real(&with_z_layout(&printed[l], n))
        } else {
            let prev: &SkewComponent = &components[&(n - 2)];
            extend_skew(prev, i)?.poly
        };
        components.insert(n, SkewComponent { n, l, poly });
        n += 2;
        l += 1;
    }
    Ok(SkewCycleSeq { i, j, m, components })
}

/// Solves the recursion for the next component, independent of `z`, with degree at most `n+1`.
pub fn extend_skew(prev: &SkewComponent, i: u8) -> Result<SkewComponent> {
    let (n, l) = (prev.n, prev.l);
    let (nn, ll) = (n + 2, l + 1);
    let cols: Vec<GaussPoly> = strict_sequences(ll, nn - 1)
        .into_iter()
        .map(|k| {
            GaussPoly::from_real(
                &monomial_x(ll, nn, &k.iter().map(|e| *e as i32).collect::<Vec<_>>()).skew_symmetrize_x(),
            )
        })
        .collect();
    let images: Vec<GaussPoly> = cols.iter().map(|c| skew_lhs(c, l, n)).collect();
    let zmap: Vec<usize> = (0..n).collect();
    let xmap: Vec<usize> = (0..l).collect();
    let cur = GaussPoly::from_parts(
        prev.poly.re.relayout(l, n + 1, &xmap, &zmap),
        prev.poly.im.relayout(l, n + 1, &xmap, &zmap),
    )?;
    let target = cur.mul_real(&skew_rhs_factor(l, n, i));
    let mut keys: Vec<Mono> = images
        .iter()
        .flat_map(|g| g.monomials())
        .chain(target.monomials())
        .collect();
    keys.sort();
    keys.dedup();
    let a: Vec<Vec<GaussRational>> = keys
        .iter()
        .map(|k| images.iter().map(|g| g.coeff(k)).collect())
        .collect();
    let b: Vec<GaussRational> = keys.iter().map(|k| target.coeff(k)).collect();
    match solve(&a, &b) {
        Solution::Unique(x) => {
            let mut poly = GaussPoly::zero(ll, nn);
            for (c, col) in x.iter().zip(&cols) {
                poly = &poly + &col.scale(c);
            }
            Ok(SkewComponent { n: nn, l: ll, poly })
        }
        Solution::NotUnique { kernel_dim, .. } => Err(Error::ExtensionNotUnique(format!(
            "n = {nn}: kernel of dimension {kernel_dim}"
        ))),
        Solution::Inconsistent => Err(Error::ExtensionNotFound(format!("n = {nn}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::{expand_in_w_basis, membership, w_basis, SpaceKind, SpaceSpec};

    fn p(s: &str, l: usize, n: usize) -> MPoly {
        MPoly::parse(s, l, n).unwrap()
    }

    #[test]
    fn top_examples() {
        assert_eq!(top_cycle_component(0, 0, 0).unwrap().poly, MPoly::one(0, 0));
        assert_eq!(top_cycle_component(0, 0, 1).unwrap().poly, p("q^-3 * X1", 1, 2));
        assert_eq!(top_cycle_component(1, 1, 1).unwrap().poly, p("q^-1", 1, 2));
        assert!(top_cycle_component(0, 1, 0).is_err());
    }

    #[test]
    fn top_components_are_symmetric_members() {
        for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            for l in 0..=3 {
                let Ok(f) = top_cycle_component(i, j, l) else { continue };
                let spec = SpaceSpec {
                    symmetric_in_z: true,
                    ..SpaceSpec::new(SpaceKind::F, f.n)
                };
                let r = membership(&f, &spec).unwrap();
                assert!(r.passed(), "({i},{j},{l}): {:?}", r.failures);
            }
        }
    }

    #[test]
    fn link_offsets_are_constant_in_l() {
        for (i, j) in [(0u8, 0u8), (0, 1), (1, 0), (1, 1)] {
            let seq = CycleSeq::top(i, j, 4).unwrap();
            let reps = seq.verify_links(LinkMode::UpToUnit).unwrap();
            assert!(reps.len() >= 3);
            let first = reps[0].1.offset;
            assert!(
                reps.iter().all(|(_, r)| r.pass && r.offset == first),
                "({i},{j}): {reps:?}"
            );
        }
    }

    #[test]
    fn zero_components_link_trivially() {
        let r = link_verify(&FElement::zero(2, 1), &FElement::zero(0, 0), 0, LinkMode::UpToUnit).unwrap();
        assert!(r.pass);
        assert_eq!(r.unit, Unit::ONE);
    }

    #[test]
    fn w_basis_specializations() {
        for n in 1..=3usize {
            for eps in crate::evalmodule::SignString::enumerate(n) {
                let m: Vec<usize> = eps.minus_positions().into_iter().map(|k| k + 1).collect();
                let l = m.len();
                let with = |extra: &[usize]| {
                    let mut mm = m.clone();
                    mm.extend_from_slice(extra);
                    w_basis(n + 2, &mm).unwrap().poly
                };
                let spec = |p: &MPoly, l: usize| link_specialize(p, l, n, (Rational::one(), 2));
                if l >= 1 {
                    assert!(spec(&with(&[]), l - 1).is_zero());
                }
                assert!(spec(&with(&[n + 1, n + 2]), l + 1).is_zero());
                let pm = spec(&with(&[n + 2]), l);
                let mp = spec(&with(&[n + 1]), l);
                assert_eq!(pm.mul_qpow(1).scale(&Rational::from_int(-1)), mp, "eps = {eps}");
                let one = MPoly::one(l, n + 1);
                let z = MPoly::z(l, n + 1, n);
                let zinv = MPoly::monomial(
                    l,
                    n + 1,
                    Rational::one(),
                    &[],
                    &{
                        let mut e = vec![0; n + 1];
                        e[n] = -1;
                        e
                    },
                    0,
                );
                let mut rhs = (&one - &MPoly::q_pow(l, n + 1, 2)).mul_qpow(-(l as i32) - 1);
                for k in 0..n {
                    rhs = &rhs * &(&one - &(&MPoly::z(l, n + 1, k) * &zinv).mul_qpow(-2));
                }
                for a in 0..l {
                    let zx = &z * &MPoly::x(l, n + 1, a);
                    rhs = &rhs * &(&(&one - &zx.mul_qpow(-2)) * &(&one - &zx.mul_qpow(2)));
                }
                let w = w_basis(n, &m).unwrap().poly;
                rhs = &rhs * &w.relayout(l, n + 1, &(0..l).collect::<Vec<_>>(), &(0..n).collect::<Vec<_>>());
                assert_eq!(mp, rhs, "eps = {eps}");
            }
        }
    }

    #[test]
    fn expansion_of_first_top_component() {
        let f = top_cycle_component(0, 0, 1).unwrap();
        let c = expand_in_w_basis(&f).unwrap();
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn degree_shift_values() {
        assert_eq!(degree_shift(0, 0, 0).unwrap(), Rational::ZERO);
        assert_eq!(degree_shift(0, 0, 2).unwrap(), Rational::from_int(1));
        assert!(matches!(degree_shift(1, 1, 3), Err(Error::ParityError(_))));
    }

    #[test]
    fn skew_embed_examples() {
        let one = GaussRational::one();
        let f = FElement::new(3, 2, p("X1^3 - X1^2 * X2 - X1 * X2^2 + X2^3", 2, 3)).unwrap();
        let g = skew_embed(&f, &one).unwrap();
        assert!(g.is_skew_x());
        assert_eq!(g.re, p("X1^3 - 3 * X1^2 * X2 + 3 * X1 * X2^2 - X2^3", 2, 3));
        let h = FElement::new(3, 2, p("X1^2 + X2^2", 2, 3)).unwrap();
        assert!(matches!(skew_embed(&h, &one), Err(Error::NotDivisible(_))));
        let k = FElement::new(2, 1, p("q * X1", 1, 2)).unwrap();
        assert_eq!(skew_embed(&k, &one).unwrap().im, p("X1", 1, 2));
    }

    #[test]
    fn hand_checked_skew_links() {
        let c = |n: usize, l: usize, s: &str| SkewComponent {
            n,
            l,
            poly: GaussPoly::from_real(&p(s, l, n)),
        };
        assert!(skew_link_verify(&c(2, 1, "X1"), &c(0, 0, "1"), 0).unwrap().pass);
        assert!(
            skew_link_verify(&c(4, 2, "X1 * X2^3 - X1^3 * X2"), &c(2, 1, "X1"), 0)
                .unwrap()
                .pass
        );
        let r = skew_link_verify(&c(2, 1, "X1^2"), &c(0, 0, "1"), 0).unwrap();
        assert!(!r.pass && r.witness.is_some());
    }

    #[test]
    fn reference_sequences_satisfy_all_conditions() {
        for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let seq = reference_skew_seq(i, j, 7).unwrap();
            let bad = check_skew_sequence(&seq).unwrap();
            assert!(bad.is_empty(), "({i},{j}): {bad:?}");
        }
        let s = reference_skew_seq(1, 1, 4).unwrap();
        assert_eq!(s.components[&4].poly.re, p("X2^2 - X1^2", 2, 4));
    }

    #[test]
    fn solver_reproduces_printed_components() {
        for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let seq = reference_skew_seq(i, j, 5).unwrap();
            let comps: Vec<&SkewComponent> = seq.components.values().collect();
            for w in comps.windows(2) {
                assert_eq!(&extend_skew(w[0], i).unwrap(), w[1], "({i},{j}) n={}", w[1].n);
            }
        }
    }
}
