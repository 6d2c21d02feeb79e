//! Acceptance suite: one line per criterion, each with a pinned runtime budget.
//! All comparisons are exact.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use proptest::test_runner::{RngAlgorithm, TestRng};
use rand::RngExt;

use qsl2_core::characters::{
    bosonic_level_minus_one, bosonic_m_max, compare_char, fermionic_w, melzer_n_max, melzer_rhs, BiSeries,
};
use qsl2_core::crystal::{
    closure_check, enumerate_paths, level_restrict, path_set, LevelData, LowerBound, PathElement, TensorRule,
};
use qsl2_core::cycles::{
    check_skew_sequence, reference_skew_seq, skew_link_verify, top_arity, CycleSeq, LinkMode, SkewComponent,
};
use qsl2_core::evalmodule::{verify_defining_relations, ActionTable, SignString};
use qsl2_core::fock::{braid_check, drinfeld_check, sample_kets, xvm_check, DrinfeldRelation, Level, ModeWindow};
use qsl2_core::funcspace::{
    exchange_check, expand_in_w_basis, graded_dimension, membership, span_graded_dim, triangularity_check, w_basis,
    w_basis_naive, FElement, GeneratorSet, RMatrixVariant, SpaceKind, SpaceSpec, Window,
};
use qsl2_core::intertwiner::{a_table, assembly_context, compare_with_top, TConvention};
use qsl2_core::ledger::{Ledger, LedgerEntry, Unit};
use qsl2_core::{GaussPoly, MPoly, Rational};

type Check = std::result::Result<String, String>;

const IJ: [(u8, u8); 4] = [(0, 0), (0, 1), (1, 0), (1, 1)];

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T, E: std::fmt::Display>(r: std::result::Result<T, E>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn subsets_1based(n: usize, l: usize) -> Vec<Vec<usize>> {
    SignString::with_minus_count(n, l)
        .into_iter()
        .map(|s| s.minus_positions().iter().map(|k| k + 1).collect())
        .collect()
}

fn c1_wbasis() -> Check {
    let mut count = 0;
    for n in 1..=5 {
        for l in 0..=n {
            for m in subsets_1based(n, l) {
                let w = ok(w_basis(n, &m))?;
                let rep = ok(membership(&w, &SpaceSpec::new(SpaceKind::F, n).with_l(l)))?;
                ensure(rep.passed(), || format!("w_{m:?} (n={n}) fails {:?}", rep.failures))?;
                ensure(w.weight() == n as i32 - 2 * l as i32, || format!("weight of w_{m:?}"))?;
                if n <= 4 {
                    let naive = ok(w_basis_naive(n, &m))?;
                    ensure(naive == w, || {
                        format!("w_{m:?} (n={n}) differs from the unfolded construction")
                    })?;
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} basis elements"))
}

fn random_coefficient(rng: &mut TestRng, n: usize) -> MPoly {
    let terms = rng.random_range(0..=2);
    let mut c = MPoly::zero(0, n);
    for _ in 0..terms {
        let z: Vec<i32> = (0..n).map(|_| rng.random_range(-1..=1)).collect();
        let num = rng.random_range(-3i64..=3);
        let qe = rng.random_range(-2..=2);
        c = &c + &MPoly::monomial(0, n, Rational::from_int(num), &[], &z, qe);
    }
    c
}

fn c2_triangularity() -> Check {
    let mut points = 0;
    for n in 1..=5 {
        for l in 0..=n {
            let r = ok(triangularity_check(n, l))?;
            points += r.zeros_checked + r.diagonal_checked;
        }
    }
    let mut rng = TestRng::deterministic_rng(RngAlgorithm::ChaCha);
    let mut trips = 0;
    for n in 1..=4 {
        for l in 0..=n {
            for _ in 0..3 {
                let mut want = BTreeMap::new();
                let mut f = MPoly::zero(l, n);
                for m in subsets_1based(n, l) {
                    let c = random_coefficient(&mut rng, n);
                    let w = ok(w_basis(n, &m))?;
                    f = &f + &(&w.poly * &c.relayout(l, n, &[], &(0..n).collect::<Vec<_>>()));
                    want.insert(m, c);
                }
                let got = ok(expand_in_w_basis(&ok(FElement::new(n, l, f))?))?;
                for (m, c) in &want {
                    let same = match got.get(m) {
                        Some(r) => r.num == c * &r.den_product(),
                        None => c.is_zero(),
                    };
                    ensure(same, || format!("coefficient {m:?} (n={n}, l={l}) differs"))?;
                }
                trips += 1;
            }
        }
    }
    Ok(format!("{points} evaluation points, {trips} round trips"))
}

fn c3_exchange() -> Check {
    let mut checked = 0;
    for n in 2..=4 {
        for l in 0..=n {
            for j in 0..n - 1 {
                checked += ok(exchange_check(n, l, j, RMatrixVariant::Symmetric))?.checked;
            }
        }
    }
    Ok(format!("{checked} components"))
}

fn c4_relations() -> Check {
    let table = ActionTable::standard();
    let mut vectors = 0;
    for n in 1..=3 {
        vectors += ok(verify_defining_relations(n, &table, 1))?.vectors_checked;
    }
    Ok(format!("{vectors} test vectors"))
}

fn c5_links(ledger_path: &Path) -> Check {
    let mut ledger = ok(Ledger::load(ledger_path))?;
    let mut strict = 0;
    let mut links = 0;
    for (i, j) in IJ {
        let reps = ok(ok(CycleSeq::top(i, j, 4))?.verify_links(LinkMode::UpToUnit))?;
        ensure(!reps.is_empty(), || format!("no links for ({i},{j})"))?;
        let offsets: BTreeSet<Unit> = reps.iter().map(|(_, r)| r.offset).collect();
        ensure(reps.iter().all(|(_, r)| r.pass), || format!("link fails for ({i},{j})"))?;
        ensure(offsets.len() == 1, || {
            format!("unit varies with l for ({i},{j}): {offsets:?}")
        })?;
        let off = *offsets.iter().next().unwrap();
        ok(ledger.record(LedgerEntry::new("link-top", i, j, off)))?;
        strict += reps.iter().filter(|(_, r)| r.strict_match).count();
        links += reps.len();
    }
    ok(ledger.save(ledger_path))?;
    let reloaded = ok(Ledger::load(ledger_path))?;
    for (i, j) in IJ {
        ensure(reloaded.get("link-top", i, j).is_some(), || {
            format!("unit for ({i},{j}) not persisted")
        })?;
    }
    Ok(format!("{links} links, strict agreement on {strict} (informational)"))
}

fn c6_intertwiner(ledger_path: &Path) -> Check {
    let mut ledger = ok(Ledger::load(ledger_path))?;
    let mut tables = 0;
    for (i, j) in IJ {
        for l in 0..=4 {
            let Ok(n) = top_arity(i, j, l) else { continue };
            if n > 4 {
                continue;
            }
            let t = ok(a_table(n, l, i, j, TConvention::Standard))?;
            ok(t.check_round_trips(TConvention::Standard))?;
            let c = ok(compare_with_top(n, l, i, j, TConvention::Standard))?;
            ensure(c.symmetric_in_z && c.in_f, || {
                format!("assembled ({n},{l},{i},{j}) is not in F")
            })?;
            if (n, l, i, j) == (2, 1, 0, 0) {
                ensure(c.assembled == "-q^-1 * X1", || {
                    format!("assembled (2,1,0,0) = {}", c.assembled)
                })?;
            }
            ok(ledger.record(LedgerEntry::new(assembly_context(l), i, j, c.unit)))?;
            tables += 1;
        }
    }
    ok(ledger.save(ledger_path))?;
    Ok(format!("{tables} tables assembled"))
}

fn skew(text: &str, l: usize, n: usize) -> std::result::Result<SkewComponent, String> {
    Ok(SkewComponent {
        n,
        l,
        poly: GaussPoly::from_real(&ok(MPoly::parse(text, l, n))?),
    })
}

fn c7_skew() -> Check {
    for (i, j) in IJ {
        let seq = ok(reference_skew_seq(i, j, 4))?;
        let bad = ok(check_skew_sequence(&seq))?;
        ensure(bad.is_empty(), || format!("({i},{j}): {bad:?}"))?;
    }
    let r = ok(skew_link_verify(&skew("X1", 1, 2)?, &skew("1", 0, 0)?, 0))?;
    ensure(r.pass, || format!("P21 -> P00 residual {:?}", r.witness))?;
    let r = ok(skew_link_verify(
        &skew("X1 * X2^3 - X1^3 * X2", 2, 4)?,
        &skew("X1", 1, 2)?,
        0,
    ))?;
    ensure(r.pass, || format!("P42 -> P21 residual {:?}", r.witness))?;
    Ok("four sequences through n = 4, two hand instances".into())
}

fn c8_graded() -> Check {
    let table = ActionTable::standard();
    for n in 1..=3usize {
        let g = ok(graded_dimension(
            &SpaceSpec::new(SpaceKind::Wgeq0, n),
            &Window { vmin: 0, vmax: 4 },
        ))?;
        let s = ok(span_graded_dim(n, GeneratorSet::Full, 4, &table))?;
        let lin = BiSeries::from_graded_table(&g, 4);
        let span = BiSeries::from_graded_table(&s, 4);
        let fer = fermionic_w(n as u32, 4);
        let a = compare_char(&lin, &fer, None);
        ensure(a.equal, || {
            format!("n={n}: linear algebra vs fermionic {:?}", a.first_mismatch)
        })?;
        let b = compare_char(&lin, &span, None);
        ensure(b.equal, || {
            format!("n={n}: linear algebra vs span {:?}", b.first_mismatch)
        })?;
        if n == 2 {
            let ranks: Vec<usize> = (0..=2).map(|d| g.get(&(d, 0)).copied().unwrap_or(0)).collect();
            ensure(ranks == [1, 2, 3], || format!("W>=0_(2,1) ranks {ranks:?}"))?;
        }
    }
    Ok("n <= 3, degrees 0..=4".into())
}

fn c9_melzer() -> Check {
    for j in 0..=1u8 {
        let lhs = ok(melzer_rhs(j, 5, melzer_n_max(j, 5)))?;
        let rhs = ok(bosonic_level_minus_one(j, 5, bosonic_m_max(j, 5)))?;
        let c = compare_char(&lhs, &rhs, Some(6));
        ensure(c.equal, || format!("j={j}: {:?}", c.first_mismatch))?;
        if j == 0 {
            let col = lhs.z_column(0);
            let want: Vec<Rational> = [1, 1, 2, 3, 5, 7].iter().map(|&x| Rational::from_int(x)).collect();
            ensure(col == want, || format!("z^0 column {col:?}"))?;
        }
    }
    Ok("j = 0, 1 through v^5".into())
}

fn c10_fock() -> Check {
    for d in 1..=4u8 {
        let mmax = if d <= 2 { 3 } else { 2 };
        for m in 0..=mmax {
            let r = ok(braid_check(d, m))?;
            ensure(r.pass, || format!("display {d}, m={m}"))?;
        }
    }
    let mut checks = 0;
    for level in [Level::Plus, Level::Minus] {
        let states = sample_kets(level, 4);
        for rel in [DrinfeldRelation::Dr3, DrinfeldRelation::Dr4, DrinfeldRelation::Dr6] {
            let r = ok(drinfeld_check(rel, &states, &ModeWindow::symmetric(2)))?;
            ensure(r.pass, || format!("{rel:?} at {level:?}"))?;
            checks += r.checks;
        }
    }
    for i in 0..=1u8 {
        for m in 0..=1u32 {
            let r = ok(xvm_check(i, m, 2, 16))?;
            ensure(r.pass, || format!("xvm i={i} m={m}"))?;
        }
    }
    Ok(format!("{checks} Drinfeld checks"))
}

/// Filters every candidate word directly by the three defining conditions.
fn brute_force_paths(d: &LevelData) -> Vec<PathElement> {
    let n = d.n as usize;
    let r = d.m.abs() + d.n as i32;
    let width = (2 * r + 1) as usize;
    let mut out = Vec::new();
    for code in 0..width.pow(n as u32) {
        let mut c = code;
        let mu: Vec<i32> = (0..n)
            .map(|_| {
                let v = (c % width) as i32 - r;
                c /= width;
                v
            })
            .collect();
        if mu.iter().sum::<i32>() != d.m {
            continue;
        }
        for bits in 0..1u32 << n {
            let eps: Vec<i8> = (0..n).map(|k| if bits >> k & 1 == 1 { -1 } else { 1 }).collect();
            if eps.iter().map(|&e| e as i32).sum::<i32>() != d.eta1 as i32 - d.xi1 as i32 {
                continue;
            }
            let adjacent = (1..n).all(|k| mu[k] - mu[k - 1] == if eps[k - 1] == 1 && eps[k] == -1 { 1 } else { 0 });
            if adjacent {
                out.push(PathElement::new(mu.iter().copied().zip(eps.iter().copied()).collect()));
            }
        }
    }
    out.sort();
    out
}

fn c11_crystal() -> Check {
    let mut instances = 0;
    for n in 1..=4u32 {
        for m in -3..=3 {
            for xi1 in 0..=n {
                for eta1 in 0..=n {
                    let d = LevelData {
                        xi0: 0,
                        xi1,
                        eta1,
                        n,
                        m,
                    };
                    if d.validate().is_err() {
                        continue;
                    }
                    let fast = ok(enumerate_paths(&d))?;
                    ensure(fast == brute_force_paths(&d), || {
                        format!("enumeration differs at {d:?}")
                    })?;
                    let mut prev: Option<Vec<PathElement>> = None;
                    for xi0 in 0..=n {
                        let cur = level_restrict(&fast, &LevelData { xi0, ..d }, LowerBound::Negated);
                        let sub = prev.as_ref().map_or(true, |p| p.iter().all(|x| cur.contains(x)));
                        ensure(sub, || format!("restriction not monotone in xi0 at {d:?}"))?;
                        ensure(cur.iter().all(|x| fast.contains(x)), || {
                            format!("restriction adds paths at {d:?}")
                        })?;
                        prev = Some(cur);
                    }
                    instances += 1;
                }
            }
        }
        let window = (-3, 3);
        let rep = closure_check(&ok(path_set(n, window))?, window, TensorRule::LeftFirst);
        ensure(rep.closed, || format!("n={n}: {} escapees", rep.escapees.len()))?;
    }
    Ok(format!("{instances} instances"))
}

struct Criterion {
    id: u8,
    name: &'static str,
    limit: Duration,
    run: Box<dyn Fn() -> Check>,
}

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let ledger = dir.path().join("constants-ledger.json");
    let l5 = ledger.clone();
    let l6 = ledger.clone();
    let secs = Duration::from_secs;
    let criteria = vec![
        Criterion {
            id: 1,
            name: "w-basis well-formedness",
            limit: secs(60),
            run: Box::new(c1_wbasis),
        },
        Criterion {
            id: 2,
            name: "triangularity and expansion",
            limit: secs(60),
            run: Box::new(c2_triangularity),
        },
        Criterion {
            id: 3,
            name: "exchange relation",
            limit: secs(60),
            run: Box::new(c3_exchange),
        },
        Criterion {
            id: 4,
            name: "defining relations",
            limit: secs(30),
            run: Box::new(c4_relations),
        },
        Criterion {
            id: 5,
            name: "top-cycle links",
            limit: secs(30),
            run: Box::new(move || c5_links(&l5)),
        },
        Criterion {
            id: 6,
            name: "intertwiner reconstruction",
            limit: secs(60),
            run: Box::new(move || c6_intertwiner(&l6)),
        },
        Criterion {
            id: 7,
            name: "skew reference sequences",
            limit: secs(10),
            run: Box::new(c7_skew),
        },
        Criterion {
            id: 8,
            name: "graded dimensions",
            limit: secs(300),
            run: Box::new(c8_graded),
        },
        Criterion {
            id: 9,
            name: "level -1 character identity",
            limit: secs(10),
            run: Box::new(c9_melzer),
        },
        Criterion {
            id: 10,
            name: "Fock identities",
            limit: secs(300),
            run: Box::new(c10_fock),
        },
        Criterion {
            id: 11,
            name: "crystal paths",
            limit: secs(30),
            run: Box::new(c11_crystal),
        },
    ];
    let mut failed = Vec::new();
    for c in &criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(|| (c.run)())).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        let verdict = match outcome {
            Ok(detail) if t <= c.limit => Ok(detail),
            Ok(_) => Err(format!("over budget of {:?}", c.limit)),
            Err(e) => Err(e),
        };
        let (tag, detail) = match &verdict {
            Ok(d) => ("PASS", d.clone()),
            Err(e) => ("FAIL", e.clone()),
        };
        println!(
            "[{tag}] criterion {:>2}: {} ({:.2}s / {}s) {}",
            c.id,
            c.name,
            t.as_secs_f64(),
            c.limit.as_secs(),
            detail
        );
        if verdict.is_err() {
            failed.push(c.id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", criteria.len());
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
