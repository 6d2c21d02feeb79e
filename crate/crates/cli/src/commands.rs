use std::collections::BTreeSet;
use std::path::Path;

use clap::{Args, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use qsl2_core::characters::{
    bosonic_level_minus_one, bosonic_m_max, compare_char, fermionic_w, melzer_n_max, melzer_rhs, BiSeries,
};
use qsl2_core::crystal::{
    closure_check, enumerate_paths, level_restrict, path_weight, LevelData, LowerBound, TensorRule,
};
use qsl2_core::cycles::{check_skew_sequence, reference_skew_seq, skew_embed, top_cycle_component, CycleSeq, LinkMode};
use qsl2_core::evalmodule::{verify_defining_relations, ActionTable};
use qsl2_core::fock::{braid_check, drinfeld_check, sample_kets, xvm_check, DrinfeldRelation, Level, ModeWindow};
use qsl2_core::funcspace::{
    exchange_check, graded_dimension, membership, span_graded_dim, w_basis, FElement, GeneratorSet, GradedTable,
    RMatrixVariant, SpaceKind, SpaceSpec, Window,
};
use qsl2_core::intertwiner::{assembly_context, compare_with_top, rho_prefactor, TConvention};
use qsl2_core::ledger::{Ledger, LedgerEntry, LedgerOutcome, Unit};
use qsl2_core::{Error, GaussRational, MPoly, Rational};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Core(Error::InvalidArgument(_) | Error::Parse(_)) => 2,
            CliError::Core(Error::LedgerConflict { .. }) => 3,
            CliError::Core(_) => 1,
        }
    }
}

pub struct Outcome {
    pub pass: bool,
    pub result: Value,
}

fn outcome(pass: bool, result: impl Serialize) -> Result<Outcome, CliError> {
    Ok(Outcome {
        pass,
        result: serde_json::to_value(result).expect("result serializes"),
    })
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpaceArg {
    F,
    W,
    Wgeq0,
    WskewC,
}

impl From<SpaceArg> for SpaceKind {
    fn from(s: SpaceArg) -> Self {
        match s {
            SpaceArg::F => SpaceKind::F,
            SpaceArg::W => SpaceKind::W,
            SpaceArg::Wgeq0 => SpaceKind::Wgeq0,
            SpaceArg::WskewC => SpaceKind::WskewC,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeArg {
    Strict,
    UpToUnit,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VariantArg {
    Symmetric,
    Asymmetric,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConventionArg {
    Standard,
    Transposed,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GensArg {
    ESide,
    Full,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationArg {
    Dr3,
    Dr4,
    Dr6,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundArg {
    Negated,
    AsPrinted,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleArg {
    LeftFirst,
    RightFirst,
}

#[derive(Args, Debug, Serialize)]
pub struct WbasisArgs {
    #[arg(long)]
    pub n: usize,
    /// Increasing 1-based positions of the minus signs, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub m: Vec<usize>,
}

#[derive(Args, Debug, Serialize)]
pub struct WheelArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub l: usize,
    /// Polynomial in X1..Xl, z1..zn and q.
    #[arg(long)]
    pub poly: String,
    #[arg(long, value_enum, default_value = "f")]
    pub space: SpaceArg,
    #[arg(long)]
    pub symmetric_z: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct ExchangeArgs {
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    /// Restrict to one number of minus signs.
    #[arg(long)]
    pub l: Option<usize>,
    #[arg(long, value_enum, default_value = "symmetric")]
    pub variant: VariantArg,
}

#[derive(Args, Debug, Serialize)]
pub struct TopArgs {
    #[arg(long)]
    pub i: u8,
    #[arg(long)]
    pub j: u8,
    #[arg(long)]
    pub l: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct LinkArgs {
    #[arg(long)]
    pub i: u8,
    #[arg(long)]
    pub j: u8,
    /// Largest `l` of the upper component in each link.
    #[arg(long, default_value_t = 4)]
    pub lmax: usize,
    #[arg(long, value_enum, default_value = "up-to-unit")]
    pub mode: ModeArg,
}

#[derive(Args, Debug, Serialize)]
pub struct AssembleArgs {
    #[arg(long)]
    pub i: u8,
    #[arg(long)]
    pub j: u8,
    #[arg(long)]
    pub l: usize,
    #[arg(long, value_enum, default_value = "standard")]
    pub convention: ConventionArg,
    /// Multiply by `(-q)^{-l(l-j)}` before measuring the unit.
    #[arg(long)]
    pub rho_prefactor: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct SkewEmbedArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub l: usize,
    #[arg(long)]
    pub poly: String,
    /// Real part of the scalar.
    #[arg(long, default_value = "1")]
    pub c_re: String,
    /// Imaginary part of the scalar.
    #[arg(long, default_value = "0")]
    pub c_im: String,
}

#[derive(Args, Debug, Serialize)]
pub struct SkewLinkArgs {
    #[arg(long)]
    pub i: u8,
    #[arg(long)]
    pub j: u8,
    #[arg(long, default_value_t = 4)]
    pub nmax: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct CharArgs {
    /// Compare the level -1 character sum with its bosonic form.
    #[arg(long, conflicts_with = "fermionic")]
    pub melzer: bool,
    /// Compare the fermionic sum with the graded dimensions of W>=0.
    #[arg(long)]
    pub fermionic: bool,
    #[arg(long, default_value_t = 0)]
    pub j: u8,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 4)]
    pub vmax: u32,
    #[arg(long, default_value_t = 6)]
    pub zmax: i32,
}

#[derive(Args, Debug, Serialize)]
pub struct GradedArgs {
    #[arg(long, value_enum, default_value = "wgeq0")]
    pub space: SpaceArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub l: Option<usize>,
    #[arg(long, default_value_t = 4)]
    pub vmax: i32,
}

#[derive(Args, Debug, Serialize)]
pub struct SpanArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 4)]
    pub vmax: i32,
    #[arg(long, value_enum, default_value = "full")]
    pub gens: GensArg,
}

#[derive(Args, Debug, Serialize)]
pub struct BraidArgs {
    /// Which identity, 1 to 4.
    #[arg(long)]
    pub display: u8,
    #[arg(long)]
    pub m: u32,
}

#[derive(Args, Debug, Serialize)]
pub struct DrinfeldArgs {
    #[arg(long, value_enum)]
    pub relation: RelationArg,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub level: i32,
    /// Sample all basis states with |degree| up to this bound.
    #[arg(long, default_value_t = 2)]
    pub max_degree: u32,
    /// Modes -w..=w.
    #[arg(long, default_value_t = 2)]
    pub window: i32,
}

#[derive(Args, Debug, Serialize)]
pub struct XvmArgs {
    #[arg(long)]
    pub i: u8,
    #[arg(long)]
    pub m: u32,
    #[arg(long, default_value_t = 2)]
    pub nmax: u32,
    #[arg(long, default_value_t = 16)]
    pub truncation: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct CrystalArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub m: i32,
    #[arg(long, default_value_t = 0)]
    pub xi0: u32,
    #[arg(long, default_value_t = 0)]
    pub xi1: u32,
    #[arg(long, default_value_t = 0)]
    pub eta1: u32,
    #[arg(long, value_enum, default_value = "negated")]
    pub lower_bound: BoundArg,
    #[arg(long, value_enum, default_value = "left-first")]
    pub rule: RuleArg,
}

#[derive(Args, Debug, Serialize)]
pub struct RelationsArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Test vectors carry z_1^s with |s| up to this bound.
    #[arg(long, default_value_t = 1)]
    pub spread: i32,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// The basis element w_M of F_{n,l}.
    Wbasis(WbasisArgs),
    /// Membership of a polynomial in F, W or W>=0.
    WheelCheck(WheelArgs),
    /// Exchange relation of the w basis at every position.
    ExchangeCheck(ExchangeArgs),
    /// Top component P_{2l+i-j,l}.
    TopCycle(TopArgs),
    /// Links of the top cycle, with the measured unit recorded in the ledger.
    LinkCheck(LinkArgs),
    /// Assembles the matrix elements into a polynomial and compares it with the top cycle.
    AssembleIntertwiner(AssembleArgs),
    /// Image of a polynomial in the skew space at q = i.
    SkewEmbed(SkewEmbedArgs),
    /// Conditions and links of the skew reference sequence.
    SkewLinkCheck(SkewLinkArgs),
    /// Character identities.
    CharCheck(CharArgs),
    /// Graded dimensions by linear algebra.
    GradedDim(GradedArgs),
    /// Graded dimensions of the span of the highest vector.
    SpanDim(SpanArgs),
    /// Extremal vectors under divided powers of x^-_0 and x^+_{-1}.
    FockBraid(BraidArgs),
    /// Sampled Drinfeld relations on a Fock module.
    FockDrinfeld(DrinfeldArgs),
    /// Action of x^+(z) on v'_i (x) vbar'_m.
    FockXvm(XvmArgs),
    /// Paths, level restriction and closure.
    CrystalPaths(CrystalArgs),
    /// Defining relations on the n-fold tensor product.
    RelationsCheck(RelationsArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Wbasis(_) => "wbasis",
            Command::WheelCheck(_) => "wheel-check",
            Command::ExchangeCheck(_) => "exchange-check",
            Command::TopCycle(_) => "top-cycle",
            Command::LinkCheck(_) => "link-check",
            Command::AssembleIntertwiner(_) => "assemble-intertwiner",
            Command::SkewEmbed(_) => "skew-embed",
            Command::SkewLinkCheck(_) => "skew-link-check",
            Command::CharCheck(_) => "char-check",
            Command::GradedDim(_) => "graded-dim",
            Command::SpanDim(_) => "span-dim",
            Command::FockBraid(_) => "fock-braid",
            Command::FockDrinfeld(_) => "fock-drinfeld",
            Command::FockXvm(_) => "fock-xvm",
            Command::CrystalPaths(_) => "crystal-paths",
            Command::RelationsCheck(_) => "relations-check",
        }
    }

    pub fn parameters(&self) -> Value {
        let v = match self {
            Command::Wbasis(a) => serde_json::to_value(a),
            Command::WheelCheck(a) => serde_json::to_value(a),
            Command::ExchangeCheck(a) => serde_json::to_value(a),
            Command::TopCycle(a) => serde_json::to_value(a),
            Command::LinkCheck(a) => serde_json::to_value(a),
            Command::AssembleIntertwiner(a) => serde_json::to_value(a),
            Command::SkewEmbed(a) => serde_json::to_value(a),
            Command::SkewLinkCheck(a) => serde_json::to_value(a),
            Command::CharCheck(a) => serde_json::to_value(a),
            Command::GradedDim(a) => serde_json::to_value(a),
            Command::SpanDim(a) => serde_json::to_value(a),
            Command::FockBraid(a) => serde_json::to_value(a),
            Command::FockDrinfeld(a) => serde_json::to_value(a),
            Command::FockXvm(a) => serde_json::to_value(a),
            Command::CrystalPaths(a) => serde_json::to_value(a),
            Command::RelationsCheck(a) => serde_json::to_value(a),
        };
        v.expect("parameters serialize")
    }
}

fn check_ij(i: u8, j: u8) -> Result<(), CliError> {
    if i > 1 || j > 1 {
        return Err(CliError::Usage(format!("i and j must be 0 or 1, got ({i}, {j})")));
    }
    Ok(())
}

fn table_rows(t: &GradedTable) -> Vec<Value> {
    t.iter()
        .map(|((d, w), dim)| json!({"degree": d, "weight": w, "dim": dim}))
        .collect()
}

fn record(path: &Path, entries: Vec<LedgerEntry>) -> Result<Vec<LedgerOutcome>, CliError> {
    let mut ledger = Ledger::load(path)?;
    let mut outcomes = Vec::new();
    for e in entries {
        outcomes.push(ledger.record(e)?);
    }
    ledger.save(path)?;
    Ok(outcomes)
}

fn poly_in(text: &str, l: usize, n: usize) -> Result<FElement, CliError> {
    Ok(FElement::new(n, l, MPoly::parse(text, l, n)?)?)
}

pub fn dispatch(cmd: &Command, ledger: &Path) -> Result<Outcome, CliError> {
    match cmd {
        Command::Wbasis(a) => {
            if a.m.len() > a.n || a.m.windows(2).any(|w| w[0] >= w[1]) || a.m.iter().any(|&x| x == 0 || x > a.n) {
                return Err(CliError::Usage("--m must be increasing positions in 1..=n".into()));
            }
            let w = w_basis(a.n, &a.m)?;
            outcome(true, json!({"n": a.n, "l": w.l, "poly": w.poly.to_string()}))
        }
        Command::WheelCheck(a) => {
            let f = poly_in(&a.poly, a.l, a.n)?;
            let spec = SpaceSpec {
                symmetric_in_z: a.symmetric_z,
                ..SpaceSpec::new(a.space.into(), a.n).with_l(a.l)
            };
            let rep = membership(&f, &spec)?;
            outcome(rep.passed(), rep)
        }
        Command::ExchangeCheck(a) => {
            let variant = match a.variant {
                VariantArg::Symmetric => RMatrixVariant::Symmetric,
                VariantArg::Asymmetric => RMatrixVariant::Asymmetric,
            };
            let ls: Vec<usize> = a.l.map(|l| vec![l]).unwrap_or_else(|| (0..=a.n).collect());
            let mut checked = 0;
            for l in ls {
                for pos in 0..a.n.saturating_sub(1) {
                    match exchange_check(a.n, l, pos, variant) {
                        Ok(r) => checked += r.checked,
                        Err(Error::ExchangeViolated { position, witness }) => {
                            return outcome(
                                false,
                                json!({"checked": checked, "position": position, "witness": witness, "l": l}),
                            );
                        }
                        Err(e) => return Err(e.into()),
                    }
                }
            }
            outcome(true, json!({"checked": checked}))
        }
        Command::TopCycle(a) => {
            check_ij(a.i, a.j)?;
            let p = top_cycle_component(a.i, a.j, a.l)?;
            outcome(true, json!({"n": p.n, "l": p.l, "poly": p.poly.to_string()}))
        }
        Command::LinkCheck(a) => {
            check_ij(a.i, a.j)?;
            let mode = match a.mode {
                ModeArg::Strict => LinkMode::Strict,
                ModeArg::UpToUnit => LinkMode::UpToUnit,
            };
            let seq = CycleSeq::top(a.i, a.j, a.lmax)?;
            let links = seq.verify_links(mode)?;
            let offsets: BTreeSet<Unit> = links.iter().map(|(_, r)| r.offset).collect();
            let constant = offsets.len() <= 1;
            let mut pass = links.iter().all(|(_, r)| r.pass) && constant;
            let mut ledger_outcome = Value::Null;
            if let (Some(off), LinkMode::UpToUnit, true) = (offsets.iter().next(), mode, constant) {
                let out = record(ledger, vec![LedgerEntry::new("link-top", a.i, a.j, *off)])?;
                ledger_outcome = serde_json::to_value(out[0]).expect("outcome serializes");
            }
            if links.is_empty() {
                pass = false;
            }
            let rows: Vec<Value> = links
                .iter()
                .map(|(n, r)| json!({"n": n, "unit": r.unit.to_string(), "offset": r.offset.to_string(), "nu": r.nu, "strict_match": r.strict_match, "pass": r.pass}))
                .collect();
            outcome(
                pass,
                json!({"links": rows, "offset_constant": constant, "ledger": ledger_outcome}),
            )
        }
        Command::AssembleIntertwiner(a) => {
            check_ij(a.i, a.j)?;
            let conv = match a.convention {
                ConventionArg::Standard => TConvention::Standard,
                ConventionArg::Transposed => TConvention::Transposed,
            };
            let n = qsl2_core::cycles::top_arity(a.i, a.j, a.l)?;
            let mut c = compare_with_top(n, a.l, a.i, a.j, conv)?;
            if a.rho_prefactor {
                c.unit = c.unit.times(rho_prefactor(a.l, a.j));
            }
            let pass = c.symmetric_in_z && c.in_f;
            let out = record(ledger, vec![LedgerEntry::new(assembly_context(a.l), a.i, a.j, c.unit)])?;
            outcome(
                pass,
                json!({"n": c.n, "unit": c.unit.to_string(), "symmetric_in_z": c.symmetric_in_z, "in_f": c.in_f, "assembled": c.assembled, "ledger": out[0]}),
            )
        }
        Command::SkewEmbed(a) => {
            let f = poly_in(&a.poly, a.l, a.n)?;
            let re: Rational = a.c_re.parse()?;
            let im: Rational = a.c_im.parse()?;
            let g = skew_embed(&f, &GaussRational::new(re, im))?;
            let rep = qsl2_core::funcspace::skew_membership(&g, a.n, a.l);
            outcome(rep.passed(), json!({"image": g.to_string(), "skew_membership": rep}))
        }
        Command::SkewLinkCheck(a) => {
            check_ij(a.i, a.j)?;
            let seq = reference_skew_seq(a.i, a.j, a.nmax)?;
            let failures = check_skew_sequence(&seq)?;
            let comps: Vec<Value> = seq
                .components
                .values()
                .map(|c| json!({"n": c.n, "l": c.l, "poly": c.poly.to_string()}))
                .collect();
            outcome(failures.is_empty(), json!({"components": comps, "failures": failures}))
        }
        Command::CharCheck(a) => {
            if a.melzer == a.fermionic {
                return Err(CliError::Usage("pass exactly one of --melzer and --fermionic".into()));
            }
            if a.melzer {
                if a.j > 1 {
                    return Err(CliError::Usage("--j must be 0 or 1".into()));
                }
                let lhs = melzer_rhs(a.j, a.vmax, melzer_n_max(a.j, a.vmax))?;
                let rhs = bosonic_level_minus_one(a.j, a.vmax, bosonic_m_max(a.j, a.vmax))?;
                let cmp = compare_char(&lhs, &rhs, Some(a.zmax));
                let col: Vec<String> = lhs.z_column(0).iter().map(|c| c.to_string()).collect();
                outcome(
                    cmp.equal && lhs.is_nonnegative_integral(),
                    json!({"comparison": cmp, "z0_column": col}),
                )
            } else {
                let spec = SpaceSpec::new(SpaceKind::Wgeq0, a.n);
                let table = graded_dimension(
                    &spec,
                    &Window {
                        vmin: 0,
                        vmax: a.vmax as i32,
                    },
                )?;
                let lin = BiSeries::from_graded_table(&table, a.vmax);
                let cmp = compare_char(&fermionic_w(a.n as u32, a.vmax), &lin, None);
                outcome(cmp.equal, json!({"comparison": cmp, "graded": table_rows(&table)}))
            }
        }
        Command::GradedDim(a) => {
            let mut spec = SpaceSpec::new(a.space.into(), a.n);
            spec.l = a.l;
            let t = graded_dimension(&spec, &Window { vmin: 0, vmax: a.vmax })?;
            outcome(true, json!({"table": table_rows(&t)}))
        }
        Command::SpanDim(a) => {
            let gens = match a.gens {
                GensArg::ESide => GeneratorSet::ESide,
                GensArg::Full => GeneratorSet::Full,
            };
            let t = span_graded_dim(a.n, gens, a.vmax, &ActionTable::standard())?;
            outcome(true, json!({"table": table_rows(&t)}))
        }
        Command::FockBraid(a) => {
            let r = braid_check(a.display, a.m)?;
            outcome(r.pass, r)
        }
        Command::FockDrinfeld(a) => {
            let level = Level::from_value(a.level)?;
            let rel = match a.relation {
                RelationArg::Dr3 => DrinfeldRelation::Dr3,
                RelationArg::Dr4 => DrinfeldRelation::Dr4,
                RelationArg::Dr6 => DrinfeldRelation::Dr6,
            };
            let states = sample_kets(level, a.max_degree);
            match drinfeld_check(rel, &states, &ModeWindow::symmetric(a.window)) {
                Ok(r) => outcome(r.pass, r),
                Err(Error::RelationViolated { relation, witness }) => {
                    outcome(false, json!({"relation": relation, "witness": witness}))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::FockXvm(a) => {
            let r = xvm_check(a.i, a.m, a.nmax, a.truncation)?;
            outcome(r.pass, r)
        }
        Command::CrystalPaths(a) => {
            let data = LevelData {
                xi0: a.xi0,
                xi1: a.xi1,
                eta1: a.eta1,
                n: a.n,
                m: a.m,
            };
            let bound = match a.lower_bound {
                BoundArg::Negated => LowerBound::Negated,
                BoundArg::AsPrinted => LowerBound::AsPrinted,
            };
            let rule = match a.rule {
                RuleArg::LeftFirst => TensorRule::LeftFirst,
                RuleArg::RightFirst => TensorRule::RightFirst,
            };
            let paths = enumerate_paths(&data)?;
            let restricted = level_restrict(&paths, &data, bound);
            let window = (a.m - 2, a.m + 2);
            let set = qsl2_core::crystal::path_set(a.n, window)?;
            let closure = closure_check(&set, window, rule);
            let weights: Vec<Value> = paths
                .iter()
                .map(|p| {
                    let (w, d) = path_weight(p);
                    json!({"entries": p.entries, "weight": w, "degree": d})
                })
                .collect();
            let restricted: BTreeSet<_> = restricted.into_iter().map(|p| p.entries).collect();
            outcome(
                closure.closed,
                json!({"paths": weights, "restricted": restricted, "lower_bound": bound, "rule": rule, "closure": {"checked": closure.checked, "closed": closure.closed, "escapees": closure.escapees.len()}}),
            )
        }
        Command::RelationsCheck(a) => match verify_defining_relations(a.n, &ActionTable::standard(), a.spread) {
            Ok(r) => outcome(true, r),
            Err(Error::RelationViolated { relation, witness }) => {
                outcome(false, json!({"relation": relation, "witness": witness}))
            }
            Err(e) => Err(e.into()),
        },
    }
}
