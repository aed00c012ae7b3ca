use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sumkit_core::classes::{characterize_with, reduction_roundtrip, table_recipe, resolve_table, Composite, SpaceRef};
use sumkit_core::duals::{alpha_dual_check, beta_dual_check, gamma_dual_check, pairing_identity_check};
use sumkit_core::operators::{
    apply_triangle, basis_column, basis_cross_check, invert_triangle_oracle, DomainName, WeightPair,
};
use sumkit_core::spaces::{ak_tail_norm, domain_norm, membership_evidence, DomainSpace};
use sumkit_core::{ConditionVerdict, Exact, Scalar, TruncationSchedule};

use crate::error::{usage, CliError};
use crate::literal::SeqSpec;
use crate::matrix::{Classical, Faults, MatrixSpec};
use crate::report::{scalar, scalars, CommandEcho, CsvSink, Outcome, ReportDocument, SCHEMA};

#[derive(Debug, Parser)]
#[command(name = "sumkit", version, about = "Weighted-mean sequence spaces: transforms, norms, duals and matrix classes")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Arithmetic: exact rationals or f64. Defaults depend on the subcommand.
    #[arg(long, global = true, value_enum)]
    mode: Option<Mode>,

    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Write verdict traces (and leading matrix blocks) as CSV files into this directory.
    #[arg(long, global = true)]
    csv_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Dual {
    Alpha,
    Beta,
    Gamma,
}

#[derive(Debug, Args)]
struct SpaceArgs {
    /// int-bv or d-bv
    #[arg(long)]
    space: String,
    #[command(flatten)]
    weights: WeightArgs,
}

#[derive(Debug, Args)]
struct WeightArgs {
    #[arg(long, default_value = "ones")]
    u: String,
    #[arg(long, default_value = "ones")]
    w: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// y = Tx for the triangle of the space.
    Transform {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        x: String,
        #[arg(long)]
        n: usize,
    },
    /// x with Tx = y, by the closed form, checked against back-substitution.
    Inverse {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        y: String,
        #[arg(long)]
        n: usize,
    },
    /// Partial norm of x and evidence that Tx is in l1.
    Norm {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        x: String,
        /// Truncation for the partial norm; defaults to the largest schedule size.
        #[arg(long)]
        n: Option<usize>,
        /// Also report the norm of x with its first m coordinates zeroed (d-bv only).
        #[arg(long)]
        cut: Option<usize>,
    },
    /// The k-th basis column and its image under the triangle.
    Basis {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    /// Membership of a in the alpha, beta or gamma dual.
    DualCheck {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        a: String,
        #[arg(long, value_enum, default_value = "beta")]
        dual: Dual,
    },
    /// Run the condition battery for A in (source : target).
    ClassCheck {
        /// Table 1-6; inferred from source and target when omitted.
        #[arg(long)]
        table: Option<u8>,
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        matrix: String,
        /// Entry rule outside a CSV block: rule:<expr> or lower:<expr>.
        #[arg(long)]
        tail: Option<String>,
        /// Classical matrix multiplied onto A from the left before the battery runs.
        #[arg(long)]
        compose: Option<String>,
        /// Column cut for a composite with infinite rows.
        #[arg(long)]
        row_bound: Option<usize>,
        #[command(flatten)]
        weights: WeightArgs,
    },
    /// sum_{k<=m} a_k x_k against (Hy)_m for m = 1..n.
    PairingCheck {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        a: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        n: usize,
    },
    /// (Ax)_m against (By)_m for A = B·T and m = 1..n.
    ReductionCheck {
        #[command(flatten)]
        space: SpaceArgs,
        /// B, with finite rows.
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        tail: Option<String>,
        #[arg(long)]
        y: String,
        #[arg(long)]
        n: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Transform { .. } => "transform",
            Command::Inverse { .. } => "inverse",
            Command::Norm { .. } => "norm",
            Command::Basis { .. } => "basis",
            Command::DualCheck { .. } => "dual-check",
            Command::ClassCheck { .. } => "class-check",
            Command::PairingCheck { .. } => "pairing-check",
            Command::ReductionCheck { .. } => "reduction-check",
        }
    }

    fn default_mode(&self) -> Mode {
        match self {
            Command::Norm { .. } | Command::DualCheck { .. } | Command::ClassCheck { .. } => Mode::Float,
            _ => Mode::Exact,
        }
    }
}

/// Everything a subcommand records besides its outcome.
#[derive(Default)]
struct Ctx {
    inputs: BTreeMap<String, Value>,
    outputs: BTreeMap<String, Value>,
    provenance: Vec<String>,
    warnings: Vec<String>,
    csv: CsvSink,
    csv_wanted: bool,
}

impl Ctx {
    fn input(&mut self, key: &str, v: impl Into<Value>) {
        self.inputs.insert(key.into(), v.into());
    }

    fn output(&mut self, key: &str, v: impl Into<Value>) {
        self.outputs.insert(key.into(), v.into());
    }

    fn cite(&mut self, what: &str) {
        self.provenance.push(what.into());
    }

    fn verdict(&mut self, key: &str, v: &ConditionVerdict) -> Outcome {
        self.output(key, serde_json::to_value(v).expect("verdicts serialize"));
        self.csv.verdict(key, v);
        v.status.into()
    }
}

fn domain(s: &str) -> Result<DomainName, CliError> {
    DomainName::parse(s).ok_or_else(|| usage(format!("unknown space {s:?}; expected int-bv or d-bv")))
}

fn space_ref(s: &str) -> Result<SpaceRef, CliError> {
    SpaceRef::parse(s).ok_or_else(|| usage(format!("unknown space {s:?}")))
}

fn weights<T: Scalar>(ctx: &mut Ctx, w: &WeightArgs) -> Result<WeightPair<T>, CliError> {
    let u = SeqSpec::parse_weight(&w.u)?;
    let v = SeqSpec::parse_weight(&w.w)?;
    ctx.input("u", u.canonical());
    ctx.input("w", v.canonical());
    Ok(WeightPair::new(u.sequence(), v.sequence()))
}

fn space<T: Scalar>(ctx: &mut Ctx, s: &SpaceArgs) -> Result<(DomainName, WeightPair<T>), CliError> {
    let d = domain(&s.space)?;
    ctx.input("space", d.name());
    Ok((d, weights(ctx, &s.weights)?))
}

fn seq<T: Scalar>(ctx: &mut Ctx, key: &str, s: &str) -> Result<sumkit_core::LazySequence<T>, CliError> {
    let spec = SeqSpec::parse(s)?;
    ctx.input(key, spec.canonical());
    Ok(spec.sequence())
}

fn triangle_anchor(space: DomainName) -> &'static str {
    match space {
        DomainName::IntBv => "Γ = weighted-mean triangle with column factor k; ∫bv(u,w) is its domain in l1",
        DomainName::DBv => "Σ = weighted-mean triangle with column factor 1/k; d(bv(u,w)) is its domain in l1",
    }
}

/// Identity check: exact equality, or relative agreement to 1e-9 in float mode.
fn agree<T: Scalar>(a: &T, b: &T) -> bool {
    if T::EXACT {
        a == b
    } else {
        let (a, b) = (a.to_f64(), b.to_f64());
        (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
    }
}

const H_FULL_FORM: &str =
    "H is used in full lower-triangular form: every column k <= n carries the diagonal-type term and the tail sum";

fn execute<T: Scalar>(cmd: &Command, ctx: &mut Ctx, sched: &TruncationSchedule) -> Result<Outcome, CliError> {
    match cmd {
        Command::Transform { space: s, x, n } => {
            let (sp, wp) = space::<T>(ctx, s)?;
            let x = seq::<T>(ctx, "x", x)?;
            ctx.input("n", *n);
            let y = apply_triangle(&sp.triangle(&wp), &x)?.try_take(*n)?;
            ctx.output("y", scalars(&y));
            ctx.cite(triangle_anchor(sp));
            Ok(Outcome::Success)
        }
        Command::Inverse { space: s, y, n } => {
            let (sp, wp) = space::<T>(ctx, s)?;
            let y = seq::<T>(ctx, "y", y)?;
            ctx.input("n", *n);
            wp.ensure(*n + 1)?;
            let x = sp.inverse(&wp, &y).try_take(*n)?;
            let oracle = invert_triangle_oracle(&sp.triangle(&wp), &y)?.try_take(*n)?;
            let agrees = x.iter().zip(&oracle).all(|(a, b)| agree(a, b));
            ctx.output("x", scalars(&x));
            ctx.output("oracle_agrees", agrees);
            ctx.cite(triangle_anchor(sp));
            ctx.cite("closed-form inverse: x_k from y_k and the weighted differences of y_1..y_{k-1}");
            ctx.cite("back-substitution oracle on the leading block");
            Ok(if agrees { Outcome::Success } else { Outcome::Mismatch })
        }
        Command::Norm { space: s, x, n, cut } => {
            let (sp, wp) = space::<T>(ctx, s)?;
            let x = seq::<T>(ctx, "x", x)?;
            let n = n.unwrap_or(sched.max());
            ctx.input("n", n);
            let ds = DomainSpace::new(sp, wp);
            ctx.output("norm", scalar(&domain_norm(&ds, &x, n)?));
            if let Some(m) = cut {
                ctx.input("cut", *m);
                ctx.output("tail_norm", scalar(&ak_tail_norm(&ds, &x, *m, n)?));
                ctx.cite("AK: the norm of x minus its m-th section tends to zero in d(bv(u,w))");
            }
            ctx.cite(triangle_anchor(sp));
            ctx.cite("norm ||x|| = sum_n |(Tx)_n|");
            let v = membership_evidence(&ds, &x, sched)?;
            Ok(ctx.verdict("membership", &v))
        }
        Command::Basis { space: s, k, n } => {
            let (sp, wp) = space::<T>(ctx, s)?;
            ctx.input("k", *k);
            ctx.input("n", *n);
            wp.ensure(*n + 1)?;
            let col = basis_column(sp, &wp, *k)?;
            let image = apply_triangle(&sp.triangle(&wp), &col)?.try_take(*n)?;
            let unit = image
                .iter()
                .enumerate()
                .all(|(i, v)| agree(v, &if i + 1 == *k { T::one() } else { T::zero() }));
            ctx.output("column", scalars(&col.try_take(*n)?));
            ctx.output("image_is_unit", unit);
            let cc = basis_cross_check(sp, &wp, *k, *n)?;
            if let Some(i) = cc.printed_mismatch {
                ctx.warnings.push(format!(
                    "the commonly typeset entry formula for this basis column disagrees with the back-substituted column at index {i}; the corrected closed form is used"
                ));
            }
            ctx.output("cross_check", serde_json::to_value(&cc).expect("serializable"));
            ctx.cite(triangle_anchor(sp));
            ctx.cite("Schauder basis: the preimages of the unit vectors e_k");
            Ok(if unit && cc.closed_form_mismatch.is_none() { Outcome::Success } else { Outcome::Mismatch })
        }
        Command::DualCheck { space: s, a, dual } => {
            let (sp, wp) = space::<T>(ctx, s)?;
            let a = seq::<T>(ctx, "a", a)?;
            let name = match dual {
                Dual::Alpha => "alpha",
                Dual::Beta => "beta",
                Dual::Gamma => "gamma",
            };
            ctx.input("dual", name);
            let v = match dual {
                Dual::Alpha => {
                    ctx.cite("α-dual: sup over finite column sets of the row sums of |E| (int-bv) or |F| (d-bv) is finite");
                    alpha_dual_check(sp, &a, &wp, sched)?
                }
                Dual::Beta => {
                    ctx.cite("β-dual: sup_n sum_k |h_nk| is finite and a is a convergent series");
                    ctx.warnings.push(H_FULL_FORM.into());
                    beta_dual_check(sp, &a, &wp, sched)?
                }
                Dual::Gamma => {
                    ctx.cite("γ-dual: sup_n sum_k |h_nk| is finite");
                    ctx.warnings.push(H_FULL_FORM.into());
                    gamma_dual_check(sp, &a, &wp, sched)?
                }
            };
            ctx.cite(triangle_anchor(sp));
            Ok(ctx.verdict(name, &v))
        }
        Command::ClassCheck { table, source, target, matrix, tail, compose, row_bound, weights: w } => {
            let (src, tgt) = (space_ref(source)?, space_ref(target)?);
            ctx.input("source", src.name());
            ctx.input("target", tgt.name());
            let table = match table {
                Some(t) => *t,
                None => resolve_table(src, tgt).ok_or_else(|| usage(format!("no table covers ({src} : {tgt})")))?,
            };
            ctx.input("table", table);
            let recipe = table_recipe(table, src, tgt)?;
            let wp = weights::<T>(ctx, w)?;
            let spec = MatrixSpec::parse(matrix, tail.as_deref())?;
            ctx.input("matrix", spec.canonical());
            let faults = Faults::default();
            let a = spec.build::<T>(&faults)?;
            let composite = match compose {
                Some(c) => {
                    let c = Classical::parse(c)?;
                    ctx.input("compose", c.to_string());
                    if let Some(b) = row_bound {
                        ctx.input("row_bound", *b);
                    }
                    Some(Composite { kind: c.kind::<T>(), row_bound: *row_bound })
                }
                None if row_bound.is_some() => return Err(usage("--row-bound needs --compose")),
                None => None,
            };
            let report = characterize_with(&a, src, tgt, Some(table), composite.as_ref(), &wp, sched)?;
            faults.check()?;
            if matches!(src, SpaceRef::Domain(_)) {
                ctx.warnings.push(format!(
                    "the row transform {} sums over k <= n as typeset; entries of A right of the diagonal do not enter",
                    recipe.transform
                ));
            }
            ctx.cite(&format!("table {table}, entry {}: ({src} : {tgt})", recipe.label));
            if let SpaceRef::Domain(d) = src {
                ctx.cite("A in (domain : Y) iff every row is in the β-dual and the row-transformed matrix is in (l1 : Y)");
                ctx.cite(triangle_anchor(d));
            }
            if let SpaceRef::Domain(d) = tgt {
                ctx.cite("A in (X : domain) iff T·A is in (X : l1)");
                ctx.cite(triangle_anchor(d));
            }
            for c in &report.conditions {
                ctx.csv.verdict(&c.label, &c.verdict);
            }
            if let Some(p) = &report.prerequisite {
                ctx.csv.verdict("prerequisite", p);
            }
            if ctx.csv_wanted {
                let k = sched.first();
                ctx.csv.matrix("matrix", &a.block(k, k)?);
                faults.check()?;
            }
            let overall = report.overall;
            ctx.output("report", serde_json::to_value(&report).expect("serializable"));
            ctx.output("overall", overall.as_str());
            Ok(overall.into())
        }
        Command::PairingCheck { space: s, a, y, n } => {
            let (sp, wp) = space::<T>(ctx, s)?;
            let a = seq::<T>(ctx, "a", a)?;
            let y = seq::<T>(ctx, "y", y)?;
            ctx.input("n", *n);
            let mut first_mismatch = None;
            let mut last = None;
            for m in 1..=*n {
                let (l, r) = pairing_identity_check(&a, &y, &wp, sp, m)?;
                if first_mismatch.is_none() && !agree(&l, &r) {
                    first_mismatch = Some(m);
                }
                last = Some((l, r));
            }
            if let Some((l, r)) = last {
                ctx.output("lhs", scalar(&l));
                ctx.output("rhs", scalar(&r));
            }
            ctx.output("first_mismatch", json!(first_mismatch));
            ctx.warnings.push(H_FULL_FORM.into());
            ctx.cite(triangle_anchor(sp));
            ctx.cite("pairing: sum_{k<=n} a_k x_k = (Hy)_n for x the preimage of y");
            Ok(if first_mismatch.is_none() { Outcome::Success } else { Outcome::Mismatch })
        }
        Command::ReductionCheck { space: s, matrix, tail, y, n } => {
            let (sp, wp) = space::<T>(ctx, s)?;
            let spec = MatrixSpec::parse(matrix, tail.as_deref())?;
            ctx.input("matrix", spec.canonical());
            let y = seq::<T>(ctx, "y", y)?;
            ctx.input("n", *n);
            let faults = Faults::default();
            let b = spec.build::<T>(&faults)?;
            let mut first_mismatch = None;
            let mut last = None;
            for m in 1..=*n {
                let (ax, by) = reduction_roundtrip(sp, &b, &wp, &y, m)?;
                if first_mismatch.is_none() && !agree(&ax, &by) {
                    first_mismatch = Some(m);
                }
                last = Some((ax, by));
            }
            faults.check()?;
            if let Some((ax, by)) = last {
                ctx.output("ax", scalar(&ax));
                ctx.output("by", scalar(&by));
            }
            ctx.output("first_mismatch", json!(first_mismatch));
            ctx.cite(triangle_anchor(sp));
            ctx.cite("reduction: Ax = By with A = B·T and y = Tx");
            Ok(if first_mismatch.is_none() { Outcome::Success } else { Outcome::Mismatch })
        }
    }
}

/// A finished invocation: the report, if one was produced, and the exit code.
#[derive(Debug)]
pub struct Invocation {
    pub exit_code: i32,
    pub report: Option<ReportDocument>,
    /// What goes to stdout (the JSON, or help text).
    pub stdout: String,
    pub stderr: String,
}

fn failure(code: i32, msg: String) -> Invocation {
    Invocation { exit_code: code, report: None, stdout: String::new(), stderr: msg }
}

/// Parses `argv` (program name first), runs the subcommand and renders the
/// report. Writes to `--out` and `--csv-dir` when given; never prints.
pub fn invoke<I, S>(argv: I) -> Invocation
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Invocation { exit_code: 0, report: None, stdout: text, stderr: String::new() }
                }
                _ => failure(1, text),
            };
        }
    };
    match run_cli(&cli, &argv) {
        Ok(inv) => inv,
        Err(e) => failure(1, format!("error: {e}\n")),
    }
}

fn run_cli(cli: &Cli, argv: &[OsString]) -> Result<Invocation, CliError> {
    let sched = TruncationSchedule::from_env()?;
    let mode = cli.mode.unwrap_or(cli.command.default_mode());
    let mut ctx = Ctx { csv_wanted: cli.csv_dir.is_some(), ..Ctx::default() };
    ctx.input("mode", if mode == Mode::Exact { "exact" } else { "float" });
    ctx.input("schedule", sched.render());
    let outcome = match mode {
        Mode::Exact => execute::<Exact>(&cli.command, &mut ctx, &sched)?,
        Mode::Float => execute::<f64>(&cli.command, &mut ctx, &sched)?,
    };
    let args = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let doc = ReportDocument {
        schema: SCHEMA,
        command: CommandEcho { name: cli.command.name().into(), args },
        inputs: ctx.inputs,
        outputs: ctx.outputs,
        status: outcome,
        exit_code: outcome.exit_code(),
        provenance: ctx.provenance,
        warnings: ctx.warnings,
    };
    let json = doc.to_json();
    if let Some(dir) = &cli.csv_dir {
        ctx.csv.write(dir)?;
    }
    let stdout = match &cli.out {
        Some(path) => {
            std::fs::write(path, &json).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
            String::new()
        }
        None => json,
    };
    Ok(Invocation { exit_code: doc.exit_code, report: Some(doc), stdout, stderr: String::new() })
}
