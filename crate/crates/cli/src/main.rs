use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use rkbench::distribution::{
    build_blueprint, check_blueprint, decompose_tc, Mode, realize_corollary, validate_f, Corollary, TheoryClass, Variant,
};
use rkbench::limitcount::{count_classes, IdentitySystem, PlateauReading, Word};
use rkbench::operators::{replay_checked, verify_all, verify_schemes, OpTag, Pipeline, StructSpec};
use rkbench::preorder::{check_premodel, PremodelProfile};
use rkbench::report::escape;
use rkbench::typespace::{classify_formula, enumerate_types, has_prime_model, has_prime_model_exhaustive, FormulaLit, TypeSpace};
use rkbench::{classify_triple, decompose, Cardinal, Cm3Triple, DistributionSpec, DominationGraph, Preorder, Report};

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {message}")]
    Input { path: String, message: String },
    #[error("{0}")]
    Usage(String),
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser)]
#[command(name = "rkbench", version, about = "Domination structures, limit-model counting and distribution triples")]
struct Cli {
    /// Emit line-oriented key=value records.
    #[arg(long, global = true)]
    machine: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closure, quotient, height and width of a finite preorder, or a premodel profile check.
    Preorder(PreorderArgs),
    /// Enumerate a type space, classify formulas, decide prime-model existence.
    Types(TypesArgs),
    /// Prime types, isomorphism classes and the domination quotient of a registry.
    Dominate(DominateArgs),
    /// Replay an operator pipeline and verify every intermediate structure.
    Apply(ApplyArgs),
    /// Count word classes of a limit-model identity system.
    Limits(LimitsArgs),
    /// Classify a distribution triple.
    Classify(ClassifyArgs),
    /// Validate a distribution spec and emit its blueprint pipeline.
    Build(BuildArgs),
    /// Sum the decomposition `|RK| + Σ IL + NPL`.
    Decompose(DecomposeArgs),
}

#[derive(Args)]
struct PreorderArgs {
    /// Preorder file (`elements: k` and `i <= j` lines).
    #[arg(long = "in", required_unless_present = "premodel", conflicts_with = "premodel")]
    input: Option<PathBuf>,
    /// Premodel profile file.
    #[arg(long)]
    premodel: Option<PathBuf>,
    #[arg(long)]
    quotient: bool,
    #[arg(long)]
    height: bool,
    #[arg(long)]
    width: bool,
    #[arg(long)]
    directed: bool,
    #[arg(long)]
    components: bool,
    /// Print the quotient's Hasse diagram in DOT.
    #[arg(long)]
    dot: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Iup,
    Sdup,
    Colored,
}

#[derive(Args)]
struct TypesArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Number of parts for the colored family.
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long)]
    depth: usize,
    /// List every cell.
    #[arg(long)]
    list: bool,
    /// Classify a literal conjunction such as `P0 & !P1`.
    #[arg(long)]
    formula: Vec<String>,
    /// Decide prime-model existence by density and by exhaustive formula search.
    #[arg(long)]
    prime: bool,
}

#[derive(Args)]
struct DominateArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Test strong equivalence of two types.
    #[arg(long, num_args = 2, value_names = ["P", "Q"])]
    strong: Option<Vec<String>>,
    #[arg(long)]
    dot: bool,
}

#[derive(Args)]
struct ApplyArgs {
    /// Operator pipeline file.
    #[arg(long = "in", required_unless_present = "structure", conflicts_with = "structure")]
    input: Option<PathBuf>,
    /// Verify a saved structure instead of replaying a pipeline.
    #[arg(long)]
    structure: Option<PathBuf>,
    /// Restrict verification of a saved structure to one operator.
    #[arg(long, requires = "structure")]
    op: Option<OpTag>,
    /// Print the final structure in its text format.
    #[arg(long)]
    dump: bool,
    /// Print the final type registry.
    #[arg(long)]
    registry: bool,
    /// Print the registry's domination quotient in DOT.
    #[arg(long)]
    dot: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum SystemArg {
    Lmt,
    Lms,
    Free,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReadingArg {
    Strict,
    Target,
}

#[derive(Args)]
struct LimitsArgs {
    #[arg(long, value_enum)]
    system: SystemArg,
    /// Target number of limit models: a positive integer or `w`.
    #[arg(long, required_if_eq_any = [("system", "lmt"), ("system", "lms")])]
    n: Option<Cardinal>,
    #[arg(long)]
    alphabet: u32,
    #[arg(long)]
    len: usize,
    #[arg(long, value_enum, default_value_t = ReadingArg::Strict)]
    reading: ReadingArg,
    /// Extra equation `0,1=1`; may be repeated.
    #[arg(long)]
    equation: Vec<String>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long, conflicts_with = "tc")]
    small: bool,
    #[arg(long)]
    tc: bool,
    /// `p,l,npl` with tokens digits, `w`, `w1`, `c`.
    #[arg(long)]
    triple: Cm3Triple,
    /// Classify without the continuum hypothesis.
    #[arg(long)]
    no_ch: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum WitnessArg {
    FinitePrime,
    CountablePrime,
    ContinualPrime,
}

#[derive(Args)]
struct BuildArgs {
    /// Distribution spec file.
    #[arg(long = "in", required_unless_present = "witness", conflicts_with = "witness")]
    input: Option<PathBuf>,
    /// Generate the spec from a witness pattern instead.
    #[arg(long, value_enum, requires = "params")]
    witness: Option<WitnessArg>,
    /// Comma-separated cardinals for the witness pattern.
    #[arg(long)]
    params: Option<String>,
    /// One of finite, sequence, p-first, npl-first; defaults from the spec's mode and partition.
    #[arg(long)]
    variant: Option<Variant>,
    /// Write the blueprint pipeline here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Replay the blueprint and compare the registry with the spec.
    #[arg(long)]
    check: bool,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long)]
    rk: Cardinal,
    /// Comma-separated IL values.
    #[arg(long, default_value = "")]
    il: String,
    #[arg(long, default_value = "0")]
    npl: Cardinal,
    /// Also check that the sum is the continuum.
    #[arg(long)]
    tc: bool,
}

/// Accumulates the human and machine renderings side by side.
#[derive(Default)]
struct Output {
    human: String,
    machine: String,
}

impl Output {
    fn kv(&mut self, key: &str, value: impl ToString) {
        let v = value.to_string();
        let _ = writeln!(self.human, "{key}: {v}");
        let _ = writeln!(self.machine, "{key}={}", escape(&v));
    }

    fn report(&mut self, r: &Report) {
        self.human.push_str(&r.render_human());
        self.machine.push_str(&r.render_machine());
    }

    fn text(&mut self, s: &str) {
        self.human.push_str(s);
    }

    fn render(self, machine: bool) -> String {
        if machine {
            self.machine
        } else {
            self.human
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn input_err(path: &Path, e: impl ToString) -> CliError {
    CliError::Input { path: path.display().to_string(), message: e.to_string() }
}

fn arg_err(flag: &str, e: impl ToString) -> CliError {
    CliError::Input { path: format!("--{flag}"), message: e.to_string() }
}

fn joined<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn preorder(a: PreorderArgs, machine: bool) -> Result<String> {
    let mut out = Output::default();
    if let Some(path) = &a.premodel {
        let profile = PremodelProfile::parse(&read(path)?).map_err(|e| input_err(path, e))?;
        out.report(&check_premodel(&profile));
        return Ok(out.render(machine));
    }
    let path = a.input.as_ref().expect("clap requires --in");
    let raw = Preorder::parse(&read(path)?).map_err(|e| input_err(path, e))?;
    let p = raw.close();
    let q = p.sim_quotient().expect("closed");
    if a.dot {
        return Ok(q.to_dot(None));
    }
    let all = !(a.quotient || a.height || a.width || a.directed || a.components);
    out.kv("elements", p.len());
    out.kv("closed_input", raw.is_closed());
    if all || a.quotient {
        out.kv("classes", q.len());
        for (i, class) in q.classes.iter().enumerate() {
            out.kv(&format!("class.{i}"), joined(class));
        }
        for (i, j) in q.covers() {
            out.kv("cover", format!("{i}<{j}"));
        }
    }
    if all || a.height {
        out.kv("height", q.height());
    }
    if all || a.width {
        out.kv("width", q.width().map_err(|e| input_err(path, e))?);
    }
    if all || a.directed {
        out.kv("directed", p.is_upward_directed().expect("closed"));
    }
    if all || a.components {
        for (i, c) in p.components().iter().enumerate() {
            out.kv(&format!("component.{i}"), joined(c));
        }
    }
    Ok(out.render(machine))
}

fn types(a: TypesArgs, machine: bool) -> Result<String> {
    let family = match a.family {
        FamilyArg::Iup => rkbench::typespace::Family::Iup,
        FamilyArg::Sdup => rkbench::typespace::Family::Sdup,
        FamilyArg::Colored => rkbench::typespace::Family::Colored { m: a.m },
    };
    let ts = TypeSpace::new(family, a.depth).map_err(|e| arg_err("depth", e))?;
    let cells = enumerate_types(&ts).map_err(|e| arg_err("depth", e))?;
    let mut out = Output::default();
    out.kv("family", family);
    out.kv("depth", a.depth);
    out.kv("cells", cells.len());
    out.kv("principal_cells", cells.iter().filter(|c| c.principal).count());
    if a.list {
        for c in &cells {
            out.kv("cell", format!("{}{}", c.id, if c.principal { " principal" } else { "" }));
        }
    }
    for f in &a.formula {
        let phi: FormulaLit = f.parse().map_err(|e| arg_err("formula", e))?;
        let class = classify_formula(&ts, &phi).map_err(|e| arg_err("formula", e))?;
        out.kv("formula", format!("{f} => {class}"));
    }
    if a.prime {
        let density = has_prime_model(&ts).map_err(|e| arg_err("depth", e))?;
        out.kv("prime_model", density);
        match has_prime_model_exhaustive(&ts) {
            Ok(v) => {
                out.kv("prime_model_exhaustive", v);
                out.kv("routes_agree", v == density);
            }
            Err(e) => out.kv("prime_model_exhaustive", format!("skipped ({e})")),
        }
    }
    Ok(out.render(machine))
}

fn dominate(a: DominateArgs, machine: bool) -> Result<String> {
    let path = &a.input;
    let g = DominationGraph::parse(&read(path)?).map_err(|e| input_err(path, e))?;
    let rk = g.rk_structure();
    let labels: Vec<String> = rk.iso_classes.iter().map(|c| c.join("=")).collect();
    if a.dot {
        return Ok(rk.quotient.to_dot(Some(&labels)));
    }
    let mut out = Output::default();
    out.kv("types", g.nodes().len());
    out.kv("prime_types", rk.iso_classes.iter().map(Vec::len).sum::<usize>());
    out.kv("isomorphism_types", rk.iso_classes.len());
    for (i, l) in labels.iter().enumerate() {
        out.kv(&format!("iso.{i}"), l);
    }
    out.kv("rk_classes", rk.quotient.len());
    for (i, class) in rk.quotient.classes.iter().enumerate() {
        out.kv(&format!("rk_class.{i}"), joined(class.iter().map(|&k| &labels[k])));
    }
    for (i, j) in rk.quotient.covers() {
        out.kv("cover", format!("{i}<{j}"));
    }
    out.kv("height", rk.quotient.height());
    if let Some(pair) = &a.strong {
        let v = g.strong_equiv(&pair[0], &pair[1]).map_err(|e| arg_err("strong", e))?;
        out.kv("strong_equiv", format!("{} {} {v}", pair[0], pair[1]));
    }
    Ok(out.render(machine))
}

fn apply(a: ApplyArgs, machine: bool) -> Result<String> {
    let mut out = Output::default();
    let spec = if let Some(path) = &a.structure {
        let spec = StructSpec::parse(&read(path)?).map_err(|e| input_err(path, e))?;
        let r = match a.op {
            Some(tag) => verify_schemes(&spec, tag),
            None => verify_all(&spec),
        };
        out.report(&r);
        spec
    } else {
        let path = a.input.as_ref().expect("clap requires --in");
        let pipeline = Pipeline::parse(&read(path)?).map_err(|e| input_err(path, e))?;
        let (replayed, r) = replay_checked(&pipeline).map_err(|e| input_err(path, e))?;
        out.report(&r);
        for (key, sys) in &replayed.systems {
            out.kv("identity_system", format!("{key} {} target={}", sys.name, sys.target));
        }
        replayed.spec
    };
    let g = &spec.registry.graph;
    if a.dot {
        let rk = g.rk_structure();
        let labels: Vec<String> = rk.iso_classes.iter().map(|c| c.join("=")).collect();
        return Ok(rk.quotient.to_dot(Some(&labels)));
    }
    if a.structure.is_some() {
        out.kv("universe", spec.len());
    }
    for (k, v) in &spec.registry.il {
        out.kv("il", format!("{k} {v}"));
    }
    if a.registry {
        out.text(&g.to_text());
        for line in g.to_text().lines() {
            let _ = writeln!(out.machine, "registry={}", escape(line));
        }
    }
    if a.dump {
        out.text(&spec.to_text());
        for line in spec.to_text().lines() {
            let _ = writeln!(out.machine, "structure={}", escape(line));
        }
    }
    Ok(out.render(machine))
}

fn parse_word(flag: &str, s: &str) -> Result<Word> {
    s.split(',')
        .map(|t| t.trim().parse::<u32>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(Word)
        .map_err(|_| arg_err(flag, format!("`{s}` is not a comma-separated word")))
}

fn limits(a: LimitsArgs, machine: bool) -> Result<String> {
    let reading = match a.reading {
        ReadingArg::Strict => PlateauReading::StrictBound,
        ReadingArg::Target => PlateauReading::TargetOnly,
    };
    let n = a.n.unwrap_or(Cardinal::Continuum);
    let mut sys = match a.system {
        SystemArg::Lmt => IdentitySystem::limit_over_type(n),
        SystemArg::Lms => IdentitySystem::limit_over_sequence(n, reading),
        SystemArg::Free => Ok(IdentitySystem::empty()),
    }
    .map_err(|e| arg_err("n", e))?;
    for eq in &a.equation {
        let (l, r) = eq
            .split_once('=')
            .ok_or_else(|| arg_err("equation", format!("`{eq}` lacks `=` (expected `0,1=1`)")))?;
        sys = sys.with_equation(parse_word("equation", l)?, parse_word("equation", r)?);
    }
    let at = count_classes(&sys, a.alphabet, a.len).map_err(|e| arg_err("len", e))?;
    let next = count_classes(&sys, a.alphabet, a.len + 1).map_err(|e| arg_err("len", e))?;
    let mut out = Output::default();
    out.kv("system", &sys.name);
    if let Some(r) = sys.plateau_reading() {
        out.kv("reading", r);
    }
    out.kv("target", sys.target);
    out.kv("alphabet", a.alphabet);
    let _ = writeln!(out.human, "{:>4}  {:>8}  representatives", "L", "classes");
    for (len, c) in [(a.len, &at), (a.len + 1, &next)] {
        let reps: Vec<String> = c.representatives.iter().take(20).map(|w| w.to_string()).collect();
        let more = if c.representatives.len() > 20 { " ..." } else { "" };
        let _ = writeln!(out.human, "{len:>4}  {:>8}  {}{more}", c.count, reps.join(" "));
        let _ = writeln!(out.machine, "len={len} classes={} representatives={}", c.count, reps.join(","));
    }
    out.kv("classes", at.count);
    out.kv("stable", at.count == next.count);
    Ok(out.render(machine))
}

fn classify(a: ClassifyArgs, machine: bool) -> Result<String> {
    if !a.small && !a.tc {
        return Err(CliError::Usage("choose --small or --tc".into()));
    }
    let class = if a.small { TheoryClass::Small } else { TheoryClass::Tc };
    let ch = !a.no_ch;
    let c = classify_triple(a.triple, class, ch);
    let mut out = Output::default();
    out.kv("triple", a.triple);
    out.kv("class", class);
    out.kv("ch", ch);
    out.kv("verdict", c.verdict);
    if !c.families.is_empty() {
        out.kv("families", joined(&c.families));
    }
    if c.outside_ch {
        out.kv("outside_ch", true);
    }
    if c.unrealized {
        out.kv("unrealized", true);
    }
    Ok(out.render(machine))
}

fn parse_cardinals(flag: &str, s: &str) -> Result<Vec<Cardinal>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<Cardinal>().map_err(|e| arg_err(flag, e)))
        .collect()
}

fn build(a: BuildArgs, machine: bool) -> Result<String> {
    let (spec, origin) = match (&a.input, a.witness) {
        (Some(path), _) => {
            let spec = DistributionSpec::parse(&read(path)?).map_err(|e| input_err(path, e))?;
            (spec, path.display().to_string())
        }
        (None, Some(w)) => {
            let kind = match w {
                WitnessArg::FinitePrime => Corollary::FinitePrime,
                WitnessArg::CountablePrime => Corollary::CountablePrime,
                WitnessArg::ContinualPrime => Corollary::ContinualPrime,
            };
            let params = parse_cardinals("params", a.params.as_deref().unwrap_or_default())?;
            let spec = realize_corollary(kind, &params).map_err(|e| arg_err("params", e))?;
            (spec, "--witness".to_string())
        }
        (None, None) => unreachable!("clap requires --in or --witness"),
    };
    let mut out = Output::default();
    if a.witness.is_some() {
        out.text(&spec.to_text());
        for line in spec.to_text().lines() {
            let _ = writeln!(out.machine, "spec={}", escape(line));
        }
    }
    if let Some(t) = spec.target {
        out.kv("target", t);
        out.kv("target_verdict", classify_triple(t, TheoryClass::Tc, true).verdict);
    }
    let validation = validate_f(&spec).map_err(|e| CliError::Input { path: origin.clone(), message: e.to_string() })?;
    out.report(&validation);
    if !validation.all_passed() {
        out.kv("blueprint", "not built");
        return Ok(out.render(machine));
    }
    let variant = a.variant.unwrap_or(match (spec.mode, &spec.partition) {
        (Mode::Finite, _) => Variant::Finite,
        (Mode::Sequence, None) => Variant::Sequence,
        (Mode::Sequence, Some(_)) => Variant::PartitionFirst,
    });
    let bp = build_blueprint(&spec, variant).map_err(|e| CliError::Input { path: origin.clone(), message: e.to_string() })?;
    let text = bp.to_text();
    match &a.out {
        Some(path) => {
            fs::write(path, &text).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
            out.kv("blueprint", path.display());
        }
        None => {
            out.text(&text);
            for line in text.lines() {
                let _ = writeln!(out.machine, "pipeline={}", escape(line));
            }
        }
    }
    out.kv("steps", bp.pipeline.steps.len());
    if a.check {
        let r = check_blueprint(&spec, &bp).map_err(|e| CliError::Input { path: origin, message: e.to_string() })?;
        out.report(&r);
    }
    Ok(out.render(machine))
}

fn decompose_cmd(a: DecomposeArgs, machine: bool) -> Result<String> {
    let il = parse_cardinals("il", &a.il)?;
    let mut out = Output::default();
    out.kv("rk", a.rk);
    out.kv("il", if il.is_empty() { "-".to_string() } else { joined(&il) });
    out.kv("npl", a.npl);
    out.kv("total", decompose(a.rk, &il, a.npl));
    if a.tc {
        let (_, ok) = decompose_tc(a.rk, &il, a.npl);
        out.kv("continuum", ok);
    }
    Ok(out.render(machine))
}

fn run(cli: Cli) -> Result<String> {
    let m = cli.machine;
    match cli.command {
        Command::Preorder(a) => preorder(a, m),
        Command::Types(a) => types(a, m),
        Command::Dominate(a) => dominate(a, m),
        Command::Apply(a) => apply(a, m),
        Command::Limits(a) => limits(a, m),
        Command::Classify(a) => classify(a, m),
        Command::Build(a) => build(a, m),
        Command::Decompose(a) => decompose_cmd(a, m),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
