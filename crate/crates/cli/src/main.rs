use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use weid::cm::{self, CmOptions, CmVerdict, Method};
use weid::criteria::{self, CriterionReport};
use weid::decompose;
use weid::graph::{self, WeightedGraph};
use weid::harness::{self, Conjecture, Family, OracleChoice, SweepSpec};
use weid::{Error, FieldConfig, MonomialIdeal};

#[derive(Parser)]
#[command(name = "weid", version, about = "Cohen-Macaulay tests for powers of weighted edge ideals")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether I^n is Cohen-Macaulay.
    CheckCm(CheckCmArgs),
    /// Irredundant primary decomposition of I^n.
    Decompose(IdealArgs),
    /// The n-th symbolic power of I.
    Symbolic {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        n: u32,
    },
    /// Evaluate one of the combinatorial criteria on a weighted graph.
    Criteria(CriteriaArgs),
    /// Compare oracle verdicts with the criteria over a generated family.
    Sweep(SweepArgs),
    /// Search a generated family for counterexamples to an open statement.
    Search {
        #[arg(long, value_parser = parse_conjecture)]
        conjecture: Conjecture,
        #[command(flatten)]
        sweep: SweepArgs,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct InputArgs {
    /// JSON file with "variables" and "generators".
    #[arg(long)]
    ideal: Option<PathBuf>,
    /// JSON file with "vertices" and weighted "edges".
    #[arg(long)]
    graph: Option<PathBuf>,
}

#[derive(Args)]
struct IdealArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 1)]
    power: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Reisner,
    Depth,
    Both,
}

#[derive(Args)]
struct BudgetArgs {
    /// q or fp:<prime>.
    #[arg(long, default_value = "q", value_parser = parse_field)]
    field: FieldConfig,
    #[arg(long, default_value_t = cm::DEFAULT_FACE_BUDGET)]
    budget_faces: u64,
    #[arg(long, default_value_t = cm::DEFAULT_MONOMIAL_BUDGET)]
    budget_monomials: u64,
}

#[derive(Args)]
struct CheckCmArgs {
    #[command(flatten)]
    ideal: IdealArgs,
    #[arg(long, value_enum, default_value_t = MethodArg::Both)]
    method: MethodArg,
    #[command(flatten)]
    budgets: BudgetArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Theorem {
    Square,
    Tk,
    Pn,
    Path3,
    Star,
    Complete,
    TreeNecessary,
}

#[derive(Args)]
struct CriteriaArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum)]
    theorem: Theorem,
    /// The power for tk and pn.
    #[arg(long)]
    ell: Option<u32>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_parser = parse_family)]
    family: Family,
    #[arg(long, default_value_t = 2)]
    min_t: usize,
    #[arg(long, default_value_t = 3)]
    max_t: usize,
    #[arg(long, default_value_t = 5)]
    max_weight: u32,
    #[arg(long, default_value_t = 3)]
    max_power: u32,
    /// Number of random trees for the tree family.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = OracleArg::Both)]
    oracle: OracleArg,
    #[command(flatten)]
    budgets: BudgetArgs,
    /// Face budget of the Reisner cross-check.
    #[arg(long)]
    budget_reisner: Option<u64>,
    #[arg(long)]
    no_metamorphic: bool,
    /// Record per-run wall-clock times (makes reports non-reproducible).
    #[arg(long)]
    timings: bool,
    /// Write the full JSON report here and print only the summary.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleArg {
    Depth,
    Both,
}

fn parse_field(s: &str) -> Result<FieldConfig, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_conjecture(s: &str) -> Result<Conjecture, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_graph(path: &Path) -> anyhow::Result<WeightedGraph> {
    Ok(WeightedGraph::from_json_str(&read(path)?)?)
}

fn load_ideal(input: &InputArgs) -> anyhow::Result<MonomialIdeal> {
    match (&input.ideal, &input.graph) {
        (Some(p), None) => Ok(MonomialIdeal::from_json_str(&read(p)?)?),
        (None, Some(p)) => Ok(load_graph(p)?.edge_ideal()?),
        _ => bail!("exactly one of --ideal and --graph is required"),
    }
}

struct Output {
    value: Value,
    table: String,
    code: u8,
}

fn main() -> ExitCode {
    // Exit code 2 is reserved for discrepancies, so usage errors exit with 1.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(out) => {
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&out.value).unwrap() + "\n",
                Format::Table => out.table,
            };
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let budget = e.downcast_ref::<Error>().is_some_and(|e| matches!(e, Error::Budget(_)));
            ExitCode::from(if budget { 3 } else { 1 })
        }
    }
}

fn run(command: Command) -> anyhow::Result<Output> {
    match command {
        Command::CheckCm(args) => check_cm(args),
        Command::Decompose(args) => decompose_cmd(args),
        Command::Symbolic { input, n } => symbolic(input, n),
        Command::Criteria(args) => criteria_cmd(args),
        Command::Sweep(args) => sweep_cmd(args),
        Command::Search { conjecture, sweep } => search_cmd(conjecture, sweep),
    }
}

fn options(b: &BudgetArgs) -> CmOptions {
    CmOptions {
        field: b.field,
        face_budget: b.budget_faces,
        monomial_budget: b.budget_monomials,
        ..CmOptions::default()
    }
}

struct Timed {
    result: weid::Result<CmVerdict>,
    millis: f64,
}

fn timed(ideal: &MonomialIdeal, method: Method, opts: &CmOptions) -> Timed {
    let start = Instant::now();
    let result = cm::check_cm(ideal, method, opts);
    Timed { result, millis: start.elapsed().as_secs_f64() * 1e3 }
}

fn run_json(ideal: &MonomialIdeal, t: &Timed) -> Value {
    match &t.result {
        Ok(v) => {
            let mut j = v.to_json(ideal.ring());
            j["elapsed_ms"] = json!(t.millis);
            j
        }
        Err(e) => json!({ "error": e.to_string(), "elapsed_ms": t.millis }),
    }
}

fn check_cm(args: CheckCmArgs) -> anyhow::Result<Output> {
    let ideal = load_ideal(&args.ideal.input)?.power(args.ideal.power)?;
    let opts = options(&args.budgets);
    let unmixed = decompose::is_unmixed(&ideal)?;
    let methods: &[Method] = match args.method {
        MethodArg::Depth => &[Method::Depth],
        MethodArg::Reisner => &[Method::Reisner],
        MethodArg::Both => &[Method::Depth, Method::Reisner],
    };
    let runs: Vec<(Method, Timed)> = methods.iter().map(|&m| (m, timed(&ideal, m, &opts))).collect();
    let verdicts: Vec<bool> = runs.iter().filter_map(|(_, t)| t.result.as_ref().ok().map(|v| v.is_cm)).collect();
    let Some((method, first)) = runs.iter().find(|(_, t)| t.result.is_ok()) else {
        let (_, t) = &runs[0];
        let err = t.result.as_ref().unwrap_err();
        if matches!(err, Error::Budget(_)) {
            let value = json!({
                "is_cm": null,
                "unmixed": unmixed,
                "error": err.to_string(),
                "runs": runs.iter().map(|(_, t)| run_json(&ideal, t)).collect::<Vec<_>>(),
            });
            let table = format!("is_cm    unknown\nunmixed  {unmixed}\nerror    {err}\n");
            return Ok(Output { value, table, code: 3 });
        }
        bail!("{err}");
    };
    let v = first.result.as_ref().unwrap();
    let agree = verdicts.windows(2).all(|w| w[0] == w[1]);
    let mut value = run_json(&ideal, first);
    value["unmixed"] = json!(unmixed);
    value["power"] = json!(args.ideal.power);
    value["field"] = json!(opts.field.to_string());
    if runs.len() > 1 {
        value["agree"] = json!(agree);
        value["runs"] = runs.iter().map(|(_, t)| run_json(&ideal, t)).collect();
    }
    let mut table = String::new();
    writeln!(table, "is_cm    {}", v.is_cm)?;
    writeln!(table, "unmixed  {unmixed}")?;
    writeln!(table, "depth    {}", v.depth.map_or("-".into(), |d| d.to_string()))?;
    writeln!(table, "dim      {}", v.dim)?;
    writeln!(table, "method   {method}")?;
    if let Some(w) = &v.witness {
        writeln!(table, "witness  {}", w.display(ideal.ring()))?;
    }
    if let Some(f) = &v.failure {
        writeln!(table, "reason   {f}")?;
    }
    for (m, t) in &runs {
        let status = match &t.result {
            Ok(v) => format!("is_cm={}", v.is_cm),
            Err(e) => e.to_string(),
        };
        writeln!(table, "run      {m}: {status} ({:.1} ms)", t.millis)?;
    }
    if !agree {
        writeln!(table, "ORACLES DISAGREE")?;
    }
    Ok(Output { value, table, code: if agree { 0 } else { 2 } })
}

fn decompose_cmd(args: IdealArgs) -> anyhow::Result<Output> {
    let ideal = load_ideal(&args.input)?.power(args.power)?;
    let d = decompose::primary_decomposition(&ideal)?;
    let unmixed = decompose::is_unmixed(&ideal)?;
    let height = decompose::height(&ideal)?;
    let ring = ideal.ring();
    let mut table = String::new();
    for c in d.components() {
        let prime = ring.names_of(c.prime).join(",");
        writeln!(table, "({prime})  {}", c.ideal)?;
    }
    writeln!(table, "unmixed {unmixed}, height {height}")?;
    let value = json!({ "components": d.to_json(ring), "unmixed": unmixed, "height": height });
    Ok(Output { value, table, code: 0 })
}

fn symbolic(input: InputArgs, n: u32) -> anyhow::Result<Output> {
    let ideal = load_ideal(&input)?;
    let s = decompose::symbolic_power(&ideal, n)?;
    let equals_power = s == ideal.power(n)?;
    let table = format!("{s}\nequals ordinary power: {equals_power}\n");
    let value = json!({
        "n": n,
        "variables": ideal.ring().names(),
        "generators": s.to_json().generators,
        "equals_power": equals_power,
    });
    Ok(Output { value, table, code: 0 })
}

fn criteria_cmd(args: CriteriaArgs) -> anyhow::Result<Output> {
    let g = load_graph(&args.graph)?;
    let labeling = || {
        graph::find_vwc_labeling(&g).context("graph is not very well-covered with a perfect labeling")
    };
    let matching = || graph::pendant_matching(&g).context("graph has no perfect matching by pendant edges");
    let ell = || args.ell.context("--ell is required for this theorem");
    let report: CriterionReport = match args.theorem {
        Theorem::Square => criteria::square_cm_criterion(&g, &labeling()?)?,
        Theorem::Tk => criteria::power_ell_criterion(&g, &labeling()?, ell()?)?,
        Theorem::Pn => criteria::pn_criterion(&g, &matching()?, ell()?)?,
        Theorem::Path3 => criteria::path3_all_n(&g)?,
        Theorem::Star => criteria::star_all_n(&g, &matching()?)?,
        Theorem::Complete => criteria::complete_core_all_n(&g, &matching()?)?,
        Theorem::TreeNecessary => criteria::tree_necessary(&g, &matching()?)?,
    };
    let mut table = format!("{}: {}\n", report.theorem, if report.holds { "holds" } else { "fails" });
    for v in &report.violations {
        writeln!(
            table,
            "  violated ({}) on {}: required {}, actual {}",
            v.condition,
            v.edges.join(" "),
            v.required,
            v.actual
        )?;
    }
    for n in &report.notes {
        writeln!(table, "  note: {n}")?;
    }
    Ok(Output { value: serde_json::to_value(&report)?, table, code: 0 })
}

fn sweep_spec(a: &SweepArgs) -> anyhow::Result<SweepSpec> {
    let mut s = SweepSpec::new(a.family);
    s.params.min_t = a.min_t;
    s.params.max_t = a.max_t;
    s.params.max_weight = a.max_weight;
    s.params.samples = a.samples;
    s.params.seed = a.seed;
    s.max_power = a.max_power;
    s.oracle = match a.oracle {
        OracleArg::Depth => OracleChoice::Depth,
        OracleArg::Both => OracleChoice::Both,
    };
    s.field = a.budgets.field;
    s.face_budget = a.budgets.budget_faces;
    s.monomial_budget = a.budgets.budget_monomials;
    if let Some(b) = a.budget_reisner {
        s.reisner_budget = b;
    }
    s.metamorphic = !a.no_metamorphic;
    s.timings = a.timings;
    s.validate()?;
    Ok(s)
}

/// Writes the full report to `out` if given; returns what goes to stdout.
fn emit(full: Value, summary: Value, out: Option<&Path>) -> anyhow::Result<Value> {
    match out {
        Some(path) => {
            let text = serde_json::to_string_pretty(&full)? + "\n";
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            Ok(json!({ "report": path.display().to_string(), "summary": summary }))
        }
        None => Ok(full),
    }
}

fn sweep_cmd(args: SweepArgs) -> anyhow::Result<Output> {
    let spec = sweep_spec(&args)?;
    let report = harness::sweep(&spec)?;
    let s = &report.summary;
    let mut table = String::new();
    writeln!(table, "family           {}", spec.family)?;
    writeln!(table, "instances        {}", s.instances)?;
    writeln!(table, "powers checked   {} ({} CM, {} not CM)", s.powers_checked, s.cm, s.not_cm)?;
    writeln!(table, "reisner agreed   {}", s.reisner_confirmed)?;
    writeln!(table, "metamorphic      {}", s.metamorphic_checks)?;
    writeln!(table, "budget skips     {}", s.budget_skips)?;
    writeln!(table, "discrepancies    {}", s.discrepancies)?;
    for (name, t) in &s.criteria {
        writeln!(table, "  {name:<28} holds {:>6}  fails {:>6}", t.holds, t.fails)?;
    }
    for d in &report.discrepancies {
        writeln!(table, "  instance {} {} n={:?}: {}", d.instance, d.kind, d.n, d.detail)?;
    }
    let code = report.exit_code() as u8;
    let value = emit(serde_json::to_value(&report)?, serde_json::to_value(s)?, args.out.as_deref())?;
    Ok(Output { value, table, code })
}

fn search_cmd(which: Conjecture, args: SweepArgs) -> anyhow::Result<Output> {
    let spec = sweep_spec(&args)?;
    let report = harness::search_conjecture(which, &spec)?;
    let mut table = String::new();
    writeln!(table, "conjecture    {which}")?;
    writeln!(table, "examined      {}", report.examined)?;
    writeln!(table, "skipped       {}", report.skipped)?;
    writeln!(table, "budget skips  {}", report.budget_skips)?;
    writeln!(table, "hits          {}", report.hits.len())?;
    writeln!(table, "unverified    {}", report.unverified.len())?;
    for h in report.hits.iter().chain(&report.unverified) {
        writeln!(table, "  instance {} n={}: {}", h.instance, h.n, h.detail)?;
    }
    let summary = json!({
        "conjecture": which,
        "examined": report.examined,
        "skipped": report.skipped,
        "hits": report.hits.len(),
        "unverified": report.unverified.len(),
        "budget_skips": report.budget_skips,
    });
    let code = report.exit_code() as u8;
    let value = emit(serde_json::to_value(&report)?, summary, args.out.as_deref())?;
    Ok(Output { value, table, code })
}
