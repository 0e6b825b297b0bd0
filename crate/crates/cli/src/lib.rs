//! The `hedonica` command line.
//!
//! Every subcommand prints `key: value` lines on standard output. Exit codes:
//! 0 when a property holds or a solution exists, 1 when a property fails or
//! nothing exists, 2 on usage and parse errors, 3 when a size limit or search
//! budget runs out.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hedonica::gadgets::{self, GadgetInstance};
use hedonica::io::{self as hio, Report};
use hedonica::{
    Error, Game, Limits, Objective, Partition, Property, PropertyReport, Verdict, Witness,
    DEFAULT_PLAYER_LIMIT,
};

/// Environment variable overriding the enumeration limit.
pub const LIMIT_VAR: &str = "HEDONICA_LIMIT";

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "hedonica", version, about = "Solve and verify additively separable hedonic games")]
struct Cli {
    /// Stable output: no role labels, no timings.
    #[arg(long, global = true)]
    machine: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run stability and optimality checkers on a partition.
    Check(CheckArgs),
    /// Compute a partition for an objective.
    Solve(SolveArgs),
    /// Search for a partition with a pair of properties.
    Exists(ExistsArgs),
    /// Write a reduction gadget game built from a source instance.
    Gadget(GadgetArgs),
    /// Enumerate all partitions of a game.
    Enum(EnumArgs),
}

#[derive(Args, Debug)]
struct PartitionInput {
    /// Partition written inline, e.g. '{1,2}|{3}'.
    #[arg(long)]
    partition: Option<String>,
    /// File holding a partition.
    #[arg(long)]
    partition_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long)]
    game: PathBuf,
    #[command(flatten)]
    partition: PartitionInput,
    /// Comma-separated subset of ir,ns,is,ef,po.
    #[arg(long, value_delimiter = ',', required = true, value_parser = parse_property)]
    props: Vec<Property>,
    /// Maximum partitions the Pareto check may examine.
    #[arg(long)]
    po_budget: Option<u64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SolveObjective {
    Utilitarian,
    Egalitarian,
    Elitist,
    SerialDictatorship,
    NashLocal,
    PoIr,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DictatorOrder {
    Index,
    MinF,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    game: PathBuf,
    #[arg(long, value_enum)]
    objective: SolveObjective,
    #[arg(long, value_enum, default_value = "index")]
    dictator_order: DictatorOrder,
    /// Starting partition for nash-local, written inline.
    #[arg(long)]
    seed_partition: Option<String>,
    /// File holding the starting partition for nash-local.
    #[arg(long)]
    seed_partition_file: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PropertyPair {
    #[value(name = "ef+ns")]
    EfNs,
    #[value(name = "ef+po")]
    EfPo,
}

#[derive(Args, Debug)]
struct ExistsArgs {
    #[arg(long)]
    game: PathBuf,
    #[arg(long, value_enum)]
    props: PropertyPair,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GadgetKind {
    PoVerify,
    EfNs,
    Egal,
    PoIr,
    EfPo,
}

#[derive(Args, Debug)]
struct GadgetArgs {
    #[arg(value_enum)]
    kind: GadgetKind,
    /// Source instance file.
    #[arg(long)]
    source: PathBuf,
    /// Where to write the game.
    #[arg(long)]
    out: PathBuf,
    /// Where to write the distinguished partition (po-verify only).
    #[arg(long)]
    out_partition: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EnumReport {
    Summary,
    All,
}

#[derive(Args, Debug)]
struct EnumArgs {
    #[arg(long)]
    game: PathBuf,
    #[arg(long, value_enum, default_value = "summary")]
    report: EnumReport,
}

fn parse_property(s: &str) -> Result<Property, String> {
    s.trim().parse::<Property>().map_err(|e| e.to_string())
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Core(Error::Resource(_)) => EXIT_RESOURCE,
            _ => EXIT_USAGE,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Parses `args` (program name first), runs the command and returns the exit
/// code. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    let started = Instant::now();
    let human = !cli.machine;
    let result = limits_from_env().and_then(|limits| match &cli.command {
        Command::Check(a) => cmd_check(a, limits, human),
        Command::Solve(a) => cmd_solve(a, limits, human),
        Command::Exists(a) => cmd_exists(a, limits, human),
        Command::Gadget(a) => cmd_gadget(a, human),
        Command::Enum(a) => cmd_enum(a, limits),
    });
    match result {
        Ok((mut report, code)) => {
            if human {
                report.push("elapsed", format!("{:.3}s", started.elapsed().as_secs_f64()));
            }
            let _ = write!(out, "{}", report.render());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "hedonica: {}", e.message());
            e.code()
        }
    }
}

fn limits_from_env() -> CliResult<Limits> {
    match std::env::var(LIMIT_VAR) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(Limits::new)
            .map_err(|_| CliError::Usage(format!("{} must be a player count, got `{}`", LIMIT_VAR, v))),
        Err(_) => Ok(Limits::new(DEFAULT_PLAYER_LIMIT)),
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {}", path.display(), e)))
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::Usage(format!("cannot write {}: {}", path.display(), e)))
}

fn load_game(path: &Path) -> CliResult<Game> {
    hio::parse_game(&read(path)?).map_err(|e| CliError::Usage(format!("{}: {}", path.display(), e)))
}

fn load_partition(inline: Option<&str>, file: Option<&Path>, n: usize) -> CliResult<Option<Partition>> {
    let text = match (inline, file) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "give the partition inline or as a file, not both".into(),
            ))
        }
        (Some(t), None) => t.to_string(),
        (None, Some(f)) => read(f)?,
        (None, None) => return Ok(None),
    };
    hio::parse_partition(&text, n).map(Some).map_err(CliError::from)
}

/// Renders players and partitions, adding role labels in human mode.
struct View<'a> {
    game: &'a Game,
    human: bool,
}

impl View<'_> {
    fn role(&self, i: usize) -> Option<&str> {
        if !self.human {
            return None;
        }
        self.game.label(i).filter(|l| *l != i.to_string())
    }

    fn player(&self, i: usize) -> String {
        match self.role(i) {
            Some(r) => format!("{} [{}]", i, r),
            None => i.to_string(),
        }
    }

    fn push_partition(&self, report: &mut Report, key: &str, p: &Partition) {
        report.push(key, p);
        if (1..=self.game.n()).any(|i| self.role(i).is_some()) {
            let blocks: Vec<String> = p
                .blocks()
                .iter()
                .map(|b| {
                    let names: Vec<&str> = b
                        .members()
                        .iter()
                        .map(|&i| self.game.label(i).unwrap_or(""))
                        .collect();
                    format!("{{{}}}", names.join(","))
                })
                .collect();
            report.push(&format!("{}-roles", key), blocks.join("|"));
        }
    }

    fn push_property(&self, report: &mut Report, r: &PropertyReport) {
        report.push("property", r.property.code());
        report.push("verdict", r.verdict);
        match &r.witness {
            None => {}
            Some(Witness::Player(i)) => {
                report.push("witness", format!("player {}", self.player(*i)));
            }
            Some(Witness::Deviation { player, target }) => {
                report.push("witness", format!("player {} -> {}", self.player(*player), target));
            }
            Some(Witness::Envy { envious, envied }) => {
                report.push(
                    "witness",
                    format!("player {} envies {}", self.player(*envious), self.player(*envied)),
                );
            }
            Some(Witness::Dominated { by, improved }) => {
                self.push_partition(report, "witness", by);
                report.push("improved", self.player(*improved));
            }
        }
        if let Some(w) = r.work {
            report.push("work", w);
        }
    }
}

fn cmd_check(a: &CheckArgs, limits: Limits, human: bool) -> CliResult<(Report, i32)> {
    let g = load_game(&a.game)?;
    let p = load_partition(
        a.partition.partition.as_deref(),
        a.partition.partition_file.as_deref(),
        g.n(),
    )?
    .unwrap_or_else(|| Partition::singletons(g.n()));
    let view = View { game: &g, human };
    let mut report = Report::new();
    view.push_partition(&mut report, "partition", &p);
    let mut verdicts = Vec::new();
    for &prop in &a.props {
        let r = hedonica::check(&g, &p, prop, a.po_budget, limits)?;
        view.push_property(&mut report, &r);
        verdicts.push(r.verdict);
    }
    let code = if verdicts.contains(&Verdict::Fails) {
        EXIT_NEGATIVE
    } else if verdicts.contains(&Verdict::Unknown) {
        EXIT_RESOURCE
    } else {
        EXIT_OK
    };
    Ok((report, code))
}

fn cmd_solve(a: &SolveArgs, limits: Limits, human: bool) -> CliResult<(Report, i32)> {
    let g = load_game(&a.game)?;
    let view = View { game: &g, human };
    let mut report = Report::new();
    let name = a.objective.to_possible_value().expect("named variant");
    report.push("objective", name.get_name());
    let (p, value, nodes) = match a.objective {
        SolveObjective::Utilitarian => {
            let (p, v, s) = hedonica::max_utilitarian(&g, limits)?;
            (p, v, Some(s.nodes_expanded))
        }
        SolveObjective::Egalitarian => {
            let (p, v, s) = hedonica::max_egalitarian(&g, limits)?;
            (p, v, Some(s.nodes_expanded))
        }
        SolveObjective::Elitist => {
            let (p, v) = hedonica::max_elitist(&g);
            (p, v, None)
        }
        SolveObjective::SerialDictatorship => {
            let policy = match a.dictator_order {
                DictatorOrder::Index => hedonica::DictatorPolicy::LowestIndex,
                DictatorOrder::MinF => hedonica::DictatorPolicy::MinPositiveSum,
            };
            let p = hedonica::serial_dictatorship(&g, policy)?;
            let v = g.welfare(&p)?.utilitarian;
            (p, v, None)
        }
        SolveObjective::NashLocal => {
            let seed = load_partition(
                a.seed_partition.as_deref(),
                a.seed_partition_file.as_deref(),
                g.n(),
            )?
            .unwrap_or_else(|| Partition::singletons(g.n()));
            let (p, s) = hedonica::nash_local_search(&g, &seed)?;
            let v = g.welfare(&p)?.utilitarian;
            (p, v, Some(s.nodes_expanded))
        }
        SolveObjective::PoIr => {
            let (p, s) = hedonica::pareto_ir_improve(&g, limits)?;
            let v = g.welfare(&p)?.utilitarian;
            (p, v, Some(s.nodes_expanded))
        }
    };
    report.push("value", value);
    view.push_partition(&mut report, "partition", &p);
    if let Some(n) = nodes {
        report.push("nodes", n);
    }
    Ok((report, EXIT_OK))
}

fn cmd_exists(a: &ExistsArgs, limits: Limits, human: bool) -> CliResult<(Report, i32)> {
    let g = load_game(&a.game)?;
    let view = View { game: &g, human };
    let (name, found) = match a.props {
        PropertyPair::EfNs => ("ef+ns", hedonica::exists_ef_ns(&g, limits)?),
        PropertyPair::EfPo => ("ef+po", hedonica::exists_ef_po(&g, limits)?),
    };
    let mut report = Report::new();
    report.push("property", name);
    match found {
        Some(p) => {
            report.push("verdict", "holds");
            view.push_partition(&mut report, "partition", &p);
            Ok((report, EXIT_OK))
        }
        None => {
            report.push("verdict", "none");
            Ok((report, EXIT_NEGATIVE))
        }
    }
}

fn build_gadget(kind: GadgetKind, text: &str) -> hedonica::Result<GadgetInstance> {
    match kind {
        GadgetKind::PoVerify => gadgets::gadget_po_verify(&hio::parse_e3c(text)?),
        GadgetKind::EfNs => gadgets::gadget_ef_ns(&hio::parse_e3c(text)?),
        GadgetKind::Egal => gadgets::gadget_egalitarian(&hio::parse_scheduling(text)?),
        GadgetKind::PoIr => gadgets::gadget_po_ir(&hio::parse_subset_sum(text)?),
        GadgetKind::EfPo => gadgets::gadget_ef_po(&hio::parse_allocation(text)?),
    }
}

fn cmd_gadget(a: &GadgetArgs, human: bool) -> CliResult<(Report, i32)> {
    let gadget = build_gadget(a.kind, &read(&a.source)?)
        .map_err(|e| CliError::Usage(format!("{}: {}", a.source.display(), e)))?;
    let view = View { game: &gadget.game, human };
    let mut report = Report::new();
    let name = a.kind.to_possible_value().expect("named variant");
    report.push("gadget", name.get_name());
    report.push("players", gadget.game.n());
    if gadget.distinguished_partition.is_none() && a.out_partition.is_some() {
        return Err(CliError::Usage(format!(
            "the {} gadget has no distinguished partition",
            name.get_name()
        )));
    }
    write_file(&a.out, &hio::serialize_game(&gadget.game))?;
    report.push("out", a.out.display());
    match (&gadget.distinguished_partition, &a.out_partition) {
        (Some(p), out) => {
            view.push_partition(&mut report, "partition", p);
            if let Some(path) = out {
                write_file(path, &format!("{}\n", hio::serialize_partition(p)))?;
                report.push("out-partition", path.display());
            }
        }
        (None, _) => {}
    }
    if human {
        for (i, role) in gadget.role_labels.iter().enumerate() {
            report.push("role", format!("{} {}", i + 1, role));
        }
    }
    for note in &gadget.notes {
        report.push("warning", note);
    }
    Ok((report, EXIT_OK))
}

fn cmd_enum(a: &EnumArgs, limits: Limits) -> CliResult<(Report, i32)> {
    let g = load_game(&a.game)?;
    let pareto = hedonica::oracle_pareto_set(&g, limits)?;
    let checks = [
        Property::IndividualRationality,
        Property::NashStable,
        Property::IndividuallyStable,
        Property::EnvyFree,
    ];
    let mut counts = [0u64; 4];
    let mut total = 0u64;
    let mut report = Report::new();
    report.push("players", g.n());
    for p in hedonica::enumerate_partitions(g.n(), limits)? {
        total += 1;
        let mut held = Vec::new();
        for (k, &prop) in checks.iter().enumerate() {
            if hedonica::check(&g, &p, prop, None, limits)?.holds() {
                counts[k] += 1;
                held.push(prop.code());
            }
        }
        if let EnumReport::All = a.report {
            if pareto.binary_search(&p).is_ok() {
                held.push(Property::ParetoOptimal.code());
            }
            let w = g.welfare(&p)?;
            let held = if held.is_empty() { "-".to_string() } else { held.join(",") };
            report.push(
                "partition",
                format!(
                    "{} utilitarian={} egalitarian={} elitist={} holds={}",
                    p, w.utilitarian, w.egalitarian, w.elitist, held
                ),
            );
        }
    }
    report.push("partitions", total);
    for (k, prop) in checks.iter().enumerate() {
        report.push(prop.code(), counts[k]);
    }
    report.push(Property::ParetoOptimal.code(), pareto.len());
    for (name, obj) in [
        ("utilitarian", Objective::Utilitarian),
        ("egalitarian", Objective::Egalitarian),
        ("elitist", Objective::Elitist),
    ] {
        let (p, v) = hedonica::oracle_optimal(&g, obj, limits)?;
        report.push(name, format!("{} at {}", v, p));
    }
    Ok((report, EXIT_OK))
}
