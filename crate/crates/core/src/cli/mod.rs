//! `dsconcat` command line: analyze, construct, certify, search, tables,
//! export. Reports are `key=value` lines on stdout; failures print
//! `error[<category>]: <message>` on stderr and exit with the category code.

mod report;

use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::bf::hexfmt::{read_table, write_table};
use crate::bf::{anf, profile, set_max_vars, TruthTable};
use crate::constructor::build::build;
use crate::constructor::certify::{certify, certify_bound, certify_exact, certify_exhaustive};
use crate::constructor::construct::{construct, ConstructOptions};
use crate::constructor::feasibility::{BaseMode, Variant};
use crate::constructor::planfile::{parse_plan, write_plan};
use crate::constructor::plan::PlanOptions;
use crate::constructor::tables::{reproduce_tables, OBSERVATION_SIZES};
use crate::error::{Error, Result};
use crate::families::{load_seed_functions, write_seeds, DeclaredProfile, Regime, SeedFunction};

/// Environment override for the truth-table capacity.
pub const CAPACITY_ENV: &str = "RBF_MAX_VARS";

/// Widest exhaustive search.
pub const SEARCH_MAX_VARS: u32 = 4;

#[derive(Parser, Debug)]
#[command(name = "dsconcat", version, about = "Resilient Boolean functions from disjoint-spectra concatenation")]
struct Cli {
    /// Print a version and timing line on stderr.
    #[arg(long, global = true)]
    stamp: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Profile a truth-table file.
    Analyze { input: PathBuf },
    /// Run one of the three constructions.
    Construct(ConstructArgs),
    /// Certify a plan file.
    Certify {
        plan: PathBuf,
        #[arg(long, value_enum, default_value_t = CertifyMode::Auto)]
        mode: CertifyMode,
    },
    /// Enumerate every function on at most 4 variables.
    Search(SearchArgs),
    /// Recompute the reference parameter tables.
    Tables(TablesArgs),
    /// Convert a plan or table file.
    Export {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ExportFormat::Hex)]
        format: ExportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args, Debug)]
struct ConstructArgs {
    variant: Variant,
    n: u32,
    m: u32,
    /// Seed-function file (construction 3); repeatable.
    #[arg(long)]
    seeds: Vec<PathBuf>,
    /// Use exactly these family widths, e.g. `1,2`.
    #[arg(long, value_delimiter = ',')]
    select: Option<Vec<u32>>,
    /// Write the plan and certificate only.
    #[arg(long)]
    plan_only: bool,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long)]
    plan_out: Option<PathBuf>,
    #[arg(long)]
    table_out: Option<PathBuf>,
    /// Base family: plain, disjoint (degree member, no overlap) or
    /// monomial (degree member on top of the full base).
    #[arg(long, alias = "c2-mode", value_enum, default_value_t = BaseChoice::Auto)]
    base: BaseChoice,
    /// Permute the block assignment with this seed.
    #[arg(long)]
    shuffle: Option<u64>,
    /// Allow n down to 8.
    #[arg(long)]
    relaxed: bool,
}

#[derive(clap::Args, Debug)]
struct SearchArgs {
    n: u32,
    #[arg(long)]
    balanced: bool,
    /// Minimum resiliency order.
    #[arg(long, allow_negative_numbers = true)]
    min_resiliency: Option<i32>,
    /// Exact nonlinearity.
    #[arg(long)]
    nonlinearity: Option<u64>,
    /// Exact algebraic degree.
    #[arg(long)]
    degree: Option<i32>,
    /// Matches to print and write.
    #[arg(long, default_value_t = 8)]
    limit: usize,
    /// Write matches as a seed file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Declared resiliency written to the seed file (defaults to measured).
    #[arg(long, allow_negative_numbers = true)]
    declare_m: Option<i32>,
}

#[derive(clap::Args, Debug)]
struct TablesArgs {
    /// Resiliency range, e.g. `1..4` or `5`.
    #[arg(long, default_value = "1..4")]
    m: String,
    /// Variable-count range.
    #[arg(long, default_value = "12..512")]
    n: String,
    /// Which table.
    #[arg(long, value_enum, default_value_t = WhichTable::All)]
    table: WhichTable,
    /// Sizes for the `m/n` observation, comma separated.
    #[arg(long, value_delimiter = ',')]
    observe: Option<Vec<u32>>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BaseChoice {
    Auto,
    Plain,
    Disjoint,
    Monomial,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CertifyMode {
    Auto,
    Exact,
    Bound,
    Exhaustive,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExportFormat {
    Hex,
    Anf,
    Report,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum WhichTable {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    All,
}

impl clap::ValueEnum for Variant {
    fn value_variants<'a>() -> &'a [Self] {
        &[Variant::C1, Variant::C2, Variant::C3]
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(match self {
            Variant::C1 => "c1",
            Variant::C2 => "c2",
            Variant::C3 => "c3",
        }))
    }
}

/// Parse `a..b`, `a..=b` or a single value.
fn parse_range(s: &str) -> Result<RangeInclusive<u32>> {
    let bad = || Error::InvalidArgument(format!("bad range {s:?} (expected a..b or a single value)"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (s, s),
    };
    let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, text).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn apply_capacity_env() -> Result<()> {
    if let Ok(v) = std::env::var(CAPACITY_ENV) {
        let n: u32 = v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("{CAPACITY_ENV}={v:?} is not a variable count")))?;
        set_max_vars(n)?;
    }
    Ok(())
}

fn analyze(input: &Path) -> Result<String> {
    let t = read_table(&read_text(input)?)?;
    Ok(report::profile_lines(&profile(&t)?))
}

fn run_construct(a: &ConstructArgs) -> Result<String> {
    let mut seeds: Vec<SeedFunction> = Vec::new();
    for path in &a.seeds {
        seeds.extend(load_seed_functions(path)?);
    }
    if !seeds.is_empty() && a.variant != Variant::C3 {
        return Err(Error::InvalidArgument("seed files are only used by c3".into()));
    }
    let mode = match a.base {
        BaseChoice::Auto => None,
        BaseChoice::Plain => Some(BaseMode::Plain),
        BaseChoice::Disjoint => Some(BaseMode::Disjoint),
        BaseChoice::Monomial => Some(BaseMode::Monomial),
    };
    let opts = ConstructOptions {
        plan: PlanOptions {
            regime: if a.relaxed { Regime::Relaxed } else { Regime::Standard },
            shuffle: a.shuffle,
            ..PlanOptions::default()
        },
        mode,
        select: a.select.clone(),
        plan_only: a.plan_only,
    };
    let c = construct(a.variant, a.n, a.m, &seeds, &opts)?;
    let stem = format!("{}-{}-{}", a.variant, a.n, a.m);
    let plan_path = a.plan_out.clone().unwrap_or_else(|| a.out_dir.join(format!("{stem}.plan")));
    write_text(&plan_path, &write_plan(&c.plan))?;
    let mut out = report::construction_lines(&c);
    out.push_str(&format!("plan_file={}\n", plan_path.display()));
    if let Some(t) = &c.table {
        let table_path = a.table_out.clone().unwrap_or_else(|| a.out_dir.join(format!("{stem}.tt")));
        write_text(&table_path, &write_table(t))?;
        out.push_str(&format!("table_file={}\n", table_path.display()));
    }
    Ok(out)
}

fn run_certify(path: &Path, mode: CertifyMode) -> Result<String> {
    let plan = parse_plan(&read_text(path)?)?;
    let cert = match mode {
        CertifyMode::Auto => certify(&plan)?,
        CertifyMode::Exact => certify_exact(&plan)?,
        CertifyMode::Bound => certify_bound(&plan),
        CertifyMode::Exhaustive => certify_exhaustive(&plan)?.1,
    };
    Ok(report::certificate_lines(&cert))
}

fn run_search(a: &SearchArgs) -> Result<String> {
    if a.n == 0 || a.n > SEARCH_MAX_VARS {
        return Err(Error::Capacity(format!(
            "exhaustive search covers 1..={SEARCH_MAX_VARS} variables, got {}",
            a.n
        )));
    }
    let size = 1u32 << a.n;
    let total = 1u64 << size;
    let mut found: Vec<(TruthTable, crate::bf::FunctionProfile)> = Vec::new();
    let mut count = 0u64;
    for bits in 0..total {
        let t = TruthTable::from_fn(a.n, |i| bits >> i & 1 == 1)?;
        let p = profile(&t)?;
        let keep = (!a.balanced || p.balanced)
            && a.min_resiliency.is_none_or(|m| p.resiliency >= m)
            && a.nonlinearity.is_none_or(|x| p.nonlinearity == x)
            && a.degree.is_none_or(|d| p.degree == d);
        if keep {
            count += 1;
            if found.len() < a.limit {
                found.push((t, p));
            }
        }
    }
    let mut out = format!("n={}\ncandidates={total}\nmatches={count}\n", a.n);
    for (t, p) in &found {
        out.push_str(&format!(
            "match hex={} m={} d={} N={}\n",
            crate::bf::hexfmt::to_hex(t),
            p.resiliency,
            p.degree,
            p.nonlinearity
        ));
    }
    if let Some(path) = &a.out {
        let mut seeds = Vec::with_capacity(found.len());
        for (i, (t, p)) in found.iter().enumerate() {
            let declared = DeclaredProfile {
                n: p.n,
                m: a.declare_m.unwrap_or(p.resiliency),
                d: Some(p.degree),
                nonlinearity: p.nonlinearity,
            };
            seeds.push(SeedFunction::verify(t.clone(), declared, i + 1)?);
        }
        write_text(path, &write_seeds(&seeds))?;
        out.push_str(&format!("seed_file={}\n", path.display()));
    }
    Ok(out)
}

fn run_tables(a: &TablesArgs) -> Result<String> {
    let ms = parse_range(&a.m)?;
    let ns = parse_range(&a.n)?;
    let observe = a.observe.clone().unwrap_or_else(|| OBSERVATION_SIZES.to_vec());
    let mut rep = reproduce_tables(ms, ns, &observe);
    match a.table {
        WhichTable::One => rep.rows.retain(|r| r.table == 1),
        WhichTable::Two => rep.rows.retain(|r| r.table == 2),
        WhichTable::All => {}
    }
    Ok(rep.to_text())
}

fn run_export(input: &Path, format: ExportFormat) -> Result<String> {
    let text = read_text(input)?;
    let is_plan = text.lines().next().is_some_and(|l| l.trim_end() == "plan v1");
    if is_plan {
        let plan = parse_plan(&text)?;
        return match format {
            ExportFormat::Report => Ok(report::certificate_lines(&certify(&plan)?)),
            ExportFormat::Hex => Ok(write_table(&build(&plan)?)),
            ExportFormat::Anf => anf_text(&build(&plan)?),
        };
    }
    let t = read_table(&text)?;
    match format {
        ExportFormat::Hex => Ok(write_table(&t)),
        ExportFormat::Anf => anf_text(&t),
        ExportFormat::Report => Ok(report::profile_lines(&profile(&t)?)),
    }
}

/// Largest table rendered as an ANF.
pub const ANF_MAX_VARS: u32 = 26;

fn anf_text(t: &TruthTable) -> Result<String> {
    if t.vars() > ANF_MAX_VARS {
        return Err(Error::Capacity(format!(
            "ANF export is limited to {ANF_MAX_VARS} variables, table has {}",
            t.vars()
        )));
    }
    Ok(format!("{}\n", anf(t)?.to_text()))
}

fn dispatch(cli: &Cli) -> Result<String> {
    apply_capacity_env()?;
    match &cli.command {
        Command::Analyze { input } => analyze(input),
        Command::Construct(a) => run_construct(a),
        Command::Certify { plan, mode } => run_certify(plan, *mode),
        Command::Search(a) => run_search(a),
        Command::Tables(a) => run_tables(a),
        Command::Export { input, format, out } => {
            let text = run_export(input, *format)?;
            match out {
                Some(path) => {
                    write_text(path, &text)?;
                    Ok(format!("out_file={}\n", path.display()))
                }
                None => Ok(text),
            }
        }
    }
}

fn verb(c: &Command) -> &'static str {
    match c {
        Command::Analyze { .. } => "analyze",
        Command::Construct(_) => "construct",
        Command::Certify { .. } => "certify",
        Command::Search(_) => "search",
        Command::Tables(_) => "tables",
        Command::Export { .. } => "export",
    }
}

/// Run with explicit arguments; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("error[argument]: {first}");
            return Error::InvalidArgument(String::new()).exit_code();
        }
    };
    let start = Instant::now();
    let result = dispatch(&cli);
    if cli.stamp {
        eprintln!(
            "stamp tool=dsconcat version={} verb={} elapsed_ms={}",
            env!("CARGO_PKG_VERSION"),
            verb(&cli.command),
            start.elapsed().as_millis()
        );
    }
    match result {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("error[{}]: {e}", e.category());
            e.exit_code()
        }
    }
}

pub fn main() -> i32 {
    run(std::env::args_os())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1..4").unwrap(), 1..=4);
        assert_eq!(parse_range("1..=4").unwrap(), 1..=4);
        assert_eq!(parse_range("5").unwrap(), 5..=5);
        assert!(parse_range("4..1").is_err());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn cli_shape() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
