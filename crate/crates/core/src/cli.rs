//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failed or nonexistence certified,
//! 2 usage error, 3 search budget exhausted.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::base::{generate, IntMagicSquare};
use crate::construct::{build, expected_constant};
use crate::error::{Error, Result};
use crate::io::{self, Format};
use crate::power::{Kind, PowerSquares};
use crate::search::{self, OutcomeKind, Order4};
use crate::selftest;
use crate::verify::{self, OrderingClass, Verdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "semimagic", version, about = "Semi-magic squares over dihedral groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct BaseArgs {
    /// Half the side of the square; the group is D_{2m²}.
    #[arg(long)]
    m: usize,
    /// Add this to every entry of the base square.
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    translate: i64,
    /// Base magic square file (`intsquare` format); generated when absent.
    #[arg(long)]
    base: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum OrderingArg {
    Linear,
    Circular,
    Semicircular,
    Any,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum SearchKind {
    Sms2,
    Rect,
    Sms4,
    Linear,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum GroupArg {
    Klein,
    Cyclic4,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the base square, its power squares E, O, T and their sums.
    Powers(BaseArgs),
    /// Build the glued square of side 2m.
    Gen {
        #[command(flatten)]
        base: BaseArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// Check a square or rectangle file.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum)]
        ordering: OrderingArg,
        /// Block side for semi-circular orderings; defaults to the file's.
        #[arg(long)]
        block_side: Option<usize>,
        /// Also check both diagonals.
        #[arg(long)]
        magic: bool,
        /// Print the full report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Constants reached by translating the base square.
    Spectrum {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        include_duals: bool,
        #[arg(long)]
        json: bool,
    },
    /// Run one of the search oracles and print its certificate.
    Search {
        #[arg(value_enum)]
        kind: SearchKind,
        /// Node budget (sms4, rect) or arrangements tried (linear).
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        rows: usize,
        #[arg(long, default_value_t = 4)]
        cols: usize,
        #[arg(long, default_value_t = 4)]
        k: u32,
        /// Group for sms2.
        #[arg(long, value_enum, default_value = "klein")]
        group: GroupArg,
        /// Square to rearrange (linear).
        #[arg(long)]
        input: Option<PathBuf>,
        /// Walk all row and column permutations instead of sampling (linear).
        #[arg(long)]
        exhaustive: bool,
        /// Require a rotation constant (sms4).
        #[arg(long)]
        rotation: bool,
    },
    /// Run the built-in check suite.
    Selftest,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_base(args: &BaseArgs) -> Result<IntMagicSquare> {
    let base = match &args.base {
        Some(p) => IntMagicSquare::from_text(&read(p)?)?,
        None => generate(args.m)?,
    };
    if base.side() != args.m {
        return Err(Error::InvalidBase(format!("base has side {}, expected {}", base.side(), args.m)));
    }
    Ok(base)
}

fn powers(args: &BaseArgs, out: &mut dyn Write) -> Result<i32> {
    let base = load_base(args)?.translate(args.translate);
    let ps = PowerSquares::build(&base);
    write!(out, "{}", base.to_text())?;
    for kind in [Kind::E, Kind::O, Kind::T] {
        write!(out, "{}", ps.to_text(kind))?;
    }
    let report = ps.check_sums();
    let [e, o, t] = ps.sums();
    writeln!(out, "sums e={e} o={o} t={t} (mu={}, closed forms {:?})", ps.mu(), report.expected)?;
    for d in &report.deviations {
        writeln!(out, "deviation: {d}")?;
    }
    Ok(if report.ok { EXIT_OK } else { EXIT_FAILED })
}

fn gen(args: &BaseArgs, format: FormatArg, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    if args.m <= 2 {
        return Err(Error::ConstructionGap(args.m));
    }
    let base = load_base(args)?;
    let grid = build(args.m, args.translate, Some(&base))?;
    let fmt = match format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
    };
    write!(out, "{}", io::serialize(&grid, fmt))?;
    let pair = expected_constant(args.m, base.translate(args.translate).constant())?;
    writeln!(err, "magic constant {} = {}", pair.primary, pair.primary_formula)?;
    writeln!(err, "dual constant {} = {}", pair.dual, pair.dual_formula)?;
    Ok(EXIT_OK)
}

fn show(a: Option<crate::DihedralElement>) -> String {
    a.map_or("none".into(), |a| a.to_string())
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn verify_file(
    file: &Path,
    ordering: OrderingArg,
    block_side: Option<usize>,
    magic: bool,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32> {
    let grid = io::parse_any(&read(file)?)?;
    let ordering = match ordering {
        OrderingArg::Linear => OrderingClass::Linear,
        OrderingArg::Circular => OrderingClass::Circular,
        OrderingArg::Any => OrderingClass::Arbitrary,
        OrderingArg::Semicircular => {
            let m = block_side
                .or(grid.block_side())
                .or((grid.rows() % 2 == 0).then_some(grid.rows() / 2))
                .ok_or_else(|| Error::Usage("semicircular ordering needs --block-side".into()))?;
            OrderingClass::SemiCircular { block_side: m }
        }
    };
    let mut report = verify::verify_rectangle(&grid, ordering)?;
    if magic {
        report = report.with_diagonals(&grid)?;
    }
    if json {
        writeln!(out, "{}", report.to_json())?;
    } else {
        let verdict = serde_json::to_value(report.verdict)?;
        writeln!(out, "verdict: {}", verdict.as_str().unwrap_or_default())?;
        writeln!(out, "coverage: {}", if report.coverage.ok { "ok" } else { "fails" })?;
        writeln!(out, "row products: {}", join(&report.row_products))?;
        writeln!(out, "column products: {}", join(&report.col_products))?;
        writeln!(out, "row constant: {}", show(report.row_constant))?;
        writeln!(out, "column constant: {}", show(report.col_constant))?;
        writeln!(out, "magic constant: {}", show(report.magic_constant))?;
        if report.common_constants.len() > 1 {
            writeln!(out, "reachable constants: {}", join(&report.common_constants))?;
        }
        if let Some([main, anti]) = report.diagonal_products {
            writeln!(out, "diagonal products: {main} {anti}")?;
        }
    }
    Ok(if report.verdict == Verdict::NotMagic { EXIT_FAILED } else { EXIT_OK })
}

fn spectrum(m: usize, duals: bool, json: bool, out: &mut dyn Write) -> Result<i32> {
    let s = search::spectrum_enumerate(m, duals)?;
    if json {
        writeln!(out, "{}", s.to_json())?;
    } else {
        writeln!(out, "constants: {}", join(&s.constants))?;
        if let Some(all) = &s.with_duals {
            writeln!(out, "with duals: {}", join(all))?;
        }
        for r in &s.realizations {
            let tag = if r.verified { "verified" } else { "NOT verified" };
            writeln!(out, "{} from translation {}: {tag}", r.constant, r.translation)?;
        }
    }
    Ok(if s.all_verified() { EXIT_OK } else { EXIT_FAILED })
}

#[allow(clippy::too_many_arguments)]
fn run_search(
    kind: SearchKind,
    budget: Option<u64>,
    seed: u64,
    (rows, cols, k): (usize, usize, u32),
    group: GroupArg,
    input: Option<&Path>,
    (exhaustive, rotation): (bool, bool),
    out: &mut dyn Write,
) -> Result<i32> {
    let outcome = match kind {
        SearchKind::Sms2 => search::sms2_nonexistence(match group {
            GroupArg::Klein => Order4::Klein,
            GroupArg::Cyclic4 => Order4::Cyclic4,
        }),
        SearchKind::Rect => search::rectangle_search(rows, cols, k, budget, seed)?,
        SearchKind::Sms4 => search::sms4_search_with(budget.unwrap_or(1_000_000), seed, rotation)?,
        SearchKind::Linear => {
            let grid = match input {
                Some(p) => io::parse_any(&read(p)?)?,
                None => return Err(Error::Usage("linear search needs --input FILE".into())),
            };
            search::linear_ordering_search(&grid, budget.unwrap_or(10_000), seed, exhaustive)?
        }
    };
    writeln!(out, "{}", outcome.to_json())?;
    Ok(match outcome.kind {
        OutcomeKind::Found => EXIT_OK,
        OutcomeKind::ExhaustedNonexistence => EXIT_FAILED,
        OutcomeKind::BudgetExhausted => EXIT_BUDGET,
    })
}

fn selftest(out: &mut dyn Write) -> Result<i32> {
    let checks = selftest::run_all();
    for c in &checks {
        writeln!(out, "{c}")?;
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    writeln!(out, "{} passed, {failed} failed", checks.len() - failed)?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILED })
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Powers(args) => powers(&args, out),
        Command::Gen { base, format } => gen(&base, format, out, err),
        Command::Verify {
            file,
            ordering,
            block_side,
            magic,
            json,
        } => verify_file(&file, ordering, block_side, magic, json, out),
        Command::Spectrum { m, include_duals, json } => spectrum(m, include_duals, json, out),
        Command::Search {
            kind,
            budget,
            seed,
            rows,
            cols,
            k,
            group,
            input,
            exhaustive,
            rotation,
        } => run_search(kind, budget, seed, (rows, cols, k), group, input.as_deref(), (exhaustive, rotation), out),
        Command::Selftest => selftest(out),
    }
}

/// Run the tool on `args` (program name first) and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Io(_) | Error::Json(_) => EXIT_FAILED,
                _ => EXIT_USAGE,
            }
        }
    }
}
