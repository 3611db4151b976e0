use std::fmt::Display;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ctx_rbi::game::GameError;
use ctx_rbi::pipeline::BatterLedger;
use ctx_rbi::{
    emit_report, parse_events, parse_we_table, run_pipeline, summarize, AlphaFamily, AlphaKind,
    Bases, Half, IngestError, LookupError, OutputFormat, PipelineError, PipelineOutput, Report,
    StateKey, SummaryOptions, WeModel,
};

#[derive(Parser)]
#[command(name = "ctx-rbi", version, about = "Win-expectancy curves and context-adjusted RBI")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Home-team win expectancy for one game state.
    WeEval {
        #[command(flatten)]
        table: TableArg,
        #[command(flatten)]
        state: StateArgs,
        /// Home minus away score differential (may be fractional).
        #[arg(long, allow_hyphen_values = true)]
        diff: f64,
    },
    /// Samples the extended curve of one game state as `diff,we` CSV.
    WeCurve {
        #[command(flatten)]
        table: TableArg,
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
        to: f64,
        #[arg(long, default_value_t = 1.0)]
        step: f64,
    },
    /// Scores a season and writes ledgers, summary and histogram data.
    Compute {
        #[command(flatten)]
        season: SeasonArgs,
        #[arg(long, default_value = "out")]
        output_dir: PathBuf,
        /// Output formats to write (repeatable or comma-separated).
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Format::Csv, Format::Json, Format::PlotData])]
        format: Vec<Format>,
    },
    /// Scores a season and prints leaderboards and percentiles.
    Report {
        #[command(flatten)]
        season: SeasonArgs,
    },
}

#[derive(Args)]
struct TableArg {
    /// Win-expectancy table CSV.
    #[arg(long, env = "CTX_RBI_WE_TABLE")]
    we_table: PathBuf,
}

#[derive(Args)]
struct StateArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=9))]
    inning: u8,
    /// top or bottom
    #[arg(long)]
    half: Half,
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=2))]
    outs: u8,
    /// Runners on 1st/2nd/3rd as three 0/1 digits, e.g. 101.
    #[arg(long, value_parser = parse_bases)]
    bases: Bases,
}

#[derive(Args)]
struct SeasonArgs {
    #[command(flatten)]
    table: TableArg,
    /// Scoring-event CSV.
    #[arg(long)]
    events: PathBuf,
    #[arg(long, value_enum, default_value_t = Family::Sigmoid)]
    alpha_family: Family,
    /// Steepness of the alpha map; defaults to 4 for sigmoid, required for power.
    #[arg(long)]
    alpha_k: Option<f64>,
    /// Minimum RBI for percentile and ratio leaderboards.
    #[arg(long, default_value_t = ctx_rbi::report::DEFAULT_MIN_RBI)]
    min_rbi: u64,
    #[arg(long, default_value_t = ctx_rbi::report::DEFAULT_BINS, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    bins: usize,
    /// Rows per leaderboard.
    #[arg(long, default_value_t = ctx_rbi::report::DEFAULT_TOP_N)]
    top: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Sigmoid,
    Power,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Json,
    PlotData,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
            Format::PlotData => OutputFormat::PlotData,
        }
    }
}

fn parse_bases(s: &str) -> Result<Bases, String> {
    Bases::from_bits(s).ok_or_else(|| format!("`{s}` is not three 0/1 digits"))
}

/// A failure and its exit code: 1 for IO and parse problems, 2 for domain and usage errors.
struct Failure {
    code: u8,
    message: String,
}

fn io_fail(what: impl Display) -> Failure {
    Failure { code: 1, message: what.to_string() }
}

fn domain_fail(what: impl Display) -> Failure {
    Failure { code: 2, message: what.to_string() }
}

fn open(path: &Path) -> Result<File, Failure> {
    File::open(path).map_err(|e| io_fail(format!("{}: {e}", path.display())))
}

fn load_model(path: &Path) -> Result<WeModel, Failure> {
    let table = parse_we_table(open(path)?)
        .map_err(|e| io_fail(format!("{}: {e}", path.display())))?;
    Ok(WeModel::new(table))
}

fn lookup_fail(e: LookupError) -> Failure {
    match e {
        LookupError::UnknownState(_) => domain_fail(e),
        LookupError::Curve { .. } => io_fail(e),
    }
}

fn state_key(s: &StateArgs) -> StateKey {
    StateKey::new(s.inning, s.half, s.outs, s.bases).expect("ranges enforced by the parser")
}

fn we_eval(table: &TableArg, state: &StateArgs, diff: f64) -> Result<(), Failure> {
    if !diff.is_finite() {
        return Err(domain_fail("--diff must be finite"));
    }
    let model = load_model(&table.we_table)?;
    let we = model.lookup_we(&state_key(state), diff).map_err(lookup_fail)?;
    println!("{we:.6}");
    Ok(())
}

fn we_curve(table: &TableArg, state: &StateArgs, from: f64, to: f64, step: f64) -> Result<(), Failure> {
    if !(step > 0.0 && step.is_finite() && from.is_finite() && to.is_finite() && from <= to) {
        return Err(domain_fail("need finite --from <= --to and --step > 0"));
    }
    let model = load_model(&table.we_table)?;
    let key = state_key(state);
    let out = io::stdout();
    let mut out = BufWriter::new(out.lock());
    let write_err = |e: io::Error| io_fail(e);
    writeln!(out, "diff,we").map_err(write_err)?;
    let count = ((to - from) / step + 1e-9).floor() as u64;
    for i in 0..=count {
        let x = from + i as f64 * step;
        let we = model.lookup_we(&key, x).map_err(lookup_fail)?;
        writeln!(out, "{x},{we}").map_err(write_err)?;
    }
    out.flush().map_err(write_err)
}

fn alpha_family(args: &SeasonArgs) -> Result<AlphaFamily, Failure> {
    let (kind, k) = match (args.alpha_family, args.alpha_k) {
        (Family::Sigmoid, k) => (AlphaKind::Sigmoid, k.unwrap_or(4.0)),
        (Family::Power, Some(k)) => (AlphaKind::Power, k),
        (Family::Power, None) => {
            return Err(domain_fail("--alpha-family power needs an explicit --alpha-k"))
        }
    };
    AlphaFamily::new(kind, k).map_err(domain_fail)
}

fn score_season(args: &SeasonArgs) -> Result<(PipelineOutput, Report), Failure> {
    let family = alpha_family(args)?;
    let model = load_model(&args.table.we_table)?;
    let events = parse_events(open(&args.events)?).map_err(|e| match e {
        IngestError::Rows(rows) => {
            for row in &rows {
                eprintln!("{}: {row}", args.events.display());
            }
            io_fail(format!("{}: {} invalid row(s)", args.events.display(), rows.len()))
        }
        other => io_fail(format!("{}: {other}", args.events.display())),
    })?;
    if events.is_empty() {
        eprintln!("warning: {} contains no events", args.events.display());
    }
    let output = run_pipeline(&model, &family, &events).map_err(|e| match &e {
        PipelineError::Game { source: GameError::Lookup(LookupError::UnknownState(_)), .. }
        | PipelineError::Metric { .. } => domain_fail(e),
        _ => io_fail(e),
    })?;
    for (event, warning) in output.warnings() {
        eprintln!("warning: event {}/{}: {warning}", event.game_id, event.event_id);
    }
    let opts = SummaryOptions { min_rbi: args.min_rbi, bins: args.bins, top_n: args.top };
    let report = summarize(&output, &opts);
    Ok((output, report))
}

fn show(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |v| format!("{v:.4}"))
}

fn compute(args: &SeasonArgs, dir: &Path, formats: &[Format]) -> Result<(), Failure> {
    let (output, report) = score_season(args)?;
    let formats: Vec<OutputFormat> = formats.iter().map(|&f| f.into()).collect();
    let written = emit_report(&report, &output, dir, &formats)
        .map_err(|e| io_fail(format!("{}: {e}", dir.display())))?;
    let s = &report.summary;
    println!("events: {}", s.event_count);
    println!("batters: {} ({} with RBI >= {})", report.ledgers.len(), s.qualifying_batters, s.min_rbi);
    println!("mean delta_we: {} (sd {})", show(s.delta_mean), show(s.delta_sd));
    println!("mean alpha: {}", show(s.alpha_mean));
    println!("mean beta: {}", show(s.beta_mean));
    println!("wrote {} file(s) to {}", written.len(), dir.display());
    Ok(())
}

fn print_board(out: &mut impl Write, title: &str, rows: &[BatterLedger]) -> io::Result<()> {
    writeln!(out, "{title}")?;
    writeln!(
        out,
        "{:<24} {:>5} {:>9} {:>9} {:>9} {:>9}",
        "Batter", "RBI", "ARBI", "ARBI/RBI", "CRBI", "CRBI/RBI"
    )?;
    for l in rows {
        let name = if l.batter_name.is_empty() { &l.batter_id } else { &l.batter_name };
        writeln!(
            out,
            "{:<24} {:>5} {:>9.2} {:>9.3} {:>9.2} {:>9.3}",
            name, l.rbi, l.arbi, l.arbi_per_rbi, l.crbi, l.crbi_per_rbi
        )?;
    }
    writeln!(out)
}

fn report(args: &SeasonArgs) -> Result<(), Failure> {
    let (_, report) = score_season(args)?;
    let out = io::stdout();
    let mut out = BufWriter::new(out.lock());
    let boards = &report.leaderboards;
    let s = &report.summary;
    let res = (|| {
        print_board(&mut out, "Top by RBI", &boards.rbi)?;
        print_board(&mut out, &format!("Top by ARBI/RBI (RBI >= {})", s.min_rbi), &boards.arbi_per_rbi)?;
        print_board(&mut out, &format!("Top by CRBI/RBI (RBI >= {})", s.min_rbi), &boards.crbi_per_rbi)?;
        writeln!(out, "Percentiles over {} qualifying batter(s)", s.qualifying_batters)?;
        writeln!(out, "{:<10} {:>9} {:>9}", "Percentile", "ARBI/RBI", "CRBI/RBI")?;
        for p in &s.percentiles {
            let label = format!("{}%", p.percentile);
            writeln!(out, "{label:<10} {:>9.3} {:>9.3}", p.arbi_per_rbi, p.crbi_per_rbi)?;
        }
        out.flush()
    })();
    res.map_err(io_fail)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::WeEval { table, state, diff } => we_eval(table, state, *diff),
        Command::WeCurve { table, state, from, to, step } => we_curve(table, state, *from, *to, *step),
        Command::Compute { season, output_dir, format } => compute(season, output_dir, format),
        Command::Report { season } => report(season),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
