//! Command-line front end.
//!
//! Exit codes: 0 when everything ran and every check or claim held, 1 when a
//! check failed or a rerun did not reproduce, 2 on errors. Errors are a
//! single stderr line `error[E_CODE]: message`.

mod analyze;
mod construct;
mod manifest;

use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tailspace::codes::{search_code, DEFAULT_TRIALS};
use tailspace::formats::{self, to_canonical_json};
use tailspace::verify::{run_sweep, CheckId, SweepConfig, SweepOutcome};
use tailspace::{Error, Result};

use manifest::{FileDigest, RunManifest};

#[derive(Parser, Debug)]
#[command(name = "tailspace", version, about = "Fourier analysis and inequality checks for Boolean functions in tail spaces")]
pub struct Cli {
    /// Worker threads for parallel sweeps; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Path of the run manifest. Defaults to `<out>.manifest.json`, or
    /// `<out-dir>/manifest.json` for `sweep`.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Spectrum, influences, tail certificates and norms of a function file.
    Analyze(analyze::AnalyzeArgs),
    /// Build a function and its construction record.
    Construct(construct::ConstructArgs),
    /// Linear-code utilities.
    #[command(subcommand)]
    Codes(CodesCommand),
    /// Run one check over its seeded sweep.
    Verify(VerifyArgs),
    /// Run several checks, one report file per check.
    Sweep(SweepArgs),
    /// Re-execute a manifest and compare output digests.
    Rerun(RerunArgs),
}

#[derive(Subcommand, Debug)]
enum CodesCommand {
    /// Seeded search for a code with a minimum-weight floor.
    Search {
        #[arg(long)]
        length: usize,
        /// Dimension or inclusive range `lo..hi`.
        #[arg(long)]
        dim: DimRange,
        #[arg(long)]
        min_weight: u32,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dual code.
    Dual {
        code: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Length, dimension and minimum weights of a code and its dual.
    Weight {
        code: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug)]
struct DimRange(usize, usize);

impl FromStr for DimRange {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad dimension `{t}`: {e}"));
        match s.split_once("..") {
            Some((a, b)) => Ok(DimRange(parse(a)?, parse(b.trim_start_matches('='))?)),
            None => parse(s).map(|d| DimRange(d, d)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
struct SweepFlags {
    /// Largest cube dimension in random families.
    #[arg(long, default_value_t = 6)]
    n: usize,
    /// Largest tail level in random families.
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Largest state count for random Markov operators.
    #[arg(long, default_value_t = 8)]
    states: usize,
    /// Comma-separated exponents; each check has its own default.
    #[arg(long, value_delimiter = ',')]
    p_grid: Option<Vec<f64>>,
    /// Comma-separated times.
    #[arg(long, value_delimiter = ',')]
    t_grid: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Replace every report's tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Drop passing reports from the written file.
    #[arg(long)]
    failures_only: bool,
}

impl SweepFlags {
    fn config(&self) -> SweepConfig {
        SweepConfig {
            trials: self.trials,
            seed: self.seed,
            n_max: self.n,
            k_max: self.k,
            states_max: self.states,
            p_grid: self.p_grid.clone(),
            t_grid: self.t_grid.clone(),
            tol: self.tol,
        }
    }
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// One of the check ids listed by `--help`, or `weak-sv`.
    check: String,
    #[command(flatten)]
    flags: SweepFlags,
    /// Report file (`.json` or `.csv`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format; inferred from the extension of `--out` when omitted.
    #[arg(long, value_enum)]
    format: Option<OutFormat>,
    /// Print every report, not only failures.
    #[arg(long)]
    verbose: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Comma-separated check ids; all checks when omitted.
    #[arg(long, value_delimiter = ',')]
    checks: Option<Vec<String>>,
    #[command(flatten)]
    flags: SweepFlags,
    #[arg(long)]
    out_dir: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: OutFormat,
}

#[derive(Args, Debug)]
struct RerunArgs {
    manifest_file: PathBuf,
}

/// What a command touched, for the manifest.
#[derive(Default)]
struct Outcome {
    ok: bool,
    inputs: Vec<PathBuf>,
    outputs: Vec<PathBuf>,
    seeds: Vec<u64>,
    tol_override: Option<f64>,
    /// Default manifest location when `--manifest` is absent.
    manifest_default: Option<PathBuf>,
}

impl Outcome {
    fn ok(ok: bool) -> Self {
        Self { ok, ..Self::default() }
    }
}

pub fn run_from_env() -> i32 {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let first = e.to_string();
            let line = first.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("error[E_USAGE]: {line}");
            return 2;
        }
    };
    match execute(cli, &argv[1..], true) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error[{}]: {}", e.code(), e.to_string().replace('\n', " "));
            2
        }
    }
}

fn execute(cli: Cli, args: &[String], write_manifest: bool) -> Result<bool> {
    if let Some(t) = cli.threads {
        // the global pool can be built once per process; later calls keep it
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let started = Instant::now();
    let outcome = match cli.command {
        Command::Analyze(a) => analyze::run(a)?,
        Command::Construct(a) => construct::run(a)?,
        Command::Codes(c) => codes(c)?,
        Command::Verify(a) => verify(a)?,
        Command::Sweep(a) => sweep(a)?,
        Command::Rerun(a) => return rerun(&a.manifest_file),
    };
    let path = cli.manifest.or(outcome.manifest_default.clone());
    if let (true, Some(path)) = (write_manifest, path) {
        let m = RunManifest::build(args, cli.threads, &outcome, started.elapsed().as_secs_f64())?;
        write_file(&path, &to_canonical_json(&m)?)?;
    }
    Ok(outcome.ok)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, contents)?;
    Ok(())
}

/// Writes to `out` when given, stdout otherwise.
fn emit(out: Option<&Path>, contents: &str, outcome: &mut Outcome) -> Result<()> {
    match out {
        Some(p) => {
            write_file(p, contents)?;
            outcome.outputs.push(p.to_path_buf());
            if outcome.manifest_default.is_none() {
                outcome.manifest_default = Some(manifest_path_for(p));
            }
        }
        None => print!("{contents}"),
    }
    Ok(())
}

fn manifest_path_for(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn codes(cmd: CodesCommand) -> Result<Outcome> {
    let mut outcome = Outcome::ok(true);
    match cmd {
        CodesCommand::Search {
            length,
            dim,
            min_weight,
            seed,
            trials,
            out,
        } => {
            let found = search_code(length, (dim.0, dim.1), min_weight, seed, trials)?;
            outcome.seeds.push(seed);
            emit(out.as_deref(), &to_canonical_json(&found)?, &mut outcome)?;
        }
        CodesCommand::Dual { code, out } => {
            let c = formats::code_from_json(&formats::read_text(&code)?)?;
            outcome.inputs.push(code);
            emit(out.as_deref(), &formats::code_to_json(&c.dual())?, &mut outcome)?;
        }
        CodesCommand::Weight { code, out } => {
            let c = formats::code_from_json(&formats::read_text(&code)?)?;
            outcome.inputs.push(code);
            let dual = c.dual();
            let doc = serde_json::json!({
                "length": c.length(),
                "dim": c.dim(),
                "min_weight": c.min_weight()?,
                "dual_dim": dual.dim(),
                "dual_min_weight": dual.min_weight()?,
            });
            emit(out.as_deref(), &to_canonical_json(&doc)?, &mut outcome)?;
        }
    }
    Ok(outcome)
}

fn parse_check(s: &str) -> Result<CheckId> {
    match s {
        "weak-sv" => Ok(CheckId::WeakStroockVaropoulos),
        other => other.parse(),
    }
}

fn render(outcome: &SweepOutcome, format: OutFormat, failures_only: bool) -> Result<String> {
    let reports: Vec<_> = outcome
        .reports
        .iter()
        .filter(|r| !failures_only || !r.pass)
        .cloned()
        .collect();
    match format {
        OutFormat::Csv => formats::reports_to_csv(&reports),
        OutFormat::Json => {
            let doc = SweepOutcome {
                reports,
                ..outcome.clone()
            };
            to_canonical_json(&doc)
        }
    }
}

fn summary_line(o: &SweepOutcome) -> String {
    let worst = o
        .worst
        .as_ref()
        .map(|w| format!(" worst_slack={:e} tol={:e}", w.slack, w.tol))
        .unwrap_or_default();
    format!(
        "{} {}: {} reports, {} violations{}",
        if o.passed() { "PASS" } else { "FAIL" },
        o.check_id,
        o.total,
        o.violations,
        worst
    )
}

fn print_failures(o: &SweepOutcome) {
    for r in o.failures().take(20) {
        println!("  {r}");
    }
    if o.violations > 20 {
        println!("  ... {} more", o.violations - 20);
    }
    if let Some(input) = &o.failure_input {
        println!("  first failing input: {}", serde_json::to_string(input).unwrap_or_default());
    }
}

fn verify(a: VerifyArgs) -> Result<Outcome> {
    let check = parse_check(&a.check)?;
    let cfg = a.flags.config();
    let result = run_sweep(check, &cfg)?;
    // small closed-form checks are always shown in full
    if a.verbose || result.total <= 50 {
        for r in &result.reports {
            println!("{r}");
        }
    }
    println!("{}", summary_line(&result));
    print_failures(&result);
    let mut outcome = Outcome::ok(result.passed());
    outcome.seeds.push(cfg.seed);
    outcome.tol_override = cfg.tol;
    if let Some(out) = &a.out {
        let format = a.format.unwrap_or(match out.extension().and_then(|e| e.to_str()) {
            Some("csv") => OutFormat::Csv,
            _ => OutFormat::Json,
        });
        emit(Some(out), &render(&result, format, a.flags.failures_only)?, &mut outcome)?;
    }
    Ok(outcome)
}

fn sweep(a: SweepArgs) -> Result<Outcome> {
    let checks: Vec<CheckId> = match &a.checks {
        Some(list) => list.iter().map(|s| parse_check(s)).collect::<Result<_>>()?,
        None => CheckId::ALL.to_vec(),
    };
    let cfg = a.flags.config();
    let mut outcome = Outcome::ok(true);
    outcome.seeds.push(cfg.seed);
    outcome.tol_override = cfg.tol;
    outcome.manifest_default = Some(a.out_dir.join("manifest.json"));
    let ext = match a.format {
        OutFormat::Json => "json",
        OutFormat::Csv => "csv",
    };
    let mut summary = Vec::new();
    for check in checks {
        let result = run_sweep(check, &cfg)?;
        println!("{}", summary_line(&result));
        print_failures(&result);
        outcome.ok &= result.passed();
        let path = a.out_dir.join(format!("{check}.{ext}"));
        write_file(&path, &render(&result, a.format, a.flags.failures_only)?)?;
        outcome.outputs.push(path);
        summary.push(serde_json::json!({
            "check_id": result.check_id,
            "total": result.total,
            "violations": result.violations,
            "worst": result.worst,
        }));
    }
    let path = a.out_dir.join("summary.json");
    write_file(&path, &to_canonical_json(&summary)?)?;
    outcome.outputs.push(path);
    Ok(outcome)
}

fn rerun(path: &Path) -> Result<bool> {
    let m: RunManifest = serde_json::from_str(&formats::read_text(path)?)
        .map_err(|e| Error::Format(format!("manifest: {e}")))?;
    if m.argv.first().map(String::as_str) == Some("rerun") {
        return Err(Error::Format("manifest records a rerun".into()));
    }
    let cwd = std::env::current_dir()?;
    std::env::set_current_dir(&m.cwd)?;
    let result = (|| {
        for input in &m.inputs {
            let now = FileDigest::of(Path::new(&input.path))?;
            if now.sha256 != input.sha256 {
                return Err(Error::Format(format!("input {} changed since the recorded run", input.path)));
            }
        }
        let mut argv = vec!["tailspace".to_string()];
        argv.extend(m.argv.iter().cloned());
        let cli = Cli::try_parse_from(&argv).map_err(|e| Error::Format(format!("manifest argv: {e}")))?;
        let passed = execute(cli, &m.argv, false)?;
        let mut same = 0;
        for out in &m.outputs {
            let now = FileDigest::of(Path::new(&out.path))?;
            if now.sha256 == out.sha256 {
                same += 1;
            } else {
                println!("DIFFERS {}", out.path);
            }
        }
        println!("reproduced {same}/{} outputs", m.outputs.len());
        Ok(passed == m.passed && same == m.outputs.len())
    })();
    std::env::set_current_dir(cwd)?;
    result
}
