mod render;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rampi::verifier::{verify_normalized_with, verify_spec_with};
use rampi::{
    catalog_entries, compute_pi, emit_latex, emit_spec, CatalogEntry, Error, RationalAlpha, SeriesSpec, SumMode,
    VerificationReport, VerifyOptions,
};
use rayon::prelude::*;

#[derive(Parser)]
#[command(
    name = "rampi",
    version,
    about = "Catalog, generate and verify hypergeometric series for 1/π"
)]
struct Cli {
    /// Worker threads for catalog and sweep verification (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Catalog operations.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Print the identity for a spec or catalog entry.
    Generate {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value_t = Format::Latex)]
        format: Format,
    },
    /// Verify one spec numerically against its closed form.
    Verify {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Verify every explicit catalog identity and the first instances of each family.
    VerifyCatalog {
        #[command(flatten)]
        run: RunArgs,
        /// Instances per family, starting at the family's smallest k.
        #[arg(long, default_value_t = 3)]
        family_instances: i64,
    },
    /// Verify a spec across a range of c.
    Sweep {
        #[arg(long)]
        alpha: RationalAlpha,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
        /// Inclusive range `lo..hi`.
        #[arg(long, value_parser = parse_range)]
        c_range: (i64, i64),
        #[command(flatten)]
        run: RunArgs,
    },
    /// Compute π with dual-formula agreement.
    Pi {
        #[arg(long, default_value_t = 50)]
        digits: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// List entries in catalog order.
    List {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args)]
struct SpecArgs {
    /// `p/q` with 0 < p/q < 1.
    #[arg(long)]
    alpha: RationalAlpha,
    #[arg(long, allow_hyphen_values = true)]
    a: i64,
    #[arg(long, allow_hyphen_values = true)]
    b: i64,
    #[arg(long)]
    c: i64,
}

impl SpecArgs {
    fn spec(&self) -> rampi::Result<SeriesSpec> {
        SeriesSpec::new(self.alpha, self.a, self.b, self.c)
    }
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Target {
    /// Catalog id, e.g. `ex-3.6` or `sc-3.5-k2`.
    #[arg(long)]
    id: Option<String>,
    /// Spec as `alpha,a,b,c`, e.g. `1/2,0,0,1`.
    #[arg(long, allow_hyphen_values = true)]
    spec: Option<String>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 20)]
    digits: usize,
    #[arg(long, value_enum, default_value_t = Mode::Accelerated)]
    mode: Mode,
    #[arg(long, default_value_t = 1_000_000)]
    max_terms: u64,
    /// Working precision (default: max(256, 4·digits + 64)).
    #[arg(long)]
    precision_bits: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Also write the JSON output to this file (atomically).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn options(&self) -> VerifyOptions {
        let mut options = VerifyOptions::new(self.digits, self.mode.into());
        options.sum.max_terms = self.max_terms;
        options.sum.precision_bits = self.precision_bits;
        options
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Rigorous,
    Accelerated,
}

impl From<Mode> for SumMode {
    fn from(m: Mode) -> SumMode {
        match m {
            Mode::Rigorous => SumMode::Rigorous,
            Mode::Accelerated => SumMode::Accelerated,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Latex,
    Json,
    Text,
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s.split_once("..").ok_or("expected lo..hi")?;
    let lo: i64 = lo.trim().parse().map_err(|e| format!("bad lower end: {e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("bad upper end: {e}"))?;
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

fn parse_spec(s: &str) -> rampi::Result<SeriesSpec> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [alpha, a, b, c] = parts[..] else {
        return Err(Error::Parse(format!("expected alpha,a,b,c, got {s:?}")));
    };
    let int = |x: &str| x.parse::<i64>().map_err(|e| Error::Parse(format!("{x:?}: {e}")));
    SeriesSpec::new(alpha.parse()?, int(a)?, int(b)?, int(c)?)
}

enum Failure {
    /// Bad input: exit 2.
    Usage(String),
    /// Ran but could not verify: exit 1.
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Parse(_) | Error::Pole { .. } => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

/// Returns whether every verification passed.
fn run(command: Command) -> Result<bool, Failure> {
    match command {
        Command::Catalog {
            action: CatalogAction::List { format },
        } => {
            let entries = catalog_entries();
            match format {
                Format::Json => print_json(&serde_json::to_value(&entries).expect("serializable")),
                Format::Text => print!("{}", render::catalog_table(&entries)),
                Format::Latex => {
                    for e in &entries {
                        println!("% {}\n{}", e.id, emit_latex(e));
                    }
                }
            }
            Ok(true)
        }
        Command::Generate { target, format } => {
            let entry = match (&target.id, &target.spec) {
                (Some(id), _) => {
                    Some(rampi::find_entry(id).ok_or_else(|| Failure::Usage(format!("unknown catalog id {id:?}")))?)
                }
                _ => None,
            };
            let spec = match (&entry, &target.spec) {
                (Some(e), _) => e.spec,
                (None, Some(s)) => parse_spec(s)?,
                (None, None) => unreachable!("clap requires one target"),
            };
            let latex = entry.as_ref().map(emit_latex).unwrap_or_else(|| emit_spec(&spec));
            match format {
                Format::Latex => println!("{latex}"),
                Format::Text => println!("{}", render::identity_text(&spec, entry.as_ref())),
                Format::Json => print_json(&render::identity_json(&spec, entry.as_ref(), &latex)),
            }
            Ok(true)
        }
        Command::Verify { spec, run } => {
            let spec = spec.spec()?;
            let report = verify_spec_with(&spec, run.digits, &run.options())?;
            emit_reports(&run, std::slice::from_ref(&report), None, false)?;
            Ok(report.pass)
        }
        Command::VerifyCatalog { run, family_instances } => {
            let entries = catalog_items(family_instances)?;
            let options = run.options();
            let reports: Vec<Result<VerificationReport, Error>> = entries
                .par_iter()
                .map(|e| verify_entry(e, run.digits, &options))
                .collect();
            let reports: Vec<VerificationReport> = reports.into_iter().collect::<Result<_, _>>()?;
            let ids: Vec<String> = entries.iter().map(|e| e.id.clone()).collect();
            emit_reports(&run, &reports, Some(&ids), true)?;
            Ok(reports.iter().all(|r| r.pass))
        }
        Command::Sweep {
            alpha,
            a,
            b,
            c_range,
            run,
        } => {
            let specs: Vec<SeriesSpec> = (c_range.0..=c_range.1)
                .filter_map(|c| match SeriesSpec::new(alpha, a, b, c) {
                    Ok(s) => Some(s),
                    Err(e) => {
                        eprintln!("skipping c = {c}: {e}");
                        None
                    }
                })
                .collect();
            if specs.is_empty() {
                return Err(Failure::Usage("no valid c in range".into()));
            }
            let options = run.options();
            let reports: Vec<Result<VerificationReport, Error>> = specs
                .par_iter()
                .map(|s| verify_spec_with(s, run.digits, &options))
                .collect();
            let reports: Vec<VerificationReport> = reports.into_iter().collect::<Result<_, _>>()?;
            emit_reports(&run, &reports, None, true)?;
            Ok(reports.iter().all(|r| r.pass))
        }
        Command::Pi { digits, format } => {
            let pi = compute_pi(digits)?;
            match format {
                Format::Json => print_json(&serde_json::json!({
                    "digits": pi.digits,
                    "agreement_digits": pi.agreement_digits,
                    "value": pi.to_decimal_string(),
                })),
                _ => println!("{}", pi.to_decimal_string()),
            }
            Ok(true)
        }
    }
}

fn catalog_items(family_instances: i64) -> Result<Vec<CatalogEntry>, Failure> {
    let mut out = Vec::new();
    for e in catalog_entries() {
        match e.family {
            None => out.push(e),
            Some(f) => {
                for k in f.k_min..f.k_min + family_instances.max(0) {
                    out.push(e.instance(k)?);
                }
            }
        }
    }
    Ok(out)
}

fn verify_entry(entry: &CatalogEntry, digits: usize, options: &VerifyOptions) -> rampi::Result<VerificationReport> {
    match entry.normalized() {
        Some(n) => verify_normalized_with(&n, digits, options),
        None => verify_spec_with(&entry.spec, digits, options),
    }
}

fn emit_reports(
    run: &RunArgs,
    reports: &[VerificationReport],
    ids: Option<&[String]>,
    as_array: bool,
) -> Result<(), Failure> {
    let json = if as_array {
        serde_json::to_value(reports)
    } else {
        serde_json::to_value(&reports[0])
    }
    .expect("reports serialize");
    match run.format {
        Format::Json => print_json(&json),
        Format::Text | Format::Latex => print!("{}", render::reports_text(reports, ids)),
    }
    if let Some(path) = &run.out {
        write_atomic(path, &json).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn print_json(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("valid JSON"));
}

fn write_atomic(path: &Path, value: &serde_json::Value) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    serde_json::to_writer_pretty(&mut tmp, value)?;
    tmp.write_all(b"\n")?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
