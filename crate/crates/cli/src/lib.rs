//! Command-line front end: solve, verify, gen, replay, render, bench.
//!
//! Exit codes: 0 feasible / verified / pass, 1 infeasible / refuted / fail,
//! 2 aborted on a limit, 64 usage error, 65 bad input.

pub mod render;

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use circumpoly::solver::{AbortReason, BRUTE_FORCE_CAP};
use circumpoly::verify::{parse_certificate, serialize_certificate, CertificateText};
use circumpoly::*;
use clap::{Args, Parser, Subcommand};

pub use render::{render_svg, RenderError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_ABORTED: u8 = 2;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_DATA: u8 = 65;

/// Environment variable holding the default time limit in seconds.
pub const TIME_LIMIT_ENV: &str = "CIRCUMPOLY_TIME_LIMIT";

/// Instance argument that names the built-in 17-segment family.
pub const BUILTIN_S2: &str = "@s2";

#[derive(Debug, Parser)]
#[command(
    name = "circumpoly",
    version,
    about = "Circumscribing polygons for disjoint segment families"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether an instance admits a circumscribing polygon
    Solve(SolveArgs),
    /// Check a certificate against an instance
    Verify { instance: PathBuf, certificate: PathBuf },
    /// Print a seeded random instance
    Gen(GenArgs),
    /// Re-check the geometric facts of the impossibility argument
    Replay {
        /// Labelled instance to check instead of the built-in family
        #[arg(long)]
        instance: Option<PathBuf>,
        /// Take labels from FILE (`<name> <x> <y>` lines) or, without a
        /// value, from the instance's own `labels` section
        #[arg(long, num_args = 0..=1, requires = "instance")]
        labels: Option<Option<PathBuf>>,
        #[arg(long)]
        json: bool,
    },
    /// Draw an instance, and optionally a certificate, as SVG
    Render {
        instance: PathBuf,
        certificate: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Solve a seeded corpus and print a statistics table
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Instance file, `-` for standard input, or `@s2`
    instance: PathBuf,
    /// Use exhaustive enumeration instead of the pruned search
    #[arg(long)]
    brute: bool,
    /// Worker threads; more than one gives up deterministic statistics
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long)]
    node_limit: Option<u64>,
    /// Seconds
    #[arg(long)]
    time_limit: Option<f64>,
    /// Disable a prune rule (repeatable, or comma separated)
    #[arg(long = "no-prune", value_delimiter = ',')]
    no_prune: Vec<PruneRule>,
    /// Where to write the certificate when feasible
    #[arg(short, long)]
    certificate: Option<PathBuf>,
    /// Print only the JSON record
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: u64,
    /// x0,y0,x1,y1
    #[arg(long = "box", allow_hyphen_values = true, default_value = "-10,-10,10,10")]
    bbox: String,
    #[arg(long)]
    axis_parallel: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Families per size
    #[arg(long, default_value_t = 50)]
    count: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    min_n: usize,
    #[arg(long, default_value_t = 6)]
    max_n: usize,
    #[arg(long)]
    general: bool,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Input(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Input(_) => EXIT_DATA,
        }
    }
}

type CliResult = Result<u8, CliError>;

struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

/// Runs one invocation; `args` includes the program name.
pub fn run_cli<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut io = Io { stdin, out, err };
    let result = match cli.command {
        Command::Solve(a) => solve_cmd(&a, &mut io),
        Command::Verify { instance, certificate } => verify_cmd(&instance, &certificate, &mut io),
        Command::Gen(a) => gen_cmd(&a, &mut io),
        Command::Replay { instance, labels, json } => replay_cmd(instance.as_deref(), labels, json, &mut io),
        Command::Render {
            instance,
            certificate,
            output,
        } => render_cmd(&instance, certificate.as_deref(), output.as_deref(), &mut io),
        Command::Bench(a) => bench_cmd(&a, &mut io),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let (CliError::Usage(msg) | CliError::Input(msg)) = &e;
            let _ = writeln!(io.err, "error: {msg}");
            e.code()
        }
    }
}

fn out_err(e: std::io::Error) -> CliError {
    CliError::Input(format!("cannot write output: {e}"))
}

fn read_text(path: &Path, io: &mut Io) -> Result<String, CliError> {
    if path == Path::new("-") {
        let mut s = String::new();
        io.stdin
            .read_to_string(&mut s)
            .map_err(|e| CliError::Input(format!("cannot read standard input: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

/// The family and, when the text has a `labels` section, its labels.
fn load_instance(path: &Path, io: &mut Io) -> Result<(SegmentFamily, Option<LabeledFamily>), CliError> {
    if path == Path::new(BUILTIN_S2) {
        let lf = build_s2();
        return Ok((lf.family().clone(), Some(lf)));
    }
    let text = read_text(path, io)?;
    let family = parse_family(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let labeled = if text
        .lines()
        .any(|l| l.split('#').next().unwrap_or("").trim() == "labels")
    {
        Some(parse_labeled(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?)
    } else {
        None
    };
    Ok((family, labeled))
}

fn time_limit_default() -> Result<Option<Duration>, CliError> {
    match std::env::var(TIME_LIMIT_ENV) {
        Ok(v) => seconds(
            v.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{TIME_LIMIT_ENV}={v} is not a number of seconds")))?,
        )
        .map(Some),
        Err(_) => Ok(None),
    }
}

fn seconds(s: f64) -> Result<Duration, CliError> {
    Duration::try_from_secs_f64(s)
        .ok()
        .filter(|d| !d.is_zero())
        .ok_or_else(|| CliError::Usage(format!("time limit must be a positive number of seconds, got {s}")))
}

fn solve_config(a: &SolveArgs) -> Result<SolveConfig, CliError> {
    let mut cfg = SolveConfig {
        workers: a.workers,
        deterministic: a.workers <= 1,
        ..SolveConfig::default()
    };
    if let Some(limit) = time_limit_default()? {
        cfg.time_limit = limit;
    }
    if let Some(s) = a.time_limit {
        cfg.time_limit = seconds(s)?;
    }
    if let Some(n) = a.node_limit {
        cfg.node_limit = n;
    }
    for &rule in &a.no_prune {
        cfg.set(rule, false);
    }
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(cfg)
}

fn solve_cmd(a: &SolveArgs, io: &mut Io) -> CliResult {
    let cfg = solve_config(a)?;
    let (family, _) = load_instance(&a.instance, io)?;
    let outcome = if a.brute {
        brute_force_solve(&family, BRUTE_FORCE_CAP)
    } else {
        solve(&family, &cfg)
    }
    .map_err(|e| match e {
        SolveError::InvalidFamily(_) => CliError::Input(e.to_string()),
        _ => CliError::Usage(e.to_string()),
    })?;

    if !a.json {
        let line = match &outcome.verdict {
            Verdict::Aborted(reason) => format!("aborted: {reason}"),
            v => v.name().to_string(),
        };
        writeln!(io.out, "{line}").map_err(out_err)?;
    }
    writeln!(io.out, "{}", outcome.stats_json()).map_err(out_err)?;

    Ok(match &outcome.verdict {
        Verdict::Feasible(cert) => {
            let path = a.certificate.clone().unwrap_or_else(|| certificate_path(&a.instance));
            fs::write(&path, serialize_certificate(cert))
                .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
            writeln!(io.err, "certificate written to {}", path.display()).map_err(out_err)?;
            EXIT_OK
        }
        Verdict::Infeasible => EXIT_FAIL,
        Verdict::Aborted(AbortReason::NodeLimit | AbortReason::TimeLimit) => EXIT_ABORTED,
    })
}

/// `inst.txt` gets `inst.txt.cert`; standard input and `@s2` write to the
/// working directory.
fn certificate_path(instance: &Path) -> PathBuf {
    if instance == Path::new("-") || instance == Path::new(BUILTIN_S2) {
        return PathBuf::from("circumpoly.cert");
    }
    let mut name = instance.as_os_str().to_owned();
    name.push(".cert");
    PathBuf::from(name)
}

/// Re-derives a certificate from its text; a listed role that disagrees
/// with the geometry is a refutation.
fn check_certificate(text: &CertificateText, f: &SegmentFamily) -> Result<Certificate, String> {
    let cert = circumscribes(&text.vertices, f).map_err(|v| v.to_string())?;
    for &(i, role) in &text.classification {
        match cert.classification.get(i) {
            None => return Err(format!("segment index {i} out of range")),
            Some(&actual) if actual != role => {
                return Err(format!("segment {i} is listed as {role:?} but is {actual:?}").to_lowercase());
            }
            _ => {}
        }
    }
    Ok(cert)
}

fn read_certificate(path: &Path, io: &mut Io) -> Result<CertificateText, CliError> {
    let text = read_text(path, io)?;
    parse_certificate(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn verify_cmd(instance: &Path, certificate: &Path, io: &mut Io) -> CliResult {
    let (family, _) = load_instance(instance, io)?;
    let text = read_certificate(certificate, io)?;
    Ok(match check_certificate(&text, &family) {
        Ok(_) => {
            writeln!(io.out, "verified").map_err(out_err)?;
            EXIT_OK
        }
        Err(why) => {
            writeln!(io.out, "refuted: {why}").map_err(out_err)?;
            EXIT_FAIL
        }
    })
}

fn parse_box(s: &str) -> Result<BoundingBox, CliError> {
    let v: Vec<i64> = s
        .split(',')
        .map(|t| t.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("--box expects x0,y0,x1,y1, got {s:?}")))?;
    match v[..] {
        [x0, y0, x1, y1] if x0 <= x1 && y0 <= y1 => Ok(BoundingBox::new(x0, y0, x1, y1)),
        _ => Err(CliError::Usage(format!(
            "--box expects x0,y0,x1,y1 with x0<=x1, y0<=y1, got {s:?}"
        ))),
    }
}

fn emit(output: Option<&Path>, text: &str, io: &mut Io) -> Result<(), CliError> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Input(format!("cannot write {}: {e}", p.display()))),
        None => io.out.write_all(text.as_bytes()).map_err(out_err),
    }
}

fn gen_cmd(a: &GenArgs, io: &mut Io) -> CliResult {
    let bbox = parse_box(&a.bbox)?;
    let f = random_family(a.n, bbox, a.axis_parallel, a.seed).map_err(|e| CliError::Usage(e.to_string()))?;
    emit(a.output.as_deref(), &serialize_family(&f), io)?;
    Ok(EXIT_OK)
}

fn replay_cmd(instance: Option<&Path>, labels: Option<Option<PathBuf>>, json: bool, io: &mut Io) -> CliResult {
    let lf = match (instance, labels) {
        (None, _) => build_s2(),
        (Some(path), Some(Some(label_file))) => {
            let mut text = read_text(path, io)?;
            let extra = read_text(&label_file, io)?;
            if !extra.lines().any(|l| l.trim() == "labels") {
                text.push_str("\nlabels\n");
            }
            text.push_str(&extra);
            parse_labeled(&text).map_err(|e| CliError::Input(format!("{}: {e}", label_file.display())))?
        }
        (Some(path), _) => match load_instance(path, io)? {
            (_, Some(lf)) => lf,
            (_, None) => return Err(CliError::Input(format!("{} has no labels section", path.display()))),
        },
    };
    let report = replay_s2(&lf).map_err(|e| CliError::Input(e.to_string()))?;
    if json {
        writeln!(io.out, "{}", report.to_json()).map_err(out_err)?;
    } else {
        writeln!(io.out, "{report}").map_err(out_err)?;
    }
    Ok(if report.overall { EXIT_OK } else { EXIT_FAIL })
}

fn render_cmd(instance: &Path, certificate: Option<&Path>, output: Option<&Path>, io: &mut Io) -> CliResult {
    let (family, labeled) = load_instance(instance, io)?;
    let cert = match certificate {
        Some(p) => {
            let text = read_certificate(p, io)?;
            Some(check_certificate(&text, &family).map_err(|why| CliError::Input(format!("{}: {why}", p.display())))?)
        }
        None => None,
    };
    let svg = render_svg(&family, labeled.as_ref().map(|l| l.labels()), cert.as_ref())
        .map_err(|e| CliError::Input(e.to_string()))?;
    emit(output, &svg, io)?;
    Ok(EXIT_OK)
}

fn bench_cmd(a: &BenchArgs, io: &mut Io) -> CliResult {
    if a.min_n < 2 || a.min_n > a.max_n {
        return Err(CliError::Usage(format!(
            "need 2 <= --min-n <= --max-n, got {}..{}",
            a.min_n, a.max_n
        )));
    }
    let bbox = BoundingBox::new(-10, -10, 10, 10);
    let cfg = SolveConfig::default();
    writeln!(
        io.out,
        "{:>3} {:>9} {:>9} {:>11} {:>8} {:>12} {:>10} {:>10}",
        "n", "families", "feasible", "infeasible", "aborted", "mean nodes", "max nodes", "ms"
    )
    .map_err(out_err)?;
    for n in a.min_n..=a.max_n {
        let (mut feasible, mut infeasible, mut aborted) = (0, 0, 0);
        let (mut total, mut max) = (0u64, 0u64);
        let start = Instant::now();
        for i in 0..a.count {
            let seed = a.seed.wrapping_add(i);
            let f = random_family(n, bbox, !a.general, seed).map_err(|e| CliError::Usage(e.to_string()))?;
            let out = solve(&f, &cfg).map_err(|e| CliError::Usage(e.to_string()))?;
            match out.verdict {
                Verdict::Feasible(_) => feasible += 1,
                Verdict::Infeasible => infeasible += 1,
                Verdict::Aborted(_) => aborted += 1,
            }
            total += out.stats.nodes_expanded;
            max = max.max(out.stats.nodes_expanded);
        }
        writeln!(
            io.out,
            "{n:>3} {:>9} {feasible:>9} {infeasible:>11} {aborted:>8} {:>12.1} {max:>10} {:>10}",
            a.count,
            total as f64 / a.count.max(1) as f64,
            start.elapsed().as_millis()
        )
        .map_err(out_err)?;
    }
    Ok(EXIT_OK)
}
