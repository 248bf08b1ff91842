//! Command-line front end: read an input, run the resolver `--mode` names,
//! write the artifact, and print a one-line summary with counts and elapsed
//! time.
//!
//! The artifact goes to `--out` when given (summary on standard output) and
//! to standard output otherwise (summary moves to standard error so pipes
//! stay clean). Identical flags and input produce byte-identical artifacts.
//!
//! Exit codes: 0 success; 1 I/O failure; 2 unusable input or flags; 3 step
//! budget exhausted, with the partial artifact still written; 4 violated
//! internal invariant or failed verification.

use std::fmt;
use std::fs;
use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context as _;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde::Serialize;

use desing::binomial::{resolve_binomial_with, TransformMode};
use desing::coeff::{check_order_equivalence, coefficient_ideal};
use desing::curve::{resolve_plane_curve, CurveOptions};
use desing::lattice::Fan;
use desing::parse::{parse_polynomials, strip_input_lines};
use desing::toric::{resolve_fan, ToricResolution};
use desing::tree::ChartTree;
use desing::verify::verify_tree;
use desing::{Error as CoreError, FieldSpec, Order};

#[derive(Parser)]
#[command(
    name = "desing",
    version,
    about = "Exact resolution of singularities: binomial ideals, toric fans, plane curves",
    args_conflicts_with_subcommands = true
)]
struct Cli {
    #[command(subcommand)]
    command: Option<Cmd>,

    #[command(flatten)]
    run: RunConfig,
}

#[derive(Subcommand)]
enum Cmd {
    /// Re-check a stored resolution tree: every edge is re-derived by
    /// blowing up the recorded center, the chart morphisms are re-evaluated
    /// at exact sample points, and every final mark is re-examined.
    Verify {
        /// Tree in the JSON format the resolution modes write.
        tree: PathBuf,
    },
}

#[derive(Args)]
struct RunConfig {
    /// What to resolve or check.
    #[arg(long, value_enum)]
    mode: Option<Mode>,

    /// Field characteristic: 0 for the rationals, or a prime.
    #[arg(long = "char", value_name = "P", default_value_t = 0)]
    characteristic: u64,

    /// Input file; standard input when omitted or `-`.
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,

    /// Artifact file; standard output when omitted.
    #[arg(long = "out", value_name = "FILE")]
    output: Option<PathBuf>,

    /// Artifact format (fans and coeff-check reports have no dot form).
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Blow-up / subdivision budget; exhausting it exits with code 3.
    #[arg(long = "max-steps", value_name = "N", default_value_t = 10_000)]
    max_steps: u64,

    /// Transform applied to the ideal at each blow-up (binomial mode).
    #[arg(long, value_enum, default_value_t = Transform::Strict)]
    transform: Transform,

    /// Curve mode: also blow up non-transverse divisor contacts so the
    /// total transform ends up a normal crossings divisor.
    #[arg(long)]
    embedded: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Mode {
    Binomial,
    Toric,
    Curve,
    CoeffCheck,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Transform {
    Strict,
    Weak,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Some(Cmd::Verify { tree }) => run_verify(&tree),
        None => execute(&cli.run),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(classify(&err))
        }
    }
}

/// A complaint about flags or input shape that clap cannot catch itself.
#[derive(Debug)]
struct Usage(String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(message: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(Usage(message.into()))
}

/// Map an error to its exit code: 2 for anything wrong with the input or
/// flags, 4 for invariant and verification failures, 1 for I/O. Budget
/// exhaustion (3) is not an error and is handled inline.
fn classify(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Usage>().is_some() {
        return 2;
    }
    if let Some(e) = err.downcast_ref::<CoreError>() {
        return match e {
            CoreError::InvariantViolation(_) | CoreError::VerifyFailed(_) => 4,
            _ => 2,
        };
    }
    1
}

fn execute(config: &RunConfig) -> anyhow::Result<u8> {
    let Some(mode) = config.mode else {
        return Err(usage(
            "--mode is required (binomial | toric | curve | coeff-check)",
        ));
    };
    if config.embedded && mode != Mode::Curve {
        return Err(usage("--embedded only applies to curve mode"));
    }
    if config.transform == Transform::Weak && mode != Mode::Binomial {
        return Err(usage("--transform weak only applies to binomial mode"));
    }
    if mode == Mode::Toric && config.characteristic != 0 {
        return Err(usage("--char does not apply to toric mode"));
    }
    let text = read_input(config.input.as_deref())?;
    match mode {
        Mode::Binomial => run_binomial(config, &text),
        Mode::Toric => run_toric(config, &text),
        Mode::Curve => run_curve(config, &text),
        Mode::CoeffCheck => run_coeff_check(config, &text),
    }
}

fn read_input(path: Option<&Path>) -> anyhow::Result<String> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))
        }
        _ => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .context("reading standard input")?;
            Ok(text)
        }
    }
}

/// Write the artifact where `--out` says, and the summary to whichever of
/// stdout/stderr is not carrying the artifact.
fn emit(config: &RunConfig, artifact: &str, summary: &str) -> anyhow::Result<()> {
    let mut text = artifact.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &config.output {
        Some(path) => {
            fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
            println!("{summary}");
        }
        None => {
            print!("{text}");
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn finish(completed: bool, budget: u64, noun: &str) -> anyhow::Result<u8> {
    if completed {
        Ok(0)
    } else {
        eprintln!("warning: {noun} budget ({budget}) exhausted; the artifact written is partial");
        Ok(3)
    }
}

fn count(n: usize, noun: &str) -> String {
    let s = if n == 1 { "" } else { "s" };
    format!("{n} {noun}{s}")
}

fn run_binomial(config: &RunConfig, text: &str) -> anyhow::Result<u8> {
    let field = FieldSpec::from_characteristic(config.characteristic)?;
    let sources = strip_input_lines(text);
    if sources.is_empty() {
        return Err(usage("input contains no generators"));
    }
    let (ring, generators) = parse_polynomials(field, &sources)?;
    let mode = match config.transform {
        Transform::Strict => TransformMode::Strict,
        Transform::Weak => TransformMode::Weak,
    };
    let started = Instant::now();
    let run = resolve_binomial_with(&ring, generators, config.max_steps, mode)?;
    let elapsed = started.elapsed();
    let summary = format!(
        "binomial: {}, {} final, {}, elapsed {elapsed:.1?}",
        count(run.tree.len(), "chart"),
        run.final_count(),
        count(run.steps as usize, "blow-up"),
    );
    emit(config, &tree_artifact(&run.tree, config.format), &summary)?;
    finish(run.completed, config.max_steps, "blow-up")
}

fn run_curve(config: &RunConfig, text: &str) -> anyhow::Result<u8> {
    let field = FieldSpec::from_characteristic(config.characteristic)?;
    let sources = strip_input_lines(text);
    if sources.len() != 1 {
        return Err(usage("curve mode takes exactly one polynomial"));
    }
    let (ring, mut polys) = parse_polynomials(field, &sources)?;
    let poly = polys.pop().expect("one source parses to one polynomial");
    let started = Instant::now();
    let run = resolve_plane_curve(
        &ring,
        poly,
        CurveOptions {
            embedded: config.embedded,
            max_steps: config.max_steps,
        },
    )?;
    let elapsed = started.elapsed();
    let summary = format!(
        "curve: {}, {} final, {}, elapsed {elapsed:.1?}",
        count(run.tree.len(), "chart"),
        run.final_count(),
        count(run.steps as usize, "blow-up"),
    );
    emit(config, &tree_artifact(&run.tree, config.format), &summary)?;
    finish(run.completed, config.max_steps, "blow-up")
}

fn run_toric(config: &RunConfig, text: &str) -> anyhow::Result<u8> {
    let fan = Fan::parse(text)?;
    let started = Instant::now();
    let run = resolve_fan(&fan, config.max_steps)?;
    let elapsed = started.elapsed();
    let artifact = match config.format {
        Format::Json => toric_json(&run),
        Format::Text => toric_text(&run),
        Format::Dot => return Err(usage("fans have no dot form; use --format text or json")),
    };
    let status = if run.completed { "resolved" } else { "partial" };
    let summary = format!(
        "toric: {status} fan with {}, subdivisions: {}, elapsed {elapsed:.1?}",
        count(run.final_fan.cones().len(), "cone"),
        run.subdivision_count(),
    );
    emit(config, &artifact, &summary)?;
    finish(run.completed, config.max_steps, "subdivision")
}

fn tree_artifact(tree: &ChartTree, format: Format) -> String {
    match format {
        Format::Json => tree.to_json(),
        Format::Dot => tree.to_dot(),
        Format::Text => tree_text(tree),
    }
}

/// Human-oriented tree listing: one block per chart with its provenance,
/// ideal, and visible exceptional divisors. JSON stays the lossless format.
fn tree_text(tree: &ChartTree) -> String {
    use std::fmt::Write as _;
    let mut out = format!(
        "resolution tree: {}, {} final\n",
        count(tree.len(), "chart"),
        tree.final_ids().len()
    );
    for node in tree.nodes() {
        let _ = write!(out, "[{}]", node.id);
        match &node.parent {
            None => out.push_str(" root"),
            Some(link) => {
                let parent_ring = &tree.node(link.node).chart.ring;
                let center: Vec<&str> = link
                    .center_vars
                    .iter()
                    .map(|&v| parent_ring.name(v))
                    .collect();
                let _ = write!(
                    out,
                    " <- [{}] chart {}, center ({})",
                    link.node,
                    parent_ring.name(link.chart_var),
                    center.join(", ")
                );
                if link.point.iter().any(|c| !c.is_zero()) {
                    let point: Vec<String> = link.point.iter().map(|c| c.to_string()).collect();
                    let _ = write!(out, " at ({})", point.join(", "));
                }
            }
        }
        if node.is_final {
            out.push_str("  final");
        }
        if let Some(note) = &node.note {
            let _ = write!(out, "  [{note}]");
        }
        out.push('\n');
        let ideal = if node.chart.ideal.is_empty() {
            "0".to_string()
        } else {
            node.chart
                .ideal
                .iter()
                .map(|f| f.to_string())
                .collect::<Vec<_>>()
                .join("; ")
        };
        let _ = writeln!(out, "  ideal: {ideal}");
        let table = tree.divisor_table(node.id);
        if table.total() > 0 {
            let entries: Vec<String> = table
                .by_birth
                .iter()
                .map(|(birth, names)| format!("E{birth} = {}", names.join(" & ")))
                .collect();
            let _ = writeln!(out, "  divisors: {}", entries.join(", "));
        }
    }
    out
}

/// Text form of a toric run. Every line that is not a cone of the final fan
/// is a `#` comment, so the artifact re-parses as the final fan itself.
fn toric_text(run: &ToricResolution) -> String {
    use std::fmt::Write as _;
    let mut out = format!(
        "# {} in, {} out, subdivisions: {}\n",
        count(run.initial.cones().len(), "cone"),
        count(run.final_fan.cones().len(), "cone"),
        run.steps.len()
    );
    for (i, step) in run.steps.iter().enumerate() {
        let _ = writeln!(out, "# step {}: insert {} into {}", i + 1, step.ray, step.cone);
    }
    if !run.completed {
        let _ = writeln!(
            out,
            "# budget exhausted: maximal multiplicity still {}",
            run.final_fan.max_multiplicity()
        );
    }
    let _ = write!(out, "{}", run.final_fan);
    out
}

#[derive(Serialize)]
struct ToricReport {
    initial: Vec<String>,
    subdivisions: Vec<SubdivisionReport>,
    #[serde(rename = "final")]
    final_cones: Vec<String>,
    completed: bool,
}

#[derive(Serialize)]
struct SubdivisionReport {
    cone: String,
    ray: String,
    multiplicities_before: Vec<String>,
    multiplicities_after: Vec<String>,
}

fn toric_json(run: &ToricResolution) -> String {
    let cones = |fan: &Fan| -> Vec<String> {
        fan.cones().iter().map(|c| c.to_string()).collect()
    };
    let report = ToricReport {
        initial: cones(&run.initial),
        subdivisions: run
            .steps
            .iter()
            .map(|s| SubdivisionReport {
                cone: s.cone.to_string(),
                ray: s.ray.to_string(),
                multiplicities_before: s.before.iter().map(|m| m.to_string()).collect(),
                multiplicities_after: s.after.iter().map(|m| m.to_string()).collect(),
            })
            .collect(),
        final_cones: cones(&run.final_fan),
        completed: run.completed,
    };
    serde_json::to_string_pretty(&report).expect("report serialization cannot fail")
}

#[derive(Serialize)]
struct CoeffReport {
    input: String,
    main_variable: String,
    degree: u32,
    reference_order: u64,
    order_side: bool,
    ideal_side: bool,
    equivalent: bool,
}

/// Check the coefficient-ideal order equivalence for each input line. The
/// main variable is the first one mentioned in the input; every polynomial
/// must be monic in it. A failed equivalence is a broken theorem, so it is
/// reported as an invariant violation, not as a result.
fn run_coeff_check(config: &RunConfig, text: &str) -> anyhow::Result<u8> {
    let field = FieldSpec::from_characteristic(config.characteristic)?;
    let sources = strip_input_lines(text);
    if sources.is_empty() {
        return Err(usage("input contains no polynomials"));
    }
    let (ring, polys) = parse_polynomials(field, &sources)?;
    let z = 0;
    let started = Instant::now();
    let mut rows = Vec::with_capacity(polys.len());
    for f in &polys {
        let data = coefficient_ideal(f, z)?;
        let order_side = f.order_at_origin() == Order::Finite(u64::from(data.k));
        let ideal_side = data.powered.iter().all(|p| match p.order_at_origin() {
            Order::Infinite => true,
            Order::Finite(o) => o >= data.factorial,
        });
        if !check_order_equivalence(f, z)? {
            return Err(CoreError::InvariantViolation(format!(
                "order equivalence fails for {f}"
            ))
            .into());
        }
        rows.push(CoeffReport {
            input: f.to_string(),
            main_variable: ring.name(z).to_string(),
            degree: data.k,
            reference_order: data.factorial,
            order_side,
            ideal_side,
            equivalent: true,
        });
    }
    let elapsed = started.elapsed();
    let artifact = match config.format {
        Format::Json => {
            serde_json::to_string_pretty(&rows).expect("report serialization cannot fail")
        }
        Format::Text => rows
            .iter()
            .map(|r| {
                format!(
                    "{}: degree {} in {}, order side {}, ideal side {}, equivalent\n",
                    r.input, r.degree, r.main_variable, r.order_side, r.ideal_side
                )
            })
            .collect(),
        Format::Dot => {
            return Err(usage(
                "coeff-check reports have no dot form; use --format text or json",
            ))
        }
    };
    let summary = format!(
        "coeff-check: {}, all equivalent, elapsed {elapsed:.1?}",
        count(rows.len(), "polynomial")
    );
    emit(config, &artifact, &summary)?;
    Ok(0)
}

fn run_verify(path: &Path) -> anyhow::Result<u8> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let tree = ChartTree::from_json(&text)?;
    let started = Instant::now();
    let report = verify_tree(&tree)?;
    let elapsed = started.elapsed();
    for note in &report.notes {
        eprintln!("note: {note}");
    }
    println!(
        "verify: {}, {} ({} weak), {} final, {}, elapsed {elapsed:.1?}",
        count(report.nodes, "chart"),
        count(report.edges, "edge"),
        report.weak_edges,
        report.final_charts,
        count(report.samples, "sample"),
    );
    Ok(0)
}
