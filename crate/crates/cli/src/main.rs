use std::io::{self, BufRead, Read, Write};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use basic_nets::codec::{
    emit_ascii, emit_count_csv, emit_quotient_ascii, parse_ascii, parse_planar_code, write_planar_code,
    PLANAR_CODE_HEADER,
};
use basic_nets::enumerate::{
    count_table, exceptional_rows, filter_pipeline, generate_projective_qbar, generate_sphere_q, generation_dag,
    Census,
};
use basic_nets::predicates::is_quotient_bipartite;
use basic_nets::verify::{run_all, run_unique_involution, VerifyOptions};
use basic_nets::{canonical_form, OrientedMap};
use clap::{Args, Parser, Subcommand, ValueEnum};

const MAX_RP2_CROSSINGS: usize = 14;
const MAX_SPHERE_VERTICES: usize = 22;

#[derive(Parser)]
#[command(name = "bnets", version, about = "Basic nets on the sphere and the projective plane")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a census of quadrangulations dual to basic nets.
    Gen(GenArgs),
    /// Read sphere quadrangulations and print the quotients of those with a deck involution.
    Filter(FilterArgs),
    /// Run the property suites and print a JSON report.
    Verify(VerifyArgs),
    /// Print the count table as CSV.
    Count(CountArgs),
    /// Print the generation DAG of projective members.
    Dag(DagArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Surface {
    Sphere,
    Rp2,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Ascii,
    PlanarCode,
    QuotientAscii,
}

#[derive(Clone, Copy, ValueEnum)]
enum InputFormat {
    Auto,
    Ascii,
    PlanarCode,
}

/// Size bound in either language. On the sphere a net with n crossings is
/// dual to a quadrangulation with n + 2 vertices; on RP2 the quotient has
/// n + 1 vertices.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct Bound {
    #[arg(long)]
    max_crossings: Option<usize>,
    #[arg(long)]
    max_vertices: Option<usize>,
}

#[derive(Args)]
struct GenArgs {
    surface: Surface,
    #[command(flatten)]
    bound: Bound,
    /// Defaults to ascii on the sphere and quotient-ascii on RP2.
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct FilterArgs {
    #[arg(long, value_enum, default_value_t = InputFormat::Auto)]
    format: InputFormat,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 8)]
    max_crossings: usize,
    /// Cap on the sphere census used by the suites.
    #[arg(long, default_value_t = 18)]
    sphere_max_vertices: usize,
    /// Only check uniqueness of deck involutions over the sphere census.
    #[arg(long, alias = "theorem9")]
    unique_involution: bool,
    /// Sphere bound for --unique-involution.
    #[arg(long, default_value_t = 16)]
    max_vertices: usize,
    #[arg(long, default_value_t = 10_000)]
    round_trips: usize,
    /// Add a suite that feeds a corrupted map through the checks.
    #[arg(long)]
    inject_fault: bool,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct CountArgs {
    #[arg(long)]
    max_crossings: usize,
    /// The qQ column is left empty above this sphere size.
    #[arg(long, default_value_t = 18)]
    sphere_max_vertices: usize,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct DagArgs {
    #[arg(long)]
    max_crossings: usize,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Filter(a) => cmd_filter(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Count(a) => cmd_count(a),
        Cmd::Dag(a) => cmd_dag(a),
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn summary<T>(census: &Census<T>) -> String {
    let parts: Vec<String> = census.sizes().map(|s| format!("{s}:{}", census.count(s))).collect();
    format!("{} maps; per size {}", census.len(), parts.join(" "))
}

fn cmd_gen(a: GenArgs) -> Result<bool> {
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    match a.surface {
        Surface::Sphere => {
            let max_v = match (a.bound.max_vertices, a.bound.max_crossings) {
                (Some(v), _) => v,
                (None, Some(n)) => n + 2,
                _ => unreachable!(),
            };
            if max_v > MAX_SPHERE_VERTICES {
                bail!("refusing sphere census above {MAX_SPHERE_VERTICES} vertices");
            }
            let format = a.format.unwrap_or(Format::Ascii);
            if format == Format::QuotientAscii {
                bail!("quotient-ascii is only defined for rp2");
            }
            let census = generate_sphere_q(max_v, a.jobs);
            let mut buf = Vec::new();
            if format == Format::PlanarCode {
                buf.extend_from_slice(PLANAR_CODE_HEADER);
            }
            for e in census.iter() {
                match format {
                    Format::PlanarCode => write_planar_code(&canonical_form(&e.map), &mut buf)?,
                    _ => {
                        buf.extend_from_slice(emit_ascii(&e.map)?.as_bytes());
                        buf.push(b'\n');
                    }
                }
            }
            out.write_all(&buf)?;
            eprintln!("sphere: {}", summary(&census));
        }
        Surface::Rp2 => {
            let max_check = match (a.bound.max_vertices, a.bound.max_crossings) {
                (Some(v), _) => v,
                (None, Some(n)) => n + 1,
                _ => unreachable!(),
            };
            if max_check > MAX_RP2_CROSSINGS + 1 {
                bail!("refusing RP2 census above {MAX_RP2_CROSSINGS} crossings");
            }
            let format = a.format.unwrap_or(Format::QuotientAscii);
            let census = generate_projective_qbar(max_check, a.jobs);
            let mut buf = Vec::new();
            if format == Format::PlanarCode {
                buf.extend_from_slice(PLANAR_CODE_HEADER);
            }
            for e in census.iter() {
                match format {
                    Format::QuotientAscii => {
                        buf.extend_from_slice(emit_quotient_ascii(&e.map)?.as_bytes());
                        buf.push(b'\n');
                    }
                    Format::Ascii => {
                        buf.extend_from_slice(emit_ascii(e.map.cover())?.as_bytes());
                        buf.push(b'\n');
                    }
                    Format::PlanarCode => write_planar_code(&canonical_form(e.map.cover()), &mut buf)?,
                }
            }
            out.write_all(&buf)?;
            let crossings = max_check.saturating_sub(1);
            let exceptional: Vec<String> = exceptional_rows()
                .iter()
                .filter(|r| r.n <= crossings && r.qbar > 0)
                .map(|r| format!("g{} ({} crossing{})", r.n, r.n, if r.n == 1 { "" } else { "s" }))
                .collect();
            if !exceptional.is_empty() {
                eprintln!("rp2: exceptional nets without a dual in the class: {}", exceptional.join(", "));
            }
            let bip = census.iter().filter(|e| is_quotient_bipartite(&e.map)).count();
            eprintln!("rp2: {}; bipartite {bip}", summary(&census));
        }
    }
    out.flush()?;
    Ok(true)
}

fn cmd_filter(a: FilterArgs) -> Result<bool> {
    let mut data = Vec::new();
    io::stdin().lock().read_to_end(&mut data).context("reading standard input")?;
    let planar = match a.format {
        InputFormat::PlanarCode => true,
        InputFormat::Ascii => false,
        InputFormat::Auto => data.starts_with(PLANAR_CODE_HEADER) || data.first().is_some_and(|b| !b.is_ascii_digit()),
    };
    let inputs: Vec<Result<OrientedMap, String>> = if planar {
        parse_planar_code(&data).map(|r| r.map_err(|e| e.to_string())).collect()
    } else {
        data.lines()
            .map(|l| l.map_err(|e| e.to_string()))
            .filter(|l| !matches!(l, Ok(s) if s.trim().is_empty()))
            .map(|l| l.and_then(|s| parse_ascii(&s).map_err(|e| e.to_string())))
            .collect()
    };
    let total = inputs.len();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let (mut emitted, mut bad) = (0, 0);
    for item in filter_pipeline(inputs) {
        match item {
            Ok(p) => {
                writeln!(out, "{}", emit_quotient_ascii(&p)?)?;
                emitted += 1;
            }
            Err(e) => {
                eprintln!("skipped: {e}");
                bad += 1;
            }
        }
    }
    out.flush()?;
    eprintln!("filter: {total} inputs, {emitted} quotients, {bad} skipped");
    Ok(bad == 0)
}

fn cmd_verify(a: VerifyArgs) -> Result<bool> {
    let (json, passed) = if a.unique_involution {
        if a.max_vertices > MAX_SPHERE_VERTICES {
            bail!("refusing sphere census above {MAX_SPHERE_VERTICES} vertices");
        }
        let suite = run_unique_involution(a.max_vertices, a.jobs);
        (serde_json::to_string_pretty(&suite)?, suite.passed())
    } else {
        if a.max_crossings > MAX_RP2_CROSSINGS || a.sphere_max_vertices > MAX_SPHERE_VERTICES {
            bail!("refusing verification bound above the memory guard");
        }
        let report = run_all(&VerifyOptions {
            max_crossings: a.max_crossings,
            sphere_max_vertices: a.sphere_max_vertices,
            round_trips: a.round_trips,
            inject_fault: a.inject_fault,
            jobs: a.jobs,
        });
        (serde_json::to_string_pretty(&report)?, report.passed())
    };
    println!("{json}");
    if !passed {
        eprintln!("verify: failures found");
    }
    Ok(passed)
}

fn cmd_count(a: CountArgs) -> Result<bool> {
    if a.max_crossings > MAX_RP2_CROSSINGS || a.sphere_max_vertices > MAX_SPHERE_VERTICES {
        bail!("refusing count bound above the memory guard");
    }
    let mut rows = exceptional_rows().to_vec();
    rows.retain(|r| r.n <= a.max_crossings);
    rows.extend(count_table(a.max_crossings, a.sphere_max_vertices, a.jobs));
    print!("{}", emit_count_csv(&rows));
    Ok(true)
}

fn cmd_dag(a: DagArgs) -> Result<bool> {
    if a.max_crossings > MAX_RP2_CROSSINGS {
        bail!("refusing RP2 census above {MAX_RP2_CROSSINGS} crossings");
    }
    let dag = generation_dag(a.max_crossings, a.jobs);
    let name = |code| -> Result<String> {
        let e = dag.census.get(code).context("record outside the census")?;
        Ok(emit_quotient_ascii(&e.map)?.replace(' ', ":"))
    };
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    for r in &dag.records {
        writeln!(out, "{} {} {} {}", name(&r.parent)?, name(&r.child)?, r.kind, r.multiplicity)?;
    }
    out.flush()?;
    eprintln!("dag: {} nodes, {} records", dag.census.len(), dag.records.len());
    Ok(true)
}
