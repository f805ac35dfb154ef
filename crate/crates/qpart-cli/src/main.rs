//! Command-line front end for the `qpart` library: partition statistics,
//! enumeration, combinatorial maps with step-by-step traces, generating
//! functions, the verification suite, residue tables, and diagrams.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use qpart::bijection::{self, TraceStep};
use qpart::genfun::{self, Family, SeriesSpec};
use qpart::identity::{self, IdentityReport};
use qpart::partition::{enumerate, EnumerateOpts, Partition};
use qpart::Mod2Graph;

#[derive(Parser)]
#[command(
    name = "qpart",
    version,
    about = "Exact partition statistics, bijections, and q-series checks",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print every statistic of one partition.
    ///
    /// Parts are joined by `+` in any order (`5+2+6` is normalized);
    /// `0` denotes the empty partition.
    Stat {
        /// Partition, e.g. `7+6+6+5+2`.
        partition: String,
    },
    /// List the partitions of a number, one per line.
    Enumerate {
        /// The number being partitioned.
        n: u64,
        /// Only partitions whose largest part is at most this.
        #[arg(long)]
        max_part: Option<u64>,
        /// Only partitions with at most this many parts.
        #[arg(long)]
        max_parts: Option<u64>,
        /// Only partitions whose odd parts are pairwise distinct.
        #[arg(long)]
        distinct_odd: bool,
    },
    /// Apply a combinatorial map to a partition and print the image.
    Bijection {
        /// Which map to apply.
        name: MapName,
        /// Partition, e.g. `7+6+6+5+2` (use `0` for the empty partition).
        partition: String,
        /// Rank offset parameter (adjoint maps).
        #[arg(short = 'm', long)]
        m: Option<i64>,
        /// Rank-set / crank offset parameter (insertion and crank maps).
        #[arg(short = 'k', long)]
        k: Option<i64>,
        /// 2-modular rank offset parameter (2-modular adjoint).
        #[arg(short = 'r', long)]
        r: Option<i64>,
        /// Print each intermediate step as a diagram.
        #[arg(long)]
        trace: bool,
    },
    /// Print a generating-function family both ways: census and closed form.
    Series {
        /// Which family to build.
        family: FamilyName,
        /// Rank / order-k rank cutoff parameter.
        #[arg(long)]
        m: Option<i64>,
        /// Largest-part bound (bounded families).
        #[arg(long)]
        l: Option<i64>,
        /// Rank-set / crank parameter.
        #[arg(long)]
        k: Option<i64>,
        /// 2-modular rank parameter.
        #[arg(long)]
        r: Option<i64>,
        /// Rank order (order-k rank family).
        #[arg(long)]
        order: Option<u64>,
        /// Truncation order: coefficients through q^T.
        #[arg(long, short = 't', default_value_t = 20)]
        trunc: i64,
        /// Closed-form catalog key to use instead of the family default.
        #[arg(long)]
        formula: Option<String>,
    },
    /// Run the verification suite; exit 0 only if every gating check passes.
    Verify {
        /// Only run checks whose id matches (exact, or a `*`-suffixed prefix
        /// such as `2.*`).
        #[arg(long)]
        filter: Option<String>,
        /// Override the truncation of series checks (exact-polynomial
        /// windows are intrinsic and unaffected).
        #[arg(long, short = 't')]
        trunc: Option<i64>,
        /// Emit the reports as a JSON array instead of text lines.
        #[arg(long)]
        json: bool,
        /// Number of worker threads (default: available parallelism).
        #[arg(long, short = 'j')]
        jobs: Option<usize>,
        /// Write the report to a file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate rank and crank residue classes of the partitions of n.
    Table {
        /// Residues are taken modulo this.
        #[arg(long, short = 'm')]
        modulus: u64,
        /// The number being partitioned.
        #[arg(long, short = 'n')]
        n: u64,
    },
    /// Print the cell diagram of a partition.
    Graph {
        /// Partition, e.g. `7+6+6+5+2`.
        partition: String,
        /// Print the 2-modular grid of 2s and 1s instead of the plain
        /// diagram (requires pairwise-distinct odd parts).
        #[arg(long)]
        mod2: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MapName {
    /// Weight-reducing rank-threshold map: remove the largest part,
    /// conjugate, attach a new largest part.
    DysonAdjoint,
    /// Inverse of `dyson-adjoint`.
    DysonAdjointInverse,
    /// Weight-increasing map onto partitions whose rank-set contains k.
    RankSetInsertion,
    /// Inverse of `rank-set-insertion`.
    RankSetInsertionInverse,
    /// Map realizing the crank-at-most count via rank-set membership.
    CrankMap,
    /// Inverse of `crank-map`.
    CrankMapInverse,
    /// 2-modular analogue of the adjoint map.
    Mod2Adjoint,
    /// Inverse of `mod2-adjoint`.
    Mod2AdjointInverse,
    /// Crank-negating involution fixing the conjugation-symmetric core.
    PseudoConjugate,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyName {
    RankEquals,
    RankEqualsBounded,
    RankAtLeast,
    RankAtLeastBounded,
    RankSetMember,
    RankSetMemberBounded,
    CrankAtMost,
    CrankAtMostBounded,
    CrankEquals,
    CrankEqualsBounded,
    DistinctOdd,
    M2RankAtLeast,
    M2RankAtMost,
    KRankAtLeast,
    SelfPseudoConjugate,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::Stat { partition } => cmd_stat(&partition)?,
        Command::Enumerate { n, max_part, max_parts, distinct_odd } => {
            cmd_enumerate(n, max_part, max_parts, distinct_odd)
        }
        Command::Bijection { name, partition, m, k, r, trace } => {
            cmd_bijection(name, &partition, m, k, r, trace)?
        }
        Command::Series { family, m, l, k, r, order, trunc, formula } => {
            cmd_series(family, m, l, k, r, order, trunc, formula.as_deref())?
        }
        Command::Verify { filter, trunc, json, jobs, out } => {
            return cmd_verify(filter.as_deref(), trunc, json, jobs, out.as_deref());
        }
        Command::Table { modulus, n } => cmd_table(modulus, n)?,
        Command::Graph { partition, mod2 } => cmd_graph(&partition, mod2)?,
    }
    Ok(ExitCode::SUCCESS)
}

/// Parses `+`-joined parts in any order, normalizing to weakly decreasing;
/// `0` is the empty partition.
fn parse_partition(text: &str) -> anyhow::Result<Partition> {
    let text = text.trim();
    if text == "0" {
        return Ok(Partition::empty());
    }
    if text.is_empty() {
        bail!("empty partition text (write 0 for the empty partition)");
    }
    let mut parts = Vec::new();
    for piece in text.split('+') {
        let part: u64 = piece
            .trim()
            .parse()
            .with_context(|| format!("bad part {:?} in partition {text:?}", piece.trim()))?;
        if part == 0 {
            bail!("parts must be at least 1 (write 0 alone for the empty partition)");
        }
        parts.push(part);
    }
    Ok(Partition::from_unsorted(parts))
}

// ---- stat ----------------------------------------------------------------

fn cmd_stat(text: &str) -> anyhow::Result<()> {
    let p = parse_partition(text)?;
    println!("{:<22} {}", "partition", p);
    println!("{:<22} {}", "weight", p.weight());
    if p.is_empty() {
        println!("(the empty partition; part-based statistics are all 0 or undefined)");
        return Ok(());
    }
    println!("{:<22} {}", "largest part", p.largest_part());
    println!("{:<22} {}", "number of parts", p.num_parts());
    println!("{:<22} {}", "number of ones", p.num_ones());
    println!("{:<22} {}", "parts above ones-count", p.num_parts_above_ones());
    match p.overhang() {
        Ok(o) => println!("{:<22} {}", "overhang", o),
        Err(e) => println!("{:<22} undefined ({e})", "overhang"),
    }
    println!("{:<22} {}", "rank", p.rank());
    match p.crank() {
        Ok(c) => println!("{:<22} {}", "crank", c),
        Err(e) => println!("{:<22} undefined ({e})", "crank"),
    }
    match Mod2Graph::from_partition(&p) {
        Ok(g) => match g.m2_rank() {
            Ok(r) => println!("{:<22} {}", "M2-rank", r),
            Err(e) => println!("{:<22} undefined ({e})", "M2-rank"),
        },
        Err(_) => println!("{:<22} undefined (a repeated odd part)", "M2-rank"),
    }
    let dd = p.durfee_dissection();
    let sizes: Vec<String> = dd.sizes().iter().map(u64::to_string).collect();
    println!("{:<22} {}", "Durfee square sides", sizes.join(", "));
    let mut order = 2;
    while let Ok(r) = p.k_rank(order) {
        println!("{:<22} {}", format!("order-{order} rank"), r);
        order += 1;
    }
    let prefix: Vec<String> = p.rank_set_prefix().iter().map(i64::to_string).collect();
    println!("{:<22} {{{}, ...}}", "rank-set", prefix.join(", "));
    Ok(())
}

// ---- enumerate ------------------------------------------------------------

fn cmd_enumerate(n: u64, max_part: Option<u64>, max_parts: Option<u64>, distinct_odd: bool) {
    let opts = EnumerateOpts { max_part, max_parts, distinct_odd_parts: distinct_odd };
    let mut count: u64 = 0;
    for p in enumerate(n, opts) {
        println!("{p}");
        count += 1;
    }
    eprintln!("{count} partition(s)");
}

// ---- bijection ------------------------------------------------------------

fn require(value: Option<i64>, flag: &str, map: &str) -> anyhow::Result<i64> {
    value.ok_or_else(|| anyhow!("{map} needs its offset parameter: pass {flag} VALUE"))
}

fn print_steps(steps: &[TraceStep]) {
    for step in steps {
        println!("-- {}", step.label);
        if step.diagram.is_empty() {
            println!("(empty)");
        } else {
            println!("{}", step.diagram);
        }
    }
}

fn cmd_bijection(
    name: MapName,
    text: &str,
    m: Option<i64>,
    k: Option<i64>,
    r: Option<i64>,
    trace: bool,
) -> anyhow::Result<()> {
    let p = parse_partition(text)?;
    let image = match name {
        MapName::DysonAdjoint => {
            let m = require(m, "-m", "dyson-adjoint")?;
            if trace {
                let (image, steps) = bijection::dyson_adjoint_traced(&p, m)?;
                print_steps(&steps);
                image
            } else {
                bijection::dyson_adjoint(&p, m)?
            }
        }
        MapName::DysonAdjointInverse => {
            no_trace(trace, "dyson-adjoint-inverse")?;
            bijection::dyson_adjoint_inverse(&p, require(m, "-m", "dyson-adjoint-inverse")?)?
        }
        MapName::RankSetInsertion => {
            let k = require(k, "-k", "rank-set-insertion")?;
            if trace {
                let (image, steps) = bijection::rank_set_insertion_traced(&p, k)?;
                print_steps(&steps);
                image
            } else {
                bijection::rank_set_insertion(&p, k)?
            }
        }
        MapName::RankSetInsertionInverse => {
            no_trace(trace, "rank-set-insertion-inverse")?;
            bijection::rank_set_insertion_inverse(&p, require(k, "-k", "rank-set-insertion-inverse")?)?
        }
        MapName::CrankMap => {
            let k = require(k, "-k", "crank-map")?;
            if trace {
                let (image, steps) = bijection::crank_map_traced(&p, k)?;
                print_steps(&steps);
                image
            } else {
                bijection::crank_map(&p, k)?
            }
        }
        MapName::CrankMapInverse => {
            no_trace(trace, "crank-map-inverse")?;
            bijection::crank_map_inverse(&p, require(k, "-k", "crank-map-inverse")?)?
        }
        MapName::Mod2Adjoint | MapName::Mod2AdjointInverse => {
            let r = require(r, "-r", "mod2-adjoint")?;
            let g = Mod2Graph::from_partition(&p)
                .context("the 2-modular maps need pairwise-distinct odd parts")?;
            let image = match name {
                MapName::Mod2Adjoint => {
                    if trace {
                        let (image, steps) = bijection::mod2_adjoint_traced(&g, r)?;
                        print_steps(&steps);
                        image
                    } else {
                        bijection::mod2_adjoint(&g, r)?
                    }
                }
                _ => {
                    no_trace(trace, "mod2-adjoint-inverse")?;
                    bijection::mod2_adjoint_inverse(&g, r)?
                }
            };
            println!("{}", image.to_partition());
            return Ok(());
        }
        MapName::PseudoConjugate => {
            if trace {
                let (image, steps) = bijection::pseudo_conjugate_traced(&p);
                print_steps(&steps);
                image
            } else {
                bijection::pseudo_conjugate(&p)
            }
        }
    };
    println!("{image}");
    Ok(())
}

fn no_trace(trace: bool, map: &str) -> anyhow::Result<()> {
    if trace {
        bail!("--trace is not available for {map}; trace the forward map instead");
    }
    Ok(())
}

// ---- series ----------------------------------------------------------------

fn build_family(
    name: FamilyName,
    m: Option<i64>,
    l: Option<i64>,
    k: Option<i64>,
    r: Option<i64>,
    order: Option<u64>,
) -> anyhow::Result<Family> {
    let need = |v: Option<i64>, flag: &str| {
        v.ok_or_else(|| anyhow!("this family needs --{flag} VALUE"))
    };
    Ok(match name {
        FamilyName::RankEquals => Family::RankEquals { m: need(m, "m")? },
        FamilyName::RankEqualsBounded => {
            Family::RankEqualsBounded { m: need(m, "m")?, l: need(l, "l")? }
        }
        FamilyName::RankAtLeast => Family::RankAtLeast { m: need(m, "m")? },
        FamilyName::RankAtLeastBounded => {
            Family::RankAtLeastBounded { m: need(m, "m")?, l: need(l, "l")? }
        }
        FamilyName::RankSetMember => Family::RankSetMember { k: need(k, "k")? },
        FamilyName::RankSetMemberBounded => {
            Family::RankSetMemberBounded { k: need(k, "k")?, l: need(l, "l")? }
        }
        FamilyName::CrankAtMost => Family::CrankAtMost { k: need(k, "k")? },
        FamilyName::CrankAtMostBounded => {
            Family::CrankAtMostBounded { k: need(k, "k")?, l: need(l, "l")? }
        }
        FamilyName::CrankEquals => Family::CrankEquals { k: need(k, "k")? },
        FamilyName::CrankEqualsBounded => {
            Family::CrankEqualsBounded { k: need(k, "k")?, l: need(l, "l")? }
        }
        FamilyName::DistinctOdd => Family::DistinctOddClass,
        FamilyName::M2RankAtLeast => Family::M2RankAtLeast { r: need(r, "r")? },
        FamilyName::M2RankAtMost => Family::M2RankAtMost { r: need(r, "r")? },
        FamilyName::KRankAtLeast => {
            let order = order.ok_or_else(|| anyhow!("this family needs --order VALUE"))?;
            Family::KRankAtLeast { order, m: need(m, "m")? }
        }
        FamilyName::SelfPseudoConjugate => Family::SelfPseudoConjugate,
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_series(
    name: FamilyName,
    m: Option<i64>,
    l: Option<i64>,
    k: Option<i64>,
    r: Option<i64>,
    order: Option<u64>,
    trunc: i64,
    formula: Option<&str>,
) -> anyhow::Result<()> {
    let family = build_family(name, m, l, k, r, order)?;
    let spec = SeriesSpec::new(family, trunc);
    let census = genfun::oracle_series(&spec)?;
    let key = formula.map_or_else(|| genfun::default_formula(&family).to_string(), str::to_string);
    let closed = genfun::formula_series(&spec, &key)?;
    println!("family   {}", family.describe());
    println!("census   {}", census.render());
    println!("formula  {}   (catalog key {key})", closed.render());
    let diff = census.sub(&closed);
    match diff.terms().next() {
        None => println!("agreement through q^{trunc}: yes"),
        Some((e, _)) => println!(
            "agreement through q^{trunc}: NO — first difference at q^{e} ({} vs {})",
            census.coeff(e),
            closed.coeff(e)
        ),
    }
    Ok(())
}

// ---- verify ----------------------------------------------------------------

fn human_line(r: &IdentityReport) -> String {
    let status = match (r.gating, r.pass) {
        (true, true) => "ok    ",
        (true, false) => "FAIL  ",
        (false, true) => "probe+",
        (false, false) => "probe-",
    };
    let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let mut line = format!("{status} {:<10} {:<28}", r.id, params.join(" "));
    if let Some((lo, hi)) = r.verified_range {
        let _ = write!(line, " window [{lo}, {hi}]");
    }
    if let Some(mm) = &r.first_mismatch {
        let _ = write!(line, " mismatch at q^{}: {} vs {}", mm.exponent, mm.lhs, mm.rhs);
    }
    if let Some(err) = &r.error {
        let _ = write!(line, " error: {err}");
    }
    let _ = write!(line, " ({} ms)", r.elapsed_ms);
    line
}

fn cmd_verify(
    filter: Option<&str>,
    trunc: Option<i64>,
    json: bool,
    jobs: Option<usize>,
    out: Option<&std::path::Path>,
) -> anyhow::Result<ExitCode> {
    let jobs = jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, std::num::NonZeroUsize::get));
    let started = Instant::now();
    let reports = identity::run_suite(filter, trunc, jobs);
    let failures = identity::gating_failures(&reports);
    let passed = reports.iter().filter(|r| r.pass).count();

    let body = if json {
        let mut text = serde_json::to_string_pretty(&reports).context("serializing reports")?;
        text.push('\n');
        text
    } else {
        let mut text = String::new();
        for r in &reports {
            text.push_str(&human_line(r));
            text.push('\n');
        }
        let _ = writeln!(
            text,
            "checks: {}  passed: {}  failed: {}  gating failures: {}  elapsed: {:.1?}",
            reports.len(),
            passed,
            reports.len() - passed,
            failures,
            started.elapsed()
        );
        text
    };
    match out {
        Some(path) => {
            fs::write(path, &body).with_context(|| format!("writing {}", path.display()))?;
            eprintln!(
                "wrote {} report(s) to {}; gating failures: {failures}",
                reports.len(),
                path.display()
            );
        }
        None => print!("{body}"),
    }
    Ok(if failures == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

// ---- table -----------------------------------------------------------------

fn cmd_table(modulus: u64, n: u64) -> anyhow::Result<()> {
    let table = genfun::rank_crank_table(modulus, n)?;
    let total: u64 = table.rank_counts.iter().sum();
    println!("partitions of {n} by statistic residue (mod {modulus}); total {total}");
    println!("{:>8}  {:>12}  {:>12}", "residue", "rank", "crank");
    for residue in 0..modulus as usize {
        println!(
            "{:>8}  {:>12}  {:>12}",
            residue, table.rank_counts[residue], table.crank_counts[residue]
        );
    }
    let uniform = |counts: &[u64]| counts.iter().all(|&c| c == counts[0]);
    if uniform(&table.rank_counts) && uniform(&table.crank_counts) {
        println!("each residue class holds exactly {} partitions", total / modulus);
    }
    Ok(())
}

// ---- graph -----------------------------------------------------------------

fn cmd_graph(text: &str, mod2: bool) -> anyhow::Result<()> {
    let p = parse_partition(text)?;
    let rendered = if mod2 {
        Mod2Graph::from_partition(&p)
            .context("the 2-modular grid needs pairwise-distinct odd parts")?
            .render_grid()
    } else {
        p.render_ferrers()
    };
    if rendered.is_empty() {
        println!("(empty)");
    } else {
        println!("{rendered}");
    }
    Ok(())
}
