//! Command-line driver: enumerates involution classes of GL_n over small
//! finite fields, runs breadth-first distance censuses and diameter
//! computations, measures distances, materializes verified distance
//! witnesses with emitted certificates, and sweeps the built-in grid of
//! closed-form verifications.
//!
//! Every subcommand exits 0 exactly when the requested computation
//! succeeded and every executed comparison passed; mismatches and
//! infeasible requests exit nonzero with diagnostics on stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use cigraph::census::verify_class;
use cigraph::format::{
    write_certificate, write_class_dump, write_matrix_dump, CensusReport, GridDoc, UnionReport,
    VerifyDoc, WitnessDoc,
};
use cigraph::gf::{Field, FieldSpec};
use cigraph::graph::{
    all_involutions_census, bfs_census, bounded_distance, distance, DistanceBound,
    PathCertificate,
};
use cigraph::involutions::{
    canonical_t, enumerate_class, random_member, transposed_t, ClassSpec, Involution,
    DEFAULT_CLASS_CAP,
};
use cigraph::witnesses::{
    path_n_ge_4k, path_to_transpose, report_distance3, witness_distance4_char2, Verification,
    VerifiedBound, WitnessError, WitnessReport,
};

#[derive(Parser)]
#[command(
    name = "cigraph",
    version,
    about = "Commuting involution graphs of general linear groups over small finite fields"
)]
struct Cli {
    /// Worker threads for parallel scans (default: one per CPU, or the
    /// RAYON_NUM_THREADS environment variable).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FieldArgs {
    /// Field characteristic (a prime).
    #[arg(long)]
    p: u16,
    /// Extension degree; the field has order p^e.
    #[arg(long, default_value_t = 1)]
    e: u32,
    /// Monic modulus coefficients, constant term first, comma separated
    /// (defaults to the canonical modulus).
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    poly: Option<Vec<u8>>,
}

impl FieldArgs {
    fn field(&self) -> Result<Field> {
        let spec = match &self.poly {
            Some(poly) => FieldSpec::with_modulus(self.p, self.e, poly)?,
            None => FieldSpec::new(self.p, self.e)?,
        };
        Ok(Arc::new(spec))
    }
}

#[derive(Args)]
struct ClassArgs {
    /// Matrix dimension n.
    #[arg(long)]
    n: usize,
    /// Rank of x - 1; selects the conjugacy class X_k.
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    field: FieldArgs,
    /// Abort when an enumeration would exceed this many members.
    #[arg(long, default_value_t = DEFAULT_CLASS_CAP)]
    cap: usize,
}

impl ClassArgs {
    fn spec(&self) -> Result<ClassSpec> {
        Ok(ClassSpec::new(&self.field.field()?, self.n, self.k)?)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WitnessCase {
    /// Odd characteristic, 2k <= n < 4k: a member at verified distance >= 3
    /// from the canonical representative.
    Distance3Odd,
    /// Characteristic two, 2k <= n < 4k (except n = 2k with odd k): a member
    /// at verified distance >= 3.
    Distance3Char2,
    /// Characteristic two, n = 2k with odd k: d(t, t^T) >= 4 by exhaustive
    /// scan, plus the explicit length-4 walk when k >= 3.
    Distance4Char2,
    /// 4k <= n: a validated walk of length at most 2 from the
    /// representative to a seeded pseudo-random member.
    Wide,
}

impl WitnessCase {
    fn name(self) -> &'static str {
        match self {
            WitnessCase::Distance3Odd => "distance3-odd",
            WitnessCase::Distance3Char2 => "distance3-char2",
            WitnessCase::Distance4Char2 => "distance4-char2",
            WitnessCase::Wide => "wide",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate a conjugacy class of involutions.
    Class {
        #[command(flatten)]
        class: ClassArgs,
        /// Write every member to this file as a class dump.
        #[arg(long)]
        list: Option<PathBuf>,
    },
    /// Breadth-first distance census of a class graph from the canonical
    /// representative.
    Census {
        #[command(flatten)]
        class: ClassArgs,
        /// Refine the census by the overlap dim([V,x] ∩ [V,t]).
        #[arg(long)]
        overlap: bool,
        /// Write the JSON report to this file.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write the CSV projection (distance,m,count rows) to this file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Exact diameter of a class graph.
    Diameter {
        #[command(flatten)]
        class: ClassArgs,
    },
    /// Distance between the canonical representative and a second member.
    Distance {
        #[command(flatten)]
        class: ClassArgs,
        /// Measure to the transposed representative.
        #[arg(long, conflicts_with = "to")]
        transpose: bool,
        /// Measure to the member stored in this matrix file.
        #[arg(long, required_unless_present = "transpose")]
        to: Option<PathBuf>,
        /// Decide d <= 3 through the distance-one spheres instead of
        /// enumerating the whole class.
        #[arg(long)]
        bounded: bool,
        /// Probe-order seed for the bounded mode.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Census and diameter of the union of every involution class.
    AllInvolutions {
        /// Matrix dimension n.
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        field: FieldArgs,
        /// Abort when the union would exceed this many vertices.
        #[arg(long, default_value_t = DEFAULT_CLASS_CAP)]
        cap: usize,
        /// Write the JSON report to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Construct a distance witness and verify its bound exhaustively.
    Witness {
        /// Which witness family to build.
        #[arg(long, value_enum)]
        case: WitnessCase,
        #[command(flatten)]
        class: ClassArgs,
        /// Seed for the pseudo-random target of the wide case.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the validated certificate (or the witness matrices when
        /// the bound comes from a scan) to this file.
        #[arg(long)]
        emit: Option<PathBuf>,
        /// Write the JSON report to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Compare every applicable closed form against an exhaustive census.
    Verify {
        /// Sweep the built-in grid of feasible parameters instead of a
        /// single class.
        #[arg(long)]
        grid: bool,
        /// Matrix dimension n.
        #[arg(long, required_unless_present = "grid")]
        n: Option<usize>,
        /// Rank of x - 1; selects the conjugacy class X_k.
        #[arg(long, required_unless_present = "grid")]
        k: Option<usize>,
        /// Field characteristic (a prime).
        #[arg(long, required_unless_present = "grid")]
        p: Option<u16>,
        /// Extension degree; the field has order p^e.
        #[arg(long, default_value_t = 1)]
        e: u32,
        /// Monic modulus coefficients, constant term first, comma separated.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        poly: Option<Vec<u8>>,
        /// Skip grid entries whose class exceeds this many members.
        #[arg(long, default_value_t = DEFAULT_CLASS_CAP)]
        cap: usize,
        /// Write the JSON report to this file.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write the CSV projection to this file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

/// Version tag of the built-in verification grid below; reported in the
/// sweep document so runs are self-describing.
const GRID_VERSION: u32 = 1;

/// Built-in verification grid: (n, k, p, e).  Entries whose class exceeds
/// the cap are skipped with a notice rather than failing the sweep.
const GRID: &[(usize, usize, u16, u32)] = &[
    (3, 1, 2, 1),
    (3, 1, 3, 1),
    (3, 1, 2, 2),
    (3, 1, 5, 1),
    (4, 1, 2, 1),
    (4, 2, 2, 1),
    (4, 1, 3, 1),
    (4, 2, 3, 1),
    (4, 3, 3, 1),
    (4, 1, 2, 2),
    (4, 2, 2, 2),
    (5, 1, 2, 1),
    (5, 2, 2, 1),
    (5, 1, 3, 1),
    (5, 2, 3, 1),
];

fn main() {
    let cli = Cli::parse();
    if let Some(workers) = cli.workers {
        // Ignore the error if a global pool already exists; thread count is
        // advisory and never affects results.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global();
    }
    if let Err(err) = run(cli.command) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Class { class, list } => run_class(&class, list.as_deref()),
        Command::Census {
            class,
            overlap,
            json,
            csv,
        } => run_census(&class, overlap, json.as_deref(), csv.as_deref()),
        Command::Diameter { class } => run_diameter(&class),
        Command::Distance {
            class,
            transpose,
            to,
            bounded,
            seed,
        } => run_distance(&class, transpose, to.as_deref(), bounded, seed),
        Command::AllInvolutions {
            n,
            field,
            cap,
            json,
        } => run_all_involutions(n, &field, cap, json.as_deref()),
        Command::Witness {
            case,
            class,
            seed,
            emit,
            json,
        } => run_witness(case, &class, seed, emit.as_deref(), json.as_deref()),
        Command::Verify {
            grid,
            n,
            k,
            p,
            e,
            poly,
            cap,
            json,
            csv,
        } => {
            if grid {
                run_verify_grid(cap, json.as_deref(), csv.as_deref())
            } else {
                let class = ClassArgs {
                    n: n.expect("clap enforces --n without --grid"),
                    k: k.expect("clap enforces --k without --grid"),
                    field: FieldArgs {
                        p: p.expect("clap enforces --p without --grid"),
                        e,
                        poly,
                    },
                    cap,
                };
                run_verify_one(&class, json.as_deref(), csv.as_deref())
            }
        }
    }
}

fn write_file(path: &Path, contents: &str, what: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {what} to {}", path.display()))?;
    println!("wrote {what} to {}", path.display());
    Ok(())
}

fn class_banner(spec: &ClassSpec) -> String {
    format!(
        "X_{} of GL_{} over {}",
        spec.k(),
        spec.n(),
        spec.field()
    )
}

fn run_class(class: &ClassArgs, list: Option<&Path>) -> Result<()> {
    let spec = class.spec()?;
    let members = enumerate_class(&spec, class.cap)?;
    println!("{}: {} members", class_banner(&spec), members.len());
    if let Some(path) = list {
        write_file(path, &write_class_dump(&spec, &members), "class dump")?;
    }
    Ok(())
}

fn run_census(
    class: &ClassArgs,
    overlap: bool,
    json: Option<&Path>,
    csv: Option<&Path>,
) -> Result<()> {
    let spec = class.spec()?;
    let start = Instant::now();
    let census = bfs_census(&spec, &canonical_t(&spec), overlap, class.cap)?;
    let runtime = start.elapsed();
    println!(
        "census of {} from the canonical representative:",
        class_banner(&spec)
    );
    for (d, count) in &census.counts {
        println!("  distance {d}: {count}");
    }
    if let Some(cells) = &census.cells {
        println!("refined by overlap with [V, t]:");
        for (&(d, m), count) in cells {
            println!("  distance {d}, overlap {m}: {count}");
        }
    }
    println!("diameter: {}", census.eccentricity);
    println!("connected: {}", census.connected());
    let report = CensusReport::new(&spec, &census, runtime);
    if let Some(path) = json {
        write_file(path, &report.to_json(), "JSON report")?;
    }
    if let Some(path) = csv {
        write_file(path, &report.to_csv(), "CSV report")?;
    }
    Ok(())
}

fn run_diameter(class: &ClassArgs) -> Result<()> {
    let spec = class.spec()?;
    let census = bfs_census(&spec, &canonical_t(&spec), false, class.cap)?;
    if !census.connected() {
        bail!(
            "{} is disconnected: {} vertices unreached",
            class_banner(&spec),
            census.unreached
        );
    }
    println!("diameter of {}: {}", class_banner(&spec), census.eccentricity);
    Ok(())
}

fn run_distance(
    class: &ClassArgs,
    transpose: bool,
    to: Option<&Path>,
    bounded: bool,
    seed: u64,
) -> Result<()> {
    let spec = class.spec()?;
    let t = canonical_t(&spec);
    let target = if transpose {
        transposed_t(&spec)
    } else {
        let path = to.expect("clap enforces --to without --transpose");
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading matrix file {}", path.display()))?;
        let mat = cigraph::format::parse_matrix(&text)?;
        Involution::new(&spec, mat).context("the matrix in --to is not a member of the class")?
    };
    if bounded {
        match bounded_distance(&spec, &t, &target, class.cap, seed)? {
            DistanceBound::Exact(d) => println!("distance: {d}"),
            DistanceBound::ExceedsThree => {
                println!("distance: at least 4 (no walk of length <= 3 exists)")
            }
        }
    } else {
        let d = distance(&spec, &t, &target, class.cap)?;
        println!("distance: {d}");
    }
    Ok(())
}

fn run_all_involutions(n: usize, field: &FieldArgs, cap: usize, json: Option<&Path>) -> Result<()> {
    let f = field.field()?;
    let start = Instant::now();
    let census = all_involutions_census(&f, n, cap)?;
    let runtime = start.elapsed();
    println!("union of all involution classes of GL_{n} over {f}:");
    for (k, size) in &census.class_sizes {
        println!(
            "  rank {k}: {size} members, representative eccentricity {}",
            census.eccentricities[k]
        );
    }
    println!("vertices: {}", census.vertex_count());
    println!("diameter: {}", census.diameter);
    if let Some(path) = json {
        let report = UnionReport::new(&f, n, &census, runtime);
        write_file(path, &report.to_json(), "JSON report")?;
    }
    Ok(())
}

fn print_witness_report(case: WitnessCase, spec: &ClassSpec, report: &WitnessReport) {
    println!("witness case {} for {}", case.name(), class_banner(spec));
    println!("  {}", report.label);
    let bound_line = match report.bound {
        VerifiedBound::AtLeast(d) => format!("distance at least {d}"),
        VerifiedBound::AtMost(d) => format!("distance at most {d}"),
    };
    let evidence = match report.verification {
        Verification::ExhaustiveScan { pairs } => {
            format!("exhaustive scan over {pairs} pairs")
        }
        Verification::Certificate { length } => {
            format!("validated walk of length {length}")
        }
    };
    println!("  verified: {bound_line} ({evidence})");
    println!("  runtime: {} ms", report.runtime.as_millis());
}

fn run_witness(
    case: WitnessCase,
    class: &ClassArgs,
    seed: u64,
    emit: Option<&Path>,
    json: Option<&Path>,
) -> Result<()> {
    let spec = class.spec()?;
    let (report, certificate): (WitnessReport, Option<PathCertificate>) = match case {
        WitnessCase::Distance3Odd | WitnessCase::Distance3Char2 => {
            let want_char2 = case == WitnessCase::Distance3Char2;
            if spec.char_two() != want_char2 {
                bail!(
                    "case {} does not apply to {}",
                    case.name(),
                    class_banner(&spec)
                );
            }
            (report_distance3(&spec)?, None)
        }
        WitnessCase::Distance4Char2 => {
            let report = witness_distance4_char2(&spec)?;
            match path_to_transpose(&spec) {
                Ok(cert) => (report, Some(cert)),
                Err(WitnessError::BranchUnavailable { reason }) => {
                    println!("no explicit walk: {reason}");
                    (report, None)
                }
                Err(err) => return Err(err.into()),
            }
        }
        WitnessCase::Wide => {
            let start = Instant::now();
            let t = canonical_t(&spec);
            let x = random_member(&spec, seed);
            let cert = path_n_ge_4k(&t, &x)?;
            cert.validate(&spec)?;
            let report = WitnessReport {
                label: format!(
                    "d(t, x) <= {} for the seed-{seed} member of {}",
                    cert.length(),
                    class_banner(&spec)
                ),
                witnesses: vec![t.into_mat(), x.into_mat()],
                bound: VerifiedBound::AtMost(cert.length() as u32),
                verification: Verification::Certificate {
                    length: cert.length(),
                },
                runtime: start.elapsed(),
            };
            (report, Some(cert))
        }
    };
    print_witness_report(case, &spec, &report);
    let mut doc = WitnessDoc::new(case.name(), &spec, &report);
    if let Some(cert) = &certificate {
        println!(
            "  explicit walk: {} vertices, length {}",
            cert.vertices().len(),
            cert.length()
        );
        doc.certificate_length = Some(cert.length());
    }
    if let Some(path) = emit {
        match &certificate {
            Some(cert) => write_file(path, &write_certificate(&spec, cert)?, "certificate")?,
            None => write_file(
                path,
                &write_matrix_dump(spec.field(), &report.witnesses),
                "witness matrices",
            )?,
        }
    }
    if let Some(path) = json {
        write_file(path, &doc.to_json(), "JSON report")?;
    }
    Ok(())
}

fn print_verify_items(doc: &VerifyDoc) -> usize {
    let mut failures = 0;
    for item in &doc.items {
        if item.pass {
            println!("  [PASS] {}: {}", item.label, item.actual);
        } else {
            failures += 1;
            println!(
                "  [FAIL] {}: expected {}, observed {}",
                item.label, item.expected, item.actual
            );
        }
    }
    failures
}

fn run_verify_one(class: &ClassArgs, json: Option<&Path>, csv: Option<&Path>) -> Result<()> {
    let spec = class.spec()?;
    let start = Instant::now();
    let report = verify_class(&spec, class.cap)?;
    let runtime = start.elapsed();
    println!("verification of {}:", class_banner(&spec));
    let doc = VerifyDoc::new(&spec, &report, runtime);
    let failures = print_verify_items(&doc);
    if let Some(path) = json {
        write_file(path, &doc.to_json(), "JSON report")?;
    }
    if let Some(path) = csv {
        write_file(path, &doc.to_csv(), "CSV report")?;
    }
    if failures > 0 {
        bail!("{failures} of {} comparisons failed", doc.items.len());
    }
    println!("verification passed ({} comparisons)", doc.items.len());
    Ok(())
}

fn run_verify_grid(cap: usize, json: Option<&Path>, csv: Option<&Path>) -> Result<()> {
    let start = Instant::now();
    let mut docs = Vec::new();
    let mut failures = 0usize;
    for &(n, k, p, e) in GRID {
        let field = Arc::new(FieldSpec::new(p, e)?);
        let spec = ClassSpec::new(&field, n, k)?;
        if let Some(size) = cigraph::census::class_size(&spec) {
            if size > cap as u128 {
                println!(
                    "skipped {}: class size {size} exceeds the cap {cap}",
                    class_banner(&spec)
                );
                continue;
            }
        }
        println!("verification of {}:", class_banner(&spec));
        let entry_start = Instant::now();
        let report = verify_class(&spec, cap)?;
        let doc = VerifyDoc::new(&spec, &report, entry_start.elapsed());
        failures += print_verify_items(&doc);
        docs.push(doc);
    }
    let executed = docs.len();
    let comparisons: usize = docs.iter().map(|d| d.items.len()).sum();
    let grid_doc = GridDoc::new(docs, GRID_VERSION, start.elapsed());
    if let Some(path) = json {
        write_file(path, &grid_doc.to_json(), "JSON report")?;
    }
    if let Some(path) = csv {
        let mut out = String::from("n,k,q,label,expected,actual,pass\n");
        for doc in &grid_doc.reports {
            let q = (doc.spec.p as u64).pow(doc.spec.e);
            for item in &doc.items {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    doc.spec.n,
                    doc.spec.k.expect("grid entries are single classes"),
                    q,
                    item.label.replace(',', ";"),
                    item.expected,
                    item.actual,
                    item.pass
                ));
            }
        }
        write_file(path, &out, "CSV report")?;
    }
    if failures > 0 {
        bail!("{failures} comparisons failed across the grid");
    }
    println!(
        "grid verification passed ({executed} classes, {comparisons} comparisons)"
    );
    Ok(())
}
