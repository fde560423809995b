//! Command-line front end for `floercalc`.
//!
//! Exit codes: 0 success, 1 domain failure (unsupported framing, invariant
//! violations), 2 schema or input errors, 3 verification mismatch.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use floercalc::builders::{self, Built, Flavor};
use floercalc::grading::{self, HfkTable};
use floercalc::modules::{check_d_relation, check_dd_relation, reduce};
use floercalc::pairing::{box_tensor_final, box_tensor_left};
use floercalc::{cfk, corpus, io, CfkComplex, Error, FillingModule, HfkMethod};
use rayon::prelude::*;

#[derive(Parser)]
#[command(name = "floercalc", version, about = "Bordered Floer computations for knot meridians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Check the invariants of a knot complex.
    Validate { path: String },
    /// Build a type-D or type-DD module from a knot complex.
    Build {
        path: String,
        #[arg(long, value_parser = Flavor::from_str)]
        flavor: Flavor,
        #[arg(short = 'f', long, allow_negative_numbers = true)]
        framing: i64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also run the structure-relation check; a failure exits with 3.
        #[arg(long)]
        check: bool,
    },
    /// Cancel unit edges of a type-DD module given as JSON.
    Reduce {
        path: PathBuf,
        /// Also absorb the length-one extras by a change of basis.
        #[arg(long)]
        absorb: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pair the reduced model at framing −n with the 0-filling, and optionally
    /// the result with the ∞-filling.
    Tensor {
        path: String,
        #[arg(long)]
        n: i64,
        /// Emit the final chain complex instead of the type-D module.
        #[arg(long = "final")]
        final_complex: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Knot Floer homology of the meridian, one row per spin^c summand.
    HfkMeridian {
        path: String,
        #[arg(long)]
        n: i64,
        #[arg(long, value_parser = HfkMethod::from_str, default_value = "grading")]
        method: HfkMethod,
        /// Run all three methods; any disagreement exits with 3.
        #[arg(long)]
        compare: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run relation checks and the three-way comparison over every corpus knot.
    VerifyCorpus {
        #[arg(long, value_delimiter = ',', default_values_t = [8i64, 10])]
        n: Vec<i64>,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

/// A failed command, carrying its exit code.
enum Failure {
    Domain(String),
    Schema(String),
    Mismatch(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Domain(_) => 1,
            Failure::Schema(_) => 2,
            Failure::Mismatch(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Domain(m) | Failure::Schema(m) | Failure::Mismatch(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Schema(s) => Failure::Schema(s.to_string()),
            other => Failure::Domain(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn corpus_dir() -> Option<PathBuf> {
    std::env::var_os("FLOERCALC_CORPUS").map(PathBuf::from)
}

/// Reads a knot complex from `path`. A path that does not exist is looked up
/// by file name in `FLOERCALC_CORPUS` and then in the bundled corpus.
fn load_cfk(path: &str) -> Result<CfkComplex, Failure> {
    let p = Path::new(path);
    let file = p.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
    let text = if p.exists() {
        Some(read(p)?)
    } else if let Some(dir) = corpus_dir().filter(|d| d.join(&file).exists()) {
        Some(read(&dir.join(&file))?)
    } else {
        None
    };
    match text {
        Some(t) => io::parse_cfk(&t).map_err(|e| Failure::Schema(format!("{path}: {e}"))),
        None => match corpus::load(&file) {
            Some(r) => r.map_err(|e| Failure::Schema(format!("{path}: {e}"))),
            None => Err(Failure::Schema(format!("{path}: no such file or corpus entry"))),
        },
    }
}

fn read(p: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(p).map_err(|e| Failure::Schema(format!("{}: {e}", p.display())))
}

fn emit(text: &str, out: Option<&Path>) -> Outcome {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Domain(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            let newline = if text.ends_with('\n') { "" } else { "\n" };
            match write!(stdout, "{text}{newline}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Domain(e.to_string())),
                _ => Ok(()),
            }
        }
    }
}

fn render_built(m: &Built, format: Format, title: &str) -> Result<String, Failure> {
    Ok(match (m, format) {
        (Built::DD(m), Format::Json) => io::dd_to_json(m),
        (Built::DD(m), Format::Dot) => io::dd_to_dot(m, title),
        (Built::D(m), Format::Json) => io::d_to_json(m),
        (Built::D(m), Format::Dot) => io::d_to_dot(m, title),
        (_, Format::Text) => return Err(Failure::Schema("modules are written as json or dot".into())),
    })
}

fn check_built(m: &Built) -> Outcome {
    let failures: Vec<String> = match m {
        Built::DD(m) => check_dd_relation(m).failures.iter().map(|f| format!("{} -> {}", f.from, f.to)).collect(),
        Built::D(m) => check_d_relation(m).failures.iter().map(|f| format!("{} -> {}", f.from, f.to)).collect(),
    };
    if failures.is_empty() {
        eprintln!("structure relation holds");
        Ok(())
    } else {
        Err(Failure::Mismatch(format!("structure relation fails at {}", failures.join(", "))))
    }
}

fn cmd_validate(path: &str) -> Outcome {
    let c = load_cfk(path)?;
    let report = cfk::validate(&c);
    if report.is_valid() {
        println!("{}: valid ({} generators, {} arrows)", c.name, c.generators.len(), c.arrows.len());
        return Ok(());
    }
    for v in &report.violations {
        println!("{}: {}", v.invariant, v.witness);
    }
    Err(Failure::Domain(format!("{}: {} invariant violation(s)", c.name, report.violations.len())))
}

fn render_table(name: &str, n: i64, table: &HfkTable, format: Format) -> String {
    if format == Format::Json {
        let rows: Vec<_> = table.iter().map(|(k, r)| serde_json::json!({ "k": k, "rank": r })).collect();
        let doc = serde_json::json!({ "knot": name, "n": n, "rows": rows });
        return serde_json::to_string_pretty(&doc).expect("tables serialize");
    }
    let mut s = String::from("k\trank\n");
    for (k, r) in table {
        let _ = writeln!(s, "{k}\t{r}");
    }
    s
}

fn cmd_hfk(path: &str, n: i64, method: HfkMethod, compare: bool, format: Format) -> Outcome {
    if format == Format::Dot {
        return Err(Failure::Schema("tables are written as text or json".into()));
    }
    let c = load_cfk(path)?;
    if !compare {
        let table = grading::hfk_meridian(&c, n, method)?;
        return emit(&render_table(&c.name, n, &table, format), None);
    }
    let (tables, mismatches) = grading::compare_methods(&c, n)?;
    emit(&render_table(&c.name, n, &tables[&HfkMethod::Oracle], format), None)?;
    if mismatches.is_empty() {
        eprintln!("grading, planar and oracle agree");
        Ok(())
    } else {
        for m in &mismatches {
            println!("{m}");
        }
        Err(Failure::Mismatch(format!("{} differing row(s)", mismatches.len())))
    }
}

fn cmd_tensor(path: &str, n: i64, final_complex: bool, format: Format, out: Option<&Path>) -> Outcome {
    let c = load_cfk(path)?;
    let dd = builders::build_dd_reduced(&c, -n)?;
    let cfd = box_tensor_left(&FillingModule::h0(), &dd)?;
    if !final_complex {
        let text = render_built(&Built::D(cfd), format, &c.name)?;
        return emit(&text, out);
    }
    if format != Format::Json {
        return Err(Failure::Schema("the final complex is written as json".into()));
    }
    let complex = box_tensor_final(&FillingModule::hinf(), &cfd)?;
    emit(&io::complex_to_json(&complex), out)
}

fn cmd_reduce(path: &Path, absorb: bool, format: Format, out: Option<&Path>) -> Outcome {
    let m = io::parse_dd(&read(path)?).map_err(|e| Failure::Schema(format!("{}: {e}", path.display())))?;
    let reduced = if absorb { builders::reduce_and_absorb(&m)? } else { reduce(&m)? };
    eprintln!("{} -> {} generators", m.generators.len(), reduced.generators.len());
    emit(&render_built(&Built::DD(reduced), format, "reduced")?, out)
}

/// All knots of the corpus in use: every `*.json` of `FLOERCALC_CORPUS` when
/// set, otherwise the bundled complexes.
fn corpus_knots() -> Result<Vec<CfkComplex>, Failure> {
    let Some(dir) = corpus_dir() else {
        return Ok(corpus::all());
    };
    let entries = std::fs::read_dir(&dir).map_err(|e| Failure::Schema(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| io::parse_cfk(&read(p)?).map_err(|e| Failure::Schema(format!("{}: {e}", p.display()))))
        .collect()
}

fn verify_one(c: &CfkComplex, n: i64) -> Result<(), String> {
    let dd = builders::build_dd_reduced(c, -n).map_err(|e| e.to_string())?;
    if !check_dd_relation(&dd).passes() {
        return Err("reduced model fails the structure relation".into());
    }
    let (_, mismatches) = grading::compare_methods(c, n).map_err(|e| e.to_string())?;
    if mismatches.is_empty() {
        Ok(())
    } else {
        Err(mismatches.join("; "))
    }
}

fn cmd_verify_corpus(ns: &[i64], jobs: Option<usize>) -> Outcome {
    let knots = corpus_knots()?;
    let cases: Vec<(&CfkComplex, i64)> = knots.iter().flat_map(|c| ns.iter().map(move |&n| (c, n))).collect();
    let run = || cases.par_iter().map(|&(c, n)| verify_one(c, n)).collect::<Vec<_>>();
    let results = match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Failure::Domain(e.to_string()))?
            .install(run),
        None => run(),
    };
    let mut failed = 0;
    for ((c, n), r) in cases.iter().zip(&results) {
        match r {
            Ok(()) => println!("PASS {} n={n}", c.name),
            Err(e) => {
                failed += 1;
                println!("FAIL {} n={n}: {e}", c.name);
            }
        }
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Mismatch(format!("{failed} of {} cases failed", cases.len())))
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Validate { path } => cmd_validate(&path),
        Command::Build { path, flavor, framing, format, out, check } => {
            let c = load_cfk(&path)?;
            let m = builders::build(&c, framing, flavor)?;
            if check {
                check_built(&m)?;
            }
            let title = format!("{}_{}_f{framing}", c.name, flavor.name());
            emit(&render_built(&m, format, &title)?, out.as_deref())
        }
        Command::Reduce { path, absorb, format, out } => cmd_reduce(&path, absorb, format, out.as_deref()),
        Command::Tensor { path, n, final_complex, format, out } => {
            cmd_tensor(&path, n, final_complex, format, out.as_deref())
        }
        Command::HfkMeridian { path, n, method, compare, format } => cmd_hfk(&path, n, method, compare, format),
        Command::VerifyCorpus { n, jobs } => cmd_verify_corpus(&n, jobs),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
