use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use sharppoly::constructor::{construct, pell_degrees, scan_uniqueness};
use sharppoly::diagram::{diagram_of, structural_check, DiagramDisplay};
use sharppoly::exactpoly::{invariant_even, invariant_sharp, minimal_term_count, verify};
use sharppoly::harness::corpus::{self, A143105, A143106};
use sharppoly::harness::{cache, compare, fingerprint, load, merge, to_json, Backend, RunManifest, SearchMode, SearchReport};
use sharppoly::mipsearch::{enumerate_mip, MipConfig};
use sharppoly::nullsearch::{default_constraints, enumerate_sharp, enumerate_with_terms, SearchConfig, SearchError, ShardSpec};
use sharppoly::BivariatePoly;

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DISAGREE: u8 = 3;
const EXIT_REGRESSION: u8 = 4;

#[derive(Parser)]
#[command(name = "sharppoly", version, about = "Sharp polynomials constant on x + y = 1")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Nullspace,
    Mip,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SequenceName {
    A143105,
    A143106,
    Pell,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate members of H(2, d) with a given number of terms.
    Enumerate {
        #[arg(long)]
        degree: u32,
        /// Defaults to the sharp count.
        #[arg(long)]
        terms: Option<usize>,
        #[arg(long, value_enum, default_value = "nullspace")]
        backend: BackendArg,
        #[arg(long, default_value = "0/1")]
        shard: ShardSpec,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Leave timings and host details out of the manifest.
        #[arg(long)]
        reproducible: bool,
        /// Skip the comparison with the embedded fixtures.
        #[arg(long)]
        no_corpus_check: bool,
    },
    /// Check membership and sharpness of one polynomial.
    Verify {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        degree: u32,
    },
    /// Print the invariant polynomial f_d.
    Invariant {
        #[arg(long)]
        degree: u32,
        /// Even degree version, which has a -y^d term.
        #[arg(long)]
        even: bool,
    },
    /// Noninvariant sharp polynomials reachable by substitution.
    Construct {
        #[arg(long)]
        degree: u32,
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
    /// Run the substitution procedure on every odd degree up to a bound.
    Scan {
        #[arg(long)]
        max_degree: u32,
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
    /// Sign diagram of the quotient by x + y - 1.
    Diagram {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        degree: u32,
    },
    /// Degree sequences.
    Sequences {
        #[arg(long, value_enum)]
        name: SequenceName,
        #[arg(long)]
        count: Option<usize>,
        /// Recompute the uniqueness lists with the substitution scan.
        #[arg(long)]
        compute: bool,
    },
    /// Merge shard fragments written with --format json.
    Merge {
        #[arg(required = true)]
        fragments: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate every fixture degree up to a bound and compare.
    Corpus {
        #[arg(long, default_value_t = 11)]
        max_degree: u32,
    },
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

macro_rules! fail {
    ($e:expr) => {
        |e| Failure::new(EXIT_FAILURE, format!("{}: {e}", $e))
    };
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    match run(cli, argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn parse_poly(s: &str) -> Result<BivariatePoly, Failure> {
    s.parse().map_err(|e| Failure::new(EXIT_USAGE, format!("cannot parse polynomial {s:?}: {e}")))
}

fn run(cli: Cli, argv: Vec<String>) -> Outcome {
    match cli.command {
        Command::Enumerate { degree, terms, backend, shard, jobs, format, out, reproducible, no_corpus_check } => {
            let opts = EnumerateOpts { degree, terms, backend, shard, jobs, reproducible, corpus: !no_corpus_check };
            enumerate(&opts, format, out.as_deref(), argv)
        }
        Command::Verify { poly, degree } => {
            let p = parse_poly(&poly)?;
            let s = verify(&p, degree);
            println!("member: {}", s.member);
            println!("sharp: {}", s.sharp);
            println!("terms: {} (minimal {})", s.terms, s.minimal_terms);
            for f in &s.failures {
                println!("failure: {f}");
            }
            Ok(())
        }
        Command::Invariant { degree, even } => {
            let p = if even { invariant_even(degree) } else { invariant_sharp(degree) };
            println!("{}", p.map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?);
            Ok(())
        }
        Command::Construct { degree, depth } => {
            for c in construct(degree, depth).map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))? {
                println!("{}", c.polynomial);
            }
            Ok(())
        }
        Command::Scan { max_degree, depth } => {
            let degrees: Vec<u32> = (1..=max_degree).step_by(2).collect();
            let records = scan_uniqueness(&degrees, depth).map_err(fail!("scan"))?;
            let mut stdout = std::io::stdout().lock();
            for r in records {
                writeln!(stdout, "{}", serde_json::to_string(&r).expect("serializable")).map_err(fail!("stdout"))?;
            }
            Ok(())
        }
        Command::Diagram { poly, degree } => {
            let p = parse_poly(&poly)?;
            let diag = diagram_of(&p, degree).map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
            let check = structural_check(&p, degree).map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
            print!("{}", DiagramDisplay { diagram: &diag, sinks: &check.analysis.sinks });
            let list = |s: &std::collections::BTreeSet<sharppoly::Monomial>| {
                s.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(", ")
            };
            println!("sinks ({}): {}", check.analysis.sink_count, list(&check.analysis.sinks));
            println!("sources: {}", list(&check.analysis.sources));
            for v in &check.violations {
                println!("violation: {v}");
            }
            Ok(())
        }
        Command::Sequences { name, count, compute } => sequences(name, count, compute),
        Command::Merge { fragments, out } => {
            let mut reports = Vec::new();
            for path in &fragments {
                let (r, _) = load(path).map_err(fail!(path.display()))?;
                reports.push(r);
            }
            let merged = merge(&reports).map_err(fail!("merge"))?;
            emit(&to_json(&merged, None), out.as_deref())
        }
        Command::Corpus { max_degree } => run_corpus(max_degree),
    }
}

struct EnumerateOpts {
    degree: u32,
    terms: Option<usize>,
    backend: BackendArg,
    shard: ShardSpec,
    jobs: Option<usize>,
    reproducible: bool,
    corpus: bool,
}

fn run_backend(opts: &EnumerateOpts, backend: Backend) -> Result<SearchReport, Failure> {
    let d = opts.degree;
    let n = opts.terms.unwrap_or_else(|| minimal_term_count(d));
    let sharp = n == minimal_term_count(d);
    let unsharded = opts.shard == ShardSpec::default();
    let cache_dir = cache::cache_dir().filter(|_| unsharded);
    let mode = if sharp { SearchMode::Sharp } else { SearchMode::Isolated };
    let fp = fingerprint(d, n, mode, default_constraints(d, mode));
    if let Some(hit) = cache_dir.as_deref().and_then(|dir| cache::lookup(dir, &fp, backend)) {
        return Ok(hit);
    }
    let report = match backend {
        Backend::Nullspace => {
            let cfg = SearchConfig { shard: opts.shard, jobs: opts.jobs, ..Default::default() };
            if sharp { enumerate_sharp(d, &cfg) } else { enumerate_with_terms(d, n, &cfg) }
                .map_err(search_failure)?
        }
        Backend::Mip => {
            if !sharp {
                return Err(Failure::new(EXIT_USAGE, "the mip backend only searches for sharp polynomials"));
            }
            if !unsharded {
                return Err(Failure::new(EXIT_USAGE, "the mip backend does not take --shard"));
            }
            enumerate_mip(d, &MipConfig { jobs: opts.jobs, ..Default::default() }).map_err(search_failure)?
        }
    };
    if let Some(dir) = cache_dir {
        cache::store(&dir, &report).map_err(fail!("cache"))?;
    }
    Ok(report)
}

fn search_failure(e: SearchError) -> Failure {
    let code = match e {
        SearchError::Degree(_) | SearchError::TermCount { .. } => EXIT_USAGE,
        _ => EXIT_FAILURE,
    };
    Failure::new(code, e.to_string())
}

fn enumerate(opts: &EnumerateOpts, format: Format, out: Option<&Path>, argv: Vec<String>) -> Outcome {
    let report = match opts.backend {
        BackendArg::Nullspace => run_backend(opts, Backend::Nullspace)?,
        BackendArg::Mip => run_backend(opts, Backend::Mip)?,
        BackendArg::Both => {
            let a = run_backend(opts, Backend::Nullspace)?;
            let b = run_backend(opts, Backend::Mip)?;
            let cmp = compare(&a, &b);
            if !cmp.agree() {
                for p in &cmp.only_first {
                    eprintln!("only nullspace: {p}");
                }
                for p in &cmp.only_second {
                    eprintln!("only mip: {p}");
                }
                return Err(Failure::new(EXIT_DISAGREE, "backends disagree"));
            }
            a
        }
    };
    let config = json!({
        "degree": opts.degree,
        "terms": report.n_terms,
        "backend": match opts.backend { BackendArg::Nullspace => "nullspace", BackendArg::Mip => "mip", BackendArg::Both => "both" },
        "shard": opts.shard.to_string(),
        "constraints": report.constraints.to_string(),
    });
    let manifest = RunManifest::new(argv, config, &report.timing, opts.reproducible);
    let text = match format {
        Format::Json => to_json(&report, Some(&manifest)),
        Format::Csv => format!(
            "degree,n_terms,backend,raw_count,canonical,families\n{},{},{},{},{},{}\n",
            report.degree,
            report.n_terms,
            report.backend,
            report.raw_count,
            report.polynomials.len(),
            report.families.len()
        ),
        Format::Text => text_report(&report),
    };
    emit(&text, out)?;
    if opts.corpus && report.shard_map.is_complete() {
        let mismatches = corpus::check_report(&report);
        if !mismatches.is_empty() {
            for m in &mismatches {
                eprintln!("mismatch in {} ({}): expected {}, got {}", m.what, m.source, m.expected, m.actual);
            }
            return Err(Failure::new(EXIT_REGRESSION, "result differs from the reference data"));
        }
    }
    Ok(())
}

fn text_report(r: &SearchReport) -> String {
    let mut s = format!(
        "degree {}, {} terms, backend {}: {} polynomials up to swap, raw count {}, {} families\n",
        r.degree,
        r.n_terms,
        r.backend,
        r.polynomials.len(),
        r.raw_count,
        r.families.len()
    );
    if !r.shard_map.is_complete() {
        let shards: Vec<String> = r.shard_map.shards.iter().map(|s| s.to_string()).collect();
        s.push_str(&format!("partial run: shards {} of {} work units\n", shards.join(","), r.shard_map.total_units));
    }
    for p in &r.polynomials {
        s.push_str(&format!("{p}\n"));
    }
    for f in &r.families {
        s.push_str(&format!("family on {} (kernel dimension {}): {}\n", f.support, f.nullspace_dim, f.members[0]));
    }
    s
}

fn emit(text: &str, out: Option<&Path>) -> Outcome {
    match out {
        Some(path) => std::fs::write(path, text).map_err(fail!(path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(fail!("stdout"))
        }
    }
}

fn sequences(name: SequenceName, count: Option<usize>, compute: bool) -> Outcome {
    let values: Vec<String> = match name {
        SequenceName::Pell => pell_degrees(count.unwrap_or(5)).iter().map(|v| v.to_string()).collect(),
        SequenceName::A143105 | SequenceName::A143106 if compute => {
            let max = *A143105.data.last().expect("nonempty");
            let degrees: Vec<u32> = (1..=max).step_by(2).collect();
            let records = scan_uniqueness(&degrees, 1).map_err(fail!("scan"))?;
            let unresolved = records.iter().filter(|r| !r.found_noninvariant).map(|r| r.degree);
            let list: Vec<u32> = match name {
                SequenceName::A143105 => unresolved.collect(),
                // Uniqueness is proved only where a search was exhaustive.
                _ => unresolved.filter(|d| A143106.data.contains(d)).collect(),
            };
            list.iter().take(count.unwrap_or(usize::MAX)).map(|v| v.to_string()).collect()
        }
        SequenceName::A143105 => A143105.data.iter().take(count.unwrap_or(usize::MAX)).map(|v| v.to_string()).collect(),
        SequenceName::A143106 => A143106.data.iter().take(count.unwrap_or(usize::MAX)).map(|v| v.to_string()).collect(),
    };
    println!("{}", values.join(", "));
    Ok(())
}

fn run_corpus(max_degree: u32) -> Outcome {
    let mut bad = 0;
    for d in 1..=max_degree {
        let n = minimal_term_count(d);
        let runs: Vec<usize> = [n, n + 1].into_iter().filter(|&m| corpus::expected_count(d, m).is_some()).collect();
        for m in runs {
            let opts = EnumerateOpts {
                degree: d,
                terms: Some(m),
                backend: BackendArg::Nullspace,
                shard: ShardSpec::default(),
                jobs: None,
                reproducible: true,
                corpus: true,
            };
            let report = run_backend(&opts, Backend::Nullspace)?;
            let mismatches = corpus::check_report(&report);
            let status = if mismatches.is_empty() { "ok" } else { "MISMATCH" };
            println!("d={d} N={m}: raw count {} {status}", report.raw_count);
            for x in &mismatches {
                println!("  {} ({}): expected {}, got {}", x.what, x.source, x.expected, x.actual);
            }
            bad += mismatches.len();
        }
    }
    if bad > 0 {
        return Err(Failure::new(EXIT_REGRESSION, format!("{bad} mismatches against the reference data")));
    }
    Ok(())
}
