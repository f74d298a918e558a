//! Command-line driver. Exit codes: 0 complete, 2 incomplete, 3 missing data, 1 other errors.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use frey_core::arith::Sieve;
use frey_core::eliminate::{FormData, Survivors};
use frey_core::ffield::DEFAULT_CAP;
use frey_core::frey::{FreyKind, Level};
use frey_core::numfield::{residue_degree, split_prime, EmbeddingSearch, Embeddings, KElement};
use frey_core::traces::Counter;
use frey_core::BigInt;

use crate::cache::{CounterPool, SharedCache};
use crate::certificate::{verify, Certificate};
use crate::error::{io_err, Error, Result};
use crate::prove::{family_key, parse_route, prove, ProveOptions, Tables, Theorem};
use crate::schema::Space;
use crate::tables::{format_k, j_tables, write_trace_csv};

pub const EXIT_COMPLETE: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INCOMPLETE: i32 = 2;
pub const EXIT_MISSING: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "frey", version, about = "Modular-method elimination for x^7 + y^7 = d z^p")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CurveArg {
    E,
    F,
    C7,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FreyArg {
    E,
    F,
    J,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a theorem and write its certificate.
    Prove {
        #[arg(long)]
        theorem: String,
        /// elliptic-only, j-max or fastest.
        #[arg(long)]
        route: Option<String>,
        #[arg(long, default_value = "fixtures")]
        fixtures: PathBuf,
        #[arg(long, value_delimiter = ',')]
        aux_primes: Option<Vec<u64>>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        max_enum: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fetch a classical newform space from the LMFDB into the fixture format.
    Fetch {
        #[arg(long)]
        level: u64,
        #[arg(long, default_value_t = 200)]
        below: u64,
        #[arg(long, default_value = ".frey-cache")]
        cache: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Trace sets of J(x, y) at q for all classes or listed pairs.
    Tq {
        #[arg(long)]
        q: u64,
        /// `all` or pairs `x,y;x,y`.
        #[arg(long, default_value = "all")]
        pairs: String,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        max_enum: u64,
    },
    /// Point count of E, F or C7 over the field of q^k elements.
    Count {
        #[arg(long, value_enum)]
        curve: CurveArg,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Twist of F: 1, -7, w2 or -7w2.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        delta: String,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        max_enum: u64,
    },
    /// Per-form bounds with their factorizations.
    Bounds {
        /// An integer N or a product such as q2*q3, q2^2*q3*q7^2.
        #[arg(long)]
        level: String,
        #[arg(long, value_delimiter = ',')]
        q: Vec<u64>,
        #[arg(long, default_value = "fixtures")]
        fixtures: PathBuf,
        #[arg(long, value_enum, default_value = "e")]
        frey: FreyArg,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        delta: String,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        max_enum: u64,
    },
    /// Check a certificate against the fixtures and recompute a tenth of its bounds.
    Verify {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long, default_value = "fixtures")]
        fixtures: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

pub fn parse_delta(s: &str) -> Result<KElement> {
    let w2 = KElement::omega_i(2);
    Ok(match s {
        "1" => KElement::one(),
        "-7" => KElement::from_ints(-7, 0, 0),
        "w2" => w2,
        "-7w2" => w2.scale(&frey_core::numfield::q(-7)),
        other => return Err(Error::Schema(format!("unknown twist {:?}", other))),
    })
}

/// `196`, `q2*q3`, `q2^2*q3*q7^2`, or the fixture spelling `q2squared_q3q7squared`.
pub fn parse_level(s: &str) -> Result<Level> {
    if let Ok(n) = s.parse::<u64>() {
        return Ok(Level::Rational(n));
    }
    let bad = || Error::Schema(format!("cannot parse level {:?}", s));
    let mut e = [0u8; 3];
    let mut rest = s.trim();
    while !rest.is_empty() {
        rest = rest.trim_start_matches(['*', '_', ' ']);
        if rest.is_empty() {
            break;
        }
        let r = rest.strip_prefix('q').ok_or_else(bad)?;
        let idx = match r.chars().next() {
            Some('2') => 0,
            Some('3') => 1,
            Some('7') => 2,
            _ => return Err(bad()),
        };
        let r = &r[1..];
        let (exp, r) = if let Some(t) = r.strip_prefix('^') {
            let end = t.find(|c: char| !c.is_ascii_digit()).unwrap_or(t.len());
            (t[..end].parse::<u8>().map_err(|_| bad())?, &t[end..])
        } else if let Some(t) = r.strip_prefix("squared") {
            (2, t)
        } else if let Some(t) = r.strip_prefix("cubed") {
            (3, t)
        } else {
            (1, r)
        };
        e[idx] = exp;
        rest = r;
    }
    Ok(Level::k(e[0], e[1], e[2]))
}

/// Like `println!`, but a closed stdout is an error instead of a panic.
macro_rules! say {
    ($($arg:tt)*) => {
        writeln!(std::io::stdout(), $($arg)*).map_err(io_err("<stdout>"))?
    };
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(io_err(p)),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(io_err("<stdout>")),
    }
}

/// Runs a parsed command and returns its exit code.
pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Prove { theorem, route, fixtures, aux_primes, max_enum, out } => {
            let t = Theorem::parse(&theorem).ok_or_else(|| Error::Schema(format!("unknown theorem {:?}", theorem)))?;
            let route = match route {
                Some(r) => Some(parse_route(&r).ok_or_else(|| Error::Schema(format!("unknown route {:?}", r)))?),
                None => None,
            };
            let opts = ProveOptions { fixtures, aux_primes, max_enum, ..ProveOptions::default() };
            let cert = match prove(t, route, &opts) {
                Ok(c) => c,
                Err(Error::MissingData(levels)) => {
                    eprintln!("missing fixtures:");
                    for l in &levels {
                        eprintln!("  {}", l);
                    }
                    return Ok(EXIT_MISSING);
                }
                Err(e) => return Err(e),
            };
            write_out(&out, &cert.render()?)?;
            for (label, status, name) in cert.survivors() {
                eprintln!("{}: {}{}", label, status, name.map(|n| format!(" ({})", n)).unwrap_or_default());
            }
            eprintln!("conclusion: {}", cert.conclusion);
            Ok(if cert.conclusion == "complete" { EXIT_COMPLETE } else { EXIT_INCOMPLETE })
        }
        Command::Fetch { level, below, cache, out } => {
            let client = crate::lmfdb::Client::from_env(&cache);
            let space = client.classical_space(level, below)?;
            write_out(&out, &(space.render()? + "\n"))?;
            Ok(EXIT_COMPLETE)
        }
        Command::Tq { q, pairs, csv, max_enum } => {
            let pool = CounterPool::new(3, max_enum);
            let cache = SharedCache::new();
            if pairs == "all" {
                let t = j_tables(&[q], &pool, &cache)?;
                match csv {
                    Some(p) => {
                        let f = std::fs::File::create(&p).map_err(io_err(&p))?;
                        write_trace_csv(f, &t)?;
                    }
                    None => write_trace_csv(std::io::stdout().lock(), &t)?,
                }
                return Ok(EXIT_COMPLETE);
            }
            let counter = pool.get(q)?;
            let mut out = std::io::stdout().lock();
            for pair in pairs.split(';') {
                let (x, y) = pair
                    .split_once(',')
                    .and_then(|(x, y)| Some((x.trim().parse::<i64>().ok()?, y.trim().parse::<i64>().ok()?)))
                    .ok_or_else(|| Error::Schema(format!("bad pair {:?}", pair)))?;
                let cell = match counter.trace_set(&BigInt::from(x), &BigInt::from(y), &cache) {
                    Ok(s) => s.elements.iter().map(format_k).collect::<Vec<_>>().join(" "),
                    Err(frey_core::Error::BadReduction { .. }) => "bad".into(),
                    Err(e) => return Err(e.into()),
                };
                writeln!(out, "{},{},{},{}", q, x, y, cell).map_err(io_err("<stdout>"))?;
            }
            Ok(EXIT_COMPLETE)
        }
        Command::Count { curve, a, b, q, k, delta, max_enum } => {
            // F at an inert prime is counted over the residue field of size q^3.
            let kmax = if matches!(curve, CurveArg::F) { k.max(residue_degree(q) as u32) } else { k.max(1) };
            let counter = Counter::new(q, kmax, max_enum)?;
            let (a, b) = (BigInt::from(a), BigInt::from(b));
            let cache = SharedCache::new();
            let line = match curve {
                CurveArg::E => {
                    let t = counter.trace_e(&a, &b, &cache)?;
                    format!("trace {} points {}", t, q as i64 + 1 - t)
                }
                CurveArg::F => {
                    let d = parse_delta(&delta)?;
                    let mut parts = Vec::new();
                    for pr in split_prime(q) {
                        let t = counter.trace_f(&a, &b, &d, &pr, &cache)?;
                        parts.push(format!("prime {} trace {} points {}", pr.index, t, pr.norm() as i64 + 1 - t));
                    }
                    parts.join("\n")
                }
                CurveArg::C7 => counter.points_c7(&a, &b, k, &cache)?.to_string(),
            };
            say!("{}", line);
            Ok(EXIT_COMPLETE)
        }
        Command::Bounds { level, q, fixtures, frey, delta, max_enum } => {
            let level = parse_level(&level)?;
            let path = crate::schema::fixture_path(&fixtures, &level);
            if !path.exists() {
                eprintln!("missing fixture {}", path.display());
                return Ok(EXIT_MISSING);
            }
            let space = Space::load(&path)?;
            let kind = match frey {
                FreyArg::E => FreyKind::E,
                FreyArg::F => FreyKind::F { delta: parse_delta(&delta)? },
                FreyArg::J => FreyKind::J,
            };
            let pool = CounterPool::new(3, max_enum);
            let cache = SharedCache::new();
            let tables = Tables::build(&family_key(&kind), &q, &pool, &cache)?;
            let sieve = Sieve::new(100_000);
            let mut all_empty = true;
            for rec in &space.records {
                let roots = match kind {
                    FreyKind::J => match frey_core::heckedata::contains_k(rec, EmbeddingSearch::default()) {
                        Embeddings::Found(r) => Some(r),
                        _ => {
                            say!("{}: K not in the Hecke field", rec.label);
                            continue;
                        }
                    },
                    _ => None,
                };
                let data = FormData::new(rec);
                let mut acc = Survivors::all();
                for &qq in &q {
                    let b = tables.bound(&data, qq, roots.as_ref())?;
                    let s = Survivors::from_bound(&b, qq, &sieve);
                    let f = if b.zero { "0".to_string() } else { describe(&b, &sieve) };
                    say!("{} q={} bound={}", rec.label, qq, f);
                    acc = acc.intersect(&s);
                }
                let list: Vec<String> = acc.primes.iter().map(|p| p.to_string()).collect();
                say!(
                    "{} survivors={}{}",
                    rec.label,
                    if acc.all { "all".to_string() } else { format!("{{{}}}", list.join(",")) },
                    if acc.cofactor.to_string() != "1" { " +cofactor" } else { "" }
                );
                all_empty &= acc.is_empty();
            }
            Ok(if all_empty { EXIT_COMPLETE } else { EXIT_INCOMPLETE })
        }
        Command::Verify { cert, fixtures, seed } => {
            let c = Certificate::load(&cert)?;
            let r = verify(&c, &fixtures, seed)?;
            say!(
                "ok: {} fixtures, {} of {} bounds recomputed, conclusion {}",
                r.fixtures_checked,
                r.bounds_rechecked,
                r.bounds_total,
                c.conclusion
            );
            Ok(if c.conclusion == "complete" { EXIT_COMPLETE } else { EXIT_INCOMPLETE })
        }
    }
}

/// Factorization of a bound's value as `p^e*...` with a trailing unfactored part.
fn describe(b: &frey_core::eliminate::Bound, sieve: &Sieve) -> String {
    let mut exps: std::collections::BTreeMap<frey_core::BigUint, u32> = Default::default();
    let mut cof = frey_core::BigUint::from(1u32);
    for t in &b.terms {
        let f = sieve.factor(t);
        for (p, e) in f.primes {
            *exps.entry(p).or_default() += e;
        }
        cof *= f.cofactor;
    }
    let mut parts: Vec<String> =
        exps.into_iter().map(|(p, e)| if e == 1 { p.to_string() } else { format!("{}^{}", p, e) }).collect();
    if cof != frey_core::BigUint::from(1u32) {
        parts.push(format!("[{}]", cof));
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

pub fn main() -> i32 {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Error::MissingData(levels)) => {
            eprintln!("missing data: {}", levels.join(", "));
            EXIT_MISSING
        }
        Err(e) => {
            eprintln!("error: {}", e);
            EXIT_ERROR
        }
    }
}
