mod arrayfile;
mod spec;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use gpc_core::epc::{check_condition_35, distance_bound, EpcShape};
use gpc_core::field::{find_construction_prime, Field, FieldElement, DEFAULT_PRIME_SEARCH_CAP};
use gpc_core::gpc::{decode_iterative, decode_rows_traced, DecodeTrace, Encoder, GpcError, GpcParams, SymbolArray};
use gpc_core::linalg::GfMatrix;
use gpc_core::oracle::{
    brute_min_distance_with_budget, decoder_oracle_equivalence, linear_erasure_trials, Discrepancy, OracleError,
    PatternSource, DEFAULT_BUDGET,
};

use arrayfile::ArrayFile;
use spec::{Code, Globals};

const EXIT_SPEC: u8 = 2;
const EXIT_UNCORRECTABLE: u8 = 3;
const EXIT_MISMATCH: u8 = 4;
const EXIT_BUDGET: u8 = 5;

/// Generalized product codes and extended product codes over GF(2^w).
#[derive(Parser)]
#[command(name = "gpc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Length, dimension, distance and parity layout of a code.
    Info { spec: PathBuf },
    /// Upper bound on the distance of an EP(m,v;n,h;g) code, per column count a.
    Bound {
        m: usize,
        v: usize,
        n: usize,
        h: usize,
        g: usize,
    },
    /// Encode K data symbols (hex, whitespace separated) into an array file.
    Encode {
        spec: PathBuf,
        data: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Fill the erased (`?`) cells of an array file.
    Decode {
        spec: PathBuf,
        array: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Use the row decoder only and print its triangulation to stderr.
        #[arg(long)]
        trace: bool,
    },
    /// Compare the code against brute-force ground truth.
    Verify(VerifyArgs),
    /// Smallest prime p > MIN_SIZE with 2 primitive mod p, and its field.
    FindPrime {
        min_size: u64,
        #[arg(long, default_value_t = DEFAULT_PRIME_SEARCH_CAP)]
        cap: u64,
    },
}

#[derive(Args)]
struct VerifyArgs {
    spec: PathBuf,
    /// Exhaustive distance search up to this weight (default: the length).
    #[arg(long, conflicts_with = "random")]
    exhaustive_cap: Option<usize>,
    /// Subsets the exhaustive search may examine.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Number of random decoding trials instead of the exhaustive search.
    #[arg(long)]
    random: Option<usize>,
    /// Seed for the random trials (default: drawn from the clock).
    #[arg(long, requires = "random")]
    seed: Option<u64>,
    /// Largest random pattern weight (default: N - K + 1).
    #[arg(long, requires = "random")]
    max_weight: Option<usize>,
    /// Draw patterns the row decoder accepts instead of uniform ones.
    #[arg(long, requires = "random")]
    decodable: bool,
}

/// An error with its exit status.
#[derive(Debug)]
struct Exit {
    code: u8,
    message: String,
}

impl fmt::Display for Exit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Exit {}

fn exit(code: u8, message: impl Into<String>) -> anyhow::Error {
    Exit {
        code,
        message: message.into(),
    }
    .into()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Info { spec } => info(&spec),
        Command::Bound { m, v, n, h, g } => bound(m, v, n, h, g),
        Command::Encode { spec, data, output } => encode(&spec, &data, output.as_deref()),
        Command::Decode {
            spec,
            array,
            output,
            trace,
        } => decode(&spec, &array, output.as_deref(), trace),
        Command::Verify(args) => verify(&args),
        Command::FindPrime { min_size, cap } => find_prime(min_size, cap),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e.downcast_ref::<Exit>().map_or(EXIT_SPEC, |x| x.code);
            ExitCode::from(code)
        }
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn layout(m: usize, n: usize, is_parity: impl Fn(usize, usize) -> bool) -> String {
    let mut out = String::new();
    for r in 0..m {
        let cells: Vec<&str> = (0..n).map(|c| if is_parity(r, c) { "P" } else { "D" }).collect();
        out.push_str("  ");
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

fn list(xs: &[usize]) -> String {
    let parts: Vec<String> = xs.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

fn info(path: &Path) -> Result<()> {
    let code = spec::load(path)?;
    println!("{code}");
    println!("field: {}", code.field());
    match &code {
        Code::Gpc { params, shape } => {
            println!(
                "m={} n={} k={} t={} s={} u={}",
                params.m(),
                params.n(),
                params.k(),
                params.t(),
                list(params.s()),
                list(params.u())
            );
            println!(
                "N={} K={} d={}",
                params.length(),
                params.dimension(),
                params.min_distance()
            );
            if let Some((v, h)) = shape {
                let b = distance_bound(&EpcShape::new(params.m(), *v, params.n(), *h, 1)?)?;
                println!("bound: {}", b.bound);
            }
            let parity = params.parity_positions();
            print!(
                "parity layout:\n{}",
                layout(params.m(), params.n(), |r, c| parity.contains(r, c))
            );
            match params.transpose() {
                Ok(t) => println!("transpose: {t}"),
                Err(_) => println!("transpose: none (every row carries data, so there is no column code)"),
            }
        }
        Code::Linear {
            code: lc,
            m,
            n,
            globals,
        } => {
            let b = distance_bound(&EpcShape::new(*m, 1, *n, 1, globals.count())?)?;
            println!("N={} K={} d<={} (bound)", lc.length(), lc.dimension(), b.bound);
            let parity = lc.parity_positions();
            print!(
                "parity layout:\n{}",
                layout(*m, *n, |r, c| parity.contains(&(r * n + c)))
            );
            if *globals == Globals::Three {
                println!("{}", condition35_note(*m, *n, lc.field()));
            }
        }
    }
    Ok(())
}

fn condition35_note(m: usize, n: usize, field: &Field) -> String {
    match check_condition_35(m, n, field) {
        Ok(()) => "condition35=ok".to_string(),
        Err(v) => format!("condition35=violated(i1={},i2={},j1={},j2={})", v.i1, v.i2, v.j1, v.j2),
    }
}

fn bound(m: usize, v: usize, n: usize, h: usize, g: usize) -> Result<()> {
    let shape = EpcShape::new(m, v, n, h, g)?;
    let b = distance_bound(&shape)?;
    println!("{shape}");
    for (a, d) in &b.table {
        println!("a={a}: {d}");
    }
    println!("bound: {}", b.bound);
    Ok(())
}

fn encode(spec_path: &Path, data_path: &Path, output: Option<&Path>) -> Result<()> {
    let code = spec::load(spec_path)?;
    let w = code.field().width();
    let text = std::fs::read_to_string(data_path).with_context(|| format!("reading {}", data_path.display()))?;
    let data = arrayfile::parse_data(&text, w)?;
    if data.len() != code.dimension() {
        anyhow::bail!("expected {} data symbols, found {}", code.dimension(), data.len());
    }
    let values = match &code {
        Code::Gpc { params, .. } => Encoder::new(params).encode(&data)?.values().to_vec(),
        Code::Linear { code: lc, .. } => lc.encode(&data)?,
    };
    write_output(output, &ArrayFile::from_values(code.m(), code.n(), w, &values).render())
}

fn residual(cells: &[(usize, usize)]) -> anyhow::Error {
    let parts: Vec<String> = cells.iter().map(|(r, c)| format!("({r},{c})")).collect();
    println!("residual erasures: {}", parts.join(" "));
    exit(
        EXIT_UNCORRECTABLE,
        format!("uncorrectable: {} erasures remain", cells.len()),
    )
}

fn decode(spec_path: &Path, array_path: &Path, output: Option<&Path>, trace: bool) -> Result<()> {
    let code = spec::load(spec_path)?;
    let text = std::fs::read_to_string(array_path).with_context(|| format!("reading {}", array_path.display()))?;
    let file = ArrayFile::parse(&text)?;
    spec::ensure_shape(&code, file.m, file.n)?;
    let w = code.field().width();
    if file.w != w {
        anyhow::bail!("array symbols are {} bits but the field is GF(2^{w})", file.w);
    }
    let values = match &code {
        Code::Gpc { params, .. } => {
            let received = SymbolArray::from_rows(&file.rows()).context("ragged array")?;
            let decoded = if trace {
                decode_rows_traced(params, &received).map(|(out, t)| {
                    eprint!("{}", render_trace(params, &t));
                    out
                })
            } else {
                decode_iterative(params, &received)
            };
            match decoded {
                Ok(out) => out.values().to_vec(),
                Err(GpcError::Stalled { remaining, .. }) | Err(GpcError::Uncorrectable { remaining }) => {
                    return Err(residual(&remaining))
                }
                Err(GpcError::Inconsistent) => {
                    return Err(exit(
                        EXIT_UNCORRECTABLE,
                        "the known symbols are not consistent with any codeword",
                    ))
                }
                Err(e) => return Err(e.into()),
            }
        }
        Code::Linear { code: lc, n, .. } => {
            let erased: Vec<bool> = file.cells.iter().map(Option::is_none).collect();
            let word: Vec<FieldElement> = file.cells.iter().map(|c| c.unwrap_or(FieldElement::ZERO)).collect();
            match lc.erasure_decode(&word, &erased) {
                Ok(v) => v,
                Err(gpc_core::epc::EpcError::Uncorrectable { remaining }) => {
                    let cells: Vec<(usize, usize)> = remaining.iter().map(|i| (i / n, i % n)).collect();
                    return Err(residual(&cells));
                }
                Err(gpc_core::epc::EpcError::Inconsistent) => {
                    return Err(exit(
                        EXIT_UNCORRECTABLE,
                        "the known symbols are not consistent with any codeword",
                    ))
                }
                Err(e) => return Err(e.into()),
            }
        }
    };
    write_output(output, &ArrayFile::from_values(file.m, file.n, w, &values).render())
}

fn render_matrix(m: &GfMatrix) -> String {
    let mut out = String::new();
    for r in 0..m.rows() {
        let cells: Vec<String> = m.row(r).iter().map(|x| format!("{:x}", x.0)).collect();
        out.push_str("  ");
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

fn render_trace(params: &GpcParams, t: &DecodeTrace) -> String {
    use gpc_core::gpc::Recovery;
    let mut out = String::new();
    if !t.order.is_empty() {
        out.push_str(&format!("order: {}\n", list(&t.order)));
    }
    if let Some(tri) = &t.triangulated {
        out.push_str(&format!("triangulated (alpha = {:x}):\n", params.field().alpha().0));
        out.push_str(&render_matrix(tri));
    }
    for s in &t.steps {
        let how = match s.recovery {
            Recovery::BaseRow => "base row code".to_string(),
            Recovery::Nested { level } => format!("row code of level {level}"),
            Recovery::ColumnConstraint => "column constraints".to_string(),
        };
        let noun = if s.erasures == 1 { "erasure" } else { "erasures" };
        out.push_str(&format!("row {}: {} {noun} via {how}\n", s.row, s.erasures));
    }
    out
}

fn verify(args: &VerifyArgs) -> Result<()> {
    let code = spec::load(&args.spec)?;
    match args.random {
        Some(trials) => verify_random(&code, args, trials),
        None => verify_exhaustive(&code, args.exhaustive_cap, args.budget),
    }
}

fn brute(field: &Field, h: &GfMatrix, cap: usize, budget: u64) -> Result<Option<(usize, u64)>> {
    match brute_min_distance_with_budget(field, h, cap, budget) {
        Ok(r) => Ok(Some((r.distance, r.patterns_examined))),
        Err(OracleError::CapExceeded { .. }) => Ok(None),
        Err(e @ OracleError::BudgetExceeded { .. }) => Err(exit(EXIT_BUDGET, format!("{e}, e.g. --random 1000"))),
    }
}

fn verify_exhaustive(code: &Code, cap: Option<usize>, budget: u64) -> Result<()> {
    let cap = cap.unwrap_or(code.m() * code.n());
    let shown = |d: Option<(usize, u64)>| match d {
        Some((d, _)) => format!("d_bruteforce={d}"),
        None => format!("d_bruteforce>{cap}"),
    };
    let (line, ok) = match code {
        Code::Gpc { params, shape } => {
            let found = brute(params.field(), &params.full_parity_matrix(), cap, budget)?;
            let formula = params.min_distance();
            let mut line = format!("{} d_formula={formula}", shown(found));
            let mut ok = match found {
                Some((d, _)) => d == formula,
                None => formula > cap,
            };
            if let Some((v, h)) = shape {
                let b = distance_bound(&EpcShape::new(params.m(), *v, params.n(), *h, 1)?)?.bound;
                line.push_str(&format!(" bound={b}"));
                ok &= formula == b;
            }
            if let Some((_, examined)) = found {
                eprintln!("examined {examined} subsets");
            }
            (line, ok)
        }
        Code::Linear {
            code: lc,
            m,
            n,
            globals,
        } => {
            let found = brute(lc.field(), lc.parity_check(), cap, budget)?;
            let bound = distance_bound(&EpcShape::new(*m, 1, *n, 1, globals.count())?)?.bound;
            let mut line = shown(found);
            let expected = match globals {
                Globals::Two => Some(bound),
                Globals::Three => {
                    let note = condition35_note(*m, *n, lc.field());
                    let guaranteed = note == "condition35=ok";
                    line.push(' ');
                    line.push_str(&note);
                    guaranteed.then_some(bound)
                }
            };
            let ok = match (found, expected) {
                (Some((d, _)), Some(e)) => d == e,
                (Some((d, _)), None) => d <= bound,
                (None, Some(e)) => e > cap,
                (None, None) => true,
            };
            if !ok {
                line.push_str(&format!(" (expected {})", expected.unwrap_or(bound)));
            }
            (line, ok)
        }
    };
    if ok {
        println!("{line}{}", if matches!(code, Code::Gpc { .. }) { " OK" } else { "" });
        Ok(())
    } else {
        println!("{line} MISMATCH");
        Err(exit(
            EXIT_MISMATCH,
            "brute-force distance disagrees with the construction",
        ))
    }
}

fn verify_random(code: &Code, args: &VerifyArgs, trials: usize) -> Result<()> {
    let seed = args.seed.unwrap_or_else(|| {
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_nanos() as u64)
    });
    let redundancy = code.m() * code.n() - code.dimension();
    let max_weight = args.max_weight.unwrap_or(redundancy + 1);
    let (line, discrepancies): (String, Vec<Discrepancy>) = match code {
        Code::Gpc { params, .. } => {
            let source = if args.decodable {
                PatternSource::Decodable
            } else {
                PatternSource::Uniform { max_weight }
            };
            let r = decoder_oracle_equivalence(params, trials, seed, source);
            (
                format!(
                    "seed={} trials={} oracle_correctable={} rows_decoded={} iterative_decoded={} discrepancies={}",
                    r.seed,
                    r.trials,
                    r.oracle_correctable,
                    r.rows_decoded,
                    r.iterative_decoded,
                    r.discrepancies.len()
                ),
                r.discrepancies,
            )
        }
        Code::Linear { code: lc, m, n, .. } => {
            if args.decodable {
                anyhow::bail!("--decodable applies to generalized product codes only");
            }
            let r = linear_erasure_trials(lc, *m, *n, trials, seed, max_weight);
            (
                format!(
                    "seed={} trials={} oracle_correctable={} decoded={} discrepancies={}",
                    r.seed,
                    r.trials,
                    r.correctable,
                    r.decoded,
                    r.discrepancies.len()
                ),
                r.discrepancies,
            )
        }
    };
    for d in &discrepancies {
        let cells: Vec<String> = d
            .pattern
            .positions()
            .iter()
            .map(|(r, c)| format!("({r},{c})"))
            .collect();
        eprintln!(
            "trial {} (seed {}): {}; erased {}",
            d.trial,
            d.trial_seed,
            d.what,
            cells.join(" ")
        );
    }
    if discrepancies.is_empty() {
        println!("{line} OK");
        Ok(())
    } else {
        println!("{line} MISMATCH");
        Err(exit(EXIT_MISMATCH, "decoders disagree with the oracle"))
    }
}

fn find_prime(min_size: u64, cap: u64) -> Result<()> {
    let p = find_construction_prime(min_size, cap)?;
    let field = Field::from_mp(p as u32)?;
    println!("p={p}");
    println!("field: {}", spec::field_json(&field));
    Ok(())
}
