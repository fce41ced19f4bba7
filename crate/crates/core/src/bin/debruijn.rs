use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map};

use debruijn::anf::{feedback_sequence, rule_feedback, to_anf};
use debruijn::bench::{fit_growth, measure};
use debruijn::census::{expected_count, run_census, CensusFamily, CensusReport, DEFAULT_BUDGET};
use debruijn::generator::{generate, generate_canonical, pack_hex, verify_de_bruijn, BitStream};
use debruijn::graph::{adjacency_graph, induced_tree};
use debruijn::{BitWord, Error, FeedbackFunction, Rule, RuleSpec, TruthTable};

type Result<T> = std::result::Result<T, Error>;

#[derive(Parser)]
#[command(
    name = "debruijn",
    version,
    about = "Generate and check de Bruijn sequences from successor rules"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print one period of the sequence, or its first B bits with --bits.
    Gen(GenArgs),
    /// Exit 0 iff the input is a de Bruijn sequence of order n.
    Verify(VerifyArgs),
    /// The spanning tree of the cycle adjacency graph chosen by a rule.
    Tree(TreeArgs),
    /// The cycle adjacency graph of a register.
    Graph(GraphArgs),
    /// Algebraic normal form of the feedback function that generates a rule's sequence.
    Anf(AnfArgs),
    /// Count distinct sequences over a family's parameter space.
    Census(CensusArgs),
    /// Per-bit streaming time over a range of orders.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Bits,
    Hex,
    Text,
    Dot,
    Json,
}

#[derive(Args)]
struct RuleArgs {
    /// Rule family name, e.g. pcr-lz-k.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<u64>,
    /// Band boundaries, comma separated.
    #[arg(long, value_delimiter = ',')]
    ks: Option<Vec<usize>>,
    /// Shift power per weight, comma separated.
    #[arg(long, value_delimiter = ',')]
    g: Option<Vec<usize>>,
    /// Chosen states, comma separated.
    #[arg(long, value_delimiter = ',')]
    choice: Option<Vec<String>>,
    /// Base register for jfb: pcr, psr, csr or table.
    #[arg(long)]
    f: Option<String>,
    /// Truth table (binary or hex) when --f table.
    #[arg(long)]
    table: Option<String>,
    /// Rule spec as a JSON file.
    #[arg(long, conflicts_with_all = ["family", "n", "k", "ks", "g", "choice", "f", "table"])]
    spec: Option<PathBuf>,
}

impl RuleArgs {
    fn spec(&self) -> Result<RuleSpec> {
        if let Some(path) = &self.spec {
            return RuleSpec::from_json_str(&fs::read_to_string(path)?);
        }
        let family = self
            .family
            .as_deref()
            .ok_or_else(|| usage("need --family or --spec"))?;
        let n = self.n.ok_or_else(|| usage("need --n"))?;
        let mut params = Map::new();
        if let Some(k) = self.k {
            params.insert("k".into(), json!(k));
        }
        if let Some(ks) = &self.ks {
            params.insert("ks".into(), json!(ks));
        }
        if let Some(g) = &self.g {
            params.insert("g".into(), json!(g));
        }
        if let Some(c) = &self.choice {
            params.insert("choice".into(), json!(c));
        }
        if let Some(f) = &self.f {
            params.insert("f".into(), json!(f));
        }
        if let Some(t) = &self.table {
            params.insert("table".into(), json!(t));
        }
        RuleSpec::from_json(&json!({ "n": n, "family": family, "params": params }))
    }

    fn rule(&self) -> Result<Rule> {
        self.spec()?.compile()
    }
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Shorthand for --format dot.
    #[arg(long)]
    dot: bool,
    /// Shorthand for --format json.
    #[arg(long)]
    json: bool,
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

impl OutputArgs {
    fn format(&self, default: Format, allowed: &[Format]) -> Result<Format> {
        let f = if self.dot {
            Format::Dot
        } else if self.json {
            Format::Json
        } else {
            self.format.unwrap_or(default)
        };
        if allowed.contains(&f) {
            Ok(f)
        } else {
            let names: Vec<String> = allowed
                .iter()
                .filter_map(|a| a.to_possible_value().map(|v| v.get_name().to_string()))
                .collect();
            Err(usage(&format!(
                "this command supports formats {}",
                names.join(", ")
            )))
        }
    }

    fn emit(&self, text: &str) -> Result<()> {
        let mut text = text.to_string();
        if !text.ends_with('\n') {
            text.push('\n');
        }
        match &self.output {
            Some(path) => fs::write(path, text)?,
            None => io::stdout().lock().write_all(text.as_bytes())?,
        }
        Ok(())
    }
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    rule: RuleArgs,
    /// Start state; defaults to all zeros.
    #[arg(long)]
    start: Option<String>,
    /// Stream this many bits instead of one period.
    #[arg(long)]
    bits: Option<u64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    n: usize,
    /// Input file; reads stdin when absent.
    input: Option<PathBuf>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct TreeArgs {
    #[command(flatten)]
    rule: RuleArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct GraphArgs {
    /// pcr, psr, csr or table.
    #[arg(long, default_value = "pcr")]
    fsr: String,
    #[arg(long)]
    n: usize,
    /// Truth table when --fsr table.
    #[arg(long)]
    table: Option<String>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct AnfArgs {
    #[command(flatten)]
    rule: RuleArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct CensusArgs {
    /// Census family, or "all".
    #[arg(long)]
    family: String,
    #[arg(long)]
    n: usize,
    /// Maximum number of sequences to generate. Overrides DEBRUIJN_BUDGET.
    #[arg(long)]
    budget: Option<u128>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct BenchArgs {
    /// Family name (k-parameterised families only).
    #[arg(long, default_value = "pcr-lz-k")]
    family: String,
    #[arg(long, default_value_t = 1)]
    k: u64,
    /// Inclusive range of orders, e.g. 8..24.
    #[arg(long, default_value = "8..24")]
    n: String,
    /// Bits streamed per order.
    #[arg(long, default_value_t = 1_000_000)]
    bits: u64,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[command(flatten)]
    out: OutputArgs,
}

fn usage(msg: &str) -> Error {
    Error::Precondition(msg.to_string())
}

fn bit_string(bits: &[u8]) -> String {
    bits.iter().map(|&b| char::from(b'0' + b)).collect()
}

fn cmd_gen(a: &GenArgs) -> Result<u8> {
    let rule = a.rule.rule()?;
    let n = rule.order();
    let start = match &a.start {
        Some(s) => s.parse::<BitWord>()?,
        None => BitWord::zeros(n)?,
    };
    if start.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: start.len(),
        });
    }
    let format = a
        .out
        .format(Format::Bits, &[Format::Bits, Format::Hex, Format::Json])?;
    let bits = match a.bits {
        Some(b) => BitStream::from_state(&rule, &start)
            .take(b as usize)
            .collect(),
        None => generate(&rule, &start)?.bits,
    };
    let text = match format {
        Format::Hex => pack_hex(&bits),
        Format::Json => serde_json::to_string_pretty(&json!({
            "spec": rule.spec().to_json(),
            "start": start.to_string(),
            "bits": bit_string(&bits),
            "hex": pack_hex(&bits),
        }))?,
        _ => bit_string(&bits),
    };
    a.out.emit(&text)?;
    Ok(0)
}

/// Index of the first window that repeats an earlier one.
fn first_repeat(bits: &[u8], n: usize) -> Option<(usize, usize)> {
    let len = bits.len();
    let mut seen = std::collections::HashMap::new();
    for i in 0..len {
        let w: u64 = (0..n).fold(0, |v, j| (v << 1) | u64::from(bits[(i + j) % len]));
        if let Some(&prev) = seen.get(&w) {
            return Some((prev, i));
        }
        seen.insert(w, i);
    }
    None
}

fn cmd_verify(a: &VerifyArgs) -> Result<u8> {
    let text = match &a.input {
        Some(p) => fs::read_to_string(p)?,
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    let bits = text
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '0' => Ok(0u8),
            '1' => Ok(1u8),
            other => Err(Error::Parse(format!(
                "unexpected character {other:?} in bit string"
            ))),
        })
        .collect::<Result<Vec<u8>>>()?;
    let n = a.n;
    if n == 0 || n > 28 {
        return Err(Error::Order { n, min: 1, max: 28 });
    }
    let ok = verify_de_bruijn(&bits, n);
    let reason = if ok {
        String::new()
    } else if bits.len() != 1 << n {
        format!("length {} is not 2^{n} = {}", bits.len(), 1u64 << n)
    } else {
        match first_repeat(&bits, n) {
            Some((i, j)) => format!("window at {j} repeats the window at {i}"),
            None => "windows are not distinct".into(),
        }
    };
    let format = a.out.format(Format::Text, &[Format::Text, Format::Json])?;
    let text = match format {
        Format::Json => serde_json::to_string(
            &json!({ "n": n, "length": bits.len(), "de_bruijn": ok, "reason": reason }),
        )?,
        _ if ok => format!("de Bruijn sequence of order {n}"),
        _ => format!("not a de Bruijn sequence of order {n}: {reason}"),
    };
    a.out.emit(&text)?;
    Ok(if ok { 0 } else { 1 })
}

fn cmd_tree(a: &TreeArgs) -> Result<u8> {
    let rule = a.rule.rule()?;
    let tree = induced_tree(&rule)?;
    let text = match a
        .out
        .format(Format::Text, &[Format::Text, Format::Dot, Format::Json])?
    {
        Format::Dot => tree.to_dot(),
        Format::Json => serde_json::to_string_pretty(&tree.to_json())?,
        _ => {
            let mut s = format!("root {}\n", tree.root_cycle().necklace);
            for (child, parent, label) in tree.edge_triples() {
                s.push_str(&format!("{child} -> {parent} [{label}]\n"));
            }
            s
        }
    };
    a.out.emit(&text)?;
    Ok(0)
}

fn cmd_graph(a: &GraphArgs) -> Result<u8> {
    let f = match a.fsr.as_str() {
        "pcr" => FeedbackFunction::pcr(a.n)?,
        "psr" => FeedbackFunction::psr(a.n)?,
        "csr" => FeedbackFunction::csr(a.n)?,
        "table" => {
            let t = a
                .table
                .as_deref()
                .ok_or_else(|| usage("--fsr table needs --table"))?;
            FeedbackFunction::table(TruthTable::parse(a.n, t)?)?
        }
        other => {
            return Err(usage(&format!(
                "unknown register {other:?}; expected pcr, psr, csr or table"
            )))
        }
    };
    let g = adjacency_graph(&f)?;
    let text = match a
        .out
        .format(Format::Text, &[Format::Text, Format::Dot, Format::Json])?
    {
        Format::Dot => g.to_dot(),
        Format::Json => serde_json::to_string_pretty(&g.to_json())?,
        _ => {
            let mut s = format!(
                "{} cycles, {} adjacent pairs\n",
                g.vertices.len(),
                g.edges.len()
            );
            for e in &g.edges {
                s.push_str(&format!("{} -- {} via {}\n", e.a, e.b, e.pair));
            }
            s
        }
    };
    a.out.emit(&text)?;
    Ok(0)
}

fn cmd_anf(a: &AnfArgs) -> Result<u8> {
    let rule = a.rule.rule()?;
    let table = rule_feedback(&rule)?;
    let poly = to_anf(&table);
    let regenerated = feedback_sequence(&FeedbackFunction::table(poly.to_table()?)?)?;
    let round_trip = regenerated.bits == generate_canonical(&rule)?.bits;
    let text = match a.out.format(Format::Text, &[Format::Text, Format::Json])? {
        Format::Json => serde_json::to_string_pretty(&json!({
            "spec": rule.spec().to_json(),
            "anf": poly.to_string(),
            "monomials": poly.monomials(),
            "degree": poly.degree(),
            "table": table.to_hex(),
            "round_trip": round_trip,
        }))?,
        _ => format!(
            "f = {poly}\ndegree {}, {} monomials\nround trip: {}",
            poly.degree(),
            poly.len(),
            if round_trip { "ok" } else { "MISMATCH" }
        ),
    };
    a.out.emit(&text)?;
    Ok(if round_trip { 0 } else { 1 })
}

fn budget_from_env(flag: Option<u128>) -> Result<u128> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var("DEBRUIJN_BUDGET") {
        Ok(v) => v
            .trim()
            .replace('_', "")
            .parse::<f64>()
            .ok()
            .filter(|b| *b >= 0.0)
            .map(|b| b as u128)
            .ok_or_else(|| usage(&format!("DEBRUIJN_BUDGET={v:?} is not a number"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn cmd_census(a: &CensusArgs) -> Result<u8> {
    let budget = budget_from_env(a.budget)?;
    let families: Vec<CensusFamily> = if a.family == "all" {
        CensusFamily::ALL.to_vec()
    } else {
        vec![a.family.parse()?]
    };
    let format = a.out.format(Format::Text, &[Format::Text, Format::Json])?;
    let mut reports = Vec::new();
    let mut refused = Vec::new();
    for family in families {
        match run_census(family, a.n, budget) {
            Ok(r) => reports.push(r),
            Err(Error::Budget {
                what,
                predicted,
                budget,
            }) => {
                let (expected, formula) = expected_count(family, a.n)?;
                refused.push(json!({
                    "family": family.name(),
                    "n": a.n,
                    "predicted": predicted.to_string(),
                    "budget": budget.to_string(),
                    "expected": expected.to_string(),
                    "formula": formula,
                }));
                eprintln!("refused: {what} needs {predicted} sequences, budget {budget}; formula {formula} = {expected}");
            }
            Err(e) => return Err(e),
        }
    }
    let text = match format {
        Format::Json => {
            serde_json::to_string_pretty(&json!({ "reports": reports, "refused": refused }))?
        }
        _ => {
            let mut s = CensusReport::header();
            s.push('\n');
            for r in &reports {
                s.push_str(&format!("{r}\n"));
            }
            for r in &refused {
                s.push_str(&format!(
                    "{:<22} {:>3} refused: predicted {} over budget {}, formula {} = {}\n",
                    r["family"].as_str().unwrap_or(""),
                    a.n,
                    r["predicted"].as_str().unwrap_or(""),
                    r["budget"].as_str().unwrap_or(""),
                    r["formula"].as_str().unwrap_or(""),
                    r["expected"].as_str().unwrap_or("")
                ));
            }
            s
        }
    };
    a.out.emit(&text)?;
    if reports.iter().any(|r| !r.matches) {
        Ok(1)
    } else if !refused.is_empty() {
        Ok(3)
    } else {
        Ok(0)
    }
}

fn parse_range(s: &str) -> Result<(usize, usize)> {
    let bad = || usage(&format!("bad range {s:?}; expected LO..HI"));
    let (lo, hi) = match s.split_once("..=").or_else(|| s.split_once("..")) {
        Some((lo, hi)) => (
            lo.trim().parse().map_err(|_| bad())?,
            hi.trim().parse().map_err(|_| bad())?,
        ),
        None => {
            let n = s.trim().parse().map_err(|_| bad())?;
            (n, n)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn cmd_bench(a: &BenchArgs) -> Result<u8> {
    let (lo, hi) = parse_range(&a.n)?;
    let format = a.out.format(Format::Text, &[Format::Text, Format::Json])?;
    let mut points = Vec::new();
    for n in lo..=hi {
        let spec =
            RuleSpec::from_json(&json!({ "n": n, "family": a.family, "params": { "k": a.k } }))?;
        points.push(measure(&spec.compile()?, a.bits, a.repeats));
    }
    let fit = if points.len() >= 3 {
        Some(fit_growth(&points)?)
    } else {
        None
    };
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&json!({
            "family": a.family,
            "k": a.k,
            "points": points,
            "fit": fit,
        }))?,
        _ => {
            let mut s = format!("{:>3} {:>12}\n", "n", "ns/bit");
            for p in &points {
                s.push_str(&format!("{:>3} {:>12.3}\n", p.n, p.ns_per_bit));
            }
            if let Some(f) = fit {
                s.push_str(&format!(
                    "fit: {:.3} + {:.4} n + {:.6} n^2, superlinear share {:.3}\n",
                    f.intercept, f.slope, f.curvature, f.superlinear_share
                ));
            }
            s
        }
    };
    a.out.emit(&text)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Tree(a) => cmd_tree(a),
        Command::Graph(a) => cmd_graph(a),
        Command::Anf(a) => cmd_anf(a),
        Command::Census(a) => cmd_census(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
