//! Command-line front end: coset tables, code construction, exhaustive
//! distance and weight-distribution runs, chain searches under both
//! standards, the RM(2,m)* verification harness, quadratic-form sums, and a
//! `reproduce` command that re-derives the whole battery of built-in claims
//! and fails loudly on any mismatch.
//!
//! Exit status: 0 on success, 1 when a verification check came out false,
//! 2 on usage errors (bad arguments, refused long runs, I/O problems).

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::chains::{self, DimensionProfile, DistanceCache};
use crate::cosets::{self, CosetTable};
use crate::cyclic::{self, EnumOptions};
use crate::quadsums;
use crate::rm2::{self, CheckRow, Claim, Label, RmSpec};
use crate::{Error, Result};

#[derive(Parser)]
#[command(
    name = "odpc",
    version,
    about = "Cyclic codes from cyclotomic cosets: subcode chains and optimum distance profiles"
)]
struct Cli {
    /// Emit machine-readable JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,

    /// Distance-cache file (line-oriented records), loaded before and saved
    /// after the run.
    #[arg(long, global = true, value_name = "PATH")]
    cache: Option<PathBuf>,

    /// Worker threads for exhaustive enumerations (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    workers: Option<usize>,

    /// Refuse enumerations above this dimension (default 28).
    #[arg(long, global = true, value_name = "K")]
    limit: Option<u32>,

    /// Consent to enumerations with dimension above 24.
    #[arg(long = "yes-long-run", global = true)]
    yes_long_run: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CodeArgs {
    /// Code length (odd).
    #[arg(long)]
    n: u64,
    /// Comma-separated nonzero coset leaders, e.g. 0,1,5,7.
    #[arg(long, value_name = "LIST")]
    leaders: String,
}

#[derive(Subcommand)]
enum Command {
    /// Print the 2-cyclotomic coset partition and the chain-counting summary.
    Cosets {
        #[arg(long)]
        n: u64,
    },
    /// Construct a cyclic code and print its parameters.
    Code {
        #[command(flatten)]
        args: CodeArgs,
        /// Also compute the exact minimum distance.
        #[arg(long)]
        mindist: bool,
    },
    /// Exact minimum distance by exhaustive enumeration.
    Mindist {
        #[command(flatten)]
        args: CodeArgs,
    },
    /// Full weight distribution as CSV weight,count.
    Wdist {
        #[command(flatten)]
        args: CodeArgs,
    },
    /// Subcode-chain operations.
    Chains {
        #[command(subcommand)]
        sub: ChainsCmd,
    },
    /// Punctured second-order Reed-Muller families.
    Rm2 {
        #[command(subcommand)]
        sub: Rm2Cmd,
    },
    /// Exponential sums of quadratic forms.
    Sums {
        #[command(subcommand)]
        sub: SumsCmd,
    },
    /// Re-derive every built-in claim and print a PASS/FAIL table.
    Reproduce,
}

#[derive(Subcommand)]
enum ChainsCmd {
    /// List the chains (leader orders, smallest code first). The global
    /// --limit caps how many are printed.
    Enumerate {
        #[command(flatten)]
        args: CodeArgs,
    },
    /// List the dimension-profile classes with per-class chain counts.
    Classes {
        #[command(flatten)]
        args: CodeArgs,
    },
    /// Optimum profile within one dimension-profile class (Standard I).
    Odpc1 {
        #[command(flatten)]
        args: CodeArgs,
        /// The class, largest code first, e.g. 15,9,8,6.
        #[arg(long, value_name = "LIST")]
        dims: String,
    },
    /// Optimum profile over all chains (Standard II).
    Odpc2 {
        #[command(flatten)]
        args: CodeArgs,
    },
}

#[derive(Subcommand)]
enum Rm2Cmd {
    /// Closed-form chain profiles: the nested chain by default, or a
    /// delayed-placement variant.
    Profile {
        #[arg(long)]
        m: u32,
        /// Delay the all-ones idempotent to position u+1 (odd m).
        #[arg(long, value_name = "U", conflicts_with = "prop2")]
        prop1: Option<u32>,
        /// Delay the half-degree idempotent to i+1 and the all-ones one to
        /// j+1 (even m), e.g. 2,3.
        #[arg(long, value_name = "I,J")]
        prop2: Option<String>,
    },
    /// Re-derive one optimality or formula claim by search.
    Verify {
        #[arg(long)]
        m: u32,
        /// thm1|thm2|thm3|lemma4|lemma6|props
        #[arg(long)]
        claim: String,
    },
}

#[derive(Subcommand)]
enum SumsCmd {
    /// Power moments of T(alpha, beta) against solution counts.
    Moments {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        i: u32,
        #[arg(long)]
        j: u32,
    },
    /// Bilinear-form ranks of alpha*x^(2^i+1) over all alpha.
    Rank {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        i: u32,
    },
    /// Value distribution of T(alpha, beta) as CSV value,multiplicity.
    Dist {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        i: u32,
        #[arg(long)]
        j: u32,
    },
}

struct Session {
    json: bool,
    cache_path: Option<PathBuf>,
    cache: DistanceCache,
    workers: usize,
    limit: u32,
    limit_explicit: bool,
    yes_long_run: bool,
}

impl Session {
    fn open(cli: &Cli) -> Result<Session> {
        let workers = match cli.workers {
            Some(0) => return Err(Error::BadParameter("--workers must be >= 1".into())),
            Some(w) => w,
            None => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
        };
        let limit = match cli.limit {
            Some(0) => return Err(Error::BadParameter("--limit must be >= 1".into())),
            Some(l) => l,
            None => 28,
        };
        let cache = match &cli.cache {
            Some(path) => DistanceCache::load(path)?,
            None => DistanceCache::new(),
        };
        Ok(Session {
            json: cli.json,
            cache_path: cli.cache.clone(),
            cache,
            workers,
            limit,
            limit_explicit: cli.limit.is_some(),
            yes_long_run: cli.yes_long_run,
        })
    }

    /// Enumeration options, after the dimension guard: the hard --limit cap
    /// plus explicit consent for anything above the desk-scale bound of 24.
    fn enum_options(&self, max_dimension_needed: u32) -> Result<EnumOptions> {
        if max_dimension_needed > self.limit {
            return Err(Error::BadParameter(format!(
                "dimension {max_dimension_needed} exceeds --limit {}; raise --limit to proceed",
                self.limit
            )));
        }
        if max_dimension_needed > 24 && !self.yes_long_run {
            let scans = 1u64 << max_dimension_needed;
            return Err(Error::BadParameter(format!(
                "dimension {max_dimension_needed} needs a long run (about {scans} codeword scans \
                 per uncached subcode, roughly {}s each at 10^9 scans/s); re-run with \
                 --yes-long-run to consent",
                (scans / 1_000_000_000).max(1)
            )));
        }
        Ok(EnumOptions { max_dimension: self.limit, workers: self.workers })
    }

    fn close(&self) -> Result<()> {
        if let Some(path) = &self.cache_path {
            self.cache.save(path)?;
        }
        Ok(())
    }
}

fn parse_u64_list(text: &str, what: &str) -> Result<Vec<u64>> {
    text.split(',')
        .map(|p| {
            p.trim()
                .parse::<u64>()
                .map_err(|_| Error::BadParameter(format!("bad {what} entry {p:?}")))
        })
        .collect()
}

fn parse_leaders(text: &str) -> Result<BTreeSet<u64>> {
    let list = parse_u64_list(text, "leader")?;
    let set: BTreeSet<u64> = list.iter().copied().collect();
    if set.len() != list.len() {
        return Err(Error::BadParameter("repeated leader".into()));
    }
    Ok(set)
}

fn parse_dims(text: &str) -> Result<DimensionProfile> {
    let list = parse_u64_list(text, "dimension")?;
    Ok(DimensionProfile(list.into_iter().map(|d| d as u32).collect()))
}

fn print_json(value: &Value) {
    println!("{value}");
}

/// Entry point; returns the process exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version on stdout with status 0.
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let mut session = match Session::open(&cli) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let outcome = dispatch(&cli.command, &mut session);
    if let Err(e) = session.close() {
        eprintln!("error: {e}");
        return 2;
    }
    match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

/// Ok(true): success. Ok(false): a verification check failed. Err: usage.
fn dispatch(command: &Command, s: &mut Session) -> Result<bool> {
    match command {
        Command::Cosets { n } => cmd_cosets(*n, s),
        Command::Code { args, mindist } => cmd_code(args, *mindist, s),
        Command::Mindist { args } => cmd_mindist(args, s),
        Command::Wdist { args } => cmd_wdist(args, s),
        Command::Chains { sub } => match sub {
            ChainsCmd::Enumerate { args } => cmd_enumerate(args, s),
            ChainsCmd::Classes { args } => cmd_classes(args, s),
            ChainsCmd::Odpc1 { args, dims } => cmd_odpc(args, Some(dims), s),
            ChainsCmd::Odpc2 { args } => cmd_odpc(args, None, s),
        },
        Command::Rm2 { sub } => match sub {
            Rm2Cmd::Profile { m, prop1, prop2 } => cmd_rm2_profile(*m, *prop1, prop2.as_deref(), s),
            Rm2Cmd::Verify { m, claim } => cmd_rm2_verify(*m, claim, s),
        },
        Command::Sums { sub } => match sub {
            SumsCmd::Moments { m, i, j } => cmd_sums_moments(*m, *i, *j, s),
            SumsCmd::Rank { m, i } => cmd_sums_rank(*m, *i, s),
            SumsCmd::Dist { m, i, j } => cmd_sums_dist(*m, *i, *j, s),
        },
        Command::Reproduce => cmd_reproduce(s),
    }
}

fn cmd_cosets(n: u64, s: &mut Session) -> Result<bool> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::BadParameter(format!("n must be an odd integer >= 3, got {n}")));
    }
    let table = CosetTable::build(n)?;
    let counts = cosets::chain_counts(n, &BTreeSet::new())?;
    if s.json {
        let cosets_json: Vec<Value> = table
            .cosets()
            .iter()
            .map(|c| json!({"leader": c.leader, "elements": c.elements}))
            .collect();
        let l: Value = counts
            .l_by_size
            .iter()
            .map(|(k, v)| (k.to_string(), json!(v)))
            .collect::<serde_json::Map<_, _>>()
            .into();
        print_json(&json!({
            "n": n,
            "cosets": cosets_json,
            "counts": {
                "lambda": counts.lambda,
                "total_chains": counts.total_chains.to_string(),
                "per_class": counts.per_class.to_string(),
                "classes": counts.num_classes.to_string(),
                "l_by_size": l,
            },
        }));
    } else {
        println!("n = {n}: {} cosets", table.len());
        for c in table.cosets() {
            println!(
                "  {:>4}: {{{}}}",
                c.leader,
                itertools::join(&c.elements, ", ")
            );
        }
        println!(
            "lambda = {}, chains = {}, per class = {}, classes = {}",
            counts.lambda, counts.total_chains, counts.per_class, counts.num_classes
        );
    }
    Ok(true)
}

fn cmd_code(args: &CodeArgs, mindist: bool, s: &mut Session) -> Result<bool> {
    let leaders = parse_leaders(&args.leaders)?;
    let code = cyclic::code_from_leaders(args.n, &leaders)?;
    let d = if mindist {
        let opts = s.enum_options(code.dimension)?;
        Some(s.cache.distance_of(&code, &opts)?)
    } else {
        None
    };
    if s.json {
        let mut v = json!({
            "n": code.n,
            "dimension": code.dimension,
            "generator_hex": code.generator.hex(),
            "nonzero_leaders": code.nonzero_leaders.iter().collect::<Vec<_>>(),
        });
        if let Some(d) = d {
            v["min_distance"] = json!(d);
        }
        print_json(&v);
    } else {
        println!("n = {}, k = {}", code.n, code.dimension);
        println!("generator = {} ({})", code.generator.hex(), code.generator);
        if let Some(d) = d {
            println!("d = {d}");
        }
    }
    Ok(true)
}

fn cmd_mindist(args: &CodeArgs, s: &mut Session) -> Result<bool> {
    let leaders = parse_leaders(&args.leaders)?;
    let code = cyclic::code_from_leaders(args.n, &leaders)?;
    let opts = s.enum_options(code.dimension)?;
    let d = s.cache.distance_of(&code, &opts)?;
    if s.json {
        print_json(&json!({"n": code.n, "dimension": code.dimension, "min_distance": d}));
    } else {
        println!("[{},{},{}]", code.n, code.dimension, d);
    }
    Ok(true)
}

fn cmd_wdist(args: &CodeArgs, s: &mut Session) -> Result<bool> {
    let leaders = parse_leaders(&args.leaders)?;
    let code = cyclic::code_from_leaders(args.n, &leaders)?;
    let opts = s.enum_options(code.dimension)?;
    let wd = s.cache.weights_of(&code, &opts)?;
    if s.json {
        let pairs: Vec<Value> = wd.counts.iter().map(|(&w, &c)| json!([w, c as u64])).collect();
        print_json(&json!({"n": code.n, "dimension": code.dimension, "weights": pairs}));
    } else {
        println!("weight,count");
        for (w, c) in &wd.counts {
            println!("{w},{c}");
        }
    }
    Ok(true)
}

fn cmd_enumerate(args: &CodeArgs, s: &mut Session) -> Result<bool> {
    let leaders = parse_leaders(&args.leaders)?;
    let code = cyclic::code_from_leaders(args.n, &leaders)?;
    if code.nonzero_leaders.len() > 10 {
        return Err(Error::BadParameter("too many cosets to enumerate chains".into()));
    }
    // An explicit --limit caps how many chains are listed.
    let cap = if s.limit_explicit { s.limit as usize } else { usize::MAX };
    let orders: Vec<Vec<u64>> = chains::enumerate_chains(&code)
        .take(cap)
        .map(|c| c.order)
        .collect();
    if s.json {
        print_json(&json!({"n": code.n, "chains": orders}));
    } else {
        for order in &orders {
            println!("{}", itertools::join(order, ","));
        }
    }
    Ok(true)
}

fn cmd_classes(args: &CodeArgs, s: &mut Session) -> Result<bool> {
    let leaders = parse_leaders(&args.leaders)?;
    let code = cyclic::code_from_leaders(args.n, &leaders)?;
    let classes = chains::list_classes(&code)?;
    if s.json {
        let rows: Vec<Value> = classes
            .iter()
            .map(|(dims, mu)| json!({"dims": dims.0, "chains": mu.to_string()}))
            .collect();
        print_json(&json!({"n": code.n, "classes": rows}));
    } else {
        println!("{} classes:", classes.len());
        for (dims, mu) in &classes {
            println!("  {dims}  ({mu} chains)");
        }
    }
    Ok(true)
}

fn cmd_odpc(args: &CodeArgs, dims: Option<&String>, s: &mut Session) -> Result<bool> {
    let leaders = parse_leaders(&args.leaders)?;
    let code = cyclic::code_from_leaders(args.n, &leaders)?;
    let opts = s.enum_options(code.dimension)?;
    let report = match dims {
        Some(text) => {
            let class = parse_dims(text)?;
            chains::odpc_standard_i(&code, &class, &mut s.cache, &opts)?
        }
        None => chains::odpc_standard_ii(&code, &mut s.cache, &opts)?,
    };
    if s.json {
        print_json(&report.to_json());
    } else {
        println!("standard {}", report.standard);
        println!("profile = {}", report.profile);
        println!("dims    = {}", report.dims);
        println!(
            "{} witness chain(s); canonical: {}",
            report.witnesses.len(),
            itertools::join(&report.witnesses[0], ",")
        );
        println!("explored {} prefixes", report.explored);
    }
    Ok(true)
}

fn cmd_rm2_profile(
    m: u32,
    prop1: Option<u32>,
    prop2: Option<&str>,
    s: &mut Session,
) -> Result<bool> {
    let spec = RmSpec::build(m)?;
    let (labels, profile, dims) = match (prop1, prop2) {
        (Some(u), None) => {
            let pc = spec.prop1_chain(u)?;
            (pc.labels, pc.profile, pc.dims)
        }
        (None, Some(text)) => {
            let pair = parse_u64_list(text, "placement")?;
            if pair.len() != 2 {
                return Err(Error::BadParameter("--prop2 needs exactly i,j".into()));
            }
            let pc = spec.prop2_chain(pair[0] as u32, pair[1] as u32)?;
            (pc.labels, pc.profile, pc.dims)
        }
        (None, None) => (
            spec.nested_chain_labels(),
            spec.closed_form_profile(),
            spec.nested_dims(),
        ),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };
    let label_text: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
    let order: Vec<u64> = labels.iter().map(|&l| spec.leader(l)).collect();
    if s.json {
        print_json(&json!({
            "m": m,
            "n": spec.n(),
            "order": order,
            "labels": label_text,
            "profile": profile.0,
            "dims": dims.0,
        }));
    } else {
        println!("m = {m}, n = {}", spec.n());
        println!("chain (smallest code first): {}", label_text.join(", "));
        println!("leaders: {}", itertools::join(&order, ","));
        println!("profile = {profile}");
        println!("dims    = {dims}");
    }
    Ok(true)
}

fn print_check_rows(rows: &[CheckRow], json_mode: bool) -> bool {
    let pass = rows.iter().all(|r| r.pass);
    if json_mode {
        let items: Vec<Value> = rows
            .iter()
            .map(|r| {
                json!({
                    "name": r.name,
                    "expected": r.expected,
                    "computed": r.computed,
                    "pass": r.pass,
                })
            })
            .collect();
        print_json(&json!({"checks": items, "pass": pass}));
    } else {
        let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
        for r in rows {
            println!(
                "{}  {:width$}  expected {} / computed {}",
                if r.pass { "PASS" } else { "FAIL" },
                r.name,
                r.expected,
                r.computed,
            );
        }
        println!(
            "{} of {} checks passed",
            rows.iter().filter(|r| r.pass).count(),
            rows.len()
        );
    }
    pass
}

fn cmd_rm2_verify(m: u32, claim_text: &str, s: &mut Session) -> Result<bool> {
    let claim: Claim = claim_text.parse()?;
    let spec = RmSpec::build(m)?;
    let opts = s.enum_options(spec.code()?.dimension)?;
    let report = rm2::verify(m, claim, &mut s.cache, &opts)?;
    Ok(print_check_rows(&report.rows, s.json))
}

fn cmd_sums_moments(m: u32, i: u32, j: u32, s: &mut Session) -> Result<bool> {
    let report = quadsums::moments(m, i, j)?;
    let rows: Vec<CheckRow> = report
        .rows
        .iter()
        .map(|r| CheckRow {
            name: format!("sum T^{} ({})", r.power, r.label),
            expected: r.expected.to_string(),
            computed: r.computed.to_string(),
            pass: r.matches,
        })
        .collect();
    Ok(print_check_rows(&rows, s.json))
}

fn cmd_sums_rank(m: u32, i: u32, s: &mut Session) -> Result<bool> {
    if i == 0 || i >= m {
        return Err(Error::BadParameter(format!("need 1 <= i <= m-1, got {i}")));
    }
    let ctx = crate::gf2::FieldContext::build(m, (1u64 << m) - 1)?;
    let mut tally: std::collections::BTreeMap<u32, u64> = Default::default();
    for alpha in 1..(1u32 << m) {
        let f = quadsums::QuadraticForm::new(vec![(i, alpha)], m)?;
        *tally.entry(quadsums::bilinear_rank(&f, &ctx)).or_insert(0) += 1;
    }
    let allowed = [m, m - crate::numtheory::gcd(2 * i as u64, m as u64) as u32];
    let pass = tally.keys().all(|r| allowed.contains(r));
    if s.json {
        let ranks: Vec<Value> = tally.iter().map(|(&r, &c)| json!([r, c])).collect();
        print_json(&json!({
            "m": m,
            "i": i,
            "ranks": ranks,
            "allowed": allowed.to_vec(),
            "pass": pass,
        }));
    } else {
        println!("rank,count");
        for (r, c) in &tally {
            println!("{r},{c}");
        }
        println!(
            "{}: ranks within {{{}, {}}}",
            if pass { "PASS" } else { "FAIL" },
            allowed[0],
            allowed[1]
        );
    }
    Ok(pass)
}

fn cmd_sums_dist(m: u32, i: u32, j: u32, s: &mut Session) -> Result<bool> {
    let dist = quadsums::t_ab_distribution(m, i, j)?;
    if s.json {
        let values: Vec<Value> = dist.values.iter().map(|(&v, &c)| json!([v, c])).collect();
        print_json(&json!({"m": m, "i": i, "j": j, "values": values}));
    } else {
        println!("value,multiplicity");
        for (v, c) in &dist.values {
            println!("{v},{c}");
        }
    }
    Ok(true)
}

fn cmd_reproduce(s: &mut Session) -> Result<bool> {
    let opts = s.enum_options(22)?;
    let rows = reproduce_all(&mut s.cache, &opts)?;
    Ok(print_check_rows(&rows, s.json))
}

/// The full battery: worked chain examples, optimality claims re-derived by
/// search, and the quadratic-form identities, one row per claim.
pub fn reproduce_all(cache: &mut DistanceCache, opts: &EnumOptions) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();

    // Chain counting for the length-21 example code.
    let counts = cosets::chain_counts(21, &[3, 9].into())?;
    rows.push(CheckRow::new(
        "n=21 chain counts (lambda, total, per class, classes)",
        "4, 24, 2, 12",
        format!(
            "{}, {}, {}, {}",
            counts.lambda, counts.total_chains, counts.per_class, counts.num_classes
        ),
    ));

    // Its factor polynomials.
    let ctx = crate::gf2::FieldContext::build(6, 21)?;
    let table = CosetTable::build(21)?;
    let minpoly = |s: u64| crate::gf2::minimal_polynomial_of(s, &table, &ctx);
    let p3 = minpoly(3)?;
    let p9 = minpoly(9)?;
    let degree3 = [
        crate::gf2::BinaryPolynomial::from_exponents(&[0, 2, 3]),
        crate::gf2::BinaryPolynomial::from_exponents(&[0, 1, 3]),
    ];
    rows.push(CheckRow::new(
        "n=21 size-3 cosets factor into 1+x^2+x^3 and 1+x+x^3",
        true,
        degree3.contains(&p3) && degree3.contains(&p9) && p3 != p9,
    ));
    rows.push(CheckRow::new(
        "n=21 coset {0} gives 1+x",
        "1 + x",
        minpoly(0)?,
    ));
    rows.push(CheckRow::new(
        "n=21 product of the size-3 factors",
        "1 + x + x^2 + x^3 + x^4 + x^5 + x^6",
        p3.mul(&p9),
    ));

    // Standard I on the class 15,9,8,6 of that code.
    let code21 = cyclic::code_from_leaders(21, &[0, 1, 5, 7].into())?;
    let class = DimensionProfile(vec![15, 9, 8, 6]);
    let r = chains::odpc_standard_i(&code21, &class, cache, opts)?;
    rows.push(CheckRow::new(
        "n=21 class 15,9,8,6 optimum profile",
        "2,6,6,8",
        &r.profile,
    ));
    rows.push(CheckRow::new("n=21 class 15,9,8,6 witnesses", 2, r.witnesses.len()));

    // Nested-chain formulas and layer parameters.
    for (m, claim) in [(5u32, Claim::Lemma4), (4, Claim::Lemma6), (6, Claim::Lemma6)] {
        rows.extend(rm2::verify(m, claim, cache, opts)?.rows);
    }

    // Restricted and unconditional optimality.
    rows.extend(rm2::verify(5, Claim::Thm1, cache, opts)?.rows);
    rows.extend(rm2::verify(4, Claim::Thm2, cache, opts)?.rows);
    rows.extend(rm2::verify(6, Claim::Thm2, cache, opts)?.rows);
    rows.extend(rm2::verify(4, Claim::Thm3, cache, opts)?.rows);
    rows.extend(rm2::verify(6, Claim::Thm3, cache, opts)?.rows);

    // The m=6 selection walk, step by step.
    rows.extend(example4_rows(cache, opts)?);

    // First selections of every Standard-II witness.
    for (m, first) in [(4u32, 2usize), (6, 3)] {
        let spec = RmSpec::build(m)?;
        let report = chains::odpc_standard_ii(&spec.code()?, cache, opts)?;
        let want: Vec<u64> = spec.nested_chain().order[..first].to_vec();
        let all_start = report.witnesses.iter().all(|w| w[..first] == want[..]);
        rows.push(CheckRow::new(
            format!("m={m} every optimum chain starts with the first {first} nested picks"),
            true,
            all_start,
        ));
    }

    // Delayed-placement families.
    rows.extend(rm2::verify(5, Claim::Props, cache, opts)?.rows);
    rows.extend(rm2::verify(6, Claim::Props, cache, opts)?.rows);

    // Half-degree coset sizes up to m=12.
    let mut sizes_ok = true;
    for m in 3..=12u32 {
        let spec = RmSpec::build(m)?;
        let table = CosetTable::build(spec.n())?;
        let top = if m % 2 == 0 { spec.t() + 1 } else { spec.t() };
        for j in 1..=top {
            let leader = spec.leader(spec.l_label(j));
            let got = table.coset_of(leader).unwrap().elements.len() as u32;
            let want = if m % 2 == 0 && j == spec.t() + 1 { m / 2 } else { m };
            sizes_ok &= got == want;
        }
    }
    rows.push(CheckRow::new(
        "coset sizes of 1+2^j layers for m <= 12 (m, except m/2 at the top even layer)",
        true,
        sizes_ok,
    ));

    // Two-power gcd identity (the function asserts agreement internally).
    let mut gcd_ok = true;
    for a in 1..=16 {
        for b in 1..=16 {
            gcd_ok &= crate::numtheory::gcd_two_pow(a, b) >= 1;
        }
    }
    rows.push(CheckRow::new(
        "gcd(2^a+1, 2^b-1) case formula = integer gcd for a,b <= 16",
        true,
        gcd_ok,
    ));

    // Coprime-exponent witnesses exist exactly off the powers of two.
    let mut witness_ok = true;
    for m in (4..=32u32).step_by(2) {
        let w = crate::numtheory::coprime_exponent_witness(m)?;
        witness_ok &= w.is_none() == m.is_power_of_two();
    }
    rows.push(CheckRow::new(
        "coprime exponent exists iff even m <= 32 is not a power of 2",
        true,
        witness_ok,
    ));

    // Rank membership at m=6.
    let ctx6 = crate::gf2::FieldContext::build(6, 63)?;
    for i in [1u32, 2] {
        let allowed = [6u32, 6 - crate::numtheory::gcd(2 * i as u64, 6) as u32];
        let ok = (1..64u32).all(|alpha| {
            let f = quadsums::QuadraticForm::new(vec![(i, alpha)], 6).unwrap();
            allowed.contains(&quadsums::bilinear_rank(&f, &ctx6))
        });
        rows.push(CheckRow::new(
            format!("m=6 i={i} bilinear ranks within {{{}, {}}}", allowed[0], allowed[1]),
            true,
            ok,
        ));
    }

    // One-weight criteria.
    let ow = quadsums::one_weight_report(6, 2, opts)?;
    rows.push(CheckRow::new(
        "m=6 i=2 one-weight code of weight 32",
        "one-weight 32",
        format!(
            "{} {}",
            if ow.observed { "one-weight" } else { "multi-weight" },
            ow.weight.map_or("-".into(), |w| w.to_string())
        ),
    ));
    let ow = quadsums::one_weight_report(6, 1, opts)?;
    rows.push(CheckRow::new(
        "m=6 i=1 not one-weight (gcd = 3)",
        "predicted=false observed=false",
        format!("predicted={} observed={}", ow.predicted, ow.observed),
    ));
    let ow = quadsums::one_weight_report(6, 3, opts)?;
    rows.push(CheckRow::new(
        "m=6 half-degree code: one weight 36 at dimension 3",
        "36 at k=3",
        format!("{} at k={}", ow.weight.map_or("-".into(), |w| w.to_string()), ow.dimension),
    ));
    let ow = quadsums::one_weight_report(4, 2, opts)?;
    rows.push(CheckRow::new(
        "m=4 half-degree code: one weight 10 at dimension 2",
        "10 at k=2",
        format!("{} at k={}", ow.weight.map_or("-".into(), |w| w.to_string()), ow.dimension),
    ));

    // Moment identities.
    let dist = quadsums::t_ab_distribution(6, 2, 1)?;
    rows.push(CheckRow::new("m=6 (i,j)=(2,1) sum T", 1i128 << 12, dist.moment(1)));
    rows.push(CheckRow::new("m=6 (i,j)=(2,1) sum T^2", 1i128 << 18, dist.moment(2)));
    let m3 = quadsums::count_m3(6, 2, 1)?;
    rows.push(CheckRow::new("m=6 (2,1) triple count by brute force", 568u64, m3.solutions));
    rows.push(CheckRow::new(
        "m=6 (2,1) triple count closed form",
        "568",
        m3.closed_form.map_or("-".into(), |v| v.to_string()),
    ));
    rows.push(CheckRow::new(
        "m=6 (2,1) sum T^3 = 2^12 * 568",
        (1i128 << 12) * 568,
        dist.moment(3),
    ));

    // Two-coset weight sets escape the three-value pattern.
    rows.push(CheckRow::new(
        "m=6 (2,1) two-coset code not three-valued",
        true,
        quadsums::three_weight_refutation(6, 2, 1, opts)?,
    ));
    rows.push(CheckRow::new(
        "m=6 (2,3) two-coset code not three-valued",
        true,
        quadsums::three_weight_refutation(6, 2, 3, opts)?,
    ));

    // Adding the all-ones coset to a quadratic layer at m=4 drops the
    // distance below 2^(m-1) - 1 = 7.
    let spec4 = RmSpec::build(4)?;
    for i in [1u32, 2] {
        let leaders: BTreeSet<u64> = [0, spec4.leader(spec4.l_label(i))].into();
        let code = cyclic::code_from_leaders(15, &leaders)?;
        let d = cache.distance_of(&code, opts)?;
        rows.push(CheckRow::new(
            format!("m=4 all-ones + layer-{i} code has distance < 7"),
            true,
            d < 7,
        ));
    }

    // At m in {4, 8}, no quadratic layer below the top is one-weight.
    let mut cor_ok = true;
    for m in [4u32, 8] {
        let n = (1u64 << m) - 1;
        let table = CosetTable::build(n)?;
        for i in 1..=((m - 2) / 2) {
            let leader = cyclic::theta_star_leader(&table, 1 + (1u64 << i));
            let code = cyclic::code_from_leaders(n, &[leader].into())?;
            let wd = cache.weights_of(&code, opts)?;
            cor_ok &= wd.nonzero_weights().len() >= 2;
        }
    }
    rows.push(CheckRow::new(
        "m in {4,8}: no sub-top quadratic layer is one-weight",
        true,
        cor_ok,
    ));

    // Three-value counts.
    let c = quadsums::lemma20_counts(6)?;
    rows.push(CheckRow::new("m=6 zero-value count over the punctured grid", 63u128, c.n0));
    rows.push(CheckRow::new(
        "m=6 three-value counts sum to 2^12 - 1",
        (1u128 << 12) - 1,
        c.n0 + c.n_plus + c.n_minus,
    ));

    Ok(rows)
}

/// Step-by-step distances of the m=6 selection walk.
fn example4_rows(cache: &mut DistanceCache, opts: &EnumOptions) -> Result<Vec<CheckRow>> {
    let spec = RmSpec::build(6)?;
    let mut rows = Vec::new();
    let leader = |s: u64| {
        spec.leader(if s == 0 { Label::Theta0 } else { Label::ThetaStar(s) })
    };
    let mut check = |name: String, labels: &[u64], want: u32| -> Result<CheckRow> {
        let leaders: BTreeSet<u64> = labels.iter().map(|&s| leader(s)).collect();
        let code = cyclic::code_from_leaders(63, &leaders)?;
        let d = cache.distance_of(&code, opts)?;
        Ok(CheckRow::new(name, want, d))
    };
    for (stars, want) in [
        (vec![1u64], 31u32),
        (vec![3], 24),
        (vec![5], 31),
        (vec![9], 27),
    ] {
        let name = format!("m=6 pair theta_0 + theta_{}*", stars[0]);
        rows.push(check(name, &[vec![0], stars].concat(), want)?);
    }
    for (stars, want) in [
        (vec![1u64, 3], 23u32),
        (vec![1, 5], 23),
        (vec![1, 9], 27),
        (vec![5, 3], 24),
        (vec![5, 9], 23),
    ] {
        let name = format!("m=6 triple theta_0 + theta_{}* + theta_{}*", stars[0], stars[1]);
        rows.push(check(name, &[vec![0], stars].concat(), want)?);
    }
    for (stars, want) in [(vec![1u64, 9, 3], 15u32), (vec![1, 9, 5], 23)] {
        let name = format!(
            "m=6 quadruple theta_0 + theta_{}* + theta_{}* + theta_{}*",
            stars[0], stars[1], stars[2]
        );
        rows.push(check(name, &[vec![0], stars].concat(), want)?);
    }
    rows.push(check("m=6 full code distance".into(), &[0, 1, 3, 5, 9], 15)?);
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leader_parsing() {
        assert_eq!(
            parse_leaders("0, 1,5,7").unwrap(),
            [0u64, 1, 5, 7].into()
        );
        assert!(parse_leaders("0,0").is_err());
        assert!(parse_leaders("a").is_err());
    }

    #[test]
    fn run_cosets_usage_error() {
        assert_eq!(run(["odpc", "cosets", "--n", "1"]), 2);
        assert_eq!(run(["odpc", "cosets", "--n", "10"]), 2);
    }

    #[test]
    fn run_unknown_command_is_usage_error() {
        assert_eq!(run(["odpc", "frobnicate"]), 2);
    }

    #[test]
    fn long_run_guard() {
        // k = 29 needs consent.
        assert_eq!(
            run(["odpc", "--limit", "30", "mindist", "--n", "127", "--leaders", "0,63,31,47,55"]),
            2
        );
    }

    #[test]
    fn workers_zero_rejected() {
        assert_eq!(run(["odpc", "--workers", "0", "cosets", "--n", "21"]), 2);
    }
}
