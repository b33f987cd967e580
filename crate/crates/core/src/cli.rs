//! Command-line front end: argument parsing, persisted record formats and
//! the subcommand implementations behind the `hstar` binary.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::analysis::{
    check_conditions, fitness_with, is_log_concave, is_unimodal, strict_dips, Phi4Mode,
};
use crate::error::{Error, Result};
use crate::evolution::{
    default_seed_pair, default_seed_vector, Engine, GaConfig, Genome, HStarPair, Population,
    RunTrace, SearchSpace, Variant,
};
use crate::exactpoly::BigRat;
use crate::explore::{
    expand_solutions, grid_search_diagonal, grid_search_pairs_in, SolutionSet, Spike,
};
use crate::realize::{
    build_simplex, count_hstar_oracle_with, pqrk_hstar, verify_counterexample, PqrkParams,
    ORACLE_MAX_DIM,
};
use crate::reproduce;
use crate::transforms::{e_transform, pi_product, w_transform, EhrhartVector, HStarVector};

/// How a command finished when it did not fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    /// Exit code 0.
    Found,
    /// Exit code 2: ran to completion without findings.
    Nothing,
}

impl Status {
    fn from_bool(found: bool) -> Self {
        if found {
            Status::Found
        } else {
            Status::Nothing
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            Status::Found => 0,
            Status::Nothing => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "hstar",
    version,
    about = "Exact h*-vector products and the search for non-unimodal ones"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ehrhart coefficients of an h*-vector, or the reverse with --ehrhart.
    Transform(TransformArgs),
    /// h*-vector of the product of two polytopes.
    Product(ProductArgs),
    /// Inequality table and fitness for a vector, or re-verify a solutions file.
    Check(CheckArgs),
    /// Run the genetic search.
    Evolve(EvolveArgs),
    /// Breadth-first expansion of known solutions.
    Expand(ExpandArgs),
    /// Search spike vectors (1,..,1,m,0,..,0) for solutions.
    Gridsearch(GridArgs),
    /// Closed-form h*-vector of P(q,r,k) or the Reeve simplex R(q,k).
    Realize(RealizeArgs),
    /// Count lattice points of P(q,r,k) directly (d <= 5 by default).
    CountOracle(OracleArgs),
    /// Verify that P(a) x P(b) has a non-unimodal h*-vector.
    Counterexample(CounterexampleArgs),
    /// Run every reproduction check and print one line per check.
    ReproducePaper(ReproduceArgs),
}

fn parse_vector(s: &str) -> std::result::Result<HStarVector, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_params(s: &str) -> std::result::Result<PqrkParams, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// `a/b`, an integer, or a terminating decimal such as `1.05`, all exact.
pub fn parse_rational(s: &str) -> Result<BigRat> {
    let t = s.trim();
    if t.contains('/') {
        let r = BigRat::from_str(t).map_err(|_| Error::parse(t, "not a rational a/b"))?;
        return Ok(r);
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty()
        || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(Error::parse(t, "not a number"));
    }
    let digits: BigInt = format!("{int}{frac}0")
        .parse::<BigInt>()
        .map_err(|_| Error::parse(t, "not a number"))?
        / 10;
    let mut r = BigRat::new(digits, BigInt::from(10).pow(frac.len() as u32));
    if neg {
        r = -r;
    }
    Ok(r)
}

fn parse_rational_arg(s: &str) -> std::result::Result<BigRat, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// Fixed-point rendering with `places` digits, rounded half away from zero.
pub fn decimal(r: &BigRat, places: usize) -> String {
    let scale = BigInt::from(10).pow(places as u32);
    let n: BigInt = r.numer().abs() * &scale * 2 + r.denom();
    let q = n.div_floor(&(r.denom() * 2));
    let (int, frac) = q.div_rem(&scale);
    let sign = if r.is_negative() && !q.is_zero() {
        "-"
    } else {
        ""
    };
    if places == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{:0>places$}", frac.to_string())
    }
}

/// Replaces `path` in one step: the content goes to a temporary file in the
/// same directory, which is then renamed over the target.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn json_number(x: &BigInt) -> serde_json::Number {
    serde_json::Number::from_str(&x.to_string()).expect("integers are valid JSON numbers")
}

/// Checks on one vector, recomputed from scratch.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorCheck {
    pub unimodal: bool,
    /// Exact fitness as `n/d` or `n`.
    pub fitness: String,
    pub components: Vec<serde_json::Number>,
    pub conditions_pass: bool,
}

impl FactorCheck {
    pub fn of(h: &HStarVector, mode: Phi4Mode) -> Result<Self> {
        let f = fitness_with(h, mode)?;
        Ok(Self {
            unimodal: is_unimodal(h),
            fitness: f.total.to_string(),
            components: f.components().iter().map(|c| json_number(c)).collect(),
            conditions_pass: check_conditions(h)?.iter().all(|c| c.passed),
        })
    }
}

/// Verification block attached to every persisted solution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub factors: Vec<FactorCheck>,
    pub in_search_space: bool,
    pub product_unimodal: bool,
    pub product_dips: Vec<usize>,
    /// Sum of factor fitnesses.
    pub fitness: String,
}

impl Verification {
    pub fn of_vector(h: &HStarVector, mode: Phi4Mode) -> Result<Self> {
        Self::build(&[h], SearchSpace::new().contains(h), pi_product(h, h), mode)
    }

    pub fn of_pair(h: &HStarVector, g: &HStarVector, mode: Phi4Mode) -> Result<Self> {
        Self::build(
            &[h, g],
            SearchSpace::new().contains_pair(h, g),
            pi_product(h, g),
            mode,
        )
    }

    fn build(
        factors: &[&HStarVector],
        in_search_space: bool,
        product: HStarVector,
        mode: Phi4Mode,
    ) -> Result<Self> {
        let mut total = BigRat::zero();
        for h in factors {
            total += fitness_with(h, mode)?.total;
        }
        Ok(Self {
            factors: factors
                .iter()
                .map(|h| FactorCheck::of(h, mode))
                .collect::<Result<_>>()?,
            in_search_space,
            product_unimodal: is_unimodal(&product),
            product_dips: strict_dips(&product),
            fitness: total.to_string(),
        })
    }

    /// A member of the search space with fitness zero.
    pub fn is_solution(&self) -> bool {
        self.in_search_space && self.fitness == "0"
    }
}

/// Configuration as echoed into solution records.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub p_mu: f64,
    pub n_max: usize,
    pub n_min: usize,
    pub epsilon: String,
    pub t_max: u64,
    pub variant: Variant,
    pub phi4_literal: bool,
    pub mutation_multiset: bool,
}

impl From<&GaConfig> for ConfigEcho {
    fn from(c: &GaConfig) -> Self {
        Self {
            p_mu: c.p_mu,
            n_max: c.n_max,
            n_min: c.n_min,
            epsilon: c.epsilon.to_string(),
            t_max: c.t_max,
            variant: c.variant,
            phi4_literal: c.phi4_literal,
            mutation_multiset: c.mutation_multiset,
        }
    }
}

/// One line of a solutions file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vector: Option<HStarVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<(HStarVector, HStarVector)>,
    pub variant: Variant,
    pub seed: u64,
    pub generation_found: u64,
    pub config: ConfigEcho,
    pub verification: Verification,
}

impl SolutionRecord {
    fn mode(&self) -> Phi4Mode {
        if self.config.phi4_literal {
            Phi4Mode::Literal
        } else {
            Phi4Mode::Corrected
        }
    }

    /// Verification computed afresh from the stored genome.
    pub fn recompute(&self) -> Result<Verification> {
        match (&self.vector, &self.pair) {
            (Some(h), None) => Verification::of_vector(h, self.mode()),
            (None, Some((h, g))) => Verification::of_pair(h, g, self.mode()),
            _ => Err(Error::InvalidParameter(
                "record needs exactly one of `vector` and `pair`".into(),
            )),
        }
    }
}

/// A genome that can be written to a solutions file.
pub trait Persist: Genome {
    fn record(&self, cfg: &GaConfig, generation_found: u64) -> Result<SolutionRecord>;
}

impl Persist for HStarVector {
    fn record(&self, cfg: &GaConfig, generation_found: u64) -> Result<SolutionRecord> {
        Ok(SolutionRecord {
            vector: Some(self.clone()),
            pair: None,
            variant: Variant::A,
            seed: cfg.rng_seed,
            generation_found,
            config: cfg.into(),
            verification: Verification::of_vector(self, cfg.phi4_mode())?,
        })
    }
}

impl Persist for HStarPair {
    fn record(&self, cfg: &GaConfig, generation_found: u64) -> Result<SolutionRecord> {
        Ok(SolutionRecord {
            vector: None,
            pair: Some((self.first.clone(), self.second.clone())),
            variant: Variant::B,
            seed: cfg.rng_seed,
            generation_found,
            config: cfg.into(),
            verification: Verification::of_pair(&self.first, &self.second, cfg.phi4_mode())?,
        })
    }
}

pub fn to_jsonl<T: Serialize>(records: &[T]) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.push(b'\n');
    }
    Ok(out)
}

pub fn read_jsonl<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let text = fs::read_to_string(path)?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(Error::from))
        .collect()
}

/// Trace as CSV: generation, exact best fitness, decimal best and mean
/// fitness, population size.
pub fn trace_csv(trace: &RunTrace) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "generation",
        "best_fitness_numerator",
        "best_fitness_denominator",
        "best_fitness",
        "mean_fitness",
        "population_size",
    ])?;
    for row in &trace.rows {
        w.write_record([
            row.generation.to_string(),
            row.best_fitness.numer().to_string(),
            row.best_fitness.denom().to_string(),
            decimal(&row.best_fitness, 12),
            decimal(&row.mean_fitness, 12),
            row.population_size.to_string(),
        ])?;
    }
    w.into_inner()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    /// h*-vector, e.g. 1,1,1,1,1,6.
    #[arg(value_parser = parse_vector, required_unless_present = "ehrhart")]
    pub vector: Option<HStarVector>,
    /// Ehrhart polynomial coefficients c_0,...,c_d (rationals allowed) to
    /// turn into an h*-vector instead.
    #[arg(long, conflicts_with = "vector")]
    pub ehrhart: Option<String>,
}

#[derive(Debug, Args)]
pub struct ProductArgs {
    #[arg(value_parser = parse_vector)]
    pub h: HStarVector,
    #[arg(value_parser = parse_vector)]
    pub g: HStarVector,
    /// Print a JSON object instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(value_parser = parse_vector, required_unless_present = "solutions")]
    pub vector: Option<HStarVector>,
    /// Re-verify every record of a JSON Lines file written by `evolve`,
    /// `expand` or `gridsearch`.
    #[arg(long, conflicts_with = "vector")]
    pub solutions: Option<PathBuf>,
    /// Score the fourth component as literally printed.
    #[arg(long)]
    pub phi4_literal: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct EvolveArgs {
    /// TOML file whose keys mirror the long flag names; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// RNG seed; a random one is drawn and printed if absent.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub p_mu: Option<f64>,
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long)]
    pub n_min: Option<usize>,
    /// Age penalty base, exact: 21/20 or 1.05.
    #[arg(long, value_parser = parse_rational_arg)]
    pub epsilon: Option<BigRat>,
    #[arg(long)]
    pub t_max: Option<u64>,
    #[arg(long)]
    pub variant: Option<Variant>,
    #[arg(long)]
    pub phi4_literal: bool,
    #[arg(long)]
    pub mutation_multiset: bool,
    /// Starting individual, repeatable. Variant B takes `h;g`.
    #[arg(long)]
    pub initial: Vec<String>,
    /// JSON Lines output for solutions.
    #[arg(long)]
    pub solutions: Option<PathBuf>,
    /// CSV output for the per-generation trace.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct EvolveFile {
    seed: Option<u64>,
    p_mu: Option<f64>,
    n_max: Option<usize>,
    n_min: Option<usize>,
    epsilon: Option<toml::Value>,
    t_max: Option<u64>,
    variant: Option<String>,
    phi4_literal: Option<bool>,
    mutation_multiset: Option<bool>,
    initial: Option<Vec<String>>,
    solutions: Option<PathBuf>,
    trace: Option<PathBuf>,
}

impl EvolveArgs {
    /// Flags layered over the config file, which is layered over defaults.
    pub fn resolve(&self) -> Result<ResolvedEvolve> {
        let file: EvolveFile = match &self.config {
            Some(p) => toml::from_str(&fs::read_to_string(p)?)?,
            None => EvolveFile::default(),
        };
        let d = GaConfig::default();
        let file_epsilon = match file.epsilon {
            None => None,
            Some(toml::Value::String(s)) => Some(parse_rational(&s)?),
            Some(toml::Value::Float(x)) => Some(parse_rational(&x.to_string())?),
            Some(toml::Value::Integer(x)) => Some(BigRat::from_integer(x.into())),
            Some(other) => {
                return Err(Error::InvalidConfig(format!(
                    "epsilon: unsupported value {other}"
                )))
            }
        };
        let file_variant = file.variant.as_deref().map(Variant::from_str).transpose()?;
        let seed_given = self.seed.or(file.seed);
        let cfg = GaConfig {
            p_mu: self.p_mu.or(file.p_mu).unwrap_or(d.p_mu),
            n_max: self.n_max.or(file.n_max).unwrap_or(d.n_max),
            n_min: self.n_min.or(file.n_min).unwrap_or(d.n_min),
            epsilon: self.epsilon.clone().or(file_epsilon).unwrap_or(d.epsilon),
            t_max: self.t_max.or(file.t_max).unwrap_or(d.t_max),
            rng_seed: seed_given.unwrap_or_else(rand::random),
            variant: self.variant.or(file_variant).unwrap_or(d.variant),
            phi4_literal: self.phi4_literal || file.phi4_literal.unwrap_or(false),
            mutation_multiset: self.mutation_multiset || file.mutation_multiset.unwrap_or(false),
        };
        cfg.validate()?;
        let initial = if self.initial.is_empty() {
            file.initial.unwrap_or_default()
        } else {
            self.initial.clone()
        };
        Ok(ResolvedEvolve {
            cfg,
            seed_was_drawn: seed_given.is_none(),
            initial,
            solutions: self.solutions.clone().or(file.solutions),
            trace: self.trace.clone().or(file.trace),
        })
    }
}

#[derive(Clone, Debug)]
pub struct ResolvedEvolve {
    pub cfg: GaConfig,
    pub seed_was_drawn: bool,
    pub initial: Vec<String>,
    pub solutions: Option<PathBuf>,
    pub trace: Option<PathBuf>,
}

/// Result of an `evolve` run, already rendered for persistence.
#[derive(Clone, Debug)]
pub struct EvolveReport {
    pub records: Vec<SolutionRecord>,
    pub generation_found: Option<u64>,
    pub trace: RunTrace,
}

fn run_engine<G: Persist>(cfg: &GaConfig, initial: Vec<G>) -> Result<EvolveReport> {
    let pop = Population::from_genomes(initial, cfg.phi4_mode());
    let out = Engine::<G>::new(cfg.clone())?.run(pop)?;
    let records = match out.generation_found {
        Some(t) => out
            .solutions
            .iter()
            .map(|s| s.record(cfg, t))
            .collect::<Result<_>>()?,
        None => Vec::new(),
    };
    Ok(EvolveReport {
        records,
        generation_found: out.generation_found,
        trace: out.trace,
    })
}

/// Runs the search described by `r` and writes the requested files.
pub fn evolve(r: &ResolvedEvolve) -> Result<EvolveReport> {
    let report = match r.cfg.variant {
        Variant::A => {
            let initial = if r.initial.is_empty() {
                vec![default_seed_vector()]
            } else {
                r.initial
                    .iter()
                    .map(|s| s.parse())
                    .collect::<Result<Vec<HStarVector>>>()?
            };
            run_engine(&r.cfg, initial)?
        }
        Variant::B => {
            let initial = if r.initial.is_empty() {
                vec![default_seed_pair()]
            } else {
                r.initial
                    .iter()
                    .map(|s| {
                        let (h, g) = s
                            .split_once(';')
                            .ok_or_else(|| Error::parse(s, "variant B expects h;g"))?;
                        Ok(HStarPair::new(h.parse()?, g.parse()?))
                    })
                    .collect::<Result<Vec<_>>>()?
            };
            run_engine(&r.cfg, initial)?
        }
    };
    if let Some(p) = &r.solutions {
        write_atomic(p, &to_jsonl(&report.records)?)?;
    }
    if let Some(p) = &r.trace {
        write_atomic(p, &trace_csv(&report.trace)?)?;
    }
    Ok(report)
}

#[derive(Debug, Args)]
pub struct ExpandArgs {
    /// JSON Lines file whose records carry a `vector` field.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Seed solution, repeatable.
    #[arg(long, value_parser = parse_vector)]
    pub vector: Vec<HStarVector>,
    #[arg(long, default_value_t = 1000)]
    pub limit: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// One line of an `expand` output file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorRecord {
    pub vector: HStarVector,
    pub verification: Verification,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = 2)]
    pub k_min: usize,
    #[arg(long)]
    pub k_max: usize,
    #[arg(long)]
    pub m_max: u64,
    /// Search unordered pairs of spikes instead of (h, h).
    #[arg(long)]
    pub pairs: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// One line of a `gridsearch` output file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridRecord {
    pub k: usize,
    pub m: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k2: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m2: Option<u64>,
    pub vector: HStarVector,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vector2: Option<HStarVector>,
    pub dimension: usize,
    pub verification: Verification,
}

#[derive(Debug, Args)]
pub struct RealizeArgs {
    #[arg(long)]
    pub q: u64,
    /// Omit for the Reeve simplex R(q,k).
    #[arg(long)]
    pub r: Option<u64>,
    #[arg(long)]
    pub k: usize,
    /// Also print the vertex list.
    #[arg(long)]
    pub vertices: bool,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub r: Option<u64>,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = ORACLE_MAX_DIM)]
    pub max_dim: usize,
}

#[derive(Debug, Args)]
pub struct CounterexampleArgs {
    /// First factor as q,r,k.
    #[arg(long, value_parser = parse_params)]
    pub a: PqrkParams,
    /// Second factor as q,r,k.
    #[arg(long, value_parser = parse_params)]
    pub b: PqrkParams,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
    /// Also write the JSON report to this file.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// Skip the two statistical search checks, which take several minutes.
    #[arg(long)]
    pub skip_search: bool,
}

/// Parses `args` (program name first), runs the command and maps the
/// outcome to an exit code: 0 with findings, 2 without, 1 on errors.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli.command) {
        Ok(status) => ExitCode::from(status.exit_code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

pub fn run(command: &Command) -> Result<Status> {
    let mut out = String::new();
    let status = match command {
        Command::Transform(a) => cmd_transform(a, &mut out)?,
        Command::Product(a) => cmd_product(a, &mut out)?,
        Command::Check(a) => cmd_check(a, &mut out)?,
        Command::Evolve(a) => cmd_evolve(a, &mut out)?,
        Command::Expand(a) => cmd_expand(a, &mut out)?,
        Command::Gridsearch(a) => cmd_gridsearch(a, &mut out)?,
        Command::Realize(a) => cmd_realize(a, &mut out)?,
        Command::CountOracle(a) => cmd_count_oracle(a, &mut out)?,
        Command::Counterexample(a) => cmd_counterexample(a, &mut out)?,
        Command::ReproducePaper(a) => return cmd_reproduce(a),
    };
    print!("{out}");
    Ok(status)
}

fn verdict(unimodal: bool) -> &'static str {
    if unimodal {
        "unimodal"
    } else {
        "non-unimodal"
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

pub fn cmd_transform(a: &TransformArgs, out: &mut String) -> Result<Status> {
    if let Some(h) = &a.vector {
        let e = e_transform(h);
        writeln!(out, "ehrhart coefficients: {}", join(e.entries())).ok();
        writeln!(out, "ehr(0..={}): {}", e.d(), join(&e.values())).ok();
    } else if let Some(c) = &a.ehrhart {
        let coeffs = c
            .split(',')
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        let h = w_transform(&EhrhartVector::new(coeffs)?);
        writeln!(out, "h*: {}", join(&h)).ok();
    }
    Ok(Status::Found)
}

#[derive(Serialize)]
struct ProductJson<'a> {
    h: &'a HStarVector,
    g: &'a HStarVector,
    product: &'a HStarVector,
    unimodal: bool,
    dips: Vec<usize>,
}

pub fn cmd_product(a: &ProductArgs, out: &mut String) -> Result<Status> {
    let p = pi_product(&a.h, &a.g);
    let unimodal = is_unimodal(&p);
    if a.json {
        let j = ProductJson {
            h: &a.h,
            g: &a.g,
            product: &p,
            unimodal,
            dips: strict_dips(&p),
        };
        writeln!(out, "{}", serde_json::to_string(&j)?).ok();
    } else {
        writeln!(out, "{p}").ok();
        writeln!(out, "{}", verdict(unimodal)).ok();
        let dips = strict_dips(&p);
        if !dips.is_empty() {
            writeln!(out, "strict dips at {}", join(&dips)).ok();
        }
    }
    Ok(Status::Found)
}

pub fn cmd_check(a: &CheckArgs, out: &mut String) -> Result<Status> {
    let mode = if a.phi4_literal {
        Phi4Mode::Literal
    } else {
        Phi4Mode::Corrected
    };
    if let Some(path) = &a.solutions {
        return check_file(path, out);
    }
    let h = a.vector.as_ref().expect("clap requires a vector");
    writeln!(out, "h = ({h})").ok();
    for c in check_conditions(h)? {
        let state = match (c.applicable, c.passed) {
            (false, _) => "n/a ".to_string(),
            (true, true) => "pass".to_string(),
            (true, false) => format!(
                "FAIL violation {} at i = {}",
                c.violation,
                join(&c.failing_indices)
            ),
        };
        writeln!(out, "  ({}) {:<52} {state}", c.condition, c.describe()).ok();
    }
    writeln!(out, "{}", fitness_with(h, mode)?).ok();
    writeln!(out, "unimodal: {}", is_unimodal(h)).ok();
    writeln!(out, "log-concave: {}", is_log_concave(h)).ok();
    let p = pi_product(h, h);
    writeln!(out, "self-product: {}", verdict(is_unimodal(&p))).ok();
    writeln!(out, "in search space: {}", SearchSpace::new().contains(h)).ok();
    Ok(Status::Found)
}

fn check_file(path: &Path, out: &mut String) -> Result<Status> {
    let text = fs::read_to_string(path)?;
    let mut ok = 0usize;
    let mut bad = 0usize;
    for (n, line) in text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
    {
        let value: serde_json::Value = serde_json::from_str(line)?;
        let (label, stored, fresh) = if value.get("variant").is_some() {
            let r: SolutionRecord = serde_json::from_value(value)?;
            let label = match (&r.vector, &r.pair) {
                (Some(h), _) => h.to_string(),
                (_, Some((h, g))) => format!("({h}) x ({g})"),
                _ => String::new(),
            };
            let fresh = r.recompute()?;
            (label, r.verification, fresh)
        } else if value.get("vector2").is_some() {
            let r: GridRecord = serde_json::from_value(value)?;
            let g = r.vector2.clone().expect("checked above");
            let fresh = Verification::of_pair(&r.vector, &g, Phi4Mode::Corrected)?;
            (format!("({}) x ({g})", r.vector), r.verification, fresh)
        } else {
            let r: VectorRecord = serde_json::from_value(value)?;
            let fresh = Verification::of_vector(&r.vector, Phi4Mode::Corrected)?;
            (r.vector.to_string(), r.verification, fresh)
        };
        let good = stored == fresh;
        let solution =
            fresh.factors.iter().all(|f| f.unimodal && f.fitness == "0") && !fresh.product_unimodal;
        if good && solution {
            ok += 1;
        } else {
            bad += 1;
            writeln!(
                out,
                "line {}: {label}: {}",
                n + 1,
                if good {
                    "not a solution"
                } else {
                    "stored verification differs"
                }
            )
            .ok();
        }
    }
    writeln!(out, "{ok} verified, {bad} failed").ok();
    Ok(Status::from_bool(bad == 0 && ok > 0))
}

pub fn cmd_evolve(a: &EvolveArgs, out: &mut String) -> Result<Status> {
    let r = a.resolve()?;
    if r.seed_was_drawn {
        eprintln!("seed: {}", r.cfg.rng_seed);
    }
    let report = evolve(&r)?;
    writeln!(out, "seed {} variant {}", r.cfg.rng_seed, r.cfg.variant).ok();
    match report.generation_found {
        Some(t) => {
            writeln!(
                out,
                "{} solution(s) at generation {t}",
                report.records.len()
            )
            .ok();
            for rec in &report.records {
                match (&rec.vector, &rec.pair) {
                    (Some(h), _) => writeln!(out, "  {h}").ok(),
                    (_, Some((h, g))) => writeln!(out, "  ({h}) x ({g})").ok(),
                    _ => None,
                };
            }
        }
        None => {
            writeln!(out, "no solution within {} generations", r.cfg.t_max).ok();
        }
    }
    Ok(Status::from_bool(report.generation_found.is_some()))
}

pub fn cmd_expand(a: &ExpandArgs, out: &mut String) -> Result<Status> {
    let mut seeds = a.vector.clone();
    if let Some(p) = &a.input {
        for value in read_jsonl::<serde_json::Value>(p)? {
            match value.get("vector") {
                Some(v) => seeds.push(serde_json::from_value(v.clone())?),
                None => {
                    return Err(Error::InvalidParameter(format!(
                        "{}: record without a `vector` field",
                        p.display()
                    )))
                }
            }
        }
    }
    if seeds.is_empty() {
        return Err(Error::InvalidParameter(
            "expand needs --input or at least one --vector".into(),
        ));
    }
    let set = expand_solutions(&SolutionSet::from_vectors(seeds)?, a.limit);
    writeln!(out, "{} solutions", set.len()).ok();
    if let Some((lead, trail)) = set.shape_bounds() {
        writeln!(
            out,
            "every solution has at least {lead} leading ones and {trail} trailing zeros"
        )
        .ok();
    }
    if let Some(p) = &a.output {
        let records = set
            .vectors()
            .iter()
            .map(|h| {
                Ok(VectorRecord {
                    vector: h.clone(),
                    verification: Verification::of_vector(h, Phi4Mode::Corrected)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        write_atomic(p, &to_jsonl(&records)?)?;
    }
    Ok(Status::from_bool(!set.is_empty()))
}

/// Per-`k` listing with runs of consecutive `m` collapsed to `a..b`.
pub fn grid_table(hits: &[Spike]) -> String {
    let mut out = String::new();
    let mut i = 0;
    while i < hits.len() {
        let k = hits[i].k;
        let ms: Vec<u64> = hits[i..]
            .iter()
            .take_while(|s| s.k == k)
            .map(|s| s.m)
            .collect();
        i += ms.len();
        let mut parts = Vec::new();
        let mut j = 0;
        while j < ms.len() {
            let mut e = j;
            while e + 1 < ms.len() && ms[e + 1] == ms[e] + 1 {
                e += 1;
            }
            parts.push(if e == j {
                ms[j].to_string()
            } else {
                format!("{}..{}", ms[j], ms[e])
            });
            j = e + 1;
        }
        writeln!(out, "k={k:<3} m: {}", parts.join(", ")).ok();
    }
    out
}

pub fn cmd_gridsearch(a: &GridArgs, out: &mut String) -> Result<Status> {
    if a.k_max < 2 || a.m_max < 1 || a.k_min > a.k_max {
        return Err(Error::InvalidParameter(
            "need 2 <= k-min <= k-max and m-max >= 1".into(),
        ));
    }
    let mut records = Vec::new();
    let found = if a.pairs {
        let hits = grid_search_pairs_in(a.k_min.max(2), a.k_max, a.m_max);
        for p in &hits {
            writeln!(
                out,
                "({},{}) x ({},{})  dim {}{}",
                p.first.k,
                p.first.m,
                p.second.k,
                p.second.m,
                p.dimension(),
                if p.is_diagonal() { "  diagonal" } else { "" }
            )
            .ok();
            let (h, g) = (p.first.vector(), p.second.vector());
            records.push(GridRecord {
                k: p.first.k,
                m: p.first.m,
                k2: Some(p.second.k),
                m2: Some(p.second.m),
                verification: Verification::of_pair(&h, &g, Phi4Mode::Corrected)?,
                vector: h,
                vector2: Some(g),
                dimension: p.dimension(),
            });
        }
        if let Some(min) = hits.iter().map(|p| p.dimension()).min() {
            writeln!(out, "{} pairs, smallest dimension {min}", hits.len()).ok();
        }
        !hits.is_empty()
    } else {
        let hits: Vec<Spike> = grid_search_diagonal(a.k_max, a.m_max)
            .into_iter()
            .filter(|s| s.k >= a.k_min)
            .collect();
        out.push_str(&grid_table(&hits));
        writeln!(out, "{} solutions", hits.len()).ok();
        for s in &hits {
            let h = s.vector();
            records.push(GridRecord {
                k: s.k,
                m: s.m,
                k2: None,
                m2: None,
                verification: Verification::of_vector(&h, Phi4Mode::Corrected)?,
                dimension: 2 * (2 * s.k - 1),
                vector: h,
                vector2: None,
            });
        }
        !hits.is_empty()
    };
    if let Some(p) = &a.output {
        write_atomic(p, &to_jsonl(&records)?)?;
    }
    Ok(Status::from_bool(found))
}

pub fn cmd_realize(a: &RealizeArgs, out: &mut String) -> Result<Status> {
    let h = pqrk_hstar(a.q, a.r.unwrap_or(0), a.k)?;
    writeln!(out, "{h}").ok();
    if a.vertices {
        let spec = build_simplex(a.q, a.r, a.k)?;
        writeln!(out, "dimension {}", spec.dimension).ok();
        for v in &spec.vertices {
            writeln!(out, "  ({})", join(v)).ok();
        }
    }
    Ok(Status::Found)
}

pub fn cmd_count_oracle(a: &OracleArgs, out: &mut String) -> Result<Status> {
    let spec = build_simplex(a.q, a.r, a.k)?;
    let counted = count_hstar_oracle_with(&spec, a.max_dim)?;
    let formula = pqrk_hstar(a.q, a.r.unwrap_or(0), a.k)?;
    writeln!(out, "counted:     {counted}").ok();
    writeln!(out, "closed form: {formula}").ok();
    let agree = counted == formula;
    writeln!(out, "{}", if agree { "agree" } else { "DISAGREE" }).ok();
    Ok(Status::from_bool(agree))
}

pub fn cmd_counterexample(a: &CounterexampleArgs, out: &mut String) -> Result<Status> {
    let report = verify_counterexample(a.a, a.b)?;
    let json = serde_json::to_string_pretty(&report)?;
    if a.json {
        writeln!(out, "{json}").ok();
    } else {
        writeln!(out, "{report}").ok();
    }
    if let Some(p) = &a.output {
        write_atomic(p, format!("{json}\n").as_bytes())?;
    }
    Ok(Status::from_bool(report.is_counterexample()))
}

fn cmd_reproduce(a: &ReproduceArgs) -> Result<Status> {
    let mut all = true;
    let report = |o: &reproduce::CriterionOutcome| {
        println!("{o}");
        std::io::stdout().flush().ok();
    };
    for o in reproduce::run_all(!a.skip_search, report) {
        all &= o.passed;
    }
    Ok(Status::from_bool(all))
}
