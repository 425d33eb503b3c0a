//! Argument parsing and command dispatch for the `coarse` binary.
//!
//! Exit codes: 0 when every verdict passes, 2 for unusable input, 3 when a
//! construction or verification finds a defect.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use coarse_core::product::{
    build_product_space, coarse_envelope, envelope_note, threshold_grid, ProductMetricKind, WeightFn,
};
use coarse_core::profile::{apc_schedule, Profile, Rescale, ScheduleConvention};
use coarse_core::{DecompositionError, FiniteMetricSpace, Norm, Subset, SubsetArray};

use crate::format::{
    envelope_csv, scaling_csv, space_to_json, to_json, ProfileDoc, ReportDoc, ScheduleDoc, SpaceDoc,
};
use crate::generate::{self, DEFAULT_SEED};
use crate::scenario::{self, Family};

#[derive(Debug, Parser)]
#[command(name = "coarse", version, about = "Finite coarse-geometry decompositions with verified bounds")]
pub struct Cli {
    /// Seed for every randomised step.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build or validate a space and write it as JSON.
    Space(SpaceArgs),
    /// Run a construction and write its report.
    #[command(subcommand)]
    Decompose(Decompose),
    /// Profile arithmetic and scale schedules.
    #[command(subcommand)]
    Profile(ProfileCmd),
    /// Distance envelopes between the reduced and asymptotic product metrics.
    Envelope(EnvelopeArgs),
    /// Recorded asdim bounds over a family of growing spaces, as CSV.
    Scaling(ScalingArgs),
    /// Re-verify a report or profile instance.
    Verify {
        file: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    L1,
    Sup,
}

impl From<NormArg> for Norm {
    fn from(n: NormArg) -> Norm {
        match n {
            NormArg::L1 => Norm::L1,
            NormArg::Sup => Norm::Sup,
        }
    }
}

#[derive(Debug, Args)]
pub struct SpaceArgs {
    /// `I_N = {0, …, N−1}`.
    #[arg(long, conflicts_with_all = ["grid", "from", "random"])]
    pub interval: Option<usize>,
    /// Spacing of the interval points.
    #[arg(long, requires = "interval", default_value_t = 1.0)]
    pub spacing: f64,
    /// Grid dimensions such as `8x8`.
    #[arg(long, conflicts_with_all = ["from", "random"])]
    pub grid: Option<String>,
    #[arg(long, value_enum, default_value = "l1")]
    pub norm: NormArg,
    /// Any space JSON, validated and rewritten.
    #[arg(long, conflicts_with = "random")]
    pub from: Option<PathBuf>,
    /// A seeded random space with at most this many points.
    #[arg(long)]
    pub random: Option<usize>,
    /// Keep only these points, e.g. `0..2,20..22`.
    #[arg(long)]
    pub subset: Option<String>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Decompose {
    /// Augmented asdim matrix with `m` rows at scale `r`.
    Asdim {
        #[arg(long)]
        space: PathBuf,
        #[arg(short)]
        r: f64,
        #[arg(short)]
        m: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Perpendicular array of `Y` at scale `s` and the split of `Z` at scale `r`.
    Perp {
        #[arg(long)]
        space: PathBuf,
        #[arg(short)]
        s: f64,
        #[arg(short)]
        r: f64,
        #[arg(short)]
        m: usize,
        /// `Y`, e.g. `0..3`.
        #[arg(long)]
        set: String,
        /// The `m+1` entries of `Z` separated by `;`; empty entries by default.
        #[arg(long)]
        z: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Scale-r-disjoint refinement of a set (default: the whole space).
    Refine {
        #[arg(long)]
        space: PathBuf,
        #[arg(short)]
        r: f64,
        #[arg(short)]
        s: f64,
        #[arg(long)]
        set: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Split of `X × Y` from an asdim matrix of `X` and a refinement of `Y`.
    Product {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        factor: PathBuf,
        #[arg(short)]
        r: f64,
        #[arg(short)]
        s: f64,
        #[arg(long, value_enum, default_value = "l1")]
        norm: NormArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Truncated product of `2i`-discrete scaled intervals.
    TruncProduct {
        /// Points per factor.
        #[arg(long, default_value_t = 8)]
        len: usize,
        /// Number of factors to generate (the truncation).
        #[arg(long, default_value_t = 3)]
        factors: usize,
        #[arg(short)]
        k: f64,
        #[arg(short)]
        s: f64,
        #[arg(long, value_enum, default_value = "l1")]
        norm: NormArg,
        #[arg(long)]
        head_radius: Option<f64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ProfileCmd {
    Union {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
    },
    Product {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
    },
    /// `α ∘ β` for the affine rescaling `β(r) = slope·r + offset`.
    Pullback {
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 1.0)]
        slope: f64,
        #[arg(long, default_value_t = 0.0)]
        offset: f64,
    },
    /// Assign pieces to a scale sequence `r₁ ≤ r₂ ≤ …`.
    Schedule {
        /// Omit for a seeded random profile.
        #[arg(long)]
        p: Option<String>,
        /// Comma-separated scales; omit for a seeded random sequence.
        #[arg(long)]
        r: Option<String>,
        #[arg(long)]
        literal: bool,
    },
}

#[derive(Debug, Args)]
pub struct EnvelopeArgs {
    /// Factor space files; without any, `--count` copies of `I_len`.
    #[arg(long)]
    pub space: Vec<PathBuf>,
    #[arg(long, default_value_t = 6)]
    pub len: usize,
    #[arg(long, default_value_t = 2)]
    pub count: usize,
    /// Comma-separated factor weights.
    #[arg(long)]
    pub weights: Option<String>,
    #[arg(long, default_value_t = 10_000)]
    pub budget: usize,
    /// Enumerate a leading block of factors when the product is too big.
    #[arg(long)]
    pub sample: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScalingArgs {
    /// Strictly increasing sizes, e.g. `64,128,256`.
    #[arg(long, default_value = "")]
    pub family: String,
    #[arg(short)]
    pub r: f64,
    #[arg(short)]
    pub m: usize,
    /// Use `N × N` grids instead of intervals.
    #[arg(long)]
    pub grid: bool,
    #[arg(long, value_enum, default_value = "l1")]
    pub norm: NormArg,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// Why a command did not pass.
#[derive(Debug)]
pub enum Failure {
    Input(anyhow::Error),
    Defect(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(_) => 2,
            Failure::Defect(_) => 3,
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Failure {
        Failure::Input(e)
    }
}

fn construction(e: DecompositionError) -> Failure {
    match e {
        DecompositionError::Defect(what) => Failure::Defect(what),
        other => Failure::Input(anyhow!(other)),
    }
}

pub fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Space(args) => cmd_space(args, cli.seed),
        Command::Decompose(d) => cmd_decompose(d),
        Command::Profile(p) => cmd_profile(p, cli.seed),
        Command::Envelope(e) => cmd_envelope(e),
        Command::Scaling(s) => cmd_scaling(s),
        Command::Verify { file } => cmd_verify(&file),
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn load_space(path: &Path) -> anyhow::Result<FiniteMetricSpace> {
    let doc: SpaceDoc = serde_json::from_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    doc.to_space().with_context(|| format!("invalid space in {}", path.display()))
}

/// Point lists like `0..3,7,10..12` (half-open ranges).
pub fn parse_points(text: &str, universe: usize) -> anyhow::Result<Subset> {
    let mut pts = Vec::new();
    for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if let Some((a, b)) = tok.split_once("..") {
            let (a, b): (usize, usize) = (a.trim().parse()?, b.trim().parse()?);
            pts.extend(a..b);
        } else {
            pts.push(tok.parse()?);
        }
    }
    Subset::try_from_indices(universe, pts).map_err(|e| anyhow!("point out of range: {e}"))
}

fn parse_list<T: std::str::FromStr>(text: &str) -> anyhow::Result<Vec<T>>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<T>().with_context(|| format!("bad list item {t:?}")))
        .collect()
}

/// Inline JSON (starting with `{`) or a path to a profile file.
fn load_profile(arg: &str) -> anyhow::Result<Profile> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        read(Path::new(arg))?
    };
    let doc: ProfileDoc = serde_json::from_str(&text).context("parsing profile")?;
    Ok(doc.to_profile()?)
}

fn cmd_space(args: SpaceArgs, seed: u64) -> Result<(), Failure> {
    let space = if let Some(n) = args.interval {
        if !(args.spacing > 0.0 && args.spacing.is_finite()) {
            return Err(anyhow!("spacing must be positive").into());
        }
        FiniteMetricSpace::scaled_interval(n, args.spacing)
    } else if let Some(g) = &args.grid {
        let dims = g
            .split('x')
            .map(|d| d.trim().parse::<usize>().with_context(|| format!("bad grid size {g:?}")))
            .collect::<anyhow::Result<Vec<_>>>()?;
        FiniteMetricSpace::grid(&dims, args.norm.into())
    } else if let Some(path) = &args.from {
        load_space(path)?
    } else if let Some(n) = args.random {
        generate::random_space(&mut generate::rng(seed), n)
    } else {
        return Err(anyhow!("choose one of --interval, --grid, --from, --random").into());
    };
    let space = match &args.subset {
        Some(text) => space.subspace(&parse_points(text, space.len())?),
        None => space,
    };
    space.validate().context("metric validation")?;
    eprintln!("valid: {} ({} points)", space.name(), space.len());
    write_out(args.output.as_deref(), &space_to_json(&space))
}

fn emit_report(doc: &ReportDoc, output: Option<&Path>) -> Result<(), Failure> {
    write_out(output, &to_json(doc))?;
    if doc.passed {
        eprintln!("pass: {} verdicts", doc.verdicts.len());
        Ok(())
    } else {
        Err(Failure::Defect(format!("failed: {}", doc.failures().join(", "))))
    }
}

fn cmd_decompose(d: Decompose) -> Result<(), Failure> {
    match d {
        Decompose::Asdim { space, r, m, output } => {
            let space = load_space(&space)?;
            let run = scenario::run_asdim(&space, r, m).map_err(construction)?;
            emit_report(&run.doc, output.as_deref())
        }
        Decompose::Perp {
            space,
            s,
            r,
            m,
            set,
            z,
            output,
        } => {
            let space = load_space(&space)?;
            let y = parse_points(&set, space.len())?;
            let entries = match z {
                Some(text) => text
                    .split(';')
                    .map(|e| parse_points(e, space.len()))
                    .collect::<anyhow::Result<Vec<_>>>()?,
                None => vec![Subset::empty(space.len()); m + 1],
            };
            if entries.len() != m + 1 {
                return Err(anyhow!("--z needs m+1 = {} entries, got {}", m + 1, entries.len()).into());
            }
            let z = SubsetArray::from_entries(space.len(), entries).map_err(|e| anyhow!(e))?;
            let (_, doc) = scenario::run_perp(&space, &y, &z, s, r, m).map_err(construction)?;
            emit_report(&doc, output.as_deref())
        }
        Decompose::Refine {
            space,
            r,
            s,
            set,
            output,
        } => {
            let space = load_space(&space)?;
            let xset = match set {
                Some(text) => parse_points(&text, space.len())?,
                None => Subset::full(space.len()),
            };
            let run = scenario::run_refine(&space, &xset, r, s).map_err(construction)?;
            emit_report(&run.doc, output.as_deref())
        }
        Decompose::Product {
            space,
            factor,
            r,
            s,
            norm,
            output,
        } => {
            let x = load_space(&space)?;
            let y = load_space(&factor)?;
            let run = scenario::run_product(&x, &y, r, s, norm.into()).map_err(construction)?;
            emit_report(&run.doc, output.as_deref())
        }
        Decompose::TruncProduct {
            len,
            factors,
            k,
            s,
            norm,
            head_radius,
            output,
        } => {
            let fs = scenario::discrete_factors(len, factors);
            let (_, doc) =
                scenario::run_trunc(&fs, k, s, factors, norm.into(), head_radius).map_err(construction)?;
            emit_report(&doc, output.as_deref())
        }
    }
}

fn cmd_profile(p: ProfileCmd, seed: u64) -> Result<(), Failure> {
    let out = match p {
        ProfileCmd::Union { p, q } => {
            let r = load_profile(&p)?.union(&load_profile(&q)?).map_err(|e| anyhow!(e))?;
            to_json(&ProfileDoc::from_profile(&r))
        }
        ProfileCmd::Product { p, q } => {
            let r = load_profile(&p)?.product(&load_profile(&q)?).map_err(|e| anyhow!(e))?;
            to_json(&ProfileDoc::from_profile(&r))
        }
        ProfileCmd::Pullback { p, slope, offset } => {
            let beta = Rescale::affine(slope, offset).map_err(|e| anyhow!(e))?;
            to_json(&ProfileDoc::from_profile(&load_profile(&p)?.pullback(&beta)))
        }
        ProfileCmd::Schedule { p, r, literal } => {
            let mut rng = generate::rng(seed);
            let profile = match p {
                Some(p) => load_profile(&p)?,
                None => generate::random_profile(&mut rng),
            };
            let seq = match r {
                Some(r) => parse_list::<f64>(&r)?,
                None => generate::random_scale_sequence(&mut rng, 64),
            };
            let convention = if literal {
                ScheduleConvention::Literal
            } else {
                ScheduleConvention::Repaired
            };
            let sched = apc_schedule(&profile, &seq, convention).map_err(|e| anyhow!(e))?;
            let doc = ScheduleDoc::from_schedule(&sched);
            write_out(None, &to_json(&doc))?;
            return if doc.valid {
                Ok(())
            } else {
                Err(Failure::Defect("a slot's scale is below its requirement".into()))
            };
        }
    };
    write_out(None, &out)
}

fn cmd_envelope(e: EnvelopeArgs) -> Result<(), Failure> {
    let factors: Vec<FiniteMetricSpace> = if e.space.is_empty() {
        (0..e.count).map(|_| FiniteMetricSpace::interval(e.len)).collect()
    } else {
        e.space.iter().map(|p| load_space(p)).collect::<anyhow::Result<_>>()?
    };
    let weights = match &e.weights {
        Some(w) => parse_list::<f64>(w)?,
        None => vec![1.0; factors.len()],
    };
    let w = WeightFn::new(weights).map_err(|err| anyhow!(err))?;
    let build = |kind| build_product_space(&factors, &w, kind, e.budget, e.sample).map_err(|err| anyhow!(err));
    let reduced = build(ProductMetricKind::Reduced)?;
    let asymptotic = build(ProductMetricKind::Asymptotic)?;
    let a = reduced.space.clone().with_name("product");
    let b = asymptotic.space.clone().with_name("product");
    let rows = coarse_envelope(&a, &b, &threshold_grid(&a, &b)).map_err(|err| anyhow!(err))?;
    eprintln!(
        "{}{}",
        envelope_note(&rows),
        if reduced.sampled { " (sampled)" } else { "" }
    );
    write_out(e.output.as_deref(), &envelope_csv(&rows))
}

fn cmd_scaling(s: ScalingArgs) -> Result<(), Failure> {
    let sizes = parse_list::<usize>(&s.family)?;
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(anyhow!("family sizes must be strictly increasing").into());
    }
    if !(s.r > 0.0 && s.r.is_finite()) || s.m == 0 {
        return Err(anyhow!("need r > 0 and m ≥ 1").into());
    }
    let family = if s.grid {
        Family::Grid(s.norm.into())
    } else {
        Family::Interval
    };
    let rows = scenario::scaling_rows(family, &sizes, s.r, s.m);
    write_out(s.output.as_deref(), &scaling_csv(&rows))
}

fn cmd_verify(file: &Path) -> Result<(), Failure> {
    let text = read(file)?;
    let input = scenario::parse_verify_input(&text).with_context(|| format!("parsing {}", file.display()))?;
    let report = scenario::verify_document(&input).map_err(|e| anyhow!(e))?;
    for (k, v) in &report.verdicts {
        println!("{k}: {}", if *v { "pass" } else { "FAIL" });
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Defect(format!("failed: {}", report.failures().join(", "))))
    }
}

/// Entry point shared by the binary: parses, runs, reports, returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(f) => {
            match &f {
                Failure::Input(e) => eprintln!("error: {e:#}"),
                Failure::Defect(what) => eprintln!("defect: {what}"),
            }
            f.exit_code()
        }
    }
}
