//! Command-line front end.
//!
//! Every subcommand writes its result to stdout and diagnostics to stderr.
//! Exit codes: 0 on success, 1 when a computation fails, 2 on usage errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::cones::{parse_families, Cone, InequalityFamily, MatrixFile, Ray, RayCache, CACHE_ENV};
use crate::entropy_space::{EntropyVector, PartyCount, SubsystemIndex};
use crate::error::{Error, Result};
use crate::gset::{self, compare_g, GComparison, PatternSet};
use crate::mia::{enumerate_mia, pattern_of_vector, MiaContext, Pattern};
use crate::states::{
    build_catalog, coverage, placements, realize_pattern, stabilizer_entropy_vector, standard_kinds, CheckMatrix,
    GeneratorKind, GeneratorSpec, Realization,
};

/// Largest party count the command line accepts.
pub const CLI_MAX_PARTIES: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Parser, Debug)]
#[command(
    name = "qmip",
    version,
    about = "Patterns of marginal independence of multipartite quantum systems"
)]
struct Cli {
    #[command(flatten)]
    config: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GlobalArgs {
    /// Number of parties, not counting the purifier.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Comma-separated inequality families (sa, ssa, ingleton, mmi, mono).
    #[arg(long, global = true, default_value = "sa,ssa")]
    ineqs: String,
    /// Directory holding cached extreme rays and checkpoints.
    #[arg(long, global = true, env = CACHE_ENV)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 uses every core).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Ignore cached rays and recompute them.
    #[arg(long, global = true)]
    force_recompute: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mutual-information instances.
    Mia {
        #[command(subcommand)]
        action: MiaAction,
    },
    /// Polyhedral cones cut out by inequality families.
    Cone {
        #[command(subcommand)]
        action: ConeAction,
    },
    /// Patterns compatible with inequality families.
    Gset {
        #[command(subcommand)]
        action: GsetAction,
    },
    /// Patterns of explicit entropy vectors.
    Pattern {
        #[command(subcommand)]
        action: PatternAction,
    },
    /// Realize patterns by tensor products of catalog states.
    Realize(RealizeArgs),
    /// Entropy vectors of concrete states.
    State {
        #[command(subcommand)]
        action: StateAction,
    },
    /// Summary reports.
    Report {
        #[command(subcommand)]
        action: ReportAction,
    },
}

#[derive(Subcommand, Debug)]
enum MiaAction {
    Enumerate,
}

#[derive(Subcommand, Debug)]
enum ConeAction {
    Rays,
}

#[derive(Subcommand, Debug)]
enum GsetAction {
    Compute {
        /// Test every lattice element with a linear program instead of using rays.
        #[arg(long)]
        oracle: bool,
        /// Allow the oracle beyond three parties.
        #[arg(long)]
        allow_large: bool,
        /// Check this many random faces: random interior points must land in the set.
        #[arg(long, default_value_t = 0)]
        check_faces: usize,
    },
    Compare {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// Split the patterns only in `a` by whether a monotone point realizes them.
        #[arg(long)]
        monotone: bool,
    },
}

#[derive(Subcommand, Debug)]
enum PatternAction {
    OfVector {
        /// Entropy vector as JSON or CSV.
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Args, Debug)]
struct RealizeArgs {
    /// Target pattern as comma-separated instance names; omit to cover the whole compatible set.
    #[arg(long)]
    pattern: Option<String>,
    /// Generator kinds placed in every possible way (bell, ghzK, perfectK).
    #[arg(long, value_delimiter = ',')]
    kinds: Option<Vec<String>>,
    /// Extra stabilizer states given as check matrix files.
    #[arg(long)]
    check_matrix: Vec<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum StateAction {
    Entropy(StateArgs),
}

#[derive(Args, Debug)]
struct StateArgs {
    /// Bell pair between two parties, e.g. `1,2`.
    #[arg(long, group = "state")]
    bell: Option<String>,
    /// GHZ state on a party set, e.g. `1234`.
    #[arg(long, group = "state")]
    ghz: Option<String>,
    /// Perfect tensor on a party set, e.g. `1234`.
    #[arg(long, group = "state")]
    perfect: Option<String>,
    /// Stabilizer state from a check matrix file.
    #[arg(long, group = "state")]
    check_matrix: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum ReportAction {
    /// Compatible-set comparisons for each party count up to `--n` (default 4).
    Table1,
}

/// Runs the command line, printing to stdout and stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout(), &mut std::io::stderr())
}

/// Like [`run`] with explicit output streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.config.jobs).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker pool: {e}");
            return 1;
        }
    };
    match pool.install(|| dispatch(&cli)) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Compute(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::PartyCount(_)
            | Error::UnknownFamily(_)
            | Error::UnknownInstance(_)
            | Error::InvalidIndex(_)
            | Error::InvalidGenerator(_)
            | Error::OracleGuard(_) => Failure::Usage(e.to_string()),
            other => Failure::Compute(other),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Compute(e.into())
    }
}

type Outcome = std::result::Result<String, Failure>;

fn usage<T>(msg: impl Into<String>) -> std::result::Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

impl GlobalArgs {
    fn parties(&self) -> std::result::Result<PartyCount, Failure> {
        match self.n {
            None => usage("--n is required for this command"),
            Some(n) => check_parties(n),
        }
    }

    fn families(&self) -> std::result::Result<Vec<InequalityFamily>, Failure> {
        families_of(&self.ineqs)
    }

    fn cache(&self) -> Option<RayCache> {
        self.cache_dir
            .as_ref()
            .map(|d| RayCache::new(d).force_recompute(self.force_recompute))
    }
}

fn check_parties(n: usize) -> std::result::Result<PartyCount, Failure> {
    if n == 0 || n > CLI_MAX_PARTIES {
        return usage(format!("--n must lie in 1..={CLI_MAX_PARTIES}, got {n}"));
    }
    Ok(PartyCount::new(n)?)
}

fn families_of(s: &str) -> std::result::Result<Vec<InequalityFamily>, Failure> {
    let f = parse_families(s)?;
    if f.is_empty() {
        return usage("no inequality family given");
    }
    Ok(f)
}

fn dispatch(cli: &Cli) -> Outcome {
    let cfg = &cli.config;
    match &cli.command {
        Command::Mia {
            action: MiaAction::Enumerate,
        } => mia_enumerate(cfg),
        Command::Cone {
            action: ConeAction::Rays,
        } => cone_rays(cfg),
        Command::Gset {
            action:
                GsetAction::Compute {
                    oracle,
                    allow_large,
                    check_faces,
                },
        } => gset_compute(cfg, *oracle, *allow_large, *check_faces),
        Command::Gset {
            action: GsetAction::Compare { a, b, monotone },
        } => gset_compare(cfg, a, b, *monotone),
        Command::Pattern {
            action: PatternAction::OfVector { file },
        } => pattern_of_vector_cmd(cfg, file),
        Command::Realize(args) => realize(cfg, args),
        Command::State {
            action: StateAction::Entropy(args),
        } => state_entropy(cfg, args),
        Command::Report {
            action: ReportAction::Table1,
        } => report_table1(cfg),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn mia_enumerate(cfg: &GlobalArgs) -> Outcome {
    let ctx = enumerate_mia(cfg.parties()?);
    let names: Vec<String> = ctx.instances().iter().map(ToString::to_string).collect();
    Ok(match cfg.format {
        Format::Json => to_json(&json!({"n": ctx.parties().get(), "count": names.len(), "instances": names})),
        Format::Csv => {
            let mut s = String::from("index,instance\n");
            for (i, name) in names.iter().enumerate() {
                s.push_str(&format!("{i},{name}\n"));
            }
            s
        }
        Format::Text => {
            let mut s: String = names.iter().map(|n| format!("{n}\n")).collect();
            s.push_str(&format!("count: {}\n", names.len()));
            s
        }
    })
}

fn cone_of(cfg: &GlobalArgs, n: PartyCount, families: &[InequalityFamily]) -> Result<Cone> {
    let cone = Cone::from_families(n, families)?;
    match cfg.cache() {
        Some(cache) => {
            cone.rays_cached(&cache)?;
        }
        None => {
            cone.rays()?;
        }
    }
    Ok(cone)
}

fn cone_rays(cfg: &GlobalArgs) -> Outcome {
    let n = cfg.parties()?;
    let families = cfg.families()?;
    let cone = cone_of(cfg, n, &families)?;
    let rays: Vec<Vec<i64>> = cone.rays()?.iter().map(|r| r.point().to_vec()).collect();
    Ok(match cfg.format {
        Format::Json => to_json(&json!({
            "n": n.get(),
            "families": cone.label(),
            "count": rays.len(),
            "rays": rays,
        })),
        Format::Csv => {
            let mut s = EntropyVector::header(n).join(",");
            s.push('\n');
            for r in &rays {
                let row: Vec<String> = r.iter().map(ToString::to_string).collect();
                s.push_str(&row.join(","));
                s.push('\n');
            }
            s
        }
        Format::Text => {
            let comments = vec![
                format!("extreme rays of the {} cone for n = {n}", cone.label()),
                format!("count: {}", rays.len()),
            ];
            MatrixFile::from_rows(n.dim(), &rays).to_text(&comments)
        }
    })
}

fn compute_set(cfg: &GlobalArgs, ctx: &MiaContext, families: &[InequalityFamily]) -> Result<PatternSet> {
    gset::compute_g_cached(ctx, families, cfg.cache().as_ref())
}

fn pattern_lines(ctx: &MiaContext, patterns: &[Pattern]) -> String {
    patterns.iter().map(|p| format!("{}\n", ctx.pattern_json(p))).collect()
}

fn gset_compute(cfg: &GlobalArgs, oracle: bool, allow_large: bool, check_faces: usize) -> Outcome {
    let n = cfg.parties()?;
    let families = cfg.families()?;
    let ctx = enumerate_mia(n);
    let set = if oracle {
        gset::compute_g_oracle(n, &families, allow_large)?
    } else {
        compute_set(cfg, &ctx, &families)?
    };
    let checked = if check_faces > 0 {
        Some(check_random_faces(cfg, &ctx, &families, &set, check_faces)?)
    } else {
        None
    };
    Ok(match cfg.format {
        Format::Json => {
            let mut s = set.to_json(&ctx);
            if let Some(k) = checked {
                s.pop();
                s.push_str(&format!(",\"faces_checked\":{k}}}"));
            }
            s.push('\n');
            s
        }
        Format::Csv => set.summary_csv(),
        Format::Text => {
            let mut s = format!(
                "{}: {} patterns ({} without the empty and full patterns)\n",
                gset::describe(&set),
                set.len(),
                set.count_without_extremes(&ctx)
            );
            if let Some(k) = checked {
                s.push_str(&format!("faces checked: {k}\n"));
            }
            s.push_str(&pattern_lines(&ctx, set.patterns()));
            s
        }
    })
}

/// Samples random ray subsets; positive combinations of each subset lie in the
/// relative interior of one face and must all share a pattern of `set`.
fn check_random_faces(
    cfg: &GlobalArgs,
    ctx: &MiaContext,
    families: &[InequalityFamily],
    set: &PatternSet,
    count: usize,
) -> std::result::Result<usize, Failure> {
    if ctx.is_empty() {
        return Ok(0);
    }
    let cone = cone_of(cfg, ctx.parties(), families)?;
    let rays: &[Ray] = cone.rays()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..count {
        let k = rng.gen_range(1..=rays.len());
        let chosen: Vec<&Ray> = rays.choose_multiple(&mut rng, k).collect();
        let mut first: Option<Pattern> = None;
        for _ in 0..5 {
            let mut point = vec![0i64; ctx.dim()];
            for r in &chosen {
                let w: i64 = rng.gen_range(1..=1000);
                for (p, x) in point.iter_mut().zip(r.point()) {
                    *p += w * x;
                }
            }
            let p = ctx.pattern_of_point(&point);
            if !set.contains(&p) {
                return Err(Failure::Compute(Error::Parse(format!(
                    "interior point {point:?} has pattern {} outside the computed set",
                    ctx.pattern_json(&p)
                ))));
            }
            match &first {
                None => first = Some(p),
                Some(f) if *f != p => {
                    return Err(Failure::Compute(Error::Parse(
                        "points of one face have different patterns".into(),
                    )));
                }
                _ => {}
            }
        }
    }
    Ok(count)
}

fn patterns_json(ctx: &MiaContext, patterns: &[Pattern]) -> Vec<Vec<String>> {
    patterns.iter().map(|p| ctx.names(p)).collect()
}

fn gset_compare(cfg: &GlobalArgs, a: &str, b: &str, monotone: bool) -> Outcome {
    let n = cfg.parties()?;
    let (fa, fb) = (families_of(a)?, families_of(b)?);
    let ctx = enumerate_mia(n);
    let ga = compute_set(cfg, &ctx, &fa)?;
    let gb = compute_set(cfg, &ctx, &fb)?;
    let cmp = compare_g(&ga, &gb)?;
    let (only_a, only_b): (&[Pattern], &[Pattern]) = match &cmp {
        GComparison::Equal => (&[], &[]),
        GComparison::Superset { extra } => (extra, &[]),
        GComparison::Subset { missing } => (&[], missing),
        GComparison::Incomparable { only_a, only_b } => (only_a, only_b),
    };
    let split = if monotone {
        Some(monotone_split(&ctx, only_a, &fa)?)
    } else {
        None
    };
    Ok(match cfg.format {
        Format::Json => {
            let mut doc = json!({
                "n": n.get(),
                "a": gset::describe(&ga),
                "b": gset::describe(&gb),
                "count_a": ga.len(),
                "count_b": gb.len(),
                "verdict": cmp.verdict(),
                "only_a": patterns_json(&ctx, only_a),
                "only_b": patterns_json(&ctx, only_b),
            });
            if let Some((with, without)) = &split {
                doc["only_a_monotone"] = json!(patterns_json(&ctx, with));
                doc["only_a_violating_monotonicity"] = json!(patterns_json(&ctx, without));
            }
            to_json(&doc)
        }
        Format::Csv => format!(
            "n,a,b,count_a,count_b,only_a,only_b,verdict\n{},{},{},{},{},{},{},{}\n",
            n,
            gset::describe(&ga),
            gset::describe(&gb),
            ga.len(),
            gb.len(),
            only_a.len(),
            only_b.len(),
            cmp.verdict()
        ),
        Format::Text => {
            let mut s = format!("{}\n", cmp.verdict());
            s.push_str(&format!(
                "{}: {} patterns\n{}: {} patterns\n",
                gset::describe(&ga),
                ga.len(),
                gset::describe(&gb),
                gb.len()
            ));
            if !only_a.is_empty() {
                s.push_str(&format!(
                    "only in a ({}):\n{}",
                    only_a.len(),
                    pattern_lines(&ctx, only_a)
                ));
            }
            if !only_b.is_empty() {
                s.push_str(&format!(
                    "only in b ({}):\n{}",
                    only_b.len(),
                    pattern_lines(&ctx, only_b)
                ));
            }
            if let Some((with, without)) = &split {
                s.push_str(&format!(
                    "only in a with a monotone representative: {}\nonly in a requiring a monotonicity violation: {}\n",
                    with.len(),
                    without.len()
                ));
            }
            s
        }
    })
}

/// Partitions `patterns` into those realized by some point that also satisfies
/// monotonicity, and those realized only by points violating it.
fn monotone_split(
    ctx: &MiaContext,
    patterns: &[Pattern],
    families: &[InequalityFamily],
) -> Result<(Vec<Pattern>, Vec<Pattern>)> {
    use rayon::prelude::*;
    let flags: Vec<bool> = patterns
        .par_iter()
        .map(|p| gset::admits_monotone_representative(ctx, p, families).map(|w| w.is_some()))
        .collect::<Result<_>>()?;
    let (mut with, mut without) = (Vec::new(), Vec::new());
    for (p, ok) in patterns.iter().zip(flags) {
        if ok {
            with.push(p.clone())
        } else {
            without.push(p.clone())
        }
    }
    Ok((with, without))
}

fn read_vector(path: &Path) -> Result<EntropyVector> {
    let text = fs::read_to_string(path)?;
    if text.trim_start().starts_with('{') {
        EntropyVector::from_json(&text)
    } else {
        EntropyVector::from_csv(&text)
    }
}

fn pattern_of_vector_cmd(cfg: &GlobalArgs, file: &Path) -> Outcome {
    let v = read_vector(file)?;
    if let Some(n) = cfg.n {
        if v.parties().get() != n {
            return usage(format!(
                "{} holds a vector for n = {}, not {n}",
                file.display(),
                v.parties()
            ));
        }
    }
    let ctx = enumerate_mia(v.parties());
    let p = pattern_of_vector(&ctx, &v)?;
    Ok(match cfg.format {
        Format::Json => to_json(&json!({"n": v.parties().get(), "members": ctx.names(&p), "dim": p.dim()})),
        Format::Csv => ctx.names(&p).iter().map(|s| format!("{s}\n")).collect(),
        Format::Text => format!("{}\n", ctx.pattern_json(&p)),
    })
}

fn realize(cfg: &GlobalArgs, args: &RealizeArgs) -> Outcome {
    let n = cfg.parties()?;
    let ctx = enumerate_mia(n);
    let kinds = match &args.kinds {
        None => standard_kinds(n),
        Some(ks) => ks
            .iter()
            .map(|k| k.parse())
            .collect::<Result<Vec<GeneratorKind>>>()
            .map_err(|e| Failure::Usage(e.to_string()))?,
    };
    let mut extra = Vec::new();
    for path in &args.check_matrix {
        let cm = CheckMatrix::parse_text(&fs::read_to_string(path)?)?;
        extra.push((
            format!("stabilizer({})", path.display()),
            stabilizer_entropy_vector(&cm, n)?,
        ));
    }
    let catalog = build_catalog(&ctx, &placements(n, &kinds), &extra)?;
    match &args.pattern {
        Some(names) => {
            let names: Vec<&str> = names.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            let raw = ctx.pattern_from_names(&names)?;
            let target = ctx.closure(raw.members());
            if target.members() != raw.members() {
                return usage(format!(
                    "{} is not closed; its closure is {}",
                    ctx.pattern_json(&raw),
                    ctx.pattern_json(&target)
                ));
            }
            let r = realize_pattern(&ctx, &target, &catalog)?;
            Ok(match (&r, cfg.format) {
                (_, Format::Json) => to_json(&match &r {
                    Realization::Realized(w) => json!({"target": ctx.names(&target), "realized": true, "witness": w}),
                    Realization::NotRealized(m) => {
                        json!({"target": ctx.names(&target), "realized": false, "best_meet": ctx.names(m)})
                    }
                }),
                (Realization::Realized(w), Format::Csv) => format!("realized,witness\ntrue,{}\n", w.join(" ")),
                (Realization::NotRealized(_), Format::Csv) => "realized,witness\nfalse,\n".to_string(),
                (Realization::Realized(w), Format::Text) => format!("REALIZED by {}\n", w.join(" (x) ")),
                (Realization::NotRealized(m), Format::Text) => {
                    format!("NOT REALIZED by the catalog; best meet {}\n", ctx.pattern_json(m))
                }
            })
        }
        None => {
            let families = cfg.families()?;
            let set = compute_set(cfg, &ctx, &families)?;
            let cov = coverage(&ctx, &set, &catalog)?;
            Ok(match cfg.format {
                Format::Json => to_json(&json!({
                    "set": gset::describe(&set),
                    "catalog_size": catalog.len(),
                    "total": cov.total,
                    "realized": cov.realized,
                    "missing": patterns_json(&ctx, &cov.missing),
                })),
                Format::Csv => format!(
                    "set,catalog_size,total,realized\n{},{},{},{}\n",
                    gset::describe(&set),
                    catalog.len(),
                    cov.total,
                    cov.realized
                ),
                Format::Text => {
                    let mut s = format!(
                        "{}: {}/{} patterns realized by a catalog of {} states ({:.1}%)\n",
                        gset::describe(&set),
                        cov.realized,
                        cov.total,
                        catalog.len(),
                        cov.percent()
                    );
                    s.push_str(&pattern_lines(&ctx, &cov.missing));
                    s
                }
            })
        }
    }
}

fn parse_support(s: &str) -> std::result::Result<SubsystemIndex, Failure> {
    let digits: String = s.chars().filter(|c| !matches!(c, ',' | ' ' | '{' | '}')).collect();
    Ok(digits.parse::<SubsystemIndex>()?)
}

fn state_entropy(cfg: &GlobalArgs, args: &StateArgs) -> Outcome {
    let v = if let Some(path) = &args.check_matrix {
        let cm = CheckMatrix::parse_text(&fs::read_to_string(path)?)?;
        let n = match cfg.n {
            Some(n) => check_parties(n)?,
            None => cm.parties(),
        };
        stabilizer_entropy_vector(&cm, n)?
    } else {
        let n = cfg.parties()?;
        let spec = if let Some(pair) = &args.bell {
            let parties: Vec<usize> = parse_support(pair)?.parties().collect();
            if parties.len() != 2 {
                return usage(format!("--bell needs two parties, got `{pair}`"));
            }
            GeneratorSpec::Bell(parties[0], parties[1])
        } else if let Some(t) = &args.ghz {
            GeneratorSpec::Ghz(parse_support(t)?)
        } else if let Some(t) = &args.perfect {
            GeneratorSpec::Perfect(parse_support(t)?)
        } else {
            return usage("one of --bell, --ghz, --perfect or --check-matrix is required");
        };
        spec.vector(n)?
    };
    Ok(match cfg.format {
        Format::Json => format!("{}\n", v.to_json()),
        Format::Csv => v.to_csv(),
        Format::Text => format!("{v}\n"),
    })
}

#[derive(Serialize)]
struct Table1Row {
    n: usize,
    counts: Vec<(String, usize)>,
    facts: Vec<String>,
    qmip: String,
    smip: String,
    hmip: String,
    status: &'static str,
}

fn report_table1(cfg: &GlobalArgs) -> Outcome {
    use InequalityFamily::*;
    let max_n = match cfg.n {
        Some(n) => check_parties(n)?.get(),
        None => 4,
    };
    let mut rows = Vec::new();
    for k in 2..=max_n {
        let n = PartyCount::new(k)?;
        let ctx = enumerate_mia(n);
        let sa = if k <= 3 {
            Some(compute_set(cfg, &ctx, &[Sa])?)
        } else {
            None
        };
        let ssa = compute_set(cfg, &ctx, &[Sa, Ssa])?;
        let ing = compute_set(cfg, &ctx, &[Sa, Ssa, Ingleton])?;
        let mmi = compute_set(cfg, &ctx, &[Sa, Ssa, Mmi])?;
        let lattice = if k <= 3 {
            ctx.enumerate_lattice(1 << 16).map(|l| l.len())
        } else {
            None
        };
        let v_sa_ssa = sa.as_ref().map(|sa| compare_g(sa, &ssa)).transpose()?;
        let v_ssa_ing = compare_g(&ssa, &ing)?;
        let v_ssa_mmi = compare_g(&ssa, &mmi)?;
        let mut facts = Vec::new();
        if let (Some(sa), Some(v)) = (&sa, &v_sa_ssa) {
            facts.push(format!(
                "{} vs {}: {}",
                gset::describe(sa),
                gset::describe(&ssa),
                v.verdict()
            ));
        }
        facts.extend([
            format!(
                "{} vs {}: {}",
                gset::describe(&ssa),
                gset::describe(&ing),
                v_ssa_ing.verdict()
            ),
            format!(
                "{} vs {}: {}",
                gset::describe(&ssa),
                gset::describe(&mmi),
                v_ssa_mmi.verdict()
            ),
        ]);
        if let Some(l) = lattice {
            facts.push(format!("lattice size: {l}"));
        }
        let catalog = build_catalog(&ctx, &placements(n, &standard_kinds(n)), &[])?;
        let cov = coverage(&ctx, &ssa, &catalog)?;
        facts.push(format!(
            "{} realized by Bell/GHZ/perfect products: {}/{}",
            gset::describe(&ssa),
            cov.realized,
            cov.total
        ));
        let weakest = if v_sa_ssa == Some(GComparison::Equal) {
            "SA"
        } else {
            "SSA"
        };
        let (qmip, smip, status) = match k {
            2 | 3 => (weakest.to_string(), weakest.to_string(), "computed"),
            4 => {
                let smip = if v_ssa_ing == GComparison::Equal { "SSA" } else { "ING" };
                (
                    smip.to_string(),
                    smip.to_string(),
                    "computed; Ingleton-ray realizability not checked here",
                )
            }
            _ => ("SSA (?)".to_string(), "ING (?)".to_string(), "not asserted"),
        };
        let hmip = if k == 2 {
            "SA".to_string()
        } else if v_ssa_mmi == GComparison::Equal {
            "SSA".to_string()
        } else {
            "MMI".to_string()
        };
        let mut counts: Vec<_> = sa.iter().map(|sa| (gset::describe(sa), sa.len())).collect();
        counts.extend([
            (gset::describe(&ssa), ssa.len()),
            (gset::describe(&ing), ing.len()),
            (gset::describe(&mmi), mmi.len()),
        ]);
        rows.push(Table1Row {
            n: k,
            counts,
            facts,
            qmip,
            smip,
            hmip,
            status,
        });
    }
    Ok(match cfg.format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut s = String::from("n,qmip,smip,hmip,status\n");
            for r in &rows {
                s.push_str(&format!("{},{},{},{},\"{}\"\n", r.n, r.qmip, r.smip, r.hmip, r.status));
            }
            s
        }
        Format::Text => {
            let mut s = String::from("N  QMIP     SMIP     HMIP  status\n");
            for r in &rows {
                s.push_str(&format!(
                    "{:<2} {:<8} {:<8} {:<5} {}\n",
                    r.n, r.qmip, r.smip, r.hmip, r.status
                ));
            }
            for r in &rows {
                s.push_str(&format!("\nN = {}\n", r.n));
                for (label, c) in &r.counts {
                    s.push_str(&format!("  |{label}| = {c}\n"));
                }
                for f in &r.facts {
                    s.push_str(&format!("  {f}\n"));
                }
            }
            s
        }
    })
}
