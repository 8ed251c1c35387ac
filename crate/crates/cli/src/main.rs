use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fck_core::calculus::{cr_n, perp_n};
use fck_core::chain::{is_quasi_iso, ChainComplex};
use fck_core::linalg::Ring;
use fck_core::report::{homology_in, homology_json, Report};
use fck_core::source::{functor_by_name, Context, EtaContext, EtaObject};
use fck_core::tower::{deloop_degree1, deloop_excisive, gamma_n};
use fck_core::verify::{instance_gen, random_context, run_suite, Suite, SuiteConfig};
use fck_core::Error;

/// Exact chain-level functor calculus: verification suites and computations.
#[derive(Parser, Debug)]
#[command(name = "fck", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// q, z or fp:P
    #[arg(long, default_value = "q")]
    ring: String,
    #[arg(long, env = "FCK_SEED", default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Write the JSON report here; the summary goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a randomized verification suite.
    Verify {
        suite: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        instances: Option<usize>,
        #[arg(long, default_value_t = 3)]
        truncate: usize,
        /// Draw a ring per instance instead of using --ring.
        #[arg(long)]
        mixed_rings: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Compute a cross effect, ⊥_n, Γ_n, homology or a delooping comparison.
    Compute {
        what: What,
        #[command(flatten)]
        opts: ComputeOpts,
        #[command(flatten)]
        common: Common,
    },
    /// Bar construction, fat realization and Γ_n at one object.
    Tower {
        #[command(flatten)]
        opts: ComputeOpts,
        /// Also recompute at truncation + 1 and compare homology below it.
        #[arg(long)]
        stability: bool,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum What {
    Cr,
    Perp,
    GammaN,
    Homology,
    Deloop,
}

#[derive(Args, Debug, Clone)]
struct ComputeOpts {
    #[arg(long, default_value = "identity")]
    functor: String,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    truncate: usize,
    /// Objects: A, B, R, R^k, R[d], R^k[d] (comma separated).
    #[arg(long, default_value = "R")]
    args: String,
    /// based (A = B = 0), point (A = 0, B = R) or random (from the seed).
    #[arg(long, default_value = "based")]
    context: String,
    #[arg(long, default_value = "-6..6", allow_hyphen_values = true)]
    window: String,
    /// Number of Σ_B steps for `compute deloop`; 0 means the degree-1 form.
    #[arg(long, default_value_t = 0)]
    m: usize,
    /// JSON chain complex for `compute homology`.
    #[arg(long)]
    input: Option<PathBuf>,
}

/// Usage and configuration errors exit with 2.
struct Usage(String);

impl From<Error> for Usage {
    fn from(e: Error) -> Usage {
        Usage(e.to_string())
    }
}

fn parse_window(s: &str) -> Result<RangeInclusive<i64>, Usage> {
    let bad = || Usage(format!("bad window {s:?}, expected A..B"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let (a, b) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

fn parse_context(s: &str, ring: Ring, seed: u64) -> Result<Context, Usage> {
    match s {
        "based" => Ok(EtaContext::based(ChainComplex::zero(ring))),
        "point" => Ok(EtaContext::based(ChainComplex::concentrated(ring, 0, 1))),
        "random" => Ok(random_context(&mut instance_gen(seed, 0), ring, 2)),
        _ => Err(Usage(format!("unknown context {s:?} (based, point or random)"))),
    }
}

fn parse_object(s: &str, ctx: &Context) -> Result<EtaObject, Usage> {
    let bad = || Usage(format!("bad object {s:?}"));
    match s.trim() {
        "A" => return Ok(EtaObject::initial(ctx)),
        "B" => return Ok(EtaObject::terminal(ctx)),
        _ => {}
    }
    let rest = s.trim().strip_prefix('R').ok_or_else(bad)?;
    let (rank, rest) = match rest.strip_prefix('^') {
        Some(r) => {
            let end = r.find('[').unwrap_or(r.len());
            (r[..end].parse().map_err(|_| bad())?, &r[end..])
        }
        None => (1, rest),
    };
    let degree = match rest {
        "" => 0,
        r => r.strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?.parse().map_err(|_| bad())?,
    };
    Ok(EtaObject::free(ctx, &ChainComplex::concentrated(ctx.ring(), degree, rank))?)
}

fn parse_objects(s: &str, ctx: &Context) -> Result<Vec<EtaObject>, Usage> {
    s.split(',').map(|p| parse_object(p, ctx)).collect()
}

fn homology_detail(r: &mut Report, key: &str, c: &ChainComplex, window: &RangeInclusive<i64>) -> Result<(), Usage> {
    r.detail(key, homology_json(&homology_in(c, window.clone())?));
    Ok(())
}

fn verify(
    suite: &str,
    n: Option<usize>,
    instances: Option<usize>,
    truncate: usize,
    mixed: bool,
    c: &Common,
) -> Result<Report, Usage> {
    let cli_suites = [
        "hofib",
        "ifiber",
        "tfiber",
        "xi-chainmap",
        "counital",
        "coassoc",
        "sign-identity",
        "simplicial",
        "two-routes",
    ];
    let s = Suite::from_name(suite)
        .filter(|s| cli_suites.contains(&s.name()))
        .ok_or_else(|| Usage(format!("unknown suite {suite:?}; one of {}", cli_suites.join(", "))))?;
    let ring: Ring = c.ring.parse()?;
    let mut cfg = SuiteConfig::new(c.seed, instances.unwrap_or(s.default_instances()));
    cfg.n = n;
    cfg.ring = if mixed { None } else { Some(ring) };
    cfg.truncation = truncate;
    Ok(run_suite(s, &cfg))
}

fn compute(what: What, o: &ComputeOpts, c: &Common) -> Result<Report, Usage> {
    let ring: Ring = c.ring.parse()?;
    let window = parse_window(&o.window)?;
    let ctx = parse_context(&o.context, ring, c.seed)?;
    let name = match what {
        What::Cr => "cr",
        What::Perp => "perp",
        What::GammaN => "gamma-n",
        What::Homology => "homology",
        What::Deloop => "deloop",
    };
    let mut r = Report::new(name).with_seed(c.seed);
    r.detail("ring", json!(ring.to_string()));
    r.detail("window", json!([window.start(), window.end()]));
    if let What::Homology = what {
        let path = o.input.as_ref().ok_or_else(|| Usage("compute homology needs --input FILE".into()))?;
        let text = std::fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
        let value: Value = serde_json::from_str(&text).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
        let x = ChainComplex::from_json(&value)?;
        r.instances = 1;
        r.failures.extend(x.validate().into_iter().map(|v| format!("{} (degree {})", v.what, v.degree)));
        homology_detail(&mut r, "homology", &x, &window)?;
        return Ok(r);
    }
    let f = functor_by_name(&o.functor, &ctx)?;
    r.detail("functor", json!(f.name()));
    r.detail("context", json!(o.context));
    match what {
        What::Cr => {
            let xs = parse_objects(&o.args, &ctx)?;
            r = r.with_n(xs.len());
            r.instances = 1;
            r.detail("args", json!(o.args));
            homology_detail(&mut r, "homology", &cr_n(&f, &ctx, &xs)?, &window)?;
        }
        What::Perp => {
            let x = parse_object(&o.args, &ctx)?;
            r = r.with_n(o.n);
            r.instances = 1;
            r.detail("args", json!(o.args));
            homology_detail(&mut r, "homology", &perp_n(&f, o.n, &ctx, &x)?, &window)?;
        }
        What::GammaN => {
            let x = parse_object(&o.args, &ctx)?;
            let g = gamma_n(&f, o.n, &ctx, &x, o.truncate)?;
            r = r.with_n(o.n);
            r.instances = 1;
            r.detail("args", json!(o.args));
            r.detail("truncation", json!(o.truncate));
            r.detail("valid_up_to", json!(g.valid_up_to()));
            homology_detail(&mut r, "homology", &g.complex, &window)?;
        }
        What::Deloop => {
            let mut d = if o.m == 0 {
                deloop_degree1(&f, &ctx, window.clone())?
            } else {
                let x = parse_object(&o.args, &ctx)?;
                deloop_excisive(&f, &ctx, &x, o.m, window.clone())?
            };
            d.seed = Some(c.seed);
            return Ok(d);
        }
        What::Homology => unreachable!(),
    }
    Ok(r)
}

fn tower(o: &ComputeOpts, stability: bool, c: &Common) -> Result<Report, Usage> {
    let ring: Ring = c.ring.parse()?;
    let window = parse_window(&o.window)?;
    let ctx = parse_context(&o.context, ring, c.seed)?;
    let f = functor_by_name(&o.functor, &ctx)?;
    let x = parse_object(&o.args, &ctx)?;
    let mut r = Report::new("tower").with_n(o.n).with_seed(c.seed);
    for key in ["functor", "context", "args"] {
        let v = match key {
            "functor" => f.name(),
            "context" => o.context.clone(),
            _ => o.args.clone(),
        };
        r.detail(key, json!(v));
    }
    r.detail("ring", json!(ring.to_string()));
    r.detail("truncation", json!(o.truncate));
    let g = gamma_n(&f, o.n, &ctx, &x, o.truncate)?;
    r.record("simplicial identities", g.bar.validate()?);
    let d2: Vec<String> = g
        .realization
        .complex
        .validate()
        .into_iter()
        .chain(g.augmentation.validate())
        .map(|v| format!("{} (degree {})", v.what, v.degree))
        .collect();
    r.record("realization", d2);
    let valid = *window.start()..=(*window.end()).min(g.valid_up_to());
    r.detail("valid_window", json!([valid.start(), valid.end()]));
    let levels: Vec<usize> = g.bar.levels.iter().map(|l| l.total_rank()).collect();
    r.detail("level_ranks", json!(levels));
    homology_detail(&mut r, "realization_homology", &g.realization.complex, &window)?;
    homology_detail(&mut r, "gamma_homology", &g.complex, &window)?;
    homology_detail(&mut r, "functor_homology", g.p.source(), &window)?;
    r.detail("p_quasi_iso", json!(is_quasi_iso(&g.p)?));
    if stability {
        let h = gamma_n(&f, o.n, &ctx, &x, o.truncate + 1)?;
        let (a, b) = (homology_in(&g.complex, valid.clone())?, homology_in(&h.complex, valid.clone())?);
        let bad = valid
            .clone()
            .filter(|k| a[k] != b[k])
            .map(|k| format!("H_{k} changes from {} to {} at truncation {}", a[&k], b[&k], o.truncate + 1))
            .collect();
        r.record("stability", bad);
        r.detail("stable_window", json!([valid.start(), valid.end()]));
        r.detail("next_gamma_homology", homology_json(&b));
    }
    Ok(r)
}

fn emit(r: &Report, out: &Option<PathBuf>) -> Result<(), Usage> {
    let text = serde_json::to_string_pretty(&r.to_json()).expect("reports serialize") + "\n";
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
            println!("{}", r.summary());
        }
        None => {
            print!("{text}");
            eprintln!("{}", r.summary());
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, Usage> {
    let common = match &cli.command {
        Command::Verify { common, .. } | Command::Compute { common, .. } | Command::Tower { common, .. } => common,
    };
    if common.jobs > 0 {
        // only fails if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new().num_threads(common.jobs).build_global();
    }
    let report = match &cli.command {
        Command::Verify {
            suite,
            n,
            instances,
            truncate,
            mixed_rings,
            common,
        } => verify(suite, *n, *instances, *truncate, *mixed_rings, common)?,
        Command::Compute { what, opts, common } => compute(*what, opts, common)?,
        Command::Tower {
            opts,
            stability,
            common,
        } => tower(opts, *stability, common)?,
    };
    emit(&report, &common.out)?;
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
