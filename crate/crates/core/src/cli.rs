//! Command-line front end. Exit codes: 0 ok, 1 a check failed, 2 bad usage or input.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::algebra::{make_field, parse_poly, Gf};
use crate::bounds;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::frobsurface;
use crate::geometry;
use crate::jobfile::{parse_job, JobFile};
use crate::orders;
use crate::par::{self, Exec};
use crate::replay;
use crate::scan::{self, ScanConfig};

const JOB_GRAMMAR: &str = "\
job file grammar:
  field p=<int> e=<int>
  modulus <c0> <c1> ... <ce>        (optional, monic, low to high)
  surface <name> = <poly>
  curve <name> = <poly> [; <poly>]*
  assert irreducible <name> | assert complete <name> | assert degree <name> <int>
  # starts a comment";

#[derive(Parser, Debug)]
#[command(name = "frobtangent", version, about = "Frobenius tangency curves of surfaces over finite fields")]
pub struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest number of candidate points enumerated per search.
    #[arg(long, global = true)]
    budget_points: Option<u128>,
    /// Largest extension degree for point counts and sampling.
    #[arg(long, global = true)]
    max_ext: Option<u32>,
    /// Sampled points per extension degree.
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Write the report (or the scan records) here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Base field, as p^e or q.
    #[arg(long, global = true)]
    field: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct Input {
    /// Job file.
    job: Option<PathBuf>,
    /// Surface equation, instead of a job file (needs --field).
    #[arg(long)]
    surface: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Frobenius classicality of the surface.
    CheckFcs(Input),
    /// The curve Phi^S: degree, point counts, contained lines.
    Phi(Input),
    /// Point counts over F_{q^k}.
    Points {
        #[command(flatten)]
        input: Input,
        /// Count points of this curve instead of the surface.
        #[arg(long)]
        curve: Option<String>,
    },
    /// Order sequence and Frobenius orders of a curve.
    Orders {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        curve: String,
    },
    /// Orders, containment in Phi^S and applicability of the bound.
    Classify {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        curve: String,
        /// Treat conjecture-dependent applicability as usable.
        #[arg(long)]
        assume_conjecture: bool,
    },
    /// floor(delta (d + q - 1) / 2), or a check of it against a curve.
    Bound {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        curve: Option<String>,
        #[arg(long)]
        delta: Option<i64>,
        #[arg(long)]
        d: Option<i64>,
        #[arg(long)]
        q: Option<i64>,
    },
    /// Compare the main bound with Homma, Stohr-Voloch and Serre-Weil.
    Compare {
        #[arg(long)]
        q: i64,
        #[arg(long)]
        d: i64,
        /// A single degree; without it, every delta in 1..=q.
        #[arg(long)]
        delta: Option<i64>,
        #[arg(long)]
        genus: Option<i64>,
        #[arg(long, requires = "nu2")]
        nu1: Option<i64>,
        #[arg(long, requires = "nu1")]
        nu2: Option<i64>,
    },
    /// Exhaustive scan of all surfaces of one degree over --field.
    Scan {
        #[arg(long, default_value_t = 2)]
        degree: u32,
        /// Analyze reducible quadrics too.
        #[arg(long)]
        all: bool,
        /// Skip surfaces with singular points over F_q or F_{q^2}.
        #[arg(long)]
        smooth_only: bool,
        #[arg(long, default_value_t = 10_000_000)]
        max_surfaces: u128,
    },
    /// Replay a built-in example and check its recorded outcomes.
    ReplayExample {
        /// 2.2, 4.6, 4.8, 4.9 or all.
        id: String,
    },
}

/// Parses `p^e` or a prime power `q`.
pub fn parse_field_spec(s: &str) -> Result<Gf> {
    let bad = || Error::BadFieldLiteral(s.to_string());
    if let Some((p, e)) = s.split_once('^') {
        let p: u64 = p.trim().parse().map_err(|_| bad())?;
        let e: u32 = e.trim().parse().map_err(|_| bad())?;
        return make_field(p, e);
    }
    let q: u64 = s.trim().parse().map_err(|_| bad())?;
    if q < 2 {
        return Err(bad());
    }
    let p = (2..=q).find(|d| q % d == 0).unwrap();
    let (mut r, mut e) = (q, 0);
    while r % p == 0 {
        r /= p;
        e += 1;
    }
    if r != 1 {
        return Err(Error::NotPrime(q));
    }
    make_field(p, e)
}

enum Outcome {
    Ok,
    Failed,
}

struct Ctx {
    cfg: Config,
    format: Format,
    field: Option<String>,
    buf: Vec<u8>,
}

impl Ctx {
    fn json<T: Serialize>(&mut self, v: &T) -> Result<()> {
        writeln!(self.buf, "{}", serde_json::to_string_pretty(v)?)?;
        Ok(())
    }

    fn line(&mut self, s: impl AsRef<str>) -> Result<()> {
        writeln!(self.buf, "{}", s.as_ref())?;
        Ok(())
    }

    fn no_csv(&self, cmd: &str) -> Result<()> {
        if self.format == Format::Csv {
            return Err(Error::HypothesisNotMet(format!("csv output is not available for {cmd}")));
        }
        Ok(())
    }

    fn job(&self, input: &Input) -> Result<JobFile> {
        match (&input.job, &input.surface) {
            (Some(path), None) => parse_job(&fs::read_to_string(path)?),
            (None, Some(eq)) => {
                let spec = self.field.as_deref().ok_or_else(|| Error::HypothesisNotMet("--surface needs --field".into()))?;
                let f = parse_field_spec(spec)?;
                let text = format!("field p={} e={}\nsurface f = {eq}\nassert irreducible f\n", f.characteristic(), f.degree());
                parse_poly(eq, &f)?;
                parse_job(&text)
            }
            (Some(_), Some(_)) => Err(Error::HypothesisNotMet("give a job file or --surface, not both".into())),
            (None, None) => Err(Error::HypothesisNotMet("missing job file (or --surface)".into())),
        }
    }
}

/// Runs the command line; output goes to `out` (or to --out), diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let mut cfg = Config { seed: cli.seed, exec: Exec::Sequential, ..Config::default() };
    if let Some(b) = cli.budget_points {
        cfg.point_budget = b;
    }
    if let Some(m) = cli.max_ext {
        cfg.max_ext = m;
        cfg.ext_budget = m;
    }
    if let Some(t) = cli.trials {
        cfg.trials = t;
    }
    match cli.jobs {
        Some(n) => {
            par::set_jobs(n);
            if n > 1 {
                cfg.exec = Exec::Parallel;
            }
        }
        None if matches!(cli.cmd, Cmd::Scan { .. }) => cfg.exec = Exec::default(),
        None => {}
    }
    let scan_out = matches!(cli.cmd, Cmd::Scan { .. });
    let mut ctx = Ctx { cfg, format: cli.format, field: cli.field.clone(), buf: Vec::new() };
    let res = dispatch(&cli, &mut ctx);
    let flush = |buf: &[u8], out: &mut dyn Write| -> Result<()> {
        match (&cli.out, scan_out) {
            (Some(path), false) => fs::write(path, buf)?,
            _ => out.write_all(buf)?,
        }
        Ok(())
    };
    match res {
        Ok(outcome) => {
            if let Err(e) = flush(&ctx.buf, out) {
                let _ = writeln!(err, "error: {e}");
                return 2;
            }
            match outcome {
                Outcome::Ok => 0,
                Outcome::Failed => 1,
            }
        }
        Err(e) => {
            let _ = flush(&ctx.buf, out);
            let _ = writeln!(err, "error: {e}");
            if matches!(e, Error::JobFile { .. } | Error::Syntax { .. }) {
                let _ = writeln!(err, "{JOB_GRAMMAR}");
            }
            2
        }
    }
}

fn dispatch(cli: &Cli, ctx: &mut Ctx) -> Result<Outcome> {
    match &cli.cmd {
        Cmd::CheckFcs(input) => {
            ctx.no_csv("check-fcs")?;
            let j = ctx.job(input)?;
            let s = j.surface()?;
            let cl = frobsurface::classicality(&s)?;
            let h = s.f.build_h(s.q());
            match ctx.format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Out {
                        q: u64,
                        d: u32,
                        h: String,
                        frobenius_classical: bool,
                        warning: Option<String>,
                    }
                    ctx.json(&Out { q: s.q(), d: s.d, h: h.to_string(), frobenius_classical: cl.frobenius_classical, warning: cl.warning })?
                }
                _ => {
                    ctx.line(format!("h = {h}"))?;
                    ctx.line(format!("frobenius classical: {}", cl.frobenius_classical))?;
                    if let Some(w) = cl.warning {
                        ctx.line(format!("warning: {w}"))?;
                    }
                }
            }
            Ok(Outcome::Ok)
        }
        Cmd::Phi(input) => {
            ctx.no_csv("phi")?;
            let j = ctx.job(input)?;
            let rep = frobsurface::surface_report(&j.surface()?, &ctx.cfg)?;
            match ctx.format {
                Format::Json => ctx.json(&rep)?,
                _ => {
                    ctx.line(format!("q = {}, d = {}", rep.q, rep.d))?;
                    ctx.line(format!("frobenius classical: {}", rep.frobenius_classical))?;
                    if let Some(w) = &rep.warning {
                        ctx.line(format!("warning: {w}"))?;
                    }
                    ctx.line(format!("phi degree: {}", rep.phi_degree))?;
                    ctx.line(format!("points on S over F_q^k: {:?}", rep.surface_points))?;
                    ctx.line(format!("points on Phi^S over F_q^k: {:?}", rep.phi_points))?;
                    match &rep.contained_lines {
                        Some(lines) => {
                            ctx.line(format!("contained rational lines: {}", lines.len()))?;
                            for l in lines {
                                ctx.line(format!("  {l}"))?;
                            }
                        }
                        None => ctx.line("contained rational lines: not enumerated (over budget)")?,
                    }
                    if let Some(r) = rep.residual_degree {
                        ctx.line(format!("residual degree (lines counted once): {r}"))?;
                    }
                }
            }
            Ok(Outcome::Ok)
        }
        Cmd::Points { input, curve } => {
            let j = ctx.job(input)?;
            let polys = match curve {
                Some(name) => j.curve(name)?.polys,
                None => vec![j.surface()?.f],
            };
            let mut counts = Vec::new();
            let mut stopped = None;
            for k in 1..=ctx.cfg.ext_budget {
                match geometry::count_points(&polys, &j.field, k, &ctx.cfg.points()) {
                    Ok(n) => counts.push((k, n)),
                    Err(e @ Error::BudgetExceeded { .. }) => {
                        stopped = Some(format!("k = {k}: {e}"));
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            match ctx.format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Out {
                        counts: Vec<(u32, usize)>,
                        stopped: Option<String>,
                    }
                    ctx.json(&Out { counts, stopped })?
                }
                Format::Csv => {
                    ctx.line("k,count")?;
                    for (k, n) in counts {
                        ctx.line(format!("{k},{n}"))?;
                    }
                }
                Format::Text => {
                    let q = j.field.size();
                    for (k, n) in counts {
                        ctx.line(format!("F_{}: {n}", q.pow(k)))?;
                    }
                    if let Some(s) = stopped {
                        ctx.line(format!("stopped at {s}"))?;
                    }
                }
            }
            Ok(Outcome::Ok)
        }
        Cmd::Orders { input, curve } => {
            ctx.no_csv("orders")?;
            let j = ctx.job(input)?;
            let c = j.curve(curve)?;
            let p = orders::order_profile(&c, j.surface()?.d, &ctx.cfg)?;
            match ctx.format {
                Format::Json => ctx.json(&p)?,
                _ => {
                    ctx.line(format!("seed: {}", p.seed))?;
                    if p.degenerate {
                        ctx.line("degenerate (plane curve)")?;
                    } else {
                        ctx.line(format!("orders: {:?}", p.eps.unwrap()))?;
                        ctx.line(format!("frobenius orders: {:?}", p.nu.unwrap()))?;
                        ctx.line(format!("classical: {}", p.classical.unwrap()))?;
                        ctx.line(format!("frobenius classical: {}", p.frobenius_classical.unwrap()))?;
                        ctx.line(format!("admissible order sequence: {}", p.valid_sequence.unwrap()))?;
                        for e in &p.evidence {
                            if Some(e.j_orders) != p.eps {
                                ctx.line(format!("  point {} (degree {}): orders {:?}", e.point, e.ext_degree, e.j_orders))?;
                            }
                        }
                    }
                    for n in &p.notes {
                        ctx.line(format!("note: {n}"))?;
                    }
                }
            }
            Ok(Outcome::Ok)
        }
        Cmd::Classify { input, curve, assume_conjecture } => {
            ctx.no_csv("classify")?;
            let j = ctx.job(input)?;
            let c = j.curve(curve)?;
            let s = j.surface()?;
            let cl = orders::classify(&c, &s, &ctx.cfg)?;
            let app = frobsurface::bound_applicability(&cl, *assume_conjecture);
            let failed = !cl.alarms.is_empty();
            match ctx.format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Out<'a> {
                        classification: &'a orders::Classification,
                        applicability: &'a frobsurface::ApplicabilityDecision,
                    }
                    ctx.json(&Out { classification: &cl, applicability: &app })?
                }
                _ => {
                    ctx.line(format!("seed: {}", cl.profile.seed))?;
                    ctx.line(format!("degree: {}", cl.delta))?;
                    ctx.line(format!("degenerate: {}", cl.profile.degenerate))?;
                    if let (Some(e), Some(n)) = (cl.profile.eps, cl.profile.nu) {
                        ctx.line(format!("orders: {e:?}, frobenius orders: {n:?}"))?;
                    }
                    ctx.line(format!("prediction: {:?}", cl.prediction))?;
                    ctx.line(format!("containment in Phi^S: {:?} ({})", cl.containment.verdict, cl.containment.certificate))?;
                    if let Some(w) = cl.weierstrass_bound {
                        ctx.line(format!("weierstrass divisor degree bound: {w}"))?;
                    }
                    ctx.line(format!("bound: {:?} ({}), usable: {}", app.decision, app.rule, app.usable))?;
                    for a in &cl.alarms {
                        ctx.line(format!("ALARM: {a}"))?;
                    }
                }
            }
            Ok(if failed { Outcome::Failed } else { Outcome::Ok })
        }
        Cmd::Bound { input, curve, delta, d, q } => {
            ctx.no_csv("bound")?;
            if let (Some(delta), Some(d), Some(q)) = (delta, d, q) {
                let mb = bounds::main_bound(*delta, *d, *q)?;
                match ctx.format {
                    Format::Json => ctx.json(&mb)?,
                    _ => ctx.line(mb.floor.to_string())?,
                }
                return Ok(Outcome::Ok);
            }
            let Some(name) = curve else {
                return Err(Error::HypothesisNotMet("give --delta, --d and --q, or a job file with --curve".into()));
            };
            let j = ctx.job(input)?;
            let bc = frobsurface::verify_bound(&j.surface()?, &j.curve(name)?, &ctx.cfg)?;
            match ctx.format {
                Format::Json => ctx.json(&bc)?,
                _ => {
                    ctx.line(format!("N = {}, B = {}, holds: {}, tight: {}", bc.n, bc.b, bc.holds, bc.tight))?;
                    if let Some(a) = &bc.alert {
                        ctx.line(format!("ALARM: {a}"))?;
                    }
                }
            }
            Ok(if bc.holds { Outcome::Ok } else { Outcome::Failed })
        }
        Cmd::Compare { q, d, delta, genus, nu1, nu2 } => {
            let nu = nu1.zip(*nu2);
            let reports = match delta {
                Some(dl) => vec![bounds::compare(*dl, *d, *q, *genus, nu)?],
                None => (1..=*q).map(|dl| bounds::compare(dl, *d, *q, *genus, nu)).collect::<Result<_>>()?,
            };
            match ctx.format {
                Format::Json => ctx.json(&reports)?,
                Format::Csv => {
                    ctx.line(bounds::CSV_HEADER)?;
                    for r in &reports {
                        ctx.line(format!(
                            "{},{},{},{},{},{},{}",
                            r.delta, r.main, r.main_floor, r.homma, r.stohr_voloch, r.serre_weil, r.winner
                        ))?;
                    }
                }
                Format::Text => {
                    for r in &reports {
                        ctx.line(format!(
                            "delta {}: main {} (floor {}), homma {}, stohr-voloch {}, serre-weil {} [g = {}]; best: {}",
                            r.delta, r.main, r.main_floor, r.homma, r.stohr_voloch, r.serre_weil, r.genus_bound, r.winner
                        ))?;
                        for n in &r.notes {
                            ctx.line(format!("  note: {n}"))?;
                        }
                    }
                }
            }
            Ok(Outcome::Ok)
        }
        Cmd::Scan { degree, all, smooth_only, max_surfaces } => {
            ctx.no_csv("scan")?;
            let spec = ctx.field.as_deref().ok_or_else(|| Error::HypothesisNotMet("scan needs --field".into()))?;
            let field = parse_field_spec(spec)?;
            let sc = ScanConfig {
                field,
                d: *degree,
                cfg: ctx.cfg.clone(),
                irreducible_only: !*all,
                smooth_only: *smooth_only,
                max_surfaces: *max_surfaces,
            };
            let (summary, records) = scan::scan_conjecture(&sc, cli.out.as_deref())?;
            match ctx.format {
                Format::Json => ctx.json(&summary)?,
                _ => {
                    ctx.line(format!("surfaces: {}", summary.total))?;
                    if summary.resumed_from > 0 {
                        ctx.line(format!("resumed at: {}", summary.resumed_from))?;
                    }
                    ctx.line(format!("frobenius classical: {}", summary.fc))?;
                    ctx.line(format!("Consistent: {}", summary.consistent))?;
                    ctx.line(format!("NeedsCAS: {}", summary.needs_cas))?;
                    ctx.line(format!("CandidateCounterexample: {}", summary.candidates))?;
                    for a in &summary.alerts {
                        ctx.line(a)?;
                    }
                }
            }
            if cli.out.is_none() && ctx.format == Format::Json {
                for r in &records {
                    ctx.line(scan::record_line(r)?)?;
                }
            }
            let failed = summary.candidates > 0 || !summary.alerts.is_empty();
            Ok(if failed { Outcome::Failed } else { Outcome::Ok })
        }
        Cmd::ReplayExample { id } => {
            ctx.no_csv("replay-example")?;
            let ids: Vec<&str> = if id == "all" { replay::EXAMPLES.to_vec() } else { vec![id.as_str()] };
            if let Some(bad) = ids.iter().find(|i| replay::job_text(i).is_none()) {
                return Err(Error::HypothesisNotMet(format!("unknown example {bad}; known: {}", replay::EXAMPLES.join(", "))));
            }
            let mut ok = true;
            let mut reports = Vec::new();
            for i in ids {
                let r = replay::replay(i, &ctx.cfg)?;
                ok &= r.passed();
                reports.push(r);
            }
            match ctx.format {
                Format::Json => ctx.json(&reports)?,
                _ => {
                    for r in &reports {
                        ctx.line(format!("example {} (seed {})", r.example, r.seed))?;
                        for c in &r.checks {
                            ctx.line(format!("  [{}] {}: {}", if c.ok { "ok" } else { "FAIL" }, c.name, c.detail))?;
                        }
                        for i in &r.info {
                            ctx.line(format!("  {i}"))?;
                        }
                    }
                }
            }
            Ok(if ok { Outcome::Ok } else { Outcome::Failed })
        }
    }
}
