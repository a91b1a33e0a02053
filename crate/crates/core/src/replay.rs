//! Built-in job files with their expected outcomes.

use serde::Serialize;

use crate::algebra::parse_poly;
use crate::bounds;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::frobsurface::{self, Verdict};
use crate::geometry::{self, Surface};
use crate::jobfile::{parse_job, JobFile};
use crate::localgeom::{self, Multiplicity, ParamChoice};
use crate::orders;

pub const EXAMPLES: [&str; 4] = ["2.2", "4.6", "4.8", "4.9"];

pub fn job_text(id: &str) -> Option<&'static str> {
    match id {
        "2.2" => Some(include_str!("../jobs/example_2_2.job")),
        "4.6" => Some(include_str!("../jobs/example_4_6.job")),
        "4.8" => Some(include_str!("../jobs/example_4_8.job")),
        "4.9" => Some(include_str!("../jobs/example_4_9.job")),
        _ => None,
    }
}

pub fn job(id: &str) -> Result<JobFile> {
    let text = job_text(id).ok_or_else(|| Error::HypothesisNotMet(format!("no built-in example {id}")))?;
    parse_job(text)
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReplayReport {
    pub example: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub info: Vec<String>,
}

impl ReplayReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    fn check(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), ok, detail: detail.into() });
    }
}

pub fn replay(id: &str, cfg: &Config) -> Result<ReplayReport> {
    let j = job(id)?;
    let mut r = ReplayReport { example: id.to_string(), seed: cfg.seed, checks: Vec::new(), info: Vec::new() };
    match id {
        "2.2" => replay_2_2(&j, &mut r)?,
        "4.6" => replay_4_6(&j, cfg, &mut r)?,
        "4.8" => replay_4_8(&j, cfg, &mut r)?,
        "4.9" => replay_4_9(&j, cfg, &mut r)?,
        _ => unreachable!(),
    }
    Ok(r)
}

fn replay_2_2(j: &JobFile, r: &mut ReplayReport) -> Result<()> {
    let s = j.surface()?;
    let h = s.f.build_h(s.q());
    let want = parse_poly("X0^6 + X1^6 + X2^2*X3^4", &j.field)?;
    r.check("h", h == want, format!("h = {h}"));
    let div = s.f.divides(&h)?;
    r.check("f does not divide h", !div, format!("divides = {div}"));
    let fc = frobsurface::classicality(&s)?;
    r.check("Frobenius classical", fc.frobenius_classical, format!("{fc:?}"));
    Ok(())
}

fn lines_check(r: &mut ReplayReport, rep: &frobsurface::SurfaceReport, want: Option<usize>) {
    match (&rep.contained_lines, want) {
        (Some(lines), Some(n)) => r.check("contained lines", lines.len() == n, format!("{} lines: {}", lines.len(), lines.join(", "))),
        (Some(lines), None) => r.check("contained lines extracted", true, format!("{} lines: {}", lines.len(), lines.join(", "))),
        (None, _) => r.check("contained lines", false, "line enumeration over budget"),
    }
    if let Some(res) = rep.residual_degree {
        r.info.push(format!("residual degree after removing each line once: {res}"));
    }
}

fn replay_4_6(j: &JobFile, cfg: &Config, r: &mut ReplayReport) -> Result<()> {
    let s = j.surface()?;
    let rep = frobsurface::surface_report(&s, cfg)?;
    r.check("phi degree", rep.phi_degree == 21, rep.phi_degree.to_string());
    lines_check(r, &rep, Some(15));
    r.info.push(format!("points on S: {:?}, on Phi^S: {:?}", rep.surface_points, rep.phi_points));

    let c = j.curve("C")?;
    let pts = geometry::enumerate_points(&c.polys, &j.field, 1, &cfg.points())?;
    r.check("sextic rational points", pts.len() == 18, pts.len().to_string());

    let s1 = Surface::new(c.polys[1].clone(), true)?;
    let fc = frobsurface::is_frobenius_classical(&s1)?;
    r.check("S1 Frobenius classical", fc, format!("{fc}"));
    let cont = frobsurface::curve_in_phi(&s1, &c, cfg)?;
    r.check(
        "C not a component of Phi^S1",
        cont.verdict == Verdict::NotContained && !cont.contradiction,
        format!("{:?}: {}", cont.verdict, cont.certificate),
    );
    let bc = frobsurface::verify_bound(&s1, &c, cfg)?;
    r.check("bound tight", bc.n == 18 && bc.b == 18 && bc.tight, format!("N = {}, B = {}", bc.n, bc.b));

    // h_{S1} meets C to order >= 2 at rational points, whatever the parameter
    let h1 = s1.f.build_h(s1.q());
    let (t, _) = orders::chart_truncation(&c, s1.d, cfg)?;
    let mut smooth = 0;
    let mut bad = Vec::new();
    for p in &pts {
        if !geometry::is_smooth_point(&c.polys, p, 2)? {
            continue;
        }
        smooth += 1;
        let mut seen: Vec<Multiplicity> = Vec::new();
        for k in 0..4 {
            match localgeom::intersection_multiplicity(&c, &h1, p, t, ParamChoice(k)) {
                Ok(m) => seen.push(m),
                Err(Error::NoTransverseCoordinate(_)) => {}
                Err(e) => return Err(e),
            }
        }
        let first = seen.first().copied();
        let consistent = seen.iter().all(|m| Some(*m) == first);
        if first.is_none_or(|m| m.lower_bound() < 2) || !consistent {
            bad.push(format!("{p}: {seen:?}"));
        }
    }
    r.check(
        "tangency of h_S1 along C",
        bad.is_empty() && smooth > 0,
        format!("{smooth} smooth rational points checked; failures: {bad:?}"),
    );

    let alt = j.curve("alt")?;
    let n = geometry::count_points(&alt.polys, &j.field, 1, &cfg.points())?;
    r.info.push(format!("the alternative equations cut out {n} rational points"));

    let cl = orders::classify(&c, &s, cfg)?;
    r.check("no consistency alarms", cl.alarms.is_empty(), format!("{:?}", cl.alarms));
    r.info.push(format!(
        "orders of C: eps {:?}, nu {:?}; containment on S: {:?}",
        cl.profile.eps, cl.profile.nu, cl.containment.verdict
    ));
    Ok(())
}

fn replay_4_8(j: &JobFile, cfg: &Config, r: &mut ReplayReport) -> Result<()> {
    let s = j.surface()?;
    let rep = frobsurface::surface_report(&s, cfg)?;
    r.check("phi degree", rep.phi_degree == 15, rep.phi_degree.to_string());
    lines_check(r, &rep, Some(1));
    let b = bounds::main_bound(4, 2, 3)?;
    r.check("bound for quartics on a quadric", b.floor == 8 && b.floor >= 7, format!("{} >= 7", b.floor));
    r.info.push(format!("points on S: {:?}, on Phi^S: {:?}", rep.surface_points, rep.phi_points));
    Ok(())
}

fn replay_4_9(j: &JobFile, cfg: &Config, r: &mut ReplayReport) -> Result<()> {
    let s = j.surface()?;
    let rep = frobsurface::surface_report(&s, cfg)?;
    r.check("phi degree", rep.phi_degree == 20, rep.phi_degree.to_string());
    lines_check(r, &rep, None);
    let mut sys = vec![s.f.clone()];
    sys.extend(s.f.gradient().into_iter().filter(|g| !g.is_zero()));
    let mut found = None;
    for k in 1..=cfg.ext_budget.max(3) {
        match geometry::enumerate_points(&sys, &j.field, k, &cfg.points()) {
            Ok(pts) if !pts.is_empty() => {
                found = Some((k, pts));
                break;
            }
            Ok(_) => {}
            Err(Error::BudgetExceeded { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    match found {
        Some((k, pts)) => {
            let shown: Vec<String> = pts.iter().map(|p| p.to_string()).collect();
            r.check("singular point found", true, format!("over F_2^{k}: {}", shown.join(", ")))
        }
        None => r.check("singular point found", false, "none within the extension budget"),
    }
    r.info.push(format!("points on S: {:?}, on Phi^S: {:?}", rep.surface_points, rep.phi_points));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jobs_parse() {
        for id in EXAMPLES {
            let j = job(id).unwrap();
            assert!(j.surface().is_ok(), "{id}");
        }
        assert!(job("3.1").is_err());
    }

    #[test]
    fn alternative_sextic_equations() {
        let j = job("4.6").unwrap();
        let cfg = Config::default();
        let alt = j.curve("alt").unwrap();
        assert_eq!(geometry::count_points(&alt.polys, &j.field, 1, &cfg.points()).unwrap(), 4);
        let h = j.surface.build_h(5);
        let gens = &alt.polys[..2];
        assert_eq!(frobsurface::in_ideal_degree(&h, gens).unwrap(), Some(false));
        let c = j.curve("C").unwrap();
        assert_eq!(frobsurface::in_ideal_degree(&h, &c.polys).unwrap(), Some(true));
    }

    #[test]
    fn replay_2_2_passes() {
        let r = replay("2.2", &Config::default()).unwrap();
        assert!(r.passed(), "{:?}", r.checks);
    }
}
