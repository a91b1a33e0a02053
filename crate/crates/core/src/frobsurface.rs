//! Frobenius classicality of surfaces, the curve Phi^S and the point bound.

use std::collections::HashMap;

use serde::Serialize;

use crate::algebra::field::TABLE_LIMIT;
use crate::algebra::{linalg, monomials_of_degree, Elem, Poly};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::geometry::{self, CurveSpec, Surface};
use crate::localgeom::{self, default_truncation, evaluate_on_chart, parametrize_curve, ParamChoice};
use crate::orders::{self, Classification};

/// Largest linear system attempted for ideal-membership certificates.
const MEMBERSHIP_LIMIT: usize = 3000;

#[derive(Clone, Debug, Serialize)]
pub struct Classicality {
    pub frobenius_classical: bool,
    pub warning: Option<String>,
}

/// Classicality with the warning raised when `h` vanishes identically.
pub fn classicality(s: &Surface) -> Result<Classicality> {
    if !s.irreducible_asserted {
        return Err(Error::IrreducibilityNotAsserted);
    }
    let h = s.f.build_h(s.q());
    if h.is_zero() {
        return Ok(Classicality {
            frobenius_classical: false,
            warning: Some("h vanishes identically; f is probably not irreducible".into()),
        });
    }
    Ok(Classicality { frobenius_classical: !s.f.divides(&h)?, warning: None })
}

pub fn is_frobenius_classical(s: &Surface) -> Result<bool> {
    Ok(classicality(s)?.frobenius_classical)
}

pub fn phi_degree(s: &Surface) -> u32 {
    s.d * (s.d + s.q() as u32 - 1)
}

/// The complete intersection `f = h = 0`.
pub fn phi_curve(s: &Surface) -> Result<CurveSpec> {
    if !is_frobenius_classical(s)? {
        return Err(Error::FrobeniusNonClassical);
    }
    let h = s.f.build_h(s.q());
    Ok(CurveSpec::new(vec![s.f.clone(), h])?.with_delta(phi_degree(s)).complete())
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Contained,
    NotContained,
    Unknown,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContainmentReport {
    pub verdict: Verdict,
    pub certificate: String,
    /// Assertions the verdict relies on.
    pub assertions: Vec<String>,
    pub points_checked: usize,
    pub contradiction: bool,
}

/// Whether `g` lies in the ideal generated by `gens` in degree `deg g`.
/// `None` when the linear system is too large to try.
pub fn in_ideal_degree(g: &Poly, gens: &[Poly]) -> Result<Option<bool>> {
    let Some(dg) = g.degree() else { return Ok(Some(true)) };
    let rows = monomials_of_degree(dg);
    if rows.len() > MEMBERSHIP_LIMIT {
        return Ok(None);
    }
    let index: HashMap<_, _> = rows.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let f = g.field();
    let mut cols: Vec<Vec<Elem>> = Vec::new();
    for gen in gens {
        let Some(dd) = gen.degree() else { continue };
        if dd > dg {
            continue;
        }
        for m in monomials_of_degree(dg - dd) {
            let prod = gen.mul_monomial(&m, Elem::ONE);
            let mut col = vec![Elem::ZERO; rows.len()];
            for (mm, c) in prod.terms() {
                col[index[mm]] = *c;
            }
            cols.push(col);
            if cols.len() > MEMBERSHIP_LIMIT {
                return Ok(None);
            }
        }
    }
    if cols.is_empty() {
        return Ok(Some(g.is_zero()));
    }
    let m: Vec<Vec<Elem>> = (0..rows.len()).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
    let b: Vec<Elem> = rows.iter().map(|mm| g.coeff(mm)).collect();
    Ok(Some(linalg::solve(f, &m, &b).is_some()))
}

/// Decides whether `c` is a component of Phi^S.
///
/// In order: an ideal-membership certificate for `h`, a witness point with
/// `h != 0`, a Bezout count under the irreducible/complete assertions, and
/// otherwise series evidence.
pub fn curve_in_phi(s: &Surface, c: &CurveSpec, cfg: &Config) -> Result<ContainmentReport> {
    let q = s.q();
    let h = s.f.build_h(q);
    let base = c.field();
    let delta = c.degree(cfg.seed)?;
    let bezout = delta as u64 * (s.d as u64 + q - 1);

    let mut certificate = None;
    if s.f.divides(&h)? {
        certificate = Some("f divides h, so Phi^S is the whole surface".to_string());
    } else if in_ideal_degree(&h, &c.polys)? == Some(true) {
        certificate = Some("h lies in the ideal of the curve equations".to_string());
    }
    if let Some(cert) = certificate {
        // a rational witness would contradict the certificate
        let pts = geometry::enumerate_points(&c.polys, base, 1, &cfg.points())?;
        let bad = pts.iter().find(|p| !h.evaluate(p.coords()).is_zero());
        return Ok(ContainmentReport {
            verdict: Verdict::Contained,
            certificate: match bad {
                Some(p) => format!("{cert}; yet h({p}) != 0"),
                None => cert,
            },
            assertions: vec!["curve lies on the surface".into()],
            points_checked: pts.len(),
            contradiction: bad.is_some(),
        });
    }

    let mut checked = 0;
    let mut k = 1;
    loop {
        let Some(qk) = q.checked_pow(k) else { break };
        if qk > TABLE_LIMIT {
            break;
        }
        let pts = match geometry::enumerate_points(&c.polys, base, k, &cfg.points()) {
            Ok(p) => p,
            Err(Error::BudgetExceeded { .. }) => break,
            Err(e) => return Err(e),
        };
        let hk = h.over(&base.extension(k)?)?;
        checked = pts.len();
        if let Some(p) = pts.iter().find(|p| !hk.evaluate(p.coords()).is_zero()) {
            return Ok(ContainmentReport {
                verdict: Verdict::NotContained,
                certificate: format!("h does not vanish at {p} over F_{q}^{k}"),
                assertions: Vec::new(),
                points_checked: checked,
                contradiction: false,
            });
        }
        if checked as u64 > bezout {
            if c.irreducible_asserted && c.complete_asserted {
                return Ok(ContainmentReport {
                    verdict: Verdict::Contained,
                    certificate: format!("{checked} points over F_{q}^{k} lie on Phi^S, more than {bezout}"),
                    assertions: vec!["curve is irreducible".into(), "curve equations are complete".into()],
                    points_checked: checked,
                    contradiction: false,
                });
            }
            break;
        }
        k += 1;
    }

    let t = cfg.truncation.unwrap_or_else(|| default_truncation(q, delta, s.d));
    let mut vals = Vec::new();
    for sample in orders::sample_smooth_points(c, cfg, 1)? {
        let chart = parametrize_curve(c, &sample.point, t, ParamChoice(0))?;
        vals.push(format!("{}: {}", sample.point, localgeom::series_multiplicity(&evaluate_on_chart(&h, &chart)?)));
    }
    Ok(ContainmentReport {
        verdict: Verdict::Unknown,
        certificate: format!("no witness among {checked} points; h on charts: {}", vals.join(", ")),
        assertions: Vec::new(),
        points_checked: checked,
        contradiction: false,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundCheck {
    pub n: usize,
    pub b: u64,
    pub holds: bool,
    pub tight: bool,
    pub alert: Option<String>,
    pub assertions: Vec<String>,
}

/// Compares `#C(F_q)` with `floor(delta (d + q - 1) / 2)`.
pub fn verify_bound(s: &Surface, c: &CurveSpec, cfg: &Config) -> Result<BoundCheck> {
    if s.d < 2 {
        return Err(Error::HypothesisNotMet("surface degree must exceed 1".into()));
    }
    if !is_frobenius_classical(s)? {
        return Err(Error::HypothesisNotMet("surface is Frobenius non-classical".into()));
    }
    if !c.irreducible_asserted {
        return Err(Error::HypothesisNotMet("curve irreducibility is not asserted".into()));
    }
    let verdict = curve_in_phi(s, c, cfg)?;
    if verdict.verdict != Verdict::NotContained {
        return Err(Error::HypothesisNotMet(format!("curve is not known to avoid Phi^S ({:?})", verdict.verdict)));
    }
    let delta = c.degree(cfg.seed)? as u64;
    let b = delta * (s.d as u64 + s.q() - 1) / 2;
    let n = geometry::count_points(&c.polys, c.field(), 1, &cfg.points())?;
    let holds = n as u64 <= b;
    Ok(BoundCheck {
        n,
        b,
        holds,
        tight: n as u64 == b,
        alert: (!holds).then(|| format!("{n} rational points exceed the bound {b}; review the assertions")),
        assertions: vec!["surface is irreducible".into(), "curve is irreducible".into()],
    })
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Applicability {
    Applicable,
    ApplicableUnderConjecture,
    NotApplicable,
}

#[derive(Clone, Debug, Serialize)]
pub struct ApplicabilityDecision {
    pub decision: Applicability,
    pub rule: String,
    /// Whether the bound may be used given the conjecture flag.
    pub usable: bool,
}

pub fn bound_applicability(cl: &Classification, assume_conjecture: bool) -> ApplicabilityDecision {
    let mk = |decision, rule: &str| ApplicabilityDecision {
        decision,
        rule: rule.to_string(),
        usable: match decision {
            Applicability::Applicable => true,
            Applicability::ApplicableUnderConjecture => assume_conjecture,
            Applicability::NotApplicable => false,
        },
    };
    let p = &cl.profile;
    if p.degenerate {
        return mk(Applicability::NotApplicable, "plane curves are out of scope");
    }
    if let Some(nu) = p.nu {
        if nu[0] > 1 {
            return mk(Applicability::NotApplicable, "nu1 > 1: the curve is a component of Phi^S");
        }
    }
    if cl.containment.verdict == Verdict::NotContained {
        return mk(Applicability::Applicable, "direct test: the curve is not a component of Phi^S");
    }
    match p.nu {
        Some(nu) if nu != [1, 2] => {
            mk(Applicability::Applicable, "non-degenerate Frobenius non-classical curve with nu1 = 1")
        }
        Some(_) if cl.delta > 2 && cl.delta as u64 <= cl.q => {
            mk(Applicability::ApplicableUnderConjecture, "Frobenius classical curve with 2 < degree <= q")
        }
        _ => mk(Applicability::NotApplicable, "no rule covers this curve"),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SurfaceReport {
    pub q: u64,
    pub d: u32,
    pub frobenius_classical: bool,
    pub warning: Option<String>,
    pub phi_degree: u32,
    /// Point counts of S over `F_{q^k}`, `k = 1..`.
    pub surface_points: Vec<usize>,
    /// Point counts of Phi^S over `F_{q^k}`.
    pub phi_points: Vec<usize>,
    pub contained_lines: Option<Vec<String>>,
    /// `phi_degree` minus one per contained line (multiplicities unknown).
    pub residual_degree: Option<i64>,
}

pub fn surface_report(s: &Surface, cfg: &Config) -> Result<SurfaceReport> {
    let cl = classicality(s)?;
    let fc = cl.frobenius_classical;
    let base = s.field();
    let h = s.f.build_h(s.q());
    let phi_polys = if fc { vec![s.f.clone(), h] } else { vec![s.f.clone()] };
    let mut surface_points = Vec::new();
    let mut phi_points = Vec::new();
    for k in 1..=cfg.ext_budget {
        let sp = geometry::enumerate_points(std::slice::from_ref(&s.f), base, k, &cfg.points())?;
        surface_points.push(sp.len());
        if fc {
            let hk = phi_polys[1].over(sp.first().map_or(base, |p| p.field()))?;
            phi_points.push(sp.iter().filter(|p| hk.evaluate(p.coords()).is_zero()).count());
        } else {
            phi_points.push(sp.len());
        }
    }
    let (contained_lines, residual_degree) = if fc {
        match geometry::enumerate_lines(base) {
            Ok(lines) => {
                let found = cfg.exec.map(lines, |l| match geometry::line_contained(&phi_polys, &l) {
                    Ok(true) => Ok(Some(l.key())),
                    Ok(false) => Ok(None),
                    Err(e) => Err(e),
                });
                let keys: Vec<String> = found.into_iter().collect::<Result<Vec<_>>>()?.into_iter().flatten().collect();
                let res = phi_degree(s) as i64 - keys.len() as i64;
                (Some(keys), Some(res))
            }
            Err(Error::BudgetExceeded { .. }) => (None, None),
            Err(e) => return Err(e),
        }
    } else {
        (None, None)
    };
    Ok(SurfaceReport {
        q: s.q(),
        d: s.d,
        frobenius_classical: fc,
        warning: cl.warning,
        phi_degree: if fc { phi_degree(s) } else { 0 },
        surface_points,
        phi_points,
        contained_lines,
        residual_degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_field, parse_poly};

    fn surface(p: u64, e: u32, f: &str) -> Surface {
        let k = make_field(p, e).unwrap();
        Surface::new(parse_poly(f, &k).unwrap(), true).unwrap()
    }

    #[test]
    fn hermitian_is_non_classical() {
        let s = surface(2, 2, "X0^3 + X1^3 + X2^3 + X3^3");
        assert!(!is_frobenius_classical(&s).unwrap());
        assert!(matches!(phi_curve(&s), Err(Error::FrobeniusNonClassical)));
    }

    #[test]
    fn unasserted_irreducibility_is_refused() {
        let k = make_field(5, 1).unwrap();
        let s = Surface::new(parse_poly("X0^2 + X1*X2 + X3^2", &k).unwrap(), false).unwrap();
        assert!(matches!(is_frobenius_classical(&s), Err(Error::IrreducibilityNotAsserted)));
    }

    #[test]
    fn rational_points_lie_on_phi() {
        let s = surface(3, 1, "X0^2 + X1*X2 - X3^2");
        let h = s.f.build_h(3);
        let cfg = Config::default();
        for p in geometry::enumerate_points(std::slice::from_ref(&s.f), s.field(), 1, &cfg.points()).unwrap() {
            assert!(h.evaluate(p.coords()).is_zero(), "{p}");
        }
    }

    #[test]
    fn lines_on_a_quadric_are_contained() {
        let s = surface(3, 1, "X0*X3 - X1*X2");
        let k = s.field().clone();
        let line = CurveSpec::new(vec![parse_poly("X0", &k).unwrap(), parse_poly("X1", &k).unwrap()])
            .unwrap()
            .with_delta(1)
            .irreducible()
            .complete();
        let r = curve_in_phi(&s, &line, &Config::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Contained);
        assert!(!r.contradiction);
        assert!(matches!(verify_bound(&s, &line, &Config::default()), Err(Error::HypothesisNotMet(_))));
    }

    #[test]
    fn phi_itself_is_contained() {
        let s = surface(3, 1, "X0*X3 - X1*X2 + X0^2");
        let phi = phi_curve(&s).unwrap();
        let r = curve_in_phi(&s, &phi, &Config::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Contained);
    }

    #[test]
    fn membership_certificate() {
        let k = make_field(5, 1).unwrap();
        let g = parse_poly("X0*X1 + X2^2", &k).unwrap();
        let gens = [parse_poly("X0", &k).unwrap(), parse_poly("X2", &k).unwrap()];
        assert_eq!(in_ideal_degree(&g, &gens).unwrap(), Some(true));
        let g2 = parse_poly("X1*X3", &k).unwrap();
        assert_eq!(in_ideal_degree(&g2, &gens).unwrap(), Some(false));
    }
}
