//! Order sequences, Frobenius orders and classification of curves on surfaces.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::field::TABLE_LIMIT;
use crate::algebra::{linalg, Elem, Gf};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::frobsurface::{self, ContainmentReport, Verdict};
use crate::geometry::{self, CurveSpec, ProjectivePoint, Surface};
use crate::localgeom::{default_truncation, parametrize_curve, LocalChart, ParamChoice, Series};

/// Above this many points of the extension plane we sample slices instead of
/// enumerating the whole curve.
const FULL_ENUMERATION_LIMIT: u64 = 200_000;

/// Orders `j_0 < j_1 < j_2 < j_3` of the chart, read off as the rank jumps of
/// the coefficient vectors.
pub fn point_orders(chart: &LocalChart, delta: Option<u32>) -> Result<[u32; 4]> {
    let f = chart.field();
    let t = chart.truncation();
    let mut basis: Vec<Vec<Elem>> = Vec::new();
    let mut orders = Vec::new();
    for m in 0..t {
        let v: Vec<Elem> = (0..4).map(|i| chart.series[i].coeff(m)).collect();
        let mut trial = basis.clone();
        trial.push(v.clone());
        if linalg::rank(f, &trial) > basis.len() {
            basis.push(v);
            orders.push(m as u32);
            if orders.len() == 4 {
                return Ok([orders[0], orders[1], orders[2], orders[3]]);
            }
        }
    }
    match delta {
        Some(d) if t as u64 > d as u64 => Err(Error::DegenerateCurve),
        _ => Err(Error::TruncationTooSmall(t)),
    }
}

#[derive(Clone, Debug)]
pub struct Sample {
    pub point: ProjectivePoint,
    pub ext_degree: u32,
}

fn trial_rng(seed: u64, m: u32) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (m as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn is_smooth_on_curve(c: &CurveSpec, pt: &ProjectivePoint) -> Result<bool> {
    Ok(geometry::jacobian_rank(&c.polys, pt)? == 2)
}

/// Up to `per_ext` random smooth points over each `F_{q^m}`, `m <= max_ext`.
/// Extensions too large for table arithmetic are skipped.
pub fn sample_smooth_points(c: &CurveSpec, cfg: &Config, per_ext: usize) -> Result<Vec<Sample>> {
    let base = c.field();
    let mut out = Vec::new();
    for m in 1..=cfg.max_ext {
        let Some(qm) = base.size().checked_pow(m) else { break };
        if qm > TABLE_LIMIT {
            break;
        }
        let field = base.extension(m)?;
        let mut rng = trial_rng(cfg.seed, m);
        let mut chosen: Vec<ProjectivePoint> = Vec::new();
        if qm * qm <= FULL_ENUMERATION_LIMIT {
            let pts = geometry::enumerate_points(&c.polys, base, m, &cfg.points())?;
            let mut smooth = Vec::new();
            for p in pts {
                if is_smooth_on_curve(c, &p)? {
                    smooth.push(p);
                }
            }
            smooth.shuffle(&mut rng);
            chosen.extend(smooth.into_iter().take(per_ext));
        } else {
            let elems: Vec<Elem> = field.elements().collect();
            let mut attempts = 0;
            while chosen.len() < per_ext && attempts < 8 * per_ext.max(1) {
                attempts += 1;
                let x1 = elems[rng.gen_range(0..elems.len())];
                let mut slice = geometry::points_on_slice(&c.polys, &field, x1)?;
                slice.shuffle(&mut rng);
                for p in slice {
                    if !chosen.contains(&p) && is_smooth_on_curve(c, &p)? {
                        chosen.push(p);
                        break;
                    }
                }
            }
        }
        out.extend(chosen.into_iter().map(|point| Sample { point, ext_degree: m }));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct PointEvidence {
    pub point: ProjectivePoint,
    pub ext_degree: u32,
    pub j_orders: [u32; 4],
}

#[derive(Clone, Debug)]
pub struct GenericOrders {
    pub eps: [u32; 4],
    pub evidence: Vec<PointEvidence>,
    pub charts: Vec<LocalChart>,
}

/// Truncation used for charts of `c`: the override, or the default built from
/// the degree and the surface degree `d`.
pub fn chart_truncation(c: &CurveSpec, d: u32, cfg: &Config) -> Result<(usize, u32)> {
    let delta = c.degree(cfg.seed)?;
    let t = cfg.truncation.unwrap_or_else(|| default_truncation(c.field().size(), delta, d));
    Ok((t, delta))
}

/// Componentwise minimum of the point orders over sampled smooth points.
pub fn generic_orders(c: &CurveSpec, d: u32, cfg: &Config) -> Result<GenericOrders> {
    let samples = sample_smooth_points(c, cfg, cfg.trials)?;
    generic_orders_at(c, d, cfg, samples)
}

/// As [`generic_orders`], on given samples.
pub fn generic_orders_at(c: &CurveSpec, d: u32, cfg: &Config, samples: Vec<Sample>) -> Result<GenericOrders> {
    let (t, delta) = chart_truncation(c, d, cfg)?;
    if samples.is_empty() {
        return Err(Error::NoSmoothPointFound);
    }
    let results = cfg.exec.map(samples, |s| -> Result<Option<(PointEvidence, LocalChart)>> {
        // isolated points of an incomplete system have no chart
        let chart = match parametrize_curve(c, &s.point, t, ParamChoice(0)) {
            Ok(ch) => ch,
            Err(Error::InconsistentSystem(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        let j = point_orders(&chart, Some(delta))?;
        Ok(Some((PointEvidence { point: s.point, ext_degree: s.ext_degree, j_orders: j }, chart)))
    });
    let mut eps = [u32::MAX; 4];
    let mut evidence = Vec::new();
    let mut charts = Vec::new();
    for r in results {
        let Some((ev, chart)) = r? else { continue };
        for i in 0..4 {
            eps[i] = eps[i].min(ev.j_orders[i]);
        }
        evidence.push(ev);
        charts.push(chart);
    }
    if charts.is_empty() {
        return Err(Error::NoSmoothPointFound);
    }
    Ok(GenericOrders { eps, evidence, charts })
}

/// Determinant of a 4x4 matrix of series (Leibniz expansion).
fn series_det(f: &Gf, m: &[[Series; 4]; 4]) -> Series {
    let t = m.iter().flat_map(|r| r.iter()).map(|s| s.precision()).min().unwrap_or(0);
    let mut acc = Series::zero(t);
    let mut perm = [0usize, 1, 2, 3];
    for_each_permutation(&mut perm, 0, &mut |p, sign| {
        let mut prod = m[0][p[0]].truncate(t);
        for (r, &col) in p.iter().enumerate().skip(1) {
            prod = prod.mul(f, &m[r][col]);
        }
        acc = if sign { acc.add(f, &prod) } else { acc.sub(f, &prod) };
    });
    acc
}

fn for_each_permutation(p: &mut [usize; 4], k: usize, visit: &mut impl FnMut(&[usize; 4], bool)) {
    if k == p.len() {
        let mut inversions = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if p[i] > p[j] {
                    inversions += 1;
                }
            }
        }
        visit(p, inversions % 2 == 0);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        for_each_permutation(p, k + 1, visit);
        p.swap(k, i);
    }
}

/// The determinant with rows `x^q, x, D^(a) x, D^(b) x` on a chart.
pub fn frobenius_wronskian(chart: &LocalChart, a: u32, b: u32) -> Series {
    let f = chart.field();
    let da: [Series; 4] = std::array::from_fn(|i| chart.series[i].hasse(f, a as usize));
    let db: [Series; 4] = std::array::from_fn(|i| chart.series[i].hasse(f, b as usize));
    let m = [chart.twisted.clone(), chart.series.clone(), da, db];
    series_det(f, &m)
}

/// First pair from `(e1,e2), (e1,e3), (e2,e3)` whose Frobenius Wronskian is
/// nonzero on some chart, with a note on how it was decided.
pub fn frobenius_orders(charts: &[LocalChart], eps: [u32; 4]) -> Result<([u32; 2], String)> {
    let pairs = [(eps[1], eps[2]), (eps[1], eps[3]), (eps[2], eps[3])];
    for (a, b) in pairs {
        for chart in charts {
            let w = frobenius_wronskian(chart, a, b);
            if let Some(v) = w.valuation() {
                let note = format!(
                    "pair ({a},{b}) has a nonzero determinant of order {v} at {} (precision {})",
                    chart.point,
                    w.precision()
                );
                return Ok(([a, b], note));
            }
        }
    }
    Err(Error::AllCandidatesVanish)
}

/// The index `I` in 1..=3 and order `eps_I` missing from the Frobenius orders.
pub fn q_deleted_order(eps: [u32; 4], nu: [u32; 2]) -> Result<(usize, u32)> {
    let present: Vec<bool> = (1..4).map(|i| nu.contains(&eps[i])).collect();
    if !nu.iter().all(|v| eps[1..].contains(v)) || present.iter().filter(|&&b| b).count() != 2 {
        return Err(Error::InconsistentProfile(format!("nu {nu:?} is not a subset of eps {eps:?}")));
    }
    let i = present.iter().position(|&b| !b).unwrap() + 1;
    Ok((i, eps[i]))
}

fn powers_of(p: u64, limit: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut x = p;
    while x <= limit {
        out.push(x);
        x *= p;
    }
    out
}

/// Whether `eps` belongs to the known families of order sequences of
/// non-degenerate space curves in characteristic `p`.
pub fn validate_order_sequence(eps: [u32; 4], p: u64) -> bool {
    let [e0, e1, e2, e3] = eps.map(|e| e as u64);
    if e0 != 0 || e1 != 1 || !(e1 < e2 && e2 < e3) {
        return false;
    }
    let pows = powers_of(p, e3.max(2));
    if (e2, e3) == (2, 3) && p > 3 {
        return true;
    }
    if e2 == 2 && p > 2 && pows.contains(&e3) {
        return true;
    }
    if pows.contains(&e2) && e3 == 2 * e2 {
        return true;
    }
    if p > 2 && pows.contains(&e2) && pows.contains(&e3) {
        return true;
    }
    pows.contains(&e2) && e2 > 2 && e3 == e2 + 1
}

#[derive(Clone, Debug, Serialize)]
pub struct Degeneracy {
    pub degenerate: bool,
    pub witness: String,
    pub plane: Option<[u32; 4]>,
}

/// Decides whether `c` lies in a plane.
///
/// A sample group with four independent points proves non-degeneracy; a
/// chart whose coefficient vectors span everything does too. Otherwise the
/// chart's kernel gives a plane that must contain every sampled point.
pub fn is_degenerate(c: &CurveSpec, d: u32, cfg: &Config) -> Result<Degeneracy> {
    let samples = sample_smooth_points(c, cfg, cfg.trials.max(5))?;
    is_degenerate_at(c, d, cfg, &samples)
}

/// As [`is_degenerate`], on given samples.
pub fn is_degenerate_at(c: &CurveSpec, d: u32, cfg: &Config, samples: &[Sample]) -> Result<Degeneracy> {
    if samples.len() < 4 {
        return Err(Error::TooFewPoints(samples.len()));
    }
    let mut groups: Vec<(u32, Vec<&ProjectivePoint>)> = Vec::new();
    for s in samples {
        match groups.iter_mut().find(|g| g.0 == s.ext_degree) {
            Some(g) => g.1.push(&s.point),
            None => groups.push((s.ext_degree, vec![&s.point])),
        }
    }
    for (_, pts) in &groups {
        let f = pts[0].field();
        let mut picked: Vec<Vec<Elem>> = Vec::new();
        let mut names = Vec::new();
        for p in pts {
            let mut trial = picked.clone();
            trial.push(p.coords().to_vec());
            if linalg::rank(f, &trial) > picked.len() {
                picked = trial;
                names.push(p.to_string());
            }
            if picked.len() == 4 {
                return Ok(Degeneracy {
                    degenerate: false,
                    witness: format!("independent points {}", names.join(" ")),
                    plane: None,
                });
            }
        }
    }
    let (_, pts) = groups.iter().max_by_key(|g| g.1.len()).unwrap();
    let (t, delta) = chart_truncation(c, d, cfg)?;
    let chart = parametrize_curve(c, pts[0], t.max(delta as usize + 1), ParamChoice(0))?;
    let f = chart.field();
    let rows: Vec<Vec<Elem>> =
        (0..chart.truncation()).map(|m| (0..4).map(|i| chart.series[i].coeff(m)).collect()).collect();
    let ker = linalg::kernel(f, &rows, 4);
    let Some(plane) = ker.first() else {
        return Ok(Degeneracy {
            degenerate: false,
            witness: format!("chart at {} spans P^3", chart.point),
            plane: None,
        });
    };
    let on_plane = |p: &ProjectivePoint| {
        p.coords().iter().zip(plane).fold(Elem::ZERO, |a, (x, y)| f.add(a, f.mul(*x, *y))).is_zero()
    };
    if pts.iter().all(|p| on_plane(p)) {
        let shown: Vec<String> = plane.iter().map(|&x| f.format_elem(x)).collect();
        Ok(Degeneracy {
            degenerate: true,
            witness: format!("plane ({}) vanishes on the chart at {}", shown.join(":"), chart.point),
            plane: Some([plane[0].index(), plane[1].index(), plane[2].index(), plane[3].index()]),
        })
    } else {
        Err(Error::InconsistentProfile("chart plane misses sampled points".into()))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderProfile {
    pub eps: Option<[u32; 4]>,
    pub nu: Option<[u32; 2]>,
    pub deleted_index: Option<usize>,
    pub deleted_order: Option<u32>,
    pub degenerate: bool,
    pub classical: Option<bool>,
    pub frobenius_classical: Option<bool>,
    pub valid_sequence: Option<bool>,
    pub evidence: Vec<PointEvidence>,
    pub seed: u64,
    pub notes: Vec<String>,
}

/// Order profile of a curve; `d` is the degree used for default truncation.
pub fn order_profile(c: &CurveSpec, d: u32, cfg: &Config) -> Result<OrderProfile> {
    let samples = sample_smooth_points(c, cfg, cfg.trials.max(5))?;
    order_profile_at(c, d, cfg, samples)
}

fn order_profile_at(c: &CurveSpec, d: u32, cfg: &Config, samples: Vec<Sample>) -> Result<OrderProfile> {
    let p = c.field().characteristic() as u64;
    let deg = is_degenerate_at(c, d, cfg, &samples)?;
    let mut notes = vec![deg.witness.clone()];
    if deg.degenerate {
        return Ok(OrderProfile {
            eps: None,
            nu: None,
            deleted_index: None,
            deleted_order: None,
            degenerate: true,
            classical: None,
            frobenius_classical: None,
            valid_sequence: None,
            evidence: Vec::new(),
            seed: cfg.seed,
            notes,
        });
    }
    let g = generic_orders_at(c, d, cfg, samples)?;
    let (nu, note) = frobenius_orders(&g.charts, g.eps)?;
    notes.push(note);
    notes.push(format!(
        "orders are minima over {} sampled points; vanishing determinants are judged on truncated series",
        g.evidence.len()
    ));
    let (i, ei) = q_deleted_order(g.eps, nu)?;
    Ok(OrderProfile {
        eps: Some(g.eps),
        nu: Some(nu),
        deleted_index: Some(i),
        deleted_order: Some(ei),
        degenerate: false,
        classical: Some(g.eps == [0, 1, 2, 3]),
        frobenius_classical: Some(nu == [1, 2]),
        valid_sequence: Some(validate_order_sequence(g.eps, p)),
        evidence: g.evidence,
        seed: cfg.seed,
        notes,
    })
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Prediction {
    Contained,
    NotContained,
    NoPrediction,
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub q: u64,
    pub delta: u32,
    pub profile: OrderProfile,
    pub prediction: Prediction,
    pub containment: ContainmentReport,
    pub discrepancy: Option<String>,
    pub weierstrass_bound: Option<i64>,
    pub alarms: Vec<String>,
}

fn is_power_of(x: u64, p: u64) -> bool {
    powers_of(p, x).contains(&x)
}

/// Classifies `c` on `s` and cross-checks the order-based prediction against
/// the direct containment test.
pub fn classify(c: &CurveSpec, s: &Surface, cfg: &Config) -> Result<Classification> {
    let field = c.field();
    if field != s.field() {
        return Err(Error::FieldMismatch(format!("{} vs {}", c.field(), s.field())));
    }
    let q = field.size();
    let p = field.characteristic() as u64;
    let delta = c.degree(cfg.seed)?;
    let samples = sample_smooth_points(c, cfg, cfg.trials.max(5))?;
    for sample in &samples {
        if !geometry::vanishes_at(std::slice::from_ref(&s.f), &sample.point)? {
            return Err(Error::HypothesisNotMet(format!("curve point {} is not on the surface", sample.point)));
        }
    }
    let profile = order_profile_at(c, s.d, cfg, samples)?;
    let prediction = match profile.nu {
        Some(nu) if nu[0] > 1 => Prediction::Contained,
        Some(nu) if nu != [1, 2] => Prediction::NotContained,
        _ => Prediction::NoPrediction,
    };
    let containment = frobsurface::curve_in_phi(s, c, cfg)?;
    let discrepancy = match (prediction, containment.verdict) {
        (Prediction::Contained, Verdict::NotContained) | (Prediction::NotContained, Verdict::Contained) => {
            Some(format!("orders predict {prediction:?} but the direct test says {:?}", containment.verdict))
        }
        _ => None,
    };
    let mut alarms = Vec::new();
    if let (Some(eps), Some(nu)) = (profile.eps, profile.nu) {
        if nu[0] > 1 && delta as u64 <= q {
            alarms.push(format!("non-degenerate curve with nu1 = {} > 1 and degree {delta} <= q = {q}", nu[0]));
            let shape_ok = is_power_of(nu[0] as u64, p)
                && (nu[1] == 2 * nu[0] || (nu[1] > nu[0] && is_power_of(nu[1] as u64, p)));
            if !shape_ok {
                alarms.push(format!("Frobenius orders {nu:?} have an impossible shape for degree <= q"));
            }
        }
        if nu != [1, 2] && eps == [0, 1, 2, 3] && p > 3 {
            alarms.push(format!("Frobenius non-classical yet classical in characteristic {p}"));
        }
    }
    if discrepancy.is_some() || containment.contradiction {
        alarms.push("contradictory containment verdicts".into());
    }
    let weierstrass_bound = match profile.eps {
        Some(eps) if c.irreducible_asserted && s.d >= 2 => crate::bounds::harris_genus_bound(delta as i64, s.d as i64)
            .ok()
            .map(|h| h.unbranched.max(h.branched).max(0))
            .map(|g| crate::bounds::weierstrass_divisor_degree(eps, g, delta as i64)),
        _ => None,
    };
    if let (Some(eps), Some(bound)) = (profile.eps, weierstrass_bound) {
        let found = profile.evidence.iter().filter(|e| e.j_orders != eps).count() as i64;
        if found > bound {
            alarms.push(format!("{found} sampled Weierstrass points exceed the bound {bound}"));
        }
    }
    Ok(Classification { q, delta, profile, prediction, containment, discrepancy, weierstrass_bound, alarms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_field, parse_poly};

    fn curve(p: u64, eqs: &[&str]) -> CurveSpec {
        let f = make_field(p, 1).unwrap();
        CurveSpec::new(eqs.iter().map(|s| parse_poly(s, &f).unwrap()).collect()).unwrap()
    }

    fn twisted_cubic(p: u64) -> CurveSpec {
        curve(p, &["X0*X2 - X1^2", "X1*X3 - X2^2", "X0*X3 - X1*X2"]).with_delta(3).irreducible().complete()
    }

    #[test]
    fn validator_truth_table() {
        let cases: [([u32; 4], u64, bool); 12] = [
            ([0, 1, 2, 3], 5, true),
            ([0, 1, 2, 3], 2, false),
            ([0, 1, 2, 3], 3, true),
            ([0, 1, 2, 4], 2, true),
            ([0, 1, 2, 4], 5, false),
            ([0, 1, 2, 5], 5, true),
            ([0, 1, 3, 6], 3, true),
            ([0, 1, 3, 9], 3, true),
            ([0, 1, 3, 4], 3, true),
            ([0, 1, 4, 5], 2, true),
            ([0, 2, 3, 4], 5, false),
            ([0, 1, 4, 6], 2, false),
        ];
        for (eps, p, want) in cases {
            assert_eq!(validate_order_sequence(eps, p), want, "{eps:?} p={p}");
        }
        assert!(validate_order_sequence([0, 1, 4, 8], 2));
        assert!(!validate_order_sequence([0, 1, 2, 8], 2));
    }

    #[test]
    fn deleted_order() {
        assert_eq!(q_deleted_order([0, 1, 2, 3], [1, 2]).unwrap(), (3, 3));
        assert_eq!(q_deleted_order([0, 1, 2, 3], [2, 3]).unwrap(), (1, 1));
        assert!(matches!(q_deleted_order([0, 1, 2, 3], [1, 4]), Err(Error::InconsistentProfile(_))));
    }

    #[test]
    fn twisted_cubic_orders() {
        let c = twisted_cubic(5);
        let cfg = Config { max_ext: 2, trials: 3, ..Config::default() };
        let g = generic_orders(&c, 2, &cfg).unwrap();
        assert_eq!(g.eps, [0, 1, 2, 3]);
        let (nu, _) = frobenius_orders(&g.charts, g.eps).unwrap();
        assert_eq!(nu, [1, 2]);
        let deg = is_degenerate(&c, 2, &cfg).unwrap();
        assert!(!deg.degenerate);
    }

    #[test]
    fn conic_is_degenerate() {
        let c = curve(5, &["X3", "X0*X2 - X1^2"]).with_delta(2);
        let cfg = Config { max_ext: 2, ..Config::default() };
        let deg = is_degenerate(&c, 2, &cfg).unwrap();
        assert!(deg.degenerate);
        assert!(matches!(generic_orders(&c, 2, &cfg), Err(Error::DegenerateCurve)));
    }

    #[test]
    fn series_det_of_identity_is_one() {
        let f = make_field(3, 1).unwrap();
        let m: [[Series; 4]; 4] = std::array::from_fn(|i| {
            std::array::from_fn(|j| if i == j { Series::constant(Elem::ONE, 5) } else { Series::zero(5) })
        });
        let d = series_det(&f, &m);
        assert_eq!(d.coeff(0), Elem::ONE);
        assert_eq!(d.valuation(), Some(0));
    }
}
