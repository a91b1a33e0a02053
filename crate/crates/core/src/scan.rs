//! Exhaustive scans of surface families, recording what can be said about
//! the components of Phi^S for each member.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::algebra::{linalg, monomials_of_degree, Elem, Embedding, Gf, Poly};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::frobsurface;
use crate::geometry::{self, Surface};

/// Records per checkpoint.
pub const CHECKPOINT_EVERY: u64 = 10_000;

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub field: Gf,
    pub d: u32,
    pub cfg: Config,
    /// Quadrics only: analyze irreducible members, record the rest as skipped.
    pub irreducible_only: bool,
    /// Skip members with a singular point over `F_q` or `F_{q^2}`.
    pub smooth_only: bool,
    /// Largest family size accepted.
    pub max_surfaces: u128,
}

impl ScanConfig {
    pub fn new(field: Gf, d: u32) -> Self {
        ScanConfig { field, d, cfg: Config::default(), irreducible_only: true, smooth_only: false, max_surfaces: 10_000_000 }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Flag {
    Consistent,
    NeedsCAS,
    CandidateCounterexample,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub key: String,
    pub q: u64,
    pub d: u32,
    pub fc: bool,
    pub phi_degree: u32,
    pub lines: Vec<String>,
    pub residual_degree: i64,
    pub points: BTreeMap<String, usize>,
    pub flag: Flag,
    pub assertions: Vec<String>,
}

/// `(q^M - 1) / (q - 1)` with `M` the number of degree-`d` monomials.
pub fn family_size(q: u64, d: u32) -> u128 {
    let m = monomials_of_degree(d).len() as u32;
    let q = q as u128;
    (q.pow(m) - 1) / (q - 1)
}

/// The `index`-th member in canonical order: by position of the leading
/// coefficient (which is 1), then the remaining coefficients read as a
/// base-q counter.
pub fn surface_at(field: &Gf, d: u32, index: u128) -> Result<Poly> {
    let mons = monomials_of_degree(d);
    let q = field.size() as u128;
    let m = mons.len();
    let mut idx = index;
    for lead in 0..m {
        let block = q.pow((m - 1 - lead) as u32);
        if idx < block {
            let mut terms = vec![(mons[lead], Elem::ONE)];
            let mut rest = idx;
            for j in (lead + 1..m).rev() {
                let c = (rest % q) as u64;
                rest /= q;
                terms.push((mons[j], field.from_index(c)?));
            }
            return Ok(Poly::from_terms(field, terms));
        }
        idx -= block;
    }
    Err(Error::DimensionMismatch(format!("index {index} outside the family")))
}

pub fn enumerate_surfaces(sc: &ScanConfig) -> Result<impl Iterator<Item = Poly> + '_> {
    let n = family_size(sc.field.size(), sc.d);
    if n > sc.max_surfaces {
        return Err(Error::BudgetExceeded { work: n, budget: sc.max_surfaces });
    }
    Ok((0..n).map(move |i| surface_at(&sc.field, sc.d, i).expect("index within family")))
}

/// Canonical key: coefficients over the degree-d monomials, comma-joined.
pub fn surface_key(f: &Poly, d: u32) -> String {
    let field = f.field();
    monomials_of_degree(d).iter().map(|m| field.format_elem(f.coeff(m))).collect::<Vec<_>>().join(",")
}

/// Normalized nonzero vectors of length 4 (first nonzero entry 1).
fn projective_vectors(field: &Gf) -> Vec<[Elem; 4]> {
    let q = field.size();
    let mut out = Vec::new();
    for lead in 0..4 {
        let free = 3 - lead;
        for mut n in 0..q.pow(free as u32) {
            let mut v = [Elem::ZERO; 4];
            v[lead] = Elem::ONE;
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = field.from_index(n % q).unwrap();
                n /= q;
            }
            out.push(v);
        }
    }
    out
}

/// Whether a quadratic form is not a product of two linear forms over the
/// algebraic closure. Factors of a split quadric are defined over `F_{q^2}`,
/// so an exhaustive search there decides it.
pub fn quadric_is_irreducible(f: &Poly) -> Result<bool> {
    if f.degree() != Some(2) {
        return Err(Error::BadDegree("expected a quadratic form".into()));
    }
    let big = f.field().extension(2)?;
    let g = f.over(&big)?;
    for v in projective_vectors(&big) {
        let l = Poly::linear(&big, &v);
        if l.divides(&g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `g` restricted to the plane spanned by `basis`, in coordinates `Y0..Y2`
/// (stored in the first three variable slots).
pub fn restrict_to_plane(g: &Poly, basis: &[[Elem; 4]; 3]) -> Poly {
    let f = g.field();
    let images: Vec<Poly> = (0..4).map(|i| Poly::linear(f, &[basis[0][i], basis[1][i], basis[2][i], Elem::ZERO])).collect();
    let maxe: Vec<u16> = (0..4).map(|i| g.terms().map(|(m, _)| m.0[i]).max().unwrap_or(0)).collect();
    let pows: Vec<Vec<Poly>> = (0..4)
        .map(|i| {
            let mut v = vec![Poly::constant(f, Elem::ONE)];
            for e in 1..=maxe[i] as usize {
                let next = v[e - 1].mul(&images[i]);
                v.push(next);
            }
            v
        })
        .collect();
    let mut acc = Poly::zero(f);
    for (m, c) in g.terms() {
        let mut t = Poly::constant(f, *c);
        for i in 0..4 {
            if m.0[i] > 0 {
                t = t.mul(&pows[i][m.0[i] as usize]);
            }
        }
        acc = acc.add(&t);
    }
    acc
}

/// A plane whose section of S lies entirely in Phi^S.
#[derive(Clone, Debug)]
pub struct PlaneComponent {
    pub plane: [Elem; 4],
    pub lines_inside: usize,
    /// Frobenius image on the tangent line at every point of the section.
    pub tangent_frobenius: bool,
}

fn plane_components(f: &Poly, h: &Poly, lines: &[geometry::Line], q: u64) -> Result<Vec<PlaneComponent>> {
    let field = f.field();
    let mut out = Vec::new();
    for plane in projective_vectors(field) {
        let ker = linalg::kernel(field, &[plane.to_vec()], 4);
        let basis: [[Elem; 4]; 3] = std::array::from_fn(|j| std::array::from_fn(|i| ker[j][i]));
        let g = restrict_to_plane(f, &basis);
        if g.is_zero() {
            continue;
        }
        let hh = restrict_to_plane(h, &basis);
        if !g.divides(&hh)? {
            continue;
        }
        let on_plane = |r: &[Elem; 4]| {
            r.iter().zip(&plane).fold(Elem::ZERO, |a, (x, y)| field.add(a, field.mul(*x, *y))).is_zero()
        };
        let lines_inside = lines.iter().filter(|l| l.rows().iter().all(on_plane)).count();
        let hg = g.build_h(q);
        out.push(PlaneComponent { plane, lines_inside, tangent_frobenius: g.divides(&hg)? });
    }
    Ok(out)
}

fn has_singular_point(f: &Poly, cfg: &Config) -> Result<bool> {
    let mut sys = vec![f.clone()];
    sys.extend(f.gradient().into_iter().filter(|g| !g.is_zero()));
    for k in 1..=2 {
        if !geometry::enumerate_points(&sys, f.field(), k, &cfg.points())?.is_empty() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Distinct points over `F_{q^k}` on a union of rational lines.
fn points_on_lines(lines: &[geometry::Line], base: &Gf, k: u32) -> Result<usize> {
    let big = base.extension(k)?;
    let emb = Embedding::new(base, &big)?;
    let mut seen = BTreeSet::new();
    for l in lines {
        let [a, b] = l.rows().map(|r| r.map(|c| emb.apply(c)));
        let mut params: Vec<(Elem, Elem)> = big.elements().map(|t| (Elem::ONE, t)).collect();
        params.push((Elem::ZERO, Elem::ONE));
        for (s, t) in params {
            let v: [Elem; 4] = std::array::from_fn(|i| big.add(big.mul(s, a[i]), big.mul(t, b[i])));
            seen.insert(geometry::ProjectivePoint::new(&big, v)?.coords().map(|c| c.index()));
        }
    }
    Ok(seen.len())
}

fn fmt_plane(field: &Gf, v: &[Elem; 4]) -> String {
    let parts: Vec<String> = v.iter().map(|&c| field.format_elem(c)).collect();
    format!("({})", parts.join(":"))
}

/// Analysis of one family member.
pub fn analyze_surface(f: &Poly, sc: &ScanConfig) -> Result<ScanRecord> {
    let field = f.field();
    let q = field.size();
    let d = sc.d;
    let key = surface_key(f, d);
    let mut assertions = Vec::new();
    let mut rec = ScanRecord {
        key,
        q,
        d,
        fc: false,
        phi_degree: 0,
        lines: Vec::new(),
        residual_degree: 0,
        points: BTreeMap::new(),
        flag: Flag::Consistent,
        assertions: Vec::new(),
    };
    if d == 2 {
        if !quadric_is_irreducible(f)? {
            if sc.irreducible_only {
                rec.assertions.push("reducible quadric: skipped".into());
                return Ok(rec);
            }
            assertions.push("reducible quadric: verdicts below are not theorem-backed".into());
        } else {
            assertions.push("irreducible (exhaustive factor search)".into());
        }
    } else {
        assertions.push("irreducibility assumed".into());
    }
    let smooth = !has_singular_point(f, &sc.cfg)?;
    if sc.smooth_only && !smooth {
        assertions.push("singular point over F_q or F_q^2: skipped".into());
        rec.assertions = assertions;
        return Ok(rec);
    }
    let h = f.build_h(q);
    let fc = !h.is_zero() && !f.divides(&h)?;
    rec.fc = fc;
    let phi_polys = if fc { vec![f.clone(), h.clone()] } else { vec![f.clone()] };
    for k in 1..=sc.cfg.ext_budget {
        let n = geometry::count_points(&phi_polys, field, k, &sc.cfg.points())?;
        rec.points.insert(k.to_string(), n);
    }
    if !fc {
        assertions.push("Frobenius non-classical: Phi^S is the whole surface".into());
        rec.assertions = assertions;
        return Ok(rec);
    }
    rec.phi_degree = frobsurface::phi_degree(&Surface { f: f.clone(), d, irreducible_asserted: true });
    let mut lines = Vec::new();
    for l in geometry::enumerate_lines(field)? {
        if geometry::line_contained(&phi_polys, &l)? {
            lines.push(l);
        }
    }
    rec.lines = lines.iter().map(|l| l.key()).collect();
    rec.residual_degree = rec.phi_degree as i64 - lines.len() as i64;
    if !lines.is_empty() {
        assertions.push("line multiplicities not computed; each line counted once".into());
    }

    if rec.residual_degree == 0 {
        for (k, &n) in &rec.points {
            let on_lines = points_on_lines(&lines, field, k.parse().unwrap())?;
            if on_lines != n {
                assertions.push(format!("ALERT: Phi^S has {n} points over F_q^{k} but its lines carry {on_lines}"));
            }
        }
    }

    let planes = plane_components(f, &h, &lines, q)?;
    let mut residual = rec.residual_degree;
    for pc in &planes {
        residual -= d as i64 - pc.lines_inside as i64;
        assertions.push(format!("plane section {} lies in Phi^S", fmt_plane(field, &pc.plane)));
        if smooth && d > 1 && !pc.tangent_frobenius {
            assertions.push(format!(
                "ALERT: degenerate component in {} on a smooth surface without Frobenius images on tangent lines",
                fmt_plane(field, &pc.plane)
            ));
        }
    }
    let residual = residual.max(0);
    // A quadric's singular locus is a rational linear space, so no rational
    // singular point means smooth. Over the closure S = P^1 x P^1 and
    // Phi^S = { P : Phi(P) on a line of S through P }.
    let smooth_quadric = d == 2 && smooth;
    rec.flag = if smooth_quadric && lines.len() as u64 == 2 * (q + 1) {
        assertions.push("smooth hyperbolic quadric: Phi^S is its 2(q+1) rational lines".into());
        Flag::Consistent
    } else if smooth_quadric && lines.is_empty() {
        assertions.push("smooth elliptic quadric: Phi^S is two conjugate curves of bidegree (1,q), (q,1), of degree q+1".into());
        Flag::Consistent
    } else if smooth_quadric {
        assertions.push(format!("ALERT: smooth quadric with {} rational lines in Phi^S", lines.len()));
        Flag::NeedsCAS
    } else if q < 3 {
        assertions.push("every non-degenerate curve has degree >= 3 > q".into());
        Flag::Consistent
    } else if residual <= 2 {
        assertions.push(format!("residual degree {residual} leaves no room for a non-degenerate component"));
        Flag::Consistent
    } else {
        Flag::NeedsCAS
    };
    rec.assertions = assertions;
    Ok(rec)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ScanSummary {
    pub total: u128,
    pub consistent: u64,
    pub needs_cas: u64,
    pub candidates: u64,
    pub fc: u64,
    pub alerts: Vec<String>,
    pub resumed_from: u128,
}

impl ScanSummary {
    fn absorb(&mut self, r: &ScanRecord) {
        match r.flag {
            Flag::Consistent => self.consistent += 1,
            Flag::NeedsCAS => self.needs_cas += 1,
            Flag::CandidateCounterexample => self.candidates += 1,
        }
        if r.fc {
            self.fc += 1;
        }
        for a in &r.assertions {
            if a.starts_with("ALERT") {
                self.alerts.push(format!("{}: {a}", r.key));
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Checkpoint {
    next: u128,
    bytes: u64,
}

fn checkpoint_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".ckpt");
    PathBuf::from(s)
}

/// One JSON object per line, fields in schema order.
pub fn record_line(r: &ScanRecord) -> Result<String> {
    Ok(serde_json::to_string(r)?)
}

pub fn export_records(records: &[ScanRecord], path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for r in records {
        writeln!(w, "{}", record_line(r)?)?;
    }
    w.flush()?;
    Ok(())
}

/// Runs the scan. With `out`, records are streamed to a JSONL file and a
/// checkpoint next to it allows resuming; the checkpoint is removed when the
/// scan completes. Without `out`, records are returned.
pub fn scan_conjecture(sc: &ScanConfig, out: Option<&Path>) -> Result<(ScanSummary, Vec<ScanRecord>)> {
    let total = family_size(sc.field.size(), sc.d);
    if total > sc.max_surfaces {
        return Err(Error::BudgetExceeded { work: total, budget: sc.max_surfaces });
    }
    let mut summary = ScanSummary { total, ..ScanSummary::default() };
    let mut kept = Vec::new();
    let mut start = 0u128;
    let mut writer = None;
    if let Some(path) = out {
        let ck = checkpoint_path(path);
        if let Ok(text) = fs::read_to_string(&ck) {
            let c: Checkpoint = serde_json::from_str(&text)?;
            let file = OpenOptions::new().write(true).open(path)?;
            file.set_len(c.bytes)?;
            start = c.next;
            summary.resumed_from = start;
            // recount the flags already on disk
            for line in fs::read_to_string(path)?.lines() {
                summary.absorb(&serde_json::from_str::<ScanRecord>(line)?);
            }
        } else {
            File::create(path)?;
        }
        writer = Some(BufWriter::new(OpenOptions::new().append(true).open(path)?));
    }
    let mut next = start;
    while next < total {
        let end = (next + CHECKPOINT_EVERY as u128).min(total);
        let idx: Vec<u128> = (next..end).collect();
        let recs = sc.cfg.exec.map(idx, |i| surface_at(&sc.field, sc.d, i).and_then(|f| analyze_surface(&f, sc)));
        for r in recs {
            let r = r?;
            summary.absorb(&r);
            match writer.as_mut() {
                Some(w) => writeln!(w, "{}", record_line(&r)?)?,
                None => kept.push(r),
            }
        }
        next = end;
        if let (Some(w), Some(path)) = (writer.as_mut(), out) {
            w.flush()?;
            let bytes = fs::metadata(path)?.len();
            fs::write(checkpoint_path(path), serde_json::to_string(&Checkpoint { next, bytes })?)?;
        }
    }
    if let Some(path) = out {
        let _ = fs::remove_file(checkpoint_path(path));
    }
    Ok((summary, kept))
}
