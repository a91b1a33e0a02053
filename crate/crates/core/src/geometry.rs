//! Points, surfaces, curves and F_q-lines of P^3.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::linalg;
use crate::algebra::{Elem, Embedding, Evaluator, Gf, Monomial, Poly};
use crate::algebra::univariate;
use crate::error::{Error, Result};
use crate::par::Exec;

/// Default cap on enumeration work (points or fibres visited).
pub const DEFAULT_POINT_BUDGET: u128 = 100_000_000;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ProjectivePoint {
    field: Gf,
    coords: [Elem; 4],
}

impl ProjectivePoint {
    /// Normalizes so that the first nonzero coordinate is 1.
    pub fn new(field: &Gf, coords: [Elem; 4]) -> Result<ProjectivePoint> {
        let Some(i) = coords.iter().position(|c| !c.is_zero()) else {
            return Err(Error::DimensionMismatch("the zero vector is not a projective point".into()));
        };
        let inv = field.inv(coords[i])?;
        let mut c = coords;
        for x in c.iter_mut() {
            *x = field.mul(*x, inv);
        }
        Ok(ProjectivePoint { field: field.clone(), coords: c })
    }

    pub fn field(&self) -> &Gf {
        &self.field
    }

    pub fn coords(&self) -> &[Elem; 4] {
        &self.coords
    }

    /// Index of the coordinate normalized to 1.
    pub fn patch(&self) -> usize {
        self.coords.iter().position(|c| !c.is_zero()).unwrap()
    }

    /// Coordinatewise `q`-th power.
    pub fn frobenius(&self, q: u64) -> ProjectivePoint {
        let f = &self.field;
        ProjectivePoint { field: f.clone(), coords: self.coords.map(|c| f.pow(c, q)) }
    }

    pub fn over(&self, target: &Gf) -> Result<ProjectivePoint> {
        if target == &self.field {
            return Ok(self.clone());
        }
        let e = Embedding::new(&self.field, target)?;
        Ok(ProjectivePoint { field: target.clone(), coords: self.coords.map(|c| e.apply(c)) })
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|&c| self.field.format_elem(c)).collect();
        write!(f, "({})", parts.join(":"))
    }
}

impl Serialize for ProjectivePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug)]
pub struct Surface {
    pub f: Poly,
    pub d: u32,
    pub irreducible_asserted: bool,
}

impl Surface {
    pub fn new(f: Poly, irreducible_asserted: bool) -> Result<Surface> {
        if !f.is_homogeneous() {
            return Err(Error::BadDegree("surface equation is not homogeneous".into()));
        }
        match f.degree() {
            Some(d) if d >= 1 => Ok(Surface { f, d, irreducible_asserted }),
            _ => Err(Error::BadDegree("surface equation must have degree at least 1".into())),
        }
    }

    pub fn field(&self) -> &Gf {
        self.f.field()
    }

    pub fn q(&self) -> u64 {
        self.f.field().size()
    }
}

#[derive(Clone, Debug)]
pub struct CurveSpec {
    pub polys: Vec<Poly>,
    pub delta: Option<u32>,
    pub irreducible_asserted: bool,
    pub complete_asserted: bool,
}

impl CurveSpec {
    pub fn new(polys: Vec<Poly>) -> Result<CurveSpec> {
        let Some(first) = polys.first() else {
            return Err(Error::DimensionMismatch("a curve needs at least one equation".into()));
        };
        let field = first.field().clone();
        for g in &polys {
            if g.field() != &field {
                return Err(Error::FieldMismatch(format!("{} vs {}", g.field(), field)));
            }
            if !g.is_homogeneous() || g.is_zero() {
                return Err(Error::BadDegree("curve equations must be nonzero and homogeneous".into()));
            }
        }
        Ok(CurveSpec { polys, delta: None, irreducible_asserted: false, complete_asserted: false })
    }

    pub fn with_delta(mut self, delta: u32) -> Self {
        self.delta = Some(delta);
        self
    }

    pub fn irreducible(mut self) -> Self {
        self.irreducible_asserted = true;
        self
    }

    pub fn complete(mut self) -> Self {
        self.complete_asserted = true;
        self
    }

    pub fn field(&self) -> &Gf {
        self.polys[0].field()
    }

    pub fn max_degree(&self) -> u32 {
        self.polys.iter().filter_map(|g| g.degree()).max().unwrap_or(0)
    }

    /// Asserted degree, or the plane-section estimate.
    pub fn degree(&self, seed: u64) -> Result<u32> {
        match self.delta {
            Some(d) => Ok(d),
            None => estimate_degree(self, seed),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PointConfig {
    pub budget: u128,
    pub exec: Exec,
}

impl Default for PointConfig {
    fn default() -> Self {
        PointConfig { budget: DEFAULT_POINT_BUDGET, exec: Exec::default() }
    }
}

/// Number of points of P^3 over a field of size `qk`.
pub fn p3_size(qk: u64) -> u128 {
    let q = qk as u128;
    q * q * q + q * q + q + 1
}

/// One polynomial split by powers of X3, ready for fibre evaluation.
struct Fibred {
    coeffs: Vec<Evaluator>,
}

impl Fibred {
    fn new(g: &Poly) -> Fibred {
        let f = g.field();
        let top = g.terms().map(|(m, _)| m.0[3]).max().unwrap_or(0) as usize;
        let mut parts = vec![Poly::zero(f); top + 1];
        for (m, c) in g.terms() {
            let mut m2 = *m;
            m2.0[3] = 0;
            parts[m.0[3] as usize].add_term(m2, *c);
        }
        Fibred { coeffs: parts.iter().map(Evaluator::new).collect() }
    }

    fn univariate(&self, prefix: &[Elem; 3]) -> Vec<Elem> {
        let pt = [prefix[0], prefix[1], prefix[2], Elem::ZERO];
        let mut u: Vec<Elem> = self.coeffs.iter().map(|e| e.eval(&pt)).collect();
        univariate::trim(&mut u);
        u
    }
}

/// Values of the last coordinate completing `prefix` to a common zero.
fn fibre(field: &Gf, polys: &[Fibred], prefix: &[Elem; 3], brute: bool) -> Vec<Elem> {
    let unis: Vec<Vec<Elem>> = polys.iter().map(|p| p.univariate(prefix)).collect();
    let Some(lead) = unis.iter().find(|u| !u.is_empty()) else {
        return field.elements().collect();
    };
    let cands: Vec<Elem> = if brute {
        field.elements().filter(|&x| univariate::eval(field, lead, x).is_zero()).collect()
    } else {
        univariate::roots(field, lead)
    };
    cands
        .into_iter()
        .filter(|&x| unis.iter().all(|u| univariate::eval(field, u, x).is_zero()))
        .collect()
}

/// All points of P^3(F_{q^k}) on which every polynomial vanishes, in canonical
/// order (by patch, then by coordinate encodings).
pub fn enumerate_points(polys: &[Poly], base: &Gf, k: u32, cfg: &PointConfig) -> Result<Vec<ProjectivePoint>> {
    let field = base.extension(k)?;
    let mut lifted = Vec::with_capacity(polys.len());
    for g in polys {
        if !g.field().is_subfield_of(&field) {
            return Err(Error::FieldMismatch(format!("{} vs {}", g.field(), field)));
        }
        lifted.push(g.over(&field)?);
    }
    let qk = field.size();
    let brute = qk <= 16 || lifted.is_empty();
    let lines = (qk as u128) * (qk as u128) + qk as u128 + 1;
    let work = if brute { p3_size(qk) } else { lines * (1 + lifted.iter().filter_map(|g| g.degree()).max().unwrap_or(1) as u128) };
    if work > cfg.budget {
        return Err(Error::BudgetExceeded { work, budget: cfg.budget });
    }
    let fib: Vec<Fibred> = lifted.iter().map(Fibred::new).collect();
    let mk = |c: [Elem; 4]| ProjectivePoint { field: field.clone(), coords: c };

    let xs: Vec<Elem> = field.elements().collect();
    let chunks: Vec<Vec<ProjectivePoint>> = cfg.exec.map(xs.clone(), |x1| {
        let mut out = Vec::new();
        for x2 in field.elements() {
            for x3 in fibre(&field, &fib, &[Elem::ONE, x1, x2], brute) {
                out.push(mk([Elem::ONE, x1, x2, x3]));
            }
        }
        out
    });
    let mut pts: Vec<ProjectivePoint> = chunks.into_iter().flatten().collect();
    for x2 in field.elements() {
        for x3 in fibre(&field, &fib, &[Elem::ZERO, Elem::ONE, x2], brute) {
            pts.push(mk([Elem::ZERO, Elem::ONE, x2, x3]));
        }
    }
    for x3 in fibre(&field, &fib, &[Elem::ZERO, Elem::ZERO, Elem::ONE], brute) {
        pts.push(mk([Elem::ZERO, Elem::ZERO, Elem::ONE, x3]));
    }
    let last = [Elem::ZERO, Elem::ZERO, Elem::ZERO, Elem::ONE];
    if lifted.iter().all(|g| g.evaluate(&last).is_zero()) {
        pts.push(mk(last));
    }
    if lifted.is_empty() {
        assert_eq!(pts.len() as u128, p3_size(qk), "P^3 point count");
    }
    Ok(pts)
}

/// Points of the affine patch X0 = 1 with X1 = `x1`, over `field`.
pub fn points_on_slice(polys: &[Poly], field: &Gf, x1: Elem) -> Result<Vec<ProjectivePoint>> {
    let lifted = lift_all(polys, field)?;
    let fib: Vec<Fibred> = lifted.iter().map(Fibred::new).collect();
    let brute = field.size() <= 16;
    let mut out = Vec::new();
    for x2 in field.elements() {
        for x3 in fibre(field, &fib, &[Elem::ONE, x1, x2], brute) {
            out.push(ProjectivePoint { field: field.clone(), coords: [Elem::ONE, x1, x2, x3] });
        }
    }
    Ok(out)
}

pub fn count_points(polys: &[Poly], base: &Gf, k: u32, cfg: &PointConfig) -> Result<usize> {
    Ok(enumerate_points(polys, base, k, cfg)?.len())
}

fn lift_all(polys: &[Poly], field: &Gf) -> Result<Vec<Poly>> {
    polys.iter().map(|g| g.over(field)).collect()
}

/// Rank of the Jacobian of `polys` at `pt` (all over `pt`'s field).
pub fn jacobian_rank(polys: &[Poly], pt: &ProjectivePoint) -> Result<usize> {
    let f = pt.field();
    let lifted = lift_all(polys, f)?;
    let rows: Vec<Vec<Elem>> = lifted
        .iter()
        .map(|g| (0..4).map(|i| g.partial(i).evaluate(pt.coords())).collect())
        .collect();
    Ok(linalg::rank(f, &rows))
}

pub fn vanishes_at(polys: &[Poly], pt: &ProjectivePoint) -> Result<bool> {
    let lifted = lift_all(polys, pt.field())?;
    Ok(lifted.iter().all(|g| g.evaluate(pt.coords()).is_zero()))
}

/// Jacobian criterion: rank equals the expected codimension.
pub fn is_smooth_point(polys: &[Poly], pt: &ProjectivePoint, expected_codim: usize) -> Result<bool> {
    if !vanishes_at(polys, pt)? {
        return Err(Error::PointNotOnVariety(pt.to_string()));
    }
    Ok(jacobian_rank(polys, pt)? == expected_codim)
}

/// Coefficients of T_P S, normalized with first nonzero entry 1.
pub fn tangent_plane(s: &Surface, pt: &ProjectivePoint) -> Result<[Elem; 4]> {
    let f = pt.field();
    let g = s.f.over(f)?;
    if !g.evaluate(pt.coords()).is_zero() {
        return Err(Error::PointNotOnVariety(pt.to_string()));
    }
    let grad: [Elem; 4] = std::array::from_fn(|i| g.partial(i).evaluate(pt.coords()));
    let Some(i) = grad.iter().position(|c| !c.is_zero()) else {
        return Err(Error::SingularPoint(pt.to_string()));
    };
    let inv = f.inv(grad[i])?;
    Ok(grad.map(|c| f.mul(c, inv)))
}

/// An F_q-line, stored as the reduced row echelon form of two spanning points.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Line {
    field: Gf,
    rows: [[Elem; 4]; 2],
}

impl Line {
    pub fn from_rows(field: &Gf, a: [Elem; 4], b: [Elem; 4]) -> Result<Line> {
        let mut m = vec![a.to_vec(), b.to_vec()];
        let piv = linalg::rref(field, &mut m);
        if piv.len() != 2 {
            return Err(Error::DimensionMismatch("points do not span a line".into()));
        }
        let r0: [Elem; 4] = m[0].clone().try_into().unwrap();
        let r1: [Elem; 4] = m[1].clone().try_into().unwrap();
        Ok(Line { field: field.clone(), rows: [r0, r1] })
    }

    pub fn through(a: &ProjectivePoint, b: &ProjectivePoint) -> Result<Line> {
        Line::from_rows(a.field(), *a.coords(), *b.over(a.field())?.coords())
    }

    pub fn field(&self) -> &Gf {
        &self.field
    }

    pub fn rows(&self) -> &[[Elem; 4]; 2] {
        &self.rows
    }

    pub fn key(&self) -> String {
        let f = &self.field;
        let fmt_row = |r: &[Elem; 4]| {
            let parts: Vec<String> = r.iter().map(|&c| f.format_elem(c)).collect();
            format!("({})", parts.join(":"))
        };
        format!("{}|{}", fmt_row(&self.rows[0]), fmt_row(&self.rows[1]))
    }

    /// Plucker coordinates p01, p02, p03, p12, p13, p23, first nonzero 1.
    pub fn plucker(&self) -> [Elem; 6] {
        let f = &self.field;
        let (a, b) = (&self.rows[0], &self.rows[1]);
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let mut p = pairs.map(|(i, j)| f.sub(f.mul(a[i], b[j]), f.mul(a[j], b[i])));
        if let Some(i) = p.iter().position(|c| !c.is_zero()) {
            let inv = f.inv(p[i]).unwrap();
            p = p.map(|c| f.mul(c, inv));
        }
        p
    }

    /// The `q + 1` points of the line over its own field.
    pub fn points(&self) -> Vec<ProjectivePoint> {
        let f = &self.field;
        let (a, b) = (&self.rows[0], &self.rows[1]);
        let mut out = vec![ProjectivePoint::new(f, *b).unwrap()];
        for s in f.elements() {
            let c: [Elem; 4] = std::array::from_fn(|i| f.add(a[i], f.mul(s, b[i])));
            out.push(ProjectivePoint::new(f, c).unwrap());
        }
        out
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

impl Serialize for Line {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.key())
    }
}

/// Every F_q-line of P^3 once, ordered by pivot columns then entries.
pub fn enumerate_lines(field: &Gf) -> Result<Vec<Line>> {
    let q = field.size();
    if q > 16 {
        let work = (q as u128 * q as u128 + 1) * (q as u128 * q as u128 + q as u128 + 1);
        return Err(Error::BudgetExceeded { work, budget: 17 * 17 * 307 });
    }
    let mut out = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            // free entries: row0 at columns > i except j, row1 at columns > j
            let free0: Vec<usize> = (i + 1..4).filter(|&c| c != j).collect();
            let free1: Vec<usize> = (j + 1..4).collect();
            let nfree = free0.len() + free1.len();
            let total = q.pow(nfree as u32);
            for idx in 0..total {
                let mut a = [Elem::ZERO; 4];
                let mut b = [Elem::ZERO; 4];
                a[i] = Elem::ONE;
                b[j] = Elem::ONE;
                let mut x = idx;
                let mut digits = Vec::with_capacity(nfree);
                for _ in 0..nfree {
                    digits.push(Elem((x % q) as u32));
                    x /= q;
                }
                digits.reverse();
                let mut it = digits.into_iter();
                for &c in &free0 {
                    a[c] = it.next().unwrap();
                }
                for &c in &free1 {
                    b[c] = it.next().unwrap();
                }
                out.push(Line { field: field.clone(), rows: [a, b] });
            }
        }
    }
    Ok(out)
}

/// Coefficients of `g(s*A + t*B)` as a binary form, `s^(D-k) t^k` at index k.
pub fn restrict_to_line(g: &Poly, a: &[Elem; 4], b: &[Elem; 4]) -> Vec<Elem> {
    let f = g.field();
    let d = g.degree().unwrap_or(0) as usize;
    let maxe: [usize; 4] = std::array::from_fn(|i| g.terms().map(|(m, _)| m.0[i] as usize).max().unwrap_or(0));
    // powers of the linear forms a_i + b_i t
    let pows: Vec<Vec<Vec<Elem>>> = (0..4)
        .map(|i| {
            let mut v = vec![vec![Elem::ONE]];
            for e in 1..=maxe[i] {
                let next = univariate::mul(f, &v[e - 1], &[a[i], b[i]]);
                v.push(next);
            }
            v
        })
        .collect();
    let mut acc = vec![Elem::ZERO; d + 1];
    for (m, c) in g.terms() {
        let mut t = vec![*c];
        for i in 0..4 {
            if m.0[i] > 0 {
                t = univariate::mul(f, &t, &pows[i][m.0[i] as usize]);
            }
        }
        for (k, v) in t.into_iter().enumerate() {
            acc[k] = f.add(acc[k], v);
        }
    }
    acc
}

/// Whether every polynomial vanishes identically on the line.
pub fn line_contained(polys: &[Poly], line: &Line) -> Result<bool> {
    let [a, b] = *line.rows();
    for g in polys {
        let (g, a, b) = if g.field() == line.field() {
            (g.clone(), a, b)
        } else if line.field().is_subfield_of(g.field()) {
            let e = Embedding::new(line.field(), g.field())?;
            (g.clone(), a.map(|c| e.apply(c)), b.map(|c| e.apply(c)))
        } else {
            (g.over(line.field())?, a, b)
        };
        if restrict_to_line(&g, &a, &b).iter().any(|c| !c.is_zero()) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn monomials3(d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for a in (0..=d).rev() {
        for b in (0..=d - a).rev() {
            out.push(Monomial([a as u16, b as u16, (d - a - b) as u16, 0]));
        }
    }
    out
}

/// Hilbert function of the ideal generated by `gens` (in X0..X2) at degree `m`.
fn hilbert3(f: &Gf, gens: &[Poly], m: u32) -> Result<usize> {
    let cols = monomials3(m);
    if cols.len() > 2000 {
        return Err(Error::BudgetExceeded { work: cols.len() as u128, budget: 2000 });
    }
    let index: std::collections::HashMap<Monomial, usize> = cols.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut rows = Vec::new();
    for g in gens {
        let Some(dg) = g.degree() else { continue };
        if dg > m {
            continue;
        }
        for mu in monomials3(m - dg) {
            let mut row = vec![Elem::ZERO; cols.len()];
            for (mm, c) in g.terms() {
                row[index[&mm.mul(&mu)]] = *c;
            }
            rows.push(row);
        }
    }
    let r = if rows.is_empty() { 0 } else { linalg::rank(f, &rows) };
    Ok(cols.len() - r)
}

/// Substitute `X3 = c0 X0 + c1 X1 + c2 X2`.
fn restrict_to_plane(g: &Poly, c: &[Elem; 3]) -> Poly {
    let f = g.field();
    let ell = Poly::linear(f, &[c[0], c[1], c[2], Elem::ZERO]);
    let maxe = g.terms().map(|(m, _)| m.0[3]).max().unwrap_or(0);
    let mut pows = vec![Poly::constant(f, Elem::ONE)];
    for e in 1..=maxe as usize {
        let next = pows[e - 1].mul(&ell);
        pows.push(next);
    }
    let mut out = Poly::zero(f);
    for (m, coef) in g.terms() {
        let mut m2 = *m;
        m2.0[3] = 0;
        out = out.add(&pows[m.0[3] as usize].mul_monomial(&m2, *coef));
    }
    out
}

/// Degree of the curve cut out by `C.polys`, read off as the stable value of
/// the Hilbert function of a random plane section. A complete intersection of
/// two polynomials with `complete_asserted` returns the product of degrees.
pub fn estimate_degree(c: &CurveSpec, seed: u64) -> Result<u32> {
    if c.polys.len() == 2 && c.complete_asserted {
        return Ok(c.polys[0].degree().unwrap() * c.polys[1].degree().unwrap());
    }
    let base = c.field();
    let prod: u64 = c.polys.iter().map(|g| g.degree().unwrap() as u64).product::<u64>().max(1);
    let mut k = 1;
    while base.size().pow(k) <= 2 * prod && base.size().pow(k + 1) <= 1 << 20 {
        k += 1;
    }
    let field = base.extension(k)?;
    let lifted = lift_all(&c.polys, &field)?;
    let maxdeg = c.max_degree();
    let sumdeg: u32 = c.polys.iter().map(|g| g.degree().unwrap()).sum();
    let m_max = sumdeg + maxdeg + 12;
    let mut best: Option<u32> = None;
    let mut saw_empty = false;
    for trial in 0..8u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial));
        let coef: [Elem; 3] = std::array::from_fn(|_| Elem(rng.gen_range(0..field.size()) as u32));
        let gens: Vec<Poly> = lifted.iter().map(|g| restrict_to_plane(g, &coef)).collect();
        let mut hist: Vec<usize> = Vec::new();
        let mut result = None;
        for m in 0..=m_max {
            let hf = hilbert3(&field, &gens, m)?;
            hist.push(hf);
            let n = hist.len();
            if m > maxdeg && n >= 4 && hist[n - 4..].iter().all(|&v| v == hf) {
                result = Some(hf);
                break;
            }
        }
        match result {
            Some(0) => saw_empty = true,
            Some(v) => best = Some(best.map_or(v as u32, |b: u32| b.max(v as u32))),
            None => {}
        }
    }
    match best {
        Some(b) => Ok(b),
        None if saw_empty => Err(Error::DimensionMismatch("plane sections are empty: not a curve".into())),
        None => Err(Error::DimensionMismatch("plane sections keep growing: not a curve".into())),
    }
}
