//! Truncated power series and local parametrizations of space curves.

use std::fmt;

use serde::Serialize;

use crate::algebra::linalg;
use crate::algebra::{Elem, Gf, Poly};
use crate::geometry::{self, CurveSpec, ProjectivePoint};
use crate::error::{Error, Result};

/// `sum c_m t^m` known modulo `t^T`, where `T = coeffs.len()`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Series {
    pub coeffs: Vec<Elem>,
}

impl Series {
    pub fn zero(t: usize) -> Series {
        Series { coeffs: vec![Elem::ZERO; t] }
    }

    pub fn constant(c: Elem, t: usize) -> Series {
        let mut s = Series::zero(t);
        if t > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    /// `c + t`.
    pub fn parameter(c: Elem, t: usize) -> Series {
        let mut s = Series::constant(c, t);
        if t > 1 {
            s.coeffs[1] = Elem::ONE;
        }
        s
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn truncate(&self, t: usize) -> Series {
        Series { coeffs: self.coeffs[..t.min(self.coeffs.len())].to_vec() }
    }

    pub fn coeff(&self, m: usize) -> Elem {
        self.coeffs.get(m).copied().unwrap_or(Elem::ZERO)
    }

    /// Order of vanishing, or `None` if zero to full precision.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    pub fn add(&self, f: &Gf, o: &Series) -> Series {
        let t = self.precision().min(o.precision());
        Series { coeffs: (0..t).map(|i| f.add(self.coeffs[i], o.coeffs[i])).collect() }
    }

    pub fn sub(&self, f: &Gf, o: &Series) -> Series {
        let t = self.precision().min(o.precision());
        Series { coeffs: (0..t).map(|i| f.sub(self.coeffs[i], o.coeffs[i])).collect() }
    }

    pub fn scale(&self, f: &Gf, c: Elem) -> Series {
        Series { coeffs: self.coeffs.iter().map(|&x| f.mul(x, c)).collect() }
    }

    pub fn mul(&self, f: &Gf, o: &Series) -> Series {
        let t = self.precision().min(o.precision());
        let mut r = vec![Elem::ZERO; t];
        for (i, &a) in self.coeffs.iter().take(t).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in o.coeffs.iter().take(t - i).enumerate() {
                if !b.is_zero() {
                    r[i + j] = f.add(r[i + j], f.mul(a, b));
                }
            }
        }
        Series { coeffs: r }
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn inverse(&self, f: &Gf) -> Result<Series> {
        let t = self.precision();
        let c0 = self.coeff(0);
        let inv0 = f.inv(c0)?;
        let mut r = vec![Elem::ZERO; t];
        if t == 0 {
            return Ok(Series { coeffs: r });
        }
        r[0] = inv0;
        for m in 1..t {
            let mut s = Elem::ZERO;
            for k in 1..=m {
                s = f.add(s, f.mul(self.coeffs[k], r[m - k]));
            }
            r[m] = f.neg(f.mul(s, inv0));
        }
        Ok(Series { coeffs: r })
    }

    /// Hasse derivative: coefficient m of the result is `C(m+i, i) c_{m+i}`.
    pub fn hasse(&self, f: &Gf, i: usize) -> Series {
        let p = f.characteristic() as u64;
        let t = self.precision();
        if i >= t {
            return Series::zero(0);
        }
        Series {
            coeffs: (0..t - i)
                .map(|m| {
                    let b = binom_mod_p((m + i) as u64, i as u64, p);
                    f.mul_int(self.coeffs[m + i], b as i64)
                })
                .collect(),
        }
    }

    /// `(sum a_k t^k)^q = sum a_k^q t^(kq)`, at the same precision.
    pub fn frobenius(&self, f: &Gf, q: u64) -> Series {
        let t = self.precision();
        let mut r = vec![Elem::ZERO; t];
        for (k, &a) in self.coeffs.iter().enumerate() {
            let idx = k as u128 * q as u128;
            if idx >= t as u128 {
                break;
            }
            r[idx as usize] = f.pow(a, q);
        }
        Series { coeffs: r }
    }
}

/// Binomial coefficient modulo a prime via Lucas' theorem.
pub fn binom_mod_p(n: u64, k: u64, p: u64) -> u64 {
    if k > n {
        return 0;
    }
    let (mut n, mut k) = (n, k);
    let mut r = 1u64;
    while k > 0 || n > 0 {
        let (a, b) = (n % p, k % p);
        if b > a {
            return 0;
        }
        r = r * small_binom(a, b, p) % p;
        n /= p;
        k /= p;
    }
    r
}

fn small_binom(n: u64, k: u64, p: u64) -> u64 {
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num = num * ((n - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    // den is a unit since k < p
    let mut inv = 1u64;
    let mut b = den;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            inv = inv * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    num * inv % p
}

/// Compose a polynomial with four series.
pub fn compose(f: &Gf, g: &Poly, xs: &[Series; 4]) -> Series {
    let t = xs.iter().map(|s| s.precision()).min().unwrap_or(0);
    let maxe: [usize; 4] = std::array::from_fn(|i| g.terms().map(|(m, _)| m.0[i] as usize).max().unwrap_or(0));
    let pows: Vec<Vec<Series>> = (0..4)
        .map(|i| {
            let mut v = vec![Series::constant(Elem::ONE, t)];
            for e in 1..=maxe[i] {
                let next = v[e - 1].mul(f, &xs[i]);
                v.push(next);
            }
            v
        })
        .collect();
    let mut acc = Series::zero(t);
    for (m, c) in g.terms() {
        let mut term = Series::constant(*c, t);
        for i in 0..4 {
            if m.0[i] > 0 {
                term = term.mul(f, &pows[i][m.0[i] as usize]);
            }
        }
        acc = acc.add(f, &term);
    }
    acc
}

/// Which transverse affine coordinate serves as the local parameter.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct ParamChoice(pub usize);

#[derive(Clone, Debug)]
pub struct LocalChart {
    pub point: ProjectivePoint,
    pub patch: usize,
    /// Coordinate `X_param / X_patch` minus its value at the point is `t`.
    pub param: usize,
    /// Size of the base field the Frobenius map refers to.
    pub q: u64,
    pub series: [Series; 4],
    /// `x_i(t)^q`, in the original coordinates.
    pub twisted: [Series; 4],
}

impl LocalChart {
    pub fn field(&self) -> &Gf {
        self.point.field()
    }

    pub fn truncation(&self) -> usize {
        self.series[0].precision()
    }
}

/// Default truncation `2 (q + delta (d + q - 1))`.
pub fn default_truncation(q: u64, delta: u32, d: u32) -> usize {
    (2 * (q + delta as u64 * (d as u64 + q - 1))) as usize
}

/// Power-series chart of the curve at a smooth point, solved by Newton
/// iteration with precision doubling.
pub fn parametrize_curve(c: &CurveSpec, pt: &ProjectivePoint, t: usize, choice: ParamChoice) -> Result<LocalChart> {
    if t < 2 {
        return Err(Error::TruncationTooSmall(t));
    }
    let f = pt.field().clone();
    let q = c.field().size();
    let polys: Vec<Poly> = c.polys.iter().map(|g| g.over(&f)).collect::<Result<_>>()?;
    let x = *pt.coords();
    if polys.iter().any(|g| !g.evaluate(&x).is_zero()) {
        return Err(Error::PointNotOnVariety(pt.to_string()));
    }
    let patch = pt.patch();
    let aff: Vec<usize> = (0..4).filter(|&i| i != patch).collect();
    let grads: Vec<[Poly; 4]> = polys.iter().map(|g| g.gradient()).collect();
    let jac: Vec<Vec<Elem>> = grads.iter().map(|gr| aff.iter().map(|&i| gr[i].evaluate(&x)).collect()).collect();
    if linalg::rank(&f, &jac) != 2 {
        return Err(Error::SingularPoint(pt.to_string()));
    }
    let tangent = linalg::kernel(&f, &jac, 3);
    let v = &tangent[0];
    let cands: Vec<usize> = (0..3).filter(|&j| !v[j].is_zero()).collect();
    let Some(&pj) = cands.get(choice.0) else {
        return Err(Error::NoTransverseCoordinate(pt.to_string()));
    };
    let param = aff[pj];
    let others: Vec<usize> = (0..3).filter(|&j| j != pj).map(|j| aff[j]).collect();
    // two equations with invertible Jacobian in the dependent coordinates
    let mut pair = None;
    'outer: for a in 0..polys.len() {
        for b in a + 1..polys.len() {
            let m = [
                [grads[a][others[0]].evaluate(&x), grads[a][others[1]].evaluate(&x)],
                [grads[b][others[0]].evaluate(&x), grads[b][others[1]].evaluate(&x)],
            ];
            let det = f.sub(f.mul(m[0][0], m[1][1]), f.mul(m[0][1], m[1][0]));
            if !det.is_zero() {
                pair = Some((a, b));
                break 'outer;
            }
        }
    }
    let (ia, ib) = pair.ok_or_else(|| Error::InconsistentSystem(pt.to_string()))?;

    let build = |y: &Series, z: &Series, prec: usize| -> [Series; 4] {
        std::array::from_fn(|i| {
            if i == patch {
                Series::constant(Elem::ONE, prec)
            } else if i == param {
                Series::parameter(x[i], prec)
            } else if i == others[0] {
                y.truncate(prec)
            } else {
                z.truncate(prec)
            }
        })
    };
    let mut y = Series::constant(x[others[0]], 1);
    let mut z = Series::constant(x[others[1]], 1);
    let mut prec = 1usize;
    while prec < t {
        let np = (2 * prec).min(t);
        let mut yy = y.coeffs.clone();
        yy.resize(np, Elem::ZERO);
        let mut zz = z.coeffs.clone();
        zz.resize(np, Elem::ZERO);
        y = Series { coeffs: yy };
        z = Series { coeffs: zz };
        let xs = build(&y, &z, np);
        let ga = compose(&f, &polys[ia], &xs);
        let gb = compose(&f, &polys[ib], &xs);
        let j00 = compose(&f, &grads[ia][others[0]], &xs);
        let j01 = compose(&f, &grads[ia][others[1]], &xs);
        let j10 = compose(&f, &grads[ib][others[0]], &xs);
        let j11 = compose(&f, &grads[ib][others[1]], &xs);
        let det = j00.mul(&f, &j11).sub(&f, &j01.mul(&f, &j10));
        let dinv = det.inverse(&f)?;
        // [dy, dz] = J^{-1} [ga, gb]
        let dy = j11.mul(&f, &ga).sub(&f, &j01.mul(&f, &gb)).mul(&f, &dinv);
        let dz = j00.mul(&f, &gb).sub(&f, &j10.mul(&f, &ga)).mul(&f, &dinv);
        y = y.sub(&f, &dy);
        z = z.sub(&f, &dz);
        prec = np;
    }
    let series = build(&y, &z, t);
    for g in &polys {
        if !compose(&f, g, &series).is_zero() {
            return Err(Error::InconsistentSystem(pt.to_string()));
        }
    }
    let twisted = std::array::from_fn(|i| series[i].frobenius(&f, q));
    Ok(LocalChart { point: pt.clone(), patch, param, q, series, twisted })
}

/// `g` composed with the chart.
pub fn evaluate_on_chart(g: &Poly, chart: &LocalChart) -> Result<Series> {
    if !g.field().is_subfield_of(chart.field()) {
        return Err(Error::FieldMismatch(format!("{} vs {}", g.field(), chart.field())));
    }
    let gg = g.over(chart.field())?;
    Ok(compose(chart.field(), &gg, &chart.series))
}

/// Order of vanishing, with `AtLeast` when the truncated series is zero.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Multiplicity {
    Exact(usize),
    AtLeast(usize),
}

impl Multiplicity {
    pub fn lower_bound(&self) -> usize {
        match *self {
            Multiplicity::Exact(n) | Multiplicity::AtLeast(n) => n,
        }
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Exact(n) => write!(f, "{n}"),
            Multiplicity::AtLeast(n) => write!(f, ">={n}"),
        }
    }
}

impl Serialize for Multiplicity {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub fn series_multiplicity(s: &Series) -> Multiplicity {
    match s.valuation() {
        Some(v) => Multiplicity::Exact(v),
        None => Multiplicity::AtLeast(s.precision()),
    }
}

/// Local intersection number of the curve with `g = 0` at a smooth point.
pub fn intersection_multiplicity(
    c: &CurveSpec,
    g: &Poly,
    pt: &ProjectivePoint,
    t: usize,
    choice: ParamChoice,
) -> Result<Multiplicity> {
    if !geometry::is_smooth_point(&c.polys, pt, 2)? {
        return Err(Error::SingularPoint(pt.to_string()));
    }
    let chart = parametrize_curve(c, pt, t, choice)?;
    Ok(series_multiplicity(&evaluate_on_chart(g, &chart)?))
}

/// The plane spanned by `x(0)`, `D^(j1) x(0)`, `D^(j2) x(0)`.
pub fn osculating_plane(chart: &LocalChart, j1: usize, j2: usize) -> Result<[Elem; 4]> {
    let f = chart.field();
    let rows: Vec<Vec<Elem>> = [0, j1, j2].iter().map(|&j| (0..4).map(|i| chart.series[i].coeff(j)).collect()).collect();
    if linalg::rank(f, &rows) != 3 {
        return Err(Error::RankDeficient(format!("orders ({j1}, {j2}) at {}", chart.point)));
    }
    let k = linalg::kernel(f, &rows, 4);
    let v = &k[0];
    let i = v.iter().position(|c| !c.is_zero()).unwrap();
    let inv = f.inv(v[i])?;
    Ok(std::array::from_fn(|j| f.mul(v[j], inv)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_field, parse_poly};
    use proptest::prelude::*;

    fn twisted_cubic(p: u64) -> CurveSpec {
        let f = make_field(p, 1).unwrap();
        CurveSpec::new(
            ["X0*X2 - X1^2", "X1*X3 - X2^2", "X0*X3 - X1*X2"].iter().map(|s| parse_poly(s, &f).unwrap()).collect(),
        )
        .unwrap()
    }

    fn mono(k: usize, t: usize) -> Series {
        let mut s = Series::zero(t);
        s.coeffs[k] = Elem::ONE;
        s
    }

    #[test]
    fn hasse_examples() {
        let f = make_field(5, 1).unwrap();
        let d = mono(3, 10).hasse(&f, 2);
        assert_eq!(d.coeff(1), Elem(3));
        assert_eq!(d.precision(), 8);
        let g = make_field(2, 1).unwrap();
        assert!(mono(2, 10).hasse(&g, 1).is_zero());
    }

    #[test]
    fn freshman() {
        let f = make_field(2, 1).unwrap();
        let s = Series { coeffs: vec![Elem::ONE, Elem::ONE, Elem::ZERO, Elem::ZERO] };
        assert_eq!(s.frobenius(&f, 2).coeffs, vec![Elem::ONE, Elem::ZERO, Elem::ONE, Elem::ZERO]);
        let g = make_field(5, 2).unwrap();
        let c = Series::constant(Elem(7), 5);
        assert_eq!(c.frobenius(&g, 5).coeff(0), g.pow(Elem(7), 5));
    }

    #[test]
    fn twisted_cubic_chart() {
        let c = twisted_cubic(5);
        let f = c.field().clone();
        let p = ProjectivePoint::new(&f, [Elem::ONE, Elem::ZERO, Elem::ZERO, Elem::ZERO]).unwrap();
        let ch = parametrize_curve(&c, &p, 12, ParamChoice(0)).unwrap();
        assert_eq!(ch.param, 1);
        for i in 0..4 {
            let expect = mono(i, 12);
            assert_eq!(ch.series[i], expect, "x{i}");
        }
        let x3 = parse_poly("X3", &f).unwrap();
        assert_eq!(evaluate_on_chart(&x3, &ch).unwrap().valuation(), Some(3));
        assert_eq!(osculating_plane(&ch, 1, 2).unwrap(), [Elem::ZERO, Elem::ZERO, Elem::ZERO, Elem::ONE]);
    }

    #[test]
    fn line_chart_and_rank_deficiency() {
        let f = make_field(3, 1).unwrap();
        let c = CurveSpec::new(vec![parse_poly("X2", &f).unwrap(), parse_poly("X3", &f).unwrap()]).unwrap();
        let p = ProjectivePoint::new(&f, [Elem::ONE, Elem(2), Elem::ZERO, Elem::ZERO]).unwrap();
        let ch = parametrize_curve(&c, &p, 8, ParamChoice(0)).unwrap();
        assert_eq!(ch.series[1].coeffs[..2], [Elem(2), Elem::ONE]);
        assert!(ch.series[1].coeffs[2..].iter().all(|c| c.is_zero()));
        assert!(matches!(osculating_plane(&ch, 1, 2), Err(Error::RankDeficient(_))));
    }

    #[test]
    fn twist_has_no_low_derivatives() {
        let c = twisted_cubic(5);
        let f = make_field(5, 2).unwrap();
        let pts = geometry::enumerate_points(&c.polys, c.field(), 2, &Default::default()).unwrap();
        for p in pts.iter().take(6) {
            let ch = parametrize_curve(&c, p, 30, ParamChoice(0)).unwrap();
            for s in &ch.twisted {
                for j in 1..5 {
                    assert!(s.hasse(&f, j).coeff(0).is_zero());
                }
            }
        }
    }

    #[test]
    fn reparametrization_keeps_multiplicity() {
        let c = twisted_cubic(7);
        let f = c.field().clone();
        let plane = parse_poly("X0 + 2*X1 + 3*X2 + X3", &f).unwrap();
        let tang = parse_poly("X2", &f).unwrap();
        let pts = geometry::enumerate_points(&c.polys, &f, 1, &Default::default()).unwrap();
        for p in &pts {
            for g in [&plane, &tang] {
                let a = intersection_multiplicity(&c, g, p, 20, ParamChoice(0)).unwrap();
                match intersection_multiplicity(&c, g, p, 20, ParamChoice(1)) {
                    Ok(b) => assert_eq!(a, b, "{p}"),
                    Err(Error::NoTransverseCoordinate(_)) => {}
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }

    fn arb_series(p: u64, t: usize) -> impl Strategy<Value = Vec<u32>> {
        prop::collection::vec(0..p as u32, t)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn hasse_composition(pi in 0usize..3, a in arb_series(5, 64), i in 0usize..8, k in 0usize..8) {
            let p = [2u64, 3, 5][pi];
            let f = make_field(p, 1).unwrap();
            let s = Series { coeffs: a.iter().map(|&c| Elem(c % p as u32)).collect() };
            let lhs = s.hasse(&f, k).hasse(&f, i);
            let rhs = s.hasse(&f, i + k).scale(&f, f.from_int(binom_mod_p((i + k) as u64, i as u64, p) as i64));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn frobenius_is_repeated_multiplication(a in arb_series(4, 40)) {
            let f = make_field(2, 2).unwrap();
            let s = Series { coeffs: a.iter().map(|&c| Elem(c)).collect() };
            let mut prod = Series::constant(Elem::ONE, 40);
            for _ in 0..4 {
                prod = prod.mul(&f, &s);
            }
            prop_assert_eq!(s.frobenius(&f, 4), prod);
        }
    }
}
