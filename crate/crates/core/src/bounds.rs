//! Closed-form point-count and genus bounds, in exact arithmetic.

use num_integer::Roots;
use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};

type Q = Ratio<i64>;

fn fmt_ratio(r: &Q) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MainBound {
    /// `delta (d + q - 1) / 2` as "a/b" or an integer.
    pub exact: String,
    pub floor: i64,
}

/// `delta (d + q - 1) / 2` and its floor.
pub fn main_bound(delta: i64, d: i64, q: i64) -> Result<MainBound> {
    if d <= 1 || delta < 1 {
        return Err(Error::BadDegree(format!("need d > 1 and delta >= 1, got d = {d}, delta = {delta}")));
    }
    let r = Q::new(delta * (d + q - 1), 2);
    Ok(MainBound { exact: fmt_ratio(&r), floor: r.floor().to_integer() })
}

/// `q (delta - 1) + 1`.
pub fn homma_bound(delta: i64, q: i64) -> i64 {
    q * (delta - 1) + 1
}

/// `floor((2 (nu1 + nu2)(g - 1) + delta (q + 3)) / 3)`, clamped at zero.
pub fn stohr_voloch_bound(delta: i64, q: i64, g: i64, nu1: i64, nu2: i64) -> i64 {
    let v = Q::new(2 * (nu1 + nu2) * (g - 1) + delta * (q + 3), 3);
    v.floor().to_integer().max(0)
}

/// The variant `4 (g - 1) + delta (q + 3) / 3` used by the comparison plot.
pub fn stohr_voloch_plot_variant(delta: i64, q: i64, g: i64) -> String {
    fmt_ratio(&(Q::from_integer(4 * (g - 1)) + Q::new(delta * (q + 3), 3)))
}

/// `q + 1 + g floor(2 sqrt q)`.
pub fn serre_weil_bound(g: i64, q: i64) -> i64 {
    q + 1 + g * (4 * q).sqrt()
}

/// Castelnuovo-type genus bound for degree `delta` curves not on surfaces of
/// degree below `d`.
pub fn harris_pi(delta: i64, d: i64) -> Result<i64> {
    if d < 1 || delta < 1 {
        return Err(Error::BadDegree(format!("need d >= 1 and delta >= 1, got d = {d}, delta = {delta}")));
    }
    let eps = (-delta).rem_euclid(d);
    let half = Q::new(1, 2);
    let pi = half * delta * (Q::new(delta, d) + d - 4) + 1 - half * eps * (Q::from_integer(d - eps - 1) + Q::new(eps, d));
    if !pi.is_integer() {
        return Err(Error::NonIntegerResult(format!("pi({delta}, {d}) = {}", fmt_ratio(&pi))));
    }
    Ok(pi.to_integer())
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HarrisGenus {
    /// Value with the small-degree branch: `pi(delta, floor((delta-1)/d) + 1)`
    /// when `delta <= d (d - 1)`.
    pub branched: i64,
    pub unbranched: i64,
}

pub fn harris_genus_bound(delta: i64, d: i64) -> Result<HarrisGenus> {
    if d < 2 {
        return Err(Error::BadDegree(format!("need d >= 2, got {d}")));
    }
    let unbranched = harris_pi(delta, d)?;
    let branched = if delta > d * (d - 1) { unbranched } else { harris_pi(delta, (delta - 1) / d + 1)? };
    Ok(HarrisGenus { branched, unbranched })
}

/// `(e1 + e2 + e3)(2g - 2) + 4 delta`.
pub fn weierstrass_divisor_degree(eps: [u32; 4], g: i64, delta: i64) -> i64 {
    let s = (eps[1] + eps[2] + eps[3]) as i64;
    s * (2 * g - 2) + 4 * delta
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub q: i64,
    pub d: i64,
    pub delta: i64,
    pub genus_bound: i64,
    pub genus_branched: Option<i64>,
    pub nu1: i64,
    pub nu2: i64,
    pub main: String,
    pub main_floor: i64,
    pub homma: i64,
    pub stohr_voloch: i64,
    pub serre_weil: i64,
    /// Names of the smallest bounds, joined by '+' on ties.
    pub winner: String,
    pub notes: Vec<String>,
}

/// All bounds for one `(delta, d, q)`. The genus defaults to the unbranched
/// Harris value (clamped at zero) and `nu` to `(1, 2)`.
pub fn compare(delta: i64, d: i64, q: i64, g: Option<i64>, nu: Option<(i64, i64)>) -> Result<BoundReport> {
    let mb = main_bound(delta, d, q)?;
    let mut notes = Vec::new();
    let (genus_bound, genus_branched) = match g {
        Some(g) => {
            if g < 0 {
                return Err(Error::BadDegree(format!("negative genus {g}")));
            }
            (g, None)
        }
        None => {
            let h = harris_genus_bound(delta, d)?;
            if h.branched != h.unbranched {
                notes.push(format!(
                    "genus bound {} (unbranched) differs from the small-degree branch {}",
                    h.unbranched, h.branched
                ));
            }
            (h.unbranched.max(0), Some(h.branched.max(0)))
        }
    };
    let (nu1, nu2) = nu.unwrap_or((1, 2));
    if !(1 <= nu1 && nu1 < nu2) {
        return Err(Error::BadDegree(format!("need 1 <= nu1 < nu2, got ({nu1}, {nu2})")));
    }
    let homma = homma_bound(delta, q);
    let sv = stohr_voloch_bound(delta, q, genus_bound, nu1, nu2);
    let sw = serre_weil_bound(genus_bound, q);
    if !mb.exact.chars().all(|c| c.is_ascii_digit()) {
        notes.push(format!("main bound {} is not an integer: floor {} (rounding up gives {})", mb.exact, mb.floor, mb.floor + 1));
    }
    if mb.floor == homma {
        notes.push(format!("main bound ties Homma's bound at {homma}"));
    }
    let text_sv = Q::new(2 * (nu1 + nu2) * (genus_bound - 1) + delta * (q + 3), 3);
    let plot = stohr_voloch_plot_variant(delta, q, genus_bound);
    if plot != fmt_ratio(&text_sv) {
        notes.push(format!("plot variant of the Stohr-Voloch bound gives {plot} against {}", fmt_ratio(&text_sv)));
    }
    let entries = [("main", mb.floor), ("homma", homma), ("sv", sv), ("serre_weil", sw)];
    let best = entries.iter().map(|e| e.1).min().unwrap();
    let winner: Vec<&str> = entries.iter().filter(|e| e.1 == best).map(|e| e.0).collect();
    Ok(BoundReport {
        q,
        d,
        delta,
        genus_bound,
        genus_branched,
        nu1,
        nu2,
        main: mb.exact,
        main_floor: mb.floor,
        homma,
        stohr_voloch: sv,
        serre_weil: sw,
        winner: winner.join("+"),
        notes,
    })
}

pub const CSV_HEADER: &str = "delta,main,main_floor,homma,sv,serre_weil,winner";

/// Comparison table for `delta = 1..=q`.
pub fn comparison_csv(q: i64, d: i64) -> Result<String> {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for delta in 1..=q {
        let r = compare(delta, d, q, None, None)?;
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            delta, r.main, r.main_floor, r.homma, r.stohr_voloch, r.serre_weil, r.winner
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(main_bound(6, 2, 5).unwrap().floor, 18);
        assert_eq!(main_bound(4, 2, 3).unwrap().floor, 8);
        let m = main_bound(11, 5, 9).unwrap();
        assert_eq!((m.exact.as_str(), m.floor), ("143/2", 71));
        assert!(matches!(main_bound(3, 1, 5), Err(Error::BadDegree(_))));
        assert_eq!(homma_bound(6, 5), 26);
        assert_eq!(homma_bound(11, 9), 91);
        assert_eq!(homma_bound(1, 7), 1);
        assert_eq!(stohr_voloch_bound(11, 9, 17, 1, 2), 76);
        assert_eq!(stohr_voloch_bound(6, 5, 4, 1, 2), 22);
        assert_eq!(stohr_voloch_bound(7, 4, 1, 1, 2), 7 * 7 / 3);
        assert_eq!(serre_weil_bound(0, 7), 8);
        assert_eq!(serre_weil_bound(4, 5), 22);
        assert_eq!(serre_weil_bound(17, 9), 112);
        assert_eq!(weierstrass_divisor_degree([0, 1, 2, 3], 0, 3), 0);
        assert_eq!(weierstrass_divisor_degree([0, 1, 2, 3], 1, 4), 16);
        assert_eq!(weierstrass_divisor_degree([0, 1, 2, 4], 1, 5), 20);
    }

    #[test]
    fn harris_branches() {
        let h = harris_genus_bound(11, 5).unwrap();
        assert_eq!((h.unbranched, h.branched), (17, 15));
        assert_eq!(harris_genus_bound(6, 2).unwrap().unbranched, 4);
        let b = harris_genus_bound(3, 2).unwrap();
        assert_eq!(b.branched, b.unbranched);
        assert_eq!(b.unbranched, harris_pi(3, 2).unwrap());
    }

    #[test]
    fn comparisons() {
        let r = compare(11, 5, 9, None, None).unwrap();
        assert_eq!((r.main_floor, r.stohr_voloch, r.serre_weil, r.genus_bound), (71, 76, 112, 17));
        assert_eq!(r.winner, "main");
        assert!(r.notes.iter().any(|n| n.contains("143/2")));
        let r = compare(6, 9, 9, None, None).unwrap();
        assert_eq!((r.main_floor, r.homma), (51, 46));
        let r = compare(2, 2, 5, None, None).unwrap();
        assert_eq!((r.main_floor, r.homma, r.stohr_voloch), (6, 6, 3));
        assert_eq!(r.winner, "sv");
        assert!(r.notes.iter().any(|n| n.contains("ties")));
    }

    #[test]
    fn csv_shape() {
        let csv = comparison_csv(9, 5).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 10);
    }

    /// Plane-curve genus when the surface degree is 1.
    #[test]
    fn harris_degree_one_is_plane_genus() {
        for delta in 1..30 {
            assert_eq!(harris_pi(delta, 1).unwrap(), (delta - 1) * (delta - 2) / 2);
        }
    }

    proptest! {
        #[test]
        fn harris_is_integral(delta in 1i64..200, d in 2i64..12) {
            prop_assert!(harris_genus_bound(delta, d).is_ok());
        }

        #[test]
        fn bounds_are_monotone(delta in 1i64..60, d in 2i64..8, q in 2i64..50, g in 0i64..40) {
            let m0 = main_bound(delta, d, q).unwrap().floor;
            prop_assert!(main_bound(delta + 1, d, q).unwrap().floor >= m0);
            prop_assert!(main_bound(delta, d, q + 1).unwrap().floor >= m0);
            prop_assert!(homma_bound(delta + 1, q) >= homma_bound(delta, q));
            prop_assert!(stohr_voloch_bound(delta + 1, q, g, 1, 2) >= stohr_voloch_bound(delta, q, g, 1, 2));
            prop_assert!(stohr_voloch_bound(delta, q + 1, g, 1, 2) >= stohr_voloch_bound(delta, q, g, 1, 2));
            prop_assert!(serre_weil_bound(g, q + 1) >= serre_weil_bound(g, q));
            prop_assert!(stohr_voloch_bound(delta, q, g, 1, 2) >= 0);
        }
    }
}
