use proptest::prelude::*;

use frobtangent::algebra::{make_field, monomials_of_degree, Elem, Gf, Poly};
use frobtangent::geometry::{self, PointConfig};
use frobtangent::scan;

fn form(f: &Gf, d: u32, coeffs: &[u64]) -> Poly {
    let q = f.size();
    Poly::from_terms(f, monomials_of_degree(d).into_iter().zip(coeffs).map(|(m, &c)| (m, f.from_index(c % q).unwrap())))
}

fn brute_count(polys: &[Poly], f: &Gf) -> usize {
    let els: Vec<Elem> = f.elements().collect();
    let mut n = 0;
    for lead in 0..4 {
        let free = 3 - lead as u32;
        for mut k in 0..(els.len() as u64).pow(free) {
            let mut v = [Elem::ZERO; 4];
            v[lead] = Elem::ONE;
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = els[(k % els.len() as u64) as usize];
                k /= els.len() as u64;
            }
            if polys.iter().all(|g| g.evaluate(&v).is_zero()) {
                n += 1;
            }
        }
    }
    n
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fibre_count_matches_brute_force(pq in 0usize..3, coeffs in prop::collection::vec(0u64..16, 20), k in 1u32..3) {
        let (p, e) = [(2, 1), (3, 1), (2, 2)][pq];
        let f = make_field(p, e).unwrap();
        let g = form(&f, 3, &coeffs);
        prop_assume!(!g.is_zero());
        let big = f.extension(k).unwrap();
        let n = geometry::count_points(std::slice::from_ref(&g), &f, k, &PointConfig::default()).unwrap();
        prop_assert_eq!(n, brute_count(&[g.over(&big).unwrap()], &big));
    }

    #[test]
    fn line_containment_matches_evaluation(coeffs in prop::collection::vec(0u64..3, 10)) {
        let f = make_field(3, 1).unwrap();
        let g = form(&f, 2, &coeffs);
        prop_assume!(!g.is_zero());
        for l in geometry::enumerate_lines(&f).unwrap() {
            // a quadric vanishing at the 4 rational points of a line contains it
            let on = l.points().iter().all(|pt| g.evaluate(pt.coords()).is_zero());
            prop_assert_eq!(geometry::line_contained(std::slice::from_ref(&g), &l).unwrap(), on);
        }
    }

    #[test]
    fn scan_keys_are_canonical(idx in 0u128..29524) {
        let f = make_field(3, 1).unwrap();
        let g = scan::surface_at(&f, 2, idx).unwrap();
        let lead = monomials_of_degree(2).iter().map(|m| g.coeff(m)).find(|c| !c.is_zero()).unwrap();
        prop_assert_eq!(lead, Elem::ONE);
        let key = scan::surface_key(&g, 2);
        let back: Vec<u64> = key.split(',').map(|s| s.parse().unwrap()).collect();
        prop_assert_eq!(form(&f, 2, &back), g);
    }
}
