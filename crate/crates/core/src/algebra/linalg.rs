//! Dense Gaussian elimination over a [`Gf`].

use super::field::{Elem, Gf};

pub type Matrix = Vec<Vec<Elem>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(f: &Gf, m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, piv);
        let inv = f.inv(m[r][c]).expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let factor = m[i][c];
            for j in c..cols {
                let t = f.mul(factor, m[r][j]);
                m[i][j] = f.sub(m[i][j], t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(f: &Gf, m: &[Vec<Elem>]) -> usize {
    let mut w = m.to_vec();
    rref(f, &mut w).len()
}

/// Basis of `{v : M v = 0}` for an `rows x ncols` matrix.
pub fn kernel(f: &Gf, m: &[Vec<Elem>], ncols: usize) -> Vec<Vec<Elem>> {
    let mut w = m.to_vec();
    let pivots = rref(f, &mut w);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Elem::ZERO; ncols];
            v[fc] = Elem::ONE;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(w[r][fc]);
            }
            v
        })
        .collect()
}

/// Some solution of `M x = b`, if one exists.
pub fn solve(f: &Gf, m: &[Vec<Elem>], b: &[Elem]) -> Option<Vec<Elem>> {
    let ncols = m.first().map_or(0, |r| r.len());
    let mut aug: Matrix = m
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    let pivots = rref(f, &mut aug);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Elem::ZERO; ncols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][ncols];
    }
    Some(x)
}

/// Determinant of a square matrix.
pub fn det(f: &Gf, m: &[Vec<Elem>]) -> Elem {
    let n = m.len();
    let mut w = m.to_vec();
    let mut d = Elem::ONE;
    for c in 0..n {
        let Some(piv) = (c..n).find(|&i| !w[i][c].is_zero()) else { return Elem::ZERO };
        if piv != c {
            w.swap(piv, c);
            d = f.neg(d);
        }
        d = f.mul(d, w[c][c]);
        let inv = f.inv(w[c][c]).unwrap();
        for i in c + 1..n {
            if w[i][c].is_zero() {
                continue;
            }
            let factor = f.mul(w[i][c], inv);
            for j in c..n {
                let t = f.mul(factor, w[c][j]);
                w[i][j] = f.sub(w[i][j], t);
            }
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_is_annihilated() {
        let f = Gf::new(5, 1).unwrap();
        let m = vec![
            vec![Elem(1), Elem(2), Elem(3), Elem(4)],
            vec![Elem(2), Elem(4), Elem(1), Elem(3)],
        ];
        let k = kernel(&f, &m, 4);
        assert_eq!(k.len(), 4 - rank(&f, &m));
        for v in &k {
            for row in &m {
                let s = row.iter().zip(v).fold(Elem::ZERO, |a, (x, y)| f.add(a, f.mul(*x, *y)));
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn det_and_solve() {
        let f = Gf::new(7, 1).unwrap();
        let m = vec![vec![Elem(2), Elem(1)], vec![Elem(1), Elem(3)]];
        assert_eq!(det(&f, &m), Elem(5));
        let x = solve(&f, &m, &[Elem(1), Elem(0)]).unwrap();
        assert_eq!(f.add(f.mul(Elem(2), x[0]), x[1]), Elem(1));
        let sing = vec![vec![Elem(1), Elem(2)], vec![Elem(2), Elem(4)]];
        assert!(solve(&f, &sing, &[Elem(1), Elem(0)]).is_none());
    }
}
