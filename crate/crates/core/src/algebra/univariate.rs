//! Dense univariate polynomials over a [`Gf`], coefficients low to high.

use super::field::{Elem, Gf};
use crate::error::{Error, Result};

pub type Uni = Vec<Elem>;

pub fn trim(a: &mut Uni) {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
}

pub fn degree(a: &[Elem]) -> Option<usize> {
    a.iter().rposition(|c| !c.is_zero())
}

pub fn add(f: &Gf, a: &[Elem], b: &[Elem]) -> Uni {
    let n = a.len().max(b.len());
    let mut r: Uni = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(Elem::ZERO);
            let y = b.get(i).copied().unwrap_or(Elem::ZERO);
            f.add(x, y)
        })
        .collect();
    trim(&mut r);
    r
}

pub fn sub(f: &Gf, a: &[Elem], b: &[Elem]) -> Uni {
    let n = a.len().max(b.len());
    let mut r: Uni = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(Elem::ZERO);
            let y = b.get(i).copied().unwrap_or(Elem::ZERO);
            f.sub(x, y)
        })
        .collect();
    trim(&mut r);
    r
}

pub fn mul(f: &Gf, a: &[Elem], b: &[Elem]) -> Uni {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![Elem::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = f.add(r[i + j], f.mul(x, y));
        }
    }
    trim(&mut r);
    r
}

pub fn scale(f: &Gf, a: &[Elem], c: Elem) -> Uni {
    let mut r: Uni = a.iter().map(|&x| f.mul(x, c)).collect();
    trim(&mut r);
    r
}

pub fn divrem(f: &Gf, a: &[Elem], b: &[Elem]) -> Result<(Uni, Uni)> {
    let db = degree(b).ok_or(Error::ZeroDivisor)?;
    let lead_inv = f.inv(b[db])?;
    let mut r: Uni = a.to_vec();
    trim(&mut r);
    if r.len() <= db {
        return Ok((Vec::new(), r));
    }
    let mut q = vec![Elem::ZERO; r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = f.mul(r[dr], lead_inv);
        q[dr - db] = c;
        for j in 0..=db {
            r[dr - db + j] = f.sub(r[dr - db + j], f.mul(c, b[j]));
        }
        trim(&mut r);
    }
    trim(&mut q);
    Ok((q, r))
}

pub fn rem(f: &Gf, a: &[Elem], b: &[Elem]) -> Result<Uni> {
    Ok(divrem(f, a, b)?.1)
}

pub fn monic(f: &Gf, a: &[Elem]) -> Uni {
    match degree(a) {
        None => Vec::new(),
        Some(d) => {
            let inv = f.inv(a[d]).expect("nonzero leading coefficient");
            scale(f, &a[..=d], inv)
        }
    }
}

/// Monic gcd; the gcd of two zero polynomials is zero.
pub fn gcd(f: &Gf, a: &[Elem], b: &[Elem]) -> Uni {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(f, &x, &y).expect("nonzero divisor");
        x = y;
        y = r;
    }
    monic(f, &x)
}

pub fn mulmod(f: &Gf, a: &[Elem], b: &[Elem], m: &[Elem]) -> Uni {
    rem(f, &mul(f, a, b), m).expect("nonzero modulus")
}

pub fn powmod(f: &Gf, a: &[Elem], mut e: u64, m: &[Elem]) -> Uni {
    let mut base = rem(f, a, m).expect("nonzero modulus");
    let mut acc = rem(f, &[Elem::ONE], m).expect("nonzero modulus");
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(f, &acc, &base, m);
        }
        base = mulmod(f, &base, &base, m);
        e >>= 1;
    }
    acc
}

pub fn eval(f: &Gf, a: &[Elem], x: Elem) -> Elem {
    a.iter().rev().fold(Elem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
}

/// Distinct roots in `f` of a nonzero polynomial, sorted by encoding.
pub fn roots(f: &Gf, a: &[Elem]) -> Vec<Elem> {
    let a = monic(f, a);
    let d = match degree(&a) {
        None | Some(0) => return Vec::new(),
        Some(d) => d,
    };
    let q = f.size();
    if d == 1 {
        return vec![f.neg(a[0])];
    }
    if q <= 64 || q <= 8 * d as u64 {
        return f.elements().filter(|&x| eval(f, &a, x).is_zero()).collect();
    }
    // restrict to the split part gcd(a, X^q - X)
    let xq = x_pow_q(f, &a);
    let g = gcd(f, &a, &sub(f, &xq, &[Elem::ZERO, Elem::ONE]));
    let mut out = Vec::new();
    split(f, &g, &mut out);
    out.sort();
    out
}

fn x_pow_q(f: &Gf, m: &[Elem]) -> Uni {
    // q-th power via n successive p-th powers keeps exponents small
    let p = f.characteristic() as u64;
    let mut cur = rem(f, &[Elem::ZERO, Elem::ONE], m).unwrap();
    for _ in 0..f.degree() {
        cur = powmod(f, &cur, p, m);
    }
    cur
}

/// Splits a monic squarefree product of distinct linear factors.
fn split(f: &Gf, g: &[Elem], out: &mut Vec<Elem>) {
    let d = match degree(g) {
        None | Some(0) => return,
        Some(d) => d,
    };
    if d == 1 {
        out.push(f.neg(g[0]));
        return;
    }
    let p = f.characteristic();
    let q = f.size();
    let gen = f.generator();
    let mut shift = Elem::ONE;
    // deterministic sequence of trial elements
    for trial in 0..q.min(4096) {
        let h = if p == 2 {
            // absolute trace of beta*X
            let beta = shift;
            let bx = vec![Elem::ZERO, beta];
            let mut term = rem(f, &bx, g).unwrap();
            let mut tr = term.clone();
            for _ in 1..f.degree() {
                term = mulmod(f, &term, &term, g);
                tr = add(f, &tr, &term);
            }
            tr
        } else {
            let base = vec![f.from_index(trial % q).unwrap(), Elem::ONE];
            let t = powmod(f, &base, (q - 1) / 2, g);
            sub(f, &t, &[Elem::ONE])
        };
        let c = gcd(f, g, &h);
        let dc = degree(&c).unwrap_or(0);
        if dc > 0 && dc < d {
            let (other, _) = divrem(f, g, &c).unwrap();
            split(f, &c, out);
            split(f, &monic(f, &other), out);
            return;
        }
        shift = f.mul(shift, gen);
    }
    // fall back to exhaustive evaluation
    out.extend(f.elements().filter(|&x| eval(f, g, x).is_zero()));
}
