//! Embeddings GF(p^a) -> GF(p^b) for a | b.
//!
//! Each field is a separate absolute extension of GF(p), so an embedding is
//! fixed by the image of `x` (the class of `X` in the smaller field), which
//! must be a root of the smaller modulus. Roots are chosen greedily per target
//! field so that all embeddings into it commute with each other: composing
//! along any chain of subfields gives the same map.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use super::field::{Elem, Gf};
use super::univariate;
use crate::error::{Error, Result};

type Lattice = Arc<BTreeMap<u32, Elem>>;

fn cache() -> &'static RwLock<HashMap<(u32, u32), Lattice>> {
    static C: OnceLock<RwLock<HashMap<(u32, u32), Lattice>>> = OnceLock::new();
    C.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Image of `x` of GF(p^a) in GF(p^b) under the canonical embedding.
fn generator_image(p: u32, a: u32, b: u32) -> Result<Elem> {
    let target = Gf::new(p, b)?;
    if a == b {
        return Ok(target.x());
    }
    let lat = lattice(p, b)?;
    lat.get(&a).copied().ok_or(Error::NotAnExtension { p, from: a, to: b })
}

/// Evaluate the polynomial-basis expansion of `v` (in GF(p^a)) at `r` (in GF(p^b)).
fn apply_with(src: &Gf, dst: &Gf, r: Elem, v: Elem) -> Elem {
    let mut acc = Elem::ZERO;
    for &c in src.digits(v).iter().rev() {
        acc = dst.add(dst.mul(acc, r), dst.from_int(c as i64));
    }
    acc
}

fn lattice(p: u32, b: u32) -> Result<Lattice> {
    if let Some(l) = cache().read().unwrap().get(&(p, b)) {
        return Ok(l.clone());
    }
    let target = Gf::new(p, b)?;
    let mut divs: Vec<u32> = (2..b).filter(|a| b % a == 0).collect();
    divs.sort_unstable_by(|x, y| y.cmp(x));
    let mut fixed: BTreeMap<u32, Elem> = BTreeMap::new();
    for &a in &divs {
        let src = Gf::new(p, a)?;
        let forcing: Vec<u32> = fixed.keys().copied().filter(|c| c % a == 0).collect();
        if !forcing.is_empty() {
            let mut vals = Vec::new();
            for c in forcing {
                let mid = Gf::new(p, c)?;
                let inner = generator_image(p, a, c)?;
                vals.push(apply_with(&mid, &target, fixed[&c], inner));
            }
            if vals.iter().any(|v| *v != vals[0]) {
                return Err(Error::NoCompatibleRoot { p, from: a, to: b });
            }
            fixed.insert(a, vals[0]);
            continue;
        }
        let m: Vec<Elem> = src.modulus().iter().map(|&c| Elem(c)).collect();
        let candidates = univariate::roots(&target, &m);
        let mut chosen = None;
        'cand: for r in candidates {
            for (&c, &rc) in &fixed {
                let g = num_integer::gcd(a, c);
                if g <= 1 {
                    continue;
                }
                let mid_c = Gf::new(p, c)?;
                let xa = generator_image(p, g, a)?;
                let xc = generator_image(p, g, c)?;
                let via_a = apply_with(&src, &target, r, xa);
                let via_c = apply_with(&mid_c, &target, rc, xc);
                if via_a != via_c {
                    continue 'cand;
                }
            }
            chosen = Some(r);
            break;
        }
        match chosen {
            Some(r) => {
                fixed.insert(a, r);
            }
            None => return Err(Error::NoCompatibleRoot { p, from: a, to: b }),
        }
    }
    let lat = Arc::new(fixed);
    cache().write().unwrap().entry((p, b)).or_insert(lat.clone());
    Ok(lat)
}

/// A fixed field embedding, with a lookup table when the source is small.
#[derive(Clone)]
pub struct Embedding {
    from: Gf,
    to: Gf,
    image_x: Elem,
    table: Option<Arc<Vec<Elem>>>,
}

impl std::fmt::Debug for Embedding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Embedding({} -> {})", self.from, self.to)
    }
}

impl Embedding {
    pub fn new(from: &Gf, to: &Gf) -> Result<Embedding> {
        let p = from.characteristic();
        if !from.is_subfield_of(to) {
            return Err(Error::NotAnExtension { p, from: from.degree(), to: to.degree() });
        }
        let image_x = if from.degree() == 1 {
            Elem::ZERO
        } else {
            generator_image(p, from.degree(), to.degree())?
        };
        let mut e = Embedding { from: from.clone(), to: to.clone(), image_x, table: None };
        if from.size() <= 1 << 16 && from.degree() > 1 {
            let t: Vec<Elem> = from.elements().map(|v| e.apply_slow(v)).collect();
            e.table = Some(Arc::new(t));
        }
        Ok(e)
    }

    pub fn source(&self) -> &Gf {
        &self.from
    }

    pub fn target(&self) -> &Gf {
        &self.to
    }

    fn apply_slow(&self, v: Elem) -> Elem {
        if self.from.degree() == 1 {
            return v;
        }
        apply_with(&self.from, &self.to, self.image_x, v)
    }

    #[inline]
    pub fn apply(&self, v: Elem) -> Elem {
        if self.from.degree() == 1 {
            // prime field elements share their encoding in every extension
            return v;
        }
        match &self.table {
            Some(t) => t[v.0 as usize],
            None => self.apply_slow(v),
        }
    }
}

/// Convenience wrapper over [`Embedding`].
pub fn embed(v: Elem, from: &Gf, to: &Gf) -> Result<Elem> {
    Ok(Embedding::new(from, to)?.apply(v))
}
