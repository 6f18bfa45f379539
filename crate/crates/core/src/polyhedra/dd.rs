//! Double description conversion for rational polyhedral cones.
//!
//! Incremental Motzkin elimination with the combinatorial adjacency test.
//! Works in any dimension; the rest of the crate only uses dimension <= 5.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::exactnum::LatticeVector;
use crate::linalg::Subspace;

/// A V-representation: `cone(rays) + span(lineality)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generators {
    pub rays: Vec<LatticeVector>,
    pub lineality: Subspace,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new() -> BitSet {
        BitSet(Vec::new())
    }

    fn insert(&mut self, i: usize) {
        let w = i / 64;
        if self.0.len() <= w {
            self.0.resize(w + 1, 0);
        }
        self.0[w] |= 1 << (i % 64);
    }

    fn intersect(&self, other: &BitSet) -> BitSet {
        BitSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn is_subset(&self, other: &BitSet) -> bool {
        self.0.iter().enumerate().all(|(i, &a)| a & !other.0.get(i).copied().unwrap_or(0) == 0)
    }
}

struct Ray {
    v: LatticeVector,
    zeros: BitSet,
}

fn combine(a: &BigInt, x: &LatticeVector, b: &BigInt, y: &LatticeVector) -> LatticeVector {
    // a*x - b*y, made primitive
    LatticeVector::new(x.coords().iter().zip(y.coords()).map(|(xi, yi)| a * xi - b * yi).collect()).primitive()
}

/// Generators of `{x : ineq . x >= 0, eq . x = 0}` in `Q^dim`.
pub fn generators_of(dim: usize, ineqs: &[LatticeVector], eqs: &[LatticeVector]) -> Generators {
    let mut lin: Vec<LatticeVector> = (0..dim).map(|i| LatticeVector::unit(dim, i)).collect();
    let mut rays: Vec<Ray> = Vec::new();

    for a in eqs {
        if let Some(p) = lin.iter().position(|l| !a.dot(l).is_zero()) {
            let l0 = lin.remove(p);
            let al0 = a.dot(&l0);
            for l in lin.iter_mut() {
                let al = a.dot(l);
                if !al.is_zero() {
                    *l = combine(&al0, l, &al, &l0);
                }
            }
        }
    }

    for (idx, a) in ineqs.iter().enumerate() {
        if a.is_zero() {
            for r in rays.iter_mut() {
                r.zeros.insert(idx);
            }
            continue;
        }
        if let Some(p) = lin.iter().position(|l| !a.dot(l).is_zero()) {
            let mut l0 = lin.remove(p);
            let mut al0 = a.dot(&l0);
            if al0.is_negative() {
                l0 = l0.neg();
                al0 = -al0;
            }
            for l in lin.iter_mut() {
                let al = a.dot(l);
                if !al.is_zero() {
                    *l = combine(&al0, l, &al, &l0);
                }
            }
            for r in rays.iter_mut() {
                let ar = a.dot(&r.v);
                if !ar.is_zero() {
                    r.v = combine(&al0, &r.v, &ar, &l0);
                }
                r.zeros.insert(idx);
            }
            // l0 was a lineality direction, so it is tight on every earlier constraint.
            let mut zeros = BitSet::new();
            for j in 0..idx {
                zeros.insert(j);
            }
            rays.push(Ray { v: l0, zeros });
            continue;
        }

        let vals: Vec<BigInt> = rays.iter().map(|r| a.dot(&r.v)).collect();
        if vals.iter().all(|v| !v.is_negative()) {
            for (r, v) in rays.iter_mut().zip(&vals) {
                if v.is_zero() {
                    r.zeros.insert(idx);
                }
            }
            continue;
        }

        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        let mut new_rays: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].zeros.intersect(&rays[n].zeros);
                let adjacent = (0..rays.len()).all(|k| k == p || k == n || !common.is_subset(&rays[k].zeros));
                if !adjacent {
                    continue;
                }
                // (a.p) n - (a.n) p lies on the hyperplane a.x = 0
                let v = combine(&vals[p], &rays[n].v, &vals[n], &rays[p].v);
                let mut zeros = common;
                zeros.insert(idx);
                new_rays.push(Ray { v, zeros });
            }
        }
        let mut kept: Vec<Ray> = Vec::new();
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i].is_negative() {
                continue;
            }
            if vals[i].is_zero() {
                r.zeros.insert(idx);
            }
            kept.push(r);
        }
        kept.extend(new_rays);
        rays = kept;
    }

    let lineality = Subspace::span(&lin, dim);
    let mut out: Vec<LatticeVector> = rays.into_iter().map(|r| lineality.reduce(&r.v)).filter(|v| !v.is_zero()).collect();
    out.sort();
    out.dedup();
    Generators { rays: out, lineality }
}
