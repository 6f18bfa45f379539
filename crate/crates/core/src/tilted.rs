//! Tilted semigroups `S_delta = {(u, n) in M x Gamma : <u, v> + n c >= 0 on delta}`
//! and their Hilbert bases.
//!
//! With `Gamma = (1/d) Z` we write `n = m / d` and scale the rays of `delta` to
//! `(d v, c)`, so `S_delta` becomes the lattice points of an ordinary rational
//! dual cone in `Z^{r+1}`. The Hilbert basis of its pointed part is found from a
//! pulling triangulation and the fundamental parallelepipeds of its simplices.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{LatticeVector, Rat, ValueGroup};
use crate::linalg::{column_hermite, rank_int};
use crate::polyhedra::dd::generators_of;
use crate::polyhedra::{AdmissibleCone, Cone};
use crate::valpoly::{monomial_parts, power};

/// Parallelepipeds with more lattice points than this are refused.
const MAX_PARALLELEPIPED: i128 = 2_000_000;

/// An element `(u, n)` of `M x Gamma`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TiltedElement {
    pub u: LatticeVector,
    pub n: Rat,
}

impl TiltedElement {
    fn grade(&self) -> Rat {
        Rat::from_int(self.u.l1()) + self.n.abs()
    }

    /// `p^n * x^u`, e.g. `p*t^-1`.
    pub fn render(&self, vars: &[String], uniformizer: &str) -> String {
        let mut parts: Vec<String> = power(uniformizer, &self.n).into_iter().collect();
        parts.extend(monomial_parts(vars, &self.u));
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for TiltedElement {
    /// Graded lexicographic: by `|u|_1 + |n|`, then by `(u, n)`.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.grade().cmp(&other.grade()).then_with(|| self.u.cmp(&other.u)).then_with(|| self.n.cmp(&other.n))
    }
}

impl PartialOrd for TiltedElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// The semigroup `S_delta` presented by a Hilbert basis of its pointed part
/// together with a lattice basis of its unit group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TiltedSemigroup {
    cone: AdmissibleCone,
    rescale: u64,
    hilbert_basis: Vec<TiltedElement>,
    units: Vec<TiltedElement>,
}

fn to_i128(x: &BigInt) -> Result<i128> {
    x.to_i128().ok_or(Error::Overflow)
}

fn to_i64(x: i128) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Overflow)
}

fn dot(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `columns` is a list of column vectors; returns `M * x`.
fn apply(columns: &[Vec<i128>], x: &[i128], rows: usize) -> Vec<i128> {
    let mut out = vec![0i128; rows];
    for (c, &xi) in columns.iter().zip(x) {
        for (o, ci) in out.iter_mut().zip(c) {
            *o += ci * xi;
        }
    }
    out
}

fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect()).collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

/// Adjugate of a square matrix given by rows.
fn adjugate(m: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![1]];
    }
    let mut adj = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i128>> = (0..n)
                .filter(|&r| r != i)
                .map(|r| (0..n).filter(|&c| c != j).map(|c| m[r][c]).collect())
                .collect();
            let s = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[j][i] = s * det(&minor);
        }
    }
    adj
}

/// Pulling triangulation of a pointed cone given by its extreme rays.
fn triangulate(rays: &[LatticeVector], ambient: usize) -> Result<Vec<Vec<LatticeVector>>> {
    let d = rank_int(rays, ambient);
    if rays.len() == d {
        return Ok(vec![rays.to_vec()]);
    }
    let cone = Cone::from_generators(ambient, rays, &[])?;
    let apex = &cone.rays()[0];
    let mut out = Vec::new();
    for f in cone.facets() {
        if f.dot(apex) == BigInt::from(0) {
            continue;
        }
        let face: Vec<LatticeVector> = cone.rays().iter().filter(|r| f.dot(r) == BigInt::from(0)).cloned().collect();
        for mut simplex in triangulate(&face, ambient)? {
            simplex.insert(0, apex.clone());
            out.push(simplex);
        }
    }
    Ok(out)
}

/// Lattice points `sum lambda_i g_i` with `0 <= lambda_i < 1`, one per coset of
/// the sublattice spanned by the `g_i`.
fn parallelepiped(gens: &[Vec<i128>]) -> Result<Vec<Vec<i128>>> {
    let r = gens.len();
    // rows of the matrix whose columns are the generators
    let g: Vec<Vec<i128>> = (0..r).map(|i| gens.iter().map(|c| c[i]).collect()).collect();
    let dt = det(&g);
    if dt == 0 {
        return Err(Error::Inconsistent("degenerate simplex in triangulation".into()));
    }
    if dt.abs() > MAX_PARALLELEPIPED {
        return Err(Error::Overflow);
    }
    let adj = adjugate(&g);
    // a triangular basis of the sublattice gives coset representatives 0 <= x_i < |h_ii|
    let rows: Vec<Vec<i64>> = g.iter().map(|row| row.iter().map(|&x| to_i64(x)).collect::<Result<_>>()).collect::<Result<_>>()?;
    let (_, q) = column_hermite(&rows, r);
    let h: Vec<Vec<i128>> = q.iter().map(|col| apply(gens, col, r)).collect();
    let bounds: Vec<i128> = (0..r).map(|i| h[i][i].abs()).collect();
    let mut out = Vec::with_capacity(dt.unsigned_abs() as usize);
    let mut x = vec![0i128; r];
    loop {
        let lam: Vec<i128> = adj.iter().map(|row| dot(row, &x)).collect();
        let shift: Vec<i128> = lam.iter().map(|l| (l * dt.signum()).div_euclid(dt.abs())).collect();
        let y: Vec<i128> = x.iter().zip(apply(gens, &shift, r)).map(|(a, b)| a - b).collect();
        out.push(y);
        let mut i = 0;
        loop {
            if i == r {
                return Ok(out);
            }
            x[i] += 1;
            if x[i] < bounds[i] {
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}

/// Hilbert basis of `{w in Z^r : a_j . w >= 0}` for a pointed full-dimensional cone.
fn pointed_hilbert_basis(ineqs: &[Vec<i128>], r: usize) -> Result<Vec<Vec<i128>>> {
    if r == 0 {
        return Ok(Vec::new());
    }
    let normals: Vec<LatticeVector> = ineqs.iter().map(|a| LatticeVector::new(a.iter().map(|&x| BigInt::from(x)).collect())).collect();
    let g = generators_of(r, &normals, &[]);
    if g.lineality.dim() != 0 {
        return Err(Error::Inconsistent("dual cone is not pointed after splitting units".into()));
    }
    let rays: Vec<Vec<i128>> = g.rays.iter().map(|v| v.coords().iter().map(to_i128).collect()).collect::<Result<_>>()?;
    let mut candidates: BTreeSet<Vec<i128>> = rays.iter().cloned().collect();
    for simplex in triangulate(&g.rays, r)? {
        let gens: Vec<Vec<i128>> = simplex.iter().map(|v| v.coords().iter().map(to_i128).collect()).collect::<Result<_>>()?;
        candidates.extend(parallelepiped(&gens)?.into_iter().filter(|x| x.iter().any(|&c| c != 0)));
    }
    let inside = |x: &[i128]| ineqs.iter().all(|a| dot(a, x) >= 0);
    let cands: Vec<Vec<i128>> = candidates.into_iter().collect();
    Ok(cands
        .iter()
        .filter(|x| {
            !cands.iter().any(|h| h != *x && inside(&x.iter().zip(h).map(|(a, b)| a - b).collect::<Vec<_>>()))
        })
        .cloned()
        .collect())
}

impl TiltedSemigroup {
    pub fn new(cone: &AdmissibleCone) -> Result<TiltedSemigroup> {
        let c = cone.cone();
        let dim = c.ambient_dim();
        let d = cone.gamma().denominator();
        let scale = |r: &LatticeVector| -> Result<Vec<i128>> {
            let mut v: Vec<i128> = r.coords().iter().map(to_i128).collect::<Result<_>>()?;
            for x in &mut v[..dim - 1] {
                *x = x.checked_mul(d as i128).ok_or(Error::Overflow)?;
            }
            Ok(v)
        };
        let rays: Vec<Vec<i128>> = c.rays().iter().map(scale).collect::<Result<_>>()?;
        let lin: Vec<Vec<i64>> = c
            .lineality()
            .iter()
            .map(|l| scale(l)?.into_iter().map(to_i64).collect())
            .collect::<Result<_>>()?;

        // lattice basis of the vectors orthogonal to the lineality space
        let basis: Vec<Vec<i128>> = if lin.is_empty() {
            (0..dim).map(|i| (0..dim).map(|j| i128::from(i == j)).collect()).collect()
        } else {
            let (rk, q) = column_hermite(&lin, dim);
            q[rk..].to_vec()
        };
        let k = basis.len();
        let a: Vec<Vec<i64>> = rays
            .iter()
            .map(|r| basis.iter().map(|b| to_i64(dot(b, r))).collect())
            .collect::<Result<_>>()?;
        let (rho, q) = column_hermite(&a, k);
        let (pointed, units) = q.split_at(rho);
        let ineqs: Vec<Vec<i128>> =
            a.iter().map(|row| pointed.iter().map(|col| dot(&row.iter().map(|&x| x as i128).collect::<Vec<_>>(), col)).collect()).collect();
        let hb = pointed_hilbert_basis(&ineqs, rho)?;

        let lift = |w: &[i128]| -> TiltedElement {
            let z = apply(pointed, w, k);
            element(&apply(&basis, &z, dim), d)
        };
        let mut hilbert_basis: Vec<TiltedElement> = hb.iter().map(|w| lift(w)).collect();
        hilbert_basis.sort();
        let mut unit_basis: Vec<TiltedElement> = units.iter().map(|z| element(&apply(&basis, z, dim), d)).collect();
        unit_basis.sort();
        Ok(TiltedSemigroup { cone: cone.clone(), rescale: d, hilbert_basis, units: unit_basis })
    }

    pub fn cone(&self) -> &AdmissibleCone {
        &self.cone
    }

    pub fn gamma(&self) -> ValueGroup {
        self.cone.gamma()
    }

    /// The `d` with `Gamma = (1/d) Z`.
    pub fn rescale(&self) -> u64 {
        self.rescale
    }

    pub fn rank(&self) -> usize {
        self.cone.rank()
    }

    pub fn hilbert_basis(&self) -> &[TiltedElement] {
        &self.hilbert_basis
    }

    /// A lattice basis of the invertible elements; empty when `delta` is full-dimensional.
    pub fn units(&self) -> &[TiltedElement] {
        &self.units
    }

    pub fn contains(&self, e: &TiltedElement) -> bool {
        if e.u.len() != self.rank() || !self.gamma().contains(&e.n) {
            return false;
        }
        let value = |r: &LatticeVector| {
            let ur: BigInt = e.u.coords().iter().zip(r.coords()).map(|(a, b)| a * b).sum();
            Rat::from_int(ur) + &e.n * Rat::from_int(r.last().clone())
        };
        self.cone.cone().rays().iter().all(|r| !value(r).is_negative())
            && self.cone.cone().lineality().iter().all(|l| value(l).is_zero())
    }
}

fn element(y: &[i128], d: u64) -> TiltedElement {
    let (u, m) = y.split_at(y.len() - 1);
    TiltedElement { u: LatticeVector::new(u.iter().map(|&x| BigInt::from(x)).collect()), n: Rat::new(m[0], d) }
}

pub fn tilted_semigroup(cone: &AdmissibleCone) -> Result<TiltedSemigroup> {
    TiltedSemigroup::new(cone)
}

/// Generators of `R[U_delta]` as an `R`-algebra: the Hilbert basis without
/// elements with `u = 0`, which are powers of the uniformizer and lie in `R`.
pub fn algebra_generators(s: &TiltedSemigroup) -> Vec<TiltedElement> {
    s.hilbert_basis.iter().filter(|e| !e.u.is_zero()).cloned().collect()
}

/// `prod left = p^uniformizer * prod right`, with sides given as indices into the
/// Hilbert basis (repeated for powers).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct BinomialRelation {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub uniformizer: Rat,
}

impl BinomialRelation {
    pub fn degree(&self) -> usize {
        self.left.len().max(self.right.len())
    }

    /// Renders with the given names for the Hilbert basis elements.
    pub fn render(&self, names: &[String], uniformizer: &str) -> String {
        let side = |idx: &[usize], p: Option<String>| {
            let mut parts: Vec<String> = p.into_iter().collect();
            parts.extend(idx.iter().map(|&i| names[i].clone()));
            if parts.is_empty() {
                "1".to_string()
            } else {
                parts.join("*")
            }
        };
        format!("{} = {}", side(&self.left, None), side(&self.right, power(uniformizer, &self.uniformizer)))
    }
}

/// Names for the Hilbert basis: `x, y, z, w` (or `x1, x2, ...` when there are
/// more than four) for algebra generators, uniformizer powers for `u = 0`.
pub fn generator_names(s: &TiltedSemigroup, uniformizer: &str) -> Vec<String> {
    let gens = s.hilbert_basis.iter().filter(|e| !e.u.is_zero()).count();
    let mut k = 0;
    s.hilbert_basis
        .iter()
        .map(|e| {
            if e.u.is_zero() {
                return power(uniformizer, &e.n).unwrap_or_else(|| "1".into());
            }
            k += 1;
            if gens <= 4 {
                ["x", "y", "z", "w"][k - 1].to_string()
            } else {
                format!("x{k}")
            }
        })
        .collect()
}

/// All multisets of `0..n` of size `1..=max`, as count vectors.
fn multisets(n: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(i: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            if cur.iter().sum::<usize>() > 0 {
                out.push(cur.clone());
            }
            return;
        }
        for c in 0..=left {
            cur[i] = c;
            rec(i + 1, left - c, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, max, &mut vec![0; n], &mut out);
    out
}

fn indices(counts: &[usize]) -> Vec<usize> {
    counts.iter().enumerate().flat_map(|(i, &c)| std::iter::repeat_n(i, c)).collect()
}

/// Minimal binomial identities of degree at most `bound` among the Hilbert
/// basis, followed by the ways of writing the uniformizer `(0, 1/d)` as a
/// product of basis elements when it is not itself a basis element.
///
/// An identity `sum(A) = sum(B)` is minimal when `A` and `B` have disjoint
/// support and no proper sub-identity `A' <= A, B' <= B` exists.
pub fn binomial_relations(s: &TiltedSemigroup, bound: usize) -> Result<Vec<BinomialRelation>> {
    if bound < 2 {
        return Err(Error::InvalidValue(format!("degree bound {bound} is below 2")));
    }
    let d = s.rescale as i128;
    let vecs: Vec<Vec<i128>> = s
        .hilbert_basis
        .iter()
        .map(|e| {
            let mut v: Vec<i128> = e.u.coords().iter().map(to_i128).collect::<Result<_>>()?;
            v.push(to_i128(&(&e.n * Rat::from_int(d)).to_integer().expect("n lies in Gamma"))?);
            Ok(v)
        })
        .collect::<Result<_>>()?;
    let width = s.rank() + 1;
    let sum = |counts: &[usize]| -> Vec<i128> {
        let mut out = vec![0i128; width];
        for (v, &c) in vecs.iter().zip(counts) {
            for (o, x) in out.iter_mut().zip(v) {
                *o += x * c as i128;
            }
        }
        out
    };
    let all = multisets(vecs.len(), bound);
    let mut by_sum: BTreeMap<Vec<i128>, Vec<&Vec<usize>>> = BTreeMap::new();
    for m in &all {
        by_sum.entry(sum(m)).or_default().push(m);
    }
    let sub_multisets = |m: &[usize]| -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for &c in m {
            out = out.into_iter().flat_map(|p: Vec<usize>| (0..=c).map(move |k| [p.clone(), vec![k]].concat())).collect();
        }
        out
    };
    let mut rels = Vec::new();
    for group in by_sum.values() {
        for (i, a) in group.iter().enumerate() {
            for b in &group[i + 1..] {
                if a.iter().zip(b.iter()).any(|(x, y)| *x > 0 && *y > 0) {
                    continue;
                }
                let subs_b = sub_multisets(b);
                let proper = sub_multisets(a).into_iter().any(|a2| {
                    subs_b.iter().any(|b2| {
                        let empty = a2.iter().all(|&x| x == 0) && b2.iter().all(|&x| x == 0);
                        let whole = a2 == **a && *b2 == **b;
                        !empty && !whole && sum(&a2) == sum(b2)
                    })
                });
                if !proper {
                    rels.push(BinomialRelation { left: indices(a), right: indices(b), uniformizer: Rat::zero() });
                }
            }
        }
    }
    let mut pi = vec![0i128; width];
    pi[width - 1] = 1;
    if !vecs.contains(&pi) {
        if let Some(group) = by_sum.get(&pi) {
            for m in group {
                rels.push(BinomialRelation { left: indices(m), right: vec![], uniformizer: Rat::new(1, s.rescale) });
            }
        }
    }
    rels.sort_by_key(|r| (!r.uniformizer.is_zero(), r.degree(), r.left.clone(), r.right.clone()));
    Ok(rels)
}

impl fmt::Display for TiltedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {})", self.u, self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::Polyhedron;

    fn cone(rays: &[&[i64]], gamma: u64) -> AdmissibleCone {
        let rays: Vec<LatticeVector> = rays.iter().map(|r| LatticeVector::from_i64(r)).collect();
        AdmissibleCone::new(Cone::from_generators(rays[0].len(), &rays, &[]).unwrap(), ValueGroup::new(gamma).unwrap()).unwrap()
    }

    fn el(u: &[i64], n: Rat) -> TiltedElement {
        TiltedElement { u: LatticeVector::from_i64(u), n }
    }

    fn int(k: i64) -> Rat {
        Rat::from_int(k)
    }

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn p1_charts() {
        let t = names(&["t"]);
        let middle = tilted_semigroup(&cone(&[&[0, 1], &[1, 1]], 1)).unwrap();
        assert_eq!(middle.hilbert_basis(), &[el(&[1], int(0)), el(&[-1], int(1))]);
        let rendered: Vec<String> = algebra_generators(&middle).iter().map(|e| e.render(&t, "p")).collect();
        assert_eq!(rendered, vec!["t", "p*t^-1"]);
        let rels = binomial_relations(&middle, 2).unwrap();
        assert_eq!(rels.len(), 1);
        assert_eq!(rels[0].render(&generator_names(&middle, "p"), "p"), "x*y = p");

        let left = tilted_semigroup(&cone(&[&[-1, 0], &[0, 1]], 1)).unwrap();
        assert_eq!(left.hilbert_basis(), &[el(&[-1], int(0)), el(&[0], int(1))]);
        let gens: Vec<String> = algebra_generators(&left).iter().map(|e| e.render(&t, "p")).collect();
        assert_eq!(gens, vec!["t^-1"]);
        assert!(binomial_relations(&left, 3).unwrap().is_empty());

        let right = tilted_semigroup(&cone(&[&[1, 1], &[1, 0]], 1)).unwrap();
        assert_eq!(right.hilbert_basis(), &[el(&[0], int(1)), el(&[1], int(-1))]);
        let gens: Vec<String> = algebra_generators(&right).iter().map(|e| e.render(&t, "p")).collect();
        assert_eq!(gens, vec!["p^-1*t"]);
    }

    #[test]
    fn upper_halfspace_has_no_generators() {
        let half = AdmissibleCone::new(
            Cone::from_generators(2, &[LatticeVector::from_i64(&[0, 1])], &[LatticeVector::from_i64(&[1, 0])]).unwrap(),
            ValueGroup::integers(),
        )
        .unwrap();
        let s = tilted_semigroup(&half).unwrap();
        assert_eq!(s.hilbert_basis(), &[el(&[0], int(1))]);
        assert!(algebra_generators(&s).is_empty());
        assert!(s.units().is_empty());
    }

    #[test]
    fn ray_has_units() {
        // the cone over the vertex 0 of R: S = {(u, n) : n >= 0}
        let s = tilted_semigroup(&cone(&[&[0, 1]], 1)).unwrap();
        assert_eq!(s.units().len(), 1);
        assert!(s.units()[0].n.is_zero());
        assert_eq!(s.hilbert_basis().len(), 1);
        assert!(s.contains(&el(&[5], int(0))));
    }

    #[test]
    fn unit_square() {
        let sq = Polyhedron::from_points(
            2,
            &[[0, 0], [1, 0], [0, 1], [1, 1]].iter().map(|p| crate::QVector::from_i64(p)).collect::<Vec<_>>(),
            &[],
            &[],
        )
        .unwrap();
        let s = tilted_semigroup(&crate::polyhedra::cone_over(&sq, &ValueGroup::integers()).unwrap()).unwrap();
        assert_eq!(s.hilbert_basis().len(), 4);
        let rels = binomial_relations(&s, 2).unwrap();
        let semigroup: Vec<_> = rels.iter().filter(|r| r.uniformizer.is_zero()).collect();
        assert_eq!(semigroup.len(), 1);
        assert_eq!(semigroup[0].degree(), 2);
    }

    #[test]
    fn half_integral_value_group() {
        // cone over [0, 1/2] with Gamma = (1/2) Z: <u,v> + n c >= 0 at (0,1) and (1/2,1)
        let s = tilted_semigroup(&cone(&[&[0, 2], &[1, 2]], 2)).unwrap();
        assert_eq!(s.hilbert_basis(), &[el(&[1], int(0)), el(&[-1], Rat::new(1, 2))]);
        let rels = binomial_relations(&s, 2).unwrap();
        assert_eq!(rels[0].render(&generator_names(&s, "p"), "p"), "x*y = p^(1/2)");
    }

    #[test]
    fn cone_with_large_parallelepiped() {
        // cone{(1,0,0)... } in extended dim 3, dual has a non-unimodular simplex
        let s = tilted_semigroup(&cone(&[&[0, 0, 1], &[3, 1, 1], &[0, 1, 1]], 1)).unwrap();
        for e in s.hilbert_basis() {
            assert!(s.contains(e));
        }
        assert!(s.hilbert_basis().len() >= 3);
    }
}
