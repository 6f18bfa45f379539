//! Brute-force reference computations, kept independent of the double
//! description and triangulation code they are used to check.

use std::collections::HashMap;

use crate::exactnum::{QVector, Rat};
use crate::linalg::{rank, solve_square};
use crate::polyhedra::{PolyhedralComplex, Polyhedron};
use crate::valpoly::LaurentPolynomial;

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Whether `p` is a convex combination of `pts`, by trying every affinely
/// independent subset (Caratheodory).
fn in_hull(p: &QVector, pts: &[QVector]) -> bool {
    let n = p.len();
    for k in 1..=(n + 1).min(pts.len()) {
        for s in subsets(pts.len(), k) {
            // sum l_i pts_i = p with sum l_i = 1
            let rows: Vec<Vec<Rat>> = (0..=n)
                .map(|r| {
                    let mut row: Vec<Rat> =
                        s.iter().map(|&i| if r < n { pts[i][r].clone() } else { Rat::one() }).collect();
                    row.push(if r < n { p[r].clone() } else { Rat::one() });
                    row
                })
                .collect();
            let a: Vec<Vec<Rat>> = rows.iter().map(|r| r[..k].to_vec()).collect();
            if rank(&a, k) != k {
                continue;
            }
            // pick k independent rows to get a square system, then verify all rows
            let mut chosen: Vec<usize> = Vec::new();
            for r in 0..=n {
                let mut trial: Vec<Vec<Rat>> = chosen.iter().map(|&c| a[c].clone()).collect();
                trial.push(a[r].clone());
                if rank(&trial, k) == trial.len() {
                    chosen.push(r);
                }
                if chosen.len() == k {
                    break;
                }
            }
            let sq: Vec<Vec<Rat>> = chosen.iter().map(|&c| a[c].clone()).collect();
            let b: Vec<Rat> = chosen.iter().map(|&c| rows[c][k].clone()).collect();
            let Some(l) = solve_square(&sq, &b) else { continue };
            let ok = rows.iter().all(|row| {
                let lhs: Rat = row[..k].iter().zip(&l).map(|(x, y)| x * y).sum();
                lhs == row[k]
            });
            if ok && l.iter().all(|x| !x.is_negative()) {
                return true;
            }
        }
    }
    false
}

/// Vertices of the convex hull of finitely many points, by testing each point
/// against the hull of the others.
pub fn hull_vertices(points: &[QVector]) -> Vec<QVector> {
    let mut pts: Vec<QVector> = points.to_vec();
    pts.sort();
    pts.dedup();
    let mut out: Vec<QVector> = pts
        .iter()
        .enumerate()
        .filter(|(i, p)| {
            let others: Vec<QVector> = pts.iter().enumerate().filter(|(j, _)| j != i).map(|(_, q)| q.clone()).collect();
            !in_hull(p, &others)
        })
        .map(|(_, p)| p.clone())
        .collect();
    out.sort();
    out
}

/// Vertices of the Minkowski sum of two point configurations' hulls.
pub fn minkowski_vertices(a: &[QVector], b: &[QVector]) -> Vec<QVector> {
    let sums: Vec<QVector> = a.iter().flat_map(|p| b.iter().map(move |q| p.add(q))).collect();
    hull_vertices(&sums)
}

/// Whether the tropical minimum of `f` at `v` is attained by two or more terms,
/// by direct enumeration.
pub fn minimum_attained_twice(f: &LaurentPolynomial, v: &QVector) -> bool {
    let values: Vec<Rat> = f
        .terms()
        .iter()
        .map(|(u, c)| {
            let s: Rat = u.coords().iter().zip(v.coords()).map(|(a, b)| Rat::from_int(a.clone()) * b).sum();
            s + &c.valuation
        })
        .collect();
    let Some(m) = values.iter().min() else { return false };
    values.iter().filter(|x| *x == m).count() >= 2
}

/// All nonempty pairwise intersections of cells of two complexes.
pub fn pairwise_intersections(a: &PolyhedralComplex, b: &PolyhedralComplex) -> Vec<Polyhedron> {
    let mut out: Vec<Polyhedron> = a
        .cells()
        .iter()
        .flat_map(|p| b.cells().iter().map(move |q| p.intersection(q)))
        .filter(|p| !p.is_empty())
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Membership and decomposition checks for a pointed semigroup
/// `S = {y in Z^k : <y, r> >= 0 for all r in rays}` and a candidate basis.
pub struct SemigroupOracle {
    rays: Vec<Vec<i128>>,
    /// A functional strictly positive on `S \ {0}`.
    grading: Vec<i128>,
}

impl SemigroupOracle {
    /// `rays` must span a full-dimensional cone, so that their sum grades `S`.
    pub fn new(rays: Vec<Vec<i128>>) -> SemigroupOracle {
        let k = rays.first().map_or(0, Vec::len);
        let grading = (0..k).map(|i| rays.iter().map(|r| r[i]).sum()).collect();
        SemigroupOracle { rays, grading }
    }

    pub fn contains(&self, y: &[i128]) -> bool {
        self.rays.iter().all(|r| r.iter().zip(y).map(|(a, b)| a * b).sum::<i128>() >= 0)
    }

    pub fn degree(&self, y: &[i128]) -> i128 {
        self.grading.iter().zip(y).map(|(a, b)| a * b).sum()
    }

    /// Whether `y` is a nonnegative integer combination of `basis`, by memoized
    /// search over `y - h`, which terminates because the degree drops.
    pub fn decomposes(&self, y: &[i128], basis: &[Vec<i128>], memo: &mut HashMap<Vec<i128>, bool>) -> bool {
        if y.iter().all(|&c| c == 0) {
            return true;
        }
        if let Some(&r) = memo.get(y) {
            return r;
        }
        let mut ok = false;
        for h in basis {
            let rest: Vec<i128> = y.iter().zip(h).map(|(a, b)| a - b).collect();
            if self.contains(&rest) && self.degree(&rest) < self.degree(y) && self.decomposes(&rest, basis, memo) {
                ok = true;
                break;
            }
        }
        memo.insert(y.to_vec(), ok);
        ok
    }

    /// Lattice points of `S` in the box `[-m, m]^k`.
    pub fn box_points(&self, m: i128) -> Vec<Vec<i128>> {
        let k = self.grading.len();
        let mut out = Vec::new();
        let mut y = vec![-m; k];
        loop {
            if self.contains(&y) {
                out.push(y.clone());
            }
            let mut i = 0;
            loop {
                if i == k {
                    return out;
                }
                y[i] += 1;
                if y[i] <= m {
                    break;
                }
                y[i] = -m;
                i += 1;
            }
        }
    }
}

/// Result of checking a Hilbert basis against the box oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisVerdict {
    pub box_points: usize,
    pub undecomposed: Vec<Vec<i128>>,
    pub dispensable: Vec<Vec<i128>>,
    pub outside: Vec<Vec<i128>>,
}

impl BasisVerdict {
    pub fn ok(&self) -> bool {
        self.undecomposed.is_empty() && self.dispensable.is_empty() && self.outside.is_empty()
    }
}

/// Checks that `basis` generates every point of `S` in the box and that no
/// element can be dropped.
pub fn verify_basis(oracle: &SemigroupOracle, basis: &[Vec<i128>], m: i128) -> BasisVerdict {
    let outside = basis.iter().filter(|h| !oracle.contains(h)).cloned().collect();
    let pts = oracle.box_points(m);
    let mut memo = HashMap::new();
    let undecomposed = pts.iter().filter(|y| !oracle.decomposes(y, basis, &mut memo)).cloned().collect();
    let dispensable = basis
        .iter()
        .enumerate()
        .filter(|(i, h)| {
            let rest: Vec<Vec<i128>> = basis.iter().enumerate().filter(|(j, _)| j != i).map(|(_, g)| g.clone()).collect();
            oracle.decomposes(h, &rest, &mut HashMap::new())
        })
        .map(|(_, h)| h.clone())
        .collect();
    BasisVerdict { box_points: pts.len(), undecomposed, dispensable, outside }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(c: &[i64]) -> QVector {
        QVector::from_i64(c)
    }

    #[test]
    fn hull_of_six_points() {
        let pts: Vec<QVector> = [[2, 0], [1, 1], [0, 2], [1, 0], [0, 1], [0, 0]].iter().map(|p| q(p)).collect();
        assert_eq!(hull_vertices(&pts), vec![q(&[0, 0]), q(&[0, 2]), q(&[2, 0])]);
    }

    #[test]
    fn minkowski_of_segments() {
        let a = [q(&[0, 0]), q(&[1, 0])];
        let b = [q(&[0, 0]), q(&[0, 1])];
        assert_eq!(minkowski_vertices(&a, &b).len(), 4);
    }

    #[test]
    fn semigroup_oracle_on_a_quadrant() {
        let o = SemigroupOracle::new(vec![vec![1, 0], vec![0, 1]]);
        let good = verify_basis(&o, &[vec![1, 0], vec![0, 1]], 3);
        assert!(good.ok());
        assert_eq!(good.box_points, 16);
        let redundant = verify_basis(&o, &[vec![1, 0], vec![0, 1], vec![1, 1]], 3);
        assert_eq!(redundant.dispensable, vec![vec![1, 1]]);
        let short = verify_basis(&o, &[vec![1, 0]], 3);
        assert!(!short.undecomposed.is_empty());
    }
}
