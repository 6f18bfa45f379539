//! Small exact linear algebra over Q and Z.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::exactnum::{LatticeVector, Rat};

/// Scales a rational vector to a primitive integral one (same direction).
pub fn integral_direction(v: &[Rat]) -> LatticeVector {
    let l = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let scaled: Vec<BigInt> = v.iter().map(|c| (c * Rat::from_int(l.clone())).to_integer().unwrap()).collect();
    LatticeVector::new(scaled).primitive()
}

pub fn to_rat(v: &LatticeVector) -> Vec<Rat> {
    v.coords().iter().map(|c| Rat::from_int(c.clone())).collect()
}

/// Reduced row echelon form, pivoting on columns in the given order.
/// Returns the nonzero rows and their pivot columns.
fn rref_with_order(rows: &[Vec<Rat>], order: &[usize]) -> (Vec<Vec<Rat>>, Vec<usize>) {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for &col in order {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][col].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &(&f * y);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rref(rows: &[Vec<Rat>], ncols: usize) -> (Vec<Vec<Rat>>, Vec<usize>) {
    let order: Vec<usize> = (0..ncols).collect();
    rref_with_order(rows, &order)
}

pub fn rank(rows: &[Vec<Rat>], ncols: usize) -> usize {
    rref(rows, ncols).0.len()
}

pub fn rank_int(rows: &[LatticeVector], ncols: usize) -> usize {
    let r: Vec<Vec<Rat>> = rows.iter().map(to_rat).collect();
    rank(&r, ncols)
}

/// Basis of `{x : row . x = 0 for all rows}`.
pub fn nullspace(rows: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let (m, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rat::zero(); ncols];
            x[f] = Rat::one();
            for (row, &p) in m.iter().zip(&pivots) {
                x[p] = -&row[f];
            }
            x
        })
        .collect()
}

/// A canonical basis of a linear subspace of `Q^n`: reduced echelon form with
/// pivots chosen from the last coordinate backwards, each row scaled to a
/// primitive integral vector whose pivot is positive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Subspace {
    basis: Vec<LatticeVector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(vectors: &[LatticeVector], n: usize) -> Subspace {
        let rows: Vec<Vec<Rat>> = vectors.iter().map(to_rat).collect();
        Subspace::span_rat(&rows, n)
    }

    pub fn span_rat(rows: &[Vec<Rat>], n: usize) -> Subspace {
        let order: Vec<usize> = (0..n).rev().collect();
        let (m, pivots) = rref_with_order(rows, &order);
        let mut pairs: Vec<(usize, LatticeVector)> =
            m.iter().zip(&pivots).map(|(row, &p)| (p, integral_direction(row))).collect();
        pairs.sort_by_key(|p| std::cmp::Reverse(p.0));
        Subspace { pivots: pairs.iter().map(|p| p.0).collect(), basis: pairs.into_iter().map(|p| p.1).collect() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[LatticeVector] {
        &self.basis
    }

    /// The representative of `v + self` vanishing on every pivot column.
    pub fn reduce(&self, v: &LatticeVector) -> LatticeVector {
        let mut x: Vec<Rat> = to_rat(v);
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            if x[p].is_zero() {
                continue;
            }
            let f = &x[p] / Rat::from_int(b[p].clone());
            for (xi, bi) in x.iter_mut().zip(b.coords()) {
                *xi -= &(&f * Rat::from_int(bi.clone()));
            }
        }
        integral_direction(&x)
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        self.reduce(v).is_zero()
    }
}

/// Solves `A x = b` for square nonsingular `A`; `None` when singular.
pub fn solve_square(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    let aug: Vec<Vec<Rat>> = a.iter().zip(b).map(|(row, bi)| {
        let mut r = row.clone();
        r.push(bi.clone());
        r
    }).collect();
    let (m, pivots) = rref(&aug, n + 1);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(m.iter().map(|row| row[n].clone()).collect())
}

/// Unimodular column reduction: returns `(h, q)` with `a * q = [h | 0]`,
/// where `h` has `rank(a)` columns and `q` is unimodular (given as columns).
/// The trailing columns of `q` form a lattice basis of the integer kernel.
pub fn column_hermite(a: &[Vec<i64>], ncols: usize) -> (usize, Vec<Vec<i128>>) {
    // q starts as identity; columns of the working matrix are combined with
    // the same operations applied to q.
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut q: Vec<Vec<i128>> = (0..ncols).map(|i| (0..ncols).map(|j| i128::from(i == j)).collect()).collect();
    let mut col = 0;
    for row in 0..m.len() {
        if col == ncols {
            break;
        }
        loop {
            // pick the column (>= col) with smallest nonzero |entry| in this row
            let best = (col..ncols).filter(|&j| m[row][j] != 0).min_by_key(|&j| m[row][j].abs());
            let Some(b) = best else { break };
            swap_cols(&mut m, &mut q, col, b);
            let mut done = true;
            for j in col + 1..ncols {
                if m[row][j] != 0 {
                    let f = m[row][j].div_euclid(m[row][col]);
                    sub_col(&mut m, &mut q, j, col, f);
                    if m[row][j] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                col += 1;
                break;
            }
        }
    }
    (col, q.into_iter().map(|c| c.into_iter().collect()).collect())
}

fn swap_cols(m: &mut [Vec<i128>], q: &mut [Vec<i128>], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
    q.swap(a, b);
}

/// column j -= f * column k
fn sub_col(m: &mut [Vec<i128>], q: &mut [Vec<i128>], j: usize, k: usize, f: i128) {
    for row in m.iter_mut() {
        row[j] -= f * row[k];
    }
    let qk = q[k].clone();
    for (x, y) in q[j].iter_mut().zip(qk) {
        *x -= f * y;
    }
}

pub fn big_to_i64(v: &BigInt) -> Option<i64> {
    num_traits::ToPrimitive::to_i64(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_of_plane() {
        let rows = vec![vec![Rat::from_int(1), Rat::from_int(1), Rat::from_int(1)]];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            let s: Rat = v.iter().sum();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn subspace_reduction_is_canonical() {
        let s = Subspace::span(&[LatticeVector::from_i64(&[1, 1, 0]), LatticeVector::from_i64(&[2, 2, 0])], 3);
        assert_eq!(s.dim(), 1);
        let a = s.reduce(&LatticeVector::from_i64(&[3, 1, 1]));
        let b = s.reduce(&LatticeVector::from_i64(&[5, 3, 1]));
        assert_eq!(a, b);
        assert!(s.contains(&LatticeVector::from_i64(&[-4, -4, 0])));
    }

    #[test]
    fn column_hermite_kernel() {
        // kernel of (2 4 6) is spanned by two integral vectors
        let (r, q) = column_hermite(&[vec![2, 4, 6]], 3);
        assert_eq!(r, 1);
        for col in &q[1..] {
            assert_eq!(2 * col[0] + 4 * col[1] + 6 * col[2], 0);
        }
    }

    #[test]
    fn solves_two_by_two() {
        let a = vec![vec![Rat::from_int(1), Rat::from_int(-1)], vec![Rat::from_int(1), Rat::from_int(1)]];
        let x = solve_square(&a, &[Rat::from_int(0), Rat::from_int(2)]).unwrap();
        assert_eq!(x, vec![Rat::from_int(1), Rat::from_int(1)]);
    }
}
