use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::exactnum::{QVector, ValueGroup};

use super::cone::Cone;
use super::polyhedron::Polyhedron;

/// What a complex needs from its cells.
pub trait Cell: Clone + Ord + std::fmt::Debug {
    /// Dimension; the empty cell has dimension -1.
    fn cell_dim(&self) -> isize;
    /// All nonempty faces, including the cell itself.
    fn cell_faces(&self) -> Vec<Self>;
    /// The intersection, `None` when empty.
    fn meet(&self, other: &Self) -> Option<Self>;
    fn contains_cell(&self, other: &Self) -> bool;
}

impl Cell for Cone {
    fn cell_dim(&self) -> isize {
        self.dim() as isize
    }

    fn cell_faces(&self) -> Vec<Cone> {
        self.faces()
    }

    fn meet(&self, other: &Cone) -> Option<Cone> {
        Some(self.intersection(other))
    }

    fn contains_cell(&self, other: &Cone) -> bool {
        self.contains_cone(other)
    }
}

impl Cell for Polyhedron {
    fn cell_dim(&self) -> isize {
        self.dim()
    }

    fn cell_faces(&self) -> Vec<Polyhedron> {
        self.faces()
    }

    fn meet(&self, other: &Polyhedron) -> Option<Polyhedron> {
        let p = self.intersection(other);
        (!p.is_empty()).then_some(p)
    }

    fn contains_cell(&self, other: &Polyhedron) -> bool {
        self.contains_polyhedron(other)
    }
}

/// A finite complex of cells closed under taking faces, sorted by
/// `(dimension, canonical form)`, with its immediate-face relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex<T: Cell> {
    ambient: usize,
    cells: Vec<T>,
    facets: Vec<Vec<usize>>,
}

pub type PolyhedralComplex = Complex<Polyhedron>;
pub type Fan = Complex<Cone>;

impl<T: Cell> Complex<T> {
    /// Closes `cells` under faces and checks that any two cells meet in a common face.
    pub fn new(ambient: usize, cells: &[T]) -> Result<Complex<T>> {
        let c = Complex::new_unchecked(ambient, cells);
        c.validate()?;
        Ok(c)
    }

    /// Closes under faces without the pairwise intersection check.
    pub fn new_unchecked(ambient: usize, cells: &[T]) -> Complex<T> {
        let mut all: BTreeMap<T, Vec<T>> = BTreeMap::new();
        let mut stack: Vec<T> = cells.to_vec();
        while let Some(c) = stack.pop() {
            if all.contains_key(&c) {
                continue;
            }
            let faces = c.cell_faces();
            for f in &faces {
                if !all.contains_key(f) {
                    stack.push(f.clone());
                }
            }
            all.insert(c, faces);
        }
        let mut sorted: Vec<T> = all.keys().cloned().collect();
        sorted.sort_by(|a, b| a.cell_dim().cmp(&b.cell_dim()).then_with(|| a.cmp(b)));
        let index: BTreeMap<&T, usize> = sorted.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let facets = sorted
            .iter()
            .map(|c| {
                let mut fs: Vec<usize> =
                    all[c].iter().filter(|f| f.cell_dim() == c.cell_dim() - 1).map(|f| index[f]).collect();
                fs.sort_unstable();
                fs
            })
            .collect();
        Complex { ambient, cells: sorted, facets }
    }

    fn validate(&self) -> Result<()> {
        let maximal = self.maximal_cells();
        for (a, &i) in maximal.iter().enumerate() {
            for &j in &maximal[a + 1..] {
                if let Some(m) = self.cells[i].meet(&self.cells[j]) {
                    let ok = self.position(&m).is_some_and(|k| self.is_face(k, i) && self.is_face(k, j));
                    if !ok {
                        return Err(Error::InvalidComplex(format!(
                            "cells {:?} and {:?} do not meet in a common face",
                            self.cells[i], self.cells[j]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn cells(&self) -> &[T] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell(&self, i: usize) -> &T {
        &self.cells[i]
    }

    pub fn position(&self, c: &T) -> Option<usize> {
        self.cells.iter().position(|x| x == c)
    }

    /// Maximum cell dimension (-1 when empty).
    pub fn dim(&self) -> isize {
        self.cells.last().map_or(-1, |c| c.cell_dim())
    }

    /// Indices of cells of the given dimension.
    pub fn cells_of_dim(&self, d: isize) -> Vec<usize> {
        (0..self.cells.len()).filter(|&i| self.cells[i].cell_dim() == d).collect()
    }

    /// Immediate faces (one dimension lower) of cell `i`.
    pub fn facets_of(&self, i: usize) -> &[usize] {
        &self.facets[i]
    }

    /// Cells having `i` as an immediate face.
    pub fn cofacets_of(&self, i: usize) -> Vec<usize> {
        (0..self.cells.len()).filter(|&j| self.facets[j].contains(&i)).collect()
    }

    /// Whether cell `i` is a face of cell `j` (reflexive).
    pub fn is_face(&self, i: usize, j: usize) -> bool {
        if i == j {
            return true;
        }
        self.facets[j].iter().any(|&k| self.is_face(i, k))
    }

    /// All faces of `j`, including `j`.
    pub fn faces_of(&self, j: usize) -> Vec<usize> {
        let mut out = BTreeSet::new();
        let mut stack = vec![j];
        while let Some(k) = stack.pop() {
            if out.insert(k) {
                stack.extend(self.facets[k].iter().copied());
            }
        }
        out.into_iter().collect()
    }

    /// All cells having `i` as a face, including `i`.
    pub fn star_of(&self, i: usize) -> Vec<usize> {
        (0..self.cells.len()).filter(|&j| self.is_face(i, j)).collect()
    }

    pub fn maximal_cells(&self) -> Vec<usize> {
        let mut is_facet = vec![false; self.cells.len()];
        for fs in &self.facets {
            for &f in fs {
                is_facet[f] = true;
            }
        }
        (0..self.cells.len()).filter(|&i| !is_facet[i]).collect()
    }

    pub fn is_pure(&self) -> bool {
        let d = self.dim();
        self.maximal_cells().iter().all(|&i| self.cells[i].cell_dim() == d)
    }

    /// Certificate that the support is the whole ambient space: the complex is
    /// pure of full dimension and every codimension-one cell lies in exactly two
    /// maximal cells.
    pub fn is_complete(&self) -> bool {
        let n = self.ambient as isize;
        if self.cells.is_empty() || self.dim() != n || !self.is_pure() {
            return false;
        }
        self.cells_of_dim(n - 1).into_iter().all(|i| self.cofacets_of(i).len() == 2)
    }

    /// For each cell of `self`, the smallest cell of `coarser` containing it.
    pub fn cell_map_into(&self, coarser: &Complex<T>) -> Vec<Option<usize>> {
        self.cells
            .iter()
            .map(|c| {
                // cells are sorted by dimension, so the first hit is minimal
                (0..coarser.cells.len()).find(|&j| coarser.cells[j].contains_cell(c))
            })
            .collect()
    }

    /// Whether every cell of `self` lies in some cell of `coarser`.
    pub fn refines(&self, coarser: &Complex<T>) -> bool {
        self.ambient == coarser.ambient && self.cell_map_into(coarser).iter().all(Option::is_some)
    }

    /// Common refinement: all intersections of maximal cells, closed under faces.
    pub fn common_refinement(&self, other: &Complex<T>) -> Result<Complex<T>> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        let mut pieces = BTreeSet::new();
        for &i in &self.maximal_cells() {
            for &j in &other.maximal_cells() {
                if let Some(m) = self.cells[i].meet(&other.cells[j]) {
                    pieces.insert(m);
                }
            }
        }
        let pieces: Vec<T> = pieces.into_iter().collect();
        Complex::new(self.ambient, &pieces)
    }

    /// Whether the given cells (all of the dimension of `target` and contained in it) cover it:
    /// every facet of a piece lies in the relative boundary of `target` or is shared by exactly
    /// two pieces.
    pub fn pieces_cover(target: &T, pieces: &[T]) -> bool {
        if pieces.is_empty() || pieces.iter().any(|p| p.cell_dim() != target.cell_dim() || !target.contains_cell(p)) {
            return false;
        }
        let boundary: Vec<T> = target.cell_faces().into_iter().filter(|f| f.cell_dim() < target.cell_dim()).collect();
        let mut count: BTreeMap<T, usize> = BTreeMap::new();
        for p in pieces {
            for f in p.cell_faces() {
                if f.cell_dim() == p.cell_dim() - 1 {
                    *count.entry(f).or_default() += 1;
                }
            }
        }
        count.iter().all(|(f, &k)| k == 2 || (k == 1 && boundary.iter().any(|b| b.contains_cell(f))))
    }
}

impl PolyhedralComplex {
    pub fn vertices(&self) -> Vec<QVector> {
        self.cells_of_dim(0).into_iter().map(|i| self.cells[i].vertices()[0].clone()).collect()
    }

    pub fn vertex_index(&self, v: &QVector) -> Option<usize> {
        self.cells_of_dim(0).into_iter().find(|&i| self.cells[i].vertices()[0] == *v)
    }

    pub fn support_contains(&self, v: &QVector) -> bool {
        self.cells.iter().any(|c| c.contains(v))
    }

    /// The unique cell whose relative interior contains `v`.
    pub fn locate(&self, v: &QVector) -> Option<usize> {
        (0..self.cells.len()).find(|&i| self.cells[i].contains(v))
    }

    pub fn is_gamma_rational(&self, g: &ValueGroup) -> bool {
        self.cells.iter().all(|c| c.is_gamma_rational(g))
    }
}

impl Fan {
    /// Primitive generators of the one-dimensional cones (for pointed fans).
    pub fn rays(&self) -> Vec<crate::exactnum::LatticeVector> {
        self.cells
            .iter()
            .filter(|c| c.dim() == 1 && c.is_pointed())
            .map(|c| c.rays()[0].clone())
            .collect()
    }
}
