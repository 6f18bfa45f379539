use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::dd::{generators_of, Generators};
use crate::error::{Error, Result};
use crate::exactnum::{LatticeVector, Rat};
use crate::linalg::Subspace;

/// A rational polyhedral cone in `Q^d`, stored with canonical H- and
/// V-representations. Two cones are equal iff they are the same set.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cone {
    ambient: usize,
    rays: Vec<LatticeVector>,
    lineality: Subspace,
    facets: Vec<LatticeVector>,
    equations: Subspace,
}

fn check_len(ambient: usize, vs: &[LatticeVector]) -> Result<()> {
    match vs.iter().find(|v| v.len() != ambient) {
        Some(v) => Err(Error::Dimension { expected: ambient, found: v.len() }),
        None => Ok(()),
    }
}

pub(crate) fn dot_rat(u: &LatticeVector, x: &[Rat]) -> Rat {
    u.coords().iter().zip(x).map(|(a, b)| b * Rat::from_int(a.clone())).sum()
}

impl Cone {
    /// `{x : a . x >= 0 for a in ineqs, e . x = 0 for e in eqs}`.
    pub fn from_inequalities(ambient: usize, ineqs: &[LatticeVector], eqs: &[LatticeVector]) -> Result<Cone> {
        check_len(ambient, ineqs)?;
        check_len(ambient, eqs)?;
        Ok(Cone::from_v(ambient, generators_of(ambient, ineqs, eqs)))
    }

    /// `cone(rays) + span(lineality)`.
    pub fn from_generators(ambient: usize, rays: &[LatticeVector], lineality: &[LatticeVector]) -> Result<Cone> {
        check_len(ambient, rays)?;
        check_len(ambient, lineality)?;
        let h = generators_of(ambient, rays, lineality);
        let v = generators_of(ambient, &h.rays, h.lineality.basis());
        Ok(Cone { ambient, rays: v.rays, lineality: v.lineality, facets: h.rays, equations: h.lineality })
    }

    fn from_v(ambient: usize, v: Generators) -> Cone {
        let h = generators_of(ambient, &v.rays, v.lineality.basis());
        Cone { ambient, rays: v.rays, lineality: v.lineality, facets: h.rays, equations: h.lineality }
    }

    /// The whole space `Q^d`.
    pub fn full(ambient: usize) -> Cone {
        Cone::from_inequalities(ambient, &[], &[]).expect("no constraints")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.ambient - self.equations.dim()
    }

    /// Extreme rays, primitive and reduced modulo the lineality space.
    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn lineality(&self) -> &[LatticeVector] {
        self.lineality.basis()
    }

    pub fn lineality_dim(&self) -> usize {
        self.lineality.dim()
    }

    /// Inner facet normals, reduced modulo the equations.
    pub fn facets(&self) -> &[LatticeVector] {
        &self.facets
    }

    pub fn equations(&self) -> &[LatticeVector] {
        self.equations.basis()
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.dim() == 0
    }

    pub fn contains_point(&self, x: &[Rat]) -> bool {
        self.facets.iter().all(|f| !dot_rat(f, x).is_negative()) && self.equations().iter().all(|e| dot_rat(e, x).is_zero())
    }

    pub fn contains_vector(&self, x: &LatticeVector) -> bool {
        self.facets.iter().all(|f| !f.dot(x).is_negative()) && self.equations().iter().all(|e| e.dot(x).is_zero())
    }

    /// Points of `x` strictly inside: on every equation, strictly positive on every facet.
    pub fn relative_interior_contains(&self, x: &[Rat]) -> bool {
        self.facets.iter().all(|f| dot_rat(f, x).is_positive()) && self.equations().iter().all(|e| dot_rat(e, x).is_zero())
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.rays.iter().all(|r| self.contains_vector(r))
            && other.lineality().iter().all(|l| self.contains_vector(l) && self.contains_vector(&l.neg()))
    }

    pub fn intersection(&self, other: &Cone) -> Cone {
        let mut ineqs = self.facets.clone();
        ineqs.extend(other.facets.iter().cloned());
        let mut eqs = self.equations().to_vec();
        eqs.extend(other.equations().iter().cloned());
        Cone::from_v(self.ambient, generators_of(self.ambient, &ineqs, &eqs))
    }

    /// A point in the relative interior (the sum of the extreme rays).
    pub fn relative_interior_point(&self) -> LatticeVector {
        self.rays.iter().fold(LatticeVector::zero(self.ambient), |acc, r| acc.add(r))
    }

    /// The facets tight on every generator of `sub` (which must lie in `self`).
    fn tight_facets(&self, sub: &Cone) -> Vec<LatticeVector> {
        self.facets
            .iter()
            .filter(|f| sub.rays.iter().all(|r| f.dot(r).is_zero()))
            .cloned()
            .collect()
    }

    /// The smallest face of `self` containing `sub`.
    pub fn minimal_face_containing(&self, sub: &Cone) -> Cone {
        let mut eqs = self.equations().to_vec();
        eqs.extend(self.tight_facets(sub));
        Cone::from_v(self.ambient, generators_of(self.ambient, &self.facets, &eqs))
    }

    pub fn is_face_of(&self, other: &Cone) -> bool {
        other.contains_cone(self) && other.minimal_face_containing(self) == *self
    }

    /// All nonempty faces, including `self` and the lineality space.
    pub fn faces(&self) -> Vec<Cone> {
        let masks: Vec<Vec<usize>> = self
            .facets
            .iter()
            .map(|f| (0..self.rays.len()).filter(|&i| f.dot(&self.rays[i]).is_zero()).collect())
            .collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut stack = vec![(0..self.rays.len()).collect::<Vec<usize>>()];
        while let Some(s) = stack.pop() {
            if !seen.insert(s.clone()) {
                continue;
            }
            for m in &masks {
                let t: Vec<usize> = s.iter().copied().filter(|i| m.contains(i)).collect();
                if !seen.contains(&t) {
                    stack.push(t);
                }
            }
        }
        seen.into_iter()
            .map(|s| {
                let rays: Vec<LatticeVector> = s.iter().map(|&i| self.rays[i].clone()).collect();
                Cone::from_generators(self.ambient, &rays, self.lineality()).expect("same ambient")
            })
            .collect()
    }

    /// Image under dropping the last coordinate, for cones inside `{x_last = 0}`.
    pub fn truncate_last(&self) -> Result<Cone> {
        if self.rays.iter().chain(self.lineality()).any(|r| !r.last().is_zero()) {
            return Err(Error::Inconsistent("cone is not contained in the last-coordinate hyperplane".into()));
        }
        let rays: Vec<LatticeVector> = self.rays.iter().map(|r| r.truncate_last()).collect();
        let lin: Vec<LatticeVector> = self.lineality().iter().map(|r| r.truncate_last()).collect();
        Cone::from_generators(self.ambient - 1, &rays, &lin)
    }

    pub fn to_json(&self) -> ConeJson {
        ConeJson {
            ambient: self.ambient,
            dim: self.dim(),
            rays: self.rays.clone(),
            lineality: self.lineality().to_vec(),
            facets: self.facets.clone(),
            equations: self.equations().to_vec(),
        }
    }
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cone(rays={:?}", self.rays)?;
        if self.lineality.dim() > 0 {
            write!(f, ", lineality={:?}", self.lineality())?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeJson {
    pub ambient: usize,
    pub dim: usize,
    pub rays: Vec<LatticeVector>,
    pub lineality: Vec<LatticeVector>,
    pub facets: Vec<LatticeVector>,
    pub equations: Vec<LatticeVector>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(c: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(c)
    }

    #[test]
    fn h_and_v_agree() {
        let a = Cone::from_generators(2, &[lv(&[0, 1]), lv(&[1, 1])], &[]).unwrap();
        let b = Cone::from_inequalities(2, &[lv(&[1, 0]), lv(&[-1, 1])], &[]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.dim(), 2);
    }

    #[test]
    fn redundant_generators_are_pruned() {
        let a = Cone::from_generators(2, &[lv(&[0, 1]), lv(&[1, 1]), lv(&[1, 2]), lv(&[2, 2])], &[]).unwrap();
        assert_eq!(a.rays(), &[lv(&[0, 1]), lv(&[1, 1])]);
    }

    #[test]
    fn faces_of_square_cone() {
        let c = Cone::from_generators(3, &[lv(&[0, 0, 1]), lv(&[1, 0, 1]), lv(&[0, 1, 1]), lv(&[1, 1, 1])], &[]).unwrap();
        let faces = c.faces();
        // apex, 4 rays, 4 two-dim faces, the cone
        assert_eq!(faces.len(), 10);
        for f in &faces {
            assert!(f.is_face_of(&c));
        }
        let diag = Cone::from_generators(3, &[lv(&[0, 0, 1]), lv(&[1, 1, 1])], &[]).unwrap();
        assert!(!diag.is_face_of(&c));
    }

    #[test]
    fn halfplane_faces() {
        let h = Cone::from_inequalities(2, &[lv(&[0, 1])], &[]).unwrap();
        let faces = h.faces();
        assert_eq!(faces.len(), 2);
        assert_eq!(faces.iter().filter(|f| f.dim() == 1).count(), 1);
    }

    #[test]
    fn intersection_of_quadrants() {
        let a = Cone::from_inequalities(2, &[lv(&[1, 0])], &[]).unwrap();
        let b = Cone::from_inequalities(2, &[lv(&[0, 1])], &[]).unwrap();
        let c = a.intersection(&b);
        assert_eq!(c.rays(), &[lv(&[0, 1]), lv(&[1, 0])]);
    }
}
