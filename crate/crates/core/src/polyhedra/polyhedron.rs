use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::cone::Cone;
use crate::error::{Error, Result};
use crate::exactnum::{LatticeVector, QVector, Rat, ValueGroup};
use crate::linalg::integral_direction;

/// `{v : <normal, v> + offset >= 0}`, or `= 0` when used as an equation.
/// In the height-extended setting the offset multiplies the height `c`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: LatticeVector,
    pub offset: Rat,
}

impl Halfspace {
    pub fn new(normal: LatticeVector, offset: Rat) -> Halfspace {
        Halfspace { normal, offset }
    }

    /// Scales a rational normal to a primitive integral one.
    pub fn from_rational(normal: &[Rat], offset: &Rat) -> Halfspace {
        let n = integral_direction(normal);
        if n.is_zero() {
            return Halfspace { normal: n, offset: Rat::from_int(offset.signum()) };
        }
        // the scale factor is the ratio of any nonzero coordinate
        let i = normal.iter().position(|c| !c.is_zero()).expect("nonzero normal");
        let k = Rat::from_int(n[i].clone()) / &normal[i];
        Halfspace { normal: n, offset: offset * k }
    }

    /// The homogenized integral vector `(normal * s, offset * s)` for the least `s > 0`.
    pub fn homogenized(&self) -> LatticeVector {
        let mut v: Vec<Rat> = self.normal.coords().iter().map(|c| Rat::from_int(c.clone())).collect();
        v.push(self.offset.clone());
        integral_direction(&v)
    }

    fn from_homogeneous(h: &LatticeVector) -> Halfspace {
        let normal = h.truncate_last();
        let g = normal.content();
        if g.is_zero() {
            return Halfspace { normal, offset: Rat::from_int(h.last().clone()) };
        }
        Halfspace { normal: normal.primitive(), offset: Rat::new(h.last().clone(), g) }
    }

    pub fn evaluate(&self, v: &QVector) -> Rat {
        self.normal.coords().iter().zip(v.coords()).map(|(a, b)| b * Rat::from_int(a.clone())).sum::<Rat>() + &self.offset
    }
}

impl fmt::Display for Halfspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, v> + {}", self.normal, self.offset)
    }
}

/// A rational polyhedron in `Q^n`, stored through its homogenization cone
/// `closure(R_{>=0} (P x {1}))` in `Q^{n+1}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Polyhedron {
    ambient: usize,
    cone: Cone,
}

fn height_ineq(n: usize) -> LatticeVector {
    LatticeVector::unit(n + 1, n)
}

fn check_dims(n: usize, vs: impl IntoIterator<Item = usize>) -> Result<()> {
    for l in vs {
        if l != n {
            return Err(Error::Dimension { expected: n, found: l });
        }
    }
    Ok(())
}

impl Polyhedron {
    pub fn from_inequalities(n: usize, ineqs: &[Halfspace], eqs: &[Halfspace]) -> Result<Polyhedron> {
        check_dims(n, ineqs.iter().chain(eqs).map(|h| h.normal.len()))?;
        let mut hi: Vec<LatticeVector> = ineqs.iter().map(Halfspace::homogenized).collect();
        hi.push(height_ineq(n));
        let he: Vec<LatticeVector> = eqs.iter().map(Halfspace::homogenized).collect();
        Ok(Polyhedron::from_cone_unchecked(n, Cone::from_inequalities(n + 1, &hi, &he)?))
    }

    /// `conv(points) + cone(rays) + span(lineality)`.
    pub fn from_points(n: usize, points: &[QVector], rays: &[LatticeVector], lineality: &[LatticeVector]) -> Result<Polyhedron> {
        check_dims(n, points.iter().map(QVector::len).chain(rays.iter().map(LatticeVector::len)).chain(lineality.iter().map(LatticeVector::len)))?;
        if points.is_empty() {
            return Ok(Polyhedron::empty(n));
        }
        let mut gens: Vec<LatticeVector> = points
            .iter()
            .map(|p| {
                let mut c = p.coords().to_vec();
                c.push(Rat::one());
                integral_direction(&c)
            })
            .collect();
        gens.extend(rays.iter().map(|r| r.extended(BigInt::zero())));
        let lin: Vec<LatticeVector> = lineality.iter().map(|l| l.extended(BigInt::zero())).collect();
        Ok(Polyhedron::from_cone_unchecked(n, Cone::from_generators(n + 1, &gens, &lin)?))
    }

    pub fn point(p: &QVector) -> Polyhedron {
        Polyhedron::from_points(p.len(), std::slice::from_ref(p), &[], &[]).expect("consistent dimension")
    }

    pub fn whole(n: usize) -> Polyhedron {
        Polyhedron::from_inequalities(n, &[], &[]).expect("no constraints")
    }

    pub fn empty(n: usize) -> Polyhedron {
        let eqs: Vec<LatticeVector> = (0..=n).map(|i| LatticeVector::unit(n + 1, i)).collect();
        Polyhedron { ambient: n, cone: Cone::from_inequalities(n + 1, &[], &eqs).expect("consistent") }
    }

    /// Wraps a cone inside `{c >= 0}` of `Q^{n+1}` as the polyhedron it cuts at height 1.
    pub fn from_cone(n: usize, cone: Cone) -> Result<Polyhedron> {
        if cone.ambient_dim() != n + 1 {
            return Err(Error::Dimension { expected: n + 1, found: cone.ambient_dim() });
        }
        if cone.rays().iter().any(|r| r.last().is_negative()) || cone.lineality().iter().any(|l| !l.last().is_zero()) {
            return Err(Error::InvalidValue("cone leaves the upper halfspace".into()));
        }
        Ok(Polyhedron::from_cone_unchecked(n, cone))
    }

    fn from_cone_unchecked(n: usize, cone: Cone) -> Polyhedron {
        if cone.rays().iter().all(|r| !r.last().is_positive()) {
            return Polyhedron::empty(n);
        }
        Polyhedron { ambient: n, cone }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn is_empty(&self) -> bool {
        self.cone.rays().iter().all(|r| !r.last().is_positive())
    }

    /// Dimension, with -1 for the empty polyhedron.
    pub fn dim(&self) -> isize {
        if self.is_empty() {
            -1
        } else {
            self.cone.dim() as isize - 1
        }
    }

    pub fn homogenization(&self) -> &Cone {
        &self.cone
    }

    /// Vertices (representatives of minimal faces when there is lineality).
    pub fn vertices(&self) -> Vec<QVector> {
        self.cone
            .rays()
            .iter()
            .filter(|r| r.last().is_positive())
            .map(|r| {
                let c = Rat::from_int(r.last().clone());
                QVector::new(r.truncate_last().coords().iter().map(|x| Rat::from_int(x.clone()) / &c).collect())
            })
            .collect()
    }

    pub fn rays(&self) -> Vec<LatticeVector> {
        self.cone.rays().iter().filter(|r| r.last().is_zero()).map(|r| r.truncate_last()).collect()
    }

    pub fn lineality(&self) -> Vec<LatticeVector> {
        self.cone.lineality().iter().map(|r| r.truncate_last()).collect()
    }

    pub fn is_bounded(&self) -> bool {
        self.rays().is_empty() && self.cone.lineality_dim() == 0
    }

    /// Irredundant facet inequalities (the face at infinity is excluded).
    pub fn halfspaces(&self) -> Vec<Halfspace> {
        if self.is_empty() {
            return Vec::new();
        }
        self.cone
            .facets()
            .iter()
            .filter(|f| self.cone.rays().iter().any(|r| r.last().is_positive() && f.dot(r).is_zero()))
            .map(Halfspace::from_homogeneous)
            .collect()
    }

    /// Equations of the affine hull.
    pub fn equations(&self) -> Vec<Halfspace> {
        self.cone.equations().iter().map(Halfspace::from_homogeneous).collect()
    }

    pub fn contains(&self, v: &QVector) -> bool {
        if v.len() != self.ambient || self.is_empty() {
            return false;
        }
        let mut x = v.coords().to_vec();
        x.push(Rat::one());
        self.cone.contains_point(&x)
    }

    pub fn relative_interior_contains(&self, v: &QVector) -> bool {
        if v.len() != self.ambient || self.is_empty() {
            return false;
        }
        let mut x = v.coords().to_vec();
        x.push(Rat::one());
        // facets at infinity are positive on every point of height 1
        self.cone.relative_interior_contains(&x)
    }

    pub fn contains_polyhedron(&self, other: &Polyhedron) -> bool {
        other.is_empty() || self.cone.contains_cone(&other.cone)
    }

    /// Barycenter of the vertices plus the sum of the rays.
    pub fn relative_interior_point(&self) -> QVector {
        self.weighted_interior_point(|_| 1)
    }

    /// A second relative-interior point, different from the barycenter whenever the cell has
    /// more than one vertex or a ray.
    pub fn alternate_interior_point(&self) -> QVector {
        self.weighted_interior_point(|i| i as i64 + 1)
    }

    fn weighted_interior_point(&self, weight: impl Fn(usize) -> i64) -> QVector {
        let verts = self.vertices();
        assert!(!verts.is_empty(), "relative interior of an empty polyhedron");
        let mut acc = QVector::zero(self.ambient);
        let mut total = Rat::zero();
        for (i, v) in verts.iter().enumerate() {
            let w = Rat::from_int(weight(i));
            acc = acc.add(&v.scale(&w));
            total += &w;
        }
        let mut p = acc.scale(&total.recip());
        for (i, r) in self.rays().iter().enumerate() {
            p = p.add(&r.to_qvector().scale(&Rat::from_int(weight(i))));
        }
        p
    }

    /// The recession cone `{x : P + x ⊆ P}` as a cone in `Q^n`.
    pub fn recession_cone(&self) -> Cone {
        let rays = self.rays();
        let lin = self.lineality();
        Cone::from_generators(self.ambient, &rays, &lin).expect("consistent dimension")
    }

    /// Every vertex has coordinates in the value group.
    pub fn is_gamma_rational(&self, g: &ValueGroup) -> bool {
        self.vertices().iter().all(|v| v.is_gamma_rational(g))
    }

    pub fn intersection(&self, other: &Polyhedron) -> Polyhedron {
        Polyhedron::from_cone_unchecked(self.ambient, self.cone.intersection(&other.cone))
    }

    /// All nonempty faces, including `self`.
    pub fn faces(&self) -> Vec<Polyhedron> {
        if self.is_empty() {
            return Vec::new();
        }
        self.cone
            .faces()
            .into_iter()
            .filter(|f| f.rays().iter().any(|r| r.last().is_positive()))
            .map(|f| Polyhedron { ambient: self.ambient, cone: f })
            .collect()
    }

    pub fn is_face_of(&self, other: &Polyhedron) -> bool {
        !self.is_empty() && self.cone.is_face_of(&other.cone)
    }

    /// Translate by `-v` and cone off: the tangent cone `R_{>=0}(P - v)` at a point `v` of `P`.
    pub fn tangent_cone(&self, v: &QVector) -> Result<Cone> {
        if !self.contains(v) {
            return Err(Error::InvalidValue(format!("{v} is not in the polyhedron")));
        }
        let tight: Vec<LatticeVector> =
            self.halfspaces().into_iter().filter(|h| h.evaluate(v).is_zero()).map(|h| h.normal).collect();
        let eqs: Vec<LatticeVector> = self.equations().into_iter().map(|h| h.normal).collect();
        Cone::from_inequalities(self.ambient, &tight, &eqs)
    }

    pub fn to_json(&self) -> PolyhedronJson {
        PolyhedronJson {
            dim: self.dim(),
            ineqs: self.halfspaces(),
            eqs: self.equations(),
            vertices: self.vertices(),
            rays: self.rays(),
            lineality: self.lineality(),
        }
    }
}

impl fmt::Debug for Polyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "Polyhedron(empty)");
        }
        write!(f, "Polyhedron(vertices={:?}", self.vertices())?;
        let rays = self.rays();
        if !rays.is_empty() {
            write!(f, ", rays={rays:?}")?;
        }
        let lin = self.lineality();
        if !lin.is_empty() {
            write!(f, ", lineality={lin:?}")?;
        }
        write!(f, ")")
    }
}

/// JSON form of a polyhedron; on input either the H-part or the V-part may be omitted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyhedronJson {
    #[serde(default = "unknown_dim", skip_serializing)]
    pub dim: isize,
    #[serde(default)]
    pub ineqs: Vec<Halfspace>,
    #[serde(default)]
    pub eqs: Vec<Halfspace>,
    #[serde(default)]
    pub vertices: Vec<QVector>,
    #[serde(default)]
    pub rays: Vec<LatticeVector>,
    #[serde(default)]
    pub lineality: Vec<LatticeVector>,
}

fn unknown_dim() -> isize {
    -2
}

impl PolyhedronJson {
    /// Builds the polyhedron, cross-checking H and V data when both are present.
    pub fn build(&self, n: usize) -> Result<Polyhedron> {
        let has_h = !self.ineqs.is_empty() || !self.eqs.is_empty();
        let has_v = !self.vertices.is_empty();
        match (has_h, has_v) {
            (false, false) => {
                if self.rays.is_empty() && self.lineality.is_empty() {
                    Ok(Polyhedron::whole(n))
                } else {
                    Err(Error::InvalidValue("a V-described cell needs at least one vertex".into()))
                }
            }
            (true, false) => Polyhedron::from_inequalities(n, &self.ineqs, &self.eqs),
            (false, true) => Polyhedron::from_points(n, &self.vertices, &self.rays, &self.lineality),
            (true, true) => {
                let a = Polyhedron::from_inequalities(n, &self.ineqs, &self.eqs)?;
                let b = Polyhedron::from_points(n, &self.vertices, &self.rays, &self.lineality)?;
                if a != b {
                    return Err(Error::InvalidValue("H- and V-representations of a cell disagree".into()));
                }
                Ok(a)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(c: &[i64]) -> QVector {
        QVector::from_i64(c)
    }

    fn hs(n: &[i64], o: i64) -> Halfspace {
        Halfspace::new(LatticeVector::from_i64(n), Rat::from_int(o))
    }

    #[test]
    fn interval_both_ways() {
        let a = Polyhedron::from_points(1, &[q(&[0]), q(&[1])], &[], &[]).unwrap();
        let b = Polyhedron::from_inequalities(1, &[hs(&[1], 0), hs(&[-1], 1)], &[]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.dim(), 1);
        assert_eq!(a.vertices(), vec![q(&[0]), q(&[1])]);
        assert_eq!(a.faces().len(), 3);
    }

    #[test]
    fn ray_has_one_vertex_and_one_ray() {
        let r = Polyhedron::from_inequalities(1, &[hs(&[1], -1)], &[]).unwrap();
        assert_eq!(r.vertices(), vec![q(&[1])]);
        assert_eq!(r.rays(), vec![LatticeVector::from_i64(&[1])]);
        assert_eq!(r.halfspaces(), vec![hs(&[1], -1)]);
        assert_eq!(r.recession_cone().rays(), &[LatticeVector::from_i64(&[1])]);
    }

    #[test]
    fn empty_intersection() {
        let a = Polyhedron::from_inequalities(1, &[hs(&[1], -2)], &[]).unwrap();
        let b = Polyhedron::from_inequalities(1, &[hs(&[-1], 1)], &[]).unwrap();
        assert!(a.intersection(&b).is_empty());
        assert_eq!(a.intersection(&b), Polyhedron::empty(1));
    }

    #[test]
    fn line_in_plane() {
        let l = Polyhedron::from_inequalities(2, &[], &[hs(&[1, 0], 0)]).unwrap();
        assert_eq!(l.dim(), 1);
        assert_eq!(l.lineality().len(), 1);
        assert!(l.contains(&q(&[0, 5])));
        assert!(!l.contains(&q(&[1, 5])));
        assert!(l.halfspaces().is_empty());
    }

    #[test]
    fn rational_halfspace_scaling() {
        let h = Halfspace::from_rational(&[Rat::new(1, 2), Rat::new(-1, 3)], &Rat::new(1, 6));
        assert_eq!(h.normal, LatticeVector::from_i64(&[3, -2]));
        assert_eq!(h.offset, Rat::from_int(1));
    }

    #[test]
    fn tangent_cone_at_vertex() {
        let tri = Polyhedron::from_points(2, &[q(&[0, 0]), q(&[1, 0]), q(&[0, 1])], &[], &[]).unwrap();
        let t = tri.tangent_cone(&q(&[1, 0])).unwrap();
        assert_eq!(t.rays(), &[LatticeVector::from_i64(&[-1, 0]), LatticeVector::from_i64(&[-1, 1])]);
    }
}
