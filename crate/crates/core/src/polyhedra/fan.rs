use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::complex::{Fan, PolyhedralComplex};
use super::cone::Cone;
use super::polyhedron::{Halfspace, Polyhedron};
use crate::error::{Error, Result};
use crate::exactnum::{LatticeVector, QVector, Rat, ValueGroup};

/// Whether a homogeneous normal `(u, g)` can be rescaled to `u` integral, `g` in Gamma.
fn admissible_normal(h: &LatticeVector, gamma: &ValueGroup) -> bool {
    let u = h.truncate_last();
    let g = u.content();
    if g.is_zero() {
        return true;
    }
    (h.last() * BigInt::from(gamma.denominator())).is_multiple_of(&g)
}

/// Whether the cone lies in `{c >= 0}` and is cut out by Gamma-admissible halfspaces.
pub fn is_gamma_admissible(cone: &Cone, gamma: &ValueGroup) -> bool {
    in_upper_halfspace(cone)
        && cone.facets().iter().chain(cone.equations()).all(|h| admissible_normal(h, gamma))
}

fn in_upper_halfspace(cone: &Cone) -> bool {
    cone.rays().iter().all(|r| !r.last().is_negative()) && cone.lineality().iter().all(|l| l.last().is_zero())
}

/// A Gamma-admissible cone in `N_Q x Q_{>=0}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AdmissibleCone {
    cone: Cone,
    gamma: ValueGroup,
}

impl AdmissibleCone {
    pub fn new(cone: Cone, gamma: ValueGroup) -> Result<AdmissibleCone> {
        if cone.ambient_dim() < 2 {
            return Err(Error::Dimension { expected: 2, found: cone.ambient_dim() });
        }
        if !in_upper_halfspace(&cone) {
            return Err(Error::Admissibility("cone leaves the upper halfspace c >= 0".into()));
        }
        if !is_gamma_admissible(&cone, &gamma) {
            return Err(Error::Admissibility(format!("a facet offset of {cone:?} is not in {gamma}")));
        }
        Ok(AdmissibleCone { cone, gamma })
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn gamma(&self) -> ValueGroup {
        self.gamma
    }

    /// Rank of `N`, one less than the ambient dimension of the cone.
    pub fn rank(&self) -> usize {
        self.cone.ambient_dim() - 1
    }

    /// Facet inequalities `<u, v> + gamma c >= 0` with `u` primitive integral.
    pub fn halfspaces(&self) -> Vec<Halfspace> {
        self.cone.facets().iter().map(extended_halfspace).collect()
    }

    pub fn equations(&self) -> Vec<Halfspace> {
        self.cone.equations().iter().map(extended_halfspace).collect()
    }
}

fn extended_halfspace(h: &LatticeVector) -> Halfspace {
    let u = h.truncate_last();
    let g = u.content();
    if g.is_zero() {
        return Halfspace::new(u, Rat::from_int(h.last().signum()));
    }
    Halfspace::new(u.primitive(), Rat::new(h.last().clone(), g))
}

/// The closed cone over `P x {1}`.
pub fn cone_over(p: &Polyhedron, gamma: &ValueGroup) -> Result<AdmissibleCone> {
    if p.is_empty() {
        return Err(Error::InvalidValue("cone over the empty polyhedron".into()));
    }
    if let Some(v) = p.vertices().into_iter().find(|v| !v.is_gamma_rational(gamma)) {
        return Err(Error::Admissibility(format!("vertex {v} is not {gamma}-rational")));
    }
    AdmissibleCone::new(p.homogenization().clone(), *gamma)
}

/// A Gamma-admissible fan in `N_Q x Q_{>=0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GublerFan {
    fan: Fan,
    gamma: ValueGroup,
    support_full: bool,
}

impl GublerFan {
    /// Validates admissibility of every cone; completeness is recorded, not required.
    pub fn new(fan: Fan, gamma: ValueGroup) -> Result<GublerFan> {
        for c in fan.cells() {
            if !is_gamma_admissible(c, &gamma) {
                return Err(Error::Admissibility(format!("cone {c:?} is not {gamma}-admissible")));
            }
        }
        let support_full = recession_slice(&fan).is_complete();
        Ok(GublerFan { fan, gamma, support_full })
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn gamma(&self) -> ValueGroup {
        self.gamma
    }

    /// Rank of `N`.
    pub fn rank(&self) -> usize {
        self.fan.ambient_dim() - 1
    }

    /// Whether the support is all of `N_R x R_{>=0}`.
    pub fn support_full(&self) -> bool {
        self.support_full
    }
}

fn recession_slice(fan: &Fan) -> Fan {
    let n = fan.ambient_dim() - 1;
    let cones: Vec<Cone> = fan
        .cells()
        .iter()
        .filter(|c| c.rays().iter().all(|r| r.last().is_zero()))
        .map(|c| c.truncate_last().expect("cone at height 0"))
        .collect();
    Fan::new_unchecked(n, &cones)
}

/// Cones over the cells of a Gamma-rational complex, with their faces at height 0.
/// The support need not be full (a partial model).
pub fn cone_complex(c: &PolyhedralComplex, gamma: &ValueGroup) -> Result<GublerFan> {
    let mut cones = Vec::with_capacity(c.len());
    for p in c.cells() {
        cones.push(cone_over(p, gamma)?.cone);
    }
    GublerFan::new(Fan::new(c.ambient_dim() + 1, &cones)?, *gamma)
}

/// The fan over a complex covering `N_R`.
pub fn fan_over_complex(c: &PolyhedralComplex, gamma: &ValueGroup) -> Result<GublerFan> {
    if !c.is_complete() {
        return Err(Error::NotComplete("the complex does not cover the ambient space".into()));
    }
    let fan = cone_complex(c, gamma)?;
    if !fan.support_full {
        return Err(Error::NotComplete("recession fan is not complete".into()));
    }
    Ok(fan)
}

/// The slice at height 0, as a fan in `N_Q`.
pub fn recession_fan(d: &GublerFan) -> Fan {
    recession_slice(&d.fan)
}

/// The slice at height 1, as a complex in `N_Q`.
pub fn height_one_complex(d: &GublerFan) -> PolyhedralComplex {
    let n = d.rank();
    let cells: Vec<Polyhedron> = d
        .fan
        .cells()
        .iter()
        .filter(|c| c.rays().iter().any(|r| r.last().is_positive()))
        .map(|c| Polyhedron::from_cone(n, c.clone()).expect("admissible cones lie above c = 0"))
        .collect();
    PolyhedralComplex::new_unchecked(n, &cells)
}

/// The fan of tangent cones `R_{>=0}(P - v)` over the cells containing the vertex `v`.
pub fn star_fan(c: &PolyhedralComplex, v: &QVector) -> Result<Fan> {
    let Some(i) = c.vertex_index(v) else {
        return Err(Error::NotAVertex(v.to_string()));
    };
    let cones: Vec<Cone> = c.star_of(i).into_iter().map(|j| c.cell(j).tangent_cone(v)).collect::<Result<_>>()?;
    Ok(Fan::new_unchecked(c.ambient_dim(), &cones))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefinementMap {
    pub refines: bool,
    /// For each cone of the finer fan, the minimal containing cone of the coarser one.
    pub cell_map: Vec<Option<usize>>,
}

pub fn refines(finer: &GublerFan, coarser: &GublerFan) -> Result<RefinementMap> {
    if finer.fan.ambient_dim() != coarser.fan.ambient_dim() {
        return Err(Error::AmbientMismatch(finer.fan.ambient_dim(), coarser.fan.ambient_dim()));
    }
    let cell_map = finer.fan.cell_map_into(&coarser.fan);
    Ok(RefinementMap { refines: cell_map.iter().all(Option::is_some), cell_map })
}

pub fn common_refinement(a: &GublerFan, b: &GublerFan) -> Result<GublerFan> {
    let fan = a.fan.common_refinement(&b.fan)?;
    GublerFan::new(fan, a.gamma.join(&b.gamma))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(c: &[i64]) -> QVector {
        QVector::from_i64(c)
    }

    fn lv(c: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(c)
    }

    fn interval_decomposition() -> PolyhedralComplex {
        let left = Polyhedron::from_points(1, &[q(&[0])], &[lv(&[-1])], &[]).unwrap();
        let mid = Polyhedron::from_points(1, &[q(&[0]), q(&[1])], &[], &[]).unwrap();
        let right = Polyhedron::from_points(1, &[q(&[1])], &[lv(&[1])], &[]).unwrap();
        PolyhedralComplex::new(1, &[left, mid, right]).unwrap()
    }

    #[test]
    fn cone_over_examples() {
        let z = ValueGroup::integers();
        let pt = cone_over(&Polyhedron::point(&q(&[0])), &z).unwrap();
        assert_eq!(pt.cone().rays(), &[lv(&[0, 1])]);
        let seg = cone_over(&Polyhedron::from_points(1, &[q(&[0]), q(&[1])], &[], &[]).unwrap(), &z).unwrap();
        assert_eq!(seg.cone().rays(), &[lv(&[0, 1]), lv(&[1, 1])]);
        let ray = cone_over(&Polyhedron::from_points(1, &[q(&[1])], &[lv(&[1])], &[]).unwrap(), &z).unwrap();
        assert_eq!(ray.cone().rays(), &[lv(&[1, 0]), lv(&[1, 1])]);
        // H-representation {v - c >= 0, c >= 0}
        let h = Cone::from_inequalities(2, &[lv(&[1, -1]), lv(&[0, 1])], &[]).unwrap();
        assert_eq!(ray.cone(), &h);
    }

    #[test]
    fn cone_over_rejects_irrational_vertex() {
        let p = Polyhedron::point(&QVector::new(vec![Rat::new(1, 2)]));
        assert!(matches!(cone_over(&p, &ValueGroup::integers()), Err(Error::Admissibility(_))));
        assert!(cone_over(&p, &ValueGroup::new(2).unwrap()).is_ok());
    }

    #[test]
    fn interval_fan_round_trip() {
        let c = interval_decomposition();
        let d = fan_over_complex(&c, &ValueGroup::integers()).unwrap();
        assert_eq!(d.fan().cells_of_dim(2).len(), 3);
        let rec = recession_fan(&d);
        assert!(rec.is_complete());
        assert_eq!(rec.rays(), vec![lv(&[-1]), lv(&[1])]);
        assert_eq!(height_one_complex(&d), c);
    }

    #[test]
    fn star_of_interior_vertex_is_complete() {
        let c = interval_decomposition();
        let s = star_fan(&c, &q(&[0])).unwrap();
        assert!(s.is_complete());
        assert!(matches!(star_fan(&c, &q(&[2])), Err(Error::NotAVertex(_))));
    }

    #[test]
    fn incomplete_complex_is_rejected() {
        let c = PolyhedralComplex::new(1, &[Polyhedron::from_points(1, &[q(&[0]), q(&[1])], &[], &[]).unwrap()]).unwrap();
        assert!(matches!(fan_over_complex(&c, &ValueGroup::integers()), Err(Error::NotComplete(_))));
        assert!(!cone_complex(&c, &ValueGroup::integers()).unwrap().support_full());
    }

    #[test]
    fn admissibility_of_offsets() {
        // -2v + c >= 0 needs 1/2 in Gamma
        let c = Cone::from_inequalities(2, &[lv(&[-2, 1]), lv(&[1, 0])], &[]).unwrap();
        assert!(!is_gamma_admissible(&c, &ValueGroup::integers()));
        assert!(is_gamma_admissible(&c, &ValueGroup::new(2).unwrap()));
    }
}
