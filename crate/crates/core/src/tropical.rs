//! Tropical hypersurfaces, initial forms and exploded fibrations.
//!
//! Min-plus convention: `trop(f)(v) = min_u (val(a_u) + <u, v>)`, and the
//! hypersurface is where this minimum is attained at least twice.

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{pairing, LatticeVector, QVector, Rat};
use crate::linalg::rank_int;
use crate::polyhedra::io::ComplexJson;
use crate::polyhedra::{Halfspace, PolyhedralComplex, Polyhedron};
use crate::valpoly::{LaurentPolynomial, ResiduePolynomial, ValuedCoefficient};

const MAX_RANK: usize = 3;

fn check_point(f: &LaurentPolynomial, v: &QVector) -> Result<()> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if v.len() != f.nvars() {
        return Err(Error::Dimension { expected: f.nvars(), found: v.len() });
    }
    Ok(())
}

fn term_value(u: &LatticeVector, c: &ValuedCoefficient, v: &QVector) -> Rat {
    &c.valuation + pairing(u, v).expect("checked length")
}

/// `min_u (val(a_u) + <u, v>)`.
pub fn trop_value(f: &LaurentPolynomial, v: &QVector) -> Result<Rat> {
    check_point(f, v)?;
    Ok(f.terms().iter().map(|(u, c)| term_value(u, c, v)).min().expect("nonzero polynomial"))
}

/// Exponents attaining the minimum at `v`.
pub fn minimizing_exponents(f: &LaurentPolynomial, v: &QVector) -> Result<Vec<LatticeVector>> {
    let m = trop_value(f, v)?;
    Ok(f.terms().iter().filter(|(u, c)| term_value(u, c, v) == m).map(|(u, _)| u.clone()).collect())
}

/// The canonical initial form at a Gamma-rational point.
pub fn initial_form(f: &LaurentPolynomial, v: &QVector) -> Result<ResiduePolynomial> {
    check_point(f, v)?;
    let g = f.profile().gamma;
    if !v.is_gamma_rational(&g) {
        return Err(Error::Rationality(format!("{v} is not {g}-rational")));
    }
    initial_form_unchecked(f, v)
}

/// The canonical initial form at any rational point, i.e. after enlarging the
/// value group to contain the coordinates of `v`.
pub fn initial_form_unchecked(f: &LaurentPolynomial, v: &QVector) -> Result<ResiduePolynomial> {
    let m = trop_value(f, v)?;
    let terms = f.terms().iter().filter(|(u, c)| term_value(u, c, v) == m).map(|(u, c)| (u.clone(), c.residue.clone()));
    Ok(ResiduePolynomial::new(f.vars().to_vec(), terms, f.profile().residue)?.canonical())
}

fn check_rank(f: &LaurentPolynomial) -> Result<()> {
    if f.nvars() > MAX_RANK {
        return Err(Error::UnsupportedDimension(f.nvars()));
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(())
}

/// The region where the term at `u` attains the minimum.
fn region(f: &LaurentPolynomial, u: &LatticeVector, c: &ValuedCoefficient) -> Result<Polyhedron> {
    let ineqs: Vec<Halfspace> = f
        .terms()
        .iter()
        .filter(|(w, _)| *w != u)
        .map(|(w, d)| Halfspace::new(w.sub(u), &d.valuation - &c.valuation))
        .collect();
    Polyhedron::from_inequalities(f.nvars(), &ineqs, &[])
}

/// The decomposition of `N_Q` into domains of linearity of `trop(f)`.
pub fn linearity_complex(f: &LaurentPolynomial) -> Result<PolyhedralComplex> {
    check_rank(f)?;
    let n = f.nvars() as isize;
    let mut regions = Vec::new();
    for (u, c) in f.terms() {
        let r = region(f, u, c)?;
        if r.dim() == n {
            regions.push(r);
        }
    }
    PolyhedralComplex::new(f.nvars(), &regions)
}

/// The face of the regular subdivision dual to a cell of the hypersurface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualFace {
    pub exponents: Vec<LatticeVector>,
    pub dim: usize,
}

impl DualFace {
    fn of(exponents: Vec<LatticeVector>, n: usize) -> DualFace {
        let diffs: Vec<LatticeVector> = exponents.iter().map(|u| u.sub(&exponents[0])).collect();
        let dim = rank_int(&diffs, n);
        DualFace { exponents, dim }
    }

    /// Lattice length of a one-dimensional dual face.
    pub fn lattice_length(&self) -> Option<BigInt> {
        if self.dim != 1 {
            return None;
        }
        let first = self.exponents.iter().min()?;
        let last = self.exponents.iter().max()?;
        Some(last.sub(first).content())
    }
}

/// The corner locus of `f` with the dual face of each cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalHypersurface {
    complex: PolyhedralComplex,
    dual: Vec<DualFace>,
}

impl TropicalHypersurface {
    pub fn complex(&self) -> &PolyhedralComplex {
        &self.complex
    }

    pub fn dual(&self, cell: usize) -> &DualFace {
        &self.dual[cell]
    }

    pub fn is_empty(&self) -> bool {
        self.complex.is_empty()
    }

    pub fn contains(&self, v: &QVector) -> bool {
        self.complex.support_contains(v)
    }

    /// The weighted sum of outgoing primitive edge directions at a vertex
    /// (zero for a balanced curve in the plane).
    pub fn balancing_sum(&self, vertex: usize) -> Result<LatticeVector> {
        let c = &self.complex;
        if c.cell(vertex).dim() != 0 {
            return Err(Error::NotAVertex(format!("cell {vertex}")));
        }
        let v = c.cell(vertex).vertices()[0].clone();
        let mut sum = LatticeVector::zero(c.ambient_dim());
        for e in c.cofacets_of(vertex) {
            let cell = c.cell(e);
            let dir = match cell.vertices().into_iter().find(|w| *w != v) {
                Some(w) => w.sub(&v).primitive_decomposition().expect("distinct vertices").1,
                None => cell.rays().first().cloned().ok_or_else(|| Error::Inconsistent("edge without direction".into()))?,
            };
            let w = self.dual[e].lattice_length().ok_or_else(|| Error::Inconsistent("edge dual is not an edge".into()))?;
            sum = sum.add(&dir.scale(&w));
        }
        Ok(sum)
    }

    pub fn to_json(&self) -> TropicalJson {
        let cj = ComplexJson::from_complex(&self.complex);
        TropicalJson {
            ambient: self.complex.ambient_dim(),
            cells: cj
                .cells
                .into_iter()
                .zip(&self.dual)
                .zip(self.complex.cells())
                .map(|((c, d), p)| TropicalCellJson {
                    dim: p.dim(),
                    ineqs: c.ineqs,
                    eqs: c.eqs,
                    vertices: c.vertices,
                    rays: c.rays,
                    lineality: c.lineality,
                    dual: d.exponents.clone(),
                    dual_dim: d.dim,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TropicalJson {
    pub ambient: usize,
    pub cells: Vec<TropicalCellJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TropicalCellJson {
    pub dim: isize,
    pub ineqs: Vec<Halfspace>,
    pub eqs: Vec<Halfspace>,
    pub vertices: Vec<QVector>,
    pub rays: Vec<LatticeVector>,
    pub lineality: Vec<LatticeVector>,
    pub dual: Vec<LatticeVector>,
    pub dual_dim: usize,
}

/// The corner locus, as the lower-dimensional cells of the linearity complex.
pub fn tropicalize(f: &LaurentPolynomial) -> Result<TropicalHypersurface> {
    let lin = linearity_complex(f)?;
    let n = f.nvars() as isize;
    let cells: Vec<Polyhedron> = lin.cells().iter().filter(|c| c.dim() < n).cloned().collect();
    let complex = PolyhedralComplex::new_unchecked(f.nvars(), &cells);
    let dual = complex
        .cells()
        .iter()
        .map(|c| Ok(DualFace::of(minimizing_exponents(f, &c.relative_interior_point())?, f.nvars())))
        .collect::<Result<Vec<_>>>()?;
    Ok(TropicalHypersurface { complex, dual })
}

/// Cells of a (subdivided) tropical hypersurface with the canonical initial form on each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplodedFibration {
    pub base: PolyhedralComplex,
    pub fibers: Vec<ResiduePolynomial>,
    /// For each base cell, the smallest cell of the unrefined hypersurface containing it.
    pub trop_cell: Vec<usize>,
}

/// Restricts `refine` to the support of `trop`, checking that the result covers it.
pub fn restrict_to(trop: &TropicalHypersurface, refine: &PolyhedralComplex) -> Result<PolyhedralComplex> {
    let t = trop.complex();
    if refine.ambient_dim() != t.ambient_dim() {
        return Err(Error::AmbientMismatch(refine.ambient_dim(), t.ambient_dim()));
    }
    let mut pieces = Vec::new();
    for &i in &t.maximal_cells() {
        for p in refine.cells() {
            if let Some(m) = crate::polyhedra::Cell::meet(p, t.cell(i)) {
                pieces.push(m);
            }
        }
    }
    let base = PolyhedralComplex::new(t.ambient_dim(), &pieces).map_err(|e| Error::Refinement(e.to_string()))?;
    for &i in &t.maximal_cells() {
        let target = t.cell(i);
        let inside: Vec<Polyhedron> =
            base.cells().iter().filter(|c| c.dim() == target.dim() && target.contains_polyhedron(c)).cloned().collect();
        if !PolyhedralComplex::pieces_cover(target, &inside) {
            return Err(Error::Refinement(format!("the refinement does not cover the cell {target:?}")));
        }
    }
    Ok(base)
}

pub fn exploded_fibration(f: &LaurentPolynomial, refine: Option<&PolyhedralComplex>) -> Result<ExplodedFibration> {
    let trop = tropicalize(f)?;
    let base = match refine {
        None => trop.complex().clone(),
        Some(r) => restrict_to(&trop, r)?,
    };
    let trop_cell = base
        .cell_map_into(trop.complex())
        .into_iter()
        .map(|m| m.ok_or_else(|| Error::Refinement("a cell leaves the hypersurface".into())))
        .collect::<Result<Vec<_>>>()?;
    let mut fibers = Vec::with_capacity(base.len());
    for cell in base.cells() {
        let a = initial_form_unchecked(f, &cell.relative_interior_point())?;
        let b = initial_form_unchecked(f, &cell.alternate_interior_point())?;
        if a != b {
            return Err(Error::Inconsistent(format!("initial forms {a} and {b} differ inside {cell:?}")));
        }
        fibers.push(a);
    }
    Ok(ExplodedFibration { base, fibers, trop_cell })
}

/// What happens on one torus orbit of projective space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitPart {
    /// The restriction is a nonzero monomial (or constant).
    Empty,
    /// The restriction vanishes identically: the orbit lies in the hypersurface.
    Whole,
    Hypersurface(TropicalHypersurface),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitTropicalization {
    /// Homogeneous coordinates that vanish on the orbit.
    pub vanishing: Vec<String>,
    /// Coordinates of the orbit torus after dehomogenizing.
    pub torus_vars: Vec<String>,
    pub restriction: Option<LaurentPolynomial>,
    pub part: OrbitPart,
}

/// Tropicalizes a homogeneous polynomial on every torus orbit of `P^n`, where the
/// variables of `f` are the `n + 1` homogeneous coordinates.
pub fn extended_tropicalize(f: &LaurentPolynomial) -> Result<Vec<OrbitTropicalization>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let m = f.nvars();
    if !(2..=MAX_RANK + 1).contains(&m) {
        return Err(Error::UnsupportedDimension(m.saturating_sub(1)));
    }
    let mut degree: Option<BigInt> = None;
    for u in f.terms().keys() {
        if u.coords().iter().any(|e| e < &BigInt::from(0)) {
            return Err(Error::NonHomogeneous(format!("negative exponent in {u}")));
        }
        let d: BigInt = u.coords().iter().sum();
        match &degree {
            None => degree = Some(d),
            Some(d0) if *d0 != d => return Err(Error::NonHomogeneous(format!("degrees {d0} and {d} both occur"))),
            _ => {}
        }
    }
    let mut subsets: Vec<Vec<usize>> = (0u32..(1 << m) - 1)
        .map(|mask| (0..m).filter(|i| mask & (1 << i) != 0).collect())
        .collect();
    subsets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let mut out = Vec::with_capacity(subsets.len());
    for vanish in subsets {
        // dehomogenize by the first surviving coordinate
        let torus: Vec<usize> = (0..m).filter(|i| !vanish.contains(i)).skip(1).collect();
        let kept: Vec<(&LatticeVector, &ValuedCoefficient)> =
            f.terms().iter().filter(|(u, _)| vanish.iter().all(|&i| u[i] == BigInt::from(0))).collect();
        let names = |idx: &[usize]| idx.iter().map(|&i| f.vars()[i].clone()).collect::<Vec<_>>();
        let mut entry = OrbitTropicalization {
            vanishing: names(&vanish),
            torus_vars: names(&torus),
            restriction: None,
            part: OrbitPart::Empty,
        };
        if kept.is_empty() {
            entry.part = OrbitPart::Whole;
        } else if !torus.is_empty() {
            let terms = kept.into_iter().map(|(u, c)| (LatticeVector::new(torus.iter().map(|&i| u[i].clone()).collect()), c.clone()));
            let g = LaurentPolynomial::new(entry.torus_vars.clone(), terms, f.profile().clone())?;
            let t = tropicalize(&g)?;
            entry.part = if t.is_empty() { OrbitPart::Empty } else { OrbitPart::Hypersurface(t) };
            entry.restriction = Some(g);
        }
        out.push(entry);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::ValueGroup;
    use crate::valpoly::{parse_poly, FieldProfile};

    fn poly(s: &str) -> LaurentPolynomial {
        parse_poly(s, &FieldProfile::rational()).unwrap()
    }

    fn qv(c: &[i64]) -> QVector {
        QVector::from_i64(c)
    }

    #[test]
    fn trop_value_examples() {
        let f = poly("x + y + 1");
        assert_eq!(trop_value(&f, &qv(&[0, 0])).unwrap(), Rat::zero());
        assert_eq!(trop_value(&f, &qv(&[2, 3])).unwrap(), Rat::zero());
        let g = poly("t^2*x^-1 + 3");
        assert_eq!(trop_value(&g, &qv(&[1])).unwrap(), Rat::zero());
        assert!(matches!(trop_value(&f, &qv(&[1])), Err(Error::Dimension { .. })));
    }

    #[test]
    fn initial_form_examples() {
        let f = poly("x + y + 1");
        assert_eq!(initial_form(&f, &qv(&[0, 0])).unwrap().to_string(), "x + y + 1");
        assert_eq!(initial_form(&f, &qv(&[0, 1])).unwrap().to_string(), "x + 1");
        let m = poly("3*x^2*y");
        let r = initial_form(&m, &qv(&[5, -2])).unwrap();
        assert_eq!(r.to_string(), "1");
        assert!(tropicalize(&m).unwrap().is_empty());
        let half = QVector::new(vec![Rat::new(1, 2), Rat::zero()]);
        assert!(matches!(initial_form(&f, &half), Err(Error::Rationality(_))));
        let f2 = parse_poly("x + y + 1", &FieldProfile::rational().with_gamma(ValueGroup::new(2).unwrap())).unwrap();
        assert!(initial_form(&f2, &half).is_ok());
    }

    #[test]
    fn point_tropicalization() {
        let f = poly("x + t");
        let t = tropicalize(&f).unwrap();
        assert_eq!(t.complex().vertices(), vec![qv(&[1])]);
        assert_eq!(t.complex().len(), 1);
    }

    #[test]
    fn translated_line() {
        let t = tropicalize(&poly("x + y + t")).unwrap();
        assert_eq!(t.complex().vertices(), vec![qv(&[1, 1])]);
        assert_eq!(t.complex().cells_of_dim(1).len(), 3);
    }

    #[test]
    fn line_rays_exact() {
        let t = tropicalize(&poly("x + y + 1")).unwrap();
        let c = t.complex();
        let mut rays: Vec<(Vec<String>, Vec<String>)> = c
            .cells_of_dim(1)
            .into_iter()
            .map(|i| {
                let p = c.cell(i);
                let show = |hs: Vec<Halfspace>| hs.iter().map(|h| format!("{}+{}", h.normal, h.offset)).collect::<Vec<_>>();
                (show(p.halfspaces()), show(p.equations()))
            })
            .collect();
        rays.sort();
        let expect = |a: &str, b: &str| (vec![a.to_string()], vec![b.to_string()]);
        let mut want = vec![expect("(1,0)+0", "(0,1)+0"), expect("(0,1)+0", "(1,0)+0"), expect("(-1,0)+0", "(-1,1)+0")];
        want.sort();
        assert_eq!(rays, want);
        for i in 0..c.len() {
            assert_eq!(c.cell(i).dim() as usize + t.dual(i).dim, 2);
        }
        let v = c.cells_of_dim(0)[0];
        assert!(t.balancing_sum(v).unwrap().is_zero());
    }

    #[test]
    fn balancing_with_weights() {
        let t = tropicalize(&poly("x^2 + y + 1")).unwrap();
        let v = t.complex().cells_of_dim(0)[0];
        assert!(t.balancing_sum(v).unwrap().is_zero());
        let u = tropicalize(&poly("x + y + 1 + t*x*y")).unwrap();
        assert_eq!(u.complex().cells_of_dim(0).len(), 2);
        for v in u.complex().cells_of_dim(0) {
            assert!(u.balancing_sum(v).unwrap().is_zero());
        }
    }

    #[test]
    fn refinement_keeps_fibers() {
        let f = poly("x + y + 1");
        let p = |c: &[i64]| Polyhedron::point(&qv(c));
        let b2 = Polyhedron::from_points(2, &[qv(&[0, 1])], &[LatticeVector::from_i64(&[0, 1])], &[]).unwrap();
        let seg = Polyhedron::from_points(2, &[qv(&[0, 0]), qv(&[0, 1])], &[], &[]).unwrap();
        let t = tropicalize(&f).unwrap();
        let mut cells: Vec<Polyhedron> = t.complex().cells().iter().filter(|c| c.dim() == 1 && !c.contains(&qv(&[0, 1]))).cloned().collect();
        cells.extend([b2, seg, p(&[0, 1])]);
        let refine = PolyhedralComplex::new(2, &cells).unwrap();
        let e = exploded_fibration(&f, Some(&refine)).unwrap();
        assert_eq!(e.base.len(), 6);
        for (i, cell) in e.base.cells().iter().enumerate() {
            let coarse = &t.complex().cells()[e.trop_cell[i]];
            assert!(coarse.contains_polyhedron(cell));
            assert_eq!(e.fibers[i], initial_form(&f, &coarse.relative_interior_point()).unwrap());
        }
        let partial = PolyhedralComplex::new(2, &[p(&[0, 0])]).unwrap();
        assert!(matches!(exploded_fibration(&f, Some(&partial)), Err(Error::Refinement(_))));
    }

    #[test]
    fn exploded_line() {
        let e = exploded_fibration(&poly("x + y + 1"), None).unwrap();
        assert_eq!(e.base.len(), 4);
        let mut fibers: Vec<String> = e.fibers.iter().map(|r| r.to_string()).collect();
        fibers.sort();
        assert_eq!(fibers, vec!["x + 1", "x + y", "x + y + 1", "y + 1"]);
        let single = exploded_fibration(&poly("x + t"), None).unwrap();
        assert_eq!(single.fibers[0].to_string(), "x + 1");
    }

    #[test]
    fn extended_plane_line() {
        let parts = extended_tropicalize(&poly("x + y + z")).unwrap();
        assert_eq!(parts.len(), 7);
        assert!(matches!(parts[0].part, OrbitPart::Hypersurface(ref t) if t.complex().cells_of_dim(1).len() == 3));
        for p in &parts[1..4] {
            assert!(matches!(p.part, OrbitPart::Hypersurface(ref t) if t.complex().len() == 1));
        }
        for p in &parts[4..] {
            assert_eq!(p.part, OrbitPart::Empty);
        }
        assert!(matches!(extended_tropicalize(&poly("x + y^2")), Err(Error::NonHomogeneous(_))));
    }

    #[test]
    fn extended_coordinate_hyperplane() {
        let f = parse_poly_with("x", &["x", "y", "z"]);
        let parts = extended_tropicalize(&f).unwrap();
        assert_eq!(parts[0].part, OrbitPart::Empty);
        // the orbit {x = 0} lies inside V(x)
        assert_eq!(parts[1].part, OrbitPart::Whole);
    }

    fn parse_poly_with(s: &str, vars: &[&str]) -> LaurentPolynomial {
        let vars: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
        crate::valpoly::parse_poly_with_vars(s, &vars, &FieldProfile::rational()).unwrap()
    }
}
