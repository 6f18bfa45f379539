//! Combinatorics of special fibers of toric models: dual complexes, smooth
//! toric surfaces, metrized complexes of curves and refinement towers.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{LatticeVector, QVector, Rat, ValueGroup};
use crate::polyhedra::{
    cone_complex, height_one_complex, star_fan, Fan, GublerFan, PolyhedralComplex, Polyhedron,
};
use crate::tropical::{exploded_fibration, initial_form};
use crate::valpoly::{LaurentPolynomial, ResidueField, ResiduePolynomial};

/// Isomorphism type of a smooth complete toric surface with at most four rays.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SurfaceTag {
    P2,
    P1xP1,
    Hirzebruch(u64),
    Other,
}

impl fmt::Display for SurfaceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceTag::P2 => write!(f, "P2"),
            SurfaceTag::P1xP1 => write!(f, "P1xP1"),
            SurfaceTag::Hirzebruch(a) => write!(f, "Hirzebruch({a})"),
            SurfaceTag::Other => write!(f, "other"),
        }
    }
}

impl Serialize for SurfaceTag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// What a vertex of the height-one complex contributes to the special fiber.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ComponentKind {
    /// Complete star on a line.
    ProjectiveLine,
    /// Half-line star.
    AffineLine,
    Surface(SurfaceTag),
    Unclassified,
}

impl fmt::Display for ComponentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentKind::ProjectiveLine => write!(f, "P1"),
            ComponentKind::AffineLine => write!(f, "A1"),
            ComponentKind::Surface(t) => write!(f, "{t}"),
            ComponentKind::Unclassified => write!(f, "unclassified"),
        }
    }
}

impl Serialize for ComponentKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn det2(a: &LatticeVector, b: &LatticeVector) -> BigInt {
    &a[0] * &b[1] - &a[1] * &b[0]
}

fn ccw(a: &LatticeVector, b: &LatticeVector) -> Ordering {
    let half = |v: &LatticeVector| !(v[1].is_positive() || (v[1].is_zero() && v[0].is_positive()));
    half(a).cmp(&half(b)).then_with(|| BigInt::zero().cmp(&det2(a, b)))
}

/// Rays of a complete pointed fan in the plane in counterclockwise order, or
/// `None` when some cone is not pointed or some maximal cone is not smooth.
fn smooth_cycle(f: &Fan) -> Result<Option<Vec<LatticeVector>>> {
    if f.ambient_dim() != 2 {
        return Err(Error::Dimension { expected: 2, found: f.ambient_dim() });
    }
    if !f.is_complete() {
        return Err(Error::NotComplete("fan does not cover the plane".into()));
    }
    if f.cells().iter().any(|c| !c.is_pointed()) {
        return Ok(None);
    }
    let mut rays = f.rays();
    rays.sort_by(ccw);
    let k = rays.len();
    if f.cells_of_dim(2).len() != k {
        return Ok(None);
    }
    for i in 0..k {
        if det2(&rays[i], &rays[(i + 1) % k]) != BigInt::one() {
            return Ok(None);
        }
    }
    Ok(Some(rays))
}

/// The integers `a_i` with `u_{i-1} + u_{i+1} = a_i u_i` for the counterclockwise
/// rays of a smooth complete fan; the self-intersection of the divisor of `u_i`
/// is `-a_i`.
pub fn ray_relations(f: &Fan) -> Result<Option<Vec<BigInt>>> {
    let Some(rays) = smooth_cycle(f)? else { return Ok(None) };
    let k = rays.len();
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let s = rays[(i + k - 1) % k].add(&rays[(i + 1) % k]);
        let u = &rays[i];
        // s is parallel to u for a smooth complete fan
        let j = if u[0].is_zero() { 1 } else { 0 };
        let a = &s[j] / &u[j];
        if u.scale(&a) != s {
            return Err(Error::Inconsistent(format!("ray relation fails at {u}")));
        }
        out.push(a);
    }
    Ok(Some(out))
}

/// Classification read off from the self-intersection numbers alone.
fn classify_by_relations(a: &[BigInt]) -> SurfaceTag {
    let minus_one = BigInt::from(-1);
    match a.len() {
        3 if a.iter().all(|x| *x == minus_one) => SurfaceTag::P2,
        4 if a.iter().all(Zero::is_zero) => SurfaceTag::P1xP1,
        4 => {
            for s in 0..4 {
                let r = |i: usize| &a[(s + i) % 4];
                if r(0).is_positive() && r(1).is_zero() && *r(2) == -r(0) && r(3).is_zero() {
                    return SurfaceTag::Hirzebruch(r(0).to_u64().unwrap_or(u64::MAX));
                }
            }
            SurfaceTag::Other
        }
        _ => SurfaceTag::Other,
    }
}

/// Classification by normalizing a pair of adjacent rays to `e1, e2`.
fn classify_by_normal_form(rays: &[LatticeVector]) -> SurfaceTag {
    let k = rays.len();
    let lv = |x: i64, y: i64| LatticeVector::from_i64(&[x, y]);
    for i in 0..k {
        let (a, b) = (&rays[i], &rays[(i + 1) % k]);
        // inverse of the unimodular matrix with columns a, b
        let map = |v: &LatticeVector| LatticeVector::new(vec![&b[1] * &v[0] - &b[0] * &v[1], -&a[1] * &v[0] + &a[0] * &v[1]]);
        let image: Vec<LatticeVector> = (0..k).map(|j| map(&rays[(i + j) % k])).collect();
        if k == 3 && image[2] == lv(-1, -1) {
            return SurfaceTag::P2;
        }
        if k == 4 && image[2] == lv(-1, 0) {
            let last = &image[3];
            if *last == lv(0, -1) {
                return SurfaceTag::P1xP1;
            }
            if last[1] == BigInt::from(-1) && last[0].is_positive() {
                return SurfaceTag::Hirzebruch(last[0].to_u64().unwrap_or(u64::MAX));
            }
        }
    }
    SurfaceTag::Other
}

/// Classifies a complete fan in the plane. Both the normal form and the
/// self-intersection pattern are computed and must agree.
pub fn classify_surface_fan(f: &Fan) -> Result<SurfaceTag> {
    let Some(rays) = smooth_cycle(f)? else { return Ok(SurfaceTag::Other) };
    let by_form = classify_by_normal_form(&rays);
    let by_relations = classify_by_relations(&ray_relations(f)?.expect("smooth"));
    if by_form != by_relations {
        return Err(Error::Inconsistent(format!("normal form gives {by_form}, self-intersections give {by_relations}")));
    }
    Ok(by_form)
}

fn component_kind(star: &Fan) -> ComponentKind {
    match star.ambient_dim() {
        1 => match star.rays().len() {
            2 => ComponentKind::ProjectiveLine,
            1 => ComponentKind::AffineLine,
            _ => ComponentKind::Unclassified,
        },
        2 if star.is_complete() => classify_surface_fan(star).map(ComponentKind::Surface).unwrap_or(ComponentKind::Unclassified),
        _ => ComponentKind::Unclassified,
    }
}

/// A component of the special fiber.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub vertex: QVector,
    /// Index of the vertex in the height-one complex.
    pub cell: usize,
    pub star: Fan,
    pub kind: ComponentKind,
}

/// Components glued along the faces of the height-one complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualComplex {
    pub complex: PolyhedralComplex,
    pub components: Vec<Component>,
    /// Pairs of components meeting along a bounded edge, with the edge's cell index.
    pub edges: Vec<(usize, usize, usize)>,
    /// Bounded cells of dimension at least 2, as sorted component indices.
    pub faces: Vec<Vec<usize>>,
    /// Set when the model is only partial (support not all of `N_R x R_{>=0}`).
    pub partial: bool,
}

impl DualComplex {
    pub fn to_json(&self) -> DualComplexJson {
        DualComplexJson {
            partial: self.partial,
            components: self
                .components
                .iter()
                .map(|c| ComponentJson { vertex: c.vertex.clone(), kind: c.kind, star_rays: c.star.rays(), star_complete: c.star.is_complete() })
                .collect(),
            edges: self.edges.iter().map(|&(a, b, _)| [a, b]).collect(),
            faces: self.faces.clone(),
        }
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph special_fiber {\n");
        for (i, c) in self.components.iter().enumerate() {
            s.push_str(&format!("  v{i} [label=\"{} {}\"];\n", c.vertex, c.kind));
        }
        for &(a, b, _) in &self.edges {
            s.push_str(&format!("  v{a} -- v{b};\n"));
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DualComplexJson {
    pub partial: bool,
    pub components: Vec<ComponentJson>,
    pub edges: Vec<[usize; 2]>,
    pub faces: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentJson {
    pub vertex: QVector,
    pub kind: ComponentKind,
    pub star_rays: Vec<LatticeVector>,
    pub star_complete: bool,
}

pub fn special_fiber(d: &GublerFan) -> Result<DualComplex> {
    let complex = height_one_complex(d);
    let vertex_cells = complex.cells_of_dim(0);
    let mut components = Vec::with_capacity(vertex_cells.len());
    for &i in &vertex_cells {
        let vertex = complex.cell(i).vertices()[0].clone();
        let star = star_fan(&complex, &vertex)?;
        let kind = component_kind(&star);
        components.push(Component { vertex, cell: i, star, kind });
    }
    let component_of = |cell: usize| vertex_cells.iter().position(|&c| c == cell).expect("vertex cell");
    let vertices_of = |j: usize| -> Vec<usize> {
        let mut v: Vec<usize> = complex.faces_of(j).into_iter().filter(|&f| complex.cell(f).dim() == 0).map(component_of).collect();
        v.sort();
        v
    };
    let mut edges = Vec::new();
    let mut faces = Vec::new();
    for (j, cell) in complex.cells().iter().enumerate() {
        if !cell.is_bounded() {
            continue;
        }
        match cell.dim() {
            1 => {
                let v = vertices_of(j);
                edges.push((v[0], v[1], j));
            }
            d if d >= 2 => faces.push(vertices_of(j)),
            _ => {}
        }
    }
    Ok(DualComplex { complex, components, edges, faces, partial: !d.support_full() })
}

/// An edge length: a positive element of Gamma, or infinite for rays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeLength {
    Finite(Rat),
    Infinite,
}

impl Serialize for EdgeLength {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            EdgeLength::Finite(r) => r.serialize(s),
            EdgeLength::Infinite => s.serialize_str("inf"),
        }
    }
}

impl fmt::Display for EdgeLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeLength::Finite(r) => write!(f, "{r}"),
            EdgeLength::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MetrizedVertex {
    pub point: QVector,
    pub decoration: ResiduePolynomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MetrizedEdge {
    /// Endpoint vertex indices: two for a segment, one for a ray.
    pub ends: Vec<usize>,
    pub direction: LatticeVector,
    pub length: EdgeLength,
    /// The initial form on the open edge.
    pub fiber: ResiduePolynomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MetrizedComplex {
    pub vertices: Vec<MetrizedVertex>,
    pub edges: Vec<MetrizedEdge>,
}

impl MetrizedComplex {
    pub fn bounded_edges(&self) -> impl Iterator<Item = &MetrizedEdge> {
        self.edges.iter().filter(|e| e.length != EdgeLength::Infinite)
    }
}

/// Lattice length of the segment from `a` to `b`.
pub fn lattice_length(a: &QVector, b: &QVector) -> Option<Rat> {
    b.sub(a).primitive_decomposition().map(|(l, _)| l)
}

/// The curve `V(f)` in a two-dimensional torus as a metrized complex over the
/// restriction of `refine` (default: the corner locus itself).
pub fn build_metrized_complex(f: &LaurentPolynomial, refine: Option<&PolyhedralComplex>) -> Result<MetrizedComplex> {
    if f.nvars() != 2 {
        return Err(Error::Dimension { expected: 2, found: f.nvars() });
    }
    let e = exploded_fibration(f, refine)?;
    let base = &e.base;
    let gamma = f.profile().gamma;
    let vertex_cells = base.cells_of_dim(0);
    let mut vertices = Vec::with_capacity(vertex_cells.len());
    for &i in &vertex_cells {
        let point = base.cell(i).vertices()[0].clone();
        if !point.is_gamma_rational(&gamma) {
            return Err(Error::Rationality(format!("vertex {point} is not {gamma}-rational")));
        }
        let decoration = initial_form(f, &point)?;
        if decoration != e.fibers[i] {
            return Err(Error::Inconsistent(format!("decoration at {point} disagrees with the fiber")));
        }
        vertices.push(MetrizedVertex { point, decoration });
    }
    let mut edges = Vec::new();
    for j in base.cells_of_dim(1) {
        let cell = base.cell(j);
        let ends: Vec<usize> = base
            .faces_of(j)
            .into_iter()
            .filter(|&f| base.cell(f).dim() == 0)
            .map(|f| vertex_cells.iter().position(|&c| c == f).expect("vertex cell"))
            .collect();
        let (direction, length) = match ends.as_slice() {
            [a, b] => {
                let (l, dir) = vertices[*b].point.sub(&vertices[*a].point).primitive_decomposition().expect("distinct endpoints");
                (dir, EdgeLength::Finite(l))
            }
            _ => {
                let dir = cell.rays().first().cloned().or_else(|| cell.lineality().first().cloned()).ok_or_else(|| Error::Inconsistent("edge without direction".into()))?;
                (dir, EdgeLength::Infinite)
            }
        };
        edges.push(MetrizedEdge { ends, direction, length, fiber: e.fibers[j].clone() });
    }
    Ok(MetrizedComplex { vertices, edges })
}

/// Number of components of a fiber, when it can be read off.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComponentCount {
    Count(usize),
    Unfactored,
}

impl Serialize for ComponentCount {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ComponentCount::Count(k) => s.serialize_u64(*k as u64),
            ComponentCount::Unfactored => s.serialize_str("unfactored"),
        }
    }
}

impl fmt::Display for ComponentCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentCount::Count(k) => write!(f, "{k}"),
            ComponentCount::Unfactored => write!(f, "unfactored"),
        }
    }
}

/// Distinct `g`-th roots of `c` in the residue field, if they can be listed.
fn count_roots(field: ResidueField, c: &Rat, g: u32) -> Option<usize> {
    match field {
        ResidueField::Prime(p) => {
            if p > 1_000_000 {
                return None;
            }
            let pb = BigInt::from(p);
            let target = c.numer().clone();
            Some((0..p).filter(|y| BigInt::from(*y).modpow(&BigInt::from(g), &pb) == target).count())
        }
        ResidueField::Rational => {
            let root = |x: &BigInt| {
                let r = x.abs().nth_root(g);
                (r.pow(g) == x.abs()).then_some(r)
            };
            if root(c.numer()).is_none() || root(c.denom()).is_none() {
                return Some(0);
            }
            Some(match (c.is_negative(), g.is_multiple_of(2)) {
                (true, true) => 0,
                (false, true) => 2,
                _ => 1,
            })
        }
    }
}

/// Components of `V(r)` in the torus when `r` is linear or a binomial that
/// splits into distinct linear factors over the residue field.
pub fn count_components(r: &ResiduePolynomial) -> ComponentCount {
    let terms: Vec<(&LatticeVector, &Rat)> = r.terms().iter().collect();
    if terms.len() < 2 {
        return ComponentCount::Count(0);
    }
    if terms.iter().all(|(u, _)| u.coords().iter().all(|e| !e.is_negative()) && u.l1() <= BigInt::one()) {
        return ComponentCount::Count(1);
    }
    if terms.len() == 2 {
        let ((a, ca), (b, cb)) = (terms[0], terms[1]);
        // x^(a - b) = -cb / ca
        let g = a.sub(b).content();
        let Some(g) = g.to_u32() else { return ComponentCount::Unfactored };
        let field = r.field();
        let Ok(c) = field.normalize(&(-(cb / ca))) else { return ComponentCount::Unfactored };
        return match count_roots(field, &c, g) {
            Some(k) if k == g as usize => ComponentCount::Count(k),
            _ => ComponentCount::Unfactored,
        };
    }
    ComponentCount::Unfactored
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointCountRow {
    pub cell: usize,
    pub dim: isize,
    pub fiber: ResiduePolynomial,
    pub components: ComponentCount,
}

/// One row per cell of the (refined) tropical hypersurface with its fiber.
pub fn adic_point_count(f: &LaurentPolynomial, refine: Option<&PolyhedralComplex>) -> Result<Vec<PointCountRow>> {
    let e = exploded_fibration(f, refine)?;
    Ok(e.base
        .cells()
        .iter()
        .zip(&e.fibers)
        .enumerate()
        .map(|(cell, (p, fiber))| PointCountRow { cell, dim: p.dim(), fiber: fiber.clone(), components: count_components(fiber) })
        .collect())
}

/// One stage of a refinement tower over the line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerStage {
    pub fan: GublerFan,
    pub dual: DualComplex,
    pub components: usize,
    /// Components with complete star (projective lines).
    pub interior_components: usize,
    /// The vertex across the node of the distinguished component, on the side
    /// of the insertions.
    pub node_neighbor: QVector,
    /// Cell index of the edge carrying that node.
    pub node_edge: usize,
    /// For each cell, the minimal cell of the previous stage containing it.
    pub cell_map: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceClass {
    /// The nodes converge to a point of the closure of the distinguished
    /// component that is never a component of any stage.
    LimitBoundary,
    Unresolved,
}

impl fmt::Display for TraceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceClass::LimitBoundary => write!(f, "limit boundary point"),
            TraceClass::Unresolved => write!(f, "unresolved"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceReport {
    pub vertex: QVector,
    pub direction: LatticeVector,
    pub nodes: Vec<QVector>,
    pub star_fixed: bool,
    pub nodes_on_edges: bool,
    pub class: TraceClass,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinementTower {
    pub stages: Vec<TowerStage>,
    pub trace: TraceReport,
}

fn default_line_base() -> PolyhedralComplex {
    let q = |x: i64| QVector::from_i64(&[x]);
    let lv = |x: i64| LatticeVector::from_i64(&[x]);
    let cells = [
        Polyhedron::from_points(1, &[q(0)], &[lv(-1)], &[]).expect("ray"),
        Polyhedron::from_points(1, &[q(0), q(1)], &[], &[]).expect("segment"),
        Polyhedron::from_points(1, &[q(1)], &[lv(1)], &[]).expect("ray"),
    ];
    PolyhedralComplex::new(1, &cells).expect("decomposition of the line")
}

/// `(-inf, 0], [0, 1], [1, inf)` with distinguished vertex 0.
pub fn default_tower_base() -> (PolyhedralComplex, QVector) {
    (default_line_base(), QVector::from_i64(&[0]))
}

fn stage(c: &PolyhedralComplex, gamma: &ValueGroup, v: &QVector, side: &Rat, prev: Option<&PolyhedralComplex>) -> Result<TowerStage> {
    let fan = cone_complex(c, gamma)?;
    let dual = special_fiber(&fan)?;
    let complex = &dual.complex;
    let node_edge = complex
        .cells_of_dim(1)
        .into_iter()
        .find(|&j| {
            let cell = complex.cell(j);
            cell.contains(v) && Rat::from_int((&cell.relative_interior_point()[0] - &v[0]).signum()) == *side
        })
        .ok_or_else(|| Error::InsertionOrder("no edge leaves the distinguished vertex on the insertion side".into()))?;
    let node_neighbor = complex
        .cell(node_edge)
        .vertices()
        .into_iter()
        .find(|w| w != v)
        .ok_or_else(|| Error::InsertionOrder("the edge at the distinguished vertex is unbounded".into()))?;
    let cell_map = match prev {
        None => (0..complex.len()).collect(),
        Some(p) => complex
            .cell_map_into(p)
            .into_iter()
            .map(|m| m.ok_or_else(|| Error::Refinement("stage does not refine its predecessor".into())))
            .collect::<Result<_>>()?,
    };
    let interior_components = dual.components.iter().filter(|k| k.kind == ComponentKind::ProjectiveLine).count();
    Ok(TowerStage { components: dual.components.len(), interior_components, node_neighbor, node_edge, cell_map, fan, dual })
}

/// Successively subdivides the edge at the vertex `v` of a decomposition of the
/// line at the given points, which must approach `v` strictly monotonically
/// from one side.
pub fn tower_simulate(base: &PolyhedralComplex, v: &QVector, insertions: &[Rat], gamma: &ValueGroup) -> Result<RefinementTower> {
    if base.ambient_dim() != 1 {
        return Err(Error::Dimension { expected: 1, found: base.ambient_dim() });
    }
    if base.vertex_index(v).is_none() {
        return Err(Error::NotAVertex(v.to_string()));
    }
    if let Some(x) = insertions.iter().find(|x| !gamma.contains(x)) {
        return Err(Error::Rationality(format!("insertion {x} is not in {gamma}")));
    }
    let side = match insertions.first() {
        Some(x) if *x != v[0] => Rat::from_int((x - &v[0]).signum()),
        Some(_) => return Err(Error::InsertionOrder("insertion at the distinguished vertex".into())),
        None => Rat::from_int(1),
    };
    let mut complex = base.clone();
    let mut stages = vec![stage(&complex, gamma, v, &side, None)?];
    for x in insertions {
        let last = stages.last().expect("stage 0");
        let edge = last.dual.complex.cell(last.node_edge);
        let point = QVector::new(vec![x.clone()]);
        if !edge.relative_interior_contains(&point) {
            return Err(Error::InsertionOrder(format!(
                "{x} is not strictly between {v} and {}",
                last.node_neighbor
            )));
        }
        let halves = [
            Polyhedron::from_points(1, &[v.clone(), point.clone()], &[], &[])?,
            if edge.is_bounded() {
                Polyhedron::from_points(1, &[point.clone(), last.node_neighbor.clone()], &[], &[])?
            } else {
                Polyhedron::from_points(1, std::slice::from_ref(&point), &edge.rays(), &[])?
            },
        ];
        let mut cells: Vec<Polyhedron> =
            complex.maximal_cells().into_iter().map(|i| complex.cell(i).clone()).filter(|c| c != edge).collect();
        cells.extend(halves);
        let next = PolyhedralComplex::new(1, &cells)?;
        let prev = last.dual.complex.clone();
        stages.push(stage(&next, gamma, v, &side, Some(&prev))?);
        complex = next;
    }

    let star = |s: &TowerStage| s.dual.components.iter().find(|c| &c.vertex == v).map(|c| c.star.clone());
    let star0 = star(&stages[0]);
    let star_fixed = stages.iter().all(|s| star(s) == star0);
    let nodes_on_edges = stages.windows(2).all(|w| {
        let (prev, cur) = (&w[0], &w[1]);
        let mapped = cur.cell_map[cur.node_edge];
        let new_vertex = cur.dual.complex.vertex_index(&cur.node_neighbor).map(|i| cur.cell_map[i]);
        mapped == prev.node_edge && new_vertex == Some(prev.node_edge)
    });
    let growing = stages.windows(2).all(|w| w[1].components == w[0].components + 1);
    let class = if star_fixed && nodes_on_edges && growing && !insertions.is_empty() {
        TraceClass::LimitBoundary
    } else {
        TraceClass::Unresolved
    };
    let direction = LatticeVector::new(vec![side.numer().clone()]);
    let nodes = stages.iter().map(|s| s.node_neighbor.clone()).collect();
    Ok(RefinementTower { stages, trace: TraceReport { vertex: v.clone(), direction, nodes, star_fixed, nodes_on_edges, class } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::{fan_over_complex, Cone};
    use crate::tropical::linearity_complex;
    use crate::valpoly::{parse_poly, FieldProfile};

    fn fan(rays: &[[i64; 2]]) -> Fan {
        let mut rs: Vec<LatticeVector> = rays.iter().map(|r| LatticeVector::from_i64(r)).collect();
        rs.sort_by(ccw);
        let k = rs.len();
        let cones: Vec<Cone> =
            (0..k).map(|i| Cone::from_generators(2, &[rs[i].clone(), rs[(i + 1) % k].clone()], &[]).unwrap()).collect();
        Fan::new(2, &cones).unwrap()
    }

    #[test]
    fn surface_tags() {
        assert_eq!(classify_surface_fan(&fan(&[[1, 0], [0, 1], [-1, -1]])).unwrap(), SurfaceTag::P2);
        assert_eq!(classify_surface_fan(&fan(&[[1, 0], [0, 1], [-1, 0], [0, -1]])).unwrap(), SurfaceTag::P1xP1);
        assert_eq!(classify_surface_fan(&fan(&[[1, 0], [0, 1], [-1, 0], [1, -1]])).unwrap(), SurfaceTag::Hirzebruch(1));
        assert_eq!(classify_surface_fan(&fan(&[[1, 0], [0, 1], [-1, 0], [3, -1]])).unwrap(), SurfaceTag::Hirzebruch(3));
        // weighted projective plane P(1,1,2): not smooth
        assert_eq!(classify_surface_fan(&fan(&[[1, 0], [0, 1], [-1, -2]])).unwrap(), SurfaceTag::Other);
        assert_eq!(classify_surface_fan(&fan(&[[1, 0], [1, 1], [0, 1], [-1, 0], [0, -1]])).unwrap(), SurfaceTag::Other);
        let half = Fan::new(2, &[Cone::from_generators(2, &[LatticeVector::from_i64(&[1, 0])], &[]).unwrap()]).unwrap();
        assert!(matches!(classify_surface_fan(&half), Err(Error::NotComplete(_))));
    }

    #[test]
    fn interval_model_fiber() {
        let d = fan_over_complex(&default_line_base(), &ValueGroup::integers()).unwrap();
        let s = special_fiber(&d).unwrap();
        assert_eq!(s.components.len(), 2);
        assert!(s.components.iter().all(|c| c.kind == ComponentKind::ProjectiveLine));
        assert_eq!(s.edges.len(), 1);
        assert!(!s.partial);
    }

    #[test]
    fn p2_degeneration() {
        let f = parse_poly(
            "t^2 + t*x + t^2*x^2 + t^3*x^3 + t*y + x*y + t*x^2*y + t^2*y^2 + t*x*y^2 + t^3*y^3",
            &FieldProfile::rational(),
        )
        .unwrap();
        let c = linearity_complex(&f).unwrap();
        let d = fan_over_complex(&c, &ValueGroup::integers()).unwrap();
        let s = special_fiber(&d).unwrap();
        let mut tags: Vec<(QVector, String)> = s.components.iter().map(|c| (c.vertex.clone(), c.kind.to_string())).collect();
        tags.sort();
        let q = |x, y| QVector::from_i64(&[x, y]);
        assert_eq!(
            tags,
            vec![
                (q(-1, -1), "P2".to_string()),
                (q(-1, 1), "Hirzebruch(1)".to_string()),
                (q(1, -1), "Hirzebruch(1)".to_string()),
                (q(1, 1), "P1xP1".to_string()),
            ]
        );
    }

    #[test]
    fn metrized_line() {
        let f = parse_poly("x + y + 1", &FieldProfile::rational()).unwrap();
        let m = build_metrized_complex(&f, None).unwrap();
        assert_eq!(m.vertices.len(), 1);
        assert_eq!(m.vertices[0].decoration.to_string(), "x + y + 1");
        assert_eq!(m.edges.len(), 3);
        assert!(m.edges.iter().all(|e| e.length == EdgeLength::Infinite));

        let bounded = parse_poly("x + y + 1 + t*x*y", &FieldProfile::rational()).unwrap();
        let m = build_metrized_complex(&bounded, None).unwrap();
        let lengths: Vec<&EdgeLength> = m.bounded_edges().map(|e| &e.length).collect();
        assert_eq!(lengths, vec![&EdgeLength::Finite(Rat::one())]);
    }

    #[test]
    fn fiber_counts() {
        let q = FieldProfile::rational();
        let rows = adic_point_count(&parse_poly("x + y + 1", &q).unwrap(), None).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.components == ComponentCount::Count(1)));
        assert!(adic_point_count(&parse_poly("x*y", &q).unwrap(), None).unwrap().is_empty());
        let r = |s: &str, p: &FieldProfile| initial_form(&parse_poly(s, p).unwrap(), &QVector::from_i64(&[0])).unwrap();
        assert_eq!(count_components(&r("x^2 - 1", &q)), ComponentCount::Count(2));
        assert_eq!(count_components(&r("x^2 + 1", &q)), ComponentCount::Unfactored);
        let f5 = FieldProfile::p_adic(5).unwrap();
        assert_eq!(count_components(&r("x^2 + 1", &f5)), ComponentCount::Count(2));
        assert_eq!(count_components(&r("x^2 + x + 1", &q)), ComponentCount::Unfactored);
    }

    #[test]
    fn bubbling_tower() {
        let (base, v) = default_tower_base();
        let ins: Vec<Rat> = (1..=4).map(|k| Rat::new(1, 1i64 << k)).collect();
        let t = tower_simulate(&base, &v, &ins, &ValueGroup::new(16).unwrap()).unwrap();
        let counts: Vec<usize> = t.stages.iter().map(|s| s.components).collect();
        assert_eq!(counts, vec![2, 3, 4, 5, 6]);
        assert_eq!(t.trace.class, TraceClass::LimitBoundary);
        assert!(t.trace.star_fixed);
        let bad = [Rat::new(1, 2), Rat::new(3, 4)];
        assert!(matches!(tower_simulate(&base, &v, &bad, &ValueGroup::new(4).unwrap()), Err(Error::InsertionOrder(_))));
        assert!(matches!(tower_simulate(&base, &v, &[Rat::new(1, 3)], &ValueGroup::integers()), Err(Error::Rationality(_))));
    }

    #[test]
    fn chart_tower_starts_with_two_affine_lines() {
        let seg = Polyhedron::from_points(1, &[QVector::from_i64(&[0]), QVector::from_i64(&[1])], &[], &[]).unwrap();
        let c = PolyhedralComplex::new(1, &[seg]).unwrap();
        let t = tower_simulate(&c, &QVector::from_i64(&[0]), &[Rat::new(1, 2)], &ValueGroup::new(2).unwrap()).unwrap();
        let s0 = &t.stages[0].dual;
        assert!(s0.partial);
        assert_eq!(s0.components.iter().map(|c| c.kind).collect::<Vec<_>>(), vec![ComponentKind::AffineLine; 2]);
        assert_eq!(s0.edges.len(), 1);
        assert_eq!(t.stages[1].components, 3);
    }
}
