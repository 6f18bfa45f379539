//! Seeded randomized suites comparing the engine against the oracles.
//!
//! Each suite returns a [`SuiteReport`]; the command line `check` subcommand
//! and the acceptance tests print them.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::exactnum::{LatticeVector, QVector, Rat, ValueGroup};
use crate::oracle::{minimum_attained_twice, verify_basis, SemigroupOracle};
use crate::polyhedra::{cone_over, PolyhedralComplex, Polyhedron};
use crate::tilted::tilted_semigroup;
use crate::tropical::{exploded_fibration, initial_form, tropicalize, TropicalHypersurface};
use crate::valpoly::{FieldProfile, LaurentPolynomial, ValuedCoefficient};

pub const DEFAULT_SEED: u64 = 20_240_601;

/// Denominator of the sampling grid. Cell weights have denominators at most 8.
const GRID: u64 = 840;

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub seed: u64,
    pub cases: usize,
    pub checks: usize,
    pub failures: Vec<String>,
    #[serde(serialize_with = "seconds")]
    pub elapsed: Duration,
}

fn seconds<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl SuiteReport {
    fn new(name: &str, seed: u64) -> SuiteReport {
        SuiteReport { name: name.into(), seed, cases: 0, checks: 0, failures: Vec::new(), elapsed: Duration::ZERO }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failures.len() < 20 {
            self.failures.push(what());
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteSize {
    pub polynomials: usize,
    pub points_per_polynomial: usize,
    pub cones: usize,
}

impl Default for SuiteSize {
    fn default() -> Self {
        SuiteSize { polynomials: 24, points_per_polynomial: 240, cones: 60 }
    }
}

/// A random polynomial in `x, y` with 2 to 8 terms, exponents in `[-2, 3]` and
/// valuations in `{0, 1, 2}`.
pub fn random_polynomial(rng: &mut ChaCha8Rng) -> LaurentPolynomial {
    let k = rng.random_range(2..=8);
    let mut terms = std::collections::BTreeMap::new();
    while terms.len() < k {
        let u = LatticeVector::from_i64(&[rng.random_range(-2..=3), rng.random_range(-2..=3)]);
        let residue = rng.random_range(1..=3) * if rng.random_bool(0.5) { 1 } else { -1 };
        terms.insert(u, ValuedCoefficient::new(Rat::from_int(rng.random_range(0..=2)), Rat::from_int(residue)));
    }
    LaurentPolynomial::new(vec!["x".into(), "y".into()], terms, FieldProfile::rational()).expect("valid random polynomial")
}

/// The value group `(1/(840 L)) Z`, where `L` clears the denominators of the
/// vertices of the hypersurface, so that cell samples are rational over it.
fn sampling_group(t: &TropicalHypersurface) -> ValueGroup {
    let l = t
        .complex()
        .vertices()
        .iter()
        .flat_map(|v| v.coords().iter().map(|c| c.denom().clone()).collect::<Vec<_>>())
        .fold(BigInt::from(1), |a, b| a.lcm(&b));
    ValueGroup::new(GRID * u64::try_from(l).unwrap_or(1)).expect("positive")
}

/// `f` over the value group on which cell samples of its hypersurface `t` are
/// rational.
pub fn over_sampling_group(f: &LaurentPolynomial, t: &TropicalHypersurface) -> LaurentPolynomial {
    with_gamma(f, sampling_group(t))
}

fn with_gamma(f: &LaurentPolynomial, g: ValueGroup) -> LaurentPolynomial {
    let profile = f.profile().clone().with_gamma(g);
    LaurentPolynomial::new(f.vars().to_vec(), f.terms().clone(), profile).expect("valuations stay in the larger group")
}

fn grid_rat(rng: &mut ChaCha8Rng, bound: i64) -> Rat {
    let d = GRID as i64;
    Rat::new(rng.random_range(-bound * d..=bound * d), d)
}

/// A random point in the relative interior of a cell, with vertex weights of
/// denominator at most 8 and ray coefficients in `(1/840) Z_{>0}`.
pub fn sample_in_cell(rng: &mut ChaCha8Rng, cell: &Polyhedron) -> QVector {
    let verts = cell.vertices();
    let weights: Vec<i64> = verts.iter().map(|_| rng.random_range(1..=4)).collect();
    let total: i64 = weights.iter().sum();
    let n = cell.ambient_dim();
    let mut p = QVector::zero(n);
    for (v, w) in verts.iter().zip(&weights) {
        p = p.add(&v.scale(&Rat::new(*w, total)));
    }
    for r in cell.rays() {
        let c = Rat::new(rng.random_range(1..=3 * GRID as i64), GRID as i64);
        p = p.add(&r.to_qvector().scale(&c));
    }
    for l in cell.lineality() {
        p = p.add(&l.to_qvector().scale(&grid_rat(rng, 3)));
    }
    p
}

fn sample_points(rng: &mut ChaCha8Rng, t: &TropicalHypersurface, count: usize) -> Vec<QVector> {
    let mut pts = Vec::with_capacity(count);
    for a in -3..=3 {
        for b in -3..=3 {
            pts.push(QVector::from_i64(&[a, b]));
        }
    }
    let cells = t.complex().cells();
    while pts.len() < count {
        let p = match (rng.random_range(0..3), cells.is_empty()) {
            (0, _) | (_, true) => QVector::new(vec![grid_rat(rng, 4), grid_rat(rng, 4)]),
            (1, false) => {
                let i = rng.random_range(0..cells.len());
                sample_in_cell(rng, &cells[i])
            }
            _ => {
                let i = rng.random_range(0..cells.len());
                let on = sample_in_cell(rng, &cells[i]);
                let d = GRID as i64;
                on.add(&QVector::new(vec![Rat::new(rng.random_range(-3..=3), d), Rat::new(rng.random_range(-3..=3), d)]))
            }
        };
        pts.push(p);
    }
    pts
}

/// Separate generators for the polynomials and for everything else, so that
/// the polynomial suites all see the same polynomials.
fn streams(seed: u64) -> (ChaCha8Rng, ChaCha8Rng) {
    let polys = ChaCha8Rng::seed_from_u64(seed);
    let mut rest = ChaCha8Rng::seed_from_u64(seed);
    rest.set_stream(1);
    (polys, rest)
}

/// Initial forms with at least two terms occur exactly on the corner locus.
pub fn fundamental_theorem_suite(seed: u64, size: SuiteSize) -> Result<SuiteReport> {
    let start = Instant::now();
    let (mut polys, mut rng) = streams(seed);
    let mut report = SuiteReport::new("fundamental theorem", seed);
    for _ in 0..size.polynomials {
        let f0 = random_polynomial(&mut polys);
        let t = tropicalize(&f0)?;
        let f = with_gamma(&f0, sampling_group(&t));
        report.cases += 1;
        for v in sample_points(&mut rng, &t, size.points_per_polynomial) {
            let in_trop = t.contains(&v);
            let several = initial_form(&f, &v)?.len() >= 2;
            let direct = minimum_attained_twice(&f, &v);
            report.check(in_trop == several && several == direct, || {
                format!("f = {f}, v = {v}: support {in_trop}, initial form {several}, direct {direct}")
            });
        }
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

fn edge_direction(cell: &Polyhedron) -> Option<LatticeVector> {
    let v = cell.vertices();
    if v.len() == 2 {
        return v[1].sub(&v[0]).primitive_decomposition().map(|(_, d)| d);
    }
    cell.rays().first().cloned().or_else(|| cell.lineality().first().cloned())
}

/// Complementary dimensions, orthogonality of edges to dual edges, one vertex
/// per maximal dual cell, and balancing at every vertex.
pub fn duality_suite(seed: u64, size: SuiteSize) -> Result<SuiteReport> {
    let start = Instant::now();
    let (mut polys, _) = streams(seed);
    let mut report = SuiteReport::new("duality and balancing", seed);
    for _ in 0..size.polynomials {
        let f = random_polynomial(&mut polys);
        let t = tropicalize(&f)?;
        report.cases += 1;
        let c = t.complex();
        let n = f.nvars();
        let mut top_dual = Vec::new();
        for i in 0..c.len() {
            let dual = t.dual(i);
            let dim = c.cell(i).dim();
            report.check(dim >= 0 && dim as usize + dual.dim == n, || format!("f = {f}: cell {i} has dim {dim}, dual dim {}", dual.dim));
            if dual.dim == n {
                top_dual.push(dual.exponents.clone());
            }
            if dim == 1 {
                let dir = edge_direction(c.cell(i));
                let orthogonal = dir.is_some_and(|d| {
                    dual.exponents.iter().all(|u| u.sub(&dual.exponents[0]).dot(&d) == BigInt::from(0))
                });
                report.check(orthogonal, || format!("f = {f}: edge {i} is not orthogonal to its dual"));
            }
            if dim == 0 {
                let zero = t.balancing_sum(i).map(|s| s.is_zero()).unwrap_or(false);
                report.check(zero, || format!("f = {f}: vertex {i} is not balanced"));
            }
        }
        top_dual.sort();
        top_dual.dedup();
        report.check(top_dual.len() == c.cells_of_dim(0).len(), || {
            format!("f = {f}: {} vertices but {} maximal dual cells", c.cells_of_dim(0).len(), top_dual.len())
        });
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Splits some edges of the hypersurface at random interior points.
pub fn random_subdivision(rng: &mut ChaCha8Rng, t: &TropicalHypersurface) -> Result<(PolyhedralComplex, usize)> {
    let c = t.complex();
    let n = c.ambient_dim();
    let mut cells = Vec::new();
    let mut splits = 0;
    for i in c.maximal_cells() {
        let cell = c.cell(i);
        if cell.dim() != 1 || !rng.random_bool(0.5) {
            cells.push(cell.clone());
            continue;
        }
        let p = sample_in_cell(rng, cell);
        let verts = if cell.lineality().is_empty() { cell.vertices() } else { Vec::new() };
        let mut ends: Vec<Polyhedron> = verts.iter().map(|v| Polyhedron::from_points(n, &[v.clone(), p.clone()], &[], &[])).collect::<Result<_>>()?;
        for r in cell.rays() {
            ends.push(Polyhedron::from_points(n, std::slice::from_ref(&p), &[r], &[])?);
        }
        for l in cell.lineality() {
            ends.push(Polyhedron::from_points(n, std::slice::from_ref(&p), std::slice::from_ref(&l), &[])?);
            ends.push(Polyhedron::from_points(n, std::slice::from_ref(&p), &[l.neg()], &[])?);
        }
        cells.extend(ends);
        splits += 1;
    }
    Ok((PolyhedralComplex::new(n, &cells)?, splits))
}

/// Fibers of the exploded fibration do not change under subdivision.
pub fn refinement_suite(seed: u64, size: SuiteSize) -> Result<SuiteReport> {
    let start = Instant::now();
    let (mut polys, mut rng) = streams(seed);
    let mut report = SuiteReport::new("refinement invariance", seed);
    for _ in 0..size.polynomials {
        let f0 = random_polynomial(&mut polys);
        let t = tropicalize(&f0)?;
        let f = with_gamma(&f0, sampling_group(&t));
        report.cases += 1;
        let coarse = exploded_fibration(&f, None)?;
        let (refine, splits) = random_subdivision(&mut rng, &t)?;
        let fine = exploded_fibration(&f, Some(&refine))?;
        report.check(fine.base.len() == coarse.base.len() + 2 * splits, || {
            format!("f = {f}: {} cells after {splits} splits of {}", fine.base.len(), coarse.base.len())
        });
        for (i, fiber) in fine.fibers.iter().enumerate() {
            let j = fine.trop_cell[i];
            report.check(*fiber == coarse.fibers[j], || format!("f = {f}: fiber {fiber} on a piece of a cell with fiber {}", coarse.fibers[j]));
        }
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

/// A random Gamma-rational polyhedron of full dimension in `Q^n`, `n` in `{1, 2}`.
fn random_polyhedron(rng: &mut ChaCha8Rng, n: usize, d: u64) -> Result<Polyhedron> {
    let coord = |rng: &mut ChaCha8Rng| Rat::new(rng.random_range(-2 * d as i64..=2 * d as i64), d);
    loop {
        let k = rng.random_range(n + 1..=n + 2);
        let pts: Vec<QVector> = (0..k).map(|_| QVector::new((0..n).map(|_| coord(rng)).collect())).collect();
        let rays: Vec<LatticeVector> = if rng.random_bool(0.3) {
            vec![LatticeVector::new((0..n).map(|_| BigInt::from(rng.random_range(-2..=2))).collect())]
        } else {
            vec![]
        };
        let rays: Vec<LatticeVector> = rays.into_iter().filter(|r| !r.is_zero()).collect();
        let p = Polyhedron::from_points(n, &pts, &rays, &[])?;
        if p.dim() == n as isize {
            return Ok(p);
        }
    }
}

/// Facet normals of a full-dimensional pointed cone in dimension 2 or 3, by
/// testing every candidate hyperplane through `dim - 1` rays.
fn brute_facet_normals(rays: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let k = rays[0].len();
    let mut candidates: Vec<Vec<i128>> = Vec::new();
    if k == 2 {
        for r in rays {
            candidates.push(vec![-r[1], r[0]]);
            candidates.push(vec![r[1], -r[0]]);
        }
    } else {
        for a in rays {
            for b in rays {
                let c = vec![a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
                if c.iter().any(|&x| x != 0) {
                    candidates.push(c);
                }
            }
        }
    }
    let mut out: Vec<Vec<i128>> = candidates
        .into_iter()
        .filter(|c| rays.iter().all(|r| c.iter().zip(r).map(|(x, y)| x * y).sum::<i128>() >= 0))
        .map(|c| {
            let g = c.iter().fold(0i128, |a, &b| a.gcd(&b));
            c.iter().map(|x| x / g).collect()
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Hilbert bases of random admissible cones against the box oracle.
pub fn hilbert_suite(seed: u64, size: SuiteSize) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport::new("Hilbert basis oracle", seed);
    while report.cases < size.cones {
        let n = rng.random_range(1..=2);
        let d = rng.random_range(1..=3u64);
        let gamma = ValueGroup::new(d)?;
        let p = random_polyhedron(&mut rng, n, d)?;
        let cone = cone_over(&p, &gamma)?;
        let scaled: Vec<Vec<i128>> = cone
            .cone()
            .rays()
            .iter()
            .map(|r| {
                r.coords()
                    .iter()
                    .enumerate()
                    .map(|(i, x)| i128::try_from(x).expect("small") * if i < n { d as i128 } else { 1 })
                    .collect()
            })
            .collect();
        let normals = brute_facet_normals(&scaled);
        let bound = (0..=n).map(|j| normals.iter().map(|g| g[j].abs()).sum::<i128>()).max().unwrap_or(0);
        if bound > 9 {
            continue;
        }
        report.cases += 1;
        let s = tilted_semigroup(&cone)?;
        let basis: Vec<Vec<i128>> = s
            .hilbert_basis()
            .iter()
            .map(|e| {
                let mut y: Vec<i128> = e.u.coords().iter().map(|x| i128::try_from(x).expect("small")).collect();
                y.push(i128::try_from((&e.n * Rat::from_int(d)).to_integer().expect("in Gamma")).expect("small"));
                y
            })
            .collect();
        let oracle = SemigroupOracle::new(scaled);
        let verdict = verify_basis(&oracle, &basis, bound.max(2));
        report.checks += verdict.box_points;
        report.check(s.units().is_empty(), || format!("cone over {p:?}: unexpected units"));
        report.check(verdict.ok(), || format!("cone over {p:?} with Gamma = {gamma}: {verdict:?}"));
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

pub fn run_all(seed: u64, size: SuiteSize) -> Result<Vec<SuiteReport>> {
    Ok(vec![
        fundamental_theorem_suite(seed, size)?,
        hilbert_suite(seed, size)?,
        duality_suite(seed, size)?,
        refinement_suite(seed, size)?,
    ])
}
