use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::complex::{Cell, Complex, PolyhedralComplex};
use super::cone::{Cone, ConeJson};
use super::polyhedron::PolyhedronJson;
use crate::error::{Error, Result};
use crate::exactnum::LatticeVector;

/// JSON form of a polyhedral complex in `N_Q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexJson {
    pub ambient: usize,
    pub cells: Vec<PolyhedronJson>,
}

impl ComplexJson {
    pub fn build(&self) -> Result<PolyhedralComplex> {
        if !(1..=3).contains(&self.ambient) {
            return Err(Error::UnsupportedDimension(self.ambient));
        }
        let cells = self.cells.iter().map(|c| c.build(self.ambient)).collect::<Result<Vec<_>>>()?;
        PolyhedralComplex::new(self.ambient, &cells)
    }

    pub fn from_complex(c: &PolyhedralComplex) -> ComplexJson {
        ComplexJson { ambient: c.ambient_dim(), cells: c.cells().iter().map(|p| p.to_json()).collect() }
    }
}

/// JSON input form of a cone: generators, or inequalities `a . x >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeInput {
    #[serde(default)]
    pub rays: Vec<LatticeVector>,
    #[serde(default)]
    pub lineality: Vec<LatticeVector>,
    #[serde(default)]
    pub ineqs: Vec<LatticeVector>,
    #[serde(default)]
    pub eqs: Vec<LatticeVector>,
}

impl ConeInput {
    pub fn build(&self) -> Result<Cone> {
        let has_v = !self.rays.is_empty() || !self.lineality.is_empty();
        let has_h = !self.ineqs.is_empty() || !self.eqs.is_empty();
        let ambient = self
            .rays
            .iter()
            .chain(&self.lineality)
            .chain(&self.ineqs)
            .chain(&self.eqs)
            .map(LatticeVector::len)
            .next()
            .ok_or_else(|| Error::InvalidValue("cone needs rays or inequalities".into()))?;
        match (has_v, has_h) {
            (true, false) => Cone::from_generators(ambient, &self.rays, &self.lineality),
            (false, true) => Cone::from_inequalities(ambient, &self.ineqs, &self.eqs),
            _ => {
                let a = Cone::from_generators(ambient, &self.rays, &self.lineality)?;
                let b = Cone::from_inequalities(ambient, &self.ineqs, &self.eqs)?;
                if a != b {
                    return Err(Error::InvalidValue("H- and V-representations of the cone disagree".into()));
                }
                Ok(a)
            }
        }
    }
}

/// JSON form of a fan: the cones, by dimension, with their immediate faces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FanJson {
    pub ambient: usize,
    pub complete: bool,
    pub cones: Vec<ConeJson>,
    pub facets: Vec<Vec<usize>>,
}

impl FanJson {
    pub fn from_fan(f: &Complex<Cone>) -> FanJson {
        FanJson {
            ambient: f.ambient_dim(),
            complete: f.is_complete(),
            cones: f.cells().iter().map(Cone::to_json).collect(),
            facets: (0..f.len()).map(|i| f.facets_of(i).to_vec()).collect(),
        }
    }
}

/// Hasse diagram of the face poset in Graphviz DOT.
pub fn face_poset_dot<T: Cell>(c: &Complex<T>, name: &str, label: impl Fn(&T) -> String) -> String {
    let mut s = String::new();
    writeln!(s, "digraph {name} {{").unwrap();
    writeln!(s, "  rankdir=BT;").unwrap();
    for (i, cell) in c.cells().iter().enumerate() {
        writeln!(s, "  c{i} [label=\"{}\"];", label(cell).replace('"', "'")).unwrap();
    }
    for i in 0..c.len() {
        for &f in c.facets_of(i) {
            writeln!(s, "  c{f} -> c{i};").unwrap();
        }
    }
    s.push_str("}\n");
    s
}
