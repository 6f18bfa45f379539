//! Laurent polynomials over a valued field, stored by (valuation, leading residue)
//! per term, and residue polynomials over the residue field.

mod field;
mod parse;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use field::{is_prime, FieldProfile, ResidueField};
pub use parse::{parse_poly, parse_poly_with_vars};

use crate::error::{Error, Result};
use crate::exactnum::{LatticeVector, QVector, Rat};
use crate::polyhedra::Polyhedron;

/// A field element abstracted by its valuation and the residue of its leading term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ValuedCoefficient {
    pub valuation: Rat,
    pub residue: Rat,
}

impl ValuedCoefficient {
    pub fn new(valuation: Rat, residue: Rat) -> ValuedCoefficient {
        ValuedCoefficient { valuation, residue }
    }
}

/// `f = sum_u a_u x^u` with `a_u` in `K^x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPolynomial {
    vars: Vec<String>,
    terms: BTreeMap<LatticeVector, ValuedCoefficient>,
    profile: FieldProfile,
}

fn check_vars(vars: &[String], uniformizer: &str) -> Result<()> {
    if vars.is_empty() {
        return Err(Error::InvalidValue("a polynomial needs at least one variable".into()));
    }
    for (i, v) in vars.iter().enumerate() {
        if !field::is_identifier(v) || v == uniformizer || vars[..i].contains(v) {
            return Err(Error::InvalidValue(format!("bad variable name {v:?}")));
        }
    }
    Ok(())
}

fn exponent_string(u: &LatticeVector) -> String {
    u.to_string()
}

impl LaurentPolynomial {
    /// Builds a polynomial, merging repeated exponents: the term of lower valuation
    /// wins; equal valuations add residues, and a cancelling sum is rejected since
    /// the next-order term is unknown.
    pub fn new(
        vars: Vec<String>,
        terms: impl IntoIterator<Item = (LatticeVector, ValuedCoefficient)>,
        profile: FieldProfile,
    ) -> Result<LaurentPolynomial> {
        check_vars(&vars, &profile.uniformizer)?;
        let n = vars.len();
        let mut map: BTreeMap<LatticeVector, ValuedCoefficient> = BTreeMap::new();
        for (u, c) in terms {
            if u.len() != n {
                return Err(Error::Dimension { expected: n, found: u.len() });
            }
            if !profile.gamma.contains(&c.valuation) {
                return Err(Error::InvalidValue(format!("valuation {} is not in {}", c.valuation, profile.gamma)));
            }
            let residue = profile.residue.normalize(&c.residue)?;
            if residue.is_zero() {
                return Err(Error::InvalidValue(format!("zero residue at exponent {u}")));
            }
            let c = ValuedCoefficient::new(c.valuation, residue);
            match map.get_mut(&u) {
                None => {
                    map.insert(u, c);
                }
                Some(old) => {
                    if c.valuation < old.valuation {
                        *old = c;
                    } else if c.valuation == old.valuation {
                        let sum = profile.residue.add(&old.residue, &c.residue);
                        if sum.is_zero() {
                            return Err(Error::CancellationAmbiguity { exponent: exponent_string(&u) });
                        }
                        old.residue = sum;
                    }
                }
            }
        }
        Ok(LaurentPolynomial { vars, terms: map, profile })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn profile(&self) -> &FieldProfile {
        &self.profile
    }

    pub fn terms(&self) -> &BTreeMap<LatticeVector, ValuedCoefficient> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Multiplies by the monomial `x^w`.
    pub fn shift(&self, w: &LatticeVector) -> LaurentPolynomial {
        LaurentPolynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(u, c)| (u.add(w), c.clone())).collect(),
            profile: self.profile.clone(),
        }
    }

    /// Convex hull of the exponents.
    pub fn newton_polytope(&self) -> Result<Polyhedron> {
        if self.terms.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        let pts: Vec<QVector> = self.terms.keys().map(LatticeVector::to_qvector).collect();
        Polyhedron::from_points(self.nvars(), &pts, &[], &[])
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(u, c)| TermJson { exp: u.clone(), val: c.valuation.clone(), res: c.residue.clone() })
                .collect(),
        }
    }

    pub fn from_json(j: &PolyJson, profile: &FieldProfile) -> Result<LaurentPolynomial> {
        LaurentPolynomial::new(
            j.vars.clone(),
            j.terms.iter().map(|t| (t.exp.clone(), ValuedCoefficient::new(t.val.clone(), t.res.clone()))),
            profile.clone(),
        )
    }
}

/// JSON form `{"vars":[...],"terms":[{"exp":[...],"val":"p/q","res":"..."}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub exp: LatticeVector,
    pub val: Rat,
    pub res: Rat,
}

/// Display order: descending total degree, then descending lexicographic.
fn display_order(terms: &[&LatticeVector]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..terms.len()).collect();
    idx.sort_by(|&a, &b| {
        let da: num_bigint::BigInt = terms[a].coords().iter().sum();
        let db: num_bigint::BigInt = terms[b].coords().iter().sum();
        db.cmp(&da).then_with(|| terms[b].cmp(terms[a]))
    });
    idx
}

pub(crate) fn power(symbol: &str, e: &Rat) -> Option<String> {
    if e.is_zero() {
        None
    } else if *e == Rat::one() {
        Some(symbol.to_string())
    } else if e.is_integer() {
        Some(format!("{symbol}^{e}"))
    } else {
        Some(format!("{symbol}^({e})"))
    }
}

pub(crate) fn monomial_parts(vars: &[String], u: &LatticeVector) -> Vec<String> {
    vars.iter()
        .zip(u.coords())
        .filter_map(|(x, e)| power(x, &Rat::from_int(e.clone())))
        .collect()
}

/// Writes `sign coefficient*rest` terms joined by ` + ` / ` - `.
fn write_terms(f: &mut fmt::Formatter<'_>, items: Vec<(Rat, Vec<String>)>) -> fmt::Result {
    if items.is_empty() {
        return write!(f, "0");
    }
    for (i, (res, rest)) in items.into_iter().enumerate() {
        let neg = res.is_negative();
        let mag = res.abs();
        match (i, neg) {
            (0, true) => write!(f, "-")?,
            (0, false) => {}
            (_, true) => write!(f, " - ")?,
            (_, false) => write!(f, " + ")?,
        }
        let mut parts = Vec::new();
        if mag != Rat::one() || rest.is_empty() {
            parts.push(mag.to_string());
        }
        parts.extend(rest);
        write!(f, "{}", parts.join("*"))?;
    }
    Ok(())
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let exps: Vec<&LatticeVector> = self.terms.keys().collect();
        let items = display_order(&exps)
            .into_iter()
            .map(|i| {
                let c = &self.terms[exps[i]];
                let mut rest: Vec<String> = power(&self.profile.uniformizer, &c.valuation).into_iter().collect();
                rest.extend(monomial_parts(&self.vars, exps[i]));
                (c.residue.clone(), rest)
            })
            .collect();
        write_terms(f, items)
    }
}

/// A Laurent polynomial over the residue field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResiduePolynomial {
    vars: Vec<String>,
    terms: BTreeMap<LatticeVector, Rat>,
    field: ResidueFieldKey,
}

/// `ResidueField` with an ordering, so residue polynomials can be sorted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct ResidueFieldKey(u64);

impl ResidueFieldKey {
    fn field(self) -> ResidueField {
        if self.0 == 0 {
            ResidueField::Rational
        } else {
            ResidueField::Prime(self.0)
        }
    }
}

impl ResiduePolynomial {
    /// Zero coefficients are dropped; coefficients are normalized in the field.
    pub fn new(vars: Vec<String>, terms: impl IntoIterator<Item = (LatticeVector, Rat)>, field: ResidueField) -> Result<ResiduePolynomial> {
        let n = vars.len();
        let mut map: BTreeMap<LatticeVector, Rat> = BTreeMap::new();
        for (u, c) in terms {
            if u.len() != n {
                return Err(Error::Dimension { expected: n, found: u.len() });
            }
            let c = field.normalize(&c)?;
            let e = map.entry(u).or_insert_with(Rat::zero);
            *e = field.add(e, &c);
        }
        map.retain(|_, c| !c.is_zero());
        Ok(ResiduePolynomial { vars, terms: map, field: ResidueFieldKey(field.characteristic()) })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn field(&self) -> ResidueField {
        self.field.field()
    }

    pub fn terms(&self) -> &BTreeMap<LatticeVector, Rat> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Shifts exponents by their coordinatewise minimum and scales so that the
    /// lexicographically smallest exponent has coefficient 1.
    pub fn canonical(&self) -> ResiduePolynomial {
        let Some(first) = self.terms.keys().next() else {
            return self.clone();
        };
        let n = self.vars.len();
        let mins: Vec<num_bigint::BigInt> =
            (0..n).map(|i| self.terms.keys().map(|u| u[i].clone()).min().expect("nonempty")).collect();
        let shift = LatticeVector::new(mins);
        let field = self.field();
        let scale = field.inv(&self.terms[first]);
        ResiduePolynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(u, c)| (u.sub(&shift), field.mul(c, &scale))).collect(),
            field: self.field,
        }
    }

    pub fn to_json(&self) -> ResidueJson {
        ResidueJson {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(u, c)| ResidueTermJson { exp: u.clone(), res: c.clone() }).collect(),
        }
    }
}

impl fmt::Display for ResiduePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let exps: Vec<&LatticeVector> = self.terms.keys().collect();
        let items = display_order(&exps)
            .into_iter()
            .map(|i| (self.terms[exps[i]].clone(), monomial_parts(&self.vars, exps[i])))
            .collect();
        write_terms(f, items)
    }
}

impl Serialize for ResiduePolynomial {
    /// The JSON form together with the rendered text.
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct WithText<'a> {
            text: String,
            #[serde(flatten)]
            json: &'a ResidueJson,
        }
        WithText { text: self.to_string(), json: &self.to_json() }.serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueJson {
    pub vars: Vec<String>,
    pub terms: Vec<ResidueTermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueTermJson {
    pub exp: LatticeVector,
    pub res: Rat,
}
