use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{Rat, ValueGroup};

/// The residue field `k`: either `Q` or a prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ResidueField {
    Rational,
    Prime(u64),
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl ResidueField {
    pub fn prime(p: u64) -> Result<ResidueField> {
        if is_prime(p) {
            Ok(ResidueField::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            ResidueField::Rational => 0,
            ResidueField::Prime(p) => *p,
        }
    }

    /// Brings a rational literal into canonical form: itself over `Q`, its
    /// representative in `0..p` over `F_p`.
    pub fn normalize(&self, r: &Rat) -> Result<Rat> {
        match self {
            ResidueField::Rational => Ok(r.clone()),
            ResidueField::Prime(p) => {
                let p = BigInt::from(*p);
                let den = r.denom().mod_floor(&p);
                if den.is_zero() {
                    return Err(Error::InvalidValue(format!("{r} has no residue modulo {p}")));
                }
                let inv = mod_inverse(&den, &p);
                Ok(Rat::from_int((r.numer() * inv).mod_floor(&p)))
            }
        }
    }

    pub fn add(&self, a: &Rat, b: &Rat) -> Rat {
        self.normalize(&(a + b)).expect("field elements stay integral")
    }

    pub fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        self.normalize(&(a * b)).expect("field elements stay integral")
    }

    pub fn neg(&self, a: &Rat) -> Rat {
        self.normalize(&-a).expect("field elements stay integral")
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(&self, a: &Rat) -> Rat {
        match self {
            ResidueField::Rational => a.recip(),
            ResidueField::Prime(p) => {
                let p = BigInt::from(*p);
                Rat::from_int(mod_inverse(&a.numer().mod_floor(&p), &p))
            }
        }
    }

    /// All elements, for prime fields small enough to enumerate.
    pub fn elements(&self, limit: u64) -> Option<Vec<Rat>> {
        match self {
            ResidueField::Prime(p) if *p <= limit => Some((0..*p).map(Rat::from_int).collect()),
            _ => None,
        }
    }
}

fn mod_inverse(a: &BigInt, p: &BigInt) -> BigInt {
    let e = a.extended_gcd(p);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(p)
}

impl fmt::Display for ResidueField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResidueField::Rational => write!(f, "Q"),
            ResidueField::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

impl FromStr for ResidueField {
    type Err = Error;

    /// Accepts `Q` or `F_p` / `Fp`.
    fn from_str(s: &str) -> Result<ResidueField> {
        let s = s.trim();
        if s == "Q" || s == "QQ" {
            return Ok(ResidueField::Rational);
        }
        let digits = s.strip_prefix("F_").or_else(|| s.strip_prefix('F'));
        match digits.and_then(|d| d.parse::<u64>().ok()) {
            Some(p) => ResidueField::prime(p),
            None => Err(Error::InvalidValue(format!("unknown residue field {s:?}; use Q or F_p"))),
        }
    }
}

/// The coefficient field `K`, described by its residue field, value group and
/// the display symbol of a uniformizer.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ProfileJson", into = "ProfileJson")]
pub struct FieldProfile {
    pub residue: ResidueField,
    pub gamma: ValueGroup,
    pub uniformizer: String,
}

impl FieldProfile {
    /// `k((t))` with `k = Q` and `Gamma = Z`.
    pub fn rational() -> FieldProfile {
        FieldProfile { residue: ResidueField::Rational, gamma: ValueGroup::integers(), uniformizer: "t".into() }
    }

    /// `Q_p`: residue field `F_p`, `Gamma = Z`, uniformizer `p`.
    pub fn p_adic(p: u64) -> Result<FieldProfile> {
        Ok(FieldProfile { residue: ResidueField::prime(p)?, gamma: ValueGroup::integers(), uniformizer: "p".into() })
    }

    pub fn with_gamma(mut self, gamma: ValueGroup) -> FieldProfile {
        self.gamma = gamma;
        self
    }

    pub fn with_uniformizer(mut self, symbol: &str) -> Result<FieldProfile> {
        if !is_identifier(symbol) {
            return Err(Error::InvalidValue(format!("uniformizer symbol {symbol:?} is not an identifier")));
        }
        self.uniformizer = symbol.into();
        Ok(self)
    }
}

impl Default for FieldProfile {
    fn default() -> Self {
        FieldProfile::rational()
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_') && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileJson {
    residue: String,
    #[serde(default = "one")]
    gamma: u64,
    #[serde(default = "default_symbol")]
    uniformizer: String,
}

fn one() -> u64 {
    1
}

fn default_symbol() -> String {
    "t".into()
}

impl TryFrom<ProfileJson> for FieldProfile {
    type Error = Error;

    fn try_from(j: ProfileJson) -> Result<FieldProfile> {
        FieldProfile { residue: j.residue.parse()?, gamma: ValueGroup::new(j.gamma)?, uniformizer: String::new() }
            .with_uniformizer(&j.uniformizer)
    }
}

impl From<FieldProfile> for ProfileJson {
    fn from(p: FieldProfile) -> ProfileJson {
        ProfileJson { residue: p.residue.to_string(), gamma: p.gamma.denominator(), uniformizer: p.uniformizer }
    }
}
