//! Text grammar for Laurent polynomials.
//!
//! ```text
//! poly    := ['+'|'-'] term (('+'|'-') term)*
//! term    := factor (['*'] factor)*
//! factor  := int ['/' int]            residue literal
//!          | T ['^' exp]               uniformizer power, T the uniformizer symbol
//!          | ident ['^' exp]           variable power (integral exponent)
//! exp     := ['-'] int | '(' ['-'] int ['/' int] ')'
//! ```

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use super::{FieldProfile, LaurentPolynomial, ValuedCoefficient};
use crate::error::{Error, Result};
use crate::exactnum::{LatticeVector, Rat};

struct RawTerm {
    position: usize,
    coefficient: Rat,
    valuation: Rat,
    powers: BTreeMap<String, BigInt>,
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    uniformizer: &'a str,
}

fn syntax(position: usize, message: impl Into<String>) -> Error {
    Error::Syntax { position, message: message.into() }
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(syntax(start, "expected an integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digits"))
    }

    fn identifier(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    /// The exponent after `^`; rational only inside parentheses.
    fn exponent(&mut self) -> Result<Rat> {
        self.skip_ws();
        if self.eat('(') {
            self.skip_ws();
            let neg = self.eat('-');
            self.skip_ws();
            let num = self.integer()?;
            self.skip_ws();
            let den = if self.eat('/') {
                self.skip_ws();
                let at = self.pos;
                let d = self.integer()?;
                if d == BigInt::from(0) {
                    return Err(syntax(at, "zero denominator"));
                }
                d
            } else {
                BigInt::from(1)
            };
            self.skip_ws();
            if !self.eat(')') {
                return Err(syntax(self.pos, "expected ')'"));
            }
            let r = Rat::new(num, den);
            return Ok(if neg { -r } else { r });
        }
        let neg = self.eat('-');
        let n = Rat::from_int(self.integer()?);
        Ok(if neg { -n } else { n })
    }

    fn starts_factor(&self) -> bool {
        self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
    }

    fn term(&mut self, sign: bool) -> Result<RawTerm> {
        self.skip_ws();
        let mut t = RawTerm {
            position: self.pos,
            coefficient: if sign { -Rat::one() } else { Rat::one() },
            valuation: Rat::zero(),
            powers: BTreeMap::new(),
        };
        if !self.starts_factor() {
            return Err(syntax(self.pos, if self.pos == self.chars.len() { "unexpected end of input" } else { "expected a term" }));
        }
        loop {
            self.factor(&mut t)?;
            self.skip_ws();
            if self.eat('*') {
                self.skip_ws();
                if !self.starts_factor() {
                    return Err(syntax(self.pos, "expected a factor after '*'"));
                }
                continue;
            }
            if !self.starts_factor() {
                return Ok(t);
            }
        }
    }

    fn factor(&mut self, t: &mut RawTerm) -> Result<()> {
        let at = self.pos;
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let num = self.integer()?;
            let den = if self.eat('/') {
                let d_at = self.pos;
                let d = self.integer()?;
                if d == BigInt::from(0) {
                    return Err(syntax(d_at, "zero denominator"));
                }
                d
            } else {
                BigInt::from(1)
            };
            t.coefficient = &t.coefficient * Rat::new(num, den);
            return Ok(());
        }
        let name = self.identifier();
        let save = self.pos;
        self.skip_ws();
        let e = if self.eat('^') {
            self.exponent()?
        } else {
            self.pos = save;
            Rat::one()
        };
        if name == self.uniformizer {
            t.valuation += &e;
        } else {
            let Some(e) = e.to_integer() else {
                return Err(syntax(at, format!("exponent of {name} must be an integer")));
            };
            *t.powers.entry(name).or_insert_with(|| BigInt::from(0)) += e;
        }
        Ok(())
    }

    fn poly(&mut self) -> Result<Vec<RawTerm>> {
        self.skip_ws();
        if self.pos == self.chars.len() {
            return Err(syntax(self.pos, "empty polynomial"));
        }
        let mut sign = false;
        if self.eat('-') {
            sign = true;
        } else {
            self.eat('+');
        }
        let mut terms = vec![self.term(sign)?];
        loop {
            self.skip_ws();
            match self.peek() {
                None => return Ok(terms),
                Some('+') => {
                    self.pos += 1;
                    terms.push(self.term(false)?);
                }
                Some('-') => {
                    self.pos += 1;
                    terms.push(self.term(true)?);
                }
                Some(c) => return Err(syntax(self.pos, format!("unexpected {c:?}; expected '+' or '-'"))),
            }
        }
    }
}

fn raw_terms(text: &str, profile: &FieldProfile) -> Result<Vec<RawTerm>> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0, uniformizer: &profile.uniformizer };
    p.poly()
}

fn assemble(raw: Vec<RawTerm>, vars: Vec<String>, profile: &FieldProfile) -> Result<LaurentPolynomial> {
    let mut terms = Vec::with_capacity(raw.len());
    for t in raw {
        let residue = profile.residue.normalize(&t.coefficient).map_err(|e| syntax(t.position, e.to_string()))?;
        if residue.is_zero() {
            return Err(syntax(t.position, format!("coefficient {} is zero in {}", t.coefficient, profile.residue)));
        }
        if !profile.gamma.contains(&t.valuation) {
            return Err(syntax(t.position, format!("valuation {} is not in {}", t.valuation, profile.gamma)));
        }
        let mut exp = vec![BigInt::from(0); vars.len()];
        for (name, e) in t.powers {
            let Some(i) = vars.iter().position(|v| *v == name) else {
                return Err(syntax(t.position, format!("unknown variable {name}")));
            };
            exp[i] = e;
        }
        terms.push((LatticeVector::new(exp), ValuedCoefficient::new(t.valuation, residue)));
    }
    LaurentPolynomial::new(vars, terms, profile.clone())
}

/// Parses a polynomial; its variables are the identifiers other than the
/// uniformizer symbol, in alphabetical order.
pub fn parse_poly(text: &str, profile: &FieldProfile) -> Result<LaurentPolynomial> {
    let raw = raw_terms(text, profile)?;
    let vars: BTreeSet<String> = raw.iter().flat_map(|t| t.powers.keys().cloned()).collect();
    if vars.is_empty() {
        return Err(Error::InvalidValue("the polynomial has no variables; name them explicitly".into()));
    }
    assemble(raw, vars.into_iter().collect(), profile)
}

/// Parses a polynomial in the given variables, in the given order.
pub fn parse_poly_with_vars(text: &str, vars: &[String], profile: &FieldProfile) -> Result<LaurentPolynomial> {
    let raw = raw_terms(text, profile)?;
    assemble(raw, vars.to_vec(), profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valpoly::ResidueField;

    fn q() -> FieldProfile {
        FieldProfile::rational()
    }

    fn lv(c: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(c)
    }

    #[test]
    fn line_over_q() {
        let f = parse_poly("x + y + 1", &q()).unwrap();
        assert_eq!(f.vars(), &["x".to_string(), "y".to_string()]);
        assert_eq!(f.len(), 3);
        for c in f.terms().values() {
            assert_eq!(c.valuation, Rat::zero());
            assert_eq!(c.residue, Rat::one());
        }
    }

    #[test]
    fn uniformizer_powers() {
        let f = parse_poly("t^2*x^-1 + 3", &q()).unwrap();
        assert_eq!(f.terms()[&lv(&[-1])], ValuedCoefficient::new(Rat::from_int(2), Rat::one()));
        assert_eq!(f.terms()[&lv(&[0])], ValuedCoefficient::new(Rat::zero(), Rat::from_int(3)));
        let g = parse_poly("t^-1 x + t x^(-2)", &q()).unwrap();
        assert_eq!(g.terms()[&lv(&[1])].valuation, Rat::from_int(-1));
        assert_eq!(g.terms()[&lv(&[-2])].valuation, Rat::from_int(1));
    }

    #[test]
    fn cancellation_in_f2() {
        let f2 = FieldProfile::p_adic(2).unwrap();
        assert!(matches!(parse_poly("x + x", &f2), Err(Error::CancellationAmbiguity { .. })));
        let f = parse_poly("x + x", &q()).unwrap();
        assert_eq!(f.terms()[&lv(&[1])].residue, Rat::from_int(2));
        // different valuations: the leading one is kept
        let g = parse_poly("x + t*x", &q()).unwrap();
        assert_eq!(g.terms()[&lv(&[1])].valuation, Rat::zero());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert_eq!(parse_poly("", &q()), Err(Error::Syntax { position: 0, message: "empty polynomial".into() }));
        assert!(matches!(parse_poly("x + ", &q()), Err(Error::Syntax { position: 4, .. })));
        assert!(matches!(parse_poly("x ) y", &q()), Err(Error::Syntax { position: 2, .. })));
        assert!(matches!(parse_poly("x^(1/2)", &q()), Err(Error::Syntax { position: 0, .. })));
        assert!(matches!(parse_poly("0*x + 1", &q()), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("t^(1/2)*x", &q()), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("x*", &q()), Err(Error::Syntax { .. })));
    }

    #[test]
    fn prime_residues_reduce() {
        let f3 = FieldProfile::p_adic(3).unwrap();
        let f = parse_poly("4*x - 1", &f3).unwrap();
        assert_eq!(f.terms()[&lv(&[1])].residue, Rat::one());
        assert_eq!(f.terms()[&lv(&[0])].residue, Rat::from_int(2));
        assert_eq!(f.profile().residue, ResidueField::Prime(3));
        assert!(parse_poly("3*x + 1", &f3).is_err());
    }

    #[test]
    fn explicit_variables() {
        let vars = vec!["y".to_string(), "x".to_string()];
        let f = parse_poly_with_vars("x + 2*y", &vars, &q()).unwrap();
        assert_eq!(f.terms()[&lv(&[1, 0])].residue, Rat::from_int(2));
        assert!(parse_poly_with_vars("z", &vars, &q()).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn poly_strategy() -> impl Strategy<Value = LaurentPolynomial> {
            prop::collection::btree_map(
                prop::collection::vec(-3i64..4, 2),
                ((-4i64..5), (1i64..4), prop_oneof![(-5i64..-1), (1i64..6)], (1i64..4)),
                1..6,
            )
            .prop_map(|m| {
                let p = FieldProfile::rational().with_gamma(crate::ValueGroup::new(6).unwrap());
                let terms = m.into_iter().map(|(u, (vn, vd, rn, rd))| {
                    (LatticeVector::from_i64(&u), ValuedCoefficient::new(Rat::new(vn * (6 / vd.max(1)), 6), Rat::new(rn, rd)))
                });
                LaurentPolynomial::new(vec!["x".into(), "y".into()], terms, p).unwrap()
            })
        }

        proptest! {
            #[test]
            fn print_then_parse_is_identity(f in poly_strategy()) {
                let text = f.to_string();
                let back = parse_poly_with_vars(&text, f.vars(), f.profile()).unwrap();
                prop_assert_eq!(back, f);
            }
        }
    }
}
