//! Plain-text serialization of polynomial systems.
//!
//! ```text
//! field: GF(2305843009213693951)
//! vars: x, y
//! params: alpha_1_1
//! 3*x^2*y + -1*alpha_1_1 + 7
//! ```
//!
//! One polynomial per line. The `params:` line is optional. Coefficients
//! over `GF(p)` are written as symmetric representatives.

use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::field::{is_prime, Field, PrimeField, Rationals};
use super::monomial::{Monomial, MonomialOrder};
use super::poly::{PolyRing, Polynomial, Registry, VarClass};
use super::system::PolySystem;
use crate::error::AlgebraError;

/// Renders a system in the text grammar.
pub fn export_system<F: Field>(sys: &PolySystem<F>) -> String {
    let reg = &sys.ring.registry;
    let mut out = String::new();
    let _ = writeln!(out, "field: {}", sys.ring.field.descriptor());
    let names = |class: VarClass| -> Vec<&str> {
        reg.iter().filter(|(_, v)| v.class == class).map(|(_, v)| v.name.as_str()).collect()
    };
    let _ = writeln!(out, "vars: {}", names(VarClass::Unknown).join(", "));
    let params = names(VarClass::Parameter);
    if !params.is_empty() {
        let _ = writeln!(out, "params: {}", params.join(", "));
    }
    for p in &sys.polys {
        out.push_str(&p.to_text());
        out.push('\n');
    }
    out
}

/// A parsed system over whichever field its header names.
#[derive(Clone, Debug)]
pub enum ParsedSystem {
    Rational(PolySystem<Rationals>),
    Prime(PolySystem<PrimeField>),
}

fn err(line: usize, msg: impl Into<String>) -> AlgebraError {
    AlgebraError::Parse { line, msg: msg.into() }
}

fn parse_rational(s: &str, line: usize) -> Result<BigRational, AlgebraError> {
    let bad = || err(line, format!("bad coefficient `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d == BigInt::from(0) {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

fn parse_poly<F: Field>(
    ring: &Arc<PolyRing<F>>,
    text: &str,
    line: usize,
) -> Result<Polynomial<F>, AlgebraError> {
    let text = text.trim();
    if text == "0" {
        return Ok(Polynomial::zero(ring));
    }
    let mut terms = Vec::new();
    for raw in text.split(" + ") {
        let raw = raw.trim();
        if raw.is_empty() {
            return Err(err(line, "empty term"));
        }
        let mut coeff = BigRational::from_integer(1.into());
        let mut pairs = Vec::new();
        for (k, factor) in raw.split('*').enumerate() {
            let factor = factor.trim();
            let starts_numeric = factor.starts_with(|c: char| c.is_ascii_digit() || c == '-');
            if k == 0 && starts_numeric {
                if let Some(name) = factor.strip_prefix('-').filter(|r| r.starts_with(|c: char| c.is_alphabetic())) {
                    // `-x` shorthand
                    coeff = -coeff;
                    let v = ring.registry.get(name).ok_or_else(|| err(line, format!("unknown variable `{name}`")))?;
                    pairs.push((v, 1));
                } else {
                    coeff = parse_rational(factor, line)?;
                }
                continue;
            }
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => (n, e.parse::<u32>().map_err(|_| err(line, format!("bad exponent in `{factor}`")))?),
                None => (factor, 1),
            };
            let v = ring.registry.get(name).ok_or_else(|| err(line, format!("unknown variable `{name}`")))?;
            pairs.push((v, exp));
        }
        let c = ring
            .field
            .from_rational(&coeff)
            .ok_or_else(|| err(line, format!("coefficient `{coeff}` is not defined in the field")))?;
        terms.push((Monomial::from_pairs(&pairs), c));
    }
    Ok(Polynomial::from_terms(ring, terms))
}

fn parse_names(rest: &str) -> Vec<String> {
    rest.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

fn build<F: Field>(
    field: F,
    vars: &[String],
    params: &[String],
    body: &[(usize, &str)],
) -> Result<PolySystem<F>, AlgebraError> {
    let mut reg = Registry::new();
    for (names, class) in [(vars, VarClass::Unknown), (params, VarClass::Parameter)] {
        for n in names {
            if reg.get(n).is_some() {
                return Err(err(2, format!("duplicate variable `{n}`")));
            }
            reg.add(n.clone(), class, "");
        }
    }
    let ring = PolyRing::new(field, reg, MonomialOrder::GRevLex);
    let polys = body.iter().map(|(line, text)| parse_poly(&ring, text, *line)).collect::<Result<Vec<_>, _>>()?;
    Ok(PolySystem::new(ring, polys))
}

/// Parses the text grammar. Blank lines and lines starting with `#` are
/// ignored.
pub fn parse_system(text: &str) -> Result<ParsedSystem, AlgebraError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (ln, header) = lines.next().ok_or_else(|| err(1, "missing field header"))?;
    let field = header.strip_prefix("field:").ok_or_else(|| err(ln, "expected `field:`"))?.trim();
    let (ln, vars_line) = lines.next().ok_or_else(|| err(ln + 1, "missing `vars:` line"))?;
    let vars = parse_names(vars_line.strip_prefix("vars:").ok_or_else(|| err(ln, "expected `vars:`"))?);
    let mut params = Vec::new();
    let mut body: Vec<(usize, &str)> = Vec::new();
    for (ln, l) in lines {
        if let Some(rest) = l.strip_prefix("params:") {
            if !body.is_empty() || !params.is_empty() {
                return Err(err(ln, "`params:` must follow `vars:`"));
            }
            params = parse_names(rest);
        } else {
            body.push((ln, l));
        }
    }
    if field == "QQ" {
        return Ok(ParsedSystem::Rational(build(Rationals, &vars, &params, &body)?));
    }
    let p = field
        .strip_prefix("GF(")
        .and_then(|r| r.strip_suffix(')'))
        .and_then(|r| r.trim().parse::<u64>().ok())
        .filter(|&p| p < (1 << 63) && is_prime(p))
        .ok_or_else(|| err(1, format!("unsupported field `{field}`")))?;
    Ok(ParsedSystem::Prime(build(PrimeField::new(p), &vars, &params, &body)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_over_q() {
        let text = "field: QQ\nvars: x, y\nparams: alpha\n3/2*x^2*y + -1*alpha + 7\nx + -y\n0\n";
        let ParsedSystem::Rational(sys) = parse_system(text).unwrap() else { panic!() };
        assert_eq!(sys.polys.len(), 3);
        let out = export_system(&sys);
        assert_eq!(out, "field: QQ\nvars: x, y\nparams: alpha\n3/2*x^2*y + -1*alpha + 7\n1*x + -1*y\n0\n");
        let ParsedSystem::Rational(again) = parse_system(&out).unwrap() else { panic!() };
        assert_eq!(export_system(&again), out);
    }

    #[test]
    fn prime_field_symmetric_coefficients() {
        let text = "field: GF(7)\nvars: x\n6*x + 1\n";
        let ParsedSystem::Prime(sys) = parse_system(text).unwrap() else { panic!() };
        assert_eq!(sys.polys[0].to_text(), "-1*x + 1");
        assert_eq!(export_system(&sys), "field: GF(7)\nvars: x\n-1*x + 1\n");
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert!(matches!(parse_system("field: GF(8)\nvars: x\n"), Err(AlgebraError::Parse { .. })));
        match parse_system("field: QQ\nvars: x\nx + 1\nx*y\n") {
            Err(AlgebraError::Parse { line, msg }) => {
                assert_eq!(line, 4);
                assert!(msg.contains("`y`"));
            }
            other => panic!("{other:?}"),
        }
        assert!(parse_system("field: GF(5)\nvars: x\n1/5*x\n").is_err());
    }
}
