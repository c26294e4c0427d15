//! Text and JSON polynomial formats.
//!
//! Text: terms separated by `+` (a leading `-` on the coefficient is also
//! accepted), each term `c * w1^a1 w2^a2 ...` with `c` optional (default 1)
//! and `^1` omissible. Variables are `w<k>`, 1-indexed. Factors may be
//! separated by `*` or whitespace.
//!
//! JSON: `{"d": int, "terms": [{"coeff": "p/q", "exps": [int, ...]}]}` for
//! polynomials, `{"s": ["p/q", ...]}` for outer monomials.

use num_traits::One;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::poly::{GeneralPolynomial, OuterMonomial};
use crate::rational::{format_rat, nat_to_u64, parse_rat, Nat, Rat};

/// Parses the text format. The variable count is the largest index that
/// occurs; `min_vars` pads it (used when an outer monomial fixes `d`).
pub fn parse_polynomial(text: &str, min_vars: usize) -> Result<GeneralPolynomial> {
    // Exponents are non-negative, so '-' only ever starts a coefficient.
    let normalized = text.replace('-', "+-");
    let mut raw_terms: Vec<(Rat, Vec<(usize, u64)>)> = Vec::new();
    let mut max_var = 0usize;
    for chunk in normalized.split('+') {
        let chunk = chunk.trim();
        if chunk.is_empty() {
            continue;
        }
        let (coeff, factors) = parse_term(chunk)?;
        for &(v, _) in &factors {
            max_var = max_var.max(v);
        }
        raw_terms.push((coeff, factors));
    }
    if raw_terms.is_empty() {
        return Err(Error::Parse(format!("no terms in polynomial {text:?}")));
    }
    let d = max_var.max(min_vars);
    let terms = raw_terms
        .into_iter()
        .map(|(c, factors)| {
            let mut exps = vec![Nat::from(0u32); d];
            for (v, e) in factors {
                exps[v - 1] += Nat::from(e);
            }
            (c, exps)
        })
        .collect();
    GeneralPolynomial::new(d, terms)
}

fn parse_term(chunk: &str) -> Result<(Rat, Vec<(usize, u64)>)> {
    let mut coeff = Rat::one();
    let mut negative = false;
    let mut factors = Vec::new();
    let body = match chunk.strip_prefix('-') {
        Some(rest) => {
            negative = true;
            rest
        }
        None => chunk,
    };
    for tok in body.split(|c: char| c == '*' || c.is_whitespace()) {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        if let Some(rest) = tok.strip_prefix('w') {
            let (var, exp) = match rest.split_once('^') {
                Some((v, e)) => {
                    let e: u64 = e
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("invalid exponent in {tok:?}")))?;
                    (v, e)
                }
                None => (rest, 1),
            };
            let var: usize = var
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("invalid variable in {tok:?}")))?;
            if var == 0 {
                return Err(Error::Parse("variables are 1-indexed".into()));
            }
            factors.push((var, exp));
        } else {
            coeff *= parse_rat(tok)?;
        }
    }
    if negative {
        coeff = -coeff;
    }
    Ok((coeff, factors))
}

/// Parses a comma-separated list of rationals (the `--s` flag format).
pub fn parse_rat_list(text: &str) -> Result<Vec<Rat>> {
    text.split(',')
        .map(|part| parse_rat(part.trim()))
        .collect()
}

pub fn polynomial_to_json(p: &GeneralPolynomial) -> Result<Value> {
    let terms = p
        .terms()
        .iter()
        .map(|(c, exps)| {
            let exps = exps.iter().map(nat_to_u64).collect::<Result<Vec<_>>>()?;
            Ok(json!({"coeff": format_rat(c), "exps": exps}))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({"d": p.var_count(), "terms": terms}))
}

pub fn polynomial_from_json(v: &Value) -> Result<GeneralPolynomial> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("expected a JSON object".into()))?;
    let d = obj
        .get("d")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("missing integer field \"d\"".into()))? as usize;
    let terms = obj
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing array field \"terms\"".into()))?;
    let terms = terms
        .iter()
        .map(|t| {
            let coeff = t
                .get("coeff")
                .and_then(Value::as_str)
                .map(parse_rat)
                .transpose()?
                .unwrap_or_else(Rat::one);
            let exps = t
                .get("exps")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("term missing \"exps\"".into()))?
                .iter()
                .map(|e| {
                    e.as_u64()
                        .map(Nat::from)
                        .ok_or_else(|| Error::Parse("exponents must be non-negative ints".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((coeff, exps))
        })
        .collect::<Result<Vec<_>>>()?;
    GeneralPolynomial::new(d, terms)
}

pub fn outer_to_json(g: &OuterMonomial) -> Value {
    json!({"s": g.s().iter().map(format_rat).collect::<Vec<_>>()})
}

pub fn outer_from_json(v: &Value) -> Result<OuterMonomial> {
    let s = v
        .get("s")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing array field \"s\"".into()))?
        .iter()
        .map(|x| {
            x.as_str()
                .ok_or_else(|| Error::Parse("s entries must be rational strings".into()))
                .and_then(parse_rat)
        })
        .collect::<Result<Vec<_>>>()?;
    OuterMonomial::new(s)
}

/// Parses either the text format or (when it starts with `{`) the JSON one.
pub fn parse_polynomial_any(text: &str, min_vars: usize) -> Result<GeneralPolynomial> {
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        let v: Value = serde_json::from_str(trimmed)
            .map_err(|e| Error::Parse(format!("invalid JSON polynomial: {e}")))?;
        polynomial_from_json(&v)
    } else {
        parse_polynomial(trimmed, min_vars)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{nat, rat, rat_int};

    #[test]
    fn parses_basic_forms() {
        let p = parse_polynomial("w1^2 + w2^4", 0).unwrap();
        assert_eq!(p.var_count(), 2);
        assert_eq!(p.term_count(), 2);

        let p = parse_polynomial("w1^2*w2^2 + w1^4 w2^4", 0).unwrap();
        assert_eq!(p.terms()[0].1, vec![nat(2), nat(2)]);
        assert_eq!(p.terms()[1].1, vec![nat(4), nat(4)]);

        let p = parse_polynomial("1 + w1^2", 0).unwrap();
        assert_eq!(p.var_count(), 1);
        assert_eq!(p.constant_term(), Some(&rat_int(1)));

        let p = parse_polynomial("3/2*w1 - w2", 0).unwrap();
        assert_eq!(p.terms()[0].0, rat(3, 2));
        assert_eq!(p.terms()[1].0, rat_int(-1));
    }

    #[test]
    fn coefficient_merging_via_parse() {
        let p = parse_polynomial("w1 + w1 + w2", 0).unwrap();
        assert_eq!(p.term_count(), 2);
        assert_eq!(p.terms()[0].0, rat_int(2));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_polynomial("", 0).is_err());
        assert!(parse_polynomial("w0^2", 0).is_err());
        assert!(parse_polynomial("q1^2", 0).is_err());
        assert!(parse_polynomial("w1^x", 0).is_err());
    }

    #[test]
    fn round_trip_text() {
        for text in [
            "w1^2 + w2^4",
            "w1^3*w2^5 + w1^6*w2",
            "2*w1 - 3/2*w2 + 1",
            "w1^2*w2^2 + w3^4",
        ] {
            let p1 = parse_polynomial(text, 0).unwrap();
            let p2 = parse_polynomial(&p1.to_string(), 0).unwrap();
            assert_eq!(p1, p2, "round trip failed for {text}");
        }
    }

    #[test]
    fn json_round_trip() {
        let p = parse_polynomial("w1^2 + 5/3*w2^4", 0).unwrap();
        let v = polynomial_to_json(&p).unwrap();
        let q = polynomial_from_json(&v).unwrap();
        assert_eq!(p, q);

        let g = OuterMonomial::new(vec![rat_int(1), rat(1, 2)]).unwrap();
        let g2 = outer_from_json(&outer_to_json(&g)).unwrap();
        assert_eq!(g, g2);
    }
}
