use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use super::factor::Product;
use super::monomial::{fmt_exp, Monomial, Symbol};
use super::poly::{fmt_coeff, Coeff, LaurentPoly};
use super::ratfn::RationalFn;
use super::ScalarError;

fn monomial_to_json(m: &Monomial) -> Value {
    let mut map = Map::new();
    for (s, raw) in m.iter() {
        let v = if s == Symbol::Q1 && raw % 2 != 0 {
            Value::String(fmt_exp(s, raw))
        } else {
            let e = if s == Symbol::Q1 { raw / 2 } else { raw };
            json!(e)
        };
        map.insert(s.name(), v);
    }
    Value::Object(map)
}

/// Terms as `[["p/q", {"q1": "3/2", "t1": -1}], ...]`, leading term first.
pub fn poly_to_json(p: &LaurentPoly) -> Value {
    Value::Array(
        p.terms()
            .iter()
            .map(|(m, c)| json!([fmt_coeff(c), monomial_to_json(m)]))
            .collect(),
    )
}

/// `{"num": terms, "den": [[multiplicity, terms], ...]}`.
pub fn ratfn_to_json(f: &RationalFn) -> Value {
    json!({
        "num": poly_to_json(f.numer()),
        "den": f.den_factors().iter().map(|(g, e)| json!([e, poly_to_json(g)])).collect::<Vec<_>>(),
    })
}

fn parse_coeff(s: &str) -> Result<Coeff, ScalarError> {
    let bad = || ScalarError::Parse(format!("bad coefficient `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().map_err(|_| bad())?;
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if d == BigInt::from(0) {
                return Err(bad());
            }
            Ok(Coeff::new(n, d))
        }
        None => Ok(Coeff::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn monomial_from_json(v: &Value) -> Result<Monomial, ScalarError> {
    let obj = v
        .as_object()
        .ok_or_else(|| ScalarError::Parse("monomial must be an object".into()))?;
    let mut m = Monomial::one();
    for (k, e) in obj {
        let s = Symbol::parse(k)?;
        let raw = match e {
            Value::Number(n) => {
                let n = n
                    .as_i64()
                    .ok_or_else(|| ScalarError::Parse(format!("bad exponent for {k}")))?;
                if s == Symbol::Q1 {
                    2 * n
                } else {
                    n
                }
            }
            Value::String(t) => {
                let (n, d) = t
                    .split_once('/')
                    .ok_or_else(|| ScalarError::Parse(format!("bad exponent `{t}`")))?;
                let n: i64 = n.parse().map_err(|_| ScalarError::Parse(format!("bad exponent `{t}`")))?;
                if d != "2" || s != Symbol::Q1 {
                    return Err(ScalarError::HalfExponent);
                }
                n
            }
            _ => return Err(ScalarError::Parse(format!("bad exponent for {k}"))),
        };
        let cur = m.slot(s.slot());
        m.set_slot(s.slot(), cur + raw as i32);
    }
    Ok(m)
}

pub fn poly_from_json(v: &Value) -> Result<LaurentPoly, ScalarError> {
    let arr = v
        .as_array()
        .ok_or_else(|| ScalarError::Parse("polynomial must be an array".into()))?;
    let mut terms = Vec::with_capacity(arr.len());
    for t in arr {
        let pair = t
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| ScalarError::Parse("term must be [coeff, monomial]".into()))?;
        let c = pair[0]
            .as_str()
            .ok_or_else(|| ScalarError::Parse("coefficient must be a string".into()))?;
        terms.push((monomial_from_json(&pair[1])?, parse_coeff(c)?));
    }
    Ok(LaurentPoly::from_terms(terms))
}

pub fn ratfn_from_json(v: &Value) -> Result<RationalFn, ScalarError> {
    let num = poly_from_json(&v["num"])?;
    let mut out = RationalFn::from_poly(num);
    if let Some(den) = v.get("den").and_then(|d| d.as_array()) {
        for f in den {
            let pair = f
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| ScalarError::Parse("factor must be [mult, terms]".into()))?;
            let e = pair[0]
                .as_u64()
                .ok_or_else(|| ScalarError::Parse("multiplicity must be a positive integer".into()))?;
            let g = poly_from_json(&pair[1])?;
            if g.is_zero() {
                return Err(ScalarError::DivisionByZero);
            }
            out = out.mul_product(&Product::from_poly_pow(&g, -(e as i32)));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::parse_ratfn;

    #[test]
    fn round_trip_is_bit_exact() {
        for src in [
            "0",
            "1",
            "q1^(1/2)*t1^-1 - 3/4*q2",
            "(1-q)/((1-q1)*(1-q2)^2)",
            "z1*z2^-1 + q*t2",
        ] {
            let f = parse_ratfn(src).unwrap();
            let j = ratfn_to_json(&f);
            let text = serde_json::to_string(&j).unwrap();
            let back = ratfn_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
            assert_eq!(back, f, "{src}");
            assert_eq!(serde_json::to_string(&ratfn_to_json(&back)).unwrap(), text);
        }
    }
}
