//! Parsers for the compact command-line forms of ψ families and test functions.
use serde_json::{Map, Value};
use trigapprox_core::{PsiFamily, TrigPoly};

use crate::error::{HarnessError, Result};

fn parse_err(input: &str, reason: impl ToString) -> HarnessError {
    HarnessError::Parse { input: input.to_string(), reason: reason.to_string() }
}

/// Accepts JSON (`{"kind":"geometric","q":0.5}`) or `kind[:key=value,...]`,
/// e.g. `gen_poisson:alpha=1,r=0.5`.
pub fn parse_psi(s: &str) -> Result<PsiFamily> {
    let s = s.trim();
    if s.starts_with('{') {
        return serde_json::from_str(s).map_err(|e| parse_err(s, e));
    }
    let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
    let mut obj = Map::new();
    obj.insert("kind".into(), Value::String(kind.trim().into()));
    for part in rest.split(',').filter(|p| !p.trim().is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| parse_err(s, "expected key=value"))?;
        let v = v.trim();
        let val = serde_json::from_str(v).unwrap_or_else(|_| Value::String(v.into()));
        obj.insert(k.trim().into(), val);
    }
    serde_json::from_value(Value::Object(obj)).map_err(|e| parse_err(s, e))
}

/// Accepts JSON `{"a0":..,"cos":[..],"sin":[..]}` or a `+`-separated list of
/// `[amp*]cos:k` / `[amp*]sin:k` terms.
pub fn parse_poly(s: &str) -> Result<TrigPoly> {
    let s = s.trim();
    if s.starts_with('{') {
        return serde_json::from_str(s).map_err(|e| parse_err(s, e));
    }
    let mut acc = TrigPoly::zero(0);
    for term in s.split('+') {
        let term = term.trim();
        let (amp, body) = match term.split_once('*') {
            Some((a, b)) => (a.trim().parse::<f64>().map_err(|e| parse_err(s, e))?, b.trim()),
            None => (1.0, term),
        };
        let (f, k) = body.split_once(':').ok_or_else(|| parse_err(s, "expected cos:k or sin:k"))?;
        let k: usize = k.trim().parse().map_err(|e| parse_err(s, e))?;
        let t = match f.trim() {
            "cos" => TrigPoly::cosine(k, amp),
            "sin" => TrigPoly::sine(k, amp),
            other => return Err(parse_err(s, format!("unknown term `{other}`"))),
        };
        acc = acc.add(&t);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use trigapprox_core::PsiKind;

    #[test]
    fn psi_forms() {
        assert_eq!(parse_psi("geometric:q=0.5").unwrap(), PsiFamily::geometric(0.5).unwrap());
        assert_eq!(parse_psi(r#"{"kind":"geometric","q":0.5}"#).unwrap(), PsiFamily::geometric(0.5).unwrap());
        let p = parse_psi("polyharmonic_poisson:q=0.5,l=3").unwrap();
        assert_eq!(p.kind(), &PsiKind::PolyharmonicPoisson { q: 0.5, l: 3 });
        assert!(matches!(parse_psi("log_log_power").unwrap().kind(), PsiKind::LogLogPower));
        assert!(parse_psi("geometric:q=2").is_err());
        assert!(parse_psi("nope").is_err());
    }

    #[test]
    fn poly_forms() {
        let p = parse_poly("cos:3 + 0.5*sin:1").unwrap();
        assert_eq!(p.coeff(3), (1.0, 0.0));
        assert_eq!(p.coeff(1), (0.0, 0.5));
        assert!(parse_poly("tan:2").is_err());
    }
}
