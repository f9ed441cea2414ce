//! JSON series documents with exact decimal coefficients.

use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::alphabet::{Alphabet, LinearElement};
use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, GaussRational};
use crate::scalar::{format_decimal, parse_decimal, roundtrip_digits, Scalar};
use crate::series::{Algebra, Series};

fn bad(msg: impl Into<String>) -> Error {
    Error::Document(msg.into())
}

/// Document for a free-backend series. Only nonzero coefficients are listed,
/// in degree-then-lexicographic order; `metadata` is attached verbatim.
pub fn to_document(g: &Series, metadata: Option<Value>) -> Result<Value> {
    if !g.algebra().backend().is_free() {
        return Err(bad("only free-backend series are serialized"));
    }
    let alpha = g.alphabet();
    let digits = roundtrip_digits(g.prec());
    let mut aliases = Map::new();
    for (name, e) in alpha.aliases() {
        let mut m = Map::new();
        for (i, c) in e.terms() {
            m.insert(alpha.name(i).to_string(), json!([format_rational(&c.re), format_rational(&c.im)]));
        }
        aliases.insert(name.clone(), Value::Object(m));
    }
    let mut coeffs = Map::new();
    for (w, c) in g.nonzero_terms() {
        coeffs.insert(
            alpha.word_to_string(&w),
            json!([format_decimal(c.re(), digits), format_decimal(c.im(), digits)]),
        );
    }
    let mut doc = json!({
        "alphabet": alpha.names(),
        "alphabet_label": alpha.label(),
        "aliases": aliases,
        "degree": g.degree(),
        "precision_bits": g.prec(),
        "coeffs": coeffs,
    });
    if let Some(m) = metadata {
        doc["metadata"] = m;
    }
    Ok(doc)
}

/// Reads a series document. When `expected` is given, the document's
/// generators must match it exactly.
pub fn from_document(doc: &Value, expected: Option<&Arc<Alphabet>>) -> Result<Series> {
    let names: Vec<&str> = doc["alphabet"]
        .as_array()
        .ok_or_else(|| bad("missing alphabet"))?
        .iter()
        .map(|v| v.as_str().ok_or_else(|| bad("generator names must be strings")))
        .collect::<Result<_>>()?;
    let label = doc["alphabet_label"].as_str().unwrap_or("custom");
    let degree = doc["degree"].as_u64().ok_or_else(|| bad("missing degree"))? as usize;
    let prec = doc["precision_bits"].as_u64().ok_or_else(|| bad("missing precision_bits"))? as usize;
    let alpha = match expected {
        Some(a) => {
            if a.names().iter().map(String::as_str).ne(names.iter().copied()) {
                return Err(bad(format!(
                    "alphabet mismatch: document has [{}], expected [{}]",
                    names.join(", "),
                    a.names().join(", ")
                )));
            }
            a.clone()
        }
        None => {
            let mut a = Alphabet::new(label, &names)?;
            if let Some(al) = doc["aliases"].as_object() {
                for (name, terms) in al {
                    let mut e = LinearElement::zero(names.len());
                    for (g, c) in terms.as_object().ok_or_else(|| bad("alias must be an object"))? {
                        let i = a.index_of(g).ok_or_else(|| bad(format!("alias `{name}` uses unknown `{g}`")))?;
                        let re = parse_rational(c[0].as_str().ok_or_else(|| bad("alias coefficient"))?)?;
                        let im = parse_rational(c[1].as_str().ok_or_else(|| bad("alias coefficient"))?)?;
                        e = e.add(&LinearElement::generator(names.len(), i).scale(&GaussRational::new(re, im)));
                    }
                    a = a.with_alias(name, e)?;
                }
            }
            Arc::new(a)
        }
    };
    let alg = Algebra::free(alpha.clone(), degree, prec);
    let mut g = alg.zero();
    let coeffs = doc["coeffs"].as_object().ok_or_else(|| bad("missing coeffs"))?;
    for (word, c) in coeffs {
        let w = alpha.parse_word(word)?;
        if w.len() > degree {
            return Err(bad(format!("word `{word}` exceeds degree {degree}")));
        }
        let part = |i: usize| -> Result<_> {
            parse_decimal(c[i].as_str().ok_or_else(|| bad(format!("coefficient of `{word}` must be two strings")))?, prec)
        };
        g.set_coeff(&w, Scalar::new(part(0)?, part(1)?))?;
    }
    Ok(g)
}

pub fn to_string(g: &Series, metadata: Option<Value>) -> Result<String> {
    Ok(serde_json::to_string_pretty(&to_document(g, metadata)?)? + "\n")
}

pub fn from_str(text: &str, expected: Option<&Arc<Alphabet>>) -> Result<Series> {
    from_document(&serde_json::from_str(text)?, expected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::{cyclotomic, kz};

    #[test]
    fn unit_round_trip() {
        let one = Algebra::free(kz(), 3, 192).one();
        let doc = to_document(&one, None).unwrap();
        assert_eq!(doc["coeffs"].as_object().unwrap().len(), 1);
        assert!(doc["coeffs"][""].is_array());
        let back = from_document(&doc, Some(&kz())).unwrap();
        assert!(back.bits_eq(&one));
    }

    #[test]
    fn exp_round_trips_bitwise() {
        let alg = Algebra::free(cyclotomic(2).unwrap(), 4, 192);
        let x = alg.generator(0).add(&alg.generator(2).scale(&Scalar::from_gauss(&GaussRational::from_ratio(1, 3), 192))).unwrap();
        let g = x.exp().unwrap();
        let text = to_string(&g, Some(json!({"note": 1}))).unwrap();
        let back = from_str(&text, None).unwrap();
        assert!(back.bits_eq(&g));
        assert_eq!(back.alphabet().resolve("C"), g.alphabet().resolve("C"));
    }

    #[test]
    fn alphabet_mismatch_rejected() {
        let g = Algebra::free(kz(), 2, 192).one();
        let doc = to_document(&g, None).unwrap();
        assert!(from_document(&doc, Some(&cyclotomic(2).unwrap())).is_err());
        let mut broken = doc.clone();
        broken["coeffs"]["A A A"] = json!(["1e0", "0"]);
        assert!(from_document(&broken, None).is_err());
    }
}
