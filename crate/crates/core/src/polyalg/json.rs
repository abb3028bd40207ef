//! JSON wire format for polynomials and polynomial matrices.
//!
//! ```json
//! {"n": 3, "terms": [{"alpha": [2, 0, 0], "c": 1.0}]}
//! {"n": 1, "r": 2, "entries": [[{"alpha": [2], "c": 1.0}], [], [], []]}
//! ```

use serde::{Deserialize, Serialize};

use super::{Exponent, PolyMatrix, Polynomial};
use crate::error::Error;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub alpha: Vec<u32>,
    pub c: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialJson {
    pub n: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyMatrixJson {
    pub n: usize,
    pub r: usize,
    pub entries: Vec<Vec<TermJson>>,
}

fn terms_to_poly(n: usize, terms: Vec<TermJson>, ctx: &str) -> Result<Polynomial, Error> {
    for (k, t) in terms.iter().enumerate() {
        if t.alpha.len() != n {
            return Err(Error::InvalidInput(format!(
                "{ctx}terms[{k}].alpha has length {}, expected n = {n}",
                t.alpha.len()
            )));
        }
    }
    Polynomial::from_terms(n, terms.into_iter().map(|t| (Exponent::new(t.alpha), t.c)))
}

fn poly_to_terms(p: &Polynomial) -> Vec<TermJson> {
    p.terms()
        .map(|(a, c)| TermJson {
            alpha: a.as_slice().to_vec(),
            c,
        })
        .collect()
}

impl TryFrom<PolynomialJson> for Polynomial {
    type Error = Error;
    fn try_from(j: PolynomialJson) -> Result<Self, Error> {
        terms_to_poly(j.n, j.terms, "")
    }
}

impl From<Polynomial> for PolynomialJson {
    fn from(p: Polynomial) -> Self {
        PolynomialJson {
            n: p.nvars(),
            terms: poly_to_terms(&p),
        }
    }
}

impl TryFrom<PolyMatrixJson> for PolyMatrix {
    type Error = Error;
    fn try_from(j: PolyMatrixJson) -> Result<Self, Error> {
        if j.entries.len() != j.r * j.r {
            return Err(Error::InvalidInput(format!(
                "entries has length {}, expected r*r = {}",
                j.entries.len(),
                j.r * j.r
            )));
        }
        let entries = j
            .entries
            .into_iter()
            .enumerate()
            .map(|(k, t)| terms_to_poly(j.n, t, &format!("entries[{k}].")))
            .collect::<Result<Vec<_>, _>>()?;
        PolyMatrix::new(j.r, j.n, entries)
    }
}

impl From<PolyMatrix> for PolyMatrixJson {
    fn from(m: PolyMatrix) -> Self {
        PolyMatrixJson {
            n: m.nvars(),
            r: m.side(),
            entries: m.entries().iter().map(poly_to_terms).collect(),
        }
    }
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolynomialJson::from(self.clone()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = PolynomialJson::deserialize(d)?;
        Polynomial::try_from(j).map_err(serde::de::Error::custom)
    }
}

impl Serialize for PolyMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyMatrixJson::from(self.clone()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolyMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = PolyMatrixJson::deserialize(d)?;
        PolyMatrix::try_from(j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_round_trip() {
        let src = r#"{"n": 3, "terms": [{"alpha": [2,0,0], "c": 1.0}, {"alpha": [0,1,3], "c": -2.5}]}"#;
        let p: Polynomial = serde_json::from_str(src).unwrap();
        assert_eq!(p.len(), 2);
        let back: Polynomial = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(p, back);
    }

    #[test]
    fn bad_alpha_length_names_the_term() {
        let src = r#"{"n": 2, "terms": [{"alpha": [1,0], "c": 1.0}, {"alpha": [1], "c": 1.0}]}"#;
        let err = serde_json::from_str::<Polynomial>(src).unwrap_err().to_string();
        assert!(err.contains("terms[1].alpha"), "{err}");
    }

    #[test]
    fn matrix_round_trip() {
        let src = r#"{"n": 1, "r": 2, "entries": [[{"alpha":[2],"c":1.0}], [{"alpha":[1],"c":1.0}], [{"alpha":[1],"c":1.0}], [{"alpha":[0],"c":1.0}]]}"#;
        let m: PolyMatrix = serde_json::from_str(src).unwrap();
        assert_eq!(m.side(), 2);
        let back: PolyMatrix = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(m, back);
    }
}
