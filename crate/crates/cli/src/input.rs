use std::io::Read;
use std::path::Path;

use serde::de::DeserializeOwned;
use sparsos::chordal::SparsityGraph;
use sparsos::cones::GramCertificate;
use sparsos::polyalg::{PolyMatrixJson, PolynomialJson};
use sparsos::{Error, PolyMatrix, Polynomial, Result};

pub fn read_text(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

/// Deserialize with the failing field path in the error message.
fn parse<T: DeserializeOwned>(text: &str, what: &str, path: &Path) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let at = e.path().to_string();
        let at = if at == "." { String::new() } else { format!(" at `{at}`") };
        Error::InvalidInput(format!("{}: malformed {what}{at}: {}", path.display(), e.inner()))
    })
}

pub fn polynomial(path: &Path) -> Result<Polynomial> {
    let j: PolynomialJson = parse(&read_text(path)?, "polynomial", path)?;
    Polynomial::try_from(j)
}

pub fn matrix(path: &Path) -> Result<PolyMatrix> {
    let j: PolyMatrixJson = parse(&read_text(path)?, "polynomial matrix", path)?;
    PolyMatrix::try_from(j)
}

/// A polynomial file becomes a 1 x 1 matrix; matrix files are recognised by
/// their `entries` field.
pub fn polynomial_or_matrix(path: &Path) -> Result<PolyMatrix> {
    let text = read_text(path)?;
    let v: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidInput(format!("{}: not JSON: {e}", path.display())))?;
    if v.get("entries").is_some() {
        PolyMatrix::try_from(parse::<PolyMatrixJson>(&text, "polynomial matrix", path)?)
    } else {
        Ok(PolyMatrix::scalar(Polynomial::try_from(parse::<PolynomialJson>(&text, "polynomial", path)?)?))
    }
}

pub fn graph(path: &Path) -> Result<SparsityGraph> {
    parse(&read_text(path)?, "graph", path)
}

/// Accepts a bare certificate or the envelope printed by `certify`.
pub fn certificate(path: &Path) -> Result<GramCertificate> {
    let text = read_text(path)?;
    let v: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidInput(format!("{}: not JSON: {e}", path.display())))?;
    let inner = match v.get("certificate") {
        Some(c) if !c.is_null() => c.to_string(),
        Some(_) => return Err(Error::InvalidInput(format!("{}: envelope carries no certificate", path.display()))),
        None => text,
    };
    parse(&inner, "certificate", path)
}
