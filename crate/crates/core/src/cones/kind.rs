use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// The four certificate cones, ordered by inclusion:
/// `Dsos` within `Sdsos` within `Ssos` within `Sos`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConeKind {
    /// Diagonally dominant Gram matrix (LP).
    Dsos,
    /// Scaled diagonally dominant Gram matrix (SOCP).
    Sdsos,
    /// Sum of PSD blocks over the cliques of the correlative sparsity graph.
    Ssos,
    /// Dense PSD Gram matrix.
    Sos,
}

impl ConeKind {
    pub const ALL: [ConeKind; 4] = [ConeKind::Dsos, ConeKind::Sdsos, ConeKind::Ssos, ConeKind::Sos];

    pub fn name(&self) -> &'static str {
        match self {
            ConeKind::Dsos => "dsos",
            ConeKind::Sdsos => "sdsos",
            ConeKind::Ssos => "ssos",
            ConeKind::Sos => "sos",
        }
    }
}

impl fmt::Display for ConeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "dsos" => Ok(ConeKind::Dsos),
            "sdsos" => Ok(ConeKind::Sdsos),
            "ssos" => Ok(ConeKind::Ssos),
            "sos" => Ok(ConeKind::Sos),
            other => Err(Error::InvalidInput(format!(
                "unknown cone `{other}` (expected dsos, sdsos, ssos or sos)"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordered_by_inclusion() {
        assert!(ConeKind::Dsos < ConeKind::Sdsos);
        assert!(ConeKind::Sdsos < ConeKind::Ssos);
        assert!(ConeKind::Ssos < ConeKind::Sos);
        assert_eq!("SSOS".parse::<ConeKind>().unwrap(), ConeKind::Ssos);
        assert!("psd".parse::<ConeKind>().is_err());
        assert_eq!(serde_json::to_string(&ConeKind::Sdsos).unwrap(), "\"sdsos\"");
    }
}
