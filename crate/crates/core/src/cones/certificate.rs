use std::collections::BTreeMap;

use faer::Mat;
use serde::{Deserialize, Serialize};

use super::kind::ConeKind;
use crate::conic::min_eigenvalue;
use crate::error::{Error, Result};
use crate::polyalg::{Exponent, PolyMatrix, Polynomial};

/// One Gram block of a certificate. Element `i` of the basis is the monomial
/// `basis[i]` placed in matrix row `rows[i]` (always 0 for scalar
/// certificates).
#[derive(Clone, Debug, PartialEq)]
pub struct CertificateBlock {
    pub clique: Vec<usize>,
    pub basis: Vec<Exponent>,
    pub rows: Vec<usize>,
    pub gram: Mat<f64>,
}

impl CertificateBlock {
    pub fn side(&self) -> usize {
        self.basis.len()
    }
}

/// A Gram-matrix certificate that a polynomial (matrix) lies in a cone.
#[derive(Clone, Debug, PartialEq)]
pub struct GramCertificate {
    pub kind: ConeKind,
    pub n: usize,
    /// Side of the certified matrix; 1 for scalar polynomials.
    pub r: usize,
    pub blocks: Vec<CertificateBlock>,
    /// Coefficient-space residual against the target when it was produced.
    pub residual: f64,
    pub verification: Option<VerificationReport>,
}

impl GramCertificate {
    /// The polynomial matrix `sum_k (I (x) v_k)' Q_k (I (x) v_k)`.
    pub fn reconstruct(&self) -> PolyMatrix {
        let mut acc: BTreeMap<(usize, usize, Exponent), f64> = BTreeMap::new();
        for blk in &self.blocks {
            for i in 0..blk.side() {
                for j in 0..blk.side() {
                    let (a, b) = (blk.rows[i], blk.rows[j]);
                    if a > b {
                        continue;
                    }
                    // (a, b) with a < b sees each unordered pair once through
                    // the ordered pair whose first row is a.
                    *acc.entry((a, b, blk.basis[i].add(&blk.basis[j]))).or_insert(0.0) += blk.gram[(i, j)];
                }
            }
        }
        let mut upper: BTreeMap<(usize, usize), Vec<(Exponent, f64)>> = BTreeMap::new();
        for ((a, b, alpha), c) in acc {
            upper.entry((a, b)).or_default().push((alpha, c));
        }
        PolyMatrix::from_fn(self.r, self.n, |a, b| {
            let terms = upper.get(&(a, b)).cloned().unwrap_or_default();
            Polynomial::from_terms(self.n, terms).expect("finite Gram entries")
        })
        .expect("symmetric by construction")
    }

    /// `max |coefficient of target - reconstruction|` over all entries.
    pub fn residual_against(&self, target: &PolyMatrix) -> f64 {
        if target.side() != self.r || target.nvars() != self.n {
            return f64::INFINITY;
        }
        let rec = self.reconstruct();
        let mut worst = 0.0f64;
        for a in 0..self.r {
            for b in a..self.r {
                let d = target.get(a, b).try_sub(rec.get(a, b)).expect("same dimension");
                worst = worst.max(d.max_abs_coeff());
            }
        }
        worst
    }

    pub fn max_block_side(&self) -> usize {
        self.blocks.iter().map(CertificateBlock::side).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> CertificateJson {
        CertificateJson {
            kind: self.kind,
            n: self.n,
            r: self.r,
            residual: self.residual,
            blocks: self
                .blocks
                .iter()
                .map(|b| BlockJson {
                    clique: b.clique.iter().map(|v| v + 1).collect(),
                    basis: b.basis.iter().map(|a| a.as_slice().to_vec()).collect(),
                    rows: (self.r > 1).then(|| b.rows.iter().map(|v| v + 1).collect()),
                    lower: (0..b.side()).flat_map(|i| (0..=i).map(move |j| (i, j))).map(|(i, j)| b.gram[(i, j)]).collect(),
                })
                .collect(),
            verification: self.verification.clone(),
        }
    }
}

/// Wire format of a [`GramCertificate`]. Cliques and rows are 1-based and
/// `lower` lists the lower triangle row by row.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateJson {
    pub kind: ConeKind,
    pub n: usize,
    pub r: usize,
    pub residual: f64,
    pub blocks: Vec<BlockJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationReport>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockJson {
    pub clique: Vec<usize>,
    pub basis: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<usize>>,
    pub lower: Vec<f64>,
}

impl TryFrom<CertificateJson> for GramCertificate {
    type Error = Error;
    fn try_from(j: CertificateJson) -> Result<Self> {
        if j.r == 0 {
            return Err(Error::InvalidInput("r must be at least 1".into()));
        }
        let mut blocks = Vec::with_capacity(j.blocks.len());
        for (k, b) in j.blocks.into_iter().enumerate() {
            let side = b.basis.len();
            if let Some(a) = b.basis.iter().position(|a| a.len() != j.n) {
                return Err(Error::InvalidInput(format!(
                    "blocks[{k}].basis[{a}] has length {}, expected n = {}",
                    b.basis[a].len(),
                    j.n
                )));
            }
            if b.lower.len() != side * (side + 1) / 2 {
                return Err(Error::InvalidInput(format!(
                    "blocks[{k}].lower has length {}, expected {} for a basis of {side}",
                    b.lower.len(),
                    side * (side + 1) / 2
                )));
            }
            let rows = match b.rows {
                Some(rows) => {
                    if rows.len() != side || rows.iter().any(|&v| v == 0 || v > j.r) {
                        return Err(Error::InvalidInput(format!(
                            "blocks[{k}].rows must hold {side} entries in 1..={}",
                            j.r
                        )));
                    }
                    rows.into_iter().map(|v| v - 1).collect()
                }
                None if j.r == 1 => vec![0; side],
                None => return Err(Error::InvalidInput(format!("blocks[{k}].rows is required when r > 1"))),
            };
            if b.clique.contains(&0) {
                return Err(Error::InvalidInput(format!("blocks[{k}].clique is 1-based")));
            }
            let mut gram = Mat::<f64>::zeros(side, side);
            let mut it = b.lower.into_iter();
            for i in 0..side {
                for jj in 0..=i {
                    let v = it.next().expect("length checked");
                    gram[(i, jj)] = v;
                    gram[(jj, i)] = v;
                }
            }
            blocks.push(CertificateBlock {
                clique: b.clique.into_iter().map(|v| v - 1).collect(),
                basis: b.basis.into_iter().map(Exponent::new).collect(),
                rows,
                gram,
            });
        }
        Ok(GramCertificate {
            kind: j.kind,
            n: j.n,
            r: j.r,
            blocks,
            residual: j.residual,
            verification: j.verification,
        })
    }
}

impl Serialize for GramCertificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for GramCertificate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = CertificateJson::deserialize(d)?;
        GramCertificate::try_from(j).map_err(serde::de::Error::custom)
    }
}

/// Per-block cone membership numbers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockCheck {
    pub side: usize,
    /// `min_i Q_ii - sum_{j != i} |Q_ij|`.
    pub dd_margin: f64,
    /// Smallest eigenvalue of the comparison matrix (|Q_ii| on the diagonal,
    /// `-|Q_ij|` elsewhere), capped by the smallest diagonal entry. Nonnegative
    /// exactly for scaled diagonally dominant matrices.
    pub sdd_margin: f64,
    pub min_eigenvalue: f64,
    pub passed: bool,
}

/// Result of [`verify_certificate`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// Cone whose matrix condition was checked.
    pub checked_as: ConeKind,
    pub tol: f64,
    pub residual: f64,
    pub residual_ok: bool,
    pub cone_ok: bool,
    pub blocks: Vec<BlockCheck>,
    pub passed: bool,
}

pub fn dd_margin(q: &Mat<f64>) -> f64 {
    (0..q.nrows())
        .map(|i| q[(i, i)] - (0..q.ncols()).filter(|&j| j != i).map(|j| q[(i, j)].abs()).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}

pub fn sdd_margin(q: &Mat<f64>) -> f64 {
    let r = q.nrows();
    if r == 0 {
        return f64::INFINITY;
    }
    let min_diag = (0..r).map(|i| q[(i, i)]).fold(f64::INFINITY, f64::min);
    let cmp = Mat::<f64>::from_fn(r, r, |i, j| if i == j { q[(i, i)].abs() } else { -q[(i, j)].abs() });
    min_diag.min(min_eigenvalue(&cmp))
}

/// Check a certificate against `target` as a member of `kind`'s matrix cone.
///
/// The residual must be at most `tol * (1 + max |coefficient|)`; every block
/// must satisfy the DD, SDD or PSD condition up to `tol`.
pub fn verify_certificate_as(target: &PolyMatrix, cert: &GramCertificate, kind: ConeKind, tol: f64) -> VerificationReport {
    let residual = cert.residual_against(target);
    let scale = 1.0 + target.entries().iter().map(Polynomial::max_abs_coeff).fold(0.0, f64::max);
    let residual_ok = residual <= tol * scale;
    let blocks: Vec<BlockCheck> = cert
        .blocks
        .iter()
        .map(|b| {
            let dd = dd_margin(&b.gram);
            let sdd = sdd_margin(&b.gram);
            let eig = if b.side() == 0 { 0.0 } else { min_eigenvalue(&b.gram) };
            let asym = (0..b.side())
                .flat_map(|i| (0..i).map(move |j| (i, j)))
                .map(|(i, j)| (b.gram[(i, j)] - b.gram[(j, i)]).abs())
                .fold(0.0, f64::max);
            let margin = match kind {
                ConeKind::Dsos => dd,
                ConeKind::Sdsos => sdd,
                ConeKind::Ssos | ConeKind::Sos => eig,
            };
            BlockCheck {
                side: b.side(),
                dd_margin: dd,
                sdd_margin: sdd,
                min_eigenvalue: eig,
                passed: margin >= -tol && asym <= tol,
            }
        })
        .collect();
    let shape_ok = cert.r == target.side()
        && cert.blocks.iter().all(|b| {
            b.rows.len() == b.side()
                && b.gram.nrows() == b.side()
                && b.gram.ncols() == b.side()
                && b.rows.iter().all(|&a| a < cert.r)
        });
    let cone_ok = shape_ok && blocks.iter().all(|b| b.passed);
    VerificationReport {
        checked_as: kind,
        tol,
        residual,
        residual_ok,
        cone_ok,
        passed: residual_ok && cone_ok,
        blocks,
    }
}

/// [`verify_certificate_as`] with the certificate's own cone.
pub fn verify_certificate(target: &PolyMatrix, cert: &GramCertificate, tol: f64) -> VerificationReport {
    verify_certificate_as(target, cert, cert.kind, tol)
}
