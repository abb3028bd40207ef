use super::affine::{AffinePoly, AffinePolyMatrix};
use super::certificate::GramCertificate;
use super::kind::ConeKind;
use super::program::{SosProgram, SosStatus};
use super::structure::GramOptions;
use crate::chordal::SparsityGraph;
use crate::conic::Settings;
use crate::error::{Error, Result};
use crate::polyalg::{Exponent, PolyMatrix, Polynomial};

#[derive(Clone, Debug)]
pub struct CertifyOptions {
    pub gram: GramOptions,
    pub settings: Settings,
    /// Tolerance of the post-solve certificate check.
    pub verify_tol: f64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            gram: GramOptions::default(),
            settings: Settings::default(),
            verify_tol: 1e-6,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CertifyOutcome {
    pub status: SosStatus,
    /// Present exactly when `status` is `Feasible`; carries its verification.
    pub certificate: Option<GramCertificate>,
    pub message: Option<String>,
    pub max_block_side: usize,
    pub iterations: usize,
    pub solve_seconds: f64,
}

/// Search for a Gram certificate that `p` lies in `kind`.
pub fn certify(p: &Polynomial, kind: ConeKind, opts: &CertifyOptions) -> Result<CertifyOutcome> {
    if p.degree() % 2 == 1 {
        return Err(Error::InvalidInput(format!("polynomial has odd degree {}", p.degree())));
    }
    let mut prog = SosProgram::new();
    prog.add_constraint(&AffinePoly::from(p), kind, &opts.gram)?;
    run(&prog, opts)
}

/// Search for a Gram certificate that the polynomial matrix `m` lies in the
/// matrix version of `kind`. `pattern` defaults to the nonzero pattern of `m`.
pub fn certify_matrix(
    m: &PolyMatrix,
    kind: ConeKind,
    pattern: Option<&SparsityGraph>,
    opts: &CertifyOptions,
) -> Result<CertifyOutcome> {
    let mut prog = SosProgram::new();
    prog.add_matrix_constraint(&AffinePolyMatrix::from(m), kind, pattern, &opts.gram)?;
    run(&prog, opts)
}

fn run(prog: &SosProgram, opts: &CertifyOptions) -> Result<CertifyOutcome> {
    let mut sol = prog.solve(&opts.settings)?;
    prog.verify(&mut sol, opts.verify_tol);
    let certificate = if sol.status == SosStatus::Feasible {
        sol.certificates.into_iter().next()
    } else {
        None
    };
    Ok(CertifyOutcome {
        status: sol.status,
        certificate,
        message: sol.message,
        max_block_side: sol.max_block_side,
        iterations: sol.conic.as_ref().map_or(0, |c| c.iterations),
        solve_seconds: sol.solve_seconds,
    })
}

/// `y' P(x) y` as a polynomial in `(x_1..x_n, y_1..y_r)`.
pub fn scalarize_matrix(m: &PolyMatrix) -> Polynomial {
    let (n, r) = (m.nvars(), m.side());
    let map: Vec<usize> = (0..n).collect();
    let mut terms = Vec::new();
    for a in 0..r {
        for b in a..r {
            let factor = if a == b { 1.0 } else { 2.0 };
            let mut y = vec![0u32; n + r];
            y[n + a] += 1;
            y[n + b] += 1;
            let y = Exponent::new(y);
            for (alpha, c) in m.get(a, b).terms() {
                terms.push((alpha.embed(n + r, &map).add(&y), factor * c));
            }
        }
    }
    Polynomial::from_terms(n + r, terms).expect("finite coefficients")
}
