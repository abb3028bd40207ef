//! Nesterov-Todd scalings and Jordan-algebra operations per cone block.
//!
//! Every block keeps its vectors in the layout of the program (svec for PSD).
//! The scaled point `lambda = W x = W^{-T} s` is stored in the same layout; for
//! PSD blocks it is the svec of a diagonal matrix.

use faer::{Mat, Side};

use crate::conic::linalg::cholesky;
use crate::conic::program::{dot, norm2};
use crate::conic::svec::{smat, svec_len, svec_pair, svec_unchecked};

#[derive(Clone, Copy, Debug)]
pub(crate) enum Block {
    NonNeg { off: usize, dim: usize },
    Soc { off: usize, dim: usize },
    Psd { off: usize, r: usize },
}

impl Block {
    pub fn off(&self) -> usize {
        match *self {
            Block::NonNeg { off, .. } | Block::Soc { off, .. } | Block::Psd { off, .. } => off,
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            Block::NonNeg { dim, .. } | Block::Soc { dim, .. } => dim,
            Block::Psd { r, .. } => svec_len(r),
        }
    }

    pub fn degree(&self) -> usize {
        match *self {
            Block::NonNeg { dim, .. } => dim,
            Block::Soc { .. } => 1,
            Block::Psd { r, .. } => r,
        }
    }

    pub fn range(&self) -> std::ops::Range<usize> {
        self.off()..self.off() + self.dim()
    }

    /// Write the identity element `e` of the block.
    pub fn identity(&self, out: &mut [f64]) {
        out.fill(0.0);
        match *self {
            Block::NonNeg { .. } => out.fill(1.0),
            Block::Soc { .. } => out[0] = 1.0,
            Block::Psd { r, .. } => {
                for i in 0..r {
                    out[diag_index(i, r)] = 1.0;
                }
            }
        }
    }

    /// Jordan product `a o b`.
    pub fn jordan(&self, a: &[f64], b: &[f64], out: &mut [f64]) {
        match *self {
            Block::NonNeg { .. } => {
                for k in 0..a.len() {
                    out[k] = a[k] * b[k];
                }
            }
            Block::Soc { .. } => {
                out[0] = dot(a, b);
                for k in 1..a.len() {
                    out[k] = a[0] * b[k] + b[0] * a[k];
                }
            }
            Block::Psd { r, .. } => {
                let am = smat(a, r);
                let bm = smat(b, r);
                let ab = &am * &bm;
                let sym = Mat::from_fn(r, r, |i, j| 0.5 * (ab[(i, j)] + ab[(j, i)]));
                out.copy_from_slice(&svec_unchecked(&sym));
            }
        }
    }
}

pub(crate) fn diag_index(i: usize, r: usize) -> usize {
    i * r - i * i.saturating_sub(1) / 2
}

/// NT scaling of one block at an interior pair `(x, s)`.
pub(crate) enum Scaling {
    NonNeg {
        /// `sqrt(s / x)`.
        d: Vec<f64>,
        lambda: Vec<f64>,
    },
    Soc {
        beta: f64,
        v: Vec<f64>,
        lambda: Vec<f64>,
    },
    Psd {
        r: usize,
        rm: Mat<f64>,
        rinv: Mat<f64>,
        g: Mat<f64>,
        /// Eigenvalues of the scaled point (diagonal of `Lambda`).
        lam: Vec<f64>,
        lambda: Vec<f64>,
    },
}

fn soc_jnorm(x: &[f64]) -> f64 {
    let t = x[0] * x[0] - dot(&x[1..], &x[1..]);
    if t > 0.0 && x[0] > 0.0 {
        t.sqrt()
    } else {
        // Fall back to the factored form, which keeps precision near the boundary.
        let n = norm2(&x[1..]);
        let f = (x[0] - n) * (x[0] + n);
        if f > 0.0 && x[0] > 0.0 {
            f.sqrt()
        } else {
            0.0
        }
    }
}

impl Scaling {
    /// `None` if `(x, s)` is not strictly interior.
    pub fn new(block: &Block, x: &[f64], s: &[f64]) -> Option<Scaling> {
        match *block {
            Block::NonNeg { .. } => {
                if x.iter().chain(s).any(|&v| v <= 0.0 || !v.is_finite()) {
                    return None;
                }
                let d = x.iter().zip(s).map(|(x, s)| (s / x).sqrt()).collect();
                let lambda = x.iter().zip(s).map(|(x, s)| (x * s).sqrt()).collect();
                Some(Scaling::NonNeg { d, lambda })
            }
            Block::Soc { .. } => {
                let a = soc_jnorm(x);
                let b = soc_jnorm(s);
                if a <= 0.0 || b <= 0.0 || !a.is_finite() || !b.is_finite() {
                    return None;
                }
                let beta = (b / a).sqrt();
                let xb: Vec<f64> = x.iter().map(|v| v / a).collect();
                let sb: Vec<f64> = s.iter().map(|v| v / b).collect();
                let gamma = ((1.0 + dot(&xb, &sb)) / 2.0).sqrt();
                let mut w: Vec<f64> = sb.clone();
                w[0] += xb[0];
                for k in 1..w.len() {
                    w[k] -= xb[k];
                }
                for v in &mut w {
                    *v /= 2.0 * gamma;
                }
                let denom = (2.0 * (w[0] + 1.0)).sqrt();
                let mut v = w;
                v[0] += 1.0;
                for e in &mut v {
                    *e /= denom;
                }
                let mut sc = Scaling::Soc {
                    beta,
                    v,
                    lambda: Vec::new(),
                };
                let mut lambda = vec![0.0; x.len()];
                sc.w(x, &mut lambda);
                if let Scaling::Soc { lambda: l, .. } = &mut sc {
                    *l = lambda;
                }
                Some(sc)
            }
            Block::Psd { r, .. } => {
                let xm = smat(x, r);
                let sm = smat(s, r);
                let lx = cholesky(&xm)?;
                let ls = cholesky(&sm)?;
                let prod = ls.transpose() * &lx;
                let svd = prod.svd().ok()?;
                let lam: Vec<f64> = (0..r).map(|i| svd.S()[i]).collect();
                if lam.iter().any(|&l| l <= 0.0 || !l.is_finite()) {
                    return None;
                }
                let u = svd.U();
                let vv = svd.V();
                // R = Lx V Lambda^{-1/2},  R^{-1} = Lambda^{-1/2} U' Ls'.
                let rm = Mat::from_fn(r, r, |i, j| {
                    (0..r).map(|k| lx[(i, k)] * vv[(k, j)]).sum::<f64>() / lam[j].sqrt()
                });
                let ut_lst = u.transpose() * ls.transpose();
                let rinv = Mat::from_fn(r, r, |i, j| ut_lst[(i, j)] / lam[i].sqrt());
                let g = &rm * rm.transpose();
                let mut lambda = vec![0.0; svec_len(r)];
                for i in 0..r {
                    lambda[diag_index(i, r)] = lam[i];
                }
                Some(Scaling::Psd {
                    r,
                    rm,
                    rinv,
                    g,
                    lam,
                    lambda,
                })
            }
        }
    }

    pub fn lambda(&self) -> &[f64] {
        match self {
            Scaling::NonNeg { lambda, .. } | Scaling::Soc { lambda, .. } | Scaling::Psd { lambda, .. } => lambda,
        }
    }

    /// `W v`.
    pub fn w(&self, v: &[f64], out: &mut [f64]) {
        match self {
            Scaling::NonNeg { d, .. } => {
                for k in 0..v.len() {
                    out[k] = d[k] * v[k];
                }
            }
            Scaling::Soc { beta, v: q, .. } => soc_apply(*beta, q, v, out, false),
            Scaling::Psd { rinv, .. } => congruence(rinv, v, out),
        }
    }

    /// `W^{-T} v`.
    pub fn winv_t(&self, v: &[f64], out: &mut [f64]) {
        match self {
            Scaling::NonNeg { d, .. } => {
                for k in 0..v.len() {
                    out[k] = v[k] / d[k];
                }
            }
            Scaling::Soc { beta, v: q, .. } => soc_apply(1.0 / beta, q, v, out, true),
            Scaling::Psd { rm, .. } => congruence_t(rm, v, out),
        }
    }

    /// `W^T v`.
    #[cfg(test)]
    pub fn w_t(&self, v: &[f64], out: &mut [f64]) {
        match self {
            Scaling::NonNeg { .. } | Scaling::Soc { .. } => self.w(v, out),
            Scaling::Psd { rinv, .. } => congruence_t(rinv, v, out),
        }
    }

    /// `W^{-1} v`.
    pub fn winv(&self, v: &[f64], out: &mut [f64]) {
        match self {
            Scaling::NonNeg { .. } | Scaling::Soc { .. } => self.winv_t(v, out),
            Scaling::Psd { rm, .. } => congruence(rm, v, out),
        }
    }

    /// `H^{-1} v = W^{-1} W^{-T} v`.
    pub fn hinv(&self, v: &[f64], out: &mut [f64]) {
        match self {
            Scaling::NonNeg { d, .. } => {
                for k in 0..v.len() {
                    out[k] = v[k] / (d[k] * d[k]);
                }
            }
            Scaling::Soc { .. } => {
                let mut tmp = vec![0.0; v.len()];
                self.winv_t(v, &mut tmp);
                self.winv(&tmp, out);
            }
            Scaling::Psd { g, .. } => congruence(g, v, out),
        }
    }

    /// Solve `lambda o u = rhs` for `u`.
    pub fn lambda_div(&self, rhs: &[f64], out: &mut [f64]) {
        match self {
            Scaling::NonNeg { lambda, .. } => {
                for k in 0..rhs.len() {
                    out[k] = rhs[k] / lambda[k];
                }
            }
            Scaling::Soc { lambda, .. } => {
                let l0 = lambda[0];
                let l1 = &lambda[1..];
                let det = (l0 - norm2(l1)) * (l0 + norm2(l1));
                let u0 = (l0 * rhs[0] - dot(l1, &rhs[1..])) / det;
                out[0] = u0;
                for k in 1..rhs.len() {
                    out[k] = (rhs[k] - u0 * lambda[k]) / l0;
                }
            }
            Scaling::Psd { r, lam, .. } => {
                for (k, o) in out.iter_mut().enumerate() {
                    let (i, j) = svec_pair(k, *r);
                    *o = rhs[k] * 2.0 / (lam[i] + lam[j]);
                }
            }
        }
    }

    /// Largest `alpha` with `lambda + alpha d` in the cone (may be infinite).
    pub fn max_step(&self, d: &[f64]) -> f64 {
        match self {
            Scaling::NonNeg { lambda, .. } => lambda
                .iter()
                .zip(d)
                .filter(|(_, &dk)| dk < 0.0)
                .map(|(l, dk)| -l / dk)
                .fold(f64::INFINITY, f64::min),
            Scaling::Soc { lambda, .. } => soc_max_step(lambda, d),
            Scaling::Psd { r, lam, .. } => {
                if d.iter().any(|v| !v.is_finite()) {
                    return 0.0;
                }
                let dm = smat(d, *r);
                let scaled = Mat::from_fn(*r, *r, |i, j| dm[(i, j)] / (lam[i] * lam[j]).sqrt());
                let Ok(vals) = scaled.self_adjoint_eigenvalues(Side::Lower) else {
                    return 0.0;
                };
                let mn = vals.into_iter().fold(f64::INFINITY, f64::min);
                if mn < 0.0 {
                    -1.0 / mn
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// Dense `H^{-1}` of an SOC block.
    pub fn soc_hinv_dense(&self) -> Mat<f64> {
        let Scaling::Soc { v, .. } = self else {
            unreachable!("dense H^{{-1}} requested for a non-SOC block")
        };
        let k = v.len();
        let mut out = Mat::zeros(k, k);
        let mut e = vec![0.0; k];
        let mut col = vec![0.0; k];
        for j in 0..k {
            e.fill(0.0);
            e[j] = 1.0;
            self.hinv(&e, &mut col);
            for i in 0..k {
                out[(i, j)] = col[i];
            }
        }
        out
    }

    /// The matrix `G` with `H^{-1}(V) = G V G` for PSD blocks.
    pub fn psd_g(&self) -> &Mat<f64> {
        match self {
            Scaling::Psd { g, .. } => g,
            _ => unreachable!("G requested for a non-PSD block"),
        }
    }
}

/// `out = scale * (2 v v' - J) x` when `inverse` is false, or
/// `scale * (2 J v v' J - J) x` when it is true.
fn soc_apply(scale: f64, v: &[f64], x: &[f64], out: &mut [f64], inverse: bool) {
    if inverse {
        let jv0 = v[0];
        let vjx = v[0] * x[0] - dot(&v[1..], &x[1..]);
        out[0] = scale * (2.0 * jv0 * vjx - x[0]);
        for k in 1..x.len() {
            out[k] = scale * (-2.0 * v[k] * vjx + x[k]);
        }
    } else {
        let vx = dot(v, x);
        out[0] = scale * (2.0 * v[0] * vx - x[0]);
        for k in 1..x.len() {
            out[k] = scale * (2.0 * v[k] * vx + x[k]);
        }
    }
}

fn soc_max_step(l: &[f64], d: &[f64]) -> f64 {
    let a = d[0] * d[0] - dot(&d[1..], &d[1..]);
    let b = l[0] * d[0] - dot(&l[1..], &d[1..]);
    let c = (l[0] - norm2(&l[1..])) * (l[0] + norm2(&l[1..]));
    let mut alpha = f64::INFINITY;
    if d[0] < 0.0 {
        alpha = -l[0] / d[0];
    }
    let disc = b * b - a * c;
    let root = if a < 0.0 {
        let s = disc.max(0.0).sqrt();
        if b > 0.0 {
            (b + s) / -a
        } else {
            c / (s - b)
        }
    } else if b < 0.0 {
        if a == 0.0 {
            -c / (2.0 * b)
        } else if disc >= 0.0 {
            c / (-b + disc.sqrt())
        } else {
            f64::INFINITY
        }
    } else {
        f64::INFINITY
    };
    alpha.min(root.max(0.0))
}

/// `svec(M smat(v) M')`.
fn congruence(m: &Mat<f64>, v: &[f64], out: &mut [f64]) {
    let r = m.nrows();
    let vm = smat(v, r);
    let res = m * &vm * m.transpose();
    out.copy_from_slice(&svec_unchecked(&res));
}

/// `svec(M' smat(v) M)`.
fn congruence_t(m: &Mat<f64>, v: &[f64], out: &mut [f64]) {
    let r = m.nrows();
    let vm = smat(v, r);
    let res = m.transpose() * &vm * m;
    out.copy_from_slice(&svec_unchecked(&res));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conic::svec::svec;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * (1.0 + y.abs()))
    }

    fn check_scaling(block: Block, x: &[f64], s: &[f64]) {
        let sc = Scaling::new(&block, x, s).unwrap();
        let n = x.len();
        let mut wx = vec![0.0; n];
        let mut ws = vec![0.0; n];
        sc.w(x, &mut wx);
        sc.winv_t(s, &mut ws);
        assert!(close(&wx, &ws, 1e-10), "W x != W^-T s: {wx:?} {ws:?}");
        assert!(close(&wx, sc.lambda(), 1e-10));
        // H^{-1} s = x.
        let mut hs = vec![0.0; n];
        sc.hinv(s, &mut hs);
        assert!(close(&hs, x, 1e-10), "H^-1 s != x");
        // W^{-1} W v = v and W^T W^{-T} v = v.
        let probe: Vec<f64> = (0..n).map(|k| (k as f64 * 0.7).sin()).collect();
        let mut t = vec![0.0; n];
        let mut back = vec![0.0; n];
        sc.w(&probe, &mut t);
        sc.winv(&t, &mut back);
        assert!(close(&back, &probe, 1e-10));
        sc.winv_t(&probe, &mut t);
        sc.w_t(&t, &mut back);
        assert!(close(&back, &probe, 1e-10));
        // lambda o (lambda \ v) = v.
        sc.lambda_div(&probe, &mut t);
        block.jordan(sc.lambda(), &t, &mut back);
        assert!(close(&back, &probe, 1e-9));
    }

    #[test]
    fn nonneg_scaling() {
        check_scaling(Block::NonNeg { off: 0, dim: 3 }, &[1.0, 2.0, 0.5], &[3.0, 0.1, 2.0]);
    }

    #[test]
    fn soc_scaling() {
        check_scaling(Block::Soc { off: 0, dim: 4 }, &[3.0, 1.0, -1.0, 0.5], &[2.0, 0.3, 1.2, -0.4]);
        check_scaling(Block::Soc { off: 0, dim: 3 }, &[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn psd_scaling() {
        let x = Mat::from_fn(3, 3, |i, j| if i == j { 2.0 + i as f64 } else { 0.3 });
        let s = Mat::from_fn(3, 3, |i, j| if i == j { 1.0 } else { -0.2 * (i + j) as f64 / 3.0 });
        check_scaling(Block::Psd { off: 0, r: 3 }, &svec(&x).unwrap(), &svec(&s).unwrap());
    }

    #[test]
    fn soc_step_hits_boundary() {
        let l = [2.0, 0.0, 0.0];
        let d = [0.0, 1.0, 0.0];
        assert!((soc_max_step(&l, &d) - 2.0).abs() < 1e-12);
        let d = [1.0, 0.5, 0.0];
        assert_eq!(soc_max_step(&l, &d), f64::INFINITY);
        let d = [-1.0, 0.0, 0.0];
        assert!((soc_max_step(&l, &d) - 2.0).abs() < 1e-12);
    }
}
