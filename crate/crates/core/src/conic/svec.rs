use faer::Mat;

use crate::error::{Error, Result};

pub const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Length of the svec of an `r x r` symmetric matrix.
pub fn svec_len(r: usize) -> usize {
    r * (r + 1) / 2
}

/// Position of entry `(i, j)` (either triangle) in the column-major
/// lower-triangle svec of an `r x r` matrix.
pub fn svec_index(i: usize, j: usize, r: usize) -> usize {
    let (i, j) = if i >= j { (i, j) } else { (j, i) };
    // Column j starts after columns 0..j of lengths r, r-1, ..., r-j+1.
    j * r - j * j.saturating_sub(1) / 2 + (i - j)
}

/// Inverse of [`svec_index`]: the `(row, col)` pair with `row >= col`.
pub fn svec_pair(k: usize, r: usize) -> (usize, usize) {
    let mut j = 0;
    let mut start = 0;
    while start + (r - j) <= k {
        start += r - j;
        j += 1;
    }
    (j + (k - start), j)
}

/// Lower-triangle vectorization with `sqrt(2)`-scaled off-diagonals, so that
/// `svec(A) . svec(B) = trace(A B)`.
pub fn svec(m: &Mat<f64>) -> Result<Vec<f64>> {
    let r = m.nrows();
    if m.ncols() != r {
        return Err(Error::DimensionMismatch {
            expected: r,
            found: m.ncols(),
        });
    }
    let scale = m
        .col_iter()
        .flat_map(|c| c.iter().copied().collect::<Vec<_>>())
        .fold(1.0f64, |a, v| a.max(v.abs()));
    for j in 0..r {
        for i in j + 1..r {
            if (m[(i, j)] - m[(j, i)]).abs() > 1e-12 * scale {
                return Err(Error::NotSymmetric { row: i, col: j });
            }
        }
    }
    Ok(svec_unchecked(m))
}

/// [`svec`] without the symmetry check; reads the lower triangle only.
pub fn svec_unchecked(m: &Mat<f64>) -> Vec<f64> {
    let r = m.nrows();
    let mut out = Vec::with_capacity(svec_len(r));
    for j in 0..r {
        out.push(m[(j, j)]);
        for i in j + 1..r {
            out.push(m[(i, j)] * SQRT2);
        }
    }
    out
}

/// Inverse of [`svec`].
pub fn smat(v: &[f64], r: usize) -> Mat<f64> {
    assert_eq!(v.len(), svec_len(r), "svec length does not match side {r}");
    let mut m = Mat::zeros(r, r);
    let mut k = 0;
    for j in 0..r {
        m[(j, j)] = v[k];
        k += 1;
        for i in j + 1..r {
            let x = v[k] / SQRT2;
            m[(i, j)] = x;
            m[(j, i)] = x;
            k += 1;
        }
    }
    m
}

/// Side `r` with `r(r+1)/2 == len`, if any.
pub fn side_from_svec_len(len: usize) -> Option<usize> {
    let r = (((8 * len + 1) as f64).sqrt() as usize).saturating_sub(1) / 2;
    (r..=r + 1).find(|&r| svec_len(r) == len)
}
