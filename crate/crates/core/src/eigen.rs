//! Dense eigensolver for small general complex matrices.
//!
//! The matrix is reduced to Hessenberg form and then to complex Schur form
//! `H = Z T Z*` by single-shift QR sweeps (Wilkinson shifts, with an
//! exceptional shift every ten stalled sweeps). Right eigenvectors come from
//! back-substitution on the triangular factor mapped back through `Z`; any
//! vector whose residual misses the contract gets a few steps of inverse
//! iteration.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// QR sweeps allowed per eigenvalue before giving up.
const SWEEPS_PER_EIGENVALUE: usize = 60;

/// Residual bound used throughout: ‖Hv − λv‖₂ ≤ RESIDUAL_TOL·‖H‖_F.
pub const RESIDUAL_TOL: f64 = 1e-9;

pub(crate) fn frobenius(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn residual(m: &DMatrix<C64>, value: C64, vector: &DVector<C64>) -> f64 {
    (m * vector - vector * value).norm()
}

/// Unitary rotation `[[c, s], [-s̄, c]]` with real `c`, chosen so that it maps
/// `(a, b)` to `(r, 0)`.
#[derive(Clone, Copy)]
struct Givens {
    c: f64,
    s: C64,
}

impl Givens {
    fn zeroing(a: C64, b: C64) -> Self {
        let abs_a = a.norm();
        let r = abs_a.hypot(b.norm());
        if r == 0.0 {
            return Givens {
                c: 1.0,
                s: C64::new(0.0, 0.0),
            };
        }
        if abs_a == 0.0 {
            return Givens {
                c: 0.0,
                s: C64::new(1.0, 0.0),
            };
        }
        Givens {
            c: abs_a / r,
            s: (a / abs_a) * b.conj() / r,
        }
    }

    /// Rows `k`, `k+1` of `m` over columns `cols`, multiplied from the left.
    fn rotate_rows(&self, m: &mut DMatrix<C64>, k: usize, cols: std::ops::Range<usize>) {
        for j in cols {
            let (x, y) = (m[(k, j)], m[(k + 1, j)]);
            m[(k, j)] = x * self.c + self.s * y;
            m[(k + 1, j)] = -self.s.conj() * x + y * self.c;
        }
    }

    /// Columns `k`, `k+1` of `m` over rows `rows`, multiplied by the adjoint
    /// from the right.
    fn rotate_cols(&self, m: &mut DMatrix<C64>, k: usize, rows: std::ops::Range<usize>) {
        for i in rows {
            let (x, y) = (m[(i, k)], m[(i, k + 1)]);
            m[(i, k)] = x * self.c + y * self.s.conj();
            m[(i, k + 1)] = -x * self.s + y * self.c;
        }
    }
}

/// Eigenvalue of the 2x2 block `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let p = (a - d) * 0.5;
    let bc = b * c;
    let disc = (p * p + bc).sqrt();
    let (plus, minus) = (p + disc, p - disc);
    let denom = if plus.norm() >= minus.norm() { plus } else { minus };
    if denom.norm() == 0.0 {
        d
    } else {
        d - bc / denom
    }
}

/// Complex Schur factorisation `m = Z T Z*`, or `None` when the sweeps run out.
pub fn complex_schur(m: &DMatrix<C64>) -> Option<(DMatrix<C64>, DMatrix<C64>)> {
    let n = m.nrows();
    let (mut z, mut t) = nalgebra::linalg::Hessenberg::new(m.clone()).unpack();
    for j in 0..n {
        for i in j + 2..n {
            t[(i, j)] = C64::new(0.0, 0.0);
        }
    }
    if n < 2 {
        return Some((z, t));
    }
    let ulp = f64::EPSILON;
    let tiny = f64::MIN_POSITIVE * n as f64 / ulp;
    let budget = SWEEPS_PER_EIGENVALUE * n;
    let mut total = 0;
    let mut stalled = 0;
    let mut hi = n - 1;
    while hi > 0 {
        // deflate from the bottom of the active window
        let mut lo = hi;
        while lo > 0 {
            let sub = t[(lo, lo - 1)].norm();
            let mut local = t[(lo, lo)].norm() + t[(lo - 1, lo - 1)].norm();
            if local == 0.0 {
                local = (lo - 1..=hi).map(|k| t[(k, k)].norm()).sum::<f64>();
            }
            if sub <= (ulp * local).max(tiny) {
                t[(lo, lo - 1)] = C64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            stalled = 0;
            continue;
        }

        total += 1;
        stalled += 1;
        if total > budget {
            return None;
        }
        let shift = if stalled % 10 == 0 {
            t[(hi, hi)] + t[(hi, hi - 1)].norm() * 0.75
        } else {
            wilkinson_shift(t[(hi - 1, hi - 1)], t[(hi - 1, hi)], t[(hi, hi - 1)], t[(hi, hi)])
        };

        for k in lo..=hi {
            t[(k, k)] -= shift;
        }
        let mut rotations = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let g = Givens::zeroing(t[(k, k)], t[(k + 1, k)]);
            g.rotate_rows(&mut t, k, k..n);
            t[(k + 1, k)] = C64::new(0.0, 0.0);
            rotations.push(g);
        }
        for (offset, g) in rotations.iter().enumerate() {
            let k = lo + offset;
            g.rotate_cols(&mut t, k, 0..(k + 2).min(hi + 1));
            g.rotate_cols(&mut z, k, 0..n);
        }
        for k in lo..=hi {
            t[(k, k)] += shift;
        }
    }
    Some((z, t))
}

/// Eigenpairs of `m` in Schur order, eigenvectors with unit 2-norm.
pub fn eigenpairs(m: &DMatrix<C64>) -> Result<Vec<(C64, DVector<C64>)>> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "eigenpairs of a non-square matrix");
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonConvergence { matrix: m.clone() });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let scale = frobenius(m);
    if scale == 0.0 {
        return Ok((0..n)
            .map(|k| (C64::new(0.0, 0.0), DVector::from_fn(n, |i, _| unit(i == k))))
            .collect());
    }

    let (q, t) = complex_schur(m).ok_or_else(|| Error::NonConvergence { matrix: m.clone() })?;

    let small = f64::EPSILON * scale;
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let lambda = t[(k, k)];
        let mut y = DVector::<C64>::zeros(n);
        y[k] = unit(true);
        for j in (0..k).rev() {
            let mut acc = C64::new(0.0, 0.0);
            for l in j + 1..=k {
                acc += t[(j, l)] * y[l];
            }
            let mut denom = t[(j, j)] - lambda;
            if denom.norm() < small {
                denom = C64::new(small, 0.0);
            }
            y[j] = -acc / denom;
            // keep the partial solution bounded
            let big = y.camax();
            if big > 1e150 {
                y /= C64::new(big, 0.0);
            }
        }
        let mut v = &q * y;
        let norm = v.norm();
        v /= C64::new(norm, 0.0);
        if residual(m, lambda, &v) > 0.1 * RESIDUAL_TOL * scale {
            v = refine(m, lambda, v, scale);
        }
        out.push((lambda, v));
    }
    Ok(out)
}

fn unit(on: bool) -> C64 {
    if on {
        C64::new(1.0, 0.0)
    } else {
        C64::new(0.0, 0.0)
    }
}

/// Inverse iteration with a slightly perturbed shift.
fn refine(m: &DMatrix<C64>, lambda: C64, start: DVector<C64>, scale: f64) -> DVector<C64> {
    let n = m.nrows();
    let shift = lambda + C64::new(1e-10 * scale, 1e-10 * scale);
    let shifted = m - DMatrix::<C64>::identity(n, n) * shift;
    let lu = shifted.lu();
    let mut best = start.clone();
    let mut best_res = residual(m, lambda, &start);
    let mut v = start;
    for _ in 0..3 {
        match lu.solve(&v) {
            Some(x) if x.iter().all(|z| z.re.is_finite() && z.im.is_finite()) => {
                let norm = x.norm();
                if norm == 0.0 {
                    break;
                }
                v = x / C64::new(norm, 0.0);
                let res = residual(m, lambda, &v);
                if res < best_res {
                    best_res = res;
                    best = v.clone();
                }
            }
            _ => break,
        }
    }
    best
}
