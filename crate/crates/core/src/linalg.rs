//! Dense complex linear algebra for small matrices.
//!
//! Everything in this crate operates on matrices of dimension at most a few
//! dozen, so the kernels here favour robustness and determinism over speed:
//! one-sided Jacobi for singular values and nullspaces, partial-pivot
//! Gaussian elimination for solves, and norm-pivoted modified Gram-Schmidt
//! for orthonormal bases.  All pivot choices break ties by lowest index, so
//! repeated runs produce bit-identical output.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = Array2<Complex64>;
pub type CVec = Array1<Complex64>;

pub fn eye(n: usize) -> CMat {
    let mut m = CMat::zeros((n, n));
    for i in 0..n {
        m[[i, i]] = C64::new(1.0, 0.0);
    }
    m
}

pub fn conj(a: &CMat) -> CMat {
    a.mapv(|z| z.conj())
}

/// Conjugate transpose.
pub fn dagger(a: &CMat) -> CMat {
    conj(a).reversed_axes().as_standard_layout().to_owned()
}

pub fn transpose(a: &CMat) -> CMat {
    a.t().as_standard_layout().to_owned()
}

pub fn max_abs(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `max |a - b|`, the residual used by every tolerance check.
pub fn residual(a: &CMat, b: &CMat) -> f64 {
    debug_assert_eq!(a.dim(), b.dim());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn scale(a: &CMat, s: C64) -> CMat {
    a.mapv(|z| z * s)
}

/// One-sided Jacobi: returns `(w, v)` with `a * v = w`, `v` unitary and the
/// columns of `w` pairwise orthogonal.  Column `j` of `w` is `sigma_j * u_j`.
fn one_sided_jacobi(a: &CMat) -> (CMat, CMat) {
    let (_, n) = a.dim();
    let mut w = a.clone();
    let mut v = eye(n);
    if n < 2 {
        return (w, v);
    }
    const TOL: f64 = 1e-14;
    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = C64::new(0.0, 0.0);
                for i in 0..w.nrows() {
                    let wp = w[[i, p]];
                    let wq = w[[i, q]];
                    alpha += wp.norm_sqr();
                    beta += wq.norm_sqr();
                    gamma += wp.conj() * wq;
                }
                let scale = (alpha * beta).sqrt();
                if scale == 0.0 || gamma.norm() <= TOL * scale {
                    continue;
                }
                rotated = true;
                // Eigenvectors of the hermitian 2x2 gram block
                // [[alpha, gamma], [conj(gamma), beta]].
                let half = 0.5 * (alpha - beta);
                let disc = (half * half + gamma.norm_sqr()).sqrt();
                let lam = 0.5 * (alpha + beta) + disc;
                // Pick the better-conditioned eigenvector formula.
                let cand1 = (gamma, C64::new(lam - alpha, 0.0));
                let cand2 = (C64::new(lam - beta, 0.0), gamma.conj());
                let n1 = cand1.0.norm_sqr() + cand1.1.norm_sqr();
                let n2 = cand2.0.norm_sqr() + cand2.1.norm_sqr();
                let (e0, e1) = if n1 >= n2 { cand1 } else { cand2 };
                let norm = (e0.norm_sqr() + e1.norm_sqr()).sqrt();
                let (r00, r10) = (e0 / norm, e1 / norm);
                // Orthogonal complement column.
                let (r01, r11) = (-r10.conj(), r00.conj());
                for i in 0..w.nrows() {
                    let wp = w[[i, p]];
                    let wq = w[[i, q]];
                    w[[i, p]] = wp * r00 + wq * r10;
                    w[[i, q]] = wp * r01 + wq * r11;
                }
                for i in 0..n {
                    let vp = v[[i, p]];
                    let vq = v[[i, q]];
                    v[[i, p]] = vp * r00 + vq * r10;
                    v[[i, q]] = vp * r01 + vq * r11;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    (w, v)
}

/// Singular values in descending order.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    svd_right(a).0
}

/// Singular values (descending) together with the matching right singular
/// vectors as columns of a unitary matrix.
pub fn svd_right(a: &CMat) -> (Vec<f64>, CMat) {
    let (w, v) = one_sided_jacobi(a);
    let n = a.ncols();
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n)
        .map(|j| w.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap().then(i.cmp(&j)));
    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let mut vs = CMat::zeros((n, n));
    for (k, &j) in order.iter().enumerate() {
        for i in 0..n {
            vs[[i, k]] = v[[i, j]];
        }
    }
    (sigma, vs)
}

/// Rank at a relative singular-value threshold.
pub fn rank(a: &CMat, rel_tol: f64) -> usize {
    let sigma = singular_values(a);
    match sigma.first() {
        None | Some(&0.0) => 0,
        Some(&s0) => sigma.iter().filter(|&&s| s > rel_tol * s0).count(),
    }
}

/// Ratio of smallest to largest singular value; 0 for an empty or zero
/// matrix, infinity-free by construction.  A 0x0 matrix is vacuously
/// nondegenerate and reports 1.
pub fn min_max_singular_ratio(a: &CMat) -> f64 {
    if a.ncols() == 0 || a.nrows() == 0 {
        return 1.0;
    }
    let sigma = singular_values(a);
    let s0 = sigma[0];
    if s0 == 0.0 {
        return 0.0;
    }
    sigma.last().unwrap() / s0
}

/// Orthonormal basis of the kernel of `a` at a relative threshold.
pub fn nullspace(a: &CMat, rel_tol: f64) -> CMat {
    let n = a.ncols();
    let (sigma, v) = svd_right(a);
    let s0 = sigma.first().copied().unwrap_or(0.0);
    let rank = if s0 == 0.0 {
        0
    } else {
        sigma.iter().filter(|&&s| s > rel_tol * s0).count()
    };
    let k = n - rank;
    let mut basis = CMat::zeros((n, k));
    for j in 0..k {
        for i in 0..n {
            basis[[i, j]] = v[[i, rank + j]];
        }
    }
    basis
}

/// Solve `a x = b` for square `a` by Gaussian elimination with partial
/// pivoting.
pub fn solve(a: &CMat, b: &CMat) -> Result<CMat> {
    let n = a.nrows();
    if a.ncols() != n || b.nrows() != n {
        return Err(Error::Numeric(format!(
            "solve: shape mismatch {:?} vs {:?}",
            a.dim(),
            b.dim()
        )));
    }
    let m = b.ncols();
    if n == 0 {
        return Ok(CMat::zeros((0, m)));
    }
    let mut lhs = a.clone();
    let mut rhs = b.clone();
    let amax = max_abs(a).max(1e-300);
    for col in 0..n {
        let mut piv = col;
        let mut piv_norm = lhs[[col, col]].norm();
        for r in (col + 1)..n {
            let nd = lhs[[r, col]].norm();
            if nd > piv_norm {
                piv = r;
                piv_norm = nd;
            }
        }
        if piv_norm < 1e-14 * amax {
            return Err(Error::Numeric(format!(
                "solve: singular system (pivot {piv_norm:.3e} at column {col})"
            )));
        }
        if piv != col {
            for j in 0..n {
                lhs.swap([col, j], [piv, j]);
            }
            for j in 0..m {
                rhs.swap([col, j], [piv, j]);
            }
        }
        let d = lhs[[col, col]];
        for r in (col + 1)..n {
            let f = lhs[[r, col]] / d;
            if f.norm() == 0.0 {
                continue;
            }
            for j in col..n {
                let v = lhs[[col, j]];
                lhs[[r, j]] -= f * v;
            }
            for j in 0..m {
                let v = rhs[[col, j]];
                rhs[[r, j]] -= f * v;
            }
        }
    }
    let mut x = CMat::zeros((n, m));
    for j in 0..m {
        for r in (0..n).rev() {
            let mut acc = rhs[[r, j]];
            for k in (r + 1)..n {
                acc -= lhs[[r, k]] * x[[k, j]];
            }
            x[[r, j]] = acc / lhs[[r, r]];
        }
    }
    Ok(x)
}

pub fn inverse(a: &CMat) -> Result<CMat> {
    solve(a, &eye(a.nrows()))
}

/// Norm-pivoted modified Gram-Schmidt: an orthonormal basis for the span of
/// the first `rank` pivot columns of `a`.  At each step the remaining column
/// of strictly largest norm is selected (first index wins ties), so the
/// output is deterministic.
pub fn orthonormalize_pivoted(a: &CMat, rank: usize) -> CMat {
    let (m, n) = a.dim();
    let mut cols: Vec<CVec> = (0..n).map(|j| a.column(j).to_owned()).collect();
    let mut alive: Vec<bool> = vec![true; n];
    let mut out = CMat::zeros((m, rank));
    for step in 0..rank {
        let mut best = None;
        let mut best_norm = 0.0;
        for (j, c) in cols.iter().enumerate() {
            if !alive[j] {
                continue;
            }
            let nrm: f64 = c.iter().map(|z| z.norm_sqr()).sum();
            if nrm > best_norm {
                best_norm = nrm;
                best = Some(j);
            }
        }
        let j = best.expect("orthonormalize_pivoted: rank exceeds column span");
        alive[j] = false;
        let q = cols[j].mapv(|z| z / C64::new(best_norm.sqrt(), 0.0));
        for (k, c) in cols.iter_mut().enumerate() {
            if !alive[k] {
                continue;
            }
            let proj: C64 = q.iter().zip(c.iter()).map(|(x, y)| x.conj() * y).sum();
            for (ci, qi) in c.iter_mut().zip(q.iter()) {
                *ci -= proj * qi;
            }
        }
        for i in 0..m {
            out[[i, step]] = q[i];
        }
    }
    out
}

/// `v^T m w` — the bilinear (not sesquilinear) pairing used for the
/// alternating forms in this crate.
pub fn bilinear(v: &CVec, m: &CMat, w: &CVec) -> C64 {
    let mw = m.dot(w);
    v.iter().zip(mw.iter()).map(|(a, b)| a * b).sum()
}

/// Apply an antilinear operator stored as a matrix: `star(v) = m * conj(v)`.
pub fn antilinear_apply(m: &CMat, v: &CVec) -> CVec {
    m.dot(&v.mapv(|z| z.conj()))
}
