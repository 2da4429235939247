use num_complex::Complex64 as C64;

use super::{ComplexMatrix, LinalgError, Result, HERMITIAN_TOL};

#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<C64>,
    /// Column eigenvectors, `vectors.column(k)` belongs to `values[k]`.
    pub vectors: ComplexMatrix,
}

const JACOBI_MAX_SWEEPS: usize = 100;
const QR_ITERATIONS_PER_EIGENVALUE: usize = 60;

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Eigenvalues are real (stored with zero imaginary part) and sorted
/// descending; eigenvectors are orthonormal.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    let n = m.dim();
    if n == 0 {
        return Err(LinalgError::InvalidInput("eigen-decomposition of a 0x0 matrix".into()));
    }
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_TOL * m.max_abs().max(1.0) {
        return Err(LinalgError::InvalidInput(format!("matrix is not Hermitian (defect {defect:e})")));
    }
    let mut a = m.hermitian_part();
    for i in 0..n {
        a[(i, i)].im = 0.0;
    }
    let mut v = ComplexMatrix::identity(n);
    let scale = a.norm_fro();
    let threshold = f64::EPSILON * 0.1 * scale;

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n).flat_map(|p| (p + 1..n).map(move |q| (p, q))).map(|(p, q)| a[(p, q)].norm_sqr()).sum();
        if off.sqrt() <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= threshold / n as f64 {
                    continue;
                }
                let phase_conj = apq.conj() / mag;
                let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * mag);
                let t = if tau >= 0.0 { 1.0 / (tau + (1.0 + tau * tau).sqrt()) } else { -1.0 / (-tau + (1.0 + tau * tau).sqrt()) };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // J = diag(1, e^{-iφ}) · [[c, s], [-s, c]] on the (p, q) plane.
                let j_pp = C64::new(c, 0.0);
                let j_pq = C64::new(s, 0.0);
                let j_qp = phase_conj * (-s);
                let j_qq = phase_conj * c;
                rotate_columns(&mut a, p, q, j_pp, j_pq, j_qp, j_qq);
                rotate_rows_adjoint(&mut a, p, q, j_pp, j_pq, j_qp, j_qq);
                rotate_columns(&mut v, p, q, j_pp, j_pq, j_qp, j_qq);
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
            }
        }
    }
    if !converged {
        return Err(LinalgError::NoConvergence { routine: "Jacobi eigensolver", iterations: JACOBI_MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&k| C64::new(a[(k, k)].re, 0.0)).collect();
    let vectors = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok(EigenDecomposition { values, vectors })
}

/// X ← X·J on columns p, q.
fn rotate_columns(x: &mut ComplexMatrix, p: usize, q: usize, j_pp: C64, j_pq: C64, j_qp: C64, j_qq: C64) {
    for k in 0..x.dim() {
        let (xp, xq) = (x[(k, p)], x[(k, q)]);
        x[(k, p)] = xp * j_pp + xq * j_qp;
        x[(k, q)] = xp * j_pq + xq * j_qq;
    }
}

/// X ← J†·X on rows p, q.
fn rotate_rows_adjoint(x: &mut ComplexMatrix, p: usize, q: usize, j_pp: C64, j_pq: C64, j_qp: C64, j_qq: C64) {
    for k in 0..x.dim() {
        let (xp, xq) = (x[(p, k)], x[(q, k)]);
        x[(p, k)] = j_pp.conj() * xp + j_qp.conj() * xq;
        x[(q, k)] = j_pq.conj() * xp + j_qq.conj() * xq;
    }
}

/// Eigenvalues and right eigenvectors of a general complex matrix.
///
/// Householder reduction to Hessenberg form followed by shifted QR sweeps
/// to a complex Schur form A = Z T Z†; eigenvectors come from
/// back-substitution on T. The order of eigenvalues is unspecified.
pub fn eig_general(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    let n = m.dim();
    if n == 0 {
        return Err(LinalgError::InvalidInput("eigen-decomposition of a 0x0 matrix".into()));
    }
    let (t, z) = schur(m)?;
    let values = t.diagonal();
    let norm = m.norm_fro().max(f64::MIN_POSITIVE);
    let small = f64::EPSILON * norm;

    let mut vectors = ComplexMatrix::zeros(n);
    for k in 0..n {
        let lambda = t[(k, k)];
        let mut y = vec![C64::new(0.0, 0.0); n];
        y[k] = C64::new(1.0, 0.0);
        for j in (0..k).rev() {
            let s: C64 = (j + 1..=k).map(|l| t[(j, l)] * y[l]).sum();
            let mut denom = t[(j, j)] - lambda;
            if denom.norm() < small {
                denom = C64::new(small, 0.0);
            }
            y[j] = -s / denom;
            // Rescale to keep the back-substitution finite for clustered eigenvalues.
            let big = y.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if big > 1e100 {
                y.iter_mut().for_each(|z| *z /= big);
            }
        }
        let mut v = z.mul_vec(&y);
        let nv = super::vec_norm(&v);
        v.iter_mut().for_each(|x| *x /= nv);
        vectors.set_column(k, &v);
    }
    Ok(EigenDecomposition { values, vectors })
}

/// Complex Schur decomposition: returns (T, Z) with A = Z T Z†, T upper triangular.
pub(crate) fn schur(m: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = m.dim();
    let (mut h, mut z) = hessenberg(m);
    if n == 1 {
        return Ok((h, z));
    }
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    let max_total = QR_ITERATIONS_PER_EIGENVALUE * n;
    // Absolute floor so that clusters of zero eigenvalues still deflate.
    let floor = f64::EPSILON * h.norm_fro();
    while hi > 0 {
        // Find the start of the unreduced block ending at `hi`.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let diag = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            if sub <= f64::EPSILON * diag || sub <= floor {
                h[(lo, lo - 1)] = C64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > max_total {
            return Err(LinalgError::NoConvergence { routine: "Hessenberg QR", iterations: total });
        }

        let shift = if iter % 11 == 0 {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + C64::new(h[(hi, hi - 1)].norm() + h[(hi - 1, hi - 1)].norm() * 0.5, 0.0)
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };

        for k in lo..=hi {
            h[(k, k)] -= shift;
        }
        let mut rotations = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..n {
                let (x, y) = (h[(k, j)], h[(k + 1, j)]);
                h[(k, j)] = x * c + s * y;
                h[(k + 1, j)] = -s.conj() * x + y * c;
            }
            h[(k + 1, k)] = C64::new(0.0, 0.0);
            rotations.push((c, s));
        }
        for (offset, &(c, s)) in rotations.iter().enumerate() {
            let k = lo + offset;
            let last = (k + 1).min(hi);
            for i in 0..=last {
                let (x, y) = (h[(i, k)], h[(i, k + 1)]);
                h[(i, k)] = x * c + y * s.conj();
                h[(i, k + 1)] = -x * s + y * c;
            }
            for i in 0..n {
                let (x, y) = (z[(i, k)], z[(i, k + 1)]);
                z[(i, k)] = x * c + y * s.conj();
                z[(i, k + 1)] = -x * s + y * c;
            }
        }
        for k in lo..=hi {
            h[(k, k)] += shift;
        }
    }
    for i in 0..n {
        for j in 0..i {
            h[(i, j)] = C64::new(0.0, 0.0);
        }
    }
    Ok((h, z))
}

/// Rotation [[c, s], [-s̄, c]] (c real) mapping (a, b) to (r, 0).
fn givens(a: C64, b: C64) -> (f64, C64) {
    let (na, nb) = (a.norm(), b.norm());
    if nb == 0.0 {
        return (1.0, C64::new(0.0, 0.0));
    }
    if na == 0.0 {
        return (0.0, b.conj() / nb);
    }
    let rho = na.hypot(nb);
    let c = na / rho;
    let s = (a / na) * b.conj() / rho;
    (c, s)
}

/// Eigenvalue of [[a, b], [c, d]] closest to d.
fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let tr_half = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (tr_half * tr_half - det).sqrt();
    let (l1, l2) = (tr_half + disc, tr_half - disc);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Householder reduction to upper Hessenberg form: returns (H, Q) with A = Q H Q†.
fn hessenberg(m: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = m.dim();
    let mut h = m.clone();
    let mut q = ComplexMatrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        let x: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = super::vec_norm(&x);
        if xnorm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 { C64::new(1.0, 0.0) } else { x[0] / x[0].norm() };
        let alpha = -phase * xnorm;
        let mut v = x.clone();
        v[0] -= alpha;
        let vnorm = super::vec_norm(&v);
        if vnorm == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|z| *z /= vnorm);
        // H ← (I - 2vv†) H (I - 2vv†) restricted to indices k+1..n.
        for j in 0..n {
            let dot: C64 = (k + 1..n).map(|i| v[i - k - 1].conj() * h[(i, j)]).sum();
            for i in k + 1..n {
                h[(i, j)] -= v[i - k - 1] * dot * 2.0;
            }
        }
        for mat in [&mut h, &mut q] {
            for i in 0..n {
                let dot: C64 = (k + 1..n).map(|j| mat[(i, j)] * v[j - k - 1]).sum();
                for j in k + 1..n {
                    mat[(i, j)] -= dot * v[j - k - 1].conj() * 2.0;
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = C64::new(0.0, 0.0);
        }
    }
    (h, q)
}
