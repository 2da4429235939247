use num_complex::Complex64 as C64;

use super::{vec_norm, ComplexMatrix, LinalgError, Result};

const SVD_MAX_SWEEPS: usize = 80;

/// LU factorization with partial pivoting, packed in one matrix.
struct Lu {
    lu: ComplexMatrix,
    perm: Vec<usize>,
}

fn lu(m: &ComplexMatrix) -> Result<Lu> {
    let n = m.dim();
    let mut a = m.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let scale = m.max_abs();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[(i, k)].norm().total_cmp(&a[(j, k)].norm())).unwrap();
        if a[(p, k)].norm() <= f64::EPSILON * scale * n as f64 {
            return Err(LinalgError::Singular);
        }
        if p != k {
            for j in 0..n {
                let tmp = a[(k, j)];
                a[(k, j)] = a[(p, j)];
                a[(p, j)] = tmp;
            }
            perm.swap(k, p);
        }
        let pivot = a[(k, k)];
        for i in k + 1..n {
            let f = a[(i, k)] / pivot;
            a[(i, k)] = f;
            for j in k + 1..n {
                let akj = a[(k, j)];
                a[(i, j)] -= f * akj;
            }
        }
    }
    Ok(Lu { lu: a, perm })
}

impl Lu {
    fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.lu.dim();
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= l * xj;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= u * xj;
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }
}

/// Solves m x = b.
pub fn solve(m: &ComplexMatrix, b: &[C64]) -> Result<Vec<C64>> {
    if b.len() != m.dim() {
        return Err(LinalgError::InvalidInput("right-hand side length does not match matrix".into()));
    }
    Ok(lu(m)?.solve(b))
}

pub fn inverse(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = m.dim();
    let f = lu(m)?;
    let mut inv = ComplexMatrix::zeros(n);
    for j in 0..n {
        let mut e = vec![C64::new(0.0, 0.0); n];
        e[j] = C64::new(1.0, 0.0);
        inv.set_column(j, &f.solve(&e));
    }
    Ok(inv)
}

/// Thin singular value decomposition m = U Σ V†.
#[derive(Debug, Clone)]
pub struct Svd {
    /// Singular values, descending.
    pub values: Vec<f64>,
    /// Left singular vectors as columns; columns for zero singular values are zero.
    pub u: ComplexMatrix,
    pub v: ComplexMatrix,
}

/// One-sided Jacobi SVD. Singular values carry absolute error of order
/// eps·‖m‖, which is what null-space detection needs.
pub fn svd(m: &ComplexMatrix) -> Result<Svd> {
    let n = m.dim();
    if n == 0 {
        return Err(LinalgError::InvalidInput("SVD of a 0x0 matrix".into()));
    }
    // Work on columns: cols[j] is column j of A·V.
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| m.column(j)).collect();
    let mut vcols: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            let mut e = vec![C64::new(0.0, 0.0); n];
            e[j] = C64::new(1.0, 0.0);
            e
        })
        .collect();

    // Inner products below this are round-off between numerically null columns.
    let floor = f64::EPSILON * f64::EPSILON * m.norm_fro().powi(2);
    let mut converged = false;
    for _ in 0..SVD_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = cols[p].iter().zip(&cols[q]).map(|(a, b)| a.conj() * b).sum();
                let g = gamma.norm();
                if g <= floor || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 { 1.0 / (zeta + (1.0 + zeta * zeta).sqrt()) } else { -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt()) };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                // Real rotation on (a_p, e^{-iφ} a_q), mapped back to a_q's phase.
                for target in [&mut cols, &mut vcols] {
                    let (left, right) = target.split_at_mut(q);
                    let (cp, cq) = (&mut left[p], &mut right[0]);
                    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                        let yp = *y * phase.conj();
                        let new_x = *x * c - yp * s;
                        let new_y = (*x * s + yp * c) * phase;
                        *x = new_x;
                        *y = new_y;
                    }
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(LinalgError::NoConvergence { routine: "Jacobi SVD", iterations: SVD_MAX_SWEEPS });
    }

    let mut sigma: Vec<(f64, usize)> = cols.iter().enumerate().map(|(j, c)| (vec_norm(c), j)).collect();
    sigma.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut u = ComplexMatrix::zeros(n);
    let mut v = ComplexMatrix::zeros(n);
    for (k, &(s, j)) in sigma.iter().enumerate() {
        v.set_column(k, &vcols[j]);
        if s > 0.0 {
            let uc: Vec<C64> = cols[j].iter().map(|z| z / s).collect();
            u.set_column(k, &uc);
        }
    }
    Ok(Svd { values: sigma.iter().map(|s| s.0).collect(), u, v })
}

pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(svd(m)?.values)
}

/// Orthonormal basis of {v : ‖m v‖ ≤ tol·‖m‖₂}.
pub fn null_space(m: &ComplexMatrix, tol: f64) -> Result<Vec<Vec<C64>>> {
    if !(tol > 0.0) {
        return Err(LinalgError::InvalidInput(format!("null-space tolerance must be positive, got {tol}")));
    }
    let s = svd(m)?;
    let norm = s.values[0];
    Ok(s.values.iter().enumerate().filter(|(_, &sv)| sv <= tol * norm).map(|(k, _)| s.v.column(k)).collect())
}
