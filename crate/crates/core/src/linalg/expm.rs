use super::{ComplexMatrix, LinalgError, Result};

/// Norm threshold below which the Taylor series is summed directly.
const SCALED_NORM: f64 = 0.5;
const MAX_TERMS: usize = 40;

/// Matrix exponential by scaling and squaring.
///
/// The argument is halved until its 1-norm is at most 0.5, the Taylor series
/// is summed until the next term no longer changes the sum at double
/// precision, and the result is squared back up. Works for non-normal and
/// defective matrices alike.
pub fn expm(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = m.dim();
    if n == 0 {
        return Err(LinalgError::InvalidInput("expm of a 0x0 matrix".into()));
    }
    let norm = m.norm_one();
    if !norm.is_finite() {
        return Err(LinalgError::InvalidInput("expm of a matrix with non-finite entries".into()));
    }
    let squarings = if norm > SCALED_NORM { (norm / SCALED_NORM).log2().ceil() as i32 } else { 0 };
    let scaled = m.scale_real(0.5_f64.powi(squarings));

    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=MAX_TERMS {
        term = (&term * &scaled).scale_real(1.0 / k as f64);
        sum += &term;
        if term.norm_one() <= f64::EPSILON * sum.norm_one() * 0.1 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}
