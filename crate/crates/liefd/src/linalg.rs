//! Tridiagonal and cyclic-tridiagonal direct solvers for the implicit
//! time-stepping.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum LinalgError {
    #[error("zero pivot encountered during tridiagonal elimination")]
    ZeroPivot,
    #[error("cyclic systems need at least 3 unknowns, got {0}")]
    TooSmall(usize),
}

/// Solves a constant-coefficient tridiagonal system with `lower`, `diag`,
/// `upper` on every row (Thomas algorithm).
pub fn solve_tridiagonal_const(
    lower: f64,
    diag: f64,
    upper: f64,
    rhs: &[f64],
) -> Result<Vec<f64>, LinalgError> {
    let n = rhs.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut pivot = diag;
    if pivot == 0.0 {
        return Err(LinalgError::ZeroPivot);
    }
    d[0] = rhs[0] / pivot;
    for i in 1..n {
        c[i] = upper / pivot;
        pivot = diag - lower * c[i];
        if pivot == 0.0 {
            return Err(LinalgError::ZeroPivot);
        }
        d[i] = (rhs[i] - lower * d[i - 1]) / pivot;
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        let next = x[i + 1];
        x[i] -= c[i + 1] * next;
    }
    Ok(x)
}

/// Solves the periodic variant (corner entries `lower` at (0, n-1) and
/// `upper` at (n-1, 0)) by the Sherman–Morrison correction.
pub fn solve_cyclic_const(
    lower: f64,
    diag: f64,
    upper: f64,
    rhs: &[f64],
) -> Result<Vec<f64>, LinalgError> {
    let n = rhs.len();
    if n < 3 {
        return Err(LinalgError::TooSmall(n));
    }
    // Wrap-around corners of the periodic stencil: `lower` couples row 0 to
    // x[n-1] (top-right), `upper` couples row n-1 to x[0] (bottom-left).
    // A = B + p q^T with p = (gamma, 0, .., bl), q = (1, 0, .., tr/gamma).
    let tr = lower;
    let bl = upper;
    let gamma = -diag;
    let d_first = diag - gamma;
    let d_last = diag - tr * bl / gamma;

    let solve_mod = |b: &[f64]| -> Result<Vec<f64>, LinalgError> {
        // Same as solve_tridiagonal_const but with modified first/last diagonal.
        let m = b.len();
        let mut c = vec![0.0; m];
        let mut d = vec![0.0; m];
        let diag_at = |i: usize| {
            if i == 0 {
                d_first
            } else if i == m - 1 {
                d_last
            } else {
                diag
            }
        };
        let mut pivot = diag_at(0);
        if pivot == 0.0 {
            return Err(LinalgError::ZeroPivot);
        }
        d[0] = b[0] / pivot;
        for i in 1..m {
            c[i] = upper / pivot;
            pivot = diag_at(i) - lower * c[i];
            if pivot == 0.0 {
                return Err(LinalgError::ZeroPivot);
            }
            d[i] = (b[i] - lower * d[i - 1]) / pivot;
        }
        let mut x = d;
        for i in (0..m - 1).rev() {
            let next = x[i + 1];
            x[i] -= c[i + 1] * next;
        }
        Ok(x)
    };

    let mut x = solve_mod(rhs)?;
    let mut p = vec![0.0; n];
    p[0] = gamma;
    p[n - 1] = bl;
    let z = solve_mod(&p)?;
    let denom = 1.0 + z[0] + (tr / gamma) * z[n - 1];
    if denom == 0.0 {
        return Err(LinalgError::ZeroPivot);
    }
    let factor = (x[0] + (tr / gamma) * x[n - 1]) / denom;
    for i in 0..n {
        x[i] -= factor * z[i];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apply_tridiag(lower: f64, diag: f64, upper: f64, x: &[f64], cyclic: bool) -> Vec<f64> {
        let n = x.len();
        (0..n)
            .map(|i| {
                let mut v = diag * x[i];
                if i > 0 {
                    v += lower * x[i - 1];
                } else if cyclic {
                    v += lower * x[n - 1];
                }
                if i + 1 < n {
                    v += upper * x[i + 1];
                } else if cyclic {
                    v += upper * x[0];
                }
                v
            })
            .collect()
    }

    #[test]
    fn tridiagonal_recovers_known_solution() {
        let x_exact = vec![1.0, -2.0, 3.0, 0.5, 4.0];
        let rhs = apply_tridiag(-1.0, 2.5, -0.5, &x_exact, false);
        let x = solve_tridiagonal_const(-1.0, 2.5, -0.5, &rhs).unwrap();
        for (a, b) in x.iter().zip(&x_exact) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn cyclic_recovers_known_solution() {
        let x_exact = vec![1.0, 2.0, -3.0, 4.0, 0.25, -1.5];
        let rhs = apply_tridiag(-0.3, 1.8, -0.4, &x_exact, true);
        let x = solve_cyclic_const(-0.3, 1.8, -0.4, &rhs).unwrap();
        for (a, b) in x.iter().zip(&x_exact) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn cyclic_rejects_tiny_systems() {
        assert_eq!(
            solve_cyclic_const(1.0, 2.0, 1.0, &[1.0, 2.0]),
            Err(LinalgError::TooSmall(2))
        );
    }
}
