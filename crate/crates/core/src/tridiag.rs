//! Thomas algorithm for tridiagonal systems, plus the cyclic variant used
//! on periodic meshes.
//!
//! Row `i` reads `lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]`.
//! In the plain solver `lower[0]` and `upper[n-1]` are ignored; in the
//! cyclic solver they couple to `x[n-1]` and `x[0]`.

use crate::error::{Result, SimError};
use crate::scalar::Real;

const PIVOT_MIN: f64 = 1e-300;

fn check_lengths<T>(lower: &[T], diag: &[T], upper: &[T], rhs: &[T]) -> Result<usize> {
    let n = diag.len();
    if lower.len() != n || upper.len() != n || rhs.len() != n {
        return Err(SimError::Precondition(
            "tridiagonal bands of inconsistent length".into(),
        ));
    }
    Ok(n)
}

pub fn tridiagonal_solve<T: Real>(lower: &[T], diag: &[T], upper: &[T], rhs: &[T]) -> Result<Vec<T>> {
    let n = check_lengths(lower, diag, upper, rhs)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let tiny = T::from_f64(PIVOT_MIN).unwrap_or_else(T::min_positive_value);
    let mut c = vec![T::zero(); n];
    let mut x = vec![T::zero(); n];
    let mut pivot = diag[0];
    if pivot.abs() < tiny || !pivot.is_finite() {
        return Err(SimError::SingularMatrix {
            row: 0,
            pivot: pivot.as_f64(),
        });
    }
    c[0] = upper[0] / pivot;
    x[0] = rhs[0] / pivot;
    for i in 1..n {
        pivot = diag[i] - lower[i] * c[i - 1];
        if pivot.abs() < tiny || !pivot.is_finite() {
            return Err(SimError::SingularMatrix {
                row: i,
                pivot: pivot.as_f64(),
            });
        }
        c[i] = upper[i] / pivot;
        x[i] = (rhs[i] - lower[i] * x[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        let next = x[i + 1];
        x[i] -= c[i] * next;
    }
    Ok(x)
}

/// Periodic tridiagonal system via Sherman-Morrison on top of the Thomas solve.
pub fn cyclic_tridiagonal_solve<T: Real>(lower: &[T], diag: &[T], upper: &[T], rhs: &[T]) -> Result<Vec<T>> {
    let n = check_lengths(lower, diag, upper, rhs)?;
    if n < 3 {
        return Err(SimError::Precondition("cyclic system needs at least 3 rows".into()));
    }
    let alpha = upper[n - 1];
    let beta = lower[0];
    let gamma = -diag[0];
    let mut d = diag.to_vec();
    d[0] = diag[0] - gamma;
    d[n - 1] = diag[n - 1] - alpha * beta / gamma;
    let x = tridiagonal_solve(lower, &d, upper, rhs)?;
    let mut w = vec![T::zero(); n];
    w[0] = gamma;
    w[n - 1] = alpha;
    let q = tridiagonal_solve(lower, &d, upper, &w)?;
    let denom = T::one() + q[0] + beta * q[n - 1] / gamma;
    let tiny = T::from_f64(PIVOT_MIN).unwrap_or_else(T::min_positive_value);
    if denom.abs() < tiny {
        return Err(SimError::SingularMatrix {
            row: n - 1,
            pivot: denom.as_f64(),
        });
    }
    let factor = (x[0] + beta * x[n - 1] / gamma) / denom;
    Ok(x.iter().zip(&q).map(|(&xi, &qi)| xi - factor * qi).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Dense Gaussian elimination with partial pivoting.
    fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
        let n = b.len();
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
                .unwrap();
            a.swap(col, piv);
            b.swap(col, piv);
            for row in col + 1..n {
                let f = a[row][col] / a[col][col];
                let pivot_row = a[col].clone();
                for (x, p) in a[row][col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= f * p;
                }
                b[row] -= f * b[col];
            }
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
            x[i] = (b[i] - s) / a[i][i];
        }
        x
    }

    fn random_system(rng: &mut ChaCha8Rng, n: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>) {
        let lower: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let upper: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let diag = (0..n)
            .map(|i| {
                (lower[i].abs() + upper[i].abs() + rng.gen_range(0.1..2.0)) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 }
            })
            .collect();
        let rhs = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
        (lower, diag, upper, rhs)
    }

    #[test]
    fn identity_returns_rhs() {
        let r = vec![1.0, -2.0, 3.5, 0.25];
        let zero = vec![0.0; 4];
        let x = tridiagonal_solve(&zero, &[1.0; 4], &zero, &r).unwrap();
        assert_eq!(x, r);
    }

    #[test]
    fn two_by_two() {
        let x = tridiagonal_solve(&[0.0f64, 1.0], &[2.0, 2.0], &[1.0, 0.0], &[3.0, 3.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn matches_dense_elimination() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            let n = 50;
            let (l, d, u, r) = random_system(&mut rng, n);
            let mut a = vec![vec![0.0; n]; n];
            for i in 0..n {
                a[i][i] = d[i];
                if i > 0 {
                    a[i][i - 1] = l[i];
                }
                if i + 1 < n {
                    a[i][i + 1] = u[i];
                }
            }
            let x = tridiagonal_solve(&l, &d, &u, &r).unwrap();
            let y = dense_solve(a, r);
            let err = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(err < 1e-10, "{err}");
        }
    }

    #[test]
    fn cyclic_matches_dense_elimination() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let n = 50;
            let (l, mut d, u, r) = random_system(&mut rng, n);
            // Keep the sign pattern positive so the Sherman-Morrison shift stays well conditioned.
            d.iter_mut().for_each(|x| *x = x.abs());
            let mut a = vec![vec![0.0; n]; n];
            for i in 0..n {
                a[i][i] = d[i];
                a[i][(i + n - 1) % n] += l[i];
                a[i][(i + 1) % n] += u[i];
            }
            let x = cyclic_tridiagonal_solve(&l, &d, &u, &r).unwrap();
            let y = dense_solve(a, r);
            let err = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(err < 1e-10, "{err}");
        }
    }

    #[test]
    fn singular_pivot_reported() {
        let err = tridiagonal_solve(&[0.0, 0.0], &[0.0, 1.0], &[0.0, 0.0], &[1.0, 1.0]).unwrap_err();
        assert!(matches!(err, SimError::SingularMatrix { row: 0, .. }));
        assert!(tridiagonal_solve(&[0.0], &[1.0, 1.0], &[0.0, 0.0], &[1.0, 1.0]).is_err());
    }

    #[test]
    fn works_in_f32() {
        let x = tridiagonal_solve(&[0.0f32, 1.0], &[2.0, 2.0], &[1.0, 0.0], &[3.0, 3.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-6);
    }
}
