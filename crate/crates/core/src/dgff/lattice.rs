use nalgebra::DMatrix;

use crate::error::{Error, Result};

const MAX_SHELL: i64 = 2000;

/// `Σ_{n ∈ Z^d} exp(−nᵀ A n)` for positive definite `A` (d ≤ 3), truncated
/// at the first cube shell where the certified tail bound falls below
/// `tol` times the partial sum.
pub fn gaussian_lattice_sum(a: &DMatrix<f64>, tol: f64) -> Result<f64> {
    let d = a.nrows();
    if d == 0 || d > 3 || a.ncols() != d {
        return Err(Error::DomainError(
            "lattice dimension must be 1, 2 or 3".into(),
        ));
    }
    let lambda = a.clone().symmetric_eigenvalues().min();
    if !(lambda > 0.0) {
        return Err(Error::DomainError(
            "quadratic form is not positive definite".into(),
        ));
    }
    let mut total = 1.0;
    for k in 1..=MAX_SHELL {
        total += shell_sum(a, k);
        if tail_bound(d, lambda, k) <= tol * total {
            return Ok(total);
        }
    }
    Err(Error::TruncationInsufficient(format!(
        "tail above {tol} after {MAX_SHELL} shells"
    )))
}

/// Bound on the contribution of all shells beyond `n`: shell `k` holds at
/// most `2d(2k+1)^(d−1)` points, each with `nᵀAn ≥ λ k²`.
pub fn tail_bound(d: usize, lambda: f64, n: i64) -> f64 {
    let mut sum = 0.0;
    let mut k = n + 1;
    loop {
        let kf = k as f64;
        let term = 2.0 * d as f64 * (2.0 * kf + 1.0).powi(d as i32 - 1) * (-lambda * kf * kf).exp();
        sum += term;
        if term < 1e-300 || term < sum * 1e-17 {
            return sum * 2.0;
        }
        k += 1;
    }
}

fn shell_sum(a: &DMatrix<f64>, k: i64) -> f64 {
    let d = a.nrows();
    let mut total = 0.0;
    let mut n = vec![-k; d];
    loop {
        if n.iter().any(|x| x.abs() == k) {
            let mut q = 0.0;
            for i in 0..d {
                for j in 0..d {
                    q += n[i] as f64 * a[(i, j)] * n[j] as f64;
                }
            }
            total += (-q).exp();
        }
        let mut i = 0;
        loop {
            if i == d {
                return total;
            }
            n[i] += 1;
            if n[i] <= k {
                break;
            }
            n[i] = -k;
            i += 1;
        }
    }
}

/// Both sides of the Poisson summation identity
/// `Σ_n e^{−πt nᵀGn} = t^{−d/2} det(G)^{−1/2} Σ_k e^{−(π/t) kᵀG⁻¹k}`
/// for a lattice with Gram matrix `G`.
pub fn poisson_check(gram: &DMatrix<f64>, t: f64) -> Result<(f64, f64)> {
    if !(t > 0.0) {
        return Err(Error::DomainError("t must be positive".into()));
    }
    let d = gram.nrows();
    let inv = gram
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::SingularSystem("Gram matrix is singular".into()))?;
    let lhs = gaussian_lattice_sum(&(gram * (std::f64::consts::PI * t)), 1e-17)?;
    let dual = gaussian_lattice_sum(&(inv * (std::f64::consts::PI / t)), 1e-17)?;
    let rhs = t.powf(-(d as f64) / 2.0) * gram.determinant().powf(-0.5) * dual;
    Ok((lhs, rhs))
}
