//! Internal dense linear-algebra helpers shared across modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type RMatrix = DMatrix<f64>;
pub type RVector = DVector<f64>;
pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub fn max_abs(m: &RMatrix) -> f64 {
    m.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

pub fn max_abs_c(m: &CMatrix) -> f64 {
    m.iter().fold(0.0f64, |acc, x| acc.max(x.norm()))
}

/// Eigendecomposition of a real symmetric matrix (input is symmetrized
/// first). Eigenvalues ascend.
pub fn sym_eigen(m: &RMatrix) -> (RVector, RMatrix) {
    let n = m.nrows();
    let fm = faer::Mat::<f64>::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]));
    let evd = fm
        .self_adjoint_eigen(faer::Side::Lower)
        .expect("self-adjoint eigendecomposition failed");
    let vals = RVector::from_fn(n, |i, _| evd.S()[i]);
    let vecs = RMatrix::from_fn(n, n, |i, j| evd.U()[(i, j)]);
    (vals, vecs)
}

/// Principal square root of a symmetric positive-definite matrix.
/// Fails if the smallest eigenvalue is below `rel_floor` times the largest.
pub fn sym_sqrt_pd(m: &RMatrix, rel_floor: f64, what: &'static str) -> Result<RMatrix> {
    let (vals, vecs) = sym_eigen(m);
    let max = vals.iter().cloned().fold(f64::MIN, f64::max);
    let min = vals.iter().cloned().fold(f64::MAX, f64::min);
    if min <= rel_floor * max.max(0.0) || min <= 0.0 {
        return Err(Error::NoPositiveEnergyStructure {
            reason: format!("{what}: eigenvalue range [{min:.3e}, {max:.3e}] is not positive"),
        });
    }
    let d = RMatrix::from_diagonal(&vals.map(f64::sqrt));
    Ok(&vecs * d * vecs.transpose())
}

/// Minimum eigenvalue of the symmetric part.
pub fn min_sym_eigenvalue(m: &RMatrix) -> f64 {
    let (vals, _) = sym_eigen(m);
    vals.iter().cloned().fold(f64::MAX, f64::min)
}

/// Hermitian eigendecomposition (input is Hermitian-symmetrized first).
/// Eigenvalues are real and ascend.
pub fn herm_eigen(m: &CMatrix) -> (RVector, CMatrix) {
    let n = m.nrows();
    let fm = faer::Mat::<Complex64>::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let evd = fm
        .self_adjoint_eigen(faer::Side::Lower)
        .expect("self-adjoint eigendecomposition failed");
    let vals = RVector::from_fn(n, |i, _| evd.S()[i].re);
    let vecs = CMatrix::from_fn(n, n, |i, j| evd.U()[(i, j)]);
    (vals, vecs)
}

/// exp(i * H) for Hermitian H, via eigendecomposition.
pub fn expi_hermitian(h: &CMatrix) -> CMatrix {
    let (vals, vecs) = herm_eigen(h);
    let d = CMatrix::from_diagonal(&vals.map(|x| Complex64::new(0.0, x).exp()));
    &vecs * d * vecs.adjoint()
}

/// exp(-H) for Hermitian H, shifted so the smallest eigenvalue maps to 1.
/// Returns the unnormalized positive matrix; callers renormalize by trace.
pub fn exp_neg_hermitian_shifted(h: &CMatrix) -> CMatrix {
    let (vals, vecs) = herm_eigen(h);
    let min = vals.iter().cloned().fold(f64::MAX, f64::min);
    let d = CMatrix::from_diagonal(&vals.map(|x| Complex64::new((-(x - min)).exp(), 0.0)));
    &vecs * d * vecs.adjoint()
}

/// Logarithm of a unitary matrix, returned as the Hermitian generator H with
/// U = exp(iH). Joint diagonalization of the commuting Hermitian pair
/// (U+U†)/2 and (U-U†)/2i, clustering degenerate eigenvalues of the first.
pub fn log_unitary(u: &CMatrix) -> Result<CMatrix> {
    let n = u.nrows();
    let half = Complex64::new(0.5, 0.0);
    let re = (u + u.adjoint()) * half;
    let im = (u - u.adjoint()) * Complex64::new(0.0, -0.5);
    let (vals, vecs) = herm_eigen(&re);
    // cluster eigenvalues of the real part, then diagonalize the imaginary
    // part within each cluster
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| vals[a].partial_cmp(&vals[b]).unwrap());
    let mut basis = CMatrix::zeros(n, n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (vals[order[end]] - vals[order[start]]).abs() < 1e-8 {
            end += 1;
        }
        let k = end - start;
        let mut block = CMatrix::zeros(n, k);
        for (col, &idx) in order[start..end].iter().enumerate() {
            block.set_column(col, &vecs.column(idx));
        }
        if k == 1 {
            basis.set_column(start, &block.column(0));
        } else {
            let im_block = block.adjoint() * &im * &block;
            let (_, w) = herm_eigen(&im_block);
            let rotated = &block * w;
            for col in 0..k {
                basis.set_column(start + col, &rotated.column(col));
            }
        }
        start = end;
    }
    // phases from the diagonal of basis† U basis
    let diag = basis.adjoint() * u * &basis;
    let mut gen_vals = CVector::zeros(n);
    for i in 0..n {
        let lambda = diag[(i, i)];
        if (lambda.norm() - 1.0).abs() > 1e-6 {
            return Err(Error::InvariantViolation {
                check: "unitary eigenphase",
                residual: (lambda.norm() - 1.0).abs(),
                tolerance: 1e-6,
            });
        }
        gen_vals[i] = Complex64::new(lambda.arg(), 0.0);
    }
    let d = CMatrix::from_diagonal(&gen_vals);
    Ok(&basis * d * basis.adjoint())
}

/// Kronecker product of complex matrices.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let s = a[(i, j)];
            if s.norm_sqr() == 0.0 {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = s * b[(k, l)];
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_unitary_handles_degenerate_real_parts() {
        // diag(e^{i t}, e^{-i t}) has a fully degenerate Hermitian part,
        // exercising the cluster branch
        let t = 0.8f64;
        let u = CMatrix::from_diagonal(&CVector::from_vec(vec![
            Complex64::new(0.0, t).exp(),
            Complex64::new(0.0, -t).exp(),
        ]));
        let h = log_unitary(&u).unwrap();
        let back = expi_hermitian(&h);
        assert!(max_abs_c(&(back - u)) < 1e-12);
    }

    #[test]
    fn log_unitary_round_trips_random_unitaries() {
        let g = CMatrix::from_fn(3, 3, |i, j| {
            Complex64::new(((i * 5 + j) as f64).sin(), ((i + 3 * j) as f64).cos())
        });
        let h = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
        let u = expi_hermitian(&h);
        let h_back = log_unitary(&u).unwrap();
        let u_back = expi_hermitian(&h_back);
        assert!(max_abs_c(&(u_back - u)) < 1e-11);
    }
}
