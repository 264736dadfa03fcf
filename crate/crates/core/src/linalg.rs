//! Dense complex linear algebra helpers shared by every module.
//!
//! Thin, checked wrappers around LAPACK (via `ndarray-linalg`): Hermitian
//! eigendecompositions and functional calculus, SVD-based rank / null space /
//! pseudo-inverse / least squares with one consistent relative cutoff, and a
//! few deterministic constructions (isometry completion, polar factor) that
//! the representation and PEPS layers rely on.
//!
//! All matrices are `Array2<C64>`; eigenvalue and singular-value cutoffs are
//! relative to the largest value unless stated otherwise.

use ndarray::{Array1, Array2, ArrayView2, Axis};
use ndarray_linalg::{Eigh, QR, SVD, UPLO};
use num_complex::Complex64 as C64;
use rand::Rng;
use thiserror::Error;

use crate::tol::{DENOM_FLOOR, RANK_CUTOFF};

/// Errors from the dense linear-algebra layer.
#[derive(Debug, Error)]
pub enum LinalgError {
    /// The LAPACK backend failed to converge or rejected the input.
    #[error("LAPACK backend error: {0}")]
    Backend(#[from] ndarray_linalg::error::LinalgError),
    /// A matrix expected to be Hermitian was not (relative residual reported).
    #[error("matrix is not Hermitian: relative asymmetry {residual:.3e} exceeds {tol:.3e}")]
    NotHermitian { residual: f64, tol: f64 },
    /// A matrix expected positive semidefinite had a significantly negative
    /// eigenvalue.
    #[error("matrix is not positive semidefinite: min eigenvalue {min_eig:.3e} (scale {scale:.3e})")]
    NotPositive { min_eig: f64, scale: f64 },
    /// A function of eigenvalues was undefined (e.g. inverse of ~0).
    #[error("scalar function undefined at eigenvalue {eig:.3e}")]
    UndefinedAt { eig: f64 },
    /// Shape mismatch between operands.
    #[error("dimension mismatch: {0}")]
    Shape(String),
    /// The backend's eigenvector output satisfied `a v = λ v` in neither
    /// orientation convention.
    #[error("eigendecomposition failed the self-check: best residual {residual:.3e}")]
    ConventionCheck { residual: f64 },
}

/// Frobenius norm.
pub fn fro_norm(a: &ArrayView2<C64>) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Frobenius norm of an owned array (convenience).
pub fn fro(a: &Array2<C64>) -> f64 {
    fro_norm(&a.view())
}

/// Relative Frobenius difference `‖a−b‖ / max(‖a‖, ‖b‖, floor)`.
pub fn rel_diff(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
    let na = fro(a);
    let nb = fro(b);
    let diff = fro(&(a - b));
    diff / na.max(nb).max(DENOM_FLOOR)
}

/// Relative difference for vectors.
pub fn rel_diff_vec(a: &Array1<C64>, b: &Array1<C64>) -> f64 {
    let na = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let nb = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let diff = (a - b).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    diff / na.max(nb).max(DENOM_FLOOR)
}

/// Conjugate transpose.
pub fn dagger(a: &ArrayView2<C64>) -> Array2<C64> {
    a.t().mapv(|z| z.conj())
}

/// Identity matrix.
pub fn eye(n: usize) -> Array2<C64> {
    Array2::eye(n)
}

/// Relative deviation from Hermiticity `‖a−a†‖/max(‖a‖,floor)`.
pub fn hermiticity_residual(a: &Array2<C64>) -> f64 {
    let ad = dagger(&a.view());
    fro(&(a - &ad)) / fro(a).max(DENOM_FLOOR)
}

/// Hermitian eigendecomposition of `(a+a†)/2` after checking that the
/// anti-Hermitian part is below `herm_tol` (relative).
///
/// Returns ascending eigenvalues and the unitary of column eigenvectors.
///
/// The LAPACKE route taken by this backend hands the row-major buffer to a
/// column-major routine, so for complex input `eigh` actually diagonalizes
/// `conj(a)`; the eigenvectors of `a` are the conjugates of what it returns.
/// Rather than hard-coding that quirk we test both conventions on two
/// eigenpairs and keep the one that satisfies `a v = λ v`.
pub fn eigh_hermitian(
    a: &Array2<C64>,
    herm_tol: f64,
) -> Result<(Array1<f64>, Array2<C64>), LinalgError> {
    let res = hermiticity_residual(a);
    if res > herm_tol {
        return Err(LinalgError::NotHermitian { residual: res, tol: herm_tol });
    }
    let sym = (a + &dagger(&a.view())).mapv(|z| 0.5 * z);
    let (vals, vecs_raw) = sym.eigh(UPLO::Lower)?;
    let vecs_conj = vecs_raw.mapv(|z| z.conj());
    let scale = vals.iter().fold(0.0f64, |m, &v| m.max(v.abs())).max(DENOM_FLOOR);
    let pair_residual = |vecs: &Array2<C64>| -> f64 {
        let n = vals.len();
        let mut worst = 0.0f64;
        for col in [0, n - 1] {
            let v = vecs.column(col).to_owned();
            let av = sym.dot(&v);
            let lv = v.mapv(|z| z * vals[col]);
            let r = (&av - &lv).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            worst = worst.max(r / scale);
        }
        worst
    };
    let (r_conj, r_raw) = (pair_residual(&vecs_conj), pair_residual(&vecs_raw));
    let (best, vecs) = if r_conj <= r_raw { (r_conj, vecs_conj) } else { (r_raw, vecs_raw) };
    if best > 1e-8 {
        return Err(LinalgError::ConventionCheck { residual: best });
    }
    Ok((vals, vecs))
}

/// Apply a real scalar function to a Hermitian matrix through its
/// eigendecomposition: `V f(Λ) V†`.
pub fn herm_fn(
    a: &Array2<C64>,
    herm_tol: f64,
    f: impl Fn(f64) -> Result<f64, LinalgError>,
) -> Result<Array2<C64>, LinalgError> {
    let (vals, vecs) = eigh_hermitian(a, herm_tol)?;
    let fvals = vals.iter().map(|&v| f(v)).collect::<Result<Vec<_>, _>>()?;
    let d = Array2::from_diag(&Array1::from_iter(fvals.into_iter().map(|v| C64::new(v, 0.0))));
    Ok(vecs.dot(&d).dot(&dagger(&vecs.view())))
}

/// Functional calculus for positive semidefinite matrices.
///
/// Eigenvalues in `[-clamp_tol·scale, 0]` are clamped to zero; anything more
/// negative is an error.  `scale` is the largest |eigenvalue|.  The scalar
/// function is then applied to the clamped spectrum.
pub fn psd_fn(
    a: &Array2<C64>,
    herm_tol: f64,
    clamp_tol: f64,
    f: impl Fn(f64) -> Result<f64, LinalgError>,
) -> Result<Array2<C64>, LinalgError> {
    let (vals, vecs) = eigh_hermitian(a, herm_tol)?;
    let scale = vals.iter().fold(0.0f64, |m, &v| m.max(v.abs())).max(DENOM_FLOOR);
    let min_eig = vals.iter().fold(f64::INFINITY, |m, &v| m.min(v));
    if min_eig < -clamp_tol * scale {
        return Err(LinalgError::NotPositive { min_eig, scale });
    }
    let fvals = vals
        .iter()
        .map(|&v| f(v.max(0.0)))
        .collect::<Result<Vec<_>, _>>()?;
    let d = Array2::from_diag(&Array1::from_iter(fvals.into_iter().map(|v| C64::new(v, 0.0))));
    Ok(vecs.dot(&d).dot(&dagger(&vecs.view())))
}

/// Principal square root of a positive semidefinite matrix.
pub fn sqrtm_psd(a: &Array2<C64>, herm_tol: f64, clamp_tol: f64) -> Result<Array2<C64>, LinalgError> {
    psd_fn(a, herm_tol, clamp_tol, |v| Ok(v.sqrt()))
}

/// Real power `a^p` of a positive (semi)definite matrix.  Negative powers
/// require the spectrum to stay above `RANK_CUTOFF` relative to its largest
/// eigenvalue.
pub fn powm_psd(
    a: &Array2<C64>,
    herm_tol: f64,
    clamp_tol: f64,
    p: f64,
) -> Result<Array2<C64>, LinalgError> {
    let (vals, _) = eigh_hermitian(a, herm_tol)?;
    let scale = vals.iter().fold(0.0f64, |m, &v| m.max(v.abs())).max(DENOM_FLOOR);
    psd_fn(a, herm_tol, clamp_tol, |v| {
        if p < 0.0 && v < RANK_CUTOFF * scale {
            Err(LinalgError::UndefinedAt { eig: v })
        } else {
            Ok(v.powf(p))
        }
    })
}

/// Singular values of `a` (descending).
pub fn singular_values(a: &Array2<C64>) -> Result<Array1<f64>, LinalgError> {
    let (_, s, _) = a.svd(false, false)?;
    Ok(s)
}

/// Numerical rank at relative cutoff `rcond` (singular values below
/// `rcond·s_max` count as zero).
pub fn rank(a: &Array2<C64>, rcond: f64) -> Result<usize, LinalgError> {
    let s = singular_values(a)?;
    let smax = s.iter().fold(0.0f64, |m, &v| m.max(v));
    if smax == 0.0 {
        return Ok(0);
    }
    Ok(s.iter().filter(|&&v| v > rcond * smax).count())
}

/// Orthonormal basis (columns) of the null space of `a` at relative cutoff.
pub fn nullspace(a: &Array2<C64>, rcond: f64) -> Result<Array2<C64>, LinalgError> {
    let n = a.ncols();
    let (_, s, vt) = a.svd(false, true)?;
    let vt = vt.expect("requested Vt");
    let smax = s.iter().fold(0.0f64, |m, &v| m.max(v));
    let r = if smax == 0.0 { 0 } else { s.iter().filter(|&&v| v > rcond * smax).count() };
    // Rows r.. of Vt span the kernel; return them conjugated as columns.
    let mut out = Array2::zeros((n, n - r));
    for (j, row) in vt.axis_iter(Axis(0)).enumerate().skip(r) {
        for i in 0..n {
            out[(i, j - r)] = row[i].conj();
        }
    }
    Ok(out)
}

/// Orthonormal basis (columns) of the column space of `a` at relative cutoff.
pub fn column_space(a: &Array2<C64>, rcond: f64) -> Result<Array2<C64>, LinalgError> {
    let (u, s, _) = a.svd(true, false)?;
    let u = u.expect("requested U");
    let smax = s.iter().fold(0.0f64, |m, &v| m.max(v));
    let r = if smax == 0.0 { 0 } else { s.iter().filter(|&&v| v > rcond * smax).count() };
    Ok(u.slice(ndarray::s![.., ..r]).to_owned())
}

/// Moore–Penrose pseudo-inverse at relative cutoff `rcond`.
pub fn pinv(a: &Array2<C64>, rcond: f64) -> Result<Array2<C64>, LinalgError> {
    let (u, s, vt) = a.svd(true, true)?;
    let (u, vt) = (u.expect("U"), vt.expect("Vt"));
    let smax = s.iter().fold(0.0f64, |m, &v| m.max(v));
    let k = s.len();
    let mut sinv = Array2::<C64>::zeros((vt.nrows(), u.ncols()));
    for i in 0..k {
        if smax > 0.0 && s[i] > rcond * smax {
            sinv[(i, i)] = C64::new(1.0 / s[i], 0.0);
        }
    }
    Ok(dagger(&vt.view()).dot(&sinv).dot(&dagger(&u.view())))
}

/// Minimum-norm least-squares solution of `a x = b` via SVD with relative
/// cutoff `rcond`.  Returns `(x, residual_norm)`.
pub fn lstsq(
    a: &Array2<C64>,
    b: &Array1<C64>,
    rcond: f64,
) -> Result<(Array1<C64>, f64), LinalgError> {
    if a.nrows() != b.len() {
        return Err(LinalgError::Shape(format!(
            "lstsq: a is {}x{}, b has length {}",
            a.nrows(),
            a.ncols(),
            b.len()
        )));
    }
    let x = pinv(a, rcond)?.dot(b);
    let resid = {
        let r = a.dot(&x) - b;
        r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    };
    Ok((x, resid))
}

/// Unitary polar factor `u = a (a†a)^{-1/2}`, computed as `U V†` from the SVD.
/// Requires `a` square and full rank at `RANK_CUTOFF`.
pub fn polar_unitary(a: &Array2<C64>) -> Result<Array2<C64>, LinalgError> {
    let (u, s, vt) = a.svd(true, true)?;
    let (u, vt) = (u.expect("U"), vt.expect("Vt"));
    let smax = s.iter().fold(0.0f64, |m, &v| m.max(v));
    if s.iter().any(|&v| v <= RANK_CUTOFF * smax) {
        return Err(LinalgError::UndefinedAt { eig: 0.0 });
    }
    Ok(u.dot(&vt))
}

/// Complete an isometry `v` (orthonormal columns, `n x r`) to a full `n x n`
/// unitary deterministically: QR of `[v | 1]` with column phases fixed so the
/// first `r` columns reproduce `v` exactly (up to floating point).
pub fn complete_isometry(v: &Array2<C64>) -> Result<Array2<C64>, LinalgError> {
    let n = v.nrows();
    let r = v.ncols();
    if r > n {
        return Err(LinalgError::Shape(format!("isometry has more columns ({r}) than rows ({n})")));
    }
    let mut aug = Array2::<C64>::zeros((n, r + n));
    aug.slice_mut(ndarray::s![.., ..r]).assign(v);
    for i in 0..n {
        aug[(i, r + i)] = C64::new(1.0, 0.0);
    }
    let (q, rr) = aug.qr()?;
    // q is n x n (economy of an n x (r+n) matrix), rr is n x (r+n).
    let mut q = q;
    for j in 0..n {
        let d = rr[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            // Multiply column j of q by phase so that R's diagonal is positive.
            for i in 0..n {
                q[(i, j)] *= phase;
            }
        }
    }
    Ok(q)
}

/// Deterministic RNG for reproducible randomized checks.
pub fn seeded_rng(seed: u64) -> rand_chacha::ChaCha12Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha12Rng::seed_from_u64(seed)
}

/// Seeded random Hermitian matrix with entries O(1).
pub fn random_hermitian(n: usize, rng: &mut impl Rng) -> Array2<C64> {
    let mut a = Array2::<C64>::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
    }
    let ad = dagger(&a.view());
    (a + ad).mapv(|z| 0.5 * z)
}

/// Seeded random complex vector with entries O(1).
pub fn random_complex_vec(n: usize, rng: &mut impl Rng) -> Array1<C64> {
    Array1::from_iter((0..n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::<C64>::zeros((ar * br, ac * bc));
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij == C64::new(0.0, 0.0) {
                continue;
            }
            let mut block = out.slice_mut(ndarray::s![i * br..(i + 1) * br, j * bc..(j + 1) * bc]);
            block.assign(&b.mapv(|z| z * aij));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sqrt_of_psd_matrix_squares_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_hermitian(6, &mut rng);
        let psd = a.dot(&dagger(&a.view())); // a a† is PSD
        let s = sqrtm_psd(&psd, 1e-12, 1e-10).unwrap();
        // Reconstruction error scales with the condition number of `psd`.
        assert!(rel_diff(&s.dot(&s), &psd) < 1e-11);
        assert!(hermiticity_residual(&s) < 1e-12);
    }

    #[test]
    fn negative_eigenvalue_is_rejected() {
        let a = array![[C64::new(1.0, 0.0), C64::new(0.0, 0.0)], [C64::new(0.0, 0.0), C64::new(-0.5, 0.0)]];
        assert!(matches!(sqrtm_psd(&a, 1e-12, 1e-10), Err(LinalgError::NotPositive { .. })));
    }

    #[test]
    fn pinv_solves_consistent_system() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_hermitian(5, &mut rng);
        let x_true = random_complex_vec(5, &mut rng);
        let b = a.dot(&x_true);
        let (x, resid) = lstsq(&a, &b, 1e-12).unwrap();
        assert!(resid < 1e-10);
        let diff: f64 = (&x - &x_true).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(diff < 1e-9);
    }

    #[test]
    fn nullspace_is_orthonormal_and_annihilated() {
        // Rank-1 projector on C^4: kernel dim 3.
        let mut v = Array1::<C64>::zeros(4);
        v[0] = C64::new(0.6, 0.0);
        v[1] = C64::new(0.8, 0.0);
        let p = {
            let mut p = Array2::<C64>::zeros((4, 4));
            for i in 0..4 {
                for j in 0..4 {
                    p[(i, j)] = v[i] * v[j].conj();
                }
            }
            p
        };
        let ns = nullspace(&p, 1e-10).unwrap();
        assert_eq!(ns.ncols(), 3);
        assert!(fro(&p.dot(&ns)) < 1e-12);
        let gram = dagger(&ns.view()).dot(&ns);
        assert!(rel_diff(&gram, &eye(3)) < 1e-12);
    }

    #[test]
    fn isometry_completion_is_unitary_and_extends() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_hermitian(5, &mut rng);
        let (_, vecs) = eigh_hermitian(&a, 1e-12).unwrap();
        let v = vecs.slice(ndarray::s![.., ..2]).to_owned();
        let u = complete_isometry(&v).unwrap();
        assert!(rel_diff(&dagger(&u.view()).dot(&u), &eye(5)) < 1e-12);
        assert!(fro(&(&u.slice(ndarray::s![.., ..2]).to_owned() - &v)) < 1e-12);
    }

    #[test]
    fn kron_matches_hand_example() {
        let a = array![[C64::new(1.0, 0.0), C64::new(2.0, 0.0)]];
        let b = array![[C64::new(0.0, 1.0)], [C64::new(3.0, 0.0)]];
        let k = kron(&a, &b);
        assert_eq!(k.dim(), (2, 2));
        assert_eq!(k[(0, 0)], C64::new(0.0, 1.0));
        assert_eq!(k[(1, 1)], C64::new(6.0, 0.0));
    }
}
