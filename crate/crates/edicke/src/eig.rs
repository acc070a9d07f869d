//! Thin wrapper around LAPACK's divide-and-conquer symmetric eigensolver.

use crate::error::{Error, Result};

/// Eigendecomposition of a dense symmetric matrix stored column-major.
///
/// On success `a` holds the orthonormal eigenvectors (eigenvector `k` is the
/// contiguous slice `a[k*n..(k+1)*n]`) and the returned vector holds the
/// eigenvalues in ascending order. With `vectors = false` the contents of `a`
/// are destroyed and only eigenvalues are returned.
pub(crate) fn eigh_inplace(a: &mut [f64], n: usize, vectors: bool) -> Result<Vec<f64>> {
    assert_eq!(a.len(), n * n);
    if n == 0 {
        return Ok(Vec::new());
    }
    let jobz = if vectors { b'V' } else { b'N' };
    let ni = i32::try_from(n)
        .map_err(|_| Error::DimensionGuard { dim: n, max: i32::MAX as usize })?;
    let mut w = vec![0.0f64; n];
    let mut info = 0i32;

    // workspace query
    let mut wkopt = [0.0f64];
    let mut iwkopt = [0i32];
    unsafe {
        lapack::dsyevd(jobz, b'L', ni, a, ni, &mut w, &mut wkopt, -1, &mut iwkopt, -1, &mut info);
    }
    if info != 0 {
        return Err(Error::Numerical(format!("dsyevd workspace query failed (info = {info})")));
    }
    let lwork = wkopt[0] as usize;
    let liwork = iwkopt[0].max(1) as usize;
    let mut work = vec![0.0f64; lwork.max(1)];
    let mut iwork = vec![0i32; liwork];
    unsafe {
        lapack::dsyevd(
            jobz,
            b'L',
            ni,
            a,
            ni,
            &mut w,
            &mut work,
            lwork as i32,
            &mut iwork,
            liwork as i32,
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Numerical(format!("dsyevd failed to converge (info = {info})")));
    }
    Ok(w)
}

/// Eigenvalues of a small symmetric matrix given in any (row/column) order;
/// the matrix is copied.
pub(crate) fn eigvalsh(a: &[f64], n: usize) -> Result<Vec<f64>> {
    let mut buf = a.to_vec();
    eigh_inplace(&mut buf, n, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn two_by_two_closed_form() {
        // [[2, 1], [1, 2]] has eigenvalues 1 and 3
        let a = [2.0, 1.0, 1.0, 2.0];
        let w = eigvalsh(&a, 2).unwrap();
        assert_abs_diff_eq!(w[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(w[1], 3.0, epsilon = 1e-12);
    }

    #[test]
    fn reconstructs_random_symmetric_matrix() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let n = 60;
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..=i {
                let v = rng.gen_range(-1.0..1.0);
                a[i * n + k] = v;
                a[k * n + i] = v;
            }
        }
        let orig = a.clone();
        let w = eigh_inplace(&mut a, n, true).unwrap();
        // A v = lambda v for every pair
        for k in 0..n {
            let v = &a[k * n..(k + 1) * n];
            for i in 0..n {
                let mut av = 0.0;
                for l in 0..n {
                    av += orig[i * n + l] * v[l];
                }
                assert_abs_diff_eq!(av, w[k] * v[i], epsilon = 1e-9);
            }
        }
        // ascending order
        for k in 1..n {
            assert!(w[k] >= w[k - 1]);
        }
    }
}
