//! Thin safe wrappers over the handful of LAPACK/BLAS routines the solver
//! needs. Linked against the system OpenBLAS (see build.rs). All matrices
//! here are dense column-major `f64`/`Complex64` slices.

use num_complex::Complex64;
use std::os::raw::c_char;

use crate::error::{Error, Result};

extern "C" {
    fn dsyevd_(
        jobz: *const c_char,
        uplo: *const c_char,
        n: *const i32,
        a: *mut f64,
        lda: *const i32,
        w: *mut f64,
        work: *mut f64,
        lwork: *const i32,
        iwork: *mut i32,
        liwork: *const i32,
        info: *mut i32,
    );
    fn zgeev_(
        jobvl: *const c_char,
        jobvr: *const c_char,
        n: *const i32,
        a: *mut Complex64,
        lda: *const i32,
        w: *mut Complex64,
        vl: *mut Complex64,
        ldvl: *const i32,
        vr: *mut Complex64,
        ldvr: *const i32,
        work: *mut Complex64,
        lwork: *const i32,
        rwork: *mut f64,
        info: *mut i32,
    );
    fn dpotrf_(uplo: *const c_char, n: *const i32, a: *mut f64, lda: *const i32, info: *mut i32);
    fn dpotrs_(
        uplo: *const c_char,
        n: *const i32,
        nrhs: *const i32,
        a: *const f64,
        lda: *const i32,
        b: *mut f64,
        ldb: *const i32,
        info: *mut i32,
    );
    fn dgemm_(
        transa: *const c_char,
        transb: *const c_char,
        m: *const i32,
        n: *const i32,
        k: *const i32,
        alpha: *const f64,
        a: *const f64,
        lda: *const i32,
        b: *const f64,
        ldb: *const i32,
        beta: *const f64,
        c: *mut f64,
        ldc: *const i32,
    );
}

const L: c_char = b'L' as c_char;
const V: c_char = b'V' as c_char;
const N: c_char = b'N' as c_char;

/// Eigendecomposition of a real symmetric matrix (column-major, dim n).
/// Returns eigenvalues ascending; `a` is overwritten with eigenvectors in
/// columns when `vectors` is true.
pub fn sym_eig(n: usize, a: &mut [f64], vectors: bool) -> Result<Vec<f64>> {
    debug_assert_eq!(a.len(), n * n);
    let ni = n as i32;
    let mut w = vec![0.0f64; n];
    let lwork = if vectors { 1 + 6 * ni + 2 * ni * ni } else { 2 * ni + 1 }.max(1);
    let liwork = if vectors { 3 + 5 * ni } else { 1 }.max(1);
    let mut work = vec![0.0f64; lwork as usize];
    let mut iwork = vec![0i32; liwork as usize];
    let mut info = 0i32;
    let jobz = if vectors { V } else { N };
    unsafe {
        dsyevd_(
            &jobz,
            &L,
            &ni,
            a.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            work.as_mut_ptr(),
            &lwork,
            iwork.as_mut_ptr(),
            &liwork,
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack { routine: "dsyevd", info });
    }
    Ok(w)
}

/// Eigenvalues of a general complex matrix (column-major, dim n).
/// The input is consumed.
pub fn complex_eigenvalues(n: usize, mut a: Vec<Complex64>) -> Result<Vec<Complex64>> {
    debug_assert_eq!(a.len(), n * n);
    let ni = n as i32;
    let mut w = vec![Complex64::ZERO; n];
    let lwork = (4 * ni).max(1);
    let mut work = vec![Complex64::ZERO; lwork as usize];
    let mut rwork = vec![0.0f64; (2 * n).max(1)];
    let mut info = 0i32;
    unsafe {
        zgeev_(
            &N,
            &N,
            &ni,
            a.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            std::ptr::null_mut(),
            &ni,
            std::ptr::null_mut(),
            &ni,
            work.as_mut_ptr(),
            &lwork,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack { routine: "zgeev", info });
    }
    Ok(w)
}

/// Cached Cholesky factor of a symmetric positive definite matrix.
pub struct CholeskyFactor {
    n: usize,
    factor: Vec<f64>,
}

impl CholeskyFactor {
    /// Factors `a` (column-major). Falls back to a growing diagonal ridge if
    /// the matrix is only positive semidefinite from linearly dependent rows.
    pub fn new(n: usize, a: &[f64]) -> Result<Self> {
        debug_assert_eq!(a.len(), n * n);
        let scale = (0..n).map(|i| a[i * n + i].abs()).fold(0.0f64, f64::max).max(1.0);
        let mut ridge = 0.0;
        for _ in 0..12 {
            let mut factor = a.to_vec();
            if ridge > 0.0 {
                for i in 0..n {
                    factor[i * n + i] += ridge;
                }
            }
            let ni = n as i32;
            let mut info = 0i32;
            unsafe { dpotrf_(&L, &ni, factor.as_mut_ptr(), &ni, &mut info) };
            if info == 0 {
                return Ok(Self { n, factor });
            }
            ridge = if ridge == 0.0 { scale * 1e-12 } else { ridge * 100.0 };
        }
        Err(Error::Lapack { routine: "dpotrf", info: -1 })
    }

    pub fn solve(&self, b: &mut [f64]) -> Result<()> {
        debug_assert_eq!(b.len(), self.n);
        let ni = self.n as i32;
        let one = 1i32;
        let mut info = 0i32;
        unsafe {
            dpotrs_(&L, &ni, &one, self.factor.as_ptr(), &ni, b.as_mut_ptr(), &ni, &mut info)
        };
        if info != 0 {
            return Err(Error::Lapack { routine: "dpotrs", info });
        }
        Ok(())
    }
}

/// C = A·Bᵀ for column-major A (m×k) and B (n×k).
pub fn gemm_abt(m: usize, n: usize, k: usize, a: &[f64], b: &[f64], c: &mut [f64]) {
    debug_assert_eq!(a.len(), m * k);
    debug_assert_eq!(b.len(), n * k);
    debug_assert_eq!(c.len(), m * n);
    if k == 0 {
        c.fill(0.0);
        return;
    }
    let (mi, ni, ki) = (m as i32, n as i32, k as i32);
    let t = b'T' as c_char;
    let nn = b'N' as c_char;
    let alpha = 1.0f64;
    let beta = 0.0f64;
    unsafe {
        dgemm_(
            &nn,
            &t,
            &mi,
            &ni,
            &ki,
            &alpha,
            a.as_ptr(),
            &mi,
            b.as_ptr(),
            &ni,
            &beta,
            c.as_mut_ptr(),
            &mi,
        );
    }
}
