//! Dense complex linear algebra for the sampling matrix.
//!
//! Two independent routes to singular values:
//! - Householder bidiagonalization followed by Sturm-count bisection on the
//!   Golub–Kahan tridiagonal form (extremal values only, `O(m³)` once);
//! - one-sided (Hestenes) Jacobi, which also yields right singular vectors.

use num_complex::Complex;

use crate::real::Real;

/// Column-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(m: usize) -> Self {
        let mut a = Self::zeros(m, m);
        for i in 0..m {
            a[(i, i)] = Complex::new(T::one(), T::zero());
        }
        a
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &[Complex<T>] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    fn column_mut(&mut self, j: usize) -> &mut [Complex<T>] {
        let r = self.rows;
        &mut self.data[j * r..(j + 1) * r]
    }

    fn two_columns_mut(&mut self, a: usize, b: usize) -> (&mut [Complex<T>], &mut [Complex<T>]) {
        debug_assert!(a < b);
        let r = self.rows;
        let (lo, hi) = self.data.split_at_mut(b * r);
        (&mut lo[a * r..(a + 1) * r], &mut hi[..r])
    }

    pub fn mul_vec(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![Complex::new(T::zero(), T::zero()); self.rows];
        for (j, &xj) in x.iter().enumerate() {
            for (yi, &a) in y.iter_mut().zip(self.column(j)) {
                *yi += a * xj;
            }
        }
        y
    }
}

impl<T> std::ops::Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i + j * self.rows]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for CMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i + j * self.rows]
    }
}

fn cdot<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    // a^H b
    a.iter()
        .zip(b)
        .fold(Complex::new(T::zero(), T::zero()), |s, (x, y)| {
            s + x.conj() * y
        })
}

fn norm_sq<T: Real>(a: &[Complex<T>]) -> T {
    a.iter().map(|x| x.norm_sqr()).sum()
}

/// Reflector `H = I − 2uu^H/(u^H u)` with `Hx = −phase(x₀)‖x‖e₁`.
/// Returns `None` when `x = 0`.
fn householder<T: Real>(x: &[Complex<T>]) -> Option<(Vec<Complex<T>>, T)> {
    let norm = norm_sq(x).sqrt();
    if norm == T::zero() {
        return None;
    }
    let x0 = x[0];
    let phase = if x0.norm() > T::zero() {
        x0 / x0.norm()
    } else {
        Complex::new(T::one(), T::zero())
    };
    let mut u = x.to_vec();
    u[0] += phase * norm;
    let uu = norm_sq(&u);
    Some((u, T::of(2.0) / uu))
}

/// Real bidiagonal `(diag, superdiag)` with the singular values of a square `a`.
pub fn bidiagonalize<T: Real>(a: &CMatrix<T>) -> (Vec<T>, Vec<T>) {
    assert_eq!(a.rows, a.cols, "square matrices only");
    let m = a.rows;
    let mut a = a.clone();
    let mut diag = Vec::with_capacity(m);
    let mut sup = Vec::with_capacity(m.saturating_sub(1));
    for k in 0..m {
        // Left reflector on column k, rows k..m.
        let x: Vec<Complex<T>> = a.column(k)[k..].to_vec();
        if let Some((u, beta)) = householder(&x) {
            for j in k..m {
                let col = &mut a.column_mut(j)[k..];
                let s = cdot(&u, col) * beta;
                for (c, &ui) in col.iter_mut().zip(&u) {
                    *c -= ui * s;
                }
            }
        }
        diag.push(a[(k, k)].norm());
        if k + 1 >= m {
            break;
        }
        // Right reflector on row k, columns k+1..m, built from the conjugated row.
        let y: Vec<Complex<T>> = (k + 1..m).map(|j| a[(k, j)].conj()).collect();
        if let Some((u, beta)) = householder(&y) {
            let mut w = vec![Complex::new(T::zero(), T::zero()); m - k];
            for (l, j) in (k + 1..m).enumerate() {
                let ul = u[l];
                for (wi, &c) in w.iter_mut().zip(&a.column(j)[k..]) {
                    *wi += c * ul;
                }
            }
            for (l, j) in (k + 1..m).enumerate() {
                let f = u[l].conj() * beta;
                for (c, &wi) in a.column_mut(j)[k..].iter_mut().zip(&w) {
                    *c -= wi * f;
                }
            }
        }
        sup.push(a[(k, k + 1)].norm());
    }
    (diag, sup)
}

/// Number of singular values of the bidiagonal strictly below `x > 0`,
/// from the inertia of the Golub–Kahan tridiagonal minus `x`.
fn count_below<T: Real>(offdiag: &[T], m: usize, x: T) -> usize {
    let pivmin = T::min_positive_value() / T::epsilon();
    let mut q = -x;
    let mut neg = usize::from(q < T::zero());
    for &b in offdiag {
        q = -x - b * b / q;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < T::zero() {
            neg += 1;
        }
    }
    neg.saturating_sub(m)
}

/// Extremal singular values `(σ_min, σ_max)` of a real bidiagonal.
pub fn bidiagonal_extremes<T: Real>(diag: &[T], sup: &[T]) -> (T, T) {
    let m = diag.len();
    assert!(m > 0 && sup.len() + 1 == m);
    if m == 1 {
        return (diag[0], diag[0]);
    }
    let mut off = Vec::with_capacity(2 * m - 1);
    for i in 0..m {
        off.push(diag[i]);
        if i + 1 < m {
            off.push(sup[i]);
        }
    }
    let mut bound = T::zero();
    for i in 0..off.len() {
        let left = if i > 0 { off[i - 1] } else { T::zero() };
        bound = bound.max(left + off[i]);
    }
    bound = bound.max(off[off.len() - 1]) * (T::one() + T::of(4.0) * T::epsilon())
        + T::min_positive_value();
    let tol = T::of(4.0) * T::epsilon();
    let bisect = |target: usize| {
        // Smallest x with count_below(x) ≥ target.
        let (mut lo, mut hi) = (T::zero(), bound);
        for _ in 0..2000 {
            let mid = (lo + hi) / T::of(2.0);
            if mid <= lo || mid >= hi {
                break;
            }
            if count_below(&off, m, mid) >= target {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= tol * hi || hi <= bound * T::epsilon() * T::epsilon() {
                break;
            }
        }
        (lo + hi) / T::of(2.0)
    };
    (bisect(1), bisect(m))
}

/// `(σ_min, σ_max)` of a square complex matrix.
pub fn extremal_singular_values<T: Real>(a: &CMatrix<T>) -> (T, T) {
    let (d, e) = bidiagonalize(a);
    bidiagonal_extremes(&d, &e)
}

/// Singular values (descending) and matching right singular vectors.
#[derive(Debug, Clone)]
pub struct JacobiSvd<T> {
    pub values: Vec<T>,
    pub right: CMatrix<T>,
}

impl<T: Real> JacobiSvd<T> {
    pub fn right_vector(&self, i: usize) -> &[Complex<T>] {
        self.right.column(i)
    }
}

const JACOBI_MAX_SWEEPS: usize = 80;

/// One-sided complex Jacobi SVD: orthogonalizes columns of `A V`.
pub fn jacobi_svd<T: Real>(a: &CMatrix<T>) -> JacobiSvd<T> {
    let n = a.cols;
    let mut u = a.clone();
    let mut v = CMatrix::identity(n);
    let tol = T::epsilon() * T::of_usize(n.max(1));
    let mut norms: Vec<T> = (0..n).map(|j| norm_sq(u.column(j))).collect();
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let (alpha, beta) = (norms[i], norms[j]);
                let gamma = cdot(u.column(i), u.column(j));
                let g = gamma.norm();
                if g == T::zero() || g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (T::of(2.0) * g);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                for m in [&mut u, &mut v] {
                    let (ci, cj) = m.two_columns_mut(i, j);
                    for (xi, xj) in ci.iter_mut().zip(cj.iter_mut()) {
                        let yj = *xj * phase;
                        let new_i = *xi * c - yj * s;
                        *xj = *xi * s + yj * c;
                        *xi = new_i;
                    }
                }
                norms[i] = norm_sq(u.column(i));
                norms[j] = norm_sq(u.column(j));
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].partial_cmp(&norms[x]).expect("finite norms"));
    let values = order.iter().map(|&j| norms[j].sqrt()).collect();
    let right = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    JacobiSvd { values, right }
}

/// Solves the square system `A x = b` by Householder QR.
pub fn qr_solve<T: Real>(a: &CMatrix<T>, b: &[Complex<T>]) -> Vec<Complex<T>> {
    assert_eq!(a.rows, a.cols);
    assert_eq!(b.len(), a.rows);
    let m = a.rows;
    let mut r = a.clone();
    let mut rhs = b.to_vec();
    for k in 0..m {
        let x: Vec<Complex<T>> = r.column(k)[k..].to_vec();
        if let Some((u, beta)) = householder(&x) {
            for j in k..m {
                let col = &mut r.column_mut(j)[k..];
                let s = cdot(&u, col) * beta;
                for (c, &ui) in col.iter_mut().zip(&u) {
                    *c -= ui * s;
                }
            }
            let s = cdot(&u, &rhs[k..]) * beta;
            for (c, &ui) in rhs[k..].iter_mut().zip(&u) {
                *c -= ui * s;
            }
        }
    }
    let mut x = vec![Complex::new(T::zero(), T::zero()); m];
    for k in (0..m).rev() {
        let mut s = rhs[k];
        for j in k + 1..m {
            s -= r[(k, j)] * x[j];
        }
        x[k] = s / r[(k, k)];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn test_matrix(m: usize, seed: u64) -> CMatrix<f64> {
        // Deterministic pseudo-random entries.
        let mut state = seed
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let data: Vec<Complex<f64>> = (0..m * m).map(|_| Complex::new(next(), next())).collect();
        CMatrix::from_fn(m, m, |i, j| data[i + j * m])
    }

    #[test]
    fn bisection_and_jacobi_agree() {
        for (m, seed) in [(1usize, 1u64), (2, 2), (5, 3), (17, 4), (40, 5)] {
            let a = test_matrix(m, seed);
            let (lo, hi) = extremal_singular_values(&a);
            let svd = jacobi_svd(&a);
            let jhi = svd.values[0];
            let jlo = *svd.values.last().unwrap();
            assert!((hi - jhi).abs() <= 1e-12 * jhi, "m={m}: {hi} vs {jhi}");
            assert!((lo - jlo).abs() <= 1e-10 * jhi, "m={m}: {lo} vs {jlo}");
        }
    }

    #[test]
    fn jacobi_vectors_are_singular_vectors() {
        let a = test_matrix(12, 9);
        let svd = jacobi_svd(&a);
        for i in [0usize, 11] {
            let v = svd.right_vector(i);
            assert!((norm_sq(v) - 1.0).abs() < 1e-12);
            let av = a.mul_vec(v);
            assert!((norm_sq(&av).sqrt() - svd.values[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn diagonal_matrix_values() {
        let d = [3.0, 0.5, 2.0, 1e-3];
        let a = CMatrix::from_fn(4, 4, |i, j| {
            if i == j {
                Complex::new(0.0, d[i])
            } else {
                Complex::new(0.0, 0.0)
            }
        });
        let (lo, hi): (f64, f64) = extremal_singular_values(&a);
        assert!((hi - 3.0).abs() < 1e-14);
        assert!((lo - 1e-3).abs() < 1e-16);
    }

    #[test]
    fn singular_matrix_has_tiny_sigma_min() {
        let mut a = test_matrix(6, 11);
        for i in 0..6 {
            let v = a[(i, 0)];
            a[(i, 3)] = v * 2.0;
        }
        let (lo, hi) = extremal_singular_values(&a);
        assert!(lo < 1e-14 * hi, "{lo}");
    }

    #[test]
    fn qr_solve_recovers_solution() {
        let a = test_matrix(9, 21);
        let x: Vec<Complex<f64>> = (0..9)
            .map(|k| Complex::new(k as f64, -(k as f64) / 2.0))
            .collect();
        let b = a.mul_vec(&x);
        let got = qr_solve(&a, &b);
        for (g, e) in got.iter().zip(&x) {
            assert!((g - e).norm() < 1e-11);
        }
    }
}
