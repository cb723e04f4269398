//! Polynomials of bounded degree, their boundary `L^p` means and discrete
//! sampling means over a node set.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::FftPlanner;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_exponent, Error, Result};
use crate::nodes::NodeSet;
use crate::real::{compensated_sum, Real};

/// Default ratio `M / (n + 1)` for boundary quadrature.
pub const DEFAULT_OVERSAMPLING: usize = 32;
/// Relative agreement required between the `M` and `2M` rules.
pub const ADAPTIVE_RTOL: f64 = 1e-8;
/// Largest grid the adaptive rule will try.
pub const MAX_GRID: usize = 1 << 20;

/// `P(z) = Σ c_k z^k`; the degree bound is `coeffs.len() − 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> Polynomial<T> {
    pub fn new(coeffs: Vec<Complex<T>>) -> Self {
        if coeffs.is_empty() {
            return Polynomial::zero(0);
        }
        Polynomial { coeffs }
    }

    pub fn from_real(coeffs: &[T]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| Complex::new(c, T::zero())).collect())
    }

    pub fn zero(n: usize) -> Self {
        Polynomial {
            coeffs: vec![Complex::new(T::zero(), T::zero()); n + 1],
        }
    }

    /// `z^k` with degree bound `n`.
    pub fn monomial(n: usize, k: usize) -> Self {
        assert!(k <= n, "monomial degree {k} exceeds bound {n}");
        let mut p = Polynomial::zero(n);
        p.coeffs[k] = Complex::new(T::one(), T::zero());
        p
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Index of the highest nonzero coefficient (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| c.re != T::zero() || c.im != T::zero())
            .unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex<T>> {
        self.coeffs
    }

    /// `Σ |c_k|²`, equal to the boundary mean of `|P|²`.
    pub fn parseval_norm_sq(&self) -> T {
        compensated_sum(self.coeffs.iter().map(|c| c.norm_sqr()))
    }

    pub fn scaled(&self, s: T) -> Self {
        Polynomial::new(self.coeffs.iter().map(|c| c * s).collect())
    }
}

impl<T: Real + Serialize> Serialize for Polynomial<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[T; 2]> = self.coeffs.iter().map(|c| [c.re, c.im]).collect();
        pairs.serialize(s)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for Polynomial<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[T; 2]>::deserialize(d)?;
        Ok(Polynomial::new(
            pairs
                .into_iter()
                .map(|[re, im]| Complex::new(re, im))
                .collect(),
        ))
    }
}

/// Equispaced boundary grid `θ_m = 2πm/M`, `m = 0..M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircleGrid {
    m: usize,
}

impl CircleGrid {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::param("M", "grid needs at least one point"));
        }
        Ok(CircleGrid { m })
    }

    /// `M = factor · (n + 1)`.
    pub fn oversampled(n: usize, factor: usize) -> Self {
        CircleGrid {
            m: factor.max(1) * (n + 1),
        }
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing<T: Real>(&self) -> T {
        T::two_pi() / T::of_usize(self.m)
    }

    pub fn angle<T: Real>(&self, i: usize) -> T {
        T::two_pi() * T::of_usize(i) / T::of_usize(self.m)
    }

    pub fn angles<T: Real>(&self) -> Vec<T> {
        (0..self.m).map(|i| self.angle(i)).collect()
    }

    /// `exp(iθ_m)` for every grid angle.
    pub fn unit_points<T: Real>(&self) -> Vec<Complex<T>> {
        (0..self.m)
            .map(|i| Complex::from_polar(T::one(), self.angle(i)))
            .collect()
    }
}

/// `P(e^{iθ})` by Horner's scheme.
pub fn eval<T: Real>(poly: &Polynomial<T>, angle: T) -> Complex<T> {
    eval_at(poly, Complex::from_polar(T::one(), angle))
}

pub(crate) fn eval_at<T: Real>(poly: &Polynomial<T>, z: Complex<T>) -> Complex<T> {
    poly.coeffs
        .iter()
        .rev()
        .fold(Complex::new(T::zero(), T::zero()), |acc, &c| acc * z + c)
}

/// `P(e^{iθ_m})` on every grid point via one inverse FFT.
///
/// Coefficients beyond `M` alias onto `k mod M`, which is exact on the grid.
pub fn eval_grid<T: Real>(poly: &Polynomial<T>, grid: &CircleGrid) -> Vec<Complex<T>> {
    let m = grid.len();
    let mut buf = vec![Complex::new(T::zero(), T::zero()); m];
    for (k, &c) in poly.coeffs.iter().enumerate() {
        buf[k % m] += c;
    }
    FftPlanner::<T>::new().plan_fft_inverse(m).process(&mut buf);
    buf
}

/// `|w|^p` computed from `|w|²` to avoid a square root.
#[inline]
pub(crate) fn abs_pow<T: Real>(w: Complex<T>, p: T) -> T {
    let s = w.norm_sqr();
    let half = p / T::of(2.0);
    if half == T::one() {
        s
    } else if half.fract() == T::zero() && half < T::of(64.0) {
        s.powi(half.to_i32().unwrap_or(1))
    } else {
        s.powf(half)
    }
}

pub(crate) fn power_mean<T: Real>(values: &[Complex<T>], p: T) -> T {
    compensated_sum(values.iter().map(|&w| abs_pow(w, p))) / T::of_usize(values.len())
}

/// Rectangle-rule value of `∫ |P(e^{iθ})|^p dθ/2π` on `grid` (no `p`-th root).
pub fn circle_norm<T: Real>(poly: &Polynomial<T>, p: T, grid: &CircleGrid) -> Result<T> {
    check_exponent(p.to_f64_lossy())?;
    let required = 2 * poly.degree_bound() + 2;
    if grid.len() < required {
        return Err(Error::GridTooCoarse {
            m: grid.len(),
            required,
        });
    }
    Ok(power_mean(&eval_grid(poly, grid), p))
}

/// Boundary mean with a grid-doubling convergence check.
///
/// Starts at `oversampling · (n+1)` points and doubles until the `M` and
/// `2M` rules agree to [`ADAPTIVE_RTOL`] or `2M` would exceed [`MAX_GRID`].
/// Returns the value and the finest grid size used.
pub fn circle_norm_adaptive<T: Real>(
    poly: &Polynomial<T>,
    p: T,
    oversampling: usize,
) -> Result<(T, usize)> {
    let n = poly.degree_bound();
    let mut m = (oversampling.max(1) * (n + 1)).max(2 * n + 2);
    let mut prev = circle_norm(poly, p, &CircleGrid::new(m)?)?;
    while 2 * m <= MAX_GRID {
        let next = circle_norm(poly, p, &CircleGrid::new(2 * m)?)?;
        m *= 2;
        let scale = next.abs().max(T::min_positive_value());
        if (next - prev).abs() / scale < T::of(ADAPTIVE_RTOL) {
            return Ok((next, m));
        }
        prev = next;
    }
    Ok((prev, m))
}

/// `(1/(n+1)) Σ_j |P(z_{nj})|^p`.
pub fn sample_mean<T: Real>(poly: &Polynomial<T>, nodes: &NodeSet<T>, p: T) -> Result<T> {
    check_exponent(p.to_f64_lossy())?;
    if poly.degree() > nodes.degree() {
        return Err(Error::DegreeMismatch {
            degree: poly.degree(),
            nodes_degree: nodes.degree(),
        });
    }
    let values: Vec<Complex<T>> = nodes
        .points()
        .into_iter()
        .map(|z| eval_at(poly, z))
        .collect();
    Ok(power_mean(&values, p))
}

/// Standard complex Gaussian coefficients normalized to unit Parseval norm,
/// deterministic in `(n, seed)`.
pub fn random_poly<T: Real>(n: usize, seed: u64) -> Polynomial<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(n as u64);
    let raw: Vec<(f64, f64)> = (0..=n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            (re, im)
        })
        .collect();
    let norm = raw.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
    Polynomial::new(
        raw.into_iter()
            .map(|(a, b)| Complex::new(T::of(a / norm), T::of(b / norm)))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nodes::{perturbed_family, roots_of_unity, PerturbationSchedule};
    use std::f64::consts::PI;

    fn one_plus_z() -> Polynomial<f64> {
        Polynomial::from_real(&[1.0, 1.0])
    }

    #[test]
    fn eval_examples() {
        assert!((eval(&one_plus_z(), 0.0) - Complex::new(2.0, 0.0)).norm() < 1e-15);
        let zn = Polynomial::<f64>::monomial(5, 5);
        let v = eval(&zn, 0.3);
        assert!((v - Complex::from_polar(1.0, 1.5)).norm() < 1e-14);
        assert!((v.norm() - 1.0).abs() < 1e-14);
        let sq = Polynomial::from_real(&[1.0, 2.0, 1.0]);
        assert!(eval(&sq, PI).norm() < 1e-15);
    }

    #[test]
    fn fft_grid_eval_matches_horner() {
        let p = random_poly::<f64>(12, 4);
        for m in [13usize, 26, 100] {
            let grid = CircleGrid::new(m).unwrap();
            let fast = eval_grid(&p, &grid);
            for (i, v) in fast.iter().enumerate() {
                let slow = eval(&p, grid.angle(i));
                assert!((v - slow).norm() < 1e-13, "m={m} i={i}");
            }
        }
        // Aliasing on a grid smaller than the degree.
        let grid = CircleGrid::new(5).unwrap();
        for (i, v) in eval_grid(&p, &grid).iter().enumerate() {
            assert!((v - eval(&p, grid.angle(i))).norm() < 1e-13);
        }
    }

    #[test]
    fn circle_norm_examples() {
        let grid = CircleGrid::oversampled(6, DEFAULT_OVERSAMPLING);
        for p in [1.5, 2.0, 3.7] {
            let zk = Polynomial::<f64>::monomial(6, 4);
            assert!((circle_norm(&zk, p, &grid).unwrap() - 1.0).abs() < 1e-13);
        }
        let g = CircleGrid::oversampled(1, DEFAULT_OVERSAMPLING);
        assert!((circle_norm(&one_plus_z(), 2.0, &g).unwrap() - 2.0).abs() < 1e-14);
        // (2 + 2cos θ)² = 4 + 8cos θ + 4cos²θ has mean 4 + 2 = 6.
        assert!((circle_norm(&one_plus_z(), 4.0, &g).unwrap() - 6.0).abs() < 1e-13);
    }

    #[test]
    fn circle_norm_rejects_bad_input() {
        let p = random_poly::<f64>(4, 1);
        assert!(matches!(
            circle_norm(&p, 2.0, &CircleGrid::new(9).unwrap()),
            Err(Error::GridTooCoarse { m: 9, required: 10 })
        ));
        assert!(circle_norm(&p, 1.0, &CircleGrid::new(64).unwrap()).is_err());
        assert!(circle_norm(&p, f64::INFINITY, &CircleGrid::new(64).unwrap()).is_err());
    }

    #[test]
    fn adaptive_norm_converges_for_non_even_p() {
        let p = random_poly::<f64>(8, 3);
        let (v, m) = circle_norm_adaptive(&p, 3.0, DEFAULT_OVERSAMPLING).unwrap();
        let fine = circle_norm(&p, 3.0, &CircleGrid::new(1 << 16).unwrap()).unwrap();
        assert!(m >= 2 * 32 * 9);
        assert!((v - fine).abs() / fine < 1e-8);
    }

    #[test]
    fn sample_mean_examples() {
        for n in [1usize, 3, 10] {
            let r = roots_of_unity::<f64>(n);
            assert!((sample_mean(&one_plus_z(), &r, 2.0).unwrap() - 2.0).abs() < 1e-13);
            if n >= 3 {
                assert!((sample_mean(&one_plus_z(), &r, 4.0).unwrap() - 6.0).abs() < 1e-12);
            }
        }
        let z = perturbed_family::<f64>(7, &PerturbationSchedule::random(0.3, 2).unwrap()).unwrap();
        for p in [1.2, 2.0, 5.0] {
            let m = sample_mean(&Polynomial::monomial(7, 3), &z, p).unwrap();
            assert!((m - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn sample_mean_degree_mismatch() {
        let r = roots_of_unity::<f64>(2);
        let p = Polynomial::<f64>::monomial(3, 3);
        assert!(matches!(
            sample_mean(&p, &r, 2.0),
            Err(Error::DegreeMismatch {
                degree: 3,
                nodes_degree: 2
            })
        ));
        // Degree bound may exceed the nodes' degree if the top coefficients vanish.
        let padded = Polynomial::<f64>::monomial(5, 1);
        assert!(sample_mean(&padded, &r, 2.0).is_ok());
    }

    #[test]
    fn random_poly_properties() {
        let a = random_poly::<f64>(4, 1);
        assert_eq!(a, random_poly::<f64>(4, 1));
        assert_ne!(a, random_poly::<f64>(4, 2));
        assert_eq!(a.degree_bound(), 4);
        assert!((a.parseval_norm_sq() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn json_interleaved_pairs() {
        let p = Polynomial::new(vec![Complex::new(1.0, -2.0), Complex::new(0.5, 0.0)]);
        let js = serde_json::to_value(&p).unwrap();
        assert_eq!(js, serde_json::json!([[1.0, -2.0], [0.5, 0.0]]));
        let back: Polynomial<f64> = serde_json::from_value(js).unwrap();
        assert_eq!(back, p);
    }
}
