//! Gauss–Legendre rules.

use crate::real::Real;

/// Nodes and weights of the `k`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre<T: Real>(k: usize) -> (Vec<T>, Vec<T>) {
    let mut nodes = vec![T::zero(); k];
    let mut weights = vec![T::zero(); k];
    let kf = k as f64;
    for i in 0..k.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (kf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(k, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(k, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = T::of(-x);
        nodes[k - 1 - i] = T::of(x);
        weights[i] = T::of(w);
        weights[k - 1 - i] = T::of(w);
    }
    (nodes, weights)
}

/// `(P_k(x), P_k'(x))` by the three-term recurrence.
fn legendre(k: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if k == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=k {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = k as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss–Legendre integral of `f` over `[a, b]`.
pub fn integrate<T: Real>(f: impl Fn(T) -> T, a: T, b: T, panels: usize, order: usize) -> T {
    let (x, w) = gauss_legendre::<T>(order);
    let panels = panels.max(1);
    let h = (b - a) / T::of_usize(panels);
    let half = h / T::of(2.0);
    (0..panels)
        .map(|i| {
            let mid = a + h * (T::of_usize(i) + T::of(0.5));
            x.iter()
                .zip(&w)
                .map(|(&xi, &wi)| wi * f(mid + half * xi))
                .sum::<T>()
                * half
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre::<f64>(5);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        for deg in 0..10 {
            let q: f64 = x.iter().zip(&w).map(|(&a, &b)| b * a.powi(deg)).sum();
            let exact = if deg % 2 == 1 {
                0.0
            } else {
                2.0 / (deg as f64 + 1.0)
            };
            assert!((q - exact).abs() < 1e-14, "deg {deg}");
        }
    }

    #[test]
    fn nodes_sorted_and_symmetric() {
        for k in [1, 2, 7, 20, 64] {
            let (x, _) = gauss_legendre::<f64>(k);
            assert!(x.windows(2).all(|p| p[0] < p[1]));
            for i in 0..k {
                assert!((x[i] + x[k - 1 - i]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn composite_smooth_integral() {
        let v = integrate(|t: f64| t.exp(), 0.0, 3.0, 4, 12);
        assert!((v - (3.0f64.exp() - 1.0)).abs() < 1e-12);
        let s = integrate(|t: f32| t.sin(), 0.0, std::f32::consts::PI, 2, 8);
        assert!((s - 2.0).abs() < 1e-5);
    }
}
